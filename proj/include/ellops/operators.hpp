#pragma once

#include <span>
#include <vector>

#include "ellops/shift_algebra.hpp"
#include "ellops/special.hpp"

namespace ellops {

enum class Family {
    H,
    D,
    hatH,
    hatD,
    ruijsenaars,
    noumi_sano,
    bold_H,
    bold_D,
    bold_hatH,
    bold_hatD
};

std::string to_string(Family f);

// ---- enumeration helpers (cached per (total, parts) / (n, k)) ----

// All vectors in Z_{>=0}^parts with given sum, lexicographic.
const std::vector<std::vector<int>>& compositions(int total, int parts);
// All 0/1 indicator vectors of subsets of <n> with |I| = k, bitmask-ascending.
const std::vector<std::vector<int>>& subsets_of_size(int n, int k);
long long binomial(int n, int k);
// Number of (mu, I) with |mu| + |I| = k for arity (m, r).
long long h_term_count(int m, int r, int k);

// ---- scalar coefficient functions (exposed for oracles and tests) ----

// The defining coefficient C_{mu,I}(x; y; delta, kappa) of the deformed
// operator family, including the sign (-1)^{|I|}.
cplx coeff_C(const std::vector<int>& mu, const std::vector<int>& I,
             std::span<const cplx> x, std::span<const cplx> y, cplx delta,
             cplx kappa, const ModelParams& params);

// Equivalent recoding via the elementary identity that removes the
// difference-product over i<j in favor of [x_i-x_j-mu_j delta]_{mu_i}.
cplx coeff_C_rewritten(const std::vector<int>& mu, const std::vector<int>& I,
                       std::span<const cplx> x, std::span<const cplx> y,
                       cplx delta, cplx kappa, const ModelParams& params);

// Ruijsenaars coefficient prod_{i in I, j notin I} [x_i-x_j+kappa]/[x_i-x_j].
cplx ruijsenaars_coeff(const std::vector<int>& I, std::span<const cplx> x,
                       cplx kappa, const ModelParams& params);

// Noumi-Sano coefficient (independent coding of the r = 0 case).
cplx noumi_sano_coeff(const std::vector<int>& mu, std::span<const cplx> x,
                      cplx delta, cplx kappa, const ModelParams& params);

// Multiplicative coefficient of bold H (theta quotients, (a;q,p)_k factors,
// explicit q-power prefactors), acting by T_{q,z}^mu T_{t^{-1},w}^I.
cplx bold_coeff_H(const std::vector<int>& mu, const std::vector<int>& I,
                  std::span<const cplx> z, std::span<const cplx> w, cplx q,
                  cplx t, const ModelParams& params);

// ---- operator family constructors ----

FormalOperator build_H(int m, int r, int k, const ModelParams& params);
FormalOperator build_D(int m, int r, int k, const ModelParams& params);
FormalOperator build_hatH(int m, int r, int k, const ModelParams& params);
FormalOperator build_hatD(int m, int r, int k, const ModelParams& params);

// Classical families on n variables (arity (n, 0)). Ruijsenaars k > n yields
// a zero operator with out_of_range set.
FormalOperator build_ruijsenaars(int n, int k, const ModelParams& params);
FormalOperator build_noumi_sano(int n, int k, const ModelParams& params);

// Multiplicative (bold) families on (z, w) with multiplicative shift keys.
FormalOperator build_bold(Family family, int m, int r, int k,
                          const ModelParams& params);

FormalOperator build_family(Family family, int m, int r, int k,
                            const ModelParams& params);

// Composition power product (F^{(1)})^{lambda_1} (F^{(2)})^{lambda_2} ...,
// composed left to right, for the family at arity (m, r).
FormalOperator build_monomial(const std::vector<int>& lambda, Family family,
                              int m, int r, const ModelParams& params);

// The kappa = delta gauge factor F(x;y) and the factorized free-shift form
// F^{-1} (sum (-1)^{|I|} T_x^{delta mu} T_y^{-delta I}) F of H^{(k)}|_{kappa=delta}.
cplx kappa_eq_delta_gauge(std::span<const cplx> x, std::span<const cplx> y,
                          const ModelParams& params);
FormalOperator build_kappa_eq_delta_factorized(int m, int r, int k,
                                               const ModelParams& params);

// Exponential prefactor linking a bold family to its additive counterpart
// under z = e^{2 pi i x}, w = e^{2 pi i y}.
cplx bold_prefactor(Family bold_family, int m, int r, int k,
                    const ModelParams& params);

}  // namespace ellops
