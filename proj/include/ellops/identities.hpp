#pragma once

#include <span>
#include <vector>

#include "ellops/operators.hpp"

namespace ellops {

// Relative residual |L - R| / (|L| + |R| + 1).
double sym_residual(cplx lhs, cplx rhs);

// ---- source identities (explicit-input evaluators) ----

// Ruijsenaars source identity: both subset sums (order k and n-k).
std::pair<cplx, cplx> rsi_sides(std::span<const cplx> z, cplx a, cplx b, int k,
                                const ModelParams& params);
double rsi_residual(std::span<const cplx> z, cplx a, cplx b, int k,
                    const ModelParams& params);

// Noumi-Sano source identity: signed subset sum (should vanish) and the
// largest term magnitude used as scale.
std::pair<cplx, double> nssi_sum(std::span<const cplx> z, std::span<const cplx> w,
                                 cplx a, const ModelParams& params);
double nssi_residual(std::span<const cplx> z, std::span<const cplx> w, cplx a,
                     const ModelParams& params);

// Kajihara-Noumi source identity, symmetric in z <-> w.
std::pair<cplx, cplx> ksni_sides(std::span<const cplx> z, std::span<const cplx> w,
                                 cplx a, int k, const ModelParams& params);
double ksni_residual(std::span<const cplx> z, std::span<const cplx> w, cplx a,
                     int k, const ModelParams& params);

// Frobenius determinant evaluation: n x n determinant vs closed product.
std::pair<cplx, cplx> frobenius_sides(cplx lambda, std::span<const cplx> z,
                                      std::span<const cplx> w,
                                      const ModelParams& params);
double frobenius_residual(cplx lambda, std::span<const cplx> z,
                          std::span<const cplx> w, const ModelParams& params);

// ---- transformation identities ----

// The quadruple-product sum S_k; the identity is S_k = S_{|lambda|+r-k}.
cplx csp_sum(int k, const std::vector<int>& lambda, std::span<const cplx> x,
             std::span<const cplx> y, const ModelParams& params);
double csp_residual(const std::vector<int>& lambda, std::span<const cplx> x,
                    std::span<const cplx> y, int k, const ModelParams& params);

// T_k(x;y;z); the identity is T_k(x;y;z) = T_k(z;yhat;x), yhat_j = -y_j-delta,
// with no integrality condition on x + z.
cplx tt_sum(int k, std::span<const cplx> x, std::span<const cplx> y,
            std::span<const cplx> z, const ModelParams& params);
double tt_residual(std::span<const cplx> x, std::span<const cplx> y,
                   std::span<const cplx> z, int k, const ModelParams& params);

// r = 0 reduction of T_k, symmetric in x <-> z.
cplx lss_sum(int k, std::span<const cplx> x, std::span<const cplx> z,
             const ModelParams& params);
double lss_residual(std::span<const cplx> x, std::span<const cplx> z, int k,
                    const ModelParams& params);

// Kajihara-type transformation under the balancing |x|+|a|+s delta = |X|+r delta.
// The RHS is the same sum with (x,y) <-> (X,Y) and a -> -a.
cplx ktp_sum(int k, std::span<const cplx> x, std::span<const cplx> y,
             std::span<const cplx> X, std::span<const cplx> Y,
             std::span<const cplx> a, const ModelParams& params);
// Solves for the last entry of a so the balancing holds exactly.
std::vector<cplx> ktp_balance(std::span<const cplx> x, std::span<const cplx> X,
                              int r, int s, std::vector<cplx> a,
                              const ModelParams& params);
double ktp_residual(std::span<const cplx> x, std::span<const cplx> y,
                    std::span<const cplx> X, std::span<const cplx> Y,
                    std::span<const cplx> a, int k, const ModelParams& params);

// ---- operator-level identities ----

// Weighted sum over k+l=K of [k kappa + l delta] D^{(k)} H^{(l)}; identically zero.
FormalOperator wronski_operator(int m, int r, int K, const ModelParams& params);
ResidualReport wronski_residual(int m, int r, int K, const ModelParams& params,
                                const SamplerConfig& cfg);

// H^{(l)} rebuilt from the D family by the Wronski recursion, and the inverse
// (delta <-> -kappa) relation producing D^{(l)} from the H family.
FormalOperator h_from_d_recursion(int m, int r, int l, const ModelParams& params);
FormalOperator d_from_h_recursion(int m, int r, int l, const ModelParams& params);
ResidualReport check_h_via_determinant(int m, int r, int l,
                                       const ModelParams& params,
                                       const SamplerConfig& cfg);
ResidualReport check_d_via_determinant(int m, int r, int l,
                                       const ModelParams& params,
                                       const SamplerConfig& cfg);

// ---- kernel functions ----

// Balancing condition (m-n) kappa = (r-s) delta, enforced to 1e-12.
bool kernel_balanced(int m, int r, int n, int s, const ModelParams& params);
void require_kernel_balancing(int m, int r, int n, int s,
                              const ModelParams& params);
// kappa forced by the balancing condition when m != n.
cplx solve_balancing_kappa(int m, int r, int n, int s, cplx delta);

// Additive kernel function Phi: product of gamma-quotients and bracket
// cross factors intertwining (x;y) with (X;Y).
cplx kernel_phi(std::span<const cplx> x, std::span<const cplx> y,
                std::span<const cplx> X, std::span<const cplx> Y,
                const ModelParams& params);

// Pure-bracket covariance quotient Phi(x + delta mu; y - kappa I; X; Y)/Phi.
cplx kernel_phi_shift_ratio(const std::vector<int>& mu, const std::vector<int>& I,
                            std::span<const cplx> x, std::span<const cplx> y,
                            std::span<const cplx> X, std::span<const cplx> Y,
                            const ModelParams& params);

// Multiplicative kernel with branch-dispatched elliptic gammas; requires
// t^{m-n} = q^{r-s}.
cplx bold_kernel_phi(std::span<const cplx> z, std::span<const cplx> w,
                     std::span<const cplx> Z, std::span<const cplx> W,
                     const ModelParams& params);

// Branch-dispatched gamma: elliptic_gamma for |s|<1, reciprocal form otherwise.
cplx gamma_branch(cplx x, cplx p, cplx s, const ModelParams& params);

double kernel_identity_residual_at(const EvaluationPoint& pt, int m, int r,
                                   int n, int s, int k,
                                   const ModelParams& params);
double bold_kernel_identity_residual_at(const EvaluationPoint& pt, int m, int r,
                                        int n, int s, int k,
                                        const ModelParams& params);

ResidualReport check_kernel_identity(int m, int r, int n, int s, int k,
                                     const ModelParams& params,
                                     const SamplerConfig& cfg);
ResidualReport check_bold_kernel_identity(int m, int r, int n, int s, int k,
                                          const ModelParams& params,
                                          const SamplerConfig& cfg);

// ---- sampled report wrappers for the scalar identities ----

ResidualReport check_rsi(int n, int k, const ModelParams& params,
                         const SamplerConfig& cfg);
ResidualReport check_nssi(int n, const ModelParams& params,
                          const SamplerConfig& cfg);
ResidualReport check_ksni(int n, int k, const ModelParams& params,
                          const SamplerConfig& cfg);
ResidualReport check_frobenius(int n, const ModelParams& params,
                               const SamplerConfig& cfg);
ResidualReport check_csp(const std::vector<int>& lambda, int r, int k,
                         const ModelParams& params, const SamplerConfig& cfg);
ResidualReport check_tt(int m, int r, int k, const ModelParams& params,
                        const SamplerConfig& cfg);
ResidualReport check_lss(int m, int k, const ModelParams& params,
                         const SamplerConfig& cfg);
ResidualReport check_ktp(int m, int r, int n, int s, int k,
                         const ModelParams& params, const SamplerConfig& cfg);

}  // namespace ellops
