#pragma once

#include <vector>

#include "ellops/types.hpp"

namespace ellops {

// Multiplicative theta function: prod_{j=0..N} (1 - p^j z)(1 - p^{j+1}/z).
// Truncation N defaults to the context rule for |p|; pass terms > 0 to pin it.
cplx theta(cplx z, cplx p, int terms = 0);

// The bracket function [x] for the chosen variant:
//   elliptic       e^{-i pi x} theta(e^{2 pi i x}; p)
//   trigonometric  -2i sin(pi x / omega)
//   hyperbolic     sinh(pi x / omega)
//   rational       x
cplx bracket(cplx x, const BracketContext& ctx);

// Shifted factorial [x]_k = [x][x+step]...[x+(k-1)step]; for k < 0 the
// reciprocal 1/([x-|k|step]...[x-step]). pole_floor > 0 turns a small
// denominator into a pole_error carrying the factor index.
cplx shifted_factorial(cplx x, int k, cplx step, const BracketContext& ctx,
                       double pole_floor = 0.0);

// Theta shifted factorial (a;q,p)_k = theta(a;p) theta(aq;p) ... theta(aq^{k-1};p).
cplx theta_factorial(cplx a, cplx q, cplx p, int k, const BracketContext& ctx);

// Ruijsenaars' elliptic gamma function, truncated double product
// prod_{j,k>=0} (1 - p^{j+1}q^{k+1}/z)/(1 - p^j q^k z). Requires |p|,|q| < 1.
cplx elliptic_gamma(cplx z, cplx p, cplx q, int terms = 0);

// Meromorphic solution of G(x + step) = [x] G(x) for the context's bracket.
// The elliptic-gamma branch is chosen from |e^{2 pi i step}| vs 1; modulus
// one is an unsupported regime and raises unsupported_regime_error.
cplx bracket_gamma(cplx x, cplx step, const ModelParams& params);

// G_delta(x) = bracket_gamma(x, params.delta).
cplx G_delta(cplx x, const ModelParams& params);

struct GenericityReport {
    int n_max = 0;
    double floor = 0.0;
    double min_delta = 0.0;  // min over 1<=n<=n_max of |[n delta]|
    double min_kappa = 0.0;
    int argmin_delta = 0;
    int argmin_kappa = 0;
    bool pass = true;
};

// Reports min_{1<=n<=n_max} |[n delta]| and |[n kappa]| against the eta floor.
GenericityReport check_genericity(const ModelParams& params, int n_max);

// Throws genericity_error when the gate fails (unless params.allow_resonant).
void require_genericity(const ModelParams& params, int n_max);

// Complex gamma function (Lanczos); used by the rational-variant bracket_gamma.
cplx complex_gamma(cplx z);

}  // namespace ellops
