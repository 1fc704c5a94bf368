#include "ellops/special.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace ellops {

std::string to_string(BracketVariant v) {
    switch (v) {
        case BracketVariant::elliptic: return "elliptic";
        case BracketVariant::trigonometric: return "trigonometric";
        case BracketVariant::hyperbolic: return "hyperbolic";
        case BracketVariant::rational: return "rational";
    }
    return "?";
}

BracketContext BracketContext::elliptic(cplx p, int truncation_terms) {
    if (!is_finite(p) || std::abs(p) >= 1.0)
        throw parameter_domain_error("elliptic nome requires |p| < 1");
    BracketContext ctx;
    ctx.variant = BracketVariant::elliptic;
    ctx.p = p;
    ctx.truncation_terms = truncation_terms;
    return ctx;
}

BracketContext BracketContext::trigonometric(cplx omega) {
    if (!is_finite(omega) || omega == cplx(0.0))
        throw parameter_domain_error("trigonometric variant requires omega != 0");
    BracketContext ctx;
    ctx.variant = BracketVariant::trigonometric;
    ctx.omega = omega;
    return ctx;
}

BracketContext BracketContext::hyperbolic(cplx omega) {
    if (!is_finite(omega) || omega == cplx(0.0))
        throw parameter_domain_error("hyperbolic variant requires omega != 0");
    BracketContext ctx;
    ctx.variant = BracketVariant::hyperbolic;
    ctx.omega = omega;
    return ctx;
}

BracketContext BracketContext::rational() {
    BracketContext ctx;
    ctx.variant = BracketVariant::rational;
    return ctx;
}

int BracketContext::theta_terms() const {
    if (truncation_terms > 0) return truncation_terms;
    double ap = std::abs(p);
    if (ap == 0.0) return 1;
    double eps = std::numeric_limits<double>::epsilon();
    int n = static_cast<int>(std::ceil(std::log(eps) / std::log(ap)));
    return std::max(n, 1) + 8;
}

BracketContext BracketContext::with_truncation(int terms) const {
    BracketContext out = *this;
    out.truncation_terms = terms;
    return out;
}

cplx theta(cplx z, cplx p, int terms) {
    if (!is_finite(z) || !is_finite(p))
        throw parameter_domain_error("theta: nonfinite input");
    if (std::abs(p) >= 1.0)
        throw parameter_domain_error("theta: requires |p| < 1");
    if (z == cplx(0.0))
        throw parameter_domain_error("theta: z must be nonzero");
    if (terms <= 0) {
        BracketContext tmp;
        tmp.p = p;
        terms = tmp.theta_terms();
    }
    cplx acc{1.0, 0.0};
    cplx zinv = 1.0 / z;
    cplx ppow{1.0, 0.0};  // p^j, so 0^0 = 1 at j = 0
    for (int j = 0; j <= terms; ++j) {
        acc *= (1.0 - ppow * z) * (1.0 - ppow * p * zinv);
        ppow *= p;
        if (ppow == cplx(0.0)) break;
    }
    return acc;
}

cplx bracket(cplx x, const BracketContext& ctx) {
    if (!is_finite(x)) throw parameter_domain_error("bracket: nonfinite input");
    switch (ctx.variant) {
        case BracketVariant::elliptic: {
            cplx z = std::exp(cplx(0.0, 2.0 * kPi) * x);
            return std::exp(cplx(0.0, -kPi) * x) * theta(z, ctx.p, ctx.theta_terms());
        }
        case BracketVariant::trigonometric:
            return -2.0 * kI * std::sin(kPi * x / ctx.omega);
        case BracketVariant::hyperbolic:
            return std::sinh(kPi * x / ctx.omega);
        case BracketVariant::rational:
            return x;
    }
    throw parameter_domain_error("bracket: unknown variant");
}

cplx shifted_factorial(cplx x, int k, cplx step, const BracketContext& ctx,
                       double pole_floor) {
    if (!is_finite(x) || !is_finite(step))
        throw parameter_domain_error("shifted_factorial: nonfinite input");
    if (k >= 0) {
        cplx acc{1.0, 0.0};
        for (int j = 0; j < k; ++j) acc *= bracket(x + double(j) * step, ctx);
        return acc;
    }
    cplx acc{1.0, 0.0};
    for (int j = 1; j <= -k; ++j) {
        cplx den = bracket(x - double(j) * step, ctx);
        double mag = std::abs(den);
        if (mag <= pole_floor || mag < 1e-300)
            throw pole_error("shifted_factorial denominator [x - j*step]", j, mag);
        acc *= den;
    }
    return 1.0 / acc;
}

cplx theta_factorial(cplx a, cplx q, cplx p, int k, const BracketContext& ctx) {
    cplx acc{1.0, 0.0};
    cplx arg = a;
    for (int j = 0; j < k; ++j) {
        acc *= theta(arg, p, ctx.theta_terms());
        arg *= q;
    }
    return acc;
}

cplx elliptic_gamma(cplx z, cplx p, cplx q, int terms) {
    if (!is_finite(z) || !is_finite(p) || !is_finite(q))
        throw parameter_domain_error("elliptic_gamma: nonfinite input");
    if (std::abs(p) >= 1.0 || std::abs(q) >= 1.0)
        throw parameter_domain_error(
            "elliptic_gamma: requires |p| < 1 and |q| < 1 (use the reciprocal branch otherwise)");
    if (z == cplx(0.0))
        throw parameter_domain_error("elliptic_gamma: z must be nonzero");
    BracketContext tp, tq;
    tp.p = p;
    tq.p = q;
    const int jmax = std::max(terms, tp.theta_terms());
    const int kmax = std::max(terms, tq.theta_terms());
    const double cut = 1e-18;
    cplx acc{1.0, 0.0};
    cplx pq = p * q;
    cplx ppow{1.0, 0.0};
    for (int j = 0; j <= jmax; ++j) {
        cplx t = ppow;  // p^j q^k
        for (int k = 0; k <= kmax; ++k) {
            cplx den = 1.0 - t * z;
            double mag = std::abs(den);
            if (mag < 1e-300)
                throw pole_error("elliptic_gamma denominator (1 - p^j q^k z)", j * (kmax + 1) + k, mag);
            acc *= (1.0 - pq * t / z) / den;
            t *= q;
            if (std::abs(t) < cut) break;
        }
        ppow *= p;
        if (std::abs(ppow) < cut) break;
    }
    return acc;
}

namespace {

// Standard-normalization solution for the period-1 bracket e^{-i pi u} theta(e^{2 pi i u}; p):
// prefactor e^{i pi u (s - u)/(2s)} times the elliptic-gamma branch picked by |e^{2 pi i s}|.
cplx gamma_solution_std(cplx u, cplx s, cplx p, int terms) {
    cplx qs = std::exp(cplx(0.0, 2.0 * kPi) * s);
    double aq = std::abs(qs);
    if (std::abs(aq - 1.0) < 1e-12)
        throw unsupported_regime_error(
            "bracket_gamma: |q| = 1 regime is not supported (step has real ratio)");
    cplx pref = std::exp(cplx(0.0, kPi) * u * (s - u) / (2.0 * s));
    cplx z = std::exp(cplx(0.0, 2.0 * kPi) * u);
    if (aq < 1.0) return pref * elliptic_gamma(z, p, qs, terms);
    return pref / elliptic_gamma(z / qs, p, 1.0 / qs, terms);
}

}  // namespace

cplx bracket_gamma(cplx x, cplx step, const ModelParams& params) {
    const BracketContext& ctx = params.context;
    if (!is_finite(x) || !is_finite(step) || step == cplx(0.0))
        throw parameter_domain_error("bracket_gamma: bad input");
    switch (ctx.variant) {
        case BracketVariant::elliptic:
            return gamma_solution_std(x, step, ctx.p, ctx.theta_terms());
        case BracketVariant::trigonometric:
            return gamma_solution_std(x / ctx.omega, step / ctx.omega, cplx(0.0), 0);
        case BracketVariant::hyperbolic: {
            // sinh(pi x/omega) = (1/2) * std-bracket(x/omega') with omega' = -i*omega;
            // the constant 1/2 is absorbed by 2^{-x/step}.
            cplx omega_prime = -kI * ctx.omega;
            cplx scale = std::exp(-(x / step) * std::log(2.0));
            return scale * gamma_solution_std(x / omega_prime, step / omega_prime, cplx(0.0), 0);
        }
        case BracketVariant::rational: {
            cplx u = x / step;
            return std::exp(u * std::log(step)) * complex_gamma(u);
        }
    }
    throw parameter_domain_error("bracket_gamma: unknown variant");
}

cplx G_delta(cplx x, const ModelParams& params) {
    return bracket_gamma(x, params.delta, params);
}

GenericityReport check_genericity(const ModelParams& params, int n_max) {
    GenericityReport rep;
    rep.n_max = n_max;
    rep.floor = params.genericity_floor;
    rep.min_delta = rep.min_kappa = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_max; ++n) {
        double bd = std::abs(bracket(double(n) * params.delta, params.context));
        double bk = std::abs(bracket(double(n) * params.kappa, params.context));
        if (bd < rep.min_delta) {
            rep.min_delta = bd;
            rep.argmin_delta = n;
        }
        if (bk < rep.min_kappa) {
            rep.min_kappa = bk;
            rep.argmin_kappa = n;
        }
    }
    if (n_max < 1) {
        rep.min_delta = rep.min_kappa = std::numeric_limits<double>::infinity();
        rep.pass = true;  // vacuous
        return rep;
    }
    rep.pass = rep.min_delta > rep.floor && rep.min_kappa > rep.floor;
    return rep;
}

void require_genericity(const ModelParams& params, int n_max) {
    if (params.allow_resonant) return;
    GenericityReport rep = check_genericity(params, n_max);
    if (!rep.pass)
        throw genericity_error(
            "genericity violated: min |[n delta]| = " + std::to_string(rep.min_delta) +
            " at n = " + std::to_string(rep.argmin_delta) +
            ", min |[n kappa]| = " + std::to_string(rep.min_kappa) +
            " at n = " + std::to_string(rep.argmin_kappa));
}

cplx complex_gamma(cplx z) {
    // Lanczos, g = 7, 9 terms.
    static const std::array<double, 9> c = {
        0.99999999999980993, 676.5203681218851, -1259.1392167224028,
        771.32342877765313, -176.61502916214059, 12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return kPi / (std::sin(kPi * z) * complex_gamma(1.0 - z));
    }
    cplx zz = z - 1.0;
    cplx x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (zz + double(i));
    cplx t = zz + 7.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, zz + 0.5) * std::exp(-t) * x;
}

}  // namespace ellops
