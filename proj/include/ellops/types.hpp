#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ellops {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr cplx kI{0.0, 1.0};

inline bool is_finite(cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Parameters outside the function's domain (|p| >= 1, nonfinite input, ...).
struct parameter_domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Regimes the library deliberately does not support (|q| = 1).
struct unsupported_regime_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Genericity gate [n*delta] != 0, [n*kappa] != 0 violated.
struct genericity_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A denominator factor fell below the pole floor. Carries which factor
// and which index so callers (and the point sampler) can act on it.
struct pole_error : std::runtime_error {
    std::string factor;
    int index;
    pole_error(std::string factor_, int index_, double magnitude)
        : std::runtime_error("pole in factor '" + factor_ + "' at index " +
                             std::to_string(index_) + " (|den| = " +
                             std::to_string(magnitude) + ")"),
          factor(std::move(factor_)),
          index(index_) {}
};

// The pole-avoiding sampler ran out of retries.
struct sampler_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct arity_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct balancing_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class BracketVariant { elliptic, trigonometric, hyperbolic, rational };

std::string to_string(BracketVariant v);

// Which solution of the three-term identity the bracket function [x] uses.
// Elliptic fixes the period-1 theta normalization [x] = e^{-i pi x} theta(e^{2 pi i x}; p);
// the trigonometric variant at omega = 1 equals the elliptic one at p = 0 exactly.
struct BracketContext {
    BracketVariant variant = BracketVariant::elliptic;
    cplx p{0.0, 0.0};
    cplx omega{1.0, 0.0};
    int truncation_terms = 0;  // elliptic only; 0 means derive from |p|

    static BracketContext elliptic(cplx p, int truncation_terms = 0);
    static BracketContext trigonometric(cplx omega = cplx{1.0, 0.0});
    static BracketContext hyperbolic(cplx omega = cplx{1.0, 0.0});
    static BracketContext rational();

    // Resolved theta truncation: ceil(log(eps)/log|p|) + 8 unless pinned.
    int theta_terms() const;
    BracketContext with_truncation(int terms) const;

    bool operator==(const BracketContext&) const = default;
};

// Model parameters (delta, kappa) with the bracket context and the two
// numerical floors used throughout: pole_floor (rho) guards coefficient
// denominators, genericity_floor (eta) gates |[n delta]|, |[n kappa]|.
struct ModelParams {
    cplx delta{0.0, 0.0};
    cplx kappa{0.0, 0.0};
    BracketContext context;
    double pole_floor = 1e-6;
    double genericity_floor = 1e-8;
    bool allow_resonant = false;  // relax the genericity gate (kappa/delta rational)

    cplx q() const { return std::exp(cplx(0.0, 2.0 * kPi) * delta); }
    cplx t() const { return std::exp(cplx(0.0, 2.0 * kPi) * kappa); }

    ModelParams with_delta(cplx d) const {
        ModelParams out = *this;
        out.delta = d;
        return out;
    }
    ModelParams with_kappa(cplx k) const {
        ModelParams out = *this;
        out.kappa = k;
        return out;
    }

    bool operator==(const ModelParams&) const = default;
};

}  // namespace ellops
