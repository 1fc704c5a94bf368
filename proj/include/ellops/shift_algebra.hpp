#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "ellops/report.hpp"
#include "ellops/types.hpp"

namespace ellops {

// Integer shift multi-index: mu over the x-slots in units of +delta, nu over
// the y-slots in units of -kappa. Negative entries belong to the hatted families.
struct ShiftKey {
    std::vector<int> mu;
    std::vector<int> nu;

    friend ShiftKey operator+(const ShiftKey& a, const ShiftKey& b);
    bool operator==(const ShiftKey&) const = default;
    auto operator<=>(const ShiftKey&) const = default;
};

ShiftKey zero_key(int m, int r);
ShiftKey unit_x_key(int m, int r, int i, int step = 1);
ShiftKey unit_y_key(int m, int r, int i, int step = 1);

// Complex vectors (x_1..x_m; y_1..y_r), with an optional second pair (X; Y)
// for kernel tests. Operators act on the primary pair only.
struct EvaluationPoint {
    std::vector<cplx> x;
    std::vector<cplx> y;
    std::vector<cplx> X;
    std::vector<cplx> Y;
};

using CoeffFn = std::function<cplx(const EvaluationPoint&)>;
using ScalarFn = std::function<cplx(const EvaluationPoint&)>;

// Additive: x_i += mu_i delta, y_j -= nu_j kappa.
// Multiplicative: x_i *= q^{mu_i}, y_j *= t^{-nu_j} (points hold z, w).
enum class ShiftMode { additive, multiplicative };

EvaluationPoint shifted(const EvaluationPoint& pt, const ShiftKey& key,
                        const ModelParams& params, ShiftMode mode);

// A finite formal sum of shift operators with function-valued coefficients.
// Coefficients are stored as lists of closures and summed on evaluation;
// there is no symbolic simplification, cancellation is observed numerically.
class FormalOperator {
  public:
    FormalOperator(int m, int r, ModelParams params,
                   ShiftMode mode = ShiftMode::additive)
        : m_(m), r_(r), params_(std::move(params)), mode_(mode) {}

    static FormalOperator identity(int m, int r, const ModelParams& params,
                                   ShiftMode mode = ShiftMode::additive);
    static FormalOperator zero(int m, int r, const ModelParams& params,
                               ShiftMode mode = ShiftMode::additive);

    int m() const { return m_; }
    int r() const { return r_; }
    const ModelParams& params() const { return params_; }
    ShiftMode mode() const { return mode_; }

    const std::map<ShiftKey, std::vector<CoeffFn>>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t term_count() const;

    void add_term(ShiftKey key, CoeffFn fn);

    // Sum of this key's closures at the point (0 when the key is absent).
    cplx coefficient(const ShiftKey& key, const EvaluationPoint& pt) const;
    // Same, plus the sum of the closure magnitudes (cancellation scale).
    std::pair<cplx, double> coefficient_with_scale(const ShiftKey& key,
                                                   const EvaluationPoint& pt) const;

    FormalOperator scaled(cplx factor) const;
    FormalOperator plus(const FormalOperator& other) const;

    // Set by constructors that return a deliberately empty operator
    // (e.g. Ruijsenaars order k > n) so Wronski sums stay uniform.
    bool out_of_range = false;

  private:
    int m_, r_;
    ModelParams params_;
    ShiftMode mode_;
    std::map<ShiftKey, std::vector<CoeffFn>> terms_;
};

// Operator product A*B: term for key kA + kB with coefficient
// point -> coeff_A(point) * coeff_B(point shifted by kA).
FormalOperator compose(const FormalOperator& A, const FormalOperator& B);

// compose(A, B) - compose(B, A), term-wise by ShiftKey.
FormalOperator commutator(const FormalOperator& A, const FormalOperator& B);

// (A f)(pt) = sum over terms coeff(pt) * f(pt shifted by key).
cplx apply(const FormalOperator& A, const ScalarFn& f, const EvaluationPoint& pt);

// ---- probabilistic equality testing ----

struct SamplerConfig {
    std::uint64_t seed = 0x00c0ffee5eedULL;
    int samples = 20;
    double tolerance = 1e-8;
    double box_re = 0.5;   // half-width of the sampling box, real part
    double box_im = 0.4;   // half-width, imaginary part
    int max_retries = 1000;

    SamplerConfig with_seed(std::uint64_t s) const {
        SamplerConfig out = *this;
        out.seed = s;
        return out;
    }
    SamplerConfig with_tolerance(double tol) const {
        SamplerConfig out = *this;
        out.tolerance = tol;
        return out;
    }
    SamplerConfig with_samples(int n) const {
        SamplerConfig out = *this;
        out.samples = n;
        return out;
    }
};

// Deterministic uniform sampling; doubles are derived from raw mt19937_64
// output so streams are identical across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    double uniform01();
    double uniform(double a, double b);
    cplx box_point(double half_re, double half_im);
    std::vector<cplx> box_points(int n, double half_re, double half_im);

  private:
    std::mt19937_64 gen_;
};

EvaluationPoint sample_point(Rng& rng, int m, int r, const SamplerConfig& cfg,
                             int n = 0, int s = 0);

// Runs fn on pole-avoiding sampled points: a pole_error triggers a resample,
// up to cfg.max_retries. Returns the per-sample values of fn.
std::vector<double> sample_residuals(
    const SamplerConfig& cfg, int m, int r,
    const std::function<double(const EvaluationPoint&)>& fn, int n = 0, int s = 0);

ResidualReport summarize(std::string name, std::string params_echo,
                         const SamplerConfig& cfg, std::vector<double> residuals);

// Per sampled point and ShiftKey in the union of key sets:
// |coeff_A - coeff_B| / (|coeff_A| + |coeff_B| + 1); pass iff max < tol.
ResidualReport equal_at(const FormalOperator& A, const FormalOperator& B,
                        const SamplerConfig& cfg, std::string name = "equal_at");

// Residual of A against the zero operator, per key normalized by the summed
// magnitude of the key's individual contributions (cancellation scale).
ResidualReport zero_at(const FormalOperator& A, const SamplerConfig& cfg,
                       std::string name = "zero_at");

double median_of(std::vector<double> values);

}  // namespace ellops
