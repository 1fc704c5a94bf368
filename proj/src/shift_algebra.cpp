#include "ellops/shift_algebra.hpp"

#include <algorithm>

namespace ellops {

ShiftKey operator+(const ShiftKey& a, const ShiftKey& b) {
    if (a.mu.size() != b.mu.size() || a.nu.size() != b.nu.size())
        throw arity_error("ShiftKey: length mismatch");
    ShiftKey out = a;
    for (std::size_t i = 0; i < b.mu.size(); ++i) out.mu[i] += b.mu[i];
    for (std::size_t i = 0; i < b.nu.size(); ++i) out.nu[i] += b.nu[i];
    return out;
}

ShiftKey zero_key(int m, int r) {
    return ShiftKey{std::vector<int>(m, 0), std::vector<int>(r, 0)};
}

ShiftKey unit_x_key(int m, int r, int i, int step) {
    ShiftKey k = zero_key(m, r);
    k.mu.at(i) = step;
    return k;
}

ShiftKey unit_y_key(int m, int r, int i, int step) {
    ShiftKey k = zero_key(m, r);
    k.nu.at(i) = step;
    return k;
}

EvaluationPoint shifted(const EvaluationPoint& pt, const ShiftKey& key,
                        const ModelParams& params, ShiftMode mode) {
    EvaluationPoint out = pt;
    if (mode == ShiftMode::additive) {
        for (std::size_t i = 0; i < key.mu.size(); ++i)
            out.x[i] += double(key.mu[i]) * params.delta;
        for (std::size_t i = 0; i < key.nu.size(); ++i)
            out.y[i] -= double(key.nu[i]) * params.kappa;
    } else {
        cplx q = params.q(), t = params.t();
        for (std::size_t i = 0; i < key.mu.size(); ++i)
            out.x[i] *= std::pow(q, double(key.mu[i]));
        for (std::size_t i = 0; i < key.nu.size(); ++i)
            out.y[i] *= std::pow(t, -double(key.nu[i]));
    }
    return out;
}

FormalOperator FormalOperator::identity(int m, int r, const ModelParams& params,
                                        ShiftMode mode) {
    FormalOperator op(m, r, params, mode);
    op.add_term(zero_key(m, r), [](const EvaluationPoint&) { return cplx(1.0); });
    return op;
}

FormalOperator FormalOperator::zero(int m, int r, const ModelParams& params,
                                    ShiftMode mode) {
    return FormalOperator(m, r, params, mode);
}

std::size_t FormalOperator::term_count() const {
    std::size_t n = 0;
    for (const auto& [key, fns] : terms_) n += fns.size();
    return n;
}

void FormalOperator::add_term(ShiftKey key, CoeffFn fn) {
    if (int(key.mu.size()) != m_ || int(key.nu.size()) != r_)
        throw arity_error("FormalOperator::add_term: key arity mismatch");
    terms_[std::move(key)].push_back(std::move(fn));
}

cplx FormalOperator::coefficient(const ShiftKey& key, const EvaluationPoint& pt) const {
    auto it = terms_.find(key);
    if (it == terms_.end()) return cplx(0.0);
    cplx sum{0.0, 0.0};
    for (const auto& fn : it->second) sum += fn(pt);
    return sum;
}

std::pair<cplx, double> FormalOperator::coefficient_with_scale(
    const ShiftKey& key, const EvaluationPoint& pt) const {
    auto it = terms_.find(key);
    if (it == terms_.end()) return {cplx(0.0), 0.0};
    cplx sum{0.0, 0.0};
    double scale = 0.0;
    for (const auto& fn : it->second) {
        cplx v = fn(pt);
        if (!is_finite(v)) throw pole_error("coefficient evaluated nonfinite", 0, 0.0);
        sum += v;
        scale += std::abs(v);
    }
    return {sum, scale};
}

FormalOperator FormalOperator::scaled(cplx factor) const {
    FormalOperator out(m_, r_, params_, mode_);
    out.out_of_range = out_of_range;
    for (const auto& [key, fns] : terms_)
        for (const auto& fn : fns)
            out.add_term(key, [fn, factor](const EvaluationPoint& pt) {
                return factor * fn(pt);
            });
    return out;
}

FormalOperator FormalOperator::plus(const FormalOperator& other) const {
    if (m_ != other.m_ || r_ != other.r_ || mode_ != other.mode_)
        throw arity_error("FormalOperator::plus: arity/mode mismatch");
    FormalOperator out(m_, r_, params_, mode_);
    for (const auto& [key, fns] : terms_)
        for (const auto& fn : fns) out.add_term(key, fn);
    for (const auto& [key, fns] : other.terms_)
        for (const auto& fn : fns) out.add_term(key, fn);
    return out;
}

FormalOperator compose(const FormalOperator& A, const FormalOperator& B) {
    if (A.m() != B.m() || A.r() != B.r() || A.mode() != B.mode())
        throw arity_error("compose: arity/mode mismatch");
    FormalOperator out(A.m(), A.r(), A.params(), A.mode());
    const ModelParams params = A.params();
    const ShiftMode mode = A.mode();
    for (const auto& [keyA, fnsA] : A.terms()) {
        for (const auto& [keyB, fnsB] : B.terms()) {
            ShiftKey key = keyA + keyB;
            for (const auto& fa : fnsA)
                for (const auto& fb : fnsB)
                    out.add_term(key, [fa, fb, keyA, params, mode](const EvaluationPoint& pt) {
                        return fa(pt) * fb(shifted(pt, keyA, params, mode));
                    });
        }
    }
    return out;
}

FormalOperator commutator(const FormalOperator& A, const FormalOperator& B) {
    return compose(A, B).plus(compose(B, A).scaled(cplx(-1.0)));
}

cplx apply(const FormalOperator& A, const ScalarFn& f, const EvaluationPoint& pt) {
    cplx sum{0.0, 0.0};
    for (const auto& [key, fns] : A.terms()) {
        cplx coeff{0.0, 0.0};
        for (const auto& fn : fns) coeff += fn(pt);
        sum += coeff * f(shifted(pt, key, A.params(), A.mode()));
    }
    return sum;
}

double Rng::uniform01() {
    return double(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) {
    return a + (b - a) * uniform01();
}

cplx Rng::box_point(double half_re, double half_im) {
    double re = uniform(-half_re, half_re);
    double im = uniform(-half_im, half_im);
    return {re, im};
}

std::vector<cplx> Rng::box_points(int n, double half_re, double half_im) {
    std::vector<cplx> out(n);
    for (auto& z : out) z = box_point(half_re, half_im);
    return out;
}

EvaluationPoint sample_point(Rng& rng, int m, int r, const SamplerConfig& cfg,
                             int n, int s) {
    EvaluationPoint pt;
    pt.x = rng.box_points(m, cfg.box_re, cfg.box_im);
    pt.y = rng.box_points(r, cfg.box_re, cfg.box_im);
    pt.X = rng.box_points(n, cfg.box_re, cfg.box_im);
    pt.Y = rng.box_points(s, cfg.box_re, cfg.box_im);
    return pt;
}

std::vector<double> sample_residuals(
    const SamplerConfig& cfg, int m, int r,
    const std::function<double(const EvaluationPoint&)>& fn, int n, int s) {
    Rng rng(cfg.seed);
    std::vector<double> out;
    out.reserve(cfg.samples);
    for (int i = 0; i < cfg.samples; ++i) {
        int attempt = 0;
        for (;;) {
            EvaluationPoint pt = sample_point(rng, m, r, cfg, n, s);
            try {
                out.push_back(fn(pt));
                break;
            } catch (const pole_error&) {
                if (++attempt >= cfg.max_retries)
                    throw sampler_error(
                        "sampler: no pole-avoiding point found after " +
                        std::to_string(cfg.max_retries) + " retries");
            }
        }
    }
    return out;
}

double median_of(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ResidualReport summarize(std::string name, std::string params_echo,
                         const SamplerConfig& cfg, std::vector<double> residuals) {
    ResidualReport rep;
    rep.name = std::move(name);
    rep.params = std::move(params_echo);
    rep.seed = cfg.seed;
    rep.samples = int(residuals.size());
    rep.tolerance = cfg.tolerance;
    rep.max_residual = residuals.empty()
                           ? 0.0
                           : *std::max_element(residuals.begin(), residuals.end());
    rep.median_residual = median_of(residuals);
    rep.pass = rep.max_residual < cfg.tolerance;
    return rep;
}

ResidualReport equal_at(const FormalOperator& A, const FormalOperator& B,
                        const SamplerConfig& cfg, std::string name) {
    if (A.m() != B.m() || A.r() != B.r())
        throw arity_error("equal_at: arity mismatch");
    std::vector<ShiftKey> keys;
    for (const auto& [key, fns] : A.terms()) keys.push_back(key);
    for (const auto& [key, fns] : B.terms())
        if (!A.terms().count(key)) keys.push_back(key);
    auto residual = [&](const EvaluationPoint& pt) {
        double worst = 0.0;
        for (const auto& key : keys) {
            cplx a = A.coefficient(key, pt);
            cplx b = B.coefficient(key, pt);
            if (!is_finite(a) || !is_finite(b))
                throw pole_error("equal_at coefficient nonfinite", 0, 0.0);
            double res = std::abs(a - b) / (std::abs(a) + std::abs(b) + 1.0);
            worst = std::max(worst, res);
        }
        return worst;
    };
    return summarize(std::move(name), "", cfg,
                     sample_residuals(cfg, A.m(), A.r(), residual));
}

ResidualReport zero_at(const FormalOperator& A, const SamplerConfig& cfg,
                       std::string name) {
    auto residual = [&](const EvaluationPoint& pt) {
        double worst = 0.0;
        for (const auto& [key, fns] : A.terms()) {
            auto [sum, scale] = A.coefficient_with_scale(key, pt);
            worst = std::max(worst, std::abs(sum) / (scale + 1.0));
        }
        return worst;
    };
    return summarize(std::move(name), "", cfg,
                     sample_residuals(cfg, A.m(), A.r(), residual));
}

}  // namespace ellops
