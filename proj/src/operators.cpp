#include "ellops/operators.hpp"

#include <map>

namespace ellops {

std::string to_string(Family f) {
    switch (f) {
        case Family::H: return "H";
        case Family::D: return "D";
        case Family::hatH: return "hatH";
        case Family::hatD: return "hatD";
        case Family::ruijsenaars: return "ruijsenaars";
        case Family::noumi_sano: return "noumi_sano";
        case Family::bold_H: return "bold_H";
        case Family::bold_D: return "bold_D";
        case Family::bold_hatH: return "bold_hatH";
        case Family::bold_hatD: return "bold_hatD";
    }
    return "?";
}

const std::vector<std::vector<int>>& compositions(int total, int parts) {
    static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
    auto it = cache.find({total, parts});
    if (it != cache.end()) return it->second;
    std::vector<std::vector<int>> out;
    if (parts == 0) {
        if (total == 0) out.push_back({});
    } else {
        std::vector<int> cur(parts, 0);
        // lexicographic recursion, first slot outermost
        auto rec = [&](auto&& self, int pos, int remaining) -> void {
            if (pos == parts - 1) {
                cur[pos] = remaining;
                out.push_back(cur);
                return;
            }
            for (int v = 0; v <= remaining; ++v) {
                cur[pos] = v;
                self(self, pos + 1, remaining - v);
            }
        };
        rec(rec, 0, total);
    }
    return cache.emplace(std::pair{total, parts}, std::move(out)).first->second;
}

const std::vector<std::vector<int>>& subsets_of_size(int n, int k) {
    static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
    auto it = cache.find({n, k});
    if (it != cache.end()) return it->second;
    std::vector<std::vector<int>> out;
    if (k >= 0 && k <= n) {
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            if (__builtin_popcount(mask) != k) continue;
            std::vector<int> ind(n, 0);
            for (int j = 0; j < n; ++j)
                if (mask & (1u << j)) ind[j] = 1;
            out.push_back(std::move(ind));
        }
    }
    return cache.emplace(std::pair{n, k}, std::move(out)).first->second;
}

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long acc = 1;
    for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    return acc;
}

long long h_term_count(int m, int r, int k) {
    long long total = 0;
    for (int j = 0; j <= std::min(k, r); ++j) {
        long long comps = (m == 0) ? (k - j == 0 ? 1 : 0) : binomial(k - j + m - 1, m - 1);
        total += binomial(r, j) * comps;
    }
    return total;
}

namespace {

int weight(const std::vector<int>& v) {
    int s = 0;
    for (int e : v) s += e;
    return s;
}

// Bracket quotient guarded by the pole floor rho.
struct Ratio {
    const BracketContext& ctx;
    double rho;
    cplx value{1.0, 0.0};

    void mul(cplx num_arg, cplx den_arg, const char* what, int index) {
        if (num_arg == den_arg) return;  // ratio is exactly 1
        cplx den = bracket(den_arg, ctx);
        double mag = std::abs(den);
        if (mag <= rho) throw pole_error(what, index, mag);
        value *= bracket(num_arg, ctx) / den;
    }
    void mul_fact(cplx num_arg, cplx den_arg, int k, cplx step, const char* what,
                  int index) {
        if (num_arg == den_arg || k == 0) return;
        cplx den = shifted_factorial(den_arg, k, step, ctx, rho);
        double mag = std::abs(den);
        if (mag <= rho) throw pole_error(what, index, mag);
        value *= shifted_factorial(num_arg, k, step, ctx, rho) / den;
    }
};

}  // namespace

cplx coeff_C(const std::vector<int>& mu, const std::vector<int>& I,
             std::span<const cplx> x, std::span<const cplx> y, cplx delta,
             cplx kappa, const ModelParams& params) {
    const int m = int(x.size()), r = int(y.size());
    Ratio rat{params.context, params.pole_floor};
    rat.value = (weight(I) % 2 == 0) ? cplx(1.0) : cplx(-1.0);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            rat.mul(x[i] - x[j] + double(mu[i] - mu[j]) * delta, x[i] - x[j],
                    "C x-difference [x_i-x_j]", i * m + j);
    for (int i = 0; i < r; ++i) {
        if (!I[i]) continue;
        for (int j = 0; j < r; ++j)
            if (!I[j])
                rat.mul(y[i] - y[j] - delta, y[i] - y[j], "C y-difference [y_i-y_j]",
                        i * r + j);
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            rat.mul_fact(x[i] - x[j] + kappa, x[i] - x[j] + delta, mu[i], delta,
                         "C diagonal factorial [x_i-x_j+delta]_mu", i * m + j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < r; ++j) {
            if (I[j])
                rat.mul(x[i] - y[j] - kappa, x[i] - y[j] + double(mu[i]) * delta,
                        "C cross [x_i-y_j+mu_i delta]", i * r + j);
            else
                rat.mul(x[i] - y[j] - delta, x[i] - y[j] + double(mu[i] - 1) * delta,
                        "C cross [x_i-y_j+(mu_i-1) delta]", i * r + j);
        }
    return rat.value;
}

cplx coeff_C_rewritten(const std::vector<int>& mu, const std::vector<int>& I,
                       std::span<const cplx> x, std::span<const cplx> y,
                       cplx delta, cplx kappa, const ModelParams& params) {
    const int m = int(x.size()), r = int(y.size());
    Ratio rat{params.context, params.pole_floor};
    int sign = weight(I) + weight(mu);
    rat.value = (sign % 2 == 0) ? cplx(1.0) : cplx(-1.0);
    for (int i = 0; i < r; ++i) {
        if (!I[i]) continue;
        for (int j = 0; j < r; ++j)
            if (!I[j])
                rat.mul(y[i] - y[j] - delta, y[i] - y[j], "C' y-difference", i * r + j);
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            rat.mul_fact(x[i] - x[j] + kappa, x[i] - x[j] - double(mu[j]) * delta,
                         mu[i], delta, "C' diagonal factorial", i * m + j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < r; ++j) {
            if (I[j])
                rat.mul(x[i] - y[j] - kappa, x[i] - y[j] + double(mu[i]) * delta,
                        "C' cross", i * r + j);
            else
                rat.mul(x[i] - y[j] - delta, x[i] - y[j] + double(mu[i] - 1) * delta,
                        "C' cross", i * r + j);
        }
    return rat.value;
}

cplx ruijsenaars_coeff(const std::vector<int>& I, std::span<const cplx> x,
                       cplx kappa, const ModelParams& params) {
    const int n = int(x.size());
    Ratio rat{params.context, params.pole_floor};
    for (int i = 0; i < n; ++i) {
        if (!I[i]) continue;
        for (int j = 0; j < n; ++j)
            if (!I[j])
                rat.mul(x[i] - x[j] + kappa, x[i] - x[j], "Ruijsenaars [x_i-x_j]",
                        i * n + j);
    }
    return rat.value;
}

cplx noumi_sano_coeff(const std::vector<int>& mu, std::span<const cplx> x,
                      cplx delta, cplx kappa, const ModelParams& params) {
    const int n = int(x.size());
    Ratio rat{params.context, params.pole_floor};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            rat.mul(x[i] - x[j] + double(mu[i] - mu[j]) * delta, x[i] - x[j],
                    "Noumi-Sano difference", i * n + j);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            rat.mul_fact(x[i] - x[j] + kappa, x[i] - x[j] + delta, mu[i], delta,
                         "Noumi-Sano factorial", i * n + j);
    return rat.value;
}

cplx bold_coeff_H(const std::vector<int>& mu, const std::vector<int>& I,
                  std::span<const cplx> z, std::span<const cplx> w, cplx q,
                  cplx t, const ModelParams& params) {
    const int m = int(z.size()), r = int(w.size());
    const BracketContext& ctx = params.context;
    const cplx p = ctx.p;
    const double rho = params.pole_floor;
    const int terms = ctx.theta_terms();
    const int abs_I = weight(I), abs_mu = weight(mu);

    auto th = [&](cplx a) { return theta(a, p, terms); };
    auto guarded_div = [&](cplx num, cplx den, const char* what, int index) {
        double mag = std::abs(den);
        if (mag <= rho) throw pole_error(what, index, mag);
        return num / den;
    };

    cplx acc = (abs_I % 2 == 0) ? cplx(1.0) : cplx(-1.0);
    acc *= std::pow(std::pow(t, -m) * std::pow(q, r), double(abs_mu));
    acc *= std::pow(q, double(abs_I) * double(abs_I - 1) / 2.0);
    for (int i = 0; i < r; ++i) {
        if (!I[i]) continue;
        for (int j = 0; j < r; ++j)
            if (!I[j])
                acc *= guarded_div(th(q * w[j] / w[i]), th(w[j] / w[i]),
                                   "bold w-difference", i * r + j);
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            acc *= guarded_div(theta_factorial(t * z[i] / z[j], q, p, mu[i], ctx),
                               theta_factorial(q * z[i] / z[j], q, p, mu[i], ctx),
                               "bold diagonal theta-factorial", i * m + j);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            acc *= std::pow(q, double(mu[j])) *
                   guarded_div(th(std::pow(q, double(mu[i] - mu[j])) * z[i] / z[j]),
                               th(z[i] / z[j]), "bold z-difference", i * m + j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < r; ++j) {
            if (I[j])
                acc *= guarded_div(th(z[i] / (t * w[j])),
                                   th(std::pow(q, double(mu[i])) * z[i] / w[j]),
                                   "bold cross", i * r + j);
            else
                acc *= guarded_div(th(z[i] / (q * w[j])),
                                   th(std::pow(q, double(mu[i] - 1)) * z[i] / w[j]),
                                   "bold cross", i * r + j);
        }
    return acc;
}

namespace {

std::vector<cplx> shifted_all(std::span<const cplx> v, cplx offset) {
    std::vector<cplx> out(v.begin(), v.end());
    for (auto& z : out) z += offset;
    return out;
}

std::vector<cplx> scaled_all(std::span<const cplx> v, cplx factor) {
    std::vector<cplx> out(v.begin(), v.end());
    for (auto& z : out) z *= factor;
    return out;
}

}  // namespace

FormalOperator build_H(int m, int r, int k, const ModelParams& params) {
    require_genericity(params, std::max(k, 1));
    FormalOperator op(m, r, params);
    const cplx delta = params.delta, kappa = params.kappa;
    for (int j = 0; j <= std::min(k, r); ++j)
        for (const auto& mu : compositions(k - j, m))
            for (const auto& I : subsets_of_size(r, j)) {
                ShiftKey key{mu, I};
                op.add_term(std::move(key),
                            [mu, I, delta, kappa, params](const EvaluationPoint& pt) {
                                return coeff_C(mu, I, pt.x, pt.y, delta, kappa, params);
                            });
            }
    return op;
}

FormalOperator build_D(int m, int r, int k, const ModelParams& params) {
    require_genericity(params, std::max(k, 1));
    FormalOperator op(m, r, params);
    const cplx delta = params.delta, kappa = params.kappa;
    for (int j = 0; j <= std::min(k, m); ++j)
        for (const auto& mu : compositions(k - j, r))
            for (const auto& I : subsets_of_size(m, j))
                op.add_term(ShiftKey{I, mu},
                            [mu, I, delta, kappa, params](const EvaluationPoint& pt) {
                                return coeff_C(mu, I, pt.y, pt.x, -kappa, -delta, params);
                            });
    return op;
}

FormalOperator build_hatH(int m, int r, int k, const ModelParams& params) {
    require_genericity(params, std::max(k, 1));
    FormalOperator op(m, r, params);
    const cplx delta = params.delta, kappa = params.kappa;
    for (int j = 0; j <= std::min(k, r); ++j)
        for (const auto& mu : compositions(k - j, m))
            for (const auto& I : subsets_of_size(r, j)) {
                std::vector<int> mukey(m), nukey(r);
                for (int i = 0; i < m; ++i) mukey[i] = -mu[i];
                for (int i = 0; i < r; ++i) nukey[i] = -I[i];
                op.add_term(ShiftKey{std::move(mukey), std::move(nukey)},
                            [mu, I, delta, kappa, params](const EvaluationPoint& pt) {
                                return coeff_C(mu, I, shifted_all(pt.x, -delta),
                                               shifted_all(pt.y, kappa), -delta,
                                               -kappa, params);
                            });
            }
    return op;
}

FormalOperator build_hatD(int m, int r, int k, const ModelParams& params) {
    require_genericity(params, std::max(k, 1));
    FormalOperator op(m, r, params);
    const cplx delta = params.delta, kappa = params.kappa;
    for (int j = 0; j <= std::min(k, m); ++j)
        for (const auto& mu : compositions(k - j, r))
            for (const auto& I : subsets_of_size(m, j)) {
                std::vector<int> mukey(m), nukey(r);
                for (int i = 0; i < m; ++i) mukey[i] = -I[i];
                for (int i = 0; i < r; ++i) nukey[i] = -mu[i];
                op.add_term(ShiftKey{std::move(mukey), std::move(nukey)},
                            [mu, I, delta, kappa, params](const EvaluationPoint& pt) {
                                return coeff_C(mu, I, shifted_all(pt.y, kappa),
                                               shifted_all(pt.x, -delta), kappa,
                                               delta, params);
                            });
            }
    return op;
}

FormalOperator build_ruijsenaars(int n, int k, const ModelParams& params) {
    require_genericity(params, std::max(k, 1));
    FormalOperator op(n, 0, params);
    if (k < 0 || k > n) {
        op.out_of_range = true;
        return op;
    }
    const cplx kappa = params.kappa;
    for (const auto& I : subsets_of_size(n, k))
        op.add_term(ShiftKey{I, {}},
                    [I, kappa, params](const EvaluationPoint& pt) {
                        return ruijsenaars_coeff(I, pt.x, kappa, params);
                    });
    return op;
}

FormalOperator build_noumi_sano(int n, int k, const ModelParams& params) {
    require_genericity(params, std::max(k, 1));
    FormalOperator op(n, 0, params);
    const cplx delta = params.delta, kappa = params.kappa;
    for (const auto& mu : compositions(k, n))
        op.add_term(ShiftKey{mu, {}},
                    [mu, delta, kappa, params](const EvaluationPoint& pt) {
                        return noumi_sano_coeff(mu, pt.x, delta, kappa, params);
                    });
    return op;
}

FormalOperator build_bold(Family family, int m, int r, int k,
                          const ModelParams& params) {
    if (params.context.variant != BracketVariant::elliptic &&
        params.context.variant != BracketVariant::trigonometric)
        throw parameter_domain_error("build_bold: multiplicative operators need the theta normalization");
    require_genericity(params, std::max(k, 1));
    const cplx q = params.q(), t = params.t();
    if (std::abs(q) < 1e-14 || std::abs(t) < 1e-14)
        throw parameter_domain_error("build_bold: q, t must be nonzero");
    FormalOperator op(m, r, params, ShiftMode::multiplicative);
    switch (family) {
        case Family::bold_H:
            for (int j = 0; j <= std::min(k, r); ++j)
                for (const auto& mu : compositions(k - j, m))
                    for (const auto& I : subsets_of_size(r, j))
                        op.add_term(ShiftKey{mu, I},
                                    [mu, I, q, t, params](const EvaluationPoint& pt) {
                                        return bold_coeff_H(mu, I, pt.x, pt.y, q, t, params);
                                    });
            return op;
        case Family::bold_D:
            for (int j = 0; j <= std::min(k, m); ++j)
                for (const auto& mu : compositions(k - j, r))
                    for (const auto& I : subsets_of_size(m, j))
                        op.add_term(ShiftKey{I, mu},
                                    [mu, I, q, t, params](const EvaluationPoint& pt) {
                                        return bold_coeff_H(mu, I, pt.y, pt.x, 1.0 / t,
                                                            1.0 / q, params);
                                    });
            return op;
        case Family::bold_hatH:
            for (int j = 0; j <= std::min(k, r); ++j)
                for (const auto& mu : compositions(k - j, m))
                    for (const auto& I : subsets_of_size(r, j)) {
                        std::vector<int> mukey(m), nukey(r);
                        for (int i = 0; i < m; ++i) mukey[i] = -mu[i];
                        for (int i = 0; i < r; ++i) nukey[i] = -I[i];
                        op.add_term(ShiftKey{std::move(mukey), std::move(nukey)},
                                    [mu, I, q, t, params](const EvaluationPoint& pt) {
                                        return bold_coeff_H(mu, I, scaled_all(pt.x, 1.0 / q),
                                                            scaled_all(pt.y, t), 1.0 / q,
                                                            1.0 / t, params);
                                    });
                    }
            return op;
        case Family::bold_hatD:
            for (int j = 0; j <= std::min(k, m); ++j)
                for (const auto& mu : compositions(k - j, r))
                    for (const auto& I : subsets_of_size(m, j)) {
                        std::vector<int> mukey(m), nukey(r);
                        for (int i = 0; i < m; ++i) mukey[i] = -I[i];
                        for (int i = 0; i < r; ++i) nukey[i] = -mu[i];
                        op.add_term(ShiftKey{std::move(mukey), std::move(nukey)},
                                    [mu, I, q, t, params](const EvaluationPoint& pt) {
                                        return bold_coeff_H(mu, I, scaled_all(pt.y, t),
                                                            scaled_all(pt.x, 1.0 / q), t, q,
                                                            params);
                                    });
                    }
            return op;
        default:
            throw parameter_domain_error("build_bold: not a bold family");
    }
}

FormalOperator build_family(Family family, int m, int r, int k,
                            const ModelParams& params) {
    switch (family) {
        case Family::H: return build_H(m, r, k, params);
        case Family::D: return build_D(m, r, k, params);
        case Family::hatH: return build_hatH(m, r, k, params);
        case Family::hatD: return build_hatD(m, r, k, params);
        case Family::ruijsenaars: return build_ruijsenaars(m, k, params);
        case Family::noumi_sano: return build_noumi_sano(m, k, params);
        default: return build_bold(family, m, r, k, params);
    }
}

FormalOperator build_monomial(const std::vector<int>& lambda, Family family,
                              int m, int r, const ModelParams& params) {
    ShiftMode mode = (family == Family::bold_H || family == Family::bold_D ||
                      family == Family::bold_hatH || family == Family::bold_hatD)
                         ? ShiftMode::multiplicative
                         : ShiftMode::additive;
    FormalOperator acc = FormalOperator::identity(m, r, params, mode);
    for (std::size_t idx = 0; idx < lambda.size(); ++idx) {
        if (lambda[idx] < 0)
            throw parameter_domain_error("build_monomial: lambda must be nonnegative");
        FormalOperator factor = build_family(family, m, r, int(idx) + 1, params);
        for (int c = 0; c < lambda[idx]; ++c) acc = compose(acc, factor);
    }
    return acc;
}

cplx kappa_eq_delta_gauge(std::span<const cplx> x, std::span<const cplx> y,
                          const ModelParams& params) {
    const int m = int(x.size()), r = int(y.size());
    const BracketContext& ctx = params.context;
    cplx acc{1.0, 0.0};
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) acc *= bracket(x[i] - x[j], ctx);
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) acc *= bracket(y[i] - y[j], ctx);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < r; ++j) {
            cplx den = bracket(x[i] - y[j] - params.delta, ctx);
            double mag = std::abs(den);
            if (mag <= params.pole_floor)
                throw pole_error("gauge factor [x_i-y_j-delta]", i * r + j, mag);
            acc /= den;
        }
    return acc;
}

FormalOperator build_kappa_eq_delta_factorized(int m, int r, int k,
                                               const ModelParams& params) {
    FormalOperator op(m, r, params);
    const ModelParams p = params;
    for (int j = 0; j <= std::min(k, r); ++j)
        for (const auto& mu : compositions(k - j, m))
            for (const auto& I : subsets_of_size(r, j)) {
                ShiftKey key{mu, I};
                cplx sign = (j % 2 == 0) ? cplx(1.0) : cplx(-1.0);
                op.add_term(key, [key, sign, p](const EvaluationPoint& pt) {
                    EvaluationPoint sh = shifted(pt, key, p, ShiftMode::additive);
                    return sign * kappa_eq_delta_gauge(sh.x, sh.y, p) /
                           kappa_eq_delta_gauge(pt.x, pt.y, p);
                });
            }
    return op;
}

cplx bold_prefactor(Family bold_family, int m, int r, int k,
                    const ModelParams& params) {
    const cplx d = params.delta, ka = params.kappa;
    cplx expo;
    switch (bold_family) {
        case Family::bold_H: expo = double(r - 1) * d - double(m) * ka; break;
        case Family::bold_D: expo = double(r) * d - double(m - 1) * ka; break;
        case Family::bold_hatH: expo = double(m) * ka - double(r - 1) * d; break;
        case Family::bold_hatD: expo = double(m - 1) * ka - double(r) * d; break;
        default: throw parameter_domain_error("bold_prefactor: not a bold family");
    }
    return std::exp(cplx(0.0, kPi) * double(k) * expo);
}

}  // namespace ellops
