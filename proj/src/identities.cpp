#include "ellops/identities.hpp"

#include <algorithm>
#include <sstream>

#include "ellops/linalg.hpp"

namespace ellops {

double sym_residual(cplx lhs, cplx rhs) {
    return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1.0);
}

namespace {

// Guarded bracket quotient used by every identity evaluator.
struct Ratio {
    const ModelParams& params;
    cplx value{1.0, 0.0};

    cplx br(cplx arg) const { return bracket(arg, params.context); }
    void mul(cplx num_arg, cplx den_arg, const char* what, int index) {
        if (num_arg == den_arg) return;  // ratio is exactly 1
        cplx den = br(den_arg);
        double mag = std::abs(den);
        if (mag <= params.pole_floor) throw pole_error(what, index, mag);
        value *= br(num_arg) / den;
    }
    void mul_num(cplx num_arg) { value *= br(num_arg); }
    void div(cplx den_arg, const char* what, int index) {
        cplx den = br(den_arg);
        double mag = std::abs(den);
        if (mag <= params.pole_floor) throw pole_error(what, index, mag);
        value /= den;
    }
    void mul_fact(cplx num_arg, cplx den_arg, int k, cplx step, const char* what,
                  int index) {
        if (num_arg == den_arg || k == 0) return;
        cplx den = shifted_factorial(den_arg, k, step, params.context,
                                     params.pole_floor);
        double mag = std::abs(den);
        if (mag <= params.pole_floor) throw pole_error(what, index, mag);
        value *= shifted_factorial(num_arg, k, step, params.context,
                                   params.pole_floor) /
                 den;
    }
    void mul_num_fact(cplx arg, int k, cplx step) {
        value *= shifted_factorial(arg, k, step, params.context, params.pole_floor);
    }
    void div_fact(cplx arg, int k, cplx step, const char* what, int index) {
        cplx den = shifted_factorial(arg, k, step, params.context, params.pole_floor);
        double mag = std::abs(den);
        if (mag <= params.pole_floor) throw pole_error(what, index, mag);
        value /= den;
    }
};

std::string echo_params(const ModelParams& params) {
    std::ostringstream os;
    os << to_string(params.context.variant);
    if (params.context.variant == BracketVariant::elliptic)
        os << " p=(" << params.context.p.real() << "," << params.context.p.imag() << ")";
    os << " delta=(" << params.delta.real() << "," << params.delta.imag() << ")"
       << " kappa=(" << params.kappa.real() << "," << params.kappa.imag() << ")";
    return os.str();
}

}  // namespace

// ---- Ruijsenaars source identity ----

namespace {
cplx rsi_sum(std::span<const cplx> z, cplx a, cplx b, int k,
             const ModelParams& params) {
    const int n = int(z.size());
    cplx total{0.0, 0.0};
    for (const auto& I : subsets_of_size(n, k)) {
        Ratio rat{params};
        for (int i = 0; i < n; ++i) {
            if (!I[i]) continue;
            for (int j = 0; j < n; ++j) {
                if (I[j]) continue;
                rat.mul(z[i] - z[j] - a, z[i] - z[j], "rsi [z_i-z_j]", i * n + j);
                rat.mul(z[i] - z[j] - b, z[i] - z[j] - a - b, "rsi [z_i-z_j-a-b]",
                        i * n + j);
            }
        }
        total += rat.value;
    }
    return total;
}
}  // namespace

std::pair<cplx, cplx> rsi_sides(std::span<const cplx> z, cplx a, cplx b, int k,
                                const ModelParams& params) {
    return {rsi_sum(z, a, b, k, params),
            rsi_sum(z, a, b, int(z.size()) - k, params)};
}

double rsi_residual(std::span<const cplx> z, cplx a, cplx b, int k,
                    const ModelParams& params) {
    auto [lhs, rhs] = rsi_sides(z, a, b, k, params);
    return sym_residual(lhs, rhs);
}

// ---- Noumi-Sano source identity ----

std::pair<cplx, double> nssi_sum(std::span<const cplx> z, std::span<const cplx> w,
                                 cplx a, const ModelParams& params) {
    const int n = int(z.size());
    cplx zsum{0.0, 0.0}, wsum{0.0, 0.0};
    for (auto v : z) zsum += v;
    for (auto v : w) wsum += v;
    cplx total{0.0, 0.0};
    double largest = 0.0;
    for (int kk = 0; kk <= n; ++kk)
        for (const auto& I : subsets_of_size(n, kk)) {
            Ratio rat{params};
            rat.value = (kk % 2 == 0) ? cplx(1.0) : cplx(-1.0);
            rat.mul(zsum - wsum + double(kk) * a, zsum - wsum, "nssi [|z|-|w|]", 0);
            for (int i = 0; i < n; ++i) {
                if (!I[i]) continue;
                for (int j = 0; j < n; ++j)
                    if (!I[j])
                        rat.mul(z[i] - z[j] + a, z[i] - z[j], "nssi [z_i-z_j]",
                                i * n + j);
                for (int j = 0; j < n; ++j)
                    rat.mul(z[i] - w[j], z[i] - w[j] + a, "nssi [z_i-w_j+a]",
                            i * n + j);
            }
            total += rat.value;
            largest = std::max(largest, std::abs(rat.value));
        }
    return {total, largest};
}

double nssi_residual(std::span<const cplx> z, std::span<const cplx> w, cplx a,
                     const ModelParams& params) {
    auto [sum, largest] = nssi_sum(z, w, a, params);
    return std::abs(sum) / (largest + 1.0);
}

// ---- Kajihara-Noumi source identity ----

namespace {
cplx ksni_sum(std::span<const cplx> z, std::span<const cplx> w, cplx a, int k,
              const ModelParams& params) {
    const int n = int(z.size());
    cplx total{0.0, 0.0};
    for (const auto& I : subsets_of_size(n, k)) {
        Ratio rat{params};
        for (int i = 0; i < n; ++i) {
            if (!I[i]) continue;
            for (int j = 0; j < n; ++j)
                if (!I[j])
                    rat.mul(z[i] - z[j] - a, z[i] - z[j], "ksni [z_i-z_j]", i * n + j);
            for (int j = 0; j < n; ++j)
                rat.mul(z[i] + w[j] + a, z[i] + w[j], "ksni [z_i+w_j]", i * n + j);
        }
        total += rat.value;
    }
    return total;
}
}  // namespace

std::pair<cplx, cplx> ksni_sides(std::span<const cplx> z, std::span<const cplx> w,
                                 cplx a, int k, const ModelParams& params) {
    return {ksni_sum(z, w, a, k, params), ksni_sum(w, z, a, k, params)};
}

double ksni_residual(std::span<const cplx> z, std::span<const cplx> w, cplx a,
                     int k, const ModelParams& params) {
    auto [lhs, rhs] = ksni_sides(z, w, a, k, params);
    return sym_residual(lhs, rhs);
}

// ---- Frobenius determinant ----

std::pair<cplx, cplx> frobenius_sides(cplx lambda, std::span<const cplx> z,
                                      std::span<const cplx> w,
                                      const ModelParams& params) {
    const int n = int(z.size());
    const BracketContext& ctx = params.context;
    cplx bl = bracket(lambda, ctx);
    if (std::abs(bl) <= params.pole_floor)
        throw pole_error("frobenius [lambda]", 0, std::abs(bl));
    std::vector<std::vector<cplx>> mat(n, std::vector<cplx>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx den = bracket(z[i] + w[j], ctx);
            if (std::abs(den) <= params.pole_floor)
                throw pole_error("frobenius [z_i+w_j]", i * n + j, std::abs(den));
            mat[i][j] = bracket(lambda + z[i] + w[j], ctx) / (bl * den);
        }
    cplx det = determinant(std::move(mat));

    cplx zsum{0.0, 0.0}, wsum{0.0, 0.0};
    for (auto v : z) zsum += v;
    for (auto v : w) wsum += v;
    Ratio rat{params};
    rat.mul(lambda + zsum + wsum, lambda, "frobenius closed [lambda]", 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            rat.mul_num(z[i] - z[j]);
            rat.mul_num(w[i] - w[j]);
        }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            rat.div(z[i] + w[j], "frobenius closed [z_i+w_j]", i * n + j);
    return {det, rat.value};
}

double frobenius_residual(cplx lambda, std::span<const cplx> z,
                          std::span<const cplx> w, const ModelParams& params) {
    auto [lhs, rhs] = frobenius_sides(lambda, z, w, params);
    return sym_residual(lhs, rhs);
}

// ---- S_k symmetry ----

cplx csp_sum(int k, const std::vector<int>& lambda, std::span<const cplx> x,
             std::span<const cplx> y, const ModelParams& params) {
    const int m = int(x.size()), r = int(y.size());
    const cplx d = params.delta, ka = params.kappa;
    cplx total{0.0, 0.0};
    for (int pk = 0; pk <= std::min(k, r); ++pk)
        for (const auto& P : subsets_of_size(r, pk))
            for (const auto& mu : compositions(k - pk, m)) {
                bool skip = false;
                for (int j = 0; j < m; ++j)
                    if (mu[j] > lambda[j]) skip = true;
                if (skip) continue;
                Ratio rat{params};
                for (int i = 0; i < r; ++i) {
                    if (!P[i]) continue;
                    for (int j = 0; j < r; ++j) {
                        if (P[j]) continue;
                        rat.mul(y[i] - y[j] - d, y[i] - y[j], "csp [y_i-y_j]", i * r + j);
                        rat.mul(y[i] - y[j] + d - ka, y[i] - y[j] - ka,
                                "csp [y_i-y_j-kappa]", i * r + j);
                    }
                }
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) {
                        rat.mul_fact(x[i] - x[j] + d, x[i] - x[j] + ka, mu[i] - mu[j], d,
                                     "csp skew factorial", i * m + j);
                        rat.mul_fact(x[i] - x[j] + ka, x[i] - x[j] + d, mu[i], d,
                                     "csp diagonal factorial", i * m + j);
                        rat.mul_fact(x[i] - x[j] - double(lambda[j]) * d,
                                     x[i] - x[j] - double(lambda[j] - 1) * d - ka, mu[i],
                                     d, "csp lambda factorial", i * m + j);
                    }
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < r; ++j) {
                        if (P[j]) {
                            rat.mul(x[i] - y[j] + double(lambda[i]) * d,
                                    x[i] - y[j] + double(mu[i]) * d, "csp cross P",
                                    i * r + j);
                            rat.mul(x[i] - y[j] + double(mu[i] - 1) * d + ka,
                                    x[i] - y[j] + double(lambda[i] - 1) * d + ka,
                                    "csp cross P kappa", i * r + j);
                        } else {
                            rat.mul(x[i] - y[j] - d, x[i] - y[j] - ka, "csp cross Pc",
                                    i * r + j);
                            rat.mul(x[i] - y[j] + double(mu[i]) * d - ka,
                                    x[i] - y[j] + double(mu[i] - 1) * d, "csp cross Pc 2",
                                    i * r + j);
                        }
                    }
                total += rat.value;
            }
    return total;
}

double csp_residual(const std::vector<int>& lambda, std::span<const cplx> x,
                    std::span<const cplx> y, int k, const ModelParams& params) {
    int lam_sum = 0;
    for (int v : lambda) lam_sum += v;
    cplx lhs = csp_sum(k, lambda, x, y, params);
    cplx rhs = csp_sum(lam_sum + int(y.size()) - k, lambda, x, y, params);
    return sym_residual(lhs, rhs);
}

// ---- T_k transformation ----

cplx tt_sum(int k, std::span<const cplx> x, std::span<const cplx> y,
            std::span<const cplx> z, const ModelParams& params) {
    const int m = int(x.size()), r = int(y.size());
    const cplx d = params.delta, ka = params.kappa;
    cplx total{0.0, 0.0};
    for (int pk = 0; pk <= std::min(k, r); ++pk)
        for (const auto& P : subsets_of_size(r, pk))
            for (const auto& mu : compositions(k - pk, m)) {
                Ratio rat{params};
                for (int i = 0; i < r; ++i) {
                    if (!P[i]) continue;
                    for (int j = 0; j < r; ++j) {
                        if (P[j]) continue;
                        rat.mul(y[i] - y[j] - d, y[i] - y[j], "tt [y_i-y_j]", i * r + j);
                        rat.mul(y[i] - y[j] + d - ka, y[i] - y[j] - ka,
                                "tt [y_i-y_j-kappa]", i * r + j);
                    }
                }
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) {
                        rat.mul_fact(x[i] - x[j] + d, x[i] - x[j] + ka, mu[i] - mu[j], d,
                                     "tt skew factorial", i * m + j);
                        rat.mul_fact(x[i] - x[j] + ka, x[i] - x[j] + d, mu[i], d,
                                     "tt diagonal factorial", i * m + j);
                        rat.mul_fact(x[i] + z[j], x[i] + z[j] + d - ka, mu[i], d,
                                     "tt xz factorial", i * m + j);
                    }
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < r; ++j) {
                        if (P[j]) {
                            rat.mul(z[i] + y[j], z[i] + y[j] + d - ka, "tt cross P zy",
                                    i * r + j);
                            rat.mul(x[i] - y[j] + double(mu[i] - 1) * d + ka,
                                    x[i] - y[j] + double(mu[i]) * d, "tt cross P xy",
                                    i * r + j);
                        } else {
                            rat.mul(x[i] - y[j] - d, x[i] - y[j] - ka, "tt cross Pc",
                                    i * r + j);
                            rat.mul(x[i] - y[j] + double(mu[i]) * d - ka,
                                    x[i] - y[j] + double(mu[i] - 1) * d, "tt cross Pc 2",
                                    i * r + j);
                        }
                    }
                total += rat.value;
            }
    return total;
}

double tt_residual(std::span<const cplx> x, std::span<const cplx> y,
                   std::span<const cplx> z, int k, const ModelParams& params) {
    std::vector<cplx> yhat(y.begin(), y.end());
    for (auto& v : yhat) v = -v - params.delta;
    cplx lhs = tt_sum(k, x, y, z, params);
    cplx rhs = tt_sum(k, z, yhat, x, params);
    return sym_residual(lhs, rhs);
}

// ---- r = 0 reduction ----

cplx lss_sum(int k, std::span<const cplx> x, std::span<const cplx> z,
             const ModelParams& params) {
    return tt_sum(k, x, {}, z, params);
}

double lss_residual(std::span<const cplx> x, std::span<const cplx> z, int k,
                    const ModelParams& params) {
    return sym_residual(lss_sum(k, x, z, params), lss_sum(k, z, x, params));
}

// ---- Kajihara-type transformation ----

cplx ktp_sum(int k, std::span<const cplx> x, std::span<const cplx> y,
             std::span<const cplx> X, std::span<const cplx> Y,
             std::span<const cplx> a, const ModelParams& params) {
    const int m = int(x.size()), r = int(y.size());
    const int n = int(X.size()); (void)n;
    (void)Y;

    const cplx d = params.delta;
    cplx total{0.0, 0.0};
    for (int pk = 0; pk <= std::min(k, r); ++pk)
        for (const auto& I : subsets_of_size(r, pk))
            for (const auto& mu : compositions(k - pk, m)) {
                Ratio rat{params};
                rat.value = (pk % 2 == 0) ? cplx(1.0) : cplx(-1.0);
                for (int i = 0; i < m; ++i)
                    for (int j = i + 1; j < m; ++j)
                        rat.mul(x[i] - x[j] + double(mu[i] - mu[j]) * d, x[i] - x[j],
                                "ktp [x_i-x_j]", i * m + j);
                for (int i = 0; i < r; ++i) {
                    if (!I[i]) continue;
                    for (int j = 0; j < r; ++j)
                        if (!I[j])
                            rat.mul(y[i] - y[j] - d, y[i] - y[j], "ktp [y_i-y_j]",
                                    i * r + j);
                }
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < r; ++j)
                        if (!I[j])
                            rat.mul(x[i] - y[j] - d, x[i] - y[j] + double(mu[i] - 1) * d,
                                    "ktp cross [x_i-y_j]", i * r + j);
                for (int i = 0; i < m; ++i) {
                    for (auto aj : a) rat.mul_num_fact(x[i] + aj, mu[i], d);
                    for (int j = 0; j < m; ++j)
                        rat.div_fact(x[i] - x[j] + d, mu[i], d,
                                     "ktp denominator [x_i-x_j+delta]", i * m + j);
                    for (auto Xj : X)
                        rat.div_fact(x[i] + Xj, mu[i], d, "ktp denominator [x_i+X_j]",
                                     i);
                    for (auto Yj : Y)
                        rat.mul(x[i] + Yj + double(mu[i]) * d, x[i] + Yj,
                                "ktp [x_i+Y_j]", i);
                }
                for (int i = 0; i < r; ++i) {
                    if (!I[i]) continue;
                    for (auto aj : a) rat.mul_num(y[i] + aj);
                    for (int j = 0; j < m; ++j)
                        rat.div(y[i] - x[j] - double(mu[j]) * d, "ktp [y_i-x_j-mu_j d]",
                                i * m + j);
                    for (auto Xj : X) rat.div(y[i] + Xj, "ktp [y_i+X_j]", i);
                    for (auto Yj : Y)
                        rat.mul(y[i] + Yj + d, y[i] + Yj, "ktp [y_i+Y_j]", i);
                }
                total += rat.value;
            }
    return total;
}

std::vector<cplx> ktp_balance(std::span<const cplx> x, std::span<const cplx> X,
                              int r, int s, std::vector<cplx> a,
                              const ModelParams& params) {
    if (a.empty()) throw balancing_error("ktp_balance: need at least one parameter");
    cplx xsum{0.0, 0.0}, Xsum{0.0, 0.0};
    for (auto v : x) xsum += v;
    for (auto v : X) Xsum += v;
    cplx partial{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < a.size(); ++i) partial += a[i];
    a.back() = Xsum + double(r - s) * params.delta - xsum - partial;
    return a;
}

double ktp_residual(std::span<const cplx> x, std::span<const cplx> y,
                    std::span<const cplx> X, std::span<const cplx> Y,
                    std::span<const cplx> a, int k, const ModelParams& params) {
    cplx xsum{0.0, 0.0}, Xsum{0.0, 0.0}, asum{0.0, 0.0};
    for (auto v : x) xsum += v;
    for (auto v : X) Xsum += v;
    for (auto v : a) asum += v;
    cplx gap = xsum + asum + double(Y.size()) * params.delta -
               (Xsum + double(y.size()) * params.delta);
    if (std::abs(gap) > 1e-12 * (1.0 + std::abs(xsum) + std::abs(Xsum)))
        throw balancing_error("ktp: balancing |x|+|a|+s delta = |X|+r delta violated");
    std::vector<cplx> nega(a.begin(), a.end());
    for (auto& v : nega) v = -v;
    cplx lhs = ktp_sum(k, x, y, X, Y, a, params);
    cplx rhs = ktp_sum(k, X, Y, x, y, nega, params);
    return sym_residual(lhs, rhs);
}

// ---- Wronski relation and the recursion ----

FormalOperator wronski_operator(int m, int r, int K, const ModelParams& params) {
    FormalOperator total = FormalOperator::zero(m, r, params);
    const BracketContext& ctx = params.context;
    for (int k = 0; k <= K; ++k) {
        int l = K - k;
        cplx weight = bracket(double(k) * params.kappa + double(l) * params.delta, ctx);
        FormalOperator term =
            compose(build_D(m, r, k, params), build_H(m, r, l, params));
        total = total.plus(term.scaled(weight));
    }
    return total;
}

ResidualReport wronski_residual(int m, int r, int K, const ModelParams& params,
                                const SamplerConfig& cfg) {
    ResidualReport rep = zero_at(wronski_operator(m, r, K, params), cfg,
                                 "wronski K=" + std::to_string(K));
    rep.params = echo_params(params) + " m=" + std::to_string(m) +
                 " r=" + std::to_string(r);
    return rep;
}

FormalOperator h_from_d_recursion(int m, int r, int l, const ModelParams& params) {
    require_genericity(params, std::max(l, 1));
    const BracketContext& ctx = params.context;
    std::vector<FormalOperator> H;
    H.push_back(FormalOperator::identity(m, r, params));
    for (int K = 1; K <= l; ++K) {
        cplx denom = bracket(double(K) * params.delta, ctx);
        FormalOperator acc = FormalOperator::zero(m, r, params);
        for (int k = 1; k <= K; ++k) {
            cplx w = -bracket(double(k) * params.kappa + double(K - k) * params.delta,
                              ctx) /
                     denom;
            acc = acc.plus(compose(build_D(m, r, k, params), H[K - k]).scaled(w));
        }
        H.push_back(std::move(acc));
    }
    return H[l];
}

FormalOperator d_from_h_recursion(int m, int r, int l, const ModelParams& params) {
    require_genericity(params, std::max(l, 1));
    const BracketContext& ctx = params.context;
    std::vector<FormalOperator> D;
    D.push_back(FormalOperator::identity(m, r, params));
    for (int K = 1; K <= l; ++K) {
        cplx denom = bracket(double(K) * params.kappa, ctx);
        FormalOperator acc = FormalOperator::zero(m, r, params);
        for (int k = 1; k <= K; ++k) {
            cplx w = -bracket(double(k) * params.delta + double(K - k) * params.kappa,
                              ctx) /
                     denom;
            acc = acc.plus(compose(build_H(m, r, k, params), D[K - k]).scaled(w));
        }
        D.push_back(std::move(acc));
    }
    return D[l];
}

ResidualReport check_h_via_determinant(int m, int r, int l,
                                       const ModelParams& params,
                                       const SamplerConfig& cfg) {
    ResidualReport rep =
        equal_at(h_from_d_recursion(m, r, l, params), build_H(m, r, l, params), cfg,
                 "determinant H l=" + std::to_string(l));
    rep.params = echo_params(params);
    return rep;
}

ResidualReport check_d_via_determinant(int m, int r, int l,
                                       const ModelParams& params,
                                       const SamplerConfig& cfg) {
    ResidualReport rep =
        equal_at(d_from_h_recursion(m, r, l, params), build_D(m, r, l, params), cfg,
                 "determinant D l=" + std::to_string(l));
    rep.params = echo_params(params);
    return rep;
}

// ---- kernel functions ----

bool kernel_balanced(int m, int r, int n, int s, const ModelParams& params) {
    cplx gap = double(m - n) * params.kappa - double(r - s) * params.delta;
    return std::abs(gap) <= 1e-12 * (1.0 + std::abs(params.kappa) + std::abs(params.delta));
}

void require_kernel_balancing(int m, int r, int n, int s,
                              const ModelParams& params) {
    if (!kernel_balanced(m, r, n, s, params))
        throw balancing_error("kernel: balancing (m-n) kappa = (r-s) delta violated");
}

cplx solve_balancing_kappa(int m, int r, int n, int s, cplx delta) {
    if (m == n) throw balancing_error("balancing does not determine kappa when m = n");
    return double(r - s) * delta / double(m - n);
}

cplx kernel_phi(std::span<const cplx> x, std::span<const cplx> y,
                std::span<const cplx> X, std::span<const cplx> Y,
                const ModelParams& params) {
    require_kernel_balancing(int(x.size()), int(y.size()), int(X.size()),
                             int(Y.size()), params);
    const cplx d = params.delta, ka = params.kappa;
    cplx acc{1.0, 0.0};
    for (auto xi : x)
        for (auto Xj : X)
            acc *= bracket_gamma(xi + Xj - ka, d, params) /
                   bracket_gamma(xi + Xj, d, params);
    for (auto yi : y)
        for (auto Yj : Y)
            acc *= bracket_gamma(yi + Yj + d, -ka, params) /
                   bracket_gamma(yi + Yj, -ka, params);
    for (auto xi : x)
        for (auto Yj : Y) acc *= bracket(xi + Yj, params.context);
    for (auto yi : y)
        for (auto Xj : X) acc *= bracket(yi + Xj, params.context);
    if (!is_finite(acc)) throw pole_error("kernel_phi nonfinite", 0, 0.0);
    return acc;
}

cplx kernel_phi_shift_ratio(const std::vector<int>& mu, const std::vector<int>& I,
                            std::span<const cplx> x, std::span<const cplx> y,
                            std::span<const cplx> X, std::span<const cplx> Y,
                            const ModelParams& params) {
    const int m = int(x.size()), r = int(y.size());
    const cplx d = params.delta, ka = params.kappa;
    Ratio rat{params};
    for (int i = 0; i < m; ++i) {
        for (auto Xj : X)
            rat.mul_fact(x[i] + Xj - ka, x[i] + Xj, mu[i], d,
                         "phi ratio [x_i+X_j]_mu", i);
        for (auto Yj : Y)
            rat.mul(x[i] + Yj + double(mu[i]) * d, x[i] + Yj, "phi ratio [x_i+Y_j]", i);
    }
    for (int i = 0; i < r; ++i) {
        if (!I[i]) continue;
        for (auto Xj : X)
            rat.mul(y[i] + Xj - ka, y[i] + Xj, "phi ratio [y_i+X_j]", i);
        for (auto Yj : Y)
            rat.mul(y[i] + Yj + d, y[i] + Yj, "phi ratio [y_i+Y_j]", i);
    }
    return rat.value;
}

cplx gamma_branch(cplx x, cplx p, cplx s, const ModelParams& params) {
    int terms = params.context.theta_terms();
    double as = std::abs(s);
    if (std::abs(as - 1.0) < 1e-12)
        throw unsupported_regime_error("gamma_branch: |s| = 1 regime unsupported");
    if (as < 1.0) return elliptic_gamma(x, p, s, terms);
    return 1.0 / elliptic_gamma(x / s, p, 1.0 / s, terms);
}

cplx bold_kernel_phi(std::span<const cplx> z, std::span<const cplx> w,
                     std::span<const cplx> Z, std::span<const cplx> W,
                     const ModelParams& params) {
    const int m = int(z.size()), r = int(w.size());
    const int n = int(Z.size()), s = int(W.size());
    const cplx q = params.q(), t = params.t();
    cplx gap = std::pow(t, double(m - n)) - std::pow(q, double(r - s));
    if (std::abs(gap) > 1e-10)
        throw balancing_error("bold kernel: t^{m-n} = q^{r-s} violated");
    const cplx p = params.context.p;
    const int terms = params.context.theta_terms();
    cplx acc{1.0, 0.0};
    for (auto zi : z)
        for (auto Zj : Z)
            acc *= gamma_branch(zi * Zj / t, p, q, params) /
                   gamma_branch(zi * Zj, p, q, params);
    for (auto wi : w)
        for (auto Wj : W)
            acc *= gamma_branch(q * wi * Wj, p, 1.0 / t, params) /
                   gamma_branch(wi * Wj, p, 1.0 / t, params);
    for (auto zi : z)
        for (auto Wj : W) acc *= theta(zi * Wj, p, terms);
    for (auto wi : w)
        for (auto Zj : Z) acc *= theta(wi * Zj, p, terms);
    if (!is_finite(acc)) throw pole_error("bold_kernel_phi nonfinite", 0, 0.0);
    return acc;
}

double kernel_identity_residual_at(const EvaluationPoint& pt, int m, int r,
                                   int n, int s, int k,
                                   const ModelParams& params) {
    FormalOperator Hmr = build_H(m, r, k, params);
    FormalOperator Hns = build_H(n, s, k, params);
    ScalarFn phi_xy = [&](const EvaluationPoint& p2) {
        return kernel_phi(p2.x, p2.y, p2.X, p2.Y, params);
    };
    cplx lhs = apply(Hmr, phi_xy, pt);
    EvaluationPoint swapped{pt.X, pt.Y, pt.x, pt.y};
    ScalarFn phi_XY = [&](const EvaluationPoint& p2) {
        return kernel_phi(p2.X, p2.Y, p2.x, p2.y, params);
    };
    cplx rhs = apply(Hns, phi_XY, swapped);
    return sym_residual(lhs, rhs);
}

double bold_kernel_identity_residual_at(const EvaluationPoint& pt, int m, int r,
                                        int n, int s, int k,
                                        const ModelParams& params) {
    FormalOperator Hmr = build_bold(Family::bold_H, m, r, k, params);
    FormalOperator Hns = build_bold(Family::bold_H, n, s, k, params);
    ScalarFn phi_zw = [&](const EvaluationPoint& p2) {
        return bold_kernel_phi(p2.x, p2.y, p2.X, p2.Y, params);
    };
    cplx lhs = apply(Hmr, phi_zw, pt);
    EvaluationPoint swapped{pt.X, pt.Y, pt.x, pt.y};
    ScalarFn phi_ZW = [&](const EvaluationPoint& p2) {
        return bold_kernel_phi(p2.X, p2.Y, p2.x, p2.y, params);
    };
    cplx rhs = apply(Hns, phi_ZW, swapped);
    return sym_residual(lhs, rhs);
}

ResidualReport check_kernel_identity(int m, int r, int n, int s, int k,
                                     const ModelParams& params,
                                     const SamplerConfig& cfg) {
    require_kernel_balancing(m, r, n, s, params);
    auto fn = [&](const EvaluationPoint& pt) {
        return kernel_identity_residual_at(pt, m, r, n, s, k, params);
    };
    auto rep = summarize("kernel (" + std::to_string(m) + "," + std::to_string(r) +
                             ")x(" + std::to_string(n) + "," + std::to_string(s) +
                             ") k=" + std::to_string(k),
                         echo_params(params), cfg,
                         sample_residuals(cfg, m, r, fn, n, s));
    return rep;
}

ResidualReport check_bold_kernel_identity(int m, int r, int n, int s, int k,
                                          const ModelParams& params,
                                          const SamplerConfig& cfg) {
    auto fn = [&](const EvaluationPoint& ptadd) {
        // sample additively, act multiplicatively on z = e^{2 pi i x}
        EvaluationPoint pt;
        auto lift = [](const std::vector<cplx>& v) {
            std::vector<cplx> out(v.size());
            for (std::size_t i = 0; i < v.size(); ++i)
                out[i] = std::exp(cplx(0.0, 2.0 * kPi) * v[i]);
            return out;
        };
        pt.x = lift(ptadd.x);
        pt.y = lift(ptadd.y);
        pt.X = lift(ptadd.X);
        pt.Y = lift(ptadd.Y);
        return bold_kernel_identity_residual_at(pt, m, r, n, s, k, params);
    };
    auto rep = summarize("kernel bold (" + std::to_string(m) + "," +
                             std::to_string(r) + ")x(" + std::to_string(n) + "," +
                             std::to_string(s) + ") k=" + std::to_string(k),
                         echo_params(params), cfg,
                         sample_residuals(cfg, m, r, fn, n, s));
    return rep;
}

// ---- sampled wrappers ----

namespace {

// Draw a set of complex parameters away from the origin so single-bracket
// denominators like [a] stay off the pole floor.
cplx sample_offset_scalar(Rng& rng, const SamplerConfig& cfg) {
    for (int i = 0; i < cfg.max_retries; ++i) {
        cplx v = rng.box_point(cfg.box_re, cfg.box_im);
        if (std::abs(v) > 0.05) return v;
    }
    throw sampler_error("sample_offset_scalar: retries exhausted");
}

}  // namespace

ResidualReport check_rsi(int n, int k, const ModelParams& params,
                         const SamplerConfig& cfg) {
    Rng scalar_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    auto fn = [&](const EvaluationPoint& pt) {
        cplx a = sample_offset_scalar(scalar_rng, cfg);
        cplx b = sample_offset_scalar(scalar_rng, cfg);
        return rsi_residual(pt.x, a, b, k, params);
    };
    return summarize("rsi n=" + std::to_string(n) + " k=" + std::to_string(k),
                     echo_params(params), cfg, sample_residuals(cfg, n, 0, fn));
}

ResidualReport check_nssi(int n, const ModelParams& params,
                          const SamplerConfig& cfg) {
    Rng scalar_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    auto fn = [&](const EvaluationPoint& pt) {
        cplx a = sample_offset_scalar(scalar_rng, cfg);
        return nssi_residual(pt.x, pt.X, a, params);
    };
    return summarize("nssi n=" + std::to_string(n), echo_params(params), cfg,
                     sample_residuals(cfg, n, 0, fn, n, 0));
}

ResidualReport check_ksni(int n, int k, const ModelParams& params,
                          const SamplerConfig& cfg) {
    Rng scalar_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    auto fn = [&](const EvaluationPoint& pt) {
        cplx a = sample_offset_scalar(scalar_rng, cfg);
        return ksni_residual(pt.x, pt.X, a, k, params);
    };
    return summarize("ksni n=" + std::to_string(n) + " k=" + std::to_string(k),
                     echo_params(params), cfg, sample_residuals(cfg, n, 0, fn, n, 0));
}

ResidualReport check_frobenius(int n, const ModelParams& params,
                               const SamplerConfig& cfg) {
    Rng scalar_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    auto fn = [&](const EvaluationPoint& pt) {
        cplx lambda = sample_offset_scalar(scalar_rng, cfg);
        return frobenius_residual(lambda, pt.x, pt.X, params);
    };
    return summarize("frobenius n=" + std::to_string(n), echo_params(params), cfg,
                     sample_residuals(cfg, n, 0, fn, n, 0));
}

ResidualReport check_csp(const std::vector<int>& lambda, int r, int k,
                         const ModelParams& params, const SamplerConfig& cfg) {
    int m = int(lambda.size());
    auto fn = [&](const EvaluationPoint& pt) {
        return csp_residual(lambda, pt.x, pt.y, k, params);
    };
    std::string lam;
    for (int v : lambda) lam += std::to_string(v) + ",";
    return summarize("csp lambda=(" + lam + ") k=" + std::to_string(k),
                     echo_params(params), cfg, sample_residuals(cfg, m, r, fn));
}

ResidualReport check_tt(int m, int r, int k, const ModelParams& params,
                        const SamplerConfig& cfg) {
    auto fn = [&](const EvaluationPoint& pt) {
        return tt_residual(pt.x, pt.y, pt.X, k, params);
    };
    return summarize("tt m=" + std::to_string(m) + " r=" + std::to_string(r) +
                         " k=" + std::to_string(k),
                     echo_params(params), cfg, sample_residuals(cfg, m, r, fn, m, 0));
}

ResidualReport check_lss(int m, int k, const ModelParams& params,
                         const SamplerConfig& cfg) {
    auto fn = [&](const EvaluationPoint& pt) {
        return lss_residual(pt.x, pt.X, k, params);
    };
    return summarize("lss m=" + std::to_string(m) + " k=" + std::to_string(k),
                     echo_params(params), cfg, sample_residuals(cfg, m, 0, fn, m, 0));
}

ResidualReport check_ktp(int m, int r, int n, int s, int k,
                         const ModelParams& params, const SamplerConfig& cfg) {
    Rng scalar_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    auto fn = [&](const EvaluationPoint& pt) {
        std::vector<cplx> a(m + n);
        for (auto& v : a) v = sample_offset_scalar(scalar_rng, cfg);
        a = ktp_balance(pt.x, pt.X, r, s, std::move(a), params);
        return ktp_residual(pt.x, pt.y, pt.X, pt.Y, a, k, params);
    };
    return summarize("ktp (" + std::to_string(m) + "," + std::to_string(r) + ")x(" +
                         std::to_string(n) + "," + std::to_string(s) +
                         ") k=" + std::to_string(k),
                     echo_params(params), cfg, sample_residuals(cfg, m, r, fn, n, s));
}

}  // namespace ellops
