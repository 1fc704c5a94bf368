#include "ellops/independence.hpp"

#include <sstream>

#include "ellops/linalg.hpp"

namespace ellops {

std::string to_string(RankVerdict v) {
    switch (v) {
        case RankVerdict::full_rank: return "full_rank";
        case RankVerdict::deficient: return "deficient";
        case RankVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::vector<std::vector<int>> weighted_partitions(int N, int max_part) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(max_part, 0);
    auto rec = [&](auto&& self, int part, int remaining) -> void {
        if (part == max_part) {
            if (remaining == 0) out.push_back(cur);
            return;
        }
        int weight = part + 1;
        for (int c = 0; c * weight <= remaining; ++c) {
            cur[part] = c;
            self(self, part + 1, remaining - c * weight);
        }
        cur[part] = 0;
    };
    rec(rec, 0, N);
    return out;
}

namespace {

std::string echo(const ModelParams& params) {
    std::ostringstream os;
    os << to_string(params.context.variant) << " delta=(" << params.delta.real()
       << "," << params.delta.imag() << ") kappa=(" << params.kappa.real() << ","
       << params.kappa.imag() << ")";
    if (params.context.variant == BracketVariant::elliptic)
        os << " p=(" << params.context.p.real() << "," << params.context.p.imag()
           << ")";
    return os.str();
}

}  // namespace

CoefficientMatrix coefficient_matrix(int m, int r, int N, int points,
                                     const ModelParams& params,
                                     const SamplerConfig& cfg) {
    CoefficientMatrix M;
    M.m = m;
    M.r = r;
    M.N = N;
    M.points = points;
    M.params_echo = echo(params);
    M.row_lambdas = weighted_partitions(N, m + r);

    for (const auto& mu : compositions(N, m + r)) {
        // split a composition of N over m + r slots into (mu, nu)
        ShiftKey key{std::vector<int>(mu.begin(), mu.begin() + m),
                     std::vector<int>(mu.begin() + m, mu.end())};
        M.col_keys.push_back(std::move(key));
    }

    std::vector<FormalOperator> ops;
    ops.reserve(M.row_lambdas.size());
    for (const auto& lambda : M.row_lambdas)
        ops.push_back(build_monomial(lambda, Family::H, m, r, params));

    // one shared set of pole-avoiding points for all rows
    std::vector<EvaluationPoint> pts;
    {
        Rng rng(cfg.seed);
        for (int pidx = 0; pidx < points; ++pidx) {
            int attempt = 0;
            for (;;) {
                EvaluationPoint pt = sample_point(rng, m, r, cfg);
                try {
                    for (const auto& op : ops)
                        for (const auto& key : M.col_keys)
                            (void)op.coefficient_with_scale(key, pt);
                    pts.push_back(pt);
                    break;
                } catch (const pole_error&) {
                    if (++attempt >= cfg.max_retries)
                        throw sampler_error("coefficient_matrix: retries exhausted");
                }
            }
        }
    }

    M.entries.assign(M.row_lambdas.size(),
                     std::vector<cplx>(M.col_keys.size() * points));
    for (std::size_t row = 0; row < ops.size(); ++row)
        for (int pidx = 0; pidx < points; ++pidx)
            for (std::size_t col = 0; col < M.col_keys.size(); ++col)
                M.entries[row][pidx * M.col_keys.size() + col] =
                    ops[row].coefficient(M.col_keys[col], pts[pidx]);
    return M;
}

RankCertificate numeric_rank(const std::vector<std::vector<cplx>>& entries,
                             double threshold) {
    RankCertificate cert;
    cert.rows = int(entries.size());
    cert.threshold = threshold;
    cert.pivots = pivot_magnitudes(entries);
    if (cert.pivots.empty()) {
        cert.rank = 0;
        cert.verdict = cert.rows == 0 ? RankVerdict::full_rank : RankVerdict::deficient;
        cert.gap_ratio = 0.0;
        return cert;
    }
    double cutoff = threshold * cert.pivots.front();
    int rank = 0;
    for (double p : cert.pivots)
        if (p >= cutoff) ++rank;
    cert.rank = rank;
    double smallest_retained = cert.pivots[rank - 1];
    double largest_discarded =
        rank < int(cert.pivots.size()) ? cert.pivots[rank] : 0.0;
    cert.gap_ratio = largest_discarded == 0.0
                         ? std::numeric_limits<double>::infinity()
                         : smallest_retained / largest_discarded;
    if (rank < cert.rows && cert.gap_ratio < 1e3) {
        cert.verdict = RankVerdict::inconclusive;
    } else if (rank == cert.rows) {
        cert.verdict = RankVerdict::full_rank;
    } else {
        cert.verdict = RankVerdict::deficient;
    }
    return cert;
}

RankCertificate numeric_rank(const CoefficientMatrix& M, double threshold) {
    RankCertificate cert = numeric_rank(M.entries, threshold);
    cert.params_echo = M.params_echo;
    return cert;
}

IndependenceReport certify_independence(int m, int r, int N_max,
                                        const ModelParams& params,
                                        const SamplerConfig& cfg, int points,
                                        int reseeds) {
    IndependenceReport rep;
    rep.m = m;
    rep.r = r;
    rep.N_max = N_max;
    rep.params_echo = echo(params);
    rep.seed = cfg.seed;
    rep.verdict = RankVerdict::full_rank;
    for (int N = 1; N <= N_max; ++N) {
        RankCertificate cert;
        SamplerConfig local = cfg;
        for (int attempt = 0; attempt <= reseeds; ++attempt) {
            cert = numeric_rank(coefficient_matrix(m, r, N, points, params, local));
            if (cert.verdict != RankVerdict::inconclusive) break;
            local.seed = local.seed * 6364136223846793005ULL + 1442695040888963407ULL;
        }
        if (cert.verdict == RankVerdict::deficient) rep.verdict = RankVerdict::deficient;
        else if (cert.verdict == RankVerdict::inconclusive &&
                 rep.verdict == RankVerdict::full_rank)
            rep.verdict = RankVerdict::inconclusive;
        rep.by_degree.push_back(std::move(cert));
    }
    return rep;
}

ResidualReport kappa_eq_delta_suite(int m, int r, int k_max,
                                    const ModelParams& params,
                                    const SamplerConfig& cfg) {
    ModelParams pd = params.with_kappa(params.delta);
    std::vector<double> residuals;
    for (int k = 0; k <= k_max; ++k) {
        ResidualReport sub =
            equal_at(build_H(m, r, k, pd), build_kappa_eq_delta_factorized(m, r, k, pd),
                     cfg, "kappa=delta k=" + std::to_string(k));
        residuals.push_back(sub.max_residual);
    }
    ResidualReport rep = summarize("kappa=delta factorization k<=" +
                                       std::to_string(k_max),
                                   echo(pd), cfg, std::move(residuals));
    rep.samples = cfg.samples * (k_max + 1);
    return rep;
}

}  // namespace ellops
