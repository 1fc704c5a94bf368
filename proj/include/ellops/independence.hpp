#pragma once

#include <vector>

#include "ellops/operators.hpp"

namespace ellops {

// Coefficient matrix of the degree-N monomials: rows indexed by lambda with
// ||lambda|| = sum_i i*lambda_i = N, columns by shift keys (mu, nu) with
// |mu| + |nu| = N, entries stacked over several sampled points.
struct CoefficientMatrix {
    int m = 0, r = 0, N = 0;
    std::vector<std::vector<int>> row_lambdas;
    std::vector<ShiftKey> col_keys;
    int points = 0;
    std::vector<std::vector<cplx>> entries;  // rows x (cols * points)
    std::string params_echo;
};

// All lambda in Z_{>=0}^{m+r} with weighted degree ||lambda|| = N.
std::vector<std::vector<int>> weighted_partitions(int N, int max_part);

CoefficientMatrix coefficient_matrix(int m, int r, int N, int points,
                                     const ModelParams& params,
                                     const SamplerConfig& cfg);

enum class RankVerdict { full_rank, deficient, inconclusive };

std::string to_string(RankVerdict v);

struct RankCertificate {
    int rank = 0;
    int rows = 0;
    RankVerdict verdict = RankVerdict::inconclusive;
    std::vector<double> pivots;  // descending
    double threshold = 0.0;      // relative pivot cutoff
    double gap_ratio = 0.0;      // smallest retained / largest discarded
    std::string params_echo;
};

// Rank by full-pivot elimination with a relative pivot threshold. When the
// retained/discarded gap is under 10^3 the verdict is inconclusive, not a
// failure (the criterion claims generic independence; degenerate samples
// must trigger resampling instead of a red result).
RankCertificate numeric_rank(const std::vector<std::vector<cplx>>& entries,
                             double threshold = 1e-8);
RankCertificate numeric_rank(const CoefficientMatrix& M, double threshold = 1e-8);

// Full-rank certification at degrees 1..N_max, resampling on inconclusive
// verdicts up to `reseeds` times.
struct IndependenceReport {
    int m = 0, r = 0, N_max = 0;
    std::vector<RankCertificate> by_degree;
    RankVerdict verdict = RankVerdict::inconclusive;
    std::string params_echo;
    std::uint64_t seed = 0;
};

IndependenceReport certify_independence(int m, int r, int N_max,
                                        const ModelParams& params,
                                        const SamplerConfig& cfg, int points = 3,
                                        int reseeds = 4);

// kappa = delta factorization: equal_at between H^{(k)}|_{kappa=delta} and the
// gauge-conjugated free-shift sum, for k <= k_max.
ResidualReport kappa_eq_delta_suite(int m, int r, int k_max,
                                    const ModelParams& params,
                                    const SamplerConfig& cfg);

}  // namespace ellops
