#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ellops/identities.hpp"
#include "ellops/independence.hpp"
#include "ellops/physics.hpp"

namespace ellops {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Batch-driver configuration: bracket variant and parameters, sizes, order
// bounds, sampling controls. Defaults give a generic elliptic model with
// irrationally related delta, kappa, tau.
struct SuiteConfig {
    std::string suite = "all";
    std::string identity;  // when set, run a single identity instead of a suite

    std::string variant = "elliptic";
    double p_re = 0.3, p_im = 0.0;
    std::optional<double> tau_re, tau_im;  // alternative to p: p = e^{2 pi i tau}
    double omega_re = 1.0, omega_im = 0.0;
    // sqrt(2)/4 + i sqrt(3)/6 and sqrt(5)/5 - i sqrt(7)/14
    double delta_re = 0.35355339059327373, delta_im = 0.28867513459481287;
    double kappa_re = 0.44721359549995793, kappa_im = -0.18898223650461363;

    int m = 1, r = 1, n = 1, s = 1;
    int kmax = 2, Kmax = 3, Nmax = 3;
    int samples = 20;
    double tol = 1e-8;
    std::uint64_t seed = 20260810;
    double pole_floor = 1e-6;
    double genericity_floor = 1e-8;

    ModelParams make_params() const;
    SamplerConfig make_sampler() const;
};

struct CheckRecord {
    std::string name;
    std::string params;
    int samples = 0;
    double max_residual = 0.0;
    double median_residual = 0.0;
    std::string verdict;  // pass | fail | inconclusive
};

struct SuiteResult {
    SuiteConfig config;
    std::vector<CheckRecord> checks;  // sorted by name
    int exit_code = 0;                // 0 pass, 1 fail, 2 inconclusive
};

CheckRecord to_record(const ResidualReport& rep);

// Executes the selected checks. Throws config_error for unknown suite or
// identity names; module errors (unsupported regime, genericity) propagate.
SuiteResult run_suite(const SuiteConfig& config);

// JSON (newline-terminated, bitwise stable for a fixed config + seed) or a
// plain-text table.
std::string emit_report(const SuiteResult& result, const std::string& format);

std::string config_to_json(const SuiteConfig& config);
SuiteConfig config_from_json(const std::string& text);

}  // namespace ellops
