#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ellops/suite.hpp"

using namespace ellops;

int main(int argc, char** argv) {
    CLI::App app{"Residual-zero verification suites for deformed elliptic "
                 "Ruijsenaars difference operators"};

    std::string config_path;
    if (const char* env = std::getenv("ELLOPS_CONFIG")) config_path = env;

    std::string suite, identity, variant, json_path;
    double tau_re = 0.0, tau_im = 0.0;
    bool have_tau = false;

    app.add_option("--config", config_path,
                   "JSON config file (flags override; default from ELLOPS_CONFIG)");
    app.add_option("--suite", suite,
                   "all|commutativity|wronski|determinant|kernel|sources|independence|poincare");
    app.add_option("--identity", identity,
                   "single identity: rsi|nssi|ksni|frobenius|csp|tt_lsl|lss|ktp|"
                   "wronski|determinant|kernel_additive|kernel_multiplicative");
    app.add_option("--variant", variant, "elliptic|trig|hyperbolic|rational");

    std::optional<double> p_re, p_im, delta_re, delta_im, kappa_re, kappa_im, tol;
    std::optional<int> m, r, n, s, kmax, Kmax, Nmax, samples;
    std::optional<std::uint64_t> seed;
    app.add_option("--p", p_re, "elliptic nome (real part)");
    app.add_option("--p-im", p_im, "elliptic nome (imaginary part)");
    auto* tau_opt = app.add_option("--tau", tau_re, "period ratio tau (real part); p = e^{2 pi i tau}");
    app.add_option("--tau-im", tau_im, "period ratio tau (imaginary part)");
    app.add_option("--delta", delta_re, "delta (real part)");
    app.add_option("--delta-im", delta_im, "delta (imaginary part)");
    app.add_option("--kappa", kappa_re, "kappa (real part)");
    app.add_option("--kappa-im", kappa_im, "kappa (imaginary part)");
    app.add_option("--m", m, "number of x-variables");
    app.add_option("--r", r, "number of y-variables");
    app.add_option("--n", n, "second-pair x-count (kernel) / source-identity size");
    app.add_option("--s", s, "second-pair y-count (kernel)");
    app.add_option("--kmax", kmax, "order bound k");
    app.add_option("--Kmax", Kmax, "Wronski order bound");
    app.add_option("--Nmax", Nmax, "independence degree bound");
    app.add_option("--samples", samples, "sample points per check");
    app.add_option("--tol", tol, "residual tolerance");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--json", json_path, "write the JSON report to this path");

    CLI11_PARSE(app, argc, argv);

    try {
        SuiteConfig config;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw config_error("cannot open config file: " + config_path);
            std::ostringstream buf;
            buf << in.rdbuf();
            config = config_from_json(buf.str());
        }
        // flags win over the config file
        if (!suite.empty()) config.suite = suite;
        if (!identity.empty()) config.identity = identity;
        if (!variant.empty()) config.variant = variant;
        if (p_re) config.p_re = *p_re;
        if (p_im) config.p_im = *p_im;
        if (tau_opt->count() || have_tau) {
            config.tau_re = tau_re;
            config.tau_im = tau_im;
        }
        if (delta_re) config.delta_re = *delta_re;
        if (delta_im) config.delta_im = *delta_im;
        if (kappa_re) config.kappa_re = *kappa_re;
        if (kappa_im) config.kappa_im = *kappa_im;
        if (m) config.m = *m;
        if (r) config.r = *r;
        if (n) config.n = *n;
        if (s) config.s = *s;
        if (kmax) config.kmax = *kmax;
        if (Kmax) config.Kmax = *Kmax;
        if (Nmax) config.Nmax = *Nmax;
        if (samples) config.samples = *samples;
        if (tol) config.tol = *tol;
        if (seed) config.seed = *seed;
        if (config.tol <= 0.0 || config.tol >= 1.0)
            throw config_error("tol must be in (0, 1)");

        SuiteResult result = run_suite(config);

        std::cout << emit_report(result, "text");
        if (!json_path.empty()) {
            std::ofstream out(json_path, std::ios::binary);
            if (!out) throw config_error("cannot write JSON report: " + json_path);
            out << emit_report(result, "json");
        }
        return result.exit_code;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const unsupported_regime_error& e) {
        std::cerr << "unsupported regime: " << e.what() << "\n";
        return 3;
    } catch (const genericity_error& e) {
        std::cerr << "genericity error: " << e.what() << "\n";
        return 3;
    } catch (const parameter_domain_error& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
