#include "ellops/suite.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace ellops {

using ordered_json = nlohmann::ordered_json;

ModelParams SuiteConfig::make_params() const {
    ModelParams params;
    params.delta = {delta_re, delta_im};
    params.kappa = {kappa_re, kappa_im};
    params.pole_floor = pole_floor;
    params.genericity_floor = genericity_floor;
    cplx p{p_re, p_im};
    if (tau_re && tau_im)
        p = std::exp(cplx(0.0, 2.0 * kPi) * cplx(*tau_re, *tau_im));
    if (variant == "elliptic")
        params.context = BracketContext::elliptic(p);
    else if (variant == "trig" || variant == "trigonometric")
        params.context = BracketContext::trigonometric({omega_re, omega_im});
    else if (variant == "hyperbolic")
        params.context = BracketContext::hyperbolic({omega_re, omega_im});
    else if (variant == "rational")
        params.context = BracketContext::rational();
    else
        throw config_error("unknown bracket variant: " + variant);
    return params;
}

SamplerConfig SuiteConfig::make_sampler() const {
    SamplerConfig cfg;
    cfg.seed = seed;
    cfg.samples = samples;
    cfg.tolerance = tol;
    return cfg;
}

CheckRecord to_record(const ResidualReport& rep) {
    CheckRecord rec;
    rec.name = rep.name;
    rec.params = rep.params;
    rec.samples = rep.samples;
    rec.max_residual = rep.max_residual;
    rec.median_residual = rep.median_residual;
    rec.verdict = rep.pass ? "pass" : "fail";
    return rec;
}

namespace {

void run_commutativity(const SuiteConfig& cfg, const ModelParams& params,
                       const SamplerConfig& sampler, std::vector<CheckRecord>& out) {
    const int m = cfg.m, r = cfg.r;
    for (int k = 1; k <= cfg.kmax; ++k)
        for (int l = k + 1; l <= cfg.kmax; ++l) {
            auto rep = zero_at(commutator(build_H(m, r, k, params),
                                          build_H(m, r, l, params)),
                               sampler,
                               "commutator [H(" + std::to_string(k) + "),H(" +
                                   std::to_string(l) + ")]");
            out.push_back(to_record(rep));
        }
    // one representative of each cross-family pair
    int k1 = std::min(cfg.kmax, 2), k2 = std::max(1, std::min(cfg.kmax, 2) - 1);
    std::vector<std::pair<std::string, FormalOperator>> fams;
    fams.emplace_back("H(" + std::to_string(k1) + ")", build_H(m, r, k1, params));
    fams.emplace_back("hatH(" + std::to_string(k2) + ")",
                      build_hatH(m, r, k2, params));
    fams.emplace_back("D(" + std::to_string(k1) + ")", build_D(m, r, k1, params));
    fams.emplace_back("hatD(" + std::to_string(k2) + ")",
                      build_hatD(m, r, k2, params));
    for (std::size_t i = 0; i < fams.size(); ++i)
        for (std::size_t j = i + 1; j < fams.size(); ++j) {
            auto rep = zero_at(commutator(fams[i].second, fams[j].second), sampler,
                               "commutator [" + fams[i].first + "," +
                                   fams[j].first + "]");
            out.push_back(to_record(rep));
        }
}

void run_specializations(const SuiteConfig& cfg, const ModelParams& params,
                         const SamplerConfig& sampler,
                         std::vector<CheckRecord>& out) {
    const int m = std::max(cfg.m, 1), r = std::max(cfg.r, 1);
    for (int k = 1; k <= cfg.kmax; ++k) {
        auto rep = equal_at(build_H(m, 0, k, params), build_noumi_sano(m, k, params),
                            sampler, "specialization H(m,0) = noumi-sano k=" +
                                         std::to_string(k));
        out.push_back(to_record(rep));
    }
    // H_{0,r} vs (-1)^k Ruijsenaars with delta <-> -kappa, expressed on y-slots
    for (int k = 1; k <= std::min(cfg.kmax, r); ++k) {
        ModelParams swapped = params;
        swapped.delta = -params.kappa;
        swapped.kappa = -params.delta;
        FormalOperator expected(0, r, params);
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        for (const auto& I : subsets_of_size(r, k))
            expected.add_term(ShiftKey{{}, I},
                              [I, sign, swapped](const EvaluationPoint& pt) {
                                  return sign * ruijsenaars_coeff(I, pt.y,
                                                                  swapped.kappa,
                                                                  swapped);
                              });
        auto rep = equal_at(build_H(0, r, k, params), expected, sampler,
                            "specialization H(0,r) = (-1)^k ruijsenaars k=" +
                                std::to_string(k));
        out.push_back(to_record(rep));
    }
    // bold/additive prefactor transport at one representative order
    if (params.context.variant == BracketVariant::elliptic ||
        params.context.variant == BracketVariant::trigonometric) {
        int k = std::max(1, std::min(cfg.kmax, 2));
        for (Family fam : {Family::bold_H, Family::bold_D, Family::bold_hatH,
                           Family::bold_hatD}) {
            Family add_fam = fam == Family::bold_H      ? Family::H
                             : fam == Family::bold_D    ? Family::D
                             : fam == Family::bold_hatH ? Family::hatH
                                                        : Family::hatD;
            FormalOperator bold = build_bold(fam, m, r, k, params);
            FormalOperator add = build_family(add_fam, m, r, k, params);
            cplx pref = bold_prefactor(fam, m, r, k, params);
            // compare bold coefficients at z = e^{2 pi i x} with prefactor * additive
            FormalOperator lifted(m, r, params);
            for (const auto& [key, fns] : bold.terms())
                for (const auto& fn : fns)
                    lifted.add_term(key, [fn](const EvaluationPoint& pt) {
                        EvaluationPoint mult = pt;
                        for (auto& v : mult.x) v = std::exp(cplx(0.0, 2.0 * kPi) * v);
                        for (auto& v : mult.y) v = std::exp(cplx(0.0, 2.0 * kPi) * v);
                        return fn(mult);
                    });
            auto rep = equal_at(lifted, add.scaled(pref), sampler,
                                "transport " + to_string(fam) + " k=" +
                                    std::to_string(k));
            out.push_back(to_record(rep));
        }
    }
}

void run_wronski(const SuiteConfig& cfg, const ModelParams& params,
                 const SamplerConfig& sampler, std::vector<CheckRecord>& out) {
    for (int K = 1; K <= cfg.Kmax; ++K)
        out.push_back(to_record(wronski_residual(cfg.m, cfg.r, K, params, sampler)));
}

void run_determinant(const SuiteConfig& cfg, const ModelParams& params,
                     const SamplerConfig& sampler, std::vector<CheckRecord>& out) {
    for (int l = 1; l <= std::min(cfg.kmax + 1, 3); ++l) {
        out.push_back(to_record(check_h_via_determinant(cfg.m, cfg.r, l, params, sampler)));
        out.push_back(to_record(check_d_via_determinant(cfg.m, cfg.r, l, params, sampler)));
    }
}

void run_kernel(const SuiteConfig& cfg, const ModelParams& params,
                const SamplerConfig& sampler, std::vector<CheckRecord>& out) {
    ModelParams kp = params;
    if (cfg.m != cfg.n) kp.kappa = solve_balancing_kappa(cfg.m, cfg.r, cfg.n, cfg.s, params.delta);
    else if (cfg.r != cfg.s) throw config_error("kernel: m = n requires r = s");
    for (int k = 1; k <= cfg.kmax; ++k)
        out.push_back(to_record(
            check_kernel_identity(cfg.m, cfg.r, cfg.n, cfg.s, k, kp, sampler)));
    if (kp.context.variant == BracketVariant::elliptic ||
        kp.context.variant == BracketVariant::trigonometric)
        for (int k = 1; k <= cfg.kmax; ++k)
            out.push_back(to_record(check_bold_kernel_identity(cfg.m, cfg.r, cfg.n,
                                                               cfg.s, k, kp, sampler)));
}

void run_sources(const SuiteConfig& cfg, const ModelParams& params,
                 const SamplerConfig& sampler, std::vector<CheckRecord>& out) {
    const int n = std::max(2, std::min(cfg.n + 2, 5));
    out.push_back(to_record(check_rsi(n, std::min(cfg.kmax, n), params, sampler)));
    out.push_back(to_record(check_nssi(n, params, sampler)));
    out.push_back(to_record(check_ksni(n, std::min(cfg.kmax, n), params, sampler)));
    out.push_back(to_record(check_frobenius(n, params, sampler)));
    std::vector<int> lambda(cfg.m, 0);
    if (!lambda.empty()) lambda[0] = 2;
    out.push_back(to_record(check_csp(lambda, cfg.r, std::min(cfg.kmax, 2), params, sampler)));
    out.push_back(to_record(check_tt(cfg.m, cfg.r, std::min(cfg.kmax, 2), params, sampler)));
    out.push_back(to_record(check_lss(std::max(cfg.m, 1), std::min(cfg.kmax, 2), params, sampler)));
    out.push_back(to_record(
        check_ktp(cfg.m, cfg.r, cfg.n, cfg.s, std::min(cfg.kmax, 2), params, sampler)));
}

void run_independence(const SuiteConfig& cfg, const ModelParams& params,
                      const SamplerConfig& sampler, std::vector<CheckRecord>& out) {
    IndependenceReport rep =
        certify_independence(cfg.m, cfg.r, cfg.Nmax, params, sampler);
    for (const auto& cert : rep.by_degree) {
        CheckRecord rec;
        rec.name = "independence rank N=" +
                   std::to_string(&cert - rep.by_degree.data() + 1);
        rec.params = cert.params_echo;
        rec.samples = int(cert.pivots.size());
        rec.max_residual = 0.0;
        rec.median_residual = 0.0;
        rec.verdict = cert.verdict == RankVerdict::full_rank ? "pass"
                      : cert.verdict == RankVerdict::deficient
                          ? "fail"
                          : "inconclusive";
        out.push_back(std::move(rec));
    }
    out.push_back(to_record(
        kappa_eq_delta_suite(cfg.m, cfg.r, std::min(cfg.kmax, 2), params, sampler)));
}

void run_poincare(const SuiteConfig& cfg, const ModelParams& params,
                  const SamplerConfig& sampler, std::vector<CheckRecord>& out) {
    PoincareReport rep = check_poincare(cfg.m, cfg.r, params, sampler);
    out.push_back(to_record(rep.hp));
    out.push_back(to_record(rep.hb));
    out.push_back(to_record(rep.pb));
    SamplerConfig tight = sampler;
    tight.tolerance = std::min(sampler.tolerance, 1e-9);
    out.push_back(to_record(
        check_gauge_identification_plus(cfg.m, cfg.r, params, tight)));
    out.push_back(to_record(
        check_gauge_identification_minus(cfg.m, cfg.r, params, tight)));
}

void run_single_identity(const SuiteConfig& cfg, const ModelParams& params,
                         const SamplerConfig& sampler,
                         std::vector<CheckRecord>& out) {
    const std::string& id = cfg.identity;
    if (id == "rsi")
        out.push_back(to_record(check_rsi(cfg.n, cfg.kmax, params, sampler)));
    else if (id == "nssi")
        out.push_back(to_record(check_nssi(cfg.n, params, sampler)));
    else if (id == "ksni")
        out.push_back(to_record(check_ksni(cfg.n, cfg.kmax, params, sampler)));
    else if (id == "frobenius")
        out.push_back(to_record(check_frobenius(cfg.n, params, sampler)));
    else if (id == "csp") {
        std::vector<int> lambda(cfg.m, 0);
        if (!lambda.empty()) lambda[0] = 2;
        out.push_back(to_record(check_csp(lambda, cfg.r, cfg.kmax, params, sampler)));
    } else if (id == "tt_lsl" || id == "tt")
        out.push_back(to_record(check_tt(cfg.m, cfg.r, cfg.kmax, params, sampler)));
    else if (id == "lss")
        out.push_back(to_record(check_lss(cfg.m, cfg.kmax, params, sampler)));
    else if (id == "ktp")
        out.push_back(to_record(
            check_ktp(cfg.m, cfg.r, cfg.n, cfg.s, cfg.kmax, params, sampler)));
    else if (id == "wronski")
        run_wronski(cfg, params, sampler, out);
    else if (id == "determinant")
        run_determinant(cfg, params, sampler, out);
    else if (id == "kernel_additive")
        out.push_back(to_record(check_kernel_identity(cfg.m, cfg.r, cfg.n, cfg.s,
                                                      cfg.kmax, params, sampler)));
    else if (id == "kernel_multiplicative")
        out.push_back(to_record(check_bold_kernel_identity(
            cfg.m, cfg.r, cfg.n, cfg.s, cfg.kmax, params, sampler)));
    else
        throw config_error("unknown identity: " + id);
}

}  // namespace

SuiteResult run_suite(const SuiteConfig& config) {
    SuiteResult result;
    result.config = config;
    ModelParams params = config.make_params();
    SamplerConfig sampler = config.make_sampler();

    std::vector<CheckRecord>& out = result.checks;
    if (!config.identity.empty()) {
        run_single_identity(config, params, sampler, out);
    } else {
        const std::string& s = config.suite;
        bool all = s == "all";
        if (all || s == "commutativity") {
            run_commutativity(config, params, sampler, out);
            run_specializations(config, params, sampler, out);
        }
        if (all || s == "wronski") {
            run_wronski(config, params, sampler, out);
            run_determinant(config, params, sampler, out);
        } else if (s == "determinant") {
            run_determinant(config, params, sampler, out);
        }
        if (all || s == "kernel") run_kernel(config, params, sampler, out);
        if (all || s == "sources") run_sources(config, params, sampler, out);
        if (all || s == "independence") run_independence(config, params, sampler, out);
        if (all || s == "poincare") run_poincare(config, params, sampler, out);
        if (!all && s != "commutativity" && s != "wronski" && s != "determinant" &&
            s != "kernel" && s != "sources" && s != "independence" && s != "poincare")
            throw config_error("unknown suite: " + s);
    }

    std::sort(result.checks.begin(), result.checks.end(),
              [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });

    bool any_fail = false, any_inconclusive = false;
    for (const auto& rec : result.checks) {
        if (rec.verdict == "fail") any_fail = true;
        if (rec.verdict == "inconclusive") any_inconclusive = true;
    }
    result.exit_code = any_fail ? 1 : any_inconclusive ? 2 : 0;
    return result;
}

namespace {

ordered_json config_json(const SuiteConfig& c) {
    ordered_json j;
    j["suite"] = c.suite;
    j["identity"] = c.identity;
    j["variant"] = c.variant;
    j["p"] = {c.p_re, c.p_im};
    if (c.tau_re && c.tau_im) j["tau"] = {*c.tau_re, *c.tau_im};
    j["omega"] = {c.omega_re, c.omega_im};
    j["delta"] = {c.delta_re, c.delta_im};
    j["kappa"] = {c.kappa_re, c.kappa_im};
    j["m"] = c.m;
    j["r"] = c.r;
    j["n"] = c.n;
    j["s"] = c.s;
    j["kmax"] = c.kmax;
    j["Kmax"] = c.Kmax;
    j["Nmax"] = c.Nmax;
    j["samples"] = c.samples;
    j["tol"] = c.tol;
    j["seed"] = c.seed;
    j["pole_floor"] = c.pole_floor;
    j["genericity_floor"] = c.genericity_floor;
    return j;
}

}  // namespace

std::string config_to_json(const SuiteConfig& config) {
    return config_json(config).dump(2) + "\n";
}

SuiteConfig config_from_json(const std::string& text) {
    SuiteConfig c;
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    auto get_pair = [&](const char* key, double& re, double& im) {
        if (j.contains(key)) {
            re = j[key][0].get<double>();
            im = j[key][1].get<double>();
        }
    };
    if (j.contains("suite")) c.suite = j["suite"].get<std::string>();
    if (j.contains("identity")) c.identity = j["identity"].get<std::string>();
    if (j.contains("variant")) c.variant = j["variant"].get<std::string>();
    get_pair("p", c.p_re, c.p_im);
    if (j.contains("tau")) {
        c.tau_re = j["tau"][0].get<double>();
        c.tau_im = j["tau"][1].get<double>();
    }
    get_pair("omega", c.omega_re, c.omega_im);
    get_pair("delta", c.delta_re, c.delta_im);
    get_pair("kappa", c.kappa_re, c.kappa_im);
    if (j.contains("m")) c.m = j["m"].get<int>();
    if (j.contains("r")) c.r = j["r"].get<int>();
    if (j.contains("n")) c.n = j["n"].get<int>();
    if (j.contains("s")) c.s = j["s"].get<int>();
    if (j.contains("kmax")) c.kmax = j["kmax"].get<int>();
    if (j.contains("Kmax")) c.Kmax = j["Kmax"].get<int>();
    if (j.contains("Nmax")) c.Nmax = j["Nmax"].get<int>();
    if (j.contains("samples")) c.samples = j["samples"].get<int>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("pole_floor")) c.pole_floor = j["pole_floor"].get<double>();
    if (j.contains("genericity_floor"))
        c.genericity_floor = j["genericity_floor"].get<double>();
    if (c.tol <= 0.0 || c.tol >= 1.0) throw config_error("tol must be in (0, 1)");
    if (c.m < 0 || c.r < 0 || c.n < 0 || c.s < 0 || c.kmax < 0 || c.Kmax < 0 ||
        c.Nmax < 0 || c.samples < 1)
        throw config_error("sizes and bounds must be nonnegative, samples >= 1");
    return c;
}

std::string emit_report(const SuiteResult& result, const std::string& format) {
    if (format == "json") {
        ordered_json j;
        j["library_version"] = kLibraryVersion;
        j["config"] = config_json(result.config);
        j["variant"] = result.config.variant;
        j["seed"] = result.config.seed;
        ordered_json checks = ordered_json::array();
        for (const auto& rec : result.checks) {
            ordered_json c;
            c["name"] = rec.name;
            c["params"] = rec.params;
            c["samples"] = rec.samples;
            c["max_residual"] = rec.max_residual;
            c["median_residual"] = rec.median_residual;
            c["verdict"] = rec.verdict;
            checks.push_back(std::move(c));
        }
        j["checks"] = std::move(checks);
        j["exit_code"] = result.exit_code;
        return j.dump(2) + "\n";
    }
    if (format == "text") {
        std::ostringstream os;
        os << "ellops verify  version " << kLibraryVersion << "  seed "
           << result.config.seed << "\n";
        for (const auto& rec : result.checks) {
            os << std::left << std::setw(14)
               << (rec.verdict == "pass" ? "PASS" : rec.verdict == "fail" ? "FAIL" : "INCONCLUSIVE")
               << std::setw(46) << rec.name << " max " << std::scientific
               << std::setprecision(3) << rec.max_residual << "  median "
               << rec.median_residual << "\n";
        }
        os << "exit code " << result.exit_code << "\n";
        return os.str();
    }
    throw config_error("unknown report format: " + format);
}

}  // namespace ellops
