#include <doctest.h>

#include "ellops/operators.hpp"
#include "oracles.hpp"

using namespace ellops;

namespace {

ModelParams test_params(BracketVariant variant = BracketVariant::elliptic) {
    ModelParams params;
    params.delta = {0.353553390593273762, 0.288675134594812882};
    params.kappa = {0.447213595499957939, -0.188982236504613686};
    switch (variant) {
        case BracketVariant::elliptic:
            params.context = BracketContext::elliptic(cplx{0.3, 0.0});
            break;
        case BracketVariant::trigonometric:
            params.context = BracketContext::trigonometric();
            break;
        case BracketVariant::hyperbolic:
            params.context = BracketContext::hyperbolic();
            break;
        case BracketVariant::rational:
            params.context = BracketContext::rational();
            break;
    }
    return params;
}

EvaluationPoint rand_point(std::uint64_t seed, int m, int r) {
    oracle::Rng rng(seed);
    EvaluationPoint pt;
    pt.x = rng.boxes(m);
    pt.y = rng.boxes(r);
    return pt;
}

}  // namespace

TEST_CASE("coeff_C trivial and enumeration") {
    ModelParams params = test_params();
    EvaluationPoint pt = rand_point(1, 2, 2);
    // all products empty
    CHECK(coeff_C({0, 0}, {0, 0}, pt.x, pt.y, params.delta, params.kappa, params) ==
          cplx(1.0));
    // term counts: k = 0 identity, and the closed-form count
    CHECK(build_H(1, 1, 0, params).terms().size() == 1);
    CHECK(h_term_count(2, 2, 2) == 8);
    CHECK(build_H(2, 2, 2, params).terms().size() == std::size_t(h_term_count(2, 2, 2)));
    // brute-force enumeration comparison
    for (int k = 0; k <= 4; ++k) {
        long long count = 0;
        for (int j = 0; j <= 2; ++j)
            count += binomial(2, j) * long(compositions(k - j < 0 ? -1 : k - j, 2).size());
        CHECK(h_term_count(2, 2, k) == count);
        CHECK(build_H(2, 2, k, params).terms().size() == std::size_t(count));
    }
}

TEST_CASE("H specializes to Noumi-Sano at r = 0") {
    ModelParams params = test_params();
    SamplerConfig cfg;
    cfg.tolerance = 1e-9;
    for (int k = 1; k <= 3; ++k) {
        auto rep = equal_at(build_H(2, 0, k, params), build_noumi_sano(2, k, params),
                            cfg);
        CHECK(rep.pass);
    }
}

TEST_CASE("H specializes to (-1)^k Ruijsenaars at m = 0 with delta <-> -kappa") {
    ModelParams params = test_params();
    SamplerConfig cfg;
    cfg.tolerance = 1e-9;
    const int r = 3;
    for (int k = 1; k <= r; ++k) {
        // expected operator on the y-slots: (-1)^k ruijsenaars coefficients with
        // kappa' = -delta (and step delta' = -kappa matching the -kappa y-shifts)
        FormalOperator expected(0, r, params);
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        cplx swapped_kappa = -params.delta;
        for (const auto& I : subsets_of_size(r, k))
            expected.add_term(ShiftKey{{}, I},
                              [I, sign, swapped_kappa, params](const EvaluationPoint& pt) {
                                  return sign * ruijsenaars_coeff(I, pt.y, swapped_kappa,
                                                                  params);
                              });
        auto rep = equal_at(build_H(0, r, k, params), expected, cfg);
        CHECK(rep.pass);
    }
}

TEST_CASE("D specializes to (-1)^k Ruijsenaars at r = 0") {
    ModelParams params = test_params();
    SamplerConfig cfg;
    cfg.tolerance = 1e-9;
    for (int k = 1; k <= 2; ++k) {
        FormalOperator D = build_D(2, 0, k, params);
        FormalOperator R = build_ruijsenaars(2, k, params);
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        auto rep = equal_at(D, R.scaled(sign), cfg);
        CHECK(rep.pass);
    }
}

TEST_CASE("Ruijsenaars edge orders") {
    ModelParams params = test_params();
    FormalOperator D0 = build_ruijsenaars(3, 0, params);
    CHECK(D0.terms().size() == 1);
    EvaluationPoint pt = rand_point(4, 3, 0);
    CHECK(std::abs(D0.coefficient(zero_key(3, 0), pt) - 1.0) < 1e-15);

    // top order: single term, coefficient 1 (I = <n>, empty cross product)
    FormalOperator Dn = build_ruijsenaars(3, 3, params);
    CHECK(Dn.terms().size() == 1);
    CHECK(std::abs(Dn.coefficient(ShiftKey{{1, 1, 1}, {}}, pt) - 1.0) < 1e-15);

    // k > n: zero operator, flagged
    FormalOperator over = build_ruijsenaars(3, 4, params);
    CHECK(over.empty());
    CHECK(over.out_of_range);
}

TEST_CASE("D family matches the substitution oracle") {
    ModelParams params = test_params();
    FormalOperator D = build_D(1, 1, 1, params);
    EvaluationPoint pt = rand_point(9, 1, 1);
    // mu over y (length r), I over x (length m), coefficient C_{mu,I}(y;x;-kappa,-delta)
    cplx via_oracle = coeff_C({1}, {0}, pt.y, pt.x, -params.kappa, -params.delta, params);
    CHECK(std::abs(D.coefficient(ShiftKey{{0}, {1}}, pt) - via_oracle) < 1e-13);
    cplx via_oracle2 = coeff_C({0}, {1}, pt.y, pt.x, -params.kappa, -params.delta, params);
    CHECK(std::abs(D.coefficient(ShiftKey{{1}, {0}}, pt) - via_oracle2) < 1e-13);
}

TEST_CASE("hatH matches its displayed coefficients and k = 0 identity") {
    ModelParams params = test_params();
    CHECK(build_hatH(2, 1, 0, params).terms().size() == 1);
    FormalOperator hat = build_hatH(1, 1, 1, params);
    EvaluationPoint pt = rand_point(21, 1, 1);
    // explicit display: C_{mu,I}(x - delta; y + kappa; -delta, -kappa)
    std::vector<cplx> xs{pt.x[0] - params.delta}, ys{pt.y[0] + params.kappa};
    cplx expect_x = coeff_C({1}, {0}, xs, ys, -params.delta, -params.kappa, params);
    CHECK(std::abs(hat.coefficient(ShiftKey{{-1}, {0}}, pt) - expect_x) < 1e-13);
    cplx expect_y = coeff_C({0}, {1}, xs, ys, -params.delta, -params.kappa, params);
    CHECK(std::abs(hat.coefficient(ShiftKey{{0}, {-1}}, pt) - expect_y) < 1e-13);
}

TEST_CASE("hatH at m = 0 satisfies hatH(k) H(r) = H(r-k)") {
    ModelParams params = test_params();
    SamplerConfig cfg;
    cfg.tolerance = 1e-9;
    const int r = 2;
    for (int k = 0; k <= r; ++k) {
        FormalOperator lhs = compose(build_hatH(0, r, k, params),
                                     build_H(0, r, r, params));
        FormalOperator rhs = build_H(0, r, r - k, params);
        auto rep = equal_at(lhs, rhs, cfg);
        CHECK(rep.pass);
    }
}

TEST_CASE("hatD matches the substitution oracle and k = 0 identity") {
    ModelParams params = test_params();
    CHECK(build_hatD(1, 2, 0, params).terms().size() == 1);
    FormalOperator hat = build_hatD(1, 1, 1, params);
    EvaluationPoint pt = rand_point(33, 1, 1);
    std::vector<cplx> ys{pt.y[0] + params.kappa}, xs{pt.x[0] - params.delta};
    // C_{mu,I}(y + kappa; x - delta; kappa, delta) with T_x^{-delta I} T_y^{kappa mu}
    cplx expect_y = coeff_C({1}, {0}, ys, xs, params.kappa, params.delta, params);
    CHECK(std::abs(hat.coefficient(ShiftKey{{0}, {-1}}, pt) - expect_y) < 1e-13);
    cplx expect_x = coeff_C({0}, {1}, ys, xs, params.kappa, params.delta, params);
    CHECK(std::abs(hat.coefficient(ShiftKey{{-1}, {0}}, pt) - expect_x) < 1e-13);

    // (m,r) = (0,r): reduces to the hatted Ruijsenaars family by symmetry
    SamplerConfig cfg;
    cfg.tolerance = 1e-9;
    const int r = 2;
    for (int k = 1; k <= r; ++k) {
        FormalOperator hd = build_hatD(0, r, k, params);
        FormalOperator expected(0, r, params);
        for (const auto& mu : compositions(k, r)) {
            std::vector<int> nukey(r);
            for (int i = 0; i < r; ++i) nukey[i] = -mu[i];
            expected.add_term(ShiftKey{{}, nukey},
                              [mu, params](const EvaluationPoint& pt2) {
                                  std::vector<cplx> ys2(pt2.y.size());
                                  for (std::size_t i = 0; i < ys2.size(); ++i)
                                      ys2[i] = pt2.y[i] + params.kappa;
                                  return coeff_C(mu, {}, ys2, {}, params.kappa,
                                                 params.delta, params);
                              });
        }
        CHECK(equal_at(hd, expected, cfg).pass);
    }
}

TEST_CASE("k = 1 matches the first-order display") {
    ModelParams params = test_params();
    const cplx d = params.delta, ka = params.kappa;
    const BracketContext& ctx = params.context;
    FormalOperator H1 = build_H(2, 2, 1, params);
    CHECK(H1.terms().size() == 4);
    EvaluationPoint pt = rand_point(55, 2, 2);
    // x-term i = 0: ([kappa]/[delta]) prod_{j != i} [x_i-x_j+kappa]/[x_i-x_j]
    //               prod_j [x_i-y_j-delta]/[x_i-y_j]
    cplx expect = bracket(ka, ctx) / bracket(d, ctx) *
                  bracket(pt.x[0] - pt.x[1] + ka, ctx) /
                  bracket(pt.x[0] - pt.x[1], ctx);
    for (int j = 0; j < 2; ++j)
        expect *= bracket(pt.x[0] - pt.y[j] - d, ctx) /
                  bracket(pt.x[0] - pt.y[j], ctx);
    CHECK(std::abs(H1.coefficient(ShiftKey{{1, 0}, {0, 0}}, pt) - expect) <=
          1e-12 * std::abs(expect));
    // y-term i = 1: -prod_{j != i} [y_i-y_j-delta]/[y_i-y_j]
    //               prod_j [y_i-x_j+kappa]/[y_i-x_j]
    cplx expect_y = -bracket(pt.y[1] - pt.y[0] - d, ctx) /
                    bracket(pt.y[1] - pt.y[0], ctx);
    for (int j = 0; j < 2; ++j)
        expect_y *= bracket(pt.y[1] - pt.x[j] + ka, ctx) /
                    bracket(pt.y[1] - pt.x[j], ctx);
    CHECK(std::abs(H1.coefficient(ShiftKey{{0, 0}, {0, 1}}, pt) - expect_y) <=
          1e-12 * std::abs(expect_y));
}

TEST_CASE("monomial powers match the compose oracle") {
    ModelParams params = test_params();
    SamplerConfig cfg;
    FormalOperator id = build_monomial({}, Family::H, 1, 1, params);
    CHECK(id.terms().size() == 1);
    FormalOperator e1 = build_monomial({1}, Family::H, 1, 1, params);
    CHECK(equal_at(e1, build_H(1, 1, 1, params), cfg).pass);
    FormalOperator sq = build_monomial({2}, Family::H, 1, 1, params);
    FormalOperator H1 = build_H(1, 1, 1, params);
    CHECK(equal_at(sq, compose(H1, H1), cfg).pass);
}

TEST_CASE("genericity gate on constructors") {
    ModelParams params = test_params();
    params.delta = cplx{0.5, 0.0};  // [2 delta] = 0
    CHECK_THROWS_AS(build_H(1, 1, 2, params), genericity_error);
    params.allow_resonant = true;
    CHECK_NOTHROW(build_H(1, 1, 2, params));
}

TEST_CASE("bold operators transport to additive ones") {
    for (auto variant : {BracketVariant::elliptic, BracketVariant::trigonometric}) {
        ModelParams params = test_params(variant);
        if (variant == BracketVariant::trigonometric)
            params.context = BracketContext::elliptic(cplx{0.0, 0.0});
        const int m = 2, r = 2, k = 2;
        oracle::Rng rng(66);
        for (Family fam : {Family::bold_H, Family::bold_D, Family::bold_hatH,
                           Family::bold_hatD}) {
            Family add_fam = fam == Family::bold_H      ? Family::H
                             : fam == Family::bold_D    ? Family::D
                             : fam == Family::bold_hatH ? Family::hatH
                                                        : Family::hatD;
            FormalOperator bold = build_bold(fam, m, r, k, params);
            FormalOperator add = build_family(add_fam, m, r, k, params);
            CHECK(bold.terms().size() == add.terms().size());
            cplx pref = bold_prefactor(fam, m, r, k, params);
            EvaluationPoint apt;
            apt.x = rng.boxes(m);
            apt.y = rng.boxes(r);
            EvaluationPoint mpt = apt;
            for (auto& v : mpt.x) v = std::exp(cplx(0.0, 2.0 * kPi) * v);
            for (auto& v : mpt.y) v = std::exp(cplx(0.0, 2.0 * kPi) * v);
            for (const auto& [key, fns] : add.terms()) {
                cplx lhs = bold.coefficient(key, mpt);
                cplx rhs = pref * add.coefficient(key, apt);
                CHECK(std::abs(lhs - rhs) <=
                      1e-10 * (std::abs(lhs) + std::abs(rhs) + 1.0));
            }
        }
    }
}

TEST_CASE("bold k = 0 is the identity") {
    ModelParams params = test_params();
    FormalOperator b = build_bold(Family::bold_H, 1, 1, 0, params);
    CHECK(b.terms().size() == 1);
    EvaluationPoint pt;
    pt.x = {cplx{1.2, 0.1}};
    pt.y = {cplx{0.8, -0.2}};
    CHECK(std::abs(b.coefficient(zero_key(1, 1), pt) - 1.0) < 1e-14);
}

TEST_CASE("kappa = delta factorization (gauge-conjugated free shifts)") {
    ModelParams params = test_params();
    params.kappa = params.delta;
    SamplerConfig cfg;
    cfg.tolerance = 1e-9;
    for (int k = 0; k <= 2; ++k) {
        auto rep = equal_at(build_H(2, 2, k, params),
                            build_kappa_eq_delta_factorized(2, 2, k, params), cfg);
        CHECK(rep.pass);
    }
    // conjugating twice returns the original coefficients
    EvaluationPoint pt = rand_point(71, 2, 2);
    cplx g = kappa_eq_delta_gauge(pt.x, pt.y, params);
    cplx ginv = 1.0 / g;
    CHECK(std::abs(g * ginv - 1.0) < 1e-13);
}

TEST_CASE("enumeration order is reproducible") {
    // lexicographic compositions, subset bitmask ascending
    const auto& comps = compositions(2, 2);
    REQUIRE(comps.size() == 3);
    CHECK(comps[0] == std::vector<int>{0, 2});
    CHECK(comps[1] == std::vector<int>{1, 1});
    CHECK(comps[2] == std::vector<int>{2, 0});
    const auto& subs = subsets_of_size(3, 2);
    REQUIRE(subs.size() == 3);
    CHECK(subs[0] == std::vector<int>{1, 1, 0});
    CHECK(subs[1] == std::vector<int>{1, 0, 1});
    CHECK(subs[2] == std::vector<int>{0, 1, 1});
}
