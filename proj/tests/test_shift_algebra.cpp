#include <doctest.h>

#include "ellops/operators.hpp"
#include "oracles.hpp"

using namespace ellops;

namespace {

ModelParams test_params() {
    ModelParams params;
    params.delta = {0.353553390593273762, 0.288675134594812882};
    params.kappa = {0.447213595499957939, -0.188982236504613686};
    params.context = BracketContext::elliptic(cplx{0.3, 0.0});
    return params;
}

// Small arbitrary operators with entire coefficients, for structural tests.
FormalOperator arbitrary_op(int m, int r, const ModelParams& params,
                            std::uint64_t seed, int nterms) {
    oracle::Rng rng(seed);
    FormalOperator op(m, r, params);
    for (int t = 0; t < nterms; ++t) {
        ShiftKey key = zero_key(m, r);
        for (auto& v : key.mu) v = int(rng.unit() * 5) - 2;
        for (auto& v : key.nu) v = int(rng.unit() * 5) - 2;
        cplx a = rng.box(), b = rng.box(), c = rng.box();
        op.add_term(key, [a, b, c](const EvaluationPoint& pt) {
            cplx sx{0.0, 0.0}, sy{0.0, 0.0};
            for (auto v : pt.x) sx += v;
            for (auto v : pt.y) sy += v;
            return std::exp(a * sx + b * sy) + c;
        });
    }
    return op;
}

EvaluationPoint point_at(std::uint64_t seed, int m, int r) {
    oracle::Rng rng(seed);
    EvaluationPoint pt;
    pt.x = rng.boxes(m);
    pt.y = rng.boxes(r);
    return pt;
}

}  // namespace

TEST_CASE("shift keys add and compare") {
    ShiftKey a{{1, 0}, {2}};
    ShiftKey b{{0, 3}, {-1}};
    ShiftKey c = a + b;
    CHECK(c.mu == std::vector<int>{1, 3});
    CHECK(c.nu == std::vector<int>{1});
    CHECK(a < (ShiftKey{{1, 1}, {0}}));
    CHECK_THROWS_AS((a + ShiftKey{{1}, {1}}), arity_error);
}

TEST_CASE("shifted point, additive and multiplicative") {
    ModelParams params = test_params();
    EvaluationPoint pt = point_at(3, 2, 1);
    ShiftKey key{{1, -2}, {3}};
    EvaluationPoint sh = shifted(pt, key, params, ShiftMode::additive);
    CHECK(std::abs(sh.x[0] - (pt.x[0] + params.delta)) < 1e-15);
    CHECK(std::abs(sh.x[1] - (pt.x[1] - 2.0 * params.delta)) < 1e-15);
    CHECK(std::abs(sh.y[0] - (pt.y[0] - 3.0 * params.kappa)) < 1e-15);

    EvaluationPoint mult = shifted(pt, key, params, ShiftMode::multiplicative);
    CHECK(std::abs(mult.x[0] - pt.x[0] * params.q()) < 1e-14);
    CHECK(std::abs(mult.y[0] - pt.y[0] * std::pow(params.t(), -3.0)) < 1e-13);
}

TEST_CASE("identity composes trivially") {
    ModelParams params = test_params();
    FormalOperator id = FormalOperator::identity(1, 1, params);
    FormalOperator B = build_H(1, 1, 2, params);
    FormalOperator left = compose(id, B);
    EvaluationPoint pt = point_at(11, 1, 1);
    for (const auto& [key, fns] : B.terms()) {
        CHECK(std::abs(left.coefficient(key, pt) - B.coefficient(key, pt)) < 1e-14);
    }
    SamplerConfig cfg;
    cfg.samples = 10;
    CHECK(equal_at(left, B, cfg).pass);
    CHECK(equal_at(compose(B, id), B, cfg).pass);
}

TEST_CASE("single shift composes by the unrolled definition") {
    ModelParams params = test_params();
    // T = f * T_x^delta; compose(T, T) coefficient is f(x) f(x + delta)
    FormalOperator T(1, 0, params);
    auto f = [](const EvaluationPoint& pt) { return std::exp(0.7 * pt.x[0]); };
    T.add_term(ShiftKey{{1}, {}}, f);
    FormalOperator TT = compose(T, T);
    EvaluationPoint pt = point_at(13, 1, 0);
    EvaluationPoint sh = pt;
    sh.x[0] += params.delta;
    cplx expect = f(pt) * f(sh);
    CHECK(std::abs(TT.coefficient(ShiftKey{{2}, {}}, pt) - expect) < 1e-14);
}

TEST_CASE("compose H1*H1 against a hand-unrolled 4-term oracle") {
    ModelParams params = test_params();
    const cplx d = params.delta, ka = params.kappa;
    const BracketContext& ctx = params.context;
    auto cx = [&](cplx x, cplx y) {
        return bracket(ka, ctx) / bracket(d, ctx) * bracket(x - y - d, ctx) /
               bracket(x - y, ctx);
    };
    auto cy = [&](cplx x, cplx y) {
        return -bracket(y - x + ka, ctx) / bracket(y - x, ctx);
    };
    FormalOperator H1 = build_H(1, 1, 1, params);
    FormalOperator HH = compose(H1, H1);
    oracle::Rng rng(29);
    for (int i = 0; i < 10; ++i) {
        EvaluationPoint pt;
        pt.x = rng.boxes(1);
        pt.y = rng.boxes(1);
        cplx x = pt.x[0], y = pt.y[0];
        cplx c20 = cx(x, y) * cx(x + d, y);
        cplx c11 = cx(x, y) * cy(x + d, y) + cy(x, y) * cx(x, y - ka);
        cplx c02 = cy(x, y) * cy(x, y - ka);
        CHECK(std::abs(HH.coefficient(ShiftKey{{2}, {0}}, pt) - c20) <=
              1e-10 * (std::abs(c20) + 1.0));
        CHECK(std::abs(HH.coefficient(ShiftKey{{1}, {1}}, pt) - c11) <=
              1e-10 * (std::abs(c11) + 1.0));
        CHECK(std::abs(HH.coefficient(ShiftKey{{0}, {2}}, pt) - c02) <=
              1e-10 * (std::abs(c02) + 1.0));
    }
}

TEST_CASE("commutator basics") {
    ModelParams params = test_params();
    SamplerConfig cfg;
    FormalOperator A = build_H(1, 1, 2, params);
    CHECK(zero_at(commutator(A, A), cfg).pass);
    CHECK(zero_at(commutator(FormalOperator::identity(1, 1, params), A), cfg).pass);
    CHECK_THROWS_AS(commutator(A, build_H(2, 1, 1, params)), arity_error);
}

TEST_CASE("commutator [H1, H2] vanishes at (1,1)") {
    ModelParams params = test_params();
    SamplerConfig cfg;
    cfg.tolerance = 1e-8;
    auto rep =
        zero_at(commutator(build_H(1, 1, 1, params), build_H(1, 1, 2, params)), cfg);
    CHECK(rep.pass);
    CHECK(rep.max_residual < 1e-10);
}

TEST_CASE("apply") {
    ModelParams params = test_params();
    EvaluationPoint pt = point_at(37, 1, 1);
    ScalarFn f = [](const EvaluationPoint& p) {
        return std::exp(0.3 * p.x[0] + 0.7 * p.y[0]);
    };
    FormalOperator id = FormalOperator::identity(1, 1, params);
    CHECK(std::abs(apply(id, f, pt) - f(pt)) < 1e-14);

    FormalOperator T(1, 1, params);
    T.add_term(ShiftKey{{1}, {0}}, [](const EvaluationPoint&) { return cplx(1.0); });
    EvaluationPoint sh = pt;
    sh.x[0] += params.delta;
    CHECK(std::abs(apply(T, f, pt) - f(sh)) < 1e-14);

    FormalOperator H1 = build_H(1, 1, 1, params);
    EvaluationPoint shx = pt, shy = pt;
    shx.x[0] += params.delta;
    shy.y[0] -= params.kappa;
    cplx expect = H1.coefficient(ShiftKey{{1}, {0}}, pt) * f(shx) +
                  H1.coefficient(ShiftKey{{0}, {1}}, pt) * f(shy);
    CHECK(std::abs(apply(H1, f, pt) - expect) <= 1e-12 * (std::abs(expect) + 1.0));
}

TEST_CASE("equal_at basics and reports") {
    ModelParams params = test_params();
    SamplerConfig cfg;
    cfg.seed = 424242;
    FormalOperator A = build_H(1, 1, 2, params);
    auto rep = equal_at(A, A, cfg);
    CHECK(rep.pass);
    CHECK(rep.max_residual == 0.0);
    CHECK(rep.seed == 424242);
    CHECK(rep.samples == cfg.samples);

    // two independent codings of the coefficient display agree
    FormalOperator B(1, 1, params);
    const cplx d = params.delta, ka = params.kappa;
    for (const auto& [key, fns] : A.terms()) {
        std::vector<int> mu = key.mu, I = key.nu;
        B.add_term(key, [mu, I, d, ka, params](const EvaluationPoint& pt) {
            return coeff_C_rewritten(mu, I, pt.x, pt.y, d, ka, params);
        });
    }
    CHECK(equal_at(A, B, cfg).pass);
}

TEST_CASE("associativity of compose") {
    ModelParams params = test_params();
    SamplerConfig cfg;
    cfg.tolerance = 1e-9;
    cfg.samples = 10;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        FormalOperator A = arbitrary_op(2, 1, params, seed, 3);
        FormalOperator B = arbitrary_op(2, 1, params, seed + 10, 3);
        FormalOperator C = arbitrary_op(2, 1, params, seed + 20, 2);
        auto rep = equal_at(compose(compose(A, B), C), compose(A, compose(B, C)), cfg);
        CHECK(rep.pass);
    }
}

TEST_CASE("composition degree adds") {
    ModelParams params = test_params();
    FormalOperator A = arbitrary_op(1, 2, params, 5, 4);
    FormalOperator B = arbitrary_op(1, 2, params, 6, 3);
    FormalOperator C = compose(A, B);
    for (const auto& [key, fns] : C.terms()) {
        bool found = false;
        for (const auto& [ka, fa] : A.terms())
            for (const auto& [kb, fb] : B.terms())
                if (ka + kb == key) found = true;
        CHECK(found);
    }
    for (const auto& [ka, fa] : A.terms())
        for (const auto& [kb, fb] : B.terms())
            CHECK(C.terms().count(ka + kb) == 1);
}

TEST_CASE("apply/compose consistency") {
    ModelParams params = test_params();
    FormalOperator A = build_H(1, 1, 1, params);
    FormalOperator B = build_H(1, 1, 2, params);
    ScalarFn f = [](const EvaluationPoint& p) {
        return std::cos(0.4 * p.x[0]) + std::sin(0.2 * p.y[0]);
    };
    ScalarFn Bf = [&](const EvaluationPoint& p) { return apply(B, f, p); };
    oracle::Rng rng(91);
    for (int i = 0; i < 10; ++i) {
        EvaluationPoint pt;
        pt.x = rng.boxes(1);
        pt.y = rng.boxes(1);
        cplx lhs = apply(compose(A, B), f, pt);
        cplx rhs = apply(A, Bf, pt);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (std::abs(lhs) + std::abs(rhs) + 1.0));
    }
}

TEST_CASE("sampler is deterministic and pole-avoiding") {
    SamplerConfig cfg;
    cfg.seed = 777;
    cfg.samples = 8;
    ModelParams params = test_params();
    FormalOperator A = build_H(1, 1, 1, params);
    auto r1 = equal_at(A, A, cfg);
    auto r2 = equal_at(A, A, cfg);
    CHECK(r1.max_residual == r2.max_residual);
    CHECK(r1.median_residual == r2.median_residual);

    FormalOperator bad(1, 0, params);
    bad.add_term(ShiftKey{{0}, {}}, [](const EvaluationPoint&) -> cplx {
        throw pole_error("always", 0, 0.0);
    });
    SamplerConfig tight = cfg;
    tight.max_retries = 5;
    CHECK_THROWS_AS(zero_at(bad, tight), sampler_error);
}

TEST_CASE("median and summarize") {
    CHECK(median_of({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median_of({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(median_of({}) == 0.0);
}
