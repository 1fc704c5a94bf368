#include <doctest.h>

#include "ellops/special.hpp"
#include "oracles.hpp"

using namespace ellops;

TEST_CASE("theta basics") {
    cplx p{0.2, 0.0};
    // factor (1 - z) vanishes at z = 1
    CHECK(std::abs(theta(cplx{1.0, 0.0}, p)) < 1e-14);
    // p = 0 collapses to 1 - z
    cplx z{0.37, 0.21};
    CHECK(std::abs(theta(z, cplx{0.0, 0.0}) - (1.0 - z)) < 1e-15);
    // frozen high-precision value (independent 2N-term product oracle)
    cplx v = theta(cplx{0.3, 0.1}, p);
    cplx expected{0.2350379304630436953, 0.0860765106865858065};
    CHECK(std::abs(v - expected) / std::abs(expected) < 1e-12);
}

TEST_CASE("theta truncation self-consistency") {
    BracketContext ctx = BracketContext::elliptic(cplx{0.5, 0.2});
    int N = ctx.theta_terms();
    oracle::Rng rng(101);
    for (int i = 0; i < 50; ++i) {
        cplx z = rng.nonzero_box();
        cplx a = theta(z, ctx.p, N);
        cplx b = theta(z, ctx.p, 2 * N);
        CHECK(std::abs(a - b) <= 1e-12 * (std::abs(a) + 1.0));
        cplx c = oracle::theta_product(z, ctx.p, 2 * N);
        CHECK(std::abs(a - c) <= 1e-12 * (std::abs(c) + 1.0));
    }
}

TEST_CASE("theta rejects bad domains") {
    CHECK_THROWS_AS(theta(cplx{0.5, 0.0}, cplx{1.0, 0.0}), parameter_domain_error);
    CHECK_THROWS_AS(theta(cplx{0.0, 0.0}, cplx{0.3, 0.0}), parameter_domain_error);
    CHECK_THROWS_AS(BracketContext::elliptic(cplx{1.2, 0.0}), parameter_domain_error);
}

TEST_CASE("bracket variants and oddness") {
    oracle::Rng rng(7);
    std::vector<BracketContext> ctxs = {
        BracketContext::elliptic(cplx{0.3, 0.0}),
        BracketContext::elliptic(cplx{0.2, 0.35}),
        BracketContext::trigonometric(),
        BracketContext::hyperbolic(),
        BracketContext::rational(),
    };
    for (const auto& ctx : ctxs) {
        CHECK(std::abs(bracket(cplx{0.0, 0.0}, ctx)) < 1e-14);
        for (int i = 0; i < 100; ++i) {
            cplx x = rng.box();
            cplx plus = bracket(x, ctx), minus = bracket(-x, ctx);
            CHECK(std::abs(plus + minus) <= 1e-12 * (std::abs(plus) + 1.0));
        }
    }
    // trig at omega = 1 equals -2i sin(pi x) and the p = 0 elliptic bracket
    BracketContext trig = BracketContext::trigonometric();
    BracketContext ell0 = BracketContext::elliptic(cplx{0.0, 0.0});
    for (int i = 0; i < 20; ++i) {
        cplx x = rng.box();
        cplx expect = -2.0 * kI * std::sin(kPi * x);
        CHECK(std::abs(bracket(x, trig) - expect) < 1e-13);
        CHECK(std::abs(bracket(x, trig) - bracket(x, ell0)) < 1e-13);
    }
    // frozen elliptic value
    BracketContext ell = BracketContext::elliptic(cplx{0.3, 0.0});
    cplx v = bracket(cplx{0.17, 0.05}, ell);
    cplx expected{0.3926451198406136799, -0.6479269719994483261};
    CHECK(std::abs(v - expected) / std::abs(expected) < 1e-12);
}

TEST_CASE("elliptic bracket(x+1) = -bracket(x) at random x") {
    BracketContext ctx = BracketContext::elliptic(cplx{0.25, 0.15});
    oracle::Rng rng(77);
    for (int i = 0; i < 20; ++i) {
        cplx x = rng.box();
        cplx lhs = bracket(x + 1.0, ctx);
        cplx rhs = -bracket(x, ctx);
        CHECK(std::abs(lhs - rhs) <= 1e-11 * (std::abs(rhs) + 1.0));
    }
}

TEST_CASE("three-term identity, all variants") {
    oracle::Rng rng(23);
    for (const auto& ctx : {BracketContext::elliptic(cplx{0.3, 0.0}),
                            BracketContext::elliptic(cplx{-0.1, 0.45}),
                            BracketContext::trigonometric(),
                            BracketContext::hyperbolic(),
                            BracketContext::rational()}) {
        for (int i = 0; i < 100; ++i) {
            cplx x = rng.box(), y = rng.box(), u = rng.box(), v = rng.box();
            auto br = [&](cplx a) { return bracket(a, ctx); };
            cplx lhs = br(x + y) * br(x - y) * br(u + v) * br(u - v) +
                       br(x + v) * br(x - v) * br(y + u) * br(y - u);
            cplx rhs = br(x + u) * br(x - u) * br(y + v) * br(y - v);
            CHECK(std::abs(lhs - rhs) <=
                  1e-10 * (std::abs(lhs) + std::abs(rhs) + 1.0));
        }
    }
}

TEST_CASE("elliptic quasi-periodicity") {
    cplx tau{0.11, 0.19};
    cplx p = std::exp(cplx(0.0, 2.0 * kPi) * tau);
    BracketContext ctx = BracketContext::elliptic(p);
    oracle::Rng rng(5);
    for (int i = 0; i < 40; ++i) {
        cplx x = rng.box();
        cplx lhs1 = bracket(x + 1.0, ctx);
        cplx rhs1 = -bracket(x, ctx);
        CHECK(std::abs(lhs1 - rhs1) <= 1e-10 * (std::abs(rhs1) + 1.0));
        cplx lhs2 = bracket(x + tau, ctx);
        cplx rhs2 = -std::exp(cplx(0.0, -kPi) * (2.0 * x + tau)) * bracket(x, ctx);
        CHECK(std::abs(lhs2 - rhs2) <= 1e-10 * (std::abs(rhs2) + 1.0));
    }
}

TEST_CASE("shifted factorial") {
    BracketContext ctx = BracketContext::elliptic(cplx{0.3, 0.0});
    cplx delta{0.353553390593273762, 0.288675134594812882};
    oracle::Rng rng(17);
    cplx x = rng.box();
    CHECK(shifted_factorial(x, 0, delta, ctx) == cplx(1.0));
    cplx two = shifted_factorial(x, 2, delta, ctx);
    CHECK(std::abs(two - bracket(x, ctx) * bracket(x + delta, ctx)) < 1e-13);
    cplx neg = shifted_factorial(x, -1, delta, ctx);
    CHECK(std::abs(neg - 1.0 / bracket(x - delta, ctx)) < 1e-13);

    // splice: [x]_{j+k} = [x]_j [x + j delta]_k over j, k in [-3, 3]
    for (int j = -3; j <= 3; ++j)
        for (int k = -3; k <= 3; ++k) {
            cplx xx = rng.box();
            cplx lhs = shifted_factorial(xx, j + k, delta, ctx);
            cplx rhs = shifted_factorial(xx, j, delta, ctx) *
                       shifted_factorial(xx + double(j) * delta, k, delta, ctx);
            CHECK(std::abs(lhs - rhs) <=
                  1e-11 * (std::abs(lhs) + std::abs(rhs) + 1e-6));
        }
}

TEST_CASE("shifted factorial pole error carries the factor index") {
    BracketContext ctx = BracketContext::rational();
    // [x]_{-2} divides by bracket(x - 2 step) = 0 when x = 2 step
    cplx step{1.0, 0.0};
    try {
        shifted_factorial(cplx{2.0, 0.0}, -2, step, ctx, 1e-9);
        FAIL("expected pole_error");
    } catch (const pole_error& e) {
        CHECK(e.index == 2);
    }
}

TEST_CASE("elliptic gamma") {
    cplx p{0.1, 0.0}, q{0.2, 0.0};
    cplx v = elliptic_gamma(cplx{0.4, 0.0}, p, q);
    CHECK(std::abs(v - cplx{1.8220424539724468, 0.0}) / std::abs(v) < 1e-12);
    cplx z{0.3, 0.2};
    CHECK(std::abs(elliptic_gamma(z, cplx{0.0, 0.0}, cplx{0.0, 0.0}) -
                   1.0 / (1.0 - z)) < 1e-14);
    oracle::Rng rng(31);
    cplx p2{0.15, 0.1}, q2{0.25, -0.2};
    for (int i = 0; i < 20; ++i) {
        cplx zz = rng.nonzero_box();
        cplx lhs = elliptic_gamma(q2 * zz, p2, q2) / elliptic_gamma(zz, p2, q2);
        cplx rhs = theta(zz, p2);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * (std::abs(rhs) + 1.0));
        // doubled-truncation oracle
        cplx a = elliptic_gamma(zz, p2, q2);
        cplx b = oracle::gamma_product(zz, p2, q2, 60);
        CHECK(std::abs(a - b) <= 1e-12 * (std::abs(b) + 1.0));
    }
    CHECK_THROWS_AS(elliptic_gamma(z, p, cplx{1.1, 0.0}), parameter_domain_error);
}

TEST_CASE("bracket gamma functional equation, all variants and both branches") {
    cplx delta{0.353553390593273762, 0.288675134594812882};   // Im > 0
    cplx kappa{0.447213595499957939, -0.188982236504613686};  // Im < 0
    oracle::Rng rng(43);
    for (const auto& ctx : {BracketContext::elliptic(cplx{0.3, 0.0}),
                            BracketContext::trigonometric(),
                            BracketContext::hyperbolic(),
                            BracketContext::rational()}) {
        ModelParams params{delta, kappa, ctx};
        for (int i = 0; i < 20; ++i) {
            cplx x = rng.box();
            cplx lhs = bracket_gamma(x + delta, delta, params) /
                       bracket_gamma(x, delta, params);
            cplx rhs = bracket(x, ctx);
            CHECK(std::abs(lhs - rhs) <= 1e-9 * (std::abs(rhs) + 1.0));
            // kappa has negative imaginary part: reciprocal branch
            cplx lhs2 = bracket_gamma(x + kappa, kappa, params) /
                        bracket_gamma(x, kappa, params);
            CHECK(std::abs(lhs2 - rhs) <= 1e-9 * (std::abs(rhs) + 1.0));
            // G_{-kappa} as used by the kernel function
            cplx lhs3 = bracket_gamma(x - kappa, -kappa, params) /
                        bracket_gamma(x, -kappa, params);
            CHECK(std::abs(lhs3 - rhs) <= 1e-9 * (std::abs(rhs) + 1.0));
        }
    }
}

TEST_CASE("bracket gamma rejects |q| = 1") {
    ModelParams params;
    params.context = BracketContext::elliptic(cplx{0.3, 0.0});
    params.delta = cplx{0.37, 0.0};  // real delta -> |q| = 1
    CHECK_THROWS_AS(bracket_gamma(cplx{0.2, 0.1}, params.delta, params),
                    unsupported_regime_error);
}

TEST_CASE("genericity report") {
    ModelParams params;
    params.context = BracketContext::elliptic(cplx{0.3, 0.0});
    params.delta = cplx{0.353553390593273762, 0.288675134594812882};
    params.kappa = cplx{0.447213595499957939, -0.188982236504613686};
    auto rep = check_genericity(params, 8);
    CHECK(rep.pass);

    // delta = 1/2: [2 delta] = [1] = 0 -> fail at n = 2
    ModelParams bad = params.with_delta(cplx{0.5, 0.0});
    auto rep2 = check_genericity(bad, 4);
    CHECK_FALSE(rep2.pass);
    CHECK(rep2.argmin_delta == 2);
    CHECK(rep2.min_delta < 1e-12);

    // n_max = 0 is a vacuous pass
    CHECK(check_genericity(bad, 0).pass);

    CHECK_THROWS_AS(require_genericity(bad, 4), genericity_error);
    ModelParams relaxed = bad;
    relaxed.allow_resonant = true;
    CHECK_NOTHROW(require_genericity(relaxed, 4));
}
