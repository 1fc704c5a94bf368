#include "ellops/physics.hpp"

namespace ellops {

FormalOperator build_S_pm_gauged(int m, int r, const ModelParams& params, int sign) {
    if (sign != 1 && sign != -1)
        throw parameter_domain_error("build_S_pm_gauged: sign must be +-1");
    require_genericity(params, 1);
    FormalOperator op(m, r, params);
    const double s = double(sign);
    const cplx d = params.delta, ka = params.kappa;
    const ModelParams p = params;
    for (int i = 0; i < m; ++i) {
        op.add_term(unit_x_key(m, r, i, sign), [i, m, r, s, d, ka, p](const EvaluationPoint& pt) {
            const BracketContext& ctx = p.context;
            cplx num = bracket(ka, ctx);
            cplx den = bracket(d, ctx);
            if (std::abs(den) <= p.pole_floor)
                throw pole_error("S gauge [delta]", 0, std::abs(den));
            cplx acc = num / den;
            for (int j = 0; j < m; ++j) {
                if (j == i) continue;
                cplx dj = bracket(pt.x[i] - pt.x[j], ctx);
                if (std::abs(dj) <= p.pole_floor)
                    throw pole_error("S x-difference", i * m + j, std::abs(dj));
                acc *= bracket(pt.x[i] - pt.x[j] + s * ka, ctx) / dj;
            }
            for (int j = 0; j < r; ++j) {
                cplx dj = bracket(pt.x[i] - pt.y[j] + s * ka / 2.0 + s * d / 2.0, ctx);
                if (std::abs(dj) <= p.pole_floor)
                    throw pole_error("S cross denominator", i * r + j, std::abs(dj));
                acc *= bracket(pt.x[i] - pt.y[j] + s * ka / 2.0 - s * d / 2.0, ctx) / dj;
            }
            return acc;
        });
    }
    for (int i = 0; i < r; ++i) {
        op.add_term(unit_y_key(m, r, i, sign), [i, m, r, s, d, ka, p](const EvaluationPoint& pt) {
            const BracketContext& ctx = p.context;
            cplx acc{-1.0, 0.0};
            for (int j = 0; j < r; ++j) {
                if (j == i) continue;
                cplx dj = bracket(pt.y[i] - pt.y[j], ctx);
                if (std::abs(dj) <= p.pole_floor)
                    throw pole_error("S y-difference", i * r + j, std::abs(dj));
                acc *= bracket(pt.y[i] - pt.y[j] - s * d, ctx) / dj;
            }
            for (int j = 0; j < m; ++j) {
                cplx dj = bracket(pt.y[i] - pt.x[j] - s * d / 2.0 - s * ka / 2.0, ctx);
                if (std::abs(dj) <= p.pole_floor)
                    throw pole_error("S cross denominator", i * m + j, std::abs(dj));
                acc *= bracket(pt.y[i] - pt.x[j] - s * d / 2.0 + s * ka / 2.0, ctx) / dj;
            }
            return acc;
        });
    }
    return op;
}

ScalarFn build_delta_weight(int m, int r, const ModelParams& params) {
    const ModelParams p = params;
    return [m, r, p](const EvaluationPoint& pt) {
        const cplx d = p.delta, ka = p.kappa;
        cplx acc{1.0, 0.0};
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                if (i == j) continue;
                acc *= bracket_gamma(pt.x[i] - pt.x[j] + ka, d, p) /
                       bracket_gamma(pt.x[i] - pt.x[j], d, p);
            }
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                if (i == j) continue;
                acc *= bracket_gamma(pt.y[i] - pt.y[j] - d, -ka, p) /
                       bracket_gamma(pt.y[i] - pt.y[j], -ka, p);
            }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < r; ++j) {
                cplx d1 = bracket(pt.x[i] - pt.y[j] + ka / 2.0 - d / 2.0, p.context);
                cplx d2 = bracket(pt.y[j] - pt.x[i] + ka / 2.0 - d / 2.0, p.context);
                if (std::abs(d1) <= p.pole_floor || std::abs(d2) <= p.pole_floor)
                    throw pole_error("Delta cross factor", i * r + j,
                                     std::min(std::abs(d1), std::abs(d2)));
                acc /= d1 * d2;
            }
        if (!is_finite(acc)) throw pole_error("Delta nonfinite", 0, 0.0);
        return acc;
    };
}

FormalOperator build_boost(int m, int r, const ModelParams& params) {
    FormalOperator op(m, r, params);
    const cplx d = params.delta, ka = params.kappa;
    op.add_term(zero_key(m, r), [d, ka](const EvaluationPoint& pt) {
        cplx acc{0.0, 0.0};
        for (auto xi : pt.x) acc += xi;
        acc *= kI / d;
        cplx acy{0.0, 0.0};
        for (auto yi : pt.y) acy += yi;
        return acc - kI / ka * acy;
    });
    return op;
}

FormalOperator translate_coefficient_args(const FormalOperator& op, cplx x_offset,
                                          cplx y_offset) {
    FormalOperator out(op.m(), op.r(), op.params(), op.mode());
    for (const auto& [key, fns] : op.terms())
        for (const auto& fn : fns)
            out.add_term(key, [fn, x_offset, y_offset](const EvaluationPoint& pt) {
                EvaluationPoint sh = pt;
                for (auto& xi : sh.x) xi += x_offset;
                for (auto& yi : sh.y) yi += y_offset;
                return fn(sh);
            });
    return out;
}

PoincareReport check_poincare(int m, int r, const ModelParams& params,
                              const SamplerConfig& cfg) {
    FormalOperator Sp = build_S_pm_gauged(m, r, params, +1);
    FormalOperator Sm = build_S_pm_gauged(m, r, params, -1);
    FormalOperator H = Sp.plus(Sm);
    FormalOperator P = Sp.plus(Sm.scaled(cplx(-1.0)));
    FormalOperator B = build_boost(m, r, params);

    PoincareReport rep;
    rep.hp = zero_at(commutator(H, P), cfg, "[H,P]");
    rep.hb = zero_at(commutator(H, B).plus(P.scaled(-kI)), cfg, "[H,B]-iP");
    rep.pb = zero_at(commutator(P, B).plus(H.scaled(-kI)), cfg, "[P,B]-iH");
    rep.pass = rep.hp.pass && rep.hb.pass && rep.pb.pass;
    return rep;
}

ResidualReport check_gauge_identification_plus(int m, int r,
                                               const ModelParams& params,
                                               const SamplerConfig& cfg) {
    FormalOperator Sp = build_S_pm_gauged(m, r, params, +1);
    FormalOperator shifted_S =
        translate_coefficient_args(Sp, -params.delta / 2.0, params.kappa / 2.0);
    return equal_at(shifted_S, build_H(m, r, 1, params), cfg, "S+ gauge vs H1");
}

ResidualReport check_gauge_identification_minus(int m, int r,
                                                const ModelParams& params,
                                                const SamplerConfig& cfg) {
    FormalOperator Sm = build_S_pm_gauged(m, r, params, -1);
    FormalOperator shifted_S =
        translate_coefficient_args(Sm, -params.delta / 2.0, params.kappa / 2.0);
    return equal_at(shifted_S, build_hatH(m, r, 1, params), cfg, "S- gauge vs hatH1");
}

}  // namespace ellops
