#pragma once

#include "ellops/operators.hpp"

namespace ellops {

// Gauge-transformed first-order operators S^+ (sign = +1) and S^- (sign = -1):
// root-free displays with [kappa]/[delta] prefactor on x-terms and a minus
// sign on y-terms; shift keys are single +-e_i.
FormalOperator build_S_pm_gauged(int m, int r, const ModelParams& params, int sign);

// Weight function Delta(x; y) built from gamma-quotients and bracket cross
// factors; used by the gauge-equivalence checks.
ScalarFn build_delta_weight(int m, int r, const ModelParams& params);

// Boost: multiplication by (i/delta) sum x_i - (i/kappa) sum y_i.
FormalOperator build_boost(int m, int r, const ModelParams& params);

// Operator with every coefficient evaluated at translated arguments
// (x + x_offset, y + y_offset); shift keys unchanged.
FormalOperator translate_coefficient_args(const FormalOperator& op, cplx x_offset,
                                          cplx y_offset);

struct PoincareReport {
    ResidualReport hp;  // [H, P] = 0
    ResidualReport hb;  // [H, B] - iP = 0
    ResidualReport pb;  // [P, B] - iH = 0
    bool pass = false;
};

// H = S+ + S-, P = S+ - S-, B the boost; checks all three commutation
// relations of the 1+1 Poincare algebra via shift-operator commutators.
PoincareReport check_poincare(int m, int r, const ModelParams& params,
                              const SamplerConfig& cfg);

// Variable shifts turning gauged S^+ into H^{(1)} and gauged S^- into hatH^{(1)}.
ResidualReport check_gauge_identification_plus(int m, int r,
                                               const ModelParams& params,
                                               const SamplerConfig& cfg);
ResidualReport check_gauge_identification_minus(int m, int r,
                                                const ModelParams& params,
                                                const SamplerConfig& cfg);

}  // namespace ellops
