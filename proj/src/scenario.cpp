#include "dhjb/scenario.hpp"

namespace dhjb {

namespace {

Scenario base_scenario(double rho, int N, double dt) {
    Scenario s;
    s.params = ModelParams{0.1, 1.0, rho, 0.2, 1.0, 0.0};
    s.f0 = affine_saturating(0.1, 0.2, 10.0, 0.1);
    const double slope[] = {1.0};
    s.kernel = make_kernel(KernelFamily::linear_ramp, slope, N, s.params.T);
    s.utility = UtilityPair{pow_ratio_utility(0.5), zero_utility()};
    s.num.N = N;
    s.num.dt = dt;
    return s;
}

} // namespace

Scenario calibration_scenario() {
    Scenario s = base_scenario(0.65, 100, 0.01);
    s.num.horizon = 7.7;
    s.num.segments = 7;
    return s;
}

Scenario default_scenario() {
    Scenario s = base_scenario(0.3, 200, 1e-3);
    s.num.horizon = 3.0;
    return s;
}

Scenario coarse_scenario() {
    Scenario s;
    s.params = ModelParams{0.1, 0.5, 1.0, 0.2, 1.0, 0.0};
    s.f0 = affine_saturating(0.1, 0.2, 10.0, 0.1);
    const double slope[] = {1.0};
    s.kernel = make_kernel(KernelFamily::linear_ramp, slope, 50, s.params.T);
    s.utility = UtilityPair{pow_ratio_utility(0.5), zero_utility()};
    s.num.N = 50;
    s.num.dt = 0.01;
    s.num.horizon = 5.0;
    s.num.segments = 2;
    return s;
}

} // namespace dhjb
