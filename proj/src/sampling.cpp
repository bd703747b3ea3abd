#include "dhjb/sampling.hpp"

#include <cmath>

namespace dhjb {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double SmoothSpec::past(double u) const {
    return c0 + c1 * u + c2 * u * u + s1 * std::sin(kPi * u) + s2 * std::sin(2.0 * kPi * u);
}

SmoothSpec sample_spec(Rng& rng, double amplitude) {
    std::uniform_real_distribution<double> uc(-amplitude, amplitude);
    SmoothSpec s;
    s.c0 = uc(rng);
    s.c1 = uc(rng);
    s.c2 = uc(rng);
    s.s1 = uc(rng);
    s.s2 = uc(rng);
    s.eta0 = uc(rng);
    return s;
}

HState realize(const SmoothSpec& spec, int N, double T) {
    HState s;
    s.dxi = T / N;
    s.eta1.resize(static_cast<size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) s.eta1[i] = spec.past(static_cast<double>(i) / N);
    s.eta0 = spec.eta0;
    return s;
}

HState sample_smooth_state(Rng& rng, int N, double T, double amplitude) {
    return realize(sample_spec(rng, amplitude), N, T);
}

HState sample_Hpp_state(Rng& rng, int N, double T, double lo, double hi) {
    SmoothSpec spec = sample_spec(rng, 0.5 * (hi - lo));
    std::uniform_real_distribution<double> u0(lo, hi);
    spec.eta0 = u0(rng);
    HState s = realize(spec, N, T);
    double mn = s.eta1[0];
    for (double v : s.eta1) mn = std::min(mn, v);
    if (mn < lo)
        for (double& v : s.eta1) v += lo - mn; // lift the past above lo
    return s;
}

SmoothSpec sample_domA_spec(Rng& rng, double amplitude) {
    SmoothSpec spec = sample_spec(rng, amplitude);
    spec.eta0 = spec.past(1.0);
    return spec;
}

HState sample_domA_state(Rng& rng, int N, double T, double amplitude) {
    return realize(sample_domA_spec(rng, amplitude), N, T);
}

SmoothSpec sample_domAstar_spec(Rng& rng, double amplitude) {
    SmoothSpec spec = sample_spec(rng, amplitude);
    // kill the value at u = 0 by absorbing it into the linear term
    const double base = spec.past(0.0); // = c0
    spec.c0 -= base;
    return spec;
}

HState sample_domAstar_state(Rng& rng, int N, double T, double amplitude) {
    return realize(sample_domAstar_spec(rng, amplitude), N, T);
}

HState bump_state(double eta0, double center, double width, double mass, int N, double T) {
    if (width <= 0.0) throw std::invalid_argument("bump_state: width must be positive");
    HState s;
    s.dxi = T / N;
    s.eta1.assign(static_cast<size_t>(N) + 1, 0.0);
    const double peak = 2.0 * mass / width; // triangle of base `width`, area `mass`
    for (int i = 0; i <= N; ++i) {
        const double d = std::abs(s.xi(i) - center);
        if (d < 0.5 * width) s.eta1[i] = peak * (1.0 - 2.0 * d / width);
    }
    s.eta0 = eta0;
    return s;
}

} // namespace dhjb
