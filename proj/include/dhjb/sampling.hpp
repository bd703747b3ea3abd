#pragma once

#include <random>

#include "dhjb/state.hpp"

namespace dhjb {

using Rng = std::mt19937_64;

inline Rng make_rng(unsigned long long seed) { return Rng{seed}; }

/// Resolution-independent smooth profile
///   c0 + c1 u + c2 u^2 + s1 sin(pi u) + s2 sin(2 pi u),  u = (xi + T)/T,
/// so the same state can be realized on two grids when measuring
/// refinement trends.
struct SmoothSpec {
    double eta0 = 0.0;
    double c0 = 0.0, c1 = 0.0, c2 = 0.0, s1 = 0.0, s2 = 0.0;

    double past(double u) const;
};

SmoothSpec sample_spec(Rng& rng, double amplitude = 1.0);
HState realize(const SmoothSpec& spec, int N, double T);

/// Smooth random past profile (quadrature and finite-difference errors
/// shrink under refinement).
HState sample_smooth_state(Rng& rng, int N, double T, double amplitude = 1.0);

/// Smooth random state with eta0 > lo and eta1 >= lo (a point of H++).
HState sample_Hpp_state(Rng& rng, int N, double T, double lo = 0.2, double hi = 3.0);

/// Smooth random element of D(A): eta1(0) = eta0.
HState sample_domA_state(Rng& rng, int N, double T, double amplitude = 1.0);
SmoothSpec sample_domA_spec(Rng& rng, double amplitude = 1.0);

/// Smooth random element of D(A*): eta1(-T) = 0.
HState sample_domAstar_state(Rng& rng, int N, double T, double amplitude = 1.0);
SmoothSpec sample_domAstar_spec(Rng& rng, double amplitude = 1.0);

/// Nonnegative triangular bump profile with the given total mass.
HState bump_state(double eta0, double center, double width, double mass, int N, double T);

} // namespace dhjb
