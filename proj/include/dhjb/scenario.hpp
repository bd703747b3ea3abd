#pragma once

#include <algorithm>

#include "dhjb/model.hpp"

namespace dhjb {

/// Discretization and optimizer settings.
struct Numerics {
    double dt = 0.01;
    int N = 100;              // history grid segments (dxi = T/N)
    double horizon = 0.0;     // 0 -> max(5/rho, 3T)
    int segments = 7;         // control segments for value approximation
    double coord_tol = 1e-4;  // golden-section resolution per control segment
    double value_tol = 1e-6;  // sweep improvement stopping threshold
    int max_sweeps = 10;
    double grad_h = 1e-3;     // base eta0 stencil width (scaled by max(1, eta0))
    int bump_nodes = 11;      // probe centers for the past-gradient estimate
    double bump_mass = 1e-3;  // L2 mass of each probe bump
    bool test_mode = false;   // accept hypothesis-violating nonlinearities
    unsigned long long seed = 12345;
};

/// Every probe tolerance in one place; defaults documented in the README.
struct Tolerances {
    double hjb = 0.1;            // relative HJB residual ceiling
    double cont = 5e-2;          // relative gap ceiling for gradient sequences
    double weak_slack = 1e-6;    // multiplicative slack on the weak-norm bound
    double pair = 1e-3;          // adjoint pairing tolerance factor (times scale)
    double equiv = 5e-3;         // DDE vs lifted sup-distance ceiling
    double stab = 5e-2;          // gradient stability threshold, relative
    double opt_gap_factor = 10.0;
    double bracket_slack = 1e-9;
};

struct Scenario {
    ModelParams params;
    Nonlinearity f0;
    Kernel kernel;
    UtilityPair utility;
    Numerics num;
    Tolerances tol;

    double dxi() const { return params.T / num.N; }
    double horizon() const {
        return num.horizon > 0.0 ? num.horizon : std::max(5.0 / params.rho, 3.0 * params.T);
    }
};

/// The calibration setup used by the value and residual suites.
Scenario calibration_scenario();

/// Trajectory-level defaults (finer grids, longer delay-relative horizons).
Scenario default_scenario();

/// Small two-segment setup where exhaustive control-grid search is feasible.
Scenario coarse_scenario();

} // namespace dhjb
