#pragma once

#include <optional>

#include "dhjb/scenario.hpp"
#include "dhjb/state.hpp"

namespace dhjb {

struct JResult {
    double estimate = -kInf; // discounted payoff over [0, horizon]; -inf when inadmissible
    double tail_lo = 0.0;    // certified continuation payoff past the horizon
    double tail_hi = 0.0;    // boundedness ceiling on the continuation payoff
    bool admissible = false;
    double window_min = 0.0; // min of x over the trailing window of length T
};

/// Discounted trapezoid quadrature of U1(c) + U2(x) over [0, horizon] plus
/// the continuation bracket. Inadmissible controls yield the -inf marker.
/// Requires horizon >= T so the trailing window certifies the zero-control
/// continuation.
JResult evaluate_J(const Scenario& scn, const HState& eta, const ControlPath& control,
                   double horizon);

struct ValueEstimate {
    double v_lo = -kInf; // payoff of the best control found (true lower bound
                         // up to integration error)
    double v_hi = -kInf; // v_lo + tail bracket + optimizer gap bound
    ControlPath control;
    double horizon = 0.0;
    double opt_gap = 0.0;
    double tail_width = 0.0;

    bool in_domain() const { return v_lo > -kInf; }
};

/// Lower approximation of the value function by projected coordinate ascent
/// over piecewise-constant controls (golden-section line search per segment,
/// fixed sweep order, deterministic). Returns the -inf marker outside the
/// domain. The optimized objective is the certified lower bound
/// estimate + tail_lo.
ValueEstimate approximate_V(const Scenario& scn, const HState& eta,
                            const ControlPath* warm_start = nullptr);

/// Legendre transform of the consumption utility:
///   H(zeta0) = sup_{c >= 0} (U1(c) - zeta0 c),
/// evaluated at the unique root of U1'(c) = zeta0 (bisection to 1e-12
/// relative). zeta0 must be positive.
double hamiltonian(const UtilityPair& utilities, double zeta0);

/// The maximizer itself: c* with U1'(c*) = zeta0.
double feedback_c(const UtilityPair& utilities, double zeta0);

struct GradientEstimate {
    double v_eta0 = 0.0;   // partial derivative in the present direction
    double h_used = 0.0;
    double stability = 0.0; // |estimate(h) - estimate(h/2)|
};

/// Central difference of approximate_V in the present direction, optimizer
/// warm-started from the base point's maximizer at every stencil point.
/// Throws std::domain_error if a shifted point leaves the domain.
GradientEstimate partial_V_eta0(const Scenario& scn, const HState& eta, double h,
                                const ValueEstimate* base = nullptr);

/// (u1_sup + u2_sup) / rho.
double value_upper_bound(const ModelParams& params);

} // namespace dhjb
