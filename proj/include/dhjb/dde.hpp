#pragma once

#include "dhjb/model.hpp"
#include "dhjb/state.hpp"

namespace dhjb {

enum class Scheme {
    heun,          // explicit trapezoid on the integral form
    mild_heun      // variation of constants, inner integral by trapezoid
};

/// Integrate the delay state equation
///   x'(t) = r x(t) + f0(x(t), int a(xi) x(t+xi) dxi) - c(t)
/// from eta over [0, horizon]. dt must divide both dxi and the control
/// segment length. Positivity violations are recorded in admissible_until;
/// integration continues past them (the nonlinearity is extended to x < 0).
Trajectory integrate(const ModelParams& params, const Nonlinearity& nl, const Kernel& kernel,
                     const HState& eta, const ControlPath& control, double horizon, double dt,
                     Scheme scheme = Scheme::heun);

struct AdmissibilityVerdict {
    double admissible_until = kInf;
    bool certified_forever = false;
    double tail_floor = 0.0; // min of x over the trailing window of length T
};

/// Runs integrate and reports the first positivity violation. When the
/// control vanishes on the trailing window of length T and the path stays
/// strictly positive there, the exponential lower bound extends positivity
/// past the horizon and certified_forever is set.
AdmissibilityVerdict check_admissible(const ModelParams& params, const Nonlinearity& nl,
                                      const Kernel& kernel, const HState& eta,
                                      const ControlPath& control, double horizon, double dt);

/// Membership in the value function's domain: the null-control path must
/// stay strictly positive on [0, T]; the trailing-window bound then keeps
/// it positive forever.
bool domain_membership(const ModelParams& params, const Nonlinearity& nl, const Kernel& kernel,
                       const HState& eta, double dt);

/// Oracle for the comparison lemma: true iff sub.x <= x(.; eta, control)
/// pointwise on t >= 0 within grid tolerance. Throws on grid mismatch.
bool comparison_check(const ModelParams& params, const Nonlinearity& nl, const Kernel& kernel,
                      const Trajectory& sub, const HState& eta, const ControlPath& control);

/// eta0 * exp(-c_f0 * t), valid for eta in H++ under the null control.
double hpp_lower_bound(const ModelParams& params, const HState& eta, double t);

} // namespace dhjb
