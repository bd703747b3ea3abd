#pragma once

#include "dhjb/dde.hpp"
#include "dhjb/model.hpp"
#include "dhjb/state.hpp"

namespace dhjb {

/// A state of H together with generator-domain flags. D(A) requires a
/// W^{1,2} past with eta1(0) = eta0; D(A*) requires eta1(-T) = 0. On
/// samples, W^{1,2} membership is proxied by a finite discrete derivative
/// and the boundary conditions are checked within dom_tol.
struct LiftedState {
    HState state;
    bool in_domain_A = false;
    bool in_domain_Astar = false;
};

/// Boundary-condition tolerance used by the domain flags.
double dom_tol(const HState& eta);

LiftedState classify(const HState& eta);

double h_inner(const HState& a, const HState& b);
double h_norm(const HState& eta);

HState state_add(const HState& a, const HState& b, double scale_b = 1.0);
HState state_scale(const HState& a, double s);

/// A eta = (r eta0, eta1'); requires eta in D(A). The derivative uses
/// centered differences with second-order one-sided stencils at the ends.
LiftedState apply_A(const ModelParams& params, const HState& eta);

/// A^{-1} eta = (eta0/r, eta0/r - int_s^0 eta1); lands in D(A).
LiftedState apply_Ainv(const ModelParams& params, const HState& eta);

/// |eta|_{-1} = |A^{-1} eta|.
double norm_minus1(const ModelParams& params, const HState& eta);

/// A* eta = (r eta0 + eta1(0), -eta1'); requires eta1(-T) = 0 within
/// dom_tol, otherwise throws std::domain_error.
LiftedState apply_Astar(const ModelParams& params, const HState& eta);

/// S(t): present -> eta0 e^{rt}; past at zeta -> eta1(t+zeta) while
/// t+zeta < 0, else eta0 e^{r(t+zeta)}.
HState apply_semigroup(const ModelParams& params, double t, const HState& eta);

/// S*(t) for 0 <= t <= T:
///   (e^{rt}(eta0 + int_{-t}^0 eta1(xi) e^{r xi} dxi), eta1(. - t) 1_{[-T,0]}(. - t)).
HState apply_adjoint_semigroup(const ModelParams& params, double t, const HState& eta);

/// Mild (variation-of-constants) integration of the lifted state equation.
/// The returned trajectory's state_at(m) is the lifted state X(t_m).
Trajectory integrate_mild(const ModelParams& params, const Nonlinearity& nl, const Kernel& kernel,
                          const HState& eta, const ControlPath& control, double horizon, double dt);

/// Lipschitz constant of the drift in the |.|_{-1} norm:
///   C_a = r + |A*(0, a)|.
/// Throws std::domain_error when a(-T) != 0 (the bound genuinely fails then).
double lipA_constant(const ModelParams& params, const Kernel& kernel);

/// |eta0| + |int a eta1| <= C_a |eta|_{-1}, the weak-norm bound behind the
/// Lipschitz property. Returns (lhs, rhs) for inspection.
struct WeakBoundSample {
    double lhs = 0.0;
    double rhs = 0.0;
};
WeakBoundSample weak_norm_bound(const ModelParams& params, const Kernel& kernel, const HState& eta);

/// With a == 1, eta^n = (0, n 1_{[-T,-T+1/n]}) keeps the pairing
/// int a eta1^n = 1 while |eta^n|_{-1} -> 0; both values are computed from
/// the exact piecewise-linear antiderivative of the indicator.
struct CounterexamplePoint {
    double mass = 0.0; // int a eta1^n (a == 1)
    double nm1 = 0.0;  // |eta^n|_{-1}
};
CounterexamplePoint counterexample_sequence(int n, const ModelParams& params, double dxi);

struct GronwallResult {
    double ratio = 0.0;          // max_t |X - Xbar|_{-1} / |eta - etabar|_{-1}
    double present_ratio = 0.0;  // max_t |X0 - Xbar0| / |eta - etabar|_{-1}
};

/// Runs both null-control mild trajectories over [0, T] and reports the
/// weak-norm stability ratio. Throws on coincident initial states.
GronwallResult gronwall_stability(const ModelParams& params, const Nonlinearity& nl,
                                  const Kernel& kernel, const HState& eta, const HState& eta_bar,
                                  double dt);

/// The constant the stability ratio is tested against, assembled from the
/// semigroup bound M_S = sqrt(3+2T) e^{rT} and the weak-norm Lipschitz rate
/// L = sqrt(1+T) c_f0 C_a / r via Gronwall: M_S exp(M_S L T).
double gronwall_bound(const ModelParams& params, const Kernel& kernel);

} // namespace dhjb
