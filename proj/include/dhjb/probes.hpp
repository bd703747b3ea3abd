#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dhjb/scenario.hpp"
#include "dhjb/state.hpp"
#include "dhjb/value.hpp"

namespace dhjb {

struct ProbeWitness {
    std::string input;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// One row per sample; pass iff max_violation <= tolerance.
struct ProbeReport {
    std::string probe_name;
    int samples = 0;
    double max_violation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool diagnostic = false; // diagnostic probes never gate the exit status
    std::vector<ProbeWitness> witnesses;

    void record(std::string input, double lhs, double rhs, double violation) {
        witnesses.push_back({std::move(input), lhs, rhs});
        max_violation = std::max(max_violation, violation);
        ++samples;
    }
    void finalize() { pass = max_violation <= tolerance; }
};

using ValueOracle = std::function<ValueEstimate(const HState&, const ControlPath*)>;

ValueOracle default_value_oracle(const Scenario& scn);

/// Concavity of the value approximation along random blends.
ProbeReport concavity_probe(const Scenario& scn, int n_pairs, unsigned long long seed,
                            const ValueOracle& oracle = {});

/// Monotonicity under nonnegative bumps of the initial state.
ProbeReport monotonicity_probe(const Scenario& scn, int n_bumps, unsigned long long seed,
                               const ValueOracle& oracle = {});

struct SequenceSpec {
    enum class Kind { present, past_weak } kind = Kind::present;
    int terms = 5;
    double step0 = 0.2; // initial offset
    double decay = 0.5; // geometric factor
};

/// Stability of the present-direction derivative along a convergent state
/// sequence: successive gaps must fall below the relative ceiling tol.cont.
ProbeReport regularity_probe(const Scenario& scn, const HState& eta, const SequenceSpec& spec);

struct DppResult {
    double residual = 0.0;
    double tolerance = 0.0; // combined bracket widths
    double lhs = 0.0;       // direct value estimate
    double rhs = 0.0;       // split-horizon estimate
};

/// |V(eta) - sup_c [ prefix payoff + e^{-rho s} V(X(s)) ]| with the sup over
/// the same control class restricted to [0, s] and the continuation value by
/// approximate_V.
DppResult dpp_residual(const Scenario& scn, const HState& eta, double s);

struct HjbResult {
    double residual_rel = 0.0;
    double rho_v = 0.0;
    double term_pairing = 0.0; // <eta, A* grad V>
    double term_drift = 0.0;   // f(eta) * v_eta0
    double term_u2 = 0.0;
    double term_hamiltonian = 0.0;
    double v_eta0 = 0.0;
    double grad_stability = 0.0;
    double projection_distance = 0.0; // |zeta1(-T)| before the D(A*) projection
    bool gradient_stable = true;      // residual is only meaningful when true
};

/// Residual of rho v = <eta, A* grad v> + f v_eta0 + U2 + H(v_eta0) at eta,
/// with grad v estimated by finite differences (present stencil, past grid
/// bumps with mass normalization) and the past component projected onto
/// zeta1(-T) = 0 before applying A*.
HjbResult hjb_residual(const Scenario& scn, const HState& eta);

/// Suite runners shared by the CLI verify command and the acceptance tests.
struct SuiteCounts {
    int operator_samples = 200;
    int trajectory_samples = 20;
    int value_pairs = 10;
    int hjb_points = 3;
    int sequence_terms = 5;
};

std::vector<ProbeReport> operators_suite(const Scenario& scn, const SuiteCounts& counts,
                                         unsigned long long seed);
std::vector<ProbeReport> trajectories_suite(const Scenario& scn, const SuiteCounts& counts,
                                            unsigned long long seed);
std::vector<ProbeReport> hamiltonian_suite(const Scenario& scn, const SuiteCounts& counts,
                                           unsigned long long seed);
std::vector<ProbeReport> value_suite(const Scenario& scn, const SuiteCounts& counts,
                                     unsigned long long seed);
std::vector<ProbeReport> hjb_suite(const Scenario& scn, const SuiteCounts& counts,
                                   unsigned long long seed);

} // namespace dhjb
