#include "dhjb/probes.hpp"

#include <algorithm>
#include <cmath>

#include "dhjb/dde.hpp"
#include "dhjb/hilbert.hpp"
#include "dhjb/sampling.hpp"

namespace dhjb {

namespace {

std::string tag(int i) { return "sample_" + std::to_string(i); }

} // namespace

ValueOracle default_value_oracle(const Scenario& scn) {
    return [&scn](const HState& eta, const ControlPath* warm) {
        return approximate_V(scn, eta, warm);
    };
}

ProbeReport concavity_probe(const Scenario& scn, int n_pairs, unsigned long long seed,
                            const ValueOracle& oracle_in) {
    const ValueOracle oracle = oracle_in ? oracle_in : default_value_oracle(scn);
    ProbeReport rep;
    rep.probe_name = "value_concavity";
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> ul(0.1, 0.9);
    for (int i = 0; i < n_pairs; ++i) {
        const HState a = sample_Hpp_state(rng, scn.num.N, scn.params.T);
        const HState b = sample_Hpp_state(rng, scn.num.N, scn.params.T);
        const double lam = ul(rng);
        const HState blend = state_add(state_scale(a, lam), b, 1.0 - lam);
        const ValueEstimate va = oracle(a, nullptr);
        const ValueEstimate vb = oracle(b, nullptr);
        const ValueEstimate vm = oracle(blend, nullptr);
        if (!va.in_domain() || !vb.in_domain() || !vm.in_domain()) continue;
        const double lhs = lam * va.v_lo + (1.0 - lam) * vb.v_lo;
        const double budget = vm.opt_gap + lam * va.opt_gap + (1.0 - lam) * vb.opt_gap;
        rep.record(tag(i), lhs, vm.v_lo + budget, lhs - vm.v_lo - budget);
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport monotonicity_probe(const Scenario& scn, int n_bumps, unsigned long long seed,
                               const ValueOracle& oracle_in) {
    const ValueOracle oracle = oracle_in ? oracle_in : default_value_oracle(scn);
    ProbeReport rep;
    rep.probe_name = "value_monotonicity";
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> usz(0.05, 0.8);
    for (int i = 0; i < n_bumps; ++i) {
        const HState eta = sample_Hpp_state(rng, scn.num.N, scn.params.T);
        HState bigger = eta;
        const int mode = i % 3; // present-only, past-only, both
        const double amount = usz(rng);
        if (mode == 0 || mode == 2) bigger.eta0 += amount;
        if (mode == 1 || mode == 2)
            for (double& v : bigger.eta1) v += amount;
        const ValueEstimate v1 = oracle(eta, nullptr);
        const ValueEstimate v2 = oracle(bigger, nullptr);
        if (!v1.in_domain() || !v2.in_domain()) continue;
        rep.record(tag(i), v1.v_lo, v2.v_hi, v1.v_lo - v2.v_hi);
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport regularity_probe(const Scenario& scn, const HState& eta, const SequenceSpec& spec) {
    ProbeReport rep;
    rep.probe_name = spec.kind == SequenceSpec::Kind::present ? "regularity_present"
                                                              : "regularity_past_weak";
    HState dir;
    if (spec.kind == SequenceSpec::Kind::present) {
        dir = HState{1.0, std::vector<double>(eta.eta1.size(), 0.0), eta.dxi};
    } else {
        dir = bump_state(0.0, -0.5 * eta.delay_span(), 0.25 * eta.delay_span(), 1.0,
                         eta.segments(), eta.delay_span());
    }
    std::vector<double> grads;
    const double h = scn.num.grad_h * std::max(1.0, std::abs(eta.eta0));
    double offset = spec.step0;
    for (int n = 0; n < spec.terms; ++n) {
        const HState point = state_add(eta, dir, offset);
        grads.push_back(partial_V_eta0(scn, point, h).v_eta0);
        offset *= spec.decay;
    }
    const double ref = std::max(1e-12, std::abs(grads.back()));
    for (size_t i = 0; i + 1 < grads.size(); ++i) {
        const double gap = std::abs(grads[i + 1] - grads[i]) / ref;
        rep.record("term_" + std::to_string(i), grads[i], grads[i + 1], gap);
    }
    rep.tolerance = scn.tol.cont;
    rep.finalize();
    return rep;
}

DppResult dpp_residual(const Scenario& scn, const HState& eta, double s) {
    const ValueEstimate base = approximate_V(scn, eta);
    if (!base.in_domain()) throw std::domain_error("dpp_residual: eta outside the domain");
    const double dt = scn.num.dt;
    const int s_steps = static_cast<int>(std::llround(s / dt));
    if (s_steps < 1 || s_steps * dt >= base.horizon)
        throw std::invalid_argument("dpp_residual: split point outside (0, horizon)");
    const double s_eff = s_steps * dt;
    const double seg_len = base.control.dt_seg;
    const int n_seg = std::max(1, static_cast<int>(std::ceil(s_eff / seg_len - 1e-9)));
    const double rho = scn.params.rho;

    ValueEstimate best_cont;
    auto objective = [&](const std::vector<double>& vals) {
        ControlPath prefix{seg_len, vals};
        const Trajectory tr =
            integrate(scn.params, scn.f0, scn.kernel, eta, prefix, s_eff, dt);
        if (tr.admissible_until <= s_eff) return -kInf;
        double pay = 0.0;
        for (int m = 0; m <= s_steps; ++m) {
            const double w = (m == 0 || m == s_steps) ? 0.5 : 1.0;
            pay += w * std::exp(-rho * m * dt) *
                   (scn.utility.u1(tr.c[tr.hist_len + m]) + scn.utility.u2(tr.present(m)));
        }
        pay *= dt;
        // warm-start the continuation from the tail of the base maximizer
        ControlPath warm{seg_len, {}};
        for (double t = s_eff; t < base.horizon; t += seg_len)
            warm.values.push_back(base.control.at(t + 0.5 * seg_len));
        const ValueEstimate cont = approximate_V(scn, tr.state_at(s_steps), &warm);
        if (!cont.in_domain()) return -kInf;
        best_cont = cont;
        return pay + std::exp(-rho * s_eff) * cont.v_lo;
    };

    std::vector<double> vals(static_cast<size_t>(n_seg));
    for (int j = 0; j < n_seg; ++j) vals[j] = base.control.at((j + 0.5) * seg_len);
    double best = objective(vals);
    ValueEstimate cont_at_best = best_cont;
    constexpr double kGolden = 0.6180339887498949;
    for (int sweep = 0; sweep < 2; ++sweep) {
        for (int j = 0; j < n_seg; ++j) {
            const double cur = vals[static_cast<size_t>(j)];
            double lo = std::max(0.0, cur - 1.0), hi = cur + 1.0;
            for (int it = 0; it < 12; ++it) {
                const double x1 = hi - kGolden * (hi - lo), x2 = lo + kGolden * (hi - lo);
                vals[static_cast<size_t>(j)] = x1;
                const double f1 = objective(vals);
                vals[static_cast<size_t>(j)] = x2;
                const double f2 = objective(vals);
                if (f1 < f2)
                    lo = x1;
                else
                    hi = x2;
            }
            vals[static_cast<size_t>(j)] = 0.5 * (lo + hi);
            const double f = objective(vals);
            if (f > best) {
                best = f;
                cont_at_best = best_cont;
            } else {
                vals[static_cast<size_t>(j)] = cur;
            }
        }
    }
    if (best == -kInf) {
        vals.assign(static_cast<size_t>(n_seg), 0.0);
        best = objective(vals);
        cont_at_best = best_cont;
    }

    DppResult res;
    res.lhs = base.v_lo;
    res.rhs = best;
    res.residual = std::abs(base.v_lo - best);
    res.tolerance = (base.v_hi - base.v_lo) +
                    std::exp(-rho * s_eff) * (cont_at_best.v_hi - cont_at_best.v_lo);
    return res;
}

HjbResult hjb_residual(const Scenario& scn, const HState& eta) {
    HjbResult res;
    const ValueEstimate base = approximate_V(scn, eta);
    if (!base.in_domain()) throw std::domain_error("hjb_residual: eta outside the domain");
    const double vhat = base.v_lo;

    const double h = scn.num.grad_h * std::max(1.0, std::abs(eta.eta0));
    const GradientEstimate grad = partial_V_eta0(scn, eta, h, &base);
    res.v_eta0 = grad.v_eta0;
    res.grad_stability = grad.stability;
    res.gradient_stable =
        grad.stability <= scn.tol.stab * std::max(1e-8, std::abs(grad.v_eta0));

    // Past-direction gradient density via single-node bumps, mass normalized
    // by the trapezoid weight of the node.
    const int N = scn.num.N;
    const int P = std::max(3, scn.num.bump_nodes);
    std::vector<int> centers(static_cast<size_t>(P));
    for (int p = 0; p < P; ++p)
        centers[p] = static_cast<int>(std::llround(static_cast<double>(p) * N / (P - 1)));
    std::vector<double> zeta_at(static_cast<size_t>(P));
    for (int p = 0; p < P; ++p) {
        const int i = centers[p];
        const double w = (i == 0 || i == N) ? 0.5 : 1.0;
        const double mass = scn.num.bump_mass;
        const double node_h = mass / (scn.dxi() * w);
        HState up = eta, dn = eta;
        up.eta1[i] += node_h;
        dn.eta1[i] -= node_h;
        const ValueEstimate vu = approximate_V(scn, up, &base.control);
        const ValueEstimate vd = approximate_V(scn, dn, &base.control);
        if (!vu.in_domain() || !vd.in_domain())
            throw std::domain_error("hjb_residual: bumped state leaves the domain");
        zeta_at[p] = (vu.v_lo - vd.v_lo) / (2.0 * mass);
    }
    res.projection_distance = std::abs(zeta_at[0]);
    zeta_at[0] = 0.0; // gradients of the value map live in D(A*)

    HState zeta;
    zeta.dxi = scn.dxi();
    zeta.eta0 = grad.v_eta0;
    zeta.eta1.resize(static_cast<size_t>(N) + 1);
    for (int i = 0, p = 0; i <= N; ++i) {
        while (centers[p + 1] < i) ++p;
        const double wseg = static_cast<double>(i - centers[p]) /
                            std::max(1, centers[p + 1] - centers[p]);
        zeta.eta1[i] = (1.0 - wseg) * zeta_at[p] + wseg * zeta_at[p + 1];
    }

    const LiftedState astar = apply_Astar(scn.params, zeta);
    res.term_pairing = h_inner(eta, astar.state);
    res.term_drift = eval_drift(scn.f0, scn.kernel, eta) * grad.v_eta0;
    res.term_u2 = scn.utility.u2.is_zero() ? 0.0 : scn.utility.u2(eta.eta0);
    res.term_hamiltonian = hamiltonian(scn.utility, grad.v_eta0);
    res.rho_v = scn.params.rho * vhat;
    res.residual_rel =
        std::abs(res.rho_v - res.term_pairing - res.term_drift - res.term_u2 -
                 res.term_hamiltonian) /
        std::max(1.0, std::abs(res.rho_v));
    return res;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

namespace {

ProbeReport identity_probe(const Scenario& scn, int n, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "a_inverse_identity";
    for (int i = 0; i < n; ++i) {
        const HState eta = sample_smooth_state(rng, scn.num.N, scn.params.T);
        const LiftedState inv = apply_Ainv(scn.params, eta);
        const LiftedState back = apply_A(scn.params, inv.state);
        const double err = h_norm(state_add(back.state, eta, -1.0));
        const double scale = std::max(1.0, h_norm(eta));
        rep.record(tag(i), err, scn.tol.pair * scale, err - scn.tol.pair * scale);
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport inverse_on_domain_probe(const Scenario& scn, int n, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "ainv_a_identity_on_domain";
    for (int i = 0; i < n; ++i) {
        const HState eta = sample_domA_state(rng, scn.num.N, scn.params.T);
        const LiftedState img = apply_A(scn.params, eta);
        const LiftedState back = apply_Ainv(scn.params, img.state);
        const double err = h_norm(state_add(back.state, eta, -1.0));
        const double scale = std::max(1.0, h_norm(eta));
        rep.record(tag(i), err, scn.tol.pair * scale, err - scn.tol.pair * scale);
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport adjoint_pairing_probe(const Scenario& scn, int n, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "adjoint_pairing";
    for (int i = 0; i < n; ++i) {
        const HState z = sample_domA_state(rng, scn.num.N, scn.params.T);
        const HState e = sample_domAstar_state(rng, scn.num.N, scn.params.T);
        const LiftedState Az = apply_A(scn.params, z);
        const LiftedState Ae = apply_Astar(scn.params, e);
        const double lhs = h_inner(Az.state, e);
        const double rhs = h_inner(z, Ae.state);
        const double scale =
            std::max(1.0, h_norm(Az.state) * h_norm(e) + h_norm(z) * h_norm(Ae.state));
        rep.record(tag(i), lhs, rhs, std::abs(lhs - rhs) - scn.tol.pair * scale);
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport semigroup_bound_probe(const Scenario& scn, int n, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "semigroup_norm_bound";
    const double T = scn.params.T;
    std::uniform_real_distribution<double> ut(0.0, 2.0 * T);
    for (int i = 0; i < n; ++i) {
        const HState eta = sample_smooth_state(rng, scn.num.N, T);
        const double t = ut(rng);
        const HState st = apply_semigroup(scn.params, t, eta);
        const double lhs = h_norm(st);
        const double rhs = (3.0 + 2.0 * T) * std::exp(2.0 * scn.params.r * t) * h_norm(eta) *
                           h_norm(eta);
        rep.record(tag(i), lhs * lhs, rhs, lhs * lhs - rhs - 1e-9);
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport semigroup_law_probe(const Scenario& scn, int n, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "semigroup_law";
    const double dxi = scn.dxi();
    std::uniform_int_distribution<int> uk(0, scn.num.N);
    for (int i = 0; i < n; ++i) {
        const HState eta = sample_smooth_state(rng, scn.num.N, scn.params.T);
        const double s = uk(rng) * dxi, t = uk(rng) * dxi;
        const HState one = apply_semigroup(scn.params, s, apply_semigroup(scn.params, t, eta));
        const HState two = apply_semigroup(scn.params, s + t, eta);
        const double err = h_norm(state_add(one, two, -1.0));
        const double tol = 1e-10 * std::max(1.0, h_norm(two));
        rep.record(tag(i), err, tol, err - tol);
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport adjoint_semigroup_duality_probe(const Scenario& scn, int n, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "adjoint_semigroup_duality";
    std::uniform_real_distribution<double> ut(0.0, scn.params.T);
    for (int i = 0; i < n; ++i) {
        const HState z = sample_smooth_state(rng, scn.num.N, scn.params.T);
        const HState e = sample_smooth_state(rng, scn.num.N, scn.params.T);
        const double t = ut(rng);
        const double lhs = h_inner(apply_semigroup(scn.params, t, z), e);
        const double rhs = h_inner(z, apply_adjoint_semigroup(scn.params, t, e));
        const double scale = std::max(1.0, h_norm(z) * h_norm(e));
        const double tol = 20.0 * scn.dxi() * scale;
        rep.record(tag(i), lhs, rhs, std::abs(lhs - rhs) - tol);
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport weak_norm_bound_probe(const Scenario& scn, int n, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "weak_norm_bound";
    for (int i = 0; i < n; ++i) {
        const HState eta = sample_smooth_state(rng, scn.num.N, scn.params.T);
        const WeakBoundSample s = weak_norm_bound(scn.params, scn.kernel, eta);
        rep.record(tag(i), s.lhs, s.rhs, s.lhs - s.rhs * (1.0 + scn.tol.weak_slack));
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport counterexample_probe(const Scenario& scn) {
    ProbeReport rep;
    rep.probe_name = "flat_kernel_counterexample";
    // a == 1: the pairing stays 1 while |eta^n|_{-1} shrinks, so the ratio
    // blows up; require monotone growth and a 2x gain from n=1 to n=8.
    double prev_ratio = 0.0, ratio1 = 0.0, ratio8 = 0.0;
    bool monotone = true;
    const int n0 = static_cast<int>(std::ceil(1.0 / scn.params.T - 1e-12));
    for (int mult : {1, 2, 4, 8}) {
        const int nn = n0 * mult;
        const CounterexamplePoint p = counterexample_sequence(nn, scn.params, scn.dxi());
        const double ratio = p.mass / p.nm1;
        if (mult == 1) ratio1 = ratio;
        if (mult == 8) ratio8 = ratio;
        if (ratio < prev_ratio) monotone = false;
        prev_ratio = ratio;
        rep.record("n_" + std::to_string(nn), p.mass, p.nm1, 0.0);
    }
    if (!monotone) rep.max_violation = 1.0;
    if (ratio8 < 2.0 * ratio1) rep.max_violation = 1.0;
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport lip_constant_rejects_probe(const Scenario& scn) {
    ProbeReport rep;
    rep.probe_name = "weak_bound_rejects_flat_kernel";
    const Kernel flat = flat_kernel(1.0, scn.num.N, scn.params.T);
    bool rejected = false;
    try {
        (void)lipA_constant(scn.params, flat);
    } catch (const std::domain_error&) {
        rejected = true;
    }
    rep.record("flat_kernel", rejected ? 1.0 : 0.0, 1.0, rejected ? 0.0 : 1.0);
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

} // namespace

std::vector<ProbeReport> operators_suite(const Scenario& scn, const SuiteCounts& counts,
                                         unsigned long long seed) {
    Rng rng = make_rng(seed);
    std::vector<ProbeReport> reps;
    reps.push_back(identity_probe(scn, counts.operator_samples, rng));
    reps.push_back(inverse_on_domain_probe(scn, counts.operator_samples, rng));
    reps.push_back(adjoint_pairing_probe(scn, counts.operator_samples, rng));
    reps.push_back(semigroup_bound_probe(scn, counts.operator_samples, rng));
    reps.push_back(semigroup_law_probe(scn, counts.operator_samples / 2, rng));
    reps.push_back(adjoint_semigroup_duality_probe(scn, counts.operator_samples / 2, rng));
    reps.push_back(weak_norm_bound_probe(scn, counts.operator_samples, rng));
    reps.push_back(counterexample_probe(scn));
    reps.push_back(lip_constant_rejects_probe(scn));
    return reps;
}

namespace {

ProbeReport self_convergence_probe(const Scenario& scn, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "self_convergence_order";
    const HState eta = sample_Hpp_state(rng, scn.num.N, scn.params.T);
    const ControlPath c = const_control(0.05, 3.0 * scn.params.T);
    const double horizon = 3.0 * scn.params.T;
    const double dt = scn.dxi(); // coarsest aligned step
    auto terminal = [&](double step) {
        return integrate(scn.params, scn.f0, scn.kernel, eta, c, horizon, step)
            .present(static_cast<int>(std::llround(horizon / step)));
    };
    const double ref = terminal(dt / 16.0);
    const double e1 = std::abs(terminal(dt) - ref);
    const double e2 = std::abs(terminal(dt / 2.0) - ref);
    const double factor = e1 / std::max(e2, 1e-16);
    rep.record("halving_factor", e1, e2, 1.8 - factor);
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport comparison_probe(const Scenario& scn, int n, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "comparison_lemma";
    std::uniform_real_distribution<double> uc(0.0, 0.3), ud(0.0, 0.5), ush(0.0, 0.4);
    const double horizon = 2.0 * scn.params.T;
    for (int i = 0; i < n; ++i) {
        const HState eta = sample_Hpp_state(rng, scn.num.N, scn.params.T);
        HState smaller = eta;
        smaller.eta0 = std::max(1e-3, eta.eta0 - ush(rng));
        const double shift = ush(rng);
        for (double& v : smaller.eta1) v = std::max(0.0, v - shift);
        ControlPath c{scn.params.T, {uc(rng), uc(rng)}};
        ControlPath c_plus = c;
        const double delta = ud(rng);
        for (double& v : c_plus.values) v += delta;
        const Trajectory sub =
            integrate(scn.params, scn.f0, scn.kernel, smaller, c_plus, horizon, scn.num.dt);
        const bool ok = comparison_check(scn.params, scn.f0, scn.kernel, sub, eta, c);
        rep.record(tag(i), ok ? 1.0 : 0.0, 1.0, ok ? 0.0 : 1.0);
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport comparison_negative_control_probe(const Scenario& scn, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "comparison_detects_planted_violation";
    const HState eta = sample_Hpp_state(rng, scn.num.N, scn.params.T);
    const ControlPath c = const_control(0.1, 2.0 * scn.params.T);
    Trajectory planted =
        integrate(scn.params, scn.f0, scn.kernel, eta, c, 2.0 * scn.params.T, scn.num.dt);
    const double scale = sup_abs(planted.x);
    const double bump = 100.0 * grid_tol(scn.num.dt, scn.dxi(), scale);
    for (size_t j = planted.x.size() / 2; j < planted.x.size(); ++j) planted.x[j] += bump;
    const bool detected = !comparison_check(scn.params, scn.f0, scn.kernel, planted, eta, c);
    rep.record("planted_bump", detected ? 1.0 : 0.0, 1.0, detected ? 0.0 : 1.0);
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport positivity_floor_probe(const Scenario& scn, int n, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "positivity_exponential_floor";
    const double horizon = 3.0 * scn.params.T;
    for (int i = 0; i < n; ++i) {
        const HState eta = sample_Hpp_state(rng, scn.num.N, scn.params.T);
        const Trajectory tr =
            integrate(scn.params, scn.f0, scn.kernel, eta, ControlPath{}, horizon, scn.num.dt);
        const double tol = grid_tol(scn.num.dt, scn.dxi(), sup_abs(tr.x));
        double worst = -kInf;
        for (int m = 0; m <= tr.steps(); ++m) {
            const double bound = hpp_lower_bound(scn.params, eta, m * tr.dt);
            worst = std::max(worst, bound - tol - tr.present(m));
        }
        rep.record(tag(i), worst, 0.0, worst);
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport monotone_initial_data_probe(const Scenario& scn, int n, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "monotone_in_initial_data";
    std::uniform_real_distribution<double> ush(0.0, 0.5);
    const double horizon = 2.0 * scn.params.T;
    for (int i = 0; i < n; ++i) {
        const HState big = sample_Hpp_state(rng, scn.num.N, scn.params.T);
        HState small = big;
        small.eta0 = std::max(1e-3, big.eta0 - ush(rng));
        const double shift = ush(rng);
        for (double& v : small.eta1) v = std::max(0.0, v - shift);
        const ControlPath c = const_control(0.05, horizon);
        const Trajectory ts =
            integrate(scn.params, scn.f0, scn.kernel, small, c, horizon, scn.num.dt);
        const bool ok = comparison_check(scn.params, scn.f0, scn.kernel, ts, big, c);
        rep.record(tag(i), ok ? 1.0 : 0.0, 1.0, ok ? 0.0 : 1.0);
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

double equivalence_sup_distance(const Scenario& scn, const HState& eta, const ControlPath& c,
                                double horizon, double dt) {
    const Trajectory dde = integrate(scn.params, scn.f0, scn.kernel, eta, c, horizon, dt);
    const Trajectory mild = integrate_mild(scn.params, scn.f0, scn.kernel, eta, c, horizon, dt);
    double sup = 0.0;
    for (int m = 0; m <= dde.steps(); ++m) {
        const double d = h_norm(state_add(mild.state_at(m), dde.state_at(m), -1.0));
        sup = std::max(sup, d);
    }
    return sup;
}

ProbeReport equivalence_probe(const Scenario& scn, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "lifted_dde_equivalence";
    const HState eta = sample_Hpp_state(rng, scn.num.N, scn.params.T);
    const double horizon = 3.0 * scn.params.T;
    ControlPath c{scn.params.T, {0.05, 0.2, 0.1}};
    const double sup = equivalence_sup_distance(scn, eta, c, horizon, scn.num.dt);
    rep.record("sup_distance", sup, scn.tol.equiv, sup - scn.tol.equiv);
    // refine both grids jointly; the distance must shrink by >= 1.8
    Scenario fine = scn;
    fine.num.N *= 2;
    fine.num.dt = scn.num.dt / 2.0;
    fine.kernel = resample_kernel(scn.kernel, fine.num.N);
    HState eta_f;
    eta_f.dxi = fine.dxi();
    eta_f.eta0 = eta.eta0;
    eta_f.eta1.resize(static_cast<size_t>(fine.num.N) + 1);
    for (int i = 0; i <= fine.num.N; ++i) eta_f.eta1[i] = eta.eta1_at(eta_f.xi(i));
    const double sup_f = equivalence_sup_distance(fine, eta_f, c, horizon, fine.num.dt);
    const double factor = sup / std::max(sup_f, 1e-16);
    rep.record("refinement_factor", sup_f, sup, 1.8 - factor);
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport gronwall_probe(const Scenario& scn, int n, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "gronwall_weak_norm_stability";
    const double bound = gronwall_bound(scn.params, scn.kernel);
    for (int i = 0; i < n; ++i) {
        const HState a = sample_Hpp_state(rng, scn.num.N, scn.params.T);
        const HState b = sample_Hpp_state(rng, scn.num.N, scn.params.T);
        const GronwallResult g =
            gronwall_stability(scn.params, scn.f0, scn.kernel, a, b, scn.num.dt);
        rep.record(tag(i), g.ratio, bound, g.ratio - bound);
        const double pbound = scn.params.r * bound;
        rep.record(tag(i) + "_present", g.present_ratio, pbound, g.present_ratio - pbound);
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

} // namespace

std::vector<ProbeReport> trajectories_suite(const Scenario& scn, const SuiteCounts& counts,
                                            unsigned long long seed) {
    Rng rng = make_rng(seed);
    std::vector<ProbeReport> reps;
    reps.push_back(self_convergence_probe(scn, rng));
    reps.push_back(comparison_probe(scn, counts.trajectory_samples, rng));
    reps.push_back(comparison_negative_control_probe(scn, rng));
    reps.push_back(positivity_floor_probe(scn, counts.trajectory_samples, rng));
    reps.push_back(monotone_initial_data_probe(scn, counts.trajectory_samples, rng));
    reps.push_back(equivalence_probe(scn, rng));
    reps.push_back(gronwall_probe(scn, std::max(2, counts.trajectory_samples / 2), rng));
    return reps;
}

namespace {

ProbeReport hamiltonian_grid_probe(const Scenario& scn, int grid_points, Rng&) {
    ProbeReport rep;
    rep.probe_name = "hamiltonian_grid_match";
    for (double z = 1e-2; z <= 1e2 * (1.0 + 1e-12); z *= 10.0) {
        const double h = hamiltonian(scn.utility, z);
        double best = -kInf;
        const double cmax = feedback_c(scn.utility, z) * 4.0 + 1.0;
        for (int i = 0; i <= grid_points; ++i) {
            const double c = cmax * i / grid_points;
            best = std::max(best, scn.utility.u1(c) - z * c);
        }
        rep.record("zeta_" + std::to_string(z), h, best, std::abs(h - best) - 1e-6);
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport hamiltonian_convexity_probe(const Scenario& scn, int n, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "hamiltonian_strict_convexity";
    std::uniform_real_distribution<double> ulog(std::log(1e-2), std::log(1e2));
    for (int i = 0; i < n; ++i) {
        double z1 = std::exp(ulog(rng)), z2 = std::exp(ulog(rng));
        if (std::abs(z1 - z2) < 0.05 * std::max(z1, z2)) z2 *= 1.3;
        const double mid = hamiltonian(scn.utility, 0.5 * (z1 + z2));
        const double avg =
            0.5 * (hamiltonian(scn.utility, z1) + hamiltonian(scn.utility, z2));
        // strictly convex: the midpoint must lie strictly below the chord
        rep.record(tag(i), mid, avg, mid - avg + 1e-12);
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport feedback_foc_probe(const Scenario& scn, Rng&) {
    ProbeReport rep;
    rep.probe_name = "feedback_first_order_condition";
    double prev_c = kInf;
    for (double z = 1e-2; z <= 1e2 * (1.0 + 1e-12); z *= std::sqrt(10.0)) {
        const double c = feedback_c(scn.utility, z);
        const double resid = std::abs(scn.utility.u1.deriv(c) - z);
        rep.record("zeta_" + std::to_string(z), resid, 1e-8 * z, resid - 1e-8 * z);
        // monotone: larger slope price, smaller consumption
        rep.record("monotone_" + std::to_string(z), c, prev_c, c - prev_c);
        prev_c = c;
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport value_ceiling_probe(const Scenario& scn, int n, Rng& rng) {
    ProbeReport rep;
    rep.probe_name = "value_ceiling";
    const double bound = value_upper_bound(scn.params);
    for (int i = 0; i < n; ++i) {
        const HState eta = sample_Hpp_state(rng, scn.num.N, scn.params.T);
        const ValueEstimate v = approximate_V(scn, eta);
        if (!v.in_domain()) continue;
        const double allowed = bound + v.opt_gap + 1e-6 * (1.0 + bound);
        rep.record(tag(i), v.v_hi, allowed, v.v_hi - allowed);
    }
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport large_eta0_probe(const Scenario& scn) {
    ProbeReport rep;
    rep.probe_name = "value_reaches_ceiling";
    const double bound = value_upper_bound(scn.params);
    double best = -kInf;
    for (double eta0 : {1.0, 1e1, 1e2, 1e3, 1e4}) {
        const HState eta = const_state(eta0, 1.0, scn.num.N, scn.params.T);
        const ValueEstimate v = approximate_V(scn, eta);
        if (v.in_domain()) best = std::max(best, v.v_lo);
        rep.record("eta0_" + std::to_string(eta0), v.v_lo, bound, 0.0);
    }
    rep.max_violation = (bound - best) / bound - 0.05; // within 5% of the ceiling
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

ProbeReport concavity_self_test(const Scenario& scn) {
    ProbeReport rep;
    rep.probe_name = "concavity_probe_detects_planted_violation";
    rep.diagnostic = false;
    // A convex stand-in for the value map must trip the probe.
    ValueOracle fake = [](const HState& eta, const ControlPath*) {
        ValueEstimate v;
        v.v_lo = 0.1 * (eta.eta0 * eta.eta0);
        v.v_hi = v.v_lo;
        v.opt_gap = 1e-9;
        return v;
    };
    const ProbeReport inner = concavity_probe(scn, 8, 99991ull, fake);
    const bool detected = !inner.pass;
    rep.record("planted_convex_value", detected ? 1.0 : 0.0, 1.0, detected ? 0.0 : 1.0);
    rep.tolerance = 0.0;
    rep.finalize();
    return rep;
}

} // namespace

std::vector<ProbeReport> hamiltonian_suite(const Scenario& scn, const SuiteCounts& counts,
                                           unsigned long long seed) {
    Rng rng = make_rng(seed);
    std::vector<ProbeReport> reps;
    reps.push_back(hamiltonian_grid_probe(scn, 100000, rng));
    reps.push_back(hamiltonian_convexity_probe(scn, counts.operator_samples, rng));
    reps.push_back(feedback_foc_probe(scn, rng));
    return reps;
}

std::vector<ProbeReport> value_suite(const Scenario& scn, const SuiteCounts& counts,
                                     unsigned long long seed) {
    Rng rng = make_rng(seed);
    std::vector<ProbeReport> reps;
    reps.push_back(concavity_probe(scn, counts.value_pairs, seed + 1));
    reps.push_back(monotonicity_probe(scn, counts.value_pairs, seed + 2));
    reps.push_back(value_ceiling_probe(scn, std::max(3, counts.value_pairs / 2), rng));
    reps.push_back(large_eta0_probe(scn));
    reps.push_back(concavity_self_test(scn));
    return reps;
}

std::vector<ProbeReport> hjb_suite(const Scenario& scn, const SuiteCounts& counts,
                                   unsigned long long seed) {
    Rng rng = make_rng(seed);
    std::vector<ProbeReport> reps;

    ProbeReport dpp;
    dpp.probe_name = "dpp_residual";
    const HState eta = sample_Hpp_state(rng, scn.num.N, scn.params.T);
    for (double split : {0.5 * scn.params.T, scn.params.T}) {
        const DppResult r = dpp_residual(scn, eta, split);
        dpp.record("split_" + std::to_string(split), r.residual, r.tolerance,
                   r.residual - r.tolerance);
    }
    dpp.tolerance = 0.0;
    dpp.finalize();
    reps.push_back(dpp);

    ProbeReport hjb;
    hjb.probe_name = "hjb_residual";
    for (int i = 0; i < counts.hjb_points; ++i) {
        const HState point = sample_Hpp_state(rng, scn.num.N, scn.params.T, 0.5, 2.0);
        const HjbResult r = hjb_residual(scn, point);
        if (!r.gradient_stable) {
            hjb.record(tag(i) + "_unstable_gradient", r.grad_stability, scn.tol.stab, 0.0);
            continue;
        }
        hjb.record(tag(i), r.residual_rel, scn.tol.hjb, r.residual_rel - scn.tol.hjb);
    }
    hjb.tolerance = 0.0;
    hjb.finalize();
    reps.push_back(hjb);

    const HState base = sample_Hpp_state(rng, scn.num.N, scn.params.T, 0.8, 1.5);
    SequenceSpec present{SequenceSpec::Kind::present, counts.sequence_terms, 0.1, 0.5};
    reps.push_back(regularity_probe(scn, base, present));
    SequenceSpec past{SequenceSpec::Kind::past_weak, counts.sequence_terms, 0.1, 0.5};
    reps.push_back(regularity_probe(scn, base, past));
    return reps;
}

} // namespace dhjb
