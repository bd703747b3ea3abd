#include "dhjb/value.hpp"

#include <algorithm>
#include <cmath>

#include "dhjb/dde.hpp"

namespace dhjb {

namespace {

/// Certified lower bound on the discounted continuation payoff past the
/// horizon under the zero control, given the trailing-window floor xi_h:
/// x(t) >= xi_h e^{-c_f0 (t - h)} there, U2 is nondecreasing, and U1(0)
/// contributes its constant.
double tail_lower(const Scenario& scn, double horizon, double xi_h) {
    const double rho = scn.params.rho, C = scn.params.c_f0;
    const double disc = std::exp(-rho * horizon);
    double u2_part = 0.0;
    switch (scn.utility.u2.kind) {
    case Utility::Kind::zero:
        u2_part = 0.0;
        break;
    case Utility::Kind::log_x:
        u2_part = std::log(xi_h) / rho - C / (rho * rho);
        break;
    case Utility::Kind::neg_pow: {
        const double beta = scn.utility.u2.p;
        if (rho <= beta * C) return -kInf;
        u2_part = -std::pow(xi_h, -beta) / (rho - beta * C);
        break;
    }
    case Utility::Kind::pow_ratio:
        u2_part = 0.0; // nonnegative utility, zero is a valid floor
        break;
    }
    return disc * (scn.utility.u1(0.0) / rho + u2_part);
}

double tail_upper(const Scenario& scn, double horizon) {
    return std::exp(-scn.params.rho * horizon) * (scn.params.u1_sup + scn.params.u2_sup) /
           scn.params.rho;
}

/// Integrates candidate controls re-using the committed prefix: changing
/// only segments >= j means the path and the discounted node contributions
/// before that segment's start step stay valid.
class AscentEvaluator {
public:
    AscentEvaluator(const Scenario& scn, const HState& eta, int steps, int seg_steps)
        : scn_(scn), dt_(scn.num.dt), steps_(steps), seg_steps_(seg_steps) {
        const Kernel& k = scn.kernel;
        N_ = k.nodes() - 1;
        stride_ = static_cast<int>(std::llround(k.dxi / dt_));
        hist_ = N_ * stride_;
        win_ = static_cast<int>(std::llround(k.delay_span() / dt_));
        weights_.resize(static_cast<size_t>(N_) + 1);
        for (int i = 0; i <= N_; ++i)
            weights_[i] = k.samples[i] * k.dxi * ((i == 0 || i == N_) ? 0.5 : 1.0);
        base_path_.resize(static_cast<size_t>(hist_ + steps_) + 1);
        for (int j = 0; j < hist_; ++j) {
            const int i = j / stride_, rm = j % stride_;
            base_path_[j] = (rm == 0)
                                ? eta.eta1[i]
                                : eta.eta1[i] + (eta.eta1[i + 1] - eta.eta1[i]) *
                                                    (static_cast<double>(rm) / stride_);
        }
        base_path_[hist_] = eta.eta0;
        work_path_ = base_path_;
        disc_.resize(static_cast<size_t>(steps_) + 1);
        for (int m = 0; m <= steps_; ++m) disc_[m] = std::exp(-scn.params.rho * m * dt_);
        base_prefix_.assign(static_cast<size_t>(steps_) + 2, 0.0);
    }

    /// Certified objective estimate + tail_lo for `values`, valid
    /// re-using the committed state for segments < from_seg.
    double eval(const std::vector<double>& values, int from_seg) {
        const int s0 = from_seg * seg_steps_;
        std::copy(base_path_.begin(), base_path_.begin() + hist_ + s0 + 1, work_path_.begin());
        double sum = base_prefix_[s0]; // contributions of nodes 0..s0-1
        const double r = scn_.params.r;
        bool ok = true;
        for (int m = s0; m < steps_; ++m) {
            const int j = hist_ + m;
            const double xm = work_path_[j];
            const double cm = values[static_cast<size_t>(m / seg_steps_)];
            sum += disc_[m] * node_payoff(cm, xm) * ((m == 0) ? 0.5 : 1.0);
            const double fm = eval_f0(scn_.f0, xm, delay_q(work_path_, j));
            const double gm = r * xm + fm;
            const double xp = xm + dt_ * (gm - cm);
            work_path_[j + 1] = xp;
            const double gp = r * xp + eval_f0(scn_.f0, xp, delay_q(work_path_, j + 1));
            const double xn = xm + 0.5 * dt_ * (gm + gp) - dt_ * cm;
            work_path_[j + 1] = xn;
            if (xn <= kPosEps) {
                ok = false;
                break;
            }
        }
        if (!ok) return -kInf;
        sum += 0.5 * disc_[steps_] * node_payoff(0.0, work_path_[hist_ + steps_]);
        const double estimate = dt_ * sum;
        double floor = kInf;
        for (int m = steps_ - win_; m <= steps_; ++m)
            floor = std::min(floor, work_path_[hist_ + m]);
        last_window_min_ = floor;
        last_estimate_ = estimate;
        return estimate + tail_lower(scn_, steps_ * dt_, floor);
    }

    /// Adopt the work path (last eval) as the committed state.
    void commit(const std::vector<double>& values) {
        base_path_ = work_path_;
        double run = 0.0;
        for (int m = 0; m <= steps_; ++m) {
            base_prefix_[m] = run;
            const double cm = (m < steps_) ? values[static_cast<size_t>(m / seg_steps_)] : 0.0;
            run += disc_[m] * node_payoff(cm, base_path_[hist_ + m]) * ((m == 0) ? 0.5 : 1.0);
        }
        base_prefix_[steps_ + 1] = run;
    }

    double last_estimate() const { return last_estimate_; }
    double last_window_min() const { return last_window_min_; }
    int steps() const { return steps_; }

private:
    double node_payoff(double c, double x) const {
        return scn_.utility.u1(c) + scn_.utility.u2(x);
    }

    double delay_q(const std::vector<double>& path, int j) const {
        double q = 0.0;
        const double* xp = path.data() + (j - hist_);
        for (int i = 0; i <= N_; ++i) q += weights_[i] * xp[static_cast<size_t>(i) * stride_];
        return q;
    }

    const Scenario& scn_;
    double dt_;
    int steps_, seg_steps_, N_, stride_, hist_, win_;
    std::vector<double> weights_, base_path_, work_path_, disc_, base_prefix_;
    double last_estimate_ = -kInf;
    double last_window_min_ = 0.0;
};

constexpr double kGolden = 0.6180339887498949;

/// Maximize the unimodal g over [lo, hi] by golden-section search.
template <class F>
double golden_max(F&& g, double lo, double hi, double tol, double* best_val) {
    double a = lo, b = hi;
    double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
    double f1 = g(x1), f2 = g(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = g(x1);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = g(xm);
    if (best_val) *best_val = fm;
    return xm;
}

} // namespace

JResult evaluate_J(const Scenario& scn, const HState& eta, const ControlPath& control,
                   double horizon) {
    const double T = scn.kernel.delay_span();
    if (horizon < T - 1e-12)
        throw std::invalid_argument("evaluate_J: horizon must cover one delay span");
    const Trajectory tr =
        integrate(scn.params, scn.f0, scn.kernel, eta, control, horizon, scn.num.dt);
    JResult res;
    res.tail_hi = tail_upper(scn, horizon);
    if (tr.admissible_until < kInf) return res; // sup over the empty set
    const double rho = scn.params.rho;
    double sum = 0.0;
    const int steps = tr.steps();
    for (int m = 0; m <= steps; ++m) {
        const double w = (m == 0 || m == steps) ? 0.5 : 1.0;
        const double t = m * tr.dt;
        sum += w * std::exp(-rho * t) *
               (scn.utility.u1(tr.c[tr.hist_len + m]) + scn.utility.u2(tr.present(m)));
    }
    res.estimate = sum * tr.dt;
    const int win = static_cast<int>(std::llround(T / tr.dt));
    double floor = kInf;
    for (int m = steps - win; m <= steps; ++m) floor = std::min(floor, tr.present(m));
    res.window_min = floor;
    res.tail_lo = tail_lower(scn, horizon, floor);
    res.admissible = true;
    return res;
}

ValueEstimate approximate_V(const Scenario& scn, const HState& eta,
                            const ControlPath* warm_start) {
    ValueEstimate out;
    const double dt = scn.num.dt;
    const int M = std::max(1, scn.num.segments);
    const int seg_steps =
        std::max(1, static_cast<int>(std::ceil(scn.horizon() / (M * dt) - 1e-9)));
    const int steps = seg_steps * M;
    out.horizon = steps * dt;

    if (!eta.in_Hplus() || !domain_membership(scn.params, scn.f0, scn.kernel, eta, dt))
        return out; // -inf marker

    AscentEvaluator ev(scn, eta, steps, seg_steps);
    std::vector<double> c(static_cast<size_t>(M), 0.0);
    if (warm_start && !warm_start->values.empty()) {
        for (int j = 0; j < M; ++j) c[j] = std::max(0.0, warm_start->at((j + 0.5) * seg_steps * dt));
        if (ev.eval(c, 0) == -kInf) std::fill(c.begin(), c.end(), 0.0); // stale warm start
    }
    double best = ev.eval(c, 0);
    if (best == -kInf) return out;
    ev.commit(c);

    double last_improvement = kInf;
    for (int sweep = 0; sweep < scn.num.max_sweeps; ++sweep) {
        const double sweep_start = best;
        for (int j = 0; j < M; ++j) {
            auto g = [&](double v) {
                c[static_cast<size_t>(j)] = v;
                return ev.eval(c, j);
            };
            const double cur = c[static_cast<size_t>(j)];
            // Bracket the (concave, hence unimodal) coordinate maximum.
            double lo = 0.0, hi;
            double step = std::max(0.5, 0.5 * cur);
            double probe = cur + step, fprobe = g(probe);
            if (fprobe > best && fprobe > -kInf) {
                lo = cur;
                while (true) {
                    step *= 2.0;
                    const double next = probe + step;
                    const double fnext = g(next);
                    if (!(fnext > fprobe) || next > 1e12) {
                        hi = next;
                        break;
                    }
                    lo = probe;
                    probe = next;
                    fprobe = fnext;
                }
            } else {
                hi = probe; // maximum lies in [0, cur + step]
            }
            double fbest;
            const double tol = scn.num.coord_tol * std::max(1.0, hi);
            const double xb = golden_max(g, lo, hi, tol, &fbest);
            if (fbest > best) {
                c[static_cast<size_t>(j)] = xb;
                best = g(xb);
            } else {
                c[static_cast<size_t>(j)] = cur;
                best = g(cur);
            }
            ev.commit(c);
        }
        last_improvement = best - sweep_start;
        if (last_improvement < scn.num.value_tol) break;
    }

    out.v_lo = best;
    out.control = ControlPath{seg_steps * dt, c};
    out.opt_gap =
        scn.tol.opt_gap_factor * std::max(scn.num.value_tol, std::max(0.0, last_improvement));
    const double tl = tail_lower(scn, out.horizon, ev.last_window_min());
    out.tail_width = tail_upper(scn, out.horizon) - tl;
    out.v_hi = out.v_lo + out.tail_width + out.opt_gap;
    return out;
}

namespace {

double u1_root(const UtilityPair& utilities, double zeta0) {
    if (!(zeta0 > 0.0)) throw std::domain_error("feedback: zeta0 must be positive");
    const Utility& u1 = utilities.u1;
    double lo = 1e-16;
    while (u1.deriv(lo) <= zeta0 && lo > 1e-290) lo *= 1e-2;
    if (u1.deriv(lo) <= zeta0) return 0.0; // slope everywhere below zeta0
    double hi = std::max(1.0, 2.0 * lo);
    while (u1.deriv(hi) > zeta0) {
        hi *= 2.0;
        if (hi > 1e15) break;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (u1.deriv(mid) > zeta0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double feedback_c(const UtilityPair& utilities, double zeta0) {
    return u1_root(utilities, zeta0);
}

double hamiltonian(const UtilityPair& utilities, double zeta0) {
    const double c = u1_root(utilities, zeta0);
    return utilities.u1(c) - zeta0 * c;
}

GradientEstimate partial_V_eta0(const Scenario& scn, const HState& eta, double h,
                                const ValueEstimate* base) {
    if (!(h > 0.0)) throw std::invalid_argument("partial_V_eta0: h must be positive");
    ValueEstimate local;
    if (!base) {
        local = approximate_V(scn, eta);
        base = &local;
    }
    if (!base->in_domain()) throw std::domain_error("partial_V_eta0: eta outside the domain");

    auto value_at = [&](double shift) {
        HState e = eta;
        e.eta0 += shift;
        const ValueEstimate v = approximate_V(scn, e, &base->control);
        if (!v.in_domain())
            throw std::domain_error("partial_V_eta0: shifted point leaves the domain");
        return v.v_lo;
    };

    const double vp = value_at(h), vm = value_at(-h);
    const double vph = value_at(0.5 * h), vmh = value_at(-0.5 * h);
    const double est_h = (vp - vm) / (2.0 * h);
    const double est_h2 = (vph - vmh) / h;
    GradientEstimate g;
    g.v_eta0 = est_h2;
    g.h_used = h;
    g.stability = std::abs(est_h - est_h2);
    return g;
}

double value_upper_bound(const ModelParams& params) {
    return (params.u1_sup + params.u2_sup) / params.rho;
}

} // namespace dhjb
