#include "dhjb/dde.hpp"

#include <algorithm>
#include <cmath>

namespace dhjb {

namespace {

int checked_ratio(double big, double small, const char* what) {
    const double q = big / small;
    const int k = static_cast<int>(std::llround(q));
    if (k < 1 || std::abs(q - k) > 1e-9 * std::max(1.0, q))
        throw std::invalid_argument(std::string("integrate: ") + what);
    return k;
}

} // namespace

Trajectory integrate(const ModelParams& params, const Nonlinearity& nl, const Kernel& kernel,
                     const HState& eta, const ControlPath& control, double horizon, double dt,
                     Scheme scheme) {
    if (!(horizon > 0.0)) throw std::invalid_argument("integrate: horizon must be positive");
    if (!eta.in_Hplus()) throw std::invalid_argument("integrate: eta not in H+ (eta0 <= 0)");
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    if (eta.nodes() != kernel.nodes() || std::abs(eta.dxi - kernel.dxi) > 1e-12 * kernel.dxi)
        throw std::invalid_argument("integrate: state grid does not match kernel grid");
    control.check_nonnegative();

    const int N = kernel.nodes() - 1;
    const double dxi = kernel.dxi;
    const int k = checked_ratio(dxi, dt, "dt must divide dxi");
    if (!control.values.empty())
        checked_ratio(control.dt_seg, dt, "dt must divide the control segment length");

    const int steps = static_cast<int>(std::llround(horizon / dt));
    if (!(steps >= 1) || std::abs(steps * dt - horizon) > 1e-9 * std::max(1.0, horizon))
        throw std::invalid_argument("integrate: horizon must be a multiple of dt");

    const int hist = N * k;
    Trajectory tr;
    tr.dt = dt;
    tr.hist_len = hist;
    tr.stride = k;
    const int total = hist + steps + 1;
    tr.times.resize(total);
    tr.x.resize(total);
    tr.c.assign(total, 0.0);
    const double T = kernel.delay_span();
    for (int j = 0; j < total; ++j) tr.times[j] = -T + j * dt;

    // History upsampled to the dt grid; the node at t = 0 is the present.
    for (int j = 0; j < hist; ++j) {
        const int i = j / k, rm = j % k;
        tr.x[j] = (rm == 0) ? eta.eta1[i]
                            : eta.eta1[i] + (eta.eta1[i + 1] - eta.eta1[i]) * (static_cast<double>(rm) / k);
    }
    tr.x[hist] = eta.eta0;

    // Trapezoid weights for the delay integral, folded with the kernel.
    std::vector<double> w(static_cast<size_t>(N) + 1);
    for (int i = 0; i <= N; ++i)
        w[i] = kernel.samples[i] * dxi * ((i == 0 || i == N) ? 0.5 : 1.0);

    auto delay_q = [&](int base) { // base: index of the t+0 node in tr.x
        double q = 0.0;
        const double* xp = tr.x.data() + (base - hist);
        for (int i = 0; i <= N; ++i) q += w[i] * xp[static_cast<size_t>(i) * k];
        return q;
    };

    const double r = params.r;
    const bool mild = scheme == Scheme::mild_heun;
    const double erdt = std::exp(r * dt);
    const double cfac = (r != 0.0) ? (erdt - 1.0) / r : dt; // exact discount of constant c

    double violated_at = kInf;
    for (int m = 0; m < steps; ++m) {
        const int j = hist + m;
        const double t = m * dt;
        const double xm = tr.x[j];
        const double cm = control.at(t);
        tr.c[j] = cm;
        const double fm = eval_f0(nl, xm, delay_q(j));
        double xnew;
        if (mild) {
            // x_{m+1} = e^{r dt} x_m + int_0^dt e^{r(dt-s)} f ds - c * (e^{r dt}-1)/r
            const double xp = erdt * (xm + dt * (fm - cm));
            tr.x[j + 1] = xp;
            const double fp = eval_f0(nl, xp, delay_q(j + 1));
            xnew = erdt * xm + 0.5 * dt * (erdt * fm + fp) - cm * cfac;
        } else {
            const double gm = r * xm + fm;
            const double xp = xm + dt * (gm - cm);
            tr.x[j + 1] = xp;
            const double gp = r * xp + eval_f0(nl, xp, delay_q(j + 1));
            xnew = xm + 0.5 * dt * (gm + gp) - dt * cm;
        }
        tr.x[j + 1] = xnew;
        if (xnew <= kPosEps && violated_at == kInf) violated_at = (m + 1) * dt;
    }
    tr.c[hist + steps] = control.at(steps * dt);
    tr.admissible_until = violated_at;
    return tr;
}

AdmissibilityVerdict check_admissible(const ModelParams& params, const Nonlinearity& nl,
                                      const Kernel& kernel, const HState& eta,
                                      const ControlPath& control, double horizon, double dt) {
    const Trajectory tr = integrate(params, nl, kernel, eta, control, horizon, dt);
    AdmissibilityVerdict v;
    v.admissible_until = tr.admissible_until;
    const double T = kernel.delay_span();
    if (v.admissible_until < kInf || horizon < T) return v;

    // Trailing window [horizon - T, horizon]: control must vanish there and
    // the path must stay strictly positive; then x' >= -c_f0 x holds past
    // the horizon and positivity extends forever.
    const int steps = tr.steps();
    const int win = static_cast<int>(std::llround(T / dt));
    bool control_free = true;
    double floor = kInf;
    for (int m = steps - win; m <= steps; ++m) {
        if (tr.c[tr.hist_len + m] != 0.0) control_free = false;
        floor = std::min(floor, tr.present(m));
    }
    v.tail_floor = floor;
    v.certified_forever = control_free && floor > kPosEps;
    return v;
}

bool domain_membership(const ModelParams& params, const Nonlinearity& nl, const Kernel& kernel,
                       const HState& eta, double dt) {
    if (!eta.in_Hplus()) return false;
    const double T = kernel.delay_span();
    const Trajectory tr = integrate(params, nl, kernel, eta, ControlPath{}, T, dt);
    return tr.admissible_until == kInf;
}

bool comparison_check(const ModelParams& params, const Nonlinearity& nl, const Kernel& kernel,
                      const Trajectory& sub, const HState& eta, const ControlPath& control) {
    const Trajectory ref =
        integrate(params, nl, kernel, eta, control, sub.steps() * sub.dt, sub.dt);
    if (ref.x.size() != sub.x.size() || std::abs(ref.dt - sub.dt) > 1e-12)
        throw std::invalid_argument("comparison_check: grid mismatch");
    const double scale = std::max(sup_abs(ref.x), sup_abs(sub.x));
    const double tol = grid_tol(sub.dt, kernel.dxi, scale);
    for (size_t j = static_cast<size_t>(ref.hist_len); j < ref.x.size(); ++j)
        if (sub.x[j] > ref.x[j] + tol) return false;
    return true;
}

double hpp_lower_bound(const ModelParams& params, const HState& eta, double t) {
    if (!eta.in_Hplusplus()) throw std::domain_error("hpp_lower_bound: eta not in H++");
    if (t < 0.0) throw std::invalid_argument("hpp_lower_bound: t must be >= 0");
    return eta.eta0 * std::exp(-params.c_f0 * t);
}

} // namespace dhjb
