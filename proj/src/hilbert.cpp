#include "dhjb/hilbert.hpp"

#include <algorithm>
#include <cmath>

namespace dhjb {

namespace {

double trapz_sq(const std::vector<double>& v, double dxi) {
    const size_t n = v.size();
    double s = 0.5 * (v[0] * v[0] + v[n - 1] * v[n - 1]);
    for (size_t i = 1; i + 1 < n; ++i) s += v[i] * v[i];
    return s * dxi;
}

std::vector<double> fd_derivative(const std::vector<double>& v, double dxi) {
    const int n = static_cast<int>(v.size());
    std::vector<double> d(v.size());
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dxi);
    for (int i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * dxi);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * dxi);
    return d;
}

} // namespace

double dom_tol(const HState& eta) {
    return 10.0 * eta.dxi * std::max(1.0, h_norm(eta));
}

LiftedState classify(const HState& eta) {
    LiftedState ls{eta, false, false};
    const double tol = dom_tol(eta);
    ls.in_domain_A = std::abs(eta.eta1.back() - eta.eta0) <= tol;
    ls.in_domain_Astar = std::abs(eta.eta1.front()) <= tol;
    return ls;
}

double h_inner(const HState& a, const HState& b) {
    const size_t n = a.eta1.size();
    if (b.eta1.size() != n || std::abs(a.dxi - b.dxi) > 1e-12 * a.dxi)
        throw std::invalid_argument("h_inner: grid mismatch");
    double s = 0.5 * (a.eta1[0] * b.eta1[0] + a.eta1[n - 1] * b.eta1[n - 1]);
    for (size_t i = 1; i + 1 < n; ++i) s += a.eta1[i] * b.eta1[i];
    return a.eta0 * b.eta0 + s * a.dxi;
}

double h_norm(const HState& eta) {
    return std::sqrt(eta.eta0 * eta.eta0 + trapz_sq(eta.eta1, eta.dxi));
}

HState state_add(const HState& a, const HState& b, double scale_b) {
    if (a.eta1.size() != b.eta1.size()) throw std::invalid_argument("state_add: grid mismatch");
    HState out = a;
    out.eta0 += scale_b * b.eta0;
    for (size_t i = 0; i < out.eta1.size(); ++i) out.eta1[i] += scale_b * b.eta1[i];
    return out;
}

HState state_scale(const HState& a, double s) {
    HState out = a;
    out.eta0 *= s;
    for (double& v : out.eta1) v *= s;
    return out;
}

LiftedState apply_A(const ModelParams& params, const HState& eta) {
    if (std::abs(eta.eta1.back() - eta.eta0) > dom_tol(eta))
        throw std::domain_error("apply_A: eta1(0) != eta0, not in D(A)");
    HState out;
    out.dxi = eta.dxi;
    out.eta0 = params.r * eta.eta0;
    out.eta1 = fd_derivative(eta.eta1, eta.dxi);
    return classify(out);
}

LiftedState apply_Ainv(const ModelParams& params, const HState& eta) {
    if (!(params.r > 0.0)) throw std::invalid_argument("apply_Ainv: requires r > 0");
    const int N = eta.nodes() - 1;
    HState out;
    out.dxi = eta.dxi;
    out.eta0 = eta.eta0 / params.r;
    out.eta1.resize(eta.eta1.size());
    // I_i = int_{xi_i}^0 eta1, cumulative trapezoid from the right
    double I = 0.0;
    out.eta1[N] = out.eta0;
    for (int i = N - 1; i >= 0; --i) {
        I += 0.5 * eta.dxi * (eta.eta1[i] + eta.eta1[i + 1]);
        out.eta1[i] = out.eta0 - I;
    }
    return classify(out);
}

double norm_minus1(const ModelParams& params, const HState& eta) {
    return h_norm(apply_Ainv(params, eta).state);
}

LiftedState apply_Astar(const ModelParams& params, const HState& eta) {
    if (std::abs(eta.eta1.front()) > dom_tol(eta))
        throw std::domain_error("apply_Astar: eta1(-T) != 0, not in D(A*)");
    HState out;
    out.dxi = eta.dxi;
    out.eta0 = params.r * eta.eta0 + eta.eta1.back();
    out.eta1 = fd_derivative(eta.eta1, eta.dxi);
    for (double& v : out.eta1) v = -v;
    return classify(out);
}

HState apply_semigroup(const ModelParams& params, double t, const HState& eta) {
    if (t < 0.0) throw std::invalid_argument("apply_semigroup: t must be >= 0");
    HState out;
    out.dxi = eta.dxi;
    out.eta0 = eta.eta0 * std::exp(params.r * t);
    out.eta1.resize(eta.eta1.size());
    for (int i = 0; i < eta.nodes(); ++i) {
        const double u = t + eta.xi(i);
        out.eta1[i] = (u < 0.0) ? eta.eta1_at(u) : eta.eta0 * std::exp(params.r * u);
    }
    return out;
}

HState apply_adjoint_semigroup(const ModelParams& params, double t, const HState& eta) {
    const double T = eta.delay_span();
    if (t < 0.0 || t > T + 1e-12)
        throw std::invalid_argument("apply_adjoint_semigroup: need 0 <= t <= T");
    t = std::min(t, T);
    HState out;
    out.dxi = eta.dxi;
    // int_{-t}^0 eta1(xi) e^{r xi} dxi, trapezoid with a partial first cell
    const double s = (T - t) / eta.dxi; // grid coordinate of -t
    const int i0 = std::min(static_cast<int>(std::ceil(s - 1e-12)), eta.nodes() - 1);
    auto g = [&](int i) { return eta.eta1[i] * std::exp(params.r * eta.xi(i)); };
    double integral = 0.0;
    for (int i = i0; i + 1 < eta.nodes(); ++i)
        integral += 0.5 * eta.dxi * (g(i) + g(i + 1));
    if (i0 > 0 && s < i0) {
        const double frac = (i0 - s) * eta.dxi; // width of the partial cell
        const double gl = eta.eta1_at(-t) * std::exp(-params.r * t);
        integral += 0.5 * frac * (gl + g(i0));
    }
    out.eta0 = std::exp(params.r * t) * (eta.eta0 + integral);
    out.eta1.resize(eta.eta1.size());
    for (int i = 0; i < eta.nodes(); ++i) {
        const double w = eta.xi(i) - t;
        out.eta1[i] = (w >= -T - 1e-15) ? eta.eta1_at(w) : 0.0;
    }
    return out;
}

Trajectory integrate_mild(const ModelParams& params, const Nonlinearity& nl, const Kernel& kernel,
                          const HState& eta, const ControlPath& control, double horizon,
                          double dt) {
    return integrate(params, nl, kernel, eta, control, horizon, dt, Scheme::mild_heun);
}

double lipA_constant(const ModelParams& params, const Kernel& kernel) {
    if (std::abs(kernel.at_minus_T()) > 1e-12 * std::max(1.0, sup_abs(kernel.samples)))
        throw std::domain_error("lipA_constant: kernel with a(-T) != 0 has no weak-norm bound");
    HState a{0.0, kernel.samples, kernel.dxi};
    return params.r + h_norm(apply_Astar(params, a).state);
}

WeakBoundSample weak_norm_bound(const ModelParams& params, const Kernel& kernel,
                                const HState& eta) {
    WeakBoundSample s;
    s.lhs = std::abs(eta.eta0) + std::abs(delay_average(kernel, eta));
    s.rhs = lipA_constant(params, kernel) * norm_minus1(params, eta);
    return s;
}

CounterexamplePoint counterexample_sequence(int n, const ModelParams& params, double dxi) {
    if (n < 1) throw std::invalid_argument("counterexample_sequence: n must be >= 1");
    const double width = 1.0 / n;
    if (width < dxi)
        throw std::invalid_argument("counterexample_sequence: indicator width 1/n below grid resolution");
    if (width > params.T)
        throw std::invalid_argument("counterexample_sequence: indicator wider than the delay span");
    // eta1^n = n 1_{[-T, -T+1/n]}, eta0 = 0, a == 1.
    // Pairing: int 1 * eta1^n = n * (1/n) = 1.
    CounterexamplePoint p;
    p.mass = n * width;
    // A^{-1} second component: -I(s), I(s) = int_s^0 eta1^n. On the support
    // I is linear from n*width at -T down to 0 at -T+width, and 0 after, so
    // int I^2 = n^2 width^3 / 3 exactly (first component vanishes).
    const double peak = n * width;
    p.nm1 = std::sqrt(peak * peak * width / 3.0);
    return p;
}

GronwallResult gronwall_stability(const ModelParams& params, const Nonlinearity& nl,
                                  const Kernel& kernel, const HState& eta, const HState& eta_bar,
                                  double dt) {
    const double denom = norm_minus1(params, state_add(eta, eta_bar, -1.0));
    if (denom < 1e-14)
        throw std::invalid_argument("gronwall_stability: coincident initial states");
    const double T = kernel.delay_span();
    const Trajectory a = integrate_mild(params, nl, kernel, eta, ControlPath{}, T, dt);
    const Trajectory b = integrate_mild(params, nl, kernel, eta_bar, ControlPath{}, T, dt);
    GronwallResult res;
    for (int m = 0; m <= a.steps(); ++m) {
        const HState d = state_add(a.state_at(m), b.state_at(m), -1.0);
        res.ratio = std::max(res.ratio, norm_minus1(params, d) / denom);
        res.present_ratio = std::max(res.present_ratio, std::abs(d.eta0) / denom);
    }
    return res;
}

double gronwall_bound(const ModelParams& params, const Kernel& kernel) {
    const double T = kernel.delay_span();
    const double Ms = std::sqrt(3.0 + 2.0 * T) * std::exp(params.r * T);
    const double L = std::sqrt(1.0 + T) * params.c_f0 * lipA_constant(params, kernel) / params.r;
    return Ms * std::exp(Ms * L * T);
}

} // namespace dhjb
