#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dhjb {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Threshold below which the state constraint x > 0 counts as violated.
inline constexpr double kPosEps = 1e-12;

/// A point eta = (eta0, eta1(.)) of H = R x L2([-T,0]).
/// eta1 is sampled on the uniform grid xi_i = -T + i*dxi, i = 0..N.
struct HState {
    double eta0 = 0.0;
    std::vector<double> eta1;
    double dxi = 0.0;

    int nodes() const { return static_cast<int>(eta1.size()); }
    int segments() const { return nodes() - 1; }
    double delay_span() const { return dxi * segments(); }
    double xi(int i) const { return -delay_span() + i * dxi; }

    bool in_Hplus() const { return eta0 > 0.0; }
    bool in_Hplusplus() const {
        if (!(eta0 > 0.0)) return false;
        for (double v : eta1)
            if (v < 0.0) return false;
        return true;
    }

    /// Linear interpolation of eta1 at xi in [-T, 0].
    double eta1_at(double x) const {
        const double T = delay_span();
        if (x <= -T) return eta1.front();
        if (x >= 0.0) return eta1.back();
        const double s = (x + T) / dxi;
        const int i = static_cast<int>(s);
        const double w = s - i;
        return (1.0 - w) * eta1[i] + w * eta1[i + 1];
    }
};

inline HState const_state(double eta0, double past, int N, double T) {
    return HState{eta0, std::vector<double>(static_cast<size_t>(N) + 1, past), T / N};
}

inline HState ramp_state(double v_at_minus_T, double v_at_zero, int N, double T) {
    HState s;
    s.dxi = T / N;
    s.eta1.resize(static_cast<size_t>(N) + 1);
    for (int i = 0; i <= N; ++i) {
        const double w = static_cast<double>(i) / N;
        s.eta1[i] = (1.0 - w) * v_at_minus_T + w * v_at_zero;
    }
    s.eta0 = v_at_zero;
    return s;
}

/// Piecewise-constant control c(t) >= 0 on [0, dt_seg * values.size()),
/// right-continuous; c(t) = 0 past the control horizon.
struct ControlPath {
    double dt_seg = 0.0;
    std::vector<double> values;

    double horizon() const { return dt_seg * static_cast<double>(values.size()); }

    double at(double t) const {
        if (t < 0.0 || values.empty()) return 0.0;
        const auto j = static_cast<size_t>(t / dt_seg);
        return j < values.size() ? values[j] : 0.0;
    }

    void check_nonnegative() const {
        for (double v : values)
            if (v < 0.0) throw std::invalid_argument("control values must be >= 0");
    }
};

inline ControlPath const_control(double c, double horizon) {
    return ControlPath{horizon, {c}};
}

/// A computed state path on the uniform time grid t_j = -T + j*dt,
/// including the initial history segment. x[hist_len] is x(0).
struct Trajectory {
    double dt = 0.0;
    int hist_len = 0;               // steps before t = 0 (= T/dt)
    int stride = 1;                 // dxi / dt
    std::vector<double> times;      // -T .. horizon
    std::vector<double> x;
    std::vector<double> c;          // control sample applied at each time (0 on history)
    double admissible_until = kInf; // first grid time with x <= kPosEps, +inf if none
    double J_partial = kNaN;        // running discounted payoff when computed

    int steps() const { return static_cast<int>(times.size()) - 1 - hist_len; }
    double horizon() const { return times.back(); }
    double delay_span() const { return dt * hist_len; }

    /// Present value at forward step m (t = m*dt, 0 <= m <= steps()).
    double present(int m) const { return x[static_cast<size_t>(hist_len + m)]; }

    /// The lifted state (x(t), x(t + .)) at forward step m.
    HState state_at(int m) const {
        const int N = hist_len / stride;
        HState s;
        s.dxi = dt * stride;
        s.eta0 = present(m);
        s.eta1.resize(static_cast<size_t>(N) + 1);
        for (int i = 0; i <= N; ++i)
            s.eta1[static_cast<size_t>(i)] = x[static_cast<size_t>(m + i * stride)];
        return s;
    }

    bool admissible_at(double t) const { return t < admissible_until; }
};

inline double sup_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
}

/// Tolerance for pointwise trajectory comparisons: first-order bound on
/// accumulated quadrature plus interpolation error.
inline double grid_tol(double dt, double dxi, double scale) {
    return 10.0 * (dt + dxi) * std::max(1.0, scale);
}

} // namespace dhjb
