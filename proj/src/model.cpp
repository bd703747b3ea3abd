#include "dhjb/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace dhjb {

namespace {

std::string fmt_pair(double x, double y) {
    std::ostringstream os;
    os << "(" << x << ", " << y << ")";
    return os.str();
}

} // namespace

Kernel make_kernel(KernelFamily family, std::span<const double> params, int N, double T) {
    if (N < 8) throw std::invalid_argument("make_kernel: N must be >= 8");
    if (T <= 0.0) throw std::invalid_argument("make_kernel: T must be positive");
    Kernel k;
    k.dxi = T / N;
    k.samples.resize(static_cast<size_t>(N) + 1);
    k.deriv_samples.resize(static_cast<size_t>(N) + 1);
    switch (family) {
    case KernelFamily::linear_ramp: {
        if (params.size() != 1 || params[0] < 0.0)
            throw std::invalid_argument("linear_ramp kernel needs one slope parameter >= 0");
        const double slope = params[0];
        for (int i = 0; i <= N; ++i) {
            const double xi = -T + i * k.dxi;
            k.samples[i] = slope * (xi + T);
            k.deriv_samples[i] = slope;
        }
        k.samples[0] = 0.0;
        break;
    }
    case KernelFamily::hat: {
        if (params.size() != 1 || params[0] < 0.0)
            throw std::invalid_argument("hat kernel needs one height parameter >= 0");
        const double h = params[0];
        for (int i = 0; i <= N; ++i) {
            const double xi = -T + i * k.dxi;
            const double u = 2.0 * xi / T + 1.0; // -1 at -T, 0 at -T/2, 1 at 0
            k.samples[i] = h * (1.0 - std::abs(u));
            k.deriv_samples[i] = (u < 0.0) ? 2.0 * h / T : (u > 0.0 ? -2.0 * h / T : 0.0);
        }
        k.samples[0] = 0.0;
        k.samples[N] = 0.0;
        break;
    }
    case KernelFamily::poly: {
        if (params.size() != 1 || params[0] < 1.0)
            throw std::invalid_argument("poly kernel needs one power parameter >= 1");
        const double p = params[0];
        for (int i = 0; i <= N; ++i) {
            const double xi = -T + i * k.dxi;
            k.samples[i] = std::pow(xi + T, p);
            k.deriv_samples[i] = p * std::pow(xi + T, p - 1.0);
        }
        k.samples[0] = 0.0;
        break;
    }
    }
    for (double v : k.samples)
        if (v < 0.0) throw std::invalid_argument("kernel samples must be >= 0");
    return k;
}

Kernel flat_kernel(double value, int N, double T) {
    Kernel k;
    k.dxi = T / N;
    k.samples.assign(static_cast<size_t>(N) + 1, value);
    k.deriv_samples.assign(static_cast<size_t>(N) + 1, 0.0);
    return k;
}

Kernel resample_kernel(const Kernel& k, int N_new) {
    const double T = k.delay_span();
    Kernel out;
    out.dxi = T / N_new;
    out.samples.resize(static_cast<size_t>(N_new) + 1);
    out.deriv_samples.resize(static_cast<size_t>(N_new) + 1);
    const HState a{0.0, k.samples, k.dxi};
    const HState d{0.0, k.deriv_samples, k.dxi};
    for (int i = 0; i <= N_new; ++i) {
        const double xi = -T + i * out.dxi;
        out.samples[i] = a.eta1_at(xi);
        out.deriv_samples[i] = d.eta1_at(xi);
    }
    return out;
}

Nonlinearity affine_saturating(double a1, double a2, double K, double b) {
    return Nonlinearity{Nonlinearity::Kind::affine_saturating, {a1, a2, K, b}};
}

Nonlinearity table_nonlinearity(int nx, int ny, double x_max, double y_min, double y_max,
                                std::vector<double> values) {
    if (nx < 2 || ny < 2 || static_cast<int>(values.size()) != nx * ny)
        throw std::invalid_argument("table nonlinearity: bad dimensions");
    Nonlinearity nl;
    nl.kind = Nonlinearity::Kind::custom_table;
    nl.params = {static_cast<double>(nx), static_cast<double>(ny), x_max, y_min, y_max};
    nl.params.insert(nl.params.end(), values.begin(), values.end());
    return nl;
}

namespace {

double eval_table(const Nonlinearity& nl, double x, double y) {
    const int nx = static_cast<int>(nl.params[0]);
    const int ny = static_cast<int>(nl.params[1]);
    const double x_max = nl.params[2], y_min = nl.params[3], y_max = nl.params[4];
    const double* v = nl.params.data() + 5;
    const double hx = x_max / (nx - 1), hy = (y_max - y_min) / (ny - 1);
    double sx = std::clamp(x, 0.0, x_max) / hx;
    double sy = (std::clamp(y, y_min, y_max) - y_min) / hy;
    int ix = std::min(static_cast<int>(sx), nx - 2);
    int iy = std::min(static_cast<int>(sy), ny - 2);
    const double wx = sx - ix, wy = sy - iy;
    const auto at = [&](int i, int j) { return v[i * ny + j]; };
    return (1 - wx) * (1 - wy) * at(ix, iy) + wx * (1 - wy) * at(ix + 1, iy) +
           (1 - wx) * wy * at(ix, iy + 1) + wx * wy * at(ix + 1, iy + 1);
}

} // namespace

double eval_f0(const Nonlinearity& nl, double x, double y) {
    if (x < 0.0) x = 0.0;
    switch (nl.kind) {
    case Nonlinearity::Kind::affine_saturating: {
        const double a1 = nl.params[0], a2 = nl.params[1], K = nl.params[2], b = nl.params[3];
        return a1 * std::min(x, K) + a2 * std::min(y, K) + b;
    }
    case Nonlinearity::Kind::custom_table:
        return eval_table(nl, x, y);
    case Nonlinearity::Kind::zero:
        return 0.0;
    case Nonlinearity::Kind::linear_y:
        return y;
    }
    return 0.0;
}

double delay_average(const Kernel& kernel, const HState& eta) {
    if (eta.nodes() != kernel.nodes() || std::abs(eta.dxi - kernel.dxi) > 1e-12 * kernel.dxi)
        throw std::invalid_argument("eval_drift: state grid does not match kernel grid");
    const int N = kernel.nodes() - 1;
    double q = 0.5 * (kernel.samples[0] * eta.eta1[0] + kernel.samples[N] * eta.eta1[N]);
    for (int i = 1; i < N; ++i) q += kernel.samples[i] * eta.eta1[i];
    return q * kernel.dxi;
}

double eval_drift(const Nonlinearity& nl, const Kernel& kernel, const HState& eta) {
    return eval_f0(nl, eta.eta0, delay_average(kernel, eta));
}

Utility pow_ratio_utility(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("pow_ratio utility needs gamma in (0,1)");
    return Utility{Utility::Kind::pow_ratio, gamma};
}
Utility log_utility() { return Utility{Utility::Kind::log_x, 0.0}; }
Utility neg_pow_utility(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("neg_pow utility needs beta > 0");
    return Utility{Utility::Kind::neg_pow, beta};
}
Utility zero_utility() { return Utility{Utility::Kind::zero, 0.0}; }

double Utility::operator()(double v) const {
    switch (kind) {
    case Kind::pow_ratio:
        if (v <= 0.0) return 0.0;
        return std::pow(v / (1.0 + v), p);
    case Kind::zero:
        return 0.0;
    case Kind::log_x:
        return v > 0.0 ? std::log(v) : -kInf;
    case Kind::neg_pow:
        return v > 0.0 ? -std::pow(v, -p) : -kInf;
    }
    return 0.0;
}

double Utility::deriv(double v) const {
    switch (kind) {
    case Kind::pow_ratio:
        if (v <= 0.0) return kInf;
        // d/dv (v/(1+v))^p = p v^(p-1) (1+v)^(-p-1)
        return p * std::pow(v, p - 1.0) * std::pow(1.0 + v, -p - 1.0);
    case Kind::zero:
        return 0.0;
    case Kind::log_x:
        return v > 0.0 ? 1.0 / v : kInf;
    case Kind::neg_pow:
        return v > 0.0 ? p * std::pow(v, -p - 1.0) : kInf;
    }
    return 0.0;
}

HypothesisReport validate_hypotheses(const ModelParams& params, const Nonlinearity& nl,
                                     const Kernel& kernel, const UtilityPair& utilities,
                                     const ValidationOptions& opts) {
    HypothesisReport rep;
    auto add = [&](std::string name, bool pass, std::string witness, double value) {
        rep.entries.push_back({std::move(name), pass, std::move(witness), value});
    };

    add("params.r_positive", params.r > 0.0, params.r > 0.0 ? "" : "r <= 0", params.r);
    add("params.T_positive", params.T > 0.0, params.T > 0.0 ? "" : "T <= 0", params.T);
    add("params.rho_positive", params.rho > 0.0, params.rho > 0.0 ? "" : "rho <= 0", params.rho);

    // Kernel: a >= 0, a(-T) = 0, derivative samples consistent.
    {
        double mn = *std::min_element(kernel.samples.begin(), kernel.samples.end());
        add("kernel.nonnegative", mn >= 0.0, mn >= 0.0 ? "" : "min sample < 0", mn);
        const double scale = std::max(1.0, sup_abs(kernel.samples));
        const double a0 = std::abs(kernel.at_minus_T());
        add("kernel.zero_at_minus_T", a0 <= 1e-12 * scale, a0 <= 1e-12 * scale ? "" : "a(-T) != 0", a0);
        double max_res = 0.0;
        const int N = kernel.nodes() - 1;
        for (int i = 1; i < N; ++i) {
            const double fd = (kernel.samples[i + 1] - kernel.samples[i - 1]) / (2.0 * kernel.dxi);
            max_res = std::max(max_res, std::abs(fd - kernel.deriv_samples[i]));
        }
        const double dscale = std::max(1.0, sup_abs(kernel.deriv_samples));
        // Kinked kernels (hat) have one O(1) centered-difference mismatch at the
        // peak; tolerate a single such node.
        int bad = 0;
        for (int i = 1; i < N; ++i) {
            const double fd = (kernel.samples[i + 1] - kernel.samples[i - 1]) / (2.0 * kernel.dxi);
            if (std::abs(fd - kernel.deriv_samples[i]) > 10.0 * kernel.dxi * dscale) ++bad;
        }
        add("kernel.derivative_consistent", bad <= 1, bad <= 1 ? "" : "finite-difference residual too large",
            max_res);
    }

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> ux(-opts.x_range, opts.x_range);
    // the concavity and monotonicity assumptions live on the original
    // domain x >= 0; only Lipschitz continuity survives the x < 0 extension
    std::uniform_real_distribution<double> uxp(0.0, opts.x_range);

    // f0 jointly concave: midpoint inequality on random argument pairs.
    {
        bool ok = true;
        std::string witness;
        double worst = 0.0;
        for (int s = 0; s < opts.samples; ++s) {
            const double x1 = uxp(rng), y1 = ux(rng), x2 = uxp(rng), y2 = ux(rng);
            const double mid = eval_f0(nl, 0.5 * (x1 + x2), 0.5 * (y1 + y2));
            const double avg = 0.5 * (eval_f0(nl, x1, y1) + eval_f0(nl, x2, y2));
            const double gap = avg - mid;
            if (gap > worst) worst = gap;
            if (gap > opts.concavity_tol && ok) {
                ok = false;
                witness = fmt_pair(x1, y1) + " vs " + fmt_pair(x2, y2);
            }
        }
        add("f0.concave", ok, witness, worst);
    }

    // f0 nondecreasing in the second argument.
    {
        bool ok = true;
        std::string witness;
        for (int s = 0; s < opts.samples; ++s) {
            const double x = uxp(rng);
            double y1 = ux(rng), y2 = ux(rng);
            if (y1 > y2) std::swap(y1, y2);
            if (eval_f0(nl, x, y2) < eval_f0(nl, x, y1) - 1e-12) {
                ok = false;
                witness = "x=" + std::to_string(x) + ", y " + std::to_string(y1) + " -> " + std::to_string(y2);
                break;
            }
        }
        add("f0.nondecreasing_in_y", ok, witness, 0.0);
    }

    // f0 Lipschitz with the declared constant, in |dx| + |dy|.
    {
        bool ok = true;
        std::string witness;
        double worst = 0.0;
        for (int s = 0; s < opts.samples; ++s) {
            const double x1 = ux(rng), y1 = ux(rng), x2 = ux(rng), y2 = ux(rng);
            const double num = std::abs(eval_f0(nl, x1, y1) - eval_f0(nl, x2, y2));
            const double den = std::abs(x1 - x2) + std::abs(y1 - y2);
            if (den < 1e-12) continue;
            const double ratio = num / den;
            worst = std::max(worst, ratio);
            if (ratio > params.c_f0 * (1.0 + opts.lipschitz_slack) + opts.lipschitz_slack && ok) {
                ok = false;
                witness = fmt_pair(x1, y1) + " vs " + fmt_pair(x2, y2);
            }
        }
        add("f0.lipschitz", ok, witness, worst);
    }

    // f0(0, y) > 0 for y > 0.
    {
        bool ok = true;
        std::string witness;
        for (int s = 0; s < opts.samples; ++s) {
            const double y = std::abs(ux(rng)) + 1e-9;
            if (!(eval_f0(nl, 0.0, y) > 0.0)) {
                ok = false;
                witness = "y=" + std::to_string(y);
                break;
            }
        }
        add("f0.positive_at_origin", ok, witness, 0.0);
    }

    // U1: increasing, strictly concave, unbounded slope at 0+, bounded by u1_sup.
    {
        const Utility& u1 = utilities.u1;
        bool inc = true, conc = true, bounded = true;
        double sup_seen = -kInf;
        std::string w_inc, w_conc, w_bnd;
        double prev_c = 0.0, prev_v = u1(0.0);
        for (int s = 1; s <= opts.samples; ++s) {
            const double cc = 1e-4 * std::pow(1.02, s); // ladder into the tail
            const double v = u1(cc);
            if (v < prev_v - 1e-12) {
                inc = false;
                w_inc = "c " + std::to_string(prev_c) + " -> " + std::to_string(cc);
            }
            sup_seen = std::max(sup_seen, v);
            prev_c = cc;
            prev_v = v;
        }
        std::uniform_real_distribution<double> uc(1e-6, 100.0);
        for (int s = 0; s < opts.samples; ++s) {
            const double c1 = uc(rng), c2 = uc(rng);
            if (std::abs(c1 - c2) < 1e-9) continue;
            const double mid = u1(0.5 * (c1 + c2));
            const double avg = 0.5 * (u1(c1) + u1(c2));
            if (avg - mid > opts.concavity_tol) {
                conc = false;
                w_conc = fmt_pair(c1, c2);
            }
        }
        if (sup_seen > params.u1_sup + 1e-9) {
            bounded = false;
            w_bnd = "sampled sup " + std::to_string(sup_seen);
        }
        add("u1.nondecreasing", inc, w_inc, 0.0);
        add("u1.concave", conc, w_conc, 0.0);
        add("u1.bounded_by_sup", bounded, w_bnd, sup_seen);
        // slope blow-up at 0+: derivative along c -> 0 must exceed any fixed bound
        const double slope_near0 = u1.deriv(1e-10);
        add("u1.infinite_slope_at_zero", slope_near0 > 1e3,
            slope_near0 > 1e3 ? "" : "U1'(1e-10) too small", slope_near0);
    }

    // U2: increasing, concave, bounded above by u2_sup; integrability of
    // the discounted tail with the exponential floor.
    {
        const Utility& u2 = utilities.u2;
        if (u2.is_zero()) {
            add("u2.increasing_concave", true, "", 0.0);
            add("u2.bounded_by_sup", params.u2_sup >= 0.0, "", 0.0);
            add("u2.tail_integrable", true, "", 0.0);
        } else {
            bool inc = true, conc = true, bounded = true;
            std::string w;
            std::uniform_real_distribution<double> ustate(1e-6, 1e4);
            double sup_seen = -kInf;
            for (int s = 0; s < opts.samples; ++s) {
                double x1 = ustate(rng), x2 = ustate(rng);
                if (x1 > x2) std::swap(x1, x2);
                if (u2(x2) < u2(x1) - 1e-12) inc = false;
                const double mid = u2(0.5 * (x1 + x2));
                if (0.5 * (u2(x1) + u2(x2)) - mid > opts.concavity_tol) conc = false;
                sup_seen = std::max(sup_seen, u2(x2));
            }
            if (sup_seen > params.u2_sup + 1e-9) {
                bounded = false;
                w = "sampled sup " + std::to_string(sup_seen);
            }
            add("u2.increasing_concave", inc && conc, inc && conc ? "" : "sampled violation", 0.0);
            add("u2.bounded_by_sup", bounded, w, sup_seen);
            // int_0^inf e^{-rho t} U2(e^{-c_f0 t}) dt, closed forms per kind
            double tail = 0.0;
            bool finite = true;
            if (u2.kind == Utility::Kind::log_x) {
                tail = -params.c_f0 / (params.rho * params.rho);
            } else if (u2.kind == Utility::Kind::neg_pow) {
                finite = params.rho > u2.p * params.c_f0;
                tail = finite ? -1.0 / (params.rho - u2.p * params.c_f0) : -kInf;
            }
            add("u2.tail_integrable", finite, finite ? "" : "rho <= beta * c_f0", tail);
        }
    }

    return rep;
}

} // namespace dhjb
