#pragma once

#include <span>
#include <string>
#include <vector>

#include "dhjb/state.hpp"

namespace dhjb {

/// Scalar problem data. r, T, rho must be positive for production runs
/// (checked by validate_hypotheses, enforced by the config layer).
struct ModelParams {
    double r = 0.1;      // linear growth rate, 1/time
    double T = 1.0;      // delay length, time
    double rho = 0.65;   // discount rate, 1/time
    double c_f0 = 0.2;   // Lipschitz constant of the drift nonlinearity
    double u1_sup = 1.0; // sup of the consumption utility
    double u2_sup = 0.0; // sup of the state utility
};

/// Delay weight a(.) on [-T,0], sampled with its derivative.
/// Admissible kernels satisfy a >= 0 and a(-T) = 0.
struct Kernel {
    std::vector<double> samples;
    std::vector<double> deriv_samples;
    double dxi = 0.0;

    int nodes() const { return static_cast<int>(samples.size()); }
    double delay_span() const { return dxi * (nodes() - 1); }
    double at_zero() const { return samples.back(); }
    double at_minus_T() const { return samples.front(); }
};

enum class KernelFamily { linear_ramp, hat, poly };

/// Build a kernel from an analytic family; derivatives are analytic, not
/// finite-differenced. Throws std::invalid_argument for parameters that
/// break a >= 0 or a(-T) = 0, and for N < 8.
Kernel make_kernel(KernelFamily family, std::span<const double> params, int N, double T);

/// Constant kernel a == value. Violates a(-T) = 0 on purpose; used to
/// demonstrate the failure of the weak-norm Lipschitz bound.
Kernel flat_kernel(double value, int N, double T);

/// Linear resampling onto a grid with N_new segments (refinement studies).
Kernel resample_kernel(const Kernel& k, int N_new);

/// Drift nonlinearity f0(x, y). The zero and linear_y kinds violate the
/// standing assumptions and are only accepted in test mode.
struct Nonlinearity {
    enum class Kind { affine_saturating, custom_table, zero, linear_y };
    Kind kind = Kind::affine_saturating;
    std::vector<double> params; // affine_saturating: {a1, a2, K, b}

    bool hypothesis_exempt() const { return kind == Kind::zero || kind == Kind::linear_y; }
};

Nonlinearity affine_saturating(double a1, double a2, double K, double b);

/// Bilinear table on [0, x_max] x [y_min, y_max], clamped at the edges.
/// values are row-major, nx rows of ny columns.
Nonlinearity table_nonlinearity(int nx, int ny, double x_max, double y_min, double y_max,
                                std::vector<double> values);

/// f0(x, y) with the x < 0 extension f0(x, y) := f0(0, y) applied.
double eval_f0(const Nonlinearity& nl, double x, double y);

/// f0(eta0, integral of a * eta1) with the delay integral by composite
/// trapezoid on the shared grid. Throws on grid mismatch.
double eval_drift(const Nonlinearity& nl, const Kernel& kernel, const HState& eta);

/// Trapezoid of a * eta1 alone (the drift's second argument).
double delay_average(const Kernel& kernel, const HState& eta);

/// One-argument utility.
struct Utility {
    enum class Kind { pow_ratio, zero, log_x, neg_pow };
    Kind kind = Kind::zero;
    double p = 0.5; // gamma for pow_ratio, beta for neg_pow

    double operator()(double v) const;
    double deriv(double v) const; // meaningful for pow_ratio only
    bool is_zero() const { return kind == Kind::zero; }
};

struct UtilityPair {
    Utility u1; // consumption utility
    Utility u2; // state utility (zero kind allowed)
};

Utility pow_ratio_utility(double gamma);
Utility log_utility();
Utility neg_pow_utility(double beta);
Utility zero_utility();

struct HypothesisEntry {
    std::string name;
    bool pass = true;
    std::string witness; // sample description on failure, empty otherwise
    double value = 0.0;  // measured quantity (max violation, computed integral, ...)
};

struct HypothesisReport {
    std::vector<HypothesisEntry> entries;
    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
    const HypothesisEntry* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e;
        return nullptr;
    }
};

struct ValidationOptions {
    int samples = 1000;
    unsigned long long seed = 20240901ull;
    double concavity_tol = 1e-9;
    double lipschitz_slack = 1e-9;
    double x_range = 50.0; // sampling box half-width for f0 arguments
};

/// Sampling-based check of every standing assumption on (params, f0, a, U1, U2).
/// Failures are report entries with witnesses, never exceptions.
HypothesisReport validate_hypotheses(const ModelParams& params, const Nonlinearity& nl,
                                     const Kernel& kernel, const UtilityPair& utilities,
                                     const ValidationOptions& opts = {});

} // namespace dhjb
