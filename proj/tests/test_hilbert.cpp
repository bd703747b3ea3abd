#include "doctest.h"

#include <cmath>

#include "dhjb/hilbert.hpp"
#include "dhjb/sampling.hpp"
#include "dhjb/scenario.hpp"

using namespace dhjb;

namespace {

const Scenario& scn() {
    static const Scenario s = default_scenario();
    return s;
}

} // namespace

TEST_CASE("norms on simple states") {
    const int N = scn().num.N;
    CHECK(h_norm(const_state(1.0, 0.0, N, 1.0)) == doctest::Approx(1.0));
    CHECK(h_norm(HState{0.0, std::vector<double>(N + 1, 1.0), 1.0 / N}) == doctest::Approx(1.0));
    CHECK(h_norm(HState{3.0, std::vector<double>(N + 1, 4.0), 1.0 / N}) == doctest::Approx(5.0));
}

TEST_CASE("inverse generator on simple states") {
    const ModelParams p = scn().params; // r = 0.1
    const int N = scn().num.N;
    SUBCASE("pure present scales by 1/r and fills a constant past") {
        const HState eta = const_state(p.r, 0.0, N, 1.0);
        const LiftedState inv = apply_Ainv(p, eta);
        CHECK(inv.state.eta0 == doctest::Approx(1.0));
        for (double v : inv.state.eta1) CHECK(v == doctest::Approx(1.0));
        CHECK(inv.in_domain_A);
    }
    SUBCASE("constant past integrates to a ramp") {
        const HState eta{0.0, std::vector<double>(N + 1, 1.0), 1.0 / N};
        const LiftedState inv = apply_Ainv(p, eta);
        CHECK(inv.state.eta0 == doctest::Approx(0.0));
        // second component s -> s (ramp from -1 to 0)
        CHECK(inv.state.eta1.front() == doctest::Approx(-1.0));
        CHECK(inv.state.eta1[N / 2] == doctest::Approx(-0.5));
        CHECK(inv.state.eta1.back() == doctest::Approx(0.0));
    }
    SUBCASE("weak norm of the pure-present unit") {
        const HState eta = const_state(p.r, 0.0, N, 1.0);
        CHECK(norm_minus1(p, eta) == doctest::Approx(std::sqrt(2.0)));
        CHECK(norm_minus1(p, HState{0.0, std::vector<double>(N + 1, 0.0), 1.0 / N}) ==
              doctest::Approx(0.0));
    }
    SUBCASE("weak norm is absolutely homogeneous") {
        Rng rng = make_rng(31);
        const HState eta = sample_smooth_state(rng, N, 1.0);
        CHECK(norm_minus1(p, state_scale(eta, -3.5)) ==
              doctest::Approx(3.5 * norm_minus1(p, eta)));
    }
}

TEST_CASE("A then A inverse round-trips") {
    Rng rng = make_rng(37);
    const ModelParams p = scn().params;
    for (int i = 0; i < 20; ++i) {
        const HState eta = sample_smooth_state(rng, scn().num.N, 1.0);
        const LiftedState inv = apply_Ainv(p, eta);
        const LiftedState back = apply_A(p, inv.state);
        const double err = h_norm(state_add(back.state, eta, -1.0));
        CHECK(err < 1e-3 * std::max(1.0, h_norm(eta)));
    }
}

TEST_CASE("adjoint of the generator") {
    const ModelParams p = scn().params;
    const int N = scn().num.N;
    SUBCASE("ramp kernel: A*(0, a) = (a(0), -a')") {
        const HState a{0.0, scn().kernel.samples, scn().kernel.dxi};
        const LiftedState out = apply_Astar(p, a);
        CHECK(out.state.eta0 == doctest::Approx(1.0)); // r*0 + a(0)
        for (double v : out.state.eta1) CHECK(v == doctest::Approx(-1.0).epsilon(1e-6));
    }
    SUBCASE("zero past") {
        ModelParams q = p;
        q.r = 0.5;
        const HState eta = const_state(1.0, 0.0, N, 1.0);
        const LiftedState out = apply_Astar(q, eta);
        CHECK(out.state.eta0 == doctest::Approx(0.5));
        for (double v : out.state.eta1) CHECK(v == doctest::Approx(0.0));
    }
    SUBCASE("domain violation is rejected") {
        const HState flat = const_state(1.0, 1.0, N, 1.0); // eta1(-T) = 1
        CHECK_THROWS_AS(apply_Astar(p, flat), std::domain_error);
    }
}

TEST_CASE("adjoint pairing error shrinks with the grid") {
    const ModelParams p = scn().params;
    Rng rng = make_rng(41);
    double prev = -1.0;
    for (int N : {100, 200, 400}) {
        Rng local = rng; // same draws at every resolution
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const SmoothSpec zs = sample_domA_spec(local);
            const SmoothSpec es = sample_domAstar_spec(local);
            const HState z = realize(zs, N, 1.0);
            const HState e = realize(es, N, 1.0);
            const double lhs = h_inner(apply_A(p, z).state, e);
            const double rhs = h_inner(z, apply_Astar(p, e).state);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        if (prev > 0.0) CHECK(prev / worst > 1.8);
        prev = worst;
    }
}

TEST_CASE("semigroup") {
    const ModelParams p = scn().params;
    const int N = scn().num.N;
    Rng rng = make_rng(43);
    SUBCASE("identity at zero on matched boundary states") {
        const HState eta = sample_domA_state(rng, N, 1.0);
        const HState out = apply_semigroup(p, 0.0, eta);
        CHECK(h_norm(state_add(out, eta, -1.0)) < 1e-14);
    }
    SUBCASE("past is fully refreshed after the delay span") {
        const HState eta = sample_smooth_state(rng, N, 1.0);
        const HState out = apply_semigroup(p, 1.5, eta);
        for (int i = 0; i <= N; ++i) {
            const double u = 1.5 + eta.xi(i);
            CHECK(out.eta1[i] == doctest::Approx(eta.eta0 * std::exp(p.r * u)));
        }
    }
    SUBCASE("norm bound with the stated constant") {
        for (int i = 0; i < 200; ++i) {
            const HState eta = sample_smooth_state(rng, N, 1.0);
            std::uniform_real_distribution<double> ut(0.0, 2.0);
            const double t = ut(rng);
            const double lhs = h_norm(apply_semigroup(p, t, eta));
            const double rhs =
                (3.0 + 2.0 * 1.0) * std::exp(2.0 * p.r * t) * h_norm(eta) * h_norm(eta);
            CHECK(lhs * lhs <= rhs + 1e-9);
        }
    }
    SUBCASE("law under grid-aligned composition") {
        const HState eta = sample_smooth_state(rng, N, 1.0);
        const double dxi = 1.0 / N;
        const double s = 17 * dxi, t = 40 * dxi;
        const HState one = apply_semigroup(p, s, apply_semigroup(p, t, eta));
        const HState two = apply_semigroup(p, s + t, eta);
        CHECK(h_norm(state_add(one, two, -1.0)) < 1e-12 * std::max(1.0, h_norm(two)));
    }
}

TEST_CASE("adjoint semigroup") {
    const ModelParams p = scn().params;
    const int N = scn().num.N;
    Rng rng = make_rng(47);
    SUBCASE("identity at zero") {
        const HState eta = sample_smooth_state(rng, N, 1.0);
        const HState out = apply_adjoint_semigroup(p, 0.0, eta);
        CHECK(h_norm(state_add(out, eta, -1.0)) < 1e-14);
    }
    SUBCASE("zero past leaves a bare exponential") {
        const HState eta = const_state(1.0, 0.0, N, 1.0);
        const HState out = apply_adjoint_semigroup(p, 0.7, eta);
        CHECK(out.eta0 == doctest::Approx(std::exp(p.r * 0.7)));
        for (double v : out.eta1) CHECK(v == doctest::Approx(0.0));
    }
    SUBCASE("beyond the delay span is rejected") {
        const HState eta = const_state(1.0, 0.0, N, 1.0);
        CHECK_THROWS_AS(apply_adjoint_semigroup(p, 1.5, eta), std::invalid_argument);
    }
    SUBCASE("duality against the forward semigroup") {
        std::uniform_real_distribution<double> ut(0.0, 1.0);
        for (int i = 0; i < 50; ++i) {
            const HState z = sample_smooth_state(rng, N, 1.0);
            const HState e = sample_smooth_state(rng, N, 1.0);
            const double t = ut(rng);
            const double lhs = h_inner(apply_semigroup(p, t, z), e);
            const double rhs = h_inner(z, apply_adjoint_semigroup(p, t, e));
            CHECK(std::abs(lhs - rhs) < 20.0 * (1.0 / N) * std::max(1.0, h_norm(z) * h_norm(e)));
        }
    }
}

TEST_CASE("mild integration with zero drift is exactly the semigroup") {
    Scenario s = default_scenario();
    s.f0 = Nonlinearity{Nonlinearity::Kind::zero, {}};
    s.num.test_mode = true;
    Rng rng = make_rng(53);
    const HState eta = sample_Hpp_state(rng, s.num.N, s.params.T);
    const Trajectory tr =
        integrate_mild(s.params, s.f0, s.kernel, eta, ControlPath{}, 2.0, s.num.dt);
    for (double t : {0.5, 1.0, 2.0}) {
        const int m = static_cast<int>(std::llround(t / tr.dt));
        const HState lifted = tr.state_at(m);
        const HState exact = apply_semigroup(s.params, t, eta);
        CHECK(h_norm(state_add(lifted, exact, -1.0)) < 1e-10 * std::max(1.0, h_norm(exact)));
    }
}

TEST_CASE("lifted and direct integration agree") {
    const Scenario s = default_scenario();
    Rng rng = make_rng(59);
    const HState eta = sample_Hpp_state(rng, s.num.N, s.params.T);
    ControlPath c{s.params.T, {0.05, 0.2, 0.1}};
    const double horizon = 3.0 * s.params.T;
    const Trajectory dde = integrate(s.params, s.f0, s.kernel, eta, c, horizon, s.num.dt);
    const Trajectory mild = integrate_mild(s.params, s.f0, s.kernel, eta, c, horizon, s.num.dt);
    double sup = 0.0;
    for (int m = 0; m <= dde.steps(); ++m)
        sup = std::max(sup, h_norm(state_add(mild.state_at(m), dde.state_at(m), -1.0)));
    CHECK(sup < grid_tol(s.num.dt, s.dxi(), sup_abs(dde.x)));
    CHECK(sup < 5e-3);
}

TEST_CASE("weak-norm Lipschitz constant of the ramp kernel") {
    ModelParams p = scn().params;
    p.r = 0.5;
    CHECK(lipA_constant(p, scn().kernel) == doctest::Approx(0.5 + std::sqrt(2.0)).epsilon(1e-4));
    const Kernel flat = flat_kernel(1.0, scn().num.N, 1.0);
    CHECK_THROWS_AS(lipA_constant(p, flat), std::domain_error);
}

TEST_CASE("weak-norm bound holds on random smooth states") {
    const Scenario& s = scn();
    Rng rng = make_rng(61);
    for (int i = 0; i < 200; ++i) {
        const HState eta = sample_smooth_state(rng, s.num.N, s.params.T);
        const WeakBoundSample w = weak_norm_bound(s.params, s.kernel, eta);
        CHECK(w.lhs <= w.rhs * (1.0 + 1e-6));
    }
}

TEST_CASE("flat-kernel counterexample blows up the weak-norm ratio") {
    const Scenario& s = scn();
    double prev = kInf;
    for (int n : {1, 2, 4, 8}) {
        const CounterexamplePoint pt = counterexample_sequence(n, s.params, s.dxi());
        CHECK(pt.mass == doctest::Approx(1.0)); // pairing stays one
        CHECK(pt.nm1 < prev);                   // weak norm keeps shrinking
        CHECK(pt.nm1 == doctest::Approx(1.0 / std::sqrt(3.0 * n)));
        prev = pt.nm1;
    }
    const double r1 = 1.0 / counterexample_sequence(1, s.params, s.dxi()).nm1;
    const double r4 = 1.0 / counterexample_sequence(4, s.params, s.dxi()).nm1;
    CHECK(r4 > 1.5 * r1);
    CHECK_THROWS_AS(counterexample_sequence(100000, s.params, s.dxi()), std::invalid_argument);
}

TEST_CASE("weak-norm stability of nearby trajectories") {
    const Scenario& s = scn();
    Rng rng = make_rng(67);
    SUBCASE("zero drift is controlled by the bare semigroup constant") {
        Scenario z = s;
        z.f0 = Nonlinearity{Nonlinearity::Kind::zero, {}};
        z.num.test_mode = true;
        const HState a = sample_Hpp_state(rng, z.num.N, z.params.T);
        HState b = a;
        b.eta0 += 0.3;
        b.eta1[z.num.N / 2] += 0.2;
        const GronwallResult g = gronwall_stability(z.params, z.f0, z.kernel, a, b, z.num.dt);
        const double ms = std::sqrt(3.0 + 2.0 * z.params.T) * std::exp(z.params.r * z.params.T);
        CHECK(g.ratio <= ms + 1e-2);
    }
    SUBCASE("full drift stays under the assembled constant") {
        const double bound = gronwall_bound(s.params, s.kernel);
        for (int i = 0; i < 10; ++i) {
            const HState a = sample_Hpp_state(rng, s.num.N, s.params.T);
            const HState b = sample_Hpp_state(rng, s.num.N, s.params.T);
            const GronwallResult g =
                gronwall_stability(s.params, s.f0, s.kernel, a, b, s.num.dt);
            CHECK(g.ratio <= bound);
            CHECK(g.present_ratio <= s.params.r * bound);
        }
    }
    SUBCASE("coincident states are rejected") {
        const HState a = sample_Hpp_state(rng, s.num.N, s.params.T);
        CHECK_THROWS_AS(gronwall_stability(s.params, s.f0, s.kernel, a, a, s.num.dt),
                        std::invalid_argument);
    }
}
