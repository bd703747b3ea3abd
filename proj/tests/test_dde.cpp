#include "doctest.h"

#include <cmath>

#include "dhjb/dde.hpp"
#include "dhjb/sampling.hpp"
#include "dhjb/scenario.hpp"

using namespace dhjb;

namespace {

Scenario exempt_scenario(double r, Nonlinearity::Kind kind) {
    Scenario s = default_scenario();
    s.params.r = r;
    s.f0 = Nonlinearity{kind, {}};
    s.num.test_mode = true;
    return s;
}

} // namespace

TEST_CASE("zero drift keeps the state constant") {
    const Scenario s = exempt_scenario(0.0, Nonlinearity::Kind::zero);
    const HState eta = const_state(2.0, 2.0, s.num.N, s.params.T);
    const Trajectory tr =
        integrate(s.params, s.f0, s.kernel, eta, ControlPath{}, 1.0, s.num.dt);
    for (int m = 0; m <= tr.steps(); ++m) CHECK(tr.present(m) == doctest::Approx(2.0));
    CHECK(tr.admissible_until == kInf);
}

TEST_CASE("pure linear growth reproduces the exponential") {
    const Scenario s = exempt_scenario(0.1, Nonlinearity::Kind::zero);
    const HState eta = const_state(1.0, 1.0, s.num.N, s.params.T);
    const Trajectory tr =
        integrate(s.params, s.f0, s.kernel, eta, ControlPath{}, 1.0, 1e-3);
    for (int m = 0; m <= tr.steps(); m += 100)
        CHECK(std::abs(tr.present(m) - std::exp(0.1 * m * tr.dt)) < 1e-4);
}

TEST_CASE("distributed-delay drift matches a fine-step reference run") {
    Scenario s = exempt_scenario(0.0, Nonlinearity::Kind::linear_y);
    s.num.N = 100; // dxi = 0.01 so the fine step divides it
    const double slope[] = {1.0};
    s.kernel = make_kernel(KernelFamily::linear_ramp, slope, s.num.N, s.params.T);
    const HState eta = const_state(1.0, 1.0, s.num.N, s.params.T);
    const Trajectory coarse =
        integrate(s.params, s.f0, s.kernel, eta, ControlPath{}, 1.0, 1e-3);
    const Trajectory fine =
        integrate(s.params, s.f0, s.kernel, eta, ControlPath{}, 1.0, 1e-5);
    CHECK(std::abs(coarse.present(coarse.steps()) - fine.present(fine.steps())) < 1e-4);
}

TEST_CASE("halving the step raises the self-convergence factor past 1.8") {
    const Scenario s = default_scenario();
    Rng rng = make_rng(3);
    const HState eta = sample_Hpp_state(rng, s.num.N, s.params.T);
    const ControlPath c = const_control(0.05, 2.0);
    const double dt = s.dxi();
    auto terminal = [&](double step) {
        const Trajectory tr = integrate(s.params, s.f0, s.kernel, eta, c, 2.0, step);
        return tr.present(tr.steps());
    };
    const double ref = terminal(dt / 16.0);
    const double e1 = std::abs(terminal(dt) - ref);
    const double e2 = std::abs(terminal(dt / 2.0) - ref);
    CHECK(e1 / std::max(e2, 1e-16) > 1.8);
}

TEST_CASE("integrate validates its inputs") {
    const Scenario s = default_scenario();
    const HState eta = const_state(1.0, 1.0, s.num.N, s.params.T);
    CHECK_THROWS_AS(
        integrate(s.params, s.f0, s.kernel, eta, ControlPath{}, -1.0, s.num.dt),
        std::invalid_argument);
    HState bad = eta;
    bad.eta0 = 0.0; // boundary of H+ excluded
    CHECK_THROWS_AS(integrate(s.params, s.f0, s.kernel, bad, ControlPath{}, 1.0, s.num.dt),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        integrate(s.params, s.f0, s.kernel, eta, ControlPath{}, 1.0, s.dxi() * 1.7),
        std::invalid_argument);
    ControlPath neg{1.0, {-0.5}};
    CHECK_THROWS_AS(integrate(s.params, s.f0, s.kernel, eta, neg, 1.0, s.num.dt),
                    std::invalid_argument);
}

TEST_CASE("null control from a nonnegative history is admissible forever") {
    const Scenario s = default_scenario();
    Rng rng = make_rng(5);
    const HState eta = sample_Hpp_state(rng, s.num.N, s.params.T);
    const AdmissibilityVerdict v = check_admissible(s.params, s.f0, s.kernel, eta,
                                                    ControlPath{}, 2.0 * s.params.T, s.num.dt);
    CHECK(v.admissible_until == kInf);
    CHECK(v.certified_forever);
    CHECK(v.tail_floor > 0.0);
}

TEST_CASE("outsized consumption drains a small account") {
    const Scenario s = default_scenario();
    const HState eta = const_state(0.1, 0.1, s.num.N, s.params.T);
    const ControlPath c = const_control(100.0, 2.0);
    const AdmissibilityVerdict v =
        check_admissible(s.params, s.f0, s.kernel, eta, c, 2.0, s.num.dt);
    CHECK(v.admissible_until < 2.0);
    CHECK_FALSE(v.certified_forever);
}

TEST_CASE("null-control path dominates its exponential floor") {
    const Scenario s = default_scenario();
    const HState eta = const_state(1.0, 0.0, s.num.N, s.params.T);
    const Trajectory tr =
        integrate(s.params, s.f0, s.kernel, eta, ControlPath{}, 3.0, s.num.dt);
    CHECK(tr.admissible_until == kInf);
    const double tol = grid_tol(tr.dt, s.dxi(), sup_abs(tr.x));
    for (int m = 0; m <= tr.steps(); ++m)
        CHECK(tr.present(m) >= hpp_lower_bound(s.params, eta, m * tr.dt) - tol);
}

TEST_CASE("domain membership") {
    const Scenario s = default_scenario();
    Rng rng = make_rng(17);
    SUBCASE("nonnegative histories belong to the domain") {
        for (int i = 0; i < 5; ++i) {
            const HState eta = sample_Hpp_state(rng, s.num.N, s.params.T);
            CHECK(domain_membership(s.params, s.f0, s.kernel, eta, s.num.dt));
        }
    }
    SUBCASE("zero past with positive present belongs to the domain") {
        const HState eta = const_state(0.5, 0.0, s.num.N, s.params.T);
        CHECK(domain_membership(s.params, s.f0, s.kernel, eta, s.num.dt));
    }
    SUBCASE("a heavily negative past drags a tiny present below zero") {
        const HState eta = const_state(1e-3, -10.0, s.num.N, s.params.T);
        CHECK_FALSE(domain_membership(s.params, s.f0, s.kernel, eta, s.num.dt));
        const Trajectory tr =
            integrate(s.params, s.f0, s.kernel, eta, ControlPath{}, s.params.T, s.num.dt);
        CHECK(tr.admissible_until < s.params.T); // violation time is reported
    }
}

TEST_CASE("comparison oracle") {
    const Scenario s = default_scenario();
    Rng rng = make_rng(29);
    const HState eta = sample_Hpp_state(rng, s.num.N, s.params.T);
    const ControlPath c = const_control(0.1, 2.0);

    SUBCASE("a trajectory never exceeds itself") {
        const Trajectory self = integrate(s.params, s.f0, s.kernel, eta, c, 2.0, s.num.dt);
        CHECK(comparison_check(s.params, s.f0, s.kernel, self, eta, c));
    }
    SUBCASE("larger consumption stays below") {
        const ControlPath cp = const_control(0.4, 2.0);
        const Trajectory sub = integrate(s.params, s.f0, s.kernel, eta, cp, 2.0, s.num.dt);
        CHECK(comparison_check(s.params, s.f0, s.kernel, sub, eta, c));
    }
    SUBCASE("smaller initial data stays below") {
        HState smaller = eta;
        smaller.eta0 *= 0.7;
        for (double& v : smaller.eta1) v *= 0.7;
        const Trajectory sub =
            integrate(s.params, s.f0, s.kernel, smaller, c, 2.0, s.num.dt);
        CHECK(comparison_check(s.params, s.f0, s.kernel, sub, eta, c));
    }
    SUBCASE("planted violations are detected") {
        Trajectory planted = integrate(s.params, s.f0, s.kernel, eta, c, 2.0, s.num.dt);
        const double bump = 100.0 * grid_tol(planted.dt, s.dxi(), sup_abs(planted.x));
        for (size_t j = planted.x.size() / 2; j < planted.x.size(); ++j) planted.x[j] += bump;
        CHECK_FALSE(comparison_check(s.params, s.f0, s.kernel, planted, eta, c));
    }
}

TEST_CASE("exponential floor formula") {
    ModelParams p;
    p.c_f0 = 0.5;
    const HState eta = const_state(1.0, 1.0, 10, 1.0);
    CHECK(hpp_lower_bound(p, eta, 0.0) == doctest::Approx(1.0));
    CHECK(hpp_lower_bound(p, eta, 2.0) == doctest::Approx(std::exp(-1.0)));
    ModelParams q;
    q.c_f0 = 0.0;
    CHECK(hpp_lower_bound(q, eta, 7.0) == doctest::Approx(1.0));
    HState neg = eta;
    neg.eta1[3] = -0.1;
    CHECK_THROWS_AS(hpp_lower_bound(p, neg, 1.0), std::domain_error);
}

TEST_CASE("trajectory CSV fields line up with the grid") {
    const Scenario s = default_scenario();
    const HState eta = const_state(1.0, 0.5, s.num.N, s.params.T);
    const ControlPath c = const_control(0.2, 1.0);
    const Trajectory tr = integrate(s.params, s.f0, s.kernel, eta, c, 1.0, s.num.dt);
    CHECK(tr.times.front() == doctest::Approx(-s.params.T));
    CHECK(tr.times.back() == doctest::Approx(1.0));
    CHECK(tr.present(0) == doctest::Approx(1.0));
    CHECK(tr.x[0] == doctest::Approx(0.5));
    CHECK(tr.c[0] == 0.0);                       // history carries no control
    CHECK(tr.c[tr.hist_len] == doctest::Approx(0.2));
    const HState lifted = tr.state_at(tr.steps());
    CHECK(lifted.eta0 == doctest::Approx(tr.present(tr.steps())));
    CHECK(lifted.eta1.size() == eta.eta1.size());
}
