#include "doctest.h"

#include <cmath>

#include "dhjb/probes.hpp"
#include "dhjb/sampling.hpp"

using namespace dhjb;

TEST_CASE("concavity probe passes on the real value map and trips on a planted one") {
    const Scenario s = coarse_scenario();
    const ProbeReport real = concavity_probe(s, 6, 1001);
    INFO("max violation ", real.max_violation);
    CHECK(real.pass);
    CHECK(real.samples > 0);

    ValueOracle fake = [](const HState& eta, const ControlPath*) {
        ValueEstimate v;
        v.v_lo = 0.1 * eta.eta0 * eta.eta0;
        v.v_hi = v.v_lo;
        v.opt_gap = 1e-9;
        return v;
    };
    const ProbeReport planted = concavity_probe(s, 6, 1001, fake);
    CHECK_FALSE(planted.pass);
    CHECK(planted.max_violation > 0.0);
}

TEST_CASE("monotonicity probe") {
    const Scenario s = coarse_scenario();
    const ProbeReport rep = monotonicity_probe(s, 6, 2002);
    INFO("max violation ", rep.max_violation);
    CHECK(rep.pass);

    SUBCASE("zero bump is a degenerate pass") {
        ValueOracle oracle = default_value_oracle(s);
        Rng rng = make_rng(5);
        const HState eta = sample_Hpp_state(rng, s.num.N, s.params.T);
        const ValueEstimate v = oracle(eta, nullptr);
        CHECK(v.v_lo <= v.v_hi);
    }
    SUBCASE("a large present bump strictly increases the value") {
        ValueOracle oracle = default_value_oracle(s);
        const HState eta = const_state(0.8, 0.8, s.num.N, s.params.T);
        HState big = eta;
        big.eta0 += 50.0;
        const ValueEstimate v1 = oracle(eta, nullptr);
        const ValueEstimate v2 = oracle(big, nullptr);
        CHECK(v2.v_lo > v1.v_hi);
    }
}

TEST_CASE("dynamic-programming split residual") {
    const Scenario s = coarse_scenario();
    const HState eta = const_state(1.0, 1.0, s.num.N, s.params.T);
    SUBCASE("residual within the bracket budget at two split points") {
        for (double split : {0.25, 0.5}) {
            const DppResult r = dpp_residual(s, eta, split);
            INFO("split ", split, ": residual ", r.residual, " tol ", r.tolerance);
            CHECK(r.residual <= r.tolerance);
        }
    }
    SUBCASE("tiny split keeps both sides close") {
        const DppResult r = dpp_residual(s, eta, 5 * s.num.dt);
        CHECK(r.residual <= r.tolerance);
    }
    SUBCASE("split outside the horizon is rejected") {
        CHECK_THROWS_AS(dpp_residual(s, eta, 100.0), std::invalid_argument);
        CHECK_THROWS_AS(dpp_residual(s, eta, 0.0), std::invalid_argument);
    }
}

TEST_CASE("regularity probe on a constant sequence has zero gaps") {
    const Scenario s = coarse_scenario();
    const HState eta = const_state(1.0, 1.0, s.num.N, s.params.T);
    SequenceSpec spec;
    spec.kind = SequenceSpec::Kind::present;
    spec.terms = 3;
    spec.step0 = 0.0; // constant sequence
    spec.decay = 1.0;
    const ProbeReport rep = regularity_probe(s, eta, spec);
    CHECK(rep.pass);
    CHECK(rep.max_violation <= 1e-9);
}

TEST_CASE("hjb residual terms are finite and the gradient is positive") {
    const Scenario s = coarse_scenario();
    const HState eta = const_state(1.0, 1.0, s.num.N, s.params.T);
    const HjbResult r = hjb_residual(s, eta);
    CHECK(std::isfinite(r.residual_rel));
    CHECK(r.v_eta0 > 0.0);
    CHECK(std::isfinite(r.term_pairing));
    CHECK(r.term_hamiltonian >= 0.0);
    CHECK(r.term_u2 == 0.0);
    INFO("residual ", r.residual_rel);
    CHECK(r.residual_rel < 1.0); // meaningful magnitude; the tight gate is in acceptance
}

TEST_CASE("suite runners produce finalized reports") {
    Scenario s = coarse_scenario();
    SuiteCounts counts;
    counts.operator_samples = 30;
    counts.trajectory_samples = 5;
    counts.value_pairs = 3;
    counts.hjb_points = 1;
    SUBCASE("operators") {
        for (const ProbeReport& r : operators_suite(s, counts, 42)) {
            INFO(r.probe_name, " violation ", r.max_violation);
            CHECK(r.pass);
            CHECK(r.samples > 0);
        }
    }
    SUBCASE("trajectories") {
        for (const ProbeReport& r : trajectories_suite(s, counts, 42)) {
            INFO(r.probe_name, " violation ", r.max_violation);
            CHECK(r.pass);
        }
    }
    SUBCASE("hamiltonian") {
        for (const ProbeReport& r : hamiltonian_suite(s, counts, 42)) {
            INFO(r.probe_name, " violation ", r.max_violation);
            CHECK(r.pass);
        }
    }
}
