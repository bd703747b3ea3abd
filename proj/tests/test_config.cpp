#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "dhjb/config.hpp"
#include "dhjb/csv.hpp"

using namespace dhjb;

TEST_CASE("builtin configuration parses and validates") {
    const ConfigFile cfg = parse_config_text(builtin_config_text());
    const Scenario s = scenario_from_config(cfg);
    CHECK(s.params.rho == doctest::Approx(0.65));
    CHECK(s.num.N == 100);
    CHECK(s.kernel.samples.back() == doctest::Approx(1.0));
    CHECK(seed_from_config(cfg) == 12345ull);
}

TEST_CASE("unknown keys and malformed lines are rejected") {
    CHECK_THROWS_AS(parse_config_text("model.rr = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_text("model.r 0.1\n"), std::invalid_argument);
    CHECK_THROWS_AS((void)scenario_from_config(parse_config_text("model.r = abc\n")),
                    std::invalid_argument);
}

TEST_CASE("nonpositive growth rates are rejected outright") {
    CHECK_THROWS_WITH_AS(
        (void)scenario_from_config(parse_config_text("model.r = -0.5\n")),
        doctest::Contains("model.r must be positive"), std::invalid_argument);
    CHECK_THROWS_AS((void)scenario_from_config(parse_config_text("model.r = 0\n")),
                    std::invalid_argument);
}

TEST_CASE("hypothesis-violating setups need the test-mode flag") {
    const std::string bad = "f0.kind = zero\n";
    CHECK_THROWS_WITH_AS((void)scenario_from_config(parse_config_text(bad)),
                         doctest::Contains("hypothesis validation failed"),
                         std::invalid_argument);
    const Scenario s =
        scenario_from_config(parse_config_text(bad + "numerics.test_mode = true\n"));
    CHECK(s.f0.kind == Nonlinearity::Kind::zero);
}

TEST_CASE("flat kernels are constructible but rejected by validation") {
    const std::string text = "kernel.family = flat\nkernel.params = 1.0\n";
    CHECK_THROWS_AS((void)scenario_from_config(parse_config_text(text)), std::invalid_argument);
    const Scenario s =
        scenario_from_config(parse_config_text(text + "numerics.test_mode = true\n"));
    CHECK(s.kernel.at_minus_T() == doctest::Approx(1.0));
}

TEST_CASE("initial-state mini-language") {
    SUBCASE("const") {
        const HState s = parse_eta_spec("const:2.5", 10, 1.0);
        CHECK(s.eta0 == 2.5);
        for (double v : s.eta1) CHECK(v == 2.5);
    }
    SUBCASE("ramp") {
        const HState s = parse_eta_spec("ramp:0:1", 10, 1.0);
        CHECK(s.eta1.front() == doctest::Approx(0.0));
        CHECK(s.eta1.back() == doctest::Approx(1.0));
        CHECK(s.eta0 == doctest::Approx(1.0));
    }
    SUBCASE("bump") {
        const HState s = parse_eta_spec("bump:-0.5:0.2:0.4", 100, 1.0);
        double mass = 0.0;
        for (size_t i = 0; i + 1 < s.eta1.size(); ++i)
            mass += 0.5 * s.dxi * (s.eta1[i] + s.eta1[i + 1]);
        CHECK(mass == doctest::Approx(0.4).epsilon(0.02));
        CHECK(s.eta0 == doctest::Approx(0.4 / 0.2));
    }
    SUBCASE("file") {
        const std::string path = "eta_spec_test.csv";
        {
            std::ofstream out(path);
            out << "eta0,2.0\nxi,value\n-1.0,0.0\n0.0,1.0\n";
        }
        const HState s = parse_eta_spec("file:" + path, 20, 1.0);
        CHECK(s.eta0 == doctest::Approx(2.0));
        CHECK(s.eta1[10] == doctest::Approx(0.5));
        std::remove(path.c_str());
    }
    SUBCASE("bad specs") {
        CHECK_THROWS_AS(parse_eta_spec("triangle:1", 10, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(parse_eta_spec("const", 10, 1.0), std::invalid_argument);
    }
}

TEST_CASE("control mini-language") {
    const ControlPath z = parse_control_spec("zero", 4.0);
    CHECK(z.values.empty());
    CHECK(z.at(1.0) == 0.0);
    const ControlPath c = parse_control_spec("const:0.3", 4.0);
    CHECK(c.at(3.9) == doctest::Approx(0.3));
    CHECK(c.at(4.1) == 0.0);
    const ControlPath st = parse_control_spec("steps:1,2,3,4", 4.0);
    CHECK(st.dt_seg == doctest::Approx(1.0));
    CHECK(st.at(2.5) == doctest::Approx(3.0));
    CHECK_THROWS_AS(parse_control_spec("steps:", 4.0), std::invalid_argument);
}

TEST_CASE("numeric formatting is deterministic and round-trips") {
    CHECK(fmt_num(-kInf) == "-inf");
    CHECK(fmt_num(kInf) == "inf");
    CHECK(fmt_num(0.1) == "0.1");
    CHECK(fmt_num(1.0) == "1");
    const double v = 0.1234567890123456789;
    CHECK(std::stod(fmt_num(v)) == v);
}
