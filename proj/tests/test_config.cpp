// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "aoi/config.hpp"

using namespace aoi;

namespace {

const char* kDefaults = R"(
[network]
bs_intensity = 1
pathloss_exponent = 4
power_control_epsilon = 1
rho_dbm = -90
theta_db = 0

[traffic]
type = tt
duty_cycle = 8
)";

bool has_violation(const ValidationError& e, const std::string& name) {
    for (const auto& v : e.violations())
        if (v.name == name) return true;
    return false;
}

} // namespace

TEST_CASE("default network parameters validate with exact unit conversion") {
    const ValidatedConfig c = validate(parse_config(kDefaults));
    CHECK(c.network.sir_threshold == 1.0);
    CHECK(c.network.power_control_rho == 1e-12);
    CHECK(c.network.pathloss_exponent == 4.0);
    REQUIRE(std::holds_alternative<TtTraffic>(c.traffic));
    CHECK(std::get<TtTraffic>(c.traffic).duty_cycle == 8);
    CHECK(c.analysis.n_classes == 10);
    CHECK(c.analysis.fixed_point_tol == 1e-4);
}

TEST_CASE("dB and dBm conversions are exact at decade points") {
    CHECK(db_to_linear(10.0) == 10.0);
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(dbm_to_watts(-90.0) == 1e-12);
    CHECK(dbm_to_watts(30.0) == 1.0);
    CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
}

TEST_CASE("pathloss exponent of 2 is rejected") {
    RawConfig raw = parse_config(kDefaults);
    raw.pathloss_exponent = 2.0;
    try {
        validate(raw);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(has_violation(e, "pathloss_exponent"));
    }
}

TEST_CASE("ET arrival probability of zero is rejected") {
    RawConfig raw = parse_config("[traffic]\ntype = et\narrival_prob = 0\n");
    CHECK_THROWS_AS(validate(raw), ValidationError);
}

TEST_CASE("every violated invariant is reported") {
    RawConfig raw = parse_config(kDefaults);
    raw.pathloss_exponent = 1.5;
    raw.power_control_epsilon = 1.5;
    raw.bs_intensity = -1.0;
    raw.analysis.n_classes = 0;
    try {
        validate(raw);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.violations().size() == 4);
        CHECK(has_violation(e, "pathloss_exponent"));
        CHECK(has_violation(e, "power_control_epsilon"));
        CHECK(has_violation(e, "bs_intensity"));
        CHECK(has_violation(e, "n_classes"));
    }
}

TEST_CASE("TT duty cycle must be an integer of at least 2") {
    CHECK_THROWS_AS(validate(parse_config("[traffic]\ntype=tt\nduty_cycle=1\n")), ValidationError);
    CHECK_THROWS_AS(validate(parse_config("[traffic]\ntype=tt\nduty_cycle=4.5\n")), ValidationError);
    CHECK_NOTHROW(validate(parse_config("[traffic]\ntype=tt\nduty_cycle=2\n")));
}

TEST_CASE("minimal file gets defaults") {
    const char* minimal = "[network]\nbs_intensity = 2\npathloss_exponent = 3.5\ntheta_db = 5\n[traffic]\ntype = et\narrival_prob = 0.2\n";
    const ValidatedConfig c = validate(parse_config(minimal));
    CHECK(c.network.bs_intensity == 2.0);
    CHECK(c.network.power_control_epsilon == 1.0);
    CHECK(c.network.power_control_rho == 1e-12);
    CHECK(c.network.sir_threshold == doctest::Approx(3.1622776601683795));
    CHECK(c.analysis.n_classes == 10);
    CHECK(c.analysis.fixed_point_tol == 1e-4);
    CHECK(c.analysis.max_iters == 200);
    CHECK(std::get<EtTraffic>(c.traffic).arrival_prob == 0.2);
}

TEST_CASE("missing traffic block is a parse error") {
    CHECK_THROWS_AS(parse_config("[network]\ntheta_db = 0\n"), ParseError);
}

TEST_CASE("parse errors carry line and field") {
    try {
        parse_config("[network]\n\ntheta_db = abc\n[traffic]\ntype=tt\nduty_cycle=8\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.field() == "theta_db");
    }
    CHECK_THROWS_AS(parse_config("[network]\nwhatever = 1\n[traffic]\ntype=tt\nduty_cycle=8\n"), ParseError);
    CHECK_THROWS_AS(parse_config("[bogus]\n"), ParseError);
    CHECK_THROWS_AS(parse_config("theta_db = 1\n"), ParseError);
}

TEST_CASE("serialize round-trips through parse and validate") {
    RawConfig raw = parse_config(kDefaults);
    raw.theta_db = 3.7;
    raw.rho_dbm = -87.3;
    raw.power_control_epsilon = 0.35;
    raw.analysis.quad_rel_tol = 3e-9;
    raw.sim.seed = 0xfeedfacecafebeefull;
    const ValidatedConfig a = validate(raw);
    const ValidatedConfig b = validate(parse_config(serialize(a)));
    CHECK(a == b);
    CHECK(serialize(a) == serialize(b));

    const ValidatedConfig et = validate(parse_config("[traffic]\ntype=et\narrival_prob=0.123456789\n"));
    CHECK(validate(parse_config(serialize(et))) == et);
}

TEST_CASE("load_config reads the shipped default file") {
    const ValidatedConfig c = validate(load_config(std::string(AOI_SOURCE_DIR) + "/configs/default.ini"));
    CHECK(c.network.sir_threshold == 1.0);
    CHECK(c.network.power_control_rho == 1e-12);
    CHECK(std::get<TtTraffic>(c.traffic).duty_cycle == 8);
    CHECK_THROWS_AS(load_config("/nonexistent/file.ini"), ParseError);
}

TEST_CASE("small simulation area produces a warning, not an error") {
    RawConfig raw = parse_config(kDefaults);
    raw.sim.area_side = 2.0;
    const ValidatedConfig c = validate(raw);
    CHECK(c.warnings.size() == 1);
}
