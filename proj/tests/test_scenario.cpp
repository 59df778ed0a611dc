#include "poasim/scenario.hpp"

#include "support.hpp"

#include <filesystem>

using namespace poasim;

namespace {

// The ConfigError raised by parsing `text`; fails the test if none is.
ConfigError config_error(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected a ConfigError for: " << std::string(text));
    throw std::logic_error("unreachable");
}

bool mentions(const ConfigError& e, std::string_view what) {
    return std::string_view(e.what()).find(what) != std::string_view::npos;
}

}  // namespace

TEST_CASE("bundled scenarios load") {
    const std::filesystem::path dir = std::filesystem::path(POASIM_SOURCE_DIR) / "scenarios";
    int loaded = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_config(entry.path()));
        ++loaded;
    }
    CHECK(loaded >= 3);
}

TEST_CASE("defaults and shorthands") {
    const Scenario s = parse_config(R"({"duration_epochs": 5, "nodes": 3, "oracles": {"count": 7}})");
    CHECK(s.heartbeat_interval_s == 10);
    CHECK(s.nd_supply_limit == 46'223);
    REQUIRE(s.nodes.size() == 1);
    CHECK(s.nodes[0].count == 3);
    CHECK(s.nodes[0].license == LicenseClass::Nd);
    CHECK(s.oracles.count == 7);
    CHECK(std::holds_alternative<AlwaysUp>(s.nodes[0].uptime));
}

TEST_CASE("full node group and uptime models") {
    const Scenario s = parse_config(R"({
        "duration_epochs": 100,
        "heartbeat_interval_s": 15,
        "nd_price_tiers": [{"size": 5, "price": "1.5"}],
        "nodes": [
            {"count": 2, "license": "MND", "uptime": {"model": "gilbert_elliott", "p_fail": 0.01, "p_recover": 0.2}},
            {"count": 1, "license": "none"},
            {"count": 1, "uptime": {"model": "scripted", "segments": [{"epochs": 3, "up": 0.5}]},
             "kyc_revoke_epoch": 4, "kyc_restore_epoch": 9, "rebind_every": 10, "capacity": 4}
        ],
        "jobs": [{"first_epoch": 2, "every": 3, "count": 4, "fee": 12, "resources": 2, "duration": 10}],
        "poai": {"fee_rate": "0.01", "max_extension_epochs": 5},
        "mnd_curve": {"cliff": 200}
    })");
    CHECK(s.heartbeat_interval_s == 15);
    CHECK(s.nd_price_tiers[0].price == TokenAmount::parse("1.5"));
    CHECK(s.nodes[0].license == LicenseClass::Mnd);
    CHECK(std::get<GilbertElliott>(s.nodes[0].uptime).p_recover == 0.2);
    CHECK_FALSE(s.nodes[1].license);
    CHECK(std::get<ScriptedUptime>(s.nodes[2].uptime).segments[0].up_fraction == 0.5);
    CHECK(s.nodes[2].kyc_restore_epoch == 9u);
    CHECK(s.jobs[0].fee == testing::r1(12));
    CHECK(s.jobs[0].duration == 10u);
    CHECK(s.poai.max_extension_epochs == 5);
    CHECK(s.mnd_curve.cliff == 200.0);
    CHECK(s.mnd_curve.midpoint == 540.0);
}

TEST_CASE("malformed JSON reports a position") {
    const auto e = config_error("{\n  \"duration_epochs\": 5,\n  oops\n}");
    CHECK(e.kind() == ConfigError::Kind::Parse);
    CHECK(mentions(e, "line 3"));
}

TEST_CASE("validation errors name the offending field") {
    struct Case {
        const char* text;
        const char* field;
    };
    const Case cases[] = {
        {R"({})", "duration_epochs"},
        {R"({"duration_epochs": 1, "heartbeat_interval_s": 9})", "heartbeat_interval_s"},
        {R"({"duration_epochs": 1, "heartbeat_interval_s": 16})", "heartbeat_interval_s"},
        {R"({"duration_epochs": 1, "colour": 1})", "colour"},
        {R"({"duration_epochs": 1, "nodes": [{"count": 1, "licence": "ND"}]})", "nodes[0].licence"},
        {R"({"duration_epochs": 1, "nodes": [{"license": "XND"}]})", "nodes[0].license"},
        {R"({"duration_epochs": -4})", "duration_epochs"},
        {R"({"duration_epochs": 1, "oracles": {"count": 3, "byzantine": [{"index": 0}]}})", "oracles.count"},
        {R"({"duration_epochs": 1, "oracles": {"count": 4, "byzantine": [{"index": 4}]}})", "oracles.byzantine"},
        {R"({"duration_epochs": 1, "oracles": {"count": 4, "byzantine": [{"index": 1}, {"index": 1}]}})",
         "oracles.byzantine"},
        {R"({"duration_epochs": 1, "oracles": {"count": 4, "costs": [1, 2]}})", "oracles.costs"},
        {R"({"duration_epochs": 1, "oracles": {"loss_probability": 1.5}})", "oracles.loss_probability"},
        {R"({"duration_epochs": 1, "oracles": {"byzantine": [{"index": 0, "strategy": "sneaky"}]}})", "strategy"},
        {R"({"duration_epochs": 1, "nodes": [{"uptime": {"model": "weibull"}}]})", "nodes[0].uptime"},
        {R"({"duration_epochs": 1, "nodes": [{"count": 1, "license": "GND"}, {"count": 1, "license": "GND"}]})",
         "nodes"},
        {R"({"duration_epochs": 1, "nodes": [{"kyc_revoke_epoch": 5, "kyc_restore_epoch": 2}]})", "kyc_restore_epoch"},
        {R"({"duration_epochs": 1, "jobs": [{"fee": "1.0000000000000000001"}]})", "jobs[0].fee"},
    };
    for (const auto& c : cases) {
        CAPTURE(c.text);
        const auto e = config_error(c.text);
        CHECK(e.kind() == ConfigError::Kind::Validation);
        CHECK_MESSAGE(mentions(e, c.field), e.what());
    }
}

TEST_CASE("missing file is a config error") {
    CHECK_THROWS_AS(load_config("/nonexistent/scenario.json"), ConfigError);
}
