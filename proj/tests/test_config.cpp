#include <doctest.h>

#include <json.hpp>

#include "classeq/config.hpp"
#include "classeq/equilibrium.hpp"
#include "classeq/report.hpp"

using namespace classeq;
using nlohmann::json;

namespace {

json base_config() {
    return json{{"schema_version", 1},
                {"distribution", {{"family", "normal"}, {"location", 1.0}, {"scale", 1.0}}},
                {"phi", 0.75},
                {"t", 0.5},
                {"designer", {{"archetype", "accuracy"}}}};
}

}  // namespace

TEST_CASE("config parses archetypes and explicit payoffs") {
    const auto cfg = parse_scenario_config(base_config());
    const auto s = build_scenario(cfg);
    CHECK(s.designer.a1 == 1.0);
    CHECK(s.designer.b1 == 1.0);
    CHECK(s.externality_t == 0.5);
    CHECK(s.distribution->median() == 1.0);

    auto j = base_config();
    j["designer"] = {{"a1", 1.0}, {"a0", 0.0}, {"b1", 0.9}, {"b0", 0.0}};
    const auto s2 = build_scenario(parse_scenario_config(j));
    CHECK(s2.designer.b1 == 0.9);

    j["designer"] = {{"archetype", "moral_hazard"}, {"w", 0.4}};
    const auto s3 = build_scenario(parse_scenario_config(j));
    CHECK(s3.designer.a0 == 0.4);

    j["distribution"]["family"] = "logistic";
    const auto s4 = build_scenario(parse_scenario_config(j));
    CHECK(s4.distribution->name().rfind("logistic", 0) == 0);
}

TEST_CASE("config rejects invalid input with precise messages") {
    auto j = base_config();
    j["phi"] = 0.5;
    CHECK_THROWS_WITH_AS(build_scenario(parse_scenario_config(j)),
                         "signal accuracy phi must satisfy 0.5 < phi <= 1 (got 0.5)",
                         config_error);
    j = base_config();
    j["phi"] = 1.2;
    CHECK_THROWS_AS(build_scenario(parse_scenario_config(j)), config_error);
    j = base_config();
    j["distribution"]["family"] = "cauchy";
    CHECK_THROWS_AS(parse_scenario_config(j), config_error);
    j = base_config();
    j["distribution"].erase("scale");
    CHECK_THROWS_AS(parse_scenario_config(j), config_error);
    j = base_config();
    j["distribution"]["scale"] = -1.0;
    CHECK_THROWS_AS(build_scenario(parse_scenario_config(j)), config_error);
    j = base_config();
    j["t"] = -0.1;
    CHECK_THROWS_AS(build_scenario(parse_scenario_config(j)), config_error);
    j = base_config();
    j["designer"] = {{"archetype", "moral_hazard"}, {"w", 1.5}};
    CHECK_THROWS_AS(build_scenario(parse_scenario_config(j)), config_error);
    j = base_config();
    j["designer"] = {{"archetype", "unknown"}};
    CHECK_THROWS_AS(build_scenario(parse_scenario_config(j)), config_error);
    j = base_config();
    j["schema_version"] = 2;
    CHECK_THROWS_AS(parse_scenario_config(j), config_error);
}

TEST_CASE("round-tripped configs give bit-identical solver output") {
    auto j = base_config();
    j["distribution"]["location"] = 0.3141592653589793;
    j["distribution"]["scale"] = 1.0710678118654755;
    j["t"] = 0.6180339887498949;
    const auto cfg = parse_scenario_config(j);
    const auto round_tripped = parse_scenario_config(json::parse(to_json(cfg).dump()));
    const auto a = find_equilibria(build_scenario(cfg));
    const auto b = find_equilibria(build_scenario(round_tripped));
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].reward == b[i].reward);
        CHECK(a[i].classifier.delta1 == b[i].classifier.delta1);
        CHECK(a[i].classifier.delta0 == b[i].classifier.delta0);
        CHECK(a[i].prevalence == b[i].prevalence);
        CHECK(a[i].designer_payoff == b[i].designer_payoff);
        CHECK(a[i].social_welfare == b[i].social_welfare);
        CHECK(a[i].median_payoff == b[i].median_payoff);
    }
}

TEST_CASE("report renders the same numbers it serializes") {
    RunReport report("demo");
    report.add_value("results", "prevalence", 0.8680727572, "F(r*rho)");
    report.add_check("results", "welfare", 0.6477435679, "t*F(k) - E[g; g<=k]", 0.65, 0.01);
    report.add_check("results", "reference-reward", 3.3396, "k/rho", 3.14, 0.05, true,
                     "reference value inconsistent with the threshold identity");
    CHECK_FALSE(report.any_failed_check());
    report.add_check("results", "broken", 1.0, "x", 2.0, 0.1);
    CHECK(report.any_failed_check());

    const auto& j = report.json();
    const auto text = report.render_text();
    // every value item appears in the rendering exactly as formatted
    for (const auto& sec : j["sections"]) {
        for (const auto& item : sec["items"]) {
            if (item.contains("v")) {
                CHECK(text.find(format_table_number(item["v"].get<double>())) !=
                      std::string::npos);
            }
        }
    }
    CHECK(text.find("FLAG") != std::string::npos);
    CHECK(text.find("FAIL") != std::string::npos);
}
