#include "classeq/config.hpp"

#include <fstream>
#include <sstream>

namespace classeq {

namespace {

double require_number(const nlohmann::json& j, const std::string& key, const char* where) {
    if (!j.contains(key)) {
        std::ostringstream os;
        os << where << ": missing required field \"" << key << "\"";
        throw config_error(os.str());
    }
    if (!j.at(key).is_number()) {
        std::ostringstream os;
        os << where << ": field \"" << key << "\" must be a number";
        throw config_error(os.str());
    }
    return j.at(key).get<double>();
}

}  // namespace

ScenarioConfig parse_scenario_config(const nlohmann::json& j) {
    if (!j.is_object()) throw config_error("scenario config must be a JSON object");
    ScenarioConfig cfg;
    if (j.contains("schema_version")) {
        cfg.schema_version = j.at("schema_version").get<int>();
        if (cfg.schema_version != 1) {
            std::ostringstream os;
            os << "unsupported schema_version " << cfg.schema_version << " (expected 1)";
            throw config_error(os.str());
        }
    }
    if (!j.contains("distribution") || !j.at("distribution").is_object()) {
        throw config_error("config needs a \"distribution\" object");
    }
    const auto& jd = j.at("distribution");
    if (!jd.contains("family") || !jd.at("family").is_string()) {
        throw config_error("distribution: missing string field \"family\"");
    }
    cfg.distribution.family = jd.at("family").get<std::string>();
    if (cfg.distribution.family != "normal" && cfg.distribution.family != "logistic") {
        std::ostringstream os;
        os << "distribution family must be \"normal\" or \"logistic\" (got \""
           << cfg.distribution.family << "\")";
        throw config_error(os.str());
    }
    cfg.distribution.location = require_number(jd, "location", "distribution");
    cfg.distribution.scale = require_number(jd, "scale", "distribution");

    cfg.phi = require_number(j, "phi", "config");
    cfg.t = require_number(j, "t", "config");

    if (!j.contains("designer") || !j.at("designer").is_object()) {
        throw config_error("config needs a \"designer\" object");
    }
    const auto& jdes = j.at("designer");
    if (jdes.contains("archetype")) {
        cfg.designer.archetype = jdes.at("archetype").get<std::string>();
        if (jdes.contains("w")) cfg.designer.w = jdes.at("w").get<double>();
    } else {
        DesignerPayoffs p;
        p.a1 = require_number(jdes, "a1", "designer");
        p.a0 = require_number(jdes, "a0", "designer");
        p.b1 = require_number(jdes, "b1", "designer");
        p.b0 = require_number(jdes, "b0", "designer");
        cfg.designer.payoffs = p;
    }
    return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_scenario_config(j);
}

nlohmann::json to_json(const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["schema_version"] = cfg.schema_version;
    j["distribution"] = {{"family", cfg.distribution.family},
                         {"location", cfg.distribution.location},
                         {"scale", cfg.distribution.scale}};
    j["phi"] = cfg.phi;
    j["t"] = cfg.t;
    if (cfg.designer.archetype) {
        j["designer"] = {{"archetype", *cfg.designer.archetype}};
        if (*cfg.designer.archetype == "moral_hazard") j["designer"]["w"] = cfg.designer.w;
    } else if (cfg.designer.payoffs) {
        const auto& p = *cfg.designer.payoffs;
        j["designer"] = {{"a1", p.a1}, {"a0", p.a0}, {"b1", p.b1}, {"b0", p.b0}};
    }
    return j;
}

DesignerPayoffs resolve_designer(const DesignerConfig& dc) {
    if (dc.archetype) {
        const std::string& a = *dc.archetype;
        if (a == "accuracy") return DesignerPayoffs::accuracy();
        if (a == "compliance") return DesignerPayoffs::compliance();
        if (a == "predatory") return DesignerPayoffs::predatory();
        if (a == "moral_hazard") {
            try {
                return DesignerPayoffs::moral_hazard(dc.w);
            } catch (const std::invalid_argument& e) {
                throw config_error(e.what());
            }
        }
        std::ostringstream os;
        os << "unknown designer archetype \"" << a
           << "\" (expected accuracy, compliance, moral_hazard, predatory)";
        throw config_error(os.str());
    }
    if (dc.payoffs) return *dc.payoffs;
    throw config_error("designer config needs an archetype or explicit payoffs a1,a0,b1,b0");
}

Scenario build_scenario(const ScenarioConfig& cfg) {
    Scenario s;
    try {
        if (cfg.distribution.family == "normal") {
            s.distribution = std::make_shared<NormalDistribution>(cfg.distribution.location,
                                                                  cfg.distribution.scale);
        } else {
            s.distribution = std::make_shared<LogisticDistribution>(cfg.distribution.location,
                                                                    cfg.distribution.scale);
        }
        s.externality_t = cfg.t;
        s.accuracy = {cfg.phi};
        s.designer = resolve_designer(cfg.designer);
        validate(s);
    } catch (const config_error&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    return s;
}

}  // namespace classeq
