#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scp/errors.hpp"
#include "scp/geometry.hpp"
#include "scp/map_classifier.hpp"
#include "scp/random_forest.hpp"

namespace scp {

using Json = nlohmann::json;

inline void require_keys(const Json& obj, const std::vector<std::string>& allowed,
                         const std::string& context) {
    if (!obj.is_object()) throw ConfigError(context + ": expected a JSON object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const auto& a : allowed)
            if (key == a) { ok = true; break; }
        if (!ok) throw ConfigError(context + ": unknown key '" + key + "'");
    }
}

inline Json save_file_or_throw(const std::string& path, const Json& doc) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path);
    f << doc.dump(2) << "\n";
    return doc;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open: " + path);
    try {
        return Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw DataError(path + ": " + e.what());
    }
}

// ---- Scenario <-> JSON ----

inline Json to_json(const Scenario& sc) {
    Json doc;
    doc["format"] = "scp-scenario";
    doc["version"] = 1;
    doc["seed"] = sc.seed;
    doc["bounds"] = {{"x_min", sc.bounds.x_min},
                     {"x_max", sc.bounds.x_max},
                     {"y_min", sc.bounds.y_min},
                     {"y_max", sc.bounds.y_max}};
    Json stations = Json::array();
    for (const auto& bs : sc.base_stations)
        stations.push_back({{"id", bs.id},
                            {"kind", bs.kind == StationKind::kMacro ? "macro" : "micro"},
                            {"x", bs.position.x},
                            {"y", bs.position.y},
                            {"carrier_freq_hz", bs.carrier_freq_hz},
                            {"tx_power_dbm", bs.tx_power_dbm},
                            {"sector_count", bs.sector_count}});
    doc["base_stations"] = std::move(stations);
    Json ues = Json::array();
    for (const auto& ue : sc.ues) {
        Json u = {{"id", ue.id}, {"x", ue.position.x}, {"y", ue.position.y}};
        if (ue.timestamp_s) u["timestamp_s"] = *ue.timestamp_s;
        ues.push_back(std::move(u));
    }
    doc["ues"] = std::move(ues);
    return doc;
}

inline Scenario scenario_from_json(const Json& doc) {
    require_keys(doc, {"format", "version", "seed", "bounds", "base_stations", "ues",
                       "config_hash"},
                 "scenario");
    if (doc.value("format", "") != "scp-scenario")
        throw DataError("scenario: unexpected document format");
    if (doc.value("version", 0) != 1) throw DataError("scenario: unsupported version");

    Scenario sc;
    sc.seed = doc.at("seed").get<std::uint64_t>();
    const Json& b = doc.at("bounds");
    require_keys(b, {"x_min", "x_max", "y_min", "y_max"}, "scenario.bounds");
    sc.bounds = {b.at("x_min").get<double>(), b.at("x_max").get<double>(),
                 b.at("y_min").get<double>(), b.at("y_max").get<double>()};
    if (!sc.bounds.valid()) throw DataError("scenario: degenerate bounds");

    for (const Json& s : doc.at("base_stations")) {
        require_keys(s, {"id", "kind", "x", "y", "carrier_freq_hz", "tx_power_dbm",
                         "sector_count"},
                     "scenario.base_stations[]");
        BaseStation bs;
        bs.id = s.at("id").get<int>();
        const std::string kind = s.at("kind").get<std::string>();
        if (kind == "macro") bs.kind = StationKind::kMacro;
        else if (kind == "micro") bs.kind = StationKind::kMicro;
        else throw DataError("scenario: unknown station kind '" + kind + "'");
        bs.position = {s.at("x").get<double>(), s.at("y").get<double>()};
        bs.carrier_freq_hz = s.at("carrier_freq_hz").get<double>();
        bs.tx_power_dbm = s.at("tx_power_dbm").get<double>();
        bs.sector_count = s.at("sector_count").get<int>();
        sc.base_stations.push_back(bs);
    }
    for (const Json& u : doc.at("ues")) {
        require_keys(u, {"id", "x", "y", "timestamp_s"}, "scenario.ues[]");
        UserEquipment ue;
        ue.id = u.at("id").get<int>();
        ue.position = {u.at("x").get<double>(), u.at("y").get<double>()};
        if (u.contains("timestamp_s")) ue.timestamp_s = u.at("timestamp_s").get<double>();
        sc.ues.push_back(ue);
    }
    return sc;
}

// ---- Models <-> JSON ----
// Trees are stored as flat node arrays (pre-order construction indices);
// doubles survive the round trip exactly, so a reloaded model scores
// identically.

inline Json to_json(const RandomForestModel& m) {
    Json doc;
    doc["format"] = "scp-forest";
    doc["version"] = 1;
    doc["seed"] = m.seed;
    doc["dim"] = m.dim;
    doc["feature_names"] = m.feature_names;
    doc["params"] = {{"n_trees", m.params.n_trees},
                     {"max_depth", m.params.max_depth},
                     {"min_samples_leaf", m.params.min_samples_leaf},
                     {"features_per_split", m.params.features_per_split}};
    Json trees = Json::array();
    for (const auto& tree : m.trees) {
        Json nodes = Json::array();
        for (const auto& n : tree.nodes)
            nodes.push_back({{"f", n.feature},
                             {"t", n.threshold},
                             {"l", n.left},
                             {"r", n.right},
                             {"v", n.leaf_fraction}});
        trees.push_back(std::move(nodes));
    }
    doc["trees"] = std::move(trees);
    return doc;
}

inline RandomForestModel forest_from_json(const Json& doc) {
    require_keys(doc, {"format", "version", "seed", "dim", "feature_names", "params", "trees",
                       "config_hash"},
                 "forest");
    if (doc.value("format", "") != "scp-forest")
        throw DataError("forest: unexpected document format");
    if (doc.value("version", 0) != 1) throw DataError("forest: unsupported version");

    RandomForestModel m;
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.dim = doc.at("dim").get<std::size_t>();
    m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    const Json& p = doc.at("params");
    require_keys(p, {"n_trees", "max_depth", "min_samples_leaf", "features_per_split"},
                 "forest.params");
    m.params.n_trees = p.at("n_trees").get<int>();
    m.params.max_depth = p.at("max_depth").get<int>();
    m.params.min_samples_leaf = p.at("min_samples_leaf").get<int>();
    m.params.features_per_split = p.at("features_per_split").get<int>();
    for (const Json& nodes : doc.at("trees")) {
        DecisionTree tree;
        for (const Json& n : nodes) {
            require_keys(n, {"f", "t", "l", "r", "v"}, "forest.trees[][]");
            TreeNode node;
            node.feature = n.at("f").get<int>();
            node.threshold = n.at("t").get<double>();
            node.left = n.at("l").get<std::int32_t>();
            node.right = n.at("r").get<std::int32_t>();
            node.leaf_fraction = n.at("v").get<double>();
            tree.nodes.push_back(node);
        }
        if (tree.nodes.empty()) throw DataError("forest: empty tree");
        m.trees.push_back(std::move(tree));
    }
    if (m.trees.empty()) throw DataError("forest: no trees");
    return m;
}

inline Json to_json(const GaussianMapModel& m) {
    return Json{{"format", "scp-map"}, {"version", 1},      {"mu0", m.mu0},
                {"mu1", m.mu1},        {"sigma", m.sigma},  {"p", m.p}};
}

inline GaussianMapModel map_from_json(const Json& doc) {
    require_keys(doc, {"format", "version", "mu0", "mu1", "sigma", "p", "config_hash"}, "map");
    if (doc.value("format", "") != "scp-map") throw DataError("map: unexpected document format");
    if (doc.value("version", 0) != 1) throw DataError("map: unsupported version");
    GaussianMapModel m;
    m.mu0 = doc.at("mu0").get<double>();
    m.mu1 = doc.at("mu1").get<double>();
    m.sigma = doc.at("sigma").get<double>();
    m.p = doc.at("p").get<double>();
    return m;
}

}  // namespace scp
