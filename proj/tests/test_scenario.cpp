#include <catch2/catch_amalgamated.hpp>

#include "scp/geometry.hpp"
#include "scp/serialization.hpp"

using namespace scp;

namespace {

ScenarioConfig city_config(int macros, int micros, int ues, std::uint64_t seed = 0) {
    ScenarioConfig cfg;
    cfg.macro_count = macros;
    cfg.micro_count = micros;
    cfg.ue_count = ues;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("d2a-sized deployment has the requested counts") {
    const Scenario sc = generate_scenario(city_config(75, 5, 1000));
    REQUIRE(sc.base_stations.size() == 80);
    REQUIRE(sc.ues.size() == 1000);
    REQUIRE(sc.stations_of(StationKind::kMacro).size() == 75);
    REQUIRE(sc.stations_of(StationKind::kMicro).size() == 5);
}

TEST_CASE("minimal scenario: one macro, nothing else") {
    const Scenario sc = generate_scenario(city_config(1, 0, 0));
    REQUIRE(sc.base_stations.size() == 1);
    REQUIRE(sc.ues.empty());
}

TEST_CASE("identical config and seed give byte-identical scenarios") {
    const auto cfg = city_config(20, 40, 100, 7);
    const Scenario a = generate_scenario(cfg);
    const Scenario b = generate_scenario(cfg);
    REQUIRE(to_json(a).dump() == to_json(b).dump());
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(generate_scenario(city_config(0, 5, 10)), ConfigError);

    auto too_many = city_config(2, 0, 0);
    too_many.max_stations = 1;
    CHECK_THROWS_AS(generate_scenario(too_many), ConfigError);

    auto bad_freq = city_config(1, 0, 0);
    bad_freq.macro_freq_hz = 100e6;  // below FR1
    CHECK_THROWS_AS(generate_scenario(bad_freq), ConfigError);

    auto gap_freq = city_config(1, 1, 0);
    gap_freq.micro_freq_hz = 10e9;  // between FR1 and FR2
    CHECK_THROWS_AS(generate_scenario(gap_freq), ConfigError);
}

TEST_CASE("generated positions stay in bounds and stations stay separated") {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto cfg = city_config(3, 3, 5, seed);
        cfg.bounds = {-50.0, 50.0, 0.0, 80.0};
        const Scenario sc = generate_scenario(cfg);
        for (const auto& bs : sc.base_stations) REQUIRE(sc.bounds.contains(bs.position));
        for (const auto& ue : sc.ues) REQUIRE(sc.bounds.contains(ue.position));
        for (std::size_t i = 0; i < sc.base_stations.size(); ++i)
            for (std::size_t j = i + 1; j < sc.base_stations.size(); ++j)
                REQUIRE(distance(sc.base_stations[i].position, sc.base_stations[j].position) >=
                        cfg.min_station_separation_m);
    }
}

TEST_CASE("fixed placement lists are honored") {
    auto cfg = city_config(2, 1, 1);
    cfg.macro_positions = {{100.0, 100.0}, {300.0, 300.0}};
    cfg.micro_positions = {{500.0, 500.0}};
    cfg.ue_positions = {{250.0, 250.0}};
    const Scenario sc = generate_scenario(cfg);
    REQUIRE(sc.base_stations[0].position.x == 100.0);
    REQUIRE(sc.base_stations[2].position.y == 500.0);
    REQUIRE(sc.ues[0].position.x == 250.0);

    cfg.ue_positions = {{250.0, 250.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(generate_scenario(cfg), ConfigError);
}

TEST_CASE("path trace samples every step with repeats") {
    MobilityPath path;
    path.waypoints = {{0.0, 0.0}, {10.0, 0.0}};
    path.step_m = 1.0;
    const auto ues = generate_path_trace(path, 5);
    REQUIRE(ues.size() == 55);  // 11 positions x 5 repeats
    for (std::size_t i = 1; i < ues.size(); ++i)
        REQUIRE(*ues[i].timestamp_s > *ues[i - 1].timestamp_s);
    REQUIRE(ues[0].position.x == 0.0);
    REQUIRE(ues[54].position.x == 10.0);
}

TEST_CASE("degenerate paths are rejected") {
    MobilityPath path;
    path.waypoints = {{1.0, 1.0}, {1.0, 1.0}};
    path.step_m = 1.0;
    CHECK_THROWS_AS(generate_path_trace(path, 1), ConfigError);

    MobilityPath single;
    single.waypoints = {{0.0, 0.0}};
    single.step_m = 1.0;
    CHECK_THROWS_AS(generate_path_trace(single, 1), ConfigError);
}

TEST_CASE("normalization maps midpoint to origin and corners to corners") {
    Scenario sc;
    sc.bounds = {0.0, 100.0, 0.0, 100.0};
    sc.ues.push_back({0, {50.0, 50.0}, {}});
    sc.ues.push_back({1, {100.0, 0.0}, {}});
    const Scenario norm = normalize_coordinates(sc);
    REQUIRE(norm.ues[0].position.x == 0.0);
    REQUIRE(norm.ues[0].position.y == 0.0);
    REQUIRE(norm.ues[1].position.x == 1.0);
    REQUIRE(norm.ues[1].position.y == -1.0);
    REQUIRE(norm.bounds.x_min == -1.0);
    REQUIRE(norm.bounds.x_max == 1.0);
}

TEST_CASE("normalization is idempotent on normalized scenarios") {
    Scenario sc;
    sc.bounds = {-1.0, 1.0, -1.0, 1.0};
    sc.ues.push_back({0, {0.0, 0.0}, {}});
    sc.ues.push_back({1, {0.25, -0.75}, {}});
    const Scenario once = normalize_coordinates(sc);
    const Scenario twice = normalize_coordinates(once);
    REQUIRE(once.ues[0].position.x == 0.0);
    REQUIRE(twice.ues[1].position.x == once.ues[1].position.x);
    REQUIRE(twice.ues[1].position.y == once.ues[1].position.y);
}

TEST_CASE("anisotropic bounds normalize per axis") {
    Scenario sc;
    sc.bounds = {0.0, 200.0, 0.0, 50.0};
    sc.ues.push_back({0, {200.0, 50.0}, {}});
    const Scenario norm = normalize_coordinates(sc);
    REQUIRE(norm.ues[0].position.x == 1.0);
    REQUIRE(norm.ues[0].position.y == 1.0);
}

TEST_CASE("scenario JSON round trip is exact") {
    const Scenario sc = generate_scenario(city_config(4, 3, 25, 99));
    const Json doc = to_json(sc);
    const Scenario back = scenario_from_json(doc);
    REQUIRE(to_json(back).dump() == doc.dump());
}

TEST_CASE("scenario JSON rejects unknown keys") {
    Json doc = to_json(generate_scenario(city_config(1, 0, 0)));
    doc["surprise"] = 1;
    CHECK_THROWS_AS(scenario_from_json(doc), ConfigError);
}
