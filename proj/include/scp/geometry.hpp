#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scp/errors.hpp"
#include "scp/rng.hpp"

namespace scp {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

struct GeoBounds {
    double x_min = -1.0;
    double x_max = 1.0;
    double y_min = -1.0;
    double y_max = 1.0;

    bool valid() const { return x_min < x_max && y_min < y_max; }
    bool contains(const Point& p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
};

// 3GPP operating ranges for carrier frequencies.
inline constexpr double kFr1MinHz = 410e6;
inline constexpr double kFr1MaxHz = 7125e6;
inline constexpr double kFr2MinHz = 24250e6;
inline constexpr double kFr2MaxHz = 52600e6;

inline bool in_fr1(double f_hz) { return f_hz >= kFr1MinHz && f_hz <= kFr1MaxHz; }
inline bool in_fr2(double f_hz) { return f_hz >= kFr2MinHz && f_hz <= kFr2MaxHz; }
inline bool valid_carrier_freq(double f_hz) { return in_fr1(f_hz) || in_fr2(f_hz); }

enum class StationKind { kMacro, kMicro };

struct BaseStation {
    int id = 0;
    StationKind kind = StationKind::kMacro;
    Point position;
    double carrier_freq_hz = 0.0;
    double tx_power_dbm = 0.0;
    int sector_count = 1;  // macros use 3; micros are omni
};

struct UserEquipment {
    int id = 0;
    Point position;
    std::optional<double> timestamp_s;  // set for trace-derived UEs
};

struct Scenario {
    GeoBounds bounds;
    std::vector<BaseStation> base_stations;
    std::vector<UserEquipment> ues;
    std::uint64_t seed = 0;

    std::vector<const BaseStation*> stations_of(StationKind kind) const {
        std::vector<const BaseStation*> out;
        for (const auto& bs : base_stations)
            if (bs.kind == kind) out.push_back(&bs);
        return out;
    }
};

struct MobilityPath {
    std::vector<Point> waypoints;
    double step_m = 1.0;
};

struct ScenarioConfig {
    GeoBounds bounds{0.0, 2000.0, 0.0, 2000.0};
    int macro_count = 1;
    int micro_count = 0;
    int ue_count = 0;
    double macro_freq_hz = 0.9e9;
    double micro_freq_hz = 2.0e9;
    double macro_tx_power_dbm = 46.0;
    double micro_tx_power_dbm = 30.0;
    int macro_sector_count = 3;
    double min_station_separation_m = 10.0;
    int max_stations = 10000;
    int max_ues = 1000000;
    std::uint64_t seed = 0;
    // When non-empty these replace random placement; counts must match.
    std::vector<Point> macro_positions;
    std::vector<Point> micro_positions;
    std::vector<Point> ue_positions;
};

namespace detail {

inline Point random_point(const GeoBounds& b, RngStream& rng) {
    return Point{rng.uniform(b.x_min, b.x_max), rng.uniform(b.y_min, b.y_max)};
}

inline bool separated(const Point& p, const std::vector<BaseStation>& placed,
                      double min_sep) {
    for (const auto& bs : placed)
        if (distance(p, bs.position) < min_sep) return false;
    return true;
}

}  // namespace detail

inline void validate(const ScenarioConfig& cfg) {
    if (!cfg.bounds.valid())
        throw ConfigError("scenario bounds degenerate: require x_min < x_max and y_min < y_max");
    if (cfg.macro_count < 1) throw ConfigError("at least one macro base station required");
    if (cfg.micro_count < 0 || cfg.ue_count < 0)
        throw ConfigError("negative station or UE count");
    if (cfg.macro_count + cfg.micro_count > cfg.max_stations)
        throw ConfigError("station count exceeds configured maximum " +
                          std::to_string(cfg.max_stations));
    if (cfg.ue_count > cfg.max_ues)
        throw ConfigError("UE count exceeds configured maximum " + std::to_string(cfg.max_ues));
    if (!valid_carrier_freq(cfg.macro_freq_hz))
        throw ConfigError("macro carrier frequency outside FR1 (410-7125 MHz) and FR2 (24250-52600 MHz)");
    if (cfg.micro_count > 0 && !valid_carrier_freq(cfg.micro_freq_hz))
        throw ConfigError("micro carrier frequency outside FR1 (410-7125 MHz) and FR2 (24250-52600 MHz)");
    auto check_fixed = [&](const std::vector<Point>& pts, int want, const char* what) {
        if (pts.empty()) return;
        if (static_cast<int>(pts.size()) != want)
            throw ConfigError(std::string("fixed ") + what + " position list length mismatch");
        for (const auto& p : pts)
            if (!cfg.bounds.contains(p))
                throw ConfigError(std::string("fixed ") + what + " position outside bounds");
    };
    check_fixed(cfg.macro_positions, cfg.macro_count, "macro");
    check_fixed(cfg.micro_positions, cfg.micro_count, "micro");
    check_fixed(cfg.ue_positions, cfg.ue_count, "ue");
}

// Deterministic deployment generation: identical (config, seed) gives an
// identical scenario. Stations are rejection-sampled to keep a minimum
// pairwise separation, so macro and micro positions never coincide.
inline Scenario generate_scenario(const ScenarioConfig& cfg) {
    validate(cfg);

    Scenario sc;
    sc.bounds = cfg.bounds;
    sc.seed = cfg.seed;

    RngStream root(cfg.seed);
    RngStream bs_rng = root.derive(1);
    RngStream ue_rng = root.derive(2);

    constexpr int kMaxRejections = 100000;
    auto place_station = [&](int id, StationKind kind, const std::vector<Point>& fixed,
                             int index_in_kind, double freq, double power, int sectors) {
        BaseStation bs;
        bs.id = id;
        bs.kind = kind;
        bs.carrier_freq_hz = freq;
        bs.tx_power_dbm = power;
        bs.sector_count = sectors;
        if (!fixed.empty()) {
            bs.position = fixed[static_cast<std::size_t>(index_in_kind)];
        } else {
            int attempts = 0;
            do {
                bs.position = detail::random_point(cfg.bounds, bs_rng);
                if (++attempts > kMaxRejections)
                    throw ConfigError("cannot place stations with requested separation; "
                                      "region too small for the station count");
            } while (!detail::separated(bs.position, sc.base_stations,
                                        cfg.min_station_separation_m));
        }
        sc.base_stations.push_back(bs);
    };

    int next_id = 0;
    for (int i = 0; i < cfg.macro_count; ++i)
        place_station(next_id++, StationKind::kMacro, cfg.macro_positions, i,
                      cfg.macro_freq_hz, cfg.macro_tx_power_dbm, cfg.macro_sector_count);
    for (int i = 0; i < cfg.micro_count; ++i)
        place_station(next_id++, StationKind::kMicro, cfg.micro_positions, i,
                      cfg.micro_freq_hz, cfg.micro_tx_power_dbm, 1);

    sc.ues.reserve(static_cast<std::size_t>(cfg.ue_count));
    for (int i = 0; i < cfg.ue_count; ++i) {
        UserEquipment ue;
        ue.id = i;
        ue.position = cfg.ue_positions.empty()
                          ? detail::random_point(cfg.bounds, ue_rng)
                          : cfg.ue_positions[static_cast<std::size_t>(i)];
        sc.ues.push_back(ue);
    }
    return sc;
}

// Samples UE positions every step_m along the polyline, starting at the first
// waypoint; each position is emitted repeats_per_position times with strictly
// increasing timestamps (one second apart).
inline std::vector<UserEquipment> generate_path_trace(const MobilityPath& path,
                                                      int repeats_per_position) {
    if (path.waypoints.size() < 2)
        throw ConfigError("mobility path needs at least two waypoints");
    if (path.step_m <= 0.0) throw ConfigError("mobility path step must be positive");
    if (repeats_per_position < 1)
        throw ConfigError("repeats_per_position must be positive");

    double total = 0.0;
    for (std::size_t i = 1; i < path.waypoints.size(); ++i)
        total += distance(path.waypoints[i - 1], path.waypoints[i]);
    if (total == 0.0) throw ConfigError("degenerate mobility path: zero total length");

    auto point_at = [&](double s) {
        double remaining = s;
        for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
            const Point& a = path.waypoints[i - 1];
            const Point& b = path.waypoints[i];
            const double seg = distance(a, b);
            if (remaining <= seg && seg > 0.0) {
                const double t = remaining / seg;
                return Point{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
            }
            remaining -= seg;
        }
        return path.waypoints.back();
    };

    std::vector<UserEquipment> out;
    const int n_positions = static_cast<int>(std::floor(total / path.step_m + 1e-9)) + 1;
    int next_id = 0;
    for (int i = 0; i < n_positions; ++i) {
        const Point p = point_at(static_cast<double>(i) * path.step_m);
        for (int r = 0; r < repeats_per_position; ++r) {
            UserEquipment ue;
            ue.id = next_id;
            ue.position = p;
            ue.timestamp_s = static_cast<double>(next_id);
            out.push_back(ue);
            ++next_id;
        }
    }
    return out;
}

// Affine map of each axis independently onto [-1, 1]; the same map is applied
// to stations and UEs, and the resulting bounds are [-1,1]^2 so the transform
// is idempotent.
inline Point normalize_point(const Point& p, const GeoBounds& b) {
    return Point{2.0 * (p.x - b.x_min) / b.width() - 1.0,
                 2.0 * (p.y - b.y_min) / b.height() - 1.0};
}

inline Scenario normalize_coordinates(const Scenario& scenario) {
    if (!scenario.bounds.valid())
        throw ConfigError("cannot normalize: degenerate bounds");
    Scenario out = scenario;
    for (auto& bs : out.base_stations)
        bs.position = normalize_point(bs.position, scenario.bounds);
    for (auto& ue : out.ues) ue.position = normalize_point(ue.position, scenario.bounds);
    out.bounds = GeoBounds{-1.0, 1.0, -1.0, 1.0};
    return out;
}

}  // namespace scp
