#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "scp/channel.hpp"
#include "scp/errors.hpp"
#include "scp/geometry.hpp"

namespace scp {

// The feature set extractable from a UL CFR plus deployment context, in the
// fixed column order used everywhere (datasets, CSV, model inputs).
enum class FeatureId {
    kEnergy = 0,            // sum of |H|^2 over antennas x usable subcarriers
    kMinMag,                // min |H| over the pooled set, linear
    kMaxMag,                // max |H| over the pooled set, linear
    kDistMacroToMicro,      // serving macro to the UE's nearest micro, meters
    kServingMacroX,         // normalized coordinates
    kServingMacroY,
    kNearestMicroX,         // micro nearest to the UE, normalized
    kNearestMicroY,
    kSectorId,              // UE bearing sector at the serving macro
};

inline constexpr int kFeatureCount = 9;

inline const char* feature_name(FeatureId id) {
    switch (id) {
        case FeatureId::kEnergy: return "energy";
        case FeatureId::kMinMag: return "min_mag";
        case FeatureId::kMaxMag: return "max_mag";
        case FeatureId::kDistMacroToMicro: return "dist_macro_to_nearest_micro_m";
        case FeatureId::kServingMacroX: return "serving_macro_x";
        case FeatureId::kServingMacroY: return "serving_macro_y";
        case FeatureId::kNearestMicroX: return "nearest_micro_x";
        case FeatureId::kNearestMicroY: return "nearest_micro_y";
        case FeatureId::kSectorId: return "sector_id";
    }
    return "?";
}

inline FeatureId feature_from_name(const std::string& name) {
    for (int i = 0; i < kFeatureCount; ++i) {
        const auto id = static_cast<FeatureId>(i);
        if (name == feature_name(id)) return id;
    }
    throw ConfigError("unknown feature name: " + name);
}

// Enabled subset; normalized to the declared column order with duplicates
// removed, so serialization order never depends on config order.
struct FeatureConfig {
    std::vector<FeatureId> enabled;

    static FeatureConfig all() {
        FeatureConfig cfg;
        for (int i = 0; i < kFeatureCount; ++i)
            cfg.enabled.push_back(static_cast<FeatureId>(i));
        return cfg;
    }

    void normalize() {
        std::sort(enabled.begin(), enabled.end());
        enabled.erase(std::unique(enabled.begin(), enabled.end()), enabled.end());
        if (enabled.empty()) throw ConfigError("feature config: empty feature set");
    }

    bool needs_micro() const {
        for (FeatureId id : enabled)
            if (id == FeatureId::kDistMacroToMicro || id == FeatureId::kNearestMicroX ||
                id == FeatureId::kNearestMicroY)
                return true;
        return false;
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (FeatureId id : enabled) out.emplace_back(feature_name(id));
        return out;
    }
};

// Sector of the UE bearing seen from the macro: sector 0 is centered on the
// +x axis ([-60, +60) degrees for 3 sectors). The +180-degree ray closes the
// sector below it, so due west falls in sector 1 of 3. Coincident positions
// give sector 0.
inline int sector_of(const Point& ue_pos, const Point& macro_pos, int sector_count) {
    if (sector_count < 1) throw ConfigError("sector_of: sector_count must be positive");
    const double dx = ue_pos.x - macro_pos.x;
    const double dy = ue_pos.y - macro_pos.y;
    if (dx == 0.0 && dy == 0.0) return 0;
    const double theta = std::atan2(dy, dx);  // (-pi, pi]
    if (theta == std::numbers::pi && sector_count % 2 == 1) return (sector_count - 1) / 2;
    const double span = 2.0 * std::numbers::pi / sector_count;
    double shifted = theta + 0.5 * span;
    if (shifted < 0.0) shifted += 2.0 * std::numbers::pi;
    int s = static_cast<int>(std::floor(shifted / span));
    if (s >= sector_count) s = sector_count - 1;
    if (s < 0) s = 0;
    return s;
}

struct FeatureVector {
    std::vector<FeatureId> ids;
    std::vector<double> values;
};

// Extracts the enabled features. CFR statistics are linear-scale; geometric
// coordinates are reported in normalized space while the macro-to-micro
// distance stays in scenario units (meters for raw scenarios).
inline FeatureVector extract_features(const ChannelFrequencyResponse& cfr,
                                      const UserEquipment& ue, const Scenario& scenario,
                                      int serving_macro_id, const FeatureConfig& config) {
    if (config.enabled.empty()) throw ConfigError("feature config: empty feature set");
    if (cfr.n_antennas <= 0 || cfr.n_subcarriers <= 0 ||
        cfr.samples.size() !=
            static_cast<std::size_t>(cfr.n_antennas) * static_cast<std::size_t>(cfr.n_subcarriers))
        throw DataError("extract_features: inconsistent CFR dimensions");

    const BaseStation* serving = nullptr;
    for (const auto& bs : scenario.base_stations)
        if (bs.id == serving_macro_id) serving = &bs;
    if (serving == nullptr)
        throw DataError("extract_features: serving macro id not in scenario");

    const auto micros = scenario.stations_of(StationKind::kMicro);
    if (config.needs_micro() && micros.empty())
        throw DataError("extract_features: micro-dependent features requested but the "
                        "scenario has no micro stations; disable them in the feature config");

    // Micro nearest to the UE; its headline distance is measured from the
    // serving macro.
    const BaseStation* nearest_micro = nullptr;
    double nearest_to_ue = std::numeric_limits<double>::infinity();
    for (const BaseStation* bs : micros) {
        const double d = distance(ue.position, bs->position);
        if (d < nearest_to_ue ||
            (d == nearest_to_ue && nearest_micro && bs->id < nearest_micro->id)) {
            nearest_to_ue = d;
            nearest_micro = bs;
        }
    }
    const double macro_to_micro =
        nearest_micro ? distance(serving->position, nearest_micro->position) : 0.0;

    double energy = 0.0;
    double min_mag = std::numeric_limits<double>::infinity();
    double max_mag = 0.0;
    for (const auto& h : cfr.samples) {
        const double mag = std::abs(h);
        energy += mag * mag;
        min_mag = std::min(min_mag, mag);
        max_mag = std::max(max_mag, mag);
    }

    const Point serving_norm = normalize_point(serving->position, scenario.bounds);

    FeatureVector fv;
    fv.ids = config.enabled;
    for (FeatureId id : config.enabled) {
        switch (id) {
            case FeatureId::kEnergy: fv.values.push_back(energy); break;
            case FeatureId::kMinMag: fv.values.push_back(min_mag); break;
            case FeatureId::kMaxMag: fv.values.push_back(max_mag); break;
            case FeatureId::kDistMacroToMicro: fv.values.push_back(macro_to_micro); break;
            case FeatureId::kServingMacroX: fv.values.push_back(serving_norm.x); break;
            case FeatureId::kServingMacroY: fv.values.push_back(serving_norm.y); break;
            case FeatureId::kNearestMicroX:
                fv.values.push_back(normalize_point(nearest_micro->position, scenario.bounds).x);
                break;
            case FeatureId::kNearestMicroY:
                fv.values.push_back(normalize_point(nearest_micro->position, scenario.bounds).y);
                break;
            case FeatureId::kSectorId:
                fv.values.push_back(static_cast<double>(
                    sector_of(ue.position, serving->position, serving->sector_count)));
                break;
        }
    }
    return fv;
}

}  // namespace scp
