#pragma once

#include <limits>
#include <vector>

#include "scp/channel.hpp"
#include "scp/geometry.hpp"

namespace scp {

using Label = int;  // 0 or 1

// Label 1 iff the UE lies within `radius` of any micro station, boundary
// inclusive; both UE and station positions are in normalized [-1,1]^2 space.
struct RadiusRule {
    double radius = 0.08;
    std::vector<Point> micro_positions_normalized;
};

struct GainThresholdRule {
    double alpha_db = -95.0;
};

inline Label label_by_radius(const Point& ue_pos_normalized, const RadiusRule& rule) {
    if (rule.radius <= 0.0) throw ConfigError("radius rule: radius must be positive");
    for (const auto& b : rule.micro_positions_normalized)
        if (distance(ue_pos_normalized, b) <= rule.radius) return 1;
    return 0;
}

// Best secondary-carrier gain over all micro stations, thresholded at alpha.
// An empty micro list means no secondary coverage anywhere: label 0.
inline Label label_by_gain(const UserEquipment& ue,
                           const std::vector<const BaseStation*>& micro_stations,
                           double alpha_db, const PropagationConfig& cfg,
                           const RngStream& ue_stream) {
    double best = -std::numeric_limits<double>::infinity();
    for (const BaseStation* bs : micro_stations) {
        const double g =
            link_gain(ue, *bs, cfg, ue_stream.derive(static_cast<std::uint64_t>(bs->id))).gain_db;
        best = std::max(best, g);
    }
    return best >= alpha_db ? 1 : 0;
}

struct ClassCounts {
    long long ones = 0;
    long long zeros = 0;

    // ones/zeros; +inf when there are no zeros.
    double ratio() const {
        if (zeros == 0) return std::numeric_limits<double>::infinity();
        return static_cast<double>(ones) / static_cast<double>(zeros);
    }
};

inline ClassCounts count_classes(const std::vector<Label>& labels) {
    ClassCounts c;
    for (Label l : labels) (l == 1 ? c.ones : c.zeros)++;
    return c;
}

inline double class_ratio(const std::vector<Label>& labels) {
    return count_classes(labels).ratio();
}

}  // namespace scp
