#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "scp/errors.hpp"

namespace scp {

// RSRP of serving (PCell) and target (SCell) against time.
struct RsrpTrace {
    std::vector<double> timestamps_s;  // strictly increasing
    std::vector<double> pcell_rsrp_dbm;
    std::vector<double> scell_rsrp_dbm;

    std::size_t size() const { return timestamps_s.size(); }
};

inline void validate(const RsrpTrace& trace) {
    if (trace.timestamps_s.empty()) throw DataError("empty RSRP trace");
    if (trace.pcell_rsrp_dbm.size() != trace.size() ||
        trace.scell_rsrp_dbm.size() != trace.size())
        throw DataError("RSRP trace column lengths differ");
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (!(trace.timestamps_s[i] > trace.timestamps_s[i - 1]))
            throw DataError("RSRP trace timestamps not strictly increasing");
    for (std::size_t i = 0; i < trace.size(); ++i)
        if (!std::isfinite(trace.pcell_rsrp_dbm[i]) || !std::isfinite(trace.scell_rsrp_dbm[i]))
            throw DataError("RSRP trace contains non-finite values");
}

// Measurement-event thresholds. gamma1/gamma2 follow the A5 convention
// "SCell >= gamma1 and PCell <= gamma2"; sources disagree on which threshold
// carries which subscript, so the pair is named here once and used
// consistently.
struct EventConfig {
    double gamma_dbm = -100.0;   // A1/A2/A4
    double delta_db = 3.0;       // A3 offset
    double gamma1_dbm = -100.0;  // A5: SCell >= gamma1
    double gamma2_dbm = -110.0;  // A5: PCell <= gamma2
    double ttt_s = 0.0;

    bool valid() const {
        return ttt_s >= 0.0 && std::isfinite(gamma_dbm) && std::isfinite(delta_db) &&
               std::isfinite(gamma1_dbm) && std::isfinite(gamma2_dbm);
    }
};

enum class EventKind { kA1, kA2, kA3, kA4, kA5 };

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::kA1: return "A1";
        case EventKind::kA2: return "A2";
        case EventKind::kA3: return "A3";
        case EventKind::kA4: return "A4";
        case EventKind::kA5: return "A5";
    }
    return "?";
}

// A maximal run of samples on which one event condition holds. t_end is the
// last sample time of the run; open_ended marks runs still true at trace end.
struct EventOccurrence {
    EventKind kind;
    double t_start = 0.0;
    double t_end = 0.0;
    bool open_ended = false;
};

inline bool event_condition(EventKind kind, double pcell, double scell,
                            const EventConfig& cfg) {
    switch (kind) {
        case EventKind::kA1: return pcell >= cfg.gamma_dbm;
        case EventKind::kA2: return pcell < cfg.gamma_dbm;
        case EventKind::kA3: return scell >= pcell + cfg.delta_db;
        case EventKind::kA4: return scell >= cfg.gamma_dbm;
        case EventKind::kA5: return scell >= cfg.gamma1_dbm && pcell <= cfg.gamma2_dbm;
    }
    return false;
}

inline std::vector<EventOccurrence> evaluate_events(const RsrpTrace& trace,
                                                    const EventConfig& cfg) {
    validate(trace);
    if (!cfg.valid()) throw ConfigError("invalid event config");

    std::vector<EventOccurrence> out;
    constexpr std::array<EventKind, 5> kinds = {EventKind::kA1, EventKind::kA2, EventKind::kA3,
                                                EventKind::kA4, EventKind::kA5};
    for (EventKind kind : kinds) {
        std::optional<std::size_t> run_start;
        for (std::size_t i = 0; i <= trace.size(); ++i) {
            const bool cond = i < trace.size() &&
                              event_condition(kind, trace.pcell_rsrp_dbm[i],
                                              trace.scell_rsrp_dbm[i], cfg);
            if (cond && !run_start) run_start = i;
            if (!cond && run_start) {
                EventOccurrence occ;
                occ.kind = kind;
                occ.t_start = trace.timestamps_s[*run_start];
                occ.t_end = trace.timestamps_s[i - 1];
                occ.open_ended = (i == trace.size());
                out.push_back(occ);
                run_start.reset();
            }
        }
    }
    return out;
}

// Earliest time t with A5 held on all samples of [t - ttt, t]: for each
// A5-true run starting at t_s, the first sample time >= t_s + ttt inside the
// run. With piecewise-constant traces sampled on a grid containing t_s + ttt
// this is exactly t_s + ttt.
inline std::optional<double> handover_trigger(const RsrpTrace& trace, const EventConfig& cfg) {
    validate(trace);
    if (!cfg.valid()) throw ConfigError("invalid event config");

    std::optional<std::size_t> run_start;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const bool cond = event_condition(EventKind::kA5, trace.pcell_rsrp_dbm[i],
                                          trace.scell_rsrp_dbm[i], cfg);
        if (!cond) {
            run_start.reset();
            continue;
        }
        if (!run_start) run_start = i;
        const double held = trace.timestamps_s[i] - trace.timestamps_s[*run_start];
        if (held >= cfg.ttt_s) return trace.timestamps_s[i];
    }
    return std::nullopt;
}

}  // namespace scp
