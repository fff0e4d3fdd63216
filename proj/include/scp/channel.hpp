#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "scp/errors.hpp"
#include "scp/geometry.hpp"
#include "scp/rng.hpp"

namespace scp {

// Log-distance propagation with log-normal shadowing. ref_loss_db is the loss
// at ref_distance_m; free-space at 1 m and 1 GHz is 32.4 dB, scaled by
// 20*log10(f/1GHz) through for_frequency().
struct PropagationConfig {
    double ref_loss_db = 32.4;
    double ref_distance_m = 1.0;
    double path_loss_exponent = 3.0;
    double shadow_sigma_db = 6.0;
    double noise_floor_dbm = -120.0;

    bool valid() const {
        return ref_distance_m > 0.0 && path_loss_exponent >= 1.0 && shadow_sigma_db >= 0.0;
    }

    static PropagationConfig for_frequency(double carrier_freq_hz, double exponent,
                                           double shadow_sigma_db = 6.0) {
        PropagationConfig cfg;
        cfg.ref_loss_db = 32.4 + 20.0 * std::log10(carrier_freq_hz / 1e9);
        cfg.path_loss_exponent = exponent;
        cfg.shadow_sigma_db = shadow_sigma_db;
        return cfg;
    }
};

inline constexpr double kDefaultMacroExponent = 3.0;
inline constexpr double kDefaultMicroExponent = 2.5;

struct OfdmGrid {
    int n_subcarriers = 1024;
    double guard_fraction = 0.1;
    double bandwidth_hz = 20e6;
    double carrier_freq_hz = 1.27e9;
    int n_antennas = 56;
    // Overrides the computed count when the grid must match externally
    // captured data whose guard arithmetic differs.
    int usable_override = 0;

    int usable_subcarriers() const {
        if (usable_override > 0) return usable_override;
        const int guards = static_cast<int>(
            std::round(guard_fraction * static_cast<double>(n_subcarriers)));
        return n_subcarriers - guards;
    }

    bool valid() const {
        return n_subcarriers > 0 && guard_fraction >= 0.0 && guard_fraction < 1.0 &&
               bandwidth_hz > 0.0 && n_antennas > 0 && usable_subcarriers() > 0 &&
               usable_subcarriers() <= n_subcarriers;
    }
};

// Complex per-antenna, per-usable-subcarrier UL response plus per-antenna SNR.
struct ChannelFrequencyResponse {
    int n_antennas = 0;
    int n_subcarriers = 0;  // usable count
    std::vector<std::complex<double>> samples;  // row-major [antenna][subcarrier]
    std::vector<double> snr_db_per_antenna;

    std::complex<double>& at(int antenna, int subcarrier) {
        return samples[static_cast<std::size_t>(antenna) * n_subcarriers + subcarrier];
    }
    const std::complex<double>& at(int antenna, int subcarrier) const {
        return samples[static_cast<std::size_t>(antenna) * n_subcarriers + subcarrier];
    }
};

struct LinkGain {
    double gain_db = 0.0;  // received power relative to transmit power
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Deterministic part of the loss; distance clamps to the reference distance.
inline double mean_path_loss_db(double distance_m, const PropagationConfig& cfg) {
    if (!cfg.valid()) throw ConfigError("invalid propagation config");
    const double d = std::max(distance_m, cfg.ref_distance_m);
    return cfg.ref_loss_db + 10.0 * cfg.path_loss_exponent * std::log10(d / cfg.ref_distance_m);
}

inline double path_loss_db(double distance_m, const PropagationConfig& cfg, RngStream& rng) {
    return mean_path_loss_db(distance_m, cfg) + cfg.shadow_sigma_db * rng.normal();
}

// Reciprocal link gain: the same value serves UL and DL at a given frequency.
// Shadowing draws come from a stream derived per (ue, bs) pair so evaluation
// order has no effect.
inline LinkGain link_gain(const UserEquipment& ue, const BaseStation& bs,
                          const PropagationConfig& cfg, const RngStream& pair_stream) {
    RngStream rng = pair_stream;
    return LinkGain{-path_loss_db(distance(ue.position, bs.position), cfg, rng)};
}

namespace detail {
// Stream tags for key derivation, so unrelated draws never collide.
inline constexpr std::uint64_t kTagShadowCommon = 0x5c01;
inline constexpr std::uint64_t kTagShadowLink = 0x5c02;
inline constexpr std::uint64_t kTagCfr = 0x5c03;
}  // namespace detail

// Shadowing with a per-UE common component: corr is the correlation between
// shadowing on any two links of the same UE (across stations and carriers),
// which is what makes UL observations at the primary informative about the
// secondary link.
inline double correlated_shadow_db(std::uint64_t seed, int ue_id, int bs_id,
                                   double sigma_db, double corr) {
    if (corr < 0.0 || corr > 1.0) throw ConfigError("shadow correlation outside [0,1]");
    RngStream common(derive_key(seed, detail::kTagShadowCommon, static_cast<std::uint64_t>(ue_id)));
    RngStream link(derive_key(seed, detail::kTagShadowLink, static_cast<std::uint64_t>(ue_id),
                              static_cast<std::uint64_t>(bs_id)));
    return sigma_db * (std::sqrt(corr) * common.normal() + std::sqrt(1.0 - corr) * link.normal());
}

inline double correlated_link_gain_db(const UserEquipment& ue, const BaseStation& bs,
                                      const PropagationConfig& cfg, std::uint64_t seed,
                                      double shadow_corr) {
    const double mean = mean_path_loss_db(distance(ue.position, bs.position), cfg);
    const double shadow =
        correlated_shadow_db(seed, ue.id, bs.id, cfg.shadow_sigma_db, shadow_corr);
    return -(mean + shadow);
}

// Macro with maximum link gain; ties go to the lowest id.
inline int serving_cell(const UserEquipment& ue,
                        const std::vector<const BaseStation*>& macro_stations,
                        const PropagationConfig& cfg, const RngStream& ue_stream) {
    if (macro_stations.empty()) throw ConfigError("serving_cell: no macro stations");
    int best_id = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (const BaseStation* bs : macro_stations) {
        const double g =
            link_gain(ue, *bs, cfg, ue_stream.derive(static_cast<std::uint64_t>(bs->id))).gain_db;
        if (g > best_gain || (g == best_gain && (best_id < 0 || bs->id < best_id))) {
            best_gain = g;
            best_id = bs->id;
        }
    }
    return best_id;
}

// Tap amplitude model: Rayleigh draws complex Gaussian taps; FixedMagnitude
// keeps each tap at its mean power with a random phase (flat |H| for a single
// tap).
enum class TapFading { kRayleigh, kFixedMagnitude };

// Tapped-delay-line synthesis: per antenna, `taps` complex taps with an
// exponentially decaying power-delay profile (decay constant delay_spread_s,
// tap spacing 1/bandwidth), total mean tap power normalized to
// linear(gain_db), evaluated on the usable subcarriers centered around DC.
// Per-antenna SNR is the realized mean subcarrier power in dB over the noise
// floor.
inline ChannelFrequencyResponse synthesize_cfr(const LinkGain& gain, const OfdmGrid& grid,
                                               int taps, double delay_spread_s,
                                               RngStream& rng,
                                               double noise_floor_dbm = -120.0,
                                               TapFading fading = TapFading::kRayleigh) {
    if (!grid.valid()) throw ConfigError("invalid OFDM grid");
    if (taps < 1) throw ConfigError("synthesize_cfr: taps must be >= 1");
    if (delay_spread_s <= 0.0) throw ConfigError("synthesize_cfr: delay spread must be positive");
    if (!std::isfinite(gain.gain_db)) throw DataError("synthesize_cfr: non-finite link gain");

    const int usable = grid.usable_subcarriers();
    const double tap_dt = 1.0 / grid.bandwidth_hz;
    const double subcarrier_spacing = grid.bandwidth_hz / grid.n_subcarriers;

    // Mean tap powers, normalized so their sum is the linear link gain.
    std::vector<double> tap_power(static_cast<std::size_t>(taps));
    double norm = 0.0;
    for (int k = 0; k < taps; ++k) {
        tap_power[k] = std::exp(-static_cast<double>(k) * tap_dt / delay_spread_s);
        norm += tap_power[k];
    }
    const double linear_gain = db_to_linear(gain.gain_db);
    for (auto& p : tap_power) p *= linear_gain / norm;

    ChannelFrequencyResponse cfr;
    cfr.n_antennas = grid.n_antennas;
    cfr.n_subcarriers = usable;
    cfr.samples.resize(static_cast<std::size_t>(grid.n_antennas) * usable);
    cfr.snr_db_per_antenna.resize(static_cast<std::size_t>(grid.n_antennas));

    // Phase table exp(-i 2 pi f_m k dt), shared by all antennas. Usable
    // subcarriers form a centered block; m=0 is the lowest.
    std::vector<std::complex<double>> basis(static_cast<std::size_t>(usable) * taps);
    for (int m = 0; m < usable; ++m) {
        const double f = (static_cast<double>(m) - usable / 2) * subcarrier_spacing;
        for (int k = 0; k < taps; ++k) {
            const double phase = -2.0 * std::numbers::pi * f * static_cast<double>(k) * tap_dt;
            basis[static_cast<std::size_t>(m) * taps + k] = {std::cos(phase), std::sin(phase)};
        }
    }

    std::vector<std::complex<double>> tap(static_cast<std::size_t>(taps));
    for (int a = 0; a < grid.n_antennas; ++a) {
        for (int k = 0; k < taps; ++k) {
            if (fading == TapFading::kRayleigh) {
                const double s = std::sqrt(tap_power[k] / 2.0);
                tap[k] = {s * rng.normal(), s * rng.normal()};
            } else {
                const double mag = std::sqrt(tap_power[k]);
                const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
                tap[k] = {mag * std::cos(phase), mag * std::sin(phase)};
            }
        }
        double power_sum = 0.0;
        for (int m = 0; m < usable; ++m) {
            std::complex<double> h{0.0, 0.0};
            for (int k = 0; k < taps; ++k)
                h += tap[k] * basis[static_cast<std::size_t>(m) * taps + k];
            cfr.at(a, m) = h;
            power_sum += std::norm(h);
        }
        const double mean_power = power_sum / usable;
        cfr.snr_db_per_antenna[a] =
            (mean_power > 0.0 ? linear_to_db(mean_power) : -400.0) - noise_floor_dbm;
    }
    return cfr;
}

}  // namespace scp
