#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "scp/dataset.hpp"
#include "scp/errors.hpp"
#include "scp/rng.hpp"

namespace scp {

namespace detail {

// Per-dimension standardization statistics over a row set; zero-spread
// dimensions get unit scale so they drop out of distances.
struct Standardizer {
    std::vector<double> mean, inv_std;

    explicit Standardizer(const std::vector<std::vector<double>>& rows) {
        const std::size_t d = rows.empty() ? 0 : rows[0].size();
        mean.assign(d, 0.0);
        inv_std.assign(d, 1.0);
        if (rows.empty()) return;
        for (const auto& r : rows)
            for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
        for (auto& m : mean) m /= static_cast<double>(rows.size());
        std::vector<double> var(d, 0.0);
        for (const auto& r : rows)
            for (std::size_t j = 0; j < d; ++j) {
                const double dv = r[j] - mean[j];
                var[j] += dv * dv;
            }
        for (std::size_t j = 0; j < d; ++j) {
            const double sd = std::sqrt(var[j] / static_cast<double>(rows.size()));
            inv_std[j] = sd > 0.0 ? 1.0 / sd : 1.0;
        }
    }

    double distance2(const std::vector<double>& a, const std::vector<double>& b) const {
        double s = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double dv = (a[j] - b[j]) * inv_std[j];
            s += dv * dv;
        }
        return s;
    }
};

}  // namespace detail

struct SmoteConfig {
    int k = 5;
    // Standardize dimensions before the nearest-neighbor search; synthesis
    // itself always happens in raw feature space.
    bool standardize = true;
};

// Synthetic rows x + u * (x_nn - x): x a uniformly chosen minority row, x_nn
// one of its k nearest minority neighbors (Euclidean, ties by row index),
// u ~ Uniform[0,1]. Deterministic per seed.
inline std::vector<std::vector<double>> smote(const std::vector<std::vector<double>>& minority_rows,
                                              int k, std::size_t n_synthetic, std::uint64_t seed,
                                              bool standardize = true) {
    const std::size_t m = minority_rows.size();
    if (m < 2) throw ConfigError("smote: need at least two minority rows");
    if (k < 1) throw ConfigError("smote: k must be >= 1");
    if (static_cast<std::size_t>(k) >= m)
        throw ConfigError("smote: k must be smaller than the minority count");

    const detail::Standardizer stats(minority_rows);
    auto dist2 = [&](std::size_t a, std::size_t b) {
        if (standardize) return stats.distance2(minority_rows[a], minority_rows[b]);
        double s = 0.0;
        for (std::size_t j = 0; j < minority_rows[a].size(); ++j) {
            const double dv = minority_rows[a][j] - minority_rows[b][j];
            s += dv * dv;
        }
        return s;
    };

    // Brute-force kNN per minority row.
    std::vector<std::vector<std::size_t>> neighbors(m);
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t i = 0; i < m; ++i) {
        cand.clear();
        for (std::size_t j = 0; j < m; ++j)
            if (j != i) cand.emplace_back(dist2(i, j), j);
        std::sort(cand.begin(), cand.end());
        neighbors[i].reserve(static_cast<std::size_t>(k));
        for (int n = 0; n < k; ++n) neighbors[i].push_back(cand[static_cast<std::size_t>(n)].second);
    }

    RngStream rng(seed);
    std::vector<std::vector<double>> synthetic;
    synthetic.reserve(n_synthetic);
    for (std::size_t s = 0; s < n_synthetic; ++s) {
        const std::size_t i = rng.uniform_index(m);
        const std::size_t nn = neighbors[i][rng.uniform_index(static_cast<std::uint64_t>(k))];
        const double u = rng.uniform();
        std::vector<double> row(minority_rows[i].size());
        for (std::size_t j = 0; j < row.size(); ++j)
            row[j] = minority_rows[i][j] + u * (minority_rows[nn][j] - minority_rows[i][j]);
        synthetic.push_back(std::move(row));
    }
    return synthetic;
}

// Uniform subset of n_keep rows without replacement (partial Fisher-Yates).
// Returns indices into majority_rows, in draw order.
inline std::vector<std::size_t> undersample_indices(std::size_t majority_count,
                                                    std::size_t n_keep, std::uint64_t seed) {
    if (n_keep > majority_count)
        throw ConfigError("undersample: n_keep exceeds the majority count");
    std::vector<std::size_t> idx(majority_count);
    std::iota(idx.begin(), idx.end(), 0);
    RngStream rng(seed);
    for (std::size_t i = 0; i < n_keep; ++i) {
        const std::size_t j = i + rng.uniform_index(majority_count - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n_keep);
    return idx;
}

inline std::vector<std::vector<double>> undersample(
    const std::vector<std::vector<double>>& majority_rows, std::size_t n_keep,
    std::uint64_t seed) {
    std::vector<std::vector<double>> out;
    out.reserve(n_keep);
    for (std::size_t i : undersample_indices(majority_rows.size(), n_keep, seed))
        out.push_back(majority_rows[i]);
    return out;
}

// Balances to exactly floor(total/2) rows per class: SMOTE lifts the minority
// up to the target, random undersampling brings the majority down to it.
// Synthetic rows get row_id -1 when provenance is tracked.
inline Dataset hybrid_sample(const Dataset& dataset, std::uint64_t seed,
                             const SmoteConfig& cfg = {}) {
    dataset.validate();
    const ClassCounts counts = dataset.class_counts();
    if (counts.ones == 0 || counts.zeros == 0)
        throw DataError("hybrid_sample: both classes must be present");

    const Label minority_label = counts.ones <= counts.zeros ? 1 : 0;
    std::vector<std::size_t> minority_idx, majority_idx;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        (dataset.labels[i] == minority_label ? minority_idx : majority_idx).push_back(i);

    const std::size_t target = dataset.size() / 2;
    const std::size_t n_synthetic = target - std::min(target, minority_idx.size());

    const bool tracked = !dataset.row_ids.empty();
    Dataset out;
    out.feature_names = dataset.feature_names;

    auto emit = [&](std::size_t i) {
        out.rows.push_back(dataset.rows[i]);
        out.labels.push_back(dataset.labels[i]);
        if (tracked) out.row_ids.push_back(dataset.row_ids[i]);
    };

    for (std::size_t i = 0; i < std::min(minority_idx.size(), target); ++i)
        emit(minority_idx[i]);

    if (n_synthetic > 0) {
        std::vector<std::vector<double>> minority_rows;
        minority_rows.reserve(minority_idx.size());
        for (std::size_t i : minority_idx) minority_rows.push_back(dataset.rows[i]);
        const int k = std::min<int>(cfg.k, static_cast<int>(minority_rows.size()) - 1);
        auto synthetic = smote(minority_rows, k, n_synthetic, derive_key(seed, 0xb00),
                               cfg.standardize);
        for (auto& row : synthetic) {
            out.rows.push_back(std::move(row));
            out.labels.push_back(minority_label);
            if (tracked) out.row_ids.push_back(-1);
        }
    }

    auto kept = undersample_indices(majority_idx.size(), target, derive_key(seed, 0xb01));
    std::sort(kept.begin(), kept.end());  // keep original relative order
    for (std::size_t i : kept) emit(majority_idx[i]);

    return out;
}

}  // namespace scp
