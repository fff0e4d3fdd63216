#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "scp/dataset.hpp"
#include "scp/errors.hpp"
#include "scp/map_classifier.hpp"
#include "scp/random_forest.hpp"
#include "scp/roc.hpp"
#include "scp/sampling.hpp"

namespace scp {

struct FoldSplit {
    int k = 0;
    std::vector<int> assignment;  // row index -> fold id in [0, k)
};

// Per-class round-robin after a seeded shuffle: per-class fold counts differ
// by at most one.
inline FoldSplit stratified_kfold(const std::vector<Label>& labels, int k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("stratified_kfold: k must be >= 2");
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < labels.size(); ++i)
        by_class[labels[i] == 1 ? 1 : 0].push_back(i);
    for (int c = 0; c < 2; ++c)
        if (by_class[c].size() < static_cast<std::size_t>(k))
            throw DataError("stratified_kfold: class " + std::to_string(c) +
                            " has fewer members than folds");

    FoldSplit split;
    split.k = k;
    split.assignment.assign(labels.size(), -1);
    for (int c = 0; c < 2; ++c) {
        auto& idx = by_class[c];
        RngStream rng = RngStream(seed).derive(static_cast<std::uint64_t>(c));
        for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
            const std::size_t j = i + rng.uniform_index(idx.size() - i);
            std::swap(idx[i], idx[j]);
        }
        for (std::size_t i = 0; i < idx.size(); ++i)
            split.assignment[idx[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    }
    return split;
}

enum class SamplingPolicy { kNone, kHybridTrainOnly, kHybridFullDataset };

struct SamplingConfig {
    SamplingPolicy policy = SamplingPolicy::kHybridTrainOnly;
    SmoteConfig smote;
};

struct ModelSpec {
    enum class Kind { kForest, kMap };
    Kind kind = Kind::kForest;
    ForestHyperparams forest;
    // MAP is univariate: one feature column, optionally in dB.
    int map_feature_index = 0;
    bool map_feature_db = true;
    MapSign map_sign = MapSign::kCorrected;
};

struct CrossValidationResult {
    std::vector<RocCurve> fold_curves;
    MeanRoc mean;
    // Provenance of the rows each fold trained on after resampling
    // (-1 marks synthetic rows); lets callers audit that no test row leaked.
    std::vector<std::vector<long long>> fold_train_row_ids;
};

namespace detail {

inline double map_feature_value(double v, bool use_db) {
    if (!use_db) return v;
    return 10.0 * std::log10(std::max(v, 1e-300));
}

inline constexpr std::uint64_t kTagCvSampling = 0xcf01;
inline constexpr std::uint64_t kTagCvFolds = 0xcf02;
inline constexpr std::uint64_t kTagCvModel = 0xcf03;

}  // namespace detail

// Per fold: resample the training portion only (unless the full-dataset
// policy is selected), fit, score the untouched test portion, build its ROC.
inline CrossValidationResult cross_validate(const Dataset& dataset, const ModelSpec& spec,
                                            int k, std::uint64_t seed,
                                            const SamplingConfig& sampling = {}) {
    Dataset ds = dataset;
    ds.validate();
    if (ds.row_ids.empty()) ds.tag_rows();

    if (sampling.policy == SamplingPolicy::kHybridFullDataset)
        ds = hybrid_sample(ds, derive_key(seed, detail::kTagCvSampling), sampling.smote);

    const FoldSplit split = stratified_kfold(ds.labels, k, derive_key(seed, detail::kTagCvFolds));

    CrossValidationResult result;
    for (int fold = 0; fold < k; ++fold) {
        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i = 0; i < ds.size(); ++i)
            (split.assignment[i] == fold ? test_idx : train_idx).push_back(i);

        Dataset train = ds.subset(train_idx);
        if (sampling.policy == SamplingPolicy::kHybridTrainOnly)
            train = hybrid_sample(
                train, derive_key(seed, detail::kTagCvSampling, static_cast<std::uint64_t>(fold)),
                sampling.smote);

        std::vector<double> scores;
        scores.reserve(test_idx.size());
        const std::uint64_t model_key =
            derive_key(seed, detail::kTagCvModel, static_cast<std::uint64_t>(fold));
        if (spec.kind == ModelSpec::Kind::kForest) {
            const RandomForestModel model = fit_forest(train, spec.forest, model_key);
            for (std::size_t i : test_idx) scores.push_back(forest_score(model, ds.rows[i]));
        } else {
            const auto col = static_cast<std::size_t>(spec.map_feature_index);
            if (col >= ds.dim()) throw ConfigError("cross_validate: MAP feature index out of range");
            std::vector<double> xs;
            xs.reserve(train.size());
            for (const auto& row : train.rows)
                xs.push_back(detail::map_feature_value(row[col], spec.map_feature_db));
            const GaussianMapModel model = fit_map(xs, train.labels);
            for (std::size_t i : test_idx)
                scores.push_back(
                    map_score(model, detail::map_feature_value(ds.rows[i][col], spec.map_feature_db)));
        }

        std::vector<Label> test_labels;
        test_labels.reserve(test_idx.size());
        for (std::size_t i : test_idx) test_labels.push_back(ds.labels[i]);
        result.fold_curves.push_back(roc_curve(scores, test_labels));
        result.fold_train_row_ids.push_back(train.row_ids);
    }
    result.mean = mean_roc(result.fold_curves);
    return result;
}

}  // namespace scp
