#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <thread>
#include <vector>

#include "scp/dataset.hpp"
#include "scp/errors.hpp"
#include "scp/rng.hpp"

namespace scp {

struct ForestHyperparams {
    int n_trees = 100;
    int max_depth = 12;
    int min_samples_leaf = 2;
    int features_per_split = 0;  // 0 selects ceil(sqrt(d))
    int n_threads = 1;

    bool valid() const {
        return n_trees >= 1 && max_depth >= 0 && min_samples_leaf >= 1 &&
               features_per_split >= 0 && n_threads >= 1;
    }

    int resolved_features_per_split(std::size_t dim) const {
        if (features_per_split > 0)
            return std::min<int>(features_per_split, static_cast<int>(dim));
        return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(dim))));
    }
};

// feature < 0 marks a leaf carrying the class-1 fraction of its training rows.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    double leaf_fraction = 0.0;
};

struct DecisionTree {
    std::vector<TreeNode> nodes;

    double score(std::span<const double> x) const {
        std::int32_t i = 0;
        for (;;) {
            const TreeNode& n = nodes[static_cast<std::size_t>(i)];
            if (n.feature < 0) return n.leaf_fraction;
            i = x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
        }
    }
};

struct RandomForestModel {
    ForestHyperparams params;
    std::uint64_t seed = 0;
    std::size_t dim = 0;
    std::vector<std::string> feature_names;
    std::vector<DecisionTree> trees;
};

namespace detail {

struct TreeBuilder {
    const Dataset& ds;
    const ForestHyperparams& hp;
    int n_candidates;
    RngStream rng;
    DecisionTree tree;
    std::vector<int> feature_pool;

    TreeBuilder(const Dataset& dataset, const ForestHyperparams& params, std::uint64_t tree_key)
        : ds(dataset),
          hp(params),
          n_candidates(params.resolved_features_per_split(dataset.dim())),
          rng(tree_key) {
        feature_pool.resize(ds.dim());
        std::iota(feature_pool.begin(), feature_pool.end(), 0);
    }

    // Split quality as summed child impurity n_c * gini(c); lower is better.
    // Counts are exact in doubles, so comparisons are reproducible.
    static double impurity_sum(double n, double ones) {
        const double zeros = n - ones;
        return n - (ones * ones + zeros * zeros) / n;
    }

    std::int32_t build(std::vector<std::size_t>& rows, int depth) {
        std::size_t ones = 0;
        for (std::size_t r : rows) ones += ds.labels[r] == 1 ? 1u : 0u;

        const double n = static_cast<double>(rows.size());
        const double fraction = static_cast<double>(ones) / n;

        auto make_leaf = [&]() {
            TreeNode leaf;
            leaf.leaf_fraction = fraction;
            tree.nodes.push_back(leaf);
            return static_cast<std::int32_t>(tree.nodes.size() - 1);
        };

        if (depth >= hp.max_depth || ones == 0 || ones == rows.size() ||
            rows.size() < 2 * static_cast<std::size_t>(hp.min_samples_leaf))
            return make_leaf();

        // Candidate features: a uniform sample without replacement, examined
        // in ascending index order so gain ties resolve to the lower feature.
        for (int i = 0; i < n_candidates; ++i) {
            const std::size_t j =
                i + rng.uniform_index(feature_pool.size() - static_cast<std::size_t>(i));
            std::swap(feature_pool[static_cast<std::size_t>(i)], feature_pool[j]);
        }
        std::vector<int> candidates(feature_pool.begin(), feature_pool.begin() + n_candidates);
        std::sort(candidates.begin(), candidates.end());

        const double parent_impurity = impurity_sum(n, static_cast<double>(ones));
        int best_feature = -1;
        double best_threshold = 0.0;
        double best_impurity = parent_impurity;

        std::vector<std::size_t> order(rows);
        for (int f : candidates) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return ds.rows[a][static_cast<std::size_t>(f)] <
                       ds.rows[b][static_cast<std::size_t>(f)];
            });
            double left_n = 0.0, left_ones = 0.0;
            for (std::size_t i = 1; i < order.size(); ++i) {
                left_n += 1.0;
                left_ones += ds.labels[order[i - 1]] == 1 ? 1.0 : 0.0;
                const double lo = ds.rows[order[i - 1]][static_cast<std::size_t>(f)];
                const double hi = ds.rows[order[i]][static_cast<std::size_t>(f)];
                if (lo == hi) continue;
                if (i < static_cast<std::size_t>(hp.min_samples_leaf) ||
                    order.size() - i < static_cast<std::size_t>(hp.min_samples_leaf))
                    continue;
                const double right_n = n - left_n;
                const double right_ones = static_cast<double>(ones) - left_ones;
                const double impurity =
                    impurity_sum(left_n, left_ones) + impurity_sum(right_n, right_ones);
                // Strict improvement only; with features and thresholds
                // examined in ascending order this breaks gain ties toward
                // the lower feature index, then the lower threshold.
                if (impurity < best_impurity) {
                    best_impurity = impurity;
                    best_feature = f;
                    best_threshold = lo + (hi - lo) / 2.0;
                }
            }
        }

        if (best_feature < 0) return make_leaf();

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows)
            (ds.rows[r][static_cast<std::size_t>(best_feature)] < best_threshold ? left_rows
                                                                                 : right_rows)
                .push_back(r);

        const std::int32_t node_index = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[static_cast<std::size_t>(node_index)].feature = best_feature;
        tree.nodes[static_cast<std::size_t>(node_index)].threshold = best_threshold;
        const std::int32_t left = build(left_rows, depth + 1);
        const std::int32_t right = build(right_rows, depth + 1);
        tree.nodes[static_cast<std::size_t>(node_index)].left = left;
        tree.nodes[static_cast<std::size_t>(node_index)].right = right;
        return node_index;
    }
};

inline DecisionTree fit_tree(const Dataset& ds, const ForestHyperparams& hp,
                             std::uint64_t tree_key) {
    TreeBuilder builder(ds, hp, tree_key);

    // Bootstrap sample of size n, with replacement.
    std::vector<std::size_t> rows(ds.size());
    for (auto& r : rows) r = builder.rng.uniform_index(ds.size());

    builder.build(rows, 0);
    return std::move(builder.tree);
}

}  // namespace detail

// Bagged Gini-split trees. Each tree draws from a stream keyed by
// (seed, tree index), so the fit is independent of thread count and
// training order.
inline RandomForestModel fit_forest(const Dataset& dataset, const ForestHyperparams& hp,
                                    std::uint64_t seed) {
    dataset.validate();
    if (!hp.valid()) throw ConfigError("invalid forest hyperparameters");
    if (dataset.size() < 2) throw DataError("fit_forest: need at least two rows");
    if (dataset.dim() < 1) throw DataError("fit_forest: need at least one feature");
    const ClassCounts counts = dataset.class_counts();
    if (counts.ones == 0 || counts.zeros == 0)
        throw DataError("fit_forest: both classes must be present");

    RandomForestModel model;
    model.params = hp;
    model.seed = seed;
    model.dim = dataset.dim();
    model.feature_names = dataset.feature_names;
    model.trees.resize(static_cast<std::size_t>(hp.n_trees));

    auto fit_range = [&](int begin, int end) {
        for (int t = begin; t < end; ++t)
            model.trees[static_cast<std::size_t>(t)] =
                detail::fit_tree(dataset, hp, derive_key(seed, static_cast<std::uint64_t>(t)));
    };

    const int n_threads = std::min(hp.n_threads, hp.n_trees);
    if (n_threads <= 1) {
        fit_range(0, hp.n_trees);
    } else {
        std::vector<std::thread> workers;
        const int chunk = (hp.n_trees + n_threads - 1) / n_threads;
        for (int w = 0; w < n_threads; ++w) {
            const int begin = w * chunk;
            const int end = std::min(hp.n_trees, begin + chunk);
            if (begin < end) workers.emplace_back(fit_range, begin, end);
        }
        for (auto& th : workers) th.join();
    }
    return model;
}

// Mean over trees of the reached leaf's class-1 fraction.
inline double forest_score(const RandomForestModel& model, std::span<const double> x) {
    if (x.size() != model.dim)
        throw DataError("forest_score: feature dimension mismatch");
    double sum = 0.0;
    for (const auto& tree : model.trees) sum += tree.score(x);
    return sum / static_cast<double>(model.trees.size());
}

}  // namespace scp
