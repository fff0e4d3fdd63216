#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "scp/errors.hpp"
#include "scp/labeling.hpp"

namespace scp {

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = 0.0;
};

// Threshold sweep over descending unique scores with a sentinel above the
// maximum; points run from (0,0) to (1,1) with non-decreasing rates.
struct RocCurve {
    std::vector<RocPoint> points;
    double auroc = 0.0;
};

// Vertically averaged curve on a fixed FPR grid plus per-fold AUROC stats;
// the mean AUROC is the mean of the fold AUROCs, not the area of the
// averaged curve.
struct MeanRoc {
    std::vector<RocPoint> grid;
    double auroc_mean = 0.0;
    double auroc_std = 0.0;
};

inline RocCurve roc_curve(const std::vector<double>& scores, const std::vector<Label>& labels) {
    if (scores.size() != labels.size()) throw DataError("roc_curve: scores/labels length mismatch");
    long long pos = 0, neg = 0;
    for (Label l : labels) (l == 1 ? pos : neg)++;
    if (pos == 0 || neg == 0)
        throw DataError("roc_curve: need at least one positive and one negative label");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});

    // Accumulate over threshold = each unique score, descending; predictions
    // are score >= threshold. Integer counts keep the trapezoid exact.
    long long tp = 0, fp = 0;
    double area2 = 0.0;  // twice the area, in count units
    std::size_t i = 0;
    while (i < order.size()) {
        const double t = scores[order[i]];
        long long tp_prev = tp, fp_prev = fp;
        while (i < order.size() && scores[order[i]] == t) {
            (labels[order[i]] == 1 ? tp : fp)++;
            ++i;
        }
        area2 += static_cast<double>(fp - fp_prev) * static_cast<double>(tp + tp_prev);
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                                static_cast<double>(tp) / static_cast<double>(pos), t});
    }
    curve.auroc = area2 / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
    return curve;
}

// Pair-counting oracle: P(score_+ > score_-) + 0.5 * P(score_+ = score_-)
// over all positive-negative pairs. Independent of roc_curve by construction.
inline double auroc_pair_oracle(const std::vector<double>& scores,
                                const std::vector<Label>& labels) {
    if (scores.size() != labels.size())
        throw DataError("auroc_pair_oracle: scores/labels length mismatch");
    std::vector<double> pos_scores, neg_scores;
    for (std::size_t i = 0; i < scores.size(); ++i)
        (labels[i] == 1 ? pos_scores : neg_scores).push_back(scores[i]);
    if (pos_scores.empty() || neg_scores.empty())
        throw DataError("auroc_pair_oracle: need both classes");

    long long wins2 = 0;  // 2*wins + ties
    for (double sp : pos_scores)
        for (double sn : neg_scores) {
            if (sp > sn) wins2 += 2;
            else if (sp == sn) wins2 += 1;
        }
    return static_cast<double>(wins2) /
           (2.0 * static_cast<double>(pos_scores.size()) *
            static_cast<double>(neg_scores.size()));
}

namespace detail {

// TPR of the curve at a given FPR; vertical jumps take the upper envelope.
inline double tpr_at(const RocCurve& curve, double fpr) {
    const auto& pts = curve.points;
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const auto& a = pts[i];
        const auto& b = pts[i + 1];
        if (fpr < a.fpr || fpr > b.fpr) continue;
        if (a.fpr == b.fpr) {
            best = std::max(best, b.tpr);
        } else {
            const double t = (fpr - a.fpr) / (b.fpr - a.fpr);
            best = std::max(best, a.tpr + t * (b.tpr - a.tpr));
        }
    }
    return best;
}

}  // namespace detail

inline constexpr int kMeanRocGridPoints = 101;

inline MeanRoc mean_roc(const std::vector<RocCurve>& curves) {
    if (curves.empty()) throw DataError("mean_roc: no curves");

    MeanRoc out;
    out.grid.resize(kMeanRocGridPoints);
    for (int g = 0; g < kMeanRocGridPoints; ++g) {
        const double fpr = static_cast<double>(g) / (kMeanRocGridPoints - 1);
        double tpr = 0.0;
        for (const auto& c : curves) tpr += detail::tpr_at(c, fpr);
        out.grid[g] = {fpr, tpr / static_cast<double>(curves.size()),
                       std::numeric_limits<double>::quiet_NaN()};
    }

    double sum = 0.0;
    for (const auto& c : curves) sum += c.auroc;
    out.auroc_mean = sum / static_cast<double>(curves.size());
    if (curves.size() > 1) {
        double ss = 0.0;
        for (const auto& c : curves) ss += (c.auroc - out.auroc_mean) * (c.auroc - out.auroc_mean);
        out.auroc_std = std::sqrt(ss / static_cast<double>(curves.size() - 1));
    }
    return out;
}

}  // namespace scp
