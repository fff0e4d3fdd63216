#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "scp/errors.hpp"
#include "scp/labeling.hpp"

namespace scp {

// Univariate equal-variance Gaussian class-conditional model with prior
// P(C=1) = p. The posterior comparison has the closed-form threshold
// x* = sigma^2 * ln((1-p)/p) / (mu1 - mu0) + (mu0 + mu1)/2.
struct GaussianMapModel {
    double mu0 = 0.0;
    double mu1 = 1.0;
    double sigma = 1.0;
    double p = 0.5;

    bool valid() const { return sigma > 0.0 && p > 0.0 && p < 1.0 && mu0 != mu1; }
};

// kCorrected uses properly signed Gaussian exponents (denominator mu1 - mu0).
// kLiteral keeps the widely circulated variant with the two class means
// swapped in the denominator; available for comparison only.
enum class MapSign { kCorrected, kLiteral };

inline GaussianMapModel fit_map(const std::vector<double>& xs, const std::vector<Label>& ys) {
    if (xs.size() != ys.size()) throw DataError("fit_map: xs/ys length mismatch");
    std::size_t n0 = 0, n1 = 0;
    double sum0 = 0.0, sum1 = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (ys[i] == 1) { ++n1; sum1 += xs[i]; }
        else { ++n0; sum0 += xs[i]; }
    }
    if (n0 < 2 || n1 < 2)
        throw DataError("fit_map: need at least two samples per class");

    GaussianMapModel m;
    m.mu0 = sum0 / static_cast<double>(n0);
    m.mu1 = sum1 / static_cast<double>(n1);
    m.p = static_cast<double>(n1) / static_cast<double>(n0 + n1);

    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double mu = ys[i] == 1 ? m.mu1 : m.mu0;
        ss += (xs[i] - mu) * (xs[i] - mu);
    }
    const double pooled_var = ss / static_cast<double>(n0 + n1 - 2);
    if (pooled_var <= 0.0) throw DataError("fit_map: zero pooled within-class variance");
    m.sigma = std::sqrt(pooled_var);
    return m;
}

inline double map_decision_threshold(const GaussianMapModel& m,
                                     MapSign sign = MapSign::kCorrected) {
    if (m.mu0 == m.mu1) throw ConfigError("map threshold undefined: equal class means");
    if (m.sigma <= 0.0 || m.p <= 0.0 || m.p >= 1.0)
        throw ConfigError("map threshold: invalid model parameters");
    const double denom = sign == MapSign::kCorrected ? (m.mu1 - m.mu0) : (m.mu0 - m.mu1);
    return m.sigma * m.sigma * std::log((1.0 - m.p) / m.p) / denom + (m.mu0 + m.mu1) / 2.0;
}

// Closed-form rule: class 1 on the side of x* where mu1 lies (for kCorrected).
// The literal variant keeps the plain "x >= threshold" reading.
inline Label map_decide(const GaussianMapModel& m, double x, MapSign sign = MapSign::kCorrected) {
    const double xstar = map_decision_threshold(m, sign);
    if (sign == MapSign::kLiteral) return x >= xstar ? 1 : 0;
    return (m.mu1 > m.mu0 ? x >= xstar : x <= xstar) ? 1 : 0;
}

// Posterior P(C=1 | x) via Bayes with negative-exponent Gaussians, evaluated
// through the logistic form for stability; equals 0.5 exactly at x*.
inline double map_score(const GaussianMapModel& m, double x) {
    if (m.sigma <= 0.0 || m.p <= 0.0 || m.p >= 1.0)
        throw ConfigError("map_score: invalid model parameters");
    const double a = std::log(m.p / (1.0 - m.p)) +
                     ((x - m.mu0) * (x - m.mu0) - (x - m.mu1) * (x - m.mu1)) /
                         (2.0 * m.sigma * m.sigma);
    if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
    const double e = std::exp(a);
    return e / (1.0 + e);
}

}  // namespace scp
