#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>

#include "scp/rng.hpp"
#include "scp/sampling.hpp"

using namespace scp;

namespace {

// Segment-membership oracle: does `s` lie on the segment x + u*(y - x) for
// some u in [0,1], within tolerance? Projects onto the segment direction and
// checks the residual.
bool on_segment(const std::vector<double>& s, const std::vector<double>& x,
                const std::vector<double>& y, double tol) {
    double dir2 = 0.0, proj = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        const double d = y[j] - x[j];
        dir2 += d * d;
        proj += (s[j] - x[j]) * d;
    }
    if (dir2 == 0.0) {
        double r2 = 0.0;
        for (std::size_t j = 0; j < s.size(); ++j) r2 += (s[j] - x[j]) * (s[j] - x[j]);
        return r2 <= tol * tol;
    }
    const double u = proj / dir2;
    if (u < -tol || u > 1.0 + tol) return false;
    double r2 = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        const double res = s[j] - x[j] - u * (y[j] - x[j]);
        r2 += res * res;
    }
    return r2 <= tol * tol * dir2;
}

// Checks every synthetic row against every (minority point, one of its kNN)
// pair, with the same standardization choice as the implementation under test.
bool all_on_knn_segments(const std::vector<std::vector<double>>& synthetic,
                         const std::vector<std::vector<double>>& minority, int k,
                         bool standardize, double tol = 1e-9) {
    const std::size_t m = minority.size();
    const std::size_t d = minority[0].size();
    std::vector<double> mean(d, 0.0), inv_std(d, 1.0);
    if (standardize) {
        for (const auto& r : minority)
            for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
        for (auto& v : mean) v /= static_cast<double>(m);
        std::vector<double> var(d, 0.0);
        for (const auto& r : minority)
            for (std::size_t j = 0; j < d; ++j) var[j] += (r[j] - mean[j]) * (r[j] - mean[j]);
        for (std::size_t j = 0; j < d; ++j) {
            const double sd = std::sqrt(var[j] / static_cast<double>(m));
            inv_std[j] = sd > 0.0 ? 1.0 / sd : 1.0;
        }
    }
    auto dist2 = [&](std::size_t a, std::size_t b) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double dv = (minority[a][j] - minority[b][j]) * inv_std[j];
            s += dv * dv;
        }
        return s;
    };
    std::vector<std::vector<std::size_t>> knn(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::pair<double, std::size_t>> cand;
        for (std::size_t j = 0; j < m; ++j)
            if (j != i) cand.emplace_back(dist2(i, j), j);
        std::sort(cand.begin(), cand.end());
        for (int n = 0; n < k; ++n) knn[i].push_back(cand[static_cast<std::size_t>(n)].second);
    }

    for (const auto& s : synthetic) {
        bool found = false;
        for (std::size_t i = 0; i < m && !found; ++i)
            for (std::size_t nn : knn[i])
                if (on_segment(s, minority[i], minority[nn], tol)) {
                    found = true;
                    break;
                }
        if (!found) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("two-point minority: all synthetics lie on the joining segment") {
    const std::vector<std::vector<double>> minority = {{0.0, 0.0}, {1.0, 1.0}};
    const auto synthetic = smote(minority, 1, 50, 42);
    REQUIRE(synthetic.size() == 50);
    for (const auto& s : synthetic) {
        REQUIRE(on_segment(s, minority[0], minority[1], 1e-12));
        REQUIRE_THAT(s[0], Catch::Matchers::WithinAbs(s[1], 1e-12));  // diagonal
    }
}

TEST_CASE("zero synthetic rows requested gives an empty result") {
    const std::vector<std::vector<double>> minority = {{0.0}, {1.0}, {2.0}};
    REQUIRE(smote(minority, 1, 0, 7).empty());
}

TEST_CASE("synthetic rows from a 10-point minority pass the kNN segment oracle") {
    RngStream rng(3);
    std::vector<std::vector<double>> minority;
    for (int i = 0; i < 10; ++i)
        minority.push_back({rng.uniform(0.0, 100.0), rng.normal(), rng.uniform(-5.0, 5.0)});
    const int k = 3;
    const auto synthetic = smote(minority, k, 100, 11, true);
    REQUIRE(synthetic.size() == 100);
    REQUIRE(all_on_knn_segments(synthetic, minority, k, true));
}

TEST_CASE("smote preconditions") {
    const std::vector<std::vector<double>> one = {{0.0}};
    CHECK_THROWS_AS(smote(one, 1, 5, 0), ConfigError);
    const std::vector<std::vector<double>> two = {{0.0}, {1.0}};
    CHECK_THROWS_AS(smote(two, 2, 5, 0), ConfigError);  // k >= minority count
    CHECK_THROWS_AS(smote(two, 0, 5, 0), ConfigError);
}

TEST_CASE("smote is deterministic per seed") {
    RngStream rng(5);
    std::vector<std::vector<double>> minority;
    for (int i = 0; i < 8; ++i) minority.push_back({rng.normal(), rng.normal()});
    REQUIRE(smote(minority, 3, 40, 9) == smote(minority, 3, 40, 9));
    REQUIRE(smote(minority, 3, 40, 9) != smote(minority, 3, 40, 10));
}

TEST_CASE("undersample keeps a sub-multiset, exactly n_keep of it") {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 20; ++i) rows.push_back({static_cast<double>(i)});

    const auto all = undersample(rows, 20, 123);
    REQUIRE(all.size() == 20);
    auto sorted = all;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(sorted == rows);  // same content

    REQUIRE(undersample(rows, 0, 1).empty());
    REQUIRE(undersample(rows, 7, 5) == undersample(rows, 7, 5));
    CHECK_THROWS_AS(undersample(rows, 21, 0), ConfigError);

    const auto some = undersample(rows, 7, 99);
    std::map<std::vector<double>, int> multiplicity;
    for (const auto& r : some) multiplicity[r]++;
    for (const auto& [row, count] : multiplicity) {
        REQUIRE(count == 1);
        REQUIRE(std::find(rows.begin(), rows.end(), row) != rows.end());
    }
}

namespace {

Dataset imbalanced_dataset(int ones, int zeros, std::uint64_t seed) {
    Dataset ds;
    ds.feature_names = {"a", "b"};
    RngStream rng(seed);
    for (int i = 0; i < ones; ++i) {
        ds.rows.push_back({rng.normal(3.0, 1.0), rng.normal(0.0, 1.0)});
        ds.labels.push_back(1);
    }
    for (int i = 0; i < zeros; ++i) {
        ds.rows.push_back({rng.normal(-3.0, 1.0), rng.normal(0.0, 1.0)});
        ds.labels.push_back(0);
    }
    return ds;
}

}  // namespace

TEST_CASE("hybrid balances 10/90 to 50/50") {
    const auto out = hybrid_sample(imbalanced_dataset(10, 90, 1), 42);
    const auto counts = out.class_counts();
    REQUIRE(counts.ones == 50);
    REQUIRE(counts.zeros == 50);
    REQUIRE(out.class_counts().ratio() == 1.0);
}

TEST_CASE("already balanced data passes through with the same counts") {
    const auto out = hybrid_sample(imbalanced_dataset(40, 40, 2), 42);
    const auto counts = out.class_counts();
    REQUIRE(counts.ones == 40);
    REQUIRE(counts.zeros == 40);
}

TEST_CASE("a single minority row cannot be smoted") {
    CHECK_THROWS_AS(hybrid_sample(imbalanced_dataset(1, 99, 3), 42), ConfigError);
}

TEST_CASE("hybrid output ratio is exactly one on random imbalanced inputs") {
    RngStream rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const int ones = 2 + static_cast<int>(rng.uniform_index(60));
        const int zeros = 2 + static_cast<int>(rng.uniform_index(120));
        const auto ds = imbalanced_dataset(ones, zeros, 1000 + trial);
        const auto out = hybrid_sample(ds, trial);
        const auto counts = out.class_counts();
        REQUIRE(counts.ones == counts.zeros);
        REQUIRE(counts.ones == static_cast<long long>((ones + zeros) / 2));
    }
}

TEST_CASE("hybrid zero-minority input is rejected") {
    Dataset ds = imbalanced_dataset(5, 5, 4);
    for (auto& l : ds.labels) l = 0;
    CHECK_THROWS_AS(hybrid_sample(ds, 0), DataError);
}

TEST_CASE("hybrid provenance: synthetic rows are tagged -1, kept rows keep ids") {
    Dataset ds = imbalanced_dataset(5, 45, 5);
    ds.tag_rows();
    const auto out = hybrid_sample(ds, 8);
    REQUIRE(out.row_ids.size() == out.size());
    int synthetic = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out.row_ids[i] == -1) {
            ++synthetic;
            REQUIRE(out.labels[i] == 1);
        } else {
            REQUIRE(out.rows[i] == ds.rows[static_cast<std::size_t>(out.row_ids[i])]);
        }
    }
    REQUIRE(synthetic == 20);  // 25 target - 5 originals
}

TEST_CASE("hybrid synthetic rows pass the kNN segment oracle") {
    Dataset ds = imbalanced_dataset(8, 72, 6);
    ds.tag_rows();
    SmoteConfig cfg;  // k=5, standardize on
    const auto out = hybrid_sample(ds, 13, cfg);

    std::vector<std::vector<double>> minority;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (ds.labels[i] == 1) minority.push_back(ds.rows[i]);
    std::vector<std::vector<double>> synthetic;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out.row_ids[i] == -1) synthetic.push_back(out.rows[i]);

    REQUIRE(!synthetic.empty());
    REQUIRE(all_on_knn_segments(synthetic, minority, cfg.k, cfg.standardize));
}
