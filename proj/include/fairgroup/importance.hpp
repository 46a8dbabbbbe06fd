#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairgroup/dataset.hpp"

namespace fairgroup {

// Feature-target correlations, rank-derived integer weights, per-point
// ranks, and the weighted ranks used as the clustering space. Rows are
// points, columns follow feature_names. All integer fields are exact:
// weights are a permutation of 1..N, each rank column a permutation of
// 1..n, and weighted[j][i] == weights[i] * ranks[j][i].
struct ImportanceMatrix {
    std::vector<std::string> feature_names;          // N unprotected features
    std::vector<double> correlations;                // signed, in [-1, 1]
    std::vector<std::int64_t> weights;               // permutation of 1..N
    std::vector<std::vector<std::int64_t>> ranks;    // n x N
    std::vector<std::vector<std::int64_t>> weighted; // n x N, weights * ranks

    std::size_t n() const { return ranks.size(); }
    std::size_t num_features() const { return feature_names.size(); }

    // Importance vector of point j as doubles (for distance computations).
    std::vector<double> vector_of(std::size_t j) const;
};

// Population-moment Pearson correlation; exactly 0 when either input has
// zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

// Smallest |corr| gets weight 1, largest gets N; ties break toward the
// earlier position.
std::vector<std::int64_t> weights_from_correlations(std::span<const double> corrs);

// Rank 1 goes to the largest value when positive_sign, to the smallest
// otherwise; ties break toward the lower point index.
std::vector<std::int64_t> rank_column(std::span<const double> x, bool positive_sign);

// Composes the three steps over every unprotected feature against the
// target. Zero correlation counts as positive sign for the rank direction.
ImportanceMatrix build_importance(const Dataset& d);

// Diagnostic summary: one row per feature (name, correlation, weight).
std::string importance_summary_csv(const ImportanceMatrix& m);

}  // namespace fairgroup
