#include "fairgroup/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fairgroup/errors.hpp"
#include "fairgroup/textio.hpp"

namespace fairgroup {

std::vector<double> ImportanceMatrix::vector_of(std::size_t j) const {
    std::vector<double> out(weighted[j].size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<double>(weighted[j][i]);
    }
    return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw LengthMismatch("pearson: input lengths differ");
    if (x.size() < 2) throw TooFewPoints("pearson needs at least 2 points");
    const double n = static_cast<double>(x.size());

    double sum_x = 0.0, sum_y = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        sum_x += x[j];
        sum_y += y[j];
    }
    const double mean_x = sum_x / n;
    const double mean_y = sum_y / n;

    double cov = 0.0, var_x = 0.0, var_y = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double dx = x[j] - mean_x;
        const double dy = y[j] - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x <= 0.0 || var_y <= 0.0) return 0.0;
    return (cov / n) / std::sqrt((var_x / n) * (var_y / n));
}

std::vector<std::int64_t> weights_from_correlations(std::span<const double> corrs) {
    const std::size_t n = corrs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double fa = std::abs(corrs[a]);
        const double fb = std::abs(corrs[b]);
        if (fa != fb) return fa < fb;
        return a < b;
    });
    std::vector<std::int64_t> weights(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        weights[order[pos]] = static_cast<std::int64_t>(pos) + 1;
    }
    return weights;
}

std::vector<std::int64_t> rank_column(std::span<const double> x, bool positive_sign) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return positive_sign ? x[a] > x[b] : x[a] < x[b];
        return a < b;
    });
    std::vector<std::int64_t> ranks(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        ranks[order[pos]] = static_cast<std::int64_t>(pos) + 1;
    }
    return ranks;
}

ImportanceMatrix build_importance(const Dataset& d) {
    const auto feature_idx = d.unprotected_indices();
    if (feature_idx.empty()) throw Error("no unprotected features");

    const auto& target = d.column(d.target_index());

    ImportanceMatrix m;
    const std::size_t big_n = d.n();
    const std::size_t num = feature_idx.size();
    m.ranks.assign(big_n, std::vector<std::int64_t>(num));
    m.weighted.assign(big_n, std::vector<std::int64_t>(num));

    for (std::size_t i = 0; i < num; ++i) {
        const auto& col = d.column(feature_idx[i]);
        m.feature_names.push_back(d.spec(feature_idx[i]).name);
        m.correlations.push_back(pearson(col, target));
    }
    m.weights = weights_from_correlations(m.correlations);

    for (std::size_t i = 0; i < num; ++i) {
        const auto column_ranks =
            rank_column(d.column(feature_idx[i]), m.correlations[i] >= 0.0);
        for (std::size_t j = 0; j < big_n; ++j) {
            m.ranks[j][i] = column_ranks[j];
            m.weighted[j][i] = m.weights[i] * column_ranks[j];
        }
    }
    return m;
}

std::string importance_summary_csv(const ImportanceMatrix& m) {
    std::string out = "feature,correlation,weight\n";
    for (std::size_t i = 0; i < m.num_features(); ++i) {
        out += m.feature_names[i] + "," + fmt_double(m.correlations[i]) + "," +
               std::to_string(m.weights[i]) + "\n";
    }
    return out;
}

}  // namespace fairgroup
