#include "fairgroup/clustering.hpp"

#include <algorithm>
#include <limits>

#include "fairgroup/errors.hpp"
#include "fairgroup/rng.hpp"

namespace fairgroup {

namespace {

// Lower middle for even sizes, so centers stay on realized coordinates.
double lower_median(std::vector<double> values) {
    const std::size_t mid = (values.size() - 1) / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid),
                     values.end());
    return values[mid];
}

std::vector<std::vector<double>> seed_centers(const std::vector<std::vector<double>>& points,
                                              std::size_t k, Rng& rng) {
    const std::size_t n = points.size();
    std::vector<std::vector<double>> centers;
    centers.reserve(k);
    std::vector<bool> chosen(n, false);

    std::size_t first = rng.uniform_int(n);
    centers.push_back(points[first]);
    chosen[first] = true;

    std::vector<double> nearest(n);
    while (centers.size() < k) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, l1_distance(points[j], c));
            nearest[j] = best;
            total += best;
        }
        std::size_t pick = n;
        if (total > 0.0) {
            double target = rng.uniform01() * total;
            for (std::size_t j = 0; j < n; ++j) {
                target -= nearest[j];
                if (target <= 0.0) {
                    pick = j;
                    break;
                }
            }
            if (pick == n) {  // numeric tail; fall through to the last positive mass
                for (std::size_t j = n; j-- > 0;) {
                    if (nearest[j] > 0.0) {
                        pick = j;
                        break;
                    }
                }
            }
        }
        if (pick == n) {  // every remaining point coincides with a center
            for (std::size_t j = 0; j < n; ++j) {
                if (!chosen[j]) {
                    pick = j;
                    break;
                }
            }
        }
        centers.push_back(points[pick]);
        chosen[pick] = true;
    }
    return centers;
}

}  // namespace

double l1_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw LengthMismatch("l1_distance: dimension mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) total += std::abs(p[i] - q[i]);
    return total;
}

std::vector<int> assign_to_centers(const std::vector<std::vector<double>>& points,
                                   const std::vector<std::vector<double>>& centers) {
    std::vector<int> assignment(points.size(), 0);
    for (std::size_t j = 0; j < points.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        int best_id = 0;
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const double dist = l1_distance(points[j], centers[c]);
            if (dist < best) {  // ties keep the lowest center id
                best = dist;
                best_id = static_cast<int>(c);
            }
        }
        assignment[j] = best_id;
    }
    return assignment;
}

Clustering kmedians_points(const std::vector<std::vector<double>>& points, std::size_t k,
                           std::uint64_t seed, int max_iters) {
    const std::size_t n = points.size();
    if (k < 1 || k > n) {
        throw BadK("k must lie in [1, " + std::to_string(n) + "], got " + std::to_string(k));
    }
    const std::size_t dim = points.front().size();

    Rng rng(seed);
    Clustering result;
    result.k = k;
    result.centers = seed_centers(points, k, rng);
    result.assignment = assign_to_centers(points, result.centers);

    auto total_cost = [&](const std::vector<int>& assignment,
                          const std::vector<std::vector<double>>& centers) {
        double cost = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            cost += l1_distance(points[j], centers[assignment[j]]);
        }
        return cost;
    };

    for (int iter = 0; iter < max_iters; ++iter) {
        // Update step: coordinate-wise medians of the current members.
        std::vector<std::vector<std::size_t>> members(k);
        for (std::size_t j = 0; j < n; ++j) {
            members[result.assignment[j]].push_back(j);
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (members[c].empty()) {
                // Reseed an emptied cluster with the point farthest from
                // its current center.
                std::size_t farthest = 0;
                double best = -1.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double dist = l1_distance(points[j], result.centers[c]);
                    if (dist > best) {
                        best = dist;
                        farthest = j;
                    }
                }
                result.centers[c] = points[farthest];
                continue;
            }
            std::vector<double> coordinate(members[c].size());
            for (std::size_t i = 0; i < dim; ++i) {
                for (std::size_t t = 0; t < members[c].size(); ++t) {
                    coordinate[t] = points[members[c][t]][i];
                }
                result.centers[c][i] = lower_median(coordinate);
            }
        }

        const std::vector<int> next = assign_to_centers(points, result.centers);
        result.iterations = iter + 1;
        const bool converged = next == result.assignment;
        result.assignment = next;
        result.cost_history.push_back(total_cost(result.assignment, result.centers));
        if (converged) break;
    }

    result.cost = result.cost_history.back();
    result.point_center_distance.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        result.point_center_distance[j] =
            l1_distance(points[j], result.centers[result.assignment[j]]);
    }
    return result;
}

Clustering kmedians(const ImportanceMatrix& m, std::size_t k, std::uint64_t seed,
                    int max_iters) {
    std::vector<std::vector<double>> points;
    points.reserve(m.n());
    for (std::size_t j = 0; j < m.n(); ++j) points.push_back(m.vector_of(j));
    return kmedians_points(points, k, seed, max_iters);
}

std::string clustering_csv(const Clustering& c) {
    std::string out = "point,cluster\n";
    for (std::size_t j = 0; j < c.assignment.size(); ++j) {
        out += std::to_string(j) + "," + std::to_string(c.assignment[j]) + "\n";
    }
    return out;
}

}  // namespace fairgroup
