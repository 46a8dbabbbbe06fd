#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairgroup/importance.hpp"

namespace fairgroup {

struct Clustering {
    std::size_t k = 0;
    std::vector<int> assignment;                 // n entries in {0..k-1}
    std::vector<std::vector<double>> centers;    // k centers of dimension N
    double cost = 0.0;                           // total L1 distance to assigned centers
    int iterations = 0;
    std::vector<double> cost_history;            // cost after each Lloyd iteration
    std::vector<double> point_center_distance;   // per point, L1 to its center
};

double l1_distance(std::span<const double> p, std::span<const double> q);

// Lloyd-style alternation under L1: nearest-center assignment (ties to the
// lowest center id) and coordinate-wise median updates (even-sized sets
// take the lower middle, keeping centers on realized values). Seeded by a
// distance-weighted k-means++-style init; a cluster that empties is
// reseeded with the point farthest from its current center. Deterministic
// for fixed (points, k, seed).
Clustering kmedians_points(const std::vector<std::vector<double>>& points, std::size_t k,
                           std::uint64_t seed, int max_iters = 100);

Clustering kmedians(const ImportanceMatrix& m, std::size_t k, std::uint64_t seed,
                    int max_iters = 100);

// One assignment pass against fixed centers; used to verify fixed points.
std::vector<int> assign_to_centers(const std::vector<std::vector<double>>& points,
                                   const std::vector<std::vector<double>>& centers);

std::string clustering_csv(const Clustering& c);

}  // namespace fairgroup
