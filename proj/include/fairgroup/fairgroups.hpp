#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairgroup/clustering.hpp"

namespace fairgroup {

// Target balance expressed as a co-prime pair: every fairgroup holds
// exactly p protected and q unprotected members.
struct BalanceRatio {
    std::int64_t p = 1;
    std::int64_t q = 1;

    double as_number() const { return static_cast<double>(p) / static_cast<double>(q); }
    bool operator==(const BalanceRatio&) const = default;
};

BalanceRatio reduce_ratio(std::int64_t a, std::int64_t b);

struct Fairgroup {
    std::vector<std::size_t> members;
    std::size_t protected_count = 0;
    std::size_t unprotected_count = 0;
    int cluster_id = 0;
};

struct FairgroupPlan {
    BalanceRatio ratio;
    std::vector<Fairgroup> groups;
    std::vector<std::size_t> unmatched;
    std::size_t num_points = 0;
};

// Greedy per-cluster matching: each cluster contributes
// min(floor(P/p), floor(U/q)) groups, the analytic maximum for a fixed
// ratio, with members taken in ascending distance to the cluster center
// (ties by point index). Leftovers land in unmatched.
FairgroupPlan build_fairgroups(const Clustering& clustering,
                               const std::vector<std::uint8_t>& protected_flags,
                               const BalanceRatio& ratio);

// Balance of the protected feature over all matched points.
double plan_balance(const FairgroupPlan& plan, const std::vector<std::uint8_t>& flags);

// Throws if the plan does not partition 0..num_points-1.
void verify_partition(const FairgroupPlan& plan);

std::string plan_csv(const FairgroupPlan& plan, const Clustering& clustering,
                     const std::vector<std::uint8_t>& flags);

}  // namespace fairgroup
