#include "fairgroup/fairgroups.hpp"

#include <algorithm>
#include <numeric>

#include "fairgroup/errors.hpp"

namespace fairgroup {

BalanceRatio reduce_ratio(std::int64_t a, std::int64_t b) {
    if (a < 1 || b < 1) throw ZeroPart("ratio parts must be positive");
    const std::int64_t g = std::gcd(a, b);
    return BalanceRatio{a / g, b / g};
}

FairgroupPlan build_fairgroups(const Clustering& clustering,
                               const std::vector<std::uint8_t>& protected_flags,
                               const BalanceRatio& ratio) {
    const std::size_t n = clustering.assignment.size();
    if (protected_flags.size() != n) {
        throw LengthMismatch("protected flags length != point count");
    }
    if (ratio.p < 1 || ratio.q < 1) throw ZeroPart("ratio parts must be positive");

    FairgroupPlan plan;
    plan.ratio = ratio;
    plan.num_points = n;

    // Points per cluster in ascending (distance to center, index) order.
    std::vector<std::vector<std::size_t>> by_cluster(clustering.k);
    for (std::size_t j = 0; j < n; ++j) {
        by_cluster[clustering.assignment[j]].push_back(j);
    }
    for (auto& members : by_cluster) {
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            const double da = clustering.point_center_distance[a];
            const double db = clustering.point_center_distance[b];
            if (da != db) return da < db;
            return a < b;
        });
    }

    const std::size_t p = static_cast<std::size_t>(ratio.p);
    const std::size_t q = static_cast<std::size_t>(ratio.q);
    for (std::size_t c = 0; c < by_cluster.size(); ++c) {
        std::vector<std::size_t> prot, unprot;
        for (std::size_t j : by_cluster[c]) {
            (protected_flags[j] ? prot : unprot).push_back(j);
        }
        const std::size_t group_count = std::min(prot.size() / p, unprot.size() / q);
        for (std::size_t g = 0; g < group_count; ++g) {
            Fairgroup group;
            group.cluster_id = static_cast<int>(c);
            group.protected_count = p;
            group.unprotected_count = q;
            for (std::size_t t = 0; t < p; ++t) group.members.push_back(prot[g * p + t]);
            for (std::size_t t = 0; t < q; ++t) group.members.push_back(unprot[g * q + t]);
            plan.groups.push_back(std::move(group));
        }
        for (std::size_t j = group_count * p; j < prot.size(); ++j) {
            plan.unmatched.push_back(prot[j]);
        }
        for (std::size_t j = group_count * q; j < unprot.size(); ++j) {
            plan.unmatched.push_back(unprot[j]);
        }
    }
    std::sort(plan.unmatched.begin(), plan.unmatched.end());
    return plan;
}

double plan_balance(const FairgroupPlan& plan, const std::vector<std::uint8_t>& flags) {
    if (flags.size() != plan.num_points) {
        throw LengthMismatch("protected flags length != plan point count");
    }
    std::size_t zeros = 0, ones = 0;
    for (const Fairgroup& g : plan.groups) {
        for (std::size_t j : g.members) (flags[j] ? ones : zeros) += 1;
    }
    if (zeros + ones == 0) throw EmptyPlan("plan has no matched points");
    if (zeros == 0 || ones == 0) return 0.0;
    return std::min(static_cast<double>(zeros) / static_cast<double>(ones),
                    static_cast<double>(ones) / static_cast<double>(zeros));
}

void verify_partition(const FairgroupPlan& plan) {
    std::vector<std::uint8_t> seen(plan.num_points, 0);
    std::size_t total = 0;
    auto visit = [&](std::size_t j) {
        if (j >= plan.num_points || seen[j]) {
            throw Error("plan is not a partition: point " + std::to_string(j));
        }
        seen[j] = 1;
        ++total;
    };
    for (const Fairgroup& g : plan.groups) {
        if (g.members.empty()) throw EmptyGroup("plan contains an empty fairgroup");
        for (std::size_t j : g.members) visit(j);
    }
    for (std::size_t j : plan.unmatched) visit(j);
    if (total != plan.num_points) {
        throw Error("plan is not exhaustive: covered " + std::to_string(total) + " of " +
                    std::to_string(plan.num_points));
    }
}

std::string plan_csv(const FairgroupPlan& plan, const Clustering& clustering,
                     const std::vector<std::uint8_t>& flags) {
    std::vector<std::int64_t> group_of(plan.num_points, -1);
    for (std::size_t g = 0; g < plan.groups.size(); ++g) {
        for (std::size_t j : plan.groups[g].members) {
            group_of[j] = static_cast<std::int64_t>(g);
        }
    }
    std::string out = "point,cluster,fairgroup,protected\n";
    for (std::size_t j = 0; j < plan.num_points; ++j) {
        out += std::to_string(j) + "," + std::to_string(clustering.assignment[j]) + ",";
        out += group_of[j] < 0 ? std::string("unmatched") : std::to_string(group_of[j]);
        out += "," + std::to_string(static_cast<int>(flags[j])) + "\n";
    }
    return out;
}

}  // namespace fairgroup
