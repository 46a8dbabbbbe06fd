#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "fairgroup/errors.hpp"
#include "fairgroup/fairgroups.hpp"
#include "fairgroup/rng.hpp"
#include "support/oracles.hpp"

using namespace fairgroup;

namespace {

// A clustering where assignment/distances are handed in directly, so
// matching behavior can be pinned without running k-medians.
Clustering fixed_clustering(std::vector<int> assignment, std::size_t k) {
    Clustering c;
    c.k = k;
    c.assignment = std::move(assignment);
    c.point_center_distance.assign(c.assignment.size(), 0.0);
    c.centers.assign(k, {0.0});
    for (std::size_t j = 0; j < c.assignment.size(); ++j) {
        // Distances grow with the index so "closest first" equals index order.
        c.point_center_distance[j] = static_cast<double>(j);
    }
    return c;
}

std::vector<std::uint8_t> flags_with(std::size_t n, std::initializer_list<std::size_t> ones) {
    std::vector<std::uint8_t> flags(n, 0);
    for (std::size_t j : ones) flags[j] = 1;
    return flags;
}

}  // namespace

TEST_CASE("reduce_ratio to co-prime parts") {
    CHECK(reduce_ratio(8, 2) == BalanceRatio{4, 1});
    CHECK(reduce_ratio(6, 4) == BalanceRatio{3, 2});
    CHECK(reduce_ratio(1, 1) == BalanceRatio{1, 1});
    CHECK(reduce_ratio(7, 3) == BalanceRatio{7, 3});
    CHECK_THROWS_AS(reduce_ratio(5, 0), ZeroPart);
    CHECK_THROWS_AS(reduce_ratio(0, 5), ZeroPart);
    CHECK(reduce_ratio(8, 2).as_number() == 4.0);
}

TEST_CASE("one cluster, 8 protected + 2 unprotected at 4:1") {
    const std::size_t n = 10;
    std::vector<std::uint8_t> flags(n, 1);
    flags[8] = 0;
    flags[9] = 0;
    const Clustering c = fixed_clustering(std::vector<int>(n, 0), 1);
    const FairgroupPlan plan = build_fairgroups(c, flags, BalanceRatio{4, 1});

    REQUIRE(plan.groups.size() == 2);
    CHECK(plan.unmatched.empty());
    for (const Fairgroup& g : plan.groups) {
        CHECK(g.protected_count == 4);
        CHECK(g.unprotected_count == 1);
        CHECK(g.members.size() == 5);
        std::size_t prot = 0;
        for (std::size_t j : g.members) prot += flags[j];
        CHECK(prot == 4);  // protected share per group is exactly 80%
    }
}

TEST_CASE("no partners means no groups") {
    const Clustering c = fixed_clustering(std::vector<int>(4, 0), 1);
    const std::vector<std::uint8_t> flags(4, 1);
    const FairgroupPlan plan = build_fairgroups(c, flags, BalanceRatio{4, 1});
    CHECK(plan.groups.empty());
    CHECK(plan.unmatched.size() == 4);
}

TEST_CASE("9 protected + 2 unprotected at 4:1 leaves one unmatched") {
    const std::size_t n = 11;
    std::vector<std::uint8_t> flags(n, 1);
    flags[9] = 0;
    flags[10] = 0;
    const Clustering c = fixed_clustering(std::vector<int>(n, 0), 1);
    const FairgroupPlan plan = build_fairgroups(c, flags, BalanceRatio{4, 1});
    CHECK(plan.groups.size() == 2);
    CHECK(plan.unmatched.size() == 1);
    CHECK(flags[plan.unmatched[0]] == 1);
    CHECK(oracles::max_groups_exhaustive(9, 2, 4, 1) == 2);
}

TEST_CASE("members are taken closest to the center first") {
    // Two protected (indices 3, 1) and two unprotected (2, 0) in one
    // cluster; distances equal the indices, ratio 1:1 pairs (1,0) and
    // leaves the farther pair matched second.
    const Clustering c = fixed_clustering({0, 0, 0, 0}, 1);
    const auto flags = flags_with(4, {1, 3});
    const FairgroupPlan plan = build_fairgroups(c, flags, BalanceRatio{1, 1});
    REQUIRE(plan.groups.size() == 2);
    CHECK(plan.groups[0].members == std::vector<std::size_t>{1, 0});
    CHECK(plan.groups[1].members == std::vector<std::size_t>{3, 2});
}

TEST_CASE("matching never crosses cluster boundaries") {
    // Cluster 0 holds only protected, cluster 1 only unprotected: nothing
    // can match even though the global pool is balanced.
    const Clustering c = fixed_clustering({0, 0, 1, 1}, 2);
    const auto flags = flags_with(4, {0, 1});
    const FairgroupPlan plan = build_fairgroups(c, flags, BalanceRatio{1, 1});
    CHECK(plan.groups.empty());
    CHECK(plan.unmatched.size() == 4);
}

TEST_CASE("plan balance over matched points") {
    const std::size_t n = 10;
    std::vector<std::uint8_t> flags(n, 1);
    flags[8] = 0;
    flags[9] = 0;
    const Clustering c = fixed_clustering(std::vector<int>(n, 0), 1);
    const FairgroupPlan plan = build_fairgroups(c, flags, BalanceRatio{4, 1});
    CHECK(plan_balance(plan, flags) == 0.25);  // min(8/2, 2/8)

    SUBCASE("all matched points protected gives balance 0") {
        FairgroupPlan degenerate = plan;
        degenerate.groups.resize(1);
        degenerate.groups[0].members = {0, 1, 2};
        CHECK(plan_balance(degenerate, flags) == 0.0);
    }
    SUBCASE("equal counts give balance 1") {
        const Clustering c2 = fixed_clustering(std::vector<int>(4, 0), 1);
        const auto flags2 = flags_with(4, {0, 1});
        const FairgroupPlan plan2 = build_fairgroups(c2, flags2, BalanceRatio{1, 1});
        CHECK(plan_balance(plan2, flags2) == 1.0);
    }
    SUBCASE("empty plan throws") {
        FairgroupPlan empty;
        empty.num_points = n;
        CHECK_THROWS_AS(plan_balance(empty, flags), EmptyPlan);
    }
}

TEST_CASE("flag length mismatches are rejected") {
    const Clustering c = fixed_clustering({0, 0}, 1);
    CHECK_THROWS_AS(build_fairgroups(c, std::vector<std::uint8_t>{1}, BalanceRatio{1, 1}),
                    LengthMismatch);
}

TEST_CASE("randomized instances: exact composition, maximal count, partition") {
    Rng rng(246);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t k = 1 + rng.uniform_int(4);
        const std::size_t n = k + rng.uniform_int(40);
        std::vector<int> assignment(n);
        std::vector<std::uint8_t> flags(n);
        for (std::size_t j = 0; j < n; ++j) {
            assignment[j] = static_cast<int>(rng.uniform_int(k));
            flags[j] = rng.bernoulli(0.5) ? 1 : 0;
        }
        const std::int64_t p = static_cast<std::int64_t>(1 + rng.uniform_int(4));
        const std::int64_t q = static_cast<std::int64_t>(1 + rng.uniform_int(3));
        const BalanceRatio ratio = reduce_ratio(p, q);

        const Clustering c = fixed_clustering(assignment, k);
        const FairgroupPlan plan = build_fairgroups(c, flags, ratio);

        verify_partition(plan);
        for (const Fairgroup& g : plan.groups) {
            std::size_t prot = 0;
            for (std::size_t j : g.members) {
                prot += flags[j];
                CHECK(assignment[j] == g.cluster_id);
            }
            CHECK(prot == static_cast<std::size_t>(ratio.p));
            CHECK(g.members.size() == static_cast<std::size_t>(ratio.p + ratio.q));
        }

        // Per-cluster count matches the exhaustive maximum.
        for (std::size_t cluster = 0; cluster < k; ++cluster) {
            std::size_t P = 0, U = 0, groups = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (static_cast<std::size_t>(assignment[j]) != cluster) continue;
                (flags[j] ? P : U) += 1;
            }
            for (const Fairgroup& g : plan.groups) {
                groups += g.cluster_id == static_cast<int>(cluster);
            }
            CHECK(groups == oracles::max_groups_exhaustive(
                                P, U, static_cast<std::size_t>(ratio.p),
                                static_cast<std::size_t>(ratio.q)));
        }
    }
}

TEST_CASE("plans are deterministic") {
    Rng rng(8080);
    const std::size_t n = 30;
    std::vector<int> assignment(n);
    std::vector<std::uint8_t> flags(n);
    for (std::size_t j = 0; j < n; ++j) {
        assignment[j] = static_cast<int>(rng.uniform_int(3));
        flags[j] = rng.bernoulli(0.6) ? 1 : 0;
    }
    const Clustering c = fixed_clustering(assignment, 3);
    const FairgroupPlan a = build_fairgroups(c, flags, BalanceRatio{4, 1});
    const FairgroupPlan b = build_fairgroups(c, flags, BalanceRatio{4, 1});
    REQUIRE(a.groups.size() == b.groups.size());
    for (std::size_t g = 0; g < a.groups.size(); ++g) {
        CHECK(a.groups[g].members == b.groups[g].members);
    }
    CHECK(a.unmatched == b.unmatched);
}

TEST_CASE("plan csv carries cluster, group, and flag per point") {
    const Clustering c = fixed_clustering({0, 0, 0, 0, 0}, 1);
    const auto flags = flags_with(5, {0, 1, 2, 3});
    const FairgroupPlan plan = build_fairgroups(c, flags, BalanceRatio{4, 1});
    const std::string csv = plan_csv(plan, c, flags);
    CHECK(csv.rfind("point,cluster,fairgroup,protected\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    CHECK(csv.find("unmatched") == std::string::npos);  // all five matched
}
