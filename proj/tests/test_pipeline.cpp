#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "fairgroup/errors.hpp"
#include "fairgroup/pipeline.hpp"
#include "fairgroup/report.hpp"
#include "fairgroup/rng.hpp"
#include "fairgroup/synth.hpp"

using namespace fairgroup;

namespace {

// Sign model over one feature "x": score = x, positive label iff x >= 0.
LinearModel sign_model() {
    LinearModel m;
    m.kind = ModelKind::Svm;
    m.feature_names = {"x"};
    m.weights = {1.0};
    m.bias = 0.0;
    m.means = {0.0};
    m.scales = {1.0};
    return m;
}

Dataset x_dataset(std::vector<double> x, std::vector<double> prot,
                  std::vector<double> target) {
    std::vector<FeatureSpec> specs = {
        {"x", FeatureRole::Unprotected, FeatureKind::Numeric},
        {"prot", FeatureRole::Protected, FeatureKind::Binary},
        {"target", FeatureRole::Target, FeatureKind::Binary},
    };
    return Dataset(specs, {std::move(x), std::move(prot), std::move(target)});
}

Clustering trivial_clustering(std::size_t n) {
    Clustering c;
    c.k = 1;
    c.assignment.assign(n, 0);
    c.centers = {{0.0}};
    c.point_center_distance.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) c.point_center_distance[j] = static_cast<double>(j);
    return c;
}

ExperimentConfig small_synth_config() {
    ExperimentConfig cfg;
    cfg.synth_n = 1200;
    cfg.train.epochs = 200;
    cfg.k = 4;
    return cfg;
}

}  // namespace

TEST_CASE("a positive representative label propagates to the whole group") {
    // All five members score positive; whichever is drawn, the group goes
    // positive with representative/propagated provenance.
    const Dataset d = x_dataset({1, 2, 3, 4, 5}, {1, 1, 1, 1, 0}, {1, 1, 1, 1, 1});
    const FairgroupPlan plan =
        build_fairgroups(trivial_clustering(5), d.protected_flags(), BalanceRatio{4, 1});
    REQUIRE(plan.groups.size() == 1);

    const FairPrediction pred =
        fair_classify(sign_model(), d, plan, PropagationMode::TwoSided, 5);
    CHECK(pred.labels == std::vector<int>{1, 1, 1, 1, 1});
    std::size_t reps = 0, propagated = 0;
    for (std::size_t j = 0; j < 5; ++j) {
        reps += pred.source[j] == LabelSource::Representative;
        propagated += pred.source[j] == LabelSource::Propagated;
        CHECK(pred.group_of[j] == 0);
    }
    CHECK(reps == 1);
    CHECK(propagated == 4);
}

TEST_CASE("negative representative in two-sided mode turns the group negative") {
    // Every member scores negative.
    const Dataset d = x_dataset({-1, -2, -3, -4, -5}, {1, 1, 1, 1, 0}, {1, 1, 1, 1, 1});
    const FairgroupPlan plan =
        build_fairgroups(trivial_clustering(5), d.protected_flags(), BalanceRatio{4, 1});
    const FairPrediction pred =
        fair_classify(sign_model(), d, plan, PropagationMode::TwoSided, 5);
    CHECK(pred.labels == std::vector<int>{0, 0, 0, 0, 0});
}

TEST_CASE("negative representative in one-sided mode falls back to individual labels") {
    // Member at index 2 scores negative, the rest positive. Draw seeds
    // until the representative is index 2; the others must then keep their
    // own individual (positive) labels.
    const Dataset d = x_dataset({1, 2, -1, 4, 5}, {1, 1, 1, 1, 0}, {1, 1, 1, 1, 1});
    const FairgroupPlan plan =
        build_fairgroups(trivial_clustering(5), d.protected_flags(), BalanceRatio{4, 1});

    bool exercised = false;
    for (std::uint64_t seed = 0; seed < 64 && !exercised; ++seed) {
        const FairPrediction pred =
            fair_classify(sign_model(), d, plan, PropagationMode::OneSided, seed);
        if (pred.representatives[0] != 2) continue;
        exercised = true;
        CHECK(pred.labels == std::vector<int>{1, 1, 0, 1, 1});
        CHECK(pred.source[2] == LabelSource::Representative);
        for (std::size_t j : {0u, 1u, 3u, 4u}) {
            CHECK(pred.source[j] == LabelSource::Individual);
        }

        // Same draw in two-sided mode flips everyone instead.
        const FairPrediction two =
            fair_classify(sign_model(), d, plan, PropagationMode::TwoSided, seed);
        CHECK(two.labels == std::vector<int>{0, 0, 0, 0, 0});
    }
    CHECK(exercised);
}

TEST_CASE("unmatched points always get individual labels") {
    // 5 protected, 1 unprotected at 4:1 -> one group of 5, one unmatched
    // protected point with x < 0.
    const Dataset d = x_dataset({1, 2, 3, 4, -9, 5}, {1, 1, 1, 1, 1, 0}, {1, 1, 1, 1, 0, 1});
    const FairgroupPlan plan =
        build_fairgroups(trivial_clustering(6), d.protected_flags(), BalanceRatio{4, 1});
    REQUIRE(plan.unmatched == std::vector<std::size_t>{4});
    const FairPrediction pred =
        fair_classify(sign_model(), d, plan, PropagationMode::TwoSided, 1);
    CHECK(pred.labels[4] == 0);
    CHECK(pred.source[4] == LabelSource::Individual);
    CHECK(pred.group_of[4] == -1);
}

TEST_CASE("corrupt plans are rejected") {
    const Dataset d = x_dataset({1, 2}, {1, 0}, {1, 0});
    FairgroupPlan plan;
    plan.num_points = 2;
    plan.groups.push_back(Fairgroup{{0}, 1, 0, 0});
    // point 1 missing entirely
    CHECK_THROWS_AS(fair_classify(sign_model(), d, plan, PropagationMode::TwoSided, 1),
                    Error);

    plan.groups.push_back(Fairgroup{{}, 0, 0, 0});
    plan.unmatched = {1};
    CHECK_THROWS_AS(fair_classify(sign_model(), d, plan, PropagationMode::TwoSided, 1),
                    EmptyGroup);
}

TEST_CASE("evaluate on exact predictions") {
    const std::vector<int> truth = {1, 0, 1, 0};
    const std::vector<std::uint8_t> flags = {1, 0, 1, 0};
    const FairnessReport r = evaluate(truth, truth, flags, 0.25);
    CHECK(r.accuracy == 100.0);
    CHECK(r.degenerate == false);
}

TEST_CASE("evaluate computes share and balance from the positive class") {
    // Predicted positives: 4 protected + 1 unprotected.
    const std::vector<int> pred = {1, 1, 1, 1, 1, 0, 0};
    const std::vector<int> truth = {1, 1, 1, 1, 1, 0, 0};
    const std::vector<std::uint8_t> flags = {1, 1, 1, 1, 0, 1, 0};
    const FairnessReport r = evaluate(pred, truth, flags, 0.25);
    CHECK(r.protected_share_positive == 80.0);
    CHECK(r.positive_class_balance == 0.25);
    CHECK(r.alpha_fair_positive);
    CHECK(r.positives == 5);
    CHECK(r.protected_positives == 4);
}

TEST_CASE("evaluate flags degenerate all-negative predictions") {
    const std::vector<int> pred = {0, 0, 0};
    const std::vector<int> truth = {1, 0, 1};
    const std::vector<std::uint8_t> flags = {1, 0, 1};
    const FairnessReport r = evaluate(pred, truth, flags, 0.25);
    CHECK(r.degenerate);
    CHECK(r.protected_share_positive == 0.0);
    CHECK(r.positive_class_balance == 0.0);
    CHECK_FALSE(r.alpha_fair_positive);
}

TEST_CASE("evaluate validates inputs") {
    CHECK_THROWS_AS(evaluate({1}, {1, 0}, {1, 0}, 0.25), LengthMismatch);
    CHECK_THROWS_AS(evaluate({1}, {1}, {1}, 1.5), InvalidConfig);
}

TEST_CASE("zero unmatched two-sided runs pin the share at exactly 80") {
    // One cluster of 10 points: 8 protected, 2 unprotected, every point
    // scoring positive. Two groups, no unmatched; share must be exactly
    // 80.0 by integer arithmetic, not approximately.
    std::vector<double> x(10, 1.0), prot(10, 1.0), target(10, 1.0);
    prot[8] = prot[9] = 0.0;
    const Dataset d = x_dataset(x, prot, target);
    const FairgroupPlan plan =
        build_fairgroups(trivial_clustering(10), d.protected_flags(), BalanceRatio{4, 1});
    REQUIRE(plan.unmatched.empty());
    const FairPrediction pred =
        fair_classify(sign_model(), d, plan, PropagationMode::TwoSided, 3);
    const FairnessReport r = evaluate(pred.labels, d.labels(), d.protected_flags(), 0.25);
    CHECK(r.protected_share_positive == 80.0);
}

TEST_CASE("run_experiment is deterministic and internally consistent") {
    const ExperimentConfig cfg = small_synth_config();
    const Dataset d = synth_acs(cfg.synth_n, cfg.seed_synth, cfg.synth);
    const std::string before = to_csv(d);

    ExperimentArtifacts a;
    const ExperimentResult r1 = run_experiment(d, cfg, &a);
    const ExperimentResult r2 = run_experiment(d, cfg);

    CHECK(to_csv(d) == before);  // input left untouched
    CHECK(r1.baseline == r2.baseline);
    CHECK(r1.fairgroup == r2.fairgroup);
    CHECK(r1.hash == r2.hash);

    // Baseline report is definitionally evaluate(predict(model, test)).
    const FairnessReport baseline_again =
        evaluate(a.baseline_labels, a.truth, a.protected_flags, cfg.alpha);
    CHECK(r1.baseline == baseline_again);

    // The plan partitions the test set and representatives carry the
    // model's own labels.
    verify_partition(a.plan);
    CHECK(a.plan.num_points == r1.test_size);
    for (std::size_t g = 0; g < a.plan.groups.size(); ++g) {
        const std::size_t rep = a.prediction.representatives[g];
        CHECK(a.prediction.labels[rep] == a.baseline_labels[rep]);
        const bool member = std::find(a.plan.groups[g].members.begin(),
                                      a.plan.groups[g].members.end(),
                                      rep) != a.plan.groups[g].members.end();
        CHECK(member);
    }

    // Propagated-positive groups contribute members at exactly p:q.
    for (std::size_t g = 0; g < a.plan.groups.size(); ++g) {
        const std::size_t rep = a.prediction.representatives[g];
        if (a.prediction.labels[rep] != 1) continue;
        std::size_t prot = 0, pos = 0;
        for (std::size_t j : a.plan.groups[g].members) {
            CHECK(a.prediction.labels[j] == 1);
            ++pos;
            prot += a.protected_flags[j];
        }
        CHECK(prot == static_cast<std::size_t>(r1.ratio.p));
        CHECK(pos == static_cast<std::size_t>(r1.ratio.p + r1.ratio.q));
    }
}

TEST_CASE("run_experiment resolves protected features both ways") {
    const ExperimentConfig base = small_synth_config();
    const Dataset d = synth_acs(600, 9, base.synth);

    SUBCASE("numeric feature with threshold") {
        ExperimentConfig cfg = base;
        cfg.synth_n = 600;
        const ExperimentResult r = run_experiment(d, cfg);
        CHECK(r.test_size > 0);
    }
    SUBCASE("binary feature without threshold") {
        ExperimentConfig cfg = base;
        cfg.synth_n = 600;
        cfg.protected_feature = "ambulatory_difficulty";
        cfg.threshold.reset();
        const ExperimentResult r = run_experiment(d, cfg);
        CHECK(r.test_size > 0);
    }
    SUBCASE("unknown feature") {
        ExperimentConfig cfg = base;
        cfg.protected_feature = "wealth";
        CHECK_THROWS_AS(run_experiment(d, cfg), UnknownFeature);
    }
}

TEST_CASE("split is deterministic, disjoint, and sized by the fraction") {
    const auto [train, test] = split_rows(100, 0.8, 42);
    CHECK(train.size() == 80);
    CHECK(test.size() == 20);
    std::vector<std::size_t> all;
    all.insert(all.end(), train.begin(), train.end());
    all.insert(all.end(), test.begin(), test.end());
    std::sort(all.begin(), all.end());
    for (std::size_t j = 0; j < 100; ++j) CHECK(all[j] == j);

    const auto [train2, test2] = split_rows(100, 0.8, 42);
    CHECK(train == train2);
    const auto [train3, test3] = split_rows(100, 0.8, 43);
    CHECK(train != train3);
}

TEST_CASE("machine report rendering is stable and self-consistent") {
    const ExperimentConfig cfg = small_synth_config();
    const Dataset d = synth_acs(cfg.synth_n, cfg.seed_synth, cfg.synth);
    const ExperimentResult r = run_experiment(d, cfg);

    const std::string machine = render_report_machine(r, cfg);
    CHECK(machine == render_report_machine(r, cfg));
    CHECK(machine.find("fairgroup-report v1") == 0);
    CHECK(machine.find("\nbaseline ") != std::string::npos);
    CHECK(machine.find("\nfairgroup ") != std::string::npos);

    const std::string text = render_report_text(r, cfg);
    CHECK(text.find("Method") != std::string::npos);
    CHECK(text.find("+ fairgroup") != std::string::npos);
}

TEST_CASE("config text round-trips") {
    ExperimentConfig cfg = small_synth_config();
    cfg.ratio_protected = 8;
    cfg.ratio_unprotected = 2;
    cfg.mode = PropagationMode::OneSided;
    cfg.threshold = 12345.5;
    const std::string text = config_text(cfg);
    const ExperimentConfig parsed = parse_config_text(text);
    CHECK(config_text(parsed) == text);
    CHECK(config_hash(parsed) == config_hash(cfg));

    // 8:2 is echoed in reduced form.
    CHECK(text.find("ratio = 4:1") != std::string::npos);
}

TEST_CASE("config parsing rejects unknown keys and bad values") {
    CHECK_THROWS_AS(parse_config_text("nonsense = 1\n"), InvalidConfig);
    CHECK_THROWS_AS(parse_config_text("k = -3\n"), InvalidConfig);
    CHECK_THROWS_AS(parse_config_text("ratio = 41\n"), InvalidConfig);
    CHECK_THROWS_AS(parse_config_text("mode = sideways\n"), InvalidConfig);
    CHECK_THROWS_AS(parse_config_text("alpha\n"), InvalidConfig);

    ExperimentConfig cfg;
    cfg.k = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
    cfg = ExperimentConfig{};
    cfg.split_fraction = 1.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
    cfg = ExperimentConfig{};
    cfg.alpha = -0.1;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
}
