#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairgroup/classifiers.hpp"
#include "fairgroup/config.hpp"
#include "fairgroup/dataset.hpp"
#include "fairgroup/fairgroups.hpp"
#include "fairgroup/importance.hpp"

namespace fairgroup {

enum class LabelSource : std::uint8_t { Individual, Representative, Propagated };

struct FairPrediction {
    std::vector<int> labels;
    std::vector<LabelSource> source;
    std::vector<std::int64_t> group_of;      // -1 outside any fairgroup
    std::vector<std::size_t> representatives;  // one point index per group
    std::uint64_t seed = 0;
};

struct FairnessReport {
    double accuracy = 0.0;                  // percent
    double protected_share_positive = 0.0;  // percent of predicted positives
    double positive_class_balance = 0.0;    // in [0, 1]
    bool alpha_fair_positive = false;
    bool alpha_fair_negative = false;
    double alpha = 0.0;
    bool degenerate = false;  // no predicted positives
    std::size_t positives = 0;
    std::size_t protected_positives = 0;

    bool operator==(const FairnessReport&) const = default;
};

// Classify one uniformly drawn representative per fairgroup with the
// model. A positive representative label propagates to the whole group; a
// negative one either propagates (two-sided) or sends the remaining
// members to individual classification (one-sided). Unmatched points are
// always classified individually.
FairPrediction fair_classify(const LinearModel& model, const Dataset& d,
                             const FairgroupPlan& plan, PropagationMode mode,
                             std::uint64_t seed);

FairnessReport evaluate(const std::vector<int>& pred, const std::vector<int>& truth,
                        const std::vector<std::uint8_t>& protected_flags, double alpha);

// Intermediate products of one run, for auditing and the inspect command.
struct ExperimentArtifacts {
    std::vector<std::size_t> test_rows;  // original dataset row per test point
    std::vector<std::uint8_t> protected_flags;
    std::vector<int> truth;
    std::vector<int> baseline_labels;
    ImportanceMatrix importance;
    Clustering clustering;
    FairgroupPlan plan;
    FairPrediction prediction;
};

struct ExperimentResult {
    FairnessReport baseline;
    FairnessReport fairgroup;
    BalanceRatio ratio;
    ModelKind kind = ModelKind::Logistic;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    std::size_t group_count = 0;
    std::size_t unmatched_count = 0;
    std::uint64_t hash = 0;
};

// Split, train, and evaluate the baseline and the fairgroup pipeline on
// the held-out points. Fully deterministic given the config.
ExperimentResult run_experiment(const Dataset& d, const ExperimentConfig& cfg,
                                ExperimentArtifacts* artifacts = nullptr);

// Seed-deterministic uniform split; returns sorted row indices.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_rows(
    std::size_t n, double train_fraction, std::uint64_t seed);

}  // namespace fairgroup
