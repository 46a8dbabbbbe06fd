#include "fairgroup/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "fairgroup/clustering.hpp"
#include "fairgroup/errors.hpp"
#include "fairgroup/rng.hpp"

namespace fairgroup {

FairPrediction fair_classify(const LinearModel& model, const Dataset& d,
                             const FairgroupPlan& plan, PropagationMode mode,
                             std::uint64_t seed) {
    if (plan.num_points != d.n()) {
        throw LengthMismatch("plan covers " + std::to_string(plan.num_points) +
                             " points, dataset has " + std::to_string(d.n()));
    }
    verify_partition(plan);

    const std::vector<int> individual = predict(model, d);

    FairPrediction out;
    out.seed = seed;
    out.labels.assign(d.n(), 0);
    out.source.assign(d.n(), LabelSource::Individual);
    out.group_of.assign(d.n(), -1);
    out.representatives.reserve(plan.groups.size());

    Rng rng(seed);
    for (std::size_t g = 0; g < plan.groups.size(); ++g) {
        const Fairgroup& group = plan.groups[g];
        if (group.members.empty()) throw EmptyGroup("fairgroup " + std::to_string(g));
        const std::size_t rep =
            group.members[rng.uniform_int(group.members.size())];
        out.representatives.push_back(rep);
        const int rep_label = individual[rep];

        for (std::size_t j : group.members) out.group_of[j] = static_cast<std::int64_t>(g);
        out.labels[rep] = rep_label;
        out.source[rep] = LabelSource::Representative;

        for (std::size_t j : group.members) {
            if (j == rep) continue;
            if (rep_label == 1 || mode == PropagationMode::TwoSided) {
                out.labels[j] = rep_label;
                out.source[j] = LabelSource::Propagated;
            } else {
                out.labels[j] = individual[j];
                out.source[j] = LabelSource::Individual;
            }
        }
    }
    for (std::size_t j : plan.unmatched) {
        out.labels[j] = individual[j];
        out.source[j] = LabelSource::Individual;
    }
    return out;
}

FairnessReport evaluate(const std::vector<int>& pred, const std::vector<int>& truth,
                        const std::vector<std::uint8_t>& protected_flags, double alpha) {
    const std::size_t n = pred.size();
    if (truth.size() != n || protected_flags.size() != n) {
        throw LengthMismatch("evaluate: input lengths differ");
    }
    if (n == 0) throw LengthMismatch("evaluate: empty inputs");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidConfig("alpha must lie in [0, 1]");

    FairnessReport r;
    r.alpha = alpha;

    std::size_t correct = 0;
    std::size_t pos_protected = 0, pos_unprotected = 0;
    std::size_t neg_protected = 0, neg_unprotected = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (pred[j] == truth[j]) ++correct;
        if (pred[j] == 1) {
            (protected_flags[j] ? pos_protected : pos_unprotected) += 1;
        } else {
            (protected_flags[j] ? neg_protected : neg_unprotected) += 1;
        }
    }
    r.accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(n);
    r.positives = pos_protected + pos_unprotected;
    r.protected_positives = pos_protected;
    r.degenerate = r.positives == 0;

    auto balance = [](std::size_t zeros, std::size_t ones) {
        if (zeros == 0 || ones == 0) return 0.0;
        return std::min(static_cast<double>(zeros) / static_cast<double>(ones),
                        static_cast<double>(ones) / static_cast<double>(zeros));
    };
    r.protected_share_positive =
        r.positives == 0 ? 0.0
                         : 100.0 * static_cast<double>(pos_protected) /
                               static_cast<double>(r.positives);
    r.positive_class_balance = balance(pos_unprotected, pos_protected);
    r.alpha_fair_positive = r.positive_class_balance >= alpha;
    r.alpha_fair_negative = balance(neg_unprotected, neg_protected) >= alpha;
    return r;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_rows(
    std::size_t n, double train_fraction, std::uint64_t seed) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), 0);
    Rng rng(seed);
    for (std::size_t j = n; j-- > 1;) {
        std::swap(rows[j], rows[rng.uniform_int(j + 1)]);
    }
    const auto train_size =
        static_cast<std::size_t>(train_fraction * static_cast<double>(n));
    std::vector<std::size_t> train(rows.begin(), rows.begin() + train_size);
    std::vector<std::size_t> test(rows.begin() + train_size, rows.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {std::move(train), std::move(test)};
}

ExperimentResult run_experiment(const Dataset& d, const ExperimentConfig& cfg,
                                ExperimentArtifacts* artifacts) {
    cfg.validate();

    // Resolve the protected feature: binarize numerics at the configured
    // threshold, adopt 0/1 columns as they are.
    Dataset prepared = [&] {
        auto idx = d.find(cfg.protected_feature);
        if (!idx) throw UnknownFeature(cfg.protected_feature);
        if (d.spec(*idx).role == FeatureRole::Protected) return d;
        if (d.spec(*idx).kind == FeatureKind::Numeric && cfg.threshold) {
            return binarize_protected(d, cfg.protected_feature, *cfg.threshold);
        }
        // A column that is already 0/1 (declared binary or not) is adopted
        // as the protected indicator without thresholding.
        return mark_protected(d, cfg.protected_feature);
    }();

    auto [train_rows, test_rows] =
        split_rows(prepared.n(), cfg.split_fraction, cfg.seed_split);
    if (train_rows.size() < 2 || test_rows.empty()) {
        throw InvalidConfig("split leaves too few points on one side");
    }
    const Dataset train_set = prepared.subset(train_rows);
    const Dataset test_set = prepared.subset(test_rows);
    if (cfg.k > test_set.n()) {
        throw BadK("k exceeds the number of test points");
    }

    const LinearModel model = train(train_set, cfg.train);

    std::vector<int> truth = test_set.labels();
    std::vector<std::uint8_t> flags = test_set.protected_flags();
    std::vector<int> baseline_labels = predict(model, test_set);

    const BalanceRatio ratio = reduce_ratio(cfg.ratio_protected, cfg.ratio_unprotected);
    ImportanceMatrix importance = build_importance(test_set);
    Clustering clustering = kmedians(importance, cfg.k, cfg.seed_cluster);
    FairgroupPlan plan = build_fairgroups(clustering, flags, ratio);
    FairPrediction prediction =
        fair_classify(model, test_set, plan, cfg.mode, cfg.seed_rep);

    // Representative labels must coincide with the model's own prediction
    // on those points.
    for (std::size_t g = 0; g < plan.groups.size(); ++g) {
        const std::size_t rep = prediction.representatives[g];
        if (prediction.labels[rep] != baseline_labels[rep]) {
            throw Error("representative label diverged from direct prediction");
        }
    }

    ExperimentResult result;
    result.baseline = evaluate(baseline_labels, truth, flags, cfg.alpha);
    result.fairgroup = evaluate(prediction.labels, truth, flags, cfg.alpha);
    result.ratio = ratio;
    result.kind = cfg.train.kind;
    result.train_size = train_rows.size();
    result.test_size = test_rows.size();
    result.group_count = plan.groups.size();
    result.unmatched_count = plan.unmatched.size();
    result.hash = config_hash(cfg);

    if (artifacts) {
        artifacts->test_rows = std::move(test_rows);
        artifacts->protected_flags = std::move(flags);
        artifacts->truth = std::move(truth);
        artifacts->baseline_labels = std::move(baseline_labels);
        artifacts->importance = std::move(importance);
        artifacts->clustering = std::move(clustering);
        artifacts->plan = std::move(plan);
        artifacts->prediction = std::move(prediction);
    }
    return result;
}

}  // namespace fairgroup
