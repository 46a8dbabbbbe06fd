#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fairgroup/classifiers.hpp"
#include "fairgroup/synth.hpp"

namespace fairgroup {

// What happens to the rest of a fairgroup when its representative comes
// back negative: one-sided classifies the remaining members individually
// (the balance target binds only on the positive class), two-sided
// propagates the negative label to the whole group.
enum class PropagationMode { OneSided, TwoSided };

std::string to_string(PropagationMode mode);
PropagationMode propagation_mode_from_string(const std::string& s);

// Every knob of one experiment run. All randomness flows from the seeds
// recorded here, so a config determines its outputs byte for byte.
struct ExperimentConfig {
    // Data source: a CSV path, or the synthetic generator when empty.
    std::string data_path;
    std::size_t synth_n = 10000;
    std::uint64_t seed_synth = 7;
    SynthConfig synth;

    std::string target_feature = "medicaid";
    std::string protected_feature = "income";
    std::optional<double> threshold = kIncomeThreshold;

    TrainConfig train;
    std::size_t k = 5;
    std::int64_t ratio_protected = 4;
    std::int64_t ratio_unprotected = 1;
    PropagationMode mode = PropagationMode::TwoSided;
    double alpha = 0.25;
    double split_fraction = 0.8;
    std::uint64_t seed_split = 11;
    std::uint64_t seed_cluster = 17;
    std::uint64_t seed_rep = 23;

    void validate() const;  // throws InvalidConfig naming the offending key
};

// Flat key=value format ('#' starts a comment). Unknown keys are errors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

// Canonical echo; parse_config_text(config_text(c)) reproduces c.
std::string config_text(const ExperimentConfig& cfg);

// FNV-1a over the canonical text.
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace fairgroup
