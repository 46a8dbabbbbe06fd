#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairgroup/dataset.hpp"

namespace fairgroup {

// Knobs for the ACS-like generator. Effects are coefficients of a linear
// logit over fixed affine transforms of the emitted columns, so the clean
// labels are (near-)linearly separable in the raw features; label_noise
// then flips a fraction of them. The income coefficient dominates the
// logit, which makes income the top-importance feature downstream. Its
// positive default encodes the disparity the method is meant to correct:
// benefit receipt skews toward the better-off, so a classifier fitted to
// these labels under-serves the low-income group.
struct SynthConfig {
    double protected_prevalence = 0.55;  // P(income below 20000)
    double label_noise = 0.05;           // flip probability, in [0, 0.5)
    double sharpness = 600.0;            // logit gain; high = near-deterministic labels

    double effect_poverty = 0.0;  // on the low-income indicator itself
    double effect_income = 2.0;   // applied to (income - 20000) / 15000
    double effect_age = 0.4;
    double effect_household = 0.7;
    double effect_worker = 0.6;
    double effect_interest = 1.2;
    double effect_hearing = 0.5;
    double effect_vision = 0.4;
    double effect_ambulatory = 0.8;
    double effect_selfcare = 0.6;
    double bias = 0.4;

    double income_spread = 45000.0;  // scale of incomes above the threshold
    double worker_gap = 0.5;         // mean worker-class shift, unprotected vs protected
    double disability_gap = 0.03;    // extra disability rate among the protected
    double margin = 0.15;            // logit dead zone; incomes are redrawn out of it

    void validate() const;  // throws InvalidConfig
};

inline constexpr double kIncomeThreshold = 20000.0;

// Column names of the generated schema, in order. The last one is the
// binary target.
const std::vector<std::string>& synth_schema();
std::vector<FeatureSpec> synth_specs();

// Deterministic for a fixed (n, seed, config); n must be >= 10.
Dataset synth_acs(std::size_t n, std::uint64_t seed, const SynthConfig& cfg);

}  // namespace fairgroup
