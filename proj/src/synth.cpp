#include "fairgroup/synth.hpp"

#include <cmath>

#include "fairgroup/errors.hpp"
#include "fairgroup/rng.hpp"

namespace fairgroup {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void SynthConfig::validate() const {
    if (!(protected_prevalence > 0.0 && protected_prevalence < 1.0)) {
        throw InvalidConfig("synth.prevalence must lie in (0, 1)");
    }
    if (!(label_noise >= 0.0 && label_noise < 0.5)) {
        throw InvalidConfig("synth.noise must lie in [0, 0.5)");
    }
    if (!(sharpness > 0.0) || !std::isfinite(sharpness)) {
        throw InvalidConfig("synth.sharpness must be positive");
    }
    if (!(income_spread > 0.0)) {
        throw InvalidConfig("synth.income_spread must be positive");
    }
    if (worker_gap < 0.0) throw InvalidConfig("synth.worker_gap must be nonnegative");
    if (!(disability_gap >= 0.0 && disability_gap <= 0.5)) {
        throw InvalidConfig("synth.disability_gap must lie in [0, 0.5]");
    }
    if (margin < 0.0) throw InvalidConfig("synth.margin must be nonnegative");
    for (double e : {effect_poverty, effect_income, effect_age, effect_household,
                     effect_worker, effect_interest, effect_hearing, effect_vision,
                     effect_ambulatory, effect_selfcare, bias}) {
        if (!std::isfinite(e)) throw InvalidConfig("synth effect sizes must be finite");
    }
}

const std::vector<std::string>& synth_schema() {
    static const std::vector<std::string> names = {
        "age",
        "income",
        "household_size",
        "worker_class",
        "interest_income",
        "hearing_difficulty",
        "vision_difficulty",
        "ambulatory_difficulty",
        "self_care_difficulty",
        "medicaid",
    };
    return names;
}

std::vector<FeatureSpec> synth_specs() {
    std::vector<FeatureSpec> specs;
    for (const std::string& name : synth_schema()) {
        FeatureSpec s;
        s.name = name;
        if (name == "medicaid") {
            s.role = FeatureRole::Target;
            s.kind = FeatureKind::Binary;
        } else if (name.find("difficulty") != std::string::npos) {
            s.role = FeatureRole::Unprotected;
            s.kind = FeatureKind::Binary;
        } else {
            s.role = FeatureRole::Unprotected;
            s.kind = FeatureKind::Numeric;
        }
        specs.push_back(std::move(s));
    }
    return specs;
}

Dataset synth_acs(std::size_t n, std::uint64_t seed, const SynthConfig& cfg) {
    if (n < 10) throw InvalidConfig("synth requires n >= 10");
    cfg.validate();

    Rng rng(seed);

    std::vector<double> age(n), income(n), household(n), worker(n), interest(n);
    std::vector<double> hearing(n), vision(n), ambulatory(n), selfcare(n), target(n);

    for (std::size_t j = 0; j < n; ++j) {
        const bool low_income = rng.bernoulli(cfg.protected_prevalence);

        age[j] = 18.0 + std::floor(78.0 * rng.uniform01());
        household[j] = 1.0 + std::floor(7.0 * rng.uniform01());

        // Worker-class codes overlap between the two groups but the
        // unprotected skew higher by worker_gap on average.
        const double base_worker = std::floor(6.0 * rng.uniform01());
        worker[j] = low_income ? base_worker
                               : std::min(8.0, base_worker + std::floor(cfg.worker_gap + rng.uniform01()));

        const double bump = low_income ? cfg.disability_gap : 0.0;
        hearing[j] = rng.bernoulli(0.10 + bump) ? 1.0 : 0.0;
        vision[j] = rng.bernoulli(0.08 + bump) ? 1.0 : 0.0;
        ambulatory[j] = rng.bernoulli(0.22 + bump) ? 1.0 : 0.0;
        selfcare[j] = rng.bernoulli(0.12 + bump) ? 1.0 : 0.0;

        const double partial =
            cfg.bias +
            cfg.effect_age * (age[j] - 56.0) / 22.0 +
            cfg.effect_household * (household[j] - 4.0) / 2.0 +
            cfg.effect_worker * (worker[j] - 2.5) / 1.7 +
            cfg.effect_hearing * (hearing[j] - 0.10) +
            cfg.effect_vision * (vision[j] - 0.08) +
            cfg.effect_ambulatory * (ambulatory[j] - 0.22) +
            cfg.effect_selfcare * (selfcare[j] - 0.12);

        // Draw income (and the interest it generates) inside its band,
        // redrawing while the point lands inside the logit dead zone; the
        // resulting labels are separable with a real margin instead of
        // piling up on the decision surface.
        double logit = 0.0;
        for (int attempt = 0; attempt < 50; ++attempt) {
            // Incomes below the threshold are uniform over the low band;
            // above it they are right-skewed toward the threshold.
            if (low_income) {
                income[j] = 2000.0 + 18000.0 * rng.uniform01();
                interest[j] = 0.0;
            } else {
                const double u = rng.uniform01();
                income[j] = kIncomeThreshold + cfg.income_spread * u * u;
                interest[j] = std::floor(0.05 * (income[j] - kIncomeThreshold) *
                                         (0.5 + rng.uniform01()));
            }
            logit = partial +
                    cfg.effect_poverty * (low_income ? 1.0 - cfg.protected_prevalence
                                                     : -cfg.protected_prevalence) +
                    cfg.effect_income * (income[j] - kIncomeThreshold) / 15000.0 +
                    cfg.effect_interest * (interest[j] - 400.0) / 1200.0;
            if (std::abs(logit) >= cfg.margin) break;
        }

        int y = rng.bernoulli(sigmoid(cfg.sharpness * logit)) ? 1 : 0;
        if (cfg.label_noise > 0.0 && rng.bernoulli(cfg.label_noise)) y = 1 - y;
        target[j] = static_cast<double>(y);
    }

    std::vector<std::vector<double>> columns = {
        std::move(age),     std::move(income),     std::move(household),
        std::move(worker),  std::move(interest),   std::move(hearing),
        std::move(vision),  std::move(ambulatory), std::move(selfcare),
        std::move(target),
    };
    return Dataset(synth_specs(), std::move(columns));
}

}  // namespace fairgroup
