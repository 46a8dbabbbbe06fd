#include "fairgroup/config.hpp"

#include <cmath>

#include "fairgroup/errors.hpp"
#include "fairgroup/fairgroups.hpp"
#include "fairgroup/textio.hpp"

namespace fairgroup {

namespace {

double require_double(const std::string& key, const std::string& value) {
    auto v = parse_double(value);
    if (!v) throw InvalidConfig(key + ": not a number: '" + value + "'");
    return *v;
}

std::int64_t require_int(const std::string& key, const std::string& value) {
    auto v = parse_int(value);
    if (!v) throw InvalidConfig(key + ": not an integer: '" + value + "'");
    return *v;
}

std::uint64_t require_seed(const std::string& key, const std::string& value) {
    const std::int64_t v = require_int(key, value);
    if (v < 0) throw InvalidConfig(key + ": seeds must be nonnegative");
    return static_cast<std::uint64_t>(v);
}

}  // namespace

std::string to_string(PropagationMode mode) {
    return mode == PropagationMode::OneSided ? "one-sided" : "two-sided";
}

PropagationMode propagation_mode_from_string(const std::string& s) {
    if (s == "one-sided") return PropagationMode::OneSided;
    if (s == "two-sided") return PropagationMode::TwoSided;
    throw InvalidConfig("mode must be one-sided or two-sided, got '" + s + "'");
}

void ExperimentConfig::validate() const {
    if (data_path.empty()) {
        if (synth_n < 10) throw InvalidConfig("synth-n must be >= 10");
        synth.validate();
    }
    if (target_feature.empty()) throw InvalidConfig("target must be named");
    if (protected_feature.empty()) throw InvalidConfig("protected must be named");
    if (threshold && !std::isfinite(*threshold)) {
        throw InvalidConfig("threshold must be finite");
    }
    train.validate();
    if (k < 1) throw InvalidConfig("k must be >= 1");
    if (ratio_protected < 1 || ratio_unprotected < 1) {
        throw InvalidConfig("ratio parts must be positive");
    }
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidConfig("alpha must lie in [0, 1]");
    if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
        throw InvalidConfig("split must lie in (0, 1)");
    }
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "source") {
        if (value == "synth") {
            cfg.data_path.clear();
        } else if (value != "csv") {
            throw InvalidConfig("source must be synth or csv, got '" + value + "'");
        }
    } else if (key == "data") {
        cfg.data_path = value;
    } else if (key == "target") {
        cfg.target_feature = value;
    } else if (key == "protected") {
        cfg.protected_feature = value;
    } else if (key == "threshold") {
        if (value == "none") {
            cfg.threshold.reset();
        } else {
            cfg.threshold = require_double(key, value);
        }
    } else if (key == "classifier") {
        cfg.train.kind = model_kind_from_string(value);
    } else if (key == "learning-rate") {
        cfg.train.learning_rate = require_double(key, value);
    } else if (key == "epochs") {
        cfg.train.epochs = static_cast<int>(require_int(key, value));
    } else if (key == "l2") {
        cfg.train.l2 = require_double(key, value);
    } else if (key == "svm-cost") {
        cfg.train.margin_cost = require_double(key, value);
    } else if (key == "seed-train") {
        cfg.train.seed = require_seed(key, value);
    } else if (key == "k") {
        const std::int64_t v = require_int(key, value);
        if (v < 1) throw InvalidConfig("k must be >= 1");
        cfg.k = static_cast<std::size_t>(v);
    } else if (key == "ratio") {
        auto parts = split(value, ':');
        if (parts.size() != 2) throw InvalidConfig("ratio must look like a:b, got '" + value + "'");
        cfg.ratio_protected = require_int(key, std::string(trim(parts[0])));
        cfg.ratio_unprotected = require_int(key, std::string(trim(parts[1])));
    } else if (key == "mode") {
        cfg.mode = propagation_mode_from_string(value);
    } else if (key == "alpha") {
        cfg.alpha = require_double(key, value);
    } else if (key == "split") {
        cfg.split_fraction = require_double(key, value);
    } else if (key == "seed-split") {
        cfg.seed_split = require_seed(key, value);
    } else if (key == "seed-cluster") {
        cfg.seed_cluster = require_seed(key, value);
    } else if (key == "seed-rep") {
        cfg.seed_rep = require_seed(key, value);
    } else if (key == "synth-n") {
        const std::int64_t v = require_int(key, value);
        if (v < 0) throw InvalidConfig("synth-n must be nonnegative");
        cfg.synth_n = static_cast<std::size_t>(v);
    } else if (key == "seed-synth") {
        cfg.seed_synth = require_seed(key, value);
    } else if (key == "synth-prevalence") {
        cfg.synth.protected_prevalence = require_double(key, value);
    } else if (key == "synth-noise") {
        cfg.synth.label_noise = require_double(key, value);
    } else if (key == "synth-sharpness") {
        cfg.synth.sharpness = require_double(key, value);
    } else if (key == "synth-income-spread") {
        cfg.synth.income_spread = require_double(key, value);
    } else if (key == "synth-worker-gap") {
        cfg.synth.worker_gap = require_double(key, value);
    } else if (key == "synth-disability-gap") {
        cfg.synth.disability_gap = require_double(key, value);
    } else if (key == "synth-effect-poverty") {
        cfg.synth.effect_poverty = require_double(key, value);
    } else if (key == "synth-effect-income") {
        cfg.synth.effect_income = require_double(key, value);
    } else if (key == "synth-effect-age") {
        cfg.synth.effect_age = require_double(key, value);
    } else if (key == "synth-effect-household") {
        cfg.synth.effect_household = require_double(key, value);
    } else if (key == "synth-effect-worker") {
        cfg.synth.effect_worker = require_double(key, value);
    } else if (key == "synth-effect-interest") {
        cfg.synth.effect_interest = require_double(key, value);
    } else if (key == "synth-effect-hearing") {
        cfg.synth.effect_hearing = require_double(key, value);
    } else if (key == "synth-effect-vision") {
        cfg.synth.effect_vision = require_double(key, value);
    } else if (key == "synth-effect-ambulatory") {
        cfg.synth.effect_ambulatory = require_double(key, value);
    } else if (key == "synth-effect-selfcare") {
        cfg.synth.effect_selfcare = require_double(key, value);
    } else if (key == "synth-bias") {
        cfg.synth.bias = require_double(key, value);
    } else {
        throw InvalidConfig("unknown key: " + key);
    }
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    auto lines = split(text, '\n');
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        std::string_view line = lines[ln];
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidConfig("line " + std::to_string(ln + 1) + ": expected key = value");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        apply_config_entry(cfg, key, value);
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    return parse_config_text(read_file(path));
}

std::string config_text(const ExperimentConfig& cfg) {
    const BalanceRatio ratio = reduce_ratio(cfg.ratio_protected, cfg.ratio_unprotected);
    std::string out;
    out += "source = " + std::string(cfg.data_path.empty() ? "synth" : "csv") + "\n";
    if (!cfg.data_path.empty()) out += "data = " + cfg.data_path + "\n";
    out += "target = " + cfg.target_feature + "\n";
    out += "protected = " + cfg.protected_feature + "\n";
    out += "threshold = " + (cfg.threshold ? fmt_double(*cfg.threshold) : "none") + "\n";
    out += "classifier = " + to_string(cfg.train.kind) + "\n";
    out += "learning-rate = " + fmt_double(cfg.train.learning_rate) + "\n";
    out += "epochs = " + std::to_string(cfg.train.epochs) + "\n";
    out += "l2 = " + fmt_double(cfg.train.l2) + "\n";
    out += "svm-cost = " + fmt_double(cfg.train.margin_cost) + "\n";
    out += "seed-train = " + std::to_string(cfg.train.seed) + "\n";
    out += "k = " + std::to_string(cfg.k) + "\n";
    out += "ratio = " + std::to_string(ratio.p) + ":" + std::to_string(ratio.q) + "\n";
    out += "mode = " + to_string(cfg.mode) + "\n";
    out += "alpha = " + fmt_double(cfg.alpha) + "\n";
    out += "split = " + fmt_double(cfg.split_fraction) + "\n";
    out += "seed-split = " + std::to_string(cfg.seed_split) + "\n";
    out += "seed-cluster = " + std::to_string(cfg.seed_cluster) + "\n";
    out += "seed-rep = " + std::to_string(cfg.seed_rep) + "\n";
    if (cfg.data_path.empty()) {
        out += "synth-n = " + std::to_string(cfg.synth_n) + "\n";
        out += "seed-synth = " + std::to_string(cfg.seed_synth) + "\n";
        out += "synth-prevalence = " + fmt_double(cfg.synth.protected_prevalence) + "\n";
        out += "synth-noise = " + fmt_double(cfg.synth.label_noise) + "\n";
        out += "synth-sharpness = " + fmt_double(cfg.synth.sharpness) + "\n";
        out += "synth-income-spread = " + fmt_double(cfg.synth.income_spread) + "\n";
        out += "synth-worker-gap = " + fmt_double(cfg.synth.worker_gap) + "\n";
        out += "synth-disability-gap = " + fmt_double(cfg.synth.disability_gap) + "\n";
        out += "synth-effect-poverty = " + fmt_double(cfg.synth.effect_poverty) + "\n";
        out += "synth-effect-income = " + fmt_double(cfg.synth.effect_income) + "\n";
        out += "synth-effect-age = " + fmt_double(cfg.synth.effect_age) + "\n";
        out += "synth-effect-household = " + fmt_double(cfg.synth.effect_household) + "\n";
        out += "synth-effect-worker = " + fmt_double(cfg.synth.effect_worker) + "\n";
        out += "synth-effect-interest = " + fmt_double(cfg.synth.effect_interest) + "\n";
        out += "synth-effect-hearing = " + fmt_double(cfg.synth.effect_hearing) + "\n";
        out += "synth-effect-vision = " + fmt_double(cfg.synth.effect_vision) + "\n";
        out += "synth-effect-ambulatory = " + fmt_double(cfg.synth.effect_ambulatory) + "\n";
        out += "synth-effect-selfcare = " + fmt_double(cfg.synth.effect_selfcare) + "\n";
        out += "synth-bias = " + fmt_double(cfg.synth.bias) + "\n";
    }
    return out;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    const std::string text = config_text(cfg);
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

}  // namespace fairgroup
