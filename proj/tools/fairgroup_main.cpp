#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairgroup/config.hpp"
#include "fairgroup/dataset.hpp"
#include "fairgroup/errors.hpp"
#include "fairgroup/pipeline.hpp"
#include "fairgroup/report.hpp"
#include "fairgroup/synth.hpp"
#include "fairgroup/textio.hpp"

namespace {

namespace fs = std::filesystem;
using namespace fairgroup;

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
    const char* env = std::getenv("FAIRGROUP_LOG");
    if (!env) return LogLevel::Error;
    const std::string value(env);
    if (value == "debug") return LogLevel::Debug;
    if (value == "info") return LogLevel::Info;
    return LogLevel::Error;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::Info) std::cerr << "[info] " << msg << "\n";
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::Debug) std::cerr << "[debug] " << msg << "\n";
}

void apply_set_entries(ExperimentConfig& cfg, const std::vector<std::string>& entries) {
    for (const std::string& entry : entries) {
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos) {
            throw InvalidConfig("--set expects key=value, got '" + entry + "'");
        }
        apply_config_entry(cfg, std::string(trim(entry.substr(0, eq))),
                           std::string(trim(entry.substr(eq + 1))));
    }
}

std::string synth_meta_text(std::size_t n, std::uint64_t seed, const SynthConfig& s) {
    std::string out = "synth-meta v1\n";
    out += "n = " + std::to_string(n) + "\n";
    out += "seed = " + std::to_string(seed) + "\n";
    out += "prevalence = " + fmt_double(s.protected_prevalence) + "\n";
    out += "noise = " + fmt_double(s.label_noise) + "\n";
    out += "sharpness = " + fmt_double(s.sharpness) + "\n";
    out += "income-spread = " + fmt_double(s.income_spread) + "\n";
    out += "worker-gap = " + fmt_double(s.worker_gap) + "\n";
    out += "disability-gap = " + fmt_double(s.disability_gap) + "\n";
    out += "effect-poverty = " + fmt_double(s.effect_poverty) + "\n";
    out += "effect-income = " + fmt_double(s.effect_income) + "\n";
    out += "effect-age = " + fmt_double(s.effect_age) + "\n";
    out += "effect-household = " + fmt_double(s.effect_household) + "\n";
    out += "effect-worker = " + fmt_double(s.effect_worker) + "\n";
    out += "effect-interest = " + fmt_double(s.effect_interest) + "\n";
    out += "effect-hearing = " + fmt_double(s.effect_hearing) + "\n";
    out += "effect-vision = " + fmt_double(s.effect_vision) + "\n";
    out += "effect-ambulatory = " + fmt_double(s.effect_ambulatory) + "\n";
    out += "effect-selfcare = " + fmt_double(s.effect_selfcare) + "\n";
    out += "bias = " + fmt_double(s.bias) + "\n";
    return out;
}

// Specs for a CSV where every column is numeric except the binary target.
std::vector<FeatureSpec> csv_specs(const std::string& path, const std::string& target) {
    const std::string text = read_file(path);
    auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]).empty()) throw EmptyFile(path);
    std::vector<FeatureSpec> specs;
    bool saw_target = false;
    for (std::string_view cell : split(lines[0], ',')) {
        FeatureSpec s;
        s.name = std::string(trim(cell));
        if (s.name == target) {
            s.role = FeatureRole::Target;
            s.kind = FeatureKind::Binary;
            saw_target = true;
        }
        specs.push_back(std::move(s));
    }
    if (!saw_target) throw MissingColumn(target);
    return specs;
}

int run_command(const ExperimentConfig& cfg, const std::string& out_dir) {
    cfg.validate();

    Dataset data = [&] {
        if (cfg.data_path.empty()) {
            log_info("generating synthetic data: n=" + std::to_string(cfg.synth_n) +
                     " seed=" + std::to_string(cfg.seed_synth));
            return synth_acs(cfg.synth_n, cfg.seed_synth, cfg.synth);
        }
        log_info("loading " + cfg.data_path);
        return load_csv(cfg.data_path, csv_specs(cfg.data_path, cfg.target_feature));
    }();
    log_debug("dataset: " + std::to_string(data.n()) + " rows, " +
              std::to_string(data.num_features()) + " columns");

    ExperimentArtifacts artifacts;
    const ExperimentResult result = run_experiment(data, cfg, &artifacts);
    log_info("groups=" + std::to_string(result.group_count) +
             " unmatched=" + std::to_string(result.unmatched_count));

    write_run_outputs(out_dir, result, cfg, artifacts);
    std::cout << render_report_text(result, cfg);
    std::cout << "written: " << (fs::path(out_dir) / "report.txt").string() << ", "
              << (fs::path(out_dir) / "report.machine").string() << "\n";

    if (!result.fairgroup.alpha_fair_positive) {
        std::cerr << "fairness gate failed: positive-class balance "
                  << fmt_double(result.fairgroup.positive_class_balance) << " < alpha "
                  << fmt_double(cfg.alpha) << "\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fairgroup: fairness post-processing for binary classifiers"};
    app.require_subcommand(1);

    // ---- synth ----
    auto* synth_cmd =
        app.add_subcommand("synth", "generate a synthetic ACS-like CSV dataset");
    std::size_t synth_n = 10000;
    std::uint64_t synth_seed = 7;
    std::string synth_out;
    double prevalence = SynthConfig{}.protected_prevalence;
    double noise = SynthConfig{}.label_noise;
    std::vector<std::string> synth_sets;
    synth_cmd->add_option("--n", synth_n, "number of rows (>= 10)")
        ->check(CLI::Range(std::size_t{10}, std::size_t{100000000}));
    synth_cmd->add_option("--seed", synth_seed, "generator seed");
    synth_cmd->add_option("--out", synth_out, "output CSV path")->required();
    synth_cmd->add_option("--prevalence", prevalence, "share of incomes below the threshold")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));
    synth_cmd->add_option("--noise", noise, "label flip rate, in [0, 0.5)")
        ->check(CLI::Range(0.0, 0.4999999));
    synth_cmd->add_option("--set", synth_sets,
                          "extra generator settings as synth-* key=value pairs");

    // ---- run ----
    auto* run_cmd = app.add_subcommand("run", "run a baseline-vs-fairgroup experiment");
    std::string config_path;
    std::string out_dir = "fairgroup-out";
    std::optional<std::string> opt_data;
    bool flag_synth = false;
    std::optional<std::size_t> opt_n;
    std::optional<std::string> opt_protected, opt_threshold, opt_classifier, opt_ratio,
        opt_mode, opt_target;
    std::optional<std::size_t> opt_k;
    std::optional<double> opt_alpha, opt_split;
    std::optional<std::uint64_t> opt_seed_split, opt_seed_cluster, opt_seed_rep,
        opt_seed_synth, opt_seed_train;
    std::vector<std::string> run_sets;
    run_cmd->add_option("--config", config_path, "key=value config file");
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_option("--data", opt_data, "input CSV (default: synthetic data)");
    run_cmd->add_flag("--synth", flag_synth, "use the synthetic generator");
    run_cmd->add_option("--n", opt_n, "synthetic rows (>= 10)")
        ->check(CLI::Range(std::size_t{10}, std::size_t{100000000}));
    run_cmd->add_option("--target", opt_target, "target column name");
    run_cmd->add_option("--protected", opt_protected, "protected feature name");
    run_cmd->add_option("--threshold", opt_threshold,
                        "binarization threshold for a numeric protected feature, or 'none'");
    run_cmd->add_option("--classifier", opt_classifier, "linear | logistic | svm");
    run_cmd->add_option("--k", opt_k, "cluster count (>= 1)")
        ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
    run_cmd->add_option("--ratio", opt_ratio, "protected:unprotected group ratio, e.g. 4:1");
    run_cmd->add_option("--mode", opt_mode, "one-sided | two-sided");
    run_cmd->add_option("--alpha", opt_alpha, "fairness gate on positive-class balance")
        ->check(CLI::Range(0.0, 1.0));
    run_cmd->add_option("--split", opt_split, "train fraction, in (0, 1)");
    run_cmd->add_option("--seed-split", opt_seed_split, "train/test split seed");
    run_cmd->add_option("--seed-cluster", opt_seed_cluster, "k-medians seed");
    run_cmd->add_option("--seed-rep", opt_seed_rep, "representative draw seed");
    run_cmd->add_option("--seed-synth", opt_seed_synth, "generator seed");
    run_cmd->add_option("--seed-train", opt_seed_train, "training seed");
    run_cmd->add_option("--set", run_sets, "extra config entries as key=value pairs");

    // ---- inspect ----
    auto* inspect_cmd =
        app.add_subcommand("inspect", "dump audit CSVs from a previous run");
    std::string inspect_run;
    std::string inspect_dest;
    inspect_cmd->add_option("--run", inspect_run, "run output directory")->required();
    inspect_cmd->add_option("--dest", inspect_dest,
                            "destination directory (default: <run>/inspect)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (synth_cmd->parsed()) {
            ExperimentConfig holder;  // reuse key parsing for --set entries
            holder.synth.protected_prevalence = prevalence;
            holder.synth.label_noise = noise;
            apply_set_entries(holder, synth_sets);
            holder.synth.validate();

            const Dataset data = synth_acs(synth_n, synth_seed, holder.synth);
            save_csv(data, synth_out);
            write_file(synth_out + ".meta", synth_meta_text(synth_n, synth_seed, holder.synth));
            std::cout << "wrote " << synth_out << " (" << data.n() << " rows) and "
                      << synth_out << ".meta\n";
            return 0;
        }

        if (run_cmd->parsed()) {
            ExperimentConfig cfg;
            if (!config_path.empty()) cfg = parse_config_file(config_path);

            if (opt_data) {
                cfg.data_path = *opt_data;
            }
            if (flag_synth) cfg.data_path.clear();
            if (opt_n) cfg.synth_n = *opt_n;
            if (opt_target) cfg.target_feature = *opt_target;
            if (opt_protected) cfg.protected_feature = *opt_protected;
            if (opt_threshold) apply_config_entry(cfg, "threshold", *opt_threshold);
            if (opt_classifier) apply_config_entry(cfg, "classifier", *opt_classifier);
            if (opt_k) cfg.k = *opt_k;
            if (opt_ratio) apply_config_entry(cfg, "ratio", *opt_ratio);
            if (opt_mode) apply_config_entry(cfg, "mode", *opt_mode);
            if (opt_alpha) cfg.alpha = *opt_alpha;
            if (opt_split) cfg.split_fraction = *opt_split;
            if (opt_seed_split) cfg.seed_split = *opt_seed_split;
            if (opt_seed_cluster) cfg.seed_cluster = *opt_seed_cluster;
            if (opt_seed_rep) cfg.seed_rep = *opt_seed_rep;
            if (opt_seed_synth) cfg.seed_synth = *opt_seed_synth;
            if (opt_seed_train) cfg.train.seed = *opt_seed_train;
            apply_set_entries(cfg, run_sets);

            return run_command(cfg, out_dir);
        }

        if (inspect_cmd->parsed()) {
            const std::string dest =
                inspect_dest.empty() ? (fs::path(inspect_run) / "inspect").string()
                                     : inspect_dest;
            const ExperimentArtifacts artifacts = load_artifacts(inspect_run);
            write_inspect_csvs(artifacts, dest);
            std::cout << "wrote importance.csv, clustering.csv, fairgroups.csv, "
                         "importance_features.csv under "
                      << dest << "\n";
            return 0;
        }
    } catch (const InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const MissingArtifact& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownFeature& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const MissingColumn& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnexpectedColumn& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NonBinaryValue& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const EmptyFile& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const AlreadyBinary& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ZeroPart& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BadK& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
