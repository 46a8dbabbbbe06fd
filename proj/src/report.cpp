#include "fairgroup/report.hpp"

#include <cstdio>
#include <filesystem>

#include "fairgroup/clustering.hpp"
#include "fairgroup/errors.hpp"
#include "fairgroup/textio.hpp"

namespace fairgroup {

namespace {

namespace fs = std::filesystem;

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string report_record(const std::string& label, const FairnessReport& r) {
    std::string out = label;
    out += " accuracy=" + fmt_double(r.accuracy);
    out += " share=" + fmt_double(r.protected_share_positive);
    out += " balance=" + fmt_double(r.positive_class_balance);
    out += " alpha_fair_pos=" + std::string(r.alpha_fair_positive ? "1" : "0");
    out += " alpha_fair_neg=" + std::string(r.alpha_fair_negative ? "1" : "0");
    out += " positives=" + std::to_string(r.positives);
    out += " protected_positives=" + std::to_string(r.protected_positives);
    out += " degenerate=" + std::string(r.degenerate ? "1" : "0");
    return out;
}

std::string join_ints(const std::vector<std::int64_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(v[i]);
    }
    return out;
}

template <typename T>
std::string join_counts(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(static_cast<long long>(v[i]));
    }
    return out;
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += fmt_double(v[i]);
    }
    return out;
}

std::vector<std::int64_t> parse_int_line(std::string_view line, const std::string& what) {
    std::vector<std::int64_t> out;
    for (std::string_view tok : split(line, ' ')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        auto v = parse_int(tok);
        if (!v) throw ParseError(0, what, "bad integer '" + std::string(tok) + "'");
        out.push_back(*v);
    }
    return out;
}

std::vector<double> parse_double_line(std::string_view line, const std::string& what) {
    std::vector<double> out;
    for (std::string_view tok : split(line, ' ')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        auto v = parse_double(tok);
        if (!v) throw ParseError(0, what, "bad number '" + std::string(tok) + "'");
        out.push_back(*v);
    }
    return out;
}

std::string state_path(const std::string& out_dir, const std::string& name) {
    return (fs::path(out_dir) / "state" / name).string();
}

std::string require_state(const std::string& out_dir, const std::string& name) {
    const std::string path = state_path(out_dir, name);
    if (!fs::exists(path)) throw MissingArtifact(path);
    return read_file(path);
}

}  // namespace

std::string render_report_text(const ExperimentResult& r, const ExperimentConfig& cfg) {
    const std::string method = to_string(cfg.train.kind);
    std::string out;
    out += "fairgroup experiment (" + to_string(cfg.mode) + ", ratio " +
           std::to_string(r.ratio.p) + ":" + std::to_string(r.ratio.q) + ", k=" +
           std::to_string(cfg.k) + ", alpha=" + fmt_double(cfg.alpha) + ")\n";
    out += "\n";
    out += "Method                        Protected%(+)   Accuracy\n";
    out += "----------------------------  -------------  ---------\n";
    auto row = [&](const std::string& name, const FairnessReport& rep) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%-28s  %13s  %9s\n", name.c_str(),
                      fixed2(rep.protected_share_positive).c_str(),
                      fixed2(rep.accuracy).c_str());
        out += buf;
    };
    row(method, r.baseline);
    row(method + " + fairgroup", r.fairgroup);
    out += "\n";
    out += "positive-class balance: baseline " + fixed2(r.baseline.positive_class_balance) +
           ", fairgroup " + fixed2(r.fairgroup.positive_class_balance) + "\n";
    out += "alpha-fair (positive class) at alpha=" + fmt_double(cfg.alpha) + ": " +
           (r.fairgroup.alpha_fair_positive ? "yes" : "no") + "\n";
    out += "fairgroups: " + std::to_string(r.group_count) + ", unmatched points: " +
           std::to_string(r.unmatched_count) + " of " + std::to_string(r.test_size) + "\n";
    if (r.fairgroup.degenerate || r.baseline.degenerate) {
        out += "warning: degenerate run (no predicted positives)\n";
    }
    out += "train/test: " + std::to_string(r.train_size) + "/" + std::to_string(r.test_size) +
           ", config hash " + hex64(r.hash) + "\n";
    return out;
}

std::string render_report_machine(const ExperimentResult& r, const ExperimentConfig& cfg) {
    std::string out = "fairgroup-report v1";
    out += " hash=" + hex64(r.hash);
    out += " classifier=" + to_string(r.kind);
    out += " k=" + std::to_string(cfg.k);
    out += " ratio=" + std::to_string(r.ratio.p) + ":" + std::to_string(r.ratio.q);
    out += " mode=" + to_string(cfg.mode);
    out += " alpha=" + fmt_double(cfg.alpha);
    out += " train=" + std::to_string(r.train_size);
    out += " test=" + std::to_string(r.test_size);
    out += " groups=" + std::to_string(r.group_count);
    out += " unmatched=" + std::to_string(r.unmatched_count);
    out += "\n";
    out += report_record("baseline", r.baseline) + "\n";
    out += report_record("fairgroup", r.fairgroup) + "\n";
    return out;
}

void write_run_outputs(const std::string& out_dir, const ExperimentResult& r,
                       const ExperimentConfig& cfg, const ExperimentArtifacts& a) {
    fs::create_directories(fs::path(out_dir) / "state");

    write_file((fs::path(out_dir) / "report.txt").string(), render_report_text(r, cfg));
    write_file((fs::path(out_dir) / "report.machine").string(),
               render_report_machine(r, cfg));
    write_file((fs::path(out_dir) / "effective.cfg").string(), config_text(cfg));

    const ImportanceMatrix& m = a.importance;
    std::string imp = "importance v1\n";
    imp += "points " + std::to_string(m.n()) + "\n";
    imp += "features " + std::to_string(m.num_features()) + "\n";
    for (std::size_t i = 0; i < m.num_features(); ++i) {
        imp += "feature " + m.feature_names[i] + " " + fmt_double(m.correlations[i]) + " " +
               std::to_string(m.weights[i]) + "\n";
    }
    imp += "rows " + join_counts(a.test_rows) + "\n";
    for (std::size_t j = 0; j < m.n(); ++j) {
        imp += "ranks " + join_ints(m.ranks[j]) + "\n";
    }
    write_file(state_path(out_dir, "importance.state"), imp);

    const Clustering& c = a.clustering;
    std::string clu = "clustering v1\n";
    clu += "k " + std::to_string(c.k) + "\n";
    clu += "iterations " + std::to_string(c.iterations) + "\n";
    clu += "cost " + fmt_double(c.cost) + "\n";
    for (const auto& center : c.centers) {
        clu += "center " + join_doubles(center) + "\n";
    }
    clu += "assign " + join_counts(c.assignment) + "\n";
    clu += "dist " + join_doubles(c.point_center_distance) + "\n";
    write_file(state_path(out_dir, "clustering.state"), clu);

    const FairgroupPlan& p = a.plan;
    std::string plan = "plan v1\n";
    plan += "points " + std::to_string(p.num_points) + "\n";
    plan += "ratio " + std::to_string(p.ratio.p) + ":" + std::to_string(p.ratio.q) + "\n";
    plan += "flags " + join_counts(a.protected_flags) + "\n";
    for (const Fairgroup& g : p.groups) {
        plan += "group " + std::to_string(g.cluster_id) + " " + join_counts(g.members) + "\n";
    }
    plan += "unmatched " + join_counts(p.unmatched) + "\n";
    write_file(state_path(out_dir, "plan.state"), plan);
}

ExperimentArtifacts load_artifacts(const std::string& out_dir) {
    ExperimentArtifacts a;

    {
        const std::string text = require_state(out_dir, "importance.state");
        auto lines = split(text, '\n');
        if (lines.empty() || trim(lines[0]) != "importance v1") {
            throw ParseError(0, "importance.state", "bad header");
        }
        std::size_t expected_points = 0;
        for (std::size_t ln = 1; ln < lines.size(); ++ln) {
            const std::string_view line = trim(lines[ln]);
            if (line.empty()) continue;
            const std::size_t sp = line.find(' ');
            const std::string_view key = line.substr(0, sp);
            const std::string_view rest =
                sp == std::string_view::npos ? std::string_view{} : line.substr(sp + 1);
            if (key == "points") {
                expected_points = static_cast<std::size_t>(
                    parse_int_line(rest, "importance.state").at(0));
            } else if (key == "features") {
                // implied by the feature lines; kept for readability
            } else if (key == "feature") {
                auto parts = split(rest, ' ');
                if (parts.size() != 3) throw ParseError(ln, "importance.state", "bad feature");
                a.importance.feature_names.emplace_back(parts[0]);
                auto corr = parse_double(parts[1]);
                auto weight = parse_int(parts[2]);
                if (!corr || !weight) throw ParseError(ln, "importance.state", "bad feature");
                a.importance.correlations.push_back(*corr);
                a.importance.weights.push_back(*weight);
            } else if (key == "rows") {
                for (std::int64_t v : parse_int_line(rest, "importance.state")) {
                    a.test_rows.push_back(static_cast<std::size_t>(v));
                }
            } else if (key == "ranks") {
                a.importance.ranks.push_back(parse_int_line(rest, "importance.state"));
            } else {
                throw ParseError(ln, "importance.state", "unrecognized line");
            }
        }
        if (a.importance.ranks.size() != expected_points) {
            throw ParseError(0, "importance.state", "row count mismatch");
        }
        a.importance.weighted.assign(a.importance.ranks.size(), {});
        for (std::size_t j = 0; j < a.importance.ranks.size(); ++j) {
            const auto& row = a.importance.ranks[j];
            if (row.size() != a.importance.num_features()) {
                throw ParseError(j, "importance.state", "rank width mismatch");
            }
            auto& w = a.importance.weighted[j];
            w.resize(row.size());
            for (std::size_t i = 0; i < row.size(); ++i) {
                w[i] = a.importance.weights[i] * row[i];
            }
        }
    }

    {
        const std::string text = require_state(out_dir, "clustering.state");
        auto lines = split(text, '\n');
        if (lines.empty() || trim(lines[0]) != "clustering v1") {
            throw ParseError(0, "clustering.state", "bad header");
        }
        for (std::size_t ln = 1; ln < lines.size(); ++ln) {
            const std::string_view line = trim(lines[ln]);
            if (line.empty()) continue;
            const std::size_t sp = line.find(' ');
            const std::string_view key = line.substr(0, sp);
            const std::string_view rest =
                sp == std::string_view::npos ? std::string_view{} : line.substr(sp + 1);
            if (key == "k") {
                a.clustering.k = static_cast<std::size_t>(
                    parse_int_line(rest, "clustering.state").at(0));
            } else if (key == "iterations") {
                a.clustering.iterations =
                    static_cast<int>(parse_int_line(rest, "clustering.state").at(0));
            } else if (key == "cost") {
                a.clustering.cost = parse_double_line(rest, "clustering.state").at(0);
            } else if (key == "center") {
                a.clustering.centers.push_back(parse_double_line(rest, "clustering.state"));
            } else if (key == "assign") {
                for (std::int64_t v : parse_int_line(rest, "clustering.state")) {
                    a.clustering.assignment.push_back(static_cast<int>(v));
                }
            } else if (key == "dist") {
                a.clustering.point_center_distance =
                    parse_double_line(rest, "clustering.state");
            } else {
                throw ParseError(ln, "clustering.state", "unrecognized line");
            }
        }
    }

    {
        const std::string text = require_state(out_dir, "plan.state");
        auto lines = split(text, '\n');
        if (lines.empty() || trim(lines[0]) != "plan v1") {
            throw ParseError(0, "plan.state", "bad header");
        }
        for (std::size_t ln = 1; ln < lines.size(); ++ln) {
            const std::string_view line = trim(lines[ln]);
            if (line.empty()) continue;
            const std::size_t sp = line.find(' ');
            const std::string_view key = line.substr(0, sp);
            const std::string_view rest =
                sp == std::string_view::npos ? std::string_view{} : line.substr(sp + 1);
            if (key == "points") {
                a.plan.num_points = static_cast<std::size_t>(
                    parse_int_line(rest, "plan.state").at(0));
            } else if (key == "ratio") {
                auto parts = split(rest, ':');
                if (parts.size() != 2) throw ParseError(ln, "plan.state", "bad ratio");
                auto p = parse_int(trim(parts[0]));
                auto q = parse_int(trim(parts[1]));
                if (!p || !q) throw ParseError(ln, "plan.state", "bad ratio");
                a.plan.ratio = BalanceRatio{*p, *q};
            } else if (key == "flags") {
                for (std::int64_t v : parse_int_line(rest, "plan.state")) {
                    a.protected_flags.push_back(static_cast<std::uint8_t>(v));
                }
            } else if (key == "group") {
                const auto ints = parse_int_line(rest, "plan.state");
                if (ints.empty()) throw ParseError(ln, "plan.state", "bad group");
                Fairgroup g;
                g.cluster_id = static_cast<int>(ints[0]);
                for (std::size_t t = 1; t < ints.size(); ++t) {
                    const auto j = static_cast<std::size_t>(ints[t]);
                    g.members.push_back(j);
                    if (j < a.protected_flags.size() && a.protected_flags[j]) {
                        ++g.protected_count;
                    } else {
                        ++g.unprotected_count;
                    }
                }
                a.plan.groups.push_back(std::move(g));
            } else if (key == "unmatched") {
                for (std::int64_t v : parse_int_line(rest, "plan.state")) {
                    a.plan.unmatched.push_back(static_cast<std::size_t>(v));
                }
            } else {
                throw ParseError(ln, "plan.state", "unrecognized line");
            }
        }
    }
    return a;
}

void write_inspect_csvs(const ExperimentArtifacts& a, const std::string& dest_dir) {
    fs::create_directories(dest_dir);
    const ImportanceMatrix& m = a.importance;

    std::string imp = "point,row";
    for (const std::string& name : m.feature_names) imp += "," + name;
    imp += "\n";
    for (std::size_t j = 0; j < m.n(); ++j) {
        imp += std::to_string(j) + "," +
               std::to_string(j < a.test_rows.size() ? a.test_rows[j] : j);
        for (std::size_t i = 0; i < m.num_features(); ++i) {
            imp += "," + std::to_string(m.weighted[j][i]);
        }
        imp += "\n";
    }
    write_file((fs::path(dest_dir) / "importance.csv").string(), imp);

    write_file((fs::path(dest_dir) / "clustering.csv").string(),
               clustering_csv(a.clustering));
    write_file((fs::path(dest_dir) / "fairgroups.csv").string(),
               plan_csv(a.plan, a.clustering, a.protected_flags));
    write_file((fs::path(dest_dir) / "importance_features.csv").string(),
               importance_summary_csv(m));
}

}  // namespace fairgroup
