#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "fairgroup/config.hpp"
#include "fairgroup/textio.hpp"

using namespace fairgroup;
namespace fs = std::filesystem;

namespace {

const fs::path kWorkDir = fs::temp_directory_path() / "fairgroup-cli-tests";

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string& args) {
    fs::create_directories(kWorkDir);
    const std::string out_path = (kWorkDir / "stdout.tmp").string();
    const std::string err_path = (kWorkDir / "stderr.tmp").string();
    const std::string command = std::string(FAIRGROUP_CLI_PATH) + " " + args + " >" +
                                out_path + " 2>" + err_path;
    const int raw = std::system(command.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = read_file(out_path);
    r.err = read_file(err_path);
    return r;
}

std::size_t line_count(const std::string& text) {
    std::size_t lines = 0;
    for (char c : text) lines += c == '\n';
    return lines;
}

// Small but non-trivial run config used across the CLI tests.
std::string small_config_text() {
    return "source = synth\n"
           "synth-n = 1200\n"
           "seed-synth = 7\n"
           "classifier = logistic\n"
           "epochs = 200\n"
           "k = 4\n"
           "ratio = 4:1\n"
           "mode = two-sided\n"
           "alpha = 0.05\n";
}

}  // namespace

TEST_CASE("synth is byte-deterministic for equal seeds") {
    fs::create_directories(kWorkDir);
    const std::string a = (kWorkDir / "synth_a.csv").string();
    const std::string b = (kWorkDir / "synth_b.csv").string();
    CHECK(run_cli("synth --n 500 --seed 7 --out " + a).exit_code == 0);
    CHECK(run_cli("synth --n 500 --seed 7 --out " + b).exit_code == 0);
    CHECK(read_file(a) == read_file(b));
    CHECK(read_file(a + ".meta") == read_file(b + ".meta"));

    const std::string c = (kWorkDir / "synth_c.csv").string();
    CHECK(run_cli("synth --n 500 --seed 8 --out " + c).exit_code == 0);
    CHECK(read_file(a) != read_file(c));
}

TEST_CASE("synth rejects undersized n with a usage error") {
    const CliResult r = run_cli("synth --n 5 --out " + (kWorkDir / "tiny.csv").string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("--n") != std::string::npos);
}

TEST_CASE("synth writes the documented schema header") {
    const std::string path = (kWorkDir / "schema.csv").string();
    REQUIRE(run_cli("synth --n 50 --seed 1 --out " + path).exit_code == 0);
    const std::string text = read_file(path);
    CHECK(text.rfind("age,income,household_size,worker_class,interest_income,"
                     "hearing_difficulty,vision_difficulty,ambulatory_difficulty,"
                     "self_care_difficulty,medicaid\n",
                     0) == 0);
    CHECK(line_count(text) == 51);

    const std::string meta = read_file(path + ".meta");
    CHECK(meta.find("synth-meta v1") == 0);
    CHECK(meta.find("seed = 1") != std::string::npos);
}

TEST_CASE("run produces the comparison table and stable machine reports") {
    fs::create_directories(kWorkDir);
    const std::string cfg_path = (kWorkDir / "small.cfg").string();
    write_file(cfg_path, small_config_text());

    const std::string out1 = (kWorkDir / "run1").string();
    const std::string out2 = (kWorkDir / "run2").string();
    const CliResult r1 = run_cli("run --config " + cfg_path + " --out " + out1);
    const CliResult r2 = run_cli("run --config " + cfg_path + " --out " + out2);
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);

    CHECK(r1.out.find("Method") != std::string::npos);
    CHECK(r1.out.find("logistic + fairgroup") != std::string::npos);
    CHECK(r1.out.find("Accuracy") != std::string::npos);

    // Byte-identical machine reports across executions.
    CHECK(read_file(out1 + "/report.machine") == read_file(out2 + "/report.machine"));
    CHECK(read_file(out1 + "/report.txt") == read_file(out2 + "/report.txt"));

    // The effective config echoed next to the report re-parses to an
    // equivalent config.
    const std::string echoed = read_file(out1 + "/effective.cfg");
    CHECK(config_text(parse_config_text(echoed)) == echoed);
}

TEST_CASE("run normalizes the ratio before reporting") {
    const std::string cfg_path = (kWorkDir / "ratio.cfg").string();
    write_file(cfg_path, small_config_text());
    const std::string out = (kWorkDir / "run_ratio").string();
    const CliResult r =
        run_cli("run --config " + cfg_path + " --ratio 8:2 --out " + out);
    CHECK(r.exit_code == 0);
    CHECK(read_file(out + "/report.machine").find(" ratio=4:1 ") != std::string::npos);
    CHECK(read_file(out + "/effective.cfg").find("ratio = 4:1") != std::string::npos);
}

TEST_CASE("run rejects k=0 naming the flag") {
    const CliResult r = run_cli("run --k 0");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("--k") != std::string::npos);
}

TEST_CASE("run rejects a bad mode value") {
    const std::string cfg_path = (kWorkDir / "mode.cfg").string();
    write_file(cfg_path, small_config_text());
    const CliResult r = run_cli("run --config " + cfg_path + " --mode diagonal");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("mode") != std::string::npos);
}

TEST_CASE("an unattainable alpha trips the fairness gate with exit 3") {
    const std::string cfg_path = (kWorkDir / "gate.cfg").string();
    write_file(cfg_path, small_config_text());
    const std::string out = (kWorkDir / "run_gate").string();
    const CliResult r = run_cli("run --config " + cfg_path + " --alpha 1 --out " + out);
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("fairness gate") != std::string::npos);
    // The report is still written for inspection.
    CHECK(fs::exists(out + "/report.machine"));
}

TEST_CASE("inspect dumps per-point audit csvs that agree with the run") {
    const std::string cfg_path = (kWorkDir / "inspect.cfg").string();
    write_file(cfg_path, small_config_text());
    const std::string out = (kWorkDir / "run_inspect").string();
    REQUIRE(run_cli("run --config " + cfg_path + " --out " + out).exit_code == 0);
    REQUIRE(run_cli("inspect --run " + out).exit_code == 0);

    const std::string imp = read_file(out + "/inspect/importance.csv");
    const std::string clu = read_file(out + "/inspect/clustering.csv");
    const std::string grp = read_file(out + "/inspect/fairgroups.csv");

    // 1200 synthetic rows, 80/20 split -> 240 test points per CSV.
    CHECK(line_count(imp) == 241);
    CHECK(line_count(clu) == 241);
    CHECK(line_count(grp) == 241);

    // Recount each fairgroup from the CSV: exactly 4 protected and 1
    // unprotected member per group id.
    std::vector<std::pair<int, int>> counts;  // (protected, unprotected) per group
    for (std::string_view line : split(grp, '\n')) {
        if (line.empty() || line.rfind("point,", 0) == 0) continue;
        const auto cells = split(line, ',');
        REQUIRE(cells.size() == 4);
        if (cells[2] == "unmatched") continue;
        const auto gid = static_cast<std::size_t>(*parse_int(cells[2]));
        if (counts.size() <= gid) counts.resize(gid + 1, {0, 0});
        if (cells[3] == "1") {
            counts[gid].first += 1;
        } else {
            counts[gid].second += 1;
        }
    }
    CHECK(!counts.empty());
    for (const auto& [prot, unprot] : counts) {
        CHECK(prot == 4);
        CHECK(unprot == 1);
    }
}

TEST_CASE("inspect without a prior run fails with exit 2") {
    const CliResult r =
        run_cli("inspect --run " + (kWorkDir / "never-ran").string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("missing run artifact") != std::string::npos);
}

TEST_CASE("flags override config file values") {
    const std::string cfg_path = (kWorkDir / "override.cfg").string();
    write_file(cfg_path, small_config_text());
    const std::string out = (kWorkDir / "run_override").string();
    const CliResult r = run_cli("run --config " + cfg_path +
                                " --classifier svm --k 3 --out " + out);
    CHECK(r.exit_code == 0);
    const std::string machine = read_file(out + "/report.machine");
    CHECK(machine.find("classifier=svm") != std::string::npos);
    CHECK(machine.find(" k=3 ") != std::string::npos);
}
