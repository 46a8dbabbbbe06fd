#pragma once

#include <string>

#include "fairgroup/config.hpp"
#include "fairgroup/pipeline.hpp"

namespace fairgroup {

// Two-row comparison table plus the knobs that shaped the run.
std::string render_report_text(const ExperimentResult& r, const ExperimentConfig& cfg);

// Stable machine form: a header line and one key=value record per report.
// Re-running the same config reproduces it byte for byte.
std::string render_report_machine(const ExperimentResult& r, const ExperimentConfig& cfg);

// Everything cmd_run leaves on disk under its output directory:
//   report.txt, report.machine, effective.cfg, state/ (internal snapshots
//   that cmd_inspect turns into audit CSVs).
void write_run_outputs(const std::string& out_dir, const ExperimentResult& r,
                       const ExperimentConfig& cfg, const ExperimentArtifacts& artifacts);

// Loads state/ written by write_run_outputs; throws MissingArtifact.
ExperimentArtifacts load_artifacts(const std::string& out_dir);

// Emits importance.csv, clustering.csv, fairgroups.csv (one row per test
// point) and importance_features.csv into dest_dir.
void write_inspect_csvs(const ExperimentArtifacts& artifacts, const std::string& dest_dir);

}  // namespace fairgroup
