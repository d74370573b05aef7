#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qrec/database.hpp"

namespace qrec {

struct ExperimentConfig {
    std::string name;
    double scale = 0.2; // fraction of the full-size study databases
    TrainConfig train;  // used verbatim when train_overridden; otherwise per-experiment defaults
    bool train_overridden = false;
    std::uint64_t seed = 7;
    std::string out_dir = "out";
    bool extended = false; // include the slow off-default cases (mixed 6-qubit fidelity)
};

struct RunTiming {
    double db_build_s = 0.0;
    double train_s = 0.0;
    double predict_s = 0.0;
    double direct_compute_s = 0.0;
};

struct CellRecord {
    int row = 0;
    int col = 0;
    double actual = 0.0;
    double predicted = 0.0;
};

struct RunResult {
    std::string label;
    std::size_t n_r = 0;
    double delta = 0.0;
    std::optional<double> delta_scaled;
    RunTiming timing;
    std::vector<std::string> flags; // "divergence", "degenerate-scale"
    TrainConfig train_used;
    std::vector<CellRecord> cells;
    std::map<std::string, double> extras;
};

struct EvalReport {
    ExperimentConfig config;
    std::vector<RunResult> runs;
};

const std::vector<std::string>& experiment_names();

/// Per-experiment training defaults; every report echoes the values
/// actually used.
TrainConfig tuned_train_config(const std::string& experiment, std::uint64_t seed);

EvalReport run_experiment(const ExperimentConfig& cfg);

/// Direct-calculation versus recommender timing comparison (refinement off,
/// 40-direction grid).  tau_cal covers recomputing the hidden cells from the
/// states and evolutions; tau_rs covers training plus prediction; database
/// construction is excluded from both.  Three repetitions, medians reported.
EvalReport run_timing_study(const ExperimentConfig& cfg);

/// Writes report.json, one cells-<label>.csv per run, and the panel CSVs.
void write_report(const EvalReport& report, const std::string& dir);

/// Regenerates one panel CSV (header x,y[,series]); unknown panel names are
/// an ArgumentError.  Panel names: run labels give (actual, predicted)
/// scatters with an ideal y=x series; sweep experiments add e.g.
/// "delta-vs-eta" or "delta-vs-size-<measure>"; fig4 adds "werner-2n" and
/// "werner-discord"; the appendix adds "binning".
void emit_plot_data(const EvalReport& report, const std::string& panel, const std::string& path);

/// True when any run carries a flag (divergence / degenerate scale).
bool report_flagged(const EvalReport& report);

} // namespace qrec
