// The built-in experiment matrix and end-to-end execution.
//
// Seventeen fixed configurations pair a feature mask with lookback, unit
// count and architecture. Desk-scale overrides (shorter lookback, fewer
// epochs, strided windows, truncated input) apply at run time without
// mutating the canonical configs. Published result figures for the original
// data ship as reference metadata only — that source data is not
// recoverable, so they are never acceptance targets.

#ifndef SENTIFORGE_RUNNER_HPP
#define SENTIFORGE_RUNNER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sentiforge/dataset.hpp"
#include "sentiforge/fuse.hpp"
#include "sentiforge/nn/metrics.hpp"
#include "sentiforge/nn/model.hpp"

namespace sentiforge::runner {

enum class Architecture { Lstm, LstmLstm, LstmGru, Gru, GruGru, Conv1dLstm };

std::string to_string(Architecture arch);
Architecture architecture_from_string(const std::string& name);

// Conv1D front-ends use units filters with this kernel width (the source
// tables fix neither).
inline constexpr Eigen::Index kConvKernelWidth = 5;

nn::ModelSpec model_spec_for(Architecture arch, Eigen::Index units);

struct ExperimentConfig {
    int id = 0;
    dataset::FeatureMask mask;  // includes the sum_sentiment flag (note 1)
    int lookback_days = 60;
    int units = 32;
    int batch_size = 128;
    int epochs = 5;
    Architecture architecture = Architecture::Lstm;
    std::vector<int> notes;  // table note tags, e.g. {1, 2}

    bool operator==(const ExperimentConfig&) const = default;
};

// The 17 built-in experiment configurations.
const std::vector<ExperimentConfig>& builtin_matrix();

// Result figures reported for the original (unrecoverable) data; reference
// metadata only.
struct ReferenceMetrics {
    double train_rmse, test_rmse, train_mae, test_mae;
};
const std::map<int, ReferenceMetrics>& reference_metrics();
inline constexpr const char* kReferenceMetricsCaveat =
    "not reproducible - source data unavailable";

// Key-value config file round-trip ("key = value" lines, '#' comments).
std::string serialize_config(const ExperimentConfig& config);
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

struct RunOverrides {
    std::optional<Eigen::Index> lookback_hours;  // replaces lookback_days * 24
    std::optional<int> epochs;
    std::optional<Eigen::Index> stride;   // window stride, default 1
    std::optional<Eigen::Index> max_rows; // truncate the merged table
    std::uint64_t seed = 42;
    double train_fraction = 0.8;
    std::optional<double> learning_rate;  // default 1e-3
    std::string save_model_dir;  // when set, trained parameters land here
};

struct PredictionPoint {
    std::int64_t timestamp = 0;
    double actual = 0.0;
    double predicted = 0.0;
};

struct ExperimentResult {
    int config_id = 0;
    nn::Metrics metrics;  // unscaled USD
    std::vector<double> epoch_loss;
    std::vector<PredictionPoint> train_predictions;
    std::vector<PredictionPoint> test_predictions;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    std::string architecture_label;
    // reproducibility audit fields (dataset.meta.json)
    Eigen::Index seq_len = 0;
    Eigen::Index stride = 1;
    Eigen::Index n_samples = 0;
    Eigen::Index split_index = 0;
    dataset::ScalerState scaler;
};

// select -> scale -> window -> split -> train -> evaluate.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::vector<fuse::FeatureRow>& table,
                                const RunOverrides& overrides = {});

// Writes summary.csv, per-experiment predictions.csv + plot.svg + meta.json.
// Returns the summary path.
std::string emit_report(const std::vector<ExperimentResult>& results,
                        const std::string& out_dir);

// Runs several experiments, sequentially or on `parallelism` threads (the
// merged table is shared read-only).
std::vector<ExperimentResult> run_many(const std::vector<ExperimentConfig>& configs,
                                       const std::vector<fuse::FeatureRow>& table,
                                       const RunOverrides& overrides,
                                       int parallelism = 1);

}  // namespace sentiforge::runner

#endif  // SENTIFORGE_RUNNER_HPP
