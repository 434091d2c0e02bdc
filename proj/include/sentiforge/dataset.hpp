// Turns the merged feature table into scaled, windowed tensors.
//
// The prediction target is always next-hour close_BTCUSDT. Features and
// target map to [0, 1] by min-max scaling fitted on training rows only
// (constant columns map to 0). Windows slide with configurable stride over
// the scaled matrix and are materialized lazily — a WindowedDataset stores
// the matrix once plus index arithmetic, so a 1440-step window costs nothing
// until a batch is gathered.

#ifndef SENTIFORGE_DATASET_HPP
#define SENTIFORGE_DATASET_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sentiforge/fuse.hpp"

namespace sentiforge::dataset {

// The features an experiment may select, in canonical column order.
inline constexpr std::size_t kSelectableCount = 19;
const std::array<std::string, kSelectableCount>& selectable_features();

// The five sentiment channels that participate in news+reddit summation.
inline constexpr std::size_t kSummedChannels = 5;

struct FeatureMask {
    std::array<bool, kSelectableCount> flags{};
    bool sum_sentiment = false;

    bool& flag(const std::string& name);
    bool flag(const std::string& name) const;

    bool operator==(const FeatureMask&) const = default;
};

// At least one flag must be set; with sum_sentiment, every selected summed
// channel needs both its gnews and reddit flags. Throws ConfigError.
void validate(const FeatureMask& mask);

struct SelectedMatrix {
    Eigen::MatrixXd features;  // [n_rows x n_columns], canonical column order
    Eigen::VectorXd target;    // close_BTCUSDT per row (unscaled)
    std::vector<std::string> column_names;
    std::vector<std::int64_t> timestamps;
};

SelectedMatrix select_features(const std::vector<fuse::FeatureRow>& table,
                               const FeatureMask& mask);

struct ScalerState {
    Eigen::VectorXd feature_min;
    Eigen::VectorXd feature_max;
    double target_min = 0.0;
    double target_max = 0.0;
};

// Fits on the leading `n_train_rows` rows only.
ScalerState fit_scaler(const Eigen::MatrixXd& features,
                       const Eigen::VectorXd& target, Eigen::Index n_train_rows);

Eigen::MatrixXd apply_scaler(const ScalerState& scaler,
                             const Eigen::MatrixXd& features);
Eigen::VectorXd apply_target_scaler(const ScalerState& scaler,
                                    const Eigen::VectorXd& target);
Eigen::MatrixXd invert_scaler(const ScalerState& scaler,
                              const Eigen::MatrixXd& scaled);
Eigen::VectorXd invert_target_scaler(const ScalerState& scaler,
                                     const Eigen::VectorXd& scaled);

class WindowedDataset {
public:
    // `matrix`/`target` are the scaled rows; sample i covers matrix rows
    // [offset + i*stride, offset + i*stride + seq_len) and its target is
    // target[offset + i*stride + seq_len].
    static WindowedDataset build(Eigen::MatrixXd matrix, Eigen::VectorXd target,
                                 std::vector<std::int64_t> timestamps,
                                 Eigen::Index seq_len, Eigen::Index stride,
                                 ScalerState scaler);

    Eigen::Index n_samples() const { return n_samples_; }
    Eigen::Index seq_len() const { return seq_len_; }
    Eigen::Index n_features() const { return shared_->matrix.cols(); }
    Eigen::Index stride() const { return stride_; }
    const ScalerState& scaler() const { return scaler_; }

    double target_of(Eigen::Index sample) const;
    std::int64_t target_time(Eigen::Index sample) const;

    // Step-major batch: element t is [n_features x batch] with one column per
    // requested sample.
    std::vector<Eigen::MatrixXd> gather(const std::vector<Eigen::Index>& samples) const;
    Eigen::VectorXd gather_targets(const std::vector<Eigen::Index>& samples) const;

    // Chronological suffix/prefix views sharing the same matrix.
    WindowedDataset slice(Eigen::Index first_sample, Eigen::Index count) const;

private:
    struct Shared {
        Eigen::MatrixXd matrix;
        Eigen::VectorXd target;
        std::vector<std::int64_t> timestamps;
    };
    std::shared_ptr<const Shared> shared_;
    Eigen::Index seq_len_ = 0;
    Eigen::Index stride_ = 1;
    Eigen::Index offset_ = 0;
    Eigen::Index n_samples_ = 0;
    ScalerState scaler_;
};

// Windows a scaled matrix with lookback in days (seq_len = days * 24).
WindowedDataset make_windows(Eigen::MatrixXd matrix, Eigen::VectorXd target,
                             std::vector<std::int64_t> timestamps,
                             int lookback_days, Eigen::Index stride,
                             ScalerState scaler);

// Same with the lookback given directly in hours (desk-scale override).
WindowedDataset make_windows_hours(Eigen::MatrixXd matrix, Eigen::VectorXd target,
                                   std::vector<std::int64_t> timestamps,
                                   Eigen::Index lookback_hours, Eigen::Index stride,
                                   ScalerState scaler);

// Chronological split without shuffling; test targets all postdate train
// targets. Either side empty is a hard error.
std::pair<WindowedDataset, WindowedDataset> split_train_test(
    const WindowedDataset& ds, double fraction);

// Number of leading samples assigned to train for a given sample count.
Eigen::Index train_sample_count(Eigen::Index n_samples, double fraction);

// Reproducibility sidecar (seq_len, n_samples, scaler bounds, split index).
void write_meta(const WindowedDataset& ds, Eigen::Index split_index,
                const std::string& path);

}  // namespace sentiforge::dataset

#endif  // SENTIFORGE_DATASET_HPP
