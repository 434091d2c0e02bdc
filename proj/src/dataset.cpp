#include "sentiforge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "sentiforge/common.hpp"
#include "sentiforge/time.hpp"

namespace sentiforge::dataset {

const std::array<std::string, kSelectableCount>& selectable_features() {
    static const std::array<std::string, kSelectableCount> names{
        "open_BTCUSDT",   "high_BTCUSDT",       "low_BTCUSDT",
        "close_BTCUSDT",  "volume_BTCUSDT",     "close_LTCUSD",
        "volume_LTCUSD",  "close_ETHUSD",       "volume_ETHUSD",
        "gnews_flair",    "gnews_tb_polarity",  "gnews_tb_subjectivity",
        "gnews_sid_pos",  "gnews_sid_neg",      "reddit_flair",
        "reddit_tb_polarity", "reddit_tb_subjectivity", "reddit_sid_pos",
        "reddit_sid_neg"};
    return names;
}

namespace {

std::size_t selectable_index(const std::string& name) {
    const auto& names = selectable_features();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ConfigError("unknown selectable feature: " + name);
    return static_cast<std::size_t>(it - names.begin());
}

// (summed output name, gnews flag index, reddit flag index, gnews column,
// reddit column in the merged table)
struct SummedChannel {
    const char* name;
    std::size_t gnews_flag;
    std::size_t reddit_flag;
    std::size_t gnews_column;
    std::size_t reddit_column;
};

const std::array<SummedChannel, kSummedChannels>& summed_channels() {
    static const std::array<SummedChannel, kSummedChannels> channels{{
        {"flair", 9, 14, 9, 16},
        {"tb_polarity", 10, 15, 10, 17},
        {"tb_subjectivity", 11, 16, 11, 18},
        {"sid_pos", 12, 17, 12, 19},
        {"sid_neg", 13, 18, 13, 20},
    }};
    return channels;
}

// Merged-table column index for each selectable feature.
constexpr std::array<std::size_t, kSelectableCount> kMergedColumn{
    0, 1, 2, 3, 4, 5, 6, 7, 8,       // prices and volumes
    9, 10, 11, 12, 13,               // gnews flair .. sid_neg
    16, 17, 18, 19, 20};             // reddit flair .. sid_neg

constexpr std::size_t kCloseBtcColumn = 3;

}  // namespace

bool& FeatureMask::flag(const std::string& name) {
    return flags[selectable_index(name)];
}

bool FeatureMask::flag(const std::string& name) const {
    return flags[selectable_index(name)];
}

void validate(const FeatureMask& mask) {
    if (std::none_of(mask.flags.begin(), mask.flags.end(),
                     [](bool b) { return b; })) {
        throw ConfigError("feature mask selects no features");
    }
    if (mask.sum_sentiment) {
        for (const SummedChannel& channel : summed_channels()) {
            if (mask.flags[channel.gnews_flag] != mask.flags[channel.reddit_flag]) {
                throw ConfigError(
                    std::string("sum_sentiment requires both gnews and reddit "
                                "flags for channel ") +
                    channel.name);
            }
        }
    }
}

SelectedMatrix select_features(const std::vector<fuse::FeatureRow>& table,
                               const FeatureMask& mask) {
    validate(mask);
    if (table.empty()) throw DataError("select_features: empty table");

    const Eigen::Index n_rows = static_cast<Eigen::Index>(table.size());
    SelectedMatrix out;
    out.timestamps.reserve(table.size());
    for (const fuse::FeatureRow& row : table) out.timestamps.push_back(row.timestamp);

    out.target.resize(n_rows);
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        out.target[r] = table[static_cast<std::size_t>(r)].values[kCloseBtcColumn];
    }

    // Column plan: price/volume flags map straight through; sentiment flags
    // map through either as-is or as gnews+reddit sums.
    struct Column {
        std::string name;
        std::size_t merged_a;
        std::size_t merged_b;  // == merged_a for plain columns
    };
    std::vector<Column> plan;
    for (std::size_t f = 0; f < 9; ++f) {
        if (mask.flags[f]) {
            plan.push_back({selectable_features()[f], kMergedColumn[f], kMergedColumn[f]});
        }
    }
    if (mask.sum_sentiment) {
        for (const SummedChannel& channel : summed_channels()) {
            if (mask.flags[channel.gnews_flag]) {
                plan.push_back({std::string("sum_") + channel.name,
                                channel.gnews_column, channel.reddit_column});
            }
        }
    } else {
        for (std::size_t f = 9; f < kSelectableCount; ++f) {
            if (mask.flags[f]) {
                plan.push_back({selectable_features()[f], kMergedColumn[f],
                                kMergedColumn[f]});
            }
        }
    }

    out.features.resize(n_rows, static_cast<Eigen::Index>(plan.size()));
    for (std::size_t c = 0; c < plan.size(); ++c) {
        out.column_names.push_back(plan[c].name);
        for (Eigen::Index r = 0; r < n_rows; ++r) {
            const auto& values = table[static_cast<std::size_t>(r)].values;
            double v = values[plan[c].merged_a];
            if (plan[c].merged_b != plan[c].merged_a) v += values[plan[c].merged_b];
            out.features(r, static_cast<Eigen::Index>(c)) = v;
        }
    }
    return out;
}

ScalerState fit_scaler(const Eigen::MatrixXd& features,
                       const Eigen::VectorXd& target, Eigen::Index n_train_rows) {
    if (n_train_rows <= 0 || n_train_rows > features.rows()) {
        throw ConfigError("fit_scaler: training row count out of range");
    }
    ScalerState scaler;
    scaler.feature_min = features.topRows(n_train_rows).colwise().minCoeff();
    scaler.feature_max = features.topRows(n_train_rows).colwise().maxCoeff();
    scaler.target_min = target.head(n_train_rows).minCoeff();
    scaler.target_max = target.head(n_train_rows).maxCoeff();
    return scaler;
}

namespace {

inline double scale_one(double x, double lo, double hi) {
    return hi > lo ? (x - lo) / (hi - lo) : 0.0;
}

inline double unscale_one(double y, double lo, double hi) {
    return hi > lo ? y * (hi - lo) + lo : lo;
}

}  // namespace

Eigen::MatrixXd apply_scaler(const ScalerState& scaler,
                             const Eigen::MatrixXd& features) {
    if (features.cols() != scaler.feature_min.size()) {
        throw ConfigError("apply_scaler: column count mismatch");
    }
    Eigen::MatrixXd scaled(features.rows(), features.cols());
    for (Eigen::Index c = 0; c < features.cols(); ++c) {
        const double lo = scaler.feature_min[c];
        const double hi = scaler.feature_max[c];
        for (Eigen::Index r = 0; r < features.rows(); ++r) {
            scaled(r, c) = scale_one(features(r, c), lo, hi);
        }
    }
    return scaled;
}

Eigen::VectorXd apply_target_scaler(const ScalerState& scaler,
                                    const Eigen::VectorXd& target) {
    Eigen::VectorXd scaled(target.size());
    for (Eigen::Index i = 0; i < target.size(); ++i) {
        scaled[i] = scale_one(target[i], scaler.target_min, scaler.target_max);
    }
    return scaled;
}

Eigen::MatrixXd invert_scaler(const ScalerState& scaler,
                              const Eigen::MatrixXd& scaled) {
    if (scaled.cols() != scaler.feature_min.size()) {
        throw ConfigError("invert_scaler: column count mismatch");
    }
    Eigen::MatrixXd original(scaled.rows(), scaled.cols());
    for (Eigen::Index c = 0; c < scaled.cols(); ++c) {
        const double lo = scaler.feature_min[c];
        const double hi = scaler.feature_max[c];
        for (Eigen::Index r = 0; r < scaled.rows(); ++r) {
            original(r, c) = unscale_one(scaled(r, c), lo, hi);
        }
    }
    return original;
}

Eigen::VectorXd invert_target_scaler(const ScalerState& scaler,
                                     const Eigen::VectorXd& scaled) {
    Eigen::VectorXd original(scaled.size());
    for (Eigen::Index i = 0; i < scaled.size(); ++i) {
        original[i] = unscale_one(scaled[i], scaler.target_min, scaler.target_max);
    }
    return original;
}

WindowedDataset WindowedDataset::build(Eigen::MatrixXd matrix,
                                       Eigen::VectorXd target,
                                       std::vector<std::int64_t> timestamps,
                                       Eigen::Index seq_len, Eigen::Index stride,
                                       ScalerState scaler) {
    if (seq_len < 1) throw ConfigError("window length must be at least 1");
    if (stride < 1) throw ConfigError("window stride must be at least 1");
    const Eigen::Index n_rows = matrix.rows();
    if (target.size() != n_rows ||
        static_cast<Eigen::Index>(timestamps.size()) != n_rows) {
        throw ConfigError("make_windows: matrix/target/timestamp sizes disagree");
    }
    if (n_rows <= seq_len) {
        throw DataError("make_windows: need more than " + std::to_string(seq_len) +
                        " rows, got " + std::to_string(n_rows));
    }

    WindowedDataset ds;
    auto shared = std::make_shared<Shared>();
    shared->matrix = std::move(matrix);
    shared->target = std::move(target);
    shared->timestamps = std::move(timestamps);
    ds.shared_ = std::move(shared);
    ds.seq_len_ = seq_len;
    ds.stride_ = stride;
    ds.offset_ = 0;
    // Last admissible window start is n_rows - seq_len - 1 (its target is the
    // final row).
    ds.n_samples_ = (n_rows - seq_len - 1) / stride + 1;
    ds.scaler_ = std::move(scaler);
    return ds;
}

double WindowedDataset::target_of(Eigen::Index sample) const {
    const Eigen::Index row = offset_ + sample * stride_ + seq_len_;
    return shared_->target[row];
}

std::int64_t WindowedDataset::target_time(Eigen::Index sample) const {
    const Eigen::Index row = offset_ + sample * stride_ + seq_len_;
    return shared_->timestamps[static_cast<std::size_t>(row)];
}

std::vector<Eigen::MatrixXd> WindowedDataset::gather(
    const std::vector<Eigen::Index>& samples) const {
    const Eigen::Index batch = static_cast<Eigen::Index>(samples.size());
    const Eigen::Index features = shared_->matrix.cols();
    std::vector<Eigen::MatrixXd> steps(
        static_cast<std::size_t>(seq_len_),
        Eigen::MatrixXd(features, batch));
    for (Eigen::Index b = 0; b < batch; ++b) {
        const Eigen::Index start = offset_ + samples[static_cast<std::size_t>(b)] * stride_;
        for (Eigen::Index t = 0; t < seq_len_; ++t) {
            steps[static_cast<std::size_t>(t)].col(b) =
                shared_->matrix.row(start + t).transpose();
        }
    }
    return steps;
}

Eigen::VectorXd WindowedDataset::gather_targets(
    const std::vector<Eigen::Index>& samples) const {
    Eigen::VectorXd targets(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        targets[static_cast<Eigen::Index>(i)] = target_of(samples[i]);
    }
    return targets;
}

WindowedDataset WindowedDataset::slice(Eigen::Index first_sample,
                                       Eigen::Index count) const {
    if (first_sample < 0 || count < 0 || first_sample + count > n_samples_) {
        throw ConfigError("WindowedDataset::slice out of range");
    }
    WindowedDataset out = *this;
    out.offset_ = offset_ + first_sample * stride_;
    out.n_samples_ = count;
    return out;
}

WindowedDataset make_windows(Eigen::MatrixXd matrix, Eigen::VectorXd target,
                             std::vector<std::int64_t> timestamps,
                             int lookback_days, Eigen::Index stride,
                             ScalerState scaler) {
    if (lookback_days < 1) throw ConfigError("lookback must be at least one day");
    return WindowedDataset::build(std::move(matrix), std::move(target),
                                  std::move(timestamps),
                                  static_cast<Eigen::Index>(lookback_days) *
                                      utc::kHoursPerDay,
                                  stride, std::move(scaler));
}

WindowedDataset make_windows_hours(Eigen::MatrixXd matrix, Eigen::VectorXd target,
                                   std::vector<std::int64_t> timestamps,
                                   Eigen::Index lookback_hours, Eigen::Index stride,
                                   ScalerState scaler) {
    return WindowedDataset::build(std::move(matrix), std::move(target),
                                  std::move(timestamps), lookback_hours, stride,
                                  std::move(scaler));
}

Eigen::Index train_sample_count(Eigen::Index n_samples, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw ConfigError("train fraction must lie strictly between 0 and 1");
    }
    return static_cast<Eigen::Index>(
        std::floor(static_cast<double>(n_samples) * fraction));
}

std::pair<WindowedDataset, WindowedDataset> split_train_test(
    const WindowedDataset& ds, double fraction) {
    const Eigen::Index n_train = train_sample_count(ds.n_samples(), fraction);
    const Eigen::Index n_test = ds.n_samples() - n_train;
    if (n_train == 0 || n_test == 0) {
        throw DataError("split_train_test: split yields an empty side (" +
                        std::to_string(n_train) + " train / " +
                        std::to_string(n_test) + " test)");
    }
    return {ds.slice(0, n_train), ds.slice(n_train, n_test)};
}

void write_meta(const WindowedDataset& ds, Eigen::Index split_index,
                const std::string& path) {
    nlohmann::json meta;
    meta["seq_len"] = ds.seq_len();
    meta["stride"] = ds.stride();
    meta["n_samples"] = ds.n_samples();
    meta["split_index"] = split_index;
    meta["scaler"]["target_min"] = ds.scaler().target_min;
    meta["scaler"]["target_max"] = ds.scaler().target_max;
    meta["scaler"]["feature_min"] = std::vector<double>(
        ds.scaler().feature_min.data(),
        ds.scaler().feature_min.data() + ds.scaler().feature_min.size());
    meta["scaler"]["feature_max"] = std::vector<double>(
        ds.scaler().feature_max.data(),
        ds.scaler().feature_max.data() + ds.scaler().feature_max.size());
    std::ofstream out(path);
    if (!out) throw DataError("cannot write dataset meta: " + path);
    out << meta.dump(2) << '\n';
}

}  // namespace sentiforge::dataset
