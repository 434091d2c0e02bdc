#include "sentiforge/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "sentiforge/common.hpp"
#include "sentiforge/nn/serialize.hpp"
#include "sentiforge/nn/train.hpp"
#include "sentiforge/time.hpp"

namespace sentiforge::runner {

std::string to_string(Architecture arch) {
    switch (arch) {
        case Architecture::Lstm: return "lstm";
        case Architecture::LstmLstm: return "lstm_lstm";
        case Architecture::LstmGru: return "lstm_gru";
        case Architecture::Gru: return "gru";
        case Architecture::GruGru: return "gru_gru";
        case Architecture::Conv1dLstm: return "conv1d_lstm";
    }
    return "?";
}

Architecture architecture_from_string(const std::string& name) {
    if (name == "lstm") return Architecture::Lstm;
    if (name == "lstm_lstm") return Architecture::LstmLstm;
    if (name == "lstm_gru") return Architecture::LstmGru;
    if (name == "gru") return Architecture::Gru;
    if (name == "gru_gru") return Architecture::GruGru;
    if (name == "conv1d_lstm") return Architecture::Conv1dLstm;
    throw ConfigError("unknown architecture: " + name);
}

nn::ModelSpec model_spec_for(Architecture arch, Eigen::Index units) {
    switch (arch) {
        case Architecture::Lstm: return nn::ModelSpec::lstm(units);
        case Architecture::LstmLstm: return nn::ModelSpec::lstm_lstm(units);
        case Architecture::LstmGru: return nn::ModelSpec::lstm_gru(units);
        case Architecture::Gru: return nn::ModelSpec::gru(units);
        case Architecture::GruGru: return nn::ModelSpec::gru_gru(units);
        case Architecture::Conv1dLstm:
            return nn::ModelSpec::conv1d_lstm(units, kConvKernelWidth, units);
    }
    throw ConfigError("unknown architecture");
}

namespace {

using dataset::FeatureMask;

// Table note tags -> architecture.
Architecture architecture_for_note(int note) {
    switch (note) {
        case 2: return Architecture::Lstm;
        case 3: return Architecture::LstmLstm;
        case 4: return Architecture::LstmGru;
        case 5: return Architecture::Gru;
        case 6: return Architecture::GruGru;
        case 7: return Architecture::LstmGru;
        case 8: return Architecture::Conv1dLstm;
        default: throw ConfigError("no architecture for note " + std::to_string(note));
    }
}

FeatureMask mask_of(const std::vector<std::string>& names, bool sum_sentiment) {
    FeatureMask mask;
    mask.sum_sentiment = sum_sentiment;
    for (const std::string& name : names) mask.flag(name) = true;
    return mask;
}

std::vector<std::string> all_features() {
    const auto& names = dataset::selectable_features();
    return {names.begin(), names.end()};
}

// close/volume for all three assets.
std::vector<std::string> close_volume_all() {
    return {"close_BTCUSDT", "volume_BTCUSDT", "close_LTCUSD", "volume_LTCUSD",
            "close_ETHUSD",  "volume_ETHUSD"};
}

std::vector<std::string> with(std::vector<std::string> base,
                              const std::vector<std::string>& extra) {
    base.insert(base.end(), extra.begin(), extra.end());
    return base;
}

const std::vector<std::string> kGnewsFive{
    "gnews_flair", "gnews_tb_polarity", "gnews_tb_subjectivity", "gnews_sid_pos",
    "gnews_sid_neg"};
const std::vector<std::string> kRedditFive{
    "reddit_flair", "reddit_tb_polarity", "reddit_tb_subjectivity",
    "reddit_sid_pos", "reddit_sid_neg"};

ExperimentConfig make_config(int id, FeatureMask mask, int lookback_days,
                             int units, std::vector<int> notes) {
    ExperimentConfig config;
    config.id = id;
    config.mask = std::move(mask);
    config.lookback_days = lookback_days;
    config.units = units;
    config.notes = std::move(notes);
    for (int note : config.notes) {
        if (note >= 2) config.architecture = architecture_for_note(note);
    }
    return config;
}

}  // namespace

const std::vector<ExperimentConfig>& builtin_matrix() {
    static const std::vector<ExperimentConfig> matrix = [] {
        std::vector<ExperimentConfig> m;
        const auto sentiment_ten = with(kGnewsFive, kRedditFive);

        // Experiments 1-3: close/volume of all assets plus every sentiment
        // channel, summed; width and lookback vary.
        m.push_back(make_config(1, mask_of(with(close_volume_all(), sentiment_ten), true),
                                60, 32, {1, 2}));
        m.push_back(make_config(2, mask_of(with(close_volume_all(), sentiment_ten), true),
                                60, 64, {1, 2}));
        m.push_back(make_config(3, mask_of(with(close_volume_all(), sentiment_ten), true),
                                120, 64, {1, 2}));
        // Experiment 4: everything.
        m.push_back(make_config(4, mask_of(all_features(), true), 120, 64, {1, 2}));
        // Experiment 5: BTC candles only.
        m.push_back(make_config(5,
                                mask_of({"open_BTCUSDT", "high_BTCUSDT", "low_BTCUSDT",
                                         "close_BTCUSDT", "volume_BTCUSDT"},
                                        false),
                                60, 32, {2}));
        // Experiment 6: all nine price/volume columns, no sentiment.
        m.push_back(make_config(6,
                                mask_of(with({"open_BTCUSDT", "high_BTCUSDT",
                                              "low_BTCUSDT"},
                                             close_volume_all()),
                                        false),
                                60, 32, {2}));
        // Experiments 7/8: one text source at a time (unsummed).
        m.push_back(make_config(7, mask_of(with(close_volume_all(), kGnewsFive), false),
                                60, 32, {2}));
        m.push_back(make_config(8, mask_of(with(close_volume_all(), kRedditFive), false),
                                60, 32, {2}));
        // Experiments 9-11: one summed channel family at a time.
        m.push_back(make_config(
            9, mask_of(with(close_volume_all(), {"gnews_flair", "reddit_flair"}), true),
            60, 32, {1, 2}));
        m.push_back(make_config(
            10,
            mask_of(with(close_volume_all(),
                         {"gnews_tb_polarity", "gnews_tb_subjectivity",
                          "reddit_tb_polarity", "reddit_tb_subjectivity"}),
                    true),
            60, 32, {1, 2}));
        m.push_back(make_config(
            11,
            mask_of(with(close_volume_all(), {"gnews_sid_pos", "gnews_sid_neg",
                                              "reddit_sid_pos", "reddit_sid_neg"}),
                    true),
            60, 32, {1, 2}));
        // Experiments 12-15, 17: everything, architectures vary.
        m.push_back(make_config(12, mask_of(all_features(), true), 120, 64, {1, 3}));
        m.push_back(make_config(13, mask_of(all_features(), true), 60, 32, {1, 4}));
        m.push_back(make_config(14, mask_of(all_features(), true), 60, 32, {1, 5}));
        m.push_back(make_config(15, mask_of(all_features(), true), 60, 32, {1, 6}));
        // Experiment 16: flair only, stacked recurrent.
        m.push_back(make_config(
            16, mask_of(with(close_volume_all(), {"gnews_flair", "reddit_flair"}), true),
            60, 32, {1, 7}));
        m.push_back(make_config(17, mask_of(all_features(), true), 60, 32, {1, 8}));
        return m;
    }();
    return matrix;
}

const std::map<int, ReferenceMetrics>& reference_metrics() {
    static const std::map<int, ReferenceMetrics> metrics{
        {1, {769.11, 2490.4, 572.49, 2454.6}},
        {2, {829.19, 2632.1, 679.46, 2597.7}},
        {3, {1254.8, 3541.8, 1027.4, 3530.9}},
        {4, {231.42, 434.87, 181.29, 421.56}},
        {5, {154.11, 173.72, 82.72, 116.36}},
        {6, {642.9, 556.5, 510.85, 477.92}},
        {7, {766.14, 2406.1, 600.18, 2369.2}},
        {8, {706.31, 1943.3, 571.6, 1892.5}},
        {9, {813.34, 1746.0, 624.37, 1703.6}},
        {10, {814.08, 2282.4, 646.16, 2248.5}},
        {11, {751.09, 789.86, 561.81, 745.71}},
        {12, {534.23, 1514.8, 399.22, 1507.4}},
        {13, {377.4, 983.94, 270.37, 977.53}},
        {14, {440.89, 1314.9, 350.08, 1308.5}},
        {15, {433.69, 1177.0, 329.24, 1171.0}},
        {16, {788.32, 2146.1, 614.04, 2137.6}},
        {17, {1249.3, 2615.3, 1003.9, 2605.0}}};
    return metrics;
}

std::string serialize_config(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "id = " << config.id << '\n';
    out << "lookback_days = " << config.lookback_days << '\n';
    out << "units = " << config.units << '\n';
    out << "batch_size = " << config.batch_size << '\n';
    out << "epochs = " << config.epochs << '\n';
    out << "architecture = " << to_string(config.architecture) << '\n';
    out << "sum_sentiment = " << (config.mask.sum_sentiment ? "true" : "false")
        << '\n';
    out << "features = ";
    bool first = true;
    for (std::size_t f = 0; f < dataset::kSelectableCount; ++f) {
        if (!config.mask.flags[f]) continue;
        if (!first) out << ", ";
        out << dataset::selectable_features()[f];
        first = false;
    }
    out << '\n';
    out << "notes = ";
    for (std::size_t i = 0; i < config.notes.size(); ++i) {
        if (i) out << ", ";
        out << config.notes[i];
    }
    out << '\n';
    return out.str();
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig config;
    config.notes.clear();
    bool saw_features = false;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line without '=': " + line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "id") config.id = std::stoi(value);
        else if (key == "lookback_days") config.lookback_days = std::stoi(value);
        else if (key == "units") config.units = std::stoi(value);
        else if (key == "batch_size") config.batch_size = std::stoi(value);
        else if (key == "epochs") config.epochs = std::stoi(value);
        else if (key == "architecture")
            config.architecture = architecture_from_string(value);
        else if (key == "sum_sentiment")
            config.mask.sum_sentiment = (value == "true" || value == "1");
        else if (key == "features") {
            saw_features = true;
            for (const std::string& name : split_list(value)) {
                config.mask.flag(name) = true;
            }
        } else if (key == "notes") {
            for (const std::string& note : split_list(value)) {
                config.notes.push_back(std::stoi(note));
            }
        } else {
            throw ConfigError("unknown config key: " + key);
        }
    }
    if (!saw_features) throw ConfigError("config file missing 'features'");
    if (config.lookback_days < 1) throw ConfigError("lookback_days must be >= 1");
    if (config.epochs < 1) throw ConfigError("epochs must be >= 1");
    if (config.batch_size < 1) throw ConfigError("batch_size must be >= 1");
    dataset::validate(config.mask);
    return config;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::vector<fuse::FeatureRow>& table,
                                const RunOverrides& overrides) {
    const auto start_time = std::chrono::steady_clock::now();

    std::vector<fuse::FeatureRow> rows = table;
    if (overrides.max_rows && static_cast<Eigen::Index>(rows.size()) > *overrides.max_rows) {
        rows.resize(static_cast<std::size_t>(*overrides.max_rows));
    }

    dataset::SelectedMatrix selected = dataset::select_features(rows, config.mask);

    const Eigen::Index seq_len =
        overrides.lookback_hours.value_or(static_cast<Eigen::Index>(config.lookback_days) *
                                          utc::kHoursPerDay);
    const Eigen::Index stride = overrides.stride.value_or(1);
    const Eigen::Index n_rows = selected.features.rows();
    if (n_rows <= seq_len) {
        throw DataError("experiment " + std::to_string(config.id) + " needs more than " +
                        std::to_string(seq_len) + " rows, got " +
                        std::to_string(n_rows));
    }

    // Scaler fitting sees only rows reachable from training windows.
    const Eigen::Index n_samples = (n_rows - seq_len - 1) / stride + 1;
    const Eigen::Index n_train =
        dataset::train_sample_count(n_samples, overrides.train_fraction);
    if (n_train == 0 || n_train == n_samples) {
        throw DataError("experiment " + std::to_string(config.id) +
                        ": split yields an empty side");
    }
    const Eigen::Index train_rows = (n_train - 1) * stride + seq_len + 1;
    const dataset::ScalerState scaler =
        dataset::fit_scaler(selected.features, selected.target, train_rows);

    dataset::WindowedDataset windows = dataset::WindowedDataset::build(
        dataset::apply_scaler(scaler, selected.features),
        dataset::apply_target_scaler(scaler, selected.target),
        selected.timestamps, seq_len, stride, scaler);

    auto [train_set, test_set] =
        dataset::split_train_test(windows, overrides.train_fraction);

    nn::Rng rng(overrides.seed);
    nn::SequenceModel<double> model(
        model_spec_for(config.architecture, config.units),
        selected.features.cols(), rng);

    nn::TrainConfig train_config;
    train_config.batch_size = config.batch_size;
    train_config.epochs = overrides.epochs.value_or(config.epochs);
    train_config.learning_rate = overrides.learning_rate.value_or(1e-3);
    train_config.seed = overrides.seed;
    const nn::TrainResult trained = nn::train(model, train_set, train_config);

    ExperimentResult result;
    result.config_id = config.id;
    result.epoch_loss = trained.epoch_loss;
    result.seed = overrides.seed;
    result.architecture_label = to_string(config.architecture);
    result.seq_len = seq_len;
    result.stride = stride;
    result.n_samples = n_samples;
    result.split_index = n_train;
    result.scaler = scaler;

    const Eigen::VectorXd train_pred = nn::predict_unscaled(model, train_set);
    const Eigen::VectorXd train_actual = nn::actual_unscaled(train_set);
    const Eigen::VectorXd test_pred = nn::predict_unscaled(model, test_set);
    const Eigen::VectorXd test_actual = nn::actual_unscaled(test_set);

    result.metrics.train_rmse = nn::rmse<double>(train_pred, train_actual);
    result.metrics.train_mae = nn::mae<double>(train_pred, train_actual);
    result.metrics.test_rmse = nn::rmse<double>(test_pred, test_actual);
    result.metrics.test_mae = nn::mae<double>(test_pred, test_actual);
    if (!std::isfinite(result.metrics.train_rmse) ||
        !std::isfinite(result.metrics.test_rmse)) {
        throw TrainingDiverged("experiment " + std::to_string(config.id) +
                               " produced non-finite metrics");
    }

    result.train_predictions.reserve(static_cast<std::size_t>(train_set.n_samples()));
    for (Eigen::Index i = 0; i < train_set.n_samples(); ++i) {
        result.train_predictions.push_back(
            {train_set.target_time(i), train_actual[i], train_pred[i]});
    }
    result.test_predictions.reserve(static_cast<std::size_t>(test_set.n_samples()));
    for (Eigen::Index i = 0; i < test_set.n_samples(); ++i) {
        result.test_predictions.push_back(
            {test_set.target_time(i), test_actual[i], test_pred[i]});
    }

    if (!overrides.save_model_dir.empty()) {
        std::filesystem::create_directories(overrides.save_model_dir);
        nn::save_model(model, overrides.save_model_dir + "/experiment_" +
                                  std::to_string(config.id) + ".sfnn");
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
            .count();
    return result;
}

std::vector<ExperimentResult> run_many(const std::vector<ExperimentConfig>& configs,
                                       const std::vector<fuse::FeatureRow>& table,
                                       const RunOverrides& overrides,
                                       int parallelism) {
    std::vector<ExperimentResult> results(configs.size());
    if (parallelism <= 1) {
        for (std::size_t i = 0; i < configs.size(); ++i) {
            results[i] = run_experiment(configs[i], table, overrides);
        }
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> failures(configs.size());
    const int n_workers = std::min<int>(parallelism, static_cast<int>(configs.size()));
    for (int w = 0; w < n_workers; ++w) {
        workers.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= configs.size()) return;
                try {
                    results[i] = run_experiment(configs[i], table, overrides);
                } catch (...) {
                    failures[i] = std::current_exception();
                }
            }
        });
    }
    for (std::thread& worker : workers) worker.join();
    for (const std::exception_ptr& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
    return results;
}

}  // namespace sentiforge::runner
