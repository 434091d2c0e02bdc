#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sentiforge/runner.hpp"
#include "synthetic.hpp"

using namespace sentiforge;
using runner::Architecture;
using runner::ExperimentConfig;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// summary.csv minus its wall-time column (the one nondeterministic field).
std::string strip_last_column(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        const auto comma = line.rfind(',');
        out << line.substr(0, comma) << '\n';
    }
    return out.str();
}

int flag_count(const dataset::FeatureMask& mask) {
    int n = 0;
    for (bool b : mask.flags) n += b;
    return n;
}

}  // namespace

TEST_CASE("builtin matrix transcription") {
    const auto& matrix = runner::builtin_matrix();
    REQUIRE(matrix.size() == 17);

    std::set<int> ids;
    for (const ExperimentConfig& config : matrix) {
        ids.insert(config.id);
        CHECK(config.batch_size == 128);
        CHECK(config.epochs == 5);
        CHECK((config.lookback_days == 60 || config.lookback_days == 120));
        CHECK((config.units == 32 || config.units == 64));
        CHECK_NOTHROW(dataset::validate(config.mask));
        // notes carry 1 exactly when the mask sums sentiment
        const bool has_note1 =
            std::find(config.notes.begin(), config.notes.end(), 1) !=
            config.notes.end();
        CHECK(has_note1 == config.mask.sum_sentiment);
    }
    CHECK(ids.size() == 17);
    CHECK(*ids.begin() == 1);
    CHECK(*ids.rbegin() == 17);

    const auto& c4 = matrix[3];
    CHECK(c4.id == 4);
    CHECK(c4.lookback_days == 120);
    CHECK(c4.units == 64);
    CHECK(c4.notes == std::vector<int>{1, 2});
    CHECK(flag_count(c4.mask) == 19);
    CHECK(c4.architecture == Architecture::Lstm);

    const auto& c5 = matrix[4];
    CHECK(c5.id == 5);
    CHECK(c5.lookback_days == 60);
    CHECK(c5.units == 32);
    CHECK_FALSE(c5.mask.sum_sentiment);
    CHECK(flag_count(c5.mask) == 5);
    CHECK(c5.mask.flag("open_BTCUSDT"));
    CHECK(c5.mask.flag("close_BTCUSDT"));
    CHECK_FALSE(c5.mask.flag("close_LTCUSD"));
    CHECK_FALSE(c5.mask.flag("gnews_flair"));

    const auto& c7 = matrix[6];
    CHECK(flag_count(c7.mask) == 11);  // 6 price/volume + 5 news channels
    CHECK(c7.mask.flag("gnews_flair"));
    CHECK_FALSE(c7.mask.flag("reddit_flair"));
    CHECK_FALSE(c7.mask.sum_sentiment);

    const auto& c12 = matrix[11];
    CHECK(c12.architecture == Architecture::LstmLstm);
    CHECK(c12.lookback_days == 120);
    CHECK(c12.units == 64);

    // notes 4 and 7 share the same stacked architecture
    CHECK(matrix[12].architecture == Architecture::LstmGru);
    CHECK(matrix[15].architecture == Architecture::LstmGru);
    CHECK(matrix[12].notes == std::vector<int>{1, 4});
    CHECK(matrix[15].notes == std::vector<int>{1, 7});
    CHECK(flag_count(matrix[15].mask) == 8);

    const auto& c17 = matrix[16];
    CHECK(c17.id == 17);
    CHECK(c17.notes == std::vector<int>{1, 8});
    CHECK(c17.architecture == Architecture::Conv1dLstm);
    CHECK(flag_count(c17.mask) == 19);
}

TEST_CASE("reference metrics metadata covers all experiments") {
    const auto& metrics = runner::reference_metrics();
    REQUIRE(metrics.size() == 17);
    CHECK(metrics.at(4).test_rmse == doctest::Approx(434.87));
    CHECK(metrics.at(5).test_rmse == doctest::Approx(173.72));
    CHECK(metrics.at(17).test_rmse == doctest::Approx(2615.3));
    CHECK(std::string(runner::kReferenceMetricsCaveat).find("not reproducible") !=
          std::string::npos);
}

TEST_CASE("configs round trip through the key-value format") {
    for (const ExperimentConfig& config : runner::builtin_matrix()) {
        const std::string text = runner::serialize_config(config);
        const ExperimentConfig back = runner::parse_config(text);
        CAPTURE(config.id);
        CHECK(back == config);
    }
    CHECK_THROWS_AS(runner::parse_config("id = 1\n"), ConfigError);  // no features
    CHECK_THROWS_AS(runner::parse_config("bogus_key = 3\nfeatures = close_BTCUSDT\n"),
                    ConfigError);
    CHECK_THROWS_AS(runner::parse_config("features = close_BTCUSDT\nepochs = 0\n"),
                    ConfigError);
}

TEST_CASE("architecture name round trip") {
    for (Architecture arch :
         {Architecture::Lstm, Architecture::LstmLstm, Architecture::LstmGru,
          Architecture::Gru, Architecture::GruGru, Architecture::Conv1dLstm}) {
        CHECK(runner::architecture_from_string(runner::to_string(arch)) == arch);
    }
    CHECK_THROWS_AS(runner::architecture_from_string("transformer"), ConfigError);
}

TEST_CASE("experiment on a constant-price fixture converges to the constant") {
    const auto table = testing::synthetic_merged(400, 1, /*constant_price=*/true);
    runner::RunOverrides overrides;
    overrides.lookback_hours = 24;
    overrides.epochs = 2;
    const auto result =
        runner::run_experiment(runner::builtin_matrix()[4], table, overrides);
    CHECK(result.metrics.test_rmse < 130.0);  // < 1% of 13000
    CHECK(result.metrics.train_rmse < 130.0);
    CHECK(result.metrics.test_mae <= result.metrics.test_rmse);
    CHECK(result.epoch_loss.size() == 2);
}

TEST_CASE("price history beats a price-blind sentiment ablation") {
    // Prices follow a clean daily cycle; sentiment is independent noise, so
    // this ordering holds by construction once the price model has enough
    // steps to latch onto the cycle.
    const auto table = testing::synthetic_merged(700, 3);
    runner::RunOverrides overrides;
    overrides.lookback_hours = 24;
    overrides.epochs = 12;
    overrides.learning_rate = 1e-2;

    ExperimentConfig price_only = runner::builtin_matrix()[4];  // BTC candles
    price_only.units = 16;

    ExperimentConfig sentiment_only = price_only;
    sentiment_only.mask = dataset::FeatureMask{};
    for (const char* name :
         {"gnews_flair", "gnews_tb_polarity", "gnews_tb_subjectivity",
          "gnews_sid_pos", "gnews_sid_neg", "reddit_flair", "reddit_tb_polarity",
          "reddit_tb_subjectivity", "reddit_sid_pos", "reddit_sid_neg"}) {
        sentiment_only.mask.flag(name) = true;
    }

    const auto with_price = runner::run_experiment(price_only, table, overrides);
    const auto without_price =
        runner::run_experiment(sentiment_only, table, overrides);
    CHECK(with_price.metrics.test_rmse < without_price.metrics.test_rmse);
}

TEST_CASE("run_experiment plumbing") {
    const auto table = testing::synthetic_merged(300, 4);
    runner::RunOverrides overrides;
    overrides.lookback_hours = 12;
    overrides.epochs = 1;

    const auto result =
        runner::run_experiment(runner::builtin_matrix()[0], table, overrides);
    CHECK(result.config_id == 1);
    CHECK(result.seed == 42);
    // prediction counts match the split sizes: 288 samples, floor(0.8*288)=230
    CHECK(result.train_predictions.size() == 230);
    CHECK(result.test_predictions.size() == 58);
    CHECK(result.train_predictions.front().timestamp <
          result.test_predictions.front().timestamp);
    CHECK(std::isfinite(result.metrics.test_rmse));
    CHECK(result.metrics.test_rmse >= result.metrics.test_mae);

    SUBCASE("insufficient rows is a data error naming the minimum") {
        runner::RunOverrides too_long;
        too_long.lookback_hours = 512;
        try {
            runner::run_experiment(runner::builtin_matrix()[0], table, too_long);
            FAIL("expected throw");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("512") != std::string::npos);
        }
    }

    SUBCASE("max_rows truncates the table") {
        runner::RunOverrides truncated = overrides;
        truncated.max_rows = 100;
        const auto smaller =
            runner::run_experiment(runner::builtin_matrix()[0], table, truncated);
        CHECK(smaller.train_predictions.size() + smaller.test_predictions.size() ==
              100 - 12);
    }
}

TEST_CASE("emit_report writes summary, predictions, plots") {
    namespace fs = std::filesystem;
    const auto table = testing::synthetic_merged(300, 5);
    runner::RunOverrides overrides;
    overrides.lookback_hours = 12;
    overrides.epochs = 1;

    std::vector<ExperimentConfig> configs{runner::builtin_matrix()[4],
                                          runner::builtin_matrix()[5]};
    const auto results = runner::run_many(configs, table, overrides);

    const fs::path dir = fs::temp_directory_path() / "sentiforge_report";
    fs::remove_all(dir);
    const std::string summary_path = runner::emit_report(results, dir.string());

    const std::string summary = read_file(summary_path);
    CHECK(summary.rfind("id,train_rmse,test_rmse,train_mae,test_mae,seed,"
                        "wall_time_s\n", 0) == 0);
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 3);  // header + 2

    for (int id : {5, 6}) {
        const fs::path exp_dir = dir / ("experiment_" + std::to_string(id));
        CHECK(fs::exists(exp_dir / "predictions.csv"));
        CHECK(fs::exists(exp_dir / "plot.svg"));
        CHECK(fs::exists(exp_dir / "meta.json"));
        const std::string pred = read_file((exp_dir / "predictions.csv").string());
        CHECK(pred.rfind("timestamp,actual,predicted,split\n", 0) == 0);
        CHECK(pred.find(",train\n") != std::string::npos);
        CHECK(pred.find(",test\n") != std::string::npos);
        const std::string svg = read_file((exp_dir / "plot.svg").string());
        CHECK(svg.rfind("<svg", 0) == 0);
        CHECK(svg.find("polyline") != std::string::npos);
        CHECK(svg.find("seed 42") != std::string::npos);
    }

    SUBCASE("rerun with the same seed matches outside the timing column") {
        const fs::path dir2 = fs::temp_directory_path() / "sentiforge_report2";
        fs::remove_all(dir2);
        const auto again = runner::run_many(configs, table, overrides);
        const std::string second =
            read_file(runner::emit_report(again, dir2.string()));
        CHECK(strip_last_column(summary) == strip_last_column(second));
    }
}

TEST_CASE("parallel execution matches sequential results") {
    const auto table = testing::synthetic_merged(260, 6);
    runner::RunOverrides overrides;
    overrides.lookback_hours = 12;
    overrides.epochs = 1;
    std::vector<ExperimentConfig> configs{
        runner::builtin_matrix()[4], runner::builtin_matrix()[5],
        runner::builtin_matrix()[7], runner::builtin_matrix()[8]};

    const auto sequential = runner::run_many(configs, table, overrides, 1);
    const auto parallel = runner::run_many(configs, table, overrides, 4);
    REQUIRE(sequential.size() == parallel.size());
    for (std::size_t i = 0; i < sequential.size(); ++i) {
        CHECK(sequential[i].metrics.test_rmse == parallel[i].metrics.test_rmse);
        CHECK(sequential[i].epoch_loss == parallel[i].epoch_loss);
    }
}
