#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "sentiforge/dataset.hpp"
#include "sentiforge/time.hpp"

using namespace sentiforge;
using dataset::FeatureMask;

namespace {

// Synthetic merged table with recognizable per-column values.
std::vector<fuse::FeatureRow> synthetic_table(std::size_t n_rows) {
    std::vector<fuse::FeatureRow> rows(n_rows);
    const std::int64_t h0 = utc::parse_timestamp("2018-01-01T00:00:00Z");
    for (std::size_t r = 0; r < n_rows; ++r) {
        rows[r].timestamp = h0 + static_cast<std::int64_t>(r) * utc::kSecondsPerHour;
        for (std::size_t c = 0; c < fuse::kFeatureCount; ++c) {
            rows[r].values[c] = static_cast<double>(r) + 1000.0 * double(c);
        }
    }
    return rows;
}

FeatureMask full_mask(bool sum_sentiment) {
    FeatureMask mask;
    mask.flags.fill(true);
    mask.sum_sentiment = sum_sentiment;
    return mask;
}

}  // namespace

TEST_CASE("mask validation") {
    FeatureMask empty;
    CHECK_THROWS_AS(dataset::validate(empty), ConfigError);

    FeatureMask lopsided;
    lopsided.flag("gnews_flair") = true;
    lopsided.flag("close_BTCUSDT") = true;
    lopsided.sum_sentiment = true;  // reddit_flair missing
    CHECK_THROWS_AS(dataset::validate(lopsided), ConfigError);
    lopsided.flag("reddit_flair") = true;
    CHECK_NOTHROW(dataset::validate(lopsided));
    CHECK_THROWS_AS(lopsided.flag("bogus_column"), ConfigError);
}

TEST_CASE("select_features plain and summed") {
    const auto table = synthetic_table(10);

    SUBCASE("full mask without summation keeps 19 columns in order") {
        const auto selected = dataset::select_features(table, full_mask(false));
        CHECK(selected.features.cols() == 19);
        CHECK(selected.column_names.front() == "open_BTCUSDT");
        CHECK(selected.column_names.back() == "reddit_sid_neg");
        // target is close_BTCUSDT (merged column 3)
        CHECK(selected.target[0] == table[0].values[3]);
        CHECK(selected.timestamps.size() == 10);
    }

    SUBCASE("summation collapses ten sentiment columns to five") {
        const auto selected = dataset::select_features(table, full_mask(true));
        CHECK(selected.features.cols() == 14);
        CHECK(selected.column_names[9] == "sum_flair");
        // summed value equals explicit pair addition (gnews idx 9, reddit 16)
        for (int r = 0; r < 10; ++r) {
            CHECK(selected.features(r, 9) ==
                  table[r].values[9] + table[r].values[16]);
        }
    }

    SUBCASE("documented summation example") {
        auto table1 = synthetic_table(1);
        table1[0].values[fuse::feature_index("gnews_flair")] = 0.0426;
        table1[0].values[fuse::feature_index("reddit_flair")] = -0.2672;
        FeatureMask mask;
        mask.flag("close_BTCUSDT") = true;
        mask.flag("gnews_flair") = true;
        mask.flag("reddit_flair") = true;
        mask.sum_sentiment = true;
        const auto selected = dataset::select_features(table1, mask);
        REQUIRE(selected.features.cols() == 2);
        CHECK(selected.features(0, 1) == doctest::Approx(-0.2246));
    }

    SUBCASE("BTC-candles-only mask yields five columns") {
        FeatureMask mask;
        for (const char* name : {"open_BTCUSDT", "high_BTCUSDT", "low_BTCUSDT",
                                 "close_BTCUSDT", "volume_BTCUSDT"}) {
            mask.flag(name) = true;
        }
        const auto selected = dataset::select_features(table, mask);
        CHECK(selected.features.cols() == 5);
    }
}

TEST_CASE("scaler maps to unit interval and inverts") {
    Eigen::MatrixXd features(4, 2);
    features << 10, 5, 20, 5, 15, 5, 12, 5;  // col 1 constant
    Eigen::VectorXd target(4);
    target << 100, 200, 150, 120;

    const auto scaler = dataset::fit_scaler(features, target, 4);
    const Eigen::MatrixXd scaled = dataset::apply_scaler(scaler, features);
    CHECK(scaled(0, 0) == 0.0);
    CHECK(scaled(1, 0) == 1.0);
    CHECK(scaled(3, 0) == doctest::Approx(0.2));
    // constant feature maps to zero
    for (int r = 0; r < 4; ++r) CHECK(scaled(r, 1) == 0.0);

    // midpoint example
    Eigen::MatrixXd probe(1, 2);
    probe << 15, 5;
    CHECK(dataset::apply_scaler(scaler, probe)(0, 0) == doctest::Approx(0.5));

    const Eigen::MatrixXd recovered = dataset::invert_scaler(scaler, scaled);
    CHECK((recovered - features).cwiseAbs().maxCoeff() < 1e-9);

    const Eigen::VectorXd t_scaled = dataset::apply_target_scaler(scaler, target);
    const Eigen::VectorXd t_back = dataset::invert_target_scaler(scaler, t_scaled);
    CHECK((t_back - target).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("scaler round trip on random matrices") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-1e4, 1e4);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index rows = 5 + static_cast<Eigen::Index>(rng() % 40);
        const Eigen::Index cols = 1 + static_cast<Eigen::Index>(rng() % 8);
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c) {
            for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = dist(rng);
        }
        Eigen::VectorXd t = m.col(0);
        const auto scaler = dataset::fit_scaler(m, t, rows);
        const auto scaled = dataset::apply_scaler(scaler, m);
        CHECK(scaled.minCoeff() >= 0.0);
        CHECK(scaled.maxCoeff() <= 1.0 + 1e-12);
        const auto back = dataset::invert_scaler(scaler, scaled);
        CHECK((back - m).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("scaler is fitted on the training prefix only") {
    Eigen::MatrixXd features(4, 1);
    features << 0, 10, 100, 1000;
    Eigen::VectorXd target = features.col(0);
    const auto train_only = dataset::fit_scaler(features, target, 2);
    const auto full = dataset::fit_scaler(features, target, 4);
    CHECK(train_only.feature_max[0] == 10.0);
    CHECK(full.feature_max[0] == 1000.0);  // allowed to differ
    CHECK(train_only.target_max == 10.0);
}

TEST_CASE("windowing arithmetic") {
    auto make = [](std::size_t rows, int lookback_days, Eigen::Index stride) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(rows), 3);
        Eigen::VectorXd t = m.col(0);
        std::vector<std::int64_t> ts(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            ts[i] = static_cast<std::int64_t>(i) * utc::kSecondsPerHour;
        }
        return dataset::make_windows(std::move(m), std::move(t), std::move(ts),
                                     lookback_days, stride, dataset::ScalerState{});
    };

    SUBCASE("16536 rows with 60-day lookback") {
        const auto ds = make(16536, 60, 1);
        CHECK(ds.seq_len() == 1440);
        CHECK(ds.n_samples() == 15096);
        CHECK(ds.n_samples() + ds.seq_len() == 16536);
    }
    SUBCASE("120-day lookback doubles the window") {
        const auto ds = make(4000, 120, 1);
        CHECK(ds.seq_len() == 2880);
        CHECK(ds.n_samples() == 4000 - 2880);
    }
    SUBCASE("boundary: rows == seq_len + 1 gives one sample") {
        const auto ds = make(25, 1, 1);
        CHECK(ds.seq_len() == 24);
        CHECK(ds.n_samples() == 1);
    }
    SUBCASE("insufficient rows reports the minimum") {
        try {
            make(24, 1, 1);
            FAIL("expected throw");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("24") != std::string::npos);
        }
    }
    SUBCASE("stride reduces sample count") {
        const auto ds = dataset::make_windows_hours(
            Eigen::MatrixXd::Random(100, 2), Eigen::VectorXd::Random(100),
            std::vector<std::int64_t>(100, 0), 10, 4, dataset::ScalerState{});
        // starts 0,4,...,88 -> 23 samples (89 valid starts, stride 4)
        CHECK(ds.n_samples() == 23);
    }
}

TEST_CASE("window contents and targets") {
    const Eigen::Index rows = 30;
    Eigen::MatrixXd m(rows, 2);
    for (Eigen::Index r = 0; r < rows; ++r) {
        m(r, 0) = static_cast<double>(r);
        m(r, 1) = 100.0 + static_cast<double>(r);
    }
    Eigen::VectorXd t = m.col(0) * 10.0;
    std::vector<std::int64_t> ts(static_cast<std::size_t>(rows));
    for (Eigen::Index r = 0; r < rows; ++r) {
        ts[static_cast<std::size_t>(r)] = r * utc::kSecondsPerHour;
    }
    const auto ds = dataset::make_windows_hours(m, t, ts, 5, 1,
                                                dataset::ScalerState{});
    REQUIRE(ds.n_samples() == 25);
    CHECK(ds.target_of(0) == 50.0);  // row 5
    CHECK(ds.target_of(24) == 290.0);
    CHECK(ds.target_time(0) == 5 * utc::kSecondsPerHour);

    const auto batch = ds.gather({0, 7});
    REQUIRE(batch.size() == 5);
    CHECK(batch[0](0, 0) == 0.0);   // sample 0, step 0, feature 0
    CHECK(batch[0](0, 1) == 7.0);   // sample 7 starts at row 7
    CHECK(batch[4](1, 1) == 111.0); // sample 7, step 4, feature 1
}

TEST_CASE("chronological split") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(124, 2);
    Eigen::VectorXd t = m.col(0);
    std::vector<std::int64_t> ts(124);
    for (std::size_t i = 0; i < 124; ++i) {
        ts[i] = static_cast<std::int64_t>(i) * utc::kSecondsPerHour;
    }
    const auto ds = dataset::make_windows_hours(std::move(m), std::move(t),
                                                std::move(ts), 24, 1,
                                                dataset::ScalerState{});
    REQUIRE(ds.n_samples() == 100);

    const auto [train, test] = dataset::split_train_test(ds, 0.8);
    CHECK(train.n_samples() == 80);
    CHECK(test.n_samples() == 20);

    // all train targets precede all test targets; test suffix ends at the
    // final table row
    CHECK(train.target_time(79) < test.target_time(0));
    CHECK(test.target_time(19) == 123 * utc::kSecondsPerHour);
    for (Eigen::Index i = 1; i < test.n_samples(); ++i) {
        CHECK(test.target_time(i - 1) < test.target_time(i));
    }

    CHECK_THROWS_AS(dataset::split_train_test(ds, 0.0), ConfigError);
    CHECK_THROWS_AS(dataset::split_train_test(ds, 1.0), ConfigError);
    // fraction so small the train side would be empty
    CHECK_THROWS_AS(dataset::split_train_test(ds, 0.001), DataError);
}

TEST_CASE("dataset meta sidecar") {
    namespace fs = std::filesystem;
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(50, 2);
    Eigen::VectorXd t = m.col(0);
    std::vector<std::int64_t> ts(50, 0);
    auto scaler = dataset::fit_scaler(m, t, 40);
    const auto ds = dataset::make_windows_hours(std::move(m), std::move(t),
                                                std::move(ts), 10, 1, scaler);
    const auto path = (fs::temp_directory_path() / "ds.meta.json").string();
    dataset::write_meta(ds, 32, path);
    std::ifstream in(path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    CHECK(text.find("\"seq_len\": 10") != std::string::npos);
    CHECK(text.find("\"split_index\": 32") != std::string::npos);
}
