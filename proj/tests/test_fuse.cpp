#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "sentiforge/fuse.hpp"
#include "sentiforge/ingest.hpp"
#include "sentiforge/time.hpp"

using namespace sentiforge;
using pipeline::DailyVector;
using pipeline::HourlyVector;
using sentiment::SentimentVector;

namespace {

const std::int64_t kDay1 = utc::parse_day("2018-01-01");
const std::int64_t kH0 = kDay1 * utc::kSecondsPerDay;

struct GoldenInputs {
    std::vector<HourlyVector> gnews;
    std::vector<HourlyVector> reddit;
    std::vector<OhlcvBar> btc, ltc, eth;
};

GoldenInputs load_golden_inputs() {
    GoldenInputs in;
    in.gnews = fuse::expand_daily_to_hourly(
        pipeline::load_daily_sentiment(SENTIFORGE_FIXTURES_DIR
                                       "/fuse/gnews_daily.csv"));
    in.reddit = pipeline::load_hourly_sentiment(SENTIFORGE_FIXTURES_DIR
                                                "/fuse/reddit_hourly.csv");
    ingest::FetchOptions options;
    options.fixtures_dir = SENTIFORGE_FIXTURES_DIR "/ingest";
    const std::int64_t end = kH0 + 5 * utc::kSecondsPerHour;
    in.btc = ingest::fetch_klines(Pair::BtcUsdt, kH0, end, options).bars;
    in.ltc = ingest::fetch_klines(Pair::LtcUsd, kH0, end, options).bars;
    in.eth = ingest::fetch_klines(Pair::EthUsd, kH0, end, options).bars;
    return in;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("merged header matches the canonical column order") {
    const auto& names = fuse::feature_names();
    CHECK(names.size() == 23);
    CHECK(names.front() == "open_BTCUSDT");
    CHECK(names[8] == "volume_ETHUSD");
    CHECK(names[9] == "gnews_flair");
    CHECK(names[15] == "gnews_sid_com");
    CHECK(names[16] == "reddit_flair");
    CHECK(names.back() == "reddit_sid_com");
    CHECK(fuse::feature_index("close_BTCUSDT") == 3);
    CHECK_THROWS_AS(fuse::feature_index("nope"), ConfigError);
}

TEST_CASE("expand_daily_to_hourly replicates each day 24 times") {
    SentimentVector v;
    v.flair = 0.0426;
    const auto hourly = fuse::expand_daily_to_hourly({{kDay1, v}});
    REQUIRE(hourly.size() == 24);
    for (int h = 0; h < 24; ++h) {
        CHECK(hourly[h].first == kH0 + h * utc::kSecondsPerHour);
        CHECK(hourly[h].second.flair == 0.0426);
    }

    SUBCASE("duplicate day is a hard error") {
        CHECK_THROWS_AS(fuse::expand_daily_to_hourly({{kDay1, v}, {kDay1, v}}),
                        DataError);
    }
    SUBCASE("non-contiguous days are a hard error") {
        CHECK_THROWS_AS(
            fuse::expand_daily_to_hourly({{kDay1, v}, {kDay1 + 2, v}}),
            DataError);
    }
    SUBCASE("689 contiguous days make 16536 rows") {
        std::vector<DailyVector> days;
        for (std::int64_t d = 0; d < 689; ++d) days.emplace_back(kDay1 + d, v);
        CHECK(fuse::expand_daily_to_hourly(days).size() == 16536);
        // calendar check: 2018-01-01 .. 2019-11-20 inclusive is 689 days
        CHECK(utc::parse_day("2019-11-20") - kDay1 + 1 == 689);
    }
}

TEST_CASE("golden fusion reproduces the documented cells") {
    const GoldenInputs in = load_golden_inputs();
    const fuse::MergeResult merged =
        fuse::merge_all(in.gnews, in.reddit, in.btc, in.ltc, in.eth);

    REQUIRE(merged.rows.size() == 5);
    CHECK(merged.fills.empty());

    const auto idx = [](const char* name) { return fuse::feature_index(name); };
    const double expected_open[5] = {13820.26, 13557.88, 13262.85, 13320.00,
                                     13372.00};
    const double expected_eth_vol[5] = {625.29, 710.89, 849.26, 556.40, 738.59};
    const double expected_reddit_flair[5] = {0.0, -0.2672, -0.3008, 0.0825,
                                             0.4437};
    const double expected_reddit_com[5] = {0.0, 0.1813, 0.3301, 0.2801, 0.3418};
    for (int r = 0; r < 5; ++r) {
        const fuse::FeatureRow& row = merged.rows[r];
        CHECK(row.timestamp == kH0 + r * utc::kSecondsPerHour);
        CHECK(row.values[idx("open_BTCUSDT")] == expected_open[r]);
        CHECK(row.values[idx("volume_ETHUSD")] == expected_eth_vol[r]);
        // daily news values replicate across all five hours
        CHECK(row.values[idx("gnews_flair")] == 0.0426);
        CHECK(row.values[idx("gnews_sid_com")] == 0.6247);
        CHECK(row.values[idx("reddit_flair")] == expected_reddit_flair[r]);
        CHECK(row.values[idx("reddit_sid_com")] == expected_reddit_com[r]);
    }
}

TEST_CASE("merged csv cells are byte-exact and reruns are identical") {
    namespace fs = std::filesystem;
    const GoldenInputs in = load_golden_inputs();
    const fs::path dir = fs::temp_directory_path() / "sentiforge_fuse";
    fs::create_directories(dir);

    auto run = [&](const std::string& name) {
        const auto merged = fuse::merge_all(in.gnews, in.reddit, in.btc, in.ltc,
                                            in.eth);
        const std::string path = (dir / name).string();
        fuse::save_merged(merged.rows, path);
        return path;
    };
    const std::string first = read_file(run("a.csv"));
    const std::string second = read_file(run("b.csv"));
    CHECK(first == second);
    CHECK_FALSE(first.empty());

    // spot-check raw cell text
    CHECK(first.find("2018-01-01T00:00:00Z,13820.26,") != std::string::npos);
    CHECK(first.find(",625.29,0.0426,") != std::string::npos);
    CHECK(first.find("timestamp,open_BTCUSDT,high_BTCUSDT,low_BTCUSDT,"
                     "close_BTCUSDT,volume_BTCUSDT,close_LTCUSD,volume_LTCUSD,"
                     "close_ETHUSD,volume_ETHUSD,gnews_flair,gnews_tb_polarity,"
                     "gnews_tb_subjectivity,gnews_sid_pos,gnews_sid_neg,"
                     "gnews_sid_neu,gnews_sid_com,reddit_flair,"
                     "reddit_tb_polarity,reddit_tb_subjectivity,reddit_sid_pos,"
                     "reddit_sid_neg,reddit_sid_neu,reddit_sid_com\n") == 0);

    // round trip through load_merged
    const auto merged = fuse::merge_all(in.gnews, in.reddit, in.btc, in.ltc, in.eth);
    const std::string path = (dir / "c.csv").string();
    fuse::save_merged(merged.rows, path);
    CHECK(fuse::load_merged(path) == merged.rows);
}

TEST_CASE("single-hour inputs merge to a single row") {
    SentimentVector g, r;
    g.flair = 0.1;
    r.flair = -0.1;
    OhlcvBar bar;
    bar.timestamp = kH0;
    bar.open = bar.high = bar.low = bar.close = 100.0;
    bar.volume = 1.0;
    const auto merged =
        fuse::merge_all({{kH0, g}}, {{kH0, r}}, {bar}, {bar}, {bar});
    REQUIRE(merged.rows.size() == 1);
    CHECK(merged.rows[0].values[fuse::feature_index("gnews_flair")] == 0.1);
}

TEST_CASE("price gaps interpolate up to two hours and abort beyond") {
    const GoldenInputs in = load_golden_inputs();

    SUBCASE("one missing interior hour is linearly interpolated") {
        std::vector<OhlcvBar> btc = in.btc;
        btc.erase(btc.begin() + 2);  // drop 02:00
        const auto merged = fuse::merge_all(in.gnews, in.reddit, btc, in.ltc, in.eth);
        REQUIRE(merged.rows.size() == 5);
        const auto& row = merged.rows[2];
        // midpoint of hours 01:00 and 03:00
        CHECK(row.values[fuse::feature_index("open_BTCUSDT")] ==
              doctest::Approx((13557.88 + 13320.00) / 2));
        CHECK(row.values[fuse::feature_index("close_BTCUSDT")] ==
              doctest::Approx((13262.85 + 13372.00) / 2));
        CHECK(row.values[fuse::feature_index("volume_BTCUSDT")] == 0.0);

        // fill report names all five BTC columns for the hour
        std::size_t btc_fills = 0;
        for (const fuse::FillRecord& fill : merged.fills) {
            if (fill.timestamp == kH0 + 2 * utc::kSecondsPerHour) {
                ++btc_fills;
                if (fill.column == "volume_BTCUSDT") CHECK(fill.method == "zero");
                else CHECK(fill.method == "interpolate");
            }
        }
        CHECK(btc_fills == 5);
    }

    SUBCASE("two consecutive missing hours still interpolate") {
        std::vector<OhlcvBar> eth = in.eth;
        eth.erase(eth.begin() + 1, eth.begin() + 3);  // drop 01:00 and 02:00
        const auto merged = fuse::merge_all(in.gnews, in.reddit, in.btc, in.ltc, eth);
        REQUIRE(merged.rows.size() == 5);
        const double c0 = 728.77, c3 = 733.19;
        CHECK(merged.rows[1].values[fuse::feature_index("close_ETHUSD")] ==
              doctest::Approx(c0 + (c3 - c0) / 3.0));
        CHECK(merged.rows[2].values[fuse::feature_index("close_ETHUSD")] ==
              doctest::Approx(c0 + 2.0 * (c3 - c0) / 3.0));
    }

    SUBCASE("a three-hour gap aborts") {
        std::vector<OhlcvBar> btc = in.btc;
        btc.erase(btc.begin() + 1, btc.begin() + 4);
        CHECK_THROWS_AS(fuse::merge_all(in.gnews, in.reddit, btc, in.ltc, in.eth),
                        DataError);
    }
}

TEST_CASE("sentiment gaps zero-fill inside coverage") {
    GoldenInputs in = load_golden_inputs();
    std::vector<HourlyVector> reddit = in.reddit;
    reddit.erase(reddit.begin() + 2);  // drop hour 02:00
    const auto merged = fuse::merge_all(in.gnews, reddit, in.btc, in.ltc, in.eth);
    REQUIRE(merged.rows.size() == 5);
    CHECK(merged.rows[2].values[fuse::feature_index("reddit_flair")] == 0.0);
    bool recorded = false;
    for (const fuse::FillRecord& fill : merged.fills) {
        if (fill.column == "reddit_*" && fill.method == "zero") recorded = true;
    }
    CHECK(recorded);
}

TEST_CASE("empty intersection is a hard error") {
    const GoldenInputs in = load_golden_inputs();
    std::vector<HourlyVector> late_reddit;
    SentimentVector v;
    late_reddit.emplace_back(kH0 + 100 * utc::kSecondsPerHour, v);
    CHECK_THROWS_AS(
        fuse::merge_all(in.gnews, late_reddit, in.btc, in.ltc, in.eth), DataError);
}

TEST_CASE("join is insensitive to input row order") {
    const GoldenInputs in = load_golden_inputs();
    const auto baseline =
        fuse::merge_all(in.gnews, in.reddit, in.btc, in.ltc, in.eth);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        auto gnews = in.gnews;
        auto reddit = in.reddit;
        auto btc = in.btc;
        std::shuffle(gnews.begin(), gnews.end(), rng);
        std::shuffle(reddit.begin(), reddit.end(), rng);
        std::shuffle(btc.begin(), btc.end(), rng);
        const auto shuffled = fuse::merge_all(gnews, reddit, btc, in.ltc, in.eth);
        CHECK(shuffled.rows == baseline.rows);
    }
}

TEST_CASE("hourly contiguity and daily replication invariants") {
    const GoldenInputs in = load_golden_inputs();
    const auto merged = fuse::merge_all(in.gnews, in.reddit, in.btc, in.ltc, in.eth);
    for (std::size_t i = 1; i < merged.rows.size(); ++i) {
        CHECK(merged.rows[i].timestamp - merged.rows[i - 1].timestamp ==
              utc::kSecondsPerHour);
    }
    // all rows of the day share identical gnews values
    for (std::size_t c = 9; c <= 15; ++c) {
        for (const auto& row : merged.rows) {
            CHECK(row.values[c] == merged.rows[0].values[c]);
        }
    }
}

TEST_CASE("load_merged rejects non-contiguous rows") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "merged_gap.csv";
    {
        std::ofstream out(path);
        out << "timestamp";
        for (const std::string& name : fuse::feature_names()) out << ',' << name;
        out << '\n';
        auto row = [&](const char* ts) {
            out << ts;
            for (std::size_t i = 0; i < fuse::kFeatureCount; ++i) out << ",1";
            out << '\n';
        };
        row("2018-01-01T00:00:00Z");
        row("2018-01-01T02:00:00Z");  // hour 01 missing
    }
    CHECK_THROWS_AS(fuse::load_merged(path.string()), DataError);
}

TEST_CASE("fill report file schema") {
    namespace fs = std::filesystem;
    const GoldenInputs in = load_golden_inputs();
    std::vector<OhlcvBar> btc = in.btc;
    btc.erase(btc.begin() + 2);
    const auto merged = fuse::merge_all(in.gnews, in.reddit, btc, in.ltc, in.eth);
    const fs::path path = fs::temp_directory_path() / "fills.csv";
    fuse::save_fill_report(merged.fills, path.string());
    const std::string text = read_file(path.string());
    CHECK(text.rfind("timestamp,column,method\n", 0) == 0);
    CHECK(text.find("2018-01-01T02:00:00Z,open_BTCUSDT,interpolate") !=
          std::string::npos);
    CHECK(text.find("2018-01-01T02:00:00Z,volume_BTCUSDT,zero") !=
          std::string::npos);
}
