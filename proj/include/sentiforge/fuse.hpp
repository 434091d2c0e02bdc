// Fusion of daily news sentiment, hourly Reddit sentiment, and three assets'
// candles into the final hourly feature table.
//
// Join semantics: inner join over the intersection of covered hours, after
// per-source gap filling. BTC contributes OHLCV; LTC and ETH contribute
// close and volume only. Isolated price gaps (at most two consecutive
// missing hours) are linearly interpolated with volume zero-filled; longer
// gaps abort. Sentiment gaps zero-fill. Every fill lands in a
// machine-readable report.

#ifndef SENTIFORGE_FUSE_HPP
#define SENTIFORGE_FUSE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sentiforge/pipeline.hpp"
#include "sentiforge/records.hpp"
#include "sentiforge/sentiment.hpp"

namespace sentiforge::fuse {

inline constexpr std::size_t kFeatureCount = 23;

// Feature names in canonical (output) order; merged.csv prepends "timestamp".
const std::array<std::string, kFeatureCount>& feature_names();
std::size_t feature_index(const std::string& name);  // throws ConfigError

struct FeatureRow {
    std::int64_t timestamp = 0;
    std::array<double, kFeatureCount> values{};

    bool operator==(const FeatureRow&) const = default;
};

// Replicates each day's vector across hours 00:00..23:00. Days must be
// contiguous; a duplicate day is a hard error.
std::vector<pipeline::HourlyVector> expand_daily_to_hourly(
    const std::vector<pipeline::DailyVector>& daily);

struct FillRecord {
    std::int64_t timestamp = 0;
    std::string column;
    std::string method;  // "interpolate" | "zero"
};

struct MergeResult {
    std::vector<FeatureRow> rows;   // ascending, hourly-contiguous
    std::vector<FillRecord> fills;
};

MergeResult merge_all(const std::vector<pipeline::HourlyVector>& gnews_hourly,
                      const std::vector<pipeline::HourlyVector>& reddit_hourly,
                      const std::vector<OhlcvBar>& btc_bars,
                      const std::vector<OhlcvBar>& ltc_bars,
                      const std::vector<OhlcvBar>& eth_bars);

void save_merged(const std::vector<FeatureRow>& rows, const std::string& path);
std::vector<FeatureRow> load_merged(const std::string& path);

void save_fill_report(const std::vector<FillRecord>& fills, const std::string& path);

}  // namespace sentiforge::fuse

#endif  // SENTIFORGE_FUSE_HPP
