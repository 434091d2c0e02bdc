#include "sentiforge/fuse.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sentiforge/common.hpp"
#include "sentiforge/csv.hpp"
#include "sentiforge/time.hpp"

namespace sentiforge::fuse {

using pipeline::DailyVector;
using pipeline::HourlyVector;
using sentiment::SentimentVector;

const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> names{
        "open_BTCUSDT",      "high_BTCUSDT",        "low_BTCUSDT",
        "close_BTCUSDT",     "volume_BTCUSDT",      "close_LTCUSD",
        "volume_LTCUSD",     "close_ETHUSD",        "volume_ETHUSD",
        "gnews_flair",       "gnews_tb_polarity",   "gnews_tb_subjectivity",
        "gnews_sid_pos",     "gnews_sid_neg",       "gnews_sid_neu",
        "gnews_sid_com",     "reddit_flair",        "reddit_tb_polarity",
        "reddit_tb_subjectivity", "reddit_sid_pos", "reddit_sid_neg",
        "reddit_sid_neu",    "reddit_sid_com"};
    return names;
}

std::size_t feature_index(const std::string& name) {
    const auto& names = feature_names();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ConfigError("unknown feature column: " + name);
    return static_cast<std::size_t>(it - names.begin());
}

std::vector<HourlyVector> expand_daily_to_hourly(
    const std::vector<DailyVector>& daily) {
    std::vector<DailyVector> sorted = daily;
    std::sort(sorted.begin(), sorted.end(),
              [](const DailyVector& a, const DailyVector& b) {
                  return a.first < b.first;
              });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].first == sorted[i - 1].first) {
            throw DataError("duplicate day in daily sentiment: " +
                            utc::format_day(sorted[i].first));
        }
        if (sorted[i].first != sorted[i - 1].first + 1) {
            throw DataError("daily sentiment days are not contiguous around " +
                            utc::format_day(sorted[i - 1].first));
        }
    }
    std::vector<HourlyVector> hourly;
    hourly.reserve(sorted.size() * utc::kHoursPerDay);
    for (const DailyVector& day : sorted) {
        const std::int64_t base = day.first * utc::kSecondsPerDay;
        for (int h = 0; h < utc::kHoursPerDay; ++h) {
            hourly.emplace_back(base + h * utc::kSecondsPerHour, day.second);
        }
    }
    return hourly;
}

namespace {

constexpr int kMaxInterpolatedRun = 2;

struct HourlyBars {
    std::map<std::int64_t, OhlcvBar> by_hour;
    std::int64_t first = 0;
    std::int64_t last = 0;
};

HourlyBars index_bars(const std::vector<OhlcvBar>& bars, const std::string& label) {
    if (bars.empty()) throw DataError(label + ": no bars to merge");
    HourlyBars indexed;
    for (const OhlcvBar& bar : bars) {
        if (!indexed.by_hour.emplace(bar.timestamp, bar).second) {
            throw DataError(label + ": duplicate bar at " +
                            utc::format_timestamp(bar.timestamp));
        }
    }
    indexed.first = indexed.by_hour.begin()->first;
    indexed.last = indexed.by_hour.rbegin()->first;
    return indexed;
}

// Fills interior gaps of at most kMaxInterpolatedRun hours by linear
// interpolation of prices (volume zero). Longer gaps abort.
void fill_price_gaps(HourlyBars& bars, const std::string& label,
                     const std::vector<std::string>& columns,
                     std::vector<FillRecord>& fills) {
    std::int64_t run_start = 0;
    int run_length = 0;
    for (std::int64_t t = bars.first; t <= bars.last; t += utc::kSecondsPerHour) {
        if (bars.by_hour.count(t)) {
            run_length = 0;
            continue;
        }
        if (run_length == 0) run_start = t;
        ++run_length;
        if (run_length > kMaxInterpolatedRun) {
            throw DataError(label + ": price gap longer than " +
                            std::to_string(kMaxInterpolatedRun) + " hours starting " +
                            utc::format_timestamp(run_start));
        }
        // Find the bracketing bars; both exist because the gap is interior.
        std::int64_t after = t;
        while (!bars.by_hour.count(after)) after += utc::kSecondsPerHour;
        const OhlcvBar& prev = bars.by_hour.at(t - utc::kSecondsPerHour);
        const OhlcvBar& next = bars.by_hour.at(after);
        const double span =
            static_cast<double>(after - (t - utc::kSecondsPerHour)) /
            utc::kSecondsPerHour;
        const double alpha = 1.0 / span;  // one hour forward of prev

        OhlcvBar filled;
        filled.timestamp = t;
        filled.open = prev.open + (next.open - prev.open) * alpha;
        filled.high = prev.high + (next.high - prev.high) * alpha;
        filled.low = prev.low + (next.low - prev.low) * alpha;
        filled.close = prev.close + (next.close - prev.close) * alpha;
        filled.volume = 0.0;
        bars.by_hour.emplace(t, filled);

        for (const std::string& column : columns) {
            fills.push_back({t, column,
                             column.rfind("volume", 0) == 0 ? "zero" : "interpolate"});
        }
    }
}

struct HourlySentiment {
    std::map<std::int64_t, SentimentVector> by_hour;
    std::int64_t first = 0;
    std::int64_t last = 0;
};

HourlySentiment index_sentiment(const std::vector<HourlyVector>& rows,
                                const std::string& label,
                                const std::string& column_prefix,
                                std::vector<FillRecord>& fills) {
    if (rows.empty()) throw DataError(label + ": no sentiment rows to merge");
    HourlySentiment indexed;
    for (const HourlyVector& row : rows) {
        if (!utc::is_hour_aligned(row.first)) {
            throw DataError(label + ": timestamp not hour-aligned: " +
                            utc::format_timestamp(row.first));
        }
        if (!indexed.by_hour.emplace(row.first, row.second).second) {
            throw DataError(label + ": duplicate hour " +
                            utc::format_timestamp(row.first));
        }
    }
    indexed.first = indexed.by_hour.begin()->first;
    indexed.last = indexed.by_hour.rbegin()->first;
    for (std::int64_t t = indexed.first; t <= indexed.last;
         t += utc::kSecondsPerHour) {
        if (indexed.by_hour.count(t)) continue;
        indexed.by_hour.emplace(t, SentimentVector{});
        fills.push_back({t, column_prefix + "_*", "zero"});
    }
    return indexed;
}

void put_sentiment(FeatureRow& row, std::size_t base, const SentimentVector& v) {
    row.values[base + 0] = v.flair;
    row.values[base + 1] = v.tb_polarity;
    row.values[base + 2] = v.tb_subjectivity;
    row.values[base + 3] = v.sid_pos;
    row.values[base + 4] = v.sid_neg;
    row.values[base + 5] = v.sid_neu;
    row.values[base + 6] = v.sid_com;
}

}  // namespace

MergeResult merge_all(const std::vector<HourlyVector>& gnews_hourly,
                      const std::vector<HourlyVector>& reddit_hourly,
                      const std::vector<OhlcvBar>& btc_bars,
                      const std::vector<OhlcvBar>& ltc_bars,
                      const std::vector<OhlcvBar>& eth_bars) {
    MergeResult result;

    HourlyBars btc = index_bars(btc_bars, "BTCUSDT");
    HourlyBars ltc = index_bars(ltc_bars, "LTCUSD");
    HourlyBars eth = index_bars(eth_bars, "ETHUSD");
    fill_price_gaps(btc, "BTCUSDT",
                    {"open_BTCUSDT", "high_BTCUSDT", "low_BTCUSDT",
                     "close_BTCUSDT", "volume_BTCUSDT"},
                    result.fills);
    fill_price_gaps(ltc, "LTCUSD", {"close_LTCUSD", "volume_LTCUSD"}, result.fills);
    fill_price_gaps(eth, "ETHUSD", {"close_ETHUSD", "volume_ETHUSD"}, result.fills);

    HourlySentiment gnews =
        index_sentiment(gnews_hourly, "gnews", "gnews", result.fills);
    HourlySentiment reddit =
        index_sentiment(reddit_hourly, "reddit", "reddit", result.fills);

    const std::int64_t start = std::max({btc.first, ltc.first, eth.first,
                                         gnews.first, reddit.first});
    const std::int64_t end = std::min({btc.last, ltc.last, eth.last,
                                       gnews.last, reddit.last});
    if (start > end) {
        throw DataError("merge_all: sources share no common hours");
    }

    for (std::int64_t t = start; t <= end; t += utc::kSecondsPerHour) {
        FeatureRow row;
        row.timestamp = t;
        const OhlcvBar& b = btc.by_hour.at(t);
        row.values[0] = b.open;
        row.values[1] = b.high;
        row.values[2] = b.low;
        row.values[3] = b.close;
        row.values[4] = b.volume;
        const OhlcvBar& l = ltc.by_hour.at(t);
        row.values[5] = l.close;
        row.values[6] = l.volume;
        const OhlcvBar& e = eth.by_hour.at(t);
        row.values[7] = e.close;
        row.values[8] = e.volume;
        put_sentiment(row, 9, gnews.by_hour.at(t));
        put_sentiment(row, 16, reddit.by_hour.at(t));

        for (std::size_t c = 0; c < kFeatureCount; ++c) {
            if (std::isnan(row.values[c])) {
                throw DataError("merge_all: NaN after fill at " +
                                utc::format_timestamp(t) + " column " +
                                feature_names()[c]);
            }
        }
        result.rows.push_back(row);
    }

    std::sort(result.fills.begin(), result.fills.end(),
              [](const FillRecord& a, const FillRecord& b) {
                  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                  return a.column < b.column;
              });
    return result;
}

void save_merged(const std::vector<FeatureRow>& rows, const std::string& path) {
    csv::Table t;
    t.header.push_back("timestamp");
    for (const std::string& name : feature_names()) t.header.push_back(name);
    for (const FeatureRow& row : rows) {
        csv::Row out;
        out.reserve(kFeatureCount + 1);
        out.push_back(utc::format_timestamp(row.timestamp));
        for (double v : row.values) out.push_back(csv::format_double(v));
        t.rows.push_back(std::move(out));
    }
    csv::write_file(path, t);
}

std::vector<FeatureRow> load_merged(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    std::vector<std::string> expected{"timestamp"};
    for (const std::string& name : feature_names()) expected.push_back(name);
    csv::require_header(t.header, expected, path);

    std::vector<FeatureRow> rows;
    rows.reserve(t.rows.size());
    for (const csv::Row& r : t.rows) {
        FeatureRow row;
        row.timestamp = utc::parse_timestamp(r.at(0));
        for (std::size_t c = 0; c < kFeatureCount; ++c) {
            row.values[c] = csv::parse_double(r.at(c + 1));
        }
        rows.push_back(row);
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].timestamp - rows[i - 1].timestamp != utc::kSecondsPerHour) {
            throw DataError(path + ": rows not hourly-contiguous at " +
                            utc::format_timestamp(rows[i].timestamp));
        }
    }
    return rows;
}

void save_fill_report(const std::vector<FillRecord>& fills, const std::string& path) {
    csv::Table t;
    t.header = {"timestamp", "column", "method"};
    for (const FillRecord& fill : fills) {
        t.rows.push_back({utc::format_timestamp(fill.timestamp), fill.column,
                          fill.method});
    }
    csv::write_file(path, t);
}

}  // namespace sentiforge::fuse
