#include <algorithm>
#include <array>
#include <cmath>

#include "sentiforge/csv.hpp"
#include "sentiforge/sentiment.hpp"
#include "sentiforge/time.hpp"

namespace sentiforge::sentiment {

namespace {

std::array<double SentimentVector::*, 7> channel_members() {
    return {&SentimentVector::flair,        &SentimentVector::tb_polarity,
            &SentimentVector::tb_subjectivity, &SentimentVector::sid_pos,
            &SentimentVector::sid_neg,      &SentimentVector::sid_neu,
            &SentimentVector::sid_com};
}

}  // namespace

ExternalScoreStore ExternalScoreStore::load(const std::string& path,
                                            std::string source_tag) {
    ExternalScoreStore store;
    store.source_tag_ = std::move(source_tag);
    const csv::Table table = csv::read_file(path);
    csv::require_header(table.header, {"key", "value"}, path);
    for (const csv::Row& row : table.rows) {
        if (row.size() != 2 || row[0].empty()) {
            throw DataError(path + ": malformed external-score row");
        }
        const double value = csv::parse_double(row[1]);
        if (value < -1.0 || value > 1.0) {
            throw DataError(path + ": score out of [-1, 1] for key '" + row[0] + "'");
        }
        store.values_[row[0]] = value;
    }
    return store;
}

ExternalScore ExternalScoreStore::lookup(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        warnings_->bump();
        return ExternalScore{0.0, source_tag_};
    }
    return ExternalScore{it->second, source_tag_};
}

std::string ExternalScoreStore::news_key(std::int64_t day, int rank) {
    return "news:" + utc::format_day(day) + ":" + std::to_string(rank);
}

SentimentVector aggregate_daily_news(const std::vector<SentimentVector>& scores,
                                     WarningTally* warnings) {
    SentimentVector mean;
    if (scores.empty()) {
        if (warnings) warnings->bump();
        return mean;
    }
    // Summing in value order makes the mean exactly permutation-invariant.
    std::vector<double> channel(scores.size());
    for (auto member : channel_members()) {
        for (std::size_t i = 0; i < scores.size(); ++i) {
            channel[i] = scores[i].*member;
        }
        std::sort(channel.begin(), channel.end());
        double sum = 0.0;
        for (double v : channel) sum += v;
        mean.*member = sum / static_cast<double>(scores.size());
    }
    return mean;
}

std::vector<HourBucket> bucketize_hourly(
    const std::vector<std::pair<std::int64_t, SentimentVector>>& posts) {
    std::vector<HourBucket> buckets;
    if (posts.empty()) return buckets;
    for (std::size_t i = 1; i < posts.size(); ++i) {
        if (posts[i].first < posts[i - 1].first) {
            throw DataError("bucketize_hourly requires ascending timestamps");
        }
    }

    const std::int64_t first_hour = utc::floor_hour(posts.front().first);
    const std::int64_t last_hour = utc::floor_hour(posts.back().first);
    std::size_t next = 0;
    for (std::int64_t hour = first_hour; hour <= last_hour;
         hour += utc::kSecondsPerHour) {
        HourBucket bucket;
        bucket.hour = hour;
        SentimentVector sum;
        while (next < posts.size() && utc::floor_hour(posts[next].first) == hour) {
            for (auto member : channel_members()) {
                sum.*member += posts[next].second.*member;
            }
            ++bucket.post_count;
            ++next;
        }
        if (bucket.post_count > 0) {
            for (auto member : channel_members()) {
                bucket.vector.*member =
                    sum.*member / static_cast<double>(bucket.post_count);
            }
        }
        buckets.push_back(bucket);
    }
    return buckets;
}

}  // namespace sentiforge::sentiment
