// Glue between raw records and the per-source sentiment tables.
//
// News articles score one vector per article and aggregate into one row per
// calendar day (zero vector + warning for days with no usable article).
// Reddit posts score title + "\n" + selftext as one vector per post, then
// bucketize into hourly means.

#ifndef SENTIFORGE_PIPELINE_HPP
#define SENTIFORGE_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sentiforge/records.hpp"
#include "sentiforge/sentiment.hpp"

namespace sentiforge::pipeline {

struct Scorers {
    const sentiment::VaderScorer* vader = nullptr;
    const sentiment::PatternScorer* pattern = nullptr;
    const sentiment::ExternalScoreStore* external = nullptr;  // may be null
};

sentiment::SentimentVector score_text(const Scorers& scorers,
                                      const std::string& text,
                                      const std::string& external_key);

using DailyVector = std::pair<std::int64_t, sentiment::SentimentVector>;   // day
using HourlyVector = std::pair<std::int64_t, sentiment::SentimentVector>;  // hour

// One row per day spanning [min day, max day] of the input articles.
std::vector<DailyVector> score_news_daily(const std::vector<NewsArticle>& articles,
                                          const Scorers& scorers,
                                          WarningTally* warnings = nullptr);

// Hourly means between the first and last post hour inclusive; empty hours
// are zero-filled.
std::vector<HourlyVector> score_reddit_hourly(const std::vector<RedditPost>& posts,
                                              const Scorers& scorers);

// Per-source sentiment table schemas ("gnews" daily / "reddit" hourly).
std::vector<std::string> sentiment_header(const std::string& prefix,
                                          const std::string& time_column);

void save_daily_sentiment(const std::vector<DailyVector>& rows,
                          const std::string& path);
std::vector<DailyVector> load_daily_sentiment(const std::string& path);

void save_hourly_sentiment(const std::vector<HourlyVector>& rows,
                           const std::string& path);
std::vector<HourlyVector> load_hourly_sentiment(const std::string& path);

}  // namespace sentiforge::pipeline

#endif  // SENTIFORGE_PIPELINE_HPP
