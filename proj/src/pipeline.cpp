#include "sentiforge/pipeline.hpp"

#include <algorithm>
#include <map>

#include "sentiforge/csv.hpp"
#include "sentiforge/time.hpp"

namespace sentiforge::pipeline {

using sentiment::SentimentVector;

sentiment::SentimentVector score_text(const Scorers& scorers,
                                      const std::string& text,
                                      const std::string& external_key) {
    SentimentVector v;
    const sentiment::VaderScore sid = scorers.vader->score(text);
    v.sid_pos = sid.pos;
    v.sid_neg = sid.neg;
    v.sid_neu = sid.neu;
    v.sid_com = sid.compound;
    const sentiment::PatternScore tb = scorers.pattern->score(text);
    v.tb_polarity = tb.polarity;
    v.tb_subjectivity = tb.subjectivity;
    v.flair = scorers.external ? scorers.external->lookup(external_key).value : 0.0;
    return v;
}

std::vector<DailyVector> score_news_daily(const std::vector<NewsArticle>& articles,
                                          const Scorers& scorers,
                                          WarningTally* warnings) {
    std::vector<DailyVector> rows;
    if (articles.empty()) return rows;

    std::map<std::int64_t, std::vector<SentimentVector>> by_day;
    std::int64_t min_day = articles.front().day;
    std::int64_t max_day = articles.front().day;
    for (const NewsArticle& article : articles) {
        min_day = std::min(min_day, article.day);
        max_day = std::max(max_day, article.day);
        by_day[article.day].push_back(score_text(
            scorers, article.full_text,
            sentiment::ExternalScoreStore::news_key(article.day, article.rank)));
    }
    for (std::int64_t day = min_day; day <= max_day; ++day) {
        const auto it = by_day.find(day);
        if (it == by_day.end()) {
            rows.emplace_back(day, sentiment::aggregate_daily_news({}, warnings));
        } else {
            rows.emplace_back(day,
                              sentiment::aggregate_daily_news(it->second, warnings));
        }
    }
    return rows;
}

std::vector<HourlyVector> score_reddit_hourly(const std::vector<RedditPost>& posts,
                                              const Scorers& scorers) {
    std::vector<std::pair<std::int64_t, SentimentVector>> scored;
    scored.reserve(posts.size());
    for (const RedditPost& post : posts) {
        // Title and selftext combine with a single newline; a missing
        // selftext contributes nothing beyond the title.
        std::string text = post.title;
        if (!post.selftext.empty()) {
            text.push_back('\n');
            text += post.selftext;
        }
        scored.emplace_back(post.publish_date,
                            score_text(scorers, text, post.post_id));
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<HourlyVector> rows;
    for (const sentiment::HourBucket& bucket : sentiment::bucketize_hourly(scored)) {
        rows.emplace_back(bucket.hour, bucket.vector);
    }
    return rows;
}

std::vector<std::string> sentiment_header(const std::string& prefix,
                                          const std::string& time_column) {
    return {time_column,
            prefix + "_flair",
            prefix + "_tb_polarity",
            prefix + "_tb_subjectivity",
            prefix + "_sid_pos",
            prefix + "_sid_neg",
            prefix + "_sid_neu",
            prefix + "_sid_com"};
}

namespace {

csv::Row vector_row(const std::string& time_field, const SentimentVector& v) {
    return {time_field,
            csv::format_double(v.flair),
            csv::format_double(v.tb_polarity),
            csv::format_double(v.tb_subjectivity),
            csv::format_double(v.sid_pos),
            csv::format_double(v.sid_neg),
            csv::format_double(v.sid_neu),
            csv::format_double(v.sid_com)};
}

SentimentVector parse_vector(const csv::Row& row) {
    SentimentVector v;
    v.flair = csv::parse_double(row.at(1));
    v.tb_polarity = csv::parse_double(row.at(2));
    v.tb_subjectivity = csv::parse_double(row.at(3));
    v.sid_pos = csv::parse_double(row.at(4));
    v.sid_neg = csv::parse_double(row.at(5));
    v.sid_neu = csv::parse_double(row.at(6));
    v.sid_com = csv::parse_double(row.at(7));
    return v;
}

}  // namespace

void save_daily_sentiment(const std::vector<DailyVector>& rows,
                          const std::string& path) {
    csv::Table t;
    t.header = sentiment_header("gnews", "date");
    for (const DailyVector& row : rows) {
        t.rows.push_back(vector_row(utc::format_day(row.first), row.second));
    }
    csv::write_file(path, t);
}

std::vector<DailyVector> load_daily_sentiment(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    csv::require_header(t.header, sentiment_header("gnews", "date"), path);
    std::vector<DailyVector> rows;
    for (const csv::Row& row : t.rows) {
        rows.emplace_back(utc::parse_day(row.at(0)), parse_vector(row));
    }
    return rows;
}

void save_hourly_sentiment(const std::vector<HourlyVector>& rows,
                           const std::string& path) {
    csv::Table t;
    t.header = sentiment_header("reddit", "timestamp");
    for (const HourlyVector& row : rows) {
        t.rows.push_back(vector_row(utc::format_timestamp(row.first), row.second));
    }
    csv::write_file(path, t);
}

std::vector<HourlyVector> load_hourly_sentiment(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    csv::require_header(t.header, sentiment_header("reddit", "timestamp"), path);
    std::vector<HourlyVector> rows;
    for (const csv::Row& row : t.rows) {
        rows.emplace_back(utc::parse_timestamp(row.at(0)), parse_vector(row));
    }
    return rows;
}

}  // namespace sentiforge::pipeline
