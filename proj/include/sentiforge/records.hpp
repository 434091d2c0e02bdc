// Canonical ingestion records and their CSV persistence.
//
// Column sets are pinned; loading a file whose header deviates fails hard and
// names the offending column. load(persist(x)) == x for any valid record list.

#ifndef SENTIFORGE_RECORDS_HPP
#define SENTIFORGE_RECORDS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace sentiforge {

struct NewsArticle {
    std::int64_t day = 0;   // days since epoch, UTC
    int rank = 0;           // 1-based position within the day's results
    std::string url;
    std::string full_text;

    bool operator==(const NewsArticle&) const = default;
};

struct RedditPost {
    std::string post_id;
    std::string title;
    std::string selftext;  // may be empty
    std::string url;
    std::string author;
    std::int64_t score = 0;
    std::int64_t publish_date = 0;  // epoch seconds, UTC
    std::int64_t num_of_comments = 0;
    std::string permalink;
    std::string flair_tag;  // may be empty

    bool operator==(const RedditPost&) const = default;
};

struct OhlcvBar {
    std::int64_t timestamp = 0;  // epoch seconds, hour-aligned
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double volume = 0.0;

    bool operator==(const OhlcvBar&) const = default;
};

// Trading pairs the pipeline understands.
enum class Pair { BtcUsdt, LtcUsd, EthUsd };

Pair pair_from_string(const std::string& symbol);  // throws ConfigError
std::string to_string(Pair pair);

// Throws DataError when a bar violates its invariants (used on load and on
// every fetch path).
void validate(const OhlcvBar& bar);

// CSV headers, in persisted order.
const std::vector<std::string>& news_header();
const std::vector<std::string>& reddit_header();
const std::vector<std::string>& ohlcv_header();

void save_news(const std::vector<NewsArticle>& articles, const std::string& path);
std::vector<NewsArticle> load_news(const std::string& path);

void save_reddit(const std::vector<RedditPost>& posts, const std::string& path);
std::vector<RedditPost> load_reddit(const std::string& path);

void save_ohlcv(const std::vector<OhlcvBar>& bars, const std::string& path);
std::vector<OhlcvBar> load_ohlcv(const std::string& path);

}  // namespace sentiforge

#endif  // SENTIFORGE_RECORDS_HPP
