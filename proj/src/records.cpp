#include "sentiforge/records.hpp"

#include <algorithm>
#include <fstream>

#include "sentiforge/common.hpp"
#include "sentiforge/csv.hpp"
#include "sentiforge/time.hpp"

namespace sentiforge {

Pair pair_from_string(const std::string& symbol) {
    if (symbol == "BTCUSDT") return Pair::BtcUsdt;
    if (symbol == "LTCUSD") return Pair::LtcUsd;
    if (symbol == "ETHUSD") return Pair::EthUsd;
    throw ConfigError("unknown trading pair '" + symbol +
                      "' (supported: BTCUSDT, LTCUSD, ETHUSD)");
}

std::string to_string(Pair pair) {
    switch (pair) {
        case Pair::BtcUsdt: return "BTCUSDT";
        case Pair::LtcUsd: return "LTCUSD";
        case Pair::EthUsd: return "ETHUSD";
    }
    return "?";
}

void validate(const OhlcvBar& bar) {
    if (!utc::is_hour_aligned(bar.timestamp)) {
        throw DataError("bar timestamp not hour-aligned: " +
                        utc::format_timestamp(bar.timestamp));
    }
    if (bar.low > std::min(bar.open, bar.close)) {
        throw DataError("bar at " + utc::format_timestamp(bar.timestamp) +
                        " has low above min(open, close)");
    }
    if (bar.high < std::max(bar.open, bar.close)) {
        throw DataError("bar at " + utc::format_timestamp(bar.timestamp) +
                        " has high below max(open, close)");
    }
    if (bar.volume < 0.0) {
        throw DataError("bar at " + utc::format_timestamp(bar.timestamp) +
                        " has negative volume");
    }
}

const std::vector<std::string>& news_header() {
    static const std::vector<std::string> h{"date", "rank", "url", "text"};
    return h;
}

const std::vector<std::string>& reddit_header() {
    static const std::vector<std::string> h{
        "post_id", "title",        "selftext",        "url",       "author",
        "score",   "publish_date", "num_of_comments", "permalink", "flair"};
    return h;
}

const std::vector<std::string>& ohlcv_header() {
    static const std::vector<std::string> h{"timestamp", "open", "high",
                                            "low",       "close", "volume"};
    return h;
}

void save_news(const std::vector<NewsArticle>& articles, const std::string& path) {
    csv::Table t;
    t.header = news_header();
    t.rows.reserve(articles.size());
    for (const NewsArticle& a : articles) {
        t.rows.push_back({utc::format_day(a.day), std::to_string(a.rank), a.url,
                          a.full_text});
    }
    csv::write_file(path, t);
}

std::vector<NewsArticle> load_news(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    csv::require_header(t.header, news_header(), path);
    std::vector<NewsArticle> articles;
    articles.reserve(t.rows.size());
    for (const csv::Row& r : t.rows) {
        NewsArticle a;
        a.day = utc::parse_day(r.at(0));
        a.rank = static_cast<int>(csv::parse_int(r.at(1)));
        a.url = r.at(2);
        a.full_text = r.at(3);
        if (a.rank < 1 || a.rank > 10) {
            throw DataError(path + ": news rank out of 1..10: " + r.at(1));
        }
        articles.push_back(std::move(a));
    }
    return articles;
}

void save_reddit(const std::vector<RedditPost>& posts, const std::string& path) {
    csv::Table t;
    t.header = reddit_header();
    t.rows.reserve(posts.size());
    for (const RedditPost& p : posts) {
        t.rows.push_back({p.post_id, p.title, p.selftext, p.url, p.author,
                          std::to_string(p.score),
                          utc::format_timestamp(p.publish_date),
                          std::to_string(p.num_of_comments), p.permalink,
                          p.flair_tag});
    }
    csv::write_file(path, t);
}

std::vector<RedditPost> load_reddit(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    csv::require_header(t.header, reddit_header(), path);
    std::vector<RedditPost> posts;
    posts.reserve(t.rows.size());
    for (const csv::Row& r : t.rows) {
        RedditPost p;
        p.post_id = r.at(0);
        p.title = r.at(1);
        p.selftext = r.at(2);
        p.url = r.at(3);
        p.author = r.at(4);
        p.score = csv::parse_int(r.at(5));
        p.publish_date = utc::parse_timestamp(r.at(6));
        p.num_of_comments = csv::parse_int(r.at(7));
        p.permalink = r.at(8);
        p.flair_tag = r.at(9);
        if (p.num_of_comments < 0) {
            throw DataError(path + ": negative comment count for post " + p.post_id);
        }
        posts.push_back(std::move(p));
    }
    return posts;
}

void save_ohlcv(const std::vector<OhlcvBar>& bars, const std::string& path) {
    csv::Table t;
    t.header = ohlcv_header();
    t.rows.reserve(bars.size());
    for (const OhlcvBar& b : bars) {
        t.rows.push_back({utc::format_timestamp(b.timestamp),
                          csv::format_double(b.open), csv::format_double(b.high),
                          csv::format_double(b.low), csv::format_double(b.close),
                          csv::format_double(b.volume)});
    }
    csv::write_file(path, t);
}

std::vector<OhlcvBar> load_ohlcv(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    csv::require_header(t.header, ohlcv_header(), path);
    std::vector<OhlcvBar> bars;
    bars.reserve(t.rows.size());
    for (const csv::Row& r : t.rows) {
        OhlcvBar b;
        b.timestamp = utc::parse_timestamp(r.at(0));
        b.open = csv::parse_double(r.at(1));
        b.high = csv::parse_double(r.at(2));
        b.low = csv::parse_double(r.at(3));
        b.close = csv::parse_double(r.at(4));
        b.volume = csv::parse_double(r.at(5));
        validate(b);
        bars.push_back(b);
    }
    return bars;
}

}  // namespace sentiforge
