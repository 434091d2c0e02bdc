// Fetchers for the three data sources.
//
// Every fetcher runs in one of two modes:
//   * fixture mode — `fixtures_dir` set; reads local files, no network:
//       <fixtures>/news/<YYYY-MM-DD>.json   array of {rank, url, text}
//       <fixtures>/reddit/posts.csv         reddit CSV schema
//       <fixtures>/klines/<PAIR>.csv        ohlcv CSV schema
//   * live mode — HTTP against the configured hosts, paced and retried per
//     RetryPolicy.
//
// Fetchers for different sources may run concurrently; per-host pacing is
// serialized inside net::http_get.

#ifndef SENTIFORGE_INGEST_HPP
#define SENTIFORGE_INGEST_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sentiforge/common.hpp"
#include "sentiforge/http_client.hpp"
#include "sentiforge/records.hpp"

namespace sentiforge::ingest {

struct FetchOptions {
    std::string fixtures_dir;  // non-empty selects fixture mode

    std::string news_base_url = "https://www.google.com";
    std::string pushshift_base_url;  // SENTIFORGE_PUSHSHIFT_URL
    std::string exchange_base_url;   // SENTIFORGE_EXCHANGE_URL

    net::RetryPolicy retry;
    int reddit_page_size = 100;
    int max_articles_per_day = 10;

    WarningTally* warnings = nullptr;  // optional skip/malformed tally
};

// Reads SENTIFORGE_PUSHSHIFT_URL / SENTIFORGE_EXCHANGE_URL /
// SENTIFORGE_FIXTURES_DIR into a FetchOptions.
FetchOptions options_from_env();

// Search URL for one day's news. Spaces in the query become '+'.
std::string news_search_url(const std::string& base_url, const std::string& query,
                            std::int64_t day);

std::string reddit_search_url(const std::string& base_url,
                              const std::string& subreddit,
                              const std::string& keyword, std::int64_t after,
                              std::int64_t before, int size);

std::string klines_url(const std::string& base_url, Pair pair,
                       std::int64_t start, std::int64_t end);

// At most `max_articles_per_day` articles for one day, ranked by result
// order. Articles whose body cannot be retrieved are skipped; survivors keep
// their original ranks. No results is an empty list, not an error.
std::vector<NewsArticle> fetch_news(const std::string& query, std::int64_t day,
                                    const FetchOptions& options);

// All submissions with publish_date in [start, end), ascending. Pagination
// advances the time cursor past the last returned post. Malformed records
// are skipped and tallied.
std::vector<RedditPost> fetch_reddit_posts(const std::string& subreddit,
                                           const std::string& keyword,
                                           std::int64_t start, std::int64_t end,
                                           const FetchOptions& options);

struct KlinesResult {
    std::vector<OhlcvBar> bars;            // ascending, validated
    std::vector<std::int64_t> gap_hours;   // hours in range with no bar
};

KlinesResult fetch_klines(Pair pair, std::int64_t start, std::int64_t end,
                          const FetchOptions& options);

// HTML helpers used by the live news path; exposed for tests.
//
// Text extraction is deliberately simple: drop script/style/head blocks,
// prefer an <article> element when present, then keep <p> paragraph text
// with basic entities decoded. Swap it out here if a better extractor is
// ever needed.
std::vector<std::string> extract_result_links(const std::string& html,
                                              const std::string& own_host,
                                              int max_links);
std::string extract_readable_text(const std::string& html);

}  // namespace sentiforge::ingest

#endif  // SENTIFORGE_INGEST_HPP
