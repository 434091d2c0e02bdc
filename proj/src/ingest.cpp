#include "sentiforge/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sentiforge/csv.hpp"
#include "sentiforge/time.hpp"

namespace sentiforge::ingest {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void warn(const FetchOptions& options, std::uint64_t n = 1) {
    if (options.warnings) options.warnings->bump(n);
}

std::string getenv_or(const char* name, const std::string& fallback) {
    const char* value = std::getenv(name);
    return value ? std::string(value) : fallback;
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open fixture file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool contains_ci(const std::string& haystack, const std::string& needle) {
    if (needle.empty()) return true;
    return lowercase(haystack).find(lowercase(needle)) != std::string::npos;
}

json parse_json(const std::string& body, const std::string& context) {
    json parsed = json::parse(body, nullptr, false);
    if (parsed.is_discarded()) throw DataError(context + ": response is not JSON");
    return parsed;
}

}  // namespace

FetchOptions options_from_env() {
    FetchOptions options;
    options.pushshift_base_url = getenv_or("SENTIFORGE_PUSHSHIFT_URL", "");
    options.exchange_base_url = getenv_or("SENTIFORGE_EXCHANGE_URL", "");
    options.fixtures_dir = getenv_or("SENTIFORGE_FIXTURES_DIR", "");
    return options;
}

std::string news_search_url(const std::string& base_url, const std::string& query,
                            std::int64_t day) {
    std::string keyword;
    keyword.reserve(query.size());
    for (char c : query) keyword.push_back(c == ' ' ? '+' : c);

    // The date window uses the search engine's M/D/YYYY convention.
    const utc::CivilDate c = utc::civil_from_days(day);
    char date_buf[16];
    std::snprintf(date_buf, sizeof(date_buf), "%u/%u/%d", c.month, c.day, c.year);

    std::string url = base_url;
    url += "/search?q=" + keyword + "&hl=en&gl=us&as_drrb=b&tbas=0&tbs=cdr:1,cd_min:";
    url += date_buf;
    url += ",cd_max:";
    url += date_buf;
    return url;
}

std::string reddit_search_url(const std::string& base_url,
                              const std::string& subreddit,
                              const std::string& keyword, std::int64_t after,
                              std::int64_t before, int size) {
    std::string url = base_url;
    url += "/reddit/search/submission?subreddit=" + subreddit;
    url += "&q=" + keyword;
    url += "&after=" + std::to_string(after);
    url += "&before=" + std::to_string(before);
    url += "&size=" + std::to_string(size);
    url += "&sort=asc";
    return url;
}

std::string klines_url(const std::string& base_url, Pair pair,
                       std::int64_t start, std::int64_t end) {
    std::string url = base_url;
    url += "/api/v3/klines?symbol=" + to_string(pair);
    url += "&interval=1h";
    url += "&startTime=" + std::to_string(start * 1000);
    // Range end is exclusive; the exchange treats endTime as inclusive.
    url += "&endTime=" + std::to_string(end * 1000 - 1);
    return url;
}

// ---------------------------------------------------------------------------
// HTML helpers

namespace {

std::string decode_entities(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out.push_back(text[i++]);
            continue;
        }
        const std::size_t semi = text.find(';', i);
        if (semi == std::string::npos || semi - i > 8) {
            out.push_back(text[i++]);
            continue;
        }
        const std::string entity = text.substr(i, semi - i + 1);
        if (entity == "&amp;") out.push_back('&');
        else if (entity == "&lt;") out.push_back('<');
        else if (entity == "&gt;") out.push_back('>');
        else if (entity == "&quot;") out.push_back('"');
        else if (entity == "&#39;" || entity == "&apos;") out.push_back('\'');
        else if (entity == "&nbsp;") out.push_back(' ');
        else {
            out.push_back(text[i]);
            ++i;
            continue;
        }
        i = semi + 1;
    }
    return out;
}

std::string collapse_whitespace(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(c));
        }
    }
    return out;
}

// Removes <tag ...>...</tag> blocks wholesale (case-insensitive tag match).
std::string drop_blocks(std::string html, const std::string& tag) {
    const std::string open = "<" + tag;
    const std::string close = "</" + tag;
    std::string lower = lowercase(html);
    std::size_t pos = 0;
    while ((pos = lower.find(open, pos)) != std::string::npos) {
        std::size_t end = lower.find(close, pos);
        if (end == std::string::npos) {
            html.erase(pos);
            break;
        }
        end = lower.find('>', end);
        if (end == std::string::npos) {
            html.erase(pos);
            break;
        }
        html.erase(pos, end - pos + 1);
        lower = lowercase(html);
    }
    return html;
}

std::string strip_tags(const std::string& html) {
    std::string out;
    out.reserve(html.size());
    bool in_tag = false;
    for (char c : html) {
        if (c == '<') in_tag = true;
        else if (c == '>') { in_tag = false; out.push_back(' '); }
        else if (!in_tag) out.push_back(c);
    }
    return out;
}

}  // namespace

std::vector<std::string> extract_result_links(const std::string& html,
                                              const std::string& own_host,
                                              int max_links) {
    std::vector<std::string> links;
    std::set<std::string> seen;
    const std::string lower = lowercase(html);
    std::size_t pos = 0;
    while (links.size() < static_cast<std::size_t>(max_links)) {
        pos = lower.find("href=\"", pos);
        if (pos == std::string::npos) break;
        pos += 6;
        const std::size_t end = html.find('"', pos);
        if (end == std::string::npos) break;
        std::string href = decode_entities(html.substr(pos, end - pos));
        pos = end;

        // Result pages commonly wrap targets as /url?q=<target>&...
        if (href.rfind("/url?q=", 0) == 0) {
            const std::size_t amp = href.find('&', 7);
            href = href.substr(7, amp == std::string::npos ? std::string::npos : amp - 7);
        }
        if (href.rfind("http://", 0) != 0 && href.rfind("https://", 0) != 0) continue;
        if (!own_host.empty() && href.find("://" + own_host) != std::string::npos) continue;
        if (seen.insert(href).second) links.push_back(href);
    }
    return links;
}

std::string extract_readable_text(const std::string& html) {
    std::string body = html;
    for (const char* tag : {"script", "style", "head", "nav", "footer", "noscript"}) {
        body = drop_blocks(std::move(body), tag);
    }

    // Prefer the first <article> element when the page marks one up.
    {
        const std::string lower = lowercase(body);
        const std::size_t open = lower.find("<article");
        if (open != std::string::npos) {
            const std::size_t close = lower.find("</article", open);
            if (close != std::string::npos) body = body.substr(open, close - open);
        }
    }

    // Collect paragraph contents; fall back to all visible text when the page
    // has no <p> markup at all.
    std::vector<std::string> paragraphs;
    const std::string lower = lowercase(body);
    std::size_t pos = 0;
    while ((pos = lower.find("<p", pos)) != std::string::npos) {
        if (pos + 2 < lower.size() && lower[pos + 2] != '>' && lower[pos + 2] != ' ') {
            pos += 2;  // <pre>, <path>, ...
            continue;
        }
        const std::size_t open_end = lower.find('>', pos);
        if (open_end == std::string::npos) break;
        const std::size_t close = lower.find("</p", open_end);
        if (close == std::string::npos) break;
        std::string para = collapse_whitespace(
            decode_entities(strip_tags(body.substr(open_end + 1, close - open_end - 1))));
        if (!para.empty()) paragraphs.push_back(std::move(para));
        pos = close + 3;
    }

    if (paragraphs.empty()) {
        return collapse_whitespace(decode_entities(strip_tags(body)));
    }
    std::string text;
    for (std::size_t i = 0; i < paragraphs.size(); ++i) {
        if (i) text.push_back('\n');
        text += paragraphs[i];
    }
    return text;
}

// ---------------------------------------------------------------------------
// News

namespace {

std::vector<NewsArticle> fetch_news_fixture(const std::string& /*query*/,
                                            std::int64_t day,
                                            const FetchOptions& options) {
    const fs::path path =
        fs::path(options.fixtures_dir) / "news" / (utc::format_day(day) + ".json");
    if (!fs::exists(path)) return {};
    const json entries = parse_json(read_text_file(path), path.string());
    if (!entries.is_array()) {
        throw DataError(path.string() + ": expected a JSON array of articles");
    }
    std::vector<NewsArticle> articles;
    for (const json& entry : entries) {
        NewsArticle a;
        a.day = day;
        a.rank = entry.at("rank").get<int>();
        a.url = entry.at("url").get<std::string>();
        a.full_text = entry.at("text").get<std::string>();
        if (a.full_text.empty()) {
            warn(options);  // fixture supplied an unusable article body
            continue;
        }
        articles.push_back(std::move(a));
    }
    return articles;
}

std::vector<NewsArticle> fetch_news_live(const std::string& query, std::int64_t day,
                                         const FetchOptions& options) {
    const std::string url = news_search_url(options.news_base_url, query, day);
    const net::HttpResponse response = net::http_get(url, options.retry);
    if (response.status != 200) {
        throw DataError("news search returned HTTP " + std::to_string(response.status));
    }
    const std::string own_host = net::split_url(options.news_base_url).host;
    const std::vector<std::string> links =
        extract_result_links(response.body, own_host, options.max_articles_per_day);

    std::vector<NewsArticle> articles;
    for (std::size_t i = 0; i < links.size(); ++i) {
        NewsArticle a;
        a.day = day;
        a.rank = static_cast<int>(i + 1);
        a.url = links[i];
        try {
            const net::HttpResponse page = net::http_get(links[i], options.retry);
            if (page.status != 200) {
                warn(options);
                continue;
            }
            a.full_text = extract_readable_text(page.body);
        } catch (const RetryableError&) {
            warn(options);
            continue;
        }
        if (a.full_text.empty()) {
            warn(options);
            continue;
        }
        articles.push_back(std::move(a));
    }
    return articles;
}

}  // namespace

std::vector<NewsArticle> fetch_news(const std::string& query, std::int64_t day,
                                    const FetchOptions& options) {
    if (query.empty()) throw ConfigError("news query must be non-empty");
    if (!options.fixtures_dir.empty()) return fetch_news_fixture(query, day, options);
    return fetch_news_live(query, day, options);
}

// ---------------------------------------------------------------------------
// Reddit

namespace {

bool parse_reddit_record(const json& entry, RedditPost& post) {
    if (!entry.is_object()) return false;
    if (!entry.contains("id") || !entry["id"].is_string()) return false;
    if (!entry.contains("created_utc") || !entry["created_utc"].is_number()) return false;
    post.post_id = entry["id"].get<std::string>();
    post.publish_date = entry["created_utc"].get<std::int64_t>();
    post.title = entry.value("title", "");
    post.selftext = entry.value("selftext", "");
    post.url = entry.value("url", "");
    post.author = entry.value("author", "");
    post.score = entry.value("score", std::int64_t{0});
    post.num_of_comments = entry.value("num_comments", std::int64_t{0});
    post.permalink = entry.value("permalink", "");
    if (entry.contains("link_flair_text") && entry["link_flair_text"].is_string()) {
        post.flair_tag = entry["link_flair_text"].get<std::string>();
    }
    return true;
}

std::vector<RedditPost> fetch_reddit_fixture(const std::string& /*subreddit*/,
                                             const std::string& keyword,
                                             std::int64_t start, std::int64_t end,
                                             const FetchOptions& options) {
    const fs::path path = fs::path(options.fixtures_dir) / "reddit" / "posts.csv";
    std::vector<RedditPost> all = load_reddit(path.string());
    std::vector<RedditPost> matching;
    for (RedditPost& p : all) {
        if (p.publish_date < start || p.publish_date >= end) continue;
        if (!contains_ci(p.title, keyword) && !contains_ci(p.selftext, keyword)) continue;
        matching.push_back(std::move(p));
    }
    std::stable_sort(matching.begin(), matching.end(),
                     [](const RedditPost& a, const RedditPost& b) {
                         return a.publish_date < b.publish_date;
                     });
    return matching;
}

std::vector<RedditPost> fetch_reddit_live(const std::string& subreddit,
                                          const std::string& keyword,
                                          std::int64_t start, std::int64_t end,
                                          const FetchOptions& options) {
    if (options.pushshift_base_url.empty()) {
        throw ConfigError("SENTIFORGE_PUSHSHIFT_URL is not configured");
    }
    std::vector<RedditPost> posts;
    std::set<std::string> seen_ids;
    // The archive treats both bounds as exclusive: after < created_utc < before.
    std::int64_t after = start - 1;
    const std::int64_t before = end;

    while (after + 1 < before) {
        const std::string url =
            reddit_search_url(options.pushshift_base_url, subreddit, keyword, after,
                              before, options.reddit_page_size);
        const net::HttpResponse response = net::http_get(url, options.retry);
        if (response.status != 200) {
            throw DataError("reddit archive returned HTTP " +
                            std::to_string(response.status));
        }
        const json payload = parse_json(response.body, "reddit archive");
        if (!payload.is_object() || !payload.contains("data") ||
            !payload["data"].is_array()) {
            throw DataError("reddit archive: missing 'data' array");
        }
        const json& data = payload["data"];
        std::int64_t last_ts = after;
        for (const json& entry : data) {
            RedditPost post;
            if (!parse_reddit_record(entry, post)) {
                warn(options);
                continue;
            }
            last_ts = std::max(last_ts, post.publish_date);
            if (post.publish_date < start || post.publish_date >= end) continue;
            if (seen_ids.insert(post.post_id).second) posts.push_back(std::move(post));
        }
        if (data.size() < static_cast<std::size_t>(options.reddit_page_size)) break;
        if (last_ts <= after) break;  // cursor stuck; avoid spinning
        after = last_ts;
    }

    std::stable_sort(posts.begin(), posts.end(),
                     [](const RedditPost& a, const RedditPost& b) {
                         return a.publish_date < b.publish_date;
                     });
    return posts;
}

}  // namespace

std::vector<RedditPost> fetch_reddit_posts(const std::string& subreddit,
                                           const std::string& keyword,
                                           std::int64_t start, std::int64_t end,
                                           const FetchOptions& options) {
    if (start >= end) throw ConfigError("reddit range start must precede end");
    if (!options.fixtures_dir.empty()) {
        return fetch_reddit_fixture(subreddit, keyword, start, end, options);
    }
    return fetch_reddit_live(subreddit, keyword, start, end, options);
}

// ---------------------------------------------------------------------------
// Klines

namespace {

double json_number(const json& value, const char* what) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) return csv::parse_double(value.get<std::string>());
    throw DataError(std::string("kline field '") + what + "' is not numeric");
}

std::vector<OhlcvBar> fetch_klines_fixture(Pair pair, std::int64_t start,
                                           std::int64_t end,
                                           const FetchOptions& options) {
    const fs::path path =
        fs::path(options.fixtures_dir) / "klines" / (to_string(pair) + ".csv");
    std::vector<OhlcvBar> all = load_ohlcv(path.string());
    std::vector<OhlcvBar> in_range;
    for (const OhlcvBar& bar : all) {
        if (bar.timestamp >= start && bar.timestamp < end) in_range.push_back(bar);
    }
    std::sort(in_range.begin(), in_range.end(),
              [](const OhlcvBar& a, const OhlcvBar& b) {
                  return a.timestamp < b.timestamp;
              });
    return in_range;
}

std::vector<OhlcvBar> fetch_klines_live(Pair pair, std::int64_t start,
                                        std::int64_t end,
                                        const FetchOptions& options) {
    if (options.exchange_base_url.empty()) {
        throw ConfigError("SENTIFORGE_EXCHANGE_URL is not configured");
    }
    std::vector<OhlcvBar> bars;
    std::int64_t cursor = start;
    while (cursor < end) {
        const std::string url = klines_url(options.exchange_base_url, pair, cursor, end);
        const net::HttpResponse response = net::http_get(url, options.retry);
        if (response.status != 200) {
            throw RetryableError("exchange returned HTTP " +
                                 std::to_string(response.status));
        }
        const json payload = parse_json(response.body, "exchange");
        if (payload.is_object()) {
            // Error payloads look like {"code": ..., "msg": ...}.
            throw RetryableError("exchange error payload: " + payload.dump());
        }
        if (!payload.is_array()) throw DataError("exchange: expected a JSON array");
        if (payload.empty()) break;

        std::int64_t last_ts = cursor;
        for (const json& entry : payload) {
            if (!entry.is_array() || entry.size() < 6) {
                throw DataError("exchange: malformed kline entry");
            }
            OhlcvBar bar;
            bar.timestamp = entry.at(0).get<std::int64_t>() / 1000;
            bar.open = json_number(entry.at(1), "open");
            bar.high = json_number(entry.at(2), "high");
            bar.low = json_number(entry.at(3), "low");
            bar.close = json_number(entry.at(4), "close");
            bar.volume = json_number(entry.at(5), "volume");
            validate(bar);
            last_ts = std::max(last_ts, bar.timestamp);
            if (bar.timestamp >= start && bar.timestamp < end) bars.push_back(bar);
        }
        const std::int64_t next = last_ts + utc::kSecondsPerHour;
        if (next <= cursor) break;
        cursor = next;
    }
    std::sort(bars.begin(), bars.end(), [](const OhlcvBar& a, const OhlcvBar& b) {
        return a.timestamp < b.timestamp;
    });
    return bars;
}

}  // namespace

KlinesResult fetch_klines(Pair pair, std::int64_t start, std::int64_t end,
                          const FetchOptions& options) {
    if (start % utc::kSecondsPerHour != 0 || end % utc::kSecondsPerHour != 0) {
        throw ConfigError("kline range must be hour-aligned");
    }
    KlinesResult result;
    if (start >= end) return result;

    result.bars = options.fixtures_dir.empty()
                      ? fetch_klines_live(pair, start, end, options)
                      : fetch_klines_fixture(pair, start, end, options);

    std::set<std::int64_t> have;
    for (const OhlcvBar& bar : result.bars) have.insert(bar.timestamp);
    for (std::int64_t t = start; t < end; t += utc::kSecondsPerHour) {
        if (!have.count(t)) result.gap_hours.push_back(t);
    }
    if (!result.gap_hours.empty()) warn(options, result.gap_hours.size());
    return result;
}

}  // namespace sentiforge::ingest
