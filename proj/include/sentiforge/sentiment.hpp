// Three sentiment channels over text, plus the aggregation steps that turn
// per-article / per-post scores into daily and hourly vectors.
//
//   VaderScorer    — lexicon-and-rule scorer: pos/neg/neu proportions and a
//                    normalized compound valence in [-1, 1].
//   PatternScorer  — pattern-lexicon scorer: polarity in [-1, 1] and
//                    subjectivity in [0, 1] as intensity-weighted means of
//                    matched entries.
//   ExternalScoreStore — precomputed neural scores keyed by post_id or
//                    "news:<date>:<rank>"; stands in for a classifier that is
//                    never run in-repo.
//
// All scorers are pure and safe for unrestricted concurrent use after
// construction.

#ifndef SENTIFORGE_SENTIMENT_HPP
#define SENTIFORGE_SENTIMENT_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sentiforge/common.hpp"

namespace sentiforge::sentiment {

struct VaderScore {
    double pos = 0.0;
    double neg = 0.0;
    double neu = 0.0;
    double compound = 0.0;
};

struct PatternScore {
    double polarity = 0.0;
    double subjectivity = 0.0;
};

struct ExternalScore {
    double value = 0.0;
    std::string source_tag;
};

// The seven per-source channels, in output column order.
struct SentimentVector {
    double flair = 0.0;
    double tb_polarity = 0.0;
    double tb_subjectivity = 0.0;
    double sid_pos = 0.0;
    double sid_neg = 0.0;
    double sid_neu = 0.0;
    double sid_com = 0.0;

    bool operator==(const SentimentVector&) const = default;
};

class VaderScorer {
public:
    // `lexicon_path`: tab-separated "token<TAB>valence" (extra columns
    // ignored). `emoji_path`: optional "emoji<TAB>description" map applied
    // before tokenization; pass empty to skip emoji substitution.
    explicit VaderScorer(const std::string& lexicon_path,
                         const std::string& emoji_path = "");

    // Empty or token-free input scores (0, 0, 1, 0).
    VaderScore score(std::string_view text) const;

    std::size_t lexicon_size() const { return lexicon_.size(); }

    // Tokenization as used by score(); exposed for tests.
    static std::vector<std::string> tokenize(std::string_view text);

private:
    double token_valence(const std::vector<std::string>& tokens,
                         const std::vector<std::string>& lower, std::size_t i,
                         bool cap_diff) const;
    void apply_context_rules(double& valence,
                             const std::vector<std::string>& tokens,
                             const std::vector<std::string>& lower,
                             std::size_t i, bool cap_diff) const;
    std::string replace_emoji(std::string_view text) const;
    bool in_lexicon(const std::string& lower_token) const {
        return lexicon_.count(lower_token) != 0;
    }

    std::unordered_map<std::string, double> lexicon_;
    std::unordered_map<std::string, std::string> emoji_;
};

class PatternScorer {
public:
    // `lexicon_path`: CSV "token,polarity,subjectivity,intensity".
    // `modifiers_path`: optional newline-separated tokens that chain onto the
    // following lexicon word (adverb senses); without it only the "-ly"
    // suffix heuristic applies.
    explicit PatternScorer(const std::string& lexicon_path,
                           const std::string& modifiers_path = "");

    // Text with no lexicon hits scores (0, 0).
    PatternScore score(std::string_view text) const;

    std::size_t lexicon_size() const { return lexicon_.size(); }

    static std::vector<std::string> tokenize(std::string_view text);

private:
    struct Entry {
        double polarity;
        double subjectivity;
        double intensity;
    };
    std::unordered_map<std::string, Entry> lexicon_;
    std::unordered_set<std::string> modifiers_;
};

class ExternalScoreStore {
public:
    // CSV "key,value" with value in [-1, 1]. Malformed rows are a hard error.
    static ExternalScoreStore load(const std::string& path,
                                   std::string source_tag = "external");

    ExternalScoreStore() = default;

    // Missing keys yield 0.0 and bump the warning tally.
    ExternalScore lookup(const std::string& key) const;

    std::size_t size() const { return values_.size(); }
    std::uint64_t missing_key_warnings() const { return warnings_->count(); }

    static std::string news_key(std::int64_t day, int rank);

private:
    std::unordered_map<std::string, double> values_;
    std::string source_tag_ = "external";
    std::shared_ptr<WarningTally> warnings_ = std::make_shared<WarningTally>();
};

// Per-channel arithmetic mean over one day's article vectors. Summation is
// value-ordered per channel, so the result is exactly permutation-invariant.
// An empty day yields the zero vector and bumps `warnings`.
SentimentVector aggregate_daily_news(const std::vector<SentimentVector>& scores,
                                     WarningTally* warnings = nullptr);

struct HourBucket {
    std::int64_t hour = 0;  // epoch seconds, hour-aligned
    SentimentVector vector;
    std::size_t post_count = 0;  // 0 marks a zero-filled empty hour
};

// Groups (timestamp, vector) pairs into hourly means. Input must be sorted
// ascending by timestamp. Output covers every hour from the first to the
// last post hour inclusive; hours without posts are zero-filled with
// post_count 0.
std::vector<HourBucket> bucketize_hourly(
    const std::vector<std::pair<std::int64_t, SentimentVector>>& posts);

}  // namespace sentiforge::sentiment

#endif  // SENTIFORGE_SENTIMENT_HPP
