// Lexicon-and-rule sentiment scorer.
//
// The rule set follows the published VADER reference implementation
// (Hutto & Gilbert 2014, reference package v3.3.2): lexicon valence lookup
// adjusted for negation flipping, booster/dampener words, ALL-CAPS emphasis,
// "but" clause reweighting, special-case idioms, "least" negation, and
// exclamation/question-mark amplification, with the compound score
// normalized as s / sqrt(s^2 + 15). Scores are left unrounded.
//
// Case handling is ASCII; tokens with non-ASCII letters are treated as
// uncased, which matches the lexicon's coverage.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sentiforge/common.hpp"
#include "sentiforge/csv.hpp"
#include "sentiforge/sentiment.hpp"

namespace sentiforge::sentiment {

namespace {

constexpr double kBoosterIncr = 0.293;
constexpr double kBoosterDecr = -0.293;
constexpr double kCapsIncr = 0.733;
constexpr double kNegationScalar = -0.74;
constexpr double kNormalizationAlpha = 15.0;

const std::unordered_set<std::string>& negate_words() {
    static const std::unordered_set<std::string> words{
        "aint",     "arent",     "cannot",    "cant",      "couldnt",
        "darent",   "didnt",     "doesnt",    "ain't",     "aren't",
        "can't",    "couldn't",  "daren't",   "didn't",    "doesn't",
        "dont",     "hadnt",     "hasnt",     "havent",    "isnt",
        "mightnt",  "mustnt",    "neither",   "don't",     "hadn't",
        "hasn't",   "haven't",   "isn't",     "mightn't",  "mustn't",
        "neednt",   "needn't",   "never",     "none",      "nope",
        "nor",      "not",       "nothing",   "nowhere",   "oughtnt",
        "shant",    "shouldnt",  "uhuh",      "wasnt",     "werent",
        "oughtn't", "shan't",    "shouldn't", "uh-uh",     "wasn't",
        "weren't",  "without",   "wont",      "wouldnt",   "won't",
        "wouldn't", "rarely",    "seldom",    "despite"};
    return words;
}

const std::unordered_map<std::string, double>& booster_dict() {
    static const std::unordered_map<std::string, double> dict{
        {"absolutely", kBoosterIncr},   {"amazingly", kBoosterIncr},
        {"awfully", kBoosterIncr},      {"completely", kBoosterIncr},
        {"considerable", kBoosterIncr}, {"considerably", kBoosterIncr},
        {"decidedly", kBoosterIncr},    {"deeply", kBoosterIncr},
        {"effing", kBoosterIncr},       {"enormous", kBoosterIncr},
        {"enormously", kBoosterIncr},   {"entirely", kBoosterIncr},
        {"especially", kBoosterIncr},   {"exceptional", kBoosterIncr},
        {"exceptionally", kBoosterIncr},{"extreme", kBoosterIncr},
        {"extremely", kBoosterIncr},    {"fabulously", kBoosterIncr},
        {"flipping", kBoosterIncr},     {"flippin", kBoosterIncr},
        {"frackin", kBoosterIncr},      {"fracking", kBoosterIncr},
        {"fricking", kBoosterIncr},     {"frickin", kBoosterIncr},
        {"frigging", kBoosterIncr},     {"friggin", kBoosterIncr},
        {"fully", kBoosterIncr},        {"fuckin", kBoosterIncr},
        {"fucking", kBoosterIncr},      {"fuggin", kBoosterIncr},
        {"fugging", kBoosterIncr},      {"greatly", kBoosterIncr},
        {"hella", kBoosterIncr},        {"highly", kBoosterIncr},
        {"hugely", kBoosterIncr},       {"incredible", kBoosterIncr},
        {"incredibly", kBoosterIncr},   {"intensely", kBoosterIncr},
        {"major", kBoosterIncr},        {"majorly", kBoosterIncr},
        {"more", kBoosterIncr},         {"most", kBoosterIncr},
        {"particularly", kBoosterIncr}, {"purely", kBoosterIncr},
        {"quite", kBoosterIncr},        {"really", kBoosterIncr},
        {"remarkably", kBoosterIncr},   {"so", kBoosterIncr},
        {"substantially", kBoosterIncr},{"thoroughly", kBoosterIncr},
        {"total", kBoosterIncr},        {"totally", kBoosterIncr},
        {"tremendous", kBoosterIncr},   {"tremendously", kBoosterIncr},
        {"uber", kBoosterIncr},         {"unbelievably", kBoosterIncr},
        {"unusually", kBoosterIncr},    {"utter", kBoosterIncr},
        {"utterly", kBoosterIncr},      {"very", kBoosterIncr},
        {"almost", kBoosterDecr},       {"barely", kBoosterDecr},
        {"hardly", kBoosterDecr},       {"just enough", kBoosterDecr},
        {"kind of", kBoosterDecr},      {"kinda", kBoosterDecr},
        {"kindof", kBoosterDecr},       {"kind-of", kBoosterDecr},
        {"less", kBoosterDecr},         {"little", kBoosterDecr},
        {"marginal", kBoosterDecr},     {"marginally", kBoosterDecr},
        {"occasional", kBoosterDecr},   {"occasionally", kBoosterDecr},
        {"partly", kBoosterDecr},       {"scarce", kBoosterDecr},
        {"scarcely", kBoosterDecr},     {"slight", kBoosterDecr},
        {"slightly", kBoosterDecr},     {"somewhat", kBoosterDecr},
        {"sort of", kBoosterDecr},      {"sorta", kBoosterDecr},
        {"sortof", kBoosterDecr},       {"sort-of", kBoosterDecr}};
    return dict;
}

const std::unordered_map<std::string, double>& special_case_idioms() {
    static const std::unordered_map<std::string, double> dict{
        {"the shit", 3.0},      {"the bomb", 3.0},     {"bad ass", 1.5},
        {"badass", 1.5},        {"bus stop", 0.0},     {"yeah right", -2.0},
        {"kiss of death", -1.5},{"to die for", 3.0},   {"beating heart", 3.1},
        {"broken heart", -2.9}};
    return dict;
}

constexpr std::string_view kPunctuation = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }

std::string to_lower(const std::string& token) {
    std::string out = token;
    for (char& c : out) {
        if (is_ascii_upper(c)) c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

// Mirrors str.isupper(): at least one cased character, none lowercase.
bool is_upper_token(const std::string& token) {
    bool has_cased = false;
    for (char c : token) {
        if (is_ascii_lower(c)) return false;
        if (is_ascii_upper(c)) has_cased = true;
    }
    return has_cased;
}

bool all_cap_differential(const std::vector<std::string>& tokens) {
    std::size_t caps = 0;
    for (const std::string& t : tokens) {
        if (is_upper_token(t)) ++caps;
    }
    return caps > 0 && caps < tokens.size();
}

std::size_t codepoint_count(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

// Strips leading/trailing punctuation; short results revert to the original
// token so emoticons like ":)" survive intact.
std::string strip_punct_if_word(const std::string& token) {
    std::size_t begin = 0;
    std::size_t end = token.size();
    while (begin < end && kPunctuation.find(token[begin]) != std::string_view::npos) {
        ++begin;
    }
    while (end > begin && kPunctuation.find(token[end - 1]) != std::string_view::npos) {
        --end;
    }
    std::string stripped = token.substr(begin, end - begin);
    if (codepoint_count(stripped) <= 2) return token;
    return stripped;
}

bool is_negation(const std::string& lower_token) {
    if (negate_words().count(lower_token)) return true;
    return lower_token.find("n't") != std::string::npos;
}

double normalize_compound(double score) {
    const double norm = score / std::sqrt(score * score + kNormalizationAlpha);
    return std::clamp(norm, -1.0, 1.0);
}

// Booster contribution of a preceding token.
double scalar_inc_dec(const std::string& token, const std::string& lower_token,
                      double valence, bool cap_diff) {
    const auto it = booster_dict().find(lower_token);
    if (it == booster_dict().end()) return 0.0;
    double scalar = it->second;
    if (valence < 0.0) scalar = -scalar;
    if (is_upper_token(token) && cap_diff) {
        scalar += valence > 0.0 ? kCapsIncr : -kCapsIncr;
    }
    return scalar;
}

double amplify_exclamation(std::string_view text) {
    auto count = std::count(text.begin(), text.end(), '!');
    if (count > 4) count = 4;
    return static_cast<double>(count) * 0.292;
}

double amplify_question(std::string_view text) {
    const auto count = std::count(text.begin(), text.end(), '?');
    if (count <= 1) return 0.0;
    if (count <= 3) return static_cast<double>(count) * 0.18;
    return 0.96;
}

}  // namespace

VaderScorer::VaderScorer(const std::string& lexicon_path,
                         const std::string& emoji_path) {
    std::ifstream in(lexicon_path);
    if (!in) throw DataError("cannot open sentiment lexicon: " + lexicon_path);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) continue;
        const std::string token = line.substr(0, tab);
        const std::size_t next_tab = line.find('\t', tab + 1);
        const std::string value =
            line.substr(tab + 1, next_tab == std::string::npos ? std::string::npos
                                                               : next_tab - tab - 1);
        try {
            lexicon_[token] = csv::parse_double(value);
        } catch (const std::exception&) {
            throw DataError(lexicon_path + ": bad valence for token '" + token + "'");
        }
    }
    if (lexicon_.empty()) throw DataError(lexicon_path + ": empty lexicon");

    if (!emoji_path.empty()) {
        std::ifstream emoji_in(emoji_path);
        if (!emoji_in) throw DataError("cannot open emoji lexicon: " + emoji_path);
        while (std::getline(emoji_in, line)) {
            const std::size_t tab = line.find('\t');
            if (tab == std::string::npos || tab == 0) continue;
            emoji_[line.substr(0, tab)] = line.substr(tab + 1);
        }
    }
}

std::vector<std::string> VaderScorer::tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(strip_punct_if_word(current));
            current.clear();
        }
    };
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            flush();
        } else {
            current.push_back(c);
        }
    }
    flush();
    return tokens;
}

std::string VaderScorer::replace_emoji(std::string_view text) const {
    if (emoji_.empty()) return std::string(text);
    std::string out;
    out.reserve(text.size());
    bool prev_space = true;
    std::size_t i = 0;
    while (i < text.size()) {
        // One UTF-8 codepoint at a time; the emoji map is keyed by single
        // codepoints.
        std::size_t len = 1;
        const auto lead = static_cast<unsigned char>(text[i]);
        if ((lead & 0xF8) == 0xF0) len = 4;
        else if ((lead & 0xF0) == 0xE0) len = 3;
        else if ((lead & 0xE0) == 0xC0) len = 2;
        if (i + len > text.size()) len = 1;
        const std::string cp(text.substr(i, len));

        const auto it = emoji_.find(cp);
        if (it != emoji_.end()) {
            if (!prev_space) out.push_back(' ');
            out += it->second;
            prev_space = false;
        } else {
            out += cp;
            prev_space = cp == " ";
        }
        i += len;
    }
    // Trim surrounding whitespace like the reference does after substitution.
    const auto begin = out.find_first_not_of(" \t\n\r\f\v");
    if (begin == std::string::npos) return "";
    const auto end = out.find_last_not_of(" \t\n\r\f\v");
    return out.substr(begin, end - begin + 1);
}

double VaderScorer::token_valence(const std::vector<std::string>& tokens,
                                  const std::vector<std::string>& lower,
                                  std::size_t i, bool cap_diff) const {
    const auto it = lexicon_.find(lower[i]);
    if (it == lexicon_.end()) return 0.0;
    double valence = it->second;

    // "no" negates an adjacent lexicon item instead of scoring itself.
    if (lower[i] == "no" && i + 1 < tokens.size() && in_lexicon(lower[i + 1])) {
        valence = 0.0;
    }
    if ((i >= 1 && lower[i - 1] == "no") || (i >= 2 && lower[i - 2] == "no") ||
        (i >= 3 && lower[i - 3] == "no" &&
         (lower[i - 1] == "or" || lower[i - 1] == "nor"))) {
        valence = it->second * kNegationScalar;
    }

    if (is_upper_token(tokens[i]) && cap_diff) {
        valence += valence > 0.0 ? kCapsIncr : -kCapsIncr;
    }

    apply_context_rules(valence, tokens, lower, i, cap_diff);
    return valence;
}

void VaderScorer::apply_context_rules(double& valence,
                                      const std::vector<std::string>& tokens,
                                      const std::vector<std::string>& lower,
                                      std::size_t i, bool cap_diff) const {
    // Up to three preceding tokens modify the valence; influence fades with
    // distance (x1, x0.95, x0.9).
    for (std::size_t back = 0; back < 3; ++back) {
        if (i <= back) continue;
        const std::size_t j = i - (back + 1);
        if (in_lexicon(lower[j])) continue;

        double s = scalar_inc_dec(tokens[j], lower[j], valence, cap_diff);
        if (back == 1 && s != 0.0) s *= 0.95;
        if (back == 2 && s != 0.0) s *= 0.9;
        valence += s;

        // Negation / "never so|this" / "without doubt" handling at this
        // distance.
        if (back == 0) {
            if (is_negation(lower[j])) valence *= kNegationScalar;
        } else if (back == 1) {
            if (lower[i - 2] == "never" &&
                (lower[i - 1] == "so" || lower[i - 1] == "this")) {
                valence *= 1.25;
            } else if (lower[i - 2] == "without" && lower[i - 1] == "doubt") {
                // neutralized negation: leave valence unchanged
            } else if (is_negation(lower[j])) {
                valence *= kNegationScalar;
            }
        } else {
            if ((lower[i - 3] == "never" &&
                 (lower[i - 2] == "so" || lower[i - 2] == "this")) ||
                (lower[i - 1] == "so" || lower[i - 1] == "this")) {
                valence *= 1.25;
            } else if (lower[i - 3] == "without" &&
                       (lower[i - 2] == "doubt" || lower[i - 1] == "doubt")) {
                // neutralized negation
            } else if (is_negation(lower[j])) {
                valence *= kNegationScalar;
            }

            // Special-case idioms around position i (requires i >= 3 here).
            const std::string onezero = lower[i - 1] + " " + lower[i];
            const std::string twoonezero =
                lower[i - 2] + " " + lower[i - 1] + " " + lower[i];
            const std::string twoone = lower[i - 2] + " " + lower[i - 1];
            const std::string threetwoone =
                lower[i - 3] + " " + lower[i - 2] + " " + lower[i - 1];
            const std::string threetwo = lower[i - 3] + " " + lower[i - 2];
            for (const std::string* seq :
                 {&onezero, &twoonezero, &twoone, &threetwoone, &threetwo}) {
                const auto idiom = special_case_idioms().find(*seq);
                if (idiom != special_case_idioms().end()) {
                    valence = idiom->second;
                    break;
                }
            }
            if (i + 1 < lower.size()) {
                const std::string zeroone = lower[i] + " " + lower[i + 1];
                const auto idiom = special_case_idioms().find(zeroone);
                if (idiom != special_case_idioms().end()) valence = idiom->second;
            }
            if (i + 2 < lower.size()) {
                const std::string zeroonetwo =
                    lower[i] + " " + lower[i + 1] + " " + lower[i + 2];
                const auto idiom = special_case_idioms().find(zeroonetwo);
                if (idiom != special_case_idioms().end()) valence = idiom->second;
            }
            for (const std::string* gram : {&threetwoone, &threetwo, &twoone}) {
                const auto booster = booster_dict().find(*gram);
                if (booster != booster_dict().end()) valence += booster->second;
            }
        }
    }

    // "least X" flips X unless preceded by "at" or "very".
    if (i >= 2 && !in_lexicon(lower[i - 1]) && lower[i - 1] == "least") {
        if (lower[i - 2] != "at" && lower[i - 2] != "very") {
            valence *= kNegationScalar;
        }
    } else if (i >= 1 && !in_lexicon(lower[i - 1]) && lower[i - 1] == "least") {
        valence *= kNegationScalar;
    }
}

VaderScore VaderScorer::score(std::string_view text) const {
    const std::string prepared = replace_emoji(text);
    const std::vector<std::string> tokens = tokenize(prepared);
    std::vector<std::string> lower;
    lower.reserve(tokens.size());
    for (const std::string& t : tokens) lower.push_back(to_lower(t));
    const bool cap_diff = all_cap_differential(tokens);

    std::vector<double> sentiments;
    sentiments.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (booster_dict().count(lower[i]) ||
            (i + 1 < tokens.size() && lower[i] == "kind" && lower[i + 1] == "of")) {
            sentiments.push_back(0.0);
            continue;
        }
        sentiments.push_back(token_valence(tokens, lower, i, cap_diff));
    }

    // "but" halves everything before it and amplifies everything after.
    // The reference mutates via first-match value lookup; with duplicated
    // values that picks the earliest equal element, so replicate exactly.
    const auto but_pos = std::find(lower.begin(), lower.end(), "but");
    if (but_pos != lower.end()) {
        const std::size_t but_index =
            static_cast<std::size_t>(but_pos - lower.begin());
        for (std::size_t k = 0; k < sentiments.size(); ++k) {
            const double value = sentiments[k];
            const std::size_t first =
                static_cast<std::size_t>(std::find(sentiments.begin(),
                                                   sentiments.end(), value) -
                                         sentiments.begin());
            if (first < but_index) {
                sentiments[first] = value * 0.5;
            } else if (first > but_index) {
                sentiments[first] = value * 1.5;
            }
        }
    }

    if (sentiments.empty()) {
        // Empty-input convention: fully neutral.
        return VaderScore{0.0, 0.0, 1.0, 0.0};
    }

    double sum = 0.0;
    for (double s : sentiments) sum += s;
    const double punct_amplifier =
        amplify_exclamation(prepared) + amplify_question(prepared);
    if (sum > 0.0) sum += punct_amplifier;
    else if (sum < 0.0) sum -= punct_amplifier;

    VaderScore result;
    result.compound = normalize_compound(sum);

    double pos_sum = 0.0;
    double neg_sum = 0.0;
    std::size_t neu_count = 0;
    for (double s : sentiments) {
        if (s > 0.0) pos_sum += s + 1.0;  // +1 balances neutral tokens counted as 1
        else if (s < 0.0) neg_sum += s - 1.0;
        else ++neu_count;
    }
    if (pos_sum > std::fabs(neg_sum)) pos_sum += punct_amplifier;
    else if (pos_sum < std::fabs(neg_sum)) neg_sum -= punct_amplifier;

    const double total = pos_sum + std::fabs(neg_sum) + static_cast<double>(neu_count);
    result.pos = std::fabs(pos_sum / total);
    result.neg = std::fabs(neg_sum / total);
    result.neu = std::fabs(static_cast<double>(neu_count) / total);
    return result;
}

}  // namespace sentiforge::sentiment
