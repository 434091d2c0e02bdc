// Pattern-lexicon sentiment scorer.
//
// Follows the published pattern-en assessment algorithm (as shipped inside
// TextBlob): each known word opens an assessment carrying its polarity,
// subjectivity and intensity; a preceding modifier word (adverb sense, or an
// unknown "-ly" word) chains the next known word onto the same assessment,
// multiplying by the stored intensity with clamping to [-1, 1]; a preceding
// negation ("no", "not", "n't", "never") inverts the intensity and halves
// the final polarity with flipped sign ("not bad" reads slightly good).
// Exclamation marks boost the previous assessment by 1.25 and emoticons
// score as fixed-mood assessments. The final polarity/subjectivity are the
// per-assessment means.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
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

constexpr std::string_view kPatternPunctuation = ".,;:!?()[]{}`'\"@#$^&*+-|=~_";

const std::unordered_set<std::string>& negations() {
    static const std::unordered_set<std::string> set{"no", "not", "n't", "never"};
    return set;
}

// Contraction suffixes split into their own tokens so negations like "n't"
// are visible. Applied before punctuation peeling; the resulting tokens are
// protected from further splitting.
const std::array<std::string, 7>& contraction_suffixes() {
    static const std::array<std::string, 7> list{"n't", "'m",  "'s", "'d",
                                                 "'ll", "'re", "'ve"};
    return list;
}

struct Emoticon {
    const char* face;
    double polarity;
};

const std::vector<Emoticon>& emoticons() {
    static const std::vector<Emoticon> table{
        {"<3", 1.0},   {">:d", 1.0},  {":-d", 1.0},  {":d", 1.0},  {"=-d", 1.0},
        {"=d", 1.0},   {"x-d", 1.0},  {"xd", 1.0},   {"8-d", 1.0}, {">:p", -0.75},
        {":-p", -0.75},{":p", -0.75}, {":-b", -0.75},{":b", -0.75},{">:)", 0.5},
        {":-)", 0.5},  {":)", 0.5},   {"=)", 0.5},   {"=]", 0.5},  {":]", 0.5},
        {":}", 0.5},   {":>", 0.5},   {":3", 0.5},   {"8)", 0.5},  {"8-)", 0.5},
        {">;]", 0.25}, {";-)", 0.25}, {";)", 0.25},  {";-]", 0.25},{";]", 0.25},
        {";d", 0.25},  {";^)", 0.25}, {"*-)", 0.25}, {"*)", 0.25}, {":-|", -0.25},
        {":|", -0.25}, {">:o", -0.3}, {":-o", -0.3}, {":o", -0.3}, {"o_o", -0.3},
        {"o.o", -0.3}, {">:/", -0.25},{":-/", -0.25},{":/", -0.25},{":\\", -0.25},
        {">:\\", -0.25},{":-s", -0.25},{":s", -0.25}, {">:[", -0.75},{":-(", -0.75},
        {":(", -0.75}, {"=(", -0.75}, {":-[", -0.75},{":[", -0.75},{":{", -0.75},
        {":-<", -0.75},{":c", -0.75}, {":-c", -0.75},{"=/", -0.75},{":'(", -1.0},
        {";'(", -1.0}};
    return table;
}

bool is_emoticon(const std::string& lower_token, double* polarity = nullptr) {
    for (const Emoticon& e : emoticons()) {
        if (lower_token == e.face) {
            if (polarity) *polarity = e.polarity;
            return true;
        }
    }
    return false;
}

bool is_protected(const std::string& token) {
    for (const std::string& suffix : contraction_suffixes()) {
        if (token == suffix) return true;
    }
    return is_emoticon(token);
}

std::string ascii_lower(std::string token) {
    for (char& c : token) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return token;
}

bool is_punct_char(char c) {
    return kPatternPunctuation.find(c) != std::string_view::npos;
}

bool is_alpha_token(const std::string& token) {
    if (token.empty()) return false;
    for (unsigned char c : token) {
        if (!std::isalpha(c)) return false;
    }
    return true;
}

// Abbreviation shapes whose trailing period stays attached: "a.", "u.s.",
// "mr.", plus a short list of common forms.
bool is_abbreviation(const std::string& token) {
    static const std::unordered_set<std::string> common{
        "a.m.", "p.m.", "e.g.", "i.e.", "etc.", "vs.", "dr.", "mr.",
        "mrs.", "ms.",  "st.",  "no.",  "inc.", "ltd.", "co.", "approx."};
    const std::string lower = ascii_lower(token);
    if (common.count(lower)) return true;
    if (lower.size() == 2 && std::isalpha(static_cast<unsigned char>(lower[0])) &&
        lower[1] == '.') {
        return true;  // "t. de smedt"
    }
    // Alternating letter-period runs: "u.s.", "p.s."
    if (lower.size() >= 4 && lower.size() % 2 == 0) {
        bool alternating = true;
        for (std::size_t i = 0; i < lower.size(); i += 2) {
            if (!std::isalpha(static_cast<unsigned char>(lower[i])) ||
                lower[i + 1] != '.') {
                alternating = false;
                break;
            }
        }
        if (alternating) return true;
    }
    return false;
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string strip_quotes(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && s[begin] == '\'') ++begin;
    while (end > begin && s[end - 1] == '\'') --end;
    return s.substr(begin, end - begin);
}

// Length in codepoints; size thresholds in the reference algorithm count
// characters, not bytes.
std::size_t codepoints(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

}  // namespace

std::vector<std::string> PatternScorer::tokenize(std::string_view text) {
    // Split contraction suffixes off their hosts.
    std::string prepared(text);
    for (const std::string& suffix : contraction_suffixes()) {
        std::string rebuilt;
        rebuilt.reserve(prepared.size());
        std::size_t pos = 0;
        while (true) {
            const std::size_t hit = prepared.find(suffix, pos);
            if (hit == std::string::npos) {
                rebuilt += prepared.substr(pos);
                break;
            }
            rebuilt += prepared.substr(pos, hit - pos);
            rebuilt.push_back(' ');
            rebuilt += suffix;
            pos = hit + suffix.size();
        }
        prepared = std::move(rebuilt);
    }

    std::vector<std::string> raw;
    std::string current;
    for (char c : prepared) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!current.empty()) {
                raw.push_back(std::move(current));
                current.clear();
            }
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) raw.push_back(std::move(current));

    // Peel punctuation from token edges; contraction tokens and emoticons
    // stay whole, and abbreviation periods stay attached.
    std::vector<std::string> tokens;
    for (std::string token : raw) {
        if (is_protected(ascii_lower(token))) {
            tokens.push_back(std::move(token));
            continue;
        }
        while (!token.empty() && is_punct_char(token.front()) &&
               !is_protected(ascii_lower(token))) {
            tokens.push_back(std::string(1, token.front()));
            token.erase(token.begin());
        }
        std::vector<std::string> tail;
        while (!token.empty() && is_punct_char(token.back()) &&
               !is_protected(ascii_lower(token))) {
            if (ends_with(token, "...")) {
                tail.push_back("...");
                token.erase(token.size() - 3);
                while (!token.empty() && token.back() == '.') token.pop_back();
                continue;
            }
            if (token.back() == '.' && is_abbreviation(token)) break;
            tail.push_back(std::string(1, token.back()));
            token.pop_back();
        }
        if (!token.empty()) tokens.push_back(std::move(token));
        for (auto it = tail.rbegin(); it != tail.rend(); ++it) {
            tokens.push_back(std::move(*it));
        }
    }
    return tokens;
}

PatternScorer::PatternScorer(const std::string& lexicon_path,
                             const std::string& modifiers_path) {
    const csv::Table table = csv::read_file(lexicon_path);
    csv::require_header(table.header,
                        {"token", "polarity", "subjectivity", "intensity"},
                        lexicon_path);
    for (const csv::Row& row : table.rows) {
        Entry entry{csv::parse_double(row.at(1)), csv::parse_double(row.at(2)),
                    csv::parse_double(row.at(3))};
        if (entry.polarity < -1.0 || entry.polarity > 1.0 ||
            entry.subjectivity < 0.0 || entry.subjectivity > 1.0 ||
            entry.intensity <= 0.0) {
            throw DataError(lexicon_path + ": entry out of range for token '" +
                            row.at(0) + "'");
        }
        lexicon_[ascii_lower(row.at(0))] = entry;
    }
    if (lexicon_.empty()) throw DataError(lexicon_path + ": empty lexicon");

    if (!modifiers_path.empty()) {
        std::ifstream in(modifiers_path);
        if (!in) throw DataError("cannot open modifier list: " + modifiers_path);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty() && line.front() != '#') {
                modifiers_.insert(ascii_lower(line));
            }
        }
    }
}

PatternScore PatternScorer::score(std::string_view text) const {
    struct Assessment {
        double polarity = 0.0;
        double subjectivity = 0.0;
        double intensity = 1.0;
        bool negated = false;
    };

    std::vector<std::string> tokens = tokenize(text);
    for (std::string& t : tokens) t = ascii_lower(t);

    std::vector<Assessment> assessments;
    bool have_modifier = false;
    std::string modifier_word;
    bool have_negation = false;

    auto clamp1 = [](double x) { return std::clamp(x, -1.0, 1.0); };

    for (const std::string& word : tokens) {
        const auto entry = lexicon_.find(word);
        if (entry != lexicon_.end()) {
            const Entry& e = entry->second;
            if (!have_modifier) {
                assessments.push_back({e.polarity, e.subjectivity, e.intensity, false});
            } else {
                Assessment& last = assessments.back();
                last.polarity = clamp1(e.polarity * last.intensity);
                last.subjectivity = clamp1(e.subjectivity * last.intensity);
                last.intensity = e.intensity;
            }
            if (have_negation) {
                Assessment& last = assessments.back();
                last.intensity = 1.0 / last.intensity;
                last.negated = true;
            }
            have_modifier = false;
            have_negation = false;
            if (modifiers_.count(word)) {
                have_modifier = true;
                modifier_word = word;
            }
            if (negations().count(word)) have_negation = true;
        } else {
            if (negations().count(word)) {
                have_negation = true;
            } else if (have_negation && codepoints(strip_quotes(word)) > 1) {
                // Negation carries across small function words only.
                have_negation = false;
            }
            if (have_negation && have_modifier && ends_with(modifier_word, "ly")) {
                // "really not good": fold the negation into the open chain.
                if (!assessments.empty()) assessments.back().negated = true;
                have_negation = false;
            } else {
                have_modifier = false;
            }
            if (word == "!" && !assessments.empty()) {
                Assessment& last = assessments.back();
                last.polarity = clamp1(last.polarity * 1.25);
            }
            double mood = 0.0;
            if (!is_alpha_token(word) && codepoints(word) <= 5 &&
                kPatternPunctuation.find(word) == std::string_view::npos &&
                is_emoticon(word, &mood)) {
                assessments.push_back({mood, 1.0, 1.0, false});
            }
        }
    }

    if (assessments.empty()) return PatternScore{0.0, 0.0};

    double polarity_sum = 0.0;
    double subjectivity_sum = 0.0;
    for (const Assessment& a : assessments) {
        polarity_sum += a.negated ? a.polarity * -0.5 : a.polarity;
        subjectivity_sum += a.subjectivity;
    }
    const double n = static_cast<double>(assessments.size());
    return PatternScore{polarity_sum / n, subjectivity_sum / n};
}

}  // namespace sentiforge::sentiment
