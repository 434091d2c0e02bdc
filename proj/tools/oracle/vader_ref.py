#!/usr/bin/env python3
"""Reference lexicon-and-rule sentiment scorer (VADER).

Transcription of the published reference implementation (Hutto & Gilbert
2014, reference package v3.3.2), with the final display rounding removed so
frozen oracle values carry full precision. Reads the same lexicon file the
C++ scorer ships with. Used only to generate and cross-check the golden
corpus under tests/fixtures/.
"""

import math
import string
import sys

B_INCR = 0.293
B_DECR = -0.293
C_INCR = 0.733
N_SCALAR = -0.74

NEGATE = {
    "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt",
    "ain't", "aren't", "can't", "couldn't", "daren't", "didn't", "doesn't",
    "dont", "hadnt", "hasnt", "havent", "isnt", "mightnt", "mustnt", "neither",
    "don't", "hadn't", "hasn't", "haven't", "isn't", "mightn't", "mustn't",
    "neednt", "needn't", "never", "none", "nope", "nor", "not", "nothing",
    "nowhere", "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent",
    "oughtn't", "shan't", "shouldn't", "uh-uh", "wasn't", "weren't", "without",
    "wont", "wouldnt", "won't", "wouldn't", "rarely", "seldom", "despite",
}

BOOSTER_DICT = {
    "absolutely": B_INCR, "amazingly": B_INCR, "awfully": B_INCR,
    "completely": B_INCR, "considerable": B_INCR, "considerably": B_INCR,
    "decidedly": B_INCR, "deeply": B_INCR, "effing": B_INCR,
    "enormous": B_INCR, "enormously": B_INCR, "entirely": B_INCR,
    "especially": B_INCR, "exceptional": B_INCR, "exceptionally": B_INCR,
    "extreme": B_INCR, "extremely": B_INCR, "fabulously": B_INCR,
    "flipping": B_INCR, "flippin": B_INCR, "frackin": B_INCR,
    "fracking": B_INCR, "fricking": B_INCR, "frickin": B_INCR,
    "frigging": B_INCR, "friggin": B_INCR, "fully": B_INCR, "fuckin": B_INCR,
    "fucking": B_INCR, "fuggin": B_INCR, "fugging": B_INCR, "greatly": B_INCR,
    "hella": B_INCR, "highly": B_INCR, "hugely": B_INCR, "incredible": B_INCR,
    "incredibly": B_INCR, "intensely": B_INCR, "major": B_INCR,
    "majorly": B_INCR, "more": B_INCR, "most": B_INCR, "particularly": B_INCR,
    "purely": B_INCR, "quite": B_INCR, "really": B_INCR, "remarkably": B_INCR,
    "so": B_INCR, "substantially": B_INCR, "thoroughly": B_INCR,
    "total": B_INCR, "totally": B_INCR, "tremendous": B_INCR,
    "tremendously": B_INCR, "uber": B_INCR, "unbelievably": B_INCR,
    "unusually": B_INCR, "utter": B_INCR, "utterly": B_INCR, "very": B_INCR,
    "almost": B_DECR, "barely": B_DECR, "hardly": B_DECR,
    "just enough": B_DECR, "kind of": B_DECR, "kinda": B_DECR,
    "kindof": B_DECR, "kind-of": B_DECR, "less": B_DECR, "little": B_DECR,
    "marginal": B_DECR, "marginally": B_DECR, "occasional": B_DECR,
    "occasionally": B_DECR, "partly": B_DECR, "scarce": B_DECR,
    "scarcely": B_DECR, "slight": B_DECR, "slightly": B_DECR,
    "somewhat": B_DECR, "sort of": B_DECR, "sorta": B_DECR, "sortof": B_DECR,
    "sort-of": B_DECR,
}

SPECIAL_CASES = {
    "the shit": 3, "the bomb": 3, "bad ass": 1.5, "badass": 1.5,
    "bus stop": 0.0, "yeah right": -2, "kiss of death": -1.5, "to die for": 3,
    "beating heart": 3.1, "broken heart": -2.9,
}


def negated(input_words, include_nt=True):
    input_words = [str(w).lower() for w in input_words]
    for word in NEGATE:
        if word in input_words:
            return True
    if include_nt:
        for word in input_words:
            if "n't" in word:
                return True
    return False


def normalize(score, alpha=15):
    norm_score = score / math.sqrt((score * score) + alpha)
    if norm_score < -1.0:
        return -1.0
    if norm_score > 1.0:
        return 1.0
    return norm_score


def allcap_differential(words):
    allcap_words = 0
    for word in words:
        if word.isupper():
            allcap_words += 1
    cap_differential = len(words) - allcap_words
    return 0 < cap_differential < len(words)


def scalar_inc_dec(word, valence, is_cap_diff):
    scalar = 0.0
    word_lower = word.lower()
    if word_lower in BOOSTER_DICT:
        scalar = BOOSTER_DICT[word_lower]
        if valence < 0:
            scalar *= -1
        if word.isupper() and is_cap_diff:
            if valence > 0:
                scalar += C_INCR
            else:
                scalar -= C_INCR
    return scalar


class SentiText:
    def __init__(self, text):
        self.text = text
        self.words_and_emoticons = self._words_and_emoticons()
        self.is_cap_diff = allcap_differential(self.words_and_emoticons)

    @staticmethod
    def _strip_punc_if_word(token):
        stripped = token.strip(string.punctuation)
        if len(stripped) <= 2:
            return token
        return stripped

    def _words_and_emoticons(self):
        wes = self.text.split()
        return list(map(self._strip_punc_if_word, wes))


class SentimentIntensityAnalyzer:
    def __init__(self, lexicon_file, emoji_file=None):
        self.lexicon = {}
        with open(lexicon_file, encoding="utf-8") as f:
            for line in f:
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                parts = line.strip().split("\t")
                if len(parts) >= 2:
                    self.lexicon[parts[0]] = float(parts[1])
        self.emojis = {}
        if emoji_file:
            with open(emoji_file, encoding="utf-8") as f:
                for line in f:
                    parts = line.rstrip("\n").split("\t")
                    if len(parts) >= 2 and parts[0]:
                        self.emojis[parts[0]] = parts[1]

    def polarity_scores(self, text):
        text_no_emoji = ""
        prev_space = True
        for ch in text:
            if ch in self.emojis:
                description = self.emojis[ch]
                if not prev_space:
                    text_no_emoji += " "
                text_no_emoji += description
                prev_space = False
            else:
                text_no_emoji += ch
                prev_space = ch == " "
        text = text_no_emoji.strip()

        sentitext = SentiText(text)
        sentiments = []
        words_and_emoticons = sentitext.words_and_emoticons
        for i, item in enumerate(words_and_emoticons):
            valence = 0
            if item.lower() in BOOSTER_DICT:
                sentiments.append(valence)
                continue
            if (i < len(words_and_emoticons) - 1 and item.lower() == "kind"
                    and words_and_emoticons[i + 1].lower() == "of"):
                sentiments.append(valence)
                continue
            sentiments = self.sentiment_valence(valence, sentitext, item, i,
                                                sentiments)
        sentiments = self._but_check(words_and_emoticons, sentiments)
        return self.score_valence(sentiments, text)

    def sentiment_valence(self, valence, sentitext, item, i, sentiments):
        is_cap_diff = sentitext.is_cap_diff
        words_and_emoticons = sentitext.words_and_emoticons
        item_lowercase = item.lower()
        if item_lowercase in self.lexicon:
            valence = self.lexicon[item_lowercase]

            if (item_lowercase == "no" and i != len(words_and_emoticons) - 1
                    and words_and_emoticons[i + 1].lower() in self.lexicon):
                valence = 0.0
            if ((i > 0 and words_and_emoticons[i - 1].lower() == "no")
                    or (i > 1 and words_and_emoticons[i - 2].lower() == "no")
                    or (i > 2 and words_and_emoticons[i - 3].lower() == "no"
                        and words_and_emoticons[i - 1].lower() in ["or", "nor"])):
                valence = self.lexicon[item_lowercase] * N_SCALAR

            if item.isupper() and is_cap_diff:
                if valence > 0:
                    valence += C_INCR
                else:
                    valence -= C_INCR

            for start_i in range(0, 3):
                if (i > start_i and words_and_emoticons[i - (start_i + 1)].lower()
                        not in self.lexicon):
                    s = scalar_inc_dec(words_and_emoticons[i - (start_i + 1)],
                                       valence, is_cap_diff)
                    if start_i == 1 and s != 0:
                        s = s * 0.95
                    if start_i == 2 and s != 0:
                        s = s * 0.9
                    valence = valence + s
                    valence = self._negation_check(valence, words_and_emoticons,
                                                   start_i, i)
                    if start_i == 2:
                        valence = self._special_idioms_check(
                            valence, words_and_emoticons, i)
            valence = self._least_check(valence, words_and_emoticons, i)
        sentiments.append(valence)
        return sentiments

    def _least_check(self, valence, words_and_emoticons, i):
        if (i > 1 and words_and_emoticons[i - 1].lower() not in self.lexicon
                and words_and_emoticons[i - 1].lower() == "least"):
            if (words_and_emoticons[i - 2].lower() != "at"
                    and words_and_emoticons[i - 2].lower() != "very"):
                valence = valence * N_SCALAR
        elif (i > 0 and words_and_emoticons[i - 1].lower() not in self.lexicon
              and words_and_emoticons[i - 1].lower() == "least"):
            valence = valence * N_SCALAR
        return valence

    @staticmethod
    def _but_check(words_and_emoticons, sentiments):
        words_lower = [str(w).lower() for w in words_and_emoticons]
        if "but" in words_lower:
            bi = words_lower.index("but")
            for sentiment in sentiments:
                si = sentiments.index(sentiment)
                if si < bi:
                    sentiments.pop(si)
                    sentiments.insert(si, sentiment * 0.5)
                elif si > bi:
                    sentiments.pop(si)
                    sentiments.insert(si, sentiment * 1.5)
        return sentiments

    @staticmethod
    def _special_idioms_check(valence, words_and_emoticons, i):
        words_lower = [str(w).lower() for w in words_and_emoticons]
        onezero = "{0} {1}".format(words_lower[i - 1], words_lower[i])
        twoonezero = "{0} {1} {2}".format(words_lower[i - 2], words_lower[i - 1],
                                          words_lower[i])
        twoone = "{0} {1}".format(words_lower[i - 2], words_lower[i - 1])
        threetwoone = "{0} {1} {2}".format(words_lower[i - 3], words_lower[i - 2],
                                           words_lower[i - 1])
        threetwo = "{0} {1}".format(words_lower[i - 3], words_lower[i - 2])

        for seq in [onezero, twoonezero, twoone, threetwoone, threetwo]:
            if seq in SPECIAL_CASES:
                valence = SPECIAL_CASES[seq]
                break

        if len(words_lower) - 1 > i:
            zeroone = "{0} {1}".format(words_lower[i], words_lower[i + 1])
            if zeroone in SPECIAL_CASES:
                valence = SPECIAL_CASES[zeroone]
        if len(words_lower) - 1 > i + 1:
            zeroonetwo = "{0} {1} {2}".format(words_lower[i], words_lower[i + 1],
                                              words_lower[i + 2])
            if zeroonetwo in SPECIAL_CASES:
                valence = SPECIAL_CASES[zeroonetwo]

        for n_gram in [threetwoone, threetwo, twoone]:
            if n_gram in BOOSTER_DICT:
                valence = valence + BOOSTER_DICT[n_gram]
        return valence

    @staticmethod
    def _negation_check(valence, words_and_emoticons, start_i, i):
        words_lower = [str(w).lower() for w in words_and_emoticons]
        if start_i == 0:
            if negated([words_lower[i - (start_i + 1)]]):
                valence = valence * N_SCALAR
        if start_i == 1:
            if (words_lower[i - 2] == "never"
                    and (words_lower[i - 1] == "so" or words_lower[i - 1] == "this")):
                valence = valence * 1.25
            elif (words_lower[i - 2] == "without"
                  and words_lower[i - 1] == "doubt"):
                valence = valence
            elif negated([words_lower[i - (start_i + 1)]]):
                valence = valence * N_SCALAR
        if start_i == 2:
            if (words_lower[i - 3] == "never"
                    and (words_lower[i - 2] == "so" or words_lower[i - 2] == "this")
                    or (words_lower[i - 1] == "so" or words_lower[i - 1] == "this")):
                valence = valence * 1.25
            elif (words_lower[i - 3] == "without"
                  and (words_lower[i - 2] == "doubt" or words_lower[i - 1] == "doubt")):
                valence = valence
            elif negated([words_lower[i - (start_i + 1)]]):
                valence = valence * N_SCALAR
        return valence

    @staticmethod
    def _punctuation_emphasis(text):
        ep_count = text.count("!")
        if ep_count > 4:
            ep_count = 4
        ep_amplifier = ep_count * 0.292
        qm_count = text.count("?")
        qm_amplifier = 0
        if qm_count > 1:
            if qm_count <= 3:
                qm_amplifier = qm_count * 0.18
            else:
                qm_amplifier = 0.96
        return ep_amplifier + qm_amplifier

    @staticmethod
    def _sift_sentiment_scores(sentiments):
        pos_sum = 0.0
        neg_sum = 0.0
        neu_count = 0
        for sentiment_score in sentiments:
            if sentiment_score > 0:
                pos_sum += float(sentiment_score) + 1
            if sentiment_score < 0:
                neg_sum += float(sentiment_score) - 1
            if sentiment_score == 0:
                neu_count += 1
        return pos_sum, neg_sum, neu_count

    def score_valence(self, sentiments, text):
        # Unlike the published package this returns unrounded values, and an
        # input with no tokens follows the all-neutral convention (neu = 1).
        if sentiments:
            sum_s = float(sum(sentiments))
            punct_emph_amplifier = self._punctuation_emphasis(text)
            if sum_s > 0:
                sum_s += punct_emph_amplifier
            elif sum_s < 0:
                sum_s -= punct_emph_amplifier
            compound = normalize(sum_s)
            pos_sum, neg_sum, neu_count = self._sift_sentiment_scores(sentiments)
            if pos_sum > math.fabs(neg_sum):
                pos_sum += punct_emph_amplifier
            elif pos_sum < math.fabs(neg_sum):
                neg_sum -= punct_emph_amplifier
            total = pos_sum + math.fabs(neg_sum) + neu_count
            pos = math.fabs(pos_sum / total)
            neg = math.fabs(neg_sum / total)
            neu = math.fabs(neu_count / total)
        else:
            compound = 0.0
            pos = 0.0
            neg = 0.0
            neu = 1.0
        return {"pos": pos, "neg": neg, "neu": neu, "compound": compound}


if __name__ == "__main__":
    analyzer = SentimentIntensityAnalyzer(
        sys.argv[1] if len(sys.argv) > 1 else "data/vader_lexicon.txt",
        sys.argv[2] if len(sys.argv) > 2 else None)
    for line in sys.stdin:
        scores = analyzer.polarity_scores(line.rstrip("\n"))
        print("{pos:.17g},{neg:.17g},{neu:.17g},{compound:.17g}".format(**scores))
