#!/usr/bin/env python3
"""Reference pattern-lexicon sentiment scorer.

Transcription of the published pattern-en assessment algorithm (the analyzer
TextBlob exposes): known words open assessments carrying (polarity,
subjectivity, intensity); adverb-sense modifiers chain the following known
word through the stored intensity with clamping; negations invert intensity
and halve-and-flip the final polarity; "!" boosts the previous assessment;
emoticons score as fixed moods. Polarity and subjectivity are per-assessment
means. Reads the same lexicon CSV and modifier list the C++ scorer ships
with; used only to generate and cross-check the golden corpus.
"""

import csv
import sys

PUNCTUATION = ".,;:!?()[]{}`'\"@#$^&*+-|=~_"
NEGATIONS = ("no", "not", "n't", "never")
CONTRACTIONS = ("n't", "'m", "'s", "'d", "'ll", "'re", "'ve")

EMOTICONS = {
    "<3": 1.0, ">:d": 1.0, ":-d": 1.0, ":d": 1.0, "=-d": 1.0, "=d": 1.0,
    "x-d": 1.0, "xd": 1.0, "8-d": 1.0, ">:p": -0.75, ":-p": -0.75,
    ":p": -0.75, ":-b": -0.75, ":b": -0.75, ">:)": 0.5, ":-)": 0.5, ":)": 0.5,
    "=)": 0.5, "=]": 0.5, ":]": 0.5, ":}": 0.5, ":>": 0.5, ":3": 0.5,
    "8)": 0.5, "8-)": 0.5, ">;]": 0.25, ";-)": 0.25, ";)": 0.25, ";-]": 0.25,
    ";]": 0.25, ";d": 0.25, ";^)": 0.25, "*-)": 0.25, "*)": 0.25,
    ":-|": -0.25, ":|": -0.25, ">:o": -0.3, ":-o": -0.3, ":o": -0.3,
    "o_o": -0.3, "o.o": -0.3, ">:/": -0.25, ":-/": -0.25, ":/": -0.25,
    ":\\": -0.25, ">:\\": -0.25, ":-s": -0.25, ":s": -0.25, ">:[": -0.75,
    ":-(": -0.75, ":(": -0.75, "=(": -0.75, ":-[": -0.75, ":[": -0.75,
    ":{": -0.75, ":-<": -0.75, ":c": -0.75, ":-c": -0.75, "=/": -0.75,
    ":'(": -1.0, ";'(": -1.0,
}

ABBREVIATIONS = {
    "a.m.", "p.m.", "e.g.", "i.e.", "etc.", "vs.", "dr.", "mr.", "mrs.",
    "ms.", "st.", "no.", "inc.", "ltd.", "co.", "approx.",
}


def is_protected(token_lower):
    return token_lower in CONTRACTIONS or token_lower in EMOTICONS


def is_abbreviation(token):
    lower = token.lower()
    if lower in ABBREVIATIONS:
        return True
    if len(lower) == 2 and lower[0].isalpha() and lower[1] == ".":
        return True
    if len(lower) >= 4 and len(lower) % 2 == 0:
        if all(lower[i].isalpha() and lower[i + 1] == "."
               for i in range(0, len(lower), 2)):
            return True
    return False


def tokenize(text):
    for suffix in CONTRACTIONS:
        text = text.replace(suffix, " " + suffix)
    raw = text.split()
    tokens = []
    for token in raw:
        if is_protected(token.lower()):
            tokens.append(token)
            continue
        while token and token[0] in PUNCTUATION and not is_protected(token.lower()):
            tokens.append(token[0])
            token = token[1:]
        tail = []
        while token and token[-1] in PUNCTUATION and not is_protected(token.lower()):
            if token.endswith("..."):
                tail.append("...")
                token = token[:-3].rstrip(".")
                continue
            if token.endswith(".") and is_abbreviation(token):
                break
            tail.append(token[-1])
            token = token[:-1]
        if token:
            tokens.append(token)
        tokens.extend(reversed(tail))
    return tokens


class PatternAnalyzer:
    def __init__(self, lexicon_csv, modifiers_file=None):
        self.lexicon = {}
        with open(lexicon_csv, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            for row in reader:
                self.lexicon[row["token"].lower()] = (
                    float(row["polarity"]),
                    float(row["subjectivity"]),
                    float(row["intensity"]),
                )
        self.modifiers = set()
        if modifiers_file:
            with open(modifiers_file, encoding="utf-8") as f:
                for line in f:
                    line = line.strip()
                    if line and not line.startswith("#"):
                        self.modifiers.add(line.lower())

    def assessments(self, words):
        a = []
        m = None
        n = None
        for w in words:
            if w in self.lexicon:
                p, s, i = self.lexicon[w]
                if m is None:
                    a.append({"p": p, "s": s, "i": i, "n": 1})
                else:
                    a[-1]["p"] = max(-1.0, min(p * a[-1]["i"], +1.0))
                    a[-1]["s"] = max(-1.0, min(s * a[-1]["i"], +1.0))
                    a[-1]["i"] = i
                if n is not None:
                    a[-1]["i"] = 1.0 / a[-1]["i"]
                    a[-1]["n"] = -1
                m = None
                n = None
                if w in self.modifiers:
                    m = w
                if w in NEGATIONS:
                    n = w
            else:
                if w in NEGATIONS:
                    n = w
                elif n and len(w.strip("'")) > 1:
                    n = None
                if n is not None and m is not None and m.endswith("ly"):
                    if a:
                        a[-1]["n"] = -1
                    n = None
                else:
                    m = None
                if w == "!" and a:
                    a[-1]["p"] = max(-1.0, min(a[-1]["p"] * 1.25, +1.0))
                if (not w.isalpha()) and len(w) <= 5 and w not in PUNCTUATION:
                    if w in EMOTICONS:
                        a.append({"p": EMOTICONS[w], "s": 1.0, "i": 1.0, "n": 1})
        return a

    def analyze(self, text):
        words = [w.lower() for w in tokenize(text)]
        a = self.assessments(words)
        if not a:
            return 0.0, 0.0
        polarity = sum(x["p"] * -0.5 if x["n"] < 0 else x["p"] for x in a) / len(a)
        subjectivity = sum(x["s"] for x in a) / len(a)
        return polarity, subjectivity


if __name__ == "__main__":
    analyzer = PatternAnalyzer(
        sys.argv[1] if len(sys.argv) > 1 else "data/pattern_lexicon.csv",
        sys.argv[2] if len(sys.argv) > 2 else "data/pattern_modifiers.txt")
    for line in sys.stdin:
        polarity, subjectivity = analyzer.analyze(line.rstrip("\n"))
        print(f"{polarity:.17g},{subjectivity:.17g}")
