#!/usr/bin/env python3
"""Freezes the golden sentiment corpus.

Runs both reference transcriptions over the 50-sentence corpus and writes
tests/fixtures/sentiment_oracle.csv with full-precision expected values for
all six lexicon-driven channels. Run from the repository root; rerun only if
a lexicon file or a reference algorithm changes, and commit the result.
"""

import csv
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
from pattern_ref import PatternAnalyzer
from vader_ref import SentimentIntensityAnalyzer

SENTENCES = [
    "Bitcoin surged past its previous high as traders celebrated a great day for the market.",
    "The exchange collapse wiped out savings and left investors angry and scared.",
    "Analysts are optimistic: the new protocol upgrade looks extremely promising.",
    "This coin is a total scam and everyone involved should be ashamed.",
    "VADER is smart, handsome, and funny.",
    "The book was good.",
    "The book was not good.",
    "The plot was good, but the characters are uncompelling and the dialog is not great.",
    "At least it isn't a horrible outcome for miners.",
    "The regulation news is not very good for short-term holders.",
    "HODL!!! This is the BEST project in the entire space!!!",
    "Is this the worst crash since 2014?? Really??",
    "Mining profitability fell again, which is kind of bad for small operators.",
    "The fork went smoothly and the network remains stable and secure.",
    "I'm really happy with my cold wallet, it never failed me.",
    "Fees are insanely high today and transactions are painfully slow.",
    "The rally was never so strong before.",
    "Without doubt the strongest quarter the foundation has reported.",
    "No profit, no glory, and certainly no lambo this year.",
    "The whitepaper is well written but the roadmap seems unrealistic.",
    "Institutional adoption is growing rapidly and that can only be good news.",
    "My portfolio is down 40% and I feel terrible about buying the top.",
    "Rumors of a ban turned out to be fake, markets recovered quickly.",
    "The developers barely shipped anything this quarter.",
    "Liquidity dried up, spreads widened, and panic selling followed.",
    "What a wonderful time to be a hodler :)",
    "Sell now or regret it later :(",
    "The audit found no critical issues, which is reassuring.",
    "Scarcely any volume today; the order books look thin and weak.",
    "An utterly brilliant trade saved the fund from a massive loss.",
    "The CEO's statement was neither honest nor helpful.",
    "Traders called the bounce 'the bomb' after weeks of misery.",
    "That influencer is a bad ass when it comes to chart analysis.",
    "Yeah right, another guaranteed 100x moonshot.",
    "The hack was a kiss of death for the lending platform.",
    "It was hardly a surprise that the token dumped after unlock.",
    "Most exchanges handled the outage gracefully, more or less.",
    "The SEC filing was neither approved nor rejected today.",
    "Never buy a dip this sharp without a plan.",
    "The testnet results exceeded expectations and the team is very proud.",
    "Uncertain macro conditions make every position risky right now.",
    "I don't trust centralized custodians anymore.",
    "The community is friendly, welcoming, and surprisingly drama-free.",
    "A marginally better close today, nothing to celebrate yet.",
    "Volume so low it barely registers; the chart is flat and boring.",
    "This wallet update is the shit, transactions confirm instantly now.",
    "Gas fees at least doubled, which isn't great for small trades.",
    "Margin calls cascaded and the largest fund imploded spectacularly.",
    "Despite the fear, long-term fundamentals remain remarkably solid.",
    "Cold storage plus patience equals peace of mind, simple as that.",
]


def main():
    root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    vader = SentimentIntensityAnalyzer(
        os.path.join(root, "data", "vader_lexicon.txt"),
        os.path.join(root, "data", "vader_emoji_lexicon.txt"))
    pattern = PatternAnalyzer(
        os.path.join(root, "data", "pattern_lexicon.csv"),
        os.path.join(root, "data", "pattern_modifiers.txt"))

    out_path = os.path.join(root, "tests", "fixtures", "sentiment_oracle.csv")
    with open(out_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["text", "sid_pos", "sid_neg", "sid_neu", "sid_com",
                         "tb_polarity", "tb_subjectivity"])
        for text in SENTENCES:
            v = vader.polarity_scores(text)
            p, s = pattern.analyze(text)
            writer.writerow([
                text,
                "%.17g" % v["pos"], "%.17g" % v["neg"], "%.17g" % v["neu"],
                "%.17g" % v["compound"], "%.17g" % p, "%.17g" % s,
            ])
    print("wrote", out_path, "with", len(SENTENCES), "sentences")


if __name__ == "__main__":
    main()
