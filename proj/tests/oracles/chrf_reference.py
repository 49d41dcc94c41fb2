#!/usr/bin/env python3
"""Standalone chrF++ reference scorer used to freeze test fixtures.

Implements the chrF++ configuration `case:mixed | eff:yes | nc:6 | nw:2
| space:no | beta 2`: character n-grams of order 1..6 over the
whitespace-stripped text, word n-grams of order 1..2 over
punctuation-separated tokens, F_beta averaged over the orders that have
n-grams on both sides (effective-order smoothing).

Run from the repository root:

    python3 tests/oracles/chrf_reference.py > tests/fixtures/chrf_cases.json

The output is committed; the C++ implementation must agree with it to
four decimal places.
"""

import json
import string
import sys
from collections import Counter

CHAR_ORDER = 6
WORD_ORDER = 2
BETA = 2.0

PUNCTUATION = set(string.punctuation)


def separate_punctuation(line):
    """chrF++-style tokenization: split off one leading or trailing
    punctuation character from each whitespace token."""
    tokenized = []
    for w in line.split():
        if len(w) == 1:
            tokenized.append(w)
        elif w[-1] in PUNCTUATION:
            tokenized.extend([w[:-1], w[-1]])
        elif w[0] in PUNCTUATION:
            tokenized.extend([w[0], w[1:]])
        else:
            tokenized.append(w)
    return tokenized


def char_ngrams(line, max_order):
    text = "".join(line.split())
    return [Counter(text[i:i + n] for i in range(len(text) - n + 1))
            for n in range(1, max_order + 1)]


def word_ngrams(tokens, max_order):
    return [Counter(" ".join(tokens[i:i + n]) for i in range(len(tokens) - n + 1))
            for n in range(1, max_order + 1)]


def segment_statistics(hyp, ref):
    """[hyp_count, ref_count, match_count] per order, char orders first."""
    stats = []
    hyp_grams = char_ngrams(hyp, CHAR_ORDER) + word_ngrams(separate_punctuation(hyp), WORD_ORDER)
    ref_grams = char_ngrams(ref, CHAR_ORDER) + word_ngrams(separate_punctuation(ref), WORD_ORDER)
    for h, r in zip(hyp_grams, ref_grams):
        match = sum(min(c, r[g]) for g, c in h.items() if g in r)
        stats.append([sum(h.values()), sum(r.values()), match])
    return stats


def f_score(stats):
    eps = 1e-16
    factor = BETA * BETA
    score = 0.0
    effective_order = 0
    for n_hyp, n_ref, n_match in stats:
        if n_hyp == 0 or n_ref == 0:
            continue  # effective-order smoothing: skip empty orders
        effective_order += 1
        prec = n_match / n_hyp
        rec = n_match / n_ref
        denom = factor * prec + rec
        score += (1 + factor) * prec * rec / denom if denom > 0 else eps
    if effective_order == 0:
        return 0.0
    return 100.0 * score / effective_order


def sentence_chrf(hyp, ref):
    return f_score(segment_statistics(hyp, ref))


def corpus_chrf(hyps, refs):
    totals = None
    for hyp, ref in zip(hyps, refs):
        stats = segment_statistics(hyp, ref)
        if totals is None:
            totals = stats
        else:
            totals = [[a + b for a, b in zip(x, y)] for x, y in zip(totals, stats)]
    return f_score(totals)


PAIRS = [
    ("the cat sat on the mat", "the cat sat on the mat"),
    ("the cat sat on the mat", "a cat was sitting on the mat"),
    ("il margine della strada", "il vantaggio della squadra"),
    ("he has an edge over rivals", "he holds an advantage over his rivals"),
    ("qqq www zzz", "the quick brown fox"),
    ("la squadra ha un vantaggio", "la squadra ha un vantaggio netto"),
    ("Dogs bark loudly.", "Dogs bark very loudly."),
    ("un cane abbaia", "un cane abbaia forte nella notte"),
    ("she walked to the bank of the river", "she strolled to the river bank"),
    ("el banco cerro temprano", "el banco cerro muy temprano hoy"),
    ("cafe au lait", "café au lait"),
    ("è un vantaggio, davvero!", "è davvero un vantaggio!"),
    ("one", "one two three four five"),
    ("a b c d e f g", "a b c d e f g"),
    ("translation quality matters", "the quality of translation matters a lot"),
    ("word", "sword"),
    ("", "non empty reference"),
    ("short", "short"),
    ("The Bank closed Early", "the bank closed early"),
    ("correr corriendo corrio", "corriendo se fue a correr"),
]


def main():
    cases = []
    for hyp, ref in PAIRS:
        cases.append({"hyp": hyp, "ref": ref, "chrf": round(sentence_chrf(hyp, ref), 10)})
    out = {
        "config": {"char_order": CHAR_ORDER, "word_order": WORD_ORDER, "beta": BETA,
                   "eff": "yes", "space": "no", "case": "mixed"},
        "cases": cases,
        "corpus_chrf": round(corpus_chrf([h for h, _ in PAIRS], [r for _, r in PAIRS]), 10),
    }
    json.dump(out, sys.stdout, indent=1, ensure_ascii=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
