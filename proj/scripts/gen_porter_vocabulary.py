#!/usr/bin/env python3
"""Regenerate tests/data/porter_vocabulary.tsv.

The reference stems come from two independent Porter implementations
(Snowball's `porter` algorithm and NLTK's PorterStemmer in ORIGINAL_ALGORITHM
mode). Only words on which both agree are written, so the file does not
depend on either implementation's quirks.

    pip install snowballstemmer nltk english-words
    python3 scripts/gen_porter_vocabulary.py > tests/data/porter_vocabulary.tsv
"""

import random
import sys

import snowballstemmer
from english_words import get_english_words_set
from nltk.stem.porter import PorterStemmer

N_DICTIONARY = 16000
N_INFLECTED = 10000
SUFFIXES = ["s", "es", "ed", "ing", "ly", "ness", "ment", "ation", "er",
            "ies", "ational", "izer", "fulness", "iveness", "ality", "ible",
            "ance", "ence", "ement", "ism", "ous", "ive", "ize", "ate"]


def main() -> int:
    rng = random.Random(20140101)
    words = sorted(get_english_words_set(["web2"], lower=True, alpha=True))
    words = [w for w in words if w.isascii() and w.isalpha()]

    picked = set(rng.sample(words, N_DICTIONARY))
    bases = rng.sample(words, N_INFLECTED * 2)
    for base in bases:
        if len(picked) >= N_DICTIONARY + N_INFLECTED:
            break
        picked.add(base + rng.choice(SUFFIXES))

    snowball = snowballstemmer.stemmer("porter")
    nltk_original = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)

    rows = []
    for w in sorted(picked):
        a = snowball.stemWord(w)
        b = nltk_original.stem(w)
        if a == b:
            rows.append((w, a))

    out = sys.stdout
    for w, s in rows:
        out.write(f"{w}\t{s}\n")
    print(f"{len(rows)} pairs ({len(picked) - len(rows)} disagreements dropped)",
          file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
