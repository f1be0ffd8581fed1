"""Regenerates core/data/lexicon.tsv.

Source: the Brill tagger lexicon (MIT license) as redistributed in the
textblob wheel (textblob/en/en-lexicon.txt), restricted to the most frequent
English words according to the wordfreq package.

usage: python3 build_lexicon.py <en-lexicon.txt> <out.tsv> [size]
"""
import sys

import wordfreq

PENN_TO_COARSE = {
    "NN": "NOUN", "NNS": "NOUN", "NNP": "NOUN", "NNPS": "NOUN",
    "VB": "VERB", "VBD": "VERB", "VBG": "VERB", "VBN": "VERB", "VBP": "VERB",
    "VBZ": "VERB", "MD": "VERB",
    "JJ": "ADJ", "JJR": "ADJ", "JJS": "ADJ",
    "DT": "DET", "PDT": "DET", "WDT": "DET",
    "PRP": "PRON", "PRP$": "PRON", "WP": "PRON", "WP$": "PRON", "EX": "PRON",
    "IN": "ADP", "TO": "ADP",
    "RB": "ADV", "RBR": "ADV", "RBS": "ADV", "WRB": "ADV", "RP": "ADV",
    "CD": "NUM",
}


def verb_stems(lexicon, raw):
    """Base forms attested through an inflected verb form in the source."""
    stems = set()
    for word, penn in raw.items():
        cands = []
        if penn in ("VBD", "VBN") and word.endswith("ed"):
            cands = [word[:-1], word[:-2]]
            if word.endswith("ied"):
                cands.append(word[:-3] + "y")
            if len(word) > 4 and word[-3] == word[-4]:
                cands.append(word[:-3])
        elif penn == "VBG" and word.endswith("ing"):
            cands = [word[:-3], word[:-3] + "e"]
            if len(word) > 5 and word[-4] == word[-5]:
                cands.append(word[:-4])
        elif penn in ("VB", "VBP"):
            cands = [word]
        for c in cands:
            if c in lexicon:
                stems.add(c)
                break
    return stems


def add_verb_readings(lexicon):
    stems = verb_stems(lexicon, RAW)
    for word, tags in lexicon.items():
        if "VERB" in tags:
            continue
        base = None
        if word in stems:
            base = word
        elif word.endswith("es") and word[:-2] in stems:
            base = word[:-2]
        elif word.endswith("ies") and word[:-3] + "y" in stems:
            base = word[:-3] + "y"
        elif word.endswith("s") and word[:-1] in stems:
            base = word[:-1]
        if base is not None and tags[0] == "NOUN":
            tags.append("VERB")
    for word, tags in lexicon.items():
        if tags != ["VERB"] or RAW.get(word) not in ("VB", "VBP"):
            continue
        for plural in (word + "s", word + "es"):
            if RAW.get(plural) == "NNS":
                tags.append("NOUN")
                break


RAW = {}


def main():
    src, out = sys.argv[1], sys.argv[2]
    size = int(sys.argv[3]) if len(sys.argv) > 3 else 15000
    lexicon = {}
    with open(src, encoding="utf-8") as f:
        for line in f:
            if line.startswith(";;;"):
                continue
            parts = line.split()
            if len(parts) < 2:
                continue
            word = parts[0]
            RAW.setdefault(word, parts[1])
            if word != word.lower() or not word.isalpha():
                continue
            tags = []
            for penn in parts[1:]:
                coarse = PENN_TO_COARSE.get(penn, "OTHER")
                if coarse not in tags:
                    tags.append(coarse)
            lexicon.setdefault(word, tags)
    add_verb_readings(lexicon)
    ranked = [w for w in wordfreq.top_n_list("en", 200000) if w in lexicon]
    chosen = sorted(ranked[:size])
    with open(out, "w", encoding="utf-8") as f:
        f.write("# kogito POS lexicon v1: word<TAB>coarse tags, most likely first\n")
        f.write("# derived from the Brill tagger lexicon (MIT license)\n")
        for w in chosen:
            f.write(f"{w}\t{','.join(lexicon[w])}\n")
    print(f"wrote {len(chosen)} entries")


if __name__ == "__main__":
    main()
