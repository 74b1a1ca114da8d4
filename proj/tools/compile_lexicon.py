#!/usr/bin/env python3
"""Compile a verb -> nominalization lexicon from WordNet 3.0 database files.

Reads the lexical "+" (derivationally related form) pointers of every verb
sense in data.verb and keeps the ones whose target is a noun. Output is one
line per verb lemma: ``verb<TAB>noun1,noun2,...`` sorted by verb.

usage: compile_lexicon.py WORDNET_DICT_DIR OUT.tsv
"""
import glob
import os
import sys
from collections import defaultdict


def parse_synsets(paths):
    synsets = {}
    for path in paths:
        with open(path, encoding="latin-1") as fh:
            for line in fh:
                if line.startswith("  "):
                    continue
                fields = line.split("|", 1)[0].split()
                offset = fields[0]
                w_cnt = int(fields[3], 16)
                words = [fields[4 + 2 * i].lower() for i in range(w_cnt)]
                pos = 4 + 2 * w_cnt
                p_cnt = int(fields[pos])
                ptrs = []
                for i in range(p_cnt):
                    sym, tgt, tpos, st = fields[pos + 1 + 4 * i: pos + 5 + 4 * i]
                    ptrs.append((sym, tgt, tpos, int(st[:2], 16), int(st[2:], 16)))
                synsets[offset] = (words, ptrs)
    return synsets


def main():
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    root, out = sys.argv[1], sys.argv[2]
    verbs = parse_synsets([os.path.join(root, "data.verb")])
    nouns = parse_synsets(sorted(glob.glob(os.path.join(root, "data.noun*"))))

    lexicon = defaultdict(set)
    for words, ptrs in verbs.values():
        for sym, tgt, tpos, src_no, tgt_no in ptrs:
            if sym != "+" or tpos != "n" or src_no == 0:
                continue
            verb = words[src_no - 1]
            noun = nouns[tgt][0][tgt_no - 1]
            if "_" in verb or "_" in noun:
                continue
            lexicon[verb].add(noun.split("(")[0])

    with open(out, "w", encoding="utf-8") as fh:
        for verb in sorted(lexicon):
            fh.write(verb + "\t" + ",".join(sorted(lexicon[verb])) + "\n")


if __name__ == "__main__":
    main()
