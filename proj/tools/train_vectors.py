"""Train small word vectors (PPMI + truncated SVD) for the bundled fixtures.

Training text: every WordNet synset rendered as "<member words> <gloss>", plus
the fixture corpora. The output vocabulary is limited to the fixture words and
the lexicon's verbs and nouns so the file stays small.

usage: train_vectors.py WORDNET_DICT_DIR LEXICON.tsv OUT.txt CORPUS.jsonl [...]
"""
import argparse
import glob
import json
import os
import re
from collections import Counter

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import svds

WORD = re.compile(r"[a-z][a-z'-]*[a-z]|[a-z]")


def words(text):
    return WORD.findall(text.lower())


def wordnet_lines(dict_dir):
    for path in sorted(glob.glob(os.path.join(dict_dir, "data.*"))):
        with open(path, encoding="latin-1") as fh:
            for line in fh:
                if line.startswith("  ") or "|" not in line:
                    continue
                head, gloss = line.split("|", 1)
                fields = head.split()
                count = int(fields[3], 16)
                members = [fields[4 + 2 * i].replace("_", " ") for i in range(count)]
                yield words(" ".join(members) + " " + gloss)


def corpus_lines(paths):
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                rec = json.loads(line)
                for doc in rec["documents"]:
                    for sent in re.split(r"(?<=[.!?])\s+", doc):
                        yield words(sent)
                summary = rec.get("summary", "")
                for sent in re.split(r"(?<=[.!?])\s+", summary if isinstance(summary, str) else " ".join(summary)):
                    yield words(sent)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("dict_dir")
    ap.add_argument("lexicon")
    ap.add_argument("out")
    ap.add_argument("corpora", nargs="+")
    ap.add_argument("--dim", type=int, default=50)
    ap.add_argument("--window", type=int, default=4)
    ap.add_argument("--min-count", type=int, default=2)
    args = ap.parse_args()

    lines = list(wordnet_lines(args.dict_dir)) + list(corpus_lines(args.corpora))
    counts = Counter(w for ln in lines for w in ln)
    vocab = sorted(w for w, c in counts.items() if c >= args.min_count)
    index = {w: i for i, w in enumerate(vocab)}

    rows, cols = [], []
    for ln in lines:
        ids = [index[w] for w in ln if w in index]
        for i, a in enumerate(ids):
            for b in ids[max(0, i - args.window): i] + ids[i + 1: i + 1 + args.window]:
                rows.append(a)
                cols.append(b)
    n = len(vocab)
    co = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n)).tocsr()
    co.sum_duplicates()

    total = co.sum()
    row_sum = np.asarray(co.sum(axis=1)).ravel()
    ctx = np.asarray(co.sum(axis=0)).ravel() ** 0.75
    ctx /= ctx.sum()
    co = co.tocoo()
    pmi = np.log((co.data / total) / ((row_sum[co.row] / total) * ctx[co.col]))
    keep = pmi > 0
    ppmi = coo_matrix((pmi[keep], (co.row[keep], co.col[keep])), shape=(n, n)).tocsr()

    u, s, _ = svds(ppmi, k=args.dim, random_state=0)
    order = np.argsort(-s)
    vecs = u[:, order] * np.sqrt(s[order])
    # Fix the sign of each component so reruns give identical files.
    signs = np.sign(vecs[np.argmax(np.abs(vecs), axis=0), np.arange(vecs.shape[1])])
    vecs *= signs

    wanted = set()
    for ln in corpus_lines(args.corpora):
        wanted.update(ln)
    with open(args.lexicon, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#") or "\t" not in line:
                continue
            verb, nouns = line.rstrip("\n").split("\t")
            wanted.add(verb)
            wanted.update(nouns.split(","))
    out_words = [w for w in vocab if w in wanted]
    with open(args.out, "w", encoding="utf-8") as out:
        out.write(f"{len(out_words)} {args.dim}\n")
        for w in out_words:
            v = vecs[index[w]]
            out.write(w + " " + " ".join(f"{x:.4f}" for x in v) + "\n")
    print(f"vocab {n}, written {len(out_words)} x {args.dim}")


if __name__ == "__main__":
    main()
