"""Convert the plain-text news fixture sources into JSONL corpora.

Source format: "@@ SET <id>" starts a record, "-- DOC" a document and
"-- SUMMARY" the reference summary.
"""
import argparse
import json
import pathlib


def parse(text):
    records = []
    for block in text.split("@@ SET ")[1:]:
        head, _, body = block.partition("\n")
        parts = body.split("-- ")
        docs, summary = [], None
        for part in parts:
            kind, _, content = part.partition("\n")
            content = " ".join(content.split())
            if kind.strip() == "DOC":
                docs.append(content)
            elif kind.strip() == "SUMMARY":
                summary = content
        if not docs or summary is None:
            raise ValueError(f"set {head.strip()}: missing documents or summary")
        records.append({"id": head.strip(), "documents": docs, "summary": summary})
    return records


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("sources", nargs="+", type=pathlib.Path)
    ap.add_argument("--corpus", type=pathlib.Path, required=True)
    ap.add_argument("--refs", type=pathlib.Path, required=True)
    ap.add_argument("--sample", type=pathlib.Path, help="also write the first three records here")
    args = ap.parse_args()

    records = []
    for src in args.sources:
        records.extend(parse(src.read_text(encoding="utf-8")))
    with args.corpus.open("w", encoding="utf-8") as out:
        for r in records:
            out.write(json.dumps(r, ensure_ascii=False) + "\n")
    with args.refs.open("w", encoding="utf-8") as out:
        for r in records:
            out.write(json.dumps({"id": r["id"], "references": [r["summary"]]}, ensure_ascii=False) + "\n")
    if args.sample:
        with args.sample.open("w", encoding="utf-8") as out:
            for r in records[:3]:
                out.write(json.dumps(r, ensure_ascii=False) + "\n")
    for r in records:
        words = sum(len(d.split()) for d in r["documents"])
        print(f"{r['id']}: {len(r['documents'])} docs, {words} words, summary {len(r['summary'].split())} words")


if __name__ == "__main__":
    main()
