"""Reference ceremony counts and semantic density for the bundled fixtures.

Works from the hand labels in each fixture's MANIFEST.toml (not from the Rust
classifier) and the upstream tiktoken encoder over the local cl100k_base
file: every line is tokenized on its own with its trailing newline, and its
tokens are credited to the line's labelled class. Meaning tokens are those on
logic and documentation lines.
"""
import argparse
import json
from pathlib import Path

import tiktoken
from tiktoken.load import load_tiktoken_bpe

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

PATTERN = (
    r"""'(?i:[sdmt]|ll|ve|re)|[^\r\n\p{L}\p{N}]?+\p{L}++|\p{N}{1,3}+| ?[^\s\p{L}\p{N}]++[\r\n]*+|\s++$|\s*[\r\n]|\s+(?!\S)|\s"""
)
CLASSES = {"C": "ceremony", "L": "logic", "D": "documentation", "B": "blank"}


def fixture_report(enc, root):
    manifest = tomllib.loads((root / "MANIFEST.toml").read_text())
    lines = {c: 0 for c in CLASSES.values()}
    tokens = {c: 0 for c in CLASSES.values()}
    for f in manifest["file"]:
        for raw in f["lines"].splitlines():
            tag, _, text = raw.partition(" ")
            cls = CLASSES[tag]
            lines[cls] += 1
            tokens[cls] += len(enc.encode(text + "\n", disallowed_special=()))
    meaning = tokens["logic"] + tokens["documentation"]
    total = sum(tokens.values())
    return {
        "scope": root.name,
        "ceremony_lines": lines["ceremony"],
        "logic_lines": lines["logic"],
        "documentation_lines": lines["documentation"],
        "blank_lines": lines["blank"],
        "meaning_tokens": meaning,
        "total_tokens": total,
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("fixtures", nargs="+", type=Path)
    ap.add_argument("--vocab", default="data/cl100k_base.tiktoken")
    args = ap.parse_args()
    enc = tiktoken.Encoding(
        name="cl100k_base_local",
        pat_str=PATTERN,
        mergeable_ranks=load_tiktoken_bpe(args.vocab),
        special_tokens={},
    )
    for root in args.fixtures:
        print(json.dumps(fixture_report(enc, root)))


if __name__ == "__main__":
    main()
