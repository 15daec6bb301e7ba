#!/usr/bin/env python3
"""Writes fixture sources from the labelled blocks in a MANIFEST.toml and
prints per-class line counts.

"""
import argparse
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

CLASSES = {"C": "ceremony", "L": "logic", "D": "documentation", "B": "blank"}


def parse_block(block):
    out = []
    for raw in block.splitlines():
        tag, _, text = raw.partition(" ")
        if tag not in CLASSES:
            raise SystemExit(f"bad tag {tag!r} in {raw!r}")
        if tag == "B" and text.strip():
            raise SystemExit(f"blank label on non-blank line {raw!r}")
        out.append((CLASSES[tag], text))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("fixture_dir", type=Path)
    ap.add_argument("--check", action="store_true", help="verify sources instead of writing them")
    args = ap.parse_args()
    root, check = args.fixture_dir, args.check
    manifest = tomllib.loads((root / "MANIFEST.toml").read_text())
    totals = {c: 0 for c in CLASSES.values()}
    for f in manifest["file"]:
        rows = parse_block(f["lines"])
        text = "".join(t + "\n" for _, t in rows)
        target = root / f["path"]
        if check:
            if target.read_text() != text:
                raise SystemExit(f"{target} differs from its manifest")
        else:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text)
        for cls, _ in rows:
            totals[cls] += 1
    ratio = totals["ceremony"] / totals["logic"] if totals["logic"] else float("inf")
    print(f"{root.name}: {totals} ratio={ratio:.2f}")


if __name__ == "__main__":
    main()
