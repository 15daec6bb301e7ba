#!/usr/bin/env python3
"""Independent renderer for the three log layouts.

Reads a corpus (one JSON event per line) and the registry TOML, renders the
human-readable, structured and compressed layouts from scratch, and records
token counts (tiktoken cl100k_base over the local rank file), line counts,
SHA-256 digests and a few corpus statistics.

usage: log_formats.py CORPUS.jsonl REGISTRY.toml VOCAB.tiktoken OUT.json
"""
import base64
import datetime as dt
import hashlib
import json
import sys
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import tiktoken

PATTERN = r"""'(?i:[sdmt]|ll|ve|re)|[^\r\n\p{L}\p{N}]?+\p{L}++|\p{N}{1,3}+| ?[^\s\p{L}\p{N}]++[\r\n]*+|\s++$|\s*[\r\n]|\s+(?!\S)|\s"""
LEVELS = [("D", "DEBUG"), ("I", "INFO"), ("W", "WARN"), ("E", "ERROR")]


def load_encoding(path):
    ranks = {}
    with open(path, "rb") as f:
        for line in f:
            if line.strip():
                tok, rank = line.split()
                ranks[base64.b64decode(tok)] = int(rank)
    return tiktoken.Encoding(name="oracle", pat_str=PATTERN, mergeable_ranks=ranks, special_tokens={})


def esc(s):
    return s.replace("\\", "\\\\").replace("|", "\\|").replace("\n", "\\n").replace("\r", "\\r")


def epoch(ms):
    s, m = divmod(ms, 1000)
    return str(s) if m == 0 else f"{s}.{m:03d}"


def frame(f):
    return f"{f['symbol']}({f['file']}:{f['line']})"


def render_a(e, reg):
    ts = dt.datetime.fromtimestamp(e["ts"] / 1000, dt.timezone.utc).strftime("%Y-%m-%d %H:%M:%S")
    attrs = e["attrs"]
    tpl = reg["templates"].get(e["kind"])
    used = set()
    if tpl is not None:
        text = tpl
        for k, v in attrs:
            if "{" + k + "}" in tpl:
                text = text.replace("{" + k + "}", v)
                used.add(k)
    else:
        words = e["kind"].replace("_", " ")
        text = words[:1].upper() + words[1:]
    rest = [f"{k}={v}" for k, v in attrs if k not in used]
    if rest:
        text += (" (" + ", ".join(rest) + ")") if tpl is not None else (": " + ", ".join(rest))
    line = f"{ts} {e['level']} [{e['service']}] {text}".replace("\n", "\\n").replace("\r", "\\r")
    return [line] + ["    at " + frame(f) for f in e.get("trace", [])]


def render_b(e, reg):
    values = reg["values"]
    parts = [epoch(e["ts"]), e["level"], esc(e["service"]), esc(e["kind"])]
    for k, v in e["attrs"]:
        parts.append(f"{esc(k)}={esc(v.replace(' ', '_') if v in values else v)}")
    if e.get("trace"):
        parts.append("trace=" + ";".join(esc(frame(f)) for f in e["trace"]))
    return ["|".join(parts)]


def render_c(e, reg):
    values = reg["values"]
    codes = set(values.values())
    level = {n: c for c, n in LEVELS}[e["level"]]
    parts = [epoch(e["ts"]), level, reg["services"][e["service"]], reg["kinds"][e["kind"]]]
    for k, v in e["attrs"]:
        if v in values:
            val = values[v]
        elif v in codes or v.startswith("\\."):
            val = "\\." + esc(v)
        else:
            val = esc(v)
        parts.append(f"{reg['attr_keys'][k]}={val}")
    if e.get("trace"):
        exc = dict(e["attrs"]).get("exception", "Exception").rsplit(".", 1)[-1]
        tr = e["trace"]
        collapsed = exc + "@" + tr[0]["symbol"] + "+" + str(len(tr))
        parts.append(reg["attr_keys"]["trace"] + "=" + esc(collapsed))
    return ["|".join(parts)]


def header(reg):
    def entry(full):
        return full.replace("\\", "\\\\").replace(";", "\\;").replace("\n", "\\n")

    lines = ["# levels: " + "; ".join(f"{c}={n}" for c, n in LEVELS)]
    for section, label in [("services", "services"), ("kinds", "kinds"), ("attr_keys", "keys"), ("values", "values")]:
        table = reg.get(section, {})
        if table:
            lines.append(f"# {label}: " + "; ".join(f"{table[f]}={entry(f)}" for f in sorted(table)))
    return lines


def main():
    corpus, registry, vocab, out = sys.argv[1:5]
    with open(registry, "rb") as f:
        reg = tomllib.load(f)
    events = [json.loads(l) for l in open(corpus, encoding="utf-8") if l.strip()]
    enc = load_encoding(vocab)
    result = {"events": len(events)}
    result["error_events"] = sum(e["level"] == "ERROR" for e in events)
    by_service = {}
    for e in events:
        if e["level"] == "ERROR":
            by_service[e["service"]] = by_service.get(e["service"], 0) + 1
    result["error_events_by_service"] = dict(sorted(by_service.items()))
    result["trace_frames"] = sum(len(e.get("trace", [])) for e in events)
    for name, fn, head in [("a", render_a, []), ("b", render_b, []), ("c", render_c, header(reg))]:
        lines = list(head)
        for e in events:
            lines += fn(e, reg)
        text = "".join(l + "\n" for l in lines)
        result[name] = {
            "tokens": len(enc.encode(text, disallowed_special=())),
            "lines": len(lines),
            "body_lines": len(lines) - len(head),
            "sha256": hashlib.sha256(text.encode()).hexdigest(),
        }
    with open(out, "w") as f:
        json.dump(result, f, indent=2)
        f.write("\n")
    print(json.dumps(result, indent=2))


if __name__ == "__main__":
    main()
