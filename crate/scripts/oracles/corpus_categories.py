"""Replays the category draw of the corpus generator and prints the histogram.

Independent re-implementation of the documented procedure: PCG XSL RR 128/64
(LCG variant, as in rand_pcg::Pcg64::new(state, stream)) on stream 1, one
53-bit uniform per event, cumulative-weight selection, then the coverage
fix-up.
"""
import json
import sys

MASK128 = (1 << 128) - 1
MASK64 = (1 << 64) - 1
MULT = 0x2360ED051FC65DA44385DF649FCCF645

CATEGORIES = ["http_request", "db_query", "auth", "business", "error_with_trace", "warning"]
DEFAULT_WEIGHTS = [0.35, 0.25, 0.10, 0.15, 0.075, 0.075]


class Pcg64:
    def __init__(self, state, stream):
        self.inc = ((stream << 1) | 1) & MASK128
        self.state = (state + self.inc) & MASK128
        self._step()

    def _step(self):
        self.state = (self.state * MULT + self.inc) & MASK128

    def next_u64(self):
        self._step()
        s = self.state
        rot = s >> 122
        x = ((s >> 64) ^ s) & MASK64
        return ((x >> rot) | (x << ((64 - rot) % 64))) & MASK64


def unit(rng):
    return (rng.next_u64() >> 11) * (1.0 / (1 << 53))


def categories(seed, count, weights=DEFAULT_WEIGHTS):
    rng = Pcg64(seed, 1)
    total = sum(weights)
    positive = [i for i, w in enumerate(weights) if w > 0]
    slots = []
    for _ in range(count):
        target = unit(rng) * total
        cum = 0.0
        pick = positive[-1]
        for i, w in enumerate(weights):
            cum += w
            if w > 0 and target < cum:
                pick = i
                break
        slots.append(pick)
    if count >= len(positive):
        for missing in positive:
            counts = [slots.count(i) for i in range(6)]
            if counts[missing]:
                continue
            most = max(range(6), key=lambda i: (counts[i], -i))
            last = max(j for j, c in enumerate(slots) if c == most)
            slots[last] = missing
    return slots


def histogram(seed, count):
    slots = categories(seed, count)
    return {CATEGORIES[i]: slots.count(i) for i in range(6)}


if __name__ == "__main__":
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 42
    count = int(sys.argv[2]) if len(sys.argv) > 2 else 200
    print(json.dumps(histogram(seed, count)))
    print(json.dumps({"first_20": [CATEGORIES[i] for i in categories(seed, count)[:20]]}))
