"""Convex test functions with the intervals they may be sampled on."""

import random

# (source, lowest admissible a, widest span)
CONVEX_FAMILY = [
    ("x^2", -3.0, 6.0),
    ("x^3", 0.0, 4.0),
    ("exp(x)", -3.0, 6.0),
    ("1/x", 0.05, 5.0),
    ("x*ln(x)", 0.05, 5.0),
    ("abs(x-1)^2", -3.0, 6.0),
]


def random_intervals(rng: random.Random, count: int):
    """Yield (source, a, b) triples spread over the family, `count` per member."""
    for source, lo, span in CONVEX_FAMILY:
        for _ in range(count):
            a = rng.uniform(lo, lo + span / 2)
            b = a + rng.uniform(0.01, span / 2)
            yield source, a, b
