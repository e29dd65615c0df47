"""Deterministic, splittable seeding for every randomized verification.

A run has one base seed; each (identity, purpose) pair derives its own
64-bit stream seed by hashing, so adding a verification never perturbs the
random points of another and identical configs reproduce byte-identical
reports.
"""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction

DEFAULT_SEED = 20030623


def derive_seed(base: int, *tags) -> int:
    h = hashlib.sha256()
    h.update(str(int(base)).encode())
    for t in tags:
        h.update(b"/")
        h.update(str(t).encode())
    return int.from_bytes(h.digest()[:8], "big")


def make_rng(base: int, *tags) -> random.Random:
    return random.Random(derive_seed(base, *tags))


def draw_fraction(rng: random.Random, span: int = 10 ** 6, den: int = 997) -> Fraction:
    """Nonzero rational from a grid of > 10^6 values per variable (the
    Schwartz-Zippel error bound in the docs assumes this size)."""
    num = 0
    while num == 0:
        num = rng.randint(-span, span)
    return Fraction(num, rng.randint(1, den))


def draw_q(rng: random.Random) -> Fraction:
    """Random base with 0 < |q| < 1 and q != 0 (rationals in (0,1) have
    (q; q)_k != 0 for every k)."""
    den = rng.randint(3, 997)
    num = rng.randint(1, den - 1)
    return Fraction(num, den)
