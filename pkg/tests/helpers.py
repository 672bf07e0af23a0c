"""Shared fixtures: tiny frames, brute-force oracles, and hypothesis strategies.

The oracles deliberately re-derive everything by full powerset enumeration or
plain pairwise products so they stay independent of the sparse code paths
they check.
"""

from __future__ import annotations

import math

import numpy as np
from hypothesis import strategies as st

from evidential.belief import Frame, MassFunction

LABELS = tuple("abcdefgh")


def frame_of(n: int) -> Frame:
    return Frame(LABELS[:n])


# --- brute-force oracles ------------------------------------------------------

def bel_oracle(m: MassFunction, subset: int) -> float:
    """Belief by enumerating every subset of the frame."""
    n = m.frame.n
    return math.fsum(
        m.mass(s) for s in range(1, 1 << n) if s & ~subset == 0
    )


def pl_oracle(m: MassFunction, subset: int) -> float:
    n = m.frame.n
    return math.fsum(m.mass(s) for s in range(1, 1 << n) if s & subset)


def q_oracle(m: MassFunction, subset: int) -> float:
    n = m.frame.n
    return math.fsum(m.mass(s) for s in range(1, 1 << n) if s & subset == subset)


def combine_oracle(m1: MassFunction, m2: MassFunction) -> tuple[dict[int, float], float]:
    """Plain product-and-intersect combination; returns (masses, conflict)."""
    products: dict[int, float] = {}
    for a, va in m1.items():
        for b, vb in m2.items():
            products[a & b] = products.get(a & b, 0.0) + va * vb
    conflict = products.pop(0, 0.0)
    scale = 1.0 - conflict
    if scale <= 1e-12:
        return {}, conflict
    return {mask: v / scale for mask, v in products.items()}, conflict


def max_mass_diff(m1: MassFunction, m2: MassFunction) -> float:
    masks = set(m1.focal) | set(m2.focal)
    return max(abs(m1.mass(mask) - m2.mass(mask)) for mask in masks)


def random_mass(frame: Frame, rng: np.random.Generator, max_foci: int = 6) -> MassFunction:
    full = frame.full_mask
    count = int(rng.integers(1, min(max_foci, full) + 1))
    foci = rng.choice(full, size=count, replace=False) + 1
    weights = rng.random(count) + 0.05
    weights = weights / weights.sum()
    return MassFunction(frame, {int(f): float(w) for f, w in zip(foci, weights)})


def random_freq(n: int, rng: np.random.Generator, zero_prob: float = 0.3) -> list[float]:
    """Random frequency vector, often with exact zeros and exact ties."""
    counts = rng.integers(0, 10, size=n)
    if rng.random() < zero_prob:
        counts[rng.integers(0, n)] = 0
    if counts.sum() == 0:
        counts[int(rng.integers(0, n))] = 1
    total = counts.sum()
    return [int(c) / int(total) for c in counts]


# --- hypothesis strategies ------------------------------------------------------

def masses_on(frame: Frame, max_foci: int = 5) -> st.SearchStrategy[MassFunction]:
    full = frame.full_mask

    @st.composite
    def build(draw):
        count = draw(st.integers(1, min(max_foci, full)))
        foci = draw(
            st.lists(st.integers(1, full), min_size=count, max_size=count, unique=True)
        )
        weights = draw(
            st.lists(
                st.floats(0.01, 1.0, allow_nan=False),
                min_size=count,
                max_size=count,
            )
        )
        total = math.fsum(weights)
        return MassFunction(frame, {f: w / total for f, w in zip(foci, weights)})

    return build()


@st.composite
def mass_functions(draw, min_n: int = 2, max_n: int = 6, max_foci: int = 5):
    n = draw(st.integers(min_n, max_n))
    return draw(masses_on(frame_of(n), max_foci))


@st.composite
def mass_function_lists(draw, count: int, min_n: int = 2, max_n: int = 6, max_foci: int = 5):
    n = draw(st.integers(min_n, max_n))
    frame = frame_of(n)
    return [draw(masses_on(frame, max_foci)) for _ in range(count)]


@st.composite
def frequency_vectors(draw, min_n: int = 2, max_n: int = 8):
    """Count-based vectors so ties and zeros occur with exact equality."""
    n = draw(st.integers(min_n, max_n))
    counts = draw(st.lists(st.integers(0, 8), min_size=n, max_size=n))
    if sum(counts) == 0:
        counts[draw(st.integers(0, n - 1))] = 1
    total = sum(counts)
    return n, [c / total for c in counts]
