"""Combining independent evidence with Dempster's rule.

Two equivalent paths are provided. The sparse path intersects focal pairs
directly and is right whenever focal sets stay small. The dense path converts
each operand to its commonality vector over the whole subset lattice,
multiplies pointwise, and inverts the product back to masses; it costs
O(n * 2^n) per operand regardless of focal count, which wins once operands
carry many foci (dense all-subsets assignments in particular).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import lattice
from .belief import Frame, Mask, MassFunction
from .errors import FrameMismatchError, TotalConflictError

_MIN_SURVIVING_MASS = 1e-12  # 1 - k at or below this is total conflict
_DENSE_NOISE_FLOOR = 1e-15   # Mobius round-off cutoff on recovered masses
DENSE_MAX_OUTCOMES = 20      # 2^20 lattice points; past this the dense path thrashes memory


@dataclass(frozen=True)
class CombinationResult:
    """Combined mass function plus the conflict mass discarded on the way."""

    combined: MassFunction
    conflict: float


def _shared_frame(ms: Sequence[MassFunction]) -> Frame:
    frame = ms[0].frame
    for m in ms[1:]:
        if m.frame != frame:
            raise FrameMismatchError("mass functions live on different frames")
    return frame


def dempster_combine(m1: MassFunction, m2: MassFunction) -> CombinationResult:
    """Combine two mass functions, discarding conflict and renormalizing.

    The conflict k is the product mass whose focal intersections are empty;
    surviving products are scaled by 1/(1-k). Raises TotalConflictError when
    the operands are flatly contradictory.
    """
    frame = _shared_frame((m1, m2))
    buckets: dict[Mask, list[float]] = {}
    for a, va in m1.items():
        for b, vb in m2.items():
            buckets.setdefault(a & b, []).append(va * vb)
    conflict = math.fsum(buckets.pop(0, ()))
    surviving = 1.0 - conflict
    if surviving <= _MIN_SURVIVING_MASS:
        raise TotalConflictError("all product mass fell on the empty set", conflict=conflict)
    combined = MassFunction(
        frame, {mask: math.fsum(vals) / surviving for mask, vals in buckets.items()}
    )
    return CombinationResult(combined, conflict)


def combine_all(ms: Sequence[MassFunction], path: str = "auto") -> CombinationResult:
    """Fold a list of mass functions into one, left to right.

    path picks the implementation: "sparse" folds pairwise, "commonality"
    goes through the dense lattice product, and "auto" switches to the dense
    path once the product of focal counts outgrows n * 2^n. The reported
    conflict is the total product mass lost across the whole fold,
    1 - prod(1 - k_step); the per-step conflicts are not additive.
    """
    ms = list(ms)
    if not ms:
        raise ValueError("need at least one mass function")
    frame = _shared_frame(ms)
    if len(ms) == 1:
        return CombinationResult(ms[0], 0.0)
    if path == "auto":
        path = "commonality" if _prefer_dense(ms, frame) else "sparse"
    if path == "commonality":
        return fast_combine_via_commonality(ms)
    if path != "sparse":
        raise ValueError(f"unknown combination path {path!r}")
    acc = ms[0]
    kept = 1.0
    for step, m in enumerate(ms[1:], start=1):
        try:
            result = dempster_combine(acc, m)
        except TotalConflictError as exc:
            raise TotalConflictError(
                f"total conflict while folding operand {step}",
                conflict=exc.conflict,
                step=step,
            ) from exc
        acc = result.combined
        kept *= 1.0 - result.conflict
    return CombinationResult(acc, 1.0 - kept)


def _prefer_dense(ms: Sequence[MassFunction], frame: Frame) -> bool:
    if frame.n > DENSE_MAX_OUTCOMES:
        return False
    budget = frame.n << frame.n
    product = 1
    for m in ms:
        product *= len(m)
        if product > budget:
            return True
    return False


def fast_combine_via_commonality(ms: Sequence[MassFunction]) -> CombinationResult:
    """Combine by multiplying commonality vectors over the subset lattice.

    Equivalent to the pairwise fold: the unnormalized combination's
    commonality is the pointwise product of the operands' commonalities, and
    a Mobius inversion recovers its masses. The empty-set entry of the
    inverted product is exactly the aggregate conflict.
    """
    ms = list(ms)
    if not ms:
        raise ValueError("need at least one mass function")
    frame = _shared_frame(ms)
    if len(ms) == 1:
        return CombinationResult(ms[0], 0.0)
    n = frame.n
    if n > DENSE_MAX_OUTCOMES:
        raise ValueError(
            f"dense combination supports at most {DENSE_MAX_OUTCOMES} outcomes, got {n}"
        )
    product = np.ones(1 << n)
    for m in ms:
        q = m.dense_masses().copy()
        lattice.superset_sum(q, n)
        product *= q
    lattice.superset_diff(product, n)
    conflict = float(product[0])
    if 1.0 - conflict <= _MIN_SURVIVING_MASS:
        raise TotalConflictError("all product mass fell on the empty set", conflict=conflict)
    raw: dict[Mask, float] = {}
    for mask in np.nonzero(product > _DENSE_NOISE_FLOOR)[0]:
        if mask:
            raw[int(mask)] = float(product[mask])
    # Normalize by the surviving mass actually recovered, not by 1 - k:
    # inversion round-off and the noise floor make the two differ slightly,
    # and under heavy conflict that difference would break normalization.
    total = math.fsum(raw.values())
    if total <= _MIN_SURVIVING_MASS:
        raise TotalConflictError("all product mass fell on the empty set", conflict=conflict)
    combined = MassFunction(frame, {mask: value / total for mask, value in raw.items()})
    return CombinationResult(combined, conflict)
