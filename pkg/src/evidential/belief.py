"""Frames of discernment, bitmask subsets, and sparse mass functions.

Subsets of a frame are plain integers: bit i set means outcome i is in the
subset, with bit positions fixed by the frame's label order. Keeping masks as
ints keeps the set algebra at machine-word cost, and every focal element
downstream shares the encoding. Masks are only meaningful relative to their
frame; the frame validates them on use.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    EmptySetMassError,
    FrameMismatchError,
    NonPositiveMassError,
    NotNormalizedError,
)

Mask = int

MAX_FRAME_SIZE = 30
MASS_SUM_TOL = 1e-9
# Totals this close to 1 are kept verbatim: rescaling would only shuffle the
# last ulp and would destroy byte-stable serialization of literal masses.
_RESCALE_TOL = 1e-12


@dataclass(frozen=True)
class Frame:
    """Ordered set of mutually exclusive outcome labels.

    Label order fixes the bit layout of every mask, so two frames with the
    same labels in a different order are different frames.
    """

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise ValueError("a frame needs at least one outcome label")
        if len(labels) > MAX_FRAME_SIZE:
            raise ValueError(
                f"frame size {len(labels)} exceeds the {MAX_FRAME_SIZE}-outcome cap"
            )
        seen = set()
        for label in labels:
            if not isinstance(label, str) or not label:
                raise ValueError(f"outcome labels must be non-empty strings, got {label!r}")
            if label in seen:
                raise ValueError(f"duplicate outcome label {label!r}")
            seen.add(label)

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def full_mask(self) -> Mask:
        return (1 << self.n) - 1

    @cached_property
    def _index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"unknown outcome label {label!r}") from None

    def bit(self, label: str) -> Mask:
        """Mask of the singleton subset {label}."""
        return 1 << self.index(label)

    def mask_of(self, labels: Iterable[str]) -> Mask:
        mask = 0
        for label in labels:
            mask |= self.bit(label)
        return mask

    def labels_of(self, mask: Mask) -> tuple[str, ...]:
        """Labels of a mask's members, in frame order."""
        mask = self.check_mask(mask)
        return tuple(label for i, label in enumerate(self.labels) if mask >> i & 1)

    def complement(self, mask: Mask) -> Mask:
        return self.full_mask & ~self.check_mask(mask)

    def check_mask(self, mask: Mask) -> Mask:
        """Validate that mask addresses a subset of this frame; returns it as int."""
        try:
            mask = operator.index(mask)
        except TypeError:
            raise FrameMismatchError(f"mask {mask!r} is not a subset encoding") from None
        if not 0 <= mask <= self.full_mask:
            raise FrameMismatchError(
                f"mask {mask:#x} does not address a subset of a {self.n}-outcome frame"
            )
        return mask

    def singleton_masks(self) -> Iterator[Mask]:
        for i in range(self.n):
            yield 1 << i


@dataclass(frozen=True)
class BeliefInterval:
    """Lower (belief) and upper (plausibility) probability of one subset."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        lower = float(self.lower)
        upper = float(self.upper)
        if not (math.isfinite(lower) and math.isfinite(upper)):
            raise ValueError("belief interval bounds must be finite")
        if lower > upper + 1e-9 or lower < -1e-9 or upper > 1.0 + 1e-9:
            raise ValueError(f"invalid belief interval [{lower}, {upper}]")
        # clip numeric spill so 0 <= lower <= upper <= 1 holds exactly
        lower = min(max(lower, 0.0), 1.0)
        upper = min(max(upper, lower), 1.0)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower


class MassFunction:
    """Sparse basic probability assignment over a frame.

    Positive masses on non-empty subsets, total 1. Construction drops zero
    entries, rejects negative masses and any mass on the empty set, and
    accepts totals within 1e-9 of 1, rescaling once when the drift exceeds
    1e-12. Instances are immutable after construction and safe to share
    across threads.
    """

    __slots__ = ("frame", "_focal", "_dense")

    def __init__(self, frame: Frame, masses: Mapping[Mask, float]):
        focal: dict[Mask, float] = {}
        for mask, value in masses.items():
            mask = frame.check_mask(mask)
            value = float(value)
            if value < 0.0:
                raise NonPositiveMassError(f"negative mass {value} on mask {mask:#x}")
            if value == 0.0:
                continue
            if mask == 0:
                raise EmptySetMassError(f"mass {value} assigned to the empty set")
            focal[mask] = value
        total = math.fsum(focal.values())
        if abs(total - 1.0) > MASS_SUM_TOL:
            raise NotNormalizedError(total)
        if abs(total - 1.0) > _RESCALE_TOL:
            focal = {mask: value / total for mask, value in focal.items()}
        self.frame = frame
        self._focal = focal
        self._dense: np.ndarray | None = None

    @classmethod
    def vacuous(cls, frame: Frame) -> "MassFunction":
        """Total ignorance: all mass on the whole frame."""
        return cls(frame, {frame.full_mask: 1.0})

    @classmethod
    def from_labels(cls, frame: Frame, masses: Mapping[Iterable[str], float]) -> "MassFunction":
        """Build from subsets given as label iterables."""
        return cls(frame, {frame.mask_of(subset): value for subset, value in masses.items()})

    @property
    def focal(self) -> Mapping[Mask, float]:
        """Read-only focal-element map (mask -> mass)."""
        return MappingProxyType(self._focal)

    def items(self):
        return self._focal.items()

    def __len__(self) -> int:
        return len(self._focal)

    def __contains__(self, mask: Mask) -> bool:
        return mask in self._focal

    def __eq__(self, other) -> bool:
        if not isinstance(other, MassFunction):
            return NotImplemented
        return self.frame == other.frame and self._focal == other._focal

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        parts = ", ".join(
            "{%s}: %g" % ("|".join(self.frame.labels_of(mask)), value)
            for mask, value in sorted(self._focal.items(), key=_focal_order)
        )
        return f"MassFunction({parts})"

    def mass(self, mask: Mask) -> float:
        mask = self.frame.check_mask(mask)
        return self._focal.get(mask, 0.0)

    def belief(self, mask: Mask) -> float:
        """Total mass of all focal elements contained in mask."""
        mask = self.frame.check_mask(mask)
        if mask == 0:
            return 0.0
        if mask == self.frame.full_mask:
            return 1.0
        return math.fsum(v for f, v in self._focal.items() if f & ~mask == 0)

    def plausibility(self, mask: Mask) -> float:
        """Mass not committed against mask: 1 - belief of the complement."""
        return 1.0 - self.belief(self.frame.complement(mask))

    def commonality(self, mask: Mask) -> float:
        """Total mass of all focal elements containing mask."""
        mask = self.frame.check_mask(mask)
        if mask == 0:
            return 1.0
        return math.fsum(v for f, v in self._focal.items() if f & mask == mask)

    def interval(self, mask: Mask) -> BeliefInterval:
        return BeliefInterval(self.belief(mask), self.plausibility(mask))

    def is_consonant(self) -> bool:
        """True when the focal elements form a chain under set inclusion."""
        foci = sorted(self._focal, key=lambda m: m.bit_count())
        return all(a & b == a for a, b in zip(foci, foci[1:]))

    def dense_masses(self) -> np.ndarray:
        """Mass vector over the whole subset lattice (cached, read-only)."""
        if self._dense is None:
            arr = np.zeros(1 << self.frame.n)
            for mask, value in self._focal.items():
                arr[mask] = value
            arr.setflags(write=False)
            self._dense = arr
        return self._dense

    def to_dict(self) -> dict:
        """JSON document with subsets as label lists, portable across reorderings."""
        return {
            "frame": list(self.frame.labels),
            "focal": [
                {"subset": list(self.frame.labels_of(mask)), "mass": value}
                for mask, value in sorted(self._focal.items(), key=_focal_order)
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict, frame: Frame | None = None) -> "MassFunction":
        """Rebuild from a to_dict document.

        When a frame is supplied its label set must match the document's;
        its order wins, so masks adapt to a reordered frame.
        """
        doc_labels = doc["frame"]
        if frame is None:
            frame = Frame(tuple(doc_labels))
        elif set(frame.labels) != set(doc_labels):
            raise FrameMismatchError("document frame labels do not match the supplied frame")
        masses: dict[Mask, float] = {}
        for entry in doc["focal"]:
            mask = frame.mask_of(entry["subset"])
            masses[mask] = masses.get(mask, 0.0) + float(entry["mass"])
        return cls(frame, masses)


def _focal_order(item):
    mask, _ = item
    return (mask.bit_count(), mask)


def validate_mass(m: MassFunction) -> None:
    """Re-check the mass function invariants, raising the specific violation.

    Construction already enforces these; this exists so tests and readers of
    serialized artifacts can re-assert them independently.
    """
    for mask, value in m.items():
        m.frame.check_mask(mask)
        if mask == 0:
            raise EmptySetMassError("empty set carries mass")
        if value <= 0.0:
            raise NonPositiveMassError(f"non-positive mass {value} on mask {mask:#x}")
    total = math.fsum(v for _, v in m.items())
    if abs(total - 1.0) > MASS_SUM_TOL:
        raise NotNormalizedError(total)
