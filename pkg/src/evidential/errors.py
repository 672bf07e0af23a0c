"""Exception types shared across the package."""

from __future__ import annotations


class EvidenceError(Exception):
    """Base class for all domain errors raised by this package."""


class FrameMismatchError(EvidenceError):
    """Operands belong to different frames, or a mask addresses no subset."""


class NotNormalizedError(EvidenceError):
    """Mass total differs from 1 beyond tolerance."""

    def __init__(self, total: float):
        super().__init__(f"masses sum to {total!r}, expected 1 within 1e-9")
        self.total = total


class EmptySetMassError(EvidenceError):
    """Positive mass was assigned to the empty set."""


class NonPositiveMassError(EvidenceError):
    """A stored mass is negative (zero entries are silently dropped)."""


class TotalConflictError(EvidenceError):
    """Dempster combination lost essentially all mass to conflict."""

    def __init__(self, message: str, *, conflict: float | None = None,
                 step: int | None = None, case_id: str | None = None):
        super().__init__(message)
        self.conflict = conflict
        self.step = step
        self.case_id = case_id


class NoEvidenceError(EvidenceError):
    """A case carries no usable evidence item."""

    def __init__(self, case_id: str):
        super().__init__(f"case {case_id!r} has no usable evidence")
        self.case_id = case_id


class CaseSetMismatchError(EvidenceError):
    """Two reports under comparison do not cover the same cases."""


class DataFormatError(EvidenceError):
    """An input file does not match its documented format."""


class PipelineError(EvidenceError):
    """A pipeline stage failed; the original error is chained as the cause."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
