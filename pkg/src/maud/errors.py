"""Exception types shared across the package.

Every error carries a stable machine ``code`` so transport layers (HTTP
service, CLI) can map failures one-to-one without string matching, plus an
optional ``field`` naming the offending input.
"""

from __future__ import annotations


class MaudError(Exception):
    """Base class for all package errors."""

    code = "error"

    def __init__(self, message: str, *, field: str | None = None):
        super().__init__(message)
        self.field = field

    @property
    def message(self) -> str:
        return str(self)

    def to_document(self) -> dict:
        doc = {"code": self.code, "message": self.message}
        if self.field is not None:
            doc["field"] = self.field
        return doc


# --- utility construction / aggregation ---

class InvalidAttributeError(MaudError):
    code = "invalid_attribute"


class OutOfRangeError(MaudError):
    code = "out_of_range"


class InvalidWeightsError(MaudError):
    code = "invalid_weights"


class AlignmentError(MaudError):
    code = "alignment_mismatch"


class UtilityDomainError(MaudError):
    code = "utility_domain"


# --- beta distributions / expected utility ---

class InvalidBetaError(MaudError):
    code = "invalid_beta"


class UndefinedModeError(MaudError):
    code = "undefined_mode"


class InfeasibleFitError(MaudError):
    """Requested statistic cannot be hit with both shapes >= 1.

    ``feasible_low``/``feasible_high`` bound the target values that would
    succeed with the same fixed shape, so callers can re-prompt.
    """

    code = "infeasible_fit"

    def __init__(self, message, *, feasible_low=None, feasible_high=None, field=None):
        super().__init__(message, field=field)
        self.feasible_low = feasible_low
        self.feasible_high = feasible_high

    def to_document(self):
        doc = super().to_document()
        if self.feasible_low is not None:
            doc["feasible_low"] = self.feasible_low
        if self.feasible_high is not None:
            doc["feasible_high"] = self.feasible_high
        return doc


class UnsupportedShapeError(MaudError):
    code = "unsupported_shape"


class EstimateRangeError(MaudError):
    code = "estimate_range"


class ConvergenceError(MaudError):
    code = "convergence"


# --- assessment sessions ---

class UnsupportedProfileError(MaudError):
    code = "unsupported_profile"


class AnswerDomainError(MaudError):
    """Answer outside the admissible domain; bounds echoed back."""

    code = "answer_domain"

    def __init__(self, message, *, low=None, high=None, field=None):
        super().__init__(message, field=field)
        self.low = low
        self.high = high

    def to_document(self):
        doc = super().to_document()
        if self.low is not None:
            doc["low"] = self.low
        if self.high is not None:
            doc["high"] = self.high
        return doc


class DegenerateAnswerError(MaudError):
    code = "degenerate_answer"


class ExtremeAnswerError(MaudError):
    code = "extreme_answer"


class SequenceError(MaudError):
    code = "answer_sequence"


class SessionStateError(MaudError):
    code = "session_state"


class InvalidScalingError(MaudError):
    code = "invalid_scaling"


# --- knowledge bases / rule engine ---

class SchemaError(MaudError):
    """Knowledge-base document failed validation; all violations listed."""

    code = "kb_schema"

    def __init__(self, violations: list[str]):
        super().__init__("knowledge base failed validation: " + "; ".join(violations))
        self.violations = list(violations)

    def to_document(self):
        doc = super().to_document()
        doc["violations"] = self.violations
        return doc


class InfeasibleDesignError(MaudError):
    """A slot lost every material to restriction rules."""

    code = "infeasible_design"

    def __init__(self, message, *, slot, rule_ids):
        super().__init__(message, field=slot)
        self.slot = slot
        self.rule_ids = list(rule_ids)

    def to_document(self):
        doc = super().to_document()
        doc["slot"] = self.slot
        doc["rule_ids"] = self.rule_ids
        return doc


class InfeasibleConfigurationError(MaudError):
    code = "infeasible_configuration"

    def __init__(self, message, *, rule_ids):
        super().__init__(message)
        self.rule_ids = list(rule_ids)

    def to_document(self):
        doc = super().to_document()
        doc["rule_ids"] = self.rule_ids
        return doc


class ConventionalModeIncompleteError(MaudError):
    code = "conventional_mode_incomplete"

    def __init__(self, message, *, slots):
        super().__init__(message)
        self.slots = list(slots)

    def to_document(self):
        doc = super().to_document()
        doc["slots"] = self.slots
        return doc


class CoverageError(MaudError):
    code = "kb_coverage"


# --- documents / storage / transport ---

class DocumentError(MaudError):
    code = "invalid_document"


class NotFoundError(MaudError):
    code = "not_found"


class ConflictError(MaudError):
    code = "conflict"
