"""Interactive preference elicitation as a resumable question/answer session.

The protocol asks, for each attribute in order, one or more
certainty-equivalent questions (a sure level versus a 50/50 lottery
between the range's best and worst ends), then one probability-equivalence
question per attribute (a sure corner outcome versus an all-best/all-worst
lottery at probability pi).  The certainty equivalents identify each
attribute's risk coefficient; the indifference probabilities are read
directly as the scaling constants k_j.

Sessions are immutable values: submitting an answer returns a new session
with the response appended, so any response log replays to a bit-identical
profile.  Probability equivalence for the scaling constants and fixed
50/50 certainty-equivalent lotteries are implementation choices of this
package (the classic Keeney-Raiffa fractile forms).
"""

from __future__ import annotations

import math
import time
import uuid
from dataclasses import dataclass, replace

from .errors import (
    AnswerDomainError,
    DegenerateAnswerError,
    ExtremeAnswerError,
    InvalidScalingError,
    SequenceError,
    SessionStateError,
    UnsupportedProfileError,
)
from .numerics import LINEARITY_THRESHOLD, bisect_root, normalized_exponential
from .utility import (
    AttributeSpec,
    SingleAttributeUtility,
    UserProfile,
    build_profile,
    make_exponential_utility,
)

MIN_ATTRIBUTES = 2
MAX_ATTRIBUTES = 12
MAX_CE_QUESTIONS = 3

#: Answers implying |c| beyond this are rejected as extreme (conditioning
#: of e^(-c) degrades and such answers are almost surely slips).
RISK_COEFFICIENT_BOUND = 50.0

CERTAINTY_EQUIVALENT = "certainty_equivalent"
PROBABILITY_EQUIVALENCE = "probability_equivalence"

ELICITING_UTILITIES = "eliciting_utilities"
ELICITING_SCALING = "eliciting_scaling"
COMPLETE = "complete"


@dataclass(frozen=True, slots=True)
class Question:
    """One pending lottery question."""

    index: int
    kind: str
    attribute_id: str
    step: int
    prompt: str
    domain_low: float
    domain_high: float

    def to_document(self) -> dict:
        return {
            "index": self.index,
            "kind": self.kind,
            "attribute": self.attribute_id,
            "step": self.step,
            "prompt": self.prompt,
            "domain": [self.domain_low, self.domain_high],
        }


@dataclass(frozen=True, slots=True)
class Response:
    index: int
    kind: str
    attribute_id: str
    step: int
    answer: float
    timestamp: float

    def to_document(self) -> dict:
        return {"index": self.index, "kind": self.kind,
                "attribute": self.attribute_id, "step": self.step,
                "answer": self.answer, "timestamp": self.timestamp}


@dataclass(frozen=True, slots=True)
class Session:
    """Append-only elicitation state over a fixed attribute list."""

    id: str
    attributes: tuple[AttributeSpec, ...]
    ce_count: int
    responses: tuple[Response, ...]

    @property
    def total_questions(self) -> int:
        return len(self.attributes) * (self.ce_count + 1)

    @property
    def is_complete(self) -> bool:
        return len(self.responses) >= self.total_questions

    @property
    def state(self) -> str:
        n = len(self.responses)
        ce_total = len(self.attributes) * self.ce_count
        if n >= self.total_questions:
            return COMPLETE
        if n < ce_total:
            return ELICITING_UTILITIES
        return ELICITING_SCALING

    @property
    def position(self) -> tuple[str, int, int]:
        """(state, attribute index, step) of the next question."""
        n = len(self.responses)
        ce_total = len(self.attributes) * self.ce_count
        if n >= self.total_questions:
            return COMPLETE, -1, -1
        if n < ce_total:
            return ELICITING_UTILITIES, n // self.ce_count, n % self.ce_count
        return ELICITING_SCALING, n - ce_total, 0

    def ce_answers(self, attribute_index: int) -> tuple[float, ...]:
        base = attribute_index * self.ce_count
        return tuple(r.answer for r in self.responses[base:base + self.ce_count])

    def scaling_answers(self) -> tuple[float, ...]:
        base = len(self.attributes) * self.ce_count
        return tuple(r.answer for r in self.responses[base:])


def start_session(attributes, *, ce_count: int = 1,
                  session_id: str | None = None) -> Session:
    """Open a session; the first question is a certainty-equivalent lottery
    on the first attribute."""
    attributes = tuple(attributes)
    if not MIN_ATTRIBUTES <= len(attributes) <= MAX_ATTRIBUTES:
        raise UnsupportedProfileError(
            f"profiles support {MIN_ATTRIBUTES}..{MAX_ATTRIBUTES} attributes, "
            f"got {len(attributes)}", field="attributes")
    ids = [a.id for a in attributes]
    if len(set(ids)) != len(ids):
        raise UnsupportedProfileError("duplicate attribute ids", field="attributes")
    if not 1 <= ce_count <= MAX_CE_QUESTIONS:
        raise UnsupportedProfileError(
            f"ce_count must be 1..{MAX_CE_QUESTIONS}", field="ce_count")
    return Session(
        id=session_id if session_id is not None else uuid.uuid4().hex,
        attributes=attributes,
        ce_count=int(ce_count),
        responses=(),
    )


def next_question(session: Session) -> Question | None:
    """The pending question, or None once the session is complete."""
    state, ai, step = session.position
    if state == COMPLETE:
        return None
    attr = session.attributes[ai]
    index = len(session.responses)
    if state == ELICITING_UTILITIES:
        prompt = (
            f"Attribute {attr.label or attr.id}"
            f"{f' ({attr.units})' if attr.units else ''}: what sure level is "
            f"worth the same to you as a 50/50 lottery between "
            f"{attr.range_best!r} (best) and {attr.range_worst!r} (worst)?")
        return Question(index=index, kind=CERTAINTY_EQUIVALENT,
                        attribute_id=attr.id, step=step, prompt=prompt,
                        domain_low=attr.low, domain_high=attr.high)
    prompt = (
        f"Attribute {attr.label or attr.id}: at what probability pi are you "
        f"indifferent between (a) {attr.label or attr.id} at its best with "
        f"every other attribute at its worst, for sure, and (b) a lottery "
        f"giving everything at its best with probability pi, everything at "
        f"its worst otherwise?")
    return Question(index=index, kind=PROBABILITY_EQUIVALENCE,
                    attribute_id=attr.id, step=0, prompt=prompt,
                    domain_low=0.0, domain_high=1.0)


def _validate_ce_answer(attr: AttributeSpec, answer: float) -> None:
    if not (attr.low <= answer <= attr.high):
        raise AnswerDomainError(
            f"answer {answer!r} outside [{attr.low!r}, {attr.high!r}]",
            low=attr.low, high=attr.high, field=attr.id)
    z = attr.to_normalized(answer)
    if not 0.0 < z < 1.0:
        raise DegenerateAnswerError(
            f"certainty equivalent must lie strictly between worst and best, "
            f"got {answer!r}", field=attr.id)
    c = _solve_risk_coefficient(z)
    if abs(c) >= RISK_COEFFICIENT_BOUND:
        raise ExtremeAnswerError(
            f"answer {answer!r} implies an extreme risk attitude "
            f"(|c| >= {RISK_COEFFICIENT_BOUND:g}); please reconsider and "
            "answer again", field=attr.id)


def submit_answer(session: Session, answer: float, *,
                  at_index: int | None = None,
                  timestamp: float | None = None) -> Session:
    """Validate the answer against the pending question and append it.

    ``at_index`` guards against answering a stale question (optimistic
    concurrency for transport layers); omit it for sequential local use.
    """
    if session.is_complete:
        raise SessionStateError("session already complete")
    if at_index is not None and at_index != len(session.responses):
        raise SequenceError(
            f"answer targets question {at_index}, but question "
            f"{len(session.responses)} is pending")
    question = next_question(session)
    answer = float(answer)
    if not math.isfinite(answer):
        raise AnswerDomainError("answer must be finite",
                                low=question.domain_low,
                                high=question.domain_high)
    if question.kind == CERTAINTY_EQUIVALENT:
        attr = session.attributes[question.index // session.ce_count]
        _validate_ce_answer(attr, answer)
    else:
        if not 0.0 <= answer <= 1.0:
            raise AnswerDomainError(
                f"probability answer {answer!r} outside [0, 1]",
                low=0.0, high=1.0, field=question.attribute_id)
    response = Response(
        index=question.index, kind=question.kind,
        attribute_id=question.attribute_id, step=question.step,
        answer=answer,
        timestamp=time.time() if timestamp is None else float(timestamp))
    return replace(session, responses=session.responses + (response,))


def _solve_risk_coefficient(z_star: float) -> float:
    """c with u_c(z*) = 0.5: the curve through the elicited certainty
    equivalent of the 50/50 best/worst lottery.

    u_c(z) is strictly increasing in c for fixed interior z, so bisection
    on [-bound, bound] is exact; z* = 0.5 returns 0 (risk neutral).
    """
    if z_star == 0.5:
        return 0.0
    f = lambda c: normalized_exponential(z_star, c) - 0.5
    b = RISK_COEFFICIENT_BOUND
    lo, hi = (LINEARITY_THRESHOLD, b) if z_star < 0.5 else (-b, -LINEARITY_THRESHOLD)
    if f(lo) * f(hi) > 0.0:
        # no root inside the admissible band: implied attitude too extreme
        return math.copysign(b, 0.5 - z_star)
    return bisect_root(f, lo, hi, width=1e-13)


@dataclass(frozen=True, slots=True)
class FitResult:
    """Fitted curve plus per-response utility residuals (consistency)."""

    utility: SingleAttributeUtility
    residuals: tuple[float, ...]


def fit_single_attribute(attribute: AttributeSpec, ce_answers) -> FitResult:
    """Fit the risk coefficient from one or more certainty equivalents.

    A single answer pins c exactly (root of u_c(z*) = 0.5).  Several
    answers are reconciled by least squares over c — a grid scan across
    the bracket spanned by the single-answer fits, refined by golden
    section — and the per-answer residuals u_c(z_i) - 0.5 are returned as
    a consistency diagnostic.
    """
    zs = []
    for answer in ce_answers:
        z = attribute.to_normalized(float(answer))
        if not 0.0 < z < 1.0:
            raise DegenerateAnswerError(
                f"certainty equivalent {answer!r} not strictly inside the "
                f"range of {attribute.id!r}", field=attribute.id)
        zs.append(z)
    if not zs:
        raise DegenerateAnswerError(
            f"no certainty equivalents recorded for {attribute.id!r}",
            field=attribute.id)

    singles = [_solve_risk_coefficient(z) for z in zs]
    if len(zs) == 1:
        c = singles[0]
    else:
        lo, hi = min(singles), max(singles)
        if hi - lo < 1e-12:
            c = singles[0]
        else:
            objective = lambda c: math.fsum(
                (normalized_exponential(z, c) - 0.5) ** 2 for z in zs)
            grid = [lo + (hi - lo) * i / 400.0 for i in range(401)]
            best = min(grid, key=objective)
            step = (hi - lo) / 400.0
            a, b = best - step, best + step
            phi = (math.sqrt(5.0) - 1.0) / 2.0
            x1 = b - phi * (b - a)
            x2 = a + phi * (b - a)
            f1, f2 = objective(x1), objective(x2)
            for _ in range(120):
                if b - a < 1e-13:
                    break
                if f1 <= f2:
                    b, x2, f2 = x2, x1, f1
                    x1 = b - phi * (b - a)
                    f1 = objective(x1)
                else:
                    a, x1, f1 = x1, x2, f2
                    x2 = a + phi * (b - a)
                    f2 = objective(x2)
            c = 0.5 * (a + b)
    utility = make_exponential_utility(attribute, c)
    residuals = tuple(
        normalized_exponential(z, utility.risk_coefficient) - 0.5 for z in zs)
    return FitResult(utility=utility, residuals=residuals)


def finalize_profile(session: Session) -> UserProfile:
    """Build the profile once every question is answered.

    Scaling constants are the probability-equivalence answers verbatim;
    the master constant comes from their defining equation; risk
    coefficients come from the certainty-equivalent fits.
    """
    if not session.is_complete:
        raise SessionStateError(
            f"session has {len(session.responses)} of "
            f"{session.total_questions} answers")
    pis = session.scaling_answers()
    for attr, pi in zip(session.attributes, pis):
        if not 0.0 < pi < 1.0:
            raise InvalidScalingError(
                f"scaling answer for {attr.id!r} must be strictly inside "
                f"(0, 1), got {pi!r}", field=attr.id)
    fits = [fit_single_attribute(attr, session.ce_answers(j))
            for j, attr in enumerate(session.attributes)]
    return build_profile(
        session.attributes,
        [f.utility.risk_coefficient for f in fits],
        pis,
        fit_residuals=[f.residuals for f in fits],
    )


def run_answer_script(attributes, answers, *, ce_count: int = 1,
                      session_id: str | None = None) -> tuple[Session, UserProfile]:
    """Drive a whole session from a scripted answer sequence.

    ``answers`` is an iterable of either plain numbers (taken in protocol
    order) or mappings with keys attribute/kind/sequence/answer, which are
    validated against the expected question before being applied.
    """
    session = start_session(attributes, ce_count=ce_count, session_id=session_id)
    for item in answers:
        question = next_question(session)
        if question is None:
            raise SequenceError("script has more answers than questions")
        if isinstance(item, dict):
            value = item.get("answer")
            want = (item.get("attribute"), item.get("kind"), item.get("sequence"))
            have = (question.attribute_id, question.kind, question.step)
            if any(w is not None and w != h for w, h in zip(want, have)):
                raise SequenceError(
                    f"script entry {want!r} does not match pending question "
                    f"{have!r}")
        else:
            value = item
        session = submit_answer(session, float(value), timestamp=0.0)
    if not session.is_complete:
        raise SessionStateError(
            f"script ended after {len(session.responses)} of "
            f"{session.total_questions} questions")
    return session, finalize_profile(session)


def certainty_equivalent_for(attribute: AttributeSpec, risk_coefficient: float) -> float:
    """The exact CE answer a user with the given risk coefficient would
    give to the 50/50 best/worst lottery (useful for scripting)."""
    u = make_exponential_utility(attribute, risk_coefficient)
    c = u.risk_coefficient
    if abs(c) < LINEARITY_THRESHOLD:
        z = 0.5
    else:
        z = -math.log1p(0.5 * math.expm1(-c)) / c
    return attribute.from_normalized(z)
