"""
Bloch-vector calculus for qubit POVMs.

A POVM element is A = a I/2 + v.sigma/2 and a state is rho = I/2 + r.sigma/2.
Everything here works on (a, v) and r directly; the matrix_oracle module is
only used to convert to and from explicit matrices.
"""
import logging
import math
from typing import Iterable, List, Sequence, Union

from pydantic import ValidationError

from src.core.config import settings
from src.core.exceptions import (
    InvalidSet,
    InvalidState,
    NotAState,
    NotPositive,
    ProbabilityOutOfRange,
    ZeroElement,
)
from src.models import (
    BlochState,
    PovmElement,
    PovmSet,
    Rank,
    Rank1Decomposition,
    Vec3,
    ZERO,
    Z_AXIS,
    vec,
)
from src.schemas import ElementValidityReport, SetValidityReport
from src.services import matrix_oracle as mo
from src.services.matrix_oracle import HermitianMat2

logger = logging.getLogger(__name__)

_IDENTITY_HALF = mo.scale(0.5, mo.identity())


# --- States --------------------------------------------------------------
def make_state(r: Union[Vec3, Sequence[float]]) -> BlochState:
    """Construct a BlochState, raising InvalidState instead of a pydantic error."""
    try:
        return BlochState(r=r)
    except ValidationError as e:
        raise InvalidState(f"not a Bloch state: {e.errors()[0]['msg']}") from None


def state_from_ket(c0: complex, c1: complex) -> BlochState:
    """Pure state of the ket c0|0> + c1|1> (normalized here)."""
    try:
        return density_to_bloch(mo.projector(c0, c1))
    except ValueError as e:
        raise InvalidState(str(e)) from None


def is_pure(s: BlochState) -> bool:
    return s.is_pure()


def bloch_angle(r1: Vec3, r2: Vec3) -> float:
    """Angle between two vectors in [0, pi]; 0 if either vanishes."""
    if r1.norm() == 0.0 or r2.norm() == 0.0:
        return 0.0
    return math.atan2(r1.cross(r2).norm(), r1.dot(r2))


def _pauli_combination(weight: float, v: Vec3) -> HermitianMat2:
    """weight I/2 + v.sigma/2"""
    m = mo.scale(weight, _IDENTITY_HALF)
    for k, component in zip("xyz", v.as_tuple()):
        m = mo.add(m, mo.scale(0.5 * component, mo.pauli(k)))
    return m


def _pauli_components(m: HermitianMat2) -> Vec3:
    return vec(*(mo.trace_product(mo.pauli(k), m) for k in "xyz"))


def bloch_to_density(s: BlochState) -> HermitianMat2:
    return _pauli_combination(1.0, s.r)


def density_to_bloch(m: HermitianMat2) -> BlochState:
    t = mo.trace(m)
    if abs(t - 1.0) > settings.EPS_SUM:
        raise NotAState(f"trace is {t}, expected 1")
    lo, _ = mo.eigvals2(m)
    if lo < -settings.EPS_NORM:
        raise NotAState(f"negative eigenvalue {lo}")
    try:
        return make_state(_pauli_components(m))
    except InvalidState as e:
        raise NotAState(str(e)) from None


# --- Elements ------------------------------------------------------------
def element_to_matrix(e: PovmElement) -> HermitianMat2:
    return _pauli_combination(e.a, e.v)


def matrix_to_element(m: HermitianMat2) -> PovmElement:
    lo, _ = mo.eigvals2(m)
    if lo < -settings.EPS_NORM:
        raise NotPositive(f"smaller eigenvalue {lo} is negative")
    return PovmElement(a=mo.trace(m), v=_pauli_components(m))


def classify_rank(a: float, length: float) -> Rank:
    if a <= settings.EPS_NORM:
        return Rank.ZERO
    if a - length <= settings.EPS_NORM:
        return Rank.RANK1
    return Rank.RANK2


def validate_element(e: PovmElement) -> ElementValidityReport:
    length = e.length
    eigenvalues = ((e.a - length) / 2.0, (e.a + length) / 2.0)
    issues = []
    if e.a < 0.0:
        issues.append(f"negative weight a={e.a}")
    if length > e.a + settings.EPS_NORM:
        issues.append(f"|v|={length} exceeds a={e.a}: eigenvalue {eigenvalues[0]} < 0")
    positive = not issues
    return ElementValidityReport(
        valid=positive,
        positive=positive,
        rank=classify_rank(e.a, length) if positive else None,
        eigenvalues=eigenvalues,
        issues=issues,
    )


def _vector_sum(vectors: Iterable[Vec3]) -> Vec3:
    total = ZERO
    for v in vectors:
        total = total + v
    return total


def validate_set(s: PovmSet) -> SetValidityReport:
    reports = [validate_element(e) for e in s.elements]
    issues = [f"element {i}: {msg}" for i, r in enumerate(reports) for msg in r.issues]

    vector_sum = _vector_sum(e.v for e in s.elements)
    vector_sum_ok = vector_sum.norm() <= settings.EPS_SUM
    if not vector_sum_ok:
        issues.append(f"vectors do not sum to zero: |sum v|={vector_sum.norm():.3g}")

    weight_sum = math.fsum(e.a for e in s.elements)
    weight_sum_ok = abs(weight_sum - 2.0) <= settings.EPS_SUM
    if not weight_sum_ok:
        issues.append(f"weights sum to {weight_sum}, expected 2")

    length_sum = math.fsum(e.length for e in s.elements)
    all_rank1 = all(r.rank == Rank.RANK1 for r in reports)
    length_sum_ok = None
    if all_rank1:
        length_sum_ok = abs(length_sum - 2.0) <= settings.EPS_SUM
        if not length_sum_ok:
            issues.append(f"rank-1 lengths sum to {length_sum}, expected 2")

    return SetValidityReport(
        valid=not issues,
        issues=issues,
        elements=reports,
        vector_sum=vector_sum,
        vector_sum_ok=vector_sum_ok,
        weight_sum=weight_sum,
        weight_sum_ok=weight_sum_ok,
        length_sum=length_sum,
        all_rank1=all_rank1,
        length_sum_ok=length_sum_ok,
    )


# --- Probabilities ---------------------------------------------------------
def _clamp_probability(p: float, upper: float = 1.0) -> float:
    # Values outside [0, upper] by less than the positivity slack are float noise.
    slack = settings.EPS_ROUND + settings.EPS_NORM
    if p < 0.0:
        if p < -slack:
            raise ProbabilityOutOfRange(f"probability {p} is negative")
        return 0.0
    if p > upper:
        if p > upper + slack:
            raise ProbabilityOutOfRange(f"probability {p} exceeds {upper}")
        return upper
    return p


def raw_outcome_probability(e: PovmElement, s: BlochState) -> float:
    """(a + v.r)/2 without range checks."""
    return (e.a + e.v.dot(s.r)) / 2.0


def outcome_probability(e: PovmElement, s: BlochState) -> float:
    """P(i|rho) = (a + v.r)/2, within [0, a] for a positive element."""
    return _clamp_probability(raw_outcome_probability(e, s), upper=max(e.a, 0.0))


def outcome_probability_pure(a: float, beta: float) -> float:
    """P(i|rho) = a(1 + cos beta)/2 for a rank-1 element and a pure state."""
    return a * (1.0 + math.cos(beta)) / 2.0


def outcome_distribution(s: PovmSet, st: BlochState) -> List[float]:
    report = validate_set(s)
    if not report.valid:
        logger.debug("rejecting set with %d issue(s)", len(report.issues))
        raise InvalidSet("; ".join(report.issues), report=report)
    # a valid set caps every outcome at 1
    return [_clamp_probability(raw_outcome_probability(e, st)) for e in s.elements]


# --- Decomposition -----------------------------------------------------------
def decompose_rank1(e: PovmElement) -> Rank1Decomposition:
    """Split an element into rank-1 parts along +n and -n, n = v/|v|."""
    if e.a <= settings.EPS_NORM:
        raise ZeroElement(f"weight a={e.a} is zero")
    length = e.length
    if length > e.a + settings.EPS_NORM:
        raise NotPositive(f"|v|={length} exceeds a={e.a}")

    if length <= settings.EPS_NORM:
        # maximally mixed: any axis is an eigenbasis
        axis = Z_AXIS
    else:
        axis = e.v.scale(1.0 / length)
    b = min(length / e.a, 1.0)
    lam1, lam2 = (1.0 + b) / 2.0, (1.0 - b) / 2.0
    major = PovmElement(a=e.a * lam1, v=axis.scale(e.a * lam1))
    minor = PovmElement(a=e.a * lam2, v=axis.scale(-e.a * lam2))
    return Rank1Decomposition(major=major, minor=minor, axis=axis, eigen_weights=(lam1, lam2))


def decompose_set(s: PovmSet) -> PovmSet:
    """Replace rank-2 elements by their two rank-1 parts; drop zero elements."""
    out = []
    for e in s.elements:
        rank = classify_rank(e.a, e.length)
        if rank == Rank.ZERO:
            continue
        if rank == Rank.RANK2:
            d = decompose_rank1(e)
            out.extend((d.major, d.minor))
        else:
            out.append(e)
    if not out:
        raise ZeroElement("every element of the set is zero")
    return PovmSet(elements=tuple(out))


# --- Common measurements ---------------------------------------------------
def von_neumann_set(axis: Vec3 = Z_AXIS) -> PovmSet:
    n = axis.normalized()
    return PovmSet(elements=(PovmElement(a=1.0, v=n), PovmElement(a=1.0, v=-n)))


def trine_set() -> PovmSet:
    """Three rank-1 elements of weight 2/3 at 120 degrees in the X-Z plane."""
    a = 2.0 / 3.0
    elements = []
    for k in range(3):
        theta = 2.0 * math.pi * k / 3.0
        elements.append(PovmElement(a=a, v=vec(a * math.sin(theta), 0.0, a * math.cos(theta))))
    return PovmSet(elements=tuple(elements))


def tr_product(e: PovmElement, s: BlochState) -> float:
    """tr(A rho) through explicit matrices, the reference for outcome_probability."""
    return mo.trace_product(element_to_matrix(e), bloch_to_density(s))


def set_matrices(s: PovmSet) -> List[HermitianMat2]:
    return [element_to_matrix(e) for e in s.elements]
