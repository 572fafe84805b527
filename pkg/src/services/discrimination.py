"""
Error-free (unambiguous) discrimination of two pure qubit states with equal
priors.

The measurement has three rank-1 elements: v_1 and v_2 antiparallel to the
two states with a common weight a, and the inconclusive element
v_? = -(v_1 + v_2) with weight 2(1 - a). Positivity of the inconclusive
element caps a at 1/(1 + cos(alpha/2)).
"""
import logging
import math
from typing import Iterable, List, Tuple

import numpy as np

from src.core.config import settings
from src.core.exceptions import AngleOutOfRange, NoFeasible, NotPure
from src.models import (
    BlochState,
    PovmElement,
    PovmSet,
    UsdDesign,
    Vec3,
    VonNeumannBaseline,
    Z_AXIS,
    vec,
)
from src.schemas import CurvePoint, ErrorFreeReport
from src.services.bloch_core import bloch_angle, raw_outcome_probability, validate_set

logger = logging.getLogger(__name__)

DETECT_PHI, DETECT_PSI, INCONCLUSIVE = 0, 1, 2


def _check_angle(alpha: float, allow_zero: bool = True) -> float:
    eps = settings.EPS_ANG
    lower_ok = alpha >= -eps if allow_zero else alpha > eps
    if not (math.isfinite(alpha) and lower_ok and alpha <= math.pi + eps):
        bound = "[0, pi]" if allow_zero else "(0, pi]"
        raise AngleOutOfRange(f"alpha={alpha} is outside {bound}")
    return min(max(alpha, 0.0), math.pi)


def _require_pure(r: Vec3, name: str) -> Vec3:
    length = r.norm()
    if abs(length - 1.0) > settings.EPS_NORM:
        raise NotPure(f"{name} has Bloch length {length}, expected 1")
    return r.scale(1.0 / length)


def von_neumann_outcome_prob(beta_i: float) -> float:
    """Probability of a projective outcome whose axis makes angle beta_i with the state."""
    return (1.0 + math.cos(beta_i)) / 2.0


def von_neumann_baseline(r_psi: Vec3, r_phi: Vec3) -> VonNeumannBaseline:
    """Projective measurement along phi, showing it misidentifies psi when the states overlap."""
    psi = _require_pure(r_psi, "r_psi")
    phi = _require_pure(r_phi, "r_phi")
    povm = PovmSet(elements=(PovmElement(a=1.0, v=phi), PovmElement(a=1.0, v=-phi)))
    beta_1 = bloch_angle(phi, psi)
    p1 = von_neumann_outcome_prob(beta_1)
    p2 = von_neumann_outcome_prob(math.pi - beta_1)
    return VonNeumannBaseline(
        r_psi=psi,
        r_phi=phi,
        povm=povm,
        p_outcome_given_psi=(p1, p2),
        # outcome 1 is read as phi; only a psi preparation can produce it wrongly
        p_error=0.5 * p1,
    )


def optimal_weight(alpha: float) -> float:
    """Common weight a = 1/(1 + cos(alpha/2)) of the two conclusive elements."""
    alpha = _check_angle(alpha)
    return 1.0 / (1.0 + math.cos(alpha / 2.0))


def usd_success_probability(alpha: float) -> float:
    """P_success = (1 - cos alpha) / (2 (1 + cos(alpha/2))), equal to 1 - cos(alpha/2)."""
    alpha = _check_angle(alpha)
    return (1.0 - math.cos(alpha)) / (2.0 * (1.0 + math.cos(alpha / 2.0)))


def _three_element_set(a: float, psi: Vec3, phi: Vec3) -> PovmSet:
    v1 = psi.scale(-a)
    v2 = phi.scale(-a)
    return PovmSet(elements=(
        PovmElement(a=a, v=v1),
        PovmElement(a=a, v=v2),
        PovmElement(a=2.0 * (1.0 - a), v=-(v1 + v2)),
    ))


def design_usd(r_psi: Vec3, r_phi: Vec3) -> UsdDesign:
    psi = _require_pure(r_psi, "r_psi")
    phi = _require_pure(r_phi, "r_phi")
    alpha = bloch_angle(psi, phi)

    degenerate = alpha <= settings.EPS_ANG
    if degenerate:
        logger.warning("states are identical (alpha=%.3g); no conclusive outcome is possible", alpha)
        a, p_success = 0.5, 0.0
    else:
        a = optimal_weight(alpha)
        p_success = usd_success_probability(alpha)

    povm = _three_element_set(a, psi, phi)
    return UsdDesign(
        r_psi=psi,
        r_phi=phi,
        alpha=alpha,
        povm=povm,
        a=a,
        a_inconclusive=povm.elements[INCONCLUSIVE].a,
        p_success=p_success,
        degenerate=degenerate,
    )


def canonical_pair(alpha: float) -> Tuple[Vec3, Vec3]:
    """psi = |0>, phi = cos(alpha/2)|0> + sin(alpha/2)|1>, both in the X-Z plane."""
    alpha = _check_angle(alpha)
    return Z_AXIS, vec(math.sin(alpha), 0.0, math.cos(alpha))


def design_usd_for_angle(alpha: float) -> UsdDesign:
    return design_usd(*canonical_pair(alpha))


def success_curve(alphas: Iterable[float]) -> List[CurvePoint]:
    points = []
    for alpha in alphas:
        a = optimal_weight(alpha)
        points.append(CurvePoint(
            alpha=alpha,
            a=a,
            a_inconclusive=2.0 * (1.0 - a),
            p_success=usd_success_probability(alpha),
        ))
    return points


def verify_error_free(d: UsdDesign) -> ErrorFreeReport:
    """Check the design's outcome probabilities on both input states."""
    eps = settings.EPS_ROUND
    elements = d.povm.elements
    if len(elements) != 3:
        raise ValueError(f"a discrimination design has 3 elements, got {len(elements)}")

    psi, phi = BlochState(r=d.r_psi), BlochState(r=d.r_phi)
    p_psi = tuple(raw_outcome_probability(e, psi) for e in elements)
    p_phi = tuple(raw_outcome_probability(e, phi) for e in elements)

    issues = []
    error_free = abs(p_psi[DETECT_PHI]) <= eps and abs(p_phi[DETECT_PSI]) <= eps
    if not error_free:
        issues.append(
            f"wrong-state outcomes occur: P(phi|psi)={p_psi[DETECT_PHI]:.3g}, "
            f"P(psi|phi)={p_phi[DETECT_PSI]:.3g}"
        )
    symmetric = (
        abs(p_phi[DETECT_PHI] - d.p_success) <= eps
        and abs(p_psi[DETECT_PSI] - d.p_success) <= eps
    )
    if not symmetric:
        issues.append(
            f"conclusive probabilities {p_phi[DETECT_PHI]:.12g}, {p_psi[DETECT_PSI]:.12g} "
            f"differ from p_success={d.p_success:.12g}"
        )
    inconclusive_equal = abs(p_psi[INCONCLUSIVE] - p_phi[INCONCLUSIVE]) <= eps
    if not inconclusive_equal:
        issues.append("inconclusive outcome distinguishes the states")
    set_report = validate_set(d.povm)
    issues.extend(set_report.issues)

    return ErrorFreeReport(
        valid=not issues,
        issues=issues,
        p_given_psi=p_psi,
        p_given_phi=p_phi,
        error_free=error_free,
        symmetric=symmetric,
        inconclusive_equal=inconclusive_equal,
        set_valid=set_report.valid,
    )


def brute_force_optimal_a(alpha: float, step: float) -> Tuple[float, float]:
    """
    Grid search over a in [0, 1] for the best feasible symmetric design.

    Feasibility is judged only from positivity of the inconclusive element,
    |v_?| <= a_? + eps, so the search does not depend on the closed form.
    Returns (a_best, p_best); ties go to the smaller a.
    """
    alpha = _check_angle(alpha, allow_zero=False)
    if not (step > 0.0 and math.isfinite(step)):
        raise ValueError(f"step must be positive, got {step}")

    n = max(1, math.ceil(1.0 / step - 1e-9))
    grid = np.linspace(0.0, 1.0, n + 1)
    psi, phi = canonical_pair(alpha)
    direction = psi.as_array() + phi.as_array()

    a_inconclusive = 2.0 - 2.0 * grid
    length_inconclusive = grid * np.linalg.norm(direction)
    feasible = (a_inconclusive >= -settings.EPS_NORM) & (
        length_inconclusive <= a_inconclusive + settings.EPS_NORM
    )
    if not feasible.any():
        raise NoFeasible(f"no feasible weight for alpha={alpha}")

    p = np.where(feasible, grid * (1.0 - math.cos(alpha)) / 2.0, -np.inf)
    best = int(np.argmax(p))  # first maximum
    a_best = float(grid[best])

    report = validate_set(_three_element_set(a_best, psi, phi))
    if not report.valid:
        raise NoFeasible(f"best grid point a={a_best} fails validation: {report.issues}")
    logger.debug("grid search alpha=%.6f step=%g -> a=%.6f", alpha, step, a_best)
    return a_best, float(p[best])
