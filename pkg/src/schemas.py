import math
from enum import Enum
from typing import Dict, Generic, List, Optional, Tuple, TypeVar

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_core import PydanticCustomError

from src.core.config import settings
from src.models import (
    BlochState,
    PovmElement,
    PovmSet,
    Rank,
    UsdDesign,
    Vec3,
    X_AXIS,
    Z_AXIS,
)

T = TypeVar("T")


class ApiResponse(BaseModel, Generic[T]):
    data: T
    message: Optional[str] = None


# --- Validity reports --------------------------------------------------
class ValidityReport(BaseModel):
    valid: bool
    issues: List[str] = []


class ElementValidityReport(ValidityReport):
    positive: bool
    rank: Optional[Rank] = None
    eigenvalues: Tuple[float, float]


class SetValidityReport(ValidityReport):
    elements: List[ElementValidityReport]
    vector_sum: Vec3
    vector_sum_ok: bool
    weight_sum: float
    weight_sum_ok: bool
    length_sum: float
    all_rank1: bool
    # only judged when every element is rank-1
    length_sum_ok: Optional[bool] = None


class ErrorFreeReport(ValidityReport):
    """Outcome probabilities of a discrimination design, ordered (phi, psi, ?)."""

    p_given_psi: Tuple[float, float, float]
    p_given_phi: Tuple[float, float, float]
    error_free: bool
    symmetric: bool
    inconclusive_equal: bool
    set_valid: bool


class CurvePoint(BaseModel):
    alpha: float
    a: float
    a_inconclusive: float
    p_success: float


# --- Sampling -----------------------------------------------------------
class SampleReport(BaseModel):
    counts: List[int]
    n: int
    frequencies: List[float]
    expected: List[float]
    max_abs_deviation: float
    seed: int
    standard_errors: List[float]
    flagged: List[int] = []


# --- Documents ------------------------------------------------------------
class Document(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    schema_version: str
    states: Optional[Dict[str, BlochState]] = None
    povm: Optional[PovmSet] = None


# --- Figures ----------------------------------------------------------------
class ArrowStyle(str, Enum):
    STATE = "state"
    POVM = "povm"
    INCONCLUSIVE = "inconclusive"
    MIXED = "mixed"


class Arrow(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    vector: Vec3
    style: ArrowStyle = ArrowStyle.POVM
    label: Optional[str] = None


class Plane(BaseModel):
    """Projection plane: `horizontal` maps to +x pixels, `vertical` to up."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    horizontal: Vec3 = X_AXIS
    vertical: Vec3 = Z_AXIS

    @model_validator(mode="after")
    def _orthonormal(self) -> "Plane":
        h, w = self.horizontal, self.vertical
        if (
            abs(h.norm() - 1.0) > settings.EPS_NORM
            or abs(w.norm() - 1.0) > settings.EPS_NORM
            or abs(h.dot(w)) > settings.EPS_NORM
        ):
            raise PydanticCustomError("plane_axes", "projection axes must be orthonormal")
        return self

    def project(self, v: Vec3) -> Tuple[float, float]:
        return v.dot(self.horizontal), v.dot(self.vertical)


class Guide(BaseModel):
    """Non-arrow helper path drawn through the given points."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    points: Tuple[Vec3, ...] = Field(min_length=2)


class FigureSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    plane: Plane = Plane()
    arrows: Tuple[Arrow, ...] = ()
    guides: Tuple[Guide, ...] = ()
    width: int = Field(default_factory=lambda: settings.FIGURE_WIDTH, gt=0)
    height: int = Field(default_factory=lambda: settings.FIGURE_HEIGHT, gt=0)
    radius: float = Field(default_factory=lambda: settings.FIGURE_RADIUS, gt=0)
    title: Optional[str] = None

    @property
    def center(self) -> Tuple[float, float]:
        return self.width / 2.0, self.height / 2.0

    def to_pixels(self, v: Vec3) -> Tuple[float, float]:
        # SVG y grows downward, so the vertical axis is negated
        h, w = self.plane.project(v)
        cx, cy = self.center
        return cx + self.radius * h, cy - self.radius * w

    @model_validator(mode="after")
    def _inside_canvas(self) -> "FigureSpec":
        if 2 * self.radius > min(self.width, self.height):
            raise PydanticCustomError("figure_bounds", "unit circle does not fit the canvas")
        points = [a.vector for a in self.arrows] + [p for g in self.guides for p in g.points]
        for v in points:
            px, py = self.to_pixels(v)
            if not (math.isfinite(px) and math.isfinite(py)):
                raise PydanticCustomError("figure_bounds", "non-finite pixel coordinate")
            if not (0.0 <= px <= self.width and 0.0 <= py <= self.height):
                raise PydanticCustomError(
                    "figure_bounds",
                    "point {point} falls outside the canvas",
                    {"point": list(v.as_tuple())},
                )
        return self


# --- HTTP request models ---------------------------------------------
class ValidateRequest(BaseModel):
    povm: PovmSet


class ProbabilityRequest(BaseModel):
    povm: PovmSet
    state: BlochState


class ProbabilityResponse(BaseModel):
    probabilities: List[float]


class DecomposeRequest(BaseModel):
    element: PovmElement


class UsdRequest(BaseModel):
    r_psi: Vec3
    r_phi: Vec3


class UsdResponse(BaseModel):
    design: UsdDesign
    verification: ErrorFreeReport


class SampleRequest(BaseModel):
    povm: PovmSet
    state: BlochState
    n: int = Field(gt=0)
    seed: int = Field(ge=0, lt=2**64)


