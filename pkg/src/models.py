"""
Value types of the Bloch-vector calculus.

All models are frozen; every operation in src.services returns new values.
Vectors serialize as three-element JSON arrays.
"""
import math
from enum import Enum
from typing import Annotated, Any, Iterable, List, Tuple

import numpy as np
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    FiniteFloat,
    field_validator,
    model_serializer,
    model_validator,
)
from pydantic_core import PydanticCustomError

from src.core.config import settings


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


def _require_number(value: Any) -> Any:
    # JSON strings and booleans are not coordinates, even when they would coerce.
    if isinstance(value, (bool, str, bytes)):
        raise PydanticCustomError(
            "number_type", "expected a number, got {kind}", {"kind": type(value).__name__}
        )
    return value


Number = Annotated[FiniteFloat, BeforeValidator(_require_number)]


# --- Geometry ------------------------------------------------------------
class Vec3(_Frozen):
    x: Number
    y: Number
    z: Number

    @model_validator(mode="before")
    @classmethod
    def _from_sequence(cls, data: Any) -> Any:
        if isinstance(data, np.ndarray):
            data = data.tolist()
        if isinstance(data, (list, tuple)):
            if len(data) != 3:
                raise ValueError(f"expected 3 coordinates, got {len(data)}")
            return {"x": data[0], "y": data[1], "z": data[2]}
        return data

    @model_serializer
    def _as_list(self) -> List[float]:
        return [self.x, self.y, self.z]

    @classmethod
    def of(cls, values: Iterable[float]) -> "Vec3":
        return cls.model_validate(list(values))

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def norm(self) -> float:
        return math.hypot(self.x, self.y, self.z)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            x=self.y * other.z - self.z * other.y,
            y=self.z * other.x - self.x * other.z,
            z=self.x * other.y - self.y * other.x,
        )

    def scale(self, c: float) -> "Vec3":
        return Vec3(x=c * self.x, y=c * self.y, z=c * self.z)

    def normalized(self) -> "Vec3":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return self.scale(1.0 / n)

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(x=self.x + other.x, y=self.y + other.y, z=self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(x=self.x - other.x, y=self.y - other.y, z=self.z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(x=-self.x, y=-self.y, z=-self.z)

    def __mul__(self, c: float) -> "Vec3":
        return self.scale(c)

    __rmul__ = __mul__


ZERO = Vec3(x=0.0, y=0.0, z=0.0)
X_AXIS = Vec3(x=1.0, y=0.0, z=0.0)
Z_AXIS = Vec3(x=0.0, y=0.0, z=1.0)


def vec(x: float, y: float, z: float) -> Vec3:
    return Vec3(x=x, y=y, z=z)


# --- States and measurement elements ---------------------------------------
class BlochState(_Frozen):
    """Qubit density matrix I/2 + r.sigma/2, stored as its Bloch vector."""

    r: Vec3

    @field_validator("r")
    @classmethod
    def _inside_ball(cls, r: Vec3) -> Vec3:
        length = r.norm()
        if length > 1.0 + settings.EPS_NORM:
            raise PydanticCustomError(
                "bloch_norm",
                "Bloch vector length {length} exceeds 1",
                {"length": length},
            )
        return r

    def is_pure(self) -> bool:
        return self.r.norm() >= 1.0 - settings.EPS_NORM


class Rank(str, Enum):
    ZERO = "zero"
    RANK1 = "rank-1"
    RANK2 = "rank-2"


class PovmElement(_Frozen):
    """
    One POVM operator A = a I/2 + v.sigma/2.

    Only finiteness is enforced here; positivity is checked by
    bloch_core.validate_element so invalid candidates can be reported on.
    """

    a: Number
    v: Vec3

    @property
    def length(self) -> float:
        return self.v.norm()


class PovmSet(_Frozen):
    """Ordered elements; outcome labels are the positional indices."""

    elements: Tuple[PovmElement, ...] = Field(min_length=1)

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, index: int) -> PovmElement:
        return self.elements[index]


class Rank1Decomposition(_Frozen):
    major: PovmElement
    minor: PovmElement
    axis: Vec3
    eigen_weights: Tuple[float, float]


# --- Discrimination --------------------------------------------------------
class UsdDesign(_Frozen):
    """Error-free discrimination measurement, outcomes (detect-phi, detect-psi, inconclusive)."""

    r_psi: Vec3
    r_phi: Vec3
    alpha: float
    povm: PovmSet
    a: float
    a_inconclusive: float
    p_success: float
    degenerate: bool = False


class VonNeumannBaseline(_Frozen):
    r_psi: Vec3
    r_phi: Vec3
    povm: PovmSet
    p_outcome_given_psi: Tuple[float, float]
    p_error: float
