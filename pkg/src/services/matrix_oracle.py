"""
Explicit 2x2 Hermitian arithmetic.

This module knows nothing about Bloch vectors; it is the ground truth the
Bloch calculus in bloch_core is checked against. A Hermitian 2x2 matrix is
stored as its two real diagonal entries and the upper off-diagonal entry,
the lower one being its conjugate.
"""
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from src.core.config import settings
from src.core.exceptions import NotHermitian


@dataclass(frozen=True)
class HermitianMat2:
    m00: float
    m01: complex
    m11: float

    def __post_init__(self):
        object.__setattr__(self, "m00", float(self.m00))
        object.__setattr__(self, "m11", float(self.m11))
        object.__setattr__(self, "m01", complex(self.m01))
        if not all(math.isfinite(x) for x in (self.m00, self.m11, self.m01.real, self.m01.imag)):
            raise NotHermitian("matrix entries must be finite")

    @property
    def m10(self) -> complex:
        return self.m01.conjugate()

    @classmethod
    def from_entries(cls, m00: complex, m01: complex, m10: complex, m11: complex,
                     eps: Optional[float] = None) -> "HermitianMat2":
        """Build from four entries, rejecting anything not Hermitian within eps."""
        eps = settings.EPS_HERM if eps is None else eps
        m00, m01, m10, m11 = (complex(z) for z in (m00, m01, m10, m11))
        if abs(m00.imag) > eps or abs(m11.imag) > eps:
            raise NotHermitian("diagonal entries must be real")
        if abs(m10 - m01.conjugate()) > eps:
            raise NotHermitian("off-diagonal entries must be complex conjugates")
        return cls(m00.real, (m01 + m10.conjugate()) / 2, m11.real)

    @classmethod
    def from_array(cls, array, eps: Optional[float] = None) -> "HermitianMat2":
        arr = np.asarray(array, dtype=complex)
        if arr.shape != (2, 2):
            raise NotHermitian(f"expected a 2x2 matrix, got shape {arr.shape}")
        return cls.from_entries(arr[0, 0], arr[0, 1], arr[1, 0], arr[1, 1], eps=eps)

    @property
    def array(self) -> np.ndarray:
        return np.array([[self.m00, self.m01], [self.m10, self.m11]], dtype=complex)

    def entries(self) -> Tuple[complex, complex, complex, complex]:
        return (complex(self.m00), self.m01, self.m10, complex(self.m11))

    def allclose(self, other: "HermitianMat2", atol: float) -> bool:
        return all(abs(p - q) <= atol for p, q in zip(self.entries(), other.entries()))

    def __add__(self, other: "HermitianMat2") -> "HermitianMat2":
        return add(self, other)


def identity() -> HermitianMat2:
    return HermitianMat2(1.0, 0.0, 1.0)


def zero() -> HermitianMat2:
    return HermitianMat2(0.0, 0.0, 0.0)


_PAULI = {
    "x": HermitianMat2(0.0, 1.0, 0.0),
    "y": HermitianMat2(0.0, -1j, 0.0),
    "z": HermitianMat2(1.0, 0.0, -1.0),
}


def pauli(k: str) -> HermitianMat2:
    """The k-th Pauli matrix, k in {'x', 'y', 'z'}."""
    try:
        return _PAULI[k.lower()]
    except (KeyError, AttributeError):
        raise ValueError(f"unknown Pauli axis {k!r}; expected x, y or z") from None


def projector(c0: complex, c1: complex) -> HermitianMat2:
    """|psi><psi| for the normalized ket c0|0> + c1|1>."""
    norm = math.hypot(abs(c0), abs(c1))
    if norm == 0.0:
        raise ValueError("zero ket has no projector")
    c0, c1 = complex(c0) / norm, complex(c1) / norm
    return HermitianMat2(abs(c0) ** 2, c0 * c1.conjugate(), abs(c1) ** 2)


def trace(m: HermitianMat2) -> float:
    return m.m00 + m.m11


def add(m: HermitianMat2, n: HermitianMat2) -> HermitianMat2:
    return HermitianMat2(m.m00 + n.m00, m.m01 + n.m01, m.m11 + n.m11)


def scale(c: float, m: HermitianMat2) -> HermitianMat2:
    return HermitianMat2(c * m.m00, c * m.m01, c * m.m11)


def trace_product(a: HermitianMat2, b: HermitianMat2) -> float:
    """
    tr(ab) for Hermitian a, b.

    Expanded as a00 b00 + a11 b11 + 2 Re(a01 conj(b01)); every term is
    commutative in (a, b) so the result is exactly symmetric.
    """
    off = a.m01.real * b.m01.real + a.m01.imag * b.m01.imag
    return a.m00 * b.m00 + a.m11 * b.m11 + 2.0 * off


def determinant(m: HermitianMat2) -> float:
    return m.m00 * m.m11 - abs(m.m01) ** 2


def eigvals2(m: HermitianMat2) -> Tuple[float, float]:
    """Closed-form eigenvalues (lo, hi) = tr/2 -+ |w|, w the Pauli part."""
    half_trace = 0.5 * (m.m00 + m.m11)
    w = math.hypot(0.5 * (m.m00 - m.m11), m.m01.real, m.m01.imag)
    return half_trace - w, half_trace + w


def is_positive(m: HermitianMat2, eps: Optional[float] = None) -> bool:
    eps = settings.EPS_NORM if eps is None else eps
    lo, _ = eigvals2(m)
    return lo >= -eps


def matrix_sum(matrices: Iterable[HermitianMat2]) -> HermitianMat2:
    total = zero()
    for m in matrices:
        total = add(total, m)
    return total


def completeness(matrices: Sequence[HermitianMat2], eps: Optional[float] = None) -> bool:
    """True iff the matrices sum to the identity entrywise within eps."""
    eps = settings.EPS_SUM if eps is None else eps
    total = matrix_sum(matrices)
    return (
        abs(total.m00 - 1.0) <= eps
        and abs(total.m11 - 1.0) <= eps
        and abs(total.m01) <= eps
    )
