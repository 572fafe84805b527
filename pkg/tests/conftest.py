import json
import math
import os

import numpy as np
import pytest
from fastapi.testclient import TestClient


# Configure environment BEFORE importing the app
os.environ.setdefault("LOG_LEVEL", "WARNING")
os.environ.setdefault("NO_COLOR", "1")


from src.main import app  # noqa: E402
from src.models import BlochState, PovmElement, PovmSet, Vec3  # noqa: E402
from src.services.bloch_core import matrix_to_element, trine_set, von_neumann_set  # noqa: E402
from src.services.matrix_oracle import HermitianMat2  # noqa: E402

SEED = 20240229


@pytest.fixture()
def client():
    return TestClient(app)


@pytest.fixture()
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture()
def trine():
    return trine_set()


@pytest.fixture()
def von_neumann_z():
    return von_neumann_set()


@pytest.fixture()
def write_document(tmp_path):
    """Write a JSON document to a temp file and return its path as str."""
    def _write(payload, name="doc.json"):
        path = tmp_path / name
        text = payload if isinstance(payload, str) else json.dumps(payload)
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


# --- Random generators ------------------------------------------------------
def random_unit(rng: np.random.Generator) -> Vec3:
    while True:
        g = rng.normal(size=3)
        n = np.linalg.norm(g)
        if n > 1e-6:
            return Vec3.of(g / n)


def random_state(rng: np.random.Generator) -> BlochState:
    """Uniform in the Bloch ball."""
    return BlochState(r=random_unit(rng).scale(rng.random() ** (1.0 / 3.0)))


def random_pure_state(rng: np.random.Generator) -> BlochState:
    return BlochState(r=random_unit(rng))


def random_rank2_element(rng: np.random.Generator) -> PovmElement:
    a = rng.uniform(0.05, 2.0)
    return PovmElement(a=a, v=random_unit(rng).scale(a * rng.uniform(0.0, 0.95)))


def random_valid_element(rng: np.random.Generator) -> PovmElement:
    a = rng.uniform(0.0, 2.0)
    b = 1.0 if rng.random() < 0.3 else rng.random()
    return PovmElement(a=a, v=random_unit(rng).scale(a * b))


def _random_positive(rng: np.random.Generator, rank1: bool) -> np.ndarray:
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    if rank1:
        g[:, 1] = 0.0
    return g @ g.conj().T


def random_povm_set(rng: np.random.Generator, k: int) -> PovmSet:
    """
    k random positive operators M_i rescaled by S^{-1/2} (S = sum M_i) so
    they sum to the identity; roughly half are rank-1.
    """
    mats = [_random_positive(rng, rank1=rng.random() < 0.5) for _ in range(k)]
    w, u = np.linalg.eigh(sum(mats))
    t = u @ np.diag(1.0 / np.sqrt(w)) @ u.conj().T
    elements = []
    for m in mats:
        a = t @ m @ t
        a = 0.5 * (a + a.conj().T)
        elements.append(matrix_to_element(HermitianMat2.from_array(a)))
    return PovmSet(elements=tuple(elements))


def angle_pair(alpha: float):
    return (0.0, 0.0, 1.0), (math.sin(alpha), 0.0, math.cos(alpha))
