"""Randomized checks of the Bloch calculus against the explicit matrix arithmetic."""
import math

import numpy as np
import pytest

from src.models import PovmElement, PovmSet
from src.services import bloch_core as bc
from src.services import discrimination as usd
from src.services import matrix_oracle as mo
from tests.conftest import random_povm_set, random_rank2_element, random_state, random_valid_element


def test_probability_matches_trace_product(rng):
    worst = 0.0
    for _ in range(10_000):
        e, s = random_valid_element(rng), random_state(rng)
        oracle = mo.trace_product(bc.element_to_matrix(e), bc.bloch_to_density(s))
        worst = max(worst, abs(bc.raw_outcome_probability(e, s) - oracle))
    assert worst <= 1e-12


def test_reported_eigenvalues_match_matrix_spectrum(rng):
    for _ in range(2_000):
        e = random_valid_element(rng) if rng.random() < 0.5 else random_rank2_element(rng)
        m = bc.element_to_matrix(e)
        reported = bc.validate_element(e).eigenvalues
        assert reported == pytest.approx(mo.eigvals2(m), abs=1e-12)
        assert reported == pytest.approx(tuple(np.linalg.eigvalsh(m.array)), abs=1e-12)


def test_random_sets_are_normalized_and_complete(rng):
    for _ in range(1_000):
        s = random_povm_set(rng, int(rng.integers(2, 9)))
        report = bc.validate_set(s)
        assert report.valid, report.issues
        assert mo.completeness(bc.set_matrices(s)) == report.valid
        assert math.fsum(bc.outcome_distribution(s, random_state(rng))) == pytest.approx(1.0, abs=1e-9)


def test_oracle_and_bloch_checks_agree_on_broken_sets(rng):
    for _ in range(200):
        s = random_povm_set(rng, int(rng.integers(2, 9)))
        i = int(rng.integers(len(s)))
        elements = list(s.elements)
        e = elements[i]
        elements[i] = PovmElement(a=e.a * 1.05 + 0.01, v=e.v)
        broken = PovmSet(elements=tuple(elements))
        assert not bc.validate_set(broken).valid
        assert not mo.completeness(bc.set_matrices(broken))


def test_decomposition_is_exact(rng):
    for _ in range(1_000):
        e = random_rank2_element(rng)
        d = bc.decompose_rank1(e)
        total = mo.add(bc.element_to_matrix(d.major), bc.element_to_matrix(d.minor))
        assert total.allclose(bc.element_to_matrix(e), atol=1e-12)
        s = random_state(rng)
        p = bc.outcome_probability(e, s)
        assert p == pytest.approx(
            bc.outcome_probability(d.major, s) + bc.outcome_probability(d.minor, s), abs=1e-12
        )


@pytest.mark.parametrize(
    "alpha",
    [math.pi / 6, math.pi / 4, math.pi / 2, 2 * math.pi / 3, 5 * math.pi / 6, math.pi],
)
def test_success_probability_closed_form(alpha):
    assert usd.usd_success_probability(alpha) == pytest.approx(1 - math.cos(alpha / 2), abs=1e-12)


def test_success_probability_reference_values():
    assert usd.usd_success_probability(math.pi / 2) == pytest.approx(0.2928932188, abs=1e-10)
    assert usd.usd_success_probability(math.pi) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("k", range(1, 21))
def test_grid_search_agrees_with_closed_form(k):
    alpha = math.pi * k / 20
    a_best, p_best = usd.brute_force_optimal_a(alpha, 1e-5)
    assert a_best == pytest.approx(usd.optimal_weight(alpha), abs=1e-4)
    assert p_best <= usd.usd_success_probability(alpha) + 1e-8
