import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from src.core.exceptions import InvalidSet, InvalidState, NotAState, NotPositive, ZeroElement
from src.models import BlochState, PovmElement, PovmSet, Rank, Vec3
from src.services import bloch_core as bc
from src.services import matrix_oracle as mo
from src.services.matrix_oracle import HermitianMat2
from tests.conftest import random_rank2_element, random_state, random_unit, random_valid_element

S3 = math.sqrt(3.0) / 2.0


def element(a, v):
    return PovmElement(a=a, v=v)


def state(*r):
    return BlochState(r=r)


# --- States -----------------------------------------------------------------
def test_state_outside_ball_is_rejected():
    with pytest.raises(ValidationError) as info:
        BlochState(r=(0, 0, 1.1))
    assert info.value.errors()[0]["type"] == "bloch_norm"
    with pytest.raises(InvalidState):
        bc.make_state((1, 1, 0))


def test_state_within_tolerance_is_accepted():
    s = bc.make_state((0, 0, 1 + 1e-10))
    assert bc.is_pure(s)
    assert not bc.is_pure(state(0, 0, 0.5))


@pytest.mark.parametrize(
    "c0, c1, expected",
    [
        (1, 0, (0, 0, 1)),
        (0, 1, (0, 0, -1)),
        (1, 1, (1, 0, 0)),
        (1, 1j, (0, 1, 0)),
    ],
)
def test_state_from_ket(c0, c1, expected):
    assert_allclose(bc.state_from_ket(c0, c1).r.as_tuple(), expected, atol=1e-15)


def test_state_from_zero_ket_fails():
    with pytest.raises(InvalidState):
        bc.state_from_ket(0, 0)


def test_bloch_angle():
    assert bc.bloch_angle(Vec3.of((0, 0, 1)), Vec3.of((1, 0, 0))) == pytest.approx(math.pi / 2)
    assert bc.bloch_angle(Vec3.of((0, 0, 1)), Vec3.of((0, 0, -2))) == pytest.approx(math.pi)
    assert bc.bloch_angle(Vec3.of((0, 0, 0)), Vec3.of((1, 0, 0))) == 0.0


@pytest.mark.parametrize(
    "r, expected",
    [
        ((0, 0, 0), [[0.5, 0], [0, 0.5]]),
        ((0, 0, 1), [[1, 0], [0, 0]]),
        ((1, 0, 0), [[0.5, 0.5], [0.5, 0.5]]),
    ],
)
def test_bloch_to_density(r, expected):
    m = bc.bloch_to_density(state(*r))
    assert_allclose(m.array, np.array(expected, dtype=complex), atol=1e-15)
    assert mo.trace(m) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize(
    "m, expected",
    [
        (HermitianMat2(1, 0, 0), (0, 0, 1)),
        (HermitianMat2(0.5, 0, 0.5), (0, 0, 0)),
        (HermitianMat2(0.75, 0.25, 0.25), (0.5, 0, 0.5)),
    ],
)
def test_density_to_bloch(m, expected):
    assert_allclose(bc.density_to_bloch(m).r.as_tuple(), expected, atol=1e-15)


@pytest.mark.parametrize(
    "m",
    [
        HermitianMat2(1, 0, 1),       # trace 2
        HermitianMat2(1.5, 0, -0.5),  # negative eigenvalue
    ],
)
def test_density_to_bloch_rejects_non_states(m):
    with pytest.raises(NotAState):
        bc.density_to_bloch(m)


def test_state_round_trip(rng):
    for _ in range(200):
        s = random_state(rng)
        back = bc.density_to_bloch(bc.bloch_to_density(s))
        assert_allclose(back.r.as_tuple(), s.r.as_tuple(), atol=1e-12)


# --- Elements ---------------------------------------------------------------
@pytest.mark.parametrize(
    "a, v, expected",
    [
        (1, (0, 0, 1), [[1, 0], [0, 0]]),
        (2, (0, 0, 0), [[1, 0], [0, 1]]),
        (2 / 3, (2 / 3, 0, 0), [[1 / 3, 1 / 3], [1 / 3, 1 / 3]]),
    ],
)
def test_element_to_matrix(a, v, expected):
    m = bc.element_to_matrix(element(a, v))
    assert_allclose(m.array, np.array(expected, dtype=complex), atol=1e-15)
    assert mo.trace(m) == pytest.approx(a)


@pytest.mark.parametrize(
    "m, a, v",
    [
        (HermitianMat2(1, 0, 0), 1, (0, 0, 1)),
        (mo.identity(), 2, (0, 0, 0)),
        (HermitianMat2(0.75, 0.25, 0.25), 1, (0.5, 0, 0.5)),
    ],
)
def test_matrix_to_element(m, a, v):
    e = bc.matrix_to_element(m)
    assert e.a == pytest.approx(a)
    assert_allclose(e.v.as_tuple(), v, atol=1e-15)


def test_matrix_to_element_rejects_negative():
    with pytest.raises(NotPositive):
        bc.matrix_to_element(mo.pauli("z"))


def test_element_round_trip(rng):
    for _ in range(200):
        e = random_valid_element(rng)
        back = bc.matrix_to_element(bc.element_to_matrix(e))
        assert back.a == pytest.approx(e.a, abs=1e-12)
        assert_allclose(back.v.as_tuple(), e.v.as_tuple(), atol=1e-12)


def test_validate_element_rank1():
    report = bc.validate_element(element(1, (0, 0, 1)))
    assert report.valid and report.positive
    assert report.rank == Rank.RANK1


def test_validate_element_too_long():
    report = bc.validate_element(element(1, (0, 0, 1.5)))
    assert not report.valid
    assert report.rank is None
    assert report.eigenvalues[0] == pytest.approx(-0.25)
    assert "exceeds" in report.issues[0]


def test_validate_element_rank2():
    report = bc.validate_element(element(1, (0, 0, 0.5)))
    assert report.valid
    assert report.rank == Rank.RANK2
    assert report.eigenvalues == pytest.approx((0.25, 0.75))


def test_validate_element_negative_weight_and_zero():
    assert not bc.validate_element(element(-0.1, (0, 0, 0))).valid
    assert bc.validate_element(element(0, (0, 0, 0))).rank == Rank.ZERO


# --- Sets ---------------------------------------------------------------------
def test_validate_von_neumann_set(von_neumann_z):
    report = bc.validate_set(von_neumann_z)
    assert report.valid
    assert report.all_rank1 and report.length_sum_ok


def test_validate_trine_set(trine):
    report = bc.validate_set(trine)
    assert report.valid
    assert report.weight_sum == pytest.approx(2.0)
    assert report.length_sum == pytest.approx(2.0)


def test_validate_set_with_nonzero_vector_sum():
    s = PovmSet(elements=(element(1, (0, 0, 1)), element(1, (0, 0, 1))))
    report = bc.validate_set(s)
    assert not report.valid
    assert not report.vector_sum_ok
    assert report.weight_sum_ok
    assert any("sum to zero" in msg for msg in report.issues)


def test_validate_set_weight_sum():
    s = PovmSet(elements=(element(1, (0, 0, 0.5)), element(0.5, (0, 0, -0.5))))
    report = bc.validate_set(s)
    assert not report.weight_sum_ok
    assert report.length_sum_ok is None


def test_length_condition_only_judged_for_rank1_sets(trine):
    mixed = PovmSet(elements=(element(1, (0, 0, 0.9)), element(1, (0, 0, -0.9))))
    report = bc.validate_set(mixed)
    assert report.valid
    assert not report.all_rank1
    assert report.length_sum_ok is None
    assert report.length_sum == pytest.approx(1.8)
    assert bc.validate_set(trine).length_sum_ok is True


# --- Probabilities -------------------------------------------------------------
@pytest.mark.parametrize(
    "e, r, expected",
    [
        ((1, (0, 0, 1)), (0, 0, 1), 1.0),
        ((1, (0, 0, 1)), (0, 0, -1), 0.0),
        ((2 / 3, (2 / 3, 0, 0)), (1, 0, 0), 2 / 3),
    ],
)
def test_outcome_probability(e, r, expected):
    assert bc.outcome_probability(element(*e), state(*r)) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "a, beta, expected",
    [
        (1, 0.0, 1.0),
        (1, math.pi, 0.0),
        (1, math.pi / 2, 0.5),
    ],
)
def test_outcome_probability_pure(a, beta, expected):
    assert bc.outcome_probability_pure(a, beta) == pytest.approx(expected, abs=1e-15)


def test_angular_form_matches_vector_form(rng):
    for _ in range(100):
        a = rng.uniform(0, 2)
        n, r = random_unit(rng), random_unit(rng)
        beta = bc.bloch_angle(n, r)
        e = element(a, n.scale(a))
        assert bc.outcome_probability(e, BlochState(r=r)) == pytest.approx(
            bc.outcome_probability_pure(a, beta), abs=1e-12
        )


def test_outcome_probability_lies_in_zero_to_a(rng):
    for _ in range(200):
        e, s = random_valid_element(rng), random_state(rng)
        p = bc.outcome_probability(e, s)
        assert 0.0 <= p <= e.a + 1e-12


def test_outcome_probability_of_heavy_element_exceeds_one():
    e = element(1.5, (0, 0, 1.5))
    assert bc.validate_element(e).valid
    s = state(0, 0, 1)
    assert bc.outcome_probability(e, s) == pytest.approx(1.5, abs=1e-15)
    assert bc.outcome_probability(e, s) == pytest.approx(bc.tr_product(e, s), abs=1e-12)
    assert bc.outcome_probability(e, state(0, 0, -1)) == 0.0


def test_outcome_distribution(von_neumann_z, trine):
    assert bc.outcome_distribution(von_neumann_z, state(0, 0, 1)) == pytest.approx([1.0, 0.0])
    assert bc.outcome_distribution(trine, state(0, 0, 0)) == pytest.approx(
        [e.a / 2 for e in trine.elements]
    )
    assert bc.outcome_distribution(trine, state(0, 0, 1)) == pytest.approx([2 / 3, 1 / 6, 1 / 6])


def test_outcome_distribution_rejects_invalid_set():
    s = PovmSet(elements=(element(1, (0, 0, 1)), element(1, (0, 0, 1))))
    with pytest.raises(InvalidSet) as info:
        bc.outcome_distribution(s, state(0, 0, 1))
    assert info.value.report is not None
    assert not info.value.report.vector_sum_ok


# --- Decomposition ---------------------------------------------------------------
@pytest.mark.parametrize(
    "e, major, minor",
    [
        ((1, (0, 0, 0.5)), (0.75, (0, 0, 0.75)), (0.25, (0, 0, -0.25))),
        ((1, (0, 0, 1)), (1, (0, 0, 1)), (0, (0, 0, 0))),
        ((2, (0, 0, 0)), (1, (0, 0, 1)), (1, (0, 0, -1))),
    ],
)
def test_decompose_rank1(e, major, minor):
    d = bc.decompose_rank1(element(*e))
    assert d.major.a == pytest.approx(major[0])
    assert_allclose(d.major.v.as_tuple(), major[1], atol=1e-15)
    assert d.minor.a == pytest.approx(minor[0])
    assert_allclose(d.minor.v.as_tuple(), minor[1], atol=1e-15)
    assert sum(d.eigen_weights) == pytest.approx(1.0)


def test_decompose_rank1_errors():
    with pytest.raises(ZeroElement):
        bc.decompose_rank1(element(0, (0, 0, 0)))
    with pytest.raises(NotPositive):
        bc.decompose_rank1(element(1, (0, 0, 2)))


def test_decomposition_parts_are_rank1_and_recombine(rng):
    for _ in range(200):
        e = random_rank2_element(rng)
        d = bc.decompose_rank1(e)
        for part in (d.major, d.minor):
            assert bc.validate_element(part).rank == Rank.RANK1
        total = bc.element_to_matrix(d.major) + bc.element_to_matrix(d.minor)
        assert total.allclose(bc.element_to_matrix(e), atol=1e-12)


def test_decompose_set_keeps_distribution(rng):
    s = PovmSet(elements=(element(1, (0, 0, 0.5)), element(1, (0, 0, -0.5))))
    split = bc.decompose_set(s)
    assert len(split) == 4
    assert bc.validate_set(split).valid
    st = random_state(rng)
    p = bc.outcome_distribution(s, st)
    q = bc.outcome_distribution(split, st)
    assert p[0] == pytest.approx(q[0] + q[1], abs=1e-12)
    assert p[1] == pytest.approx(q[2] + q[3], abs=1e-12)


def test_decompose_set_drops_zero_elements(von_neumann_z):
    s = PovmSet(elements=von_neumann_z.elements + (element(0, (0, 0, 0)),))
    assert bc.decompose_set(s) == von_neumann_z


# --- Common measurements -----------------------------------------------------------
def test_trine_set_geometry(trine):
    expected = [(0, 0, 2 / 3), (S3 * 2 / 3, 0, -1 / 3), (-S3 * 2 / 3, 0, -1 / 3)]
    for e, v in zip(trine.elements, expected):
        assert e.a == pytest.approx(2 / 3)
        assert_allclose(e.v.as_tuple(), v, atol=1e-15)


def test_von_neumann_set_normalizes_axis():
    s = bc.von_neumann_set(Vec3.of((2, 0, 0)))
    assert_allclose(s[0].v.as_tuple(), (1, 0, 0))
    assert bc.validate_set(s).valid


def test_tr_product_matches_bloch_form(rng):
    for _ in range(200):
        e, s = random_valid_element(rng), random_state(rng)
        assert bc.raw_outcome_probability(e, s) == pytest.approx(bc.tr_product(e, s), abs=1e-12)
