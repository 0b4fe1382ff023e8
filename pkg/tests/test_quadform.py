import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from isodil.matrix2 import GateError, IntMatrix2, is_rotational
from isodil.quadform import (
    QuadraticForm,
    check_invariance,
    dual_form,
    ellipse_geometry,
    ellipse_points,
    invariant_form,
    lattice_transform,
    proportional,
    rationalize_form,
)

from conftest import EXAMPLE2, QUARTER_TURN, QUINCUNX
from oracles import exact_invariant_form

REFERENCE_W = [[1, 0.5], [0.5, 2]]
entries = st.integers(-12, 12)
rotational = st.builds(IntMatrix2, entries, entries, entries, entries).filter(is_rotational)


def test_form_must_be_positive_definite():
    with pytest.raises(ValueError, match="positive definite"):
        QuadraticForm(1, 2, 1)


def test_form_evaluation():
    W = QuadraticForm(1, 0.5, 2)
    assert W([1.0, 1.0]) == pytest.approx(4.0)  # x^2 + xy + 2y^2
    assert np.allclose(W.inverse().matrix @ W.matrix, np.eye(2))


@pytest.mark.parametrize("A", [QUINCUNX, QUARTER_TURN])
def test_invariant_form_circle(A):
    assert np.allclose(invariant_form(A).matrix, np.eye(2), atol=1e-12)
    assert np.allclose(dual_form(A).matrix, np.eye(2), atol=1e-12)


def test_invariant_form_example2():
    W = invariant_form(EXAMPLE2)
    assert proportional(W, REFERENCE_W)
    assert check_invariance(EXAMPLE2, W) <= 1e-10
    assert proportional(dual_form(EXAMPLE2), [[2, -0.5], [-0.5, 1]])


def test_gates():
    for op in (invariant_form, dual_form, lattice_transform):
        with pytest.raises(GateError):
            op(IntMatrix2(2, 1, 1, 1))


def test_check_invariance_examples():
    assert check_invariance(QUINCUNX, QuadraticForm(1, 0, 1)) == 0
    half = Fraction(1, 2)
    exact = check_invariance(EXAMPLE2, [[Fraction(1), half], [half, Fraction(2)]])
    assert exact == 0 and isinstance(exact, Fraction)
    assert check_invariance(EXAMPLE2, QuadraticForm(1, 0, 1)) > 0.1


def test_exact_invariance_product_example2():
    # A^T W A = [[2, 1], [1, 4]] = 2 W for W = [[1, 1/2], [1/2, 2]]
    A = np.array(EXAMPLE2.rows, dtype=object)
    W = np.array([[Fraction(1), Fraction(1, 2)], [Fraction(1, 2), Fraction(2)]], dtype=object)
    assert (A.T.dot(W).dot(A) == np.array([[2, 1], [1, 4]], dtype=object)).all()


def test_proportional():
    assert proportional([[2, 1], [1, 4]], REFERENCE_W)
    assert not proportional([[2, 1], [1, 4.1]], REFERENCE_W)


def test_rationalize_examples():
    V = rationalize_form(QuadraticForm(3.7, 1.85, 7.4), 10)
    assert V.tolist() == [[2, 1], [1, 4]]
    assert rationalize_form(QuadraticForm(1, 0, 1), 10).tolist() == [[1, 0], [0, 1]]
    assert rationalize_form(QuadraticForm(1, math.pi / 10, 1), 10) is None


def test_rationalize_needs_positive_bound():
    with pytest.raises(ValueError):
        rationalize_form(QuadraticForm(1, 0, 1), 0)


def test_population_invariance_and_integer_forms(population):
    for A in population:
        W, D = invariant_form(A), dual_form(A)
        assert check_invariance(A, W) <= 1e-10
        Qsq = D.matrix
        Af = A.to_array()
        assert np.max(np.abs(Af @ Qsq @ Af.T - A.det * Qsq)) / np.max(np.abs(Qsq)) <= 1e-10
        V = rationalize_form(W, 64)
        assert V is not None, A
        # exact check in Python integers
        rows = [[int(v) for v in r] for r in V]
        assert check_invariance(A, rows) == 0
        assert isinstance(check_invariance(A, rows), Fraction)
        oracle = exact_invariant_form(A)
        assert proportional(rows, oracle)


@given(rotational)
def test_integer_form_is_reduced_oracle(A):
    V = rationalize_form(invariant_form(A), 64)
    oracle = np.array(exact_invariant_form(A))
    g = math.gcd(*(int(v) for v in oracle.ravel()))
    assert V.tolist() == (oracle // g).tolist()


def test_ellipse_geometry_circle():
    g = ellipse_geometry(QuadraticForm(1, 0, 1), 1)
    assert (g.semi_major, g.semi_minor, g.orientation) == (1.0, 1.0, 0.0)
    assert g.is_circle


def test_ellipse_geometry_axis_aligned():
    g = ellipse_geometry(QuadraticForm(1, 0, 4), 4)
    assert g.semi_major == pytest.approx(2)
    assert g.semi_minor == pytest.approx(1)
    assert g.orientation == pytest.approx(0)


def test_ellipse_geometry_reference_form():
    g = ellipse_geometry(QuadraticForm(1, 0.5, 2), 1)
    lam = sorted([(3 - math.sqrt(2)) / 2, (3 + math.sqrt(2)) / 2])
    # substitution check of the eigenvalues
    for l in lam:
        assert (1 - l) * (2 - l) - 0.25 == pytest.approx(0, abs=1e-14)
    assert g.semi_major == pytest.approx(math.sqrt(1 / lam[0]), rel=1e-14)
    assert g.semi_minor == pytest.approx(math.sqrt(1 / lam[1]), rel=1e-14)
    direction = np.array([math.cos(g.orientation), math.sin(g.orientation)])
    W = np.array(REFERENCE_W)
    assert np.allclose(W @ direction, lam[0] * direction, atol=1e-14)


def test_ellipse_level_must_be_positive():
    with pytest.raises(ValueError):
        ellipse_geometry(QuadraticForm(1, 0, 1), 0)


def _axis_gap(a, b):
    gap = (a - b) % math.pi
    return min(gap, math.pi - gap)


def test_orientation_orthogonality(population):
    for A in population:
        W, D = invariant_form(A), dual_form(A)
        gw, gd = ellipse_geometry(W, 1), ellipse_geometry(D, 1)
        if gw.is_circle:
            continue
        assert _axis_gap(gd.orientation, gw.orientation + math.pi / 2) <= 1e-10


def test_pointwise_shape_invariance(population):
    for A in population:
        W = invariant_form(A)
        pts = ellipse_points(W, 1.0, 32)
        assert np.max(np.abs(W(pts) - 1.0)) <= 1e-12
        images = pts @ A.to_array().T
        assert np.max(np.abs(W(images) - A.det)) <= 1e-10


@pytest.mark.parametrize("A", [QUINCUNX, QUARTER_TURN])
def test_lattice_transform_identity(A):
    residual, basis = lattice_transform(A)
    assert np.allclose(basis, np.eye(2), atol=1e-15)
    assert residual == 0


def test_lattice_transform_example2():
    residual, basis = lattice_transform(EXAMPLE2)
    assert residual <= 1e-12
    W = invariant_form(EXAMPLE2)
    # the change of variables x = Q x' turns W into |x'|^2
    xs = np.random.default_rng(1).normal(size=(50, 2))
    assert np.allclose(W(xs @ basis.T), np.sum(xs ** 2, axis=1), atol=1e-12)
