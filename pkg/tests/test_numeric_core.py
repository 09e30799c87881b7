"""Test the numeric_core module."""

from typing import Any

import numpy as np
import pytest
import sympy as sp

from mvlab.numeric_core import (
    BinaryForm,
    as_matrix,
    binary_form_roots,
    cross_matrix,
    det,
    divide,
    exact_scalar,
    exact_sqrt,
    factor_degrees,
    float_scalar,
    inverse,
    is_exact,
    is_proportional,
    linear_combination,
    matmul,
    null_space,
    pencil_determinant,
    quartic_root_structure,
    rank,
    resultant_eliminate,
    row_basis,
    rq_decompose,
    solve_cubic,
    svd,
    tower_of,
)
from mvlab.utils.custom_errors import DegenerateConfigurationError, RankError
from mvlab.utils.enums import Modes, Towers


class TestScalars:
    """Tests the conversion of scalars between the towers."""

    @pytest.mark.parametrize(
        "value, expected",
        [
            (3, sp.Integer(3)),
            ("2/6", sp.Rational(1, 3)),
            (" -5/4 ", sp.Rational(-5, 4)),
            (0.1, sp.Rational(1, 10)),
            ({"re": "1/2", "im": -3}, sp.Rational(1, 2) - 3 * sp.I),
            ({"im": 1}, sp.I),
            (1 + 2j, 1 + 2 * sp.I),
            (sp.Rational(2, 3), sp.Rational(2, 3)),
        ],
    )
    def test_exact_scalar(self, value: Any, expected: sp.Expr) -> None:
        """Numbers, "p/q" strings and {"re", "im"} mappings should become canonical exact scalars."""
        assert exact_scalar(value) == expected

    @pytest.mark.parametrize(
        "value, error",
        [
            ("abc", ValueError),
            ({"re": 1, "imag": 2}, ValueError),
            (float("nan"), ValueError),
            (sp.sqrt(2), ValueError),
            (True, TypeError),
            (None, TypeError),
        ],
    )
    def test_exact_scalar_error(self, value: Any, error: type) -> None:
        """Values outside the Gaussian rationals should be rejected."""
        with pytest.raises(error):
            exact_scalar(value)

    @pytest.mark.parametrize(
        "value, expected",
        [
            ("1/4", 0.25),
            ({"re": 1, "im": 0}, 1.0),
            ({"re": 0, "im": 2}, 2j),
            (sp.Rational(3, 2), 1.5),
        ],
    )
    def test_float_scalar(self, value: Any, expected: Any) -> None:
        """Scalars should be converted to python floats, or complex numbers when they have an imaginary part."""
        assert float_scalar(value) == expected

    @pytest.mark.parametrize(
        "value, tower",
        [
            (sp.Rational(1, 3), Towers.Rational),
            (2 + sp.I, Towers.Gaussian),
            (0.5, Towers.Float),
            (sp.ImmutableMatrix([[1, sp.I]]), Towers.Gaussian),
            (np.eye(2), Towers.Float),
        ],
    )
    def test_tower_of(self, value: Any, tower: Towers) -> None:
        """The tower should be the smallest one holding the value."""
        assert tower_of(value) == tower

    @pytest.mark.parametrize(
        "value, expected",
        [
            (sp.Rational(9, 4), sp.Rational(3, 2)),
            (-4, 2 * sp.I),
            (2 * sp.I, 1 + sp.I),
            (3 + 4 * sp.I, 2 + sp.I),
            (2, None),
            (1 + sp.I, None),
        ],
    )
    def test_exact_sqrt(self, value: Any, expected: Any) -> None:
        """A square root should be found exactly when it is a Gaussian rational."""
        root = exact_sqrt(value)
        assert root == expected
        if root is not None:
            assert sp.expand(root**2 - value) == 0

    def test_divide(self) -> None:
        """Exact division should give a canonical Gaussian rational."""
        assert divide(1, 1 + sp.I) == sp.Rational(1, 2) - sp.I / 2
        with pytest.raises(ZeroDivisionError):
            divide(1, sp.Integer(0))


class TestMatrices:
    """Tests matrix conversion and exact and float linear algebra."""

    def test_as_matrix_exact(self) -> None:
        """Integer data should stay exact, and a flat list should become a column."""
        matrix = as_matrix([1, "1/2", {"re": 0, "im": 1}])
        assert is_exact(matrix)
        assert matrix.shape == (3, 1)
        assert list(matrix) == [1, sp.Rational(1, 2), sp.I]

    def test_as_matrix_float(self) -> None:
        """Float data, or the float mode, should give a numpy array."""
        assert isinstance(as_matrix([[1.0, 2], [3, 4]]), np.ndarray)
        matrix = as_matrix([[1, 2], [3, 4]], Modes.Float)
        assert isinstance(matrix, np.ndarray)
        assert matrix.dtype == float

    def test_as_matrix_ragged(self) -> None:
        """Rows of different lengths should be rejected."""
        with pytest.raises(ValueError, match="All rows of a matrix must have the same length"):
            as_matrix([[1, 2], [3]])

    @pytest.mark.parametrize(
        "rows, expected",
        [
            ([[1, 2, 3], [2, 4, 6], [1, 0, 1]], 2),
            ([[1, 0], [0, 1]], 2),
            ([[0, 0], [0, 0]], 0),
            ([[1, sp.I], [sp.I, -1]], 1),
        ],
    )
    def test_exact_rank(self, rows: list, expected: int) -> None:
        """Exact rank should need no tolerance."""
        assert rank(as_matrix(rows)) == expected

    def test_float_rank_needs_tolerance(self) -> None:
        """A float rank without a tolerance is an error."""
        with pytest.raises(ValueError, match="A positive tolerance is required"):
            rank(np.eye(3))
        assert rank(np.diag([1.0, 1e-14, 1.0]), 1e-10) == 2

    def test_null_space(self) -> None:
        """Every kernel vector should be annihilated exactly."""
        matrix = as_matrix([[1, 2, 3, 4], [2, 3, 4, 5]])
        basis = null_space(matrix)
        assert len(basis) == 2
        for vector in basis:
            assert all(value == 0 for value in matmul(matrix, vector))

    def test_row_basis(self) -> None:
        """The row basis should span the row space."""
        basis = row_basis(as_matrix([[1, 2, 3], [2, 4, 6], [0, 1, 1]]))
        assert len(basis) == 2
        assert all(row.shape == (1, 3) for row in basis)

    def test_inverse(self) -> None:
        """The exact inverse should be exact, and a singular matrix has none."""
        matrix = as_matrix([[2, 1], [1, 1]])
        assert matmul(matrix, inverse(matrix)) == sp.eye(2)
        with pytest.raises(RankError):
            inverse(as_matrix([[1, 2], [2, 4]]))

    def test_cross_matrix(self) -> None:
        """[v]x w should be the cross product of v and w."""
        v, w = as_matrix([1, 2, 3]), as_matrix([4, 5, 6])
        assert list(matmul(cross_matrix(v), w)) == [-3, 6, -3]

    @pytest.mark.parametrize(
        "first, second, expected",
        [
            ([1, 2, 3], [2, 4, 6], True),
            ([1, 2, 3], [sp.I, 2 * sp.I, 3 * sp.I], True),
            ([1, 2, 3], [1, 2, 4], False),
            ([1.0, 2.0, 3.0], [-2.0, -4.0, -6.0 + 1e-12], True),
            ([1.0, 2.0, 3.0], [1.0, 2.0, 3.1], False),
        ],
    )
    def test_is_proportional(self, first: list, second: list, expected: bool) -> None:
        """Proportionality should be exact for exact data and relative for floats."""
        assert is_proportional(as_matrix(first), as_matrix(second)) == expected

    def test_linear_combination(self) -> None:
        """Exact coefficients on exact matrices should stay exact."""
        swap = sp.ImmutableMatrix([[0, 1], [1, 0]])
        combination = linear_combination([2, -sp.I], [sp.ImmutableMatrix(sp.eye(2)), swap])
        assert combination == sp.ImmutableMatrix([[2, -sp.I], [-sp.I, 2]])

    def test_svd(self) -> None:
        """The singular values should be decreasing and reconstruct the matrix."""
        matrix = np.array([[3.0, 0.0], [4.0, 5.0]])
        U, s, V = svd(matrix)
        assert s[0] >= s[1]
        np.testing.assert_allclose(U @ np.diag(s) @ V.T, matrix, atol=1e-12)

    def test_svd_non_finite(self) -> None:
        """Non-finite entries should be rejected."""
        with pytest.raises(ValueError, match="finite"):
            svd(np.array([[np.inf, 0.0], [0.0, 1.0]]))

    def test_rq_decompose(self) -> None:
        """K should be upper triangular with positive diagonal and K[2, 2] = 1, reconstructing the matrix."""
        matrix = np.array([[2.0, 1.0, 3.0], [0.0, -3.0, 1.0], [1.0, 2.0, 4.0]])
        result = rq_decompose(matrix)
        assert np.allclose(np.tril(result.K, -1), 0)
        assert np.all(np.diag(result.K) > 0)
        assert result.K[2, 2] == pytest.approx(1.0)
        np.testing.assert_allclose(result.R @ result.R.T, np.eye(3), atol=1e-12)
        np.testing.assert_allclose(result.scale * result.K @ result.R, matrix, atol=1e-12)
        assert result.reflection == (np.linalg.det(result.R) < 0)

    def test_rq_decompose_singular(self) -> None:
        """A singular matrix has no RQ decomposition with invertible K."""
        with pytest.raises(RankError):
            rq_decompose(np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 1.0]]))


class TestBinaryForms:
    """Tests pencil determinants and the roots of binary forms."""

    def test_pencil_determinant_exact(self) -> None:
        """det(λ diag(1, 1, 1, 0) + μ diag(0, 1, 1, 1)) should be λ μ (λ + μ)^2."""
        form = pencil_determinant(sp.ImmutableMatrix(sp.diag(1, 1, 1, 0)), sp.ImmutableMatrix(sp.diag(0, 1, 1, 1)))
        assert form.coefficients == (0, 1, 2, 1, 0)

    def test_pencil_determinant_float(self) -> None:
        """The interpolated determinant should match the exact one."""
        form = pencil_determinant(np.diag([1.0, 1.0, 1.0, 0.0]), np.diag([0.0, 1.0, 1.0, 1.0]))
        np.testing.assert_allclose(np.array(form.coefficients, dtype=float), [0, 1, 2, 1, 0], atol=1e-9)

    def test_exact_roots(self) -> None:
        """Roots should be exact with multiplicities, the root at infinity first."""
        roots = quartic_root_structure(BinaryForm((0, 1, 2, 1, 0)))
        assert (roots[0].point, roots[0].multiplicity) == ((1, 0), 1)
        assert {(root.point, root.multiplicity) for root in roots[1:]} == {((0, 1), 1), ((-1, 1), 2)}
        assert all(root.exact for root in roots)

    def test_gaussian_roots(self) -> None:
        """λ^2 + μ^2 should factor over the Gaussian rationals."""
        roots = binary_form_roots(BinaryForm((1, 0, 1)))
        assert {root.value for root in roots} == {sp.I, -sp.I}
        assert all(root.tower == Towers.Gaussian for root in roots)
        assert not any(root.is_real for root in roots)

    def test_float_roots(self) -> None:
        """Float roots should be clustered by multiplicity."""
        roots = binary_form_roots(BinaryForm((1.0, -4.0, 4.0)))
        assert len(roots) == 1
        assert roots[0].multiplicity == 2
        assert roots[0].value == pytest.approx(2.0, abs=1e-6)

    def test_zero_form(self) -> None:
        """The zero form has no isolated roots."""
        with pytest.raises(ValueError, match="The zero form has no isolated roots"):
            binary_form_roots(BinaryForm((0, 0, 0)))

    @pytest.mark.parametrize(
        "coefficients, values",
        [
            ((1, -6, 11, -6), {1, 2, 3}),
            ((0, 1, -3, 2), {1, 2}),
            ((0, 0, 2, -1), {sp.Rational(1, 2)}),
        ],
    )
    def test_solve_cubic(self, coefficients: tuple, values: set) -> None:
        """A cubic should have as many roots as its actual degree."""
        assert {root.value for root in solve_cubic(*coefficients)} == values

    def test_solve_cubic_zero(self) -> None:
        """The zero cubic should be rejected."""
        with pytest.raises(ValueError, match="The cubic has no coefficients that are nonzero"):
            solve_cubic(0, 0, 0, 0)

    def test_quartic_degree(self) -> None:
        """Only forms of degree 4 have a quartic root structure."""
        with pytest.raises(ValueError, match="Expected a binary form of degree 4"):
            quartic_root_structure(BinaryForm((1, 0, 1)))


class TestElimination:
    """Tests resultant elimination and factorization."""

    def test_two_circle_cones(self) -> None:
        """Projecting the two conics of the two-circle cones gives two quadratic factors."""
        polynomial = resultant_eliminate(
            sp.ImmutableMatrix(sp.diag(1, 1, 1, 0)),
            sp.ImmutableMatrix(sp.diag(0, 1, 1, 1)),
            sp.ImmutableMatrix([1, 2, 3, 5]),
        )
        assert polynomial.total_degree() == 4
        assert factor_degrees(polynomial) == [2, 2]

    def test_direction_on_both(self) -> None:
        """A direction lying on both quadrics should be rejected."""
        with pytest.raises(DegenerateConfigurationError):
            resultant_eliminate(
                sp.ImmutableMatrix(sp.diag(1, 1, 1, 0)),
                sp.ImmutableMatrix(sp.diag(0, 1, 1, 1)),
                sp.ImmutableMatrix([0, 1, sp.I, 0]),
            )

    def test_float_input(self) -> None:
        """Elimination is exact only."""
        with pytest.raises(ValueError, match="exact"):
            resultant_eliminate(np.eye(4), np.eye(4), np.ones((4, 1)))

    def test_det(self) -> None:
        """The exact determinant should be canonical."""
        assert det(sp.ImmutableMatrix([[1, sp.I], [sp.I, 1]])) == 2
