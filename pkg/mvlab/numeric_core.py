"""Scalar towers and the small-matrix and polynomial kernel shared by the geometric modules.

Exact matrices are sympy ``ImmutableMatrix`` objects whose entries are canonical rationals or Gaussian rationals
(``a + b*I`` with rational ``a`` and ``b``). Float matrices are numpy arrays, real or complex. Exact linear algebra runs
on sympy's ``DomainMatrix`` over QQ or QQ_I, so the result of every exact operation is canonical and equality is
decidable.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import sympy as sp
from scipy import linalg
from sympy.polys.matrices import DomainMatrix

from mvlab import events
from mvlab.controls import DEFAULT_PROPORTIONAL_TOL, DEFAULT_RANK_TOL, DEFAULT_ROOT_TOL
from mvlab.outputs import Root, RQResult
from mvlab.utils.custom_errors import DegenerateConfigurationError, RankError
from mvlab.utils.enums import Modes, Towers

Matrix = Union[sp.ImmutableMatrix, np.ndarray]

# Relative distance under which two float roots of a binary form are counted as one repeated root
ROOT_CLUSTER_RADIUS = 1e-4


# Scalars
def is_exact_scalar(value) -> bool:
    """Whether a scalar belongs to one of the exact towers."""
    if isinstance(value, (bool, float, complex, np.floating, np.complexfloating)):
        return False
    if isinstance(value, (int, np.integer)):
        return True
    return isinstance(value, sp.Basic) and not value.has(sp.Float)


def exact_scalar(value) -> sp.Expr:
    """Convert a number, a "p/q" string or a {"re", "im"} mapping to a canonical exact scalar.

    Floats are read through their shortest decimal representation, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, dict):
        unknown = set(value) - {"re", "im"}
        if unknown:
            raise ValueError(f"A Gaussian rational is given by the keys 're' and 'im', not {sorted(unknown)}")
        return sp.expand(exact_scalar(value.get("re", 0)) + sp.I * exact_scalar(value.get("im", 0)))
    if isinstance(value, bool):
        raise TypeError("A boolean is not a scalar")
    if isinstance(value, (int, np.integer)):
        return sp.Integer(int(value))
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            raise ValueError(f"{value} has no exact representation")
        return sp.Rational(repr(float(value)))
    if isinstance(value, (complex, np.complexfloating)):
        return sp.expand(exact_scalar(value.real) + sp.I * exact_scalar(value.imag))
    if isinstance(value, str):
        try:
            result = sp.Rational(value.strip())
        except (TypeError, ValueError):
            raise ValueError(f"Cannot read {value!r} as an exact rational") from None
        if not result.is_finite:
            raise ValueError(f"Cannot read {value!r} as an exact rational")
        return result
    if isinstance(value, sp.Basic):
        expression = sp.expand(sp.sympify(value))
        real, imaginary = expression.as_real_imag()
        if not (real.is_Rational and imaginary.is_Rational):
            raise ValueError(f"{value} does not lie in the Gaussian rationals")
        return sp.expand(real + sp.I * imaginary)
    raise TypeError(f"Cannot read a value of type {type(value).__name__} as a scalar")


def float_scalar(value) -> Union[float, complex]:
    """Convert a number, a "p/q" string or a {"re", "im"} mapping to a python float or complex."""
    if isinstance(value, dict):
        return _simplify_complex(complex(float_scalar(value.get("re", 0))) + 1j * float_scalar(value.get("im", 0)))
    if isinstance(value, bool):
        raise TypeError("A boolean is not a scalar")
    if isinstance(value, str):
        return float(exact_scalar(value))
    if isinstance(value, sp.Basic):
        return _simplify_complex(complex(value))
    if isinstance(value, (complex, np.complexfloating)):
        return _simplify_complex(complex(value))
    if isinstance(value, (int, float, np.integer, np.floating)):
        return float(value)
    raise TypeError(f"Cannot read a value of type {type(value).__name__} as a scalar")


def _simplify_complex(value: complex) -> Union[float, complex]:
    if value.imag == 0:
        return value.real
    return value


def tower_of(value) -> Towers:
    """The smallest tower holding a scalar or every entry of a matrix."""
    if isinstance(value, (np.ndarray, sp.MatrixBase)):
        if not is_exact(value):
            return Towers.Float
        return Towers.Gaussian if any(tower_of(entry) == Towers.Gaussian for entry in value) else Towers.Rational
    if not is_exact_scalar(value):
        return Towers.Float
    return Towers.Rational if sp.im(value) == 0 else Towers.Gaussian


def is_zero_scalar(value, tol: Optional[float] = None) -> bool:
    if is_exact_scalar(value):
        return sp.expand(value) == 0
    return abs(value) <= (tol or 0.0)


def divide(numerator, denominator):
    """Divide two scalars, keeping exact quotients in canonical form."""
    if is_exact_scalar(numerator) and is_exact_scalar(denominator):
        if sp.expand(denominator) == 0:
            raise ZeroDivisionError("division by zero")
        norm = sp.expand(denominator * sp.conjugate(denominator))
        return sp.expand(sp.expand(numerator * sp.conjugate(denominator)) / norm)
    return float_scalar(complex(numerator) / complex(denominator))


def exact_sqrt(value) -> Optional[sp.Expr]:
    """Return a square root of an exact scalar within its tower, or None if the root leaves the Gaussian rationals."""
    real, imaginary = sp.expand(value).as_real_imag()
    if imaginary == 0:
        root = sp.sqrt(abs(real))
        if not root.is_Rational:
            return None
        return root if real >= 0 else sp.I * root
    modulus = sp.sqrt(real**2 + imaginary**2)
    if not modulus.is_Rational:
        return None
    x = sp.sqrt((real + modulus) / 2)
    if not x.is_Rational:
        return None
    return sp.expand(x + sp.I * imaginary / (2 * x))


# Matrices
def is_exact(matrix: Matrix) -> bool:
    return isinstance(matrix, sp.MatrixBase)


def as_matrix(data, mode: Optional[Modes] = None) -> Matrix:
    """Convert nested lists, numpy arrays or sympy matrices to a matrix of the requested tower.

    A flat list becomes a column vector. With no mode given, the data stays exact unless it holds floats.

    Parameters
    ----------
    data : list, np.ndarray or sympy matrix
        The entries in row-major order. Exact entries may be integers, "p/q" strings or {"re", "im"} mappings.
    mode : Modes, optional
        The arithmetic mode of the result.

    Returns
    -------
    matrix : sp.ImmutableMatrix or np.ndarray
        A sympy matrix in exact mode, a numpy array in float mode.

    """
    if mode is None:
        mode = Modes.Float if _holds_floats(data) else Modes.Exact
    rows = _rows(data)
    if len({len(row) for row in rows}) != 1:
        raise ValueError("All rows of a matrix must have the same length")
    if mode == Modes.Exact:
        return sp.ImmutableMatrix([[exact_scalar(value) for value in row] for row in rows])
    values = [[float_scalar(value) for value in row] for row in rows]
    dtype = complex if any(isinstance(value, complex) for row in values for value in row) else float
    return np.array(values, dtype=dtype)


def _rows(data) -> list[list]:
    if isinstance(data, sp.MatrixBase):
        return data.tolist()
    if isinstance(data, np.ndarray):
        data = data.tolist()
    data = list(data)
    if not data:
        raise ValueError("A matrix needs at least one entry")
    if all(not isinstance(value, (list, tuple, np.ndarray)) for value in data):
        return [[value] for value in data]
    return [list(row) for row in data]


def _holds_floats(data) -> bool:
    if isinstance(data, sp.MatrixBase):
        return False
    if isinstance(data, np.ndarray):
        return data.dtype.kind in "fc"
    if isinstance(data, (list, tuple)):
        return any(_holds_floats(value) for value in data)
    return isinstance(data, (float, complex, np.floating, np.complexfloating))


def to_float(matrix: Matrix) -> np.ndarray:
    """Evaluate a matrix in double precision, real when no entry has an imaginary part."""
    if not is_exact(matrix):
        return np.asarray(matrix)
    values = np.array([[complex(value) for value in row] for row in matrix.tolist()], dtype=complex)
    if not np.any(values.imag):
        return values.real.copy()
    return values


def unify(*matrices: Matrix) -> list[Matrix]:
    """Bring matrices to a common tower, falling back to floats if any of them is a float matrix."""
    if all(is_exact(matrix) for matrix in matrices):
        return list(matrices)
    return [to_float(matrix) for matrix in matrices]


def canonical(matrix: Matrix) -> Matrix:
    if is_exact(matrix):
        return sp.ImmutableMatrix(matrix.applyfunc(sp.expand))
    return matrix


def matmul(*matrices: Matrix) -> Matrix:
    matrices = unify(*matrices)
    result = matrices[0]
    for matrix in matrices[1:]:
        result = result @ matrix
    return canonical(result)


def linear_combination(coefficients, matrices) -> Matrix:
    """Return the sum of the coefficients times the matrices."""
    if all(is_exact(matrix) for matrix in matrices) and all(is_exact_scalar(c) for c in coefficients):
        result = sp.zeros(*matrices[0].shape)
        for coefficient, matrix in zip(coefficients, matrices):
            result += coefficient * matrix
        return canonical(result)
    result = sum(complex(c) * to_float(matrix) for c, matrix in zip(coefficients, matrices))
    return result.real.copy() if not np.any(result.imag) else result


def identity(size: int, like: Optional[Matrix] = None) -> Matrix:
    if like is None or is_exact(like):
        return sp.ImmutableMatrix(sp.eye(size))
    return np.eye(size)


def zeros(rows: int, columns: int, like: Optional[Matrix] = None) -> Matrix:
    if like is None or is_exact(like):
        return sp.ImmutableMatrix(sp.zeros(rows, columns))
    return np.zeros((rows, columns))


def from_rows(rows: list[list], like: Matrix) -> Matrix:
    """Build a matrix from already converted entries in the tower of another matrix."""
    if is_exact(like):
        return canonical(sp.ImmutableMatrix(rows))
    values = np.array([[complex(value) for value in row] for row in rows], dtype=complex)
    return values.real.copy() if not np.any(values.imag) else values


def hstack(*blocks: Matrix) -> Matrix:
    blocks = unify(*blocks)
    if is_exact(blocks[0]):
        return sp.ImmutableMatrix(sp.Matrix.hstack(*blocks))
    return np.hstack(blocks)


def vstack(*blocks: Matrix) -> Matrix:
    blocks = unify(*blocks)
    if is_exact(blocks[0]):
        return sp.ImmutableMatrix(sp.Matrix.vstack(*blocks))
    return np.vstack(blocks)


def select_rows(matrix: Matrix, rows) -> Matrix:
    rows = list(rows)
    if is_exact(matrix):
        return matrix.extract(rows, list(range(matrix.cols)))
    return matrix[rows, :]


def select_columns(matrix: Matrix, columns) -> Matrix:
    columns = list(columns)
    if is_exact(matrix):
        return matrix.extract(list(range(matrix.rows)), columns)
    return matrix[:, columns]


def flatten(matrix: Matrix) -> list:
    """The entries of a matrix in row-major order."""
    if is_exact(matrix):
        return list(matrix)
    return np.asarray(matrix).reshape(-1).tolist()


def reshape(matrix: Matrix, rows: int, columns: int) -> Matrix:
    return matrix.reshape(rows, columns)


def is_zero(matrix: Matrix, tol: Optional[float] = None) -> bool:
    """Whether every entry vanishes, exactly or below the absolute tolerance."""
    if is_exact(matrix):
        return all(sp.expand(value) == 0 for value in matrix)
    return bool(np.max(np.abs(matrix)) <= (tol or 0.0))


def is_symmetric(matrix: Matrix, tol: float = 1e-12) -> bool:
    if is_exact(matrix):
        return is_zero(canonical(matrix - matrix.T))
    scale = np.max(np.abs(matrix))
    return bool(np.max(np.abs(matrix - matrix.T)) <= tol * max(scale, 1.0))


def pivot_index(vector: Matrix) -> int:
    """The index of the entry of largest modulus, the first one on ties."""
    magnitudes = [abs(complex(value)) for value in flatten(vector)]
    return int(np.argmax(magnitudes))


def cross_matrix(vector: Matrix) -> Matrix:
    """The skew matrix [v]x with [v]x w equal to the cross product of v and w."""
    a, b, c = flatten(vector)
    return from_rows([[0, -c, b], [c, 0, -a], [-b, a, 0]], vector)


def is_proportional(first: Matrix, second: Matrix, tol: Optional[float] = None) -> bool:
    """Whether two nonzero matrices of the same shape are scalar multiples of each other.

    Exact matrices are compared through their 2x2 minors. Float matrices pass when the smaller singular value of
    the two stacked rows is below the relative tolerance.
    """
    first, second = unify(first, second)
    a, b = flatten(first), flatten(second)
    if len(a) != len(b):
        return False
    if is_exact(first):
        nonzero = [k for k, value in enumerate(a) if sp.expand(value) != 0]
        if not nonzero or all(sp.expand(value) == 0 for value in b):
            return False
        k = nonzero[0]
        return all(sp.expand(b[k] * a[i] - a[k] * b[i]) == 0 for i in range(len(a)))
    if tol is None:
        tol = DEFAULT_PROPORTIONAL_TOL
    stacked = np.array([a, b])
    if np.linalg.norm(stacked[0]) == 0 or np.linalg.norm(stacked[1]) == 0:
        return False
    singular_values = np.linalg.svd(stacked, compute_uv=False)
    return bool(singular_values[1] <= tol * singular_values[0])


# Linear algebra
def _domain_matrix(matrix: sp.MatrixBase) -> DomainMatrix:
    return DomainMatrix.from_Matrix(sp.Matrix(matrix)).to_field()


def rank(matrix: Matrix, tol: Optional[float] = None) -> int:
    """Compute the rank of a matrix.

    Parameters
    ----------
    matrix : sp.ImmutableMatrix or np.ndarray
        The matrix.
    tol : float, optional
        The relative tolerance for float matrices: singular values above ``tol`` times the largest one are counted.
        Exact matrices need no tolerance.

    Returns
    -------
    rank : int
        The rank of the matrix.

    Raises
    ------
    ValueError
        If a float matrix is given without a positive tolerance.

    """
    if is_exact(matrix):
        if matrix.rows == 0 or matrix.cols == 0:
            return 0
        return _domain_matrix(matrix).rank()
    if tol is None or tol <= 0:
        raise ValueError("A positive tolerance is required to compute the rank of a float matrix")
    singular_values = np.linalg.svd(np.asarray(matrix), compute_uv=False)
    if singular_values.size == 0 or singular_values[0] == 0:
        return 0
    return int(np.sum(singular_values > tol * singular_values[0]))


def null_space(matrix: Matrix, tol: Optional[float] = None) -> list[Matrix]:
    """Return a basis of the right kernel as a list of column vectors.

    Exact matrices give an exact basis. Float matrices give the right singular vectors beyond the numerical rank, using
    ``tol`` or the default rank tolerance.
    """
    if is_exact(matrix):
        basis = _domain_matrix(matrix).nullspace().to_Matrix()
        return [canonical(sp.ImmutableMatrix(basis.row(i)).T) for i in range(basis.rows)]
    if tol is None:
        tol = DEFAULT_RANK_TOL
    values = np.asarray(matrix)
    numerical_rank = rank(values, tol)
    _, _, vh = np.linalg.svd(values)
    v = vh.conj().T
    return [v[:, [k]] for k in range(numerical_rank, values.shape[1])]


def row_basis(matrix: Matrix, tol: Optional[float] = None) -> list[Matrix]:
    """Return a basis of the row space as a list of row vectors."""
    if is_exact(matrix):
        reduced, pivots = _domain_matrix(matrix).rref()
        reduced = reduced.to_Matrix()
        return [canonical(sp.ImmutableMatrix(reduced.row(i))) for i in range(len(pivots))]
    if tol is None:
        tol = DEFAULT_RANK_TOL
    values = np.asarray(matrix)
    numerical_rank = rank(values, tol)
    _, _, vh = np.linalg.svd(values)
    return [vh[[k], :] for k in range(numerical_rank)]


def det(matrix: Matrix):
    if is_exact(matrix):
        domain_matrix = _domain_matrix(matrix)
        return sp.expand(domain_matrix.domain.to_sympy(domain_matrix.det()))
    return float_scalar(np.linalg.det(matrix))


def inverse(matrix: Matrix, tol: Optional[float] = None) -> Matrix:
    if is_exact(matrix):
        if det(matrix) == 0:
            raise RankError("The matrix is singular and has no inverse")
        return canonical(sp.ImmutableMatrix(_domain_matrix(matrix).inv().to_Matrix()))
    if rank(matrix, tol or DEFAULT_RANK_TOL) < matrix.shape[0]:
        raise RankError("The matrix is numerically singular and has no inverse")
    return np.linalg.inv(matrix)


def svd(matrix: Matrix) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return U, the decreasing singular values and V with the matrix equal to U diag(s) V^H.

    Raises
    ------
    ValueError
        If the matrix has non-finite entries.

    """
    values = to_float(matrix)
    if not np.all(np.isfinite(values)):
        raise ValueError("The singular value decomposition needs finite entries")
    u, s, vh = np.linalg.svd(values)
    return u, s, vh.conj().T


def rq_decompose(matrix: Matrix) -> RQResult:
    """Factor an invertible 3x3 matrix as a scale times an upper triangular K times an orthogonal R.

    K has a positive diagonal and K[2, 2] = 1. The sign flips that make the diagonal positive are absorbed into R, so
    R may be a reflection; ``reflection`` records det R = -1.

    Parameters
    ----------
    matrix : sp.ImmutableMatrix or np.ndarray
        A real invertible 3x3 matrix.

    Returns
    -------
    result : RQResult
        K, R, the scale with ``matrix = scale * K @ R`` and the reflection flag.

    Raises
    ------
    RankError
        If the matrix is singular.

    """
    values = to_float(matrix)
    if values.shape != (3, 3):
        raise ValueError(f"The RQ decomposition needs a 3x3 matrix, not {values.shape[0]}x{values.shape[1]}")
    if np.iscomplexobj(values):
        raise ValueError("The RQ decomposition needs a real matrix")
    if rank(values, DEFAULT_RANK_TOL) < 3:
        raise RankError("The RQ decomposition needs an invertible matrix")

    K, R = linalg.rq(values)
    signs = np.sign(np.diag(K))
    signs[signs == 0] = 1.0
    flips = np.diag(signs)
    K = K @ flips
    R = flips @ R
    scale = K[2, 2]
    K = K / scale

    return RQResult(K=K, R=R, scale=float(scale), reflection=bool(np.linalg.det(R) < 0))


# Binary forms
@dataclass(frozen=True)
class BinaryForm:
    """A homogeneous polynomial in (λ, μ) with coefficients c_0, ..., c_d of λ^d, λ^(d-1) μ, ..., μ^d."""

    coefficients: tuple

    def __post_init__(self):
        if len(self.coefficients) == 0:
            raise ValueError("A binary form needs at least one coefficient")
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def exact(self) -> bool:
        return all(is_exact_scalar(coefficient) for coefficient in self.coefficients)

    def is_zero(self, tol: Optional[float] = None) -> bool:
        return all(is_zero_scalar(coefficient, tol) for coefficient in self.coefficients)

    def __call__(self, lam, mu):
        value = sum(c * lam ** (self.degree - k) * mu**k for k, c in enumerate(self.coefficients))
        return sp.expand(value) if self.exact and is_exact_scalar(lam) and is_exact_scalar(mu) else value


def pencil_determinant(first: Matrix, second: Matrix) -> BinaryForm:
    """The binary form det(λ first + μ second) of a pencil of square matrices.

    Exact pencils are expanded symbolically. Float pencils are interpolated from determinants at d + 1 sample points.
    """
    first, second = unify(first, second)
    size = first.shape[0]
    if is_exact(first):
        lam, mu = sp.symbols("lambda mu")
        member = sp.Matrix(lam * first + mu * second)
        polynomial = sp.Poly(sp.expand(member.det(method="berkowitz")), lam, mu)
        return BinaryForm(
            tuple(sp.expand(polynomial.coeff_monomial(lam ** (size - k) * mu**k)) for k in range(size + 1))
        )

    samples = np.arange(size + 1, dtype=float)
    values = np.array([np.linalg.det(first + s * second) for s in samples])
    vandermonde = np.vander(samples, size + 1, increasing=True)
    coefficients = np.linalg.solve(vandermonde, values)
    return BinaryForm(tuple(float_scalar(c) for c in coefficients.tolist()))


def binary_form_roots(form: BinaryForm, tol: Optional[float] = None) -> list[Root]:
    """Find the roots (λ:μ) of a nonzero binary form with their multiplicities.

    Exact forms are factored over the Gaussian rationals; linear factors give exact roots and any remaining
    irreducible factor falls back to float roots, reported with a Message event. The root at infinity (1:0) comes first.

    Parameters
    ----------
    form : BinaryForm
        The binary form.
    tol : float, optional
        The relative tolerance below which float coefficients count as zero.

    Returns
    -------
    roots : list[Root]
        The roots, with multiplicities summing to the degree of the form.

    Raises
    ------
    ValueError
        If the form is identically zero.

    """
    if form.is_zero():
        raise ValueError("The zero form has no isolated roots")
    coefficients = form.coefficients
    if form.exact:
        leading_zeros = next(k for k, c in enumerate(coefficients) if sp.expand(c) != 0)
    else:
        scale = max(abs(complex(c)) for c in coefficients)
        threshold = (tol or DEFAULT_ROOT_TOL) * scale
        leading_zeros = next(k for k, c in enumerate(coefficients) if abs(complex(c)) > threshold)

    roots = []
    if leading_zeros:
        one, zero = (sp.Integer(1), sp.Integer(0)) if form.exact else (1.0, 0.0)
        tower = Towers.Rational if form.exact else Towers.Float
        roots.append(Root(point=(one, zero), value=None, multiplicity=leading_zeros, tower=tower))

    affine = coefficients[leading_zeros:]
    if len(affine) > 1:
        roots.extend(_exact_affine_roots(affine) if form.exact else _float_affine_roots(affine))
    return roots


def _exact_affine_roots(coefficients) -> list[Root]:
    t = sp.Symbol("t")
    degree = len(coefficients) - 1
    polynomial = sp.expand(sum(c * t ** (degree - k) for k, c in enumerate(coefficients)))
    _, factors = sp.factor_list(polynomial, t, gaussian=True)

    roots = []
    for factor, multiplicity in factors:
        factor = sp.Poly(factor, t)
        if factor.degree() < 1:
            continue
        if factor.degree() == 1:
            a, b = factor.all_coeffs()
            value = divide(-b, a)
            roots.append(Root(point=(value, sp.Integer(1)), value=value, multiplicity=multiplicity,
                              tower=tower_of(value)))
        else:
            events.notify(
                events.EventTypes.Message,
                f"A factor of degree {factor.degree()} has no Gaussian-rational roots, using floating point roots",
            )
            for value in np.roots([complex(c) for c in factor.all_coeffs()]):
                value = _clean_float_root(value)
                roots.append(Root(point=(value, 1.0), value=value, multiplicity=multiplicity, tower=Towers.Float))
    return roots


def _float_affine_roots(coefficients) -> list[Root]:
    values = np.roots([complex(c) for c in coefficients])
    clusters: list[list[complex]] = []
    for value in sorted(values, key=lambda v: (v.real, v.imag)):
        for cluster in clusters:
            if abs(cluster[0] - value) <= ROOT_CLUSTER_RADIUS * max(1.0, abs(value)):
                cluster.append(value)
                break
        else:
            clusters.append([value])

    roots = []
    for cluster in clusters:
        value = _clean_float_root(complex(np.mean(cluster)))
        roots.append(Root(point=(value, 1.0), value=value, multiplicity=len(cluster), tower=Towers.Float))
    return roots


def _clean_float_root(value: complex) -> Union[float, complex]:
    value = complex(value)
    if abs(value.imag) <= 1e-12 * max(1.0, abs(value)):
        return value.real
    return value


def solve_cubic(c3, c2, c1, c0, tol: Optional[float] = None) -> list[Root]:
    """Solve c3 x^3 + c2 x^2 + c1 x + c0 = 0, returning as many roots as the actual degree."""
    form = BinaryForm((c3, c2, c1, c0))
    if form.is_zero():
        raise ValueError("The cubic has no coefficients that are nonzero")
    return [root for root in binary_form_roots(form, tol) if not root.at_infinity]


def quartic_root_structure(form: BinaryForm, tol: Optional[float] = None) -> list[Root]:
    """The roots (λ:μ) of a binary quartic with multiplicities summing to four."""
    if form.degree != 4:
        raise ValueError(f"Expected a binary form of degree 4, not {form.degree}")
    return binary_form_roots(form, tol)


# Elimination
def resultant_eliminate(first: Matrix, second: Matrix, direction: Matrix) -> sp.Poly:
    """Project the intersection of two quadrics in P^3 from a point, returning a plane quartic.

    Coordinates are changed so the direction becomes the last basis vector, and that coordinate is eliminated with a
    resultant. The result vanishes on the image of the intersection curve.

    Raises
    ------
    DegenerateConfigurationError
        If the direction lies on both quadrics, or the resultant vanishes identically.

    """
    if not (is_exact(first) and is_exact(second) and is_exact(direction)):
        raise ValueError("Resultant elimination needs exact quadrics and direction")
    direction = as_matrix(flatten(direction))
    if is_zero(canonical(direction.T * first * direction)) and is_zero(canonical(direction.T * second * direction)):
        raise DegenerateConfigurationError("The projection centre lies on both quadrics")

    pivot = pivot_index(direction)
    columns = [sp.eye(4).col(i) for i in range(4) if i != pivot] + [direction]
    change = sp.Matrix.hstack(*columns)
    y = sp.symbols("y0:4")
    coordinates = change * sp.Matrix(y)
    f = sp.expand((coordinates.T * first * coordinates)[0])
    g = sp.expand((coordinates.T * second * coordinates)[0])

    result = sp.expand(sp.resultant(f, g, y[3]))
    if result == 0:
        raise DegenerateConfigurationError("The resultant vanishes identically, so the quadrics share a component")
    return sp.Poly(result, *y[:3])


def factor_degrees(polynomial: sp.Poly, gaussian: bool = False) -> list[int]:
    """The total degrees of the irreducible factors of a polynomial, repeated by multiplicity, in increasing order."""
    _, factors = sp.factor_list(polynomial.as_expr(), *polynomial.gens, gaussian=gaussian)
    degrees = []
    for factor, multiplicity in factors:
        degree = sp.Poly(factor, *polynomial.gens).total_degree()
        if degree > 0:
            degrees.extend([degree] * multiplicity)
    return sorted(degrees)
