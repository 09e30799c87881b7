"""Pencils of quadric cones: the intersection of two cones with distinct cone points, decalibration fibers, the
residual calibration of a camera pair and twisted pairs."""

from itertools import combinations, combinations_with_replacement, product
from typing import Optional, Union

import numpy as np
import sympy as sp

from mvlab.calibration import CalibratedConfig
from mvlab.controls import DEFAULT_RANK_TOL
from mvlab.multiview import CameraConfig
from mvlab.numeric_core import (
    Matrix,
    as_matrix,
    binary_form_roots,
    canonical,
    det,
    divide,
    exact_sqrt,
    flatten,
    from_rows,
    hstack,
    identity,
    inverse,
    is_exact,
    is_zero,
    is_zero_scalar,
    linear_combination,
    matmul,
    null_space,
    pencil_determinant,
    rank,
    row_basis,
    select_columns,
    select_rows,
    to_float,
    vstack,
    zeros,
)
from mvlab.outputs import DecalibrationFiber, PencilClassification, PencilRoot, QuadricSpace, TwistedPair
from mvlab.projective import (
    Camera,
    Conic2,
    HPoint3,
    Homography,
    Quadric3,
    SpaceConic,
    plane_basis,
    project_space_conic,
    pullback_cone,
    restricted_form,
    space_conic_on_quadric,
)
from mvlab.utils.custom_errors import DegenerateConfigurationError, PencilClassError, RankError
from mvlab.utils.enums import Degeneracy, PencilClasses

# Intersection class of a regular pencil whose singular members all have rank 3, keyed by the sorted root
# multiplicities of the pencil determinant. Signatures missing from the table are irreducible quartics.
RANK_THREE_CLASSES = {
    (1, 1, 1, 1): PencilClasses.IrreducibleQuartic,
    (1, 1, 2): PencilClasses.IrreducibleQuartic,
    (1, 3): PencilClasses.IrreducibleQuartic,
    (2, 2): PencilClasses.CubicPlusLine,
}

SPLIT_CLASSES = (PencilClasses.TwoSmoothConics, PencilClasses.ConicPlusDoubleLine)

SYMMETRIC_INDICES = list(combinations_with_replacement(range(4), 2))


def _tolerance(matrix: Matrix, tol: Optional[float]) -> Optional[float]:
    return None if is_exact(matrix) else (tol or DEFAULT_RANK_TOL)


def _as_quadric(quadric) -> Quadric3:
    return quadric if isinstance(quadric, Quadric3) else Quadric3(matrix=quadric)


def _as_conic(conic) -> Conic2:
    return conic if isinstance(conic, Conic2) else Conic2(matrix=conic)


def _check_cone_pair(first: Quadric3, second: Quadric3) -> None:
    for quadric in (first, second):
        if quadric.rank != 3:
            raise RankError(f"A conic cone has rank 3, not {quadric.rank}")
    if first.vertex == second.vertex:
        raise DegenerateConfigurationError("The two cones share their cone point")


def _form_scale(first: Matrix, second: Matrix) -> float:
    return float(max(np.max(np.abs(to_float(first))), np.max(np.abs(to_float(second)))))


def pencil_classify(
    first: Quadric3, second: Quadric3, tol: Optional[float] = None, root_tol: Optional[float] = None
) -> PencilClassification:
    """Classify the intersection curve of two conic cones with distinct cone points.

    The determinant det(λ Q1 + μ Q2) is a binary quartic. If it vanishes identically the curve is a conic plus a
    doubled line. Otherwise a root whose member has rank 2 splits the curve into two conics, and when every singular
    member has rank 3 the root multiplicities decide between an irreducible quartic and a twisted cubic plus a line.

    Parameters
    ----------
    first, second : Quadric3
        Two quadrics of rank 3 with distinct cone points.
    tol : float, optional
        The relative tolerance for float data.
    root_tol : float, optional
        The relative tolerance for the roots of the determinant, ``tol`` when not given.

    Returns
    -------
    classification : PencilClassification
        The class of the intersection and the roots of the determinant with the ranks of their members.

    Raises
    ------
    RankError
        If either quadric is not a cone.
    DegenerateConfigurationError
        If the cones share their cone point.
    PencilClassError
        If a singular member of the pencil has rank 1.

    """
    first, second = _as_quadric(first), _as_quadric(second)
    _check_cone_pair(first, second)

    determinant = pencil_determinant(first.matrix, second.matrix)
    if determinant.exact:
        singular = determinant.is_zero()
    else:
        singular = determinant.is_zero((tol or DEFAULT_RANK_TOL) * _form_scale(first.matrix, second.matrix) ** 4)
    if singular:
        return PencilClassification(PencilClasses.ConicPlusDoubleLine, determinant, [], singular=True)

    roots = []
    for root in binary_form_roots(determinant, root_tol or tol):
        member = linear_combination(root.point, [first.matrix, second.matrix])
        roots.append(PencilRoot(root=root, rank=rank(member, _tolerance(member, tol))))

    lowest = min(root.rank for root in roots)
    if lowest == 3:
        multiplicities = tuple(sorted(root.multiplicity for root in roots))
        pencil_class = RANK_THREE_CLASSES.get(multiplicities, PencilClasses.IrreducibleQuartic)
    elif lowest == 2:
        pencil_class = PencilClasses.TwoSmoothConics
    else:
        raise PencilClassError(
            f"The pencil determinant roots {[(root.multiplicity, root.rank) for root in roots]} do not match an "
            f"intersection of two cones"
        )
    return PencilClassification(pencil_class, determinant, roots)


def rank_two_members(first: Quadric3, second: Quadric3, tol: Optional[float] = None) -> list[Matrix]:
    """Return the members of rank 2 of the pencil spanned by two quadrics.

    Every 3x3 minor vanishes on a member of rank 2, so the members are among the roots of the first 3x3 minor that
    does not vanish identically on the pencil.

    Raises
    ------
    RankError
        If every member of the pencil has rank at most 2.

    """
    first, second = _as_quadric(first), _as_quadric(second)
    threshold = (tol or DEFAULT_RANK_TOL) * _form_scale(first.matrix, second.matrix) ** 3
    for i, j in product(range(4), range(4)):
        rows = [r for r in range(4) if r != i]
        columns = [c for c in range(4) if c != j]
        minor = pencil_determinant(
            select_columns(select_rows(first.matrix, rows), columns),
            select_columns(select_rows(second.matrix, rows), columns),
        )
        if not minor.is_zero(None if minor.exact else threshold):
            break
    else:
        raise RankError("Every member of the pencil has rank at most 2")

    members = []
    for root in binary_form_roots(minor, tol):
        member = linear_combination(root.point, [first.matrix, second.matrix])
        if rank(member, _tolerance(member, tol)) == 2:
            members.append(member)
    return members


def split_plane_pair(member: Matrix, tol: Optional[float] = None) -> tuple[Matrix, Matrix]:
    """Factor a symmetric 4x4 matrix of rank at most 2 into the two planes of its quadric.

    With L0 and L1 spanning the row space, the quadratic form is g(L0 x, L1 x) for a binary quadratic
    g(u, v) = a u^2 + 2b uv + c v^2, and the planes are the linear factors of g. The square root of b^2 - ac is taken
    in the Gaussian rationals when it lies there and in floating point otherwise, so conjugate planes come out in the
    float tower.

    Parameters
    ----------
    member : sp.ImmutableMatrix or np.ndarray
        A symmetric matrix of rank 1 or 2.
    tol : float, optional
        The relative rank tolerance for float data.

    Returns
    -------
    planes : tuple
        Two 4x1 plane covectors, equal for a matrix of rank 1.

    Raises
    ------
    RankError
        If the matrix has rank 0 or above 2.

    """
    member = as_matrix(member)
    member_rank = rank(member, _tolerance(member, tol))
    if member_rank == 1:
        plane = row_basis(member, _tolerance(member, tol))[0].T
        return plane, plane
    if member_rank != 2:
        raise RankError(f"A pair of planes has rank 1 or 2, not {member_rank}")

    first_row, second_row = row_basis(member, _tolerance(member, tol))
    lines = vstack(first_row, second_row)
    pair = max(combinations(range(4), 2), key=lambda cols: abs(complex(det(select_columns(lines, cols)))))
    block_inverse = inverse(select_columns(lines, pair))
    section_rows = [[0, 0] for _ in range(4)]
    for position, column in enumerate(pair):
        section_rows[column] = flatten(select_rows(block_inverse, [position]))
    section = from_rows(section_rows, lines)

    a, b, _, c = flatten(matmul(section.T, member, section))
    if is_zero_scalar(a, None if is_exact(member) else DEFAULT_RANK_TOL * abs(complex(b))):
        return second_row.T, linear_combination([2 * b, c], [first_row, second_row]).T

    discriminant = b * b - a * c
    root = exact_sqrt(discriminant) if is_exact(member) else None
    if root is None:
        root = complex(np.sqrt(complex(discriminant)))
    planes = []
    for sign in (1, -1):
        t = divide(-b + sign * root, a)
        planes.append(linear_combination([1, -t], [first_row, second_row]).T)
    return planes[0], planes[1]


def intersect_two_smooth_case(
    first: Quadric3, second: Quadric3, tol: Optional[float] = None
) -> tuple[SpaceConic, SpaceConic]:
    """Split the intersection of two cones into the two plane sections cut by the rank 2 member of their pencil.

    Raises
    ------
    PencilClassError
        If the intersection is an irreducible quartic or a twisted cubic plus a line.

    """
    first, second = _as_quadric(first), _as_quadric(second)
    classification = pencil_classify(first, second, tol)
    if classification.pencil_class not in SPLIT_CLASSES:
        raise PencilClassError(f"An intersection of class {classification.pencil_class} does not split into conics")
    members = rank_two_members(first, second, tol)
    if not members:
        raise PencilClassError("The pencil has no member of rank 2")
    planes = split_plane_pair(members[0], tol)
    return tuple(SpaceConic(plane=plane, quadric=first) for plane in planes)


def decalibration_fiber(
    config: Union[CameraConfig, list], image_conics: list, tol: Optional[float] = None
) -> DecalibrationFiber:
    """Find every space conic that the cameras map onto the given image conics.

    The candidates are the sections of the first pair of cones. With more than two views a candidate is kept only when
    it lies on every remaining cone.

    Parameters
    ----------
    config : CameraConfig
        A general configuration of at least two cameras.
    image_conics : list[Conic2]
        One smooth conic per camera.
    tol : float, optional
        The relative tolerance for float data.

    Returns
    -------
    fiber : DecalibrationFiber
        Zero, one or two smooth or doubled-line space conics, pairwise distinct.

    Raises
    ------
    ValueError
        If there are fewer than two cameras, or the numbers of cameras and conics differ.
    DegenerateConfigurationError
        If the configuration is not general.
    RankError
        If an image conic is not smooth.

    """
    config = config if isinstance(config, CameraConfig) else CameraConfig(cameras=config)
    conics = [_as_conic(conic) for conic in image_conics]
    if len(config) < 2:
        raise ValueError("A decalibration fiber needs at least two cameras")
    if len(conics) != len(config):
        raise ValueError(f"There are {len(conics)} image conics for {len(config)} cameras")
    if not config.is_general:
        raise DegenerateConfigurationError("A decalibration fiber needs a general camera configuration")

    cones = [pullback_cone(camera, conic) for camera, conic in zip(config.cameras, conics)]
    classification = pencil_classify(cones[0], cones[1], tol)
    if classification.pencil_class not in SPLIT_CLASSES:
        return DecalibrationFiber([], classification)

    fiber = []
    for candidate in intersect_two_smooth_case(cones[0], cones[1], tol):
        if candidate.degeneracy == Degeneracy.TwoLines or candidate in fiber:
            continue
        if all(space_conic_on_quadric(candidate, cone, tol) for cone in cones[1:]):
            fiber.append(candidate)
    return DecalibrationFiber(fiber, classification)


def residual_calibration(calibrated: CalibratedConfig, tol: Optional[float] = None) -> CalibratedConfig:
    """Swap the calibrating conic of a camera pair for the other conic in its decalibration fiber.

    Applying this twice gives back the original calibration, and the result never equals its input.

    Raises
    ------
    ValueError
        If the configuration does not have exactly two cameras.
    PencilClassError
        If the fiber does not consist of the given conic and one other.

    """
    if len(calibrated) != 2:
        raise ValueError(f"The residual calibration is defined for two cameras, not {len(calibrated)}")
    fiber = decalibration_fiber(calibrated.config, calibrated.image_conics, tol)
    others = [conic for conic in fiber.conics if conic != calibrated.space_conic]
    if len(fiber) != 2 or len(others) != 1:
        raise PencilClassError(f"The decalibration fiber has {len(fiber)} conics, so there is no residual conic")
    return CalibratedConfig(config=calibrated.config, image_conics=calibrated.image_conics, space_conic=others[0])


def twisted_pair(R: Matrix, t: Matrix) -> TwistedPair:
    """Build the twisted partner of the camera R[I|t] with respect to [I|0].

    With n = t^T t, the rotation by a half turn about the baseline is R_t = diag(2 t t^T - n I, n) and the coordinate
    change H = [[n I, 0], [-2 t^T, n]] satisfies [I|0] H ∝ [I|0] and R[I|t] R_t H ∝ R[I|-t]. When n = 0 the
    translation cannot be normalised, the matrices are built with n replaced by 1 and the pair is flagged degenerate.

    Parameters
    ----------
    R : sp.ImmutableMatrix or np.ndarray
        A 3x3 rotation.
    t : sp.ImmutableMatrix or np.ndarray
        A nonzero translation.

    Returns
    -------
    pair : TwistedPair

    Raises
    ------
    ValueError
        If the translation is zero.

    """
    R = as_matrix(R)
    t = as_matrix(t)
    if t.shape[0] == 1:
        t = t.T
    if is_zero(t):
        raise ValueError("A twisted pair needs a nonzero translation")

    like = t if is_exact(t) else to_float(t)
    norm = flatten(matmul(t.T, t))[0]
    if is_exact(t):
        degenerate = sp.expand(norm) == 0
    else:
        degenerate = abs(norm) <= 1e-12 * float(np.max(np.abs(like))) ** 2
    scale = (sp.Integer(1) if is_exact(t) else 1.0) if degenerate else norm

    core = linear_combination([2, -scale], [matmul(t, t.T), identity(3, like=like)])
    corner = from_rows([[scale]], like)
    rotation = vstack(hstack(core, zeros(3, 1, like=like)), hstack(zeros(1, 3, like=like), corner))
    homography = vstack(
        hstack(linear_combination([scale], [identity(3, like=like)]), zeros(3, 1, like=like)),
        hstack(linear_combination([-2], [t.T]), corner),
    )
    camera = matmul(R, hstack(identity(3, like=like), t))
    return TwistedPair(
        rotation_core=core,
        rotation=rotation,
        camera=Camera(matrix=camera),
        twisted_camera=Camera(matrix=matmul(camera, rotation)),
        homography=Homography(matrix=homography),
        degenerate=bool(degenerate),
    )


def _symmetric_unit(i: int, j: int) -> sp.ImmutableMatrix:
    unit = sp.zeros(4, 4)
    unit[i, j] = unit[j, i] = 1
    return sp.ImmutableMatrix(unit)


def _upper_entries(matrix: Matrix) -> list:
    size = matrix.shape[0]
    return [matrix[i, j] for i, j in combinations_with_replacement(range(size), 2)]


def _quadrics_from_vectors(vectors: list[Matrix]) -> list[Quadric3]:
    if not vectors:
        return []
    stacked = vstack(*[select_rows(vector, range(len(SYMMETRIC_INDICES))).T for vector in vectors])
    basis = []
    for row in row_basis(stacked, _tolerance(stacked, None)):
        quadric = linear_combination(flatten(row), [_symmetric_unit(i, j) for i, j in SYMMETRIC_INDICES])
        basis.append(Quadric3(matrix=quadric))
    return basis


def _shares_component(first: Quadric3, second: Quadric3) -> bool:
    if first == second:
        return True
    for reducible, other in ((first, second), (second, first)):
        if reducible.rank <= 2:
            for plane in split_plane_pair(reducible.matrix):
                if is_zero(restricted_form(other.matrix, plane), None if is_exact(plane) else DEFAULT_RANK_TOL):
                    return True
    return False


def quadrics_through(curve: Union[SpaceConic, tuple[Quadric3, Quadric3]]) -> QuadricSpace:
    """Return the linear space of quadrics containing a space conic or the intersection of two quadrics.

    For a space conic with restricted form S on a plane with basis B, a quadric Q contains the conic when B^T Q B is a
    multiple of S. For a pair of quadrics Q1, Q2 meeting properly, a quadric Q contains the intersection when every
    x_i Q is a combination of the x_j Q1 and x_j Q2, which is solved as a linear system on the cubic coefficients.

    Parameters
    ----------
    curve : SpaceConic or tuple[Quadric3, Quadric3]
        The curve, given exactly.

    Returns
    -------
    space : QuadricSpace
        A basis of the quadrics through the curve: five for a smooth conic, two for a proper intersection.

    Raises
    ------
    ValueError
        If the data is not exact.
    DegenerateConfigurationError
        If the two quadrics share a component.

    """
    if isinstance(curve, SpaceConic):
        if not is_exact(curve.plane) or not curve.quadric.exact:
            raise ValueError("The quadrics through a curve are computed in exact arithmetic")
        basis = plane_basis(curve.plane)
        columns = [_upper_entries(matmul(basis.T, _symmetric_unit(i, j), basis)) for i, j in SYMMETRIC_INDICES]
        columns.append([-value for value in _upper_entries(curve.restricted_conic)])
        system = from_rows([[column[r] for column in columns] for r in range(6)], curve.plane)
        return QuadricSpace(basis=_quadrics_from_vectors(null_space(system)))

    first, second = (_as_quadric(quadric) for quadric in curve)
    if not (first.exact and second.exact):
        raise ValueError("The quadrics through a curve are computed in exact arithmetic")
    if _shares_component(first, second):
        raise DegenerateConfigurationError("The two quadrics share a component, so they do not meet properly")

    x = sp.symbols("x0:4")
    coordinates = sp.Matrix(x)

    def quadratic(matrix) -> sp.Expr:
        return sp.expand((coordinates.T * sp.Matrix(matrix) * coordinates)[0])

    generators = [quadratic(_symmetric_unit(i, j)) for i, j in SYMMETRIC_INDICES]
    f1, f2 = quadratic(first.matrix), quadratic(second.matrix)
    unknowns = len(generators) + 32

    equations: dict[tuple, dict[int, sp.Expr]] = {}

    def accumulate(block: int, polynomial: sp.Expr, unknown: int, sign: int) -> None:
        for monomial, coefficient in sp.Poly(polynomial, *x).terms():
            row = equations.setdefault((block, monomial), {})
            row[unknown] = row.get(unknown, 0) + sign * coefficient

    for i in range(4):
        for k, generator in enumerate(generators):
            accumulate(i, x[i] * generator, k, 1)
        for j in range(4):
            accumulate(i, x[j] * f1, len(generators) + 4 * i + j, -1)
            accumulate(i, x[j] * f2, len(generators) + 16 + 4 * i + j, -1)

    system = canonical(sp.ImmutableMatrix([[row.get(u, 0) for u in range(unknowns)] for row in equations.values()]))
    return QuadricSpace(basis=_quadrics_from_vectors(null_space(system)))


def cone_family_dimension(space: QuadricSpace) -> int:
    """The projective dimension of the singular quadrics in a linear space of quadrics.

    The determinant restricted to the space is tried at fixed sample members and then symbolically. If it does not
    vanish identically the singular members form a hypersurface in the projectivised space.
    """
    matrices = [quadric.matrix if isinstance(quadric, Quadric3) else as_matrix(quadric) for quadric in space.basis]
    if not matrices:
        raise ValueError("The space of quadrics is empty")
    size = len(matrices)
    samples = [
        [k + 1 for k in range(size)],
        [(-1) ** k * (k + 2) for k in range(size)],
        [(k + 1) ** 2 + 1 for k in range(size)],
    ]
    exact = all(is_exact(matrix) for matrix in matrices)
    for sample in samples:
        value = det(linear_combination(sample, matrices))
        if (exact and sp.expand(value) != 0) or (not exact and abs(value) > DEFAULT_RANK_TOL):
            return size - 2
    if exact:
        y = sp.symbols(f"y0:{size}")
        general = sp.Matrix(sum((y[k] * sp.Matrix(matrices[k]) for k in range(size)), sp.zeros(4, 4)))
        if sp.expand(general.det(method="berkowitz")) != 0:
            return size - 2
    return size - 1


def cone_over_space_conic(conic: SpaceConic, vertex: Union[HPoint3, Matrix, list]) -> Quadric3:
    """Return the cone joining a point off the plane of a space conic to the conic.

    Raises
    ------
    DegenerateConfigurationError
        If the point lies on the plane of the conic.

    """
    vertex = vertex if isinstance(vertex, HPoint3) else HPoint3(coordinates=vertex)
    rows = [vector.T for vector in null_space(vertex.coordinates.T, _tolerance(vertex.coordinates, None))]
    projection = Camera(matrix=vstack(*rows))
    image = project_space_conic(projection, conic)
    cone = matmul(projection.matrix.T, image.matrix, projection.matrix)
    if not is_exact(cone):
        cone = (cone + cone.T) / 2
    return Quadric3(matrix=cone)
