"""n-view configurations: joint-image membership, triangulation, resection, constraint generation, recovery of the
homography relating two configurations and collinearity of centers."""

from itertools import combinations, product
from typing import Optional, Union

import numpy as np
import sympy as sp
from pydantic import BaseModel, Field, field_validator

from mvlab.controls import DEFAULT_RANK_TOL
from mvlab.epipolar import Correspondence, as_correspondence, fundamental_from_pair
from mvlab.numeric_core import (
    Matrix,
    flatten,
    float_scalar,
    from_rows,
    hstack,
    is_exact,
    is_proportional,
    is_zero,
    matmul,
    null_space,
    rank,
    reshape,
    select_rows,
    to_float,
    unify,
    vstack,
    zeros,
)
from mvlab.outputs import ConstraintSet, MembershipResult
from mvlab.projective import Camera, HPoint2, HPoint3, Homography, as_camera, camera_center
from mvlab.utils.custom_errors import (
    AmbiguousTriangulationError,
    DegenerateConfigurationError,
    NotOnJointImageError,
)


class CameraConfig(BaseModel, frozen=True, extra="forbid", arbitrary_types_allowed=True):
    """An ordered list of cameras."""

    cameras: list[Camera] = Field(min_length=1)

    @field_validator("cameras", mode="before")
    @classmethod
    def convert_cameras(cls, value) -> list[Camera]:
        return [as_camera(camera) for camera in value]

    def __len__(self) -> int:
        return len(self.cameras)

    @property
    def exact(self) -> bool:
        return all(camera.exact for camera in self.cameras)

    @property
    def centers(self) -> list[HPoint3]:
        return [camera_center(camera) for camera in self.cameras]

    @property
    def is_general(self) -> bool:
        """Whether the camera centers are pairwise distinct."""
        centers = self.centers
        return all(a != b for a, b in combinations(centers, 2))

    @property
    def is_collinear(self) -> bool:
        return centers_collinear(self)


def _as_config(config) -> CameraConfig:
    return config if isinstance(config, CameraConfig) else CameraConfig(cameras=config)


def _tolerance(matrix: Matrix, tol: Optional[float]) -> Optional[float]:
    return None if is_exact(matrix) else (tol or DEFAULT_RANK_TOL)


def _world_part(vector: Matrix) -> Matrix:
    return select_rows(vector, range(4))


def _world_part_nonzero(vector: Matrix) -> bool:
    world = _world_part(vector)
    if is_exact(world):
        return not is_zero(world)
    return bool(np.linalg.norm(world) > 1e-8 * np.linalg.norm(vector))


def multiview_matrix(config: CameraConfig, correspondence: Correspondence) -> Matrix:
    """Return the 3n x (4 + n) matrix whose row block i is [P_i | x_i in column 4 + i].

    A correspondence is the image of a world point exactly when this matrix has a kernel vector with nonzero world
    part, the kernel vector being the world point followed by the negated projective scales.

    Raises
    ------
    ValueError
        If the correspondence does not have one point per camera.

    """
    config = _as_config(config)
    correspondence = as_correspondence(correspondence)
    n = len(config)
    if len(correspondence) != n:
        raise ValueError(f"The correspondence has {len(correspondence)} points for {n} cameras")

    blocks = []
    for i, (camera, point) in enumerate(zip(config.cameras, correspondence.points)):
        like = camera.matrix
        columns = [camera.matrix]
        columns.extend(point.coordinates if k == i else zeros(3, 1, like=like) for k in range(n))
        blocks.append(hstack(*columns))
    return vstack(*blocks)


def membership_rank(config: CameraConfig, correspondence: Correspondence,
                    tol: Optional[float] = None) -> MembershipResult:
    """Test whether a correspondence lies on the joint image of a camera configuration.

    Parameters
    ----------
    config : CameraConfig
        The cameras.
    correspondence : Correspondence
        One image point per camera.
    tol : float, optional
        The relative rank tolerance for float data.

    Returns
    -------
    result : MembershipResult
        The rank of the multiview matrix and whether the correspondence is on the joint image, that is the rank is at
        most n + 3 with a kernel vector whose world part is nonzero.

    """
    config = _as_config(config)
    matrix = multiview_matrix(config, correspondence)
    tol = _tolerance(matrix, tol)
    matrix_rank = rank(matrix, tol)
    on_joint_image = matrix_rank <= len(config) + 3 and any(
        _world_part_nonzero(vector) for vector in null_space(matrix, tol)
    )
    return MembershipResult(rank=matrix_rank, on_joint_image=on_joint_image)


def triangulate(config: CameraConfig, correspondence: Correspondence, tol: Optional[float] = None) -> HPoint3:
    """Return the world point whose images form the correspondence.

    Raises
    ------
    NotOnJointImageError
        If the correspondence is not on the joint image.
    AmbiguousTriangulationError
        If more than one world point maps to the correspondence, as for points on the baseline of collinear cameras.

    """
    config = _as_config(config)
    matrix = multiview_matrix(config, correspondence)
    tol = _tolerance(matrix, tol)
    worlds = [_world_part(vector) for vector in null_space(matrix, tol)]
    worlds = [world for world in worlds if not is_zero(world, None if is_exact(world) else 1e-8)]
    if not worlds:
        raise NotOnJointImageError("The correspondence is not the image of any world point")
    if rank(hstack(*worlds), tol) > 1:
        raise AmbiguousTriangulationError("The correspondence is the image of a line of world points")
    return HPoint3(coordinates=worlds[0])


def resect(world: list, image: list, tol: Optional[float] = None) -> Camera:
    """Find the camera that maps at least six world points to their image points.

    Each pair contributes the three rows of x cross (P xi) = 0, linear in the twelve entries of P.

    Raises
    ------
    DegenerateConfigurationError
        If the design matrix has rank below eleven, as for coplanar world points.

    """
    world = [point if isinstance(point, HPoint3) else HPoint3(coordinates=point) for point in world]
    image = [point if isinstance(point, HPoint2) else HPoint2(coordinates=point) for point in image]
    if len(world) != len(image):
        raise ValueError(f"There are {len(world)} world points but {len(image)} image points")
    if len(world) < 6:
        raise ValueError("Resection needs at least six point correspondences")

    coordinates = unify(*[point.coordinates for point in world + image])
    world_rows = [column.T for column in coordinates[: len(world)]]
    image_points = [flatten(column) for column in coordinates[len(world) :]]

    rows = []
    for xi, (u, v, w) in zip(world_rows, image_points):
        zero = zeros(1, 4, like=xi)
        rows.extend([hstack(zero, -w * xi, v * xi), hstack(w * xi, zero, -u * xi), hstack(-v * xi, u * xi, zero)])
    design = vstack(*rows)

    tol = _tolerance(design, tol)
    design_rank = rank(design, tol)
    if design_rank < 11 or (is_exact(design) and design_rank != 11):
        raise DegenerateConfigurationError(f"The resection design matrix has rank {design_rank}, not 11")

    if is_exact(design):
        vector = null_space(design)[0]
    else:
        _, _, vh = np.linalg.svd(design)
        vector = vh[-1, :].conj().reshape(12, 1)
    return Camera(matrix=reshape(vector, 3, 4))


class TrilinearBundle:
    """The 7x7 minors of the multiview matrix of three cameras, evaluated as functions of the three image points.

    Every choice of seven of the nine rows keeps a row from each view, giving 36 minors. Each minor is expanded along
    the three image columns, so it only needs 4x4 determinants of the stacked camera rows, which are computed once.
    """

    ROW_SETS = tuple(combinations(range(9), 7))

    def __init__(self, cameras):
        self.cameras = tuple(as_camera(camera) for camera in cameras)
        if len(self.cameras) != 3:
            raise ValueError("A trilinear bundle needs exactly three cameras")
        self._stacked = vstack(*[camera.matrix for camera in self.cameras])
        self._determinants = {}

    def __len__(self) -> int:
        return len(self.ROW_SETS)

    def _determinant(self, rows: tuple[int, ...]):
        if rows not in self._determinants:
            block = select_rows(self._stacked, rows)
            self._determinants[rows] = sp.expand(block.det()) if is_exact(block) else float(np.linalg.det(block))
        return self._determinants[rows]

    def evaluate(self, x: Union[HPoint2, Matrix], y: Union[HPoint2, Matrix], z: Union[HPoint2, Matrix]) -> list:
        """The values of the 36 minors at the image points (x, y, z)."""
        points = [point.coordinates if isinstance(point, HPoint2) else point for point in (x, y, z)]
        exact = is_exact(self._stacked) and all(is_exact(point) for point in points)
        coordinates = [flatten(point) for point in points]

        values = []
        for rows in self.ROW_SETS:
            by_view = [[(position, row) for position, row in enumerate(rows) if row // 3 == view] for view in range(3)]
            total = 0
            for (p1, r1), (p2, r2), (p3, r3) in product(*by_view):
                rest = tuple(row for row in rows if row not in (r1, r2, r3))
                determinant = self._determinant(rest)
                if not exact:
                    determinant = float_scalar(determinant)
                sign = (-1) ** (p1 + p2 + p3 + 3)
                total += sign * coordinates[0][r1] * coordinates[1][r2 - 3] * coordinates[2][r3 - 6] * determinant
            values.append(sp.expand(total) if exact else total)
        return values

    def vanishes(self, x, y, z, tol: Optional[float] = None) -> bool:
        values = self.evaluate(x, y, z)
        if all(isinstance(value, sp.Basic) or isinstance(value, int) for value in values):
            return all(sp.expand(value) == 0 for value in values)
        points = [to_float(point.coordinates if isinstance(point, HPoint2) else point) for point in (x, y, z)]
        scale = np.prod([np.linalg.norm(point) for point in points]) * max(
            abs(float_scalar(value)) for value in self._determinants.values()
        )
        return bool(max(abs(complex(value)) for value in values) <= (tol or DEFAULT_RANK_TOL) * scale)


def constraint_polynomials(config: CameraConfig) -> ConstraintSet:
    """Return the bilinear form of every pair of views and the trilinear minor bundle of every triple.

    Raises
    ------
    DegenerateConfigurationError
        If two cameras share their center.

    """
    config = _as_config(config)
    if not config.is_general:
        raise DegenerateConfigurationError("Constraints are generated for cameras with pairwise distinct centers")
    cameras = config.cameras
    indices = range(len(cameras))
    bilinear = {(i, j): fundamental_from_pair(cameras[i], cameras[j]) for i, j in combinations(indices, 2)}
    trilinear = {
        (i, j, k): TrilinearBundle((cameras[i], cameras[j], cameras[k])) for i, j, k in combinations(indices, 3)
    }
    return ConstraintSet(bilinear=bilinear, trilinear=trilinear)


def recover_homography(first: CameraConfig, second: CameraConfig, tol: Optional[float] = None) -> Optional[Homography]:
    """Find a homography H with the second cameras proportional to the first cameras times H, if there is one.

    For each camera pair (P, Q), every 2x2 minor of the entries of P H against the entries of Q vanishes. Those minors
    are linear in the entries of H, so H spans the kernel of a 66n x 16 matrix.

    Parameters
    ----------
    first, second : CameraConfig
        Two configurations of the same length, at least two.
    tol : float, optional
        The relative rank tolerance for float data.

    Returns
    -------
    homography : Homography or None
        The homography, unique up to scale for cameras with distinct centers, or None if the configurations are not
        projectively equivalent.

    """
    first, second = _as_config(first), _as_config(second)
    if len(first) != len(second):
        raise ValueError("Projectively equivalent configurations have the same number of cameras")
    if len(first) < 2:
        raise ValueError("Recovering a homography needs at least two cameras")

    matrices = unify(*[camera.matrix for camera in first.cameras + second.cameras])
    n = len(first)
    entries = [(r, s) for r in range(3) for s in range(4)]
    rows = []
    for P, Q in zip(matrices[:n], matrices[n:]):
        coefficients = {}
        for r, s in entries:
            vector = [0] * 16
            for k in range(4):
                vector[4 * k + s] = P[r, k]
            coefficients[(r, s)] = vector
        for e, f in combinations(entries, 2):
            rows.append([Q[f] * coefficients[e][m] - Q[e] * coefficients[f][m] for m in range(16)])
    design = from_rows(rows, matrices[0])

    basis = null_space(design, _tolerance(design, tol))
    candidates = list(basis)
    if len(basis) > 1:
        candidates.append(sum(basis[1:], basis[0]))
    for vector in candidates:
        H = reshape(vector, 4, 4)
        if rank(H, _tolerance(H, tol)) != 4:
            continue
        if all(is_proportional(matmul(P, H), Q, tol) for P, Q in zip(matrices[:n], matrices[n:])):
            return Homography(matrix=H)
    return None


def centers_collinear(config: CameraConfig) -> bool:
    """Whether all camera centers lie on one line, that is the 4 x n matrix of centers has rank at most 2."""
    config = _as_config(config)
    centers = hstack(*[center.coordinates for center in config.centers])
    return rank(centers, _tolerance(centers, None)) <= 2
