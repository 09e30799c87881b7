"""The projective module. Contains the pydantic models for homogeneous points, cameras, homographies, conics, quadrics
and space conics, together with the basic maps between them."""

from typing import ClassVar, Optional, Union

import numpy as np
import sympy as sp
from pydantic import BaseModel, field_validator, model_validator

from mvlab.controls import DEFAULT_RANK_TOL
from mvlab.numeric_core import (
    Matrix,
    as_matrix,
    flatten,
    from_rows,
    inverse,
    is_exact,
    is_proportional,
    is_symmetric,
    is_zero,
    matmul,
    null_space,
    pivot_index,
    rank,
    to_float,
)
from mvlab.utils.custom_errors import DegenerateConfigurationError, RankError
from mvlab.utils.enums import Degeneracy


def _tolerance(matrix: Matrix, tol: Optional[float] = None) -> Optional[float]:
    """The rank tolerance to use for a matrix: None when exact."""
    if is_exact(matrix):
        return None
    return tol or DEFAULT_RANK_TOL


def _column(value) -> Matrix:
    matrix = as_matrix(value)
    if matrix.shape[0] == 1 and matrix.shape[1] > 1:
        matrix = matrix.T
    return matrix


def _negligible(matrix: Matrix, reference: float, tol: Optional[float] = None) -> bool:
    """Whether a matrix vanishes, exactly or relative to the scale of the data it was computed from."""
    if is_exact(matrix):
        return is_zero(matrix)
    return bool(np.max(np.abs(matrix)) <= (tol or DEFAULT_RANK_TOL) * reference)


class ProjectiveModel(BaseModel, frozen=True, extra="forbid", arbitrary_types_allowed=True):
    """A model holding a matrix that is only defined up to a nonzero scale. Equality is proportionality."""

    @property
    def representative(self) -> Matrix:
        raise NotImplementedError

    @property
    def exact(self) -> bool:
        return is_exact(self.representative)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjectiveModel):
            return NotImplemented
        return type(self) is type(other) and is_proportional(self.representative, other.representative)

    def __hash__(self) -> int:
        return hash(type(self).__name__)


class HPoint(ProjectiveModel):
    """A point of projective space given by nonzero homogeneous coordinates."""

    coordinates: Matrix
    dimension: ClassVar[int] = 0

    @field_validator("coordinates", mode="before")
    @classmethod
    def convert_coordinates(cls, value) -> Matrix:
        return _column(value)

    @field_validator("coordinates")
    @classmethod
    def check_coordinates(cls, value: Matrix) -> Matrix:
        if value.shape != (cls.dimension + 1, 1):
            raise ValueError(f"A point of P^{cls.dimension} needs {cls.dimension + 1} homogeneous coordinates")
        if is_zero(value):
            raise ValueError("Homogeneous coordinates cannot all be zero")
        return value

    @property
    def representative(self) -> Matrix:
        return self.coordinates


class HPoint2(HPoint):
    dimension: ClassVar[int] = 2


class HPoint3(HPoint):
    dimension: ClassVar[int] = 3


class Camera(ProjectiveModel):
    """A pinhole camera, a 3x4 matrix of rank 3 defined up to scale."""

    matrix: Matrix

    @field_validator("matrix", mode="before")
    @classmethod
    def convert_matrix(cls, value) -> Matrix:
        return as_matrix(value)

    @field_validator("matrix")
    @classmethod
    def check_rank(cls, value: Matrix) -> Matrix:
        if value.shape != (3, 4):
            raise ValueError(f"A camera matrix must be 3x4, not {value.shape[0]}x{value.shape[1]}")
        if rank(value, _tolerance(value)) != 3:
            raise ValueError("A camera matrix must have three linearly independent rows")
        return value

    @property
    def representative(self) -> Matrix:
        return self.matrix

    @property
    def center(self) -> HPoint3:
        return camera_center(self)


class Homography(ProjectiveModel):
    """An invertible 4x4 (or 3x3) matrix defined up to scale."""

    matrix: Matrix

    @field_validator("matrix", mode="before")
    @classmethod
    def convert_matrix(cls, value) -> Matrix:
        return as_matrix(value)

    @field_validator("matrix")
    @classmethod
    def check_invertible(cls, value: Matrix) -> Matrix:
        if value.shape not in [(3, 3), (4, 4)]:
            raise ValueError("A homography must be a 3x3 or 4x4 matrix")
        if rank(value, _tolerance(value)) != value.shape[0]:
            raise ValueError("A homography must be invertible")
        return value

    @property
    def representative(self) -> Matrix:
        return self.matrix

    def inverse(self) -> "Homography":
        return Homography(matrix=inverse(self.matrix))


class SymmetricForm(ProjectiveModel):
    """A nonzero symmetric matrix defined up to scale."""

    matrix: Matrix
    size: ClassVar[int] = 0

    @field_validator("matrix", mode="before")
    @classmethod
    def convert_matrix(cls, value) -> Matrix:
        return as_matrix(value)

    @field_validator("matrix")
    @classmethod
    def check_symmetric(cls, value: Matrix) -> Matrix:
        if value.shape != (cls.size, cls.size):
            raise ValueError(f"The matrix must be {cls.size}x{cls.size}, not {value.shape[0]}x{value.shape[1]}")
        if not is_symmetric(value):
            raise ValueError("The matrix must be symmetric")
        if is_zero(value):
            raise ValueError("The zero matrix does not define a curve or surface")
        return value

    @property
    def representative(self) -> Matrix:
        return self.matrix

    @property
    def rank(self) -> int:
        return rank(self.matrix, _tolerance(self.matrix))


class Conic2(SymmetricForm):
    """A plane conic given by a symmetric 3x3 matrix."""

    size: ClassVar[int] = 3

    @property
    def is_smooth(self) -> bool:
        return self.rank == 3


class Quadric3(SymmetricForm):
    """A quadric surface in P^3 given by a symmetric 4x4 matrix."""

    size: ClassVar[int] = 4

    @property
    def is_cone(self) -> bool:
        return self.rank == 3

    @property
    def vertex(self) -> HPoint3:
        """The cone point of a conic cone."""
        if not self.is_cone:
            raise RankError(f"Only a quadric of rank 3 has a single cone point, this one has rank {self.rank}")
        return HPoint3(coordinates=null_space(self.matrix, _tolerance(self.matrix))[0])


class SpaceConic(ProjectiveModel):
    """A degree 2 curve in P^3, cut out of a quadric by a plane.

    The plane is a 4-covector. The rank of the quadric restricted to the plane gives the degeneracy: 3 for a smooth
    conic, 2 for two lines and 1 for a doubled line.
    """

    plane: Matrix
    quadric: Quadric3

    @field_validator("plane", mode="before")
    @classmethod
    def convert_plane(cls, value) -> Matrix:
        return _column(value)

    @field_validator("plane")
    @classmethod
    def check_plane(cls, value: Matrix) -> Matrix:
        if value.shape != (4, 1):
            raise ValueError("A plane in P^3 needs four coefficients")
        if is_zero(value):
            raise ValueError("The coefficients of a plane cannot all be zero")
        return value

    @field_validator("quadric", mode="before")
    @classmethod
    def convert_quadric(cls, value) -> Quadric3:
        if isinstance(value, Quadric3):
            return value
        return Quadric3(matrix=value)

    @model_validator(mode="after")
    def check_section(self) -> "SpaceConic":
        restricted = self.restricted_conic
        if rank(restricted, _tolerance(restricted)) == 0:
            raise ValueError("The plane lies on the quadric, so their intersection is not a curve of degree 2")
        return self

    @property
    def representative(self) -> Matrix:
        return self.restricted_conic

    @property
    def restricted_conic(self) -> Matrix:
        """The quadric restricted to the plane, in the basis given by ``plane_basis``."""
        return restricted_form(self.quadric.matrix, self.plane)

    @property
    def degeneracy(self) -> Degeneracy:
        restricted = self.restricted_conic
        return {3: Degeneracy.Smooth, 2: Degeneracy.TwoLines, 1: Degeneracy.DoubleLine}[
            rank(restricted, _tolerance(restricted))
        ]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpaceConic):
            return NotImplemented
        return is_proportional(self.plane, other.plane) and is_proportional(
            self.restricted_conic, other.restricted_conic
        )

    def __hash__(self) -> int:
        return hash(type(self).__name__)


def as_camera(camera: Union[Camera, Matrix, list]) -> Camera:
    return camera if isinstance(camera, Camera) else Camera(matrix=camera)


def as_homography(homography: Union[Homography, Matrix, list]) -> Homography:
    return homography if isinstance(homography, Homography) else Homography(matrix=homography)


def plane_basis(plane: Matrix) -> Matrix:
    """Return a 4x3 matrix whose columns span a plane of P^3.

    With k the index of the largest coefficient of the plane, the columns are pi_k e_j - pi_j e_k for j != k, so the
    basis depends only on the plane and is proportional for proportional covectors.
    """
    plane = _column(plane)
    values = flatten(plane)
    k = pivot_index(plane)
    columns = []
    for j in range(4):
        if j == k:
            continue
        column = [0] * 4
        column[j] = values[k]
        column[k] = -values[j]
        columns.append(column)
    return from_rows([[columns[c][r] for c in range(3)] for r in range(4)], plane)


def restricted_form(quadric: Matrix, plane: Matrix) -> Matrix:
    """The symmetric 3x3 form B^T Q B induced on a plane with basis B."""
    basis = plane_basis(plane)
    return matmul(basis.T, quadric, basis)


def _section_scale(quadric: Matrix, plane: Matrix) -> float:
    """The size of a restricted form, which grows with the square of the plane coefficients."""
    return float(np.max(np.abs(to_float(quadric))) * np.max(np.abs(to_float(plane))) ** 2)


def camera_center(camera: Union[Camera, Matrix]) -> HPoint3:
    """Return the center of a camera, the point where the projection is undefined.

    Parameters
    ----------
    camera : Camera
        The camera.

    Returns
    -------
    center : HPoint3
        The right kernel of the camera matrix.

    """
    camera = as_camera(camera)
    basis = null_space(camera.matrix, _tolerance(camera.matrix))
    if len(basis) != 1:
        raise RankError("A camera needs a one dimensional right kernel")
    return HPoint3(coordinates=basis[0])


def transform_camera(camera: Union[Camera, Matrix], homography: Union[Homography, Matrix]) -> Camera:
    """Precompose a camera with a homography of P^3, giving P H. The center moves to H^-1 applied to the old center."""
    camera = as_camera(camera)
    homography = as_homography(homography)
    return Camera(matrix=matmul(camera.matrix, homography.matrix))


def transform_point(point: Union[HPoint3, Matrix, list], homography: Union[Homography, Matrix]) -> HPoint3:
    """Move a world point with the coordinate change that sends a camera P to P H, giving H^-1 X.

    Images are unchanged: (P H)(H^-1 X) = P X.
    """
    coordinates = point.coordinates if isinstance(point, HPoint3) else _column(point)
    return HPoint3(coordinates=matmul(as_homography(homography).inverse().matrix, coordinates))


def pullback_cone(camera: Union[Camera, Matrix], conic: Conic2) -> Quadric3:
    """Return the cone P^T D P of lines through the camera center that meet the image conic.

    Raises
    ------
    RankError
        If the image conic is not smooth.

    """
    camera = as_camera(camera)
    if not conic.is_smooth:
        raise RankError("The cone over an image conic needs a smooth conic")
    cone = matmul(camera.matrix.T, conic.matrix, camera.matrix)
    if not is_exact(cone):
        cone = (cone + cone.T) / 2
    return Quadric3(matrix=cone)


def restrict_quadric_to_plane(quadric: Quadric3, plane: Matrix) -> Conic2:
    """Return the conic a quadric cuts on a plane, in the basis given by ``plane_basis``.

    Raises
    ------
    DegenerateConfigurationError
        If the plane lies on the quadric.

    """
    plane = _column(plane)
    form = restricted_form(quadric.matrix, plane)
    if _negligible(form, _section_scale(quadric.matrix, plane)):
        raise DegenerateConfigurationError("The plane lies on the quadric")
    return Conic2(matrix=form)


def project_space_conic(camera: Union[Camera, Matrix], conic: SpaceConic) -> Conic2:
    """Return the image of a space conic under a camera.

    With B a basis of the plane of the conic, A = P B maps the plane to the image isomorphically, so the image conic is
    A^-T S A^-1 for the restricted form S.

    Raises
    ------
    DegenerateConfigurationError
        If the camera center lies on the plane of the conic.

    """
    camera = as_camera(camera)
    center = camera_center(camera).coordinates
    incidence = matmul(conic.plane.T, center)
    if _negligible(incidence, float(np.linalg.norm(to_float(conic.plane)) * np.linalg.norm(to_float(center)))):
        raise DegenerateConfigurationError("The camera center lies on the plane of the space conic")

    plane_map = matmul(camera.matrix, plane_basis(conic.plane))
    plane_map_inverse = inverse(plane_map)
    image = matmul(plane_map_inverse.T, conic.restricted_conic, plane_map_inverse)
    if not is_exact(image):
        image = (image + image.T) / 2
    return Conic2(matrix=image)


def transform_space_conic(conic: SpaceConic, homography: Union[Homography, Matrix]) -> SpaceConic:
    """Move a space conic with the coordinate change that sends a camera P to P H: plane to H^T plane, Q to H^T Q H."""
    homography = as_homography(homography)
    H = homography.matrix
    return SpaceConic(plane=matmul(H.T, conic.plane), quadric=matmul(H.T, conic.quadric.matrix, H))


def space_conic_on_quadric(conic: SpaceConic, quadric: Quadric3, tol: Optional[float] = None) -> bool:
    """Whether a space conic, with its multiplicity structure, lies on a quadric.

    The quadric contains the conic exactly when its restriction to the plane of the conic vanishes or is proportional
    to the restricted form of the conic.
    """
    form = restricted_form(quadric.matrix, conic.plane)
    if _negligible(form, _section_scale(quadric.matrix, conic.plane), tol):
        return True
    return is_proportional(form, conic.restricted_conic, tol)


ABSOLUTE_CONIC = SpaceConic(plane=[0, 0, 0, 1], quadric=sp.diag(1, 1, 1, 0))
EUCLIDEAN_CONIC = Conic2(matrix=sp.eye(3))
