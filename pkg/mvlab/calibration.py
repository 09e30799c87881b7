"""Calibrated cameras: K/R/C decomposition, the image of the absolute conic, essential matrices and calibration
checks."""

from typing import Optional, Union

import numpy as np
from pydantic import BaseModel, field_validator, model_validator

from mvlab.controls import DEFAULT_ESSENTIAL_TOL, DEFAULT_RANK_TOL
from mvlab.epipolar import BilinearForm
from mvlab.multiview import CameraConfig
from mvlab.numeric_core import (
    Matrix,
    as_matrix,
    cross_matrix,
    flatten,
    hstack,
    identity,
    is_exact,
    is_zero,
    matmul,
    rank,
    rq_decompose,
    svd,
    to_float,
)
from mvlab.outputs import CalibrationDecomposition
from mvlab.projective import (
    ABSOLUTE_CONIC,
    Camera,
    Conic2,
    SpaceConic,
    as_camera,
    camera_center,
    project_space_conic,
    pullback_cone,
    space_conic_on_quadric,
)
from mvlab.utils.custom_errors import RankError
from mvlab.utils.enums import Degeneracy


class EssentialMatrix(BilinearForm):
    """The bilinear form of a calibrated camera pair, [t]x R for the pair ([I|0], [R|t])."""


class CalibratedConfig(BaseModel, frozen=True, extra="forbid", arbitrary_types_allowed=True):
    """Cameras with one smooth image conic per view and a space conic each camera maps onto its image conic."""

    config: CameraConfig
    image_conics: list[Conic2]
    space_conic: SpaceConic

    @field_validator("config", mode="before")
    @classmethod
    def convert_config(cls, value) -> CameraConfig:
        return value if isinstance(value, CameraConfig) else CameraConfig(cameras=value)

    @field_validator("image_conics", mode="before")
    @classmethod
    def convert_conics(cls, value) -> list[Conic2]:
        return [conic if isinstance(conic, Conic2) else Conic2(matrix=conic) for conic in value]

    @field_validator("image_conics")
    @classmethod
    def check_smooth(cls, value: list[Conic2]) -> list[Conic2]:
        for index, conic in enumerate(value):
            if not conic.is_smooth:
                raise ValueError(f"The image conic of view {index} is not smooth")
        return value

    @field_validator("space_conic")
    @classmethod
    def check_degeneracy(cls, value: SpaceConic) -> SpaceConic:
        if value.degeneracy == Degeneracy.TwoLines:
            raise ValueError("A pair of distinct lines cannot calibrate a camera")
        return value

    @model_validator(mode="after")
    def check_calibration(self) -> "CalibratedConfig":
        if len(self.image_conics) != len(self.config):
            raise ValueError(f"There are {len(self.image_conics)} image conics for {len(self.config)} cameras")
        for index, (camera, conic) in enumerate(zip(self.config.cameras, self.image_conics)):
            if not space_conic_on_quadric(self.space_conic, pullback_cone(camera, conic)):
                raise ValueError(f"Camera {index} does not map the space conic onto its image conic")
        return self

    def __len__(self) -> int:
        return len(self.config)


def compose_camera(K: Matrix, R: Matrix, C: Matrix) -> Camera:
    """Build the camera K [R | -R C] from a calibration matrix, a rotation and an affine center."""
    K, R, C = as_matrix(K), as_matrix(R), as_matrix(C)
    return Camera(matrix=matmul(K, hstack(R, -matmul(R, C))))


def decompose_camera(camera: Union[Camera, Matrix], proper_rotation: bool = True) -> CalibrationDecomposition:
    """Factor a camera as K [R | -R C].

    Parameters
    ----------
    camera : Camera
        A camera whose center is not at infinity.
    proper_rotation : bool, default True
        If the left 3x3 block factors through a reflection, negate the whole camera so that det R = +1. Otherwise R is
        returned as the reflection. ``reflection`` records which case occurred either way.

    Returns
    -------
    decomposition : CalibrationDecomposition
        K upper triangular with positive diagonal and K[2, 2] = 1, R orthogonal and C the affine center.

    Raises
    ------
    RankError
        If the left 3x3 block is singular, that is the center lies on the plane at infinity.

    """
    camera = as_camera(camera)
    values = to_float(camera.matrix)
    if np.iscomplexobj(values):
        raise ValueError("Only a real camera can be decomposed")
    left = values[:, :3]
    if rank(left, DEFAULT_RANK_TOL) < 3:
        raise RankError("The camera center lies on the plane at infinity")

    result = rq_decompose(left)
    R = -result.R if result.reflection and proper_rotation else result.R
    center = -np.linalg.solve(left, values[:, 3])
    return CalibrationDecomposition(K=result.K, R=R, C=center, reflection=result.reflection)


def image_of_absolute_conic(camera: Union[Camera, Matrix]) -> Conic2:
    """Return the image of the absolute conic, proportional to (K K^T)^-1.

    Raises
    ------
    DegenerateConfigurationError
        If the camera center is at infinity.

    """
    return project_space_conic(camera, ABSOLUTE_CONIC)


def calibration_from_iac(conic: Conic2) -> np.ndarray:
    """Recover the calibration matrix K from the image of the absolute conic.

    The inverse of the conic is proportional to K K^T. Reversing the order of rows and columns turns the upper
    triangular factor into the lower triangular Cholesky factor, which is unique.
    """
    values = to_float(conic.matrix)
    if np.iscomplexobj(values):
        raise ValueError("The image of the absolute conic of a real camera is real")
    dual = np.linalg.inv(values)
    dual = (dual + dual.T) / 2
    if np.trace(dual) < 0:
        dual = -dual
    flip = np.fliplr(np.eye(3))
    try:
        lower = np.linalg.cholesky(flip @ dual @ flip)
    except np.linalg.LinAlgError:
        raise RankError("The conic is not the image of the absolute conic under a real camera") from None
    K = flip @ lower @ flip
    return K / K[2, 2]


def essential_from_pose(R: Matrix, t: Matrix) -> EssentialMatrix:
    """Return the essential matrix [t]x R of the calibrated pair ([I|0], [R|t]).

    In the (x, y) order of ``fundamental_from_pair`` the joint image of that pair is cut out by the transpose.

    Raises
    ------
    ValueError
        If t is zero or R is not orthogonal.

    """
    R, t = as_matrix(R), as_matrix(t)
    if is_zero(t):
        raise ValueError("The translation of an essential matrix cannot be zero")
    defect = matmul(R, R.T) - identity(3, like=R)
    if is_exact(R):
        orthogonal = is_zero(defect)
    else:
        orthogonal = bool(np.max(np.abs(defect)) <= 1e-9)
    if not orthogonal:
        raise ValueError("The rotation of an essential matrix must satisfy R R^T = I")
    return EssentialMatrix(matrix=matmul(cross_matrix(t), R))


def is_essential(matrix: Union[BilinearForm, Matrix], tol: Optional[float] = None) -> bool:
    """Whether a 3x3 matrix has two equal singular values and a zero one, relative to the largest."""
    values = matrix.matrix if isinstance(matrix, BilinearForm) else as_matrix(matrix)
    if is_zero(values):
        raise ValueError("The zero matrix is not an essential matrix")
    if tol is None:
        tol = DEFAULT_ESSENTIAL_TOL
    _, s, _ = svd(values)
    return bool(s[2] / s[0] < tol and abs(s[0] - s[1]) / s[0] < tol)


def is_calibrated_camera(camera: Union[Camera, Matrix], conic: SpaceConic, image_conic: Conic2) -> bool:
    """Whether a camera maps a space conic onto an image conic, regularly along the conic.

    Raises
    ------
    RankError
        If the image conic is not smooth.

    """
    camera = as_camera(camera)
    if not image_conic.is_smooth:
        raise RankError("A calibrating image conic must be smooth")
    center = camera_center(camera).coordinates
    incidence = flatten(matmul(conic.plane.T, center))[0]
    if is_exact(conic.plane) and is_exact(center):
        if incidence == 0:
            return False
    elif abs(incidence) <= DEFAULT_RANK_TOL * np.linalg.norm(to_float(conic.plane)) * np.linalg.norm(to_float(center)):
        return False
    return space_conic_on_quadric(conic, pullback_cone(camera, image_conic))


def essential_poses(matrix: Union[BilinearForm, Matrix]) -> list[tuple[np.ndarray, np.ndarray]]:
    """Return the four poses (R, t) with [t]x R proportional to an essential matrix.

    The two rotations differ by the half turn about the baseline direction, each paired with both signs of the unit
    translation.
    """
    values = matrix.matrix if isinstance(matrix, BilinearForm) else as_matrix(matrix)
    U, _, V = svd(values)
    if np.linalg.det(U) < 0:
        U = -U
    if np.linalg.det(V) < 0:
        V = -V
    W = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    first = U @ W @ V.T
    second = U @ W.T @ V.T
    t = U[:, 2]
    return [(first, t), (first, -t), (second, t), (second, -t)]
