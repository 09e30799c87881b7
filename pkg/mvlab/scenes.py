"""Random exact scenes for experiments and tests: rotations, cameras, configurations, calibrated configurations and the
special cone pairs whose intersections have a known shape."""

from typing import Optional

import numpy as np
import sympy as sp

from mvlab import events
from mvlab.calibration import CalibratedConfig
from mvlab.epipolar import Correspondence, correspondence_hyperplane
from mvlab.multiview import CameraConfig
from mvlab.numeric_core import Matrix, det, flatten, matmul, rank, vstack
from mvlab.projective import (
    ABSOLUTE_CONIC,
    Camera,
    HPoint3,
    Quadric3,
    SpaceConic,
    camera_center,
    project_space_conic,
    transform_space_conic,
)
from mvlab.utils.custom_errors import DegenerateConfigurationError
from mvlab.utils.serialization import dump_matrix

MAX_ATTEMPTS = 100


def random_rotation(rng: np.random.Generator, height: int = 5) -> sp.ImmutableMatrix:
    """Return an exact rational rotation from a random integer quaternion (a, b, c, d).

    The matrix of the quaternion divided by a^2 + b^2 + c^2 + d^2 is orthogonal with determinant 1.
    """
    while True:
        a, b, c, d = (int(value) for value in rng.integers(-height, height + 1, size=4))
        norm = a * a + b * b + c * c + d * d
        if norm:
            break
    rows = [
        [a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)],
        [2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)],
        [2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d],
    ]
    return sp.ImmutableMatrix(rows) / norm


def random_integer_matrix(rng: np.random.Generator, rows: int, columns: int, bound: int = 9) -> sp.ImmutableMatrix:
    return sp.ImmutableMatrix(rng.integers(-bound, bound + 1, size=(rows, columns)).tolist())


def random_camera(rng: np.random.Generator, bound: int = 9) -> Camera:
    """Return a camera with integer entries of absolute value at most ``bound``."""
    for _ in range(MAX_ATTEMPTS):
        matrix = random_integer_matrix(rng, 3, 4, bound)
        if rank(matrix) == 3:
            return Camera(matrix=matrix)
        events.notify(events.EventTypes.Message, "Discarded a random camera matrix of rank below 3")
    raise DegenerateConfigurationError(f"No camera of rank 3 was drawn in {MAX_ATTEMPTS} attempts")


def random_configuration(
    rng: np.random.Generator, views: int, bound: int = 9, non_collinear: bool = True
) -> CameraConfig:
    """Return a general configuration of random integer cameras, with non-collinear centers for three or more views."""
    for _ in range(MAX_ATTEMPTS):
        config = CameraConfig(cameras=[random_camera(rng, bound) for _ in range(views)])
        if not config.is_general:
            continue
        if non_collinear and views >= 3 and config.is_collinear:
            continue
        return config
    raise DegenerateConfigurationError(f"No general configuration of {views} cameras was drawn")


def random_world_point(rng: np.random.Generator, bound: int = 9) -> HPoint3:
    while True:
        coordinates = rng.integers(-bound, bound + 1, size=4).tolist()
        if any(coordinates):
            return HPoint3(coordinates=coordinates)


def project(config: CameraConfig, point: HPoint3) -> Correspondence:
    """Image a world point in every view.

    Raises
    ------
    DegenerateConfigurationError
        If the point is the center of one of the cameras.

    """
    points = []
    for camera in config.cameras:
        image = matmul(camera.matrix, point.coordinates)
        if all(sp.expand(value) == 0 for value in flatten(image)):
            raise DegenerateConfigurationError("A camera center has no image")
        points.append(image)
    return Correspondence(points=points)


def random_space_conic(rng: np.random.Generator, bound: int = 3) -> SpaceConic:
    """Move the absolute conic by a random invertible integer homography."""
    for _ in range(MAX_ATTEMPTS):
        homography = random_integer_matrix(rng, 4, 4, bound)
        if det(homography) != 0:
            return transform_space_conic(ABSOLUTE_CONIC, homography)
    raise DegenerateConfigurationError(f"No invertible homography was drawn in {MAX_ATTEMPTS} attempts")


def random_calibrated_configuration(
    rng: np.random.Generator, views: int, conic: Optional[SpaceConic] = None, bound: int = 9
) -> CalibratedConfig:
    """Draw cameras with centers off the plane of a space conic and record the image conics."""
    if conic is None:
        conic = random_space_conic(rng)
    for _ in range(MAX_ATTEMPTS):
        config = random_configuration(rng, views, bound)
        if any(
            flatten(matmul(conic.plane.T, camera_center(camera).coordinates))[0] == 0 for camera in config.cameras
        ):
            events.notify(events.EventTypes.Message, "Discarded a configuration with a center on the conic plane")
            continue
        image_conics = [project_space_conic(camera, conic) for camera in config.cameras]
        return CalibratedConfig(config=config, image_conics=image_conics, space_conic=conic)
    raise DegenerateConfigurationError(f"No calibrated configuration of {views} cameras was drawn")


def isotropic_translation(rng: np.random.Generator, height: int = 5) -> sp.ImmutableMatrix:
    """Return a nonzero Gaussian-rational translation t with t^T t = 0, a rotated multiple of (1, i, 0)."""
    rotation = random_rotation(rng, height)
    scale = 0
    while scale == 0:
        scale = int(rng.integers(-height, height + 1))
    return sp.ImmutableMatrix((scale * rotation * sp.Matrix([1, sp.I, 0])).applyfunc(sp.expand))


def random_unit_translation(rng: np.random.Generator, height: int = 5) -> sp.ImmutableMatrix:
    """A rational translation of unit length, a rotated first basis vector."""
    return sp.ImmutableMatrix(random_rotation(rng, height) * sp.Matrix([1, 0, 0]))


def twisted_cubic_cones(homography: Optional[Matrix] = None) -> tuple[Quadric3, Quadric3]:
    """Return the cones Z^2 - Y W and Y^2 - X Z over the twisted cubic (s^3 : s^2 t : s t^2 : t^3).

    Both cones contain the cubic and meet again in the line through their cone points (1:0:0:0) and (0:0:0:1).
    """
    half = sp.Rational(1, 2)
    first = sp.ImmutableMatrix([[0, 0, 0, 0], [0, 0, 0, -half], [0, 0, 1, 0], [0, -half, 0, 0]])
    second = sp.ImmutableMatrix([[0, 0, -half, 0], [0, 1, 0, 0], [-half, 0, 0, 0], [0, 0, 0, 0]])
    if homography is not None:
        first = matmul(homography.T, first, homography)
        second = matmul(homography.T, second, homography)
    return Quadric3(matrix=first), Quadric3(matrix=second)


def _two_view_design_rank(correspondences: list[Correspondence]) -> int:
    design = vstack(*[correspondence_hyperplane(*correspondence.points).T for correspondence in correspondences])
    return rank(design)


def _draw_scene(rng: np.random.Generator, views: int, points: int) -> tuple[CameraConfig, list, list]:
    config = random_configuration(rng, views)
    world, correspondences = [], []
    while len(correspondences) < points:
        point = random_world_point(rng)
        try:
            correspondence = project(config, point)
        except DegenerateConfigurationError:
            continue
        world.append(point)
        correspondences.append(correspondence)
    return config, world, correspondences


def simulate_scene(views: int = 2, points: int = 7, seed: int = 0) -> dict:
    """Draw a random configuration and project random world points into it, as JSON-ready data.

    Two-view scenes are redrawn until the correspondences impose min(points, 8) independent conditions on the joint
    image form, so a seven point scene can always be passed to ``seven_point``.
    """
    rng = np.random.default_rng(seed)
    for _ in range(MAX_ATTEMPTS):
        config, world, correspondences = _draw_scene(rng, views, points)
        if views != 2 or _two_view_design_rank(correspondences) == min(points, 8):
            break
        events.notify(events.EventTypes.Message, "Discarded a scene whose correspondences are not independent")
    else:
        raise DegenerateConfigurationError(f"No generic scene of {points} points in two views was drawn")
    return {
        "cameras": [dump_matrix(camera.matrix) for camera in config.cameras],
        "world": [dump_matrix(point.coordinates.T)[0] for point in world],
        "correspondences": [
            [dump_matrix(image.coordinates.T)[0] for image in correspondence.points]
            for correspondence in correspondences
        ],
    }
