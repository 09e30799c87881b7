"""Two-view geometry: fundamental forms, epipoles, correspondence hyperplanes and the seven-point solver.

A correspondence (x, y) lies on the joint image of a camera pair with fundamental form A when x^T A y = 0, with x in the
first view and y in the second.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Union

from pydantic import BaseModel, Field, field_validator

from mvlab import events
from mvlab.controls import DEFAULT_RANK_TOL
from mvlab.numeric_core import (
    Matrix,
    as_matrix,
    binary_form_roots,
    cross_matrix,
    det,
    flatten,
    from_rows,
    hstack,
    identity,
    is_exact,
    is_zero,
    linear_combination,
    matmul,
    null_space,
    pencil_determinant,
    rank,
    reshape,
    select_rows,
    to_float,
    vstack,
    zeros,
)
from mvlab.outputs import SevenPointSolution
from mvlab.projective import Camera, HPoint2, ProjectiveModel, as_camera, camera_center
from mvlab.utils.custom_errors import DegenerateConfigurationError, RankError
from mvlab.utils.enums import Parallel


class BilinearForm(ProjectiveModel):
    """A nonzero 3x3 matrix A defined up to scale, read as the bilinear form x^T A y on pairs of image points."""

    matrix: Matrix

    @field_validator("matrix", mode="before")
    @classmethod
    def convert_matrix(cls, value) -> Matrix:
        return as_matrix(value)

    @field_validator("matrix")
    @classmethod
    def check_matrix(cls, value: Matrix) -> Matrix:
        if value.shape != (3, 3):
            raise ValueError(f"A bilinear form on pairs of image points is 3x3, not {value.shape[0]}x{value.shape[1]}")
        if is_zero(value):
            raise ValueError("The zero matrix does not define a bilinear form")
        return value

    @property
    def representative(self) -> Matrix:
        return self.matrix

    @property
    def rank(self) -> int:
        return rank(self.matrix, None if is_exact(self.matrix) else DEFAULT_RANK_TOL)

    def evaluate(self, x: Union[HPoint2, Matrix], y: Union[HPoint2, Matrix]):
        """The value x^T A y."""
        x = x.coordinates if isinstance(x, HPoint2) else x
        y = y.coordinates if isinstance(y, HPoint2) else y
        return flatten(matmul(x.T, self.matrix, y))[0]


class Correspondence(BaseModel, frozen=True, extra="forbid", arbitrary_types_allowed=True):
    """An ordered list of image points, one per view."""

    points: list[HPoint2] = Field(min_length=1)

    @field_validator("points", mode="before")
    @classmethod
    def convert_points(cls, value) -> list[HPoint2]:
        return [point if isinstance(point, HPoint2) else HPoint2(coordinates=point) for point in value]

    def __len__(self) -> int:
        return len(self.points)


def as_correspondence(correspondence) -> Correspondence:
    if isinstance(correspondence, Correspondence):
        return correspondence
    return Correspondence(points=correspondence)


def fundamental_from_pair(first: Union[Camera, Matrix], second: Union[Camera, Matrix]) -> BilinearForm:
    """Return the bilinear form cutting out the joint image of two cameras.

    Entry (i, j) is (-1)^(i + j) times the determinant of the 4x4 matrix stacking the first camera without row i on the
    second camera without row j.

    Parameters
    ----------
    first, second : Camera
        Two cameras with distinct centers.

    Returns
    -------
    form : BilinearForm
        The rank 2 form A with (P1 xi)^T A (P2 xi) = 0 for every world point xi.

    Raises
    ------
    DegenerateConfigurationError
        If the cameras share their center.

    """
    first, second = as_camera(first), as_camera(second)
    if camera_center(first) == camera_center(second):
        raise DegenerateConfigurationError("The joint image of two cameras needs distinct centers")

    entries = [
        [
            (-1) ** (i + j)
            * det(
                vstack(
                    select_rows(first.matrix, [r for r in range(3) if r != i]),
                    select_rows(second.matrix, [r for r in range(3) if r != j]),
                )
            )
            for j in range(3)
        ]
        for i in range(3)
    ]
    like = first.matrix if is_exact(first.matrix) and is_exact(second.matrix) else to_float(first.matrix)
    return BilinearForm(matrix=from_rows(entries, like))


def epipoles(form: BilinearForm) -> tuple[HPoint2, HPoint2]:
    """Return the left and right kernels (e1, e2) of a rank 2 form, e1^T A = 0 and A e2 = 0.

    The left kernel is the image of the second center in the first view, the right kernel the image of the first center
    in the second view.

    Raises
    ------
    RankError
        If the form does not have rank 2.

    """
    if form.rank != 2:
        raise RankError(f"Epipoles are defined for forms of rank 2, not {form.rank}")
    tol = None if form.exact else DEFAULT_RANK_TOL
    right = null_space(form.matrix, tol)[0]
    left = null_space(form.matrix.T, tol)[0]
    return HPoint2(coordinates=left), HPoint2(coordinates=right)


def correspondence_hyperplane(x: Union[HPoint2, Matrix, list], y: Union[HPoint2, Matrix, list]) -> Matrix:
    """The 9-covector h with h . vec(A) = x^T A y for every 3x3 matrix A, vec taken row by row."""
    x = x if isinstance(x, HPoint2) else HPoint2(coordinates=x)
    y = y if isinstance(y, HPoint2) else HPoint2(coordinates=y)
    return reshape(matmul(x.coordinates, y.coordinates.T), 9, 1)


def seven_point(correspondences: list) -> list[SevenPointSolution]:
    """Find the joint-image forms through seven correspondences in two views.

    The 7x9 design matrix has a two dimensional kernel spanned by F1 and F2. The singular members of the pencil
    λ F1 + μ F2 are the roots of the binary cubic det(λ F1 + μ F2), which covers every member, including F1 itself.

    Parameters
    ----------
    correspondences : list
        Seven two-view correspondences.

    Returns
    -------
    solutions : list[SevenPointSolution]
        Between one and three singular forms, each vanishing on all seven correspondences, in the exact tower when the
        root of the cubic is Gaussian-rational and in floating point otherwise.

    Raises
    ------
    DegenerateConfigurationError
        If the design matrix has rank below seven, or every member of the pencil is singular.

    """
    correspondences = [as_correspondence(correspondence) for correspondence in correspondences]
    if len(correspondences) != 7 or any(len(correspondence) != 2 for correspondence in correspondences):
        raise ValueError("The seven-point problem needs exactly seven correspondences between two views")

    design = vstack(*[correspondence_hyperplane(*c.points).T for c in correspondences])
    tol = None if is_exact(design) else DEFAULT_RANK_TOL
    if rank(design, tol) != 7:
        raise DegenerateConfigurationError("The seven correspondences do not impose independent conditions")

    first, second = (reshape(vector, 3, 3) for vector in null_space(design, tol))
    cubic = pencil_determinant(first, second)
    if cubic.is_zero():
        raise DegenerateConfigurationError("Every form through the seven correspondences is singular")

    return [
        SevenPointSolution(
            form=BilinearForm(matrix=linear_combination(root.point, [first, second])),
            root=root,
        )
        for root in binary_form_roots(cubic)
    ]


def solve_seven_point_batch(instances: list[list], parallel: Parallel = Parallel.Single) -> list:
    """Solve many seven-point problems, keeping the order of the input.

    A degenerate instance gives its exception in place of a list of solutions. Progress events are sent as instances
    complete.
    """

    def solve(instance):
        try:
            return seven_point(instance)
        except (DegenerateConfigurationError, ValueError) as err:
            return err

    results = []
    total = len(instances)
    if parallel == Parallel.Instances:
        with ThreadPoolExecutor() as executor:
            for index, result in enumerate(executor.map(solve, instances), start=1):
                results.append(result)
                events.notify(events.EventTypes.Progress, events.ProgressEventData("seven-point", index / total))
    else:
        for index, instance in enumerate(instances, start=1):
            results.append(solve(instance))
            events.notify(events.EventTypes.Progress, events.ProgressEventData("seven-point", index / total))
    return results


def cameras_from_fundamental(form: BilinearForm) -> tuple[Camera, Camera]:
    """Return a camera pair ([I|0], [[e]x A^T | e]) whose joint image is cut out by a rank 2 form.

    e is the right kernel of A.
    """
    if form.rank != 2:
        raise RankError(f"A camera pair comes from a form of rank 2, not {form.rank}")
    _, right = epipoles(form)
    e = right.coordinates
    A = form.matrix
    first = hstack(identity(3, like=A), zeros(3, 1, like=A))
    second = hstack(matmul(cross_matrix(e), A.T), e)
    return Camera(matrix=first), Camera(matrix=second)
