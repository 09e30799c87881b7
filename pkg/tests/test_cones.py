"""Test the cones module."""

from unittest import mock

import numpy as np
import pytest
import sympy as sp

import mvlab.cones
from mvlab.calibration import CalibratedConfig
from mvlab.cones import (
    RANK_THREE_CLASSES,
    cone_family_dimension,
    cone_over_space_conic,
    decalibration_fiber,
    intersect_two_smooth_case,
    pencil_classify,
    quadrics_through,
    rank_two_members,
    residual_calibration,
    split_plane_pair,
    twisted_pair,
)
from mvlab.multiview import CameraConfig, recover_homography
from mvlab.numeric_core import as_matrix, is_proportional, matmul
from mvlab.projective import (
    ABSOLUTE_CONIC,
    EUCLIDEAN_CONIC,
    Camera,
    Conic2,
    HPoint3,
    Quadric3,
    SpaceConic,
    space_conic_on_quadric,
)
from mvlab.scenes import twisted_cubic_cones
from mvlab.utils.custom_errors import DegenerateConfigurationError, PencilClassError, RankError
from mvlab.utils.enums import Degeneracy, PencilClasses

ROTATION = sp.ImmutableMatrix([[3, -4, 0], [4, 3, 0], [0, 0, 5]]) / 5
TRANSLATION = sp.ImmutableMatrix([sp.Rational(2, 3), sp.Rational(1, 3), sp.Rational(2, 3)])
ORIGIN_CAMERA = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
INFINITE_CAMERA = [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]


@pytest.fixture
def quartic_cones():
    """Two cones whose pencil has four distinct singular members, all of rank 3."""
    return Quadric3(matrix=sp.diag(1, 2, -3, 0)), Quadric3(matrix=sp.diag(0, 1, 5, -7))


def calibrated_pair(R, t) -> CalibratedConfig:
    """The pair ([I|0], R[I|t]) calibrated by the absolute conic, both image conics being the identity."""
    second = matmul(as_matrix(R), sp.eye(3).row_join(as_matrix(t)))
    return CalibratedConfig(
        config=[ORIGIN_CAMERA, second], image_conics=[sp.eye(3), sp.eye(3)], space_conic=ABSOLUTE_CONIC
    )


class TestPencilClassify:
    """Tests the classification of the intersection of two cones."""

    def test_two_smooth_conics(self, two_circle_cones) -> None:
        """The double root of λ μ (λ + μ)^2 has a member of rank 2."""
        classification = pencil_classify(*two_circle_cones)
        assert classification.pencil_class == PencilClasses.TwoSmoothConics
        assert not classification.singular
        assert classification.signature == ((1, 3), (1, 3), (2, 2))

    def test_conic_plus_double_line(self, double_line_cones) -> None:
        """A pencil with identically vanishing determinant meets in a conic and a doubled line."""
        classification = pencil_classify(*double_line_cones)
        assert classification.pencil_class == PencilClasses.ConicPlusDoubleLine
        assert classification.singular
        assert classification.roots == []

    def test_cubic_plus_line(self) -> None:
        """The cones over the twisted cubic have two double roots of rank 3."""
        classification = pencil_classify(*twisted_cubic_cones())
        assert classification.pencil_class == PencilClasses.CubicPlusLine
        assert classification.signature == ((2, 3), (2, 3))

    def test_cubic_plus_line_moved(self) -> None:
        """The class does not depend on the coordinates."""
        homography = sp.ImmutableMatrix([[1, 2, 0, 0], [0, 1, 0, 3], [1, 0, 1, 0], [0, 0, 1, 1]])
        assert pencil_classify(*twisted_cubic_cones(homography)).pencil_class == PencilClasses.CubicPlusLine

    def test_irreducible_quartic(self, quartic_cones) -> None:
        """Four simple roots of rank 3 give an irreducible quartic."""
        classification = pencil_classify(*quartic_cones)
        assert classification.pencil_class == PencilClasses.IrreducibleQuartic
        assert classification.signature == ((1, 3), (1, 3), (1, 3), (1, 3))

    def test_irreducible_quartic_float(self, quartic_cones) -> None:
        """Float cones should be classified with the tolerance."""
        first, second = (Quadric3(matrix=np.array(cone.matrix.tolist(), dtype=float)) for cone in quartic_cones)
        assert pencil_classify(first, second).pencil_class == PencilClasses.IrreducibleQuartic

    @pytest.mark.parametrize("root_tol, expected", [(None, 1e-7), (1e-12, 1e-12)])
    def test_root_tolerance(self, quartic_cones, root_tol: float, expected: float) -> None:
        """The determinant roots are found with the root tolerance, or the rank tolerance without one."""
        first, second = (Quadric3(matrix=np.array(cone.matrix.tolist(), dtype=float)) for cone in quartic_cones)
        roots = mock.MagicMock(wraps=mvlab.cones.binary_form_roots)
        with mock.patch.object(mvlab.cones, "binary_form_roots", roots):
            pencil_classify(first, second, 1e-7, root_tol)
        assert roots.call_args[0][1] == expected

    @pytest.mark.parametrize(
        "multiplicities, pencil_class",
        [
            ((1, 1, 1, 1), PencilClasses.IrreducibleQuartic),
            ((1, 1, 2), PencilClasses.IrreducibleQuartic),
            ((1, 3), PencilClasses.IrreducibleQuartic),
            ((2, 2), PencilClasses.CubicPlusLine),
        ],
    )
    def test_rank_three_table(self, multiplicities: tuple, pencil_class: PencilClasses) -> None:
        """Only two double roots of rank 3 give a twisted cubic and a line."""
        assert RANK_THREE_CLASSES[multiplicities] == pencil_class

    def test_not_a_cone(self, two_circle_cones) -> None:
        """Both quadrics must have rank 3."""
        with pytest.raises(RankError, match="A conic cone has rank 3, not 4"):
            pencil_classify(Quadric3(matrix=sp.eye(4)), two_circle_cones[1])

    def test_shared_vertex(self) -> None:
        """Cones with the same cone point are rejected."""
        with pytest.raises(DegenerateConfigurationError):
            pencil_classify(Quadric3(matrix=sp.diag(1, 1, 1, 0)), Quadric3(matrix=sp.diag(1, 2, -1, 0)))


class TestSplitting:
    """Tests the rank 2 members of a pencil and the plane pairs they factor into."""

    def test_rank_two_members(self, two_circle_cones) -> None:
        """The only member of rank 2 is X^2 - W^2 up to scale."""
        members = rank_two_members(*two_circle_cones)
        assert len(members) == 1
        assert is_proportional(members[0], sp.ImmutableMatrix(sp.diag(1, 0, 0, -1)))

    @pytest.mark.parametrize(
        "member, planes",
        [
            (sp.diag(1, 0, 0, -1), [[1, 0, 0, 1], [1, 0, 0, -1]]),
            (sp.diag(1, 1, 0, 0), [[1, sp.I, 0, 0], [1, -sp.I, 0, 0]]),
            ([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]], [[1, 0, 0, 0], [0, 1, 0, 0]]),
            (sp.diag(0, 0, 4, 0), [[0, 0, 1, 0], [0, 0, 1, 0]]),
        ],
    )
    def test_split_plane_pair(self, member, planes: list) -> None:
        """The planes should be the linear factors of the quadratic form."""
        found = split_plane_pair(member)
        expected = [as_matrix(plane) for plane in planes]
        assert any(
            is_proportional(found[0], first) and is_proportional(found[1], second)
            for first, second in (expected, expected[::-1])
        )

    def test_split_irrational_factors(self) -> None:
        """Factors outside the Gaussian rationals are found in floating point."""
        first, second = split_plane_pair(sp.diag(1, -2, 0, 0))
        product = np.outer(np.ravel(first), np.ravel(second))
        product = (product + product.T) / 2
        assert is_proportional(product, np.diag([1.0, -2.0, 0.0, 0.0]))

    def test_split_full_rank(self) -> None:
        """Only matrices of rank 1 or 2 are plane pairs."""
        with pytest.raises(RankError, match="A pair of planes has rank 1 or 2, not 3"):
            split_plane_pair(sp.diag(1, 1, 1, 0))

    def test_two_smooth_conics(self, two_circle_cones) -> None:
        """The cones meet in the conics cut by X = W and X = -W."""
        conics = intersect_two_smooth_case(*two_circle_cones)
        planes = [conic.plane for conic in conics]
        assert all(conic.degeneracy == Degeneracy.Smooth for conic in conics)
        assert any(is_proportional(plane, as_matrix([1, 0, 0, -1])) for plane in planes)
        assert any(is_proportional(plane, as_matrix([1, 0, 0, 1])) for plane in planes)

    def test_conic_plus_double_line(self, double_line_cones) -> None:
        """The singular pencil splits into a smooth conic on W = 0 and a doubled line on 2X = Y + Z."""
        conics = intersect_two_smooth_case(*double_line_cones)
        by_degeneracy = {conic.degeneracy: conic.plane for conic in conics}
        assert is_proportional(by_degeneracy[Degeneracy.Smooth], as_matrix([0, 0, 0, 1]))
        assert is_proportional(by_degeneracy[Degeneracy.DoubleLine], as_matrix([2, -1, -1, 0]))

    def test_irreducible_does_not_split(self, quartic_cones) -> None:
        """An irreducible quartic has no conic components."""
        with pytest.raises(PencilClassError):
            intersect_two_smooth_case(*quartic_cones)


class TestDecalibrationFiber:
    """Tests the space conics mapped onto given image conics."""

    def test_two_views(self) -> None:
        """Cameras centered at the cone points of the two-circle cones have a fiber of two conics."""
        fiber = decalibration_fiber([ORIGIN_CAMERA, INFINITE_CAMERA], [EUCLIDEAN_CONIC, EUCLIDEAN_CONIC])
        assert len(fiber) == 2
        assert fiber.degeneracies == [Degeneracy.Smooth, Degeneracy.Smooth]
        assert fiber.classification.pencil_class == PencilClasses.TwoSmoothConics

    def test_calibrated_pair(self, standard_pair) -> None:
        """A calibrated pair has the absolute conic and one other conic in its fiber."""
        fiber = decalibration_fiber(standard_pair, [sp.eye(3), sp.eye(3)])
        assert len(fiber) == 2
        assert ABSOLUTE_CONIC in fiber.conics

    def test_calibrated_triple(self, general_triple) -> None:
        """A third view removes the residual conic."""
        fiber = decalibration_fiber(general_triple, [sp.eye(3)] * 3)
        assert fiber.conics == [ABSOLUTE_CONIC]

    def test_empty_fiber(self) -> None:
        """Cones meeting in an irreducible quartic have an empty fiber."""
        fiber = decalibration_fiber([ORIGIN_CAMERA, INFINITE_CAMERA], [sp.diag(1, 2, -3), sp.diag(1, 5, -7)])
        assert len(fiber) == 0
        assert fiber.classification.pencil_class == PencilClasses.IrreducibleQuartic

    def test_one_camera(self) -> None:
        """A fiber needs two cameras."""
        with pytest.raises(ValueError, match="A decalibration fiber needs at least two cameras"):
            decalibration_fiber([ORIGIN_CAMERA], [EUCLIDEAN_CONIC])

    def test_conic_count(self, standard_pair) -> None:
        """There must be one conic per camera."""
        with pytest.raises(ValueError, match="There are 1 image conics for 2 cameras"):
            decalibration_fiber(standard_pair, [EUCLIDEAN_CONIC])

    def test_shared_center(self) -> None:
        """Cameras sharing a center are not a general configuration."""
        with pytest.raises(DegenerateConfigurationError):
            decalibration_fiber([ORIGIN_CAMERA, ORIGIN_CAMERA], [EUCLIDEAN_CONIC, EUCLIDEAN_CONIC])

    def test_singular_image_conic(self, standard_pair) -> None:
        """Image conics must be smooth."""
        with pytest.raises(RankError):
            decalibration_fiber(standard_pair, [EUCLIDEAN_CONIC, Conic2(matrix=sp.diag(1, 1, 0))])


class TestResidualCalibration:
    """Tests the residual calibration and twisted pairs."""

    def test_residual_plane(self) -> None:
        """The residual conic of ([I|0], R[I|t]) lies on the plane n w + 2 t . v = 0, with n = t^T t."""
        residual = residual_calibration(calibrated_pair(ROTATION, TRANSLATION))
        assert residual.space_conic != ABSOLUTE_CONIC
        assert is_proportional(residual.space_conic.plane, as_matrix([4, 2, 4, 3]))
        assert residual.space_conic.degeneracy == Degeneracy.Smooth

    def test_involution(self) -> None:
        """Taking the residual twice gives back the absolute conic."""
        calibrated = calibrated_pair(ROTATION, TRANSLATION)
        assert residual_calibration(residual_calibration(calibrated)).space_conic == ABSOLUTE_CONIC

    def test_isotropic_translation(self) -> None:
        """With t^T t = 0 the residual is a doubled line on the plane t . v = 0."""
        residual = residual_calibration(calibrated_pair(sp.eye(3), [1, sp.I, 0]))
        assert residual.space_conic.degeneracy == Degeneracy.DoubleLine
        assert is_proportional(residual.space_conic.plane, as_matrix([1, sp.I, 0, 0]))

    def test_three_views(self, general_triple) -> None:
        """The residual calibration is defined for pairs only."""
        calibrated = CalibratedConfig(config=general_triple, image_conics=[sp.eye(3)] * 3, space_conic=ABSOLUTE_CONIC)
        with pytest.raises(ValueError, match="The residual calibration is defined for two cameras, not 3"):
            residual_calibration(calibrated)

    def test_twisted_pair(self) -> None:
        """The half turn about e1 and the coordinate change for a unit translation along e1."""
        pair = twisted_pair(sp.eye(3), [1, 0, 0])
        assert pair.rotation_core == sp.ImmutableMatrix(sp.diag(1, -1, -1))
        assert list(pair.homography.matrix.row(3)) == [-2, 0, 0, 1]
        assert not pair.degenerate

    def test_twisted_camera(self) -> None:
        """The twisted camera moved by H should be R[I|-t], while H fixes [I|0]."""
        pair = twisted_pair(ROTATION, TRANSLATION)
        H = pair.homography.matrix
        origin = Camera(matrix=ORIGIN_CAMERA)
        assert Camera(matrix=matmul(origin.matrix, H)) == origin
        assert Camera(matrix=matmul(pair.twisted_camera.matrix, H)) == Camera(
            matrix=matmul(ROTATION, sp.eye(3).row_join(-TRANSLATION))
        )
        assert pair.camera.center == HPoint3(coordinates=list(-TRANSLATION) + [1])

    def test_twisted_pair_equivalent(self) -> None:
        """The twisted configuration is projectively equivalent to ([I|0], R[I|-t])."""
        pair = twisted_pair(ROTATION, TRANSLATION)
        reflected = CameraConfig(cameras=[ORIGIN_CAMERA, matmul(ROTATION, sp.eye(3).row_join(-TRANSLATION))])
        homography = recover_homography([ORIGIN_CAMERA, pair.twisted_camera], reflected)
        assert homography == pair.homography

    def test_degenerate_twisted_pair(self) -> None:
        """An isotropic translation gives a degenerate pair that still moves onto R[I|-t]."""
        t = sp.ImmutableMatrix([1, sp.I, 0])
        pair = twisted_pair(sp.eye(3), t)
        assert pair.degenerate
        assert Camera(matrix=matmul(pair.twisted_camera.matrix, pair.homography.matrix)) == Camera(
            matrix=sp.eye(3).row_join(-t)
        )

    def test_zero_translation(self) -> None:
        """A twisted pair needs a baseline."""
        with pytest.raises(ValueError, match="A twisted pair needs a nonzero translation"):
            twisted_pair(sp.eye(3), [0, 0, 0])


class TestQuadricSpaces:
    """Tests the quadrics through a curve and the cones among them."""

    def test_quadrics_through_conic(self) -> None:
        """A smooth conic lies on a five dimensional space of quadrics, with a three dimensional family of cones."""
        space = quadrics_through(ABSOLUTE_CONIC)
        assert space.dimension == 5
        for quadric in space.basis:
            assert space_conic_on_quadric(ABSOLUTE_CONIC, quadric)
        assert cone_family_dimension(space) == 3

    def test_quadrics_through_pencil(self, two_circle_cones) -> None:
        """Two cones meeting properly span the quadrics through their intersection."""
        space = quadrics_through(two_circle_cones)
        assert space.dimension == 2
        assert cone_family_dimension(space) == 0

    def test_quadrics_through_singular_pencil(self, double_line_cones) -> None:
        """Every member of a singular pencil is a cone."""
        space = quadrics_through(double_line_cones)
        assert space.dimension == 2
        assert cone_family_dimension(space) == 1

    def test_shared_component(self) -> None:
        """Quadrics sharing a plane do not meet in a curve."""
        first = Quadric3(matrix=[[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
        second = Quadric3(matrix=[[0, 0, 1, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]])
        with pytest.raises(DegenerateConfigurationError):
            quadrics_through((first, second))

    def test_float_curve(self) -> None:
        """The quadrics through a curve are computed exactly."""
        conic = SpaceConic(plane=np.array([0.0, 0.0, 0.0, 1.0]), quadric=sp.diag(1, 1, 1, 0))
        with pytest.raises(ValueError, match="exact arithmetic"):
            quadrics_through(conic)

    def test_cone_over_space_conic(self) -> None:
        """The cone joining the origin to the absolute conic is X^2 + Y^2 + Z^2."""
        cone = cone_over_space_conic(ABSOLUTE_CONIC, [0, 0, 0, 1])
        assert cone == Quadric3(matrix=sp.diag(1, 1, 1, 0))

    def test_cone_vertex(self) -> None:
        """The cone point of the cone is the given point."""
        conic = SpaceConic(plane=[1, 0, 0, -1], quadric=sp.diag(1, 1, 1, 0))
        vertex = HPoint3(coordinates=[1, 2, 3, 5])
        cone = cone_over_space_conic(conic, vertex)
        assert cone.vertex == vertex
        assert space_conic_on_quadric(conic, cone)

    def test_cone_from_plane(self) -> None:
        """A point on the plane of the conic does not give a cone."""
        with pytest.raises(DegenerateConfigurationError):
            cone_over_space_conic(ABSOLUTE_CONIC, [1, 0, 0, 0])
