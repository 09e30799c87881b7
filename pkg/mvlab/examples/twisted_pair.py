"""Twisted pair of a calibrated camera pair and the residual calibrating conic"""

import sympy as sp

import mvlab

# A rational rotation and a unit baseline, so the twisted pair is not degenerate
R = sp.ImmutableMatrix([[3, -4, 0], [4, 3, 0], [0, 0, 5]]) / 5
t = sp.ImmutableMatrix([sp.Rational(2, 3), sp.Rational(1, 3), sp.Rational(2, 3)])

pair = mvlab.cones.twisted_pair(R, t)
print("Half turn about the baseline:")
sp.pprint(pair.rotation_core)

# The pair ([I|0], R[I|t]) with circles as image conics is calibrated by the absolute conic
first = mvlab.Camera(matrix=sp.Matrix.hstack(sp.eye(3), sp.zeros(3, 1)))
second = pair.camera
calibrated = mvlab.calibration.CalibratedConfig(
    config=[first, second],
    image_conics=[sp.eye(3), sp.eye(3)],
    space_conic=mvlab.projective.ABSOLUTE_CONIC,
)

# The other conic in the decalibration fiber lies on the plane (t.t) w + 2 t.v = 0
residual = mvlab.cones.residual_calibration(calibrated)
print("Residual conic plane:", list(residual.space_conic.plane))
print("Degeneracy:", residual.space_conic.degeneracy)

# Swapping the conics twice gives back the absolute conic
again = mvlab.cones.residual_calibration(residual)
print("Involution:", again.space_conic == mvlab.projective.ABSOLUTE_CONIC)

# An isotropic baseline cannot be normalised, and the residual conic becomes a doubled line
isotropic = sp.ImmutableMatrix([1, sp.I, 0])
print("Degenerate twisted pair:", mvlab.cones.twisted_pair(sp.eye(3), isotropic).degenerate)
