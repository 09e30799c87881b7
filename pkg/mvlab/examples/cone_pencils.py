"""The four ways two conic cones with distinct cone points can meet"""

import numpy as np
import sympy as sp

import mvlab

# Two cones over circles, meeting in the conics on the planes X = W and X = -W
first = mvlab.Quadric3(matrix=sp.diag(1, 1, 1, 0))
second = mvlab.Quadric3(matrix=sp.diag(0, 1, 1, 1))
print(mvlab.cones.pencil_classify(first, second))
for conic in mvlab.cones.intersect_two_smooth_case(first, second):
    print("Plane:", list(conic.plane), conic.degeneracy)

# X^2 - YZ and (X - W)^2 - (Y - W)(Z - W) meet in a conic plus a doubled line
first = mvlab.Quadric3(matrix=[[1, 0, 0, 0], [0, 0, "-1/2", 0], [0, "-1/2", 0, 0], [0, 0, 0, 0]])
second = mvlab.Quadric3(
    matrix=[[1, 0, 0, -1], [0, 0, "-1/2", "1/2"], [0, "-1/2", 0, "1/2"], [-1, "1/2", "1/2", 0]]
)
print(mvlab.cones.pencil_classify(first, second))

# Two cones over the twisted cubic meet in the cubic and the line joining their cone points
print(mvlab.cones.pencil_classify(*mvlab.scenes.twisted_cubic_cones()))

# Random cones meet in an irreducible quartic
rng = np.random.default_rng(3)
config = mvlab.scenes.random_configuration(rng, 2)
cones = [mvlab.projective.pullback_cone(camera, mvlab.projective.EUCLIDEAN_CONIC) for camera in config.cameras]
print(mvlab.cones.pencil_classify(*cones))
