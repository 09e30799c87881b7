from mvlab import calibration, cones, epipolar, events, multiview, numeric_core, projective, scenes
from mvlab.controls import set_controls
from mvlab.multiview import CameraConfig
from mvlab.projective import Camera, Conic2, HPoint2, HPoint3, Homography, Quadric3, SpaceConic

__all__ = [
    "Camera",
    "CameraConfig",
    "Conic2",
    "HPoint2",
    "HPoint3",
    "Homography",
    "Quadric3",
    "SpaceConic",
    "set_controls",
    "calibration",
    "cones",
    "epipolar",
    "events",
    "multiview",
    "numeric_core",
    "projective",
    "scenes",
]
