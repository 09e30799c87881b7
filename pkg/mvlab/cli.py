"""The mvlab command line: one JSON document in, one JSON document out.

Every command reads a JSON object (from a file, inline text or stdin with "-") and writes
``{"schema": "mvlab/1", "ok": true, "result": ...}`` or ``{"schema": "mvlab/1", "ok": false, "error": ...}``.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Optional

from pydantic import BaseModel, Field, ValidationError

from mvlab import events
from mvlab.calibration import (
    CalibratedConfig,
    decompose_camera,
    essential_from_pose,
    image_of_absolute_conic,
    is_essential,
)
from mvlab.cones import decalibration_fiber, pencil_classify, residual_calibration, twisted_pair
from mvlab.controls import Controls, set_controls
from mvlab.epipolar import Correspondence, fundamental_from_pair, seven_point, solve_seven_point_batch
from mvlab.multiview import (
    CameraConfig,
    constraint_polynomials,
    membership_rank,
    recover_homography,
    resect,
    triangulate,
)
from mvlab.numeric_core import Matrix
from mvlab.projective import Camera, Conic2, Quadric3, SpaceConic
from mvlab.scenes import simulate_scene
from mvlab.utils.custom_errors import RequestError, custom_pydantic_validation_error
from mvlab.utils.enums import Commands, ExitStatus, Modes, Parallel
from mvlab.utils.serialization import dump_matrix, dumps, load_matrix, to_json_value

SCHEMA = "mvlab/1"


class CommandRequest(BaseModel, extra="forbid"):
    """A single command with its input and the arithmetic settings to run it with."""

    command: Commands
    input: Optional[str] = None
    data: Optional[dict] = None
    mode: Modes = Modes.Exact
    tol: Optional[float] = Field(None, gt=0.0)
    seed: int = Field(0, ge=0)
    parallel: Parallel = Parallel.Single
    views: int = Field(2, ge=1)
    points: int = Field(7, ge=1)
    out: Optional[str] = None

    def controls(self) -> Controls:
        """Build the controls the command runs with. In float mode ``tol`` replaces every default tolerance."""
        properties = {"parallel": self.parallel, "seed": self.seed}
        if self.mode == Modes.Float and self.tol is not None:
            properties.update(rank_tol=self.tol, essential_tol=self.tol, root_tol=self.tol)
        return set_controls(self.mode, **properties)


# Payload readers
def _require(payload: dict, key: str):
    if key not in payload:
        raise RequestError(f'The input is missing the "{key}" field')
    return payload[key]


def _matrix(payload: dict, key: str, controls: Controls) -> Matrix:
    return load_matrix(_require(payload, key), controls.mode)


def _config(payload: dict, key: str, controls: Controls) -> CameraConfig:
    cameras = _require(payload, key)
    if not isinstance(cameras, list):
        raise RequestError(f'The "{key}" field must be a list of 3x4 matrices')
    return CameraConfig(cameras=[load_matrix(camera, controls.mode) for camera in cameras])


def _points(points: list, controls: Controls) -> list[Matrix]:
    if not isinstance(points, list):
        raise RequestError("A list of points was expected")
    return [load_matrix(point, controls.mode) for point in points]


def _correspondence(points: list, controls: Controls) -> Correspondence:
    return Correspondence(points=_points(points, controls))


def _conics(payload: dict, controls: Controls) -> list[Conic2]:
    return [Conic2(matrix=load_matrix(conic, controls.mode)) for conic in _require(payload, "conics")]


def _space_conic(payload: dict, controls: Controls) -> SpaceConic:
    conic = _require(payload, "space_conic")
    return SpaceConic(plane=load_matrix(_require(conic, "plane"), controls.mode),
                      quadric=load_matrix(_require(conic, "quadric"), controls.mode))


def _column(matrix: Matrix) -> list:
    return dump_matrix(matrix.T)[0] if matrix.shape[1] == 1 else dump_matrix(matrix)


def _dump_space_conic(conic: SpaceConic) -> dict:
    return {
        "plane": _column(conic.plane),
        "quadric": dump_matrix(conic.quadric.matrix),
        "degeneracy": conic.degeneracy.value,
    }


# Commands
def _fundamental(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    config = _config(payload, "cameras", controls)
    if len(config) != 2:
        raise RequestError("The fundamental command takes exactly two cameras")
    form = fundamental_from_pair(*config.cameras)
    return {"form": dump_matrix(form.matrix), "rank": form.rank}


def _dump_solutions(solutions: list) -> list[dict]:
    return [
        {
            "form": dump_matrix(solution.form.matrix),
            "root": to_json_value(solution.root.point),
            "multiplicity": solution.root.multiplicity,
            "tower": solution.root.tower.value,
            "real": solution.is_real,
        }
        for solution in solutions
    ]


def _seven_point(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    if "instances" in payload:
        instances = [[_correspondence(points, controls) for points in instance] for instance in payload["instances"]]
        results = solve_seven_point_batch(instances, controls.parallel)
        return {
            "instances": [
                {"error": str(result)} if isinstance(result, Exception) else {"solutions": _dump_solutions(result)}
                for result in results
            ]
        }
    correspondences = [_correspondence(points, controls) for points in _require(payload, "correspondences")]
    return {"solutions": _dump_solutions(seven_point(correspondences))}


def _triangulate(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    config = _config(payload, "cameras", controls)
    point = triangulate(config, _correspondence(_require(payload, "correspondence"), controls), controls.tolerance)
    return {"point": _column(point.coordinates)}


def _resect(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    camera = resect(_points(_require(payload, "world"), controls), _points(_require(payload, "image"), controls),
                    controls.tolerance)
    return {"camera": dump_matrix(camera.matrix)}


def _membership(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    config = _config(payload, "cameras", controls)
    result = membership_rank(config, _correspondence(_require(payload, "correspondence"), controls), controls.tolerance)
    return {"rank": result.rank, "on_joint_image": result.on_joint_image}


def _equivalence(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    homography = recover_homography(
        _config(payload, "cameras_a", controls), _config(payload, "cameras_b", controls), controls.tolerance
    )
    return {
        "equivalent": homography is not None,
        "homography": None if homography is None else dump_matrix(homography.matrix),
    }


def _constraints(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    constraints = constraint_polynomials(_config(payload, "cameras", controls))
    result = {
        "bilinear": {f"{i},{j}": dump_matrix(form.matrix) for (i, j), form in constraints.bilinear.items()},
        "trilinear": {f"{i},{j},{k}": len(bundle) for (i, j, k), bundle in constraints.trilinear.items()},
    }
    if "correspondence" in payload:
        values = constraints.evaluate(_correspondence(payload["correspondence"], controls))
        result["values"] = to_json_value(values)
    return result


def _decompose(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    decomposition = decompose_camera(Camera(matrix=_matrix(payload, "camera", controls)),
                                     payload.get("proper_rotation", True))
    return {
        "K": decomposition.K.tolist(),
        "R": decomposition.R.tolist(),
        "C": decomposition.C.tolist(),
        "reflection": decomposition.reflection,
    }


def _iac(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    return {"conic": dump_matrix(image_of_absolute_conic(_matrix(payload, "camera", controls)).matrix)}


def _essential(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    essential = essential_from_pose(_matrix(payload, "R", controls), _matrix(payload, "t", controls))
    return {"matrix": dump_matrix(essential.matrix)}


def _is_essential(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    return {"essential": is_essential(_matrix(payload, "matrix", controls), controls.essential_tolerance)}


def _classify_cones(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    quadrics = _require(payload, "quadrics")
    if not isinstance(quadrics, list) or len(quadrics) != 2:
        raise RequestError('The "quadrics" field must hold two symmetric 4x4 matrices')
    first, second = (Quadric3(matrix=load_matrix(quadric, controls.mode)) for quadric in quadrics)
    classification = pencil_classify(first, second, controls.tolerance, controls.root_tolerance)
    return {
        "class": classification.pencil_class.value,
        "singular": classification.singular,
        "determinant": to_json_value(list(classification.determinant.coefficients)),
        "roots": [
            {"root": to_json_value(root.root.point), "multiplicity": root.multiplicity, "rank": root.rank}
            for root in classification.roots
        ],
    }


def _fiber(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    fiber = decalibration_fiber(_config(payload, "cameras", controls), _conics(payload, controls), controls.tolerance)
    return {
        "length": len(fiber),
        "class": None if fiber.classification is None else fiber.classification.pencil_class.value,
        "conics": [_dump_space_conic(conic) for conic in fiber.conics],
    }


def _residual(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    calibrated = CalibratedConfig(
        config=_config(payload, "cameras", controls),
        image_conics=_conics(payload, controls),
        space_conic=_space_conic(payload, controls),
    )
    return {"space_conic": _dump_space_conic(residual_calibration(calibrated, controls.tolerance).space_conic)}


def _twist(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    pair = twisted_pair(_matrix(payload, "R", controls), _matrix(payload, "t", controls))
    return {
        "rotation_core": dump_matrix(pair.rotation_core),
        "rotation": dump_matrix(pair.rotation),
        "camera": dump_matrix(pair.camera.matrix),
        "twisted_camera": dump_matrix(pair.twisted_camera.matrix),
        "homography": dump_matrix(pair.homography.matrix),
        "degenerate": pair.degenerate,
    }


def _simulate(payload: dict, request: CommandRequest, controls: Controls) -> dict:
    return simulate_scene(views=request.views, points=request.points, seed=controls.seed)


COMMANDS: dict[Commands, Callable[[dict, CommandRequest, Controls], dict]] = {
    Commands.Fundamental: _fundamental,
    Commands.SevenPoint: _seven_point,
    Commands.Triangulate: _triangulate,
    Commands.Resect: _resect,
    Commands.Membership: _membership,
    Commands.Equivalence: _equivalence,
    Commands.Constraints: _constraints,
    Commands.Decompose: _decompose,
    Commands.IAC: _iac,
    Commands.Essential: _essential,
    Commands.IsEssential: _is_essential,
    Commands.ClassifyCones: _classify_cones,
    Commands.Fiber: _fiber,
    Commands.Residual: _residual,
    Commands.Twist: _twist,
    Commands.Simulate: _simulate,
}


def _envelope(result: Optional[dict] = None, error: Optional[str] = None) -> dict:
    if error is not None:
        return {"schema": SCHEMA, "ok": False, "error": error}
    return {"schema": SCHEMA, "ok": True, "result": result}


def _load_payload(request: CommandRequest) -> dict:
    if request.data is not None:
        return request.data
    if request.input is None:
        return {}
    if request.input == "-":
        text = sys.stdin.read()
    elif request.input.lstrip().startswith("{"):
        text = request.input
    else:
        text = Path(request.input).read_text()
    payload = json.loads(text)
    if not isinstance(payload, dict):
        raise RequestError("The input must be a JSON object")
    return payload


def execute(request: CommandRequest) -> tuple[dict, ExitStatus]:
    """Run a command and wrap its result or error in the JSON envelope.

    Parameters
    ----------
    request : CommandRequest
        The command, its input and its arithmetic settings.

    Returns
    -------
    document : dict
        The JSON-ready envelope.
    status : ExitStatus
        ``ParseFailure`` when the input cannot be read or lacks a field, ``PreconditionFailure`` when the geometry
        rejects the input, ``Success`` otherwise.

    """
    controls = request.controls()
    try:
        payload = _load_payload(request)
    except (OSError, json.JSONDecodeError, RequestError) as err:
        return _envelope(error=str(err)), ExitStatus.ParseFailure

    try:
        result = COMMANDS[request.command](payload, request, controls)
    except (RequestError, KeyError, TypeError) as err:
        return _envelope(error=str(err)), ExitStatus.ParseFailure
    except (ValueError, ZeroDivisionError) as err:
        return _envelope(error=str(err)), ExitStatus.PreconditionFailure

    events.notify(events.EventTypes.Message, f"mvlab {request.command.value} finished")
    return _envelope(result=to_json_value(result)), ExitStatus.Success


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mvlab", description="Multiview geometry with exact and float arithmetic.")
    parser.add_argument("command", choices=[command.value for command in Commands])
    parser.add_argument("input", nargs="?", default=None, help='a JSON file, inline JSON, or "-" for stdin')
    parser.add_argument("--mode", choices=[mode.value for mode in Modes], default=Modes.Exact.value)
    parser.add_argument("--tol", type=float, default=None, help="relative tolerance for float mode")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--parallel", choices=[option.value for option in Parallel], default=Parallel.Single.value)
    parser.add_argument("--views", type=int, default=2)
    parser.add_argument("--points", type=int, default=7)
    parser.add_argument("--out", default=None, help="write the JSON document to a file instead of stdout")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    arguments = build_parser().parse_args(argv)
    try:
        request = CommandRequest(**vars(arguments))
    except ValidationError as exc:
        errors = custom_pydantic_validation_error(exc.errors())
        message = "; ".join(f'{".".join(str(part) for part in error["loc"])}: {error["msg"]}' for error in errors)
        document, status = _envelope(error=message), ExitStatus.ParseFailure
    else:
        document, status = execute(request)

    text = dumps(document)
    out = getattr(arguments, "out", None)
    if out:
        Path(out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    return status.value


if __name__ == "__main__":
    sys.exit(main())
