from typing import Literal, Optional, Union

import prettytable
from pydantic import BaseModel, Field, ValidationError

from mvlab.utils.custom_errors import custom_pydantic_validation_error
from mvlab.utils.enums import Modes, Parallel

DEFAULT_RANK_TOL = 1e-10
DEFAULT_ESSENTIAL_TOL = 1e-8
DEFAULT_ROOT_TOL = 1e-9
DEFAULT_PROPORTIONAL_TOL = 1e-8


class Exact(BaseModel, validate_assignment=True, extra="forbid"):
    """Defines the controls for exact computation over the rationals and the Gaussian rationals."""

    mode: Literal[Modes.Exact] = Modes.Exact
    parallel: Parallel = Parallel.Single
    seed: int = Field(0, ge=0)

    @property
    def tolerance(self) -> Optional[float]:
        """The relative rank tolerance to pass to the geometric operations, None when arithmetic is exact."""
        return None

    @property
    def essential_tolerance(self) -> Optional[float]:
        """The tolerance on the singular values of an essential matrix, None for the default."""
        return None

    @property
    def root_tolerance(self) -> Optional[float]:
        return None

    def __repr__(self) -> str:
        table = prettytable.PrettyTable()
        table.field_names = ["Property", "Value"]
        table.add_rows([[k, v] for k, v in self.__dict__.items()])
        return table.get_string()


class Float(Exact):
    """Defines the additional tolerances for computation in double precision."""

    mode: Literal[Modes.Float] = Modes.Float
    rank_tol: float = Field(DEFAULT_RANK_TOL, gt=0.0)
    essential_tol: float = Field(DEFAULT_ESSENTIAL_TOL, gt=0.0)
    root_tol: float = Field(DEFAULT_ROOT_TOL, gt=0.0)

    @property
    def tolerance(self) -> Optional[float]:
        return self.rank_tol

    @property
    def essential_tolerance(self) -> Optional[float]:
        return self.essential_tol

    @property
    def root_tolerance(self) -> Optional[float]:
        return self.root_tol


Controls = Union[Exact, Float]


def set_controls(mode: Modes = Modes.Exact, **properties) -> Controls:
    """Returns the appropriate controls model given the specified arithmetic mode."""
    controls = {
        Modes.Exact: Exact,
        Modes.Float: Float,
    }

    try:
        model = controls[mode](**properties)
    except KeyError:
        members = list(Modes.__members__.values())
        allowed_values = f'{", ".join([repr(member.value) for member in members[:-1]])} or {members[-1].value!r}'
        raise ValueError(f"The controls mode must be one of: {allowed_values}") from None
    except ValidationError as exc:
        custom_error_msgs = {
            "extra_forbidden": f'Extra inputs are not permitted. The fields for the {mode}'
            f' controls mode are:\n    '
            f'{", ".join(controls[mode].model_fields.keys())}\n',
        }
        custom_error_list = custom_pydantic_validation_error(exc.errors(), custom_error_msgs)
        raise ValidationError.from_exception_data(exc.title, custom_error_list) from None

    return model
