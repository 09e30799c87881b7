from enum import Enum

try:
    from enum import StrEnum
except ImportError:
    from strenum import StrEnum


# Controls
class Modes(StrEnum):
    """Defines the available arithmetic modes"""

    Exact = "exact"
    Float = "float"


class Parallel(StrEnum):
    """Defines the available options for parallelization"""

    Single = "single"
    Instances = "instances"


# Numeric core
class Towers(StrEnum):
    """Defines the scalar towers a value can live in"""

    Rational = "rational"
    Gaussian = "gaussian"
    Float = "float"


# Projective
class Degeneracy(StrEnum):
    """Defines the shapes a plane section of a quadric can take"""

    Smooth = "smooth"
    DoubleLine = "double line"
    TwoLines = "two lines"


# Cones
class PencilClasses(StrEnum):
    """Defines the possible intersections of two conic cones with distinct cone points"""

    IrreducibleQuartic = "IrreducibleQuartic"
    CubicPlusLine = "CubicPlusLine"
    TwoSmoothConics = "TwoSmoothConics"
    ConicPlusDoubleLine = "ConicPlusDoubleLine"


# CLI
class Commands(StrEnum):
    Fundamental = "fundamental"
    SevenPoint = "seven-point"
    Triangulate = "triangulate"
    Resect = "resect"
    Membership = "membership"
    Equivalence = "equivalence"
    Constraints = "constraints"
    Decompose = "decompose"
    IAC = "iac"
    Essential = "essential"
    IsEssential = "is-essential"
    ClassifyCones = "classify-cones"
    Fiber = "fiber"
    Residual = "residual"
    Twist = "twist"
    Simulate = "simulate"


class ExitStatus(Enum):
    """Defines the exit status of a command line invocation"""

    Success = 0
    PreconditionFailure = 1
    ParseFailure = 2
