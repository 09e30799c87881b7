"""Dataclasses for the results returned by the geometric operations"""

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
import prettytable
import sympy as sp

from mvlab.utils.enums import Degeneracy, PencilClasses, Towers


@dataclass(frozen=True)
class Root:
    """A root (λ:μ) of a binary form.

    ``value`` is the affine coordinate λ/μ, or None for the root at infinity (1:0).
    """

    point: tuple[Any, Any]
    value: Any
    multiplicity: int
    tower: Towers

    @property
    def exact(self) -> bool:
        return self.tower != Towers.Float

    @property
    def at_infinity(self) -> bool:
        return self.value is None

    @property
    def is_real(self) -> bool:
        if self.value is None:
            return True
        if self.exact:
            return sp.im(self.value) == 0
        return abs(complex(self.value).imag) <= 1e-9 * max(1.0, abs(complex(self.value)))


@dataclass
class RQResult:
    K: np.ndarray
    R: np.ndarray
    scale: float
    reflection: bool


@dataclass
class SevenPointSolution:
    form: Any
    root: Root

    @property
    def exact(self) -> bool:
        return self.root.exact

    @property
    def is_real(self) -> bool:
        return self.root.is_real


@dataclass
class MembershipResult:
    rank: int
    on_joint_image: bool


@dataclass
class ConstraintSet:
    """The bilinear forms of every pair of views and the trilinear minor bundles of every triple."""

    bilinear: dict[tuple[int, int], Any]
    trilinear: dict[tuple[int, int, int], Any]

    def evaluate(self, correspondence) -> list:
        """Evaluate every constraint on a correspondence, bilinear values first."""
        points = [point.coordinates for point in correspondence.points]
        values = [form.evaluate(points[i], points[j]) for (i, j), form in self.bilinear.items()]
        for (i, j, k), bundle in self.trilinear.items():
            values.extend(bundle.evaluate(points[i], points[j], points[k]))
        return values


@dataclass
class CalibrationDecomposition:
    K: np.ndarray
    R: np.ndarray
    C: np.ndarray
    reflection: bool


@dataclass
class PencilRoot:
    root: Root
    rank: int

    @property
    def multiplicity(self) -> int:
        return self.root.multiplicity


@dataclass
class PencilClassification:
    pencil_class: PencilClasses
    determinant: Any
    roots: list[PencilRoot] = field(default_factory=list)
    singular: bool = False

    @property
    def signature(self) -> tuple[tuple[int, int], ...]:
        """The sorted (multiplicity, rank) pairs of the determinant roots."""
        return tuple(sorted((root.multiplicity, root.rank) for root in self.roots))

    def __repr__(self) -> str:
        table = prettytable.PrettyTable()
        table.field_names = ["Root (λ:μ)", "Multiplicity", "Rank", "Tower"]
        table.add_rows(
            [[f"({root.root.point[0]} : {root.root.point[1]})", root.multiplicity, root.rank, root.root.tower]
             for root in self.roots]
        )
        return f"{self.pencil_class}{' (singular pencil)' if self.singular else ''}\n{table.get_string()}"


@dataclass
class DecalibrationFiber:
    conics: list
    classification: Optional[PencilClassification] = None

    def __len__(self) -> int:
        return len(self.conics)

    @property
    def degeneracies(self) -> list[Degeneracy]:
        return [conic.degeneracy for conic in self.conics]


@dataclass
class TwistedPair:
    rotation_core: Any
    rotation: Any
    camera: Any
    twisted_camera: Any
    homography: Any
    degenerate: bool


@dataclass
class QuadricSpace:
    basis: list

    @property
    def dimension(self) -> int:
        return len(self.basis)
