"""The four 2-parallel building blocks and their defining constant matrices."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .graph import StructureGraph
from .polymatrix import D4, D4_HYBRID, D24, P2, P2_MINUS, P4, Q2, Q2_MINUS, PolyMatrix


class Ffa2Form(Enum):
    """Orientation x sign-form of the 2-parallel block."""

    DIRECT_PLUS = ("direct", "plus")
    DIRECT_MINUS = ("direct", "minus")
    TRANSPOSED_PLUS = ("transposed", "plus")
    TRANSPOSED_MINUS = ("transposed", "minus")

    @property
    def orientation(self) -> str:
        return self.value[0]

    @property
    def sign_form(self) -> str:
        return self.value[1]

    @property
    def cli_name(self) -> str:
        return f"{self.value[0]}-{self.value[1]}"

    @classmethod
    def from_name(cls, name: str) -> "Ffa2Form":
        for f in cls:
            if f.cli_name == name:
                return f
        raise ValueError(f"unknown form {name!r}; expected one of "
                         f"{[f.cli_name for f in cls]}")


ALL_FORMS = tuple(Ffa2Form)


def build_ffa2(form: Ffa2Form) -> StructureGraph:
    """2-parallel fast block: 3 subfilters, 4 adders, 1 block delay.

    Direct forms realize Y0 = H0 X0 + z^-2 H1 X1 and
    Y1 = (H0 +/- H1)(X0 +/- X1) -/+ H0 X0 ... per the sign form; transposed
    forms are the edge-reversed duals with flipped ports.
    """
    from .synthesis import synthesize_iterated

    return synthesize_iterated(1, form)


@dataclass(frozen=True)
class ConstantMatrixSet:
    """The exact constants used by the 4-parallel factorizations."""

    p2: PolyMatrix
    q2: PolyMatrix
    p2_minus: PolyMatrix
    q2_minus: PolyMatrix
    p4: PolyMatrix
    d4: PolyMatrix
    d4_hybrid: PolyMatrix
    d24: PolyMatrix


def constant_matrices() -> ConstantMatrixSet:
    return ConstantMatrixSet(
        p2=P2,
        q2=Q2,
        p2_minus=P2_MINUS,
        q2_minus=Q2_MINUS,
        p4=P4,
        d4=D4,
        d4_hybrid=D4_HYBRID,
        d24=D24,
    )
