"""Exact polynomials in the unit serial delay and matrices over them.

Coefficients are Python ints or Fractions, never floats: every identity
checked by this package is an exact algebraic one.  A polynomial
``a0 + a1*z^-1 + a2*z^-2 + ...`` is stored as the coefficient tuple
``(a0, a1, a2, ...)`` with trailing zeros stripped.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Scalar = int | Fraction


def _trim(coeffs: Iterable[Scalar]) -> tuple[Scalar, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class Poly:
    """Polynomial in z^-1 with exact coefficients, ascending delay order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        self.coeffs = _trim(coeffs)

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls((c,))

    @classmethod
    def delay(cls, k: int, c: Scalar = 1) -> "Poly":
        """c * z^-k."""
        if k < 0:
            raise ValueError("delay exponent must be non-negative")
        return cls((0,) * k + (c,))

    @classmethod
    def from_strided(cls, taps: Sequence[Scalar], stride: int) -> "Poly":
        """Taps placed at delay multiples of ``stride``: taps[t] * z^-(t*stride)."""
        coeffs: list[Scalar] = [0] * (len(taps) * stride)
        for t, c in enumerate(taps):
            coeffs[t * stride] = c
        return cls(coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(tuple(c * other for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def shifted(self, k: int) -> "Poly":
        """Multiply by z^-k."""
        if not self.coeffs:
            return self
        return Poly((0,) * k + self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(str(c) if k == 0 else f"{c}*z^-{k}")
        return " + ".join(terms)


def _as_poly(v) -> Poly:
    return v if isinstance(v, Poly) else Poly.const(v)


class PolyMatrix:
    """Dense matrix of Poly entries; immutable by convention."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        norm = tuple(tuple(_as_poly(e) for e in row) for row in entries)
        if norm and any(len(r) != len(norm[0]) for r in norm):
            raise ValueError("ragged matrix")
        self.entries = norm
        self.rows = len(norm)
        self.cols = len(norm[0]) if norm else 0

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "PolyMatrix":
        """Matrix P with (P v)[i] = v[perm[i]]."""
        n = len(perm)
        return cls([[1 if j == perm[i] else 0 for j in range(n)] for i in range(n)])

    def entry(self, i: int, j: int) -> Poly:
        return self.entries[i][j]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(tuple(zip(*self.entries))) if self.entries else self

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PolyMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        body = ",\n ".join("[" + ", ".join(map(repr, row)) + "]" for row in self.entries)
        return f"PolyMatrix({self.rows}x{self.cols},\n {body})"


def pm_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    out = []
    for i in range(a.rows):
        row = []
        for j in range(b.cols):
            acc = Poly()
            for k in range(a.cols):
                e = a.entries[i][k]
                if e:
                    acc = acc + e * b.entries[k][j]
            row.append(acc)
        out.append(row)
    return PolyMatrix(out)


def pm_kron(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    out = []
    for i in range(a.rows):
        for p in range(b.rows):
            row = []
            for j in range(a.cols):
                aij = a.entries[i][j]
                for q in range(b.cols):
                    row.append(aij * b.entries[p][q])
            out.append(row)
    return PolyMatrix(out)


def pm_diag(v: Sequence) -> PolyMatrix:
    polys = [_as_poly(x) for x in v]
    n = len(polys)
    return PolyMatrix([[polys[i] if i == j else Poly() for j in range(n)] for i in range(n)])


def pm_chain(*ms: PolyMatrix) -> PolyMatrix:
    """Left-to-right product of two or more matrices."""
    acc = ms[0]
    for m in ms[1:]:
        acc = pm_mul(acc, m)
    return acc


# Constant matrices of the 2-parallel building blocks and the two 4-parallel
# factorizations.  Delay entries are in serial samples (z^-4 = one block at
# 4-parallel rate).

def _z(k: int) -> Poly:
    return Poly.delay(k)


P2 = PolyMatrix([[1, 0], [1, 1], [0, 1]])
Q2 = PolyMatrix([[1, 0, 0], [-1, 1, -1], [0, 0, 1]])
P2_MINUS = PolyMatrix([[1, 0], [1, -1], [0, 1]])
Q2_MINUS = PolyMatrix([[1, 0, 0], [1, -1, 1], [0, 0, 1]])
P4 = PolyMatrix.permutation([0, 2, 1, 3])
D24 = PolyMatrix([[1, 0, _z(4)], [0, 1, 0]])
D4 = PolyMatrix(
    [
        [1, 0, 0, 0, 0, _z(4)],
        [0, 1, 0, 0, 1, 0],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
    ]
)
D4_HYBRID = PolyMatrix(
    [
        [1, 0, 0, 0, 1, 0],
        [0, 1, 0, 0, 0, _z(4)],
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
    ]
)


def _phase_diag(h: Sequence[Scalar]) -> PolyMatrix:
    """diag of the nine length-N/4 subfilters of a two-level decomposition.

    Entry order follows (P2 (x) P2) applied to the nesting-permuted phase
    vector [H0, H2, H1, H3], phases expressed in z^-4.
    """
    from .polyphase import polyphase_decompose

    phases = polyphase_decompose(h, 4)
    hp = [Poly.from_strided(p, 4) for p in phases]
    nested = [hp[0], hp[2], hp[1], hp[3]]
    vec = pm_mul(pm_kron(P2, P2), PolyMatrix([[p] for p in nested]))
    return pm_diag([vec.entry(i, 0) for i in range(9)])


def factorization_iterated4(h: Sequence[Scalar]) -> PolyMatrix:
    """4x4 natural-order blocked transfer map of the two-level factorization.

    Evaluates the constant-matrix chain with the subfilter diagonal
    instantiated from ``h`` and undoes the nesting permutation on both sides.
    """
    if len(h) % 4 != 0:
        raise ValueError("tap count must be divisible by 4")
    i2, i3 = PolyMatrix.identity(2), PolyMatrix.identity(3)
    m = pm_chain(
        P4,  # P4 is its own inverse
        D4,
        pm_kron(Q2, i2),
        pm_kron(i3, pm_mul(D24, Q2)),
        _phase_diag(h),
        pm_kron(P2, P2),
        P4,
    )
    return m


def factorization_hybrid4(h: Sequence[Scalar]) -> PolyMatrix:
    """4x4 natural-order transfer map of the shared-input hybrid factorization.

    The transposed-form inner blocks deliver their output pair in flipped
    order; the delayed third slot therefore enters the final combine
    through a pair swap (one bus-sample rotation), encoded here as the
    explicit permutation between the combine and the spreading stage.
    """
    if len(h) % 4 != 0:
        raise ValueError("tap count must be divisible by 4")
    perm = PolyMatrix.permutation([2, 0, 3, 1])  # natural -> (2,0,3,1) wire order
    slot2_flip = PolyMatrix.permutation([0, 1, 2, 3, 5, 4])
    m = pm_chain(
        perm.transpose(),  # permutation inverse
        D4_HYBRID,
        slot2_flip,
        pm_kron(Q2, P2.transpose()),
        _phase_diag(h),
        pm_kron(P2, pm_mul(Q2.transpose(), D24.transpose())),
        perm,
    )
    return m


def transfer_of_graph(g, h: Sequence[Scalar]) -> PolyMatrix:
    """Extract the LxL polynomial transfer matrix of a structure graph.

    Feeds a unit impulse into one input phase at a time and reads the
    per-phase block responses; entry (i, j) collects output port i's
    response to an impulse on port j, in powers of the serial delay.
    """
    from .simulate import impulse_responses

    L = g.L
    if len(h) % L != 0:
        raise ValueError(f"tap count must be divisible by L={L}")
    resp = impulse_responses(g, h)  # [port_in][port_out] -> block-domain coeffs
    entries = []
    for i in range(L):
        row = []
        for j in range(L):
            row.append(Poly.from_strided(resp[j][i], L))
        entries.append(row)
    return PolyMatrix(entries)
