"""Switched input distributions and the one-coordinate hard distribution.

A joint law of ``(X, M, Z)`` is *switched* when the rows of ``X`` are
independent given ``(M, Z)`` and ``M`` is independent of ``Z``.  Outcomes of a
:class:`SwitchedDistribution` are ``(X, M, Z)`` with ``X`` an
:class:`~coordinfo.model.InputMatrix` and ``M``, ``Z`` length-``n`` tuples
(``Z`` values in ``1..k``).
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .budget import ensure_within
from .model import InputMatrix
from .pmf import JointPmf, Pmf

MODE_LAW = Pmf({0: Fraction(2, 3), 1: Fraction(1, 3)})


def complement_vector(zeros: Iterable[int], k: int) -> tuple[int, ...]:
    """The 0/1 column with zeros exactly at the (1-based) indices in ``zeros``."""
    zeros = set(zeros)
    if not zeros <= set(range(1, k + 1)):
        raise ValueError(f"{sorted(zeros)} is not a subset of [1..{k}]")
    return tuple(0 if i in zeros else 1 for i in range(1, k + 1))


def e_bar(k: int, *zeros: int) -> InputMatrix:
    """``complement_vector`` as a one-coordinate input."""
    return InputMatrix.from_columns([complement_vector(zeros, k)])


def drop(x: InputMatrix, j: int) -> tuple[tuple[int, ...], ...]:
    """Columns of ``x`` with coordinate ``j`` removed."""
    x.column(j)
    cols = x.columns()
    return cols[: j - 1] + cols[j:]


def embed(columns: InputMatrix | Sequence[Sequence[int]], j: int, u: Sequence[int]) -> InputMatrix:
    """Insert column ``u`` so that it becomes coordinate ``j``."""
    cols = list(columns.columns()) if isinstance(columns, InputMatrix) else [tuple(c) for c in columns]
    if not 1 <= j <= len(cols) + 1:
        raise IndexError(f"cannot insert at coordinate {j} into {len(cols)} columns")
    if any(len(c) != len(u) for c in cols):
        raise ValueError("column heights differ")
    cols.insert(j - 1, tuple(u))
    return InputMatrix.from_columns(cols)


def column_law(k: int, m: int, z: int) -> Pmf:
    """Law of one coordinate's column given its mode ``m`` and pointer ``z``."""
    if m == 1:
        return Pmf.point(complement_vector([z], k))
    return Pmf.uniform(itertools.product((0, 1), repeat=k))


def column_mode_law(k: int, z: int) -> Pmf:
    """Joint law of ``(column, mode)`` for one coordinate given the pointer ``z``."""
    out: dict[tuple, Fraction] = defaultdict(Fraction)
    for m, pm in MODE_LAW.items():
        for col, pc in column_law(k, m, z).items():
            out[(col, m)] += pm * pc
    return Pmf(out)


@dataclass(frozen=True, eq=False)
class SwitchedDistribution:
    k: int
    n: int
    joint: JointPmf
    name: str = "switched"

    def __post_init__(self):
        if self.joint.names != ("X", "M", "Z"):
            raise ValueError("joint must have components (X, M, Z)")

    def marginal_zeta(self) -> Pmf:
        return marginal_zeta(self)

    def coordinate(self, j: int) -> "SwitchedDistribution":
        """Marginal law of coordinate ``j`` as a one-coordinate distribution."""
        out: dict[tuple, Fraction] = defaultdict(Fraction)
        for (x, m, z), q in self.joint.items():
            out[(InputMatrix.from_columns([x.column(j)]), (m[j - 1],), (z[j - 1],))] += q
        return SwitchedDistribution(self.k, 1, JointPmf(("X", "M", "Z"), out), f"{self.name}[{j}]")


def build_xi(k: int) -> SwitchedDistribution:
    """The one-coordinate hard distribution: ``Z`` uniform, ``Pr[M=0] = 2/3``,
    fair independent bits when ``M = 0`` and the column with a single zero at
    ``Z`` when ``M = 1``."""
    if k < 2:
        raise ValueError("the hard distribution needs k >= 2")
    ensure_within(k * (2**k + 1), f"support of xi (k={k})")
    pz = Fraction(1, k)
    out: dict[tuple, Fraction] = {}
    for z in range(1, k + 1):
        for m, pm in MODE_LAW.items():
            for col, pc in column_law(k, m, z).items():
                out[(InputMatrix.from_columns([col]), (m,), (z,))] = pz * pm * pc
    return SwitchedDistribution(k, 1, JointPmf(("X", "M", "Z"), out), "xi")


def product_power(xi: SwitchedDistribution, n: int) -> SwitchedDistribution:
    """``n`` independent coordinates, each distributed as ``xi``."""
    if xi.n != 1:
        raise ValueError("product_power expects a one-coordinate distribution")
    if n < 1:
        raise ValueError("n must be at least 1")
    cells = list(xi.joint.items())
    ensure_within(len(cells) ** n, f"support of xi^{n}")
    out: dict[tuple, Fraction] = {}
    for combo in itertools.product(cells, repeat=n):
        w = Fraction(1)
        for _, q in combo:
            w *= q
        x = InputMatrix.from_columns([o[0].column(1) for o, _ in combo])
        m = tuple(o[1][0] for o, _ in combo)
        z = tuple(o[2][0] for o, _ in combo)
        out[(x, m, z)] = w
    name = xi.name if n == 1 else f"{xi.name}^{n}"
    return SwitchedDistribution(xi.k, n, JointPmf(("X", "M", "Z"), out), name)


def build_eta(n: int, k: int) -> SwitchedDistribution:
    return product_power(build_xi(k), n)


def marginal_zeta(eta: SwitchedDistribution) -> Pmf:
    """Law of the input ``X`` alone."""
    return eta.joint.marginal("X").map(lambda o: o[0])


def collapsing_epsilon(zeta: Pmf) -> Fraction:
    """``Pr[every player's bit is 1]`` for a one-coordinate input law."""
    total = Fraction(0)
    for x, q in zeta.items():
        if x.n != 1:
            raise ValueError("collapsing_epsilon expects one-coordinate inputs")
        if all(x.column(1)):
            total += q
    return total


@dataclass(frozen=True)
class SwitchedReport:
    ok: bool
    reason: str = ""
    cell: tuple | None = None


def check_switched(dist: SwitchedDistribution) -> SwitchedReport:
    """Exact check of both defining properties of a switched distribution."""
    joint = dist.joint
    pm = joint.marginal("M")
    pz = joint.marginal("Z")
    pmz = joint.marginal(("M", "Z"))
    for (m,) in pm:
        for (z,) in pz:
            if pmz[(m, z)] != pm[(m,)] * pz[(z,)]:
                return SwitchedReport(False, "M and Z are dependent", (m, z))

    cells: dict[tuple, dict[InputMatrix, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
    for (x, m, z), q in joint.items():
        cells[(m, z)][x] += q
    for key, law in cells.items():
        mass = sum(law.values())
        rows: list[dict[tuple, Fraction]] = [defaultdict(Fraction) for _ in range(dist.k)]
        for x, q in law.items():
            for i in range(dist.k):
                rows[i][x.bits[i]] += q / mass
        ensure_within(math.prod(len(r) for r in rows), f"row-product check of cell {key}")
        for combo in itertools.product(*(list(r.items()) for r in rows)):
            want = Fraction(1)
            for _, q in combo:
                want *= q
            x = InputMatrix(tuple(r for r, _ in combo))
            if law.get(x, Fraction(0)) / mass != want:
                return SwitchedReport(False, "rows are not independent given (M, Z)", key)
    return SwitchedReport(True)



def build_uniform(n: int, k: int) -> SwitchedDistribution:
    """Uniform inputs as a switched law: ``M = 0`` always, ``Z`` uniform."""
    ensure_within(k**n * 2 ** (k * n), f"uniform switched law (n={n}, k={k})")
    w = Fraction(1, k**n * 2 ** (k * n))
    out: dict[tuple, Fraction] = {}
    for z in itertools.product(range(1, k + 1), repeat=n):
        for flat in itertools.product((0, 1), repeat=k * n):
            x = InputMatrix(tuple(flat[r * n : (r + 1) * n] for r in range(k)))
            out[(x, (0,) * n, z)] = w
    return SwitchedDistribution(k, n, JointPmf(("X", "M", "Z"), out), "uniform")
