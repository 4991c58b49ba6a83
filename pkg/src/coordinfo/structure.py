"""Structural facts about private-coin protocols, checked exactly.

Rectangularity is tested through the cross-ratio identity rather than by
constructing the factorization.  The remaining checks compare Hellinger
distances between transcript or view laws on one-coordinate inputs and
assemble the chain of inequalities that lower-bounds the switched cost of
any AND protocol under the hard distribution.

Notation in names: ``e_bar(k, i)`` is the input whose only zero is player
``i``'s bit, and ``e_bar(k, i, z)`` zeroes both ``i`` and ``z``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .budget import ensure_within
from .costs import format_number, protocol_joint, sic_terms
from .distributions import SwitchedDistribution, e_bar
from .infotheory import TOL, Check, hellinger, hellinger_sq, mutual_information
from .model import InputMatrix, Protocol, and_k, error_probability, transcript_distribution, view_distribution
from .pmf import Pmf, ZeroProbabilityError


# ---------------------------------------------------------------------------
# conditional laws


@dataclass(frozen=True)
class ConditionalViewLaw:
    """Law of player ``player``'s view (``scope="view"``) or of the full
    transcript (``scope="full"``) given ``X^i = x, M = m, Z = z`` under
    a one-coordinate switched distribution."""

    player: int
    x: int
    m: int
    z: int
    scope: str
    pmf: Pmf


def conditional_law(protocol: Protocol, xi: SwitchedDistribution, i: int, x: int, m: int, z: int, scope: str = "view") -> ConditionalViewLaw:
    if scope not in ("view", "full"):
        raise ValueError(f"scope must be 'view' or 'full', not {scope!r}")
    if xi.n != 1 or protocol.n != 1 or xi.k != protocol.k:
        raise ValueError("conditional laws need a one-coordinate protocol and distribution of equal k")
    cell = [
        (inp, q)
        for (inp, mm, zz), q in xi.joint.items()
        if inp.row(i)[0] == x and mm[0] == m and zz[0] == z
    ]
    mass = sum((q for _, q in cell), Fraction(0))
    if mass == 0:
        raise ZeroProbabilityError(f"X^{i}={x}, M={m}, Z={z} has probability 0")
    if scope == "view":
        parts = [(q / mass, view_distribution(protocol, inp, i)) for inp, q in cell]
    else:
        parts = [(q / mass, transcript_distribution(protocol, inp)) for inp, q in cell]
    return ConditionalViewLaw(i, x, m, z, scope, Pmf.mixture(parts))


# ---------------------------------------------------------------------------
# rectangularity


@dataclass(frozen=True)
class RectangleReport:
    ok: bool
    player: int
    quadruples: int
    witness: tuple | None = None


def check_rectangle_law(law: Callable[[tuple, tuple], Pmf], rows: Iterable[tuple], rests: Iterable[tuple], player: int = 0) -> RectangleReport:
    """Cross-ratio test for a law indexed by ``(own row, other rows)``.

    For all pairs of own rows and pairs of other-rows and every outcome
    ``t``: ``P[t|a,b] P[t|a',b'] = P[t|a,b'] P[t|a',b]``.
    """
    rows, rests = list(rows), list(rests)
    ensure_within(len(rows) ** 2 * len(rests) ** 2, "rectangle quadruples")
    cache = {(a, b): law(a, b) for a in rows for b in rests}
    count = 0
    for a, a2 in itertools.combinations(rows, 2):
        for b, b2 in itertools.combinations(rests, 2):
            p, q, r, s = cache[a, b], cache[a2, b2], cache[a, b2], cache[a2, b]
            for t in p.support | q.support | r.support | s.support:
                if p[t] * q[t] != r[t] * s[t]:
                    return RectangleReport(False, player, count, (a, b, a2, b2, t))
            count += 1
    return RectangleReport(True, player, count)


def check_rectangle(protocol: Protocol, i: int) -> list[RectangleReport]:
    """Cross-ratio test splitting player ``i`` from the rest: once on full
    transcripts and once on player ``i``'s view."""
    n, k = protocol.n, protocol.k
    rows = list(itertools.product((0, 1), repeat=n))
    rests = list(itertools.product(rows, repeat=k - 1))

    def assemble(a, b):
        return InputMatrix(b[: i - 1] + (a,) + b[i - 1 :])

    full = check_rectangle_law(lambda a, b: transcript_distribution(protocol, assemble(a, b)), rows, rests, i)
    view = check_rectangle_law(lambda a, b: view_distribution(protocol, assemble(a, b), i), rows, rests, i)
    return [full, view]


# ---------------------------------------------------------------------------
# diagonal and localization


def check_diagonal(protocol: Protocol, x: InputMatrix, y: InputMatrix, l: int, tol: float = TOL) -> Check:
    """``h^2(P(x), P(y)) >= h^2(P(x), P(y'))/2`` where ``y'`` is ``y`` with
    player ``l``'s row taken from ``x``."""
    y2 = y.with_row(l, x.row(l))
    px = transcript_distribution(protocol, x)
    lhs = hellinger_sq(px, transcript_distribution(protocol, y))
    rhs = hellinger_sq(px, transcript_distribution(protocol, y2)) / 2
    return Check(f"diagonal[{x},{y},{l}]", lhs, rhs, ">=", tol)


def _require_distinct(i: int, z: int) -> None:
    if i == z:
        raise ValueError(f"needs i != z, got i = z = {i}")


def check_conditional_diagonal(protocol: Protocol, xi: SwitchedDistribution, i: int, z: int, tol: float = TOL) -> Check:
    """``h^2(V[0,0,z], V[1,1,z]) >= h^2(V(e_bar(i,z)), V(e_bar(z)))/2`` for
    player ``i``'s view ``V``."""
    _require_distinct(i, z)
    k = protocol.k
    a = conditional_law(protocol, xi, i, 0, 0, z).pmf
    b = conditional_law(protocol, xi, i, 1, 1, z).pmf
    rhs = hellinger_sq(view_distribution(protocol, e_bar(k, i, z), i), view_distribution(protocol, e_bar(k, z), i)) / 2
    return Check(f"conditional-diagonal[{i},{z}]", hellinger_sq(a, b), rhs, ">=", tol)


def check_localization(protocol: Protocol, xi: SwitchedDistribution, i: int, z: int, tol: float = TOL) -> tuple[Check, Check]:
    """Distances between laws that differ only in player ``i``'s bit equal
    the distances between player ``i``'s views."""
    _require_distinct(i, z)
    k = protocol.k
    full = [conditional_law(protocol, xi, i, x, 0, z, "full").pmf for x in (0, 1)]
    view = [conditional_law(protocol, xi, i, x, 0, z, "view").pmf for x in (0, 1)]
    first = Check(f"localization-mode0[{i},{z}]", hellinger(*full), hellinger(*view), "==", tol)
    a, b = e_bar(k, i, z), e_bar(k, z)
    second = Check(
        f"localization-points[{i},{z}]",
        hellinger(transcript_distribution(protocol, a), transcript_distribution(protocol, b)),
        hellinger(view_distribution(protocol, a, i), view_distribution(protocol, b, i)),
        "==", tol,
    )
    return first, second


# ---------------------------------------------------------------------------
# usefulness and the one-bit chain


@dataclass(frozen=True)
class UsefulnessVector:
    gamma: tuple[float, ...]

    def __post_init__(self):
        for g in self.gamma:
            if not -TOL <= g <= 1 + TOL:
                raise ValueError(f"usefulness {g} outside [0, 1]")

    @property
    def total(self) -> float:
        return sum(self.gamma)


def _point_distance_sq(protocol: Protocol, i: int, z: int) -> float:
    k = protocol.k
    return hellinger_sq(view_distribution(protocol, e_bar(k, i, z), i), view_distribution(protocol, e_bar(k, z), i))


def usefulness(protocol: Protocol, k: int | None = None) -> UsefulnessVector:
    """``gamma_i``: average over ``z != i`` of the squared distance between
    player ``i``'s views on ``e_bar(i, z)`` and ``e_bar(z)``."""
    k = protocol.k if k is None else k
    if k != protocol.k or protocol.n != 1:
        raise ValueError("usefulness needs a one-coordinate protocol with matching k")
    if k < 2:
        raise ValueError("usefulness needs k >= 2")
    return UsefulnessVector(tuple(
        sum(_point_distance_sq(protocol, i, z) for z in range(1, k + 1) if z != i) / (k - 1)
        for i in range(1, k + 1)
    ))


@dataclass
class ChainReport:
    protocol: str
    k: int
    delta: Fraction
    links: dict[str, list[Check]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for checks in self.links.values() for c in checks)

    def failures(self) -> list[Check]:
        return [c for checks in self.links.values() for c in checks if not c.passed]

    def to_json_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "k": self.k,
            "delta": format_number(self.delta),
            "links": {
                name: [
                    {"name": c.name, "lhs": format_number(c.lhs), "rhs": format_number(c.rhs),
                     "margin": format_number(c.margin), "status": c.status}
                    for c in checks
                ]
                for name, checks in self.links.items()
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def verify_onebit_chain(protocol: Protocol, xi: SwitchedDistribution, delta: Fraction | None = None, tol: float = TOL) -> ChainReport:
    """Evaluate every link of the switched-cost lower bound for an AND protocol.

    ``delta`` defaults to the protocol's exact worst-case error.  Links:

    * ``per-pointer``: for ``i != z``, the two switched terms of player ``i``
      given ``Z = z`` sum to at least a third of the squared view distance
      between ``e_bar(i, z)`` and ``e_bar(z)``;
    * ``per-player``: player ``i``'s switched terms are at least ``gamma_i/6``;
    * ``distinguish``: ``h(P(e_bar(i)), P(e_bar(j))) >= (1 - delta)/2``;
    * ``per-pair``: ``h^2(P(e_bar(i)), P(e_bar(i,j))) + h^2(P(e_bar(j)),
      P(e_bar(i,j))) >= (1 - delta)^2/8``;
    * ``usefulness-sum``: ``sum gamma >= k (1 - delta)^2/16``;
    * ``sic``: the total switched cost is at least ``(1 - delta)^2/96``.
    """
    k = protocol.k
    if protocol.n != 1 or xi.n != 1 or xi.k != k:
        raise ValueError(f"need a one-coordinate AND protocol and xi with k={k}")
    if delta is None:
        delta = error_probability(protocol, and_k)
    d = float(delta)
    report = ChainReport(protocol.name, k, Fraction(delta))

    joint = protocol_joint(xi, protocol)
    per_pointer = []
    for i in range(1, k + 1):
        for z in range(1, k + 1):
            if z == i:
                continue
            cond = joint.condition_on(Z=(z,))
            lhs = mutual_information(cond, "M", f"V{i}", f"X{i}") + mutual_information(cond, f"X{i}", f"V{i}", "M")
            per_pointer.append(Check(f"per-pointer[{i},{z}]", lhs, _point_distance_sq(protocol, i, z) / 3, ">=", tol))
    report.links["per-pointer"] = per_pointer

    xs, ms = sic_terms(joint, k)
    gamma = usefulness(protocol)
    report.links["per-player"] = [
        Check(f"per-player[{i}]", xs[i - 1] + ms[i - 1], gamma.gamma[i - 1] / 6, ">=", tol) for i in range(1, k + 1)
    ]

    full = {zs: transcript_distribution(protocol, e_bar(k, *zs)) for zs in
            [(i,) for i in range(1, k + 1)] + list(itertools.combinations(range(1, k + 1), 2))}
    distinguish, per_pair = [], []
    for i, j in itertools.combinations(range(1, k + 1), 2):
        distinguish.append(Check(f"distinguish[{i},{j}]", hellinger(full[(i,)], full[(j,)]), (1 - d) / 2, ">=", tol))
        lhs = hellinger_sq(full[(i,)], full[(i, j)]) + hellinger_sq(full[(j,)], full[(i, j)])
        per_pair.append(Check(f"per-pair[{i},{j}]", lhs, (1 - d) ** 2 / 8, ">=", tol))
    report.links["distinguish"] = distinguish
    report.links["per-pair"] = per_pair
    report.links["usefulness-sum"] = [Check("usefulness-sum", gamma.total, k * (1 - d) ** 2 / 16, ">=", tol)]
    report.links["sic"] = [Check("sic", sum(xs) + sum(ms), (1 - d) ** 2 / 96, ">=", tol)]
    return report
