"""Entropy, mutual information and Hellinger distance over exact pmfs.

Probabilities stay rational; only the final logarithms and square roots are
taken in double precision.  All logarithms are base 2.

The ``check_*`` functions evaluate one identity or inequality on a concrete
joint distribution and return a :class:`Check` carrying both sides.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Sequence

from .model import transcript_distribution
from .pmf import JointPmf, Pmf

TOL = 1e-9


def _names(names) -> tuple[str, ...]:
    if names is None:
        return ()
    if isinstance(names, str):
        return (names,)
    return tuple(names)


# ---------------------------------------------------------------------------
# functionals


def entropy(p: Pmf) -> float:
    """Shannon entropy in bits."""
    h = 0.0
    for _, q in p.items():
        f = float(q)
        h -= f * math.log2(f)
    return max(h, 0.0)


def joint_entropy(joint: JointPmf, names) -> float:
    names = _names(names)
    if not names:
        return 0.0
    return entropy(joint.marginal(names))


def conditional_entropy(joint: JointPmf, target, given=()) -> float:
    """``H(target | given) = sum_y Pr[given=y] H(target | given=y)``."""
    target, given = _names(target), _names(given)
    if not given:
        return joint_entropy(joint, target)
    tpos, gpos = joint.positions(target), joint.positions(given)
    groups: dict[tuple, dict[tuple, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
    for o, q in joint.items():
        groups[tuple(o[p] for p in gpos)][tuple(o[p] for p in tpos)] += q
    h = 0.0
    for cell in groups.values():
        mass = sum(cell.values())
        h += float(mass) * entropy(Pmf({t: q / mass for t, q in cell.items()}))
    return h


def mutual_information(joint: JointPmf, a, b, given=()) -> float:
    """``I(a ; b | given)`` in bits, via ``H(AC) + H(BC) - H(ABC) - H(C)``."""
    a, b, c = _names(a), _names(b), _names(given)
    if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
        raise ValueError(f"components must be disjoint: {a}, {b}, {c}")
    return (
        joint_entropy(joint, a + c)
        + joint_entropy(joint, b + c)
        - joint_entropy(joint, a + b + c)
        - joint_entropy(joint, c)
    )


def hellinger_sq(p: Pmf, q: Pmf) -> float:
    """Squared Hellinger distance, ``1 - sum sqrt(P Q)``."""
    bc = 0.0
    for o, pw in p.items():
        qw = q[o]
        if qw:
            bc += math.sqrt(float(pw * qw))
    return min(1.0, max(0.0, 1.0 - bc))


def hellinger(p: Pmf, q: Pmf) -> float:
    """``(1/sqrt 2) * || sqrt P - sqrt Q ||_2``, a metric in ``[0, 1]``."""
    s = 0.0
    for o in p.support | q.support:
        d = math.sqrt(float(p[o])) - math.sqrt(float(q[o]))
        s += d * d
    return min(1.0, math.sqrt(s / 2.0))


def total_variation(p: Pmf, q: Pmf) -> Fraction:
    """Statistical distance, exact."""
    return sum((abs(p[o] - q[o]) for o in p.support | q.support), Fraction(0)) / 2


def selector_joint(mu0: Pmf, mu1: Pmf) -> JointPmf:
    """Joint of ``(S, Y)``: a fair bit ``S`` then ``Y ~ mu_S``."""
    half = Fraction(1, 2)
    probs: dict[tuple, Fraction] = defaultdict(Fraction)
    for s, mu in ((0, mu0), (1, mu1)):
        for y, q in mu.items():
            probs[(s, y)] += half * q
    return JointPmf(("S", "Y"), probs)


# ---------------------------------------------------------------------------
# checks


@dataclass(frozen=True)
class Check:
    """One evaluated identity (``==``) or inequality (``>=``)."""

    name: str
    lhs: float
    rhs: float
    relation: str = ">="
    tol: float = TOL
    hypothesis: bool = True
    note: str = ""

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def status(self) -> str:
        if not self.hypothesis:
            return "hypothesis-violated"
        if self.relation == "==":
            return "pass" if self.residual <= self.tol else "fail"
        return "pass" if self.margin >= -self.tol else "fail"

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def check_chain_rule(joint: JointPmf, parts: Sequence[str], b, given=(), tol: float = TOL) -> Check:
    """``I(A1..An ; B | C) = sum_i I(Ai ; B | A1..A(i-1) C)``."""
    parts, c = _names(parts), _names(given)
    whole = mutual_information(joint, parts, b, c)
    pieces = sum(mutual_information(joint, parts[i], b, parts[:i] + c) for i in range(len(parts)))
    return Check("chain-rule", whole, pieces, "==", tol)


def _independent_given(joint: JointPmf, a, b, d, tol: float) -> bool:
    return mutual_information(joint, a, b, d) <= tol


def check_simplified_chain(joint: JointPmf, a, b, c, d=(), tol: float = TOL) -> Check:
    """``I(A ; B C | D) = I(A ; C | B D)`` when ``A`` and ``B`` are independent given ``D``."""
    a, b, c, d = _names(a), _names(b), _names(c), _names(d)
    lhs = mutual_information(joint, a, b + c, d)
    rhs = mutual_information(joint, a, c, b + d)
    ok = _independent_given(joint, a, b, d, tol)
    return Check("simplified-chain-rule", lhs, rhs, "==", tol, hypothesis=ok)


def check_drop_lemma(joint: JointPmf, a, b, c, d=(), tol: float = TOL) -> Check:
    """``I(A ; C | B D) >= I(A ; C | D)`` when ``A`` and ``B`` are independent given ``D``."""
    a, b, c, d = _names(a), _names(b), _names(c), _names(d)
    lhs = mutual_information(joint, a, c, b + d)
    rhs = mutual_information(joint, a, c, d)
    ok = _independent_given(joint, a, b, d, tol)
    return Check("drop-lemma", lhs, rhs, ">=", tol, hypothesis=ok)


def check_mi_hellinger(mu0: Pmf, mu1: Pmf, tol: float = TOL) -> Check:
    """``I(S ; Y) >= h^2(mu0, mu1)`` for a fair selector ``S``."""
    lhs = mutual_information(selector_joint(mu0, mu1), "S", "Y")
    return Check("mi-vs-hellinger", lhs, hellinger_sq(mu0, mu1), ">=", tol)


def check_h_delta(protocol, x, y, truth: Callable[[object], Hashable], delta, tol: float = TOL) -> Check:
    """``h(Pi(x), Pi(y)) >= (1 - delta)/sqrt 2`` for inputs with different answers.

    The bound is only guaranteed for ``delta = 0``.  A delta-error protocol
    need only satisfy ``h >= (1 - 2 delta)/sqrt 2``, which follows from the
    total-variation lower bound ``1 - 2 delta``; see
    :func:`check_h_delta_tv`.
    """
    if truth(x) == truth(y):
        raise ValueError("h_delta needs inputs with different answers")
    h = hellinger(transcript_distribution(protocol, x), transcript_distribution(protocol, y))
    return Check("h-delta", h, (1 - float(delta)) / math.sqrt(2), ">=", tol)


def check_h_delta_tv(protocol, x, y, truth, delta, tol: float = TOL) -> Check:
    """The provable form ``h(Pi(x), Pi(y)) >= (1 - 2 delta)/sqrt 2``."""
    if truth(x) == truth(y):
        raise ValueError("h_delta needs inputs with different answers")
    h = hellinger(transcript_distribution(protocol, x), transcript_distribution(protocol, y))
    return Check("h-delta-tv", h, (1 - 2 * float(delta)) / math.sqrt(2), ">=", tol)
