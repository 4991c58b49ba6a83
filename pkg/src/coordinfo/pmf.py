"""Exact-rational probability mass functions.

:class:`Pmf` maps hashable outcomes to :class:`fractions.Fraction`
probabilities that sum to exactly one.  :class:`JointPmf` is a pmf whose
outcomes are tuples with named components, which is what the information
functionals in :mod:`coordinfo.infotheory` consume.
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .budget import ensure_within


class ZeroProbabilityError(ValueError):
    """Conditioning on an event of probability zero."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"probabilities must be exact rationals, got {type(value).__name__}")


class Pmf:
    """Finite distribution with exact rational weights.

    Zero-probability outcomes are dropped on construction, so two pmfs are
    equal exactly when they assign the same probability to every outcome.
    """

    __slots__ = ("_p",)

    def __init__(self, probs: Mapping[Hashable, Any], *, normalized: bool = True):
        p: dict[Hashable, Fraction] = {}
        for outcome, value in probs.items():
            q = _as_fraction(value)
            if q < 0:
                raise ValueError(f"negative probability {q} for {outcome!r}")
            if q:
                p[outcome] = q
        if normalized and sum(p.values()) != 1:
            raise ValueError(f"probabilities sum to {sum(p.values())}, not 1")
        self._p = p

    # -- constructors -------------------------------------------------
    @classmethod
    def point(cls, outcome: Hashable) -> "Pmf":
        return cls({outcome: 1})

    @classmethod
    def uniform(cls, outcomes: Iterable[Hashable]) -> "Pmf":
        items = list(dict.fromkeys(outcomes))
        if not items:
            raise ValueError("uniform distribution over an empty set")
        w = Fraction(1, len(items))
        return cls({o: w for o in items})

    @classmethod
    def from_weights(cls, weights: Mapping[Hashable, Any]) -> "Pmf":
        """Normalize nonnegative rational weights into a pmf."""
        total = sum(_as_fraction(w) for w in weights.values())
        if total <= 0:
            raise ValueError("weights must have positive total")
        return cls({o: _as_fraction(w) / total for o, w in weights.items()})

    @classmethod
    def mixture(cls, parts: Iterable[tuple[Any, "Pmf"]]) -> "Pmf":
        acc: dict[Hashable, Fraction] = defaultdict(Fraction)
        for weight, pmf in parts:
            w = _as_fraction(weight)
            for o, q in pmf._p.items():
                acc[o] += w * q
        return cls(acc)

    # -- mapping-ish access -------------------------------------------
    def __getitem__(self, outcome: Hashable) -> Fraction:
        return self._p.get(outcome, Fraction(0))

    def __contains__(self, outcome: Hashable) -> bool:
        return outcome in self._p

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self._p)

    def __len__(self) -> int:
        return len(self._p)

    def items(self):
        return self._p.items()

    @property
    def support(self) -> frozenset:
        return frozenset(self._p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Pmf):
            return NotImplemented
        return self._p == other._p

    def __hash__(self) -> int:
        return hash(frozenset(self._p.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{o!r}: {q}" for o, q in list(self._p.items())[:6])
        more = ", ..." if len(self._p) > 6 else ""
        return f"{type(self).__name__}({{{inner}{more}}})"

    def total(self) -> Fraction:
        return sum(self._p.values(), Fraction(0))

    # -- transformations ----------------------------------------------
    def map(self, fn: Callable[[Hashable], Hashable]) -> "Pmf":
        """Push-forward of the distribution under ``fn``."""
        acc: dict[Hashable, Fraction] = defaultdict(Fraction)
        for o, q in self._p.items():
            acc[fn(o)] += q
        return Pmf(acc)

    def prob(self, event: Callable[[Hashable], bool]) -> Fraction:
        return sum((q for o, q in self._p.items() if event(o)), Fraction(0))

    def condition(self, event: Callable[[Hashable], bool]) -> "Pmf":
        mass = self.prob(event)
        if mass == 0:
            raise ZeroProbabilityError("conditioning event has probability 0")
        return Pmf({o: q / mass for o, q in self._p.items() if event(o)})

    def product(self, other: "Pmf") -> "Pmf":
        """Independent pairing: outcomes are ``(a, b)``."""
        ensure_within(len(self) * len(other), "pmf product")
        return Pmf({(a, b): p * q for a, p in self._p.items() for b, q in other._p.items()})

    # -- serialization ------------------------------------------------
    def to_json_dict(self, label: Callable[[Hashable], str] = str) -> dict[str, str]:
        out = {label(o): f"{q.numerator}/{q.denominator}" for o, q in self._p.items()}
        if len(out) != len(self._p):
            raise ValueError("outcome labels are not unique")
        return dict(sorted(out.items()))

    def to_json(self, label: Callable[[Hashable], str] = str) -> str:
        return json.dumps(self.to_json_dict(label), sort_keys=True)

    @classmethod
    def from_json(cls, text: str | Mapping[str, str]) -> "Pmf":
        data = json.loads(text) if isinstance(text, str) else text
        return cls({k: Fraction(v) for k, v in data.items()})


def product_pmf(pmfs: Sequence[Pmf]) -> Pmf:
    """Independent product of several pmfs; outcomes are tuples."""
    size = 1
    for p in pmfs:
        size *= len(p)
    ensure_within(size, "independent product")
    out: dict[tuple, Fraction] = {}
    for combo in itertools.product(*(list(p.items()) for p in pmfs)):
        w = Fraction(1)
        for _, q in combo:
            w *= q
        out[tuple(o for o, _ in combo)] = w
    return Pmf(out)


class JointPmf(Pmf):
    """Pmf over tuples whose positions carry component names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Sequence[str], probs: Mapping[tuple, Any], *, normalized: bool = True):
        super().__init__(probs, normalized=normalized)
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate component names in {self.names}")
        self._index = {name: pos for pos, name in enumerate(self.names)}
        for outcome in self._p:
            if len(outcome) != len(self.names):
                raise ValueError(f"outcome {outcome!r} does not match components {self.names}")

    def __repr__(self) -> str:
        return f"JointPmf(names={self.names}, support={len(self)})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, JointPmf):
            return self.names == other.names and self._p == other._p
        return super().__eq__(other)

    __hash__ = Pmf.__hash__

    def positions(self, names: str | Sequence[str]) -> tuple[int, ...]:
        if isinstance(names, str):
            names = (names,)
        try:
            return tuple(self._index[n] for n in names)
        except KeyError as exc:
            raise KeyError(f"unknown component {exc.args[0]!r}; have {self.names}") from None

    def marginal(self, names: str | Sequence[str]) -> Pmf:
        """Marginal over ``names``; outcomes are tuples in the given order."""
        pos = self.positions(names)
        acc: dict[tuple, Fraction] = defaultdict(Fraction)
        for o, q in self._p.items():
            acc[tuple(o[p] for p in pos)] += q
        return Pmf(acc)

    def project(self, names: Sequence[str]) -> "JointPmf":
        m = self.marginal(names)
        return JointPmf(tuple(names), dict(m.items()))

    def condition_on(self, **fixed) -> "JointPmf":
        """Condition on components taking the given values."""
        pos = [(self._index[name], value) for name, value in fixed.items()]
        mass = Fraction(0)
        kept = {}
        for o, q in self._p.items():
            if all(o[p] == v for p, v in pos):
                kept[o] = q
                mass += q
        if mass == 0:
            raise ZeroProbabilityError(f"event {fixed} has probability 0")
        return JointPmf(self.names, {o: q / mass for o, q in kept.items()})

    def with_components(self, derived: Mapping[str, Callable[[dict], Hashable]]) -> "JointPmf":
        """Append components computed from each outcome (as a name->value dict)."""
        names = self.names + tuple(derived)
        out = {}
        for o, q in self._p.items():
            row = dict(zip(self.names, o))
            out[o + tuple(fn(row) for fn in derived.values())] = q
        return JointPmf(names, out)

    def value_sets(self) -> dict[str, set]:
        vals: dict[str, set] = {n: set() for n in self.names}
        for o in self._p:
            for n, v in zip(self.names, o):
                vals[n].add(v)
        return vals
