"""Information costs of a protocol under an input distribution.

Every quantity is built from one exact joint law of the input, the
mode/pointer pair (when the distribution is switched) and the transcript.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable

from .budget import ensure_within
from .distributions import SwitchedDistribution, build_xi, collapsing_epsilon, product_power
from .infotheory import TOL, Check, joint_entropy, mutual_information
from .model import Protocol, communication_cost, disj, error_probability, restrict_view, transcript_distribution
from .pmf import JointPmf, Pmf
from .protolib import EmbeddingConfig, build_direct_sum_protocol


def format_number(value) -> str:
    """Canonical text for report values: ``num/den`` or 12 significant digits."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(0.0 if value == 0 else value, ".12g")
    return str(value)


def protocol_joint(dist: SwitchedDistribution | Pmf, protocol: Protocol) -> JointPmf:
    """Joint law of ``(X, M, Z, T)`` plus per-player components.

    ``T`` is the transcript.  For player ``i`` the components ``X{i}``,
    ``Xminus{i}`` and ``V{i}`` hold its row, the other rows and its view.
    A plain pmf over inputs gives ``M = Z = None``.
    """
    if isinstance(dist, SwitchedDistribution):
        if (dist.k, dist.n) != (protocol.k, protocol.n):
            raise ValueError(f"distribution is k={dist.k}, n={dist.n}; protocol is k={protocol.k}, n={protocol.n}")
        base = list(dist.joint.items())
    else:
        base = [((x, None, None), q) for x, q in dist.items()]
    ensure_within(len(base) * protocol.tape_space_size, f"joint of {protocol.name}")
    out: dict[tuple, Fraction] = {}
    for (x, m, z), q in base:
        for t, pt in transcript_distribution(protocol, x).items():
            key = (x, m, z, t)
            out[key] = out.get(key, Fraction(0)) + q * pt
    joint = JointPmf(("X", "M", "Z", "T"), out)
    derived: dict[str, Callable[[dict], Hashable]] = {}
    for i in range(1, protocol.k + 1):
        derived[f"X{i}"] = lambda r, i=i: r["X"].row(i)
        derived[f"Xminus{i}"] = lambda r, i=i: r["X"].others(i)
        derived[f"V{i}"] = lambda r, i=i: restrict_view(r["T"], i).messages
    return joint.with_components(derived)


@dataclass
class CostReport:
    """Costs of one protocol under one distribution.

    ``ic_terms[i-1]`` is ``I(X^{-i}; view_i | X^i)``; ``sic_x_terms`` and
    ``sic_m_terms`` hold ``I(X^i; view_i | M, Z)`` and
    ``I(M; view_i | X^i, Z)``.  Families that were not computed are ``None``.
    """

    protocol: str
    dist: str
    n: int
    k: int
    cc: int | None = None
    error: Fraction | None = None
    external: float | None = None
    ic_terms: tuple[float, ...] | None = None
    sic_x_terms: tuple[float, ...] | None = None
    sic_m_terms: tuple[float, ...] | None = None

    @property
    def ic(self) -> float | None:
        if self.external is None or self.ic_terms is None:
            return None
        return self.external + sum(self.ic_terms)

    @property
    def sic(self) -> float | None:
        if self.sic_x_terms is None or self.sic_m_terms is None:
            return None
        return sum(self.sic_x_terms) + sum(self.sic_m_terms)

    def terms(self) -> list[float]:
        out = [] if self.external is None else [self.external]
        for fam in (self.ic_terms, self.sic_x_terms, self.sic_m_terms):
            out.extend(fam or ())
        return out

    def to_json_dict(self) -> dict:
        def fam(v):
            return None if v is None else [format_number(t) for t in v]

        return {
            "protocol": self.protocol,
            "dist": self.dist,
            "n": self.n,
            "k": self.k,
            "CC": self.cc,
            "error": None if self.error is None else format_number(self.error),
            "external": None if self.external is None else format_number(self.external),
            "IC": None if self.ic is None else format_number(self.ic),
            "SIC": None if self.sic is None else format_number(self.sic),
            "ic_terms": fam(self.ic_terms),
            "sic_x_terms": fam(self.sic_x_terms),
            "sic_m_terms": fam(self.sic_m_terms),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def csv_row(self) -> dict[str, str]:
        d = self.to_json_dict()
        row = {c: "" if d[c] is None else str(d[c]) for c in ("protocol", "dist", "n", "k", "CC", "error", "IC", "SIC")}
        for name in ("ic_terms", "sic_x_terms", "sic_m_terms"):
            row[name] = ";".join(d[name] or [])
        return row


CSV_COLUMNS = ("protocol", "dist", "n", "k", "CC", "error", "IC", "SIC", "ic_terms", "sic_x_terms", "sic_m_terms")


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


def _dist_name(dist) -> str:
    return dist.name if isinstance(dist, SwitchedDistribution) else "zeta"


def _zeta(dist) -> Pmf:
    return dist.marginal_zeta() if isinstance(dist, SwitchedDistribution) else dist


def ic_terms(joint: JointPmf, k: int) -> tuple[float, tuple[float, ...]]:
    external = mutual_information(joint, "X", "T")
    per = tuple(mutual_information(joint, f"Xminus{i}", f"V{i}", f"X{i}") for i in range(1, k + 1))
    return external, per


def sic_terms(joint: JointPmf, k: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    xs = tuple(mutual_information(joint, f"X{i}", f"V{i}", ("M", "Z")) for i in range(1, k + 1))
    ms = tuple(mutual_information(joint, "M", f"V{i}", (f"X{i}", "Z")) for i in range(1, k + 1))
    return xs, ms


def internal_ic(dist: SwitchedDistribution | Pmf, protocol: Protocol) -> CostReport:
    """``I(X; T) + sum_i I(X^{-i}; view_i | X^i)`` under the input law."""
    joint = protocol_joint(_zeta(dist), protocol)
    external, per = ic_terms(joint, protocol.k)
    return CostReport(protocol.name, _dist_name(dist), protocol.n, protocol.k, external=external, ic_terms=per)


def switched_ic(dist: SwitchedDistribution, protocol: Protocol) -> CostReport:
    """``sum_i I(X^i; view_i | M, Z) + I(M; view_i | X^i, Z)``."""
    joint = protocol_joint(dist, protocol)
    xs, ms = sic_terms(joint, protocol.k)
    return CostReport(protocol.name, dist.name, protocol.n, protocol.k, sic_x_terms=xs, sic_m_terms=ms)


def full_report(dist: SwitchedDistribution, protocol: Protocol, truth=disj) -> CostReport:
    """CC, exact worst-case error, IC of the input marginal and SIC."""
    ic = internal_ic(dist, protocol)
    sic = switched_ic(dist, protocol)
    return CostReport(
        protocol.name, dist.name, protocol.n, protocol.k,
        cc=communication_cost(protocol),
        error=error_probability(protocol, truth),
        external=ic.external, ic_terms=ic.ic_terms,
        sic_x_terms=sic.sic_x_terms, sic_m_terms=sic.sic_m_terms,
    )


def check_cc_ic(dist: SwitchedDistribution | Pmf, protocol: Protocol, tol: float = TOL) -> Check:
    """``CC >= IC / 2``; the margin is ``CC - IC/2``."""
    cc = communication_cost(protocol)
    ic = internal_ic(dist, protocol).ic
    return Check("cc-vs-ic", float(cc), ic / 2, ">=", tol)


def check_sic_vs_ic(eta: SwitchedDistribution, protocol: Protocol, tol: float = TOL) -> Check:
    """``SIC <= IC + H(M, Z) + k H(Z)`` with ``IC`` taken under the input marginal."""
    joint = protocol_joint(eta, protocol)
    external, per = ic_terms(joint, protocol.k)
    xs, ms = sic_terms(joint, protocol.k)
    slack_terms = joint_entropy(joint, ("M", "Z")) + protocol.k * joint_entropy(joint, "Z")
    return Check("sic-vs-ic", external + sum(per) + slack_terms, sum(xs) + sum(ms), ">=", tol)


@dataclass
class DirectSumReport:
    base: str
    n: int
    k: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def check_direct_sum_lemma(base: Protocol, n: int | None = None, k: int | None = None, tol: float = TOL) -> DirectSumReport:
    """Compare the embedded one-bit protocol's switched terms under ``xi``
    with ``1/n`` of the base protocol's terms under ``xi^n``, per player,
    and check the embedded protocol's error against ``delta + n eps``.
    """
    n = base.n if n is None else n
    k = base.k if k is None else k
    if (n, k) != (base.n, base.k):
        raise ValueError(f"base protocol is n={base.n}, k={base.k}; asked for n={n}, k={k}")
    xi = build_xi(k)
    eta = product_power(xi, n)
    hat = build_direct_sum_protocol(EmbeddingConfig(base))
    big_x, big_m = sic_terms(protocol_joint(eta, base), k)
    small_x, small_m = sic_terms(protocol_joint(xi, hat), k)
    report = DirectSumReport(base.name, n, k)
    for i in range(1, k + 1):
        report.checks.append(Check(f"direct-sum-mode[player {i}]", big_m[i - 1] / n, small_m[i - 1], ">=", tol))
        report.checks.append(Check(f"direct-sum-input[player {i}]", big_x[i - 1] / n, small_x[i - 1], ">=", tol))
    delta = error_probability(base, disj)
    eps = collapsing_epsilon(xi.marginal_zeta())
    err = error_probability(hat, disj)
    bound = delta + n * eps
    report.checks.append(
        Check("direct-sum-error", float(bound - err), 0.0, ">=", 0.0, note=f"error {err} <= {bound}")
    )
    return report
