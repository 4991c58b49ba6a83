"""Batch runner: ``python -m coordinfo run [options]``.

Builds protocols and distributions by name, runs the selected verification
suites and writes one report.  Every check becomes one record with its two
sides, the margin and a status.  Sweeps over many instances report their
worst instance.

Exit status: 0 when every check passes, 1 on a failed check, 2 on a usage
or configuration error, 3 when checks were skipped for exceeding the
enumeration budget (and none failed).
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction

from . import costs, structure
from .budget import DEFAULT_BUDGET, BudgetExceeded, enumeration_budget
from .distributions import SwitchedDistribution, build_uniform, build_xi, product_power
from .harness import HARNESS, make_protocol
from .infotheory import (
    TOL,
    Check,
    check_chain_rule,
    check_drop_lemma,
    check_h_delta,
    check_h_delta_tv,
    check_mi_hellinger,
    check_simplified_chain,
)
from .model import (
    NonTermination,
    Protocol,
    all_inputs,
    check_alternation,
    disj,
    error_probability,
    privacy_probe,
    transcript_distribution,
)
from .pmf import Pmf
from .protolib import compress_search_transcript, decompress_search_transcript, symbol_width
from .taskalloc import (
    TaskInstance,
    check_allocation,
    closed_form_overhead,
    disj_via_ta,
    greedy_allocation,
    greedy_ta_protocol,
    reduction_overhead,
)

SUITES = ("model-invariants", "infotheory", "costs", "structure", "directsum", "taskalloc")
DISTS = ("eta", "uniform")
SCHEMA = 1


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    protocols: tuple[str, ...] = HARNESS
    dist: str = "eta"
    n: int = 2
    k: int = 3
    suite: str = "all"
    budget: int = DEFAULT_BUDGET
    tol: float = TOL
    out: str | None = None
    format: str = "json"

    def validate(self) -> None:
        if self.suite != "all" and self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; valid: all, {', '.join(SUITES)}")
        if self.dist not in DISTS:
            raise ConfigError(f"unknown distribution {self.dist!r}; valid: {', '.join(DISTS)}")
        if self.n < 1 or self.k < 2:
            raise ConfigError("need n >= 1 and k >= 2")
        if not self.tol > 0:
            raise ConfigError("tolerance must be positive")
        if self.budget < 1:
            raise ConfigError("budget must be at least 1")
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        for name in self.protocols:
            try:
                make_protocol(name, 1, 2)
            except KeyError as exc:
                raise ConfigError(exc.args[0]) from None

    @property
    def suites(self) -> tuple[str, ...]:
        return SUITES if self.suite == "all" else (self.suite,)


@dataclass
class Record:
    suite: str
    name: str
    anchor: str
    protocol: str
    lhs: object
    rhs: object
    margin: object
    status: str

    def to_json_dict(self) -> dict:
        d = asdict(self)
        for key in ("lhs", "rhs", "margin"):
            d[key] = None if d[key] is None else costs.format_number(d[key])
        return d


def worst(name: str, checks: list[Check], tol: float) -> Check:
    """Collapse a sweep into its worst instance."""
    if not checks:
        return Check(f"{name}[none]", 0.0, 0.0, "==", tol)
    failing = [c for c in checks if not c.passed]
    pool = failing or checks
    if pool[0].relation == "==":
        w = max(pool, key=lambda c: c.residual)
    else:
        w = min(pool, key=lambda c: c.margin)
    return Check(f"{name}[worst of {len(checks)}]", w.lhs, w.rhs, w.relation, w.tol, w.hypothesis, w.name)


def flag(name: str, ok: bool) -> Check:
    return Check(name, int(ok), 1, "==", 0.0)


@dataclass
class Context:
    cfg: ExperimentConfig
    _protocols: dict = field(default_factory=dict)

    def protocol(self, name: str) -> Protocol:
        if name not in self._protocols:
            self._protocols[name] = make_protocol(name, self.cfg.n, self.cfg.k)
        return self._protocols[name]

    def dist_for(self, p: Protocol) -> SwitchedDistribution:
        if self.cfg.dist == "uniform":
            return build_uniform(p.n, p.k)
        return product_power(build_xi(p.k), p.n)


# ---------------------------------------------------------------------------
# suites; each yields (name, anchor, protocol name, thunk)


def _model_suite(ctx: Context):
    for name in ctx.cfg.protocols:
        def alternation(name=name):
            p = ctx.protocol(name)
            try:
                ok = all(check_alternation(t) for x in all_inputs(p.k, p.n) for t in transcript_distribution(p, x))
            except NonTermination:
                ok = False
            return flag("alternation-and-halting", ok)

        def privacy(name=name):
            p = ctx.protocol(name)
            return [flag(f"privacy[player {i}]", privacy_probe(p, i)) for i in range(1, p.k + 1)]

        def bounded_error(name=name):
            return Check("bounded-error", Fraction(1, 3), error_probability(ctx.protocol(name), disj), ">=", 0.0)

        yield "alternation-and-halting", "coordinator model", name, alternation
        yield "privacy", "coordinator model", name, privacy
        yield "bounded-error", "coordinator model", name, bounded_error
        if name == "seq-search":
            def roundtrip(name=name):
                p = ctx.protocol(name)
                bad = 0
                for x in all_inputs(p.k, p.n):
                    for t in transcript_distribution(p, x):
                        code = compress_search_transcript(t, p.n, p.k)
                        ok = len(code) == p.n * symbol_width(p.k) and decompress_search_transcript(code, p.n, p.k) == t
                        bad += not ok
                return Check("compression-roundtrip", bad, 0, "==", 0.0)

            yield "compression-roundtrip", "lossless search compression", name, roundtrip


def _infotheory_suite(ctx: Context):
    tol = ctx.cfg.tol

    def closed_forms():
        disjoint = check_mi_hellinger(Pmf.point(0), Pmf.point(1), tol)
        same = check_mi_hellinger(Pmf.uniform((0, 1)), Pmf.uniform((0, 1)), tol)
        return [
            Check("mi-vs-hellinger[disjoint supports]", disjoint.lhs, 1.0, "==", tol),
            Check("mi-vs-hellinger[identical]", same.lhs, 0.0, "==", tol),
        ]

    yield "closed-forms", "information theory kernel", "-", closed_forms
    for name in ctx.cfg.protocols:
        def kernel(name=name):
            p = ctx.protocol(name)
            joint = costs.protocol_joint(ctx.dist_for(p), p)
            rows = [f"X{i}" for i in range(1, p.k + 1)]
            return [
                check_chain_rule(joint, rows, "T", tol=tol),
                check_simplified_chain(joint, "X1", "X2", "V1", ("M", "Z"), tol),
                check_drop_lemma(joint, "X1", "X2", "V1", ("M", "Z"), tol),
            ]

        def mi_h(name=name):
            p = ctx.protocol(name)
            inputs = list(all_inputs(p.k, p.n))
            laws = [transcript_distribution(p, x) for x in inputs]
            return worst(
                "mi-vs-hellinger",
                [check_mi_hellinger(a, b, tol) for a, b in itertools.combinations(laws, 2)],
                tol,
            )

        yield "kernel", "chain rules and drop lemma", name, kernel
        yield "mi-vs-hellinger", "mutual information vs Hellinger", name, mi_h


def _costs_suite(ctx: Context):
    tol = ctx.cfg.tol
    for name in ctx.cfg.protocols:
        def cc_ic(name=name):
            p = ctx.protocol(name)
            return costs.check_cc_ic(ctx.dist_for(p), p, tol)

        def sic_ic(name=name):
            p = ctx.protocol(name)
            return costs.check_sic_vs_ic(ctx.dist_for(p), p, tol)

        def nonneg(name=name):
            p = ctx.protocol(name)
            d = ctx.dist_for(p)
            r = costs.internal_ic(d, p).terms() + costs.switched_ic(d, p).terms()
            return Check("terms-nonnegative", min(r), 0.0, ">=", tol)

        yield "cc-vs-ic", "communication bounds internal cost", name, cc_ic
        yield "sic-vs-ic", "switched vs internal cost", name, sic_ic
        yield "terms-nonnegative", "information terms", name, nonneg


def _structure_suite(ctx: Context):
    tol = ctx.cfg.tol
    for name in ctx.cfg.protocols:
        def rectangle(name=name):
            p = ctx.protocol(name)
            out = []
            for i in range(1, p.k + 1):
                full, view = structure.check_rectangle(p, i)
                out.append(flag(f"rectangle-transcript[player {i}]", full.ok))
                out.append(flag(f"rectangle-view[player {i}]", view.ok))
            return out

        def diagonal(name=name):
            p = ctx.protocol(name)
            xs = list(all_inputs(p.k, p.n))
            return worst(
                "diagonal",
                [structure.check_diagonal(p, x, y, l, tol) for x in xs for y in xs for l in range(1, p.k + 1)],
                tol,
            )

        def h_delta(name=name):
            p = ctx.protocol(name)
            delta = error_probability(p, disj)
            xs = list(all_inputs(p.k, p.n))
            pairs = [(x, y) for x, y in itertools.combinations(xs, 2) if disj(x) != disj(y)]
            out = [worst("h-delta-tv", [check_h_delta_tv(p, x, y, disj, delta, tol) for x, y in pairs], tol)]
            if delta == 0:
                out.append(worst("h-delta", [check_h_delta(p, x, y, disj, delta, tol) for x, y in pairs], tol))
            return out

        yield "rectangle", "one-player rectangularity", name, rectangle
        yield "diagonal", "diagonal lemma", name, diagonal
        yield "h-delta", "distance of inputs with different answers", name, h_delta

        def one_bit(name=name):
            p = ctx.protocol(name)
            if p.n != 1:
                return []
            xi = build_xi(p.k)
            pairs = [(i, z) for i in range(1, p.k + 1) for z in range(1, p.k + 1) if i != z]
            out = [worst("conditional-diagonal", [structure.check_conditional_diagonal(p, xi, i, z, tol) for i, z in pairs], tol)]
            loc = [c for i, z in pairs for c in structure.check_localization(p, xi, i, z, tol)]
            out.append(worst("localization", loc, tol))
            report = structure.verify_onebit_chain(p, xi, tol=tol)
            out.extend(worst(f"chain-{link}", checks, tol) for link, checks in report.links.items())
            return out

        yield "one-bit", "one-bit AND lower-bound chain", name, one_bit


def _directsum_suite(ctx: Context):
    tol = ctx.cfg.tol
    for base in ("seq-search", "naive"):
        def lemma(base=base):
            return costs.check_direct_sum_lemma(ctx.protocol(base), tol=tol).checks

        yield "direct-sum", "direct-sum lemma", f"direct-sum(base={base})", lemma


def _taskalloc_suite(ctx: Context):
    n, k = ctx.cfg.n, ctx.cfg.k

    def correctness():
        return [
            Check(f"reduction-error[{enc}{',players-learn' if learn else ''}]",
                  error_probability(disj_via_ta(greedy_ta_protocol(n, k), n, k, enc, learn), disj), 0, "==", 0.0)
            for enc in ("vector", "list") for learn in (False, True)
        ]

    def overhead():
        return [
            Check(f"overhead[{enc}]", reduction_overhead(n, k, enc), closed_form_overhead(n, k, enc), "==", 0.0)
            for enc in ("vector", "list")
        ]

    def greedy():
        bad = 0
        for x in all_inputs(k, n):
            inst = TaskInstance.from_input(x)
            if inst.promise_holds:
                bad += not check_allocation(inst, greedy_allocation(inst)).ok
        return Check("greedy-valid-on-promise", bad, 0, "==", 0.0)

    def complement():
        bad = 0
        for x in all_inputs(k, n):
            covered = TaskInstance(n, tuple(frozenset(range(1, n + 1)) - s for s in x.as_sets())).promise_holds
            bad += covered != (disj(x) == 0)
        return Check("complement-identity", bad, 0, "==", 0.0)

    yield "reduction-correctness", "disjointness via task allocation", "disj-via-ta", correctness
    yield "overhead", "reduction overhead", "disj-via-ta", overhead
    yield "greedy-validity", "task allocation", "greedy-ta", greedy
    yield "complement-identity", "disjointness via task allocation", "-", complement


SUITE_FUNCS = {
    "model-invariants": _model_suite,
    "infotheory": _infotheory_suite,
    "costs": _costs_suite,
    "structure": _structure_suite,
    "directsum": _directsum_suite,
    "taskalloc": _taskalloc_suite,
}


def run(cfg: ExperimentConfig) -> tuple[int, dict]:
    cfg.validate()
    ctx = Context(cfg)
    records: list[Record] = []
    for suite in cfg.suites:
        for name, anchor, proto, thunk in SUITE_FUNCS[suite](ctx):
            try:
                with enumeration_budget(cfg.budget):
                    result = thunk()
            except BudgetExceeded:
                records.append(Record(suite, name, anchor, proto, None, None, None, "budget-exceeded"))
                continue
            for c in result if isinstance(result, list) else [result]:
                records.append(Record(suite, c.name, anchor, proto, c.lhs, c.rhs, c.margin, c.status))
    counts = {s: sum(r.status == s for r in records) for s in ("pass", "fail", "hypothesis-violated", "budget-exceeded")}
    if counts["fail"] or counts["hypothesis-violated"]:
        code = 1
    elif counts["budget-exceeded"]:
        code = 3
    else:
        code = 0
    config = {f.name: getattr(cfg, f.name) for f in fields(cfg) if f.name not in ("out", "format")}
    config["protocols"] = list(cfg.protocols)
    config["tol"] = costs.format_number(cfg.tol)
    report = {
        "schema": SCHEMA,
        "config": config,
        "summary": counts,
        "exit_status": code,
        "checks": [r.to_json_dict() for r in records],
    }
    return code, report


CSV_FIELDS = ("suite", "name", "anchor", "protocol", "lhs", "rhs", "margin", "status")


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for rec in report["checks"]:
        w.writerow({k: "" if rec[k] is None else rec[k] for k in CSV_FIELDS})
    return buf.getvalue()


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coordinfo", description="Exact verification suites for coordinator-model protocols.")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run verification suites")
    r.add_argument("--protocol", action="append", help="protocol name, comma list, or 'all' (repeatable)")
    r.add_argument("--dist", choices=DISTS)
    r.add_argument("--n", type=int)
    r.add_argument("--k", type=int)
    r.add_argument("--suite", choices=("all",) + SUITES)
    r.add_argument("--budget", type=int, help=f"enumeration budget (default {DEFAULT_BUDGET})")
    r.add_argument("--tol", type=float)
    r.add_argument("--out", help="write the report here instead of stdout")
    r.add_argument("--format", choices=("json", "csv"))
    r.add_argument("--config", help="JSON file with the same keys as the flags")
    return ap


def _protocol_list(values) -> tuple[str, ...]:
    names: list[str] = []
    for v in values:
        for part in v.split(",") if "(" not in v else [v]:
            part = part.strip()
            if part == "all":
                names.extend(HARNESS)
            elif part:
                names.append(part)
    return tuple(dict.fromkeys(names))


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    settings: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        known = {f.name for f in fields(ExperimentConfig)} | {"protocol"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        settings.update(data)
    for key in ("dist", "n", "k", "suite", "budget", "tol", "out", "format"):
        value = getattr(args, key)
        if value is not None:
            settings[key] = value
    protocols = args.protocol or settings.pop("protocol", None) or settings.pop("protocols", None)
    settings.pop("protocol", None)
    settings.pop("protocols", None)
    if protocols:
        settings["protocols"] = _protocol_list([protocols] if isinstance(protocols, str) else protocols)
    try:
        return ExperimentConfig(**settings)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def main(argv: list[str] | None = None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = config_from_args(args)
        code, report = run(cfg)
    except ConfigError as exc:
        print(f"coordinfo: {exc}", file=sys.stderr)
        return 2
    text = render(report, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
        s = report["summary"]
        print(f"{s['pass']} passed, {s['fail']} failed, {s['budget-exceeded']} over budget -> {cfg.out}")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
