"""Acceptance criteria AC1 to AC11, one test each.

Every test prints a single ``[PASS]`` or ``[FAIL]`` line before asserting,
so ``pytest -s`` or the captured log shows the verdict per criterion.
"""

import itertools
import math
import random
from fractions import Fraction

import pytest

from randjoint import random_joint, random_pmf, random_split_joint
from coordinfo.costs import check_cc_ic, check_direct_sum_lemma, check_sic_vs_ic
from coordinfo.distributions import build_uniform, build_xi, collapsing_epsilon, product_power
from coordinfo.harness import harness
from coordinfo.infotheory import (
    TOL,
    check_chain_rule,
    check_drop_lemma,
    check_h_delta,
    check_mi_hellinger,
    check_simplified_chain,
)
from coordinfo.model import InputMatrix, all_inputs, and_k, disj, error_probability, transcript_distribution
from coordinfo.pmf import JointPmf, Pmf
from coordinfo.protolib import (
    and_poll_protocol,
    compress_search_transcript,
    decompress_search_transcript,
    direct_sum_protocol,
    naive_protocol,
    noisy_and_protocol,
    noisy_reply_and_protocol,
    random_order_and_protocol,
    sequential_search_protocol,
)
from coordinfo.structure import (
    check_conditional_diagonal,
    check_diagonal,
    check_localization,
    check_rectangle,
    verify_onebit_chain,
)
from coordinfo.taskalloc import closed_form_overhead, disj_via_ta, greedy_ta_protocol, reduction_overhead

F = Fraction


@pytest.fixture
def verdict(capsys):
    def emit(tag, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {tag} {detail}".rstrip())
        assert ok, f"{tag} {detail}"

    return emit


def one_bit_harness(k):
    """Harness protocols that solve the one-coordinate problem at ``k``
    players, including the direct-sum embeddings of two-coordinate bases."""
    out = {}
    for n in (1, 2):
        for name, p in harness(n, k).items():
            if p.n == 1:
                out.setdefault(f"{name}@n={n}" if name.startswith("direct-sum") else name, p)
    return out


def test_ac1_collapsing_epsilon(verdict):
    bad = [k for k in range(2, 9) if collapsing_epsilon(build_xi(k).marginal_zeta()) != F(1, 3 * 2 ** (k - 1))]
    verdict("AC1", not bad, f"epsilon exact for k=2..8; mismatches {bad}")


def test_ac2_rectangles(verdict):
    failures, count = [], 0
    for n, k in [(1, 2), (1, 3), (2, 2), (2, 3)]:
        for name, p in harness(n, k).items():
            for i in range(1, k + 1):
                for rep in check_rectangle(p, i):
                    count += rep.quadruples
                    if not rep.ok:
                        failures.append((name, n, k, i, rep.witness))
    verdict("AC2", not failures, f"{count} quadruples checked; failures {failures[:3]}")


def test_ac3_h_delta_seq_search(verdict):
    p = sequential_search_protocol(2, 3)
    xs = list(all_inputs(3, 2))
    checks = [check_h_delta(p, x, y, disj, 0) for x, y in itertools.combinations(xs, 2) if disj(x) != disj(y)]
    low = min(c.lhs for c in checks)
    ok = all(c.passed for c in checks) and low >= 1 / math.sqrt(2) - 1e-9
    verdict("AC3", ok, f"{len(checks)} pairs; smallest h = {low:.6f}")


def test_ac4_diagonals(verdict):
    plain = [c for k in (2, 3) for n in (1, 2) for p in harness(n, k).values()
             for x in all_inputs(k, p.n) for y in all_inputs(k, p.n) for l in range(1, k + 1)
             for c in [check_diagonal(p, x, y, l)]]
    conditional = [
        check_conditional_diagonal(p, build_xi(k), i, z)
        for k in (2, 3) for p in one_bit_harness(k).values()
        for i in range(1, k + 1) for z in range(1, k + 1) if i != z
    ]
    worst = min(c.margin for c in plain + conditional)
    ok = all(c.passed for c in plain + conditional) and worst >= -1e-9
    verdict("AC4", ok, f"{len(plain)} diagonal and {len(conditional)} conditional checks; worst margin {worst:.3g}")


def test_ac5_localization(verdict):
    checks = [
        c
        for k in (2, 3, 4) for p in one_bit_harness(k).values()
        for i in range(1, k + 1) for z in range(1, k + 1) if i != z
        for c in check_localization(p, build_xi(k), i, z)
    ]
    worst = max(c.residual for c in checks)
    verdict("AC5", worst <= 1e-9, f"{len(checks)} checks; largest residual {worst:.3g}")


def test_ac6_direct_sum(verdict):
    lines, ok = [], True
    eps = collapsing_epsilon(build_xi(2).marginal_zeta())
    for base in (sequential_search_protocol(2, 2), naive_protocol(2, 2)):
        rep = check_direct_sum_lemma(base, 2, 2)
        delta = error_probability(base, disj)
        err = error_probability(direct_sum_protocol(base), and_k)
        ok &= rep.passed and min(c.margin for c in rep.checks) >= -1e-9 and err <= delta + 2 * eps
        lines.append(f"{base.name}: error {err} <= {delta + 2 * eps}")
    verdict("AC6", ok, "; ".join(lines))


def test_ac7_onebit_chain(verdict):
    k = 3
    xi = build_xi(k)
    protocols = dict(one_bit_harness(k))
    for p in (random_order_and_protocol(k), noisy_and_protocol(k), noisy_reply_and_protocol(k)):
        protocols[p.name] = p
    ok, notes = True, []
    for name, p in protocols.items():
        rep = verify_onebit_chain(p, xi)
        sic = rep.links["sic"][0]
        bound = (1 - float(rep.delta)) ** 2 / 96
        ok &= sic.lhs >= bound - 1e-9 and rep.passed
        if rep.delta == 0:
            ok &= sic.rhs == 1 / 96
        notes.append(f"{name} delta={rep.delta} SIC={sic.lhs:.4f}")
    verdict("AC7", ok, f"{len(protocols)} protocols; " + "; ".join(notes))


def test_ac8_cc_ic(verdict):
    checks = []
    for n, k in [(1, 3), (2, 2), (2, 3)]:
        for p in harness(n, k).values():
            for dist in (product_power(build_xi(k), p.n), build_uniform(p.n, k)):
                checks.append(check_cc_ic(dist, p))
    worst = min(c.margin for c in checks)
    verdict("AC8", all(c.passed for c in checks) and worst >= -1e-9, f"{len(checks)} cases; worst margin {worst:.4f}")


def test_ac9_sic_vs_ic(verdict):
    checks = [check_sic_vs_ic(product_power(build_xi(k), p.n), p)
              for n, k in [(1, 3), (2, 2)] for p in harness(n, k).values()]
    worst = min(c.margin for c in checks)
    verdict("AC9", all(c.passed for c in checks) and worst >= -1e-9, f"{len(checks)} cases; worst margin {worst:.4f}")


def test_ac10_task_allocation(verdict):
    errors = {
        (n, k, enc): error_probability(disj_via_ta(greedy_ta_protocol(n, k), n, k, enc), disj)
        for n, k in [(2, 2), (3, 2), (2, 3)] for enc in ("vector", "list")
    }
    overhead = {
        (n, k, enc): (reduction_overhead(n, k, enc), closed_form_overhead(n, k, enc))
        for n, k in [(1, 2), (2, 2), (3, 2), (2, 3), (3, 3)] for enc in ("vector", "list")
    }
    bad_codes = 0
    for n, k in [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3)]:
        p = sequential_search_protocol(n, k)
        w = math.ceil(math.log2(k + 1))
        for x in all_inputs(k, n):
            (t,) = transcript_distribution(p, x).support
            code = compress_search_transcript(t, n, k)
            bad_codes += len(code) != n * w or decompress_search_transcript(code, n, k) != t
    ok = all(e == 0 for e in errors.values()) and all(a == b for a, b in overhead.values()) and bad_codes == 0
    verdict("AC10", ok, f"{len(errors)} exhaustive runs; {len(overhead)} overhead cases; {bad_codes} bad codes")


def _closed_form_kernel_cases():
    det = JointPmf(("A", "B", "C"), {(0, 1, 1): F(1, 2), (1, 0, 1): F(1, 2)})
    xor = JointPmf(("A", "B", "C", "D"), {(a, b, a ^ b, 0): F(1, 4) for a in (0, 1) for b in (0, 1)})
    const_b = JointPmf(("A", "B", "C", "D"), {(a, 0, a, 0): F(1, 2) for a in (0, 1)})
    disjoint = check_mi_hellinger(Pmf.point(0), Pmf.point(1))
    same = check_mi_hellinger(Pmf.uniform((0, 1)), Pmf.uniform((0, 1)))
    return [
        check_chain_rule(det, ("A", "B"), "C").passed,
        check_simplified_chain(xor, "A", "B", "C", "D").passed,
        abs(check_drop_lemma(const_b, "A", "B", "C", "D").margin) <= TOL,
        disjoint.passed and abs(disjoint.lhs - 1) <= TOL and disjoint.rhs == 1,
        same.passed and abs(same.lhs) <= TOL,
    ]


def test_ac11_kernel(verdict):
    trials = 120
    counts = {"chain": 0, "simplified": 0, "drop": 0, "mi-h": 0}
    worst = math.inf
    for seed in range(trials):
        rng = random.Random(seed)
        j = random_joint(rng, sizes=(2, 2, 2))
        c = check_chain_rule(j, ("A", "B"), "C")
        counts["chain"] += c.passed
        s = random_split_joint(rng)
        a = check_simplified_chain(s, "A", "B", "C", "D")
        b = check_drop_lemma(s, "A", "B", "C", "D")
        counts["simplified"] += a.passed
        counts["drop"] += b.passed
        size = rng.randint(1, 6)
        m = check_mi_hellinger(random_pmf(rng, size), random_pmf(rng, size))
        counts["mi-h"] += m.passed
        worst = min(worst, -c.residual, a.margin, b.margin, m.margin)
    closed = _closed_form_kernel_cases()
    ok = all(v == trials for v in counts.values()) and all(closed) and worst >= -1e-9
    verdict("AC11", ok, f"{trials} trials each {counts}; closed forms {sum(closed)}/{len(closed)}")


def test_ac_inputs_are_well_formed():
    # guard against the sweeps silently shrinking
    assert len(one_bit_harness(3)) == 7
    assert len(list(all_inputs(3, 2))) == 64
    assert InputMatrix.from_rows((1,), (1,), (1,)) in set(all_inputs(3, 1))
    assert and_poll_protocol(3).name in one_bit_harness(3)
