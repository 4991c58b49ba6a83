import itertools
from fractions import Fraction

import pytest

import oracle
from coordinfo.distributions import build_xi, collapsing_epsilon, e_bar
from coordinfo.model import (
    InputMatrix,
    Transcript,
    all_inputs,
    and_k,
    check_alternation,
    communication_cost,
    disj,
    error_probability,
    privacy_probe,
    transcript_distribution,
    view_distribution,
)
from coordinfo.pmf import Pmf
from coordinfo.protolib import (
    EmbeddingConfig,
    and_poll_protocol,
    build_direct_sum_protocol,
    compress_search_transcript,
    constant_protocol,
    decompress_search_transcript,
    direct_sum_protocol,
    embedded_inputs,
    naive_protocol,
    noisy_and_protocol,
    noisy_reply_and_protocol,
    random_order_and_protocol,
    sequential_search_protocol,
    symbol_width,
)

F = Fraction


def only(law: Pmf) -> Transcript:
    (t,) = law.support
    return t


def test_naive_cost_and_views():
    p = naive_protocol(2, 3)
    assert communication_cost(p) == 9
    assert error_probability(p, disj) == 0
    for i in range(1, 4):
        for row in itertools.product((0, 1), repeat=2):
            views = {
                view_distribution(p, x, i)
                for x in all_inputs(3, 2)
                if x.row(i) == row
            }
            assert len(views) == 1


def test_seq_search_traces():
    for n in (1, 2):
        for k in (2, 3):
            p = sequential_search_protocol(n, k)
            zeros = InputMatrix(tuple((0,) * n for _ in range(k)))
            assert only(transcript_distribution(p, zeros)).bits == 2 * n
            ones = InputMatrix(tuple((1,) * n for _ in range(k)))
            t = only(transcript_distribution(p, ones))
            assert t.output == 1
            assert len(t.messages) == 2 * k
            assert {m.payload for m in t.messages[::2]} == {"0"}


@pytest.mark.parametrize("n,k", [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_seq_search_zero_error_and_cost_oracle(n, k):
    p = sequential_search_protocol(n, k)
    assert error_probability(p, disj) == 0
    for x in all_inputs(k, n):
        assert only(transcript_distribution(p, x)).bits == oracle.seq_search_bits(x.columns(), k, n)


@pytest.mark.parametrize("n,k", [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_compression_round_trip_and_injective(n, k):
    p = sequential_search_protocol(n, k)
    codes = {}
    for x in all_inputs(k, n):
        t = only(transcript_distribution(p, x))
        code = compress_search_transcript(t, n, k)
        assert len(code) == n * symbol_width(k)
        assert decompress_search_transcript(code, n, k) == t
        assert codes.setdefault(code, t) == t


def test_compression_examples():
    assert symbol_width(3) == 2
    p = sequential_search_protocol(2, 3)
    t = only(transcript_distribution(p, InputMatrix.from_rows((1, 1), (1, 0), (0, 1))))
    assert compress_search_transcript(t, 2, 3) == "1110"  # symbols 3, 2
    q = sequential_search_protocol(1, 3)
    t = only(transcript_distribution(q, e_bar(3, 2)))
    assert compress_search_transcript(t, 1, 3) == "10"  # the single symbol 2


def test_compression_rejects_malformed():
    p = sequential_search_protocol(2, 2)
    t = only(transcript_distribution(p, InputMatrix.from_rows((1, 0), (0, 1))))
    with pytest.raises(ValueError):
        compress_search_transcript(Transcript(t.messages[:-1], 0), 2, 2)
    with pytest.raises(ValueError):
        compress_search_transcript(Transcript(t.messages, 1), 2, 2)
    with pytest.raises(ValueError):
        compress_search_transcript(Transcript(t.messages[2:], 0), 2, 2)
    with pytest.raises(ValueError):
        decompress_search_transcript("111", 2, 2)
    with pytest.raises(ValueError):
        decompress_search_transcript("0001", 2, 2)


def test_and_poll():
    for k in (2, 3, 4):
        p = and_poll_protocol(k)
        assert error_probability(p, and_k) == 0
        assert only(transcript_distribution(p, InputMatrix(((1,),) * k))).output == 1
        t = only(transcript_distribution(p, e_bar(k, 1)))
        assert t.output == 0 and len(t.messages) == 2


def test_randomized_and_protocols():
    assert error_probability(random_order_and_protocol(3), and_k) == 0
    assert error_probability(noisy_and_protocol(3, F(1, 5)), and_k) == F(1, 5)
    assert error_probability(noisy_reply_and_protocol(3, F(1, 5)), and_k) == F(1, 5)
    assert error_probability(constant_protocol(1, 2, 0), and_k) == 1


@pytest.mark.parametrize(
    "make",
    [
        lambda: naive_protocol(2, 2),
        lambda: sequential_search_protocol(2, 2),
        lambda: random_order_and_protocol(3),
        lambda: noisy_reply_and_protocol(2),
        lambda: direct_sum_protocol(sequential_search_protocol(2, 2)),
    ],
)
def test_constructors_respect_model(make):
    p = make()
    for x in all_inputs(p.k, p.n):
        assert all(check_alternation(t) for t in transcript_distribution(p, x))
    assert all(privacy_probe(p, i) for i in range(1, p.k + 1))


def test_direct_sum_error_bound_seq_search_2_3():
    base = sequential_search_protocol(2, 3)
    hat = direct_sum_protocol(base)
    delta = error_probability(base, disj)
    eps = collapsing_epsilon(build_xi(3).marginal_zeta())
    err = error_probability(hat, and_k)
    assert err <= delta + 2 * eps
    # the only error source is another coordinate collapsing to all ones
    assert err == eps
    ones = InputMatrix(((1,),) * 3)
    p1 = transcript_distribution(hat, ones).prob(lambda t: t.output == 1)
    assert p1 >= 1 - delta - 2 * eps


def test_direct_sum_single_coordinate_is_exact():
    hat = direct_sum_protocol(sequential_search_protocol(1, 3))
    assert error_probability(hat, and_k) == 0


def test_direct_sum_setup_message_widths():
    hat = direct_sum_protocol(sequential_search_protocol(3, 3))
    # a setup payload spends 2 bits on j, 2 bits per off pointer and one bit
    # per off coordinate; the ack is one bit
    for t in transcript_distribution(hat, e_bar(3, 2)):
        setup = t.messages[:6]
        assert [len(m.payload) for m in setup] == [2 + 2 * 2 + 2, 1] * 3


def test_embedding_off_coordinates_follow_xi():
    k, n = 2, 3
    cfg = EmbeddingConfig(sequential_search_protocol(n, k))
    xi = {(x.column(1), m[0], z[0]): q for (x, m, z), q in build_xi(k).joint.items()}
    for u in all_inputs(k, 1):
        law = embedded_inputs(cfg, u)
        for l in range(1, n + 1):
            off = law.condition(lambda o: o[0] != l)
            col = off.map(lambda o: (o[1].column(l), o[2][l - 1], o[3][l - 1]))
            assert dict(col.items()) == xi
        at_j = law.map(lambda o: o[1].column(o[0]))
        assert at_j == Pmf.point(u.column(1))


def test_embedding_off_coordinates_are_independent():
    k, n = 2, 2
    cfg = EmbeddingConfig(sequential_search_protocol(n, k))
    law = embedded_inputs(cfg, e_bar(2, 1)).condition(lambda o: o[0] == 1)
    xi = {(x.column(1), m[0], z[0]): q for (x, m, z), q in build_xi(k).joint.items()}
    assert dict(law.map(lambda o: (o[1].column(2), o[2][1], o[3][1])).items()) == xi


def test_coin_budget_must_match():
    base = sequential_search_protocol(2, 2)
    cfg = EmbeddingConfig(base)
    assert cfg.required_player_bits() == 1
    build_direct_sum_protocol(EmbeddingConfig(base, 1, cfg.required_coordinator_outcomes()))
    with pytest.raises(ValueError, match="coin budget mismatch"):
        build_direct_sum_protocol(EmbeddingConfig(base, player_coin_bits=2))
    with pytest.raises(ValueError, match="coin budget mismatch"):
        build_direct_sum_protocol(EmbeddingConfig(base, coordinator_outcomes=1))
