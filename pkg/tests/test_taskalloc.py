import itertools

import pytest
from hypothesis import given, strategies as st

from coordinfo.model import InputMatrix, all_inputs, communication_cost, disj, error_probability, transcript_distribution
from coordinfo.taskalloc import (
    Allocation,
    TaskInstance,
    check_allocation,
    closed_form_overhead,
    decode_assignment,
    disj_via_ta,
    encode_assignment,
    greedy_allocation,
    greedy_ta_protocol,
    is_partition,
    reduction_overhead,
)

fs = frozenset


def promise_instances(n, k):
    for x in all_inputs(k, n):
        inst = TaskInstance.from_input(x)
        if inst.promise_holds:
            yield inst


def test_greedy_examples():
    a = greedy_allocation(TaskInstance(2, (fs({1, 2}), fs({2}))))
    assert a.assigned == (fs({1, 2}), fs())
    everyone = TaskInstance(3, (fs({1, 2, 3}),) * 3)
    assert greedy_allocation(everyone).assigned == (fs({1, 2, 3}), fs(), fs())
    late = TaskInstance(2, (fs(), fs({1}), fs({1, 2})))
    assert greedy_allocation(late).assigned == (fs(), fs({1}), fs({2}))


@pytest.mark.parametrize("n,k", [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_greedy_is_valid_under_promise(n, k):
    p = greedy_ta_protocol(n, k)
    for inst in promise_instances(n, k):
        (t,) = transcript_distribution(p, inst.to_input()).support
        assert check_allocation(inst, Allocation(t.output)).ok
        assert Allocation(t.output) == greedy_allocation(inst)


def test_task_instance_validation_and_json():
    with pytest.raises(ValueError):
        TaskInstance(2, (fs({3}),))
    inst = TaskInstance(3, (fs({3, 1}), fs()))
    assert inst.to_json() == '{"capabilities": [[1, 3], []], "k": 2, "n": 3}'
    assert TaskInstance.from_json(inst.to_json()) == inst
    assert not inst.promise_holds
    assert TaskInstance.from_input(inst.to_input()) == inst
    alloc = Allocation((fs({2, 1}), fs()))
    assert alloc.to_json() == '{"assigned": [[1, 2], []]}'
    assert Allocation.from_json(alloc.to_json()) == alloc


def test_check_allocation_witnesses():
    inst = TaskInstance(3, (fs({1, 2}), fs({2, 3})))
    assert check_allocation(inst, Allocation((fs({1, 2}), fs({3})))).ok
    r = check_allocation(inst, Allocation((fs({1, 2}), fs({2, 3}))))
    assert not r.ok and r.partition == (2, 1, 2)
    r = check_allocation(inst, Allocation((fs({1}), fs({3}))))
    assert r.coverage == 2 and r.partition is None
    r = check_allocation(inst, Allocation((fs({1, 3}), fs({2}))))
    assert r.capability == (1, 3)
    with pytest.raises(ValueError):
        check_allocation(inst, Allocation((fs({1, 2, 3}),)))


def test_is_partition():
    assert is_partition((fs({1}), fs({2})), 2)
    assert not is_partition((fs({1}), fs({1, 2})), 2)
    assert not is_partition((fs({1}), fs()), 2)


@pytest.mark.parametrize("n,k", [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_complement_identity(n, k):
    # disjoint sets exactly when the complements cover every task
    for x in all_inputs(k, n):
        comp = InputMatrix(tuple(tuple(1 - b for b in x.row(i)) for i in range(1, k + 1)))
        covered = TaskInstance.from_input(comp).promise_holds
        assert (disj(x) == 0) == covered


@pytest.mark.parametrize("encoding", ["vector", "list"])
@given(st.integers(1, 6), st.data())
def test_assignment_codec_round_trip(encoding, n, data):
    s = fs(data.draw(st.sets(st.integers(1, n))))
    code = encode_assignment(s, n, encoding)
    assert code[0] == "1"
    assert decode_assignment(code, n, encoding) == s


def test_assignment_codec_errors():
    with pytest.raises(ValueError):
        encode_assignment(fs(), 2, "bitmap")
    with pytest.raises(ValueError):
        decode_assignment("010", 2, "vector")
    assert encode_assignment(fs({2}), 3, "list") == "1" + "01" + "01"


def test_reduction_examples():
    p = disj_via_ta(greedy_ta_protocol(2, 2), 2, 2)
    (t,) = transcript_distribution(p, InputMatrix.from_rows((1, 0), (0, 1))).support
    assert t.output == 0
    # the TA phase sees complements: rows 01 and 10
    assert [m.payload for m in t.messages[:4]] == ["1", "01", "1", "10"]
    assert [m.payload for m in t.messages[4:]] == ["101", "1", "110", "1"]
    (t,) = transcript_distribution(p, InputMatrix.from_rows((1, 1), (0, 1))).support
    assert t.output == 1


@pytest.mark.parametrize("encoding", ["vector", "list"])
@pytest.mark.parametrize("players_learn", [False, True])
@pytest.mark.parametrize("n,k", [(1, 2), (2, 2), (3, 2), (2, 3)])
def test_reduction_is_correct(n, k, encoding, players_learn):
    p = disj_via_ta(greedy_ta_protocol(n, k), n, k, encoding, players_learn)
    assert error_probability(p, disj) == 0


# (4, 4) has 2^16 inputs and is left to the acceptance run
@pytest.mark.parametrize("n,k", [(n, k) for n, k in itertools.product(range(1, 5), repeat=2) if n * k <= 12])
def test_overhead_matches_closed_form(n, k):
    got = reduction_overhead(n, k)
    assert got == closed_form_overhead(n, k) <= k * (n + 2)
    assert reduction_overhead(n, k, "list") == closed_form_overhead(n, k, "list")


def test_overhead_one_player():
    for n in (1, 2, 3, 4):
        assert reduction_overhead(n, 1) == n + 2


def test_list_encoding_wins_with_many_players():
    # per-player cost drops from n + 2 to about log n, paid once n log n overall
    assert closed_form_overhead(4, 16, "list") < closed_form_overhead(4, 16, "vector")
    assert closed_form_overhead(64, 2, "list") > closed_form_overhead(64, 2, "vector")


def test_reduction_cost_is_ta_cost_plus_overhead():
    n, k = 2, 3
    ta = greedy_ta_protocol(n, k)
    assert communication_cost(disj_via_ta(ta, n, k)) == communication_cost(ta) + closed_form_overhead(n, k)


def test_reduction_rejects_mismatch_and_undeclared_rounds():
    ta = greedy_ta_protocol(2, 2)
    with pytest.raises(ValueError):
        disj_via_ta(ta, 3, 2)
    bare = type(ta)(ta.name, ta.k, ta.n, ta.coordinator, ta.player, ta.max_rounds)
    with pytest.raises(ValueError, match="player_rounds"):
        disj_via_ta(bare, 2, 2)

