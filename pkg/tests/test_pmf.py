from fractions import Fraction

import pytest

from coordinfo.budget import BudgetExceeded, current_budget, enumeration_budget, ensure_within
from coordinfo.pmf import JointPmf, Pmf, ZeroProbabilityError, product_pmf

F = Fraction


def test_rejects_bad_totals_and_weights():
    with pytest.raises(ValueError):
        Pmf({"a": F(1, 2)})
    with pytest.raises(ValueError):
        Pmf({"a": F(3, 2), "b": F(-1, 2)})
    with pytest.raises(TypeError):
        Pmf({"a": 0.5, "b": 0.5})


def test_zero_outcomes_are_dropped():
    p = Pmf({"a": 1, "b": 0})
    assert p.support == {"a"}
    assert p == Pmf.point("a")
    assert p["b"] == 0


def test_uniform_from_weights_mixture():
    assert Pmf.uniform("abc")["a"] == F(1, 3)
    assert Pmf.from_weights({0: 2, 1: 6}) == Pmf({0: F(1, 4), 1: F(3, 4)})
    mix = Pmf.mixture([(F(1, 2), Pmf.point(0)), (F(1, 2), Pmf.uniform((0, 1)))])
    assert mix == Pmf({0: F(3, 4), 1: F(1, 4)})
    with pytest.raises(ValueError):
        Pmf.uniform([])


def test_map_condition_product():
    die = Pmf.uniform(range(1, 7))
    assert die.map(lambda x: x % 2) == Pmf.uniform((0, 1))
    assert die.prob(lambda x: x > 4) == F(1, 3)
    assert die.condition(lambda x: x > 4) == Pmf.uniform((5, 6))
    with pytest.raises(ZeroProbabilityError):
        die.condition(lambda x: x > 6)
    pair = Pmf.uniform((0, 1)).product(Pmf.point("x"))
    assert pair == Pmf({(0, "x"): F(1, 2), (1, "x"): F(1, 2)})
    assert product_pmf([Pmf.uniform((0, 1))] * 3)[(0, 1, 1)] == F(1, 8)


def test_json_round_trip_and_golden():
    p = Pmf({"b": F(2, 3), "a": F(1, 3)})
    assert p.to_json() == '{"a": "1/3", "b": "2/3"}'
    assert Pmf.from_json(p.to_json()) == p


def test_joint_marginal_condition_and_derived():
    j = JointPmf(("A", "B"), {(0, 0): F(1, 2), (1, 0): F(1, 4), (1, 1): F(1, 4)})
    assert j.marginal("A") == Pmf({(0,): F(1, 2), (1,): F(1, 2)})
    assert j.condition_on(A=1).marginal("B") == Pmf.uniform([(0,), (1,)])
    with pytest.raises(ZeroProbabilityError):
        j.condition_on(A=2)
    with pytest.raises(KeyError):
        j.marginal("C")
    d = j.with_components({"S": lambda r: r["A"] + r["B"]})
    assert d.names == ("A", "B", "S")
    assert d.marginal("S")[(1,)] == F(1, 4)
    assert j.project(("B", "A")).names == ("B", "A")
    with pytest.raises(ValueError):
        JointPmf(("A", "A"), {(0, 0): 1})


def test_budget_context():
    assert current_budget() >= 1
    with enumeration_budget(5):
        ensure_within(5, "ok")
        with pytest.raises(BudgetExceeded):
            ensure_within(6, "too big")
        with pytest.raises(BudgetExceeded):
            product_pmf([Pmf.uniform(range(3))] * 2)
    with pytest.raises(ValueError):
        with enumeration_budget(0):
            pass
