import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cbd.system import (
    ContextDistribution,
    InvalidSystemError,
    System,
    connected_components,
    context_graph,
    correlation,
    is_consistently_connected,
    marginal,
    validate,
)
from systems import ANTI3, CORR3, PRBOX4, cyclic, inconsistent3, pair_pmf, uniform_pair, union

F = Fraction


def test_valid_cyclic3_has_empty_report():
    assert validate(CORR3) == []


def test_sum_nine_tenths_is_one_violation_naming_the_context():
    bad = System(
        (
            ContextDistribution("c1", ("1", "2"), uniform_pair(1)),
            ContextDistribution("c2", ("2", "3"), {(1, 1): F(2, 5), (-1, -1): F(1, 2)}),
            ContextDistribution("c3", ("3", "1"), uniform_pair(1)),
        )
    )
    report = validate(bad)
    assert len(report) == 1
    assert "'c2'" in report[0] and "9/10" in report[0]


def test_duplicated_content_in_a_context():
    bad = System((ContextDistribution("c1", ("1", "1"), {(1, 1): F(1)}),))
    report = validate(bad)
    assert len(report) == 1 and "more than once" in report[0]


def test_other_violations():
    assert validate(System(())) == ["system has no contexts"]
    neg = System((ContextDistribution("c", ("a",), {(1,): F(3, 2), (-1,): F(-1, 2)}),))
    assert any("negative" in v for v in validate(neg))
    dup = System((ContextDistribution("c", ("a",), {(1,): 1}), ContextDistribution("c", ("b",), {(1,): 1})))
    assert any("declared more than once" in v for v in validate(dup))
    empty = System((ContextDistribution("c", (), {(): 1}),))
    assert any("no contents" in v for v in validate(empty))
    categorical = System((ContextDistribution("c", ("a",), {(2,): 1}),))
    assert any("dichotomized" in v for v in validate(categorical))
    declared = System((ContextDistribution("c", ("a",), {(1,): 1}),), declared_contents=("a", "b"))
    assert validate(declared) == ["content 'b' appears in no context"]
    with pytest.raises(InvalidSystemError):
        declared.require_valid()


def test_derived_structure():
    assert ANTI3.contents == ("1", "2", "3")
    assert ANTI3.slots == (("1", "c1"), ("2", "c1"), ("2", "c2"), ("3", "c2"), ("3", "c3"), ("1", "c3"))
    assert ANTI3.connections == {"1": ("c1", "c3"), "2": ("c1", "c2"), "3": ("c2", "c3")}
    assert len(ANTI3.connection_pairs) == 3
    assert len(PRBOX4.connection_pairs) == 4


PERFECT = {(1, 1): F(1, 2), (-1, -1): F(1, 2)}


def test_marginal_examples():
    s = System((ContextDistribution("c", ("a", "b"), PERFECT),))
    assert marginal(s, "c", ["a"]) == {(-1,): F(1, 2), (1,): F(1, 2)}
    full = marginal(s, "c", ["a", "b"])
    assert {k: v for k, v in full.items() if v} == PERFECT
    t = System((ContextDistribution("c", ("a", "b"), {(1, 1): F(1, 2), (1, -1): F(1, 4), (-1, 1): F(1, 4)}),))
    # direct summation: Pr[a=+1] = 1/2 + 1/4
    assert marginal(t, "c", ["a"]) == {(1,): F(3, 4), (-1,): F(1, 4)}


def test_marginal_errors():
    with pytest.raises(KeyError):
        marginal(CORR3, "nope", ["1"])
    with pytest.raises(KeyError):
        marginal(CORR3, "c1", ["3"])
    with pytest.raises(ValueError):
        marginal(CORR3, "c1", [])


def test_correlation_examples():
    def sys_(pmf):
        return System((ContextDistribution("c", ("a", "b"), pmf),))

    assert correlation(sys_(PERFECT), "c", "a", "b") == 1
    assert correlation(sys_({(1, -1): F(1, 2), (-1, 1): F(1, 2)}), "c", "a", "b") == -1
    uniform = {k: F(1, 4) for k in itertools.product((-1, 1), repeat=2)}
    assert correlation(sys_(uniform), "c", "a", "b") == 0
    with pytest.raises(KeyError):
        correlation(CORR3, "c1", "1", "3")


def test_consistency_examples():
    assert is_consistently_connected(CORR3) == (True, [])
    ok, violations = is_consistently_connected(inconsistent3())
    assert not ok
    assert [(v.content, v.context_a, v.context_b) for v in violations] == [("1", "c1", "c3")]
    assert (violations[0].plus_a, violations[0].plus_b) == (F(1, 2), F(3, 4))
    single = System((ContextDistribution("c", ("a", "b"), PERFECT),))
    assert is_consistently_connected(single) == (True, [])


def test_context_graph_examples():
    assert context_graph(ANTI3) == {"c1": {"c2", "c3"}, "c2": {"c1", "c3"}, "c3": {"c1", "c2"}}
    two = System((ContextDistribution("a", ("x",), {(1,): 1}), ContextDistribution("b", ("y",), {(1,): 1})))
    assert context_graph(two) == {"a": set(), "b": set()}
    one = System((ContextDistribution("a", ("x",), {(1,): 1}),))
    assert context_graph(one) == {"a": set()}


def test_connected_components_examples():
    assert connected_components(ANTI3) == [ANTI3]
    both = union(cyclic([-1, -1, -1]), cyclic([1, 1, 1], prefix="d", contents=["4", "5", "6"]))
    comps = connected_components(both)
    assert [c.context_ids for c in comps] == [("c1", "c2", "c3"), ("d1", "d2", "d3")]
    three = System(tuple(ContextDistribution(f"c{i}", (f"q{i}",), {(1,): 1}) for i in range(3)))
    assert len(connected_components(three)) == 3


# random small systems: contexts over a pool of contents, random rational pmfs
@st.composite
def systems(draw, max_contexts=4, pool="abcd"):
    k = draw(st.integers(1, max_contexts))
    ctxs = []
    for i in range(k):
        contents = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=3, unique=True))
        keys = list(itertools.product((-1, 1), repeat=len(contents)))
        w = draw(st.lists(st.integers(0, 9), min_size=len(keys), max_size=len(keys)))
        if not any(w):
            w[0] = 1
        pmf = {key: F(x, sum(w)) for key, x in zip(keys, w) if x}
        ctxs.append(ContextDistribution(f"k{i}", tuple(contents), pmf))
    return System(tuple(ctxs))


@settings(max_examples=150, deadline=None)
@given(systems())
def test_tower_property_and_pmf_laws(system):
    assert validate(system) == []
    for ctx in system.contexts:
        full = marginal(system, ctx.context, ctx.contents)
        assert sum(full.values()) == 1 and all(v >= 0 for v in full.values())
        for r in range(1, len(ctx.contents) + 1):
            for big in itertools.combinations(ctx.contents, r):
                big_m = marginal(system, ctx.context, big)
                for r2 in range(1, r + 1):
                    for small in itertools.combinations(big, r2):
                        idx = [big.index(q) for q in small]
                        via = {}
                        for key, p in big_m.items():
                            k2 = tuple(key[i] for i in idx)
                            via[k2] = via.get(k2, 0) + p
                        assert via == marginal(system, ctx.context, small)


@settings(max_examples=150, deadline=None)
@given(systems())
def test_correlation_symmetric_and_bounded(system):
    for ctx in system.contexts:
        for q1, q2 in itertools.combinations(ctx.contents, 2):
            e = correlation(system, ctx.context, q1, q2)
            assert e == correlation(system, ctx.context, q2, q1)
            assert -1 <= e <= 1


@settings(max_examples=150, deadline=None)
@given(systems(max_contexts=5, pool="abcdefg"))
def test_components_partition_the_slots(system):
    comps = connected_components(system)
    slots = [s for c in comps for s in c.slots]
    assert sorted(slots) == sorted(system.slots)
    assert len(slots) == len(set(slots))
    # no content is shared across components
    seen = {}
    for i, c in enumerate(comps):
        for q in c.contents:
            assert seen.setdefault(q, i) == i


def test_pair_pmf_helper_matches_marginals():
    pmf = pair_pmf(F(1, 3), F(1, 2), F(1, 6))
    s = System((ContextDistribution("c", ("a", "b"), pmf),))
    assert marginal(s, "c", ["a"])[(1,)] == F(1, 3)
    assert marginal(s, "c", ["b"])[(1,)] == F(1, 2)
