import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import novikov
from swfloer.gluing import (
    ClosedInvariantTable,
    MismatchedSupport,
    NotACycle,
    RelativeInvariant,
    apply_boundary,
    apply_coboundary,
    assemble_relative,
    builtin_example_t2d2,
    closed_table_from_json,
    closed_table_to_json,
    glue_check,
    invariant_counts_from_json,
    invariant_counts_to_json,
    pair,
    t2s1_model,
)
from swfloer.novikov import build_novikov
from swfloer.oracle import GeneratorConfig, generate
from swfloer.series import LaurentSeries, series_inv

AMB = ("a",)


def chain(terms, order=20, ambient=AMB, gid="a"):
    return RelativeInvariant({gid: LaurentSeries(terms, order)}, 0, "", ambient)


def test_assemble_on_zero_boundary():
    n = build_novikov(novikov("gamma-laurent", [("a", 0, 0)], []))
    x = assemble_relative([("a", 2, 3)], n)
    assert x.chain == {"a": LaurentSeries({2: 3}, 32)}
    assert x.grade == 0


def test_boundary_image_is_not_a_cycle():
    n = build_novikov(novikov("gamma-laurent", [("a", 1, 5), ("b", 0, 0)], [("a", "b", 0, 1)]))
    with pytest.raises(NotACycle) as info:
        assemble_relative([("a", 0, 1)], n)
    assert "b" in info.value.image
    # b itself is closed, and a is closed for the transposed boundary only if it has no coboundary
    assemble_relative([("b", 0, 1)], n)
    with pytest.raises(NotACycle):
        assemble_relative([("b", 0, 1)], n, transpose=True)


def test_mixed_grades_are_refused():
    n = build_novikov(novikov("gamma-laurent", [("a", 1, 5), ("b", 0, 0)], []))
    with pytest.raises(ValueError):
        assemble_relative([("a", 0, 1), ("b", 0, 1)], n)
    with pytest.raises(ValueError):
        assemble_relative([("z", 0, 1)], n)


def test_solid_torus_counts():
    n = t2s1_model(30)
    x = assemble_relative([("u", m, -1) for m in range(1, 30, 2)], n)
    inv = series_inv(LaurentSeries({1: 1, -1: -1}, 30))
    assert x.chain["u"].agrees_with(inv)


def test_pair_examples():
    assert pair(chain({0: 1}), chain({0: 1})).terms() == [(0, 1)]
    assert pair(chain({1: 2}), chain({2: 3})).terms() == [(3, 6)]
    inv = series_inv(LaurentSeries({1: 1, -1: -1}, 30))
    x = RelativeInvariant({"u": inv}, 0, "", ("u",))
    p = pair(x, x)
    assert [p[2 * k] for k in range(1, 15)] == list(range(1, 15))
    assert pair(x, x, shift=2)[4] == 1


def test_mismatched_support():
    with pytest.raises(MismatchedSupport):
        pair(chain({0: 1}), chain({0: 1}, ambient=("a", "b")))


small = st.dictionaries(st.integers(-3, 6), st.integers(-4, 4), max_size=4)


@given(small, small, small, st.integers(-3, 3))
def test_bilinearity(x, y, z, c):
    a, b, w = chain(x), chain(y), chain(z)
    lhs = pair(RelativeInvariant({"a": a.chain["a"] * c + b.chain["a"]}, 0, "", AMB), w)
    rhs = pair(a, w) * c + pair(b, w)
    assert lhs.agrees_with(rhs)


def raw_pair(u, v):
    acc = LaurentSeries.zero(64) * LaurentSeries.zero(64)
    for k in set(u) & set(v):
        acc = acc + u[k] * v[k]
    return acc


def test_adjointness_on_random_chains():
    rng = random.Random(8)
    for seed in range(15):
        d = generate(GeneratorConfig("gamma-laurent", seed=seed, num_points=12, max_level=2))
        n = build_novikov(d, 40)
        c = n.underlying
        for g in c.grades():
            down = c.target(g)
            if down not in c.generators:
                continue
            u = {a: LaurentSeries({rng.randint(-2, 3): rng.randint(-3, 3)}, 40) for a in c.generators[g]}
            v = {b: LaurentSeries({rng.randint(-2, 3): rng.randint(-3, 3)}, 40) for b in c.generators[down]}
            lhs = raw_pair(apply_boundary(n, u, g), v)
            rhs = raw_pair(u, apply_coboundary(n, v, down))
            assert lhs.agrees_with(rhs)


def test_glue_examples():
    zero = RelativeInvariant({}, 0, "", AMB)
    assert glue_check(zero, zero, ClosedInvariantTable())["all_match"]
    assert not glue_check(zero, zero, ClosedInvariantTable({2: 1}), truncation=10)["all_match"]


def test_glue_self_consistency():
    rng = random.Random(2)
    for _ in range(30):
        x = {g: LaurentSeries({rng.randint(-2, 4): rng.randint(-3, 3) for _ in range(2)}, 16) for g in "ab"}
        y = {g: LaurentSeries({rng.randint(-2, 4): rng.randint(-3, 3) for _ in range(2)}, 16) for g in "ab"}
        # closed table by direct convolution of coefficient lists
        table = {}
        for g in "ab":
            for e1, c1 in x[g].terms():
                for e2, c2 in y[g].terms():
                    table[e1 + e2] = table.get(e1 + e2, 0) + int(c1 * c2)
        shift = rng.randint(-2, 2)
        table = {d - shift: v for d, v in table.items()}
        X = RelativeInvariant(x, 0, "", ("a", "b"))
        Y = RelativeInvariant(y, 0, "", ("a", "b"))
        assert glue_check(X, Y, ClosedInvariantTable(table), shift=shift)["all_match"]


def test_builtin_example():
    x, p, report = builtin_example_t2d2(10)
    assert report["all_match"]
    got = {e["exponent"]: e["paired"] for e in report["entries"]}
    assert [got[e] for e in (2, 4, 6, 8)] == [1, 2, 3, 4]
    assert all(got[e] == 0 for e in (3, 5, 7, 9))
    _, _, small_report = builtin_example_t2d2(4)
    assert [e["exponent"] for e in small_report["entries"] if e["closed"]] == [2]
    flipped = x.scaled(-1)
    assert pair(flipped, flipped).agrees_with(p)
    assert all(c >= 0 for _, c in p.terms())
    with pytest.raises(ValueError):
        builtin_example_t2d2(3)


def test_file_formats():
    obj = invariant_counts_to_json("X1", [("a", 1, 2), ("a", 3, -1), ("b", 0, 5)])
    assert obj == {"version": 1, "label": "X1", "side": "Y0", "chain": [["a", [[1, 2], [3, -1]]], ["b", [[0, 5]]]]}
    label, transpose, counts = invariant_counts_from_json(obj)
    assert (label, transpose) == ("X1", False)
    assert counts == [("a", 1, 2), ("a", 3, -1), ("b", 0, 5)]
    table = ClosedInvariantTable({2: 1, 4: 2, 6: 0})
    assert closed_table_to_json(table) == {"version": 1, "table": [[2, 1], [4, 2]]}
    assert closed_table_from_json(closed_table_to_json(table)) == table
    for bad in ({"version": 2, "table": []}, {"version": 1, "table": [[1, 1], [1, 2]]}, {"version": 1}):
        with pytest.raises(ValueError):
            closed_table_from_json(bad)
    with pytest.raises(ValueError):
        invariant_counts_from_json(dict(obj, version=3))
