import json
import random
from dataclasses import replace
from fractions import Fraction

import pytest

from conftest import nontorsion, novikov
from swfloer.datum import (
    CriticalPoint,
    FloerDatum,
    FlowClass,
    MalformedDatum,
    ValidationFailed,
    assemble_boundary,
    boundary_blocks,
    datum_from_json,
    datum_to_json,
    dumps_datum,
    loads_datum,
    restrict_min_level,
    validate,
)
from swfloer.graded_complex import Q, Z
from swfloer.oracle import GeneratorConfig, generate
from swfloer.series import LaurentSeries, PowerSeries


def rules(d):
    return {(v.rule, v.name) for v in validate(d).violations}


def test_below_diagonal_flow():
    d = nontorsion([("a", 2, "1/2"), ("b", 5, "1")], [("a", "b", -1, 1)], ell=2)
    assert ("R1", "BelowDiagonalFlow") in rules(d)


def test_csd_must_decrease_on_level_zero():
    d = nontorsion([("a", 2, "1/4"), ("b", 1, "3/4")], [("a", "b", 0, 1)], ell=2)
    assert ("R2", "CsdNotDecreasing") in rules(d)


def test_two_step_composite_is_caught():
    d = nontorsion(
        [("a", 2, "3/2"), ("b", 1, "1"), ("c", 0, "1/2")],
        [("a", "b", 0, 1), ("b", "c", 0, 1)],
        ell=2,
    )
    assert rules(d) == {("R5", "BoundarySquareNonzero")}
    g = novikov(
        "gamma-laurent",
        [("a", 2, 4), ("b", 1, 2), ("c", 0, 0)],
        [("a", "b", 0, 1), ("b", "c", 0, 1)],
    )
    assert rules(g) == {("G4", "BoundarySquareNonzero")}


def test_windows_and_grades():
    d = nontorsion([("a", 2, "5/2")], [], ell=2)
    assert ("R3", "CsdWindowBreach") in rules(d)
    bad = FloerDatum("nontorsion", (CriticalPoint("a", "s", 1, 2, Fraction(1)),), (), ell=2)
    assert ("R3", "GradeLiftMismatch") in rules(bad)


def test_odd_ell_is_a_warning():
    d = nontorsion([("a", 0, "1/2")], [], ell=3)
    report = validate(d)
    assert report.ok
    assert [v.rule for v in report.warnings] == ["R4"]


def test_novikov_rules():
    t = novikov("torsion-novikov", [("a", 1, 3), ("b", 0, 0)], [("a", "b", -1, 1)])
    assert ("G2", "NegativeLevel") in rules(t)
    g = novikov("gamma-laurent", [("a", 1, 3), ("b", 0, 0)], [("a", "b", -1, 1)])
    assert rules(g) == set()
    e = novikov("gamma-laurent", [("a", 1, 0), ("b", 0, 3)], [("a", "b", 2, 1)])
    assert ("G3", "EnergyNonpositive") in rules(e)
    i = novikov("gamma-laurent", [("a", 2, 9), ("b", 0, 0)], [("a", "b", 0, 1)])
    assert ("G1", "IndexDropMismatch") in rules(i)


def test_block_rule():
    d = nontorsion([("a", 3, "3/2"), ("b", 4, "7/4")], [("a", "b", 1, 1)], ell=2, block_diagonal=True)
    assert ("B1", "NotBlockDiagonal") in rules(d)


def test_structural_rules():
    d = FloerDatum(
        "nontorsion",
        (CriticalPoint("a", "s", 0, 0, Fraction(1, 2)), CriticalPoint("a", "s", 0, 0, Fraction(1, 2))),
        (FlowClass("a", "z", 0, 1), FlowClass("a", "a", 0, 0), FlowClass("a", "a", 0, 2)),
        ell=2,
    )
    names = {v.name for v in validate(d).violations}
    assert {"DuplicatePoint", "UnknownPoint", "ZeroCount", "DuplicateFlow"} <= names


def test_assembly_examples():
    empty = nontorsion([("a", 1, "1/2"), ("b", 0, "1/4")], [])
    c = assemble_boundary(empty)
    assert c.boundary(1) == [[0]]
    one = nontorsion([("a", 1, "1/2"), ("b", 0, "1/4")], [("a", "b", 0, 1)])
    assert assemble_boundary(one).boundary(1) == [[1]]
    g = novikov("gamma-laurent", [("a", 1, 0), ("b", 0, 0)], [("a", "b", 2, -3)])
    assert assemble_boundary(g).boundary(1) == [[LaurentSeries({2: -3})]]
    t = novikov("torsion-novikov", [("a", 1, 1), ("b", 0, 0)], [("a", "b", 0, 1), ("a", "b", 1, -2)])
    assert assemble_boundary(t).boundary(1) == [[PowerSeries({0: 1, 1: -2})]]


def test_assembly_refuses_invalid_data():
    d = nontorsion([("a", 2, "1/2"), ("b", 5, "1")], [("a", "b", -1, 1)])
    with pytest.raises(ValidationFailed) as info:
        assemble_boundary(d)
    assert "R1" in info.value.report.rules()


def test_restrict_min_level():
    d = generate(GeneratorConfig("torsion-novikov", seed=2, num_points=12, max_level=2))
    r = restrict_min_level(d)
    assert {f.level for f in r.flows} <= {0}
    assert restrict_min_level(r) == r
    no_zero = replace(d, flows=tuple(f for f in d.flows if f.level))
    assert restrict_min_level(no_zero).flows == ()


def test_cyclic_total_is_sum_of_lift_blocks():
    for seed in range(30):
        d = generate(GeneratorConfig("nontorsion", seed=seed, num_points=14, ell=2, max_level=2))
        total = assemble_boundary(d, Z, grading="cyclic")
        pos = {n: {g: i for i, g in enumerate(ids)} for n, ids in total.generators.items()}
        expect = {n: [[0] * total.rank(n) for _ in range(total.rank(total.target(n)))] for n in total.grades()}
        lift = {p.id: p.ind_lift for p in d.points}
        for (q, k), cells in boundary_blocks(d).items():
            for (a, b), c in cells.items():
                n = q % d.ell
                expect[n][pos[total.target(n)][b]][pos[n][a]] += c
        for n in total.grades():
            assert total.boundary(n) == expect[n]


def test_energy_window_of_nontorsion_flows():
    for seed in range(30):
        d = generate(GeneratorConfig("nontorsion", seed=seed, num_points=14, ell=4, max_level=2))
        pts = d.point_map()
        for f in d.flows:
            e = pts[f.from_id].csd_lift - pts[f.to_id].csd_lift + f.level * d.ell
            assert 0 < e
            assert (f.level - 1) * d.ell < e < (f.level + 1) * d.ell


def test_validation_is_order_independent():
    rng = random.Random(0)
    d = generate(GeneratorConfig("nontorsion", seed=9, num_points=12, ell=2))
    broken = replace(d, flows=d.flows + (FlowClass(d.points[0].id, d.points[-1].id, -1, 1),))
    base = validate(broken).violations
    for _ in range(5):
        pts = list(broken.points)
        fl = list(broken.flows)
        rng.shuffle(pts)
        rng.shuffle(fl)
        assert validate(replace(broken, points=tuple(pts), flows=tuple(fl))).violations == base


def test_json_round_trip():
    d = generate(GeneratorConfig("gamma-laurent", seed=4, num_points=9))
    text = dumps_datum(d)
    assert loads_datum(text) == d
    obj = json.loads(text)
    assert set(obj) == {"version", "mode", "ell", "omega", "e_rho", "block_diagonal", "points", "flows"}
    assert datum_from_json(datum_to_json(d)) == d


@pytest.mark.parametrize(
    "patch",
    [
        lambda o: o.update(version=2),
        lambda o: o.update(extra=1),
        lambda o: o["points"][0].update(colour="red"),
        lambda o: o.update(omega="0.5"),
        lambda o: o["flows"][0].pop("count"),
        lambda o: o.update(ell="2"),
    ],
)
def test_malformed_files(patch):
    d = generate(GeneratorConfig("nontorsion", seed=1, num_points=8))
    obj = datum_to_json(d)
    patch(obj)
    with pytest.raises(MalformedDatum):
        datum_from_json(obj)
