import pytest

from conftest import minors_valuation_invariants, nontorsion, novikov
from swfloer.datum import ValidationFailed, assemble_boundary, restrict_min_level
from swfloer.graded_complex import QT, HomologyGroup, Z, homology
from swfloer.novikov import build_novikov, evaluate_t0, hf_gamma, t_torsion, tensor_laurent
from swfloer.oracle import GeneratorConfig, brute_homology, generate
from swfloer.series import LaurentSeries, PowerSeries


def witness():
    # a -> b -> c and a -> b' -> c cancel at total level 1
    return novikov(
        "torsion-novikov",
        [("a", 2, 6), ("b", 1, 3), ("b2", 1, 3), ("c", 0, 0)],
        [("a", "b", 0, 1), ("b", "c", 1, 1), ("a", "b2", 0, -1), ("b2", "c", 1, 1)],
    )


def test_entries():
    one = novikov("torsion-novikov", [("a", 1, 1), ("b", 0, 0)], [("a", "b", 0, 1)])
    assert build_novikov(one).underlying.boundary(1) == [[PowerSeries({0: 1})]]
    two = novikov("torsion-novikov", [("a", 1, 1), ("b", 0, 0)], [("a", "b", 0, 1), ("a", "b", 1, -2)])
    assert build_novikov(two).underlying.boundary(1) == [[PowerSeries({0: 1, 1: -2})]]
    assert evaluate_t0(build_novikov(two)).boundary(1) == [[1]]


def test_square_zero_witness():
    n = build_novikov(witness())
    n.underlying.check()
    e = evaluate_t0(n)
    e.check()
    assert e.boundary(1) == [[0, 0]]


def test_level_data_kept():
    n = build_novikov(witness())
    assert n.level_data[("b", "c")] == ((1, 1),)


def test_invalid_data_are_refused():
    bad = novikov("torsion-novikov", [("a", 1, 3), ("b", 0, 0)], [("a", "b", -1, 1)])
    with pytest.raises(ValidationFailed):
        build_novikov(bad)
    with pytest.raises(ValueError):
        build_novikov(nontorsion([], []))


def test_hf_gamma_examples():
    g = novikov("gamma-laurent", [("a", 0, 0), ("b", 0, 0), ("c", 0, 0)], [])
    assert hf_gamma(build_novikov(g)) == {0: 3}
    # t - t^-1 is a unit, so the 2-term complex is acyclic
    u = novikov("gamma-laurent", [("a", 1, 5), ("b", 0, 0)], [("a", "b", 1, 1), ("a", "b", -1, -1)])
    n = build_novikov(u)
    assert n.underlying.boundary(1) == [[LaurentSeries({1: 1, -1: -1})]]
    assert hf_gamma(n) == {0: 0, 1: 0}


def test_t2s1_models():
    one = novikov("gamma-laurent", [("u", 0, 0)], [])
    assert hf_gamma(build_novikov(one)) == {0: 1}
    # one generator of each parity, zero boundary: a copy of Q((t)) per grade
    two = novikov("gamma-laurent", [("u", 0, 0), ("v", 1, 0)], [])
    assert hf_gamma(build_novikov(two)) == {0: 1, 1: 1}
    # a variant with a cancelling pair keeps a single Q((t)) in grade 0
    three = novikov(
        "gamma-laurent",
        [("u", 0, 0), ("x", 1, 5), ("y", 0, 0)],
        [("x", "y", 1, 1), ("x", "y", -1, -1)],
    )
    assert hf_gamma(build_novikov(three)) == {0: 1, 1: 0}


def test_t_torsion_examples():
    t = novikov("torsion-novikov", [("a", 1, 0), ("b", 0, 0)], [("a", "b", 1, 1)])
    assert t_torsion(build_novikov(t))[0] == HomologyGroup(0, (1,), QT)
    z = novikov("torsion-novikov", [("a", 1, 0), ("b", 0, 0)], [])
    assert t_torsion(build_novikov(z)) == {0: HomologyGroup(1, (), QT), 1: HomologyGroup(1, (), QT)}
    d = novikov(
        "torsion-novikov",
        [("a", 1, 0), ("a2", 1, 0), ("b", 0, 0), ("b2", 0, 0)],
        [("a", "b", 1, 1), ("a2", "b2", 3, 1)],
    )
    assert t_torsion(build_novikov(d))[0].torsion == (1, 3)
    assert minors_valuation_invariants([[{1: 1}, {}], [{}, {3: 1}]]) == [1, 3]


def test_generated_gamma_data():
    for seed in range(30):
        d = generate(GeneratorConfig("gamma-laurent", seed=seed, num_points=5 + seed % 20, max_level=2))
        n = build_novikov(d)
        n.underlying.check()
        dims = hf_gamma(n)
        assert dims == brute_homology(n.underlying)
        for g, k in dims.items():
            assert 0 <= k <= n.underlying.rank(g)


def test_generated_torsion_data():
    for seed in range(30):
        d = generate(GeneratorConfig("torsion-novikov", seed=seed, num_points=5 + seed % 20, max_level=3))
        n = build_novikov(d)
        n.underlying.check()
        e = evaluate_t0(n)
        direct = assemble_boundary(restrict_min_level(d), Z)
        assert all(e.boundary(g) == direct.boundary(g) for g in e.grades())
        free = {g: h.free_rank for g, h in t_torsion(n).items()}
        assert free == hf_gamma(n) == hf_gamma(tensor_laurent(n))
