from collections import Counter

import pytest

from conftest import minors_gcd_invariants, nontorsion
from swfloer.datum import assemble_boundary
from swfloer.direct_sum import NotBlockDiagonal, decompose, direct_sum_homology, prime_power_components, recombine
from swfloer.graded_complex import HomologyGroup, Z, homology
from swfloer.oracle import GeneratorConfig, generate


def test_empty():
    b = decompose(nontorsion([], [], block_diagonal=True))
    assert b.blocks == {}
    assert direct_sum_homology(b) == {}


def test_times_two_block():
    d = nontorsion([("a", 2, "3/4"), ("b", 1, "1/4")], [("a", "b", 0, 2)], ell=2, block_diagonal=True)
    b = decompose(d)
    assert sorted(b.blocks) == [1, 2]
    assert b.blocks[2].boundary(2) == [[2]]
    r = direct_sum_homology(b)
    assert r[1]["blocks"] == {1: HomologyGroup(0, (2,))}
    assert r[0]["blocks"] == {2: HomologyGroup(0)}
    assert r[1]["total"] == HomologyGroup(0, (2,))
    assert all(v["match"] for v in r.values())


def test_level_one_flow_is_rejected():
    d = nontorsion([("a", 3, "1/2"), ("b", 4, "3/2")], [("a", "b", 1, 1)], ell=2, block_diagonal=True)
    with pytest.raises(NotBlockDiagonal):
        decompose(d)
    unflagged = nontorsion([("a", 3, "1/2"), ("b", 4, "3/2")], [("a", "b", 1, 1)], ell=2)
    with pytest.raises(NotBlockDiagonal):
        decompose(unflagged)


def test_zero_boundary_blocks():
    d = nontorsion([("a", 0, "1/8"), ("b", 2, "1"), ("c", 1, "1/2")], [], ell=2, block_diagonal=True)
    r = direct_sum_homology(decompose(d))
    assert r[0]["total"] == HomologyGroup(2)
    assert r[1]["total"] == HomologyGroup(1)


def test_disjoint_torsion_merges():
    # Z/2 from lift 1 and Z/3 from lift 3, both in residue 1 mod 2
    d = nontorsion(
        [("a", 2, "1/4"), ("b", 1, "1/8"), ("c", 4, "7/4"), ("e", 3, "3/2")],
        [("a", "b", 0, 2), ("c", "e", 0, 3)],
        ell=2,
        block_diagonal=True,
    )
    r = direct_sum_homology(decompose(d))
    assert r[1]["total"].torsion == (6,)
    assert minors_gcd_invariants([[2, 0], [0, 3]]) == [1, 6]
    assert r[1]["match"]


def test_prime_power_components():
    assert prime_power_components([6]) == Counter({2: 1, 3: 1})
    assert prime_power_components([2, 12]) == Counter({2: 1, 4: 1, 3: 1})
    assert prime_power_components([]) == Counter()


def test_generated_blocks_satisfy_direct_sum():
    for seed in range(40):
        d = generate(GeneratorConfig("nontorsion", seed=seed, num_points=4 + seed % 25, ell=(1, 2, 3, 4)[seed % 4], block_diagonal=True))
        r = direct_sum_homology(decompose(d))
        assert all(v["match"] for v in r.values())


def test_round_trip():
    for seed in range(20):
        d = generate(GeneratorConfig("nontorsion", seed=seed, num_points=12, ell=2, block_diagonal=True))
        b = decompose(d)
        again = recombine(b)
        total = assemble_boundary(d, Z, grading="cyclic")
        assert again.generators.keys() == total.generators.keys()
        for n in total.grades():
            # same generators, possibly in another order
            assert sorted(again.generators[n]) == sorted(total.generators[n])
            perm = [again.generators[n].index(g) for g in total.generators[n]]
            tperm = [again.generators[total.target(n)].index(g) for g in total.generators[total.target(n)]]
            m = again.boundary(n)
            assert [[m[r][c] for c in perm] for r in tperm] == total.boundary(n)
            assert homology(again, n) == homology(total, n)
