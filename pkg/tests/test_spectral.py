from concurrent.futures import ThreadPoolExecutor

import pytest

from conftest import nontorsion, novikov
from swfloer import linalg
from swfloer.datum import ValidationFailed, assemble_boundary, restrict_min_level
from swfloer.graded_complex import Q, homology
from swfloer.oracle import GeneratorConfig, brute_e_infinity, generate
from swfloer.spectral import build_filtered, converge, page, pages, stable_page_index


def two_generator():
    return nontorsion([("a", 3, "1/2"), ("b", 4, "3/2")], [("a", "b", 1, 1)], ell=2)


def corpus(n=25, **kw):
    for seed in range(n):
        ell = (1, 2, 2, 4)[seed % 4]
        yield generate(GeneratorConfig("nontorsion", seed=seed, num_points=6 + seed % 20, ell=ell, max_level=1 + seed % 3, **kw))


def test_two_generator_containment():
    F = build_filtered(two_generator())
    assert F.span_F(3, 1) == [0]
    assert F.span_F(4, 0) == [0]
    assert F.span_F(2, 0) == [0]
    assert F.apply(1, [1]) == [1]


def test_two_generator_pages():
    F = build_filtered(two_generator())
    e1 = page(F, 1)
    assert e1.dims() == {(3, 1): 1, (4, 0): 1}
    (target, mat) = e1.differential[(3, 1)]
    assert target == (4, 0)
    assert linalg.rank(mat) == 1
    assert page(F, 2).dims() == {}
    e_inf, hf = converge(F)
    assert e_inf.dims() == {}
    assert hf == {0: 0, 1: 0}
    assert brute_e_infinity(F) == {}


def test_empty_datum():
    F = build_filtered(nontorsion([], []))
    assert page(F, 1).dims() == {}
    e_inf, hf = converge(F)
    assert e_inf.dims() == {} and hf == {}
    assert brute_e_infinity(F) == {}


def test_level_zero_data_have_constant_pages():
    for d in corpus(15, block_diagonal=True):
        F = build_filtered(d)
        ps = pages(F, max_page=stable_page_index(F) + 2)
        assert all(p.dims() == ps[0].dims() for p in ps)
        assert all(not any(p.differential_ranks().values()) for p in ps)


def test_e1_is_level_zero_homology():
    for d in corpus():
        F = build_filtered(d)
        level0 = assemble_boundary(restrict_min_level(d), Q, grading="lift")
        e1 = page(F, 1)
        for q, n in F.occupied():
            assert e1.dim(q, n) == homology(level0, q).free_rank


def test_page_structure():
    for d in corpus():
        F = build_filtered(d)
        ps = pages(F, max_page=stable_page_index(F) + 1)
        chis = set()
        for p in ps:
            k = p.page_index
            chis.add(p.euler_characteristic())
            for (q, n), ((q2, n2), m) in p.differential.items():
                assert (q2, n2) == (q - 1 + k * F.ell, (n - 1) % F.ell)
                if (q2, n2) in p.differential and m and m[0]:
                    m2 = p.differential[(q2, n2)][1]
                    if m2 and m2[0]:
                        assert all(x == 0 for row in linalg.matmul(m2, m) for x in row)
            ranks = p.differential_ranks()
            incoming = {}
            for cell, r in ranks.items():
                incoming[p.differential[cell][0]] = incoming.get(p.differential[cell][0], 0) + r
            nxt = ps[k] if k < len(ps) else None
            if nxt is not None:
                for cell in set(p.dims()) | set(nxt.dims()):
                    expect = p.dims().get(cell, 0) - ranks.get(cell, 0) - incoming.get(cell, 0)
                    assert nxt.dims().get(cell, 0) == expect
        if F.ell % 2 == 0:
            assert len(chis) == 1


def test_stable_page_has_no_differentials():
    for d in corpus():
        F = build_filtered(d)
        assert not any(page(F, stable_page_index(F)).differential_ranks().values())


def test_convergence_and_oracle():
    for d in corpus(40):
        F = build_filtered(d)
        e_inf, hf = converge(F)
        total = e_inf.total_dims()
        assert {n: total.get(n, 0) for n in hf} == hf
        assert e_inf.dims() == brute_e_infinity(F)


def test_triangularity():
    for d in corpus():
        F = build_filtered(d)
        for n, gens in F.base.generators.items():
            tgt = F.base.generators.get(F.base.target(n), ())
            m = F.boundary(n)
            for c, a in enumerate(gens):
                for r, b in enumerate(tgt):
                    if m[r][c]:
                        assert F.filtration_index[b] >= F.filtration_index[a] - 1


def test_parallel_cells_merge_deterministically():
    d = next(iter(corpus(1)))
    F = build_filtered(d)
    with ThreadPoolExecutor(4) as ex:
        par = page(build_filtered(d), 2, executor=ex)
    seq = page(F, 2)
    assert par.entries == seq.entries
    assert list(par.entries) == list(seq.entries)


def test_build_filtered_refuses_bad_input():
    with pytest.raises(ValidationFailed):
        build_filtered(nontorsion([("a", 2, "1/2"), ("b", 5, "1")], [("a", "b", -1, 1)]))
    with pytest.raises(ValueError):
        build_filtered(novikov("gamma-laurent", [], []))
    with pytest.raises(ValueError):
        page(build_filtered(two_generator()), 0)
