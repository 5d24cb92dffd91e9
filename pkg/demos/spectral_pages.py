"""Watch a higher differential kill a pair of classes.

Two generators a (lift 3) and b (lift 4) are joined by a single flow of
level 1. The level-0 complex has zero boundary, so E^1 keeps both classes;
the level-1 flow appears as d^1 : E^1_(3,1) -> E^1_(4,0) and both die.
A generated datum then shows a longer run of pages.
"""

from fractions import Fraction

from swfloer import CriticalPoint, FloerDatum, FlowClass, GeneratorConfig, generate
from swfloer.oracle import brute_e_infinity
from swfloer.spectral import build_filtered, converge, pages, stable_page_index


def show(F):
    for p in pages(F, max_page=stable_page_index(F)):
        ranks = {c: r for c, r in p.differential_ranks().items() if r}
        print(f"  E^{p.page_index}: dims {dict(sorted(p.dims().items()))}  nonzero d ranks {ranks}")
    e_inf, hf = converge(F)
    print("  E^inf:", dict(sorted(e_inf.dims().items())))
    print("  oracle:", dict(sorted(brute_e_infinity(F).items())))
    print("  HF_n over Q:", hf)


small = FloerDatum(
    "nontorsion",
    (
        CriticalPoint("a", "s", 1, 3, Fraction(1, 2)),
        CriticalPoint("b", "s", 0, 4, Fraction(3, 2)),
    ),
    (FlowClass("a", "b", 1, 1),),
    ell=2,
)
print("two generators, one level-1 flow")
show(build_filtered(small))

for seed in range(40):
    d = generate(GeneratorConfig("nontorsion", seed=seed, num_points=14, ell=2, max_level=2))
    F = build_filtered(d)
    ps = pages(F, max_page=3)
    if any(ps[1].differential_ranks().values()):
        print(f"\ngenerated datum, seed {seed}: {len(d.points)} points, {len(d.flows)} flows")
        show(F)
        break
