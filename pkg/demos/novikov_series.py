"""Series-valued boundaries: t-torsion, t = 0 evaluation and Q((t)) ranks.

A torsion-novikov flow of level k contributes t^k to a boundary entry. Over
Q[[t]] an entry t^3 leaves a torsion summand Q[[t]]/(t^3); over Q((t)) it is
a unit and the summand disappears; at t = 0 it is invisible.
"""

from fractions import Fraction

from swfloer import CriticalPoint, FloerDatum, FlowClass, GeneratorConfig, generate
from swfloer import build_novikov, evaluate_t0, hf_gamma, t_torsion
from swfloer.oracle import brute_homology


def pt(pid, lift, csd):
    return CriticalPoint(pid, "s", 0, lift, Fraction(csd))


d = FloerDatum(
    "torsion-novikov",
    (pt("a", 1, 0), pt("b", 0, 0), pt("c", 1, 1), pt("e", 0, 0)),
    (FlowClass("a", "b", 3, 1), FlowClass("c", "e", 0, 2), FlowClass("c", "e", 1, 1)),
)
n = build_novikov(d)
print("boundary over Z[[t]]:", n.underlying.boundary(1))
print("over Q[[t]]:", {g: h.to_json() for g, h in t_torsion(n).items()})
print("at t = 0:", evaluate_t0(n).boundary(1))
print("dimensions over Q((t)):", hf_gamma(n))

print()
for seed in range(5):
    g = build_novikov(generate(GeneratorConfig("gamma-laurent", seed=seed, num_points=12, max_level=2)))
    print(f"gamma-laurent seed {seed}: HF dims {hf_gamma(g)}, oracle {brute_homology(g.underlying)}")
