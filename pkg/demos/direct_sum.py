"""Block-diagonal data: integral homology splits over lift grades.

Every flow has level 0 and lowers the lift by one, so the Z_ell-graded
complex is a direct sum of integer-graded slices. The homology in residue n
is the sum of the slice homologies in lift grades congruent to n, torsion
included (compared after splitting into prime powers).
"""

from swfloer import GeneratorConfig, decompose, direct_sum_homology, generate
from swfloer.direct_sum import prime_power_components

for seed in (3, 8, 21):
    d = generate(GeneratorConfig("nontorsion", seed=seed, num_points=18, ell=4, block_diagonal=True))
    b = decompose(d)
    print(f"seed {seed}: lift grades {b.lifted.grades()}, ell = {b.ell}")
    for n, r in direct_sum_homology(b).items():
        parts = "  +  ".join(f"HF_({q}) = {h.to_json()}" for q, h in r["blocks"].items())
        print(f"  HF_{n} = {r['total'].to_json()}")
        print(f"      from {parts or 'nothing'}")
        print(f"      prime powers {dict(prime_power_components(r['total'].torsion))}, match {r['match']}")
    print()
