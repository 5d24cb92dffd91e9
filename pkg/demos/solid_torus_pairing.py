"""Pair the solid-torus relative invariant with itself.

The Floer complex of T^2 x S^1 (trivial spin-c structure) is modelled by one
generator u with zero boundary. The relative invariant of T^2 x D^2 is
u * 1/(t - 1/t); pairing it with itself should give sum_n n t^(2n), the
generating series of the closed invariants of T^2 x S^2.
"""

from swfloer import LaurentSeries, builtin_example_t2d2

x, p, report = builtin_example_t2d2(16)
denom = LaurentSeries({1: 1, -1: -1}, 16)

print("1/(t - 1/t) =", x.chain["u"])
print("times (t - 1/t) is 1 through degree", report["inverse_verified_through"], ":",
      report["inverse_times_denominator_is_one"])
print("<x, x> =", p)
print()
print(" exponent  closed  paired  match")
for e in report["entries"]:
    print(f"{e['exponent']:9d} {e['closed']!s:>7} {e['paired']!s:>7}  {e['match']}")
print("all match:", report["all_match"])
