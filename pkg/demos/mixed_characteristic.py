"""The A_3 walkthrough over Z/5^4, with t = 5.

The fiber is read in characteristic 7 and 11 through the symmetric lift of
each 5-adic coefficient.
"""
from toricdef.chain import Chain
from toricdef.deform import complete_to_flat
from toricdef.fiber import PointSpec, analyze_point
from toricdef.fields import FiniteField
from toricdef.literals import parse_series
from toricdef.oracle import smooth_scan, specialize_ideal
from toricdef.scalars import DvrSpec
from toricdef.series import format_series
from toricdef.shift import normalize

spec = DvrSpec("mixed-char", 3, 5)
chain = Chain((4,))
D = normalize(complete_to_flat(chain, {2: parse_series("x2^2", 3, spec)}, spec))
print(f"g' = {format_series(D.generators.g[(1, 3)])}  (coefficients mod 5^4)")
for q in (7, 11):
    F = FiniteField(q)
    tau = F.from_int(5)
    r = analyze_point(D, PointSpec(F, tau, (0, 0, 0)))
    print(f"{F.name}: origin {r.verdict} X{r.reduced}; scan {smooth_scan(specialize_ideal(D.generators, F, tau))}")
