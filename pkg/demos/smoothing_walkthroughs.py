"""Two one-parameter families of cyclic quotient singularities.

An A_1 singularity x1 x3 = x2^2 deformed by t*x2 becomes smooth; an A_3
singularity x1 x3 = x2^4 deformed by t*x2^2 keeps an A_1 point at the origin.
Both verdicts are read off the normal form and then checked by brute force.
"""
from toricdef.chain import Chain
from toricdef.deform import complete_to_flat
from toricdef.fiber import PointSpec, analyze_point
from toricdef.fields import FiniteField
from toricdef.literals import parse_series
from toricdef.oracle import enumerate_points, smooth_scan, specialize_ideal
from toricdef.scalars import DvrSpec
from toricdef.series import format_series
from toricdef.shift import normalize

spec = DvrSpec("equal-char-0", 4)
F = FiniteField(7)
tau = F.from_int(1)

for a, h in (((2,), "x2"), ((4,), "x2^2")):
    chain = Chain(a)
    G = complete_to_flat(chain, {2: parse_series(h, chain.e, spec)}, spec)
    D = normalize(G)
    print(f"X{a}: g' = {format_series(D.generators.g[(1, 3)])}")
    S = specialize_ideal(D.generators, F, tau)
    points = enumerate_points(S)
    singular = [analyze_point(D, PointSpec(F, tau, p)) for p in points]
    singular = [r for r in singular if r.singular]
    print(f"  {len(points)} points over {F.name}; analyzer finds {len(singular)} singular")
    for r in singular:
        print(f"  {r.point}: X{r.reduced}, e' = {r.e_prime}, n' = {r.n_prime} <= n = {r.n}")
    print(f"  Jacobian scan: {smooth_scan(S)}")
