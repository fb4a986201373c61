"""Not every first-order perturbation of a non-hypersurface lifts.

For X(2,2) (the cone over the twisted cubic) we perturb the consecutive
equations and ask the order-by-order solver for the far equation g'_{1,4}.
"""
from toricdef.chain import Chain
from toricdef.deform import Obstruction, complete_to_flat
from toricdef.literals import parse_series
from toricdef.scalars import DvrSpec
from toricdef.series import format_series

spec = DvrSpec("equal-char-0", 3)
chain = Chain((2, 2))

for h in ({2: "1"}, {2: "x1"}, {2: "x1", 3: "-x3"}, {2: "x1*x2"}):
    out = complete_to_flat(chain, {i: parse_series(s, 4, spec) for i, s in h.items()}, spec)
    label = ", ".join(f"h_{i - 1},{i + 1} = {s}" for i, s in h.items())
    if isinstance(out, Obstruction):
        print(f"{label}: obstructed at t^{out.order}, relation {out.triple}")
    else:
        print(f"{label}: g'_1,4 = {format_series(out.g[(1, 4)])}")
