from toricdef.chain import Chain
from toricdef.deform import complete_to_flat
from toricdef.literals import parse_series
from toricdef.shift import normalize


def normalized(chain, h, spec):
    """Normal form of the family with consecutive perturbations ``{i: literal}``."""
    c = Chain(tuple(chain))
    G = complete_to_flat(c, {i: parse_series(s, c.e, spec) for i, s in h.items()}, spec)
    return normalize(G)
