"""Random and hand-built test data: cochains, gauges, extra complexes."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from statesum.abelian import QMODZ, QmodZ
from statesum.simplicial import build_complex


def suspension(K, name=""):
    """Join with two new cone points ``V`` and ``V+1``."""
    V = len(K.vertices)
    tops = [s + (c,) for s in K.maximal_simplices() for c in (V, V + 1)]
    return build_complex(tops, name or f"susp-{K.name}")


def random_qmodz(rng, max_den=12):
    den = rng.randint(1, max_den)
    return QmodZ(Fraction(rng.randrange(den), den))


def random_element(rng, group, max_den=12):
    if group == QMODZ:
        return random_qmodz(rng, max_den)
    if hasattr(group, "table"):
        return rng.randrange(group.order)
    return tuple(rng.randrange(d) for d in group.factors)


def random_cochain(rng, K, d, group, max_den=12):
    return {s: random_element(rng, group, max_den) for s in K.simplices_of(d)}


def coboundary_values(group, lam, K, d):
    """``delta(lam)`` on the ``d``-simplices, straight from the face formula."""
    out = {}
    for s in K.simplices_of(d):
        acc = group.zero()
        for m in range(len(s)):
            v = lam[s[:m] + s[m + 1 :]]
            acc = group.add(acc, v if m % 2 == 0 else group.neg(v))
        out[s] = acc
    return out


def mod2_nontrivial_1_cocycle(K):
    """A Z/2 1-cocycle that is not a coboundary, by exhaustive search."""
    edges = K.simplices_of(1)
    verts = K.vertices
    boundaries = set()
    for lam in product((0, 1), repeat=len(verts)):
        boundaries.add(tuple((lam[u] + lam[v]) % 2 for u, v in edges))
    pos = {e: i for i, e in enumerate(edges)}
    for alpha in product((0, 1), repeat=len(edges)):
        if alpha in boundaries:
            continue
        if all(
            (alpha[pos[(i, j)]] + alpha[pos[(j, k)]] + alpha[pos[(i, k)]]) % 2 == 0
            for i, j, k in K.simplices_of(2)
        ):
            return dict(zip(edges, alpha))
    return None


def suspended_rp2_gerbe(rp2):
    """Q/Z gerbe cocycle on the suspension of RP^2 with nonzero integral class.

    ``h(e + north) = alpha(e) / 2`` for a nontrivial Z/2 cocycle ``alpha``;
    every other triangle carries 0.  The integral lift's coboundary is the
    Bockstein of ``alpha`` pushed up one degree.
    """
    S = suspension(rp2, "susp-rp2")
    north = len(rp2.vertices)
    alpha = mod2_nontrivial_1_cocycle(rp2)
    values = {}
    for t in S.simplices_of(2):
        if t[-1] == north and t[:2] in alpha:
            values[t] = QmodZ(Fraction(alpha[t[:2]], 2))
        else:
            values[t] = QMODZ.zero()
    return S, values
