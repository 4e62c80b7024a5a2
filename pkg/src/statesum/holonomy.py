"""Discrete connections and gerbe-connections, their holonomy, and reconstruction.

An :class:`EdgeLabeling` puts a group element on every edge (a lattice gauge
field); a :class:`TriangleLabeling` puts an abelian value on every triangle.
Flat labelings correspond to homomorphisms out of ``pi_1`` and ``H_2``
respectively, and the ``hom_to_*`` functions invert the holonomy maps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

from .abelian import FinAbelianGroup
from .cech import Verdict, gerbe_defect
from .errors import (
    GaugeKindError,
    MissingValueError,
    NoSolutionError,
    NotACycleError,
    NotFlatError,
    PathError,
    UnknownSimplexError,
)
from .groups import FiniteGroup, abelian_group_from_spec, coefficient_group_from_spec
from .homology import as_group, homology_data
from .invariants import GroupHom
from .presentation import generator_loop, present_pi1
from .simplicial import (
    EdgePath,
    Simplex,
    SimplicialComplex,
    TwoCycle,
    _boundary,
    chain_boundary,
    complex_from_json,
    complex_to_json,
    is_cycle,
    orient,
    parse_simplex_key,
    simplex_key,
)
from .smith import solve_over


def _require_total(values: Mapping, K: SimplicialComplex, d: int, what: str) -> None:
    expected = K.simplices_of(d)
    missing = [s for s in expected if s not in values]
    if missing:
        raise MissingValueError(f"{what} has no value on {missing[0]} ({len(missing)} missing)")
    extra = [s for s in values if s not in K or len(s) != d + 1]
    if extra:
        raise UnknownSimplexError(f"{extra[0]} is not a {d}-simplex of the complex")


@dataclass(frozen=True)
class EdgeLabeling:
    """A group element on every canonical edge; the reversed edge reads the inverse."""

    complex: SimplicialComplex
    group: Any
    values: Mapping[Simplex, Any]

    def __post_init__(self):
        _require_total(self.values, self.complex, 1, "edge labeling")

    def value(self, u: int, v: int):
        if u < v:
            return self.values[(u, v)]
        return self.group.inv(self.values[(v, u)])

    @classmethod
    def identity(cls, K: SimplicialComplex, G) -> EdgeLabeling:
        return cls(K, G, {e: G.identity for e in K.simplices_of(1)})


@dataclass(frozen=True)
class TriangleLabeling:
    """An abelian value on every canonical triangle; odd orderings read the negation."""

    complex: SimplicialComplex
    group: Any
    values: Mapping[Simplex, Any]

    def __post_init__(self):
        _require_total(self.values, self.complex, 2, "triangle labeling")

    def value(self, *vertices: int):
        canon, sign = orient(vertices)
        v = self.values[canon]
        return v if sign > 0 else self.group.neg(v)

    @classmethod
    def zero(cls, K: SimplicialComplex, group) -> TriangleLabeling:
        return cls(K, group, {t: group.zero() for t in K.simplices_of(2)})

    def __add__(self, other: TriangleLabeling) -> TriangleLabeling:
        G = self.group
        return TriangleLabeling(
            self.complex, G, {t: G.add(v, other.values[t]) for t, v in self.values.items()}
        )

    def __neg__(self) -> TriangleLabeling:
        G = self.group
        return TriangleLabeling(self.complex, G, {t: G.neg(v) for t, v in self.values.items()})

    def __sub__(self, other: TriangleLabeling) -> TriangleLabeling:
        return self + (-other)


# ------------------------------------------------------------- connections


def loop_holonomy(A: EdgeLabeling, p: EdgePath):
    """Ordered product of edge values along a closed path."""
    if not p.is_loop:
        raise PathError("holonomy needs a closed path")
    p.check_in(A.complex)
    G = A.group
    out = G.identity
    for u, v in p.steps:
        out = G.op(out, A.value(u, v))
    return out


def is_flat(A: EdgeLabeling) -> Verdict:
    """Flat iff the holonomy around every triangle boundary is trivial."""
    G = A.group
    e = G.identity
    return Verdict.from_violations(
        t
        for t in A.complex.simplices_of(2)
        if G.op(G.op(A.value(t[0], t[1]), A.value(t[1], t[2])), A.value(t[2], t[0])) != e
    )


def holonomy_hom(A: EdgeLabeling, basepoint: int | None = None) -> GroupHom:
    """Holonomy of each generator's tree loop, as a hom out of ``pi_1``."""
    if not is_flat(A):
        raise NotFlatError("holonomy only defines a homomorphism of pi_1 for flat labelings")
    P = present_pi1(A.complex, basepoint)
    phi = GroupHom(tuple(loop_holonomy(A, generator_loop(P, g)) for g in range(P.generator_count)))
    return phi.check(P, A.group)


def hom_to_connection(
    K: SimplicialComplex, G: FiniteGroup, phi: GroupHom, basepoint: int | None = None
) -> EdgeLabeling:
    """Flat labeling realising ``phi``: identity on tree edges, images on generator edges."""
    P = present_pi1(K, basepoint)
    phi.check(P, G)
    values = {e: G.identity for e in K.simplices_of(1)}
    for g, e in enumerate(P.generator_edges):
        values[e] = phi.images[g]
    return EdgeLabeling(K, G, values)


def vertex_gauge(A: EdgeLabeling, lam: Mapping[int, Any]) -> EdgeLabeling:
    """``g'_uv = lam_u g_uv lam_v^-1``."""
    G = A.group
    return EdgeLabeling(
        A.complex, G, {(u, v): G.op(G.op(lam[u], g), G.inv(lam[v])) for (u, v), g in A.values.items()}
    )


def shortcut(K: SimplicialComplex, p: EdgePath, i: int) -> EdgePath:
    """Replace steps ``u->v, v->w`` at position ``i`` by ``u->w`` across triangle ``uvw``."""
    (u, v), (_, w) = p.steps[i], p.steps[i + 1]
    if u == w or (u, v, w) not in K:
        raise UnknownSimplexError(f"steps {u}->{v}->{w} do not span a triangle")
    return EdgePath(p.basepoint, p.steps[:i] + ((u, w),) + p.steps[i + 2 :])


def detour(K: SimplicialComplex, p: EdgePath, i: int, v: int) -> EdgePath:
    """Inverse of :func:`shortcut`: route step ``i`` (``u->w``) through ``v``."""
    u, w = p.steps[i]
    if (u, v, w) not in K:
        raise UnknownSimplexError(f"{(u, v, w)} is not a triangle")
    return EdgePath(p.basepoint, p.steps[:i] + ((u, v), (v, w)) + p.steps[i + 1 :])


# ------------------------------------------------------- gerbe-connections


@dataclass(frozen=True)
class AbelianHom:
    """A homomorphism out of ``source`` given by the images of its generators.

    Generators follow ``source``'s element layout: torsion factors first,
    then the free part.
    """

    source: FinAbelianGroup
    target: Any
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.source.ngens:
            raise ValueError(f"{len(self.images)} images for {self.source.ngens} generators")

    def is_valid(self) -> bool:
        return all(
            self.target.kills(d, x) for d, x in zip(self.source.generator_orders, self.images) if d
        )

    def __call__(self, element: Sequence[int]):
        T = self.target
        acc = T.zero()
        for k, x in zip(element, self.images):
            acc = T.add(acc, T.mul(k, x))
        return acc


def two_cycle_holonomy(B: TriangleLabeling, z: TwoCycle):
    """``sum_t z(t) B(t)``."""
    if not is_cycle(B.complex, z):
        raise NotACycleError("gerbe holonomy needs a 2-cycle (zero boundary)")
    G = B.group
    acc = G.zero()
    for t, c in z.coefficients.items():
        acc = G.add(acc, G.mul(c, B.values[t]))
    return acc


def is_gerbe_flat(B: TriangleLabeling) -> Verdict:
    """Flat iff the signed sum over the faces of every 3-simplex vanishes."""
    G = B.group
    return Verdict.from_violations(
        s for s in B.complex.simplices_of(3) if not G.is_zero(gerbe_defect(G, B.values.__getitem__, s))
    )


def h2_generators(K: SimplicialComplex) -> tuple[TwoCycle, ...]:
    """Cycle representatives of the standard generators of ``H_2(K; Z)``."""
    data = homology_data(K, 2)
    return tuple(TwoCycle.from_vector(K, vec) for vec in data.generators)


def gerbe_holonomy_hom(B: TriangleLabeling) -> AbelianHom:
    """Holonomy on a basis of ``H_2``; well defined because flat labelings kill boundaries."""
    if not is_gerbe_flat(B):
        raise NotFlatError("gerbe holonomy is only a homomorphism on H_2 for flat labelings")
    K = B.complex
    source = as_group(homology_data(K, 2))
    images = tuple(two_cycle_holonomy(B, z) for z in h2_generators(K))
    return AbelianHom(source, B.group, images)


def hom_to_gerbe_connection(K: SimplicialComplex, psi: AbelianHom) -> TriangleLabeling:
    """Flat labeling whose holonomy on ``H_2`` is ``psi``.

    Among all solutions this returns the one vanishing on the complement of
    the cycle space fixed by the Smith-form basis (and on the generators of
    the boundary subgroup), so ``psi == 0`` gives the zero labeling.
    """
    data = homology_data(K, 2)
    source = as_group(data)
    if psi.source != source:
        raise NoSolutionError(f"hom is defined on {psi.source}, but H_2 is {source}")
    G = psi.target
    for pos, x in zip(data.generator_positions, psi.images):
        e = data.orders[pos]
        if e and not G.kills(e, x):
            raise NoSolutionError(
                f"image {G.dump(x)} of a generator of order {e} is not killed by {e}"
            )
    values = {}
    for idx, t in enumerate(K.simplices_of(2)):
        acc = G.zero()
        for pos, x in zip(data.generator_positions, psi.images):
            k = data.dual[pos][idx]
            if k:
                acc = G.add(acc, G.mul(k, x))
        values[t] = acc
    return TriangleLabeling(K, G, values)


def edge_coboundary(K: SimplicialComplex, group, lam: Mapping[Simplex, Any]) -> TriangleLabeling:
    """``(delta lam)(ijk) = lam_jk - lam_ik + lam_ij``."""
    _require_total(lam, K, 1, "edge cochain")
    return TriangleLabeling(
        K, group, {t: gerbe_defect(group, lam.__getitem__, t) for t in K.simplices_of(2)}
    )


def solve_gauge(B1: TriangleLabeling, B2: TriangleLabeling) -> dict[Simplex, Any] | None:
    """An edge cochain ``lam`` with ``B2 - B1 == delta(lam)``, or None."""
    K, G = B1.complex, B1.group
    diff = B2 - B1
    rhs = [diff.values[t] for t in K.simplices_of(2)]
    delta = _boundary(K, 2).T
    sol = solve_over(delta, rhs, G)
    if sol is None:
        return None
    return dict(zip(K.simplices_of(1), sol))


def boundary_of(chain3: Mapping[Simplex, int]) -> TwoCycle:
    """Boundary of a 3-chain as a :class:`TwoCycle`."""
    return TwoCycle(chain_boundary(chain3))


# --------------------------------------------------------------------- I/O


def labeling_to_json(L: EdgeLabeling | TriangleLabeling) -> dict:
    kind = "connection" if isinstance(L, EdgeLabeling) else "gerbe-connection"
    return {
        "complex": complex_to_json(L.complex),
        "kind": kind,
        "group": L.group.spec,
        "values": {simplex_key(s): L.group.dump(v) for s, v in sorted(L.values.items())},
    }


def labeling_from_json(data: Mapping) -> EdgeLabeling | TriangleLabeling:
    kind = data.get("kind")
    K = complex_from_json(data.get("complex") or data["nerve"])
    if kind == "connection":
        G = coefficient_group_from_spec(data["group"])
    elif kind == "gerbe-connection":
        G = abelian_group_from_spec(data["group"])
    else:
        raise GaugeKindError(f"labeling kind must be 'connection' or 'gerbe-connection', not {kind!r}")
    values = {}
    for key, obj in data["values"].items():
        canon, sign = orient(parse_simplex_key(key))
        v = G.parse(obj)
        if sign < 0:
            v = G.inv(v) if kind == "connection" else G.neg(v)
        values[canon] = v
    return (EdgeLabeling if kind == "connection" else TriangleLabeling)(K, G, values)


def abelian_hom_to_json(psi: AbelianHom) -> dict:
    return {
        "source": {"factors": list(psi.source.factors), "rank": psi.source.rank},
        "target": psi.target.spec,
        "images": [psi.target.dump(x) for x in psi.images],
    }


def abelian_hom_from_json(data: Mapping) -> AbelianHom:
    src = data["source"]
    source = FinAbelianGroup(tuple(src.get("factors", ())), int(src.get("rank", 0)))
    target = abelian_group_from_spec(data["target"])
    return AbelianHom(source, target, tuple(target.parse(x) for x in data["images"]))


__all__ = [
    "AbelianHom",
    "EdgeLabeling",
    "TriangleLabeling",
    "abelian_hom_from_json",
    "abelian_hom_to_json",
    "boundary_of",
    "detour",
    "edge_coboundary",
    "gerbe_holonomy_hom",
    "h2_generators",
    "hom_to_connection",
    "hom_to_gerbe_connection",
    "holonomy_hom",
    "is_flat",
    "is_gerbe_flat",
    "labeling_from_json",
    "labeling_to_json",
    "loop_holonomy",
    "shortcut",
    "solve_gauge",
    "two_cycle_holonomy",
    "vertex_gauge",
]
