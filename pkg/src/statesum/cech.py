"""Cech cocycles on a nerve: bundles (degree 1) and gerbes (degree 2).

A nerve is just a :class:`~statesum.simplicial.SimplicialComplex`; the open
sets behind it never enter the algebra.  Abelian coefficients are written
additively, so the gerbe cocycle condition on ``i<j<k<l`` reads
``h_ijk - h_ijl + h_ikl - h_jkl = 0``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from .abelian import FinAbelianGroup, QmodZ, QmodZGroup
from .errors import (
    GaugeKindError,
    MissingValueError,
    NotACocycleError,
    UnknownSimplexError,
    UnsupportedError,
)
from .groups import FiniteGroup, abelian_group_from_spec, coefficient_group_from_spec
from .homology import cohomology_data
from .simplicial import (
    Simplex,
    SimplicialComplex,
    complex_from_json,
    complex_to_json,
    orient,
    parse_simplex_key,
    simplex_key,
)


@dataclass(frozen=True)
class Verdict:
    """Pass/fail with every offending simplex listed."""

    ok: bool
    violations: tuple[Simplex, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def from_violations(cls, violations) -> Verdict:
        violations = tuple(violations)
        return cls(not violations, violations)


def _require_total(values: Mapping, simplices, what: str) -> None:
    missing = [s for s in simplices if s not in values]
    if missing:
        raise MissingValueError(f"{what} has no value on {missing[0]} ({len(missing)} missing)")


def _check_support(values: Mapping, K: SimplicialComplex, d: int) -> None:
    for s in values:
        if len(s) != d + 1 or s not in K:
            raise UnknownSimplexError(f"{s} is not a {d}-simplex of the nerve")


@dataclass(frozen=True)
class BundleCocycle:
    """Transition data ``g_ij`` on the edges of a nerve.

    ``values`` is keyed by canonical edges ``(i, j)``, ``i < j``; reading the
    reversed edge gives the inverse.
    """

    nerve: SimplicialComplex
    group: Any
    values: Mapping[Simplex, Any]

    def __post_init__(self):
        _check_support(self.values, self.nerve, 1)

    def value(self, i: int, j: int):
        if i < j:
            return self.values[(i, j)]
        return self.group.inv(self.values[(j, i)])


@dataclass(frozen=True)
class GerbeCocycle:
    """Abelian values ``h_ijk`` on the triangles of a nerve.

    Reading a triangle in an odd vertex order gives the negated value.
    """

    nerve: SimplicialComplex
    group: Any
    values: Mapping[Simplex, Any]

    def __post_init__(self):
        _check_support(self.values, self.nerve, 2)

    def value(self, *vertices: int):
        canon, sign = orient(vertices)
        v = self.values[canon]
        return v if sign > 0 else self.group.neg(v)


@dataclass(frozen=True)
class GaugeData:
    """``kind == "bundle"``: one group element per vertex.
    ``kind == "gerbe"``: one abelian value per canonical edge (antisymmetric).
    """

    kind: str
    values: Mapping[Any, Any]

    def __post_init__(self):
        if self.kind not in ("bundle", "gerbe"):
            raise GaugeKindError(f"gauge kind must be 'bundle' or 'gerbe', not {self.kind!r}")


def _tri_holonomy(c: BundleCocycle, i: int, j: int, k: int):
    G = c.group
    return G.op(G.op(c.values[(i, j)], c.values[(j, k)]), G.inv(c.values[(i, k)]))


def verify_bundle_cocycle(c: BundleCocycle) -> Verdict:
    """Check ``g_ij g_jk g_ik^-1 = 1`` on every triangle."""
    _require_total(c.values, c.nerve.simplices_of(1), "bundle cocycle")
    e = c.group.identity
    return Verdict.from_violations(
        t for t in c.nerve.simplices_of(2) if _tri_holonomy(c, *t) != e
    )


def gerbe_defect(group, value_of, simplex: Simplex):
    """``sum_m (-1)^m f(face_m)``: the coboundary of a cochain at one simplex."""
    acc = group.zero()
    for m in range(len(simplex)):
        v = value_of(simplex[:m] + simplex[m + 1 :])
        acc = group.add(acc, v if m % 2 == 0 else group.neg(v))
    return acc


def verify_gerbe_cocycle(c: GerbeCocycle) -> Verdict:
    """Check ``h_ijk - h_ijl + h_ikl - h_jkl = 0`` on every 3-simplex."""
    _require_total(c.values, c.nerve.simplices_of(2), "gerbe cocycle")
    G = c.group
    bad = []
    for i, j, k, l in c.nerve.simplices_of(3):
        s = G.add(G.add(c.values[(i, j, k)], G.neg(c.values[(i, j, l)])),
                  G.add(c.values[(i, k, l)], G.neg(c.values[(j, k, l)])))
        if not G.is_zero(s):
            bad.append((i, j, k, l))
    return Verdict.from_violations(bad)


def apply_gauge(c: BundleCocycle | GerbeCocycle, gauge: GaugeData):
    """Bundles: ``g'_ij = l_i g_ij l_j^-1``.  Gerbes: ``h' = h + l_ij - l_ik + l_jk``."""
    if isinstance(c, BundleCocycle):
        if gauge.kind != "bundle":
            raise GaugeKindError("bundle cocycles need vertex gauge data")
        _require_total(c.values, c.nerve.simplices_of(1), "bundle cocycle")
        _require_total(gauge.values, c.nerve.vertices, "vertex gauge")
        G, lam = c.group, gauge.values
        return BundleCocycle(
            c.nerve,
            G,
            {(i, j): G.op(G.op(lam[i], g), G.inv(lam[j])) for (i, j), g in c.values.items()},
        )
    if isinstance(c, GerbeCocycle):
        if gauge.kind != "gerbe":
            raise GaugeKindError("gerbe cocycles need edge gauge data")
        _require_total(c.values, c.nerve.simplices_of(2), "gerbe cocycle")
        _require_total(gauge.values, c.nerve.simplices_of(1), "edge gauge")
        G, lam = c.group, gauge.values
        return GerbeCocycle(
            c.nerve,
            G,
            {
                (i, j, k): G.add(h, G.add(G.add(lam[(i, j)], G.neg(lam[(i, k)])), lam[(j, k)]))
                for (i, j, k), h in c.values.items()
            },
        )
    raise GaugeKindError(f"cannot gauge a {type(c).__name__}")


def bundle_coboundary(nerve: SimplicialComplex, group, lam: Mapping[int, Any]) -> BundleCocycle:
    """``g_ij = l_i l_j^-1``, the gauge transform of the trivial cocycle."""
    trivial = BundleCocycle(nerve, group, {e: group.identity for e in nerve.simplices_of(1)})
    return apply_gauge(trivial, GaugeData("bundle", lam))


def gerbe_coboundary(nerve: SimplicialComplex, group, lam: Mapping[Simplex, Any]) -> GerbeCocycle:
    """``h = delta(lam)`` for an edge cochain ``lam``."""
    zero = GerbeCocycle(nerve, group, {t: group.zero() for t in nerve.simplices_of(2)})
    return apply_gauge(zero, GaugeData("gerbe", lam))


@dataclass(frozen=True)
class CohomologyClass:
    """An integral class: representative cochain plus coordinates in ``H^degree``.

    ``representative`` is aligned with the canonical order of the nerve's
    ``degree``-simplices.  ``coordinates`` lists the class in terms of the
    generators of ``group`` (torsion residues first, then free coordinates).
    """

    degree: int
    representative: tuple[int, ...]
    group: FinAbelianGroup
    coordinates: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)


def _qmodz_values(c, what: str) -> None:
    if not isinstance(c.group, QmodZGroup):
        raise UnsupportedError(f"{what} needs Q/Z-valued data, got {c.group}")


def _lifts(c, lift: Mapping[Simplex, Fraction] | None) -> dict[Simplex, Fraction]:
    if lift is None:
        return {s: v.lift() for s, v in c.values.items()}
    out = {}
    for s, v in c.values.items():
        q = Fraction(lift[s])
        if QmodZ(q) != v:
            raise ValueError(f"lift {q} of {s} does not reduce to {v}")
        out[s] = q
    return out


def _integral_class(nerve: SimplicialComplex, degree: int, lifted: Mapping[Simplex, Fraction]):
    rep = []
    for s in nerve.simplices_of(degree):
        x = sum(
            (lifted[s[:m] + s[m + 1 :]] * (-1) ** m for m in range(len(s))), Fraction(0)
        )
        if x.denominator != 1:
            raise NotACocycleError(f"coboundary of the lift is not integral on {s}")
        rep.append(int(x))
    data = cohomology_data(nerve, degree)
    group = FinAbelianGroup(data.factors, data.free_rank)
    return CohomologyClass(degree, tuple(rep), group, data.class_coordinates(rep))


def characteristic_class(
    c: GerbeCocycle, lift: Mapping[Simplex, Fraction] | None = None
) -> CohomologyClass:
    """Degree-3 integral class of a Q/Z gerbe cocycle.

    Each ``h_ijk`` is lifted to a rational number (by default the
    representative in ``[0, 1)``); the coboundary of the lift is an integer
    3-cocycle whose class in ``H^3(nerve; Z)`` is returned.
    """
    _qmodz_values(c, "characteristic_class")
    if not verify_gerbe_cocycle(c):
        raise NotACocycleError("input fails the gerbe cocycle condition")
    return _integral_class(c.nerve, 3, _lifts(c, lift))


def characteristic_class_bundle(
    c: BundleCocycle, lift: Mapping[Simplex, Fraction] | None = None
) -> CohomologyClass:
    """Degree-2 integral class of a Q/Z-valued (abelian) bundle cocycle."""
    _qmodz_values(c, "characteristic_class_bundle")
    if not verify_bundle_cocycle(c):
        raise NotACocycleError("input fails the bundle cocycle condition")
    return _integral_class(c.nerve, 2, _lifts(c, lift))


@dataclass(frozen=True)
class BundleClassification:
    """Gauge orbits of bundle cocycles: one representative and size per orbit."""

    representatives: tuple[BundleCocycle, ...]
    orbit_sizes: tuple[int, ...]
    cocycle_count: int = field(default=0)

    def __len__(self) -> int:
        return len(self.representatives)


SMALLCASE_MAX_VERTICES = 6
SMALLCASE_MAX_ORDER = 8
SMALLCASE_MAX_COCYCLES = 2_000_000


def _all_bundle_cocycles(nerve: SimplicialComplex, G: FiniteGroup):
    edges = list(nerve.simplices_of(1))
    pos = {e: n for n, e in enumerate(edges)}
    # a triangle is checked once its last edge (in edge order) is assigned
    checks: list[list[tuple[int, int, int]]] = [[] for _ in edges]
    for i, j, k in nerve.simplices_of(2):
        a, b, c = pos[(i, j)], pos[(j, k)], pos[(i, k)]
        checks[max(a, b, c)].append((a, b, c))
    T, inv, e = G.table, G.inverses, G.identity
    vals = [0] * len(edges)
    found = 0

    def rec(n):
        nonlocal found
        if n == len(edges):
            found += 1
            if found > SMALLCASE_MAX_COCYCLES:
                raise UnsupportedError("too many cocycles for the brute-force classification")
            yield tuple(vals)
            return
        for x in range(G.order):
            vals[n] = x
            if all(T[T[vals[a]][vals[b]]][inv[vals[c]]] == e for a, b, c in checks[n]):
                yield from rec(n + 1)

    return edges, rec(0)


def classify_bundles_smallcase(nerve: SimplicialComplex, G: FiniteGroup) -> BundleClassification:
    """Non-abelian ``H^1`` by brute force: all cocycles, split into gauge orbits.

    Only for nerves with at most 6 vertices and groups of order at most 8.
    """
    if len(nerve.vertices) > SMALLCASE_MAX_VERTICES or G.order > SMALLCASE_MAX_ORDER:
        raise UnsupportedError(
            f"brute-force classification is limited to <= {SMALLCASE_MAX_VERTICES} vertices "
            f"and groups of order <= {SMALLCASE_MAX_ORDER}"
        )
    edges, cocycles = _all_bundle_cocycles(nerve, G)
    T, inv = G.table, G.inverses
    touching = {
        v: [(n, e[0] == v) for n, e in enumerate(edges) if v in e] for v in nerve.vertices
    }
    seen: set[tuple[int, ...]] = set()
    reps, sizes, total = [], [], 0
    for start in cocycles:
        total += 1
        if start in seen:
            continue
        seen.add(start)
        orbit = 1
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for v, incident in touching.items():
                for a in range(G.order):
                    nxt = list(cur)
                    for n, is_tail in incident:
                        # tail end multiplies on the left, head end by a^-1 on the right
                        nxt[n] = T[a][nxt[n]] if is_tail else T[nxt[n]][inv[a]]
                    nxt = tuple(nxt)
                    if nxt not in seen:
                        seen.add(nxt)
                        orbit += 1
                        queue.append(nxt)
        reps.append(BundleCocycle(nerve, G, dict(zip(edges, start))))
        sizes.append(orbit)
    return BundleClassification(tuple(reps), tuple(sizes), total)


# --------------------------------------------------------------------- I/O


def cocycle_to_json(c: BundleCocycle | GerbeCocycle) -> dict:
    kind = "bundle" if isinstance(c, BundleCocycle) else "gerbe"
    return {
        "nerve": complex_to_json(c.nerve),
        "kind": kind,
        "group": c.group.spec,
        "values": {simplex_key(s): c.group.dump(v) for s, v in sorted(c.values.items())},
    }


def _read_values(raw: Mapping, group, kind: str) -> dict:
    values = {}
    for key, obj in raw.items():
        verts = parse_simplex_key(key)
        canon, sign = orient(verts)
        v = group.parse(obj)
        if sign < 0:
            v = group.inv(v) if kind == "bundle" else group.neg(v)
        values[canon] = v
    return values


def cocycle_from_json(data: Mapping) -> BundleCocycle | GerbeCocycle:
    kind = data.get("kind")
    nerve = complex_from_json(data["nerve"])
    if kind == "bundle":
        group = coefficient_group_from_spec(data["group"])
        return BundleCocycle(nerve, group, _read_values(data["values"], group, kind))
    if kind == "gerbe":
        group = abelian_group_from_spec(data["group"])
        return GerbeCocycle(nerve, group, _read_values(data["values"], group, kind))
    raise GaugeKindError(f"cocycle kind must be 'bundle' or 'gerbe', not {kind!r}")


def gauge_to_json(gauge: GaugeData, group) -> dict:
    key = (lambda s: str(s)) if gauge.kind == "bundle" else simplex_key
    return {"kind": gauge.kind, "values": {key(s): group.dump(v) for s, v in sorted(gauge.values.items())}}


def gauge_from_json(data: Mapping, group) -> GaugeData:
    kind = data.get("kind")
    if kind == "bundle":
        return GaugeData(kind, {int(k): group.parse(v) for k, v in data["values"].items()})
    if kind == "gerbe":
        return GaugeData(kind, _read_values(data["values"], group, "gerbe"))
    raise GaugeKindError(f"gauge kind must be 'bundle' or 'gerbe', not {kind!r}")


__all__ = [
    "BundleClassification",
    "BundleCocycle",
    "CohomologyClass",
    "GaugeData",
    "GerbeCocycle",
    "Verdict",
    "apply_gauge",
    "bundle_coboundary",
    "characteristic_class",
    "characteristic_class_bundle",
    "classify_bundles_smallcase",
    "cocycle_from_json",
    "cocycle_to_json",
    "gauge_from_json",
    "gauge_to_json",
    "gerbe_coboundary",
    "gerbe_defect",
    "verify_bundle_cocycle",
    "verify_gerbe_cocycle",
]
