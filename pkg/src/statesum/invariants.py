"""The two counting invariants: #Hom(pi_1, G) and #Hom(pi_2, H).

``dw_invariant`` counts homomorphisms from the edge-path presentation into a
finite group by pruned depth-first search.  ``yetter_invariant`` counts
homomorphisms out of ``H_2(K; Z)``, which equals ``pi_2`` only when ``K`` is
simply connected; the result carries a flag saying whether that was verified.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Literal

from .abelian import FinAbelianGroup, count_abelian_homs
from .errors import DimensionError, RelatorViolationError, UnsupportedError
from .groups import FiniteGroup
from .homology import homology
from .presentation import Presentation, Word, check_simply_connected, gen_of, present_pi1
from .simplicial import SimplicialComplex


@dataclass(frozen=True)
class GroupHom:
    """Images of the presentation generators, as element indices."""

    images: tuple[int, ...]

    def evaluate(self, G: FiniteGroup, word: Word) -> int:
        out = G.identity
        for x in word:
            y = self.images[gen_of(x)]
            out = G.op(out, y if x > 0 else G.inv(y))
        return out

    def satisfies(self, P: Presentation, G: FiniteGroup) -> bool:
        return len(self.images) == P.generator_count and all(
            self.evaluate(G, r) == G.identity for r in P.relators
        )

    def check(self, P: Presentation, G: FiniteGroup) -> GroupHom:
        if len(self.images) != P.generator_count:
            raise DimensionError(f"{len(self.images)} images for {P.generator_count} generators")
        for r in P.relators:
            if self.evaluate(G, r) != G.identity:
                raise RelatorViolationError(f"relator {r} does not map to the identity")
        return self

    def conjugate(self, G: FiniteGroup, g: int) -> GroupHom:
        return GroupHom(tuple(G.conjugate(g, x) for x in self.images))


def search_order(P: Presentation) -> list[int]:
    """Generators by descending occurrence count in the relators.

    Ties go to the generator closing the most relators, then the one sharing
    the most relators with already placed generators, then the lowest index.
    """
    counts = P.occurrence_counts()
    supports = [frozenset(gen_of(x) for x in r) for r in P.relators]
    remaining = set(range(P.generator_count))
    placed: set[int] = set()
    order: list[int] = []
    while remaining:
        top = max(counts[g] for g in remaining)

        def key(g):
            closes = sum(1 for s in supports if g in s and s - {g} <= placed)
            shares = sum(1 for s in supports if g in s and s & placed)
            return (-closes, -shares, g)

        g = min((g for g in remaining if counts[g] == top), key=key)
        order.append(g)
        placed.add(g)
        remaining.discard(g)
    return order


class _Search:
    """Depth-first assignment of generator images with relator pruning."""

    def __init__(self, P: Presentation, G: FiniteGroup):
        self.G = G
        self.n = P.generator_count
        self.order = search_order(P)
        depth_of = {g: k for k, g in enumerate(self.order)}
        self.checks: list[list[list[tuple[int, bool]]]] = [[] for _ in range(self.n)]
        for r in P.relators:
            compiled = [(gen_of(x), x < 0) for x in r]
            if not r:
                continue
            last = max(depth_of[g] for g, _ in compiled)
            self.checks[last].append(compiled)

    def _ok(self, depth: int, images: list[int]) -> bool:
        table, inv, e = self.G.table, self.G.inverses, self.G.identity
        for rel in self.checks[depth]:
            acc = e
            for g, neg in rel:
                y = images[g]
                acc = table[acc][inv[y] if neg else y]
            if acc != e:
                return False
        return True

    def run(self, first: int | None = None) -> Iterator[tuple[int, ...]]:
        if self.n == 0:
            yield ()
            return
        images = [0] * self.n
        order = self.order
        n_elems = self.G.order
        start = 0
        if first is not None:
            images[order[0]] = first
            if not self._ok(0, images):
                return
            if self.n == 1:
                yield tuple(images)
                return
            start = 1
        # iterative DFS; cursor[k] is the next candidate for depth k
        cursor = [0] * self.n
        k = start
        while k >= start:
            if cursor[k] == n_elems:
                cursor[k] = 0
                k -= 1
                continue
            images[order[k]] = cursor[k]
            cursor[k] += 1
            if not self._ok(k, images):
                continue
            if k == self.n - 1:
                yield tuple(images)
            else:
                k += 1


def _subtree(args) -> int | list[tuple[int, ...]]:
    P, G, first, collect = args
    it = _Search(P, G).run(first)
    if collect:
        return list(it)
    return sum(1 for _ in it)


def default_workers() -> int:
    """Worker count from ``STATESUM_THREADS`` (unset means 1, 0 means all cores)."""
    raw = os.environ.get("STATESUM_THREADS", "1").strip() or "1"
    n = int(raw)
    return (os.cpu_count() or 1) if n <= 0 else n


def enumerate_homs(
    P: Presentation,
    G: FiniteGroup,
    mode: Literal["count", "collect"] = "count",
    workers: int = 1,
) -> int | list[GroupHom]:
    """Count (or list) the assignments of generators to ``G`` killing every relator.

    With ``workers > 1`` the search tree is split by the image of the first
    generator in search order and the subtrees run in separate processes;
    the result is identical to the sequential one.
    """
    if mode not in ("count", "collect"):
        raise ValueError(f"mode must be 'count' or 'collect', not {mode!r}")
    collect = mode == "collect"
    if workers > 1 and P.generator_count > 0:
        jobs = [(P, G, x, collect) for x in range(G.order)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_subtree, jobs))
        if collect:
            return [GroupHom(im) for part in parts for im in part]
        return sum(parts)
    it = _Search(P, G).run()
    if collect:
        return [GroupHom(im) for im in it]
    return sum(1 for _ in it)


def dw_invariant(
    K: SimplicialComplex, G: FiniteGroup, basepoint: int | None = None, workers: int = 1
) -> int:
    """``#Hom(pi_1(K), G)``, with no normalisation and no quotient by conjugation."""
    K.require_connected()
    return enumerate_homs(present_pi1(K, basepoint), G, "count", workers)


@dataclass(frozen=True)
class YetterResult:
    invariant: int
    verified_simply_connected: bool
    reason: str

    @property
    def warnings(self) -> list[str]:
        if self.verified_simply_connected:
            return []
        return [f"unverified: {self.reason}; value is #Hom(H_2, H), not #Hom(pi_2, H)"]


def as_finite_abelian(H: FinAbelianGroup | FiniteGroup) -> FinAbelianGroup:
    if isinstance(H, FiniteGroup):
        view = H.abelian_view
        if view is None:
            raise UnsupportedError(f"{H} has no abelian invariant-factor description")
        return view
    if not isinstance(H, FinAbelianGroup) or not H.is_finite:
        raise UnsupportedError(f"target {H} must be a finite abelian group")
    return H


def yetter_invariant(K: SimplicialComplex, H: FinAbelianGroup | FiniteGroup) -> YetterResult:
    """``#Hom(H_2(K), H)``, equal to ``#Hom(pi_2(K), H)`` when the flag is set."""
    H = as_finite_abelian(H)
    K.require_connected()
    h2 = homology(K, 2) if K.dimension >= 2 else FinAbelianGroup()
    sc = check_simply_connected(K)
    return YetterResult(count_abelian_homs(h2, H), sc.verified, sc.reason)

