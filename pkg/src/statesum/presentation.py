"""Edge-path presentations of the fundamental group and Tietze simplification.

Words are tuples of nonzero ints: letter ``+(g+1)`` is generator ``g``,
``-(g+1)`` its inverse.  The 1-based encoding matches the JSON export.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .abelian import FinAbelianGroup
from .errors import PathError, UnknownSimplexError
from .matrix import IntMatrix
from .simplicial import Edge, EdgePath, SimplicialComplex, bfs_tree, tree_path
from .smith import smith_normal_form

Word = tuple[int, ...]


def gen_of(letter: int) -> int:
    return abs(letter) - 1


def invert_word(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def free_reduce(word: Iterable[int]) -> Word:
    stack: list[int] = []
    for x in word:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def cyclic_reduce(word: Sequence[int]) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def _cyclic_key(word: Word) -> Word:
    # canonical representative under rotation and inversion
    if not word:
        return word
    cands = []
    for w in (word, invert_word(word)):
        cands.extend(w[i:] + w[:i] for i in range(len(w)))
    return min(cands, key=lambda w: (len(w), w))


@dataclass(frozen=True)
class Presentation:
    """Finite presentation ``<generators | relators>``.

    ``generator_edges[g]`` is the directed edge ``(u, v)``, ``u < v``, that
    generator ``g`` stands for; ``spanning_tree`` and ``parent`` describe the
    BFS tree the generators are relative to.  Only ``generator_count`` and
    ``relators`` take part in equality.
    """

    generator_count: int
    relators: tuple[Word, ...]
    generator_edges: tuple[Edge, ...] = field(default=(), compare=False)
    spanning_tree: frozenset = field(default=frozenset(), compare=False)
    basepoint: int | None = field(default=None, compare=False)
    parent: Mapping[int, int | None] = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        rels = tuple(tuple(int(x) for x in r) for r in self.relators)
        for r in rels:
            if any(x == 0 or gen_of(x) >= self.generator_count for x in r):
                raise ValueError(f"relator {r} references an unknown generator")
        object.__setattr__(self, "relators", rels)

    @property
    def edge_to_generator(self) -> dict[Edge, int]:
        return {e: g for g, e in enumerate(self.generator_edges)}

    def occurrence_counts(self) -> list[int]:
        counts = [0] * self.generator_count
        for r in self.relators:
            for x in r:
                counts[gen_of(x)] += 1
        return counts

    def relation_matrix(self) -> IntMatrix:
        """Exponent-sum matrix, one row per relator."""
        rows = []
        for r in self.relators:
            row = [0] * self.generator_count
            for x in r:
                row[gen_of(x)] += 1 if x > 0 else -1
            rows.append(row)
        return IntMatrix.from_rows(rows, self.generator_count)

    def to_json(self) -> dict:
        return {"generators": self.generator_count, "relators": [list(r) for r in self.relators]}

    @classmethod
    def from_json(cls, data: Mapping) -> Presentation:
        return cls(int(data["generators"]), tuple(tuple(r) for r in data["relators"]))

    def __str__(self) -> str:
        names = "abcdefghijklmnopqrstuvwxyz"

        def letter(x):
            g = gen_of(x)
            name = names[g] if g < 26 else f"x{g}"
            return name if x > 0 else name + "^-1"

        gens = ", ".join(letter(g + 1) for g in range(self.generator_count))
        rels = ", ".join(" ".join(letter(x) for x in r) for r in self.relators)
        return f"< {gens} | {rels} >"


@lru_cache(maxsize=128)
def present_pi1(K: SimplicialComplex, basepoint: int | None = None) -> Presentation:
    """Edge-path presentation of ``pi_1(K, basepoint)``.

    Generators are the edges outside a BFS spanning tree (in lexicographic
    edge order, oriented from the smaller vertex); each triangle
    ``u < v < w`` contributes ``[uv][vw][uw]^-1`` with tree edges omitted.
    """
    if basepoint is None:
        basepoint = min(K.vertices)
    parent = bfs_tree(K, basepoint)
    tree = frozenset((min(u, p), max(u, p)) for u, p in parent.items() if p is not None)
    gen_edges = tuple(e for e in K.simplices_of(1) if e not in tree)
    index = {e: g for g, e in enumerate(gen_edges)}

    def letter(e: Edge, sign: int) -> Word:
        return () if e in tree else (sign * (index[e] + 1),)

    relators = []
    for u, v, w in K.simplices_of(2):
        r = free_reduce(letter((u, v), 1) + letter((v, w), 1) + letter((u, w), -1))
        if r:
            relators.append(r)
    return Presentation(len(gen_edges), tuple(relators), gen_edges, tree, basepoint, parent)


def word_of_path(P: Presentation, p: EdgePath) -> Word:
    """Freely reduced word read off a loop at the presentation's basepoint."""
    if not p.is_loop or p.basepoint != P.basepoint:
        raise PathError(f"path must be a loop at basepoint {P.basepoint}")
    index = P.edge_to_generator
    word = []
    for u, v in p.steps:
        e = (min(u, v), max(u, v))
        if e in P.spanning_tree:
            continue
        if e not in index:
            raise UnknownSimplexError(f"edge {e} is not an edge of the presented complex")
        word.append((1 if u < v else -1) * (index[e] + 1))
    return free_reduce(word)


def generator_loop(P: Presentation, g: int) -> EdgePath:
    """Tree path to the generator edge's tail, the edge, and back along the tree."""
    u, v = P.generator_edges[g]
    return tree_path(P.parent, u) + EdgePath(u, ((u, v),)) + tree_path(P.parent, v).reverse()


def _substitute(word: Word, g: int, replacement: Word) -> Word:
    out: list[int] = []
    inv = invert_word(replacement)
    for x in word:
        if gen_of(x) == g:
            out.extend(replacement if x > 0 else inv)
        else:
            out.append(x)
    return tuple(out)


def _drop_generator(word: Word, g: int) -> Word:
    return tuple(x if gen_of(x) < g else (x - 1 if x > 0 else x + 1) for x in word)


def _tidy(relators: Iterable[Word]) -> list[Word]:
    seen = set()
    out = []
    for r in relators:
        r = cyclic_reduce(r)
        key = _cyclic_key(r)
        if r and key not in seen:
            seen.add(key)
            out.append(r)
    return out


def simplify_presentation(P: Presentation, effort: int = 1000) -> Presentation:
    """Tietze-simplify ``P`` using at most ``effort`` generator eliminations.

    Relators are cyclically reduced and deduplicated (up to rotation and
    inversion).  A generator occurring exactly once in some relator is solved
    for and substituted away, shortest relator first.
    """
    gens = P.generator_count
    edges = list(P.generator_edges) if len(P.generator_edges) == gens else []
    rels = _tidy(P.relators)
    steps = 0
    while steps < effort:
        choice = None
        for ri, r in sorted(enumerate(rels), key=lambda t: (len(t[1]), t[0])):
            counts: dict[int, int] = {}
            for x in r:
                counts[gen_of(x)] = counts.get(gen_of(x), 0) + 1
            single = sorted(g for g, c in counts.items() if c == 1)
            if single:
                choice = (ri, single[0])
                break
        if choice is None:
            break
        ri, g = choice
        r = rels.pop(ri)
        pos = next(i for i, x in enumerate(r) if gen_of(x) == g)
        rotated = r[pos:] + r[:pos]
        rest = rotated[1:]
        # g^e * rest = 1
        value = invert_word(rest) if rotated[0] > 0 else rest
        rels = [_drop_generator(_substitute(w, g, value), g) for w in rels]
        rels = _tidy(rels)
        gens -= 1
        if edges:
            del edges[g]
        steps += 1
    return Presentation(gens, tuple(rels), tuple(edges), P.spanning_tree, P.basepoint, P.parent)


def abelianization(P: Presentation) -> FinAbelianGroup:
    snf = smith_normal_form(P.relation_matrix())
    return FinAbelianGroup(
        tuple(d for d in snf.invariant_factors if d > 1), P.generator_count - snf.rank
    )


@dataclass(frozen=True)
class SimpleConnectivity:
    """Outcome of the simply-connectedness check.

    ``verified`` is only True when the abelianization is trivial and Tietze
    moves reduced the presentation to no generators at all.
    """

    verified: bool
    reason: str

    def __bool__(self) -> bool:
        return self.verified


def check_simply_connected(K: SimplicialComplex, effort: int = 1000) -> SimpleConnectivity:
    P = present_pi1(K)
    ab = abelianization(P)
    if ab.ngens:
        return SimpleConnectivity(False, f"pi_1 nontrivial (abelianization {ab})")
    simplified = simplify_presentation(P, effort)
    if simplified.generator_count:
        return SimpleConnectivity(
            False,
            f"pi_1 has trivial abelianization but {simplified.generator_count} generators "
            f"remain after Tietze simplification (effort {effort})",
        )
    return SimpleConnectivity(True, "presentation simplifies to the trivial group")
