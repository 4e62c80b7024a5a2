"""Finite abstract simplicial complexes, chains, and edge paths.

Simplices are stored canonically as strictly increasing vertex tuples.  All
bases (rows and columns of boundary matrices, cochain vectors) use the
lexicographic order of those tuples.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    DimensionError,
    MalformedSimplexError,
    NotConnectedError,
    PathError,
    UnknownSimplexError,
)
from .matrix import IntMatrix

Simplex = tuple[int, ...]
Edge = tuple[int, int]

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def permutation_sign(seq: Sequence[int]) -> int:
    """Parity of the permutation sorting ``seq`` (entries must be distinct)."""
    sign = 1
    items = list(seq)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class OrientedSimplex:
    """A simplex written with its vertices in some order.

    ``sign`` is +1 when the order is an even permutation of the canonical
    increasing tuple and -1 otherwise.
    """

    vertices: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise MalformedSimplexError(f"repeated vertex in {self.vertices}")

    @property
    def canonical(self) -> Simplex:
        return tuple(sorted(self.vertices))

    @property
    def sign(self) -> int:
        return permutation_sign(self.vertices)


def orient(vertices: Sequence[int]) -> tuple[Simplex, int]:
    """Return ``(canonical tuple, sign)`` for an arbitrarily ordered simplex."""
    s = OrientedSimplex(tuple(vertices))
    return s.canonical, s.sign


@dataclass(frozen=True)
class SimplicialComplex:
    """Immutable simplicial complex on vertices ``0..V-1``.

    ``simplices[d]`` is the lexicographically sorted tuple of d-simplices.
    Build instances with :func:`build_complex`.
    """

    simplices: tuple[tuple[Simplex, ...], ...]
    name: str = field(default="", compare=False)

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(v for (v,) in self.simplices[0])

    def n_simplices(self, d: int) -> int:
        if 0 <= d <= self.dimension:
            return len(self.simplices[d])
        return 0

    def simplices_of(self, d: int) -> tuple[Simplex, ...]:
        if 0 <= d <= self.dimension:
            return self.simplices[d]
        return ()

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.simplices)

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector))

    @cached_property
    def _index(self) -> dict[Simplex, int]:
        return {s: i for level in self.simplices for i, s in enumerate(level)}

    def index(self, simplex: Sequence[int]) -> int:
        """Position of a canonical simplex in its dimension's basis."""
        try:
            return self._index[tuple(simplex)]
        except KeyError:
            raise UnknownSimplexError(f"{tuple(simplex)} is not a simplex of the complex") from None

    def __contains__(self, simplex) -> bool:
        return tuple(sorted(simplex)) in self._index

    @cached_property
    def neighbors(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.simplices_of(1):
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def maximal_simplices(self) -> list[Simplex]:
        """Simplices that are not a proper face of another simplex."""
        covered: set[Simplex] = set()
        for level in self.simplices[1:]:
            for s in level:
                covered.update(combinations(s, len(s) - 1))
        return [s for level in self.simplices for s in level if s not in covered]

    @cached_property
    def is_connected(self) -> bool:
        parent = list(range(len(self.vertices)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.simplices_of(1):
            parent[find(u)] = find(v)
        return len({find(v) for v in self.vertices}) == 1

    def require_connected(self) -> None:
        if not self.is_connected:
            raise NotConnectedError(f"complex {self.name or ''} is not path-connected".replace("  ", " "))

    def __repr__(self) -> str:
        label = f"{self.name!r}, " if self.name else ""
        return f"SimplicialComplex({label}f_vector={self.f_vector})"


def build_complex(maximal_simplices: Iterable[Sequence[int]], name: str = "") -> SimplicialComplex:
    """Close a family of simplices under taking faces.

    >>> build_complex([(0, 1, 2)]).f_vector
    (3, 3, 1)
    """
    levels: dict[int, set[Simplex]] = {}
    for raw in maximal_simplices:
        verts = tuple(raw)
        if not verts:
            raise MalformedSimplexError("empty simplex")
        if len(set(verts)) != len(verts):
            raise MalformedSimplexError(f"duplicate vertex in simplex {verts}")
        if any(not isinstance(v, int) or isinstance(v, bool) or v < 0 for v in verts):
            raise MalformedSimplexError(f"vertices must be non-negative integers: {verts}")
        top = tuple(sorted(verts))
        for k in range(1, len(top) + 1):
            levels.setdefault(k - 1, set()).update(combinations(top, k))
    if not levels:
        raise MalformedSimplexError("a complex needs at least one simplex")
    vertex_ids = sorted(v for (v,) in levels[0])
    if vertex_ids != list(range(len(vertex_ids))):
        raise MalformedSimplexError("vertices must be the dense range 0..V-1")
    simplices = tuple(tuple(sorted(levels[d])) for d in range(max(levels) + 1))
    return SimplicialComplex(simplices, name)


def _faces_with_signs(simplex: Simplex) -> Iterator[tuple[int, Simplex]]:
    for i in range(len(simplex)):
        yield (-1) ** i, simplex[:i] + simplex[i + 1 :]


def boundary_matrix(K: SimplicialComplex, d: int) -> IntMatrix:
    """Matrix of the boundary map from d-chains to (d-1)-chains."""
    if not 1 <= d <= K.dimension:
        raise DimensionError(f"boundary degree {d} outside 1..{K.dimension}")
    return _boundary(K, d)


def _boundary(K: SimplicialComplex, d: int) -> IntMatrix:
    # total version: zero-size matrices outside 1..dim
    rows, cols = K.n_simplices(d - 1), K.n_simplices(d)
    if d < 1 or cols == 0 or rows == 0:
        return IntMatrix.zeros(rows, cols)
    data = [[0] * cols for _ in range(rows)]
    for j, s in enumerate(K.simplices[d]):
        for sign, face in _faces_with_signs(s):
            data[K.index(face)][j] = sign
    return IntMatrix.from_rows(data, cols)


def chain_boundary(chain: Mapping[Simplex, int]) -> dict[Simplex, int]:
    """Boundary of a chain given as ``{canonical simplex: coefficient}``."""
    out: dict[Simplex, int] = {}
    for s, c in chain.items():
        if c == 0 or len(s) < 2:
            continue
        for sign, face in _faces_with_signs(s):
            out[face] = out.get(face, 0) + sign * c
    return {f: c for f, c in out.items() if c}


@dataclass(frozen=True)
class TwoCycle:
    """A finitely supported integer 2-chain.

    Construction does not enforce the cycle condition; use :func:`is_cycle`.
    Coefficients are keyed by canonical triangles; zero entries are dropped.
    """

    coefficients: Mapping[Simplex, int]

    def __post_init__(self):
        clean: dict[Simplex, int] = {}
        for tri, c in self.coefficients.items():
            canon, sign = orient(tri)
            if len(canon) != 3:
                raise MalformedSimplexError(f"{tri} is not a triangle")
            clean[canon] = clean.get(canon, 0) + sign * int(c)
        object.__setattr__(self, "coefficients", {t: c for t, c in sorted(clean.items()) if c})

    @classmethod
    def from_vector(cls, K: SimplicialComplex, vector: Sequence[int]) -> TwoCycle:
        triangles = K.simplices_of(2)
        if len(vector) != len(triangles):
            raise DimensionError("vector length does not match the number of triangles")
        return cls({t: c for t, c in zip(triangles, vector)})

    def to_vector(self, K: SimplicialComplex) -> tuple[int, ...]:
        vec = [0] * K.n_simplices(2)
        for t, c in self.coefficients.items():
            vec[K.index(t)] = c
        return tuple(vec)

    def __add__(self, other: TwoCycle) -> TwoCycle:
        merged = dict(self.coefficients)
        for t, c in other.coefficients.items():
            merged[t] = merged.get(t, 0) + c
        return TwoCycle(merged)

    def __neg__(self) -> TwoCycle:
        return TwoCycle({t: -c for t, c in self.coefficients.items()})

    def __sub__(self, other: TwoCycle) -> TwoCycle:
        return self + (-other)

    def __rmul__(self, k: int) -> TwoCycle:
        return TwoCycle({t: k * c for t, c in self.coefficients.items()})

    def __hash__(self):
        return hash(tuple(self.coefficients.items()))


def is_cycle(K: SimplicialComplex, z: TwoCycle) -> bool:
    for t in z.coefficients:
        K.index(t)
    return not chain_boundary(z.coefficients)


@dataclass(frozen=True)
class EdgePath:
    """Head-to-tail sequence of directed edges starting at ``basepoint``."""

    basepoint: int
    steps: tuple[Edge, ...] = ()

    def __post_init__(self):
        steps = tuple((int(u), int(v)) for u, v in self.steps)
        at = self.basepoint
        for u, v in steps:
            if u != at:
                raise PathError(f"step {(u, v)} does not start at {at}")
            if u == v:
                raise PathError(f"degenerate step {(u, v)}")
            at = v
        object.__setattr__(self, "steps", steps)

    @classmethod
    def from_vertices(cls, vertices: Sequence[int]) -> EdgePath:
        """``[0, 1, 2, 0]`` becomes the loop 0->1->2->0."""
        if not vertices:
            raise PathError("a path needs at least its basepoint")
        return cls(vertices[0], tuple(zip(vertices[:-1], vertices[1:])))

    @property
    def end(self) -> int:
        return self.steps[-1][1] if self.steps else self.basepoint

    @property
    def is_loop(self) -> bool:
        return self.end == self.basepoint

    def vertex_sequence(self) -> list[int]:
        return [self.basepoint] + [v for _, v in self.steps]

    def reverse(self) -> EdgePath:
        return EdgePath(self.end, tuple((v, u) for u, v in reversed(self.steps)))

    def __add__(self, other: EdgePath) -> EdgePath:
        if other.basepoint != self.end:
            raise PathError("paths are not composable")
        return EdgePath(self.basepoint, self.steps + other.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def check_in(self, K: SimplicialComplex) -> None:
        if self.basepoint not in K.neighbors:
            raise UnknownSimplexError(f"vertex {self.basepoint} not in complex")
        for u, v in self.steps:
            if (min(u, v), max(u, v)) not in K._index:
                raise UnknownSimplexError(f"edge {(u, v)} not in complex")


def simplify_path(p: EdgePath) -> EdgePath:
    """Cancel backtracks ``u->v, v->u`` until none remain."""
    stack: list[Edge] = []
    for u, v in p.steps:
        if stack and stack[-1] == (v, u):
            stack.pop()
        else:
            stack.append((u, v))
    return EdgePath(p.basepoint, tuple(stack))


def bfs_tree(K: SimplicialComplex, root: int) -> dict[int, int | None]:
    """BFS parent map, neighbours visited in increasing vertex order."""
    if root not in K.neighbors:
        raise UnknownSimplexError(f"basepoint {root} not in complex")
    K.require_connected()
    parent: dict[int, int | None] = {root: None}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in K.neighbors[u]:
            if w not in parent:
                parent[w] = u
                queue.append(w)
    return parent


def tree_path(parent: Mapping[int, int | None], v: int) -> EdgePath:
    """Path in the tree from the root to ``v``."""
    chain = [v]
    while parent[chain[-1]] is not None:
        chain.append(parent[chain[-1]])
    return EdgePath.from_vertices(chain[::-1])


# --------------------------------------------------------------------- I/O


def complex_to_json(K: SimplicialComplex) -> dict:
    return {"name": K.name, "maximal_simplices": [list(s) for s in K.maximal_simplices()]}


def complex_from_json(data: Mapping) -> SimplicialComplex:
    if "maximal_simplices" not in data:
        raise MalformedSimplexError("complex JSON needs a 'maximal_simplices' list")
    return build_complex([tuple(s) for s in data["maximal_simplices"]], data.get("name", ""))


def fixture_names() -> list[str]:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))


def load_fixture(name: str) -> SimplicialComplex:
    path = FIXTURE_DIR / f"{name}.json"
    if not path.exists():
        raise FileNotFoundError(f"no shipped fixture named {name!r}")
    return complex_from_json(json.loads(path.read_text()))


def load_complex(source: str | Path) -> SimplicialComplex:
    """Load a complex file; falls back to a shipped fixture of the same stem.

    So ``fixtures/torus.json`` and ``torus`` both resolve to the bundled torus
    when no such file exists relative to the working directory.
    """
    path = Path(source)
    if path.exists():
        return complex_from_json(json.loads(path.read_text()))
    if path.stem in fixture_names():
        return load_fixture(path.stem)
    raise FileNotFoundError(f"complex file {source} not found")


def simplex_key(simplex: Sequence[int]) -> str:
    """JSON object key for a simplex, e.g. ``"0,1,2"``."""
    return ",".join(str(v) for v in simplex)


def parse_simplex_key(key: str) -> tuple[int, ...]:
    try:
        verts = tuple(int(x) for x in key.split(","))
    except ValueError:
        raise MalformedSimplexError(f"bad simplex key {key!r}") from None
    if len(set(verts)) != len(verts):
        raise MalformedSimplexError(f"duplicate vertex in simplex key {key!r}")
    return verts
