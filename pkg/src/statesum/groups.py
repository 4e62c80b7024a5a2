"""Finite groups given by Cayley tables, and the group spec mini-language.

Elements are the indices ``0..n-1``.  Spec strings::

    cyclic:n            Z/n
    sym:n               permutations of n letters, (p*q)(x) = p(q(x))
    dihedral:n          symmetries of the n-gon, order 2n
    abelian:d1,d2,...   Z/d1 x Z/d2 x ..., mixed-radix element order
    table:<path>        JSON n x n array of 0-based indices
    qmodz               Q/Z (coefficient group only, not a FiniteGroup)
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations, product
from math import prod
from pathlib import Path
from typing import Sequence

import numpy as np

from .abelian import QMODZ, FinAbelianGroup, QmodZGroup
from .errors import GroupSpecError

MAX_ORDER = 5000


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group by its Cayley table ``table[a][b] = a*b``."""

    table: tuple[tuple[int, ...], ...]
    spec: str = field(default="", compare=False)
    labels: tuple = field(default=(), compare=False, repr=False)
    cyclic_orders: tuple[int, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        n = len(self.table)
        if n == 0:
            raise GroupSpecError("a group needs at least one element")
        if n > MAX_ORDER:
            raise GroupSpecError(f"order {n} exceeds the Cayley-table limit {MAX_ORDER}")
        if any(len(r) != n for r in self.table):
            raise GroupSpecError("Cayley table must be square")
        T = np.asarray(self.table, dtype=np.int64)
        if T.min() < 0 or T.max() >= n:
            raise GroupSpecError("Cayley table entries out of range")
        ids = [e for e in range(n) if (T[e] == np.arange(n)).all() and (T[:, e] == np.arange(n)).all()]
        if not ids:
            raise GroupSpecError("Cayley table has no identity element")
        e = ids[0]
        # every row/column must contain the identity exactly once for inverses
        for a in range(n):
            if (T[a] == e).sum() != 1 or (T[:, a] == e).sum() != 1:
                raise GroupSpecError(f"element {a} has no unique inverse")
            # (a*b)*c == a*(b*c) for all b, c
            if not (T[T[a]] == T[a][T]).all():
                raise GroupSpecError("Cayley table is not associative")
        inv = tuple(int(np.flatnonzero(T[a] == e)[0]) for a in range(n))
        object.__setattr__(self, "_identity", e)
        object.__setattr__(self, "_inverses", inv)

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return self._identity

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inverses[a]

    @property
    def inverses(self) -> tuple[int, ...]:
        return self._inverses

    def elements(self) -> range:
        return range(self.order)

    def product(self, elements: Sequence[int]) -> int:
        out = self.identity
        for x in elements:
            out = self.table[out][x]
        return out

    def conjugate(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.table[self.table[g][x]][self._inverses[g]]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    @cached_property
    def is_abelian(self) -> bool:
        T = np.asarray(self.table)
        return bool((T == T.T).all())

    def conjugacy_classes(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        classes = []
        for x in range(self.order):
            if x in seen:
                continue
            cls = frozenset(self.conjugate(g, x) for g in range(self.order))
            seen |= cls
            classes.append(cls)
        return classes

    @property
    def abelian_view(self) -> FinAbelianGroup | None:
        """Invariant-factor form when the group came from ``abelian:`` or ``cyclic:``."""
        if self.cyclic_orders is None:
            return None
        return FinAbelianGroup.from_cyclic_orders(self.cyclic_orders)

    def parse(self, obj) -> int:
        if isinstance(obj, bool) or not isinstance(obj, int) or not 0 <= obj < self.order:
            raise ValueError(f"{obj!r} is not an element index of a group of order {self.order}")
        return obj

    def dump(self, a: int) -> int:
        return int(a)

    def __str__(self) -> str:
        return self.spec or f"<group of order {self.order}>"


def _from_mul(elements: list, mul, spec: str, **kw) -> FiniteGroup:
    if len(elements) > MAX_ORDER:
        raise GroupSpecError(f"order {len(elements)} exceeds the Cayley-table limit {MAX_ORDER}")
    index = {x: i for i, x in enumerate(elements)}
    table = tuple(tuple(index[mul(a, b)] for b in elements) for a in elements)
    return FiniteGroup(table, spec, tuple(elements), **kw)


def cyclic_group(n: int) -> FiniteGroup:
    return _from_mul(list(range(n)), lambda a, b: (a + b) % n, f"cyclic:{n}", cyclic_orders=(n,))


def symmetric_group(n: int) -> FiniteGroup:
    if n > 6:
        raise GroupSpecError(f"sym:{n} exceeds the Cayley-table limit {MAX_ORDER}")
    perms = list(permutations(range(n)))
    return _from_mul(perms, lambda p, q: tuple(p[q[x]] for x in range(n)), f"sym:{n}")


def dihedral_group(n: int) -> FiniteGroup:
    # (k, s) stands for r^k s^s; s r = r^-1 s
    elems = [(k, s) for s in (0, 1) for k in range(n)]

    def mul(a, b):
        (k1, s1), (k2, s2) = a, b
        return ((k1 + (-k2 if s1 else k2)) % n, (s1 + s2) % 2)

    return _from_mul(elems, mul, f"dihedral:{n}")


def abelian_product(orders: Sequence[int]) -> FiniteGroup:
    orders = tuple(orders)
    elems = list(product(*(range(d) for d in orders)))
    spec = "abelian:" + ",".join(map(str, orders))
    return _from_mul(
        elems, lambda a, b: tuple((x + y) % d for x, y, d in zip(a, b, orders)), spec, cyclic_orders=orders
    )


def group_from_table_file(path: str | Path) -> FiniteGroup:
    data = json.loads(Path(path).read_text())
    try:
        table = tuple(tuple(int(x) for x in row) for row in data)
    except (TypeError, ValueError) as exc:
        raise GroupSpecError(f"{path}: Cayley table must be an n x n integer array") from exc
    return FiniteGroup(table, f"table:{path}")


def _positive_ints(text: str, spec: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise GroupSpecError(f"bad group spec {spec!r}") from None
    if not vals or any(v < 1 for v in vals):
        raise GroupSpecError(f"bad group spec {spec!r}")
    return vals


def group_from_spec(spec: str) -> FiniteGroup:
    """Build a verified :class:`FiniteGroup` from a spec string."""
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "table":
        return group_from_table_file(arg)
    if kind not in {"cyclic", "sym", "dihedral", "abelian"}:
        raise GroupSpecError(f"unknown group spec {spec!r}")
    vals = _positive_ints(arg, spec)
    if kind == "abelian":
        if prod(vals) > MAX_ORDER:
            raise GroupSpecError(f"order {prod(vals)} exceeds the Cayley-table limit {MAX_ORDER}")
        return abelian_product(vals)
    if len(vals) != 1:
        raise GroupSpecError(f"bad group spec {spec!r}")
    (n,) = vals
    if kind == "cyclic":
        if n > MAX_ORDER:
            raise GroupSpecError(f"order {n} exceeds the Cayley-table limit {MAX_ORDER}")
        return cyclic_group(n)
    if kind == "sym":
        return symmetric_group(n)
    if 2 * n > MAX_ORDER:
        raise GroupSpecError(f"order {2 * n} exceeds the Cayley-table limit {MAX_ORDER}")
    return dihedral_group(n)


def abelian_group_from_spec(spec: str) -> FinAbelianGroup | QmodZGroup:
    """Coefficient group for cochains and gerbes: ``cyclic:n``, ``abelian:...`` or ``qmodz``."""
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    if kind in {"qmodz", "q/z", "u1"}:
        return QMODZ
    if kind in {"cyclic", "abelian"}:
        vals = _positive_ints(arg, spec)
        if kind == "cyclic" and len(vals) != 1:
            raise GroupSpecError(f"bad group spec {spec!r}")
        return FinAbelianGroup.from_cyclic_orders(vals)
    raise GroupSpecError(f"{spec!r} is not an abelian coefficient group spec")


def coefficient_group_from_spec(spec: str):
    """``qmodz`` gives Q/Z, anything else a :class:`FiniteGroup`."""
    if spec.strip().lower() in {"qmodz", "q/z", "u1"}:
        return QMODZ
    return group_from_spec(spec)
