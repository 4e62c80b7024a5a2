"""Finitely generated abelian groups and exact Q/Z arithmetic.

Every coefficient group used for gerbes and cochains (``FinAbelianGroup``
and ``QmodZGroup``) exposes the same additive interface::

    zero(), add(a, b), neg(a), mul(k, a), is_zero(a), parse(obj), dump(a)

plus ``identity`` / ``op`` / ``inv`` aliases so an abelian group can stand in
wherever a multiplicative :class:`~statesum.groups.FiniteGroup` is expected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, prod
from typing import Iterator, Sequence

from .errors import GroupSpecError, UnsupportedError
from .matrix import IntMatrix


@dataclass(frozen=True)
class FinAbelianGroup:
    """``Z/d1 + ... + Z/dk + Z^rank`` with ``d1 | d2 | ... | dk`` and each ``di >= 2``.

    Elements are tuples: residues for the torsion factors, then integers for
    the free part.
    """

    factors: tuple[int, ...] = ()
    rank: int = 0

    def __post_init__(self):
        factors = tuple(int(d) for d in self.factors)
        if any(d < 2 for d in factors):
            raise GroupSpecError(f"invariant factors must be >= 2, got {factors}")
        if any(b % a for a, b in zip(factors, factors[1:])):
            raise GroupSpecError(f"invariant factors must form a divisibility chain: {factors}")
        if self.rank < 0:
            raise GroupSpecError("free rank must be non-negative")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def from_cyclic_orders(cls, orders: Sequence[int], rank: int = 0) -> FinAbelianGroup:
        """Normalise an arbitrary direct sum of cyclic groups (order 0 means Z)."""
        from .smith import smith_normal_form

        finite = [int(d) for d in orders if d != 0]
        if any(d < 0 for d in finite):
            raise GroupSpecError(f"cyclic orders must be non-negative: {orders}")
        rank += sum(1 for d in orders if d == 0)
        if not finite:
            return cls((), rank)
        snf = smith_normal_form(IntMatrix.diagonal(finite, len(finite), len(finite)))
        return cls(tuple(d for d in snf.invariant_factors if d > 1), rank)

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise UnsupportedError(f"{self} is infinite")
        return prod(self.factors)

    @property
    def ngens(self) -> int:
        return len(self.factors) + self.rank

    @property
    def generator_orders(self) -> tuple[int, ...]:
        """Order of each standard generator, 0 for free generators."""
        return self.factors + (0,) * self.rank

    @property
    def spec(self) -> str:
        if self.rank:
            raise UnsupportedError("infinite groups have no spec string")
        if len(self.factors) == 1:
            return f"cyclic:{self.factors[0]}"
        return "abelian:" + ",".join(map(str, self.factors))

    def elements(self) -> Iterator[tuple[int, ...]]:
        if not self.is_finite:
            raise UnsupportedError(f"cannot enumerate the infinite group {self}")
        return product(*(range(d) for d in self.factors))

    def normalize(self, a: Sequence[int]) -> tuple[int, ...]:
        if len(a) != self.ngens:
            raise ValueError(f"element {tuple(a)} has wrong length for {self}")
        orders = self.generator_orders
        return tuple(x % d if d else int(x) for x, d in zip(a, orders))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def add(self, a, b) -> tuple[int, ...]:
        return self.normalize([x + y for x, y in zip(a, b)])

    def neg(self, a) -> tuple[int, ...]:
        return self.normalize([-x for x in a])

    def mul(self, k: int, a) -> tuple[int, ...]:
        return self.normalize([k * x for x in a])

    def is_zero(self, a) -> bool:
        return not any(self.normalize(a))

    def kills(self, d: int, a) -> bool:
        """Whether ``d * a == 0``."""
        return self.is_zero(self.mul(d, a))

    def divide(self, d: int, a):
        """Some ``y`` with ``d * y == a``, or None when there is none."""
        a = self.normalize(a)
        out = []
        for x, f in zip(a, self.generator_orders):
            if f == 0:
                if d == 0:
                    if x:
                        return None
                    out.append(0)
                elif x % d:
                    return None
                else:
                    out.append(x // d)
                continue
            g = gcd(d, f)
            if x % g:
                return None
            m = f // g
            out.append((x // g) * pow(d // g, -1, m) % m if m > 1 else 0)
        return tuple(out)

    # multiplicative aliases
    @property
    def identity(self):
        return self.zero()

    def op(self, a, b):
        return self.add(a, b)

    def inv(self, a):
        return self.neg(a)

    def parse(self, obj) -> tuple[int, ...]:
        if isinstance(obj, bool):
            raise ValueError(f"not a group element: {obj!r}")
        if isinstance(obj, int):
            obj = [obj]
        return self.normalize([int(x) for x in obj])

    def dump(self, a):
        a = self.normalize(a)
        return a[0] if len(a) == 1 else list(a)

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.factors]
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True, order=True)
class QmodZ:
    """An element of Q/Z, stored as the reduced fraction in ``[0, 1)``."""

    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value) % 1)

    def __add__(self, other: QmodZ) -> QmodZ:
        return QmodZ(self.value + other.value)

    def __neg__(self) -> QmodZ:
        return QmodZ(-self.value)

    def __sub__(self, other: QmodZ) -> QmodZ:
        return QmodZ(self.value - other.value)

    def __rmul__(self, k: int) -> QmodZ:
        return QmodZ(k * self.value)

    def lift(self) -> Fraction:
        """Canonical rational representative in ``[0, 1)``."""
        return self.value

    def __str__(self) -> str:
        return str(self.value)

    def __repr__(self) -> str:
        return f"QmodZ({self.value})"


class QmodZGroup:
    """Q/Z as a coefficient group; exact stand-in for U(1)."""

    spec = "qmodz"
    is_finite = False

    def zero(self) -> QmodZ:
        return QmodZ(Fraction(0))

    def add(self, a: QmodZ, b: QmodZ) -> QmodZ:
        return a + b

    def neg(self, a: QmodZ) -> QmodZ:
        return -a

    def mul(self, k: int, a: QmodZ) -> QmodZ:
        return k * a

    def is_zero(self, a: QmodZ) -> bool:
        return a.value == 0

    def kills(self, d: int, a: QmodZ) -> bool:
        return (d * a).value == 0

    def divide(self, d: int, a: QmodZ) -> QmodZ | None:
        if d == 0:
            return self.zero() if a.value == 0 else None
        return QmodZ(a.value / d)

    @property
    def identity(self) -> QmodZ:
        return self.zero()

    def op(self, a, b):
        return a + b

    def inv(self, a):
        return -a

    def parse(self, obj) -> QmodZ:
        if isinstance(obj, QmodZ):
            return obj
        if isinstance(obj, (bool, float)):
            raise ValueError(f"Q/Z values must be exact, got {obj!r}")
        return QmodZ(Fraction(obj))

    def dump(self, a: QmodZ) -> str:
        return str(a.value)

    def __eq__(self, other):
        return isinstance(other, QmodZGroup)

    def __hash__(self):
        return hash("qmodz")

    def __repr__(self) -> str:
        return "QmodZGroup()"

    def __str__(self) -> str:
        return "Q/Z"


QMODZ = QmodZGroup()


def count_abelian_homs(A: FinAbelianGroup, H: FinAbelianGroup) -> int:
    """Number of homomorphisms ``A -> H`` for finite ``H``.

    ``|H|**rank(A) * prod(gcd(d, e))`` over torsion factors d of A and e of H.
    """
    if not H.is_finite:
        raise UnsupportedError(f"target {H} is infinite; Hom count is not finite")
    total = H.order ** A.rank
    for d in A.factors:
        for e in H.factors:
            total *= gcd(d, e)
    return total


def abelian_groups_of_order(n: int) -> list[FinAbelianGroup]:
    """All finite abelian groups of order ``n`` up to isomorphism."""
    out = []

    def chains(remaining, last, acc):
        # build d1 | d2 | ... from the top: acc holds the chain reversed
        if remaining == 1:
            out.append(FinAbelianGroup(tuple(reversed(acc))))
            return
        for d in range(2, remaining + 1):
            if remaining % d == 0 and (last is None or last % d == 0):
                chains(remaining // d, d, acc + [d])

    chains(n, None, [])
    return sorted(set(out), key=lambda g: g.factors)
