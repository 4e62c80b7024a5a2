"""Integral simplicial homology and cohomology via Smith normal form."""

from __future__ import annotations

from functools import lru_cache

from .abelian import FinAbelianGroup
from .errors import DimensionError
from .simplicial import SimplicialComplex, _boundary
from .smith import ChainHomology, chain_homology


@lru_cache(maxsize=256)
def homology_data(K: SimplicialComplex, d: int) -> ChainHomology:
    """Adapted cycle basis for ``H_d(K; Z)``; see :class:`ChainHomology`."""
    if d < 0:
        raise DimensionError(f"negative degree {d}")
    return chain_homology(_boundary(K, d), _boundary(K, d + 1))


@lru_cache(maxsize=256)
def cohomology_data(K: SimplicialComplex, d: int) -> ChainHomology:
    """Adapted cocycle basis for ``H^d(K; Z)``, computed on transposed boundaries."""
    if d < 0:
        raise DimensionError(f"negative degree {d}")
    return chain_homology(_boundary(K, d + 1).T, _boundary(K, d).T)


def as_group(h: ChainHomology) -> FinAbelianGroup:
    return FinAbelianGroup(h.factors, h.free_rank)


def homology(K: SimplicialComplex, d: int) -> FinAbelianGroup:
    """``H_d(K; Z)`` as free rank plus invariant factors.

    >>> from statesum.simplicial import load_fixture
    >>> str(homology(load_fixture("rp2"), 1))
    'Z/2'
    """
    if not 0 <= d <= K.dimension:
        raise DimensionError(f"degree {d} outside 0..{K.dimension}")
    return as_group(homology_data(K, d))


def cohomology(K: SimplicialComplex, d: int) -> FinAbelianGroup:
    return as_group(cohomology_data(K, d))


def betti_numbers(K: SimplicialComplex) -> tuple[int, ...]:
    return tuple(homology(K, d).rank for d in range(K.dimension + 1))
