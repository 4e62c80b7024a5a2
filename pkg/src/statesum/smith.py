"""Smith normal form over the integers and homology of integer chain complexes.

The reduction keeps both unimodular transforms and their inverses, so callers
can move between the standard basis and the adapted basis without inverting
anything.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionError
from .matrix import IntMatrix, dot


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == D`` with ``D`` diagonal, ``d1 | d2 | ...``, all ``>= 0``."""

    D: IntMatrix
    U: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """The nonzero diagonal entries."""
        return tuple(d for d in self.diagonal if d)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(A: IntMatrix) -> SmithForm:
    """Diagonalise ``A`` by unimodular row and column operations.

    Pivot rule: the nonzero entry of smallest absolute value in the remaining
    submatrix, ties broken by row-major position.  The result is fully
    determined by the input.
    """
    m, n = A.rows, A.cols
    a = [list(r) for r in A.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q == 0:
            return
        ad, as_ = a[dst], a[src]
        for j in range(n):
            ad[j] += q * as_[j]
        ud, us = U[dst], U[src]
        for j in range(m):
            ud[j] += q * us[j]
        for r in Ui:
            r[src] -= q * r[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        if q == 0:
            return
        for r in a:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]
        vs, vd = Vi[src], Vi[dst]
        for j in range(n):
            vs[j] -= q * vd[j]

    def swap_rows(i, k):
        if i == k:
            return
        a[i], a[k] = a[k], a[i]
        U[i], U[k] = U[k], U[i]
        for r in Ui:
            r[i], r[k] = r[k], r[i]

    def swap_cols(j, k):
        if j == k:
            return
        for r in a:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]
        Vi[j], Vi[k] = Vi[k], Vi[j]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = a[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, pi, pj = best
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(a[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
            for r in Ui:
                r[t] = -r[t]
        if best is None:
            break

    return SmithForm(
        IntMatrix.from_rows(a, n),
        IntMatrix.from_rows(U, m),
        IntMatrix.from_rows(V, n),
        IntMatrix.from_rows(Ui, m),
        IntMatrix.from_rows(Vi, n),
    )


def rank(A: IntMatrix) -> int:
    return smith_normal_form(A).rank


@dataclass(frozen=True)
class ChainHomology:
    """Homology ``ker(d_out) / im(d_in)`` at one spot of a chain complex.

    The kernel of ``d_out`` is given a basis adapted to the image of
    ``d_in``: basis vector ``i`` times ``orders[i]`` is a boundary
    (``orders[i] == 0`` means no multiple is).  ``dual[i]`` is the matching
    coordinate functional, so ``dot(dual[i], basis[j]) == (i == j)`` and
    ``dual`` vanishes on a fixed complement of the kernel.
    """

    size: int
    basis: tuple[tuple[int, ...], ...]
    dual: tuple[tuple[int, ...], ...]
    orders: tuple[int, ...]

    @property
    def generator_positions(self) -> tuple[int, ...]:
        """Adapted-basis positions carrying homology: torsion first, then free."""
        torsion = [i for i, e in enumerate(self.orders) if e > 1]
        free = [i for i, e in enumerate(self.orders) if e == 0]
        return tuple(torsion + free)

    @property
    def factors(self) -> tuple[int, ...]:
        return tuple(e for e in self.orders if e > 1)

    @property
    def free_rank(self) -> int:
        return sum(1 for e in self.orders if e == 0)

    @property
    def generators(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.basis[i] for i in self.generator_positions)

    def in_kernel_coordinates(self, chain: Sequence[int]) -> tuple[int, ...]:
        return tuple(dot(row, chain) for row in self.dual)

    def class_coordinates(self, cycle: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of the class of ``cycle`` (torsion parts reduced)."""
        coords = self.in_kernel_coordinates(cycle)
        recon = [0] * self.size
        for c, vec in zip(coords, self.basis):
            if c:
                for k, x in enumerate(vec):
                    recon[k] += c * x
        if list(recon) != list(cycle):
            raise ValueError("chain is not a cycle")
        out = []
        for i in self.generator_positions:
            e = self.orders[i]
            out.append(coords[i] % e if e else coords[i])
        return tuple(out)


def chain_homology(d_out: IntMatrix, d_in: IntMatrix) -> ChainHomology:
    """Homology at ``C`` for ``C_next --d_in--> C --d_out--> C_prev``."""
    if d_out.cols != d_in.rows:
        raise DimensionError(f"incompatible maps {d_in.shape} then {d_out.shape}")
    n = d_out.cols
    snf_out = smith_normal_form(d_out)
    r = snf_out.rank
    V, Vi = snf_out.V, snf_out.V_inv
    kernel = [V.column(j) for j in range(r, n)]
    k = len(kernel)
    # d_in lands in the kernel, so its coordinates in V's basis vanish above r.
    coords = Vi @ d_in
    if any(coords[i, j] for i in range(r) for j in range(d_in.cols)):
        raise DimensionError("d_out @ d_in is not zero")
    C = IntMatrix.from_rows([coords.row(i) for i in range(r, n)], d_in.cols)
    snf_in = smith_normal_form(C)
    P, P_inv = snf_in.U, snf_in.U_inv
    diag = snf_in.diagonal
    orders = tuple(diag[i] if i < len(diag) else 0 for i in range(k))
    # adapted basis: kernel @ P^-1, dual rows: P @ Vi[r:]
    basis = tuple(
        tuple(sum(kernel[s][row] * P_inv[s, i] for s in range(k)) for row in range(n))
        for i in range(k)
    )
    vi_rows = [Vi.row(i) for i in range(r, n)]
    dual = tuple(
        tuple(sum(P[i, s] * vi_rows[s][col] for s in range(k)) for col in range(n))
        for i in range(k)
    )
    return ChainHomology(n, basis, dual, orders)


def solve_over(M: IntMatrix, rhs: Sequence, group) -> list | None:
    """Solve ``M x = rhs`` with ``x`` and ``rhs`` in an abelian coefficient group.

    ``group`` needs ``zero/add/mul/is_zero/divide``.  Returns one solution or
    None when the system is inconsistent.
    """
    if len(rhs) != M.rows:
        raise DimensionError(f"right-hand side of length {len(rhs)} for {M.shape} matrix")
    snf = smith_normal_form(M)

    def combo(row, vec):
        acc = group.zero()
        for k, v in zip(row, vec):
            if k:
                acc = group.add(acc, group.mul(k, v))
        return acc

    c = [combo(snf.U.row(i), rhs) for i in range(M.rows)]
    diag = snf.diagonal
    y = []
    for i in range(M.cols):
        d = diag[i] if i < len(diag) else 0
        if d:
            yi = group.divide(d, c[i])
            if yi is None:
                return None
            y.append(yi)
        else:
            y.append(group.zero())
    for i in range(M.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0 and not group.is_zero(c[i]):
            return None
    return [combo(snf.V.row(i), y) for i in range(M.cols)]
