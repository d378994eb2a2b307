"""Exact linear algebra: ranks over fields and diagonalization over F[U].

Field computations go through sympy's ``DomainMatrix``.  Over the principal
ideal domain ``F[U]`` we diagonalize by Euclidean row and column operations,
recording the row transformation and the inverse column transformation.
"""
from __future__ import annotations

from typing import Sequence

from sympy.polys.matrices import DomainMatrix


def to_domain_matrix(entries: dict, shape: tuple, dom) -> DomainMatrix:
    """Build a ``DomainMatrix`` from ``{(row, col): value}``."""
    rows: dict = {}
    for (i, j), v in entries.items():
        if v:
            rows.setdefault(i, {})[j] = v
    return DomainMatrix(rows, shape, dom)


def rank(entries: dict, shape: tuple, dom) -> int:
    if not entries or 0 in shape:
        return 0
    return to_domain_matrix(entries, shape, dom).rank()


def columns_matrix(cols: Sequence[dict], n_rows: int, dom) -> DomainMatrix:
    """Matrix whose columns are the sparse vectors ``cols`` (``{row: value}``)."""
    rows: dict = {}
    for j, col in enumerate(cols):
        for i, v in col.items():
            if v:
                rows.setdefault(i, {})[j] = v
    return DomainMatrix(rows, (n_rows, len(cols)), dom)


def column_rank(cols: Sequence[dict], n_rows: int, dom) -> int:
    if not cols or n_rows == 0:
        return 0
    return columns_matrix(cols, n_rows, dom).rank()


def matrix_columns(entries: dict, n_cols: int) -> list[dict]:
    cols: list[dict] = [dict() for _ in range(n_cols)]
    for (i, j), v in entries.items():
        if v:
            cols[j][i] = v
    return cols


def nullspace_columns(entries: dict, shape: tuple, dom, keep: Sequence[int]) -> list[dict]:
    """Kernel of the matrix restricted to the columns ``keep``, as sparse vectors."""
    keep = list(keep)
    if not keep:
        return []
    pos = {j: a for a, j in enumerate(keep)}
    sub = {(i, pos[j]): v for (i, j), v in entries.items() if j in pos and v}
    if shape[0] == 0 or not sub:
        return [{j: dom.one} for j in keep]
    M = to_domain_matrix(sub, (shape[0], len(keep)), dom)
    ns = M.nullspace()
    out = []
    for row in ns.to_list():
        vec = {keep[a]: v for a, v in enumerate(row) if v}
        out.append(vec)
    return out


# ---------------------------------------------------------------------------
# F[U]


def valuation(p) -> float:
    """Exponent of the lowest term of a univariate polynomial (inf for zero)."""
    if not p:
        return float("inf")
    return min(m[0] for m in p.monoms())


def _deg(p) -> int:
    return p.degree()


def diagonalize(mat: list, dom, track_rows: bool = True, track_cols_inv: bool = True):
    """Reduce ``mat`` (list of rows over ``F[U]``) to diagonal form.

    Returns ``(D, P, Qinv, r)`` with ``P * mat * Q = D``, the first ``r``
    diagonal entries nonzero and every other entry zero.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    A = [list(row) for row in mat]
    zero, one = dom.zero, dom.one
    P = [[one if i == j else zero for j in range(m)] for i in range(m)] if track_rows else None
    Qi = [[one if i == j else zero for j in range(n)] for i in range(n)] if track_cols_inv else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if P is not None:
            P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if Qi is not None:
            Qi[i], Qi[j] = Qi[j], Qi[i]

    def add_row(dst, src, f):  # row dst -= f * row src
        A[dst] = [a - f * b for a, b in zip(A[dst], A[src])]
        if P is not None:
            P[dst] = [a - f * b for a, b in zip(P[dst], P[src])]

    def add_col(dst, src, f):  # col dst -= f * col src
        for row in A:
            if row[src]:
                row[dst] = row[dst] - f * row[src]
        if Qi is not None:
            Qi[src] = [a + f * b for a, b in zip(Qi[src], Qi[dst])]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                if row[j] and (best is None or _deg(row[j]) < best[0]):
                    best = (_deg(row[j]), i, j)
                    if best[0] == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            dirty = False
            piv = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q, r = divmod(A[i][t], piv)
                    if q:
                        add_row(i, t, q)
                    if r:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q, r = divmod(A[t][j], piv)
                    if q:
                        add_col(j, t, q)
                    if r:
                        dirty = True
            if not dirty:
                break
            # move the smallest remainder into the pivot position
            cands = [(_deg(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            cands += [(_deg(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            _, i, j = min(cands)
            if j == t:
                swap_rows(t, i)
            else:
                swap_cols(t, j)
        t += 1
    return A, P, Qi, t
