"""Smith normal form and integer lattice arithmetic.

All computations use arbitrary-precision integers.  The elimination is
sparse and prefers unit pivots, which makes it fast on the incidence-type
matrices produced by order complexes (almost all pivots are +-1 there).
"""

from __future__ import annotations

from collections import deque
from math import gcd

from ..errors import Cancelled, RingMismatch
from .matrix import Matrix
from .rings import ZZ

_CANCEL_STRIDE = 4096


class _Eliminator:
    """Sparse integer elimination with optional transform tracking.

    Reduces the working matrix to a "generalized diagonal" (one nonzero
    entry per used row and column) through elementary unimodular row and
    column operations, enforcing that each pivot divides every entry that
    remains, so the pivot values form a divisibility chain in processing
    order.
    """

    def __init__(self, nrows, ncols, triples, track_u=False, track_v=False,
                 track_uinv=False, cancel=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = [dict() for _ in range(nrows)]
        self.cols = [set() for _ in range(ncols)]
        self.unit_queue = deque()
        for i, j, v in triples:
            if v:
                self.rows[i][j] = self.rows[i].get(j, 0) + v
                if not self.rows[i][j]:
                    del self.rows[i][j]
                    self.cols[j].discard(i)
                else:
                    self.cols[j].add(i)
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                if v in (1, -1):
                    self.unit_queue.append((i, j))
        self.u_rows = [{i: 1} for i in range(nrows)] if track_u else None
        self.uinv_t = [{i: 1} for i in range(nrows)] if track_uinv else None
        self.v_t = [{j: 1} for j in range(ncols)] if track_v else None
        self.used_row = [False] * nrows
        self.used_col = [False] * ncols
        self.pivots = []  # (row, col) in processing order; value read from rows
        self.cancel = cancel
        self._ops = 0

    # -- elementary operations -------------------------------------------

    def _tick(self):
        self._ops += 1
        if self.cancel is not None and self._ops % _CANCEL_STRIDE == 0:
            if self.cancel():
                raise Cancelled("smith normal form computation cancelled")

    def _set(self, i, j, v):
        if v:
            self.rows[i][j] = v
            self.cols[j].add(i)
            if v in (1, -1):
                self.unit_queue.append((i, j))
        else:
            if self.rows[i].pop(j, None) is not None:
                self.cols[j].discard(i)

    def row_op(self, i, k, q):
        """R_i <- R_i - q * R_k."""
        self._tick()
        rows = self.rows
        for j, v in list(rows[k].items()):
            self._set(i, j, rows[i].get(j, 0) - q * v)
        if self.u_rows is not None:
            ui, uk = self.u_rows[i], self.u_rows[k]
            for j, v in uk.items():
                w = ui.get(j, 0) - q * v
                if w:
                    ui[j] = w
                else:
                    ui.pop(j, None)
        if self.uinv_t is not None:
            # Uinv <- Uinv * (I + q e_i e_k^T): column k += q * column i
            tk, ti = self.uinv_t[k], self.uinv_t[i]
            for j, v in ti.items():
                w = tk.get(j, 0) + q * v
                if w:
                    tk[j] = w
                else:
                    tk.pop(j, None)

    def col_op(self, j, k, q):
        """C_j <- C_j - q * C_k."""
        self._tick()
        rows = self.rows
        for i in list(self.cols[k]):
            self._set(i, j, rows[i].get(j, 0) - q * rows[i][k])
        if self.v_t is not None:
            tj, tk = self.v_t[j], self.v_t[k]
            for a, v in tk.items():
                w = tj.get(a, 0) - q * v
                if w:
                    tj[a] = w
                else:
                    tj.pop(a, None)

    def negate_row(self, i):
        row = self.rows[i]
        for j in row:
            row[j] = -row[j]
        if self.u_rows is not None:
            ui = self.u_rows[i]
            for j in ui:
                ui[j] = -ui[j]
        if self.uinv_t is not None:
            ti = self.uinv_t[i]
            for j in ti:
                ti[j] = -ti[j]

    # -- pivoting ---------------------------------------------------------

    def _pick_unit_pivot(self):
        queue = self.unit_queue
        best = None
        examined = 0
        stash = []
        while queue and examined < 48:
            i, j = queue.popleft()
            if self.used_row[i] or self.used_col[j]:
                continue
            v = self.rows[i].get(j)
            if v not in (1, -1):
                continue
            examined += 1
            fill = (len(self.rows[i]) - 1) * (len(self.cols[j]) - 1)
            if best is None or fill < best[0]:
                if best is not None:
                    stash.append(best[1:])
                best = (fill, i, j)
                if fill == 0:
                    break
            else:
                stash.append((i, j))
        queue.extend(stash)
        return None if best is None else (best[1], best[2])

    def _pick_any_pivot(self):
        best = None
        for i, row in enumerate(self.rows):
            if self.used_row[i] or not row:
                continue
            for j, v in row.items():
                key = (abs(v), (len(row) - 1) * (len(self.cols[j]) - 1))
                if best is None or key < best[0]:
                    best = (key, i, j)
        return None if best is None else (best[1], best[2])

    def _clear_pivot(self, pi, pj):
        """Make (pi, pj) the unique nonzero of its row and column.

        The pivot position may migrate while euclidean reduction runs;
        the final resting position is returned.
        """
        rows, cols = self.rows, self.cols
        while True:
            # choose the entry of smallest magnitude in the column as pivot row
            pi = min(cols[pj], key=lambda i: (abs(rows[i][pj]), len(rows[i])))
            v = rows[pi][pj]
            others = [i for i in cols[pj] if i != pi]
            if others:
                for i in others:
                    q = rows[i][pj] // v
                    if q:
                        self.row_op(i, pi, q)
                continue  # re-examine: nonzero remainders may remain
            # column is clean; clear the row
            v = rows[pi][pj]
            dirty_col = None
            for j in [j for j in rows[pi] if j != pj]:
                q = rows[pi][j] // v
                if q:
                    self.col_op(j, pj, q)
                if rows[pi].get(j):
                    dirty_col = j  # remainder smaller than |v|
            if dirty_col is None:
                return pi, pj
            pj = dirty_col  # smaller pivot value; go around again

    def _divisibility_scan(self, pi, pj):
        """Find an entry the pivot fails to divide, or None."""
        v = self.rows[pi][pj]
        if abs(v) == 1:
            return None
        for i, row in enumerate(self.rows):
            if self.used_row[i] or i == pi:
                continue
            for j, w in row.items():
                if w % v:
                    return i
        return None

    def run(self):
        while True:
            pivot = self._pick_unit_pivot() or self._pick_any_pivot()
            if pivot is None:
                break
            pi, pj = pivot
            while True:
                pi, pj = self._clear_pivot(pi, pj)
                bad_row = self._divisibility_scan(pi, pj)
                if bad_row is None:
                    break
                self.row_op(pi, bad_row, -1)  # pull the offending row in
            if self.rows[pi][pj] < 0:
                self.negate_row(pi)
            self.used_row[pi] = True
            self.used_col[pj] = True
            self.pivots.append((pi, pj))
        return self

    # -- results ----------------------------------------------------------

    def diagonal(self):
        return [self.rows[i][j] for i, j in self.pivots]

    def row_order(self):
        order = [i for i, _ in self.pivots]
        order.extend(i for i in range(self.nrows) if not self.used_row[i])
        return order

    def col_order(self):
        order = [j for _, j in self.pivots]
        order.extend(j for j in range(self.ncols) if not self.used_col[j])
        return order


def _matrix_from_rows(nrows, ncols, rows):
    return Matrix(ZZ, nrows, ncols, tuple(dict(r) for r in rows))


def smith_normal_form(A: Matrix, cancel=None):
    """Return (U, D, V) with U * A * V = D, U and V unimodular, and D
    diagonal with d_1 | d_2 | ... >= 0.

    >>> from strataseq.homalg import Matrix, ZZ
    >>> A = Matrix.from_dense(ZZ, [[2, 4], [6, 8]])
    >>> U, D, V = smith_normal_form(A)
    >>> [D[k, k] for k in range(2)]
    [2, 4]
    >>> (U @ A @ V) == D
    True
    """
    if A.ring is not ZZ:
        raise RingMismatch("smith_normal_form requires an integer matrix")
    e = _Eliminator(A.nrows, A.ncols, A.triples(),
                    track_u=True, track_v=True, cancel=cancel).run()
    row_order = e.row_order()
    col_order = e.col_order()
    U = _matrix_from_rows(A.nrows, A.nrows, [e.u_rows[i] for i in row_order])
    # V = (v_t)^T with columns permuted by col_order
    v_rows = [dict() for _ in range(A.ncols)]
    for new_j, old_j in enumerate(col_order):
        for a, v in e.v_t[old_j].items():
            v_rows[a][new_j] = v
    V = _matrix_from_rows(A.ncols, A.ncols, v_rows)
    D = Matrix.diagonal(ZZ, e.diagonal(), nrows=A.nrows, ncols=A.ncols)
    return U, D, V


def snf_diagonal(A: Matrix, cancel=None) -> list:
    """Invariant factors of A (positive, each dividing the next)."""
    if A.ring is not ZZ:
        raise RingMismatch("snf_diagonal requires an integer matrix")
    return _Eliminator(A.nrows, A.ncols, A.triples(), cancel=cancel).run().diagonal()


def integer_rank(A: Matrix, cancel=None) -> int:
    return len(snf_diagonal(A, cancel=cancel))


def integer_kernel_basis(A: Matrix, cancel=None) -> Matrix:
    """Columns form a lattice basis of {x in Z^n : A x = 0}."""
    if A.ring is not ZZ:
        raise RingMismatch("integer kernel requires an integer matrix")
    e = _Eliminator(A.nrows, A.ncols, A.triples(), track_v=True,
                    cancel=cancel).run()
    free_cols = [j for j in range(A.ncols) if not e.used_col[j]]
    cols = []
    for j in free_cols:
        cols.append(dict(e.v_t[j]))
    return Matrix.from_columns(ZZ, A.ncols, cols)


def integer_solve(A: Matrix, b: dict, cancel=None):
    """One integer solution x of A x = b as a sparse dict, or None."""
    e = _Eliminator(A.nrows, A.ncols, A.triples(), track_u=True, track_v=True,
                    cancel=cancel).run()
    # c = U b
    c = {}
    for i in range(A.nrows):
        s = sum(v * b.get(j, 0) for j, v in e.u_rows[i].items())
        if s:
            c[i] = s
    y = {}
    for k, (pi, pj) in enumerate(e.pivots):
        d = e.rows[pi][pj]
        ci = c.pop(pi, 0)
        if ci % d:
            return None
        if ci:
            y[pj] = ci // d
    if c:
        return None  # b has components outside the image
    x = {}
    for pj, yv in y.items():
        for a, v in e.v_t[pj].items():
            w = x.get(a, 0) + v * yv
            if w:
                x[a] = w
            else:
                x.pop(a, None)
    return x


def lattice_basis(ambient_dim: int, generators, cancel=None):
    """Basis of the sublattice of Z^ambient spanned by generator vectors.

    Generators are sparse dicts; returns a list of sparse dicts.
    """
    gens = list(generators)
    triples = [(i, j, v) for j, g in enumerate(gens) for i, v in g.items()]
    G = Matrix.from_triples(ZZ, ambient_dim, len(gens), triples)
    e = _Eliminator(G.nrows, G.ncols, G.triples(), track_uinv=True,
                    cancel=cancel).run()
    # G = Uinv D' Vinv with column lattice spanned by d_k * Uinv e_{pivot row k}
    basis = []
    for pi, pj in e.pivots:
        d = e.rows[pi][pj]
        vec = {}
        for a, v in _uinv_column(e, pi).items():
            vec[a] = d * v
        basis.append(vec)
    return basis


def _uinv_column(e: _Eliminator, i: int) -> dict:
    # uinv_t stores Uinv transposed: row i of uinv_t is column i of Uinv
    return e.uinv_t[i]


def lattice_quotient(ambient_dim: int, big_generators, small_generators,
                     cancel=None):
    """Structure of lattice(big)/lattice(small) as (free_rank, torsion).

    Requires lattice(small) to be contained in lattice(big); raises
    ValueError otherwise.  Torsion coefficients are > 1 and form a
    divisibility chain.
    """
    big = lattice_basis(ambient_dim, big_generators, cancel=cancel)
    if not big:
        if any(g for g in small_generators):
            raise ValueError("small lattice not contained in big lattice")
        return 0, ()
    B = Matrix.from_columns(ZZ, ambient_dim, big)
    rel_cols = []
    for g in small_generators:
        x = integer_solve(B, g, cancel=cancel)
        if x is None:
            raise ValueError("small lattice not contained in big lattice")
        rel_cols.append(x)
    R = Matrix.from_columns(ZZ, len(big), rel_cols)
    diag = snf_diagonal(R, cancel=cancel)
    torsion = tuple(d for d in diag if d > 1)
    return len(big) - len(diag), torsion
