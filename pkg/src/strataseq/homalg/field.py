"""Incremental exact row reduction over Q or F_p.

The Echelon class keeps a fully reduced basis (RREF rows) and can track,
for every stored row, the combination of inserted vectors that produced
it.  Kernels, ranks, membership tests and coordinate solves are all thin
wrappers around it.  Vectors are sparse dicts {index: scalar}.
"""

from __future__ import annotations

from ..errors import NotAField
from .matrix import Matrix
from .rings import Ring


class Echelon:
    """Row echelon accumulator over an exact field."""

    def __init__(self, ring: Ring, track: bool = False):
        if not ring.is_field:
            raise NotAField(f"{ring} is not a field")
        self.ring = ring
        self.track = track
        self.pivot_rows: dict = {}   # pivot col -> row dict (pivot entry = 1)
        self.combos: dict = {}       # pivot col -> combo dict (if tracking)
        self.n_inserted = 0

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    def _axpy(self, dst: dict, c, src: dict):
        norm = self.ring.normalize
        for j, v in src.items():
            w = norm(dst.get(j, 0) + c * v)
            if w:
                dst[j] = w
            else:
                dst.pop(j, None)

    def reduce(self, vec: dict):
        """Return (residual, cum) with vec = residual + sum cum[k] * inserted_k.

        cum is None unless tracking is on.
        """
        ring = self.ring
        res = {j: ring.coerce(v) for j, v in vec.items() if ring.coerce(v)}
        cum: dict = {} if self.track else None
        while True:
            hit = next((j for j in res if j in self.pivot_rows), None)
            if hit is None:
                return res, cum
            c = res[hit]
            self._axpy(res, ring.normalize(-c), self.pivot_rows[hit])
            if self.track:
                self._axpy(cum, c, self.combos[hit])

    def _store(self, res: dict, cum):
        """Count one insertion; store the residual if it is independent."""
        k = self.n_inserted
        self.n_inserted += 1
        if not res:
            return None
        ring = self.ring
        piv = min(res)
        inv = ring.inv(res[piv])
        row = {j: ring.normalize(inv * v) for j, v in res.items()}
        if self.track:
            combo = {k: ring.coerce(inv)}
            self._axpy(combo, ring.normalize(-inv), cum or {})
        else:
            combo = None
        # keep the basis fully reduced
        for pc in list(self.pivot_rows):
            prow = self.pivot_rows[pc]
            c = prow.get(piv)
            if c:
                self._axpy(prow, ring.normalize(-c), row)
                if self.track:
                    self._axpy(self.combos[pc], ring.normalize(-c), combo)
        self.pivot_rows[piv] = row
        if self.track:
            self.combos[piv] = combo
        return piv

    def insert(self, vec: dict):
        """Insert a vector; return its pivot column, or None if dependent."""
        res, cum = self.reduce(vec)
        return self._store(res, cum)

    def membership(self, vec: dict):
        """Coefficients expressing vec in the inserted vectors, or None.

        Does not count as an insertion.
        """
        res, cum = self.reduce(vec)
        if res:
            return None
        return cum if cum is not None else {}


def rank_of(mat: Matrix) -> int:
    ech = Echelon(mat.ring)
    for col in mat.columns():
        ech.insert(col)
    return ech.rank


def kernel_basis(mat: Matrix):
    """Sparse basis vectors of {x : mat @ x = 0} over the field of mat."""
    ech = Echelon(mat.ring, track=True)
    out = []
    one = mat.ring.one
    norm = mat.ring.normalize
    for j, col in enumerate(mat.columns()):
        res, cum = ech.reduce(col)
        if not res:
            vec = {j: one}
            for k, c in cum.items():
                w = norm(-c)
                if w:
                    vec[k] = w
            out.append(vec)
        ech._store(res, cum)
    return out


def solve_in_span(vectors, target: dict, ring: Ring):
    """Coefficients c with sum c[i] * vectors[i] = target, or None."""
    ech = Echelon(ring, track=True)
    for v in vectors:
        ech.insert(v)
    return ech.membership(target)
