"""Sparse exact matrices acting on column vectors of a fixed ordered basis."""

from __future__ import annotations

from ..errors import RingMismatch
from .rings import Ring, ZZ


class Matrix:
    """An immutable sparse matrix over Z, Q or F_p.

    A Matrix with shape (m, n) represents a map R^n -> R^m on coordinate
    columns; rows[i] maps column index -> nonzero entry.  Mutating the
    row dicts after construction is not supported.
    """

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring: Ring, nrows: int, ncols: int, rows):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows  # tuple of dicts {col: entry}

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, ring: Ring, nrows: int, ncols: int) -> "Matrix":
        return cls(ring, nrows, ncols, tuple({} for _ in range(nrows)))

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        one = ring.one
        return cls(ring, n, n, tuple({i: one} for i in range(n)))

    @classmethod
    def from_rows(cls, ring: Ring, nrows: int, ncols: int, rows) -> "Matrix":
        clean = []
        for r in rows:
            d = {}
            for j, v in r.items():
                v = ring.coerce(v)
                if v:
                    if not 0 <= j < ncols:
                        raise IndexError(f"column {j} out of range")
                    d[j] = v
            clean.append(d)
        if len(clean) != nrows:
            raise ValueError("row count mismatch")
        return cls(ring, nrows, ncols, tuple(clean))

    @classmethod
    def from_dense(cls, ring: Ring, entries) -> "Matrix":
        nrows = len(entries)
        ncols = len(entries[0]) if nrows else 0
        rows = []
        for r in entries:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            rows.append({j: ring.coerce(v) for j, v in enumerate(r) if ring.coerce(v)})
        return cls(ring, nrows, ncols, tuple(rows))

    @classmethod
    def from_triples(cls, ring: Ring, nrows: int, ncols: int, triples) -> "Matrix":
        rows = [dict() for _ in range(nrows)]
        for i, j, v in triples:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i},{j}) out of range")
            v = ring.coerce(rows[i].get(j, 0) + ring.coerce(v))
            if v:
                rows[i][j] = v
            else:
                rows[i].pop(j, None)
        return cls(ring, nrows, ncols, tuple(rows))

    @classmethod
    def diagonal(cls, ring: Ring, entries, nrows=None, ncols=None) -> "Matrix":
        n = len(entries)
        nrows = n if nrows is None else nrows
        ncols = n if ncols is None else ncols
        rows = [dict() for _ in range(nrows)]
        for i, v in enumerate(entries):
            v = ring.coerce(v)
            if v:
                rows[i][i] = v
        return cls(ring, nrows, ncols, tuple(rows))

    # -- basic accessors ------------------------------------------------

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i].get(j, self.ring.zero)

    def triples(self):
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                yield i, j, v

    def sorted_triples(self):
        return [(i, j, v) for i, row in enumerate(self.rows) for j, v in sorted(row.items())]

    def to_dense(self):
        z = self.ring.zero
        out = [[z] * self.ncols for _ in range(self.nrows)]
        for i, j, v in self.triples():
            out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return all(not row for row in self.rows)

    def nnz(self) -> int:
        return sum(len(row) for row in self.rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.ring is other.ring and self.shape == other.shape
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.ring.name, self.nrows, self.ncols,
                     tuple(tuple(sorted(r.items())) for r in self.rows)))

    def __repr__(self):
        return f"Matrix({self.ring}, {self.nrows}x{self.ncols}, nnz={self.nnz()})"

    # -- arithmetic -----------------------------------------------------

    def _check_ring(self, other):
        if self.ring is not other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check_ring(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        norm = self.ring.normalize
        rows = []
        for r1, r2 in zip(self.rows, other.rows):
            d = dict(r1)
            for j, v in r2.items():
                w = norm(d.get(j, 0) + v)
                if w:
                    d[j] = w
                else:
                    d.pop(j, None)
            rows.append(d)
        return Matrix(self.ring, self.nrows, self.ncols, tuple(rows))

    def __neg__(self):
        norm = self.ring.normalize
        rows = tuple({j: norm(-v) for j, v in r.items()} for r in self.rows)
        return Matrix(self.ring, self.nrows, self.ncols, rows)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c):
        c = self.ring.coerce(c)
        if not c:
            return Matrix.zero(self.ring, self.nrows, self.ncols)
        norm = self.ring.normalize
        rows = []
        for r in self.rows:
            d = {}
            for j, v in r.items():
                w = norm(c * v)
                if w:
                    d[j] = w
            rows.append(d)
        return Matrix(self.ring, self.nrows, self.ncols, tuple(rows))

    def __matmul__(self, other):
        if isinstance(other, dict):
            return self.apply(other)
        self._check_ring(other)
        if self.ncols != other.nrows:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        norm = self.ring.normalize
        orows = other.rows
        rows = []
        for r in self.rows:
            acc: dict = {}
            for k, a in r.items():
                for j, b in orows[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            rows.append({j: w for j, v in acc.items() if (w := norm(v))})
        return Matrix(self.ring, self.nrows, other.ncols, tuple(rows))

    def apply(self, vec: dict) -> dict:
        """Apply to a sparse column vector {index: entry}."""
        norm = self.ring.normalize
        acc: dict = {}
        for i, row in enumerate(self.rows):
            s = 0
            for j, a in row.items():
                v = vec.get(j)
                if v:
                    s += a * v
            s = norm(s)
            if s:
                acc[i] = s
        return acc

    # -- structural operations -------------------------------------------

    def transpose(self) -> "Matrix":
        rows = [dict() for _ in range(self.ncols)]
        for i, j, v in self.triples():
            rows[j][i] = v
        return Matrix(self.ring, self.ncols, self.nrows, tuple(rows))

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product; block index (i1, i2) -> i1 * other.nrows + i2."""
        self._check_ring(other)
        norm = self.ring.normalize
        rows = [dict() for _ in range(self.nrows * other.nrows)]
        for i1, j1, a in self.triples():
            for i2, j2, b in other.triples():
                v = norm(a * b)
                if v:
                    rows[i1 * other.nrows + i2][j1 * other.ncols + j2] = v
        return Matrix(self.ring, self.nrows * other.nrows,
                      self.ncols * other.ncols, tuple(rows))

    @staticmethod
    def hstack(mats) -> "Matrix":
        mats = list(mats)
        ring, nrows = mats[0].ring, mats[0].nrows
        rows = [dict() for _ in range(nrows)]
        off = 0
        for m in mats:
            if m.nrows != nrows or m.ring is not ring:
                raise ValueError("hstack mismatch")
            for i, j, v in m.triples():
                rows[i][j + off] = v
            off += m.ncols
        return Matrix(ring, nrows, off, tuple(rows))

    @staticmethod
    def vstack(mats) -> "Matrix":
        mats = list(mats)
        ring, ncols = mats[0].ring, mats[0].ncols
        rows = []
        for m in mats:
            if m.ncols != ncols or m.ring is not ring:
                raise ValueError("vstack mismatch")
            rows.extend(dict(r) for r in m.rows)
        return Matrix(ring, len(rows), ncols, tuple(rows))

    @staticmethod
    def block_diag(ring: Ring, mats) -> "Matrix":
        rows = []
        coff = 0
        for m in mats:
            if m.ring is not ring:
                raise RingMismatch("block_diag ring mismatch")
            for r in m.rows:
                rows.append({j + coff: v for j, v in r.items()})
            coff += m.ncols
        return Matrix(ring, len(rows), coff, tuple(rows))

    def column(self, j: int) -> dict:
        return {i: row[j] for i, row in enumerate(self.rows) if j in row}

    def columns(self):
        cols = [dict() for _ in range(self.ncols)]
        for i, j, v in self.triples():
            cols[j][i] = v
        return cols

    @classmethod
    def from_columns(cls, ring: Ring, nrows: int, cols) -> "Matrix":
        cols = list(cols)
        rows = [dict() for _ in range(nrows)]
        for j, col in enumerate(cols):
            for i, v in col.items():
                v = ring.coerce(v)
                if v:
                    rows[i][j] = v
        return cls(ring, nrows, len(cols), tuple(rows))

    def base_change(self, ring: Ring) -> "Matrix":
        """Push entries into another ring (Z -> Q or Z -> F_p and identities)."""
        if ring is self.ring:
            return self
        if self.ring is not ZZ:
            raise RingMismatch(f"no canonical map {self.ring} -> {ring}")
        rows = []
        for r in self.rows:
            d = {}
            for j, v in r.items():
                w = ring.coerce(v)
                if w:
                    d[j] = w
            rows.append(d)
        return Matrix(ring, self.nrows, self.ncols, tuple(rows))
