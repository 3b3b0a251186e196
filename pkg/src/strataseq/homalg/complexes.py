"""Bounded cochain complexes of finite-rank free modules and their cohomology.

Complexes are strictly bounded with explicit support; outside the support
every degree has rank zero.  Matrices act on coordinate columns of the
canonical ordered basis fixed at construction.  A degree may carry an
optional tuple of integer weight tags, one per basis vector.
"""

from __future__ import annotations

from ..errors import InvalidComplex, NotADoubleComplex, RingMismatch
from . import field
from .matrix import Matrix
from .rings import Ring, ZZ
from .snf import snf_diagonal


def _factorint(n: int) -> dict:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factor_chain(values) -> tuple:
    """Canonicalize a multiset of moduli > 1 into a divisibility chain.

    >>> invariant_factor_chain([4, 2, 3])
    (2, 12)
    """
    exps: dict = {}
    for v in values:
        if v <= 1:
            raise ValueError("torsion coefficients must be > 1")
        for p, e in _factorint(v).items():
            exps.setdefault(p, []).append(e)
    for p in exps:
        exps[p].sort(reverse=True)
    depth = max((len(v) for v in exps.values()), default=0)
    chain = []
    for k in range(depth):
        d = 1
        for p, es in exps.items():
            if k < len(es):
                d *= p ** es[k]
        chain.append(d)
    return tuple(reversed(chain))


class GradedModule:
    """A finitely generated graded abelian group (or graded vector space).

    Per degree: a free rank, a divisibility chain of torsion coefficients,
    and optionally a weight tag per free generator.
    """

    __slots__ = ("ranks", "torsion", "weights", "weights_dropped")

    def __init__(self, ranks=None, torsion=None, weights=None,
                 weights_dropped=False):
        self.ranks = {k: r for k, r in (ranks or {}).items() if r}
        self.torsion = {k: tuple(t) for k, t in (torsion or {}).items() if t}
        for t in self.torsion.values():
            for a, b in zip(t, t[1:]):
                if a <= 1 or b % a:
                    raise ValueError(f"not a divisibility chain: {t}")
        if weights is not None:
            weights = {k: tuple(w) for k, w in weights.items() if w}
            for k, w in weights.items():
                if len(w) != self.ranks.get(k, 0):
                    raise ValueError("weights must partition the free rank")
        self.weights = weights
        self.weights_dropped = weights_dropped

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def free(cls, ranks, weights=None):
        return cls(ranks=ranks, weights=weights)

    def degrees(self):
        return sorted(set(self.ranks) | set(self.torsion))

    def rank(self, k: int) -> int:
        return self.ranks.get(k, 0)

    def torsion_at(self, k: int) -> tuple:
        return self.torsion.get(k, ())

    def weight_counts(self, k: int) -> dict:
        out: dict = {}
        for w in (self.weights or {}).get(k, ()):
            out[w] = out.get(w, 0) + 1
        return out

    def is_zero(self) -> bool:
        return not self.ranks and not self.torsion

    def is_free(self) -> bool:
        return not self.torsion

    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def euler(self) -> int:
        return sum((-1) ** k * r for k, r in self.ranks.items())

    def euler_by_weight(self) -> dict:
        out: dict = {}
        for k in self.ranks:
            counts = self.weight_counts(k)
            if not counts and self.rank(k):
                counts = {0: self.rank(k)}
            for w, c in counts.items():
                out[w] = out.get(w, 0) + (-1) ** k * c
        return {w: v for w, v in out.items() if v}

    def shift(self, n: int) -> "GradedModule":
        return GradedModule(
            ranks={k + n: r for k, r in self.ranks.items()},
            torsion={k + n: t for k, t in self.torsion.items()},
            weights=None if self.weights is None
            else {k + n: w for k, w in self.weights.items()},
            weights_dropped=self.weights_dropped)

    def forget_weights(self) -> "GradedModule":
        return GradedModule(ranks=self.ranks, torsion=self.torsion)

    def __eq__(self, other):
        if not isinstance(other, GradedModule):
            return NotImplemented
        return (self.ranks == other.ranks and self.torsion == other.torsion
                and self.weights == other.weights)

    def __hash__(self):
        return hash((tuple(sorted(self.ranks.items())),
                     tuple(sorted(self.torsion.items()))))

    def describe(self, k: int) -> str:
        parts = []
        r = self.rank(k)
        if r == 1:
            parts.append("Z")
        elif r:
            parts.append(f"Z^{r}")
        parts.extend(f"Z/{t}" for t in self.torsion_at(k))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        body = ", ".join(f"{k}: {self.describe(k)}" for k in self.degrees())
        return f"GradedModule({{{body}}})"


class CochainComplex:
    """A bounded complex with differentials d_k : C^k -> C^{k+1}."""

    __slots__ = ("ring", "ranks", "diffs", "weights")

    def __init__(self, ring: Ring, ranks, diffs, weights=None):
        self.ring = ring
        self.ranks = {k: r for k, r in ranks.items() if r}
        clean = {}
        for k, m in diffs.items():
            if m is None or m.is_zero():
                continue
            if m.ring is not ring:
                raise RingMismatch("differential over wrong ring")
            if m.shape != (self.rank(k + 1), self.rank(k)):
                raise InvalidComplex(
                    f"d_{k} has shape {m.shape}, expected "
                    f"({self.rank(k + 1)}, {self.rank(k)})")
            clean[k] = m
        self.diffs = clean
        if weights is not None:
            weights = {k: tuple(w) for k, w in weights.items()
                       if self.rank(k)}
            for k, w in weights.items():
                if len(w) != self.rank(k):
                    raise InvalidComplex(f"degree {k}: {len(w)} weight tags "
                                         f"for rank {self.rank(k)}")
        self.weights = weights

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, ring: Ring) -> "CochainComplex":
        return cls(ring, {}, {})

    @classmethod
    def free_in_degree(cls, ring: Ring, degree: int, rank: int = 1,
                       weights=None) -> "CochainComplex":
        w = None if weights is None else {degree: tuple(weights)}
        return cls(ring, {degree: rank}, {}, weights=w)

    # -- accessors ---------------------------------------------------------

    def rank(self, k: int) -> int:
        return self.ranks.get(k, 0)

    def degrees(self):
        return sorted(self.ranks)

    @property
    def support(self):
        if not self.ranks:
            return None
        return (min(self.ranks), max(self.ranks))

    def differential(self, k: int) -> Matrix:
        m = self.diffs.get(k)
        if m is None:
            m = Matrix.zero(self.ring, self.rank(k + 1), self.rank(k))
        return m

    def weight_tags(self, k: int):
        if self.weights is None:
            return None
        return self.weights.get(k, (0,) * self.rank(k)) if self.rank(k) else ()

    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def euler(self) -> int:
        return sum((-1) ** k * r for k, r in self.ranks.items())

    def euler_by_weight(self) -> dict:
        out: dict = {}
        for k, r in self.ranks.items():
            tags = self.weight_tags(k) or (0,) * r
            for w in tags:
                out[w] = out.get(w, 0) + (-1) ** k
        return {w: v for w, v in out.items() if v}

    def __eq__(self, other):
        if not isinstance(other, CochainComplex):
            return NotImplemented
        return (self.ring is other.ring and self.ranks == other.ranks
                and self.diffs == other.diffs and self.weights == other.weights)

    def __repr__(self):
        rk = ", ".join(f"{k}:{r}" for k, r in sorted(self.ranks.items()))
        return f"CochainComplex({self.ring}, ranks={{{rk}}})"

    def check(self):
        """Verify d o d = 0; raise InvalidComplex otherwise."""
        for k in self.diffs:
            if k + 1 in self.diffs:
                if not (self.diffs[k + 1] @ self.diffs[k]).is_zero():
                    raise InvalidComplex(f"d_{k + 1} o d_{k} != 0")
        return self

    def is_weight_homogeneous(self) -> bool:
        if self.weights is None:
            return False
        for k, m in self.diffs.items():
            src = self.weight_tags(k)
            dst = self.weight_tags(k + 1)
            for i, j, _ in m.triples():
                if src[j] != dst[i]:
                    return False
        return True

    # -- operations ---------------------------------------------------------

    def shift(self, n: int) -> "CochainComplex":
        """Translate the rank table up by n; differentials pick up (-1)^n."""
        sign = 1 if n % 2 == 0 else -1
        diffs = {k + n: (m if sign == 1 else m.scaled(-1))
                 for k, m in self.diffs.items()}
        return CochainComplex(
            self.ring, {k + n: r for k, r in self.ranks.items()}, diffs,
            weights=None if self.weights is None
            else {k + n: w for k, w in self.weights.items()})

    def base_change(self, ring: Ring) -> "CochainComplex":
        if ring is self.ring:
            return self
        if self.ring is not ZZ:
            raise RingMismatch(f"no canonical map {self.ring} -> {ring}")
        return CochainComplex(
            ring, dict(self.ranks),
            {k: m.base_change(ring) for k, m in self.diffs.items()},
            weights=self.weights)

    def dual(self) -> "CochainComplex":
        """The degreewise dual, with Hom(C^k, R) placed in degree -k."""
        ranks = {-k: r for k, r in self.ranks.items()}
        diffs = {}
        for k, m in self.diffs.items():
            # d_k : C^k -> C^{k+1} dualizes to degree -(k+1) -> -k
            diffs[-(k + 1)] = m.transpose()
        weights = None
        if self.weights is not None:
            weights = {-k: tuple(-x for x in w) for k, w in self.weights.items()}
        return CochainComplex(self.ring, ranks, diffs, weights=weights)

    def direct_sum(self, other: "CochainComplex") -> "CochainComplex":
        if other.ring is not self.ring:
            raise RingMismatch("direct sum over different rings")
        ranks = dict(self.ranks)
        for k, r in other.ranks.items():
            ranks[k] = ranks.get(k, 0) + r
        diffs = {}
        for k in set(self.diffs) | set(other.diffs):
            blocks = []
            a, b = self.differential(k), other.differential(k)
            m = Matrix.zero(self.ring, self.rank(k + 1) + other.rank(k + 1),
                            self.rank(k) + other.rank(k))
            rows = [dict(r) for r in m.rows]
            for i, j, v in a.triples():
                rows[i][j] = v
            for i, j, v in b.triples():
                rows[i + self.rank(k + 1)][j + self.rank(k)] = v
            diffs[k] = Matrix(self.ring, m.nrows, m.ncols, tuple(rows))
        weights = None
        if self.weights is not None and other.weights is not None:
            weights = {}
            for k in set(ranks):
                if ranks.get(k):
                    weights[k] = tuple(self.weight_tags(k) or ()) + \
                        tuple(other.weight_tags(k) or ())
        return CochainComplex(self.ring, ranks, diffs, weights=weights)

    def tensor_with_layout(self, other: "CochainComplex"):
        """Tensor product with Koszul signs plus the basis layout.

        Returns (complex, layout) where layout[n] lists (i, a, b): the
        basis vector a (x) b with a in degree i of self and b in degree
        n - i of other, in block order by ascending i.
        """
        if other.ring is not self.ring:
            raise RingMismatch("tensor over different rings")
        layout: dict = {}
        for i in self.degrees():
            for j in other.degrees():
                n = i + j
                block = layout.setdefault(n, [])
                for a in range(self.rank(i)):
                    for b in range(other.rank(j)):
                        block.append((i, a, b))
        index = {n: {t: pos for pos, t in enumerate(blk)}
                 for n, blk in layout.items()}
        ranks = {n: len(blk) for n, blk in layout.items()}
        rows: dict = {n: [dict() for _ in range(len(layout.get(n + 1, ())))]
                      for n in ranks}
        norm = self.ring.normalize
        for n, blk in layout.items():
            tgt = index.get(n + 1)
            if tgt is None:
                continue
            for pos, (i, a, b) in enumerate(blk):
                dA = self.diffs.get(i)
                if dA is not None:
                    for i2, v in dA.column(a).items():
                        t = tgt.get((i + 1, i2, b))
                        if t is not None:
                            rows[n][t][pos] = v
                dB = other.diffs.get(n - i)
                if dB is not None:
                    sign = 1 if i % 2 == 0 else -1
                    for j2, v in dB.column(b).items():
                        t = tgt.get((i, a, j2))
                        if t is not None:
                            rows[n][t][pos] = norm(sign * v)
        diffs = {n: Matrix(self.ring, len(layout.get(n + 1, ())), ranks[n],
                           tuple(rows[n]))
                 for n in ranks if layout.get(n + 1)}
        weights = None
        if self.weights is not None and other.weights is not None:
            weights = {}
            for n, blk in layout.items():
                wa = {i: self.weight_tags(i) for i in self.degrees()}
                wb = {j: other.weight_tags(j) for j in other.degrees()}
                weights[n] = tuple(wa[i][a] + wb[n - i][b] for i, a, b in blk)
        return CochainComplex(self.ring, ranks, diffs, weights=weights), layout

    def tensor(self, other: "CochainComplex") -> "CochainComplex":
        return self.tensor_with_layout(other)[0]


class ChainMap:
    """A degreewise map of complexes commuting with the differentials."""

    __slots__ = ("source", "target", "mats")

    def __init__(self, source: CochainComplex, target: CochainComplex, mats):
        if source.ring is not target.ring:
            raise RingMismatch("chain map between different rings")
        self.source = source
        self.target = target
        self.mats = {}
        for k, m in mats.items():
            if m is None or m.is_zero():
                continue
            if m.shape != (target.rank(k), source.rank(k)):
                raise InvalidComplex(
                    f"component {k} has shape {m.shape}, expected "
                    f"({target.rank(k)}, {source.rank(k)})")
            self.mats[k] = m

    @classmethod
    def identity(cls, c: CochainComplex) -> "ChainMap":
        return cls(c, c, {k: Matrix.identity(c.ring, r)
                          for k, r in c.ranks.items()})

    @classmethod
    def zero(cls, source: CochainComplex, target: CochainComplex) -> "ChainMap":
        return cls(source, target, {})

    def component(self, k: int) -> Matrix:
        m = self.mats.get(k)
        if m is None:
            m = Matrix.zero(self.source.ring, self.target.rank(k),
                            self.source.rank(k))
        return m

    def check(self):
        """Verify commutation with the differentials."""
        for k in set(self.source.ranks) | set(self.mats):
            lhs = self.target.differential(k) @ self.component(k)
            rhs = self.component(k + 1) @ self.source.differential(k)
            if lhs != rhs:
                raise InvalidComplex(f"chain map fails to commute in degree {k}")
        return self

    def compose(self, inner: "ChainMap") -> "ChainMap":
        """self o inner."""
        mats = {}
        for k in set(self.mats) | set(inner.mats):
            mats[k] = self.component(k) @ inner.component(k)
        return ChainMap(inner.source, self.target, mats)

    def is_zero(self) -> bool:
        return not self.mats

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and all(self.component(k) == other.component(k)
                        for k in set(self.mats) | set(other.mats)))

    def tensor(self, other: "ChainMap") -> "ChainMap":
        """(f (x) g) on the tensor complexes; f, g are degree-0 maps."""
        src, src_layout = self.source.tensor_with_layout(other.source)
        tgt, tgt_layout = self.target.tensor_with_layout(other.target)
        tgt_index = {n: {t: pos for pos, t in enumerate(blk)}
                     for n, blk in tgt_layout.items()}
        norm = src.ring.normalize
        mats = {}
        for n, blk in src_layout.items():
            if n not in tgt_index:
                continue
            rows = [dict() for _ in range(tgt.rank(n))]
            for pos, (i, a, b) in enumerate(blk):
                fa = self.component(i).column(a)
                gb = other.component(n - i).column(b)
                for a2, va in fa.items():
                    for b2, vb in gb.items():
                        t = tgt_index[n].get((i, a2, b2))
                        if t is not None:
                            w = norm(va * vb)
                            if w:
                                rows[t][pos] = w
            mats[n] = Matrix(src.ring, tgt.rank(n), src.rank(n), tuple(rows))
        return ChainMap(src, tgt, mats)


# -- cohomology -------------------------------------------------------------


def cohomology(c: CochainComplex, cancel=None) -> GradedModule:
    """Cohomology as a graded module; integral torsion via Smith normal form.

    Weight tags propagate when every differential is weight-homogeneous;
    otherwise they are dropped and the result is flagged.
    """
    c.check()
    if c.weights is not None:
        if c.is_weight_homogeneous():
            return _weighted_cohomology(c, cancel)
        plain = cohomology(
            CochainComplex(c.ring, c.ranks, c.diffs), cancel=cancel)
        return GradedModule(plain.ranks, plain.torsion, weights_dropped=True)
    ranks: dict = {}
    torsion: dict = {}
    dim_ranks = {}
    for k in c.diffs:
        m = c.diffs[k]
        if c.ring is ZZ:
            diag = snf_diagonal(m, cancel=cancel)
            dim_ranks[k] = len(diag)
            tors = tuple(d for d in diag if d > 1)
            if tors:
                torsion[k + 1] = tors
        else:
            dim_ranks[k] = field.rank_of(m)
    for k in c.degrees():
        r = c.rank(k) - dim_ranks.get(k, 0) - dim_ranks.get(k - 1, 0)
        if r:
            ranks[k] = r
    return GradedModule(ranks, torsion)


def _weighted_cohomology(c: CochainComplex, cancel=None) -> GradedModule:
    by_weight: dict = {}
    for k in c.degrees():
        for idx, w in enumerate(c.weight_tags(k)):
            by_weight.setdefault(w, {}).setdefault(k, []).append(idx)
    ranks: dict = {}
    torsion: dict = {}
    weights: dict = {}
    for w in sorted(by_weight):
        sel = by_weight[w]
        sub_ranks = {k: len(ix) for k, ix in sel.items()}
        sub_diffs = {}
        for k, m in c.diffs.items():
            if k not in sel or (k + 1) not in sel:
                continue
            src_pos = {orig: new for new, orig in enumerate(sel[k])}
            dst_pos = {orig: new for new, orig in enumerate(sel[k + 1])}
            triples = [(dst_pos[i], src_pos[j], v) for i, j, v in m.triples()
                       if i in dst_pos and j in src_pos]
            sub_diffs[k] = Matrix.from_triples(
                c.ring, len(sel[k + 1]), len(sel[k]), triples)
        part = cohomology(CochainComplex(c.ring, sub_ranks, sub_diffs),
                          cancel=cancel)
        for k, r in part.ranks.items():
            ranks[k] = ranks.get(k, 0) + r
            weights.setdefault(k, []).extend([w] * r)
        for k, t in part.torsion.items():
            torsion.setdefault(k, []).extend(t)
    torsion = {k: invariant_factor_chain(t) for k, t in torsion.items()}
    weights = {k: tuple(v) for k, v in weights.items()}
    return GradedModule(ranks, torsion, weights=weights)


# -- module-level operation wrappers ----------------------------------------


def tensor_complex(a: CochainComplex, b: CochainComplex) -> CochainComplex:
    return a.tensor(b)


def shift(c: CochainComplex, n: int) -> CochainComplex:
    return c.shift(n)


def base_change(c: CochainComplex, ring: Ring) -> CochainComplex:
    return c.base_change(ring)


def dualize_complex(c: CochainComplex) -> CochainComplex:
    return c.dual()


def borel_moore_dual(h: GradedModule, reference=None) -> GradedModule:
    """Borel-Moore homology from compact-support cohomology.

    Degree i of the result holds H_i^BM = Hom(H_c^i, Z) + Ext(H_c^{i+1}, Z).
    The reference argument is accepted for interface compatibility and
    ignored.
    """
    ranks = dict(h.ranks)
    torsion = {k - 1: t for k, t in h.torsion.items()}
    return GradedModule(ranks, torsion)


def total_complex(columns, horizontal):
    """Totalize a double complex given as columns and horizontal chain maps.

    columns[p] is a cochain complex (the p-th column, vertical degree q);
    horizontal[p] : columns[p] -> columns[p+1] must commute with the
    verticals and compose to zero.  The standard sign twist (-1)^p is
    applied to the vertical differential of column p.  Returns a
    FilteredComplex filtered by column index (decreasing).
    """
    from ..specseq import FilteredComplex

    columns = list(columns)
    horizontal = list(horizontal)
    if not columns:
        raise InvalidComplex("totalization of an empty column list")
    ring = columns[0].ring
    if len(horizontal) != max(0, len(columns) - 1):
        raise NotADoubleComplex(
            f"expected {len(columns) - 1} horizontal maps, "
            f"got {len(horizontal)}")
    for p, h in enumerate(horizontal):
        if h.source != columns[p]:
            raise NotADoubleComplex(f"map {p} has wrong source")
        if h.target != columns[p + 1]:
            raise NotADoubleComplex(f"map {p} has wrong target")
        try:
            h.check()
        except InvalidComplex as exc:
            raise NotADoubleComplex(
                f"horizontal map {p} -> {p + 1} does not commute with the "
                f"verticals: {exc}") from None
    for p in range(len(horizontal) - 1):
        comp = horizontal[p + 1].compose(horizontal[p])
        for k, m in comp.mats.items():
            if not m.is_zero():
                raise NotADoubleComplex(
                    f"horizontal composite {p} -> {p + 2} nonzero in "
                    f"vertical degree {k}")
    layout: dict = {}
    for p, col in enumerate(columns):
        for q in col.degrees():
            n = p + q
            blk = layout.setdefault(n, [])
            for idx in range(col.rank(q)):
                blk.append((p, q, idx))
    index = {n: {t: pos for pos, t in enumerate(blk)}
             for n, blk in layout.items()}
    ranks = {n: len(blk) for n, blk in layout.items()}
    rows = {n: [dict() for _ in range(len(layout.get(n + 1, ())))]
            for n in ranks}
    norm = ring.normalize
    for n, blk in layout.items():
        tgt = index.get(n + 1)
        if tgt is None:
            continue
        for pos, (p, q, idx) in enumerate(blk):
            sign = 1 if p % 2 == 0 else -1
            for i2, v in columns[p].differential(q).column(idx).items():
                t = tgt.get((p, q + 1, i2))
                if t is not None:
                    rows[n][t][pos] = norm(sign * v)
            if p < len(horizontal):
                for i2, v in horizontal[p].component(q).column(idx).items():
                    t = tgt.get((p + 1, q, i2))
                    if t is not None:
                        rows[n][t][pos] = v
    diffs = {n: Matrix(ring, len(layout.get(n + 1, ())), ranks[n],
                       tuple(rows[n]))
             for n in ranks if layout.get(n + 1)}
    tot = CochainComplex(ring, ranks, diffs)
    levels = {n: [p for p, _, _ in blk] for n, blk in layout.items()}
    fc = FilteredComplex.from_basis_levels(tot, levels)
    fc.layout = layout
    return fc
