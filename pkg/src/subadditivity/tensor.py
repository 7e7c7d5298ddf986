"""Sparse exact tensors and the structural operations on them.

A :class:`SparseTensor` of order ``k`` is a map from multi-indices (one 0-based
coordinate per factor) to nonzero scalars.  Scalars are either all rational
(ring ``"Q"``) or all :class:`~subadditivity.exact.EpsPolynomial` (ring ``"Q[e]"``).

Index conventions are fixed once and used everywhere:

* Kronecker products pair coordinates row-major: ``(i, i') -> i * dim' + i'``.
* Flattening columns enumerate the remaining coordinates row-major.
* ``mamu(m1, m2, m3)`` has its entries at ``((i1,i2), (i2,i3), (i3,i1))`` with
  row-major pair packing.
* A graph tensor's factor ``j`` enumerates the coordinates of the edges containing
  ``j`` row-major, in the order the edges are listed.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .exact import EpsPolynomial, as_fraction, format_scalar, parse_poly, parse_rational

Index = tuple[int, ...]

RING_Q = "Q"
RING_QE = "Q[e]"


def _check_shape(shape) -> tuple[int, ...]:
    shape = tuple(int(d) for d in shape)
    if not shape:
        raise ValueError("a tensor needs at least one factor")
    if any(d < 1 for d in shape):
        raise ValueError(f"all dimensions must be positive, got {shape}")
    return shape


class SparseTensor:
    """Immutable sparse tensor over Q or Q[e]."""

    __slots__ = ("shape", "ring", "_entries")

    def __init__(self, shape: Sequence[int], entries: Mapping[Index, object] | Iterable = (), ring: str | None = None):
        self.shape = _check_shape(shape)
        items = entries.items() if isinstance(entries, Mapping) else entries
        raw = []
        has_poly = False
        for idx, val in items:
            idx = tuple(int(i) for i in idx)
            if len(idx) != len(self.shape):
                raise ValueError(f"index {idx} does not match order {len(self.shape)}")
            if any(not 0 <= i < d for i, d in zip(idx, self.shape)):
                raise ValueError(f"index {idx} out of range for shape {self.shape}")
            if isinstance(val, EpsPolynomial):
                has_poly = True
            else:
                val = as_fraction(val)
            raw.append((idx, val))
        if ring is None:
            ring = RING_QE if has_poly else RING_Q
        if ring not in (RING_Q, RING_QE):
            raise ValueError(f"unknown scalar ring {ring!r}")
        if ring == RING_Q and has_poly:
            raise TypeError("polynomial entry in a rational tensor")
        self.ring = ring
        acc: dict[Index, object] = {}
        for idx, val in raw:
            if ring == RING_QE:
                val = EpsPolynomial.coerce(val)
            prev = acc.get(idx)
            acc[idx] = val if prev is None else prev + val
        self._entries = {i: v for i, v in acc.items() if v}

    @classmethod
    def _raw(cls, shape, entries: dict, ring: str) -> "SparseTensor":
        t = cls.__new__(cls)
        t.shape = shape
        t.ring = ring
        t._entries = entries
        return t

    @property
    def order(self) -> int:
        return len(self.shape)

    @property
    def entries(self) -> Mapping[Index, object]:
        return MappingProxyType(self._entries)

    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, idx) -> object:
        zero = EpsPolynomial() if self.ring == RING_QE else Fraction(0)
        return self._entries.get(tuple(idx), zero)

    def __eq__(self, other):
        if not isinstance(other, SparseTensor):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    __hash__ = None

    def __repr__(self):
        return f"SparseTensor(shape={self.shape}, nnz={self.nnz()}, ring={self.ring!r})"

    # -- ring helpers -------------------------------------------------------
    def is_rational(self) -> bool:
        return self.ring == RING_Q

    def as_poly(self) -> "SparseTensor":
        if self.ring == RING_QE:
            return self
        return SparseTensor._raw(
            self.shape, {i: EpsPolynomial.constant(v) for i, v in self._entries.items()}, RING_QE
        )

    def coefficient(self, d: int) -> "SparseTensor":
        """The rational tensor of ``e**d`` coefficients."""
        if self.ring == RING_Q:
            return self if d == 0 else SparseTensor(self.shape)
        out = {}
        for i, p in self._entries.items():
            c = p.coefficient(d)
            if c:
                out[i] = c
        return SparseTensor._raw(self.shape, out, RING_Q)

    def max_degree(self) -> int:
        if self.ring == RING_Q:
            return 0 if self._entries else -1
        return max((p.degree() for p in self._entries.values()), default=-1)

    def __add__(self, other: "SparseTensor") -> "SparseTensor":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        ring = RING_QE if RING_QE in (self.ring, other.ring) else RING_Q
        a = self.as_poly() if ring == RING_QE else self
        b = other.as_poly() if ring == RING_QE else other
        acc = dict(a._entries)
        for i, v in b._entries.items():
            prev = acc.get(i)
            acc[i] = v if prev is None else prev + v
        return SparseTensor._raw(self.shape, {i: v for i, v in acc.items() if v}, ring)

    def __neg__(self) -> "SparseTensor":
        return SparseTensor._raw(self.shape, {i: -v for i, v in self._entries.items()}, self.ring)

    def __sub__(self, other: "SparseTensor") -> "SparseTensor":
        return self + (-other)

    def scale(self, c) -> "SparseTensor":
        if isinstance(c, EpsPolynomial):
            t = self.as_poly()
            return SparseTensor._raw(
                self.shape, {i: v * c for i, v in t._entries.items() if v * c}, RING_QE
            )
        c = as_fraction(c)
        if not c:
            return SparseTensor(self.shape, ring=self.ring)
        return SparseTensor._raw(self.shape, {i: v * c for i, v in self._entries.items()}, self.ring)

    def embed(self, shape: Sequence[int], offsets: Sequence[int] | None = None) -> "SparseTensor":
        """Place this tensor inside a larger shape, shifted by ``offsets``."""
        shape = _check_shape(shape)
        if len(shape) != self.order:
            raise ValueError("order mismatch")
        offsets = tuple(offsets) if offsets is not None else (0,) * self.order
        for d, o, big in zip(self.shape, offsets, shape):
            if o + d > big:
                raise ValueError(f"cannot embed shape {self.shape} at {offsets} into {shape}")
        out = {tuple(i + o for i, o in zip(idx, offsets)): v for idx, v in self._entries.items()}
        return SparseTensor._raw(shape, out, self.ring)


# -- named tensors ------------------------------------------------------------

def unit_tensor(k: int, r: int) -> SparseTensor:
    """The order-``k`` diagonal tensor with ``r`` ones."""
    if k < 1 or r < 1:
        raise ValueError("unit_tensor needs k >= 1 and r >= 1")
    return SparseTensor((r,) * k, {(i,) * k: 1 for i in range(r)})


def mamu(m1: int, m2: int, m3: int) -> SparseTensor:
    """Matrix multiplication tensor of shape ``(m1*m2, m2*m3, m3*m1)``."""
    if min(m1, m2, m3) < 1:
        raise ValueError("matrix sizes must be positive")
    entries = {}
    for i1 in range(m1):
        for i2 in range(m2):
            for i3 in range(m3):
                entries[(i1 * m2 + i2, i2 * m3 + i3, i3 * m1 + i1)] = 1
    return SparseTensor((m1 * m2, m2 * m3, m3 * m1), entries)


def w_state() -> SparseTensor:
    """``e001 + e010 + e100`` in C^2 x C^2 x C^2."""
    return SparseTensor((2, 2, 2), {(0, 0, 1): 1, (0, 1, 0): 1, (1, 0, 0): 1})


@dataclass(frozen=True)
class Hypergraph:
    """Weighted hypergraph on vertices ``1..vertex_count``.

    ``edges`` is a sequence of ``(vertices, weight)`` pairs; the listed order fixes
    how the graph tensor enumerates each factor.
    """

    vertex_count: int
    edges: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("need at least one vertex")
        clean = []
        for verts, weight in self.edges:
            verts = tuple(sorted(set(int(v) for v in verts)))
            if not verts:
                raise ValueError("hyperedges must be nonempty")
            if verts[0] < 1 or verts[-1] > self.vertex_count:
                raise ValueError(f"hyperedge {verts} not within 1..{self.vertex_count}")
            if int(weight) < 1:
                raise ValueError("edge weights must be >= 1")
            clean.append((verts, int(weight)))
        object.__setattr__(self, "edges", tuple(clean))

    def with_weights(self, weights: Sequence[int]) -> "Hypergraph":
        return Hypergraph(self.vertex_count, tuple((v, w) for (v, _), w in zip(self.edges, weights)))

    def power(self, n: int) -> "Hypergraph":
        return self.with_weights([w**n for _, w in self.edges])

    def factor_dims(self) -> tuple[int, ...]:
        return tuple(
            math.prod(w for verts, w in self.edges if j in verts) for j in range(1, self.vertex_count + 1)
        )


def triangle(n12: int, n23: int, n31: int) -> Hypergraph:
    return Hypergraph(3, (((1, 2), n12), ((2, 3), n23), ((3, 1), n31)))


def spider(leg_weights: Sequence[int]) -> Hypergraph:
    """Star on ``len(leg_weights) + 1`` vertices; the center is the last vertex."""
    k = len(leg_weights) + 1
    return Hypergraph(k, tuple(((j + 1, k), w) for j, w in enumerate(leg_weights)))


def edge_tensor(k: int, verts: Sequence[int], weight: int) -> SparseTensor:
    shape = tuple(weight if j in verts else 1 for j in range(1, k + 1))
    return SparseTensor(shape, {tuple(i if j in verts else 0 for j in range(1, k + 1)): 1 for i in range(weight)})


def graph_tensor(g: Hypergraph) -> SparseTensor:
    """Kronecker product of the edge unit tensors, edges taken in listed order."""
    out = SparseTensor((1,) * g.vertex_count, {(0,) * g.vertex_count: 1})
    for verts, weight in g.edges:
        out = kronecker(out, edge_tensor(g.vertex_count, verts, weight))
    return out


# -- structural operations ----------------------------------------------------

def _common_ring(t: SparseTensor, s: SparseTensor) -> str:
    return RING_QE if RING_QE in (t.ring, s.ring) else RING_Q


def direct_sum(t: SparseTensor, s: SparseTensor) -> SparseTensor:
    if t.order != s.order:
        raise ValueError(f"order mismatch: {t.order} vs {s.order}")
    ring = _common_ring(t, s)
    t = t.as_poly() if ring == RING_QE else t
    s = s.as_poly() if ring == RING_QE else s
    shape = tuple(a + b for a, b in zip(t.shape, s.shape))
    out = dict(t._entries)
    for idx, v in s._entries.items():
        out[tuple(i + o for i, o in zip(idx, t.shape))] = v
    return SparseTensor._raw(shape, out, ring)


def kronecker(t: SparseTensor, s: SparseTensor) -> SparseTensor:
    if t.order != s.order:
        raise ValueError(f"order mismatch: {t.order} vs {s.order}")
    ring = _common_ring(t, s)
    t = t.as_poly() if ring == RING_QE else t
    s = s.as_poly() if ring == RING_QE else s
    shape = tuple(a * b for a, b in zip(t.shape, s.shape))
    ds = s.shape
    out = {}
    for i1, v1 in t._entries.items():
        for i2, v2 in s._entries.items():
            out[tuple(a * d + b for a, b, d in zip(i1, i2, ds))] = v1 * v2
    return SparseTensor._raw(shape, out, ring)


def kronecker_power(t: SparseTensor, n: int) -> SparseTensor:
    if n < 1:
        raise ValueError("power must be >= 1")
    out = t
    for _ in range(n - 1):
        out = kronecker(out, t)
    return out


# -- matrices and rank --------------------------------------------------------

class Matrix:
    """Sparse rational matrix stored as a list of ``{column: value}`` rows."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Sequence[Mapping[int, object]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimension")
        self.rows, self.cols = rows, cols
        if data is None:
            data = [{} for _ in range(rows)]
        if len(data) != rows:
            raise ValueError("row count mismatch")
        clean = []
        for row in data:
            r = {}
            for c, v in row.items():
                if not 0 <= c < cols:
                    raise ValueError(f"column {c} out of range")
                v = as_fraction(v)
                if v:
                    r[c] = v
            clean.append(r)
        self.data = clean

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[object]]) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), ncols, [{c: v for c, v in enumerate(r) if v} for r in rows])

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for i, row in enumerate(self.data):
            for c, v in row.items():
                out[i][c] = v
        return out

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"


def _integer_row(row: Mapping[int, Fraction]) -> dict[int, int]:
    den = math.lcm(*(v.denominator for v in row.values())) if row else 1
    out = {c: int(v * den) for c, v in row.items()}
    g = math.gcd(*out.values()) if out else 1
    return {c: v // g for c, v in out.items()} if g > 1 else out


def integer_row_rank(rows: Iterable[Mapping[int, int]]) -> int:
    """Rank over Q of integer sparse rows by fraction-free elimination."""
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for row in rows:
        r = dict(row)
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                pivots[c] = r
                rank += 1
                break
            a, b = p[c], r[c]
            merged = {k: a * v for k, v in r.items()}
            for k, v in p.items():
                nv = merged.get(k, 0) - b * v
                if nv:
                    merged[k] = nv
                else:
                    merged.pop(k, None)
            g = math.gcd(*merged.values()) if merged else 1
            r = {k: v // g for k, v in merged.items()} if g > 1 else merged
    return rank


def matrix_rank(m: Matrix) -> int:
    return integer_row_rank(_integer_row(row) for row in m.data)


def flattening(t: SparseTensor, mode: int) -> Matrix:
    """Rows are the ``mode`` coordinate; columns the other coordinates row-major."""
    if t.ring != RING_Q:
        raise TypeError("flattening requires a rational tensor")
    if not 0 <= mode < t.order:
        raise ValueError(f"mode {mode} out of range for order {t.order}")
    rest = [d for j, d in enumerate(t.shape) if j != mode]
    ncols = math.prod(rest)
    data = [{} for _ in range(t.shape[mode])]
    for idx, v in t._entries.items():
        col = 0
        for j, (i, d) in enumerate(zip(idx, t.shape)):
            if j != mode:
                col = col * d + i
        data[idx[mode]][col] = v
    return Matrix(t.shape[mode], ncols, data)


def flattening_rank(t: SparseTensor, mode: int) -> int:
    return matrix_rank(flattening(t, mode))


def is_concise(t: SparseTensor) -> bool:
    return all(flattening_rank(t, j) == t.shape[j] for j in range(t.order))


def border_rank_lower_bound(t: SparseTensor) -> int:
    """Largest flattening rank; border rank is at least this."""
    return max(flattening_rank(t, j) for j in range(t.order))


# -- relabelings --------------------------------------------------------------

def _check_bijection(m: Sequence[int], n: int) -> None:
    if len(m) != n or sorted(m) != list(range(n)):
        raise ValueError(f"index map is not a bijection of range({n})")


def equal_up_to_bijection(
    t: SparseTensor,
    s: SparseTensor,
    maps: Sequence[Sequence[int]],
    factor_perm: Sequence[int] | None = None,
) -> bool:
    """Whether relabeling ``t`` coordinate-wise by ``maps`` gives ``s``.

    ``maps[j][i]`` is the image of coordinate ``i`` of factor ``j`` of ``t``; the image
    lives in factor ``factor_perm[j]`` of ``s`` (identity permutation by default).
    """
    if t.order != s.order or len(maps) != t.order:
        raise ValueError("order mismatch")
    perm = list(range(t.order)) if factor_perm is None else list(factor_perm)
    if sorted(perm) != list(range(t.order)):
        raise ValueError("factor_perm is not a permutation")
    for j in range(t.order):
        if t.shape[j] != s.shape[perm[j]]:
            raise ValueError(f"factor {j} of dim {t.shape[j]} cannot map onto dim {s.shape[perm[j]]}")
        _check_bijection(maps[j], t.shape[j])
    if t.nnz() != s.nnz():
        return False
    for idx, v in t._entries.items():
        image = [0] * t.order
        for j, i in enumerate(idx):
            image[perm[j]] = maps[j][i]
        if s._entries.get(tuple(image)) != v:
            return False
    return True


def relabel(t: SparseTensor, maps: Sequence[Sequence[int]], factor_perm: Sequence[int] | None = None) -> SparseTensor:
    perm = list(range(t.order)) if factor_perm is None else list(factor_perm)
    shape = [0] * t.order
    for j in range(t.order):
        _check_bijection(maps[j], t.shape[j])
        shape[perm[j]] = t.shape[j]
    out = {}
    for idx, v in t._entries.items():
        image = [0] * t.order
        for j, i in enumerate(idx):
            image[perm[j]] = maps[j][i]
        out[tuple(image)] = v
    return SparseTensor._raw(tuple(shape), out, t.ring)


def identity_maps(shape: Sequence[int]) -> list[list[int]]:
    return [list(range(d)) for d in shape]


def triangle_to_mamu_maps(n12: int, n23: int, n31: int) -> tuple[list[int], list[list[int]]]:
    """Relabeling taking ``graph_tensor(triangle(n12, n23, n31))`` to ``mamu(n12, n23, n31)``.

    Vertex 2 becomes factor 1 of mamu, vertex 3 factor 2 and vertex 1 factor 3;
    vertex 1 stores ``(i12, i31)`` while mamu's third factor stores ``(i31, i12)``.
    """
    perm = [2, 0, 1]
    m1 = [i31 * n12 + i12 for i12 in range(n12) for i31 in range(n31)]
    m2 = list(range(n12 * n23))
    m3 = list(range(n23 * n31))
    return perm, [m1, m2, m3]


def graph_power_maps(g: Hypergraph, n: int) -> list[list[int]]:
    """Relabeling taking ``graph_tensor(g)^{boxtimes n}`` to ``graph_tensor(g.power(n))``."""
    maps = []
    for j in range(1, g.vertex_count + 1):
        weights = [w for verts, w in g.edges if j in verts]
        dim = math.prod(weights)
        images = []
        for kron_idx in range(dim**n):
            # split into n copies (most significant first), each copy row-major over edges
            copies = []
            rem = kron_idx
            for _ in range(n):
                copies.append(rem % dim)
                rem //= dim
            copies.reverse()
            digits = [_unrank(c, weights) for c in copies]
            target = 0
            for e, w in enumerate(weights):
                coord = 0
                for copy in digits:
                    coord = coord * w + copy[e]
                target = target * w**n + coord
            images.append(target)
        maps.append(images)
    return maps


def _unrank(i: int, dims: Sequence[int]) -> list[int]:
    out = []
    for d in reversed(dims):
        out.append(i % d)
        i //= d
    return out[::-1]


def mamu_kron_maps(a: Sequence[int], b: Sequence[int]) -> list[list[int]]:
    """Relabeling taking ``mamu(*a) ⊠ mamu(*b)`` to ``mamu(a1*b1, a2*b2, a3*b3)``."""
    pairs = [(0, 1), (1, 2), (2, 0)]
    maps = []
    for x, y in pairs:
        ax, ay, bx, by = a[x], a[y], b[x], b[y]
        images = []
        for idx in range(ax * ay * bx * by):
            ia, ib = divmod(idx, bx * by)
            ix, iy = divmod(ia, ay)
            jx, jy = divmod(ib, by)
            images.append((ix * bx + jx) * (ay * by) + (iy * by + jy))
        maps.append(images)
    return maps


def binomial_maps(d1: Sequence[int], d2: Sequence[int]) -> list[list[int]]:
    """Block relabeling of ``(t1 ⊕ t2)^{⊠2}`` onto ``t1⊠t1 ⊕ t1⊠t2 ⊕ t2⊠t1 ⊕ t2⊠t2``."""
    maps = []
    for a, b in zip(d1, d2):
        n = a + b
        images = []
        for idx in range(n * n):
            x, y = divmod(idx, n)
            if x < a and y < a:
                images.append(x * a + y)
            elif x < a:
                images.append(a * a + x * b + (y - a))
            elif y < a:
                images.append(a * a + a * b + (x - a) * a + y)
            else:
                images.append(a * a + 2 * a * b + (x - a) * b + (y - a))
        maps.append(images)
    return maps


def binomial_expand_check(t1: SparseTensor, t2: SparseTensor, N: int = 2) -> bool:
    """Check ``(t1 ⊕ t2)^{⊠2}`` against its four-block binomial expansion."""
    if N != 2:
        raise ValueError("only N = 2 is supported")
    if t1.order != t2.order:
        raise ValueError("order mismatch")
    s = direct_sum(t1, t2)
    lhs = kronecker(s, s)
    rhs = direct_sum(
        direct_sum(kronecker(t1, t1), kronecker(t1, t2)),
        direct_sum(kronecker(t2, t1), kronecker(t2, t2)),
    )
    return equal_up_to_bijection(lhs, rhs, binomial_maps(t1.shape, t2.shape))


# -- text format --------------------------------------------------------------

def dump_tensor(t: SparseTensor) -> str:
    lines = [
        f"order {t.order}",
        "dims " + " ".join(str(d) for d in t.shape),
        f"scalar-ring {t.ring}",
    ]
    for idx in sorted(t._entries):
        lines.append(" ".join(str(i) for i in idx) + " : " + format_scalar(t._entries[idx]))
    return "\n".join(lines) + "\n"


def parse_tensor(text: str) -> SparseTensor:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 3:
        raise ValueError("truncated tensor dump")
    head = [ln.split(None, 1) for ln in lines[:3]]
    if [h[0] for h in head] != ["order", "dims", "scalar-ring"]:
        raise ValueError("bad tensor dump header")
    k = int(head[0][1])
    shape = tuple(int(x) for x in head[1][1].split())
    ring = head[2][1].strip()
    if len(shape) != k:
        raise ValueError("order does not match dims")
    entries = {}
    for ln in lines[3:]:
        left, _, right = ln.partition(" : ")
        idx = tuple(int(x) for x in left.split())
        entries[idx] = parse_poly(right) if ring == RING_QE else parse_rational(right)
    return SparseTensor(shape, entries, ring=ring)


def all_indices(shape: Sequence[int]):
    return itertools.product(*(range(d) for d in shape))
