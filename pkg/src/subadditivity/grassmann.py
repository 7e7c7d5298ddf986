"""Limits of spans of epsilon-dependent vectors.

A border-rank witness is a family of rank-one tensors ``Z_1(e), ..., Z_r(e)``
(with one factor of the target removed).  The target's flattening image must lie
in the limit of their span as ``e -> 0``.  :func:`limit_span` computes that limit
exactly by valuation-pivoted elimination and :func:`verify_span_limit_witness`
checks the containment.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact import ConstructionError, EpsPolynomial, format_poly, parse_poly
from .tensor import SparseTensor, flattening

RationalVector = dict[int, Fraction]


class DependentFamilyError(ValueError):
    """The family is linearly dependent over Q(e)."""


class IterationGuardError(RuntimeError):
    """The span-limit elimination did not terminate within its bound."""


class EpsVector:
    """Sparse vector of fixed length with :class:`EpsPolynomial` entries."""

    __slots__ = ("length", "entries")

    def __init__(self, length: int, entries: Mapping[int, object] | None = None):
        if length < 1:
            raise ValueError("vector length must be positive")
        self.length = length
        clean = {}
        for c, v in (entries or {}).items():
            if not 0 <= c < length:
                raise ValueError(f"coordinate {c} out of range for length {length}")
            v = EpsPolynomial.coerce(v)
            if v:
                clean[c] = v
        self.entries = clean

    @classmethod
    def basis(cls, length: int, i: int) -> "EpsVector":
        return cls(length, {i: 1})

    def __add__(self, other: "EpsVector") -> "EpsVector":
        if self.length != other.length:
            raise ValueError("length mismatch")
        acc = dict(self.entries)
        for c, v in other.entries.items():
            acc[c] = acc[c] + v if c in acc else v
        return EpsVector(self.length, acc)

    def __neg__(self):
        return EpsVector(self.length, {c: -v for c, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "EpsVector":
        return EpsVector(self.length, {k: v * c for k, v in self.entries.items()})

    def valuation(self):
        return min((v.valuation() for v in self.entries.values()), default=math.inf)

    def max_degree(self) -> int:
        return max((v.degree() for v in self.entries.values()), default=-1)

    def shift_down(self, d: int) -> "EpsVector":
        return EpsVector(self.length, {c: v.shift_down(d) for c, v in self.entries.items()})

    def coefficient(self, d: int) -> RationalVector:
        out = {}
        for c, v in self.entries.items():
            x = v.coefficient(d)
            if x:
                out[c] = x
        return out

    def evaluate(self, x) -> RationalVector:
        out = {}
        for c, v in self.entries.items():
            y = v.evaluate(x)
            if y:
                out[c] = y
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, EpsVector):
            return NotImplemented
        return self.length == other.length and self.entries == other.entries

    __hash__ = None

    def __repr__(self):
        return f"EpsVector({self.length}, {format_vector(self)!r})"


@dataclass(frozen=True)
class RankOneEpsTensor:
    factors: tuple[EpsVector, ...]

    def __init__(self, factors: Iterable[EpsVector]):
        object.__setattr__(self, "factors", tuple(factors))
        if not self.factors:
            raise ValueError("a rank-one tensor needs at least one factor")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(f.length for f in self.factors)

    def at_zero(self) -> tuple[RationalVector, ...]:
        return tuple(f.coefficient(0) for f in self.factors)


@dataclass
class SpanFamily:
    ambient_dim: int
    vectors: list[EpsVector]

    def __post_init__(self):
        for v in self.vectors:
            if v.length != self.ambient_dim:
                raise ValueError("vector length does not match the ambient dimension")

    def __len__(self):
        return len(self.vectors)


def expand_rank_one(z: RankOneEpsTensor, shape: Sequence[int] | None = None) -> EpsVector:
    """Row-major flattened outer product of the factors."""
    if shape is not None and tuple(shape) != z.shape:
        raise ValueError(f"factor lengths {z.shape} do not match shape {tuple(shape)}")
    length = math.prod(z.shape)
    acc: dict[int, EpsPolynomial] = {0: EpsPolynomial.constant(1)}
    for f in z.factors:
        nxt = {}
        for c, v in acc.items():
            for k, w in f.entries.items():
                nxt[c * f.length + k] = v * w
        acc = nxt
    return EpsVector(length, acc)


def expand_rank_one_tensor(z: RankOneEpsTensor) -> SparseTensor:
    """The rank-one tensor itself as a sparse tensor over Q[e]."""
    acc: dict[tuple, EpsPolynomial] = {(): EpsPolynomial.constant(1)}
    for f in z.factors:
        acc = {idx + (k,): v * w for idx, v in acc.items() for k, w in f.entries.items()}
    return SparseTensor(z.shape, acc, ring="Q[e]")


def sum_rank_one(terms: Iterable[RankOneEpsTensor], shape: Sequence[int]) -> SparseTensor:
    acc: dict[tuple, EpsPolynomial] = {}
    for z in terms:
        if z.shape != tuple(shape):
            raise ValueError("rank-one term shape mismatch")
        part = {(): EpsPolynomial.constant(1)}
        for f in z.factors:
            part = {idx + (k,): v * w for idx, v in part.items() for k, w in f.entries.items()}
        for idx, v in part.items():
            acc[idx] = acc[idx] + v if idx in acc else v
    return SparseTensor(shape, acc, ring="Q[e]")


# -- rational elimination -----------------------------------------------------

class _Echelon:
    """Incremental row echelon form over Q with combination tracking.

    Each stored row has a pivot column absent from every other stored row.
    """

    def __init__(self):
        self.rows: dict[int, tuple[RationalVector, dict[int, Fraction]]] = {}

    def reduce(self, vec: RationalVector, combo: dict[int, Fraction] | None = None):
        vec = dict(vec)
        combo = dict(combo or {})
        for col in [c for c in vec if c in self.rows]:
            x = vec.get(col)
            if not x:
                continue
            prow, pcombo = self.rows[col]
            f = x / prow[col]
            for k, v in prow.items():
                nv = vec.get(k, 0) - f * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
            for k, v in pcombo.items():
                nv = combo.get(k, 0) - f * v
                if nv:
                    combo[k] = nv
                else:
                    combo.pop(k, None)
        return vec, combo

    def add(self, vec: RationalVector, combo: dict[int, Fraction] | None = None) -> bool:
        """Reduce and insert; returns False when ``vec`` was already in the span."""
        vec, combo = self.reduce(vec, combo)
        if not vec:
            return False
        col = min(vec)
        p = vec[col]
        vec = {k: v / p for k, v in vec.items()}
        combo = {k: v / p for k, v in combo.items()}
        for other_col, (orow, ocombo) in list(self.rows.items()):
            x = orow.get(col)
            if x:
                nrow = dict(orow)
                for k, v in vec.items():
                    nv = nrow.get(k, 0) - x * v
                    if nv:
                        nrow[k] = nv
                    else:
                        nrow.pop(k, None)
                ncombo = dict(ocombo)
                for k, v in combo.items():
                    nv = ncombo.get(k, 0) - x * v
                    if nv:
                        ncombo[k] = nv
                    else:
                        ncombo.pop(k, None)
                self.rows[other_col] = (nrow, ncombo)
        self.rows[col] = (vec, combo)
        return True

    def __len__(self):
        return len(self.rows)


def _as_rational_vector(v) -> RationalVector:
    if isinstance(v, Mapping):
        return {int(c): Fraction(x) for c, x in v.items() if x}
    return {c: Fraction(x) for c, x in enumerate(v) if x}


def rational_rank(vectors: Iterable) -> int:
    ech = _Echelon()
    for v in vectors:
        ech.add(_as_rational_vector(v))
    return len(ech)


def membership(v, basis: Sequence) -> bool:
    """Whether ``v`` lies in the Q-span of ``basis``."""
    ech = _Echelon()
    for b in basis:
        ech.add(_as_rational_vector(b))
    vec, _ = ech.reduce(_as_rational_vector(v))
    return not vec


# -- generic rank -------------------------------------------------------------

def _bareiss_rank(vectors: Sequence[EpsVector]) -> int:
    """Fraction-free elimination over Q[e] with column skipping."""
    rows = [dict(v.entries) for v in vectors if v.entries]
    prev = EpsPolynomial.constant(1)
    rank = 0
    cols = sorted({c for r in rows for c in r})
    for col in cols:
        piv = next((i for i in range(rank, len(rows)) if col in rows[i]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        pval = prow[col]
        for i in range(rank + 1, len(rows)):
            r = rows[i]
            x = r.get(col)
            keys = set(r) | set(prow)
            new = {}
            for k in keys:
                val = pval * r.get(k, EpsPolynomial()) - (x * prow[k] if x and k in prow else EpsPolynomial())
                if val:
                    new[k] = val.exact_div(prev)
            rows[i] = new
        prev = pval
        rank += 1
        if rank == len(rows):
            break
    return rank


def generic_rank(family: SpanFamily | Sequence[EpsVector], seed: int = 0) -> int:
    """Rank of the family over the field of rational functions in ``e``.

    A full-rank evaluation at a random rational point certifies full generic
    rank; otherwise the exact polynomial elimination decides.
    """
    vectors = family.vectors if isinstance(family, SpanFamily) else list(family)
    if not vectors:
        return 0
    rng = random.Random(seed)
    x = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))
    if rational_rank(v.evaluate(x) for v in vectors) == len(vectors):
        return len(vectors)
    return _bareiss_rank(vectors)


# -- limit span ---------------------------------------------------------------

def _combine(vectors: Sequence[EpsVector], combo: Mapping[int, Fraction]) -> EpsVector:
    length = vectors[0].length
    acc: dict[int, EpsPolynomial] = {}
    for j, c in combo.items():
        for k, v in vectors[j].entries.items():
            t = v * c
            acc[k] = acc[k] + t if k in acc else t
    return EpsVector(length, acc)


def limit_span(family: SpanFamily | Sequence[EpsVector]) -> list[RationalVector]:
    """Q-basis of the limit of the span as ``e -> 0``.

    Vectors are normalized to valuation 0 and scanned in order.  When the
    leading vector of vector ``i`` depends on the earlier leading vectors, vector
    ``i`` is replaced by the vanishing combination divided by the largest power of
    ``e`` it contains, and the scan resumes at ``i``.
    """
    vectors = list(family.vectors if isinstance(family, SpanFamily) else family)
    r = len(vectors)
    if r == 0:
        return []
    for i, v in enumerate(vectors):
        if v.is_zero():
            raise DependentFamilyError(f"vector {i} is zero")
        vectors[i] = v.shift_down(v.valuation())
    max_deg = max(v.max_degree() for v in vectors)
    guard = r * (1 + max_deg)
    replacements = 0
    ech = _Echelon()
    i = 0
    while i < r:
        lead = vectors[i].coefficient(0)
        if ech.add(lead, {i: Fraction(1)}):
            i += 1
            continue
        _, combo = ech.reduce(lead, {i: Fraction(1)})
        new = _combine(vectors, combo)
        if new.is_zero():
            raise DependentFamilyError(f"vector {i} is dependent on earlier vectors over Q(e)")
        replacements += 1
        if replacements > guard:
            raise IterationGuardError(f"more than {guard} replacements in limit_span")
        vectors[i] = new.shift_down(new.valuation())
    return [ech.rows[c][0] for c in sorted(ech.rows)]


# -- witness verification -----------------------------------------------------

@dataclass(frozen=True)
class WitnessReport:
    family_size: int
    generic_rank_ok: bool
    contained: bool
    implied_border_rank_upper: int


def flattening_image(target: SparseTensor, mode: int) -> list[RationalVector]:
    m = flattening(target, mode)
    return [row for row in m.data if row]


def verify_span_limit_witness(
    target: SparseTensor, family: Sequence[RankOneEpsTensor], mode: int, seed: int = 0
) -> WitnessReport:
    if not target.is_rational():
        raise TypeError("target must have rational entries")
    if not 0 <= mode < target.order:
        raise ValueError(f"mode {mode} out of range")
    rest = tuple(d for j, d in enumerate(target.shape) if j != mode)
    vectors = [expand_rank_one(z, rest) for z in family]
    size = len(vectors)
    if generic_rank(vectors, seed=seed) < size:
        return WitnessReport(size, False, False, size)
    basis = limit_span(vectors)
    ech = _Echelon()
    for b in basis:
        ech.add(b)
    contained = all(not ech.reduce(row)[0] for row in flattening_image(target, mode))
    return WitnessReport(size, True, contained, size)


# -- witness file format ------------------------------------------------------

def format_vector(v: EpsVector) -> str:
    return ",".join(f"{c}:{format_poly(p)}" for c, p in sorted(v.entries.items()))


def parse_vector(text: str, length: int) -> EpsVector:
    text = text.strip()
    if not text:
        return EpsVector(length)
    entries = {}
    for chunk in text.split(","):
        coord, _, poly = chunk.partition(":")
        c = int(coord)
        if c in entries:
            raise ValueError(f"repeated coordinate {c}")
        entries[c] = parse_poly(poly)
    return EpsVector(length, entries)


def dump_witness(family: Sequence[RankOneEpsTensor], shape: Sequence[int], mode: int) -> str:
    lines = [
        "ambient-shape " + " ".join(str(d) for d in shape),
        f"mode {mode}",
        f"size {len(family)}",
    ]
    for z in family:
        if z.shape != tuple(shape):
            raise ValueError("family element does not match the ambient shape")
        lines.append(";".join(format_vector(f) for f in z.factors))
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> tuple[tuple[int, ...], int, list[RankOneEpsTensor]]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 3:
        raise ValueError("truncated witness file")
    key0, _, dims = lines[0].partition(" ")
    key1, _, mode = lines[1].partition(" ")
    key2, _, size = lines[2].partition(" ")
    if (key0, key1, key2) != ("ambient-shape", "mode", "size"):
        raise ValueError("bad witness header")
    shape = tuple(int(x) for x in dims.split())
    body = lines[3:]
    if len(body) != int(size):
        raise ValueError(f"witness declares {size} elements but has {len(body)}")
    family = []
    for line in body:
        parts = line.split(";")
        if len(parts) != len(shape):
            raise ValueError("wrong number of factors in witness line")
        family.append(RankOneEpsTensor(parse_vector(p, d) for p, d in zip(parts, shape)))
    return shape, int(mode), family


__all__ = [
    "ConstructionError",
    "DependentFamilyError",
    "EpsVector",
    "IterationGuardError",
    "RankOneEpsTensor",
    "SpanFamily",
    "WitnessReport",
    "dump_witness",
    "expand_rank_one",
    "expand_rank_one_tensor",
    "flattening_image",
    "generic_rank",
    "limit_span",
    "membership",
    "parse_witness",
    "rational_rank",
    "sum_rank_one",
    "verify_span_limit_witness",
]
