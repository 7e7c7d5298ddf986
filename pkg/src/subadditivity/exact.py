"""Exact scalars: rationals and univariate polynomials in the degeneration parameter.

Rationals are :class:`fractions.Fraction`.  Polynomials in ``e`` (the epsilon of a
degeneration ``T = lim T_e``) are :class:`EpsPolynomial`, a sparse map from degree to
nonzero rational coefficient.  Both are immutable.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Fraction
Scalar = Union[Fraction, "EpsPolynomial"]

INFINITY = math.inf


class ConstructionError(ArithmeticError):
    """An exact identity that a construction relies on does not hold."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating-point scalars are not allowed in exact arithmetic")
    return Fraction(x)


def format_rational(q: Fraction) -> str:
    """``num/den``, with the denominator omitted when it is 1."""
    return str(q)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    if "." in text or "e" in text.lower():
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text)


class EpsPolynomial:
    """Polynomial in ``e`` with rational coefficients.

    Zero coefficients are never stored; the zero polynomial has no terms.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for deg, c in items:
            if deg < 0:
                raise ValueError("negative degree")
            c = as_fraction(c)
            if c:
                acc[deg] = acc.get(deg, Fraction(0)) + c
        self._terms = {d: c for d, c in sorted(acc.items()) if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, Fraction]) -> "EpsPolynomial":
        # caller guarantees: sorted keys, no zero values
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c) -> "EpsPolynomial":
        return cls({0: c})

    @classmethod
    def monomial(cls, deg: int, c=1) -> "EpsPolynomial":
        return cls({deg: c})

    @classmethod
    def coerce(cls, x) -> "EpsPolynomial":
        if isinstance(x, EpsPolynomial):
            return x
        return cls.constant(x)

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> int:
        """Highest degree with a nonzero coefficient; -1 for the zero polynomial."""
        return max(self._terms) if self._terms else -1

    def valuation(self):
        """Order of vanishing at ``e = 0``; ``math.inf`` for the zero polynomial."""
        return min(self._terms) if self._terms else INFINITY

    def coefficient(self, d: int) -> Fraction:
        return self._terms.get(d, Fraction(0))

    def leading_coefficient(self) -> Fraction:
        return self._terms[self.degree()] if self._terms else Fraction(0)

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {0}

    def evaluate(self, x) -> Fraction:
        x = as_fraction(x)
        return sum((c * x**d for d, c in self._terms.items()), Fraction(0))

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        acc = dict(self._terms)
        for d, c in other._terms.items():
            v = acc.get(d)
            acc[d] = c if v is None else v + c
        return EpsPolynomial._raw({d: c for d, c in sorted(acc.items()) if c})

    __radd__ = __add__

    def __neg__(self):
        return EpsPolynomial._raw({d: -c for d, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return EpsPolynomial._raw({d: c * other for d, c in self._terms.items()})
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        acc: dict[int, Fraction] = {}
        for d1, c1 in self._terms.items():
            for d2, c2 in other._terms.items():
                d = d1 + d2
                v = acc.get(d)
                acc[d] = c1 * c2 if v is None else v + c1 * c2
        return EpsPolynomial._raw({d: c for d, c in sorted(acc.items()) if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift_up(self, d: int) -> "EpsPolynomial":
        """Multiply by ``e**d``."""
        if d < 0:
            raise ValueError("negative shift")
        return EpsPolynomial._raw({k + d: c for k, c in self._terms.items()})

    def shift_down(self, d: int) -> "EpsPolynomial":
        """Divide by ``e**d``; the polynomial must vanish to order at least ``d``."""
        if d < 0:
            raise ValueError("negative shift")
        if self._terms and min(self._terms) < d:
            raise ConstructionError(
                f"cannot divide {self} by e^{d}: valuation is {min(self._terms)}"
            )
        return EpsPolynomial._raw({k - d: c for k, c in self._terms.items()})

    def divmod(self, other: "EpsPolynomial") -> tuple["EpsPolynomial", "EpsPolynomial"]:
        """Euclidean division over the rationals."""
        other = EpsPolynomial.coerce(other)
        if not other._terms:
            raise ZeroDivisionError("division by the zero polynomial")
        dv, lc = other.degree(), other.leading_coefficient()
        rem = dict(self._terms)
        quo: dict[int, Fraction] = {}
        while rem:
            top = max(rem)
            if top < dv:
                break
            c = rem[top] / lc
            shift = top - dv
            quo[shift] = c
            for d, oc in other._terms.items():
                k = d + shift
                v = rem.get(k, Fraction(0)) - c * oc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return EpsPolynomial(quo), EpsPolynomial(rem)

    def exact_div(self, other: "EpsPolynomial") -> "EpsPolynomial":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    # -- comparison / hashing ----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, EpsPolynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({0: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    # -- text ---------------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"EpsPolynomial({format_poly(self)!r})"


def _coerce_or_none(x):
    if isinstance(x, EpsPolynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return EpsPolynomial.constant(x)
    return None


ZERO = EpsPolynomial()
ONE = EpsPolynomial({0: 1})
EPS = EpsPolynomial({1: 1})


def poly_arith(a: EpsPolynomial, b: EpsPolynomial, op: str) -> EpsPolynomial:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def valuation(p: EpsPolynomial):
    return p.valuation()


def coefficient(p: EpsPolynomial, d: int) -> Fraction:
    return p.coefficient(d)


def shift_down(p: EpsPolynomial, d: int) -> EpsPolynomial:
    return p.shift_down(d)


def format_poly(p: EpsPolynomial) -> str:
    """Render as ``c0 + c1*e + c2*e^2``; zero terms omitted, ``0`` for zero."""
    if not p._terms:
        return "0"
    parts = []
    for d, c in p._terms.items():
        if d == 0:
            parts.append(format_rational(c))
        elif d == 1:
            parts.append(f"{format_rational(c)}*e")
        else:
            parts.append(f"{format_rational(c)}*e^{d}")
    return " + ".join(parts)


def parse_poly(text: str) -> EpsPolynomial:
    text = text.strip()
    if text == "0":
        return ZERO
    terms: dict[int, Fraction] = {}
    for chunk in text.split(" + "):
        chunk = chunk.strip()
        if "*e" in chunk:
            coef, _, power = chunk.partition("*e")
            if power == "":
                deg = 1
            elif power.startswith("^"):
                deg = int(power[1:])
            else:
                raise ValueError(f"bad polynomial term {chunk!r}")
        else:
            coef, deg = chunk, 0
        if deg in terms:
            raise ValueError(f"repeated degree {deg} in {text!r}")
        terms[deg] = parse_rational(coef)
    return EpsPolynomial(terms)


def format_scalar(x) -> str:
    if isinstance(x, EpsPolynomial):
        return format_poly(x)
    return format_rational(as_fraction(x))
