"""Exponent upper bounds from border-rank bounds on direct sums.

If ``T1 + T2`` has border rank at most ``r`` then the mixed Kronecker power
``T1^p x T2^(1-p)`` has exponent at most ``log r - h(p)``.  The functions below
evaluate this for the tensor families that the constructions feed, next to the
trivial bound read off the graph weights.  All logarithms are base 2.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

FAMILIES = ("ext_mamu", "multi_emamu_fixed_d", "multi_emamu_p_of_d", "dome")
PARAM_NAMES = {
    "ext_mamu": ("n3", "n4"),
    "multi_emamu_fixed_d": ("d", "n", "p"),
    "multi_emamu_p_of_d": ("d", "n", "p"),
    "dome": ("n", "p"),
}
P_STEP = 0.005


@dataclass(frozen=True)
class BoundPoint:
    family: str
    params: tuple[tuple[str, float], ...]
    omega_triv: float
    omega_sch: float

    @property
    def delta(self) -> float:
        return self.omega_triv - self.omega_sch

    def param(self, name: str):
        return dict(self.params)[name]


def _check_p(p: float, closed: bool = False) -> None:
    if not (0 <= p <= 1 if closed else 0 < p < 1):
        raise ValueError(f"p = {p} outside {'[0, 1]' if closed else '(0, 1)'}")


def binary_entropy(p: float) -> float:
    _check_p(p, closed=True)
    if p == 0 or p == 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def entropy_bound(r: float, p: float) -> float:
    if r < 1:
        raise ValueError("r must be at least 1")
    return math.log2(r) - binary_entropy(p)


def schonhage_ratio(n1: int, n2: int, p: float) -> float:
    """Square matrix multiplication exponent bound at mixing weight ``p``."""
    r = (n1 + 1) * (n2 + 1) + 1
    den = p * math.log2((n1 + 1) * (n2 + 1)) + (1 - p) * math.log2(n1 * n2)
    return 3 * (math.log2(r) - binary_entropy(p)) / den


def _ternary(f, lo: float, hi: float, tol: float) -> float:
    while hi - lo > tol:
        a = lo + (hi - lo) / 3
        b = hi - (hi - lo) / 3
        if f(a) <= f(b):
            hi = b
        else:
            lo = a
    return (lo + hi) / 2


def schonhage_omega(n1: int, n2: int, step: float = 1e-4, tol: float = 1e-7) -> tuple[float, float]:
    """Minimize :func:`schonhage_ratio` over ``p`` in (0, 1); returns ``(p*, omega*)``."""
    if n1 < 2 or n2 < 2:
        raise ValueError("n1, n2 must be at least 2")
    count = round(1 / step)
    best_i = min(range(1, count), key=lambda i: schonhage_ratio(n1, n2, i * step))
    lo = max(step * (best_i - 1), step / 2)
    hi = min(step * (best_i + 1), 1 - step / 2)
    p = _ternary(lambda x: schonhage_ratio(n1, n2, x), lo, hi, tol)
    return p, schonhage_ratio(n1, n2, p)


def _point(family, names, values, triv, sch) -> BoundPoint:
    return BoundPoint(family, tuple(zip(names, values)), triv, sch)


def ext_mamu_bounds(n3: int, n4: int) -> BoundPoint:
    if n3 < 2:
        raise ValueError("n3 must be at least 2")
    if n4 < 4:
        raise ValueError("n4 must be at least 4 (n4 = 3 makes p vanish)")
    a = n4 - 2
    p = math.log2(a) / (math.log2(n3) + math.log2(a))
    sch = (math.log2(4 * (a + 2) + 1) - binary_entropy(p)) / p
    triv = 2 + math.log2(n3) + math.log2(n4)
    return _point("ext_mamu", ("n3", "n4"), (n3, n4), triv, sch)


def _multi_size(d: int, n: int) -> int:
    return n**d + 2 * n ** (d - 1) + n**2 * (n + 1) ** (d - 3) + 1


def multi_emamu_bounds(d: int, n: int, p: float, family: str = "multi_emamu_fixed_d") -> BoundPoint:
    if d < 3 or n < 2:
        raise ValueError("need d >= 3 and n >= 2")
    _check_p(p)
    sch = (math.log2(_multi_size(d, n)) - binary_entropy(p)) / p
    triv = d * math.log2(n) / p
    return _point(family, ("d", "n", "p"), (d, n, p), triv, sch)


def multi_emamu_p_of_d(d: int, n: int) -> BoundPoint:
    return multi_emamu_bounds(d, n, d / (d + 1), family="multi_emamu_p_of_d")


def multi_emamu_p_of_d_asymptote(d: int, n: int) -> float:
    """Large-n limit of ``omega_sch`` at ``p = d/(d+1)``, up to ``o(1)`` in n.

    The entropy term contributes ``(d+1)/d * h(d/(d+1))``, which equals
    ``log(1 + 1/d) + log(d+1)/d``.
    """
    return (d + 1) * math.log2(n) - math.log2(1 + 1 / d) - math.log2(d + 1) / d


def dome_bounds(n: int, p: float) -> BoundPoint:
    if n < 2 or n % 2:
        raise ValueError("n must be even and at least 2")
    _check_p(p)
    sch = math.log2((n + 1) ** 3 + 1) - binary_entropy(p)
    triv = 3 * p * math.log2(n + 1) + 3 * (1 - p) * math.log2(n) - 2 * (1 - p)
    return _point("dome", ("n", "p"), (n, p), triv, sch)


# -- grids --------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """A family and one value list per parameter, iterated row-major."""

    family: str
    axes: tuple[tuple[str, tuple], ...]

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        names = tuple(n for n, _ in self.axes)
        expected = {
            "ext_mamu": ("n3", "n4"),
            "multi_emamu_fixed_d": ("d", "n", "p"),
            "multi_emamu_p_of_d": ("d", "n"),
            "dome": ("n", "p"),
        }[self.family]
        if names != expected:
            raise ValueError(f"{self.family} grid needs axes {expected}, got {names}")
        for name, vals in self.axes:
            if not vals:
                raise ValueError(f"empty range for {name}")

    def cells(self) -> Iterable[tuple]:
        return itertools.product(*(vals for _, vals in self.axes))


def int_range(lo: int, hi: int, step: int = 1) -> tuple[int, ...]:
    if step < 1 or hi < lo:
        raise ValueError(f"bad integer range {lo}..{hi}:{step}")
    return tuple(range(lo, hi + 1, step))


def real_range(lo: float, hi: float, step: float) -> tuple[float, ...]:
    """Inclusive range; values are rounded to 12 decimals so the grid is stable."""
    if step <= 0 or hi < lo:
        raise ValueError(f"bad real range {lo}..{hi}:{step}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return tuple(round(lo + i * step, 12) for i in range(count))


def open_unit_range(step: float = P_STEP, lo: float = 0.0, hi: float = 1.0) -> tuple[float, ...]:
    """Multiples of ``step`` strictly between ``lo`` and ``hi``."""
    k0 = int(math.floor(lo / step + 1e-9)) + 1
    k1 = int(math.ceil(hi / step - 1e-9)) - 1
    return tuple(round(k * step, 12) for k in range(k0, k1 + 1))


def figure_defaults(family: str) -> GridSpec:
    if family == "ext_mamu":
        return GridSpec(family, (("n3", int_range(2, 100)), ("n4", int_range(4, 100))))
    if family == "multi_emamu_fixed_d":
        return GridSpec(family, (("d", (4,)), ("n", int_range(4, 100)), ("p", open_unit_range(lo=0.5))))
    if family == "multi_emamu_p_of_d":
        return GridSpec(family, (("d", int_range(3, 15)), ("n", int_range(4, 100))))
    if family == "dome":
        return GridSpec(family, (("n", int_range(2, 50, 2)), ("p", open_unit_range())))
    raise ValueError(f"unknown family {family!r}")


def evaluate(family: str, cell: Sequence) -> BoundPoint:
    if family == "ext_mamu":
        return ext_mamu_bounds(*cell)
    if family == "multi_emamu_fixed_d":
        return multi_emamu_bounds(*cell)
    if family == "multi_emamu_p_of_d":
        return multi_emamu_p_of_d(*cell)
    if family == "dome":
        return dome_bounds(*cell)
    raise ValueError(f"unknown family {family!r}")


def generate_grid(spec: GridSpec) -> list[BoundPoint]:
    return [evaluate(spec.family, cell) for cell in spec.cells()]


def _fmt(x) -> str:
    return str(x) if isinstance(x, int) else format(x, ".12g")


def grid_csv(points: Sequence[BoundPoint], family: str) -> str:
    names = PARAM_NAMES[family]
    lines = [",".join(("family",) + names + ("omega_triv", "omega_sch", "delta"))]
    for pt in points:
        vals = [_fmt(pt.param(n)) for n in names]
        lines.append(",".join([family, *vals, _fmt(pt.omega_triv), _fmt(pt.omega_sch), _fmt(pt.delta)]))
    return "\n".join(lines) + "\n"


def grid_ppm(points: Sequence[BoundPoint], spec: GridSpec) -> str:
    """Plain PPM heat map: rows follow the first varying axis, columns the last.

    Negative deltas are blue, positive ones orange, both scaled by the largest
    magnitude on the grid.
    """
    varying = [vals for _, vals in spec.axes if len(vals) > 1] or [spec.axes[-1][1]]
    height = len(varying[0]) if len(varying) > 1 else 1
    width = len(points) // height
    scale = max((abs(pt.delta) for pt in points), default=0.0) or 1.0
    out = ["P3", f"{width} {height}", "255"]
    for row in range(height):
        pixels = []
        for col in range(width):
            t = points[row * width + col].delta / scale
            if t < 0:
                c = (0, 0, round(80 + 175 * -t))
            else:
                c = (round(255 * t), round(140 * t), 0)
            pixels.append("%d %d %d" % c)
        out.append(" ".join(pixels))
    return "\n".join(out) + "\n"
