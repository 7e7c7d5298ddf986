"""Combinatorial independence systems on a 3-dimensional grid.

A system of size M on ``[1..n1] x [1..n2] x [1..n3]`` consists of four pairwise
disjoint sets J, K1, K2, K3 of M cells and bijections ``s_i : J -> K_i`` such
that ``s_i`` keeps coordinate ``i`` fixed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

Cell = tuple[int, int, int]

SEARCH_GUARD = 16


@dataclass(frozen=True)
class IndependenceSystem:
    grid: tuple[int, int, int]
    J: frozenset
    K: tuple[frozenset, frozenset, frozenset]
    s: tuple[Mapping[Cell, Cell], Mapping[Cell, Cell], Mapping[Cell, Cell]]

    @property
    def size(self) -> int:
        return len(self.J)

    def check(self) -> None:
        """Raise ``ValueError`` describing the first violated invariant."""
        n = self.grid
        cells = [self.J, *self.K]
        for name, cs in zip(("J", "K1", "K2", "K3"), cells):
            for c in cs:
                if len(c) != 3 or any(not 1 <= x <= m for x, m in zip(c, n)):
                    raise ValueError(f"{name} cell {c} lies outside the grid {n}")
            if len(cs) != len(self.J):
                raise ValueError(f"{name} has {len(cs)} cells, J has {len(self.J)}")
        for a, b in itertools.combinations(range(4), 2):
            if cells[a] & cells[b]:
                raise ValueError("the four sets are not pairwise disjoint")
        for i in range(3):
            si = self.s[i]
            if set(si) != set(self.J):
                raise ValueError(f"s{i + 1} is not defined on exactly J")
            if set(si.values()) != set(self.K[i]) or len(set(si.values())) != len(self.J):
                raise ValueError(f"s{i + 1} is not a bijection onto K{i + 1}")
            for j, k in si.items():
                if j[i] != k[i]:
                    raise ValueError(f"s{i + 1} moves coordinate {i + 1} of {j}")

    def is_valid(self) -> bool:
        try:
            self.check()
        except ValueError:
            return False
        return True

    def j_index(self) -> dict[Cell, int]:
        """0-based labels of J in sorted order; K_i inherits them through s_i."""
        return {c: t for t, c in enumerate(sorted(self.J))}

    def k_index(self, i: int) -> dict[Cell, int]:
        jl = self.j_index()
        return {k: jl[j] for j, k in self.s[i].items()}


def make_system(grid, triples) -> IndependenceSystem:
    """Build a system from ``(j, k1, k2, k3)`` quadruples."""
    triples = list(triples)
    J = frozenset(t[0] for t in triples)
    K = tuple(frozenset(t[i + 1] for t in triples) for i in range(3))
    s = tuple({t[0]: t[i + 1] for t in triples} for i in range(3))
    return IndependenceSystem(tuple(grid), J, K, s)


def _box(r1, r2, r3):
    return itertools.product(r1, r2, r3)


def independence_system_even(n1: int, n2: int, n3: int) -> IndependenceSystem:
    """The explicit system of size ``n1*n2*n3/4`` for even grid sizes."""
    if any(n < 2 or n % 2 for n in (n1, n2, n3)):
        raise ValueError("all grid sizes must be even and positive")
    m1, m2, m3 = n1 // 2, n2 // 2, n3 // 2
    lo = [range(1, m + 1) for m in (m1, m2, m3)]
    quads = []
    # first half: J' is the low corner, each K'_i flips the two other coordinates up
    for j in _box(*lo):
        j1, j2, j3 = j
        quads.append((j, (j1, m2 + j2, m3 + j3), (m1 + j1, j2, m3 + j3), (m1 + j1, m2 + j2, j3)))
    # second half: J'' is the high corner, each K''_i flips the two other coordinates down
    hi = [range(m + 1, 2 * m + 1) for m in (m1, m2, m3)]
    for j in _box(*hi):
        j1, j2, j3 = j
        quads.append((j, (j1, j2 - m2, j3 - m3), (j1 - m1, j2, j3 - m3), (j1 - m1, j2 - m2, j3)))
    sys = make_system((n1, n2, n3), quads)
    sys.check()
    return sys


def _search(n, size, want_system):
    cells = list(itertools.product(*(range(1, m + 1) for m in n)))
    if size == 0:
        return make_system(n, []) if want_system else True
    if 4 * size > len(cells):
        return None if want_system else False
    used: set = set()
    chosen: list = []

    def candidates(j, i):
        return [c for c in cells if c[i] == j[i] and c not in used and c != j]

    def rec(start):
        if len(chosen) == size:
            return True
        need = 4 * (size - len(chosen))
        if len(cells) - len(used) < need:
            return False
        for idx in range(start, len(cells)):
            j = cells[idx]
            if j in used:
                continue
            used.add(j)
            for k1 in candidates(j, 0):
                used.add(k1)
                for k2 in candidates(j, 1):
                    used.add(k2)
                    for k3 in candidates(j, 2):
                        used.add(k3)
                        chosen.append((j, k1, k2, k3))
                        if rec(idx + 1):
                            return True
                        chosen.pop()
                        used.discard(k3)
                    used.discard(k2)
                used.discard(k1)
            used.discard(j)
        return False

    if rec(0):
        return make_system(n, chosen) if want_system else True
    return None if want_system else False


def _guard(n1, n2, n3):
    if min(n1, n2, n3) < 1:
        raise ValueError("grid sizes must be positive")
    if n1 * n2 * n3 > SEARCH_GUARD:
        raise ValueError(f"grid {n1}x{n2}x{n3} exceeds the search guard of {SEARCH_GUARD} cells")


def brute_force_M(n1: int, n2: int, n3: int, size_target: int) -> bool:
    """Whether a system of exactly ``size_target`` cells per set exists."""
    _guard(n1, n2, n3)
    if size_target < 0:
        raise ValueError("size_target must be non-negative")
    return _search((n1, n2, n3), size_target, False)


def brute_force_system(n1: int, n2: int, n3: int, size_target: int) -> IndependenceSystem | None:
    _guard(n1, n2, n3)
    return _search((n1, n2, n3), size_target, True)


def lemma_M(n1: int, n2: int, n3: int) -> int:
    if any(n % 2 for n in (n1, n2, n3)):
        raise ValueError("the closed form needs even grid sizes")
    return n1 * n2 * n3 // 4


def format_system(sys: IndependenceSystem) -> str:
    lines = [f"grid = {sys.grid[0]},{sys.grid[1]},{sys.grid[2]}", f"M = {sys.size}"]
    for j in sorted(sys.J):
        ks = " ".join(",".join(map(str, sys.s[i][j])) for i in range(3))
        lines.append(f"{','.join(map(str, j))} -> {ks}")
    return "\n".join(lines) + "\n"
