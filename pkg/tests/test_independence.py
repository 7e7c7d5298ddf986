import itertools

import pytest

from subadditivity.independence import (
    brute_force_M,
    brute_force_system,
    independence_system_even,
    make_system,
)

EVEN_SMALL = sorted({p for base in [(2, 2, 2), (4, 2, 2)] for p in itertools.permutations(base)})


def test_even_system_sizes():
    assert independence_system_even(2, 2, 2).size == 2
    s = independence_system_even(4, 2, 2)
    assert s.size == 4 and s.is_valid()
    assert independence_system_even(4, 6, 2).size == 12


def test_coordinate_fixing():
    s = independence_system_even(2, 2, 2)
    for i in range(3):
        for j, k in s.s[i].items():
            assert j[i] == k[i]


def test_invalid_systems_rejected():
    good = independence_system_even(2, 2, 2)
    j = sorted(good.J)[0]
    bad = make_system((2, 2, 2), [(j, j, good.s[1][j], good.s[2][j])])
    assert not bad.is_valid()
    moved = make_system((2, 2, 2), [((1, 1, 1), (2, 2, 2), (2, 1, 2), (2, 2, 1))])
    with pytest.raises(ValueError, match="moves coordinate 1"):
        moved.check()
    with pytest.raises(ValueError):
        independence_system_even(3, 2, 2)


def test_brute_force_examples():
    assert brute_force_M(2, 2, 2, 2)
    assert not brute_force_M(2, 2, 2, 3)
    assert brute_force_M(2, 2, 2, 0)
    with pytest.raises(ValueError):
        brute_force_M(4, 4, 4, 16)


@pytest.mark.parametrize("dims", EVEN_SMALL)
def test_even_system_is_largest(dims):
    m = dims[0] * dims[1] * dims[2] // 4
    assert brute_force_M(*dims, m)
    assert not brute_force_M(*dims, m + 1)
    assert independence_system_even(*dims).size == m


def test_search_returns_valid_system():
    s = brute_force_system(1, 2, 3, 1)
    assert s is not None and s.is_valid() and s.size == 1
    assert brute_force_system(1, 1, 3, 1) is None
