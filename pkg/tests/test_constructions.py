import itertools

import pytest

from subadditivity.constructions import (
    ConstructionSpec,
    build_c1_family,
    build_c2_family,
    build_c3_decomposition,
    build_c4_family,
    build_summands,
    c1_core_sum,
    c1_first_group_sum,
    c1_layout,
    c2_identity_holds,
    c2_layout,
    c3_claim_bounds,
    c3_formula,
    c4_group_sums,
    c4_layout,
    canonical_c1,
    check_c3_expansion,
    trivial_additive_bound,
    verify_c3,
    verify_construction,
)
from subadditivity.exact import ConstructionError
from subadditivity.independence import independence_system_even
from subadditivity.tensor import SparseTensor, border_rank_lower_bound, direct_sum, graph_tensor, spider


def test_spec_validation():
    for bad in [("C1", (2, 3, 3)), ("C1", (3, 1, 2)), ("C2", (1,)), ("C3", (2, 2)), ("C3", (3, 2, 9)), ("C4", (3, 2, 2)), ("C5", (1,))]:
        with pytest.raises(ValueError):
            ConstructionSpec(*bad)


def test_canonical_c1():
    assert canonical_c1((4, 3, 2)) == (3, 4, 2)
    assert canonical_c1((3, 3, 2)) == (3, 3, 2)
    with pytest.raises(ValueError):
        canonical_c1((4, 2, 2))


def test_summand_shapes():
    t1, t2 = build_summands(ConstructionSpec.c2(2))
    assert t1.shape == (2, 2, 4, 16) and t2.shape == (2, 2, 1, 1) and t2.nnz() == 2
    t1, t2 = build_summands(ConstructionSpec.c3(3, 2, 8))
    assert t1 == graph_tensor(spider([2, 2, 2])) and t2.shape == (8, 8, 1, 1)
    t1, t2 = build_summands(ConstructionSpec.c4(2, 2, 2))
    assert t2.shape == (2, 2, 2, 1) and t2.nnz() == 2
    t1, t2 = build_summands(ConstructionSpec.c1(3, 3, 2))
    assert t2.shape == (2, 2, 1, 1)


def _eps_zero_products(family, vdims):
    prods = []
    for z in family[1:]:
        parts = [f.coefficient(0) for f in z.factors]
        assert all(len(p) == 1 and list(p.values()) == [1] for p in parts)
        prods.append(tuple(next(iter(p)) for p in parts))
    assert sorted(prods) == sorted(itertools.product(*(range(n) for n in vdims)))


def test_c1_family():
    fam = build_c1_family(3, 3, 2)
    assert len(fam) == 49
    m, N, vdims, shape = c1_layout(3, 3, 2)
    assert N == 2
    _eps_zero_products(fam, vdims)
    Z1 = c1_first_group_sum(3, 3, 2)
    S, u = c1_core_sum(3, 3, 2)
    assert Z1.coefficient(3) == u and u.nnz() == N
    assert S.coefficient(2).nnz() == 0


@pytest.mark.parametrize("dims", [(3, 2, 2), (3, 3, 3), (5, 2, 3), (3, 4, 2)])
def test_c1_family_sizes(dims):
    fam = build_c1_family(*dims)
    n1, n2, n3 = dims
    assert len(fam) == (n1 + 1) * (n2 + 1) * (n3 + 1) + 1


@pytest.mark.parametrize("a", [2, 3, 4, 5])
def test_c2_family(a):
    fam = build_c2_family(a)
    assert len(fam) == 4 * (a + 2) + 1
    assert c2_identity_holds(a)
    _eps_zero_products(fam, c2_layout(a)[0])


def test_c4_family():
    sys = independence_system_even(2, 2, 2)
    fam = build_c4_family(sys)
    assert len(fam) == 28
    _eps_zero_products(fam, c4_layout(sys)[0])
    J, K = c4_group_sums(sys)
    assert (J.coefficient(2) + K.coefficient(2)).nnz() == 0
    assert J.coefficient(2).nnz() > 0


def test_c4_with_searched_odd_system():
    from subadditivity.independence import brute_force_system

    sys = brute_force_system(1, 2, 3, 1)
    spec = ConstructionSpec.c4(1, 2, 3, system=sys)
    rep = verify_construction(spec)
    assert rep.witness_size == 2 * 3 * 4 + 1 and rep.border_rank_upper_confirmed


@pytest.mark.parametrize(
    "spec,expected",
    [
        (ConstructionSpec.c1(3, 3, 2), (49, 49, 50, True)),
        (ConstructionSpec.c2(2), (17, 17, 18, True)),
        (ConstructionSpec.c4(2, 2, 2), (28, 28, 29, True)),
        (ConstructionSpec.c4(4, 2, 2), (46, 46, 49, True)),
        (ConstructionSpec.c1(3, 2, 2), (37, 37, 37, False)),
    ],
)
def test_verify_construction(spec, expected):
    r = verify_construction(spec)
    assert r.border_rank_upper_confirmed
    assert (r.witness_size, r.lower_bound, r.trivial_additive_bound, r.strict_subadditivity) == expected


@pytest.mark.parametrize("spec", [ConstructionSpec.c1(3, 3, 3), ConstructionSpec.c1(5, 2, 2), ConstructionSpec.c2(3), ConstructionSpec.c4(2, 4, 2)])
def test_lower_bound_equals_witness(spec):
    r = verify_construction(spec)
    assert r.border_rank_upper_confirmed and r.lower_bound == r.witness_size


def test_report_render():
    text = verify_construction(ConstructionSpec.c2(2)).render()
    assert text == (
        "construction = C2(2)\nwitness_size = 17\nlower_bound = 17\ntrivial_additive_bound = 18\n"
        "border_rank_upper_confirmed = true\nstrict_subadditivity = true\n"
    )


def test_c3_counts_small():
    dec = build_c3_decomposition(3, 2)
    assert (len(dec.q_terms), 1, len(dec.p_prime_terms), len(dec.p_dprime_terms)) == (8, 1, 8, 4)
    assert c3_formula(3, 4) == 113


@pytest.mark.parametrize("d,n", [(3, 1), (3, 2), (3, 3), (4, 1), (4, 2), (4, 3), (5, 2)])
def test_c3_expansion_identity(d, n):
    check_c3_expansion(d, n)


def test_c3_expansion_detects_a_missing_term():
    dec = build_c3_decomposition(3, 2)
    broken = type(dec)(dec.d, dec.n, dec.shape, dec.q_terms, dec.p_term, dec.p_prime_terms[1:], dec.p_dprime_terms)
    with pytest.raises(ConstructionError, match="degree 2"):
        check_c3_expansion(3, 2, broken)


def test_c3_top_degree_is_target():
    from subadditivity.grassmann import sum_rank_one

    dec = build_c3_decomposition(3, 2)
    Q = sum_rank_one(dec.q_terms, dec.shape)
    t1, t2 = build_summands(ConstructionSpec.c3(3, 2))
    assert Q.coefficient(4) == direct_sum(t1, t2)


def test_verify_c3_reports():
    r = verify_c3(3, 2)
    assert r.border_rank_upper_confirmed and r.witness_size == 21 and not r.strict_subadditivity
    r = verify_c3(3, 4)
    assert (r.witness_size, r.trivial_additive_bound, r.strict_subadditivity) == (113, 128, True)


@pytest.mark.parametrize("d,n", list(itertools.product((3, 4, 5), (1, 2, 3))))
def test_c3_counts_respect_closed_form_bounds(d, n):
    dec = build_c3_decomposition(d, n)
    q, p, pp, ppp = c3_claim_bounds(d, n)
    counts = (len(dec.q_terms), len(dec.p_prime_terms), len(dec.p_dprime_terms))
    assert counts[0] == q
    assert counts[1] <= pp
    assert counts[2] <= ppp, f"P'' has {counts[2]} terms, bound {ppp}"


def test_trivial_bounds():
    assert trivial_additive_bound(ConstructionSpec.c3(3, 4)) == 128
    assert trivial_additive_bound(ConstructionSpec.c2(5)) == 4 * 7 + 5
