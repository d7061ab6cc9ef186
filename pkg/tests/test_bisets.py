"""Biset calculus: tensor, isomorphism, transitive decomposition, the
five-letter canonical form, freeness, and the double Burnside table."""

import itertools
import random

import pytest

from mackey_kernel import groups
from mackey_kernel.bisets import (biset_disjoint_union, biset_iso,
                                  biset_lincomb, biset_from_fiveform,
                                  biset_tensor, bouc_canonical_form,
                                  double_burnside_table, elementary_biset_defl,
                                  elementary_biset_ind, elementary_biset_infl,
                                  elementary_biset_iso, elementary_biset_res,
                                  empty_biset, fiveform_from_stabilizer,
                                  identity_biset, is_bifree, is_left_free,
                                  is_right_free, transitive_classes,
                                  transitive_decomposition)
from conftest import order2_subgroup


def all_elementary_bisets(names=("1", "C2", "C3", "S3")):
    out = []
    for name in names:
        G = groups.named_group(name)
        for H in groups.all_subgroups(G):
            out.append(elementary_biset_res(G, H))
            out.append(elementary_biset_ind(G, H))
        for N in groups.normal_subgroups(G):
            out.append(elementary_biset_infl(G, N))
            out.append(elementary_biset_defl(G, N))
        for a in groups.automorphisms(G):
            out.append(elementary_biset_iso(groups.hom_functor(G, G, a)))
    return out


def test_elementary_bisets_validate():
    for U in all_elementary_bisets():
        U.validate()


def test_tensor_unit(S3):
    H = order2_subgroup(S3)
    U = elementary_biset_ind(S3, H)
    assert biset_iso(biset_tensor(identity_biset(S3), U), U)
    assert biset_iso(biset_tensor(U, identity_biset(U.source)), U)


def test_tensor_deflativity(C2, S3):
    D = elementary_biset_defl(C2, {0, 1})
    I = elementary_biset_infl(C2, {0, 1})
    DI = biset_tensor(D, I)
    Q, _ = groups.quotient_group(C2, {0, 1})
    assert DI.size == 1
    assert biset_iso(DI, identity_biset(Q))
    N3 = next(s for s in groups.normal_subgroups(S3) if len(s) == 3)
    D3 = elementary_biset_defl(S3, N3)
    I3 = elementary_biset_infl(S3, N3)
    Q3, _ = groups.quotient_group(S3, N3)
    assert biset_iso(biset_tensor(D3, I3), identity_biset(Q3))


def test_tensor_res_ind_orbits(S3):
    H = order2_subgroup(S3)
    T = biset_tensor(elementary_biset_res(S3, H), elementary_biset_ind(S3, H))
    assert T.size == 6
    assert sorted(o.size for o in transitive_decomposition(T)) == [2, 4]


def test_tensor_associative_random():
    random.seed(5)
    pool = all_elementary_bisets(("1", "C2", "C3"))
    checked = 0
    for U in pool:
        for V in pool:
            if V.source is not U.target:
                continue
            for W in pool:
                if W.source is not V.target:
                    continue
                lhs = biset_tensor(W, biset_tensor(V, U))
                rhs = biset_tensor(biset_tensor(W, V), U)
                assert biset_iso(lhs, rhs)
                checked += 1
                if checked >= 30:
                    return


def test_tensor_distributes_over_union(C2, S3):
    H = order2_subgroup(S3)
    U = elementary_biset_ind(S3, H)      # H' -> S3
    V = elementary_biset_res(S3, H)      # S3 -> H'
    UU = biset_disjoint_union(U, U)
    lhs = biset_tensor(V, UU)
    rhs = biset_disjoint_union(biset_tensor(V, U), biset_tensor(V, U))
    assert biset_iso(lhs, rhs)


def test_transitive_decomposition_trivial(C2):
    assert transitive_decomposition(empty_biset(C2, C2)) == []
    P, _, _ = groups.direct_product(C2, C2)
    left = [[P.comp(g * 2, u) for u in range(4)] for g in range(2)]
    right = [[P.comp(u, h) for h in range(2)] for u in range(4)]
    from mackey_kernel.bisets import group_biset
    W = group_biset(C2, C2, 4, left, right)
    assert [o.size for o in transitive_decomposition(W)] == [4]


def test_bouc_canonical_form_identity(C2):
    f = bouc_canonical_form(identity_biset(C2))
    assert f.is_identity_like()


def test_bouc_canonical_form_ind(S3):
    H = order2_subgroup(S3)
    f = bouc_canonical_form(elementary_biset_ind(S3, H))
    assert len(f.subgroup_D()) == 2
    assert f.kernel_A() == frozenset([0])
    assert f.kernel_C() == frozenset([0])
    assert len(f.subgroup_B()) == 2


def test_bouc_canonical_form_infl(C2):
    f = bouc_canonical_form(elementary_biset_infl(C2, {0, 1}))
    assert f.subgroup_D() == frozenset({0, 1})
    assert f.kernel_C() == frozenset({0, 1})
    assert f.subgroup_B() == frozenset({0})
    assert f.kernel_A() == frozenset({0})


def test_fiveform_roundtrip_order_6():
    for nameG, nameH in itertools.product(("1", "C2", "C3", "S3", "C4"), repeat=2):
        G, H = groups.named_group(nameG), groups.named_group(nameH)
        if G.num_arrows > 6 or H.num_arrows > 6:
            continue
        for form in transitive_classes(G, H):
            U = biset_from_fiveform(G, H, form)
            U.validate()
            assert bouc_canonical_form(U) == form


def test_transitive_classes_count_subgroup_classes():
    for nameG, nameH in itertools.product(("1", "C2", "C3", "C4", "C2xC2"), repeat=2):
        G, H = groups.named_group(nameG), groups.named_group(nameH)
        P, _, _ = groups.direct_product(G, H)
        assert len(transitive_classes(G, H)) == len(groups.subgroup_conjugacy_classes(P))


def test_nonconjugate_stabilizers_not_iso(C2):
    delta = fiveform_from_stabilizer(C2, C2, [(0, 0), (1, 1)])
    c2x1 = fiveform_from_stabilizer(C2, C2, [(0, 0), (1, 0)])
    B1 = biset_from_fiveform(C2, C2, delta)
    B2 = biset_from_fiveform(C2, C2, c2x1)
    assert not biset_iso(B1, B2)
    assert not biset_iso(B1, B2, method="search")


def test_fast_iso_agrees_with_search():
    pool = []
    for name in ("C2", "C3"):
        G = groups.named_group(name)
        for form in transitive_classes(G, G):
            pool.append(biset_from_fiveform(G, G, form))
        pool.append(identity_biset(G))
    for U in pool:
        for V in pool:
            if U.source is not V.source or U.target is not V.target:
                continue
            assert biset_iso(U, V, method="fast") == biset_iso(U, V, method="search")


def test_coproduct_symmetry(S3, C2):
    H = order2_subgroup(S3)
    U = elementary_biset_ind(S3, H)
    V = biset_tensor(elementary_biset_ind(S3, H), identity_biset(U.source))
    assert biset_iso(biset_disjoint_union(U, V), biset_disjoint_union(V, U))


def test_freeness():
    S3 = groups.named_group("S3")
    C2 = groups.named_group("C2")
    H = order2_subgroup(S3)
    assert is_bifree(elementary_biset_ind(S3, H))
    assert is_bifree(elementary_biset_res(S3, H))
    infl = elementary_biset_infl(C2, {0, 1})
    assert is_right_free(infl) and not is_left_free(infl)
    defl = elementary_biset_defl(C2, {0, 1})
    assert is_left_free(defl) and not is_right_free(defl)
    E = empty_biset(C2, C2)
    assert is_right_free(E) and is_bifree(E)


def test_freeness_closed_under_tensor():
    pool = [U for U in all_elementary_bisets(("1", "C2", "S3"))
            if is_right_free(U)]
    checked = 0
    for U in pool:
        for V in pool:
            if V.source is not U.target:
                continue
            assert is_right_free(biset_tensor(V, U))
            if is_bifree(U) and is_bifree(V):
                assert is_bifree(biset_tensor(V, U))
            checked += 1
    assert checked > 10


def test_double_burnside_c2(C2):
    basis, table = double_burnside_table(C2)
    assert len(basis) == 5
    # the identity class acts as a two-sided unit
    idx = next(i for i, f in enumerate(basis) if f.is_identity_like())
    for j in range(5):
        assert table[idx][j].terms == {k: v for k, v in
                                       biset_lincomb(biset_from_fiveform(C2, C2, basis[j])).terms.items()}
        assert list(table[j][idx].terms.values()) == [1]


def test_double_burnside_trivial():
    triv = groups.named_group("1")
    basis, table = double_burnside_table(triv)
    assert len(basis) == 1
    assert basis[0].is_identity_like()
    assert list(table[0][0].terms.values()) == [1]


def test_double_burnside_bound():
    with pytest.raises(ValueError):
        double_burnside_table(groups.named_group("S3"), bound=4)
