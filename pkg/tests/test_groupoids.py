"""Core groupoid machinery: validation, components, iso-comma, Mackey
squares, natural-transformation enumeration."""

import pytest

from mackey_kernel import groups
from mackey_kernel.groupoids import (FiniteGroupoid, GroupoidFunctor,
                                     NatTransformation, connected_components,
                                     compose_functors, disjoint_union,
                                     empty_groupoid, enumerate_nat_transfs,
                                     functor_iso, identity_functor,
                                     identity_nat, is_equivalence,
                                     is_faithful, is_mackey_square,
                                     iso_comma, skeleton)
from conftest import order2_subgroup


def test_validation_rejects_broken_identity():
    # identity arrow must be an endo-arrow at its object
    with pytest.raises(ValueError):
        FiniteGroupoid(2, (0, 1), (1, 0), {}, (0, 1))


def test_validation_rejects_nonassociative_table():
    # a magma table that is unital and "invertible" but not associative
    table = [[0, 1, 2, 3, 4],
             [1, 0, 3, 4, 2],
             [2, 4, 0, 1, 3],
             [3, 2, 4, 0, 1],
             [4, 3, 1, 2, 0]]
    with pytest.raises(ValueError):
        groups.group_from_table(table)


def test_functor_validation(C2, S3):
    H = order2_subgroup(S3)
    _, incl = groups.sub_as_group(S3, H)
    assert incl.on_obj(0) == 0
    # collapsing everything to the identity is a functor
    GroupoidFunctor(C2, C2, (0,), (0, 0))
    with pytest.raises(ValueError):
        GroupoidFunctor(C2, C2, (0,), (1, 0))  # identity not preserved
    with pytest.raises(ValueError):
        GroupoidFunctor(S3, S3, (0,), (0, 1, 2, 3, 4, 4))  # not multiplicative


def test_disjoint_union_and_components(C2, C3):
    U, incls = disjoint_union([C2, C3])
    assert U.num_objects == 2 and U.num_arrows == 5
    comps = connected_components(U)
    assert [c[0].num_arrows for c in comps] == [2, 3]
    # unary and empty coproducts
    U1, _ = disjoint_union([C2])
    assert U1.num_arrows == C2.num_arrows
    E, incls = disjoint_union([])
    assert E.num_objects == 0 and incls == []
    assert connected_components(E) == []


def test_skeleton_of_connected_two_object_groupoid(C2):
    # transport of the regular C2-set: 2 objects, trivial vertex groups
    from mackey_kernel.gsets import coset_gset, transport_groupoid
    X = coset_gset(C2, {0})
    T, pi = transport_groupoid(X)
    grps, incl = skeleton(T)
    assert [g.num_arrows for g in grps] == [1]
    assert is_equivalence(incl)
    assert is_faithful(pi)


def test_is_faithful(C2, S3, triv):
    assert is_faithful(identity_functor(S3))
    to_triv = groups.hom_functor(C2, triv, (0, 0))
    assert not is_faithful(to_triv)


def test_faithful_closed_under_composition(C2, C3, S3):
    pool = []
    for A in (C2, C3, S3):
        for B in (C2, C3, S3):
            for m in groups.enumerate_homs(A, B, injective=True):
                pool.append(groups.hom_functor(A, B, m))
    count = 0
    for F in pool:
        for G2 in pool:
            if F.target is not G2.source:
                continue
            assert is_faithful(compose_functors(G2, F))
            count += 1
    assert count > 10


def test_iso_comma_point_cospan(C2, triv):
    u = groups.hom_functor(C2, triv, (0, 0))
    ic = iso_comma(u, u)
    assert ic.apex.num_objects == 1
    assert ic.apex.num_arrows == 4


def test_iso_comma_identity_cospan(C2):
    ic = iso_comma(identity_functor(C2), identity_functor(C2))
    assert ic.apex.num_objects == 2
    comps = connected_components(ic.apex)
    assert len(comps) == 1
    grps, _ = skeleton(ic.apex)
    assert grps[0].num_arrows == 2


def brute_force_iso_comma_objects(u, v):
    """Independent oracle: enumerate the triples directly."""
    X, Y, Z = u.source, v.source, u.target
    out = []
    for x in X.objects:
        for y in Y.objects:
            for g in range(Z.num_arrows):
                if Z.src[g] == u.on_obj(x) and Z.tgt[g] == v.on_obj(y):
                    out.append((x, y, g))
    return out


def test_iso_comma_subgroup_cospan_matches_double_cosets(S3):
    H = order2_subgroup(S3)
    _, incl = groups.sub_as_group(S3, H)
    ic = iso_comma(incl, incl)
    assert list(ic.object_triples) == brute_force_iso_comma_objects(incl, incl)
    comps = connected_components(ic.apex)
    assert len(comps) == len(groups.double_cosets(S3, H, H)) == 2
    vertex_orders = sorted(len(skeleton(c)[0][0].inverse) for c, _ in comps)
    assert vertex_orders == [1, 2]


def test_iso_comma_is_its_own_mackey_square(C2, C3, S3):
    H = order2_subgroup(S3)
    _, incl = groups.sub_as_group(S3, H)
    for u, v in [(identity_functor(C2), identity_functor(C2)),
                 (incl, incl),
                 (groups.hom_functor(C3, C3, (0, 2, 1)), identity_functor(C3))]:
        ic = iso_comma(u, v)
        assert is_mackey_square(ic.proj_left, ic.proj_right, ic.two_cell, u, v)


def test_commutative_square_that_is_not_mackey(C2, triv):
    incl = groups.hom_functor(triv, C2, (0,))
    p = identity_functor(triv)
    gamma = identity_nat(compose_functors(incl, p))
    assert not is_mackey_square(p, p, gamma, incl, incl)


def test_pullback_vs_isocomma_for_surjection(C2, triv):
    # cospan 1 -> 1 <<- C2; the strict pullback C2 gives a Mackey square
    b = identity_functor(triv)
    c = groups.hom_functor(C2, triv, (0, 0))
    p = groups.hom_functor(C2, triv, (0, 0))
    gamma = identity_nat(compose_functors(b, p))
    assert is_mackey_square(p, identity_functor(C2), gamma, b, c)


def test_pullback_vs_isocomma_all_surjections_order_8():
    # skeleton vertex group of the iso-comma equals the strict pullback
    names = ("C2", "C3", "C4", "C2xC2", "C6", "S3", "C8", "D4", "Q8")
    pool = [groups.named_group(n) for n in names]
    checked = 0
    for G in pool:
        for N in groups.normal_subgroups(G):
            if len(N) == 1:
                continue
            Q, proj = groups.quotient_group(G, N)
            for H in pool:
                if H.num_arrows > 8:
                    continue
                for hom in groups.enumerate_homs(H, Q):
                    v = groups.hom_functor(H, Q, hom)
                    ic = iso_comma(proj, v)
                    comps = connected_components(ic.apex)
                    assert len(comps) == 1
                    vertex = skeleton(ic.apex)[0][0]
                    pullback_order = sum(
                        1 for g in range(G.num_arrows) for h in range(H.num_arrows)
                        if proj.on_arrow(g) == hom[h])
                    assert vertex.num_arrows == pullback_order
                    checked += 1
    assert checked > 20


def test_functor_iso_conjugation(S3):
    # c_x isomorphic to the identity via the 2-cell with sole component x
    for x in range(6):
        cx = groups.hom_functor(S3, S3, tuple(groups.conj(S3, x, a) for a in range(6)))
        alpha = functor_iso(identity_functor(S3), cx)
        assert alpha is not None
        assert alpha.components[0] == x  # Z(S3) = 1, so the witness is unique


def test_functor_iso_between_conjugate_inclusions(S3):
    subs = [s for s in groups.all_subgroups(S3) if len(s) == 2]
    H1, incl1 = groups.sub_as_group(S3, subs[0])
    H2, incl2 = groups.sub_as_group(S3, subs[1])
    m = groups.find_isomorphism(H1, H2)
    twisted = compose_functors(incl2, groups.hom_functor(H1, H2, m))
    assert functor_iso(incl1, twisted) is not None


def test_nat_transf_counts_equal_center(C2, C3, S3, V4):
    for G in (C2, C3, S3, V4):
        n = len(enumerate_nat_transfs(identity_functor(G), identity_functor(G)))
        center = sum(1 for a in range(G.num_arrows)
                     if all(G.comp(a, b) == G.comp(b, a) for b in range(G.num_arrows)))
        assert n == center
    E = empty_groupoid()
    assert len(enumerate_nat_transfs(identity_functor(E), identity_functor(E))) == 1


def test_naturality_validation(S3):
    F = identity_functor(S3)
    # a non-central component is not natural for the identity functor
    with pytest.raises(ValueError):
        NatTransformation(F, F, (1,))
    NatTransformation(F, F, (0,))


def test_extensivity_probe(C2, C3, S3):
    # the two squares over a coproduct of 1-cells are Mackey squares
    cases = [(C2, C3), (C3, S3), (C2, C2)]
    for (A, X), (B, Y) in [(cases[0], cases[1]), (cases[2], cases[0])]:
        u = groups.hom_functor(A, X, groups.enumerate_homs(A, X)[0])
        v = groups.hom_functor(B, Y, groups.enumerate_homs(B, Y)[-1])
        AB, (iA, iB) = disjoint_union([A, B])
        XY, (iX, iY) = disjoint_union([X, Y])
        obj_map = [0] * AB.num_objects
        arr_map = [0] * AB.num_arrows
        obj_map[iA.on_obj(0)] = iX.on_obj(u.on_obj(0))
        obj_map[iB.on_obj(0)] = iY.on_obj(v.on_obj(0))
        for a in range(A.num_arrows):
            arr_map[iA.on_arrow(a)] = iX.on_arrow(u.on_arrow(a))
        for a in range(B.num_arrows):
            arr_map[iB.on_arrow(a)] = iY.on_arrow(v.on_arrow(a))
        uv = GroupoidFunctor(AB, XY, tuple(obj_map), tuple(arr_map))
        gA = identity_nat(compose_functors(iX, u))
        gA = NatTransformation(compose_functors(iX, u),
                               compose_functors(uv, iA), gA.components)
        assert is_mackey_square(u, iA, gA, iX, uv)
        base = compose_functors(uv, iB)
        gB = NatTransformation(base, compose_functors(iY, v),
                               identity_nat(base).components)
        assert is_mackey_square(iB, v, gB, uv, iY)
