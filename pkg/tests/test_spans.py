"""Span composition, equivalence, canonical forms, Hom bases, and the
semi-additive structure."""

import random

import pytest

from mackey_kernel import groups, spans
from mackey_kernel.groupoids import identity_functor
from mackey_kernel.linear import ring_by_name
from mackey_kernel.spans import (PAIR_ALL, PAIR_FAITHFUL_BOTH,
                                 PAIR_FAITHFUL_RIGHT, Span, canonical_form,
                                 check_spannable, compose_lincomb,
                                 compose_spans, connected_span_key,
                                 elementary_defl, elementary_ind,
                                 elementary_infl, elementary_iso,
                                 elementary_res, hom_basis, identity_lincomb,
                                 identity_span, representative_span,
                                 span_equivalent, span_to_lincomb, zero)
from conftest import order2_subgroup


def quotient_span(G, N):
    """[Q <- G -> Q] for the quotient by N."""
    Q, p = groups.quotient_group(G, N)
    return Span(p, p)


def test_elementary_spans(C2, S3):
    ind = elementary_ind(C2, {0})
    assert ind.apex.num_arrows == 1 and ind.dst is C2
    defl = elementary_defl(C2, {0, 1})
    assert defl.dst.num_arrows == 1
    assert elementary_iso(identity_functor(S3)).apex is S3
    with pytest.raises(ValueError):
        elementary_res(S3, {0, 3})  # not closed
    with pytest.raises(ValueError):
        elementary_infl(S3, order2_subgroup(S3))  # not normal
    with pytest.raises(ValueError):
        elementary_iso(groups.hom_functor(C2, C2, (0, 0)))


def test_compose_res_ind_trivial_cosets(C2):
    lc = compose_spans(elementary_ind(C2, {0}), elementary_res(C2, {0}))
    one = lc.src
    assert lc == identity_lincomb(one).scaled(2)


def test_compose_defl_infl(C2):
    lc = compose_spans(elementary_infl(C2, {0, 1}), elementary_defl(C2, {0, 1}))
    assert len(lc.terms) == 1
    (key, coeff), = lc.terms.items()
    assert coeff == 1
    assert key.form.apex_group().num_arrows == 2
    assert not key.form.is_identity_like()


def test_unit_law(S3):
    s = elementary_res(S3, order2_subgroup(S3))
    lc1 = compose_spans(s, identity_span(s.dst))
    lc2 = compose_spans(identity_span(S3), s)
    assert lc1 == lc2 == span_to_lincomb(s)


def test_mackey_composition(S3):
    H = order2_subgroup(S3)
    lc = compose_spans(elementary_ind(S3, H), elementary_res(S3, H))
    Hgrp, _ = groups.sub_as_group(S3, H)
    expected = identity_lincomb(Hgrp) + compose_spans(
        elementary_res(Hgrp, {0}), elementary_ind(Hgrp, {0}))
    assert lc == expected


def test_zero_and_add(C2, C3):
    z = zero(C2, C3)
    a = span_to_lincomb(Span(groups.hom_functor(C2, C2, (0, 1)),
                             groups.hom_functor(C2, C3, (0, 0))))
    assert (a + z) == a
    assert (a + a) == a.scaled(2)
    doubled = a + a
    assert list(doubled.terms.values()) == [2]


def test_sum_distinct_keys(C2, C3, triv):
    s1 = quotient_span(C2, {0, 1})
    s2 = quotient_span(C3, {0, 1, 2})
    # both spans 1 -> 1, through C2 and C3; their keys differ
    one = s1.src
    k1 = connected_span_key(Span(s1.left_leg, s1.right_leg))
    k2 = connected_span_key(Span(s2.left_leg, s2.right_leg))
    assert k1 != k2


def test_bilinearity(S3):
    H = order2_subgroup(S3)
    s = elementary_res(S3, H)        # S3 -> H'
    t = elementary_ind(S3, H)        # H' -> S3
    a = span_to_lincomb(t) + span_to_lincomb(t)
    lhs = compose_lincomb(a, s)
    rhs = compose_lincomb(span_to_lincomb(t), s).scaled(2)
    assert lhs == rhs
    z = zero(t.src, t.dst)
    assert compose_lincomb(z, s).is_zero()


def test_associativity_random_triples():
    random.seed(20240801)
    pool_names = ("1", "C2", "C3", "C2xC2", "S3", "C4", "C6")
    pool = [groups.named_group(n) for n in pool_names]
    letters = []
    for G in pool:
        for H in groups.all_subgroups(G):
            letters.append(elementary_res(G, H))
            letters.append(elementary_ind(G, H))
        for N in groups.normal_subgroups(G):
            letters.append(elementary_infl(G, N))
            letters.append(elementary_defl(G, N))
    by_src = {}
    for s in letters:
        by_src.setdefault(s.src.uid, []).append(s)
    checked = 0
    for s1 in random.sample(letters, len(letters)):
        for s2 in by_src.get(s1.dst.uid, ()):
            for s3 in by_src.get(s2.dst.uid, ())[:2]:
                c12 = compose_spans(s1, s2)
                lhs = compose_lincomb(c12, s3)
                c23 = compose_spans(s2, s3)
                rhs = zero(s1.src, s3.dst)
                for key, coeff in c23.terms.items():
                    rep = representative_span(c23.src, c23.dst, key)
                    piece = compose_spans(s1, rep)
                    for k2, c2 in piece.terms.items():
                        rhs.add_term(k2, c2 * coeff)
                assert lhs == rhs
                checked += 1
                if checked >= 40:
                    return
    assert checked > 0


def test_span_equivalence_basics(C2, S3):
    s = quotient_span(C2, {0, 1})
    assert span_equivalent(s, s)
    assert span_equivalent(s, s, method="search")
    one = s.src
    assert not span_equivalent(s, identity_span(one))
    assert not span_equivalent(s, identity_span(one), method="search")


def test_inner_iso_span_is_identity(S3):
    for x in range(6):
        cx = groups.hom_functor(
            S3, S3, tuple(groups.conj(S3, x, a) for a in range(6)))
        s = elementary_iso(cx)
        assert span_equivalent(s, identity_span(S3))
        assert span_equivalent(s, identity_span(S3), method="search")


def test_outer_iso_span_not_identity(C3):
    inv = groups.hom_functor(C3, C3, (0, 2, 1))
    s = elementary_iso(inv)
    assert not span_equivalent(s, identity_span(C3))


def test_canonical_form_identity(S3):
    f = canonical_form(identity_span(S3))
    assert f.is_identity_like()
    assert f.image_left() == frozenset(range(6))
    assert f.kernel_left() == frozenset([0])


def test_canonical_form_quotient_span(C2):
    f = canonical_form(quotient_span(C2, {0, 1}))
    assert f.kernel_left() == f.kernel_right() == frozenset({0, 1})
    assert f.image_left() == f.image_right() == frozenset({0})


def test_canonical_form_conjugate_subgroups(S3):
    subs = [s for s in groups.all_subgroups(S3) if len(s) == 2]
    forms = set()
    for H in subs:
        _, incl = groups.sub_as_group(S3, H)
        forms.add(canonical_form(Span(incl, incl)))
    assert len(forms) == 1
    f = forms.pop()
    assert len(f.image_left()) == 2 and f.kernel_left() == frozenset([0])


def test_canonical_form_rejects_bad_input(C2, S3):
    from mackey_kernel.groupoids import disjoint_union
    with pytest.raises(ValueError):
        U, (i1, i2) = disjoint_union([C2, C2])
        canonical_form(Span(i1, i1))  # multi-object endpoint


def test_canonical_agrees_with_search():
    """The SixForm fast path against the exhaustive search oracle."""
    random.seed(7)
    pool = [groups.named_group(n) for n in ("1", "C2", "C3", "C4", "S3", "C6")]
    spans_pool = []
    for S in pool:
        for X in pool:
            if X.num_arrows > 6:
                continue
            for Y in pool:
                homs_b = groups.enumerate_homs(S, X)
                homs_a = groups.enumerate_homs(S, Y)
                for b in homs_b[:2]:
                    for a in homs_a[:2]:
                        spans_pool.append(Span(groups.hom_functor(S, X, b),
                                               groups.hom_functor(S, Y, a)))
    random.shuffle(spans_pool)
    checked = 0
    for s1 in spans_pool:
        for s2 in spans_pool:
            if s1.src is not s2.src or s1.dst is not s2.dst:
                continue
            fast = span_equivalent(s1, s2, method="canonical")
            slow = span_equivalent(s1, s2, method="search")
            assert fast == slow, (s1, s2)
            checked += 1
            if checked >= 120:
                return


def test_hom_basis_faithful_both(C2):
    basis = hom_basis(C2, C2, PAIR_FAITHFUL_BOTH)
    # classes: the identity span and [C2 <- 1 -> C2]; the biset-side
    # oracle is the count of subgroups L <= C2 x C2 with trivial kernels
    P, pr1, pr2 = groups.direct_product(C2, C2)
    bifree = [L for L in groups.all_subgroups(P)
              if all(pr1.on_arrow(x) != 0 or x == 0 for x in L)
              and all(pr2.on_arrow(x) != 0 or x == 0 for x in L)]
    assert len(basis) == len(bifree) == 2


def test_hom_basis_faithful_right(C2, triv):
    assert len(hom_basis(triv, C2, PAIR_FAITHFUL_RIGHT)) == 2
    assert len(hom_basis(triv, triv, PAIR_FAITHFUL_BOTH)) == 1


def test_hom_basis_empty_endpoint(C2):
    from mackey_kernel.groupoids import empty_groupoid
    assert hom_basis(empty_groupoid(), C2, PAIR_FAITHFUL_RIGHT) == []


def test_hom_basis_all_requires_bound(C2):
    with pytest.raises(ValueError):
        hom_basis(C2, C2, PAIR_ALL)
    basis = hom_basis(C2, C2, PAIR_ALL, bound=4)
    assert len(basis) == 15


def test_hom_basis_pairwise_inequivalent_and_spanning(C2, C3):
    basis = hom_basis(C2, C2, PAIR_ALL, bound=4)
    reps = [representative_span(C2, C2, k) for k in basis]
    for i, r1 in enumerate(reps):
        for r2 in reps[i + 1:]:
            assert not span_equivalent(r1, r2)
    # closure under composition: products of basis reps with apex order
    # <= 4 decompose with non-negative coefficients over the basis
    for r1 in reps[:6]:
        for r2 in reps[:6]:
            lc = compose_spans(r1, r2)
            for key, coeff in lc.terms.items():
                assert coeff > 0
                if key.form.apex_group().num_arrows <= 4:
                    assert key in basis


def test_direct_sum_biproduct_laws(C2, C3):
    """The four structure spans of X (+) Y satisfy the biproduct laws."""
    from mackey_kernel.groupoids import disjoint_union
    U, (iX, iY) = disjoint_union([C2, C3])
    p_X = Span(iX, identity_functor(C2))     # U -> C2 (projection)
    p_Y = Span(iY, identity_functor(C3))
    j_X = Span(identity_functor(C2), iX)     # C2 -> U (inclusion)
    j_Y = Span(identity_functor(C3), iY)
    assert compose_spans(j_X, p_X) == identity_lincomb(C2)
    assert compose_spans(j_Y, p_Y) == identity_lincomb(C3)
    assert compose_spans(j_X, p_Y).is_zero()
    assert compose_spans(j_Y, p_X).is_zero()


def test_check_spannable_positive(C2, C3, triv):
    corpus = [triv, C2, C3]
    for pair in (PAIR_ALL, PAIR_FAITHFUL_RIGHT, PAIR_FAITHFUL_BOTH):
        rep = check_spannable(pair, corpus)
        assert rep["ok"], rep


def test_check_spannable_negative_control(C2, triv):
    broken = spans.SpannablePair(
        "broken", lambda F: F.arrow_map != tuple(range(F.source.num_arrows)))
    rep = check_spannable(broken, [triv, C2])
    assert not rep["a"]["ok"]


def test_mod_ring_lincomb(C2):
    ring = ring_by_name("mod:2")
    lc = compose_spans(elementary_ind(C2, {0}), elementary_res(C2, {0}),
                       ring=ring)
    assert lc.is_zero()  # 2*id = 0 mod 2
    ring3 = ring_by_name("mod:3")
    lc3 = compose_spans(elementary_ind(C2, {0}), elementary_res(C2, {0}),
                        ring=ring3)
    assert list(lc3.terms.values()) == [2]


def test_search_budget(S3):
    from mackey_kernel.groupoids import Budget, SearchBudgetExceeded
    with pytest.raises(SearchBudgetExceeded):
        hom_basis(S3, S3, PAIR_ALL, bound=12, budget=Budget(1000))
    b = Budget(5)
    b.spend(5)
    with pytest.raises(SearchBudgetExceeded):
        b.spend()


def test_rational_ring(C2):
    ring = ring_by_name("rat")
    lc = identity_lincomb(C2, ring=ring).scaled(1) + identity_lincomb(C2, ring=ring)
    from fractions import Fraction
    assert list(lc.terms.values()) == [Fraction(2)]
