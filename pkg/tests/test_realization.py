"""The realization functor: elementary correspondence, functoriality,
the deflativity kernel, fullness sections, and the restricted
isomorphisms onto free biset classes."""

import random

import pytest

from mackey_kernel import groups
from mackey_kernel.bisets import (biset_iso, biset_lincomb,
                                  bouc_canonical_form, identity_biset,
                                  elementary_biset_ind, letter_to_biset,
                                  transitive_classes)
from mackey_kernel.groupoids import disjoint_union, identity_functor
from mackey_kernel.realization import (check_functorial, check_restricted_iso,
                                       kernel_witness, normalize_word_deflative,
                                       realize, realize_lincomb, section)
from mackey_kernel.spans import (Span, elementary_defl, elementary_ind,
                                 elementary_infl, elementary_res,
                                 identity_span, span_equivalent)
from mackey_kernel.words import (defl, evaluate_word_via_spans, ind, infl,
                                 res, word)
from conftest import order2_subgroup


def test_realize_identity(S3):
    assert biset_iso(realize(identity_span(S3)), identity_biset(S3))


def test_realize_elementary(S3, C2):
    H = order2_subgroup(S3)
    cases = [
        (elementary_ind(S3, H), letter_to_biset(ind(S3, H))),
        (elementary_res(S3, H), letter_to_biset(res(S3, H))),
        (elementary_infl(C2, {0, 1}), letter_to_biset(infl(C2, {0, 1}))),
        (elementary_defl(C2, {0, 1}), letter_to_biset(defl(C2, {0, 1}))),
    ]
    for span, expected in cases:
        got = realize(span)
        got.validate()
        assert biset_iso(got, expected, method="search")


def test_realize_collapses_quotient_span(C2):
    Q, p = groups.quotient_group(C2, {0, 1})
    U = realize(Span(p, p))
    assert U.size == 1
    assert biset_iso(U, identity_biset(Q))


def test_realize_additive(C2, C3):
    # a disjoint-union apex realizes to the disjoint union of realizations
    U, (i1, i2) = disjoint_union([C2, C2])
    obj_map = (0, 0)
    arr_map = tuple([0, 1] + [0, 1])
    from mackey_kernel.groupoids import GroupoidFunctor
    legs = GroupoidFunctor(U, C2, obj_map, arr_map)
    s = Span(legs, legs)
    lc = biset_lincomb(realize(s))
    single = biset_lincomb(realize(Span(identity_functor(C2), identity_functor(C2))))
    assert lc.terms == {k: 2 * v for k, v in single.terms.items()}


def test_check_functorial_elementary_pairs(S3, C2):
    H = order2_subgroup(S3)
    assert check_functorial(elementary_ind(S3, H), elementary_res(S3, H))
    assert check_functorial(elementary_infl(C2, {0, 1}), elementary_defl(C2, {0, 1}))
    assert check_functorial(identity_span(S3), elementary_res(S3, H))
    with pytest.raises(ValueError):
        check_functorial(elementary_res(S3, H), elementary_res(S3, H))


def test_kernel_witness(C2, S3):
    Q, p = groups.quotient_group(C2, {0, 1})
    r = kernel_witness(C2, p)
    assert r["consistent"] and not r["span_equals_identity"]
    assert r["realization_equals_identity"]
    N3 = next(s for s in groups.normal_subgroups(S3) if len(s) == 3)
    Q3, p3 = groups.quotient_group(S3, N3)
    r3 = kernel_witness(S3, p3)
    assert r3["consistent"] and not r3["span_equals_identity"]
    rid = kernel_witness(C2, groups.hom_functor(C2, C2, (0, 1)))
    assert rid["consistent"] and rid["span_equals_identity"]
    with pytest.raises(ValueError):
        kernel_witness(C2, groups.hom_functor(C2, C2, (0, 0)))


def test_section_identity(C2):
    f = bouc_canonical_form(identity_biset(C2))
    s = section(C2, C2, f)
    assert span_equivalent(s, identity_span(C2))


def test_section_ind(S3):
    H = order2_subgroup(S3)
    Hgrp, _ = groups.sub_as_group(S3, H)
    f = bouc_canonical_form(elementary_biset_ind(S3, H))
    s = section(S3, Hgrp, f)
    assert biset_iso(realize(s), elementary_biset_ind(S3, H), method="search")


def test_section_pure_inflation(C2):
    from mackey_kernel.bisets import elementary_biset_infl
    Q, _ = groups.quotient_group(C2, {0, 1})
    f = bouc_canonical_form(elementary_biset_infl(C2, {0, 1}))
    s = section(C2, Q, f)
    # the span [1 <<- C2 = C2]
    assert s.apex.num_arrows == 2
    assert biset_iso(realize(s), elementary_biset_infl(C2, {0, 1}), method="search")


def test_fullness_at_desk_scale():
    names = ("1", "C2", "C3", "C4", "S3")
    pool = [groups.named_group(n) for n in names]
    for G in pool:
        for H in pool:
            for form in transitive_classes(G, H):
                s = section(G, H, form)
                assert bouc_canonical_form(realize(s)) == form


def test_restricted_iso_c2(C2):
    rep = check_restricted_iso("faithful_both", C2, C2)
    assert rep["ok"] and rep["span_basis"] == rep["biset_classes"] == 2
    rep2 = check_restricted_iso("faithful_right",
                                groups.named_group("1"), C2)
    assert rep2["ok"] and rep2["span_basis"] == 2


def test_restricted_iso_trivial():
    triv = groups.named_group("1")
    rep = check_restricted_iso("faithful_both", triv, triv)
    assert rep["ok"] and rep["span_basis"] == 1


def test_kernel_characterization_sampled():
    """realize(s1) iso realize(s2) iff deflative normal forms agree."""
    random.seed(31)
    names = ("1", "C2", "C3", "S3")
    pool = [groups.named_group(n) for n in names]
    letters = []
    for G in pool:
        for H in groups.all_subgroups(G):
            letters.append(res(G, H))
            letters.append(ind(G, H))
        for N in groups.normal_subgroups(G):
            letters.append(infl(G, N))
            letters.append(defl(G, N))
    by_target = {}
    for L in letters:
        by_target.setdefault(L.target.uid, []).append(L)
    ws = []
    attempts = 0
    while len(ws) < 50 and attempts < 3000:
        attempts += 1
        chain = [random.choice(letters)]
        for _ in range(random.choice((0, 1, 1, 2))):
            nxt = by_target.get(chain[-1].source.uid)
            if not nxt:
                break
            chain.append(random.choice(nxt))
        ws.append(word(chain))
    pairs = 0
    for w1 in ws:
        for w2 in ws:
            if w1.src is not w2.src or w1.dst is not w2.dst:
                continue
            lhs = realize_lincomb(evaluate_word_via_spans(w1)).terms == \
                realize_lincomb(evaluate_word_via_spans(w2)).terms
            rhs = normalize_word_deflative(w1).terms == normalize_word_deflative(w2).terms
            assert lhs == rhs, (w1.render(), w2.render())
            pairs += 1
    assert pairs > 30
