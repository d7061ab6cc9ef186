"""
The realization functor from spans to bisets: a span H <-b- S -a-> G
becomes the coend G(a-, -) (x)_S H(-, b-), a biset H -> G.  Elementary
spans map to the homonymous elementary bisets; the kernel of the functor
is generated by the deflativity relations.
"""

from __future__ import annotations

from . import bisets, words
from .bisets import (Biset, BisetKey, biset_iso, biset_lincomb,
                     fiveform_from_stabilizer, identity_biset, _UnionFind)
from .groupoids import compose_functors, iso_comma
from .groups import quotient_group, sub_as_group
from .linear import ZZ, LinComb
from .spans import Span, compose_spans, identity_span, span_equivalent


def realize(span):
    """
    The biset of a span: pairs (alpha, beta) with alpha a G-arrow out of
    a(s) and beta an H-arrow into b(s), over the objects s of the apex,
    modulo (alpha.a(phi), beta) ~ (alpha, b(phi).beta), by union-find.
    """
    b, a = span.left_leg, span.right_leg
    S, H, G = span.apex, span.src, span.dst
    pairs = []
    for s in S.objects:
        for alpha in G.arrows_from(a.on_obj(s)):
            for beta in range(H.num_arrows):
                if H.tgt[beta] == b.on_obj(s):
                    pairs.append((s, alpha, beta))
    index = {p: i for i, p in enumerate(pairs)}
    uf = _UnionFind(len(pairs))
    for phi in range(S.num_arrows):
        s1, s2 = S.src[phi], S.tgt[phi]
        aphi, bphi = a.on_arrow(phi), b.on_arrow(phi)
        for alpha in G.arrows_from(a.on_obj(s2)):
            alpha_a = G.comp(alpha, aphi)
            for beta in range(H.num_arrows):
                if H.tgt[beta] != b.on_obj(s1):
                    continue
                uf.union(index[(s1, alpha_a, beta)],
                         index[(s2, alpha, H.comp(bphi, beta))])
    reps = sorted({uf.find(i) for i in range(len(pairs))})
    cls = {r: k for k, r in enumerate(reps)}
    src_obj = [H.src[pairs[r][2]] for r in reps]
    tgt_obj = [G.tgt[pairs[r][1]] for r in reps]
    left, right = {}, {}
    for k, r in enumerate(reps):
        s, alpha, beta = pairs[r]
        for g in G.arrows_from(tgt_obj[k]):
            left[(g, k)] = cls[uf.find(index[(s, G.comp(g, alpha), beta)])]
        for h in range(H.num_arrows):
            if H.tgt[h] != src_obj[k]:
                continue
            right[(k, h)] = cls[uf.find(index[(s, alpha, H.comp(beta, h))])]
    return Biset(H, G, src_obj, tgt_obj, left, right, check=False)


_realize_memo = {}


def realize_lincomb(lc):
    """Realize a span LinComb termwise into a biset LinComb."""
    from .spans import representative_span
    out = LinComb(lc.src, lc.dst, ring=lc.ring)
    for key, coeff in lc.terms.items():
        hit = _realize_memo.get(key)
        if hit is None:
            rep = representative_span(lc.src, lc.dst, key)
            hit = dict(biset_lincomb(realize(rep), ring=ZZ).terms)
            _realize_memo[key] = hit
        for k2, c2 in hit.items():
            out.add_term(k2, c2 * coeff)
    return out


def check_functorial(s1, s2):
    """
    realize(s2 . s1) vs realize(s2) (x) realize(s1), compared as biset
    LinCombs after transitive decomposition.
    """
    if s1.dst is not s2.src:
        raise ValueError("spans are not composable")
    ic = iso_comma(s1.right_leg, s2.left_leg)
    composite = Span(compose_functors(s1.left_leg, ic.proj_left),
                     compose_functors(s2.right_leg, ic.proj_right))
    lhs = biset_lincomb(realize(composite))
    rhs = biset_lincomb(bisets.biset_tensor(realize(s2), realize(s1)))
    return lhs.terms == rhs.terms


def kernel_witness(G, p):
    """
    For a surjection p: G ->> Q, the span [Q <- G -> Q] realizes to the
    identity biset while remaining a non-identity span class unless p is
    injective.  Returns the two verdicts.
    """
    Q = p.target
    if set(p.arrow_map) != set(range(Q.num_arrows)):
        raise ValueError("kernel_witness requires a surjective homomorphism")
    span = Span(p, p)
    span_is_id = span_equivalent(span, identity_span(Q))
    biset_is_id = biset_iso(realize(span), identity_biset(Q))
    injective = len(set(p.arrow_map)) == G.num_arrows
    return {
        "group": G.label, "quotient": Q.label, "injective": injective,
        "span_equals_identity": span_is_id,
        "realization_equals_identity": biset_is_id,
        "consistent": (biset_is_id and (span_is_id == injective)),
    }


def section(G, H, form):
    """
    A span H -> G realizing a FiveForm: the apex is the stabilizer
    subgroup L <= G x H itself, with the two projections as legs.
    """
    P, pr1, pr2 = bisets._gxh(G, H)
    Lgrp, incl = sub_as_group(P, frozenset(form.stabilizer))
    to_G = compose_functors(pr1, incl)
    to_H = compose_functors(pr2, incl)
    return Span(to_H, to_G)


# -- deflative normal form ---------------------------------------------------

def _fiveform_from_letters(letters, src, dst):
    """
    Read (A <| B <= H, f: B/A -> D/C, C <| D <= G) off a five-letter
    normal word and assemble the stabilizer subgroup of G x H.
    """
    H, G = src, dst
    ind_l = iso_l = infl_l = defl_l = res_l = None
    for L in letters:
        if L.kind == words.IND:
            ind_l = L
        elif L.kind == words.INFL:
            infl_l = L
        elif L.kind == words.ISO:
            iso_l = L
        elif L.kind == words.DEFL:
            defl_l = L
        elif L.kind == words.RES:
            res_l = L
    B_set = res_l.subset if res_l else frozenset(range(H.num_arrows))
    Bgrp, inclB = (sub_as_group(H, B_set) if res_l else
                   (H, None))
    A_in_B = defl_l.subset if defl_l else frozenset([0])
    D_set = ind_l.subset if ind_l else frozenset(range(G.num_arrows))
    Dgrp, inclD = (sub_as_group(G, D_set) if ind_l else (G, None))
    C_in_D = infl_l.subset if infl_l else frozenset([0])
    QB, projB = quotient_group(Bgrp, A_in_B)
    QD, projD = quotient_group(Dgrp, C_in_D)

    def up_B(i):
        return inclB.on_arrow(i) if inclB else i

    def up_D(i):
        return inclD.on_arrow(i) if inclD else i

    if iso_l is not None:
        f = iso_l.iso
        assert f.source is QB and f.target is QD
        fmap = f.arrow_map
    else:
        assert QB.num_arrows == QD.num_arrows
        # no isomorphism letter: both quotients are the same object
        assert QB is QD
        fmap = tuple(range(QB.num_arrows))
    nH = H.num_arrows
    L_pairs = []
    for i in range(Dgrp.num_arrows):
        for j in range(Bgrp.num_arrows):
            if projD.on_arrow(i) == fmap[projB.on_arrow(j)]:
                L_pairs.append((up_D(i), up_B(j)))
    return fiveform_from_stabilizer(G, H, L_pairs)


def normalize_word_deflative(w, ring=ZZ):
    """
    Biset-side normal form of a word: the span rewriting system extended
    with the unrestricted deflation/inflation commutation, producing a
    LinComb of FiveForm keys (Bouc's five-letter canonical form).
    """
    normals = words.rewrite_to_normal(w, deflative=True)
    out = LinComb(w.src, w.dst, ring=ring)
    for letters in normals:
        words._check_shape(letters, True)
        form = _fiveform_from_letters(letters, w.src, w.dst)
        out.add_term(BisetKey(0, 0, form))
    return out


def word_as_biset_lincomb(w, ring=ZZ):
    """Independent pipeline: tensor the elementary bisets and decompose."""
    return biset_lincomb(bisets.evaluate_word_as_biset(w), ring=ring)


# -- restricted isomorphisms -------------------------------------------------

def _free_transitive_classes(G, H, bifree):
    out = []
    for form in bisets.transitive_classes(G, H):
        if form.kernel_A() != frozenset([0]):
            continue
        if bifree and form.kernel_C() != frozenset([0]):
            continue
        out.append(form)
    return out


def check_restricted_iso(pair_name, H, G, ring=ZZ):
    """
    The realization functor restricted to faithful-right (resp. bifree)
    spans: hom_basis(H, G) must biject with the right-free (resp. bifree)
    transitive biset classes, with matching composition tables.
    """
    from .spans import PAIR_FAITHFUL_BOTH, PAIR_FAITHFUL_RIGHT, hom_basis, representative_span
    if pair_name == "faithful_both":
        pair = PAIR_FAITHFUL_BOTH
        bifree = True
    elif pair_name == "faithful_right":
        pair = PAIR_FAITHFUL_RIGHT
        bifree = False
    else:
        raise ValueError("pair must be faithful_right or faithful_both")

    basis = hom_basis(H, G, pair)
    spans = [representative_span(H, G, k) for k in basis]
    images = [bisets.bouc_canonical_form(realize(s)) for s in spans]
    targets = _free_transitive_classes(G, H, bifree)
    report = {"pair": pair_name, "H": H.label, "G": G.label,
              "span_basis": len(basis), "biset_classes": len(targets)}
    report["bijective"] = (len(set(images)) == len(images)
                           and set(images) == set(targets))
    if not report["bijective"]:
        report["tables_match"] = False
        return report

    # composition tables: all pairs s: H->G, t: G->H must satisfy
    # realize(t . s) = realize(t) (x) realize(s)
    basis_back = hom_basis(G, H, pair)
    spans_back = [representative_span(G, H, k) for k in basis_back]
    ok = True
    for s in spans:
        rs = realize(s)
        for t in spans_back:
            lhs = compose_spans(s, t, pair=pair, ring=ring)
            lhs_biset = realize_lincomb(lhs)
            rhs = biset_lincomb(bisets.biset_tensor(realize(t), rs), ring=ring)
            if lhs_biset.terms != rhs.terms:
                ok = False
                break
        if not ok:
            break
    report["tables_match"] = ok
    report["ok"] = report["bijective"] and ok
    return report
