"""
Instances of the relation families 0.(a)-2.(f) between elementary spans,
with evaluators through the independent pipelines (iso-comma composition,
word rewriting, biset tensor).

Both sides of every relation are formal integer combinations of words.
The right-hand sides are built here directly from the group data, not by
the rewriting engine, so a broken rewriter is caught by comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import groups, words
from .groups import quotient_group, sub_as_group
from .linear import ZZ
from .words import (defl, ind, infl, iso, res, word, _iso_letter,
                    _quotquot_coercion, _sub_index, _subsub_coercion)

FAMILIES = ("0a", "0b", "1a", "1b", "1c", "2a", "2b", "2c", "2d", "2e", "2f")


@dataclass
class RelationInstance:
    family: str
    label: str
    lhs: list   # [(coeff, Word)]
    rhs: list


def _w(*letters, src=None):
    return (1, word(list(letters), src=src))


def evaluate_side(terms, pipeline, ring=ZZ, budget=None):
    from . import realization
    total = None
    for coeff, w in terms:
        if pipeline == "spans":
            piece = words.evaluate_word_via_spans(w, ring=ring, budget=budget)
        elif pipeline == "rewrite":
            piece = words.normalize_word(w, ring=ring, budget=budget)
        elif pipeline == "bisets":
            piece = realization.word_as_biset_lincomb(w, ring=ring)
        elif pipeline == "bisets_rewrite":
            piece = realization.normalize_word_deflative(w, ring=ring)
        else:
            raise ValueError("unknown pipeline %r" % pipeline)
        piece = piece.scaled(coeff)
        total = piece if total is None else total + piece
    return total


def check_relation(instance, pipelines=("spans", "rewrite"), ring=ZZ, budget=None):
    """
    Evaluate both sides through each pipeline; the relation holds iff the
    sides agree within every pipeline and the pipelines agree with each
    other on the left side.
    """
    results = {}
    lhs_values = {}
    for p in pipelines:
        lhs = evaluate_side(instance.lhs, p, ring=ring, budget=budget)
        rhs = evaluate_side(instance.rhs, p, ring=ring, budget=budget)
        lhs_values[p] = lhs
        results[p] = (lhs == rhs)
    ok = all(results.values())
    vals = list(lhs_values.values())
    cross = all(vals[0] == v for v in vals[1:])
    return {"ok": ok and cross, "per_pipeline": results, "pipelines_agree": cross,
            "instance": instance.label}


# -- instance enumeration ----------------------------------------------------

def _corpus_isos(corpus):
    """All isomorphisms between corpus members (including automorphisms)."""
    out = []
    for G in corpus:
        for H in corpus:
            for m in groups.all_isomorphisms(G, H):
                out.append(groups.hom_functor(G, H, m))
    return out


def relation_instances(family, corpus):
    out = []
    if family == "0a":
        for G in corpus:
            full = frozenset(range(G.num_arrows))
            out.append(RelationInstance("0a", "Res^G_G=id on %s" % G.label,
                                        [_w(res(G, full))], [(1, word([], src=G))]))
            out.append(RelationInstance("0a", "Ind^G_G=id on %s" % G.label,
                                        [_w(ind(G, full))], [(1, word([], src=G))]))
            out.append(RelationInstance("0a", "Defl^G_{G/1}=id on %s" % G.label,
                                        [_w(defl(G, {0}))], [(1, word([], src=G))]))
            out.append(RelationInstance("0a", "Infl^G_{G/1}=id on %s" % G.label,
                                        [_w(infl(G, {0}))], [(1, word([], src=G))]))
    elif family == "0b":
        for G in corpus:
            for x in range(G.num_arrows):
                cx = tuple(groups.conj(G, x, a) for a in range(G.num_arrows))
                out.append(RelationInstance(
                    "0b", "Iso(c_%d)=id on %s" % (x, G.label),
                    [_w(iso(groups.hom_functor(G, G, cx)))],
                    [(1, word([], src=G))]))
    elif family == "1a":
        for G in corpus:
            for H_set in groups.all_subgroups(G):
                Hgrp, inclH = sub_as_group(G, H_set)
                for K_in_H in groups.all_subgroups(Hgrp):
                    Kgrp, KG, K_in_G, idx = _subsub_coercion(G, H_set, K_in_H)
                    back = _iso_letter(KG, Kgrp, _inv(idx))
                    fwd = _iso_letter(Kgrp, KG, idx)
                    out.append(RelationInstance(
                        "1a", "Res transitivity %s>=%s>=%s" % (G.label, sorted(H_set), sorted(K_in_H)),
                        [_w(res(Hgrp, K_in_H), res(G, H_set))],
                        [_w(back, res(G, K_in_G))]))
                    out.append(RelationInstance(
                        "1a", "Ind transitivity %s>=%s>=%s" % (G.label, sorted(H_set), sorted(K_in_H)),
                        [_w(ind(G, H_set), ind(Hgrp, K_in_H))],
                        [_w(ind(G, K_in_G), fwd)]))
    elif family == "1b":
        isos = _corpus_isos(corpus)
        for f in isos:
            for f2 in isos:
                if f.target is not f2.source:
                    continue
                comp = tuple(f2.arrow_map[f.arrow_map[a]]
                             for a in range(f.source.num_arrows))
                out.append(RelationInstance(
                    "1b", "Iso composition %s->%s->%s" % (f.source.label, f.target.label, f2.target.label),
                    [_w(iso(f2), iso(f))],
                    [_w(iso(groups.hom_functor(f.source, f2.target, comp)))]))
    elif family == "1c":
        for G in corpus:
            for N in groups.normal_subgroups(G):
                for M in groups.normal_subgroups(G):
                    if not N <= M:
                        continue
                    QN, projN = quotient_group(G, N)
                    M_in_QN = frozenset(projN.on_arrow(g) for g in M)
                    Mq, QM, QQ, idx = _quotquot_coercion(G, N, M_in_QN)
                    assert Mq == M
                    fwd = _iso_letter(QM, QQ, idx)
                    back = _iso_letter(QQ, QM, _inv(idx))
                    out.append(RelationInstance(
                        "1c", "Infl transitivity %s, N=%s<=M=%s" % (G.label, sorted(N), sorted(M)),
                        [_w(infl(G, N), infl(QN, M_in_QN))],
                        [_w(infl(G, M), back)]))
                    out.append(RelationInstance(
                        "1c", "Defl transitivity %s, N=%s<=M=%s" % (G.label, sorted(N), sorted(M)),
                        [_w(defl(QN, M_in_QN), defl(G, N))],
                        [_w(fwd, defl(G, M))]))
    elif family == "2a":
        for f in _corpus_isos(corpus):
            G = f.source
            for K_set in groups.all_subgroups(G):
                fK = frozenset(f.on_arrow(k) for k in K_set)
                Kgrp, inclK = sub_as_group(G, K_set)
                FKgrp, posFK = _sub_index(f.target, fK)
                idx = [posFK[f.on_arrow(inclK.on_arrow(i))]
                       for i in range(Kgrp.num_arrows)]
                ftilde = _iso_letter(Kgrp, FKgrp, idx)
                out.append(RelationInstance(
                    "2a", "Iso/Res %s K=%s" % (G.label, sorted(K_set)),
                    [_w(ftilde, res(G, K_set))],
                    [_w(res(f.target, fK), iso(f))]))
                out.append(RelationInstance(
                    "2a", "Iso/Ind %s K=%s" % (G.label, sorted(K_set)),
                    [_w(iso(f), ind(G, K_set))],
                    [_w(ind(f.target, fK), ftilde)]))
    elif family == "2b":
        for f in _corpus_isos(corpus):
            G = f.source
            for N in groups.normal_subgroups(G):
                fN = frozenset(f.on_arrow(a) for a in N)
                QG, projG = quotient_group(G, N)
                QT, projT = quotient_group(f.target, fN)
                idx = [None] * QG.num_arrows
                for a in range(G.num_arrows):
                    idx[projG.on_arrow(a)] = projT.on_arrow(f.on_arrow(a))
                fbar = _iso_letter(QG, QT, idx)
                out.append(RelationInstance(
                    "2b", "Iso/Defl %s N=%s" % (G.label, sorted(N)),
                    [_w(fbar, defl(G, N))],
                    [_w(defl(f.target, fN), iso(f))]))
                out.append(RelationInstance(
                    "2b", "Iso/Infl %s N=%s" % (G.label, sorted(N)),
                    [_w(iso(f), infl(G, N))],
                    [_w(infl(f.target, fN), fbar)]))
    elif family == "2c":
        for G in corpus:
            for H_set in groups.all_subgroups(G):
                for K_set in groups.all_subgroups(G):
                    out.append(_mackey_instance(G, H_set, K_set))
    elif family == "2d":
        for G in corpus:
            for M in groups.normal_subgroups(G):
                for N in groups.normal_subgroups(G):
                    if M & N != frozenset([0]):
                        continue
                    out.append(_commute_2d_instance(G, M, N))
    elif family == "2e":
        for G in corpus:
            for H_set in groups.all_subgroups(G):
                for N in groups.normal_subgroups(G):
                    out.extend(_mixed_2e_instances(G, H_set, N))
    elif family == "2f":
        for G in corpus:
            for N in groups.normal_subgroups(G):
                for H_set in groups.all_subgroups(G):
                    if not N <= H_set:
                        continue
                    out.extend(_mixed_2f_instances(G, H_set, N))
    else:
        raise ValueError("unknown relation family %r" % family)
    return out


def _inv(idx):
    out = [None] * len(idx)
    for i, v in enumerate(idx):
        out[v] = i
    return out


def _mackey_instance(G, H_set, K_set):
    """Res^G_H . Ind^G_K = sum over x in [H\\G/K] of Ind Iso(c_x) Res."""
    Hgrp, inclH = sub_as_group(G, H_set)
    Kgrp, inclK = sub_as_group(G, K_set)
    posH = {inclH.on_arrow(i): i for i in range(Hgrp.num_arrows)}
    rhs = []
    for x, _size in groups.double_cosets(G, H_set, K_set):
        A_in_G = frozenset(g for g in K_set if groups.conj(G, x, g) in H_set)
        A_in_K = frozenset(i for i in range(Kgrp.num_arrows)
                           if inclK.on_arrow(i) in A_in_G)
        B_in_H = frozenset(posH[groups.conj(G, x, g)] for g in A_in_G)
        Agrp, inclA = sub_as_group(Kgrp, A_in_K)
        Bgrp, posB = _sub_index(Hgrp, B_in_H)
        idx = [posB[posH[groups.conj(G, x, inclK.on_arrow(inclA.on_arrow(i)))]]
               for i in range(Agrp.num_arrows)]
        rhs.append(_w(ind(Hgrp, B_in_H), _iso_letter(Agrp, Bgrp, idx),
                      res(Kgrp, A_in_K)))
    return RelationInstance(
        "2c", "Mackey %s H=%s K=%s" % (G.label, sorted(H_set), sorted(K_set)),
        [_w(res(G, H_set), ind(G, K_set))], rhs)


def _commute_2d_instance(G, M, N):
    """Defl^G_{G/N} . Infl^G_{G/M} = Infl . Defl through G/MN (M cap N = 1)."""
    MN = groups.subgroup_closure(G, M | N)
    QN, projN = quotient_group(G, N)
    QM, projM = quotient_group(G, M)
    MN_in_QN = frozenset(projN.on_arrow(g) for g in MN)
    MN_in_QM = frozenset(projM.on_arrow(g) for g in MN)
    QQN, projQN = quotient_group(QN, MN_in_QN)
    QQM, projQM = quotient_group(QM, MN_in_QM)
    idx = [None] * QQM.num_arrows
    for g in range(G.num_arrows):
        idx[projQM.on_arrow(projM.on_arrow(g))] = projQN.on_arrow(projN.on_arrow(g))
    return RelationInstance(
        "2d", "Defl/Infl commute %s M=%s N=%s" % (G.label, sorted(M), sorted(N)),
        [_w(defl(G, N), infl(G, M))],
        [_w(infl(QN, MN_in_QN), _iso_letter(QQM, QQN, idx), defl(QM, MN_in_QM))])


def unrestricted_2d_instances(corpus):
    """Bouc's relation 2.(d) without the trivial-intersection condition."""
    out = []
    for G in corpus:
        for M in groups.normal_subgroups(G):
            for N in groups.normal_subgroups(G):
                inst = _commute_2d_instance(G, M, N)
                inst.family = "2d_unrestricted"
                inst.label = "unrestricted " + inst.label
                out.append(inst)
    return out


def deflativity_instances(corpus):
    """Defl^G_{G/N} . Infl^G_{G/N} = id_{G/N}."""
    out = []
    for G in corpus:
        for N in groups.normal_subgroups(G):
            QN, _ = quotient_group(G, N)
            out.append(RelationInstance(
                "deflativity", "Defl.Infl on %s N=%s" % (G.label, sorted(N)),
                [_w(defl(G, N), infl(G, N))],
                [(1, word([], src=QN))]))
    return out


def _mixed_2e_instances(G, H_set, N):
    Q, projN = quotient_group(G, N)
    Hgrp, inclH = sub_as_group(G, H_set)
    HN_in_Q = frozenset(projN.on_arrow(h) for h in H_set)
    HcapN = frozenset(i for i in range(Hgrp.num_arrows)
                      if projN.on_arrow(inclH.on_arrow(i)) == 0)
    QH, projH = quotient_group(Hgrp, HcapN)
    HNgrp, posHN = _sub_index(Q, HN_in_Q)
    idx = [None] * QH.num_arrows
    for i in range(Hgrp.num_arrows):
        idx[projH.on_arrow(i)] = posHN[projN.on_arrow(inclH.on_arrow(i))]
    f_fwd = _iso_letter(QH, HNgrp, idx)
    f_bwd = _iso_letter(HNgrp, QH, _inv(idx))
    lab = "%s H=%s N=%s" % (G.label, sorted(H_set), sorted(N))
    return [
        RelationInstance("2e", "Defl/Ind " + lab,
                         [_w(defl(G, N), ind(G, H_set))],
                         [_w(ind(Q, HN_in_Q), f_fwd, defl(Hgrp, HcapN))]),
        RelationInstance("2e", "Res/Infl " + lab,
                         [_w(res(G, H_set), infl(G, N))],
                         [_w(infl(Hgrp, HcapN), f_bwd, res(Q, HN_in_Q))]),
    ]


def _mixed_2f_instances(G, H_set, N):
    Q, projN = quotient_group(G, N)
    Hgrp, inclH = sub_as_group(G, H_set)
    H_in_Q = frozenset(projN.on_arrow(h) for h in H_set)
    N_in_H = frozenset(i for i in range(Hgrp.num_arrows)
                       if inclH.on_arrow(i) in N)
    QH, projH = quotient_group(Hgrp, N_in_H)
    HQgrp, posHQ = _sub_index(Q, H_in_Q)
    idx = [None] * QH.num_arrows
    for i in range(Hgrp.num_arrows):
        idx[projH.on_arrow(i)] = posHQ[projN.on_arrow(inclH.on_arrow(i))]
    fwd = _iso_letter(QH, HQgrp, idx)
    lab = "%s H=%s N=%s" % (G.label, sorted(H_set), sorted(N))
    return [
        RelationInstance("2f", "Res/Defl " + lab,
                         [_w(res(Q, H_in_Q), defl(G, N))],
                         [_w(fwd, defl(Hgrp, N_in_H), res(G, H_set))]),
        RelationInstance("2f", "Ind/Infl " + lab,
                         [_w(ind(G, H_set), infl(Hgrp, N_in_H))],
                         [_w(infl(G, N), ind(Q, H_in_Q), fwd)]),
    ]


def bouc_simplification_probe(G, M, N):
    """
    Re-derive the unrestricted biset relation 2.(d) for (M, N) from the
    N = M special case of deflativity and the other families, replaying
    the comparison through the fiber product P of the two quotient maps.
    Every step is verified as an isomorphism of bisets.
    """
    from . import realization
    MN = groups.subgroup_closure(G, M | N)
    QN, projN = quotient_group(G, N)
    QM, projM = quotient_group(G, M)
    R, projR = quotient_group(G, MN)
    MN_in_QN = frozenset(projN.on_arrow(g) for g in MN)
    MN_in_QM = frozenset(projM.on_arrow(g) for g in MN)

    # the fiber product P of QM ->> R <<- QN, and the comparison p: G -> P
    Ppar, pr1, pr2 = words._product_cache(QM, QN)
    a_map = {}
    for q in range(QM.num_arrows):
        g = next(g for g in range(G.num_arrows) if projM.on_arrow(g) == q)
        a_map[q] = projR.on_arrow(g)
    b_map = {}
    for q in range(QN.num_arrows):
        g = next(g for g in range(G.num_arrows) if projN.on_arrow(g) == q)
        b_map[q] = projR.on_arrow(g)
    fiber = frozenset(x for x in range(Ppar.num_arrows)
                      if a_map[pr1.on_arrow(x)] == b_map[pr2.on_arrow(x)])
    P, inclP = sub_as_group(Ppar, fiber)
    p_map = tuple(next(i for i in range(P.num_arrows)
                       if inclP.on_arrow(i) == projM.on_arrow(g) * QN.num_arrows + projN.on_arrow(g))
                  for g in range(G.num_arrows))
    p = groups.hom_functor(G, P, p_map)
    assert set(p_map) == set(range(P.num_arrows)), "comparison must be surjective"
    Kp = frozenset(i for i, v in enumerate(p_map) if v == 0)

    def bl(w):
        return realization.word_as_biset_lincomb(w).terms

    # step 1: span-side 2.(d) on the pullback (trivial intersection)
    Mt = frozenset(i for i in range(P.num_arrows) if pr2.on_arrow(inclP.on_arrow(i)) == 0)
    Nt = frozenset(i for i in range(P.num_arrows) if pr1.on_arrow(inclP.on_arrow(i)) == 0)
    assert Mt & Nt == frozenset([0])
    QPN, projPN = quotient_group(P, Nt)
    QPM, projPM = quotient_group(P, Mt)
    # identify P/Nt with QM and P/Mt with QN through the projections
    idxN = [None] * QPN.num_arrows
    idxM = [None] * QPM.num_arrows
    for i in range(P.num_arrows):
        idxN[projPN.on_arrow(i)] = pr1.on_arrow(inclP.on_arrow(i))
        idxM[projPM.on_arrow(i)] = pr2.on_arrow(inclP.on_arrow(i))
    phiN = _iso_letter(QPN, QM, idxN)
    phiM = _iso_letter(QPM, QN, idxM)
    # atilde_* btilde^* : QM -> QN as a word through P
    w_tilde = word([phiM, defl(P, Mt), infl(P, Nt), _iso_letter(QM, QPN, _inv(idxN))])
    inst2d = _commute_2d_instance(P, Nt, Mt)

    # b^* a_* : QM -> QN via R (the unrestricted right-hand side)
    QQN, projQQN = quotient_group(QN, MN_in_QN)
    QQM, projQQM = quotient_group(QM, MN_in_QM)
    idx = [None] * QQM.num_arrows
    for g in range(G.num_arrows):
        idx[projQQM.on_arrow(projM.on_arrow(g))] = projQQN.on_arrow(projN.on_arrow(g))
    w_rhs = word([infl(QN, MN_in_QN), _iso_letter(QQM, QQN, idx),
                  defl(QM, MN_in_QM)])
    step1 = bl(w_rhs) == bl(w_tilde)

    # step 2: deflativity (the N = M special case) for the comparison p
    w_pp = word([defl(G, Kp), infl(G, Kp)])
    QKp, projKp = quotient_group(G, Kp)
    step2 = bl(w_pp) == bl(word([], src=QKp))

    # step 3: fuse the quotient chains, (atilde p)_* = abar_* and
    # (btilde p)^* = bbar^*, writing p_* = Iso(psi) . Defl^G_{Kp}
    psi_idx = [None] * QKp.num_arrows
    for g in range(G.num_arrows):
        psi_idx[projKp.on_arrow(g)] = p_map[g]
    psi = _iso_letter(QKp, P, psi_idx)
    psi_inv = _iso_letter(P, QKp, _inv(psi_idx))
    w_a = word([phiM, defl(P, Mt), psi, defl(G, Kp)])
    w_b = word([infl(G, Kp), psi_inv, infl(P, Nt), _iso_letter(QM, QPN, _inv(idxN))])
    step3 = (bl(w_a) == bl(word([defl(G, N)]))
             and bl(w_b) == bl(word([infl(G, M)])))

    # conclusion: the unrestricted relation itself
    w_bouc = word([defl(G, N), infl(G, M)])
    derived = bl(w_bouc) == bl(w_rhs)

    return {"group": G.label, "M": sorted(M), "N": sorted(N),
            "step_span_2d": step1, "step_deflativity": step2,
            "step_fuse": step3, "derived_2d": derived,
            "ok": step1 and step2 and step3 and derived}
