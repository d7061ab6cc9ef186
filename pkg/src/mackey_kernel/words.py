"""
Words in the five elementary-span letters and their normalization.

A word ``[f1, f2, ..., fn]`` denotes the composite f1 . f2 . ... . fn
(the last letter is applied first).  ``normalize_word`` rewrites a word
into a sum of length-six canonical strings by the standard strategy:
inductions move to the far left, then deflations left of inflations and
restrictions, then inflations left of restrictions, isomorphisms fusing
along the way.  Each normal string is folded strictly (no iso-comma) into
a concrete span and canonicalized, so the pipeline is independent of the
iso-comma composition in ``spans``.

With ``deflative=True`` the commutation of deflations past inflations is
replaced by the unrestricted rule (valid for bisets only), and normal
strings take the five-letter biset shape instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import groups
from .groupoids import GroupoidFunctor
from .groups import quotient_group, sub_as_group
from .linear import ZZ, LinComb
from .spans import (PAIR_ALL, compose_spans, elementary_defl,
                    elementary_ind, elementary_infl, elementary_iso,
                    elementary_res, identity_lincomb)

RES, IND, INFL, DEFL, ISO = "Res", "Ind", "Infl", "Defl", "Iso"

# a sabotage hook for the negative-control verification build: when set,
# the Mackey rewrite drops one double-coset summand
SABOTAGE_NORMALIZER = False


@dataclass(frozen=True)
class Letter:
    kind: str
    group: object = None        # ambient group (Res/Ind/Infl/Defl)
    subset: frozenset = None    # subgroup or normal subgroup elements
    iso: object = None          # GroupoidFunctor for Iso letters

    @property
    def source(self):
        """The letter's source as a morphism (spans read left-to-right)."""
        if self.kind == RES:
            return self.group
        if self.kind == IND:
            return sub_as_group(self.group, self.subset)[0]
        if self.kind == INFL:
            return quotient_group(self.group, self.subset)[0]
        if self.kind == DEFL:
            return self.group
        return self.iso.source

    @property
    def target(self):
        if self.kind == RES:
            return sub_as_group(self.group, self.subset)[0]
        if self.kind == IND:
            return self.group
        if self.kind == INFL:
            return self.group
        if self.kind == DEFL:
            return quotient_group(self.group, self.subset)[0]
        return self.iso.target

    def span(self):
        if self.kind == RES:
            return elementary_res(self.group, self.subset)
        if self.kind == IND:
            return elementary_ind(self.group, self.subset)
        if self.kind == INFL:
            return elementary_infl(self.group, self.subset)
        if self.kind == DEFL:
            return elementary_defl(self.group, self.subset)
        return elementary_iso(self.iso)

    def is_trivial(self):
        if self.kind in (RES, IND):
            return len(self.subset) == self.group.num_arrows
        if self.kind in (INFL, DEFL):
            return len(self.subset) == 1
        return (self.iso.source is self.iso.target
                and self.iso.arrow_map == tuple(range(self.iso.source.num_arrows)))

    def render(self):
        if self.kind == ISO:
            return "Iso(%s->%s)" % (self.iso.source.label, self.iso.target.label)
        return "%s(%s,%s)" % (self.kind, self.group.label, sorted(self.subset))


def res(G, H):
    return Letter(RES, group=G, subset=frozenset(H))

def ind(G, H):
    return Letter(IND, group=G, subset=frozenset(H))

def infl(G, N):
    return Letter(INFL, group=G, subset=frozenset(N))

def defl(G, N):
    return Letter(DEFL, group=G, subset=frozenset(N))

def iso(f):
    return Letter(ISO, iso=f)


@dataclass(frozen=True)
class Word:
    """Composable letter sequence with explicit endpoints."""

    letters: tuple
    src: object
    dst: object

    def __post_init__(self):
        prev = self.dst
        for L in self.letters:
            if L.target is not prev:
                raise ValueError("word is not composable at %s" % L.render())
            prev = L.source
        if prev is not self.src:
            raise ValueError("word source does not match its letters")

    def render(self):
        if not self.letters:
            return "id_%s" % (self.src.label or "?")
        return " . ".join(L.render() for L in self.letters)


def word(letters, src=None, dst=None):
    letters = tuple(letters)
    if letters:
        return Word(letters, letters[-1].source, letters[0].target)
    if src is None:
        raise ValueError("an empty word needs an anchor object")
    return Word((), src, dst or src)


# -- coercion isomorphisms between subquotient copies ---------------------

def _iso_letter(A, B, index_map):
    f = GroupoidFunctor(A, B, (0,), tuple(index_map))
    if len(set(f.arrow_map)) != A.num_arrows or A.num_arrows != B.num_arrows:
        raise ValueError("coercion is not bijective")
    return iso(f)


def _sub_index(G, S):
    """Element of G -> index in sub_as_group(G, S)."""
    H, incl = sub_as_group(G, S)
    return H, {incl.on_arrow(i): i for i in range(H.num_arrows)}


def _subsub_coercion(G, H_set, K_in_H):
    """sub(H', K) -> sub(G, K-in-G) for H' = sub(G, H_set)."""
    Hgrp, inclH = sub_as_group(G, H_set)
    Kgrp, inclK = sub_as_group(Hgrp, K_in_H)
    K_in_G = frozenset(inclH.on_arrow(inclK.on_arrow(i)) for i in range(Kgrp.num_arrows))
    KG, pos = _sub_index(G, K_in_G)
    return Kgrp, KG, K_in_G, [pos[inclH.on_arrow(inclK.on_arrow(i))]
                              for i in range(Kgrp.num_arrows)]


def _quotquot_coercion(G, N_set, P_in_QN):
    """G/M' -> (G/N)/P for M' the preimage of P, mapping by representatives."""
    QN, projN = quotient_group(G, N_set)
    QQ, projP = quotient_group(QN, P_in_QN)
    M = frozenset(g for g in range(G.num_arrows)
                  if projP.on_arrow(projN.on_arrow(g)) == 0)
    QM, projM = quotient_group(G, M)
    index = [None] * QM.num_arrows
    for g in range(G.num_arrows):
        index[projM.on_arrow(g)] = projP.on_arrow(projN.on_arrow(g))
    return M, QM, QQ, index


# -- the rewriting engine --------------------------------------------------

class RewriteError(RuntimeError):
    pass


def _rule(L, R, deflative):
    """
    Rewrite for the adjacent pair L.R (L applied after R), or None if the
    pair is in canonical position.  Returns a list of replacement letter
    sequences, one per summand.
    """
    k1, k2 = L.kind, R.kind

    # fuse like letters
    if k1 == ISO and k2 == ISO:
        f = L.iso
        g = R.iso
        comp = tuple(f.arrow_map[g.arrow_map[a]] for a in range(g.source.num_arrows))
        return [[_iso_letter(g.source, f.target, comp)]]
    if k1 == IND and k2 == IND:
        # Ind^G_H . Ind^H'_K  ->  Ind^G_K' . coercion
        Kgrp, KG, K_in_G, idx = _subsub_coercion(L.group, L.subset, R.subset)
        return [[ind(L.group, K_in_G), _iso_letter(Kgrp, KG, idx)]]
    if k1 == RES and k2 == RES:
        # Res^H'_K . Res^G_H  ->  coercion . Res^G_K'
        Kgrp, KG, K_in_G, idx = _subsub_coercion(R.group, R.subset, L.subset)
        inv = [0] * len(idx)
        for i, v in enumerate(idx):
            inv[v] = i
        return [[_iso_letter(KG, Kgrp, inv), res(R.group, K_in_G)]]
    if k1 == DEFL and k2 == DEFL:
        # Defl^{G/N}_P . Defl^G_N  ->  coercion . Defl^G_M
        M, QM, QQ, idx = _quotquot_coercion(R.group, R.subset, L.subset)
        return [[_iso_letter(QM, QQ, idx), defl(R.group, M)]]
    if k1 == INFL and k2 == INFL:
        # Infl^G_N . Infl^{G/N}_P  ->  Infl^G_M . coercion
        M, QM, QQ, idx = _quotquot_coercion(L.group, L.subset, R.subset)
        inv = [0] * len(idx)
        for i, v in enumerate(idx):
            inv[v] = i
        return [[infl(L.group, M), _iso_letter(QQ, QM, inv)]]

    # move inductions to the far left
    if k2 == IND:
        if k1 == ISO:
            # Iso(f) . Ind^G_H -> Ind^G'_{f(H)} . Iso(f~)
            f = L.iso
            fH = frozenset(f.on_arrow(h) for h in R.subset)
            Hgrp, posH = _sub_index(f.source, R.subset)
            FH, posFH = _sub_index(f.target, fH)
            idx = [posFH[f.on_arrow(a)] for a in
                   (sub_as_group(f.source, R.subset)[1].on_arrow(i)
                    for i in range(Hgrp.num_arrows))]
            return [[ind(f.target, fH), _iso_letter(Hgrp, FH, idx)]]
        if k1 == RES:
            return _mackey_rule(L, R)
        if k1 == DEFL:
            # Defl^G_N . Ind^G_H -> Ind^{G/N}_{HN/N} . Iso(f) . Defl^{H'}_{H^N}
            G = L.group
            Q, projN = quotient_group(G, L.subset)
            Hgrp, inclH = sub_as_group(G, R.subset)
            HN_in_Q = frozenset(projN.on_arrow(h) for h in R.subset)
            HcapN = frozenset(i for i in range(Hgrp.num_arrows)
                              if projN.on_arrow(inclH.on_arrow(i)) == 0)
            QH, projH = quotient_group(Hgrp, HcapN)
            HNgrp, posHN = _sub_index(Q, HN_in_Q)
            idx = [None] * QH.num_arrows
            for i in range(Hgrp.num_arrows):
                idx[projH.on_arrow(i)] = posHN[projN.on_arrow(inclH.on_arrow(i))]
            return [[ind(Q, HN_in_Q), _iso_letter(QH, HNgrp, idx),
                     defl(Hgrp, HcapN)]]
        if k1 == INFL:
            # Infl^G_N . Ind^{G/N}_K -> Ind^G_H . Infl^{H'}_{N in H'} . coercion
            G = L.group
            Q, projN = quotient_group(G, L.subset)
            H_set = frozenset(g for g in range(G.num_arrows)
                              if projN.on_arrow(g) in R.subset)
            Hgrp, inclH = sub_as_group(G, H_set)
            N_in_H = frozenset(i for i in range(Hgrp.num_arrows)
                               if inclH.on_arrow(i) in L.subset)
            QH, projH = quotient_group(Hgrp, N_in_H)
            Kgrp, posK = _sub_index(Q, R.subset)
            idx = [None] * Kgrp.num_arrows
            for i in range(Hgrp.num_arrows):
                idx[posK[projN.on_arrow(inclH.on_arrow(i))]] = projH.on_arrow(i)
            return [[ind(G, H_set), infl(Hgrp, N_in_H),
                     _iso_letter(Kgrp, QH, idx)]]

    # move deflations left of restrictions and inflations
    if k2 == DEFL:
        if k1 == RES:
            # Res^{G/N}_K . Defl^G_N -> coercion . Defl^{H'}_{N} . Res^G_H
            G = R.group
            Q, projN = quotient_group(G, R.subset)
            H_set = frozenset(g for g in range(G.num_arrows)
                              if projN.on_arrow(g) in L.subset)
            Hgrp, inclH = sub_as_group(G, H_set)
            N_in_H = frozenset(i for i in range(Hgrp.num_arrows)
                               if inclH.on_arrow(i) in R.subset)
            QH, projH = quotient_group(Hgrp, N_in_H)
            Kgrp, posK = _sub_index(Q, L.subset)
            idx = [None] * QH.num_arrows
            for i in range(Hgrp.num_arrows):
                idx[projH.on_arrow(i)] = posK[projN.on_arrow(inclH.on_arrow(i))]
            return [[_iso_letter(QH, Kgrp, idx), defl(Hgrp, N_in_H),
                     res(G, H_set)]]
        if k1 == INFL and not deflative:
            return [_pullback_rule(L, R, mid=None)]

    if k1 == DEFL and k2 == ISO:
        # Defl^{G'}_{N'} . Iso(f) -> Iso(fbar) . Defl^G_{f^-1 N'}
        f = R.iso
        pre = frozenset(a for a in range(f.source.num_arrows)
                        if f.on_arrow(a) in L.subset)
        QG, projG = quotient_group(f.source, pre)
        QT, projT = quotient_group(f.target, L.subset)
        idx = [None] * QG.num_arrows
        for a in range(f.source.num_arrows):
            idx[projG.on_arrow(a)] = projT.on_arrow(f.on_arrow(a))
        return [[_iso_letter(QG, QT, idx), defl(f.source, pre)]]

    if k1 == DEFL and k2 == INFL and deflative:
        # unrestricted commutation, valid in the biset quotient
        G = L.group
        N, M = L.subset, R.subset
        MN = groups.subgroup_closure(G, N | M)
        QN, projN = quotient_group(G, N)
        QM, projM = quotient_group(G, M)
        MN_in_QN = frozenset(projN.on_arrow(g) for g in MN)
        MN_in_QM = frozenset(projM.on_arrow(g) for g in MN)
        QQN, projQN = quotient_group(QN, MN_in_QN)
        QQM, projQM = quotient_group(QM, MN_in_QM)
        idx = [None] * QQM.num_arrows
        for g in range(G.num_arrows):
            idx[projQM.on_arrow(projM.on_arrow(g))] = projQN.on_arrow(projN.on_arrow(g))
        return [[infl(QN, MN_in_QN), _iso_letter(QQM, QQN, idx),
                 defl(QM, MN_in_QM)]]

    # move inflations left of restrictions
    if k2 == INFL:
        if k1 == RES:
            # Res^G_H . Infl^G_N -> Infl^{H'}_{H cap N} . Iso(f^-1) . Res^{G/N}_{HN/N}
            G = R.group
            Q, projN = quotient_group(G, R.subset)
            Hgrp, inclH = sub_as_group(G, L.subset)
            HN_in_Q = frozenset(projN.on_arrow(h) for h in L.subset)
            HcapN = frozenset(i for i in range(Hgrp.num_arrows)
                              if projN.on_arrow(inclH.on_arrow(i)) == 0)
            QH, projH = quotient_group(Hgrp, HcapN)
            HNgrp, posHN = _sub_index(Q, HN_in_Q)
            idx = [None] * HNgrp.num_arrows
            for i in range(Hgrp.num_arrows):
                idx[posHN[projN.on_arrow(inclH.on_arrow(i))]] = projH.on_arrow(i)
            return [[infl(Hgrp, HcapN), _iso_letter(HNgrp, QH, idx),
                     res(Q, HN_in_Q)]]
        if k1 == ISO:
            # Iso(f) . Infl^G_N -> Infl^{G'}_{f(N)} . Iso(fbar)
            f = L.iso
            fN = frozenset(f.on_arrow(a) for a in R.subset)
            QG, projG = quotient_group(f.source, R.subset)
            QT, projT = quotient_group(f.target, fN)
            idx = [None] * QG.num_arrows
            for a in range(f.source.num_arrows):
                idx[projG.on_arrow(a)] = projT.on_arrow(f.on_arrow(a))
            return [[infl(f.target, fN), _iso_letter(QG, QT, idx)]]

    if k1 == RES and k2 == ISO:
        # Res^{G'}_{K'} . Iso(f) -> Iso(f|) . Res^G_{f^-1 K'}
        f = R.iso
        pre = frozenset(a for a in range(f.source.num_arrows)
                        if f.on_arrow(a) in L.subset)
        Pgrp, inclP = sub_as_group(f.source, pre)
        Kgrp, posK = _sub_index(f.target, L.subset)
        idx = [posK[f.on_arrow(inclP.on_arrow(i))] for i in range(Pgrp.num_arrows)]
        return [[_iso_letter(Pgrp, Kgrp, idx), res(f.source, pre)]]

    return None


def _mackey_rule(L, R):
    """Res^G_H . Ind^G_K -> sum over double cosets of Ind . Iso(c_x) . Res."""
    G = L.group
    H_set, K_set = L.subset, R.subset
    Hgrp, inclH = sub_as_group(G, H_set)
    Kgrp, inclK = sub_as_group(G, K_set)
    out = []
    for x, _size in groups.double_cosets(G, H_set, K_set):
        xinv = G.inverse[x]
        # H^x cap K inside K; H cap xKx^-1 inside H
        A_in_G = frozenset(g for g in K_set
                           if groups.conj(G, x, g) in H_set)
        B_in_G = frozenset(groups.conj(G, x, g) for g in A_in_G)
        A_in_K = frozenset(i for i in range(Kgrp.num_arrows)
                           if inclK.on_arrow(i) in A_in_G)
        B_in_H = frozenset(i for i in range(Hgrp.num_arrows)
                           if inclH.on_arrow(i) in B_in_G)
        Agrp, inclA = sub_as_group(Kgrp, A_in_K)
        Bgrp, posB = _sub_index(Hgrp, B_in_H)
        posH = {inclH.on_arrow(i): i for i in range(Hgrp.num_arrows)}
        idx = []
        for i in range(Agrp.num_arrows):
            g = inclK.on_arrow(inclA.on_arrow(i))
            idx.append(posB[posH[groups.conj(G, x, g)]])
        out.append([ind(Hgrp, B_in_H), _iso_letter(Agrp, Bgrp, idx),
                    res(Kgrp, A_in_K)])
    if SABOTAGE_NORMALIZER and len(out) > 1:
        out = out[:-1]
    return out


def _pullback_rule(L, R, mid=None):
    """
    Infl^G_M . [Iso] . Defl^{G'}_{N'} (span side) via the fiber product P
    of the two surjections onto the (possibly iso-glued) middle quotient;
    Ker pr_1 and Ker pr_2 meet trivially in P, which is relation 2.(d)'s
    hypothesis.
    """
    G = L.group
    Gp = R.group
    Q, projM = quotient_group(G, L.subset)
    Qp, projN = quotient_group(Gp, R.subset)
    if mid is None:
        assert Q is Qp, "pullback rule requires a shared middle quotient"
        glue = tuple(range(Qp.num_arrows))
    else:
        assert mid.iso.source is Qp and mid.iso.target is Q
        glue = mid.iso.arrow_map
    Ppar, pr1, pr2 = _product_cache(G, Gp)
    fiber = frozenset(p for p in range(Ppar.num_arrows)
                      if projM.on_arrow(pr1.on_arrow(p)) == glue[projN.on_arrow(pr2.on_arrow(p))])
    P, inclP = sub_as_group(Ppar, fiber)
    Ntil = frozenset(i for i in range(P.num_arrows)
                     if pr1.on_arrow(inclP.on_arrow(i)) == 0)
    Mtil = frozenset(i for i in range(P.num_arrows)
                     if pr2.on_arrow(inclP.on_arrow(i)) == 0)
    QN, projNt = quotient_group(P, Ntil)
    QM, projMt = quotient_group(P, Mtil)
    # phi: P/Ntil -> G by the first projection
    phi = [None] * QN.num_arrows
    psi = [None] * QM.num_arrows
    for i in range(P.num_arrows):
        phi[projNt.on_arrow(i)] = pr1.on_arrow(inclP.on_arrow(i))
        psi[projMt.on_arrow(i)] = pr2.on_arrow(inclP.on_arrow(i))
    inv_psi = [None] * Gp.num_arrows
    for i, v in enumerate(psi):
        inv_psi[v] = i
    return [_iso_letter(QN, G, phi), defl(P, Ntil), infl(P, Mtil),
            _iso_letter(Gp, QM, inv_psi)]


_products = {}


def _product_cache(G, H):
    key = (G.uid, H.uid)
    if key not in _products:
        _products[key] = groups.direct_product(G, H)
    return _products[key]


def _strip_trivial(letters):
    out = []
    for L in letters:
        if L.is_trivial():
            if L.kind in (RES, IND, INFL, DEFL):
                continue  # these degenerate to actual identities
            continue
        out.append(L)
    return out


MAX_REWRITE_STEPS = 100000


def rewrite_to_normal(w, deflative=False):
    """
    Rewrite a word into a list of letter sequences in canonical shape.
    Purely symbolic: no iso-comma squares are formed.
    """
    agenda = [list(_strip_trivial(w.letters))]
    done = []
    steps = 0
    while agenda:
        cur = agenda.pop()
        i = 0
        rewritten = False
        while i + 1 <= len(cur) - 1:
            repl = _rule(cur[i], cur[i + 1], deflative)
            if repl is not None:
                for alt in repl:
                    nxt = cur[:i] + _strip_trivial(alt) + cur[i + 2:]
                    agenda.append(nxt)
                rewritten = True
                break
            i += 1
        if not rewritten and not deflative:
            # an isomorphism wedged between Infl and Defl blocks the pair
            # rules; absorb it into the fiber product
            for i in range(len(cur) - 2):
                if (cur[i].kind, cur[i + 1].kind, cur[i + 2].kind) == (INFL, ISO, DEFL):
                    alt = _pullback_rule(cur[i], cur[i + 2], mid=cur[i + 1])
                    agenda.append(cur[:i] + _strip_trivial(alt) + cur[i + 3:])
                    rewritten = True
                    break
        steps += 1
        if steps > MAX_REWRITE_STEPS:
            raise RewriteError("rewriting did not terminate")
        if not rewritten:
            done.append(cur)
    return done


_SPAN_ORDER = {IND: 0, DEFL: 2, INFL: 3, RES: 5}
_BISET_ORDER = {IND: 0, INFL: 1, DEFL: 3, RES: 4}


def _check_shape(letters, deflative):
    order = _BISET_ORDER if deflative else _SPAN_ORDER
    ranks = []
    for L in letters:
        if L.kind != ISO:
            ranks.append(order[L.kind])
    if ranks != sorted(ranks) or len(ranks) != len(set(ranks)):
        raise RewriteError("normal form has unexpected shape: %s"
                           % [L.render() for L in letters])


def fold_strict(letters, src, dst):
    """
    Fold a canonical-shape word into a concrete span without iso-comma
    squares.  Covariant letters extend the forward leg; contravariant
    letters must meet an invertible forward leg.
    """
    apex = src
    b = tuple(range(src.num_arrows))   # apex -> src
    a = tuple(range(src.num_arrows))   # apex -> current target
    cur_target = src
    for L in reversed(letters):
        sp = L.span()
        if L.kind in (IND, DEFL, ISO):
            d = sp.right_leg
            a = tuple(d.on_arrow(v) for v in a)
            cur_target = d.target
        else:
            # Res / Infl: contravariant, pull back along an invertible leg
            c = sp.left_leg
            if len(set(a)) != len(a) or cur_target.num_arrows != len(set(a)):
                raise RewriteError("strict fold hit a non-invertible leg")
            a_inv = {v: i for i, v in enumerate(a)}
            T = sp.right_leg.source
            b = tuple(b[a_inv[c.on_arrow(t)]] for t in range(T.num_arrows))
            a = tuple(range(T.num_arrows))
            apex = T
            cur_target = T
    assert cur_target is dst
    return apex, b, a


def normalize_word(w, ring=ZZ, budget=None):
    """
    LinComb of SixForm basis keys for a word, computed by rewriting.
    Must agree with folding compose_spans over the word.
    """
    from .spans import _canonical_sixform, BasisKey
    normals = rewrite_to_normal(w, deflative=False)
    out = LinComb(w.src, w.dst, ring=ring)
    for letters in normals:
        _check_shape(letters, False)
        apex_src = letters[-1].source if letters else w.src
        apex, b, a = fold_strict(letters, apex_src, w.dst)
        form = _canonical_sixform(w.src, w.dst, apex, b, a, budget=budget)
        out.add_term(BasisKey(0, 0, form))
    return out


_letter_span_cache = {}
_compose_memo = {}


def letter_span(L):
    if L not in _letter_span_cache:
        _letter_span_cache[L] = L.span()
    return _letter_span_cache[L]


def evaluate_word_via_spans(w, pair=PAIR_ALL, ring=ZZ, budget=None):
    """The same morphism computed by folding iso-comma composition."""
    from .spans import representative_span
    acc = identity_lincomb(w.src, ring=ring)
    for L in reversed(w.letters):
        sp = letter_span(L)
        out = LinComb(acc.src, sp.dst, ring=ring)
        for key, coeff in acc.terms.items():
            memo_key = (key, L)
            hit = _compose_memo.get(memo_key)
            if hit is None:
                rep = representative_span(acc.src, acc.dst, key)
                hit = dict(compose_spans(rep, sp, pair=pair, ring=ZZ,
                                         budget=budget).terms)
                _compose_memo[memo_key] = hit
            for k2, c2 in hit.items():
                out.add_term(k2, c2 * coeff)
        acc = out
    return acc
