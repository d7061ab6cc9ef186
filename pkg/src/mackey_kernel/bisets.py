"""
Bisets between finite groupoids and their calculus: coend tensor product,
isomorphism testing, transitive decomposition, the five-letter canonical
form (one subgroup of G x H up to conjugacy), elementary bisets and the
biset-side relation checks.

A biset U: H -> G is a functor H^op x G -> set; for one-object endpoints
this is a set with commuting left G- and right H-actions.  Composition is
written ``biset_tensor(V, U) = V (.) U`` for U: H -> G and V: G -> K.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import groups
from .groups import quotient_group, sub_as_group
from .linear import ZZ, LinComb


class Biset:
    """
    Finite biset with explicit elements and action tables.  ``left``
    maps (G-arrow, element) -> element when the arrow starts at the
    element's target object; ``right`` maps (element, H-arrow) -> element
    when the arrow ends at the element's source object.
    """

    __slots__ = ("source", "target", "src_obj", "tgt_obj", "left", "right",
                 "label")

    def __init__(self, source, target, src_obj, tgt_obj, left, right,
                 label=None, check=True):
        self.source = source       # H
        self.target = target       # G
        self.src_obj = tuple(src_obj)
        self.tgt_obj = tuple(tgt_obj)
        self.left = dict(left)
        self.right = dict(right)
        self.label = label
        if check:
            self.validate()

    @property
    def size(self):
        return len(self.src_obj)

    def elements_at(self, h_obj, g_obj):
        return [u for u in range(self.size)
                if self.src_obj[u] == h_obj and self.tgt_obj[u] == g_obj]

    def act_left(self, g_arrow, u):
        return self.left[(g_arrow, u)]

    def act_right(self, u, h_arrow):
        return self.right[(u, h_arrow)]

    def validate(self):
        H, G = self.source, self.target
        n = self.size
        for u in range(n):
            for g in G.arrows_from(self.tgt_obj[u]):
                v = self.left.get((g, u))
                if v is None or self.tgt_obj[v] != G.tgt[g] or self.src_obj[v] != self.src_obj[u]:
                    raise ValueError("left action ill-formed at (%s, %s)" % (g, u))
            for h in range(H.num_arrows):
                if H.tgt[h] != self.src_obj[u]:
                    continue
                v = self.right.get((u, h))
                if v is None or self.src_obj[v] != H.src[h] or self.tgt_obj[v] != self.tgt_obj[u]:
                    raise ValueError("right action ill-formed at (%s, %s)" % (u, h))
        for u in range(n):
            if self.left[(G.identity[self.tgt_obj[u]], u)] != u:
                raise ValueError("left identity does not fix element %d" % u)
            if self.right[(u, H.identity[self.src_obj[u]])] != u:
                raise ValueError("right identity does not fix element %d" % u)
        for u in range(n):
            for g1 in G.arrows_from(self.tgt_obj[u]):
                v = self.left[(g1, u)]
                for g2 in G.arrows_from(G.tgt[g1]):
                    if self.left[(g2, v)] != self.left[(G.comp(g2, g1), u)]:
                        raise ValueError("left action not functorial")
            for h1 in range(H.num_arrows):
                if H.tgt[h1] != self.src_obj[u]:
                    continue
                v = self.right[(u, h1)]
                for h2 in range(H.num_arrows):
                    if H.tgt[h2] != H.src[h1]:
                        continue
                    if self.right[(v, h2)] != self.right[(u, H.comp(h1, h2))]:
                        raise ValueError("right action not functorial")
        for u in range(n):
            for g in G.arrows_from(self.tgt_obj[u]):
                for h in range(H.num_arrows):
                    if H.tgt[h] != self.src_obj[u]:
                        continue
                    if self.right[(self.left[(g, u)], h)] != self.left[(g, self.right[(u, h)])]:
                        raise ValueError("left and right actions do not commute")

    def __repr__(self):
        return "<biset %s -> %s, %d elements%s>" % (
            self.source.label or self.source.uid,
            self.target.label or self.target.uid,
            self.size, " (%s)" % self.label if self.label else "")


def group_biset(H, G, size, left_table, right_table, label=None, check=True):
    """Biset between one-object groupoids from dense action tables."""
    left = {(g, u): left_table[g][u] for g in range(G.num_arrows) for u in range(size)}
    right = {(u, h): right_table[u][h] for u in range(size) for h in range(H.num_arrows)}
    return Biset(H, G, (0,) * size, (0,) * size, left, right, label=label, check=check)


def identity_biset(G):
    """The regular (G, G)-biset, unit of the tensor product."""
    n = G.num_arrows
    left = [[G.comp(g, u) for u in range(n)] for g in range(n)]
    right = [[G.comp(u, h) for h in range(n)] for u in range(n)]
    return group_biset(G, G, n, left, right, label="id", check=False)


def empty_biset(H, G):
    return Biset(H, G, (), (), {}, {}, label="0", check=False)


def biset_disjoint_union(U, V):
    if U.source is not V.source or U.target is not V.target:
        raise ValueError("biset sum needs matching endpoints")
    n = U.size
    left = dict(U.left)
    right = dict(U.right)
    for (g, u), v in V.left.items():
        left[(g, u + n)] = v + n
    for (u, h), v in V.right.items():
        right[(u + n, h)] = v + n
    return Biset(U.source, U.target, U.src_obj + V.src_obj,
                 U.tgt_obj + V.tgt_obj, left, right, check=False)


# -- elementary bisets (group endpoints) -----------------------------------

def elementary_biset_iso(f):
    """Iso(f): f.source -> f.target; the set f.target with twisted right action."""
    Gp, G = f.source, f.target
    n = G.num_arrows
    left = [[G.comp(g, u) for u in range(n)] for g in range(n)]
    right = [[G.comp(u, f.on_arrow(h)) for h in range(Gp.num_arrows)] for u in range(n)]
    return group_biset(Gp, G, n, left, right, label="Iso", check=False)


def elementary_biset_res(G, H_set):
    """Res^G_H = {}_H G_G : G -> H'."""
    Hgrp, incl = sub_as_group(G, H_set)
    n = G.num_arrows
    left = [[G.comp(incl.on_arrow(h), u) for u in range(n)] for h in range(Hgrp.num_arrows)]
    right = [[G.comp(u, g) for g in range(n)] for u in range(n)]
    return group_biset(G, Hgrp, n, left, right, label="Res", check=False)


def elementary_biset_ind(G, H_set):
    """Ind^G_H = {}_G G_H : H' -> G."""
    Hgrp, incl = sub_as_group(G, H_set)
    n = G.num_arrows
    left = [[G.comp(g, u) for u in range(n)] for g in range(n)]
    right = [[G.comp(u, incl.on_arrow(h)) for h in range(Hgrp.num_arrows)] for u in range(n)]
    return group_biset(Hgrp, G, n, left, right, label="Ind", check=False)


def elementary_biset_defl(G, N_set):
    """Defl^G_{G/N} = {}_{G/N}(G/N)_G : G -> G/N."""
    Q, proj = quotient_group(G, N_set)
    n = Q.num_arrows
    left = [[Q.comp(q, u) for u in range(n)] for q in range(n)]
    right = [[Q.comp(u, proj.on_arrow(g)) for g in range(G.num_arrows)] for u in range(n)]
    return group_biset(G, Q, n, left, right, label="Defl", check=False)


def elementary_biset_infl(G, N_set):
    """Infl^G_{G/N} = {}_G(G/N)_{G/N} : G/N -> G."""
    Q, proj = quotient_group(G, N_set)
    n = Q.num_arrows
    left = [[Q.comp(proj.on_arrow(g), u) for u in range(n)] for g in range(G.num_arrows)]
    right = [[Q.comp(u, q) for q in range(n)] for u in range(n)]
    return group_biset(Q, G, n, left, right, label="Infl", check=False)


# -- tensor (coend) ---------------------------------------------------------

class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        i, j = self.find(i), self.find(j)
        if i != j:
            self.parent[max(i, j)] = min(i, j)


def biset_tensor(V, U, check_welldef=True):
    """
    V (.) U for U: H -> G and V: G -> K, as the coend over the middle
    groupoid: pairs (v, u) with matching middle object, modulo
    (v.phi, u) ~ (v, phi.u) for arrows phi of G, computed by union-find.
    """
    if U.target is not V.source:
        raise ValueError("tensor needs a matching middle groupoid")
    G = U.target
    pairs = []
    for v in range(V.size):
        for u in range(U.size):
            if V.src_obj[v] == U.tgt_obj[u]:
                pairs.append((v, u))
    index = {p: i for i, p in enumerate(pairs)}
    uf = _UnionFind(len(pairs))
    # relations (v.phi, u) ~ (v, phi.u) for phi: g1 -> g2,
    # v with src_obj g2, u with tgt_obj g1
    for v in range(V.size):
        g2 = V.src_obj[v]
        for phi in range(G.num_arrows):
            if G.tgt[phi] != g2:
                continue
            g1 = G.src[phi]
            vphi = V.right[(v, phi)]
            for u in range(U.size):
                if U.tgt_obj[u] != g1:
                    continue
                phiu = U.left[(phi, u)]
                uf.union(index[(vphi, u)], index[(v, phiu)])
    reps = sorted({uf.find(i) for i in range(len(pairs))})
    cls = {r: k for k, r in enumerate(reps)}
    n = len(reps)
    src_obj = [U.src_obj[pairs[r][1]] for r in reps]
    tgt_obj = [V.tgt_obj[pairs[r][0]] for r in reps]
    K, H = V.target, U.source
    left, right = {}, {}
    for k, r in enumerate(reps):
        v, u = pairs[r]
        for g in K.arrows_from(tgt_obj[k]):
            left[(g, k)] = cls[uf.find(index[(V.left[(g, v)], u)])]
        for h in range(H.num_arrows):
            if H.tgt[h] != src_obj[k]:
                continue
            right[(k, h)] = cls[uf.find(index[(v, U.right[(u, h)])])]
    out = Biset(H, K, src_obj, tgt_obj, left, right, check=False)
    if check_welldef:
        # induced actions must not depend on representatives
        for i, (v, u) in enumerate(pairs):
            k = cls[uf.find(i)]
            for g in K.arrows_from(V.tgt_obj[v]):
                if out.left[(g, k)] != cls[uf.find(index[(V.left[(g, v)], u)])]:
                    raise AssertionError("tensor left action not well-defined")
            for h in range(H.num_arrows):
                if H.tgt[h] != U.src_obj[u]:
                    continue
                if out.right[(k, h)] != cls[uf.find(index[(v, U.right[(u, h)])])]:
                    raise AssertionError("tensor right action not well-defined")
    return out


# -- orbits, freeness, decomposition ---------------------------------------

def _orbit_partition(U):
    uf = _UnionFind(U.size)
    for (g, u), v in U.left.items():
        uf.union(u, v)
    for (u, h), v in U.right.items():
        uf.union(u, v)
    reps = sorted({uf.find(i) for i in range(U.size)})
    return uf, reps


def transitive_decomposition(U):
    """Orbits of the combined two-sided action, as sub-bisets."""
    uf, reps = _orbit_partition(U)
    out = []
    for r in reps:
        elems = [u for u in range(U.size) if uf.find(u) == r]
        pos = {u: i for i, u in enumerate(elems)}
        left = {(g, pos[u]): pos[v] for (g, u), v in U.left.items() if u in pos}
        right = {(pos[u], h): pos[v] for (u, h), v in U.right.items() if u in pos}
        out.append(Biset(U.source, U.target,
                         tuple(U.src_obj[u] for u in elems),
                         tuple(U.tgt_obj[u] for u in elems),
                         left, right, check=False))
    return out


def is_right_free(U):
    """Freeness of the right action, checked pointwise."""
    H = U.source
    for u in range(U.size):
        for h in range(H.num_arrows):
            if H.tgt[h] != U.src_obj[u]:
                continue
            if U.right[(u, h)] == u and h != H.identity[U.src_obj[u]]:
                return False
    return True


def is_left_free(U):
    G = U.target
    for u in range(U.size):
        for g in G.arrows_from(U.tgt_obj[u]):
            if U.left[(g, u)] == u and g != G.identity[U.tgt_obj[u]]:
                return False
    return True


def is_bifree(U):
    return is_right_free(U) and is_left_free(U)


# -- the five-letter canonical form ----------------------------------------

@dataclass(frozen=True)
class FiveForm:
    """
    Canonical form of a transitive biset between groups: the point
    stabilizer L <= G x H (elements encoded g*|H| + h), minimized over
    simultaneous conjugation in G x H.
    """

    src_uid: int   # H
    dst_uid: int   # G
    src_order: int
    dst_order: int
    stabilizer: tuple

    def sort_key(self):
        return (self.src_uid, self.dst_uid, len(self.stabilizer), self.stabilizer)

    def _pairs(self):
        nH = self.src_order
        return [(p // nH, p % nH) for p in self.stabilizer]

    def subgroup_D(self):
        return frozenset(g for g, h in self._pairs())

    def kernel_C(self):
        return frozenset(g for g, h in self._pairs() if h == 0)

    def subgroup_B(self):
        return frozenset(h for g, h in self._pairs())

    def kernel_A(self):
        return frozenset(h for g, h in self._pairs() if g == 0)

    def size(self):
        return (self.src_order * self.dst_order) // len(self.stabilizer)

    def is_identity_like(self):
        # the diagonal of G x G
        if self.src_order != self.dst_order:
            return False
        if len(self.stabilizer) != self.src_order:
            return False
        return (self.kernel_A() == frozenset([0])
                and self.kernel_C() == frozenset([0])
                and len(self.subgroup_B()) == self.src_order)

    def render(self):
        if self.is_identity_like():
            return "id"
        return "L={D=%s,C=%s,B=%s,A=%s}" % (
            sorted(self.subgroup_D()), sorted(self.kernel_C()),
            sorted(self.subgroup_B()), sorted(self.kernel_A()))

    def __repr__(self):
        return "<FiveForm %s>" % self.render()


def _canonical_stabilizer(G, H, L_pairs):
    """Minimize the encoded subgroup of G x H over (x, y)-conjugation."""
    nH = H.num_arrows
    best = None
    for x in range(G.num_arrows):
        for y in range(H.num_arrows):
            enc = tuple(sorted(groups.conj(G, x, g) * nH + groups.conj(H, y, h)
                               for g, h in L_pairs))
            if best is None or enc < best:
                best = enc
    return best


def fiveform_from_stabilizer(G, H, L_pairs):
    return FiveForm(H.uid, G.uid, H.num_arrows, G.num_arrows,
                    _canonical_stabilizer(G, H, L_pairs))


def bouc_canonical_form(U):
    """
    FiveForm of a transitive biset between one-object endpoints, via the
    stabilizer of its least element under (g, h) . u = g.u.h^-1.
    """
    if U.source.num_objects != 1 or U.target.num_objects != 1:
        raise ValueError("bouc_canonical_form requires group endpoints")
    if U.size == 0:
        raise ValueError("empty biset is not transitive")
    if len(_orbit_partition(U)[1]) != 1:
        raise ValueError("biset is not transitive")
    G, H = U.target, U.source
    L = [(g, h) for g in range(G.num_arrows) for h in range(H.num_arrows)
         if U.left[(g, U.right[(0, H.inverse[h])])] == 0]
    return fiveform_from_stabilizer(G, H, L)


def biset_from_fiveform(G, H, form):
    """The transitive biset (G x H)/L realizing a FiveForm."""
    nH = H.num_arrows
    L = form.stabilizer
    P, _, _ = _gxh(G, H)
    Lset = frozenset(L)
    cosets = {}
    for p in range(P.num_arrows):
        c = frozenset(P.comp(p, l) for l in Lset)
        cosets.setdefault(min(c), c)
    reps = sorted(cosets)
    pos = {}
    for k, r in enumerate(reps):
        for p in cosets[r]:
            pos[p] = k
    n = len(reps)
    # g . (a,b)L . h = (g a, h^-1 b) L
    left = [[0] * n for _ in range(G.num_arrows)]
    right = [[0] * H.num_arrows for _ in range(n)]
    for k, r in enumerate(reps):
        a, b = r // nH, r % nH
        for g in range(G.num_arrows):
            left[g][k] = pos[P.comp(g * nH, r)]
        for h in range(H.num_arrows):
            right[k][h] = pos[a * nH + H.comp(H.inverse[h], b)]
    return group_biset(H, G, n, left, right, check=False)


_gxh_cache = {}


def _gxh(G, H):
    key = (G.uid, H.uid)
    if key not in _gxh_cache:
        _gxh_cache[key] = groups.direct_product(G, H)
    return _gxh_cache[key]


# -- isomorphism ------------------------------------------------------------

def _transitive_iso_search(U, V):
    """Brute-force equivariant matching of two transitive bisets."""
    if U.size != V.size:
        return False
    G, H = U.target, U.source
    u0 = 0
    for v0 in range(V.size):
        if U.src_obj[u0] != V.src_obj[v0] or U.tgt_obj[u0] != V.tgt_obj[v0]:
            continue
        mapping = {u0: v0}
        frontier = [u0]
        ok = True
        while frontier and ok:
            nxt = []
            for u in frontier:
                moves = [(("L", g), U.left[(g, u)]) for g in G.arrows_from(U.tgt_obj[u])]
                moves += [(("R", h), U.right[(u, h)]) for h in range(H.num_arrows)
                          if H.tgt[h] == U.src_obj[u]]
                for mv, u2 in moves:
                    if mv[0] == "L":
                        v2 = V.left[(mv[1], mapping[u])]
                    else:
                        v2 = V.right[(mapping[u], mv[1])]
                    if u2 in mapping:
                        if mapping[u2] != v2:
                            ok = False
                            break
                    else:
                        mapping[u2] = v2
                        nxt.append(u2)
                if not ok:
                    break
            frontier = nxt
        if ok and len(mapping) == U.size and len(set(mapping.values())) == U.size:
            return True
    return False


def biset_iso(U, V, method="auto"):
    """
    Isomorphism of bisets over the same endpoints.  "search" matches
    orbits by brute-force equivariant search; "fast" compares FiveForm
    multisets for group endpoints; "auto" prefers the fast path.
    """
    if U.source is not V.source or U.target is not V.target:
        raise ValueError("biset endpoints do not match")
    group_like = U.source.num_objects == 1 and U.target.num_objects == 1
    if method == "auto":
        method = "fast" if group_like else "search"
    if method == "fast":
        if not group_like:
            raise ValueError("fast path needs group endpoints")
        return biset_lincomb(U).terms == biset_lincomb(V).terms
    ones = transitive_decomposition(U)
    twos = transitive_decomposition(V)
    if len(ones) != len(twos):
        return False
    used = [False] * len(twos)
    for P in ones:
        hit = None
        for j, Q in enumerate(twos):
            if used[j]:
                continue
            if _transitive_iso_search(P, Q):
                hit = j
                break
        if hit is None:
            return False
        used[hit] = True
    return True


@dataclass(frozen=True)
class BisetKey:
    """Transitive-biset key between groupoids: components plus FiveForm."""

    x_comp: int
    y_comp: int
    form: FiveForm

    def sort_key(self):
        return (self.x_comp, self.y_comp) + self.form.sort_key()

    def render(self):
        if self.x_comp == 0 and self.y_comp == 0:
            return "[%s]" % self.form.render()
        return "[c%d->c%d|%s]" % (self.x_comp, self.y_comp, self.form.render())


def biset_lincomb(U, ring=ZZ):
    """Decomposition of a biset into transitive FiveForm classes."""
    if U.source.num_objects != 1 or U.target.num_objects != 1:
        return _groupoid_biset_lincomb(U, ring)
    out = LinComb(U.source, U.target, ring=ring)
    for piece in transitive_decomposition(U):
        out.add_term(BisetKey(0, 0, bouc_canonical_form(piece)))
    return out


def _vertex_data(X):
    from .spans import _vertex_groups
    return _vertex_groups(X)


def _groupoid_biset_lincomb(U, ring):
    """
    Reduce a biset between groupoids to FiveForm keys per component pair
    of the endpoints, through the vertex groups.
    """
    H, G = U.source, U.target
    vg_H = _vertex_data(H)
    vg_G = _vertex_data(G)
    labels_H = H.component_of()[0] if H.num_objects > 1 else (0,)
    labels_G = G.component_of()[0] if G.num_objects > 1 else (0,)
    roots_H = [incl.on_obj(0) for _, incl in vg_H]
    roots_G = [incl.on_obj(0) for _, incl in vg_G]
    out = LinComb(H, G, ring=ring)
    # restrict to elements sitting over the component roots: every orbit
    # meets them, and the vertex-group actions classify it
    for cH, (VH, inclH) in enumerate(vg_H):
        for cG, (VG, inclG) in enumerate(vg_G):
            elems = [u for u in range(U.size)
                     if U.src_obj[u] == roots_H[cH] and U.tgt_obj[u] == roots_G[cG]]
            if not elems:
                continue
            pos = {u: i for i, u in enumerate(elems)}
            left = {}
            right = {}
            for i, u in enumerate(elems):
                for a in range(VG.num_arrows):
                    left[(a, i)] = pos[U.left[(inclG.on_arrow(a), u)]]
                for b in range(VH.num_arrows):
                    right[(i, b)] = pos[U.right[(u, inclH.on_arrow(b))]]
            piece = Biset(VH, VG, (0,) * len(elems), (0,) * len(elems),
                          left, right, check=False)
            for orbit in transitive_decomposition(piece):
                out.add_term(BisetKey(cH, cG, bouc_canonical_form(orbit)))
    return out


# -- relation checks and tables ---------------------------------------------

def check_biset_relation(instance, ring=ZZ):
    """
    Evaluate both sides of a relation instance through the tensor
    pipeline and compare the transitive decompositions.  Family 2.(d) is
    taken unrestricted here (see relations.unrestricted_2d_instances).
    """
    from .relations import check_relation
    return check_relation(instance, pipelines=("bisets",), ring=ring)["ok"]


def letter_to_biset(L):
    from .words import RES, IND, INFL, DEFL
    if L.kind == RES:
        return elementary_biset_res(L.group, L.subset)
    if L.kind == IND:
        return elementary_biset_ind(L.group, L.subset)
    if L.kind == INFL:
        return elementary_biset_infl(L.group, L.subset)
    if L.kind == DEFL:
        return elementary_biset_defl(L.group, L.subset)
    return elementary_biset_iso(L.iso)


def evaluate_word_as_biset(word_or_letters):
    """Tensor of the homonymous elementary bisets, outermost letter last."""
    letters = getattr(word_or_letters, "letters", word_or_letters)
    if not letters:
        return identity_biset(word_or_letters.src)
    acc = None
    for L in reversed(letters):
        B = letter_to_biset(L)
        acc = B if acc is None else biset_tensor(B, acc)
    return acc


def transitive_classes(G, H):
    """FiveForms of all transitive (G, H)-biset classes."""
    P, pr1, pr2 = _gxh(G, H)
    out = []
    seen = set()
    for cls in groups.subgroup_conjugacy_classes(P):
        L_pairs = [(pr1.on_arrow(p), pr2.on_arrow(p)) for p in cls[0]]
        form = fiveform_from_stabilizer(G, H, L_pairs)
        if form not in seen:
            seen.add(form)
            out.append(form)
    return sorted(out, key=lambda f: f.sort_key())


def double_burnside_table(G, bound=8):
    """
    Multiplication table of the double Burnside semiring of G: basis the
    transitive (G, G)-biset classes, entries the decompositions of the
    pairwise tensor products.
    """
    if G.num_arrows > bound:
        raise ValueError("double_burnside_table bound exceeded")
    basis = transitive_classes(G, G)
    reps = [biset_from_fiveform(G, G, f) for f in basis]
    table = []
    for Ui in reps:
        row = []
        for Uj in reps:
            row.append(biset_lincomb(biset_tensor(Ui, Uj)))
        table.append(row)
    return basis, table
