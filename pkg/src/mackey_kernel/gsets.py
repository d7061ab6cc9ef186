"""
Finite G-sets, equivariant maps, twisting maps, the transport groupoid,
Burnside tables, and the fused 2-category checks.

The transport groupoid of a G-set X has the points of X as objects and
pairs (g, x): x -> gx as arrows, with the faithful projection to G.
Twisting maps tau: X -> G^c (conjugation action) are the extra 2-cells of
the fused world; they biject with natural transformations between
transported functors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import groups
from .groupoids import (FiniteGroupoid, GroupoidFunctor, NatTransformation,
                        compose_functors, identity_nat, is_mackey_square,
                        iso_comma)
from .groups import conj
from .linear import ZZ, LinComb


class GSet:
    """Finite left G-set over a one-object groupoid G."""

    __slots__ = ("group", "points", "action", "label", "uid", "_cache")
    _uid = itertools.count()

    def __init__(self, group, num_points, action, label=None, check=True):
        self.group = group
        self.points = range(num_points)
        self.action = dict(action)  # (g, x) -> y
        self.label = label
        self.uid = next(GSet._uid)
        self._cache = {}
        if check:
            self.validate()

    @property
    def size(self):
        return len(self.points)

    def act(self, g, x):
        return self.action[(g, x)]

    def validate(self):
        G = self.group
        if G.num_objects != 1:
            raise ValueError("GSet needs a one-object group")
        for x in self.points:
            if self.act(0, x) != x:
                raise ValueError("identity must act trivially at %d" % x)
            for g in range(G.num_arrows):
                y = self.action.get((g, x))
                if y is None or y not in self.points:
                    raise ValueError("action undefined at (%d, %d)" % (g, x))
                for h in range(G.num_arrows):
                    if self.act(h, y) != self.act(G.comp(h, g), x):
                        raise ValueError("action not compatible at (%d, %d, %d)" % (h, g, x))

    def orbit(self, x):
        return frozenset(self.act(g, x) for g in range(self.group.num_arrows))

    def stabilizer(self, x):
        return frozenset(g for g in range(self.group.num_arrows) if self.act(g, x) == x)

    def __repr__(self):
        return "<%s-set %s: %d points>" % (self.group.label, self.label or self.uid, self.size)


@dataclass(frozen=True)
class GMap:
    source: GSet
    target: GSet
    point_map: tuple

    def __post_init__(self):
        if self.source.group is not self.target.group:
            raise ValueError("GMap needs a common group")
        G = self.source.group
        for x in self.source.points:
            for g in range(G.num_arrows):
                if self.point_map[self.source.act(g, x)] != self.target.act(g, self.point_map[x]):
                    raise ValueError("map is not equivariant at (%d, %d)" % (g, x))

    def __call__(self, x):
        return self.point_map[x]


@dataclass(frozen=True)
class TwistingMap:
    """tau: X -> G^c with tau(gx) = g tau(x) g^-1."""

    gset: GSet
    values: tuple

    def __post_init__(self):
        G = self.gset.group
        for x in self.gset.points:
            for g in range(G.num_arrows):
                if self.values[self.gset.act(g, x)] != conj(G, g, self.values[x]):
                    raise ValueError("twisting map is not equivariant")

    def twist(self, f):
        """tau * f, for f out of this twisting map's G-set."""
        Y = f.target
        return GMap(f.source, Y,
                    tuple(Y.act(self.values[x], f(x)) for x in f.source.points))


def identity_gmap(X):
    return GMap(X, X, tuple(X.points))


def compose_gmaps(g, f):
    if f.target is not g.source:
        raise ValueError("GMaps not composable")
    return GMap(f.source, g.target, tuple(g(f(x)) for x in f.source.points))


def trivial_gset(G, n=1, label=None):
    action = {(g, x): x for g in range(G.num_arrows) for x in range(n)}
    return GSet(G, n, action, label=label or ("pt" if n == 1 else None), check=False)


def coset_gset(G, H_set, label=None):
    """The orbit G/H with points the cosets gH, sorted by least element."""
    H_set = frozenset(H_set)
    cosets = {}
    for g in range(G.num_arrows):
        c = frozenset(G.comp(g, h) for h in H_set)
        cosets.setdefault(min(c), c)
    reps = sorted(cosets)
    pos = {}
    for k, r in enumerate(reps):
        for g in cosets[r]:
            pos[g] = k
    action = {(g, k): pos[G.comp(g, reps[k])]
              for g in range(G.num_arrows) for k in range(len(reps))}
    lab = label or "%s/{%s}" % (G.label, ",".join(map(str, sorted(H_set))))
    X = GSet(G, len(reps), action, label=lab, check=False)
    X._cache["coset_reps"] = tuple(reps)
    return X


def gset_disjoint_union(X, Y, label=None):
    if X.group is not Y.group:
        raise ValueError("disjoint union needs a common group")
    n = X.size
    action = dict(X.action)
    for (g, x), y in Y.action.items():
        action[(g, x + n)] = y + n
    return GSet(X.group, n + Y.size, action, label=label, check=False)


def gset_product(X, Y, label=None):
    """Product with the diagonal action; also the pullback over a point."""
    if X.group is not Y.group:
        raise ValueError("product needs a common group")
    m = Y.size
    action = {}
    for g in range(X.group.num_arrows):
        for x in X.points:
            for y in Y.points:
                action[(g, x * m + y)] = X.act(g, x) * m + Y.act(g, y)
    return GSet(X.group, X.size * m, action, label=label, check=False)


def orbit_decomposition(X):
    """Transitive pieces with a chosen point's stabilizer, least point first."""
    seen = set()
    out = []
    for x in sorted(X.points):
        if x in seen:
            continue
        orb = sorted(X.orbit(x))
        seen.update(orb)
        pos = {p: i for i, p in enumerate(orb)}
        action = {(g, pos[p]): pos[X.act(g, p)]
                  for g in range(X.group.num_arrows) for p in orb}
        piece = GSet(X.group, len(orb), action, check=False)
        out.append((piece, X.stabilizer(x)))
    return out


def pullback_gsets(f, g):
    """Fibered product of f: X -> Z and g: Y -> Z with its projections."""
    if f.target is not g.target:
        raise ValueError("pullback needs a common target")
    X, Y = f.source, g.source
    pts = [(x, y) for x in X.points for y in Y.points if f(x) == g(y)]
    pos = {p: i for i, p in enumerate(pts)}
    G = X.group
    action = {}
    for gg in range(G.num_arrows):
        for i, (x, y) in enumerate(pts):
            action[(gg, i)] = pos[(X.act(gg, x), Y.act(gg, y))]
    P = GSet(G, len(pts), action, check=False)
    p = GMap(P, X, tuple(x for x, y in pts))
    q = GMap(P, Y, tuple(y for x, y in pts))
    return P, p, q


def enumerate_gmaps(X, Y):
    """All equivariant maps X -> Y, in deterministic order."""
    orbits = orbit_decomposition(X)
    reps = []
    seen = set()
    for x in sorted(X.points):
        if x not in seen:
            seen.update(X.orbit(x))
            reps.append(x)
    G = X.group
    choices = []
    for x in reps:
        stab = X.stabilizer(x)
        cand = [y for y in Y.points if stab <= Y.stabilizer(y)]
        choices.append(cand)
    out = []
    for pick in itertools.product(*choices):
        pm = [None] * X.size
        for x0, y0 in zip(reps, pick):
            for g in range(G.num_arrows):
                pm[X.act(g, x0)] = Y.act(g, y0)
        out.append(GMap(X, Y, tuple(pm)))
    return out


def enumerate_gset_isos(X, Y):
    """All equivariant bijections X -> Y."""
    return [f for f in enumerate_gmaps(X, Y)
            if len(set(f.point_map)) == X.size == Y.size]


# -- transport groupoid -----------------------------------------------------

def transport_groupoid(X):
    """
    The action groupoid G |x X, arrows (g, x): x -> gx indexed x-major,
    with its canonical faithful projection to G.
    """
    key = "transport"
    if key not in X._cache:
        G = X.group
        nG = G.num_arrows
        n = X.size * nG

        def aid(g, x):
            return x * nG + g

        src = [0] * n
        tgt = [0] * n
        for x in X.points:
            for g in range(nG):
                src[aid(g, x)] = x
                tgt[aid(g, x)] = X.act(g, x)
        identity = [aid(0, x) for x in X.points]
        table = {}
        for x in X.points:
            for g in range(nG):
                y = X.act(g, x)
                for h in range(nG):
                    table[(aid(h, y), aid(g, x))] = aid(G.comp(h, g), x)
        T = FiniteGroupoid(X.size, src, tgt, table, identity,
                           label="%s|x%s" % (G.label, X.label or X.uid), check=False)
        pi = GroupoidFunctor(T, G, (0,) * X.size,
                             tuple(a % nG for a in range(n)), check=False)
        X._cache[key] = (T, pi)
    return X._cache[key]


def transport_functor(f):
    """G |x f, always faithful."""
    TX, _ = transport_groupoid(f.source)
    TY, _ = transport_groupoid(f.target)
    nG = f.source.group.num_arrows
    obj_map = f.point_map
    arr_map = tuple(f(a // nG) * nG + (a % nG) for a in range(TX.num_arrows))
    return GroupoidFunctor(TX, TY, obj_map, arr_map, check=False)


def transport_2cell(tau, f1, f2):
    """G |x tau: the natural transformation with components (tau(x), f1(x))."""
    F1, F2 = transport_functor(f1), transport_functor(f2)
    nG = f1.source.group.num_arrows
    comps = tuple(f1(x) * nG + tau.values[x] for x in f1.source.points)
    return NatTransformation(F1, F2, comps)


def nat_to_twist(alpha, f1, f2):
    """The unique tau with alpha = G |x tau; round-trips with transport_2cell."""
    nG = f1.source.group.num_arrows
    values = []
    for x in f1.source.points:
        c = alpha.components[x]
        if c // nG != f1(x):
            raise ValueError("2-cell is not of transported shape")
        values.append(c % nG)
    return TwistingMap(f1.source, tuple(values))


def enumerate_twists(f1, f2):
    """All twisting maps tau with tau * f1 = f2, per-orbit backtracking."""
    if f1.source is not f2.source or f1.target is not f2.target:
        raise ValueError("twisting maps need parallel GMaps")
    X, Y = f1.source, f1.target
    G = X.group
    reps = []
    seen = set()
    for x in sorted(X.points):
        if x not in seen:
            seen.update(X.orbit(x))
            reps.append(x)
    choices = []
    for x0 in reps:
        cand = []
        for b in range(G.num_arrows):
            if Y.act(b, f1(x0)) != f2(x0):
                continue
            # b must be fixed by conjugation under the stabilizer of x0
            if all(conj(G, h, b) == b for h in X.stabilizer(x0)):
                cand.append(b)
        choices.append(cand)
    out = []
    for pick in itertools.product(*choices):
        values = [None] * X.size
        ok = True
        for x0, b in zip(reps, pick):
            for g in range(G.num_arrows):
                y = X.act(g, x0)
                v = conj(G, g, b)
                if values[y] is None:
                    values[y] = v
                elif values[y] != v:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(TwistingMap(X, tuple(values)))
    return out


def fused_gmap_related(f1, f2):
    """Some twisting witness tau * f1 = f2, or None."""
    found = enumerate_twists(f1, f2)
    return found[0] if found else None


# -- fused spans -------------------------------------------------------------

@dataclass(frozen=True)
class GSetSpan:
    left_leg: GMap
    right_leg: GMap

    def __post_init__(self):
        if self.left_leg.source is not self.right_leg.source:
            raise ValueError("span legs must share their apex")

    @property
    def apex(self):
        return self.left_leg.source


def fused_span_equivalent(s1, s2):
    """
    Equivalence of spans of G-sets in the fused quotient: some bijective
    G-map between the apexes whose two triangles commute up to twisting
    maps.
    """
    if (s1.left_leg.target is not s2.left_leg.target
            or s1.right_leg.target is not s2.right_leg.target):
        raise ValueError("span endpoints do not match")
    for s in enumerate_gset_isos(s1.apex, s2.apex):
        u2s = compose_gmaps(s2.left_leg, s)
        if fused_gmap_related(s1.left_leg, u2s) is None:
            continue
        i2s = compose_gmaps(s2.right_leg, s)
        if fused_gmap_related(s1.right_leg, i2s) is not None:
            return True
    return False


def check_transport_mackey_preservation(f, g):
    """
    Transport the strict pullback square of (f, g) to groupoids and test
    it there as a Mackey square (with the identity 2-cell).
    """
    P, p, q = pullback_gsets(f, g)
    Fp, Fq = transport_functor(p), transport_functor(q)
    Fu, Fv = transport_functor(f), transport_functor(g)
    gamma = identity_nat(compose_functors(Fu, Fp))
    # the transported square commutes strictly, so gamma is a valid 2-cell
    gamma = NatTransformation(compose_functors(Fu, Fp),
                              compose_functors(Fv, Fq), gamma.components)
    return is_mackey_square(Fp, Fq, gamma, Fu, Fv)


def check_fused_pullback_mackey(f, g, test_objects=None):
    """
    Mackey-square property of the pullback square inside the fused
    2-category, checked against every (t, s, gamma) over each test
    object: essential surjectivity and full faithfulness of the
    comparison functor, by exhaustive search.
    """
    if f.target is not g.target:
        raise ValueError("pullback needs a common target")
    G = f.source.group
    X, Y = f.source, g.source
    P, p, q = pullback_gsets(f, g)
    if test_objects is None:
        test_objects = [coset_gset(G, cls[0])
                        for cls in groups.subgroup_conjugacy_classes(G)]
    for T in test_objects:
        maps_TP = enumerate_gmaps(T, P)
        # essential surjectivity over (t, s, gamma)
        for t in enumerate_gmaps(T, X):
            ft = compose_gmaps(f, t)
            for s in enumerate_gmaps(T, Y):
                gs = compose_gmaps(g, s)
                for gamma in enumerate_twists(ft, gs):
                    if not _fused_triple_hit(T, t, s, gamma, f, g, p, q, maps_TP):
                        return False
        # full faithfulness on pairs of maps into the pullback
        for u in maps_TP:
            for v in maps_TP:
                taus = enumerate_twists(u, v)
                pairs = _fused_comma_morphisms(u, v, f, g, p, q)
                if len(taus) != len(pairs):
                    return False
                image = {(tau.values, tau.values) for tau in taus}
                if image != pairs:
                    return False
    return True


def _fused_triple_hit(T, t, s, gamma, f, g, p, q, maps_TP):
    """Is (t, s, gamma) isomorphic to the image of some u: T -> P?"""
    for u in maps_TP:
        pu, qu = compose_gmaps(p, u), compose_gmaps(q, u)
        for phi in enumerate_twists(t, pu):
            for psi in enumerate_twists(s, qu):
                # identity 2-cell of the image: gamma' = e; compatibility
                # reads psi(x) gamma(x) = gamma'(x) phi(x) = phi(x)
                Ggrp = T.group
                if all(Ggrp.comp(psi.values[x], gamma.values[x]) == phi.values[x]
                       for x in T.points):
                    return True
    return False


def _fused_comma_morphisms(u, v, f, g, p, q):
    """Pairs (phi, psi) forming morphisms (pu,qu,e) -> (pv,qv,e)."""
    pu, qu = compose_gmaps(p, u), compose_gmaps(q, u)
    pv, qv = compose_gmaps(p, v), compose_gmaps(q, v)
    out = set()
    for phi in enumerate_twists(pu, pv):
        for psi in enumerate_twists(qu, qv):
            if phi.values == psi.values:
                out.add((phi.values, psi.values))
            else:
                # compatibility with identity 2-cells forces phi = psi
                # pointwise; f phi = g psi reads phi(x) = psi(x)
                continue
    return out


def compose_gset_spans(s1, s2):
    """
    Composite of spans of G-sets via the strict pullback (the Mackey
    squares of the fused world), decomposed into transitive pieces.
    """
    if s1.right_leg.target is not s2.left_leg.target:
        raise ValueError("span endpoints do not match")
    P, p, q = pullback_gsets(s1.right_leg, s2.left_leg)
    left = compose_gmaps(s1.left_leg, p)
    right = compose_gmaps(s2.right_leg, q)
    pieces = []
    for x0 in sorted(P.points):
        if any(x0 in piece for piece, _, _ in pieces):
            continue
        orb = sorted(P.orbit(x0))
        pieces.append((set(orb), orb, x0))
    out = []
    for _, orb, x0 in pieces:
        pos = {x: i for i, x in enumerate(orb)}
        action = {(g, pos[x]): pos[P.act(g, x)]
                  for g in range(P.group.num_arrows) for x in orb}
        S = GSet(P.group, len(orb), action, check=False)
        out.append(GSetSpan(GMap(S, left.target, tuple(left(x) for x in orb)),
                            GMap(S, right.target, tuple(right(x) for x in orb))))
    return out


@dataclass(frozen=True)
class GSetSpanKey:
    """Class of a transitive span of G-sets: stabilizer class plus the
    N(H)-orbit-minimized image pair."""

    group_uid: int
    stab_rep: tuple
    image: tuple

    def sort_key(self):
        return (len(self.stab_rep), self.stab_rep, self.image)

    def render(self):
        return "[G/{%s}->(%s)]" % (",".join(map(str, self.stab_rep)),
                                   ",".join(map(str, self.image)))


def gset_span_key(span):
    """Canonical key of a span of G-sets with a transitive apex."""
    S = span.apex
    G = S.group
    x0 = min(S.points)
    if S.orbit(x0) != frozenset(S.points):
        raise ValueError("transitive apex required")
    stab = S.stabilizer(x0)
    cls = next(c for c in groups.subgroup_conjugacy_classes(G)
               if stab in [frozenset(s) for s in c])
    rep = cls[0]
    best = None
    # minimize the image pair over the conjugating elements that carry
    # the stabilizer onto the class representative
    for x in range(G.num_arrows):
        if groups.conjugate_set(G, x, stab) != frozenset(rep):
            continue
        # Stab(x.x0) = x Stab(x0) x^-1 = rep, so x.x0 is a base point
        p = S.act(x, x0)
        pair = (span.left_leg(p), span.right_leg(p))
        if best is None or pair < best:
            best = pair
    return GSetSpanKey(G.uid, tuple(sorted(rep)), best)


def gset_hom_basis(X, Y, fused=False):
    """
    Basis of span classes X -> Y in the G-set world: one transitive span
    [X <- G/H -> Y] per (subgroup class, orbit of H-fixed pairs).  With
    ``fused`` the classes are further merged by twisting equivalence.
    """
    if X.group is not Y.group:
        raise ValueError("hom_basis needs a common group")
    G = X.group
    reps = []
    for cls in groups.subgroup_conjugacy_classes(G):
        H = cls[0]
        S = coset_gset(G, H)
        XY = gset_product(X, Y)
        for f in enumerate_gmaps(S, XY):
            m = Y.size
            left = GMap(S, X, tuple(f(s) // m for s in S.points))
            right = GMap(S, Y, tuple(f(s) % m for s in S.points))
            reps.append(GSetSpan(left, right))
    out = []
    seen = set()
    for span in reps:
        key = gset_span_key(span)
        if key in seen:
            continue
        if fused and any(fused_span_equivalent(span, other) for other, _ in out):
            continue
        seen.add(key)
        out.append((span, key))
    return [k for _, k in sorted(out, key=lambda pair: pair[1].sort_key())]


# -- Burnside tables ---------------------------------------------------------

@dataclass(frozen=True)
class OrbitKey:
    """Conjugacy class of stabilizers, keyed by the class representative."""

    group_uid: int
    rep: tuple

    def sort_key(self):
        return (len(self.rep), self.rep)

    def render(self):
        return "[G/{%s}]" % ",".join(map(str, self.rep))


def _orbit_key(G, stab):
    for cls in groups.subgroup_conjugacy_classes(G):
        if frozenset(stab) in [frozenset(c) for c in cls]:
            return OrbitKey(G.uid, tuple(sorted(cls[0])))
    raise AssertionError("stabilizer not found among subgroup classes")


def gset_lincomb(X, ring=ZZ):
    out = LinComb(X.group, X.group, ring=ring)
    for piece, stab in orbit_decomposition(X):
        out.add_term(_orbit_key(X.group, stab))
    return out


def burnside_table(G, bound=12):
    """
    Multiplication table of the Burnside semiring: basis the orbits
    [G/H] over subgroup classes, products by pullback over the point and
    orbit decomposition.
    """
    if G.num_arrows > bound:
        raise ValueError("burnside_table bound exceeded")
    classes = groups.subgroup_conjugacy_classes(G)
    orbits = [coset_gset(G, cls[0]) for cls in classes]
    keys = [OrbitKey(G.uid, tuple(sorted(cls[0]))) for cls in classes]
    table = []
    for Xi in orbits:
        row = []
        for Xj in orbits:
            row.append(gset_lincomb(gset_product(Xi, Xj)))
        table.append(row)
    return keys, table


def table_of_marks(G):
    """marks[i][j] = number of H_i-fixed points of G/H_j (independent oracle)."""
    classes = groups.subgroup_conjugacy_classes(G)
    orbits = [coset_gset(G, cls[0]) for cls in classes]
    marks = []
    for cls in classes:
        K = cls[0]
        row = []
        for X in orbits:
            row.append(sum(1 for x in X.points
                           if all(X.act(k, x) == x for k in K)))
        marks.append(row)
    return marks


def fixed_points(X, K):
    return [x for x in X.points if all(X.act(k, x) == x for k in K)]


# -- the span category over G, via transported spans -------------------------

def span_burnside_table_over_G(G):
    """
    End(G, id) in the span category of groupoids faithfully embedded in
    G, computed with transported orbit spans and iso-comma composition.
    Entries decompose by classifying each component of the iso-comma apex
    by the image in G of its vertex group.
    """
    classes = groups.subgroup_conjugacy_classes(G)
    orbits = [coset_gset(G, cls[0]) for cls in classes]
    embeddings = [transport_groupoid(X)[1] for X in orbits]
    keys = [OrbitKey(G.uid, tuple(sorted(cls[0]))) for cls in classes]
    table = []
    for iS in embeddings:
        row = []
        for iT in embeddings:
            ic = iso_comma(iS, iT)
            out = LinComb(G, G)
            from .groupoids import connected_components
            for comp, incl in connected_components(ic.apex):
                root_end = [a for a in range(comp.num_arrows)
                            if comp.src[a] == 0 and comp.tgt[a] == 0]
                under = compose_functors(iS, compose_functors(ic.proj_left, incl))
                image = frozenset(under.on_arrow(a) for a in root_end)
                out.add_term(_orbit_key(G, image))
            row.append(out)
        table.append(row)
    return keys, table
