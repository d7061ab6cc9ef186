"""
Finite groupoids, functors, natural transformations, and the iso-comma
machinery.

A groupoid is stored with a full composition table.  Objects and arrows
are integer indices (0..m-1, 0..n-1); ``compose[(g, f)] = g*f`` is defined
exactly when ``src(g) == tgt(f)``.  All values are immutable after
construction and every enumerative check here is exhaustive.
"""

from __future__ import annotations

import itertools
from dataclasses import InitVar, dataclass


class SearchBudgetExceeded(RuntimeError):
    """Raised when an exhaustive search exceeds the configured budget."""


class Budget:
    """Countdown shared by the backtracking searches."""

    def __init__(self, limit=10**7):
        self.limit = limit
        self.used = 0

    def spend(self, n=1):
        self.used += n
        if self.used > self.limit:
            raise SearchBudgetExceeded(
                "search budget exceeded (%d > %d)" % (self.used, self.limit))


_uid_counter = itertools.count()


class FiniteGroupoid:
    """
    A finite groupoid: objects 0..m-1, arrows 0..n-1 with source/target,
    a partial composition table, identities, and (derived) inverses.
    """

    __slots__ = ("num_objects", "src", "tgt", "compose_table", "identity",
                 "inverse", "label", "uid", "_cache")

    def __init__(self, num_objects, src, tgt, compose_table, identity,
                 label=None, check=True):
        self.num_objects = num_objects
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        self.compose_table = dict(compose_table)
        self.identity = tuple(identity)
        self.inverse = None  # filled by _derive
        self.label = label
        self.uid = next(_uid_counter)
        self._cache = {}
        self._derive(check)

    # -- construction ------------------------------------------------

    def _derive(self, check):
        n = len(self.src)
        if check:
            self.validate_shape()
        inv = [None] * n
        for a in range(n):
            x, y = self.src[a], self.tgt[a]
            for b in self.arrows_between(y, x):
                if (self.compose_table.get((b, a)) == self.identity[x]
                        and self.compose_table.get((a, b)) == self.identity[y]):
                    inv[a] = b
                    break
            if inv[a] is None:
                raise ValueError("arrow %d has no two-sided inverse" % a)
        self.inverse = tuple(inv)
        if check:
            self.validate_laws()

    def validate_shape(self):
        n = len(self.src)
        if len(self.tgt) != n:
            raise ValueError("src/tgt length mismatch")
        if len(self.identity) != self.num_objects:
            raise ValueError("one identity arrow per object required")
        for x, e in enumerate(self.identity):
            if not (0 <= e < n) or self.src[e] != x or self.tgt[e] != x:
                raise ValueError("identity(%d) must be an endo-arrow at %d" % (x, x))
        for (g, f), h in self.compose_table.items():
            if self.src[g] != self.tgt[f]:
                raise ValueError("compose defined on non-composable pair (%d,%d)" % (g, f))
            if self.src[h] != self.src[f] or self.tgt[h] != self.tgt[g]:
                raise ValueError("compose (%d,%d) has wrong endpoints" % (g, f))
        for g in range(n):
            for f in range(n):
                if self.src[g] == self.tgt[f] and (g, f) not in self.compose_table:
                    raise ValueError("compose missing on composable pair (%d,%d)" % (g, f))

    def validate_laws(self):
        # unit, associativity and inverses, by full table scan
        n = len(self.src)
        for a in range(n):
            if self.compose_table[(a, self.identity[self.src[a]])] != a:
                raise ValueError("right unit law fails at arrow %d" % a)
            if self.compose_table[(self.identity[self.tgt[a]], a)] != a:
                raise ValueError("left unit law fails at arrow %d" % a)
        for f in range(n):
            for g in self.arrows_from(self.tgt[f]):
                gf = self.compose_table[(g, f)]
                for h in self.arrows_from(self.tgt[g]):
                    if self.compose_table[(h, gf)] != self.compose_table[(self.compose_table[(h, g)], f)]:
                        raise ValueError("associativity fails at (%d,%d,%d)" % (h, g, f))

    # -- basic queries -----------------------------------------------

    @property
    def objects(self):
        return range(self.num_objects)

    @property
    def num_arrows(self):
        return len(self.src)

    def arrows_between(self, x, y):
        return self._hom_map().get((x, y), ())

    def arrows_from(self, x):
        key = ("from", x)
        if key not in self._cache:
            self._cache[key] = tuple(a for a in range(self.num_arrows) if self.src[a] == x)
        return self._cache[key]

    def _hom_map(self):
        if "hom" not in self._cache:
            hom = {}
            for a in range(self.num_arrows):
                hom.setdefault((self.src[a], self.tgt[a]), []).append(a)
            self._cache["hom"] = {k: tuple(v) for k, v in hom.items()}
        return self._cache["hom"]

    def comp(self, g, f):
        return self.compose_table[(g, f)]

    def inv(self, a):
        return self.inverse[a]

    def is_one_object(self):
        return self.num_objects == 1

    def component_of(self):
        """Partition objects by reachability; returns (labels, roots)."""
        if "components" not in self._cache:
            parent = list(range(self.num_objects))

            def find(i):
                while parent[i] != i:
                    parent[i] = parent[parent[i]]
                    i = parent[i]
                return i

            for a in range(self.num_arrows):
                i, j = find(self.src[a]), find(self.tgt[a])
                if i != j:
                    parent[max(i, j)] = min(i, j)
            roots = sorted({find(i) for i in range(self.num_objects)})
            index = {r: k for k, r in enumerate(roots)}
            labels = tuple(index[find(i)] for i in range(self.num_objects))
            self._cache["components"] = (labels, tuple(roots))
        return self._cache["components"]

    def __repr__(self):
        name = self.label or "groupoid#%d" % self.uid
        return "<%s: %d objects, %d arrows>" % (name, self.num_objects, self.num_arrows)


@dataclass(frozen=True)
class GroupoidFunctor:
    source: FiniteGroupoid
    target: FiniteGroupoid
    object_map: tuple
    arrow_map: tuple
    label: str | None = None
    check: InitVar[bool] = True

    def __post_init__(self, check):
        if not check:
            return
        S, T = self.source, self.target
        if len(self.object_map) != S.num_objects or len(self.arrow_map) != S.num_arrows:
            raise ValueError("functor maps with wrong domain size")
        for a in range(S.num_arrows):
            fa = self.arrow_map[a]
            if T.src[fa] != self.object_map[S.src[a]] or T.tgt[fa] != self.object_map[S.tgt[a]]:
                raise ValueError("functor does not preserve source/target at arrow %d" % a)
        for x in S.objects:
            if self.arrow_map[S.identity[x]] != T.identity[self.object_map[x]]:
                raise ValueError("functor does not preserve identity at object %d" % x)
        for f in range(S.num_arrows):
            for g in S.arrows_from(S.tgt[f]):
                if self.arrow_map[S.comp(g, f)] != T.comp(self.arrow_map[g], self.arrow_map[f]):
                    raise ValueError("functor does not preserve composition at (%d,%d)" % (g, f))

    def on_obj(self, x):
        return self.object_map[x]

    def on_arrow(self, a):
        return self.arrow_map[a]

    def __repr__(self):
        return "<functor %s -> %s%s>" % (
            self.source.label or self.source.uid,
            self.target.label or self.target.uid,
            " (%s)" % self.label if self.label else "")


@dataclass(frozen=True)
class NatTransformation:
    """Invertible natural transformation between parallel functors."""

    source_functor: GroupoidFunctor
    target_functor: GroupoidFunctor
    components: tuple  # object of source -> arrow of target groupoid

    def __post_init__(self):
        F1, F2 = self.source_functor, self.target_functor
        if F1.source is not F2.source or F1.target is not F2.target:
            raise ValueError("natural transformation requires parallel functors")
        S, T = F1.source, F1.target
        if len(self.components) != S.num_objects:
            raise ValueError("one component per object required")
        for x in S.objects:
            c = self.components[x]
            if T.src[c] != F1.on_obj(x) or T.tgt[c] != F2.on_obj(x):
                raise ValueError("component at %d has wrong endpoints" % x)
        for a in range(S.num_arrows):
            x, y = S.src[a], S.tgt[a]
            lhs = T.comp(self.components[y], F1.on_arrow(a))
            rhs = T.comp(F2.on_arrow(a), self.components[x])
            if lhs != rhs:
                raise ValueError("naturality square fails at arrow %d" % a)


@dataclass(frozen=True)
class IsoCommaResult:
    apex: FiniteGroupoid
    proj_left: GroupoidFunctor
    proj_right: GroupoidFunctor
    two_cell: NatTransformation
    object_triples: tuple  # (x, y, gamma) per apex object, in apex order
    arrow_pairs: tuple     # (alpha, beta) per apex arrow, in apex order


def identity_functor(G):
    return GroupoidFunctor(G, G, tuple(G.objects), tuple(range(G.num_arrows)),
                           check=False)


def compose_functors(G2, G1):
    """G2 after G1."""
    if G1.target is not G2.source:
        raise ValueError("functors not composable")
    return GroupoidFunctor(
        G1.source, G2.target,
        tuple(G2.on_obj(x) for x in G1.object_map),
        tuple(G2.on_arrow(a) for a in G1.arrow_map), check=False)


def empty_groupoid():
    return FiniteGroupoid(0, (), (), {}, (), label="0")


def disjoint_union(parts):
    """Disjoint union with full-and-faithful inclusions, ids offset in order."""
    obj_off, arr_off = [], []
    o = a = 0
    for P in parts:
        obj_off.append(o)
        arr_off.append(a)
        o += P.num_objects
        a += P.num_arrows
    src, tgt, identity, table = [], [], [], {}
    for k, P in enumerate(parts):
        src += [P.src[i] + obj_off[k] for i in range(P.num_arrows)]
        tgt += [P.tgt[i] + obj_off[k] for i in range(P.num_arrows)]
        identity += [P.identity[x] + arr_off[k] for x in P.objects]
        for (g, f), h in P.compose_table.items():
            table[(g + arr_off[k], f + arr_off[k])] = h + arr_off[k]
    label = "+".join(P.label or "?" for P in parts) if parts else "0"
    U = FiniteGroupoid(o, src, tgt, table, identity, label=label, check=False)
    inclusions = [
        GroupoidFunctor(P, U,
                        tuple(x + obj_off[k] for x in P.objects),
                        tuple(i + arr_off[k] for i in range(P.num_arrows)),
                        check=False)
        for k, P in enumerate(parts)]
    return U, inclusions


def full_subgroupoid(G, objs, label=None):
    """Full subgroupoid on the given objects, with its inclusion."""
    objs = tuple(sorted(objs))
    obj_index = {x: i for i, x in enumerate(objs)}
    arrows = [a for a in range(G.num_arrows)
              if G.src[a] in obj_index and G.tgt[a] in obj_index]
    arr_index = {a: i for i, a in enumerate(arrows)}
    src = [obj_index[G.src[a]] for a in arrows]
    tgt = [obj_index[G.tgt[a]] for a in arrows]
    identity = [arr_index[G.identity[x]] for x in objs]
    table = {}
    for f in arrows:
        for g in arrows:
            if G.src[g] == G.tgt[f]:
                table[(arr_index[g], arr_index[f])] = arr_index[G.comp(g, f)]
    H = FiniteGroupoid(len(objs), src, tgt, table, identity, label=label, check=False)
    incl = GroupoidFunctor(H, G, objs, tuple(arrows), check=False)
    return H, incl


def connected_components(G):
    """Components as full subgroupoids with inclusions, by least object id."""
    labels, roots = G.component_of()
    out = []
    for k, r in enumerate(roots):
        objs = [x for x in G.objects if labels[x] == k]
        lab = "%s[%d]" % (G.label, k) if G.label else None
        out.append(full_subgroupoid(G, objs, label=lab))
    return out


def skeleton(G):
    """
    One vertex group per component (at the least object), plus the
    inclusion of the skeletal subgroupoid; the inclusion is an equivalence.
    """
    labels, roots = G.component_of()
    groups = []
    for r in roots:
        lab = "%s@%d" % (G.label, r) if G.label else None
        grp, _ = full_subgroupoid(G, [r], label=lab)
        groups.append(grp)
    _, incl = full_subgroupoid(G, roots)
    return groups, incl


def retraction_to_skeleton(G):
    """
    Deterministic quasi-inverse of the skeleton inclusion: each object is
    sent to its component root along the least connecting arrow.
    """
    key = "retraction"
    if key not in G._cache:
        labels, roots = G.component_of()
        skel, incl = full_subgroupoid(G, roots)
        root_of = {x: roots[labels[x]] for x in G.objects}
        # rho[x]: x -> root, least arrow id; identity at the root itself
        rho = {}
        for x in G.objects:
            r = root_of[x]
            rho[x] = G.identity[x] if x == r else min(G.arrows_between(x, r))
        skel_obj = {r: i for i, r in enumerate(roots)}
        skel_arr = {}
        for i in range(skel.num_arrows):
            skel_arr[(incl.on_arrow(i))] = i
        obj_map = tuple(skel_obj[root_of[x]] for x in G.objects)
        arr_map = []
        for a in range(G.num_arrows):
            x, y = G.src[a], G.tgt[a]
            moved = G.comp(rho[y], G.comp(a, G.inv(rho[x])))
            arr_map.append(skel_arr[moved])
        R = GroupoidFunctor(G, skel, obj_map, tuple(arr_map))
        G._cache[key] = (skel, incl, R)
    return G._cache[key]


def is_faithful(F):
    """Injectivity of the arrow map on every Hom set."""
    S = F.source
    for (x, y), arrows in S._hom_map().items():
        seen = set()
        for a in arrows:
            fa = F.on_arrow(a)
            if fa in seen:
                return False
            seen.add(fa)
    return True


def is_full(F):
    S, T = F.source, F.target
    for x in S.objects:
        for y in S.objects:
            image = {F.on_arrow(a) for a in S.arrows_between(x, y)}
            if len(image) != len(T.arrows_between(F.on_obj(x), F.on_obj(y))):
                return False
    return True


def is_essentially_surjective(F):
    T = F.target
    labels, _ = T.component_of()
    hit = {labels[F.on_obj(x)] for x in F.source.objects}
    return len(hit) == len(set(labels))


def is_equivalence(F):
    return is_faithful(F) and is_full(F) and is_essentially_surjective(F)


def iso_comma(u, v):
    """
    The iso-comma square over u: X -> Z <- Y :v.  Apex objects are the
    triples (x, y, gamma) with gamma: u(x) -> v(y), ordered
    lexicographically; arrows are the pairs (alpha, beta) with
    v(beta) . gamma = gamma' . u(alpha).
    """
    if u.target is not v.target:
        raise ValueError("iso_comma requires functors with a common target")
    X, Y, Z = u.source, v.source, u.target
    triples = []
    for x in X.objects:
        for y in Y.objects:
            for g in Z.arrows_between(u.on_obj(x), v.on_obj(y)):
                triples.append((x, y, g))
    t_index = {t: i for i, t in enumerate(triples)}
    pairs, src, tgt = [], [], []
    for i, (x, y, g) in enumerate(triples):
        for alpha in X.arrows_from(x):
            ua = u.on_arrow(alpha)
            for beta in Y.arrows_from(y):
                g2 = Z.comp(Z.comp(v.on_arrow(beta), g), Z.inv(ua))
                j = t_index[(X.tgt[alpha], Y.tgt[beta], g2)]
                pairs.append((alpha, beta))
                src.append(i)
                tgt.append(j)
    a_index = {(src[k], pairs[k]): k for k in range(len(pairs))}
    identity = [a_index[(i, (X.identity[x], Y.identity[y]))]
                for i, (x, y, g) in enumerate(triples)]
    by_src = {}
    for k in range(len(pairs)):
        by_src.setdefault(src[k], []).append(k)
    table = {}
    for f in range(len(pairs)):
        i, (a1, b1) = src[f], pairs[f]
        for g2 in by_src.get(tgt[f], ()):
            a2, b2 = pairs[g2]
            table[(g2, f)] = a_index[(i, (X.comp(a2, a1), Y.comp(b2, b1)))]
    lab = "(%s/%s)" % (u.label or u.source.label or "u", v.label or v.source.label or "v")
    P = FiniteGroupoid(len(triples), src, tgt, table, identity, label=lab, check=False)
    p = GroupoidFunctor(P, X, tuple(t[0] for t in triples),
                        tuple(pairs[k][0] for k in range(len(pairs))), check=False)
    q = GroupoidFunctor(P, Y, tuple(t[1] for t in triples),
                        tuple(pairs[k][1] for k in range(len(pairs))), check=False)
    cell = NatTransformation(compose_functors(u, p), compose_functors(v, q),
                             tuple(t[2] for t in triples))
    return IsoCommaResult(P, p, q, cell, tuple(triples), tuple(pairs))


def is_mackey_square(p, q, gamma, u, v, budget=None):
    """
    Whether the square (p, q, gamma, u, v) is a Mackey square: the
    comparison functor <p, q, gamma> into the iso-comma over (u, v) must
    be an equivalence.
    """
    if p.source is not q.source:
        raise ValueError("square apex mismatch")
    if p.target is not u.source or q.target is not v.source:
        raise ValueError("square boundary does not compose")
    if (gamma.source_functor.object_map != compose_functors(u, p).object_map
            or gamma.target_functor.object_map != compose_functors(v, q).object_map):
        raise ValueError("gamma is not a 2-cell u.p => v.q")
    ic = iso_comma(u, v)
    t_index = {t: i for i, t in enumerate(ic.object_triples)}
    a_index = {}
    for k in range(ic.apex.num_arrows):
        a_index[(ic.apex.src[k], ic.arrow_pairs[k])] = k
    P = p.source
    obj_map = tuple(t_index[(p.on_obj(w), q.on_obj(w), gamma.components[w])]
                    for w in P.objects)
    arr_map = tuple(a_index[(obj_map[P.src[a]], (p.on_arrow(a), q.on_arrow(a)))]
                    for a in range(P.num_arrows))
    cmp_functor = GroupoidFunctor(P, ic.apex, obj_map, arr_map, check=False)
    if budget is not None:
        budget.spend(P.num_arrows + ic.apex.num_arrows)
    return is_equivalence(cmp_functor)


def _component_order(G):
    """Spanning-tree data per component: (root, {obj: arrow root->obj})."""
    key = "spantree"
    if key not in G._cache:
        labels, roots = G.component_of()
        path = {}
        for r in roots:
            path[r] = G.identity[r]
            frontier = [r]
            seen = {r}
            while frontier:
                nxt = []
                for x in frontier:
                    for a in G.arrows_from(x):
                        y = G.tgt[a]
                        if y not in seen:
                            seen.add(y)
                            path[y] = G.comp(a, path[x])
                            nxt.append(y)
                frontier = nxt
        G._cache[key] = (labels, roots, path)
    return G._cache[key]


def enumerate_nat_transfs(F1, F2, budget=None, first_only=False):
    """
    All natural transformations F1 => F2, in deterministic order.

    A transformation is determined by its components at one root object
    per component of the source; candidates are propagated along a
    spanning tree and verified on every arrow.
    """
    if F1.source is not F2.source or F1.target is not F2.target:
        raise ValueError("functors are not parallel")
    S, T = F1.source, F1.target
    labels, roots, path = _component_order(S)
    root_cands = []
    for r in roots:
        cands = T.arrows_between(F1.on_obj(r), F2.on_obj(r))
        if not cands:
            return []
        root_cands.append(cands)
    out = []
    for choice in itertools.product(*root_cands):
        if budget is not None:
            budget.spend()
        comp = [None] * S.num_objects
        for k, r in enumerate(roots):
            comp[r] = choice[k]
        for x in S.objects:
            if comp[x] is None:
                # transport the root component along the tree path root -> x
                a = path[x]
                r = roots[labels[x]]
                comp[x] = T.comp(T.comp(F2.on_arrow(a), comp[r]), T.inv(F1.on_arrow(a)))
        ok = True
        for a in range(S.num_arrows):
            x, y = S.src[a], S.tgt[a]
            if T.comp(comp[y], F1.on_arrow(a)) != T.comp(F2.on_arrow(a), comp[x]):
                ok = False
                break
        if ok:
            out.append(NatTransformation(F1, F2, tuple(comp)))
            if first_only:
                return out
    return out


def functor_iso(F1, F2, budget=None):
    """Some invertible natural transformation F1 => F2, or None."""
    found = enumerate_nat_transfs(F1, F2, budget=budget, first_only=True)
    return found[0] if found else None


def identity_nat(F):
    T = F.target
    return NatTransformation(F, F, tuple(T.identity[F.on_obj(x)] for x in F.source.objects))
