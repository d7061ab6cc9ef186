"""
Verification suites behind ``mackey-kernel verify``: presentation,
biset-relations, realization, transport, fused, spannable.

Every suite walks an exhaustively enumerated instance list and reports
per-section pass/fail with the first counterexample.  Instances are
independent, so suites can fan out across processes; reports are sorted
before emission either way.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import bisets, groups, gsets, realization, relations, spans, words
from .groupoids import Budget, compose_functors, is_faithful, iso_comma
from .linear import ring_by_name

DEFAULT_CORPUS = ("1", "C2", "C3", "C2xC2", "C4", "S3")
SUITES = ("presentation", "biset-relations", "realization", "transport",
          "fused", "spannable")


@dataclass
class RunConfig:
    ring_name: str = "int"
    bound: int = 8
    budget: int = 10**7
    corpus: tuple = DEFAULT_CORPUS
    out_format: str = "text"
    seed: int = 0
    jobs: int = 1
    deflative: bool = False
    word_length: int = 3
    sabotage: bool = False

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("bound must be >= 1")
        if self.budget < 10**3:
            raise ValueError("budget must be >= 10^3")
        self.corpus = tuple(self.corpus)

    @property
    def ring(self):
        return ring_by_name(self.ring_name)

    def groups(self):
        return [groups.named_group(n) for n in self.corpus]

    def make_budget(self):
        return Budget(self.budget)


@dataclass
class Section:
    name: str
    instances: int = 0
    failures: list = field(default_factory=list)

    def record(self, label, ok):
        self.instances += 1
        if not ok:
            self.failures.append(label)

    @property
    def ok(self):
        return not self.failures

    def as_dict(self):
        return {"name": self.name, "instances": self.instances,
                "ok": self.ok, "failures": sorted(self.failures)[:10]}


def _report(suite, sections, t0):
    sections = sorted(sections, key=lambda s: s.name)
    return {"suite": suite,
            "ok": all(s.ok for s in sections),
            "elapsed_s": round(time.time() - t0, 2),
            "sections": [s.as_dict() for s in sections]}


# -- presentation ------------------------------------------------------------

def _presentation_family(family, cfg):
    corpus = cfg.groups()
    words.SABOTAGE_NORMALIZER = cfg.sabotage
    try:
        sec = Section("relations/%s" % family)
        for inst in relations.relation_instances(family, corpus):
            r = relations.check_relation(inst, pipelines=("spans", "rewrite"),
                                         ring=cfg.ring)
            sec.record(inst.label, r["ok"])
        return sec
    finally:
        words.SABOTAGE_NORMALIZER = False


def presentation_suite(cfg):
    t0 = time.time()
    if cfg.jobs > 1:
        import multiprocessing as mp
        with mp.Pool(cfg.jobs) as pool:
            sections = pool.starmap(_presentation_family,
                                    [(f, cfg) for f in relations.FAMILIES])
    else:
        sections = [_presentation_family(f, cfg) for f in relations.FAMILIES]
    return _report("presentation", sections, t0)


# -- biset relations ---------------------------------------------------------

def biset_relations_suite(cfg):
    t0 = time.time()
    corpus = cfg.groups()
    sections = []
    for family in relations.FAMILIES:
        if family == "2d":
            continue
        sec = Section("biset-relations/%s" % family)
        for inst in relations.relation_instances(family, corpus):
            r = relations.check_relation(inst, pipelines=("bisets",), ring=cfg.ring)
            sec.record(inst.label, r["ok"])
        sections.append(sec)

    sec = Section("biset-relations/2d-unrestricted")
    for inst in relations.unrestricted_2d_instances(corpus):
        r = relations.check_relation(inst, pipelines=("bisets",), ring=cfg.ring)
        sec.record(inst.label, r["ok"])
    sections.append(sec)

    sec = Section("biset-relations/deflativity")
    for inst in relations.deflativity_instances(corpus):
        r = relations.check_relation(inst, pipelines=("bisets", "bisets_rewrite"),
                                     ring=cfg.ring)
        sec.record(inst.label, r["ok"])
    sections.append(sec)

    sec = Section("biset-relations/bouc-simplification")
    for G in corpus:
        for M in groups.normal_subgroups(G):
            for N in groups.normal_subgroups(G):
                r = relations.bouc_simplification_probe(G, M, N)
                sec.record("%s M=%s N=%s" % (G.label, sorted(M), sorted(N)),
                           r["ok"])
    sections.append(sec)
    return _report("biset-relations", sections, t0)


# -- realization -------------------------------------------------------------

def _corpus_letters(corpus):
    out = []
    for G in corpus:
        for H in groups.all_subgroups(G):
            out.append(words.res(G, H))
            out.append(words.ind(G, H))
        for N in groups.normal_subgroups(G):
            out.append(words.infl(G, N))
            out.append(words.defl(G, N))
        for a in groups.automorphisms(G):
            out.append(words.iso(groups.hom_functor(G, G, a)))
    return out


def _composable_words(letters, max_len):
    by_target = {}
    for L in letters:
        by_target.setdefault(L.target.uid, []).append(L)
    chains = [[L] for L in letters]
    for chain in chains:
        yield words.word(chain)
    prev = chains
    for _ in range(max_len - 1):
        nxt = []
        for chain in prev:
            for L in by_target.get(chain[-1].source.uid, ()):
                nxt.append(chain + [L])
        for chain in nxt:
            yield words.word(chain)
        prev = nxt


def realization_suite(cfg):
    t0 = time.time()
    corpus = cfg.groups()
    letters = _corpus_letters(corpus)
    sections = []

    sec = Section("realization/elementary-correspondence")
    for L in letters:
        span = L.span()
        lhs = bisets.biset_lincomb(realization.realize(span), ring=cfg.ring)
        rhs = bisets.biset_lincomb(bisets.letter_to_biset(L), ring=cfg.ring)
        sec.record(L.render(), lhs.terms == rhs.terms)
    sections.append(sec)

    sec = Section("realization/functoriality-words")
    for w in _composable_words(letters, cfg.word_length):
        lhs = realization.realize_lincomb(
            words.evaluate_word_via_spans(w, ring=cfg.ring))
        rhs = realization.word_as_biset_lincomb(w, ring=cfg.ring)
        sec.record(w.render(), lhs.terms == rhs.terms)
    sections.append(sec)

    sec = Section("realization/kernel-witness")
    for G in corpus:
        for N in groups.normal_subgroups(G):
            Q, p = groups.quotient_group(G, N)
            r = realization.kernel_witness(G, p)
            sec.record("%s ->> %s" % (G.label, Q.label), r["consistent"])
    sections.append(sec)

    sec = Section("realization/fullness-sections")
    small = [G for G in corpus if G.num_arrows <= 6]
    for G in small:
        for H in small:
            for form in bisets.transitive_classes(G, H):
                span = realization.section(G, H, form)
                back = bisets.bouc_canonical_form(realization.realize(span))
                sec.record("section %s<-%s %s" % (G.label, H.label, form.render()),
                           back == form)
    sections.append(sec)

    sec = Section("realization/restricted-iso")
    named = [n for n in ("1", "C2", "C3", "C2xC2", "S3") if n in cfg.corpus]
    pool = [groups.named_group(n) for n in named]
    for pair_name in ("faithful_right", "faithful_both"):
        for H in pool:
            for G in pool:
                if G.num_arrows > 6:
                    continue
                r = realization.check_restricted_iso(pair_name, H, G, ring=cfg.ring)
                sec.record("%s %s->%s" % (pair_name, H.label, G.label),
                           r.get("ok", False))
    sections.append(sec)
    return _report("realization", sections, t0)


# -- transport ---------------------------------------------------------------

def _small_gsets(G, max_points=4):
    orbits = [gsets.coset_gset(G, cls[0])
              for cls in groups.subgroup_conjugacy_classes(G)]
    pool = [X for X in orbits if X.size <= max_points]
    unions = []
    for i, X in enumerate(pool):
        for Y in pool[i:]:
            if X.size + Y.size <= max_points:
                unions.append(gsets.gset_disjoint_union(X, Y))
    return pool + unions


def transport_suite(cfg):
    t0 = time.time()
    sections = []

    sec = Section("transport/burnside-oracles")
    C2 = groups.named_group("C2")
    keys, table = gsets.burnside_table(C2)
    free = next(i for i, k in enumerate(keys) if len(k.rep) == 1)
    full = 1 - free
    sec.record("[C2/1]^2 = 2[C2/1]",
               table[free][free].terms == {keys[free]: 2})
    sec.record("[C2/C2] is the unit",
               table[full][free].terms == {keys[free]: 1}
               and table[full][full].terms == {keys[full]: 1})
    for G in cfg.groups():
        if G.num_arrows > cfg.bound:
            continue
        sec.record("marks oracle %s" % G.label, _marks_check(G))
    basisC2, _ = bisets.double_burnside_table(C2)
    sec.record("double burnside C2 has 5 basis classes", len(basisC2) == 5)
    sections.append(sec)

    sec = Section("transport/over-G-span-table")
    for name in ("C2", "S3"):
        if name not in cfg.corpus:
            continue
        G = groups.named_group(name)
        kb, tb = gsets.burnside_table(G)
        ks, ts = gsets.span_burnside_table_over_G(G)
        same = (kb == ks and all(
            tb[i][j].terms == ts[i][j].terms
            for i in range(len(kb)) for j in range(len(kb))))
        sec.record("End(%s, id) matches Burnside table" % G.label, same)
    sections.append(sec)

    sec = Section("transport/pullback-mackey")
    for name in ("C2", "C3", "S3"):
        if name not in cfg.corpus:
            continue
        G = groups.named_group(name)
        orbits = [gsets.coset_gset(G, cls[0])
                  for cls in groups.subgroup_conjugacy_classes(G)]
        for Z in orbits:
            for X in orbits:
                for Y in orbits:
                    for f in gsets.enumerate_gmaps(X, Z):
                        for g in gsets.enumerate_gmaps(Y, Z):
                            ok = gsets.check_transport_mackey_preservation(f, g)
                            sec.record("%s: %s,%s->%s" % (G.label, X.label, Y.label, Z.label), ok)
    sections.append(sec)

    sec = Section("transport/twist-bijection")
    for G in cfg.groups():
        if G.num_arrows > 6:
            continue
        pool = _small_gsets(G)
        for X in pool:
            for Y in pool:
                maps = gsets.enumerate_gmaps(X, Y)
                for f1 in maps:
                    F1 = gsets.transport_functor(f1)
                    for f2 in maps:
                        F2 = gsets.transport_functor(f2)
                        tws = gsets.enumerate_twists(f1, f2)
                        from .groupoids import enumerate_nat_transfs
                        nats = enumerate_nat_transfs(F1, F2)
                        ok = len(tws) == len(nats)
                        if ok:
                            for tau in tws:
                                alpha = gsets.transport_2cell(tau, f1, f2)
                                back = gsets.nat_to_twist(alpha, f1, f2)
                                if back.values != tau.values:
                                    ok = False
                                    break
                        sec.record("twists %s: |X|=%d,|Y|=%d" % (G.label, X.size, Y.size), ok)
    sections.append(sec)
    return _report("transport", sections, t0)


def _marks_check(G):
    """Burnside products against the independent mark homomorphism."""
    keys, table = gsets.burnside_table(G)
    classes = groups.subgroup_conjugacy_classes(G)
    orbits = [gsets.coset_gset(G, cls[0]) for cls in classes]
    marks = gsets.table_of_marks(G)
    for i in range(len(keys)):
        for j in range(len(keys)):
            prod = gsets.gset_product(orbits[i], orbits[j])
            coeffs = [table[i][j].terms.get(k, 0) for k in keys]
            for t, cls in enumerate(classes):
                K = cls[0]
                lhs = len(gsets.fixed_points(prod, K))
                rhs = sum(c * marks[t][jj] for jj, c in enumerate(coeffs))
                if lhs != rhs:
                    return False
    return True


# -- fused -------------------------------------------------------------------

def fused_suite(cfg):
    t0 = time.time()
    sections = []

    sec = Section("fused/conjugation-criterion")
    for name in ("C2", "C3", "C2xC2", "S3"):
        if name not in cfg.corpus:
            continue
        G = groups.named_group(name)
        for cls in groups.subgroup_conjugacy_classes(G):
            H = cls[0]
            X = gsets.coset_gset(G, H)
            reps = X._cache["coset_reps"]
            pos = {}
            for k, r in enumerate(reps):
                for g in [groups.mul(G, r, h) for h in H]:
                    pos[g] = k
            CH = groups.centralizer(G, H)
            CH_H = {groups.mul(G, c, h) for c in CH for h in H}
            for a in sorted(groups.normalizer(G, H)):
                pm = tuple(pos[groups.mul(G, reps[k], a)] for k in range(X.size))
                Ra = gsets.GMap(X, X, pm)
                s_id = gsets.GSetSpan(gsets.identity_gmap(X), gsets.identity_gmap(X))
                s_a = gsets.GSetSpan(gsets.identity_gmap(X), Ra)
                got = gsets.fused_span_equivalent(s_id, s_a)
                sec.record("%s H=%s a=%d" % (G.label, sorted(H), a),
                           got == (a in CH_H))
    sections.append(sec)

    sec = Section("fused/pullback-mackey")
    for name in ("C2", "S3"):
        if name not in cfg.corpus:
            continue
        G = groups.named_group(name)
        pt = gsets.trivial_gset(G)
        orbs = [gsets.coset_gset(G, cls[0])
                for cls in groups.subgroup_conjugacy_classes(G)
                if len(cls[0]) * 3 >= G.num_arrows]  # keep index small
        for X in orbs:
            for Y in orbs:
                f = gsets.enumerate_gmaps(X, pt)[0]
                g = gsets.enumerate_gmaps(Y, pt)[0]
                sec.record("%s: %s x_pt %s" % (G.label, X.label, Y.label),
                           gsets.check_fused_pullback_mackey(f, g))
        idm = gsets.identity_gmap(pt)
        sec.record("%s: identities" % G.label,
                   gsets.check_fused_pullback_mackey(idm, idm))
    sections.append(sec)

    sec = Section("fused/horizontal-composition")
    for name in ("C2", "S3"):
        if name not in cfg.corpus:
            continue
        G = groups.named_group(name)
        pool = _small_gsets(G, max_points=3)
        for X in pool:
            for Y in pool:
                for f1 in gsets.enumerate_gmaps(X, Y):
                    for f2 in gsets.enumerate_gmaps(X, Y):
                        for tau in gsets.enumerate_twists(f1, f2):
                            for Z in pool:
                                for f3 in gsets.enumerate_gmaps(Y, Z):
                                    for f4 in gsets.enumerate_gmaps(Y, Z):
                                        for sig in gsets.enumerate_twists(f3, f4):
                                            ok = _horizontal_transport_check(
                                                G, f1, f2, f3, f4, tau, sig)
                                            sec.record(
                                                "hcomp %s" % G.label, ok)
    sections.append(sec)
    return _report("fused", sections, t0)


def _horizontal_transport_check(G, f1, f2, f3, f4, tau, sig):
    """(sig . tau)(x) = tau(x) sig(f1(x)) transports to the horizontal
    composite of the transported cells."""
    hval = tuple(groups.mul(G, tau.values[x], sig.values[f1(x)])
                 for x in f1.source.points)
    hc = gsets.TwistingMap(f1.source, hval)
    f31 = gsets.compose_gmaps(f3, f1)
    f42 = gsets.compose_gmaps(f4, f2)
    alpha = gsets.transport_2cell(hc, f31, f42)
    # horizontal composite of transported 2-cells, computed in gpd
    F1 = gsets.transport_functor(f1)
    F3 = gsets.transport_functor(f3)
    F4 = gsets.transport_functor(f4)
    a_tau = gsets.transport_2cell(tau, f1, f2)
    a_sig = gsets.transport_2cell(sig, f3, f4)
    TZ = F3.target
    comps = tuple(TZ.comp(F4.on_arrow(a_tau.components[x]),
                          a_sig.components[F1.on_obj(x)])
                  for x in range(f1.source.size))
    return alpha.components == comps


# -- spannable ---------------------------------------------------------------

def spannable_suite(cfg):
    t0 = time.time()
    sections = []
    base_names = [n for n in ("1", "C2", "C3", "S3") if n in cfg.corpus] or ["1", "C2"]
    base = [groups.named_group(n) for n in base_names]

    for pair in (spans.PAIR_ALL, spans.PAIR_FAITHFUL_RIGHT, spans.PAIR_FAITHFUL_BOTH):
        sec = Section("spannable/%s" % pair.name)
        rep = spans.check_spannable(pair, base)
        for ax in ("a", "b", "c"):
            sec.record("axiom (%s) [%d checks]" % (ax, rep[ax]["checked"]),
                       rep[ax]["ok"])
        sections.append(sec)

    for name in ("C2", "S3"):
        sec = Section("spannable/over_G(%s)" % name)
        G = groups.named_group(name)
        sec.record("iso-comma apexes embed faithfully", _over_G_check(G))
        sections.append(sec)

    sec = Section("spannable/negative-control")
    broken = spans.SpannablePair("broken", lambda F: not _is_identity_functor(F))
    rep = spans.check_spannable(broken, base)
    sec.record("broken predicate fails axiom (a)", not rep["a"]["ok"])
    sections.append(sec)
    return _report("spannable", sections, t0)


def _is_identity_functor(F):
    return (F.source is F.target
            and F.arrow_map == tuple(range(F.source.num_arrows)))


def _over_G_check(G):
    """
    Axiom (b) for the comma pair over G: the iso-comma apex of any cospan
    of transported orbit maps embeds faithfully into G, so the Mackey
    square exists inside the comma 2-category.
    """
    orbits = [gsets.coset_gset(G, cls[0])
              for cls in groups.subgroup_conjugacy_classes(G)]
    cells = []
    for X in orbits:
        for Y in orbits:
            for f in gsets.enumerate_gmaps(X, Y):
                cells.append((gsets.transport_functor(f),
                              gsets.transport_groupoid(X)[1],
                              gsets.transport_groupoid(Y)[1]))
    for (u, piA, piC) in cells:
        for (v, piB, piC2) in cells:
            if u.target is not v.target:
                continue
            ic = iso_comma(u, v)
            embed = compose_functors(piA, ic.proj_left)
            if not is_faithful(embed):
                return False
    return True


SUITE_RUNNERS = {
    "presentation": presentation_suite,
    "biset-relations": biset_relations_suite,
    "realization": realization_suite,
    "transport": transport_suite,
    "fused": fused_suite,
    "spannable": spannable_suite,
}


def _run_one(name, cfg):
    # suites running inside the all-pool must not fork again
    from dataclasses import replace
    return SUITE_RUNNERS[name](replace(cfg, jobs=1))


def run_suite(name, cfg):
    if name == "all":
        t0 = time.time()
        if cfg.jobs > 1:
            import multiprocessing as mp
            with mp.Pool(min(cfg.jobs, len(SUITES))) as pool:
                reports = pool.starmap(_run_one, [(n, cfg) for n in SUITES])
        else:
            reports = [SUITE_RUNNERS[n](cfg) for n in SUITES]
        return {"suite": "all", "ok": all(r["ok"] for r in reports),
                "elapsed_s": round(time.time() - t0, 2), "reports": reports}
    if name not in SUITE_RUNNERS:
        raise ValueError("unknown suite %r (known: %s, all)"
                         % (name, ", ".join(SUITES)))
    return SUITE_RUNNERS[name](cfg)
