"""
Acceptance criteria, one test each, at the stated tolerances (all checks
are exact; coefficients are integers).  Each test prints a one-line
verdict; run with ``pytest -v tests/test_acceptance.py`` (add ``-s`` to
see the lines as they pass).
"""

import time

from mackey_kernel import bisets, groups, gsets, realization, relations, spans, suites, words

CORPUS = ("1", "C2", "C3", "C2xC2", "C4", "S3")


def corpus_groups():
    return [groups.named_group(n) for n in CORPUS]


def _line(name, ok, extra=""):
    print("[%s] %s%s" % ("PASS" if ok else "FAIL", name,
                         " (%s)" % extra if extra else ""))
    assert ok, name


def test_criterion_1_presentation_suite():
    """All relation families, double computation, <= 5 minutes."""
    cfg = suites.RunConfig(corpus=CORPUS)
    t0 = time.time()
    report = suites.presentation_suite(cfg)
    elapsed = time.time() - t0
    total = sum(s["instances"] for s in report["sections"])
    _line("criterion 1: presentation suite", report["ok"] and elapsed <= 300,
          "%d instances in %.1fs" % (total, elapsed))


def test_criterion_2_mackey_formula():
    """Res.Ind via iso-comma equals the double-coset sum, exactly."""
    count = 0
    ok = True
    for G in corpus_groups():
        for inst in relations.relation_instances("2c", [G]):
            r = relations.check_relation(inst, pipelines=("spans",))
            ok = ok and r["ok"]
            count += 1
    # the worked instance: G = S3, H = K = C2
    S3 = groups.named_group("S3")
    H = next(s for s in groups.all_subgroups(S3) if len(s) == 2)
    lc = spans.compose_spans(spans.elementary_ind(S3, H),
                             spans.elementary_res(S3, H))
    Hgrp, _ = groups.sub_as_group(S3, H)
    expected = spans.identity_lincomb(Hgrp) + spans.compose_spans(
        spans.elementary_res(Hgrp, {0}), spans.elementary_ind(Hgrp, {0}))
    ok = ok and (lc == expected)
    _line("criterion 2: Mackey formula", ok, "%d subgroup pairs" % count)


def test_criterion_3_deflativity_separation():
    """[Q <- G -> Q] is never the identity span but always realizes to it."""
    count = 0
    ok = True
    for G in corpus_groups():
        for N in groups.normal_subgroups(G):
            if len(N) == 1:
                continue
            Q, p = groups.quotient_group(G, N)
            r = realization.kernel_witness(G, p)
            ok = ok and (not r["span_equals_identity"]
                         and r["realization_equals_identity"])
            count += 1
    _line("criterion 3: deflativity separation", ok,
          "%d proper surjections" % count)


def test_criterion_4_realization_functoriality():
    """realize(composite) = tensor of realizations for words of length <= 3,
    and elementary spans map to the homonymous elementary bisets."""
    letters = suites._corpus_letters(corpus_groups())
    ok = True
    for L in letters:
        lhs = bisets.biset_lincomb(realization.realize(words.letter_span(L)))
        rhs = bisets.biset_lincomb(bisets.letter_to_biset(L))
        ok = ok and lhs.terms == rhs.terms
    count = 0
    for w in suites._composable_words(letters, 3):
        lhs = realization.realize_lincomb(words.evaluate_word_via_spans(w))
        rhs = realization.word_as_biset_lincomb(w)
        if lhs.terms != rhs.terms:
            ok = False
            break
        count += 1
    _line("criterion 4: realization functoriality", ok,
          "%d letters, %d words" % (len(letters), count))


def test_criterion_5_restricted_isomorphisms():
    """hom_basis bijects onto bifree/right-free transitive classes with
    matching composition tables."""
    named = ("1", "C2", "C3", "C2xC2", "S3")
    pool = [groups.named_group(n) for n in named]
    ok = True
    count = 0
    for pair_name in ("faithful_both", "faithful_right"):
        for H in pool:
            for G in pool:
                if G.num_arrows > 6:
                    continue
                r = realization.check_restricted_iso(pair_name, H, G)
                ok = ok and r.get("ok", False)
                count += 1
    _line("criterion 5: restricted isomorphisms", ok, "%d pairs" % count)


def test_criterion_6_bouc_simplification():
    """Unrestricted biset 2.(d) plus its re-derivation from deflativity."""
    ok = True
    count = 0
    for inst in relations.unrestricted_2d_instances(corpus_groups()):
        r = relations.check_relation(inst, pipelines=("bisets",))
        ok = ok and r["ok"]
        count += 1
    probes = 0
    for G in corpus_groups():
        for M in groups.normal_subgroups(G):
            for N in groups.normal_subgroups(G):
                r = relations.bouc_simplification_probe(G, M, N)
                ok = ok and r["ok"]
                probes += 1
    _line("criterion 6: Bouc simplification", ok,
          "%d relations, %d probes" % (count, probes))


def test_criterion_7_burnside_oracles():
    C2 = groups.named_group("C2")
    S3 = groups.named_group("S3")
    keys, table = gsets.burnside_table(C2)
    free = next(i for i, k in enumerate(keys) if len(k.rep) == 1)
    ok = table[free][free].terms == {keys[free]: 2}
    keysS, tableS = gsets.burnside_table(S3)
    ok = ok and len(keysS) == 4
    # independent oracle: the mark homomorphism is multiplicative
    marks = gsets.table_of_marks(S3)
    classes = groups.subgroup_conjugacy_classes(S3)
    for i in range(4):
        for j in range(4):
            coeffs = [tableS[i][j].terms.get(k, 0) for k in keysS]
            for t in range(4):
                got = sum(c * marks[t][jj] for jj, c in enumerate(coeffs))
                ok = ok and got == marks[t][i] * marks[t][j]
    basis, _ = bisets.double_burnside_table(C2)
    ok = ok and len(basis) == 5
    _line("criterion 7: Burnside oracles", ok)


def test_criterion_8_transport_and_fused():
    cfg = suites.RunConfig(corpus=CORPUS)
    t0 = time.time()
    rep_t = suites.transport_suite(cfg)
    rep_f = suites.fused_suite(cfg)
    elapsed = time.time() - t0
    ok = rep_t["ok"] and rep_f["ok"] and elapsed <= 600
    total = sum(s["instances"] for s in rep_t["sections"] + rep_f["sections"])
    _line("criterion 8: transport and fused suite", ok,
          "%d instances in %.1fs" % (total, elapsed))


def test_criterion_9_spannable_axioms():
    cfg = suites.RunConfig(corpus=CORPUS)
    report = suites.spannable_suite(cfg)
    _line("criterion 9: spannable-pair axioms", report["ok"],
          "%d sections" % len(report["sections"]))
