"""Command-line surface: subcommands, exit codes, determinism, figures."""

import json

import pytest

from mackey_kernel import groups, serialize
from mackey_kernel.cli import main
from mackey_kernel.spans import elementary_ind, elementary_res
from conftest import order2_subgroup


@pytest.fixture()
def files(tmp_path):
    S3 = groups.named_group("S3")
    H = order2_subgroup(S3)
    _, incl = groups.sub_as_group(S3, H)
    u = tmp_path / "u.json"
    u.write_text(json.dumps(serialize.functor_to_json(incl)))
    w = tmp_path / "word.json"
    w.write_text(json.dumps({"letters": [
        {"kind": "Res", "group": "S3", "subgroup": sorted(H)},
        {"kind": "Ind", "group": "S3", "subgroup": sorted(H)}]}))
    wd = tmp_path / "word_di.json"
    wd.write_text(json.dumps({"letters": [
        {"kind": "Defl", "group": "C2", "normal": [0, 1]},
        {"kind": "Infl", "group": "C2", "normal": [0, 1]}]}))
    s1 = tmp_path / "ind.json"
    s1.write_text(json.dumps(serialize.span_to_json(elementary_ind(S3, H))))
    s2 = tmp_path / "res.json"
    s2.write_text(json.dumps(serialize.span_to_json(elementary_res(S3, H))))
    return tmp_path


def test_iso_comma_command(files, capsys):
    u = str(files / "u.json")
    assert main(["iso-comma", u, u]) == 0
    out = capsys.readouterr().out
    data = json.loads(out)
    assert len(data["objects"]) == 6


def test_iso_comma_type_mismatch(files, tmp_path, capsys):
    C2 = groups.named_group("C2")
    v = tmp_path / "v.json"
    v.write_text(json.dumps(serialize.functor_to_json(
        groups.hom_functor(C2, C2, (0, 1)))))
    assert main(["iso-comma", str(files / "u.json"), str(v)]) == 3


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["iso-comma", str(bad), str(bad)]) == 2


def test_normalize_command(files, capsys):
    assert main(["normalize", str(files / "word.json")]) == 0
    out = capsys.readouterr().out
    assert "1*[id]" in out
    assert main(["normalize", str(files / "word_di.json")]) == 0
    out = capsys.readouterr().out
    assert "id" not in out.replace("[id]", "")  # quotient span, not identity
    assert main(["normalize", "--deflative", str(files / "word_di.json")]) == 0
    out = capsys.readouterr().out
    assert "1*[id]" in out


def test_normalize_non_composable(tmp_path):
    w = tmp_path / "w.json"
    w.write_text(json.dumps({"letters": [
        {"kind": "Res", "group": "C2", "subgroup": [0]},
        {"kind": "Ind", "group": "C3", "subgroup": [0]}]}))
    assert main(["normalize", str(w)]) == 2


def test_compose_command(files, capsys):
    assert main(["compose", str(files / "ind.json"), str(files / "res.json")]) == 0
    out = capsys.readouterr().out
    assert "[id]" in out


def test_compose_mismatch(files):
    assert main(["compose", str(files / "ind.json"), str(files / "ind.json")]) == 3


def test_realize_command(files, capsys):
    assert main(["realize", str(files / "ind.json")]) == 0
    out = capsys.readouterr().out
    assert "6 elements" in out


def test_verify_exit_codes(capsys):
    assert main(["verify", "spannable", "--corpus", "1,C2"]) == 0
    capsys.readouterr()
    assert main(["verify", "presentation", "--corpus", "1,C2", "--sabotage"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "counterexample" in out


def test_verify_corpus_env(tmp_path, capsys, monkeypatch):
    corpus = tmp_path / "corpus.json"
    corpus.write_text(json.dumps(["1", "C2"]))
    monkeypatch.setenv("MACKEY_KERNEL_CORPUS", str(corpus))
    assert main(["verify", "fused"]) == 0


def test_table_command_and_figure(tmp_path, capsys):
    fig = tmp_path / "t.png"
    out = tmp_path / "t.csv"
    assert main(["table", "burnside", "C2", "--format", "csv",
                 "--figure", str(fig), "--out", str(out)]) == 0
    assert fig.exists() and fig.stat().st_size > 0
    text = out.read_text()
    assert "2*[G/{0}]" in text


def test_table_bound_exceeded():
    assert main(["table", "burnside", "S3", "--bound", "4"]) == 4


def test_table_unknown_group():
    assert main(["table", "burnside", "NOPE"]) == 2


def test_hom_basis_command(capsys):
    assert main(["hom-basis", "faithful_both", "C2", "C2"]) == 0
    out = capsys.readouterr().out
    assert len(out.strip().split("\n")) == 2
    assert main(["hom-basis", "all", "C2", "C2", "--bound", "4"]) == 0
    out = capsys.readouterr().out
    assert "truncated" in out


def test_determinism(files, capsys):
    outs = []
    for _ in range(2):
        assert main(["normalize", str(files / "word.json"), "--format", "json"]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_budget_exit_code():
    assert main(["hom-basis", "all", "S3", "S3", "--bound", "12",
                 "--budget", "1000"]) == 5


def test_verify_figure(tmp_path, capsys):
    fig = tmp_path / "verify.png"
    assert main(["verify", "spannable", "--corpus", "1,C2",
                 "--figure", str(fig)]) == 0
    assert fig.exists() and fig.stat().st_size > 0
