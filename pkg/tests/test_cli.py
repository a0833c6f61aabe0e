import json
import shutil
from importlib import resources

import pytest

from sciuncert import cli
from sciuncert.knowledge import demo_text, load_default_library, sample_conllu
from sciuncert.pipeline import annotate_conllu, serialize_verdicts


@pytest.fixture()
def patterns_dir(tmp_path):
    src = resources.files("sciuncert").joinpath("patterns")
    dst = tmp_path / "patterns"
    dst.mkdir()
    for name in ("lexicons.json", "su_groups.json", "cancellation.json", "authorial.json"):
        shutil.copy(str(src.joinpath(name)), dst / name)
    return dst


def test_annotate_conllu_matches_library_output(tmp_path, capsys):
    inp = tmp_path / "in.conllu"
    inp.write_text(sample_conllu(), encoding="utf-8")
    out = tmp_path / "out.jsonl"
    code = cli.main(["annotate", "--input", str(inp), "--format", "conllu", "--output", str(out)])
    assert code == 0
    lib = load_default_library()
    _, verdicts = annotate_conllu(sample_conllu(), lib)
    assert out.read_text(encoding="utf-8") == serialize_verdicts(verdicts)


def test_annotate_missing_input_exits_1_without_partial_output(tmp_path, capsys):
    out = tmp_path / "out.jsonl"
    code = cli.main(["annotate", "--input", str(tmp_path / "absent.txt"), "--output", str(out)])
    assert code == 1
    assert not out.exists()
    assert "cannot read input" in capsys.readouterr().err


def test_annotate_demo_text_counts(tmp_path, capsys):
    inp = tmp_path / "demo.txt"
    inp.write_text(demo_text(), encoding="utf-8")
    code = cli.main(["annotate", "--input", str(inp), "--format", "text"])
    assert code == 0
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    assert sum(1 for rec in lines if rec["label"] == "UNCERTAINTY") == 4


def test_annotate_compile_error_exits_2(tmp_path, capsys):
    bad = tmp_path / "patterns"
    bad.mkdir()
    (bad / "broken.json").write_text(
        json.dumps({"rules": [{"id": "x", "group": "NOPE", "matchers": [{"text_exact": "a"}]}]}),
        encoding="utf-8",
    )
    inp = tmp_path / "in.txt"
    inp.write_text("Hello there.", encoding="utf-8")
    code = cli.main(["annotate", "--input", str(inp), "--format", "text", "--patterns", str(bad)])
    assert code == 2
    assert "compile error" in capsys.readouterr().err


def test_paper_faithful_flag_changes_labels(tmp_path, capsys):
    inp = tmp_path / "in.txt"
    inp.write_text("Nonetheless, only a subset of alcohol consumers develops CRC.", encoding="utf-8")
    cli.main(["annotate", "--input", str(inp), "--format", "text"])
    default_out = capsys.readouterr().out
    cli.main(["annotate", "--input", str(inp), "--format", "text", "--paper-faithful"])
    faithful_out = capsys.readouterr().out
    assert json.loads(default_out)["label"] == "UNCERTAINTY"
    assert json.loads(faithful_out)["label"] == "CLAIM"


def test_evaluate_on_sample_rows(tmp_path, capsys):
    gold = tmp_path / "gold.csv"
    gold.write_text(
        "Sentence,Uncertainty,Authorial Ref.\n"
        '"It is possible that corticosteroids prevent some acute gastrointestinal complications.",Yes,Author(s)\n'
        '"In this test, a likelihood ratio test statistic is calculated for the two tree versus one tree models, and compared to a null distribution generated by non-parametric bootstrapping (see Methods).",No,-\n'
        '"Previous meta-analyses have shown a significant benefit for NaHCO3 in comparison to normal saline (NS) infusion [6,7], although they highlighted the possibility of publication bias.",Yes,Former/Prev. Study(s)\n',
        encoding="utf-8",
    )
    report_path = tmp_path / "report.json"
    code = cli.main(["evaluate", "--gold", str(gold), "--report", str(report_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "accuracy" in out
    report = json.loads(report_path.read_text(encoding="utf-8"))
    assert report["accuracy"] == 1.0
    assert report["authorial_agreement"] == 1.0
    assert report["library_version"] == load_default_library().version


def test_evaluate_missing_gold_exits_1(tmp_path, capsys):
    code = cli.main(["evaluate", "--gold", str(tmp_path / "absent.csv")])
    assert code == 1


def test_patterns_lint_clean_and_hash(tmp_path, capsys, patterns_dir):
    assert cli.main(["patterns", "lint", "--patterns", str(patterns_dir)]) == 0
    assert "clean" in capsys.readouterr().out
    assert cli.main(["patterns", "hash", "--patterns", str(patterns_dir)]) == 0
    assert capsys.readouterr().out.strip() == load_default_library().version


def test_patterns_hash_stable_across_invocations(capsys):
    cli.main(["patterns", "hash"])
    first = capsys.readouterr().out
    cli.main(["patterns", "hash"])
    assert capsys.readouterr().out == first


def test_patterns_test_passes_on_default_assets(capsys):
    assert cli.main(["patterns", "test"]) == 0
    assert "exemplar spans covered" in capsys.readouterr().out


def test_patterns_test_names_uncovered_exemplar(tmp_path, capsys, patterns_dir):
    su = json.loads((patterns_dir / "su_groups.json").read_text(encoding="utf-8"))
    su["rules"] = [r for r in su["rules"] if r["id"] != "dis_on_one_hand"]
    (patterns_dir / "su_groups.json").write_text(json.dumps(su), encoding="utf-8")
    code = cli.main(["patterns", "test", "--patterns", str(patterns_dir)])
    assert code == 1
    out = capsys.readouterr().out
    assert "UNCOVERED" in out and "On the one hand" in out


def test_patterns_lint_reports_errors_nonzero(tmp_path, capsys):
    bad = tmp_path / "patterns"
    bad.mkdir()
    (bad / "p.json").write_text(
        json.dumps({
            "lexicons": {},
            "rules": [
                {"id": "a", "group": "MODALITY", "matchers": [{"text_exact": "x"}]},
                {"id": "b", "group": "MODALITY", "matchers": [{"text_exact": "x"}]},
            ],
        }),
        encoding="utf-8",
    )
    assert cli.main(["patterns", "lint", "--patterns", str(bad)]) == 1
    assert "DUPLICATE" in capsys.readouterr().out
