import json
from pathlib import Path

import pytest

from genretext.cli import run

DATA = Path(__file__).resolve().parents[1] / "src" / "genretext" / "data"


def test_gen_document_starts_with_heading(tmp_path, capsys):
    out = tmp_path / "doc.txt"
    code = run([
        "gen", "--genre", "procedure", "--goal", "select-word", "--lang", "fr",
        "--mode", "deterministic", "--output", str(out),
    ])
    assert code == 0
    text = out.read_text(encoding="utf-8")
    assert text.splitlines()[0] == "## La sélection"
    assert "Pour sélectionner un mot, faites un double-clic sur le mot" in text


def test_gen_corpus_and_tables(tmp_path):
    corpus = tmp_path / "c.jsonl"
    assert run([
        "gen", "--genre", "procedure", "--corpus", "--count", "200", "--seed", "7",
        "--mode", "stochastic", "--output", str(corpus),
    ]) == 0
    lines = corpus.read_text(encoding="utf-8").splitlines()
    meta = json.loads(lines[0])["meta"]
    assert meta["seed"] == 7
    assert len(lines) == 201

    tsv = tmp_path / "t.tsv"
    assert run([
        "tables", "--corpus", str(corpus), "--system", "mood-system", "--by", "element",
        "--output", str(tsv),
    ]) == 0
    assert tsv.read_text(encoding="utf-8").startswith("element\tdeclarative\timperative\tn")

    pretty = tmp_path / "t.txt"
    assert run([
        "tables", "--corpus", str(corpus), "--system", "mood-system", "--by", "element",
        "--pretty", "--output", str(pretty),
    ]) == 0
    text = pretty.read_text(encoding="utf-8")
    assert "\t" not in text and "substep" in text


def test_gen_procedure_corpus_has_structural_zeros(tmp_path):
    corpus = tmp_path / "c.jsonl"
    run([
        "gen", "--genre", "procedure", "--corpus", "--count", "300", "--seed", "7",
        "--mode", "stochastic", "--output", str(corpus),
    ])
    kinds = {
        json.loads(line)["element"]
        for line in corpus.read_text(encoding="utf-8").splitlines()[1:]
    }
    assert not kinds & {"constraint", "result", "function"}


def test_usage_errors_exit_64(capsys):
    assert run(["gen", "--genre", "procedure", "--corpus", "--count", "5",
                "--mode", "stochastic"]) == 64
    assert run(["gen", "--genre", "procedure", "--mode", "deterministic"]) == 64
    with pytest.raises(SystemExit) as exc:
        run(["gen", "--genre", "nope"])
    assert exc.value.code == 64


def test_data_errors_exit_2(tmp_path, capsys):
    missing = tmp_path / "nope.jsonl"
    assert run(["tables", "--corpus", str(missing), "--system", "mood-system"]) == 2
    assert run(["gen", "--genre", "procedure", "--goal", "g-zzz",
                "--mode", "deterministic"]) == 2


def test_deterministic_seed_warning(capsys):
    assert run(["gen", "--genre", "procedure", "--goal", "paste",
                "--mode", "deterministic", "--seed", "5"]) == 0
    assert "ignores --seed" in capsys.readouterr().err


def test_compare_pass_and_fail(tmp_path, capsys):
    fig6 = str(DATA / "reference" / "paper-fig6.tsv")
    assert run(["compare", "--observed", fig6, "--reference", fig6,
                "--tolerance", "0"]) == 0
    other = tmp_path / "skewed.tsv"
    other.write_text(
        "genre\tdeclarative\timperative\n"
        "procedure\t10.0\t90.0\n"
        "ready-reference\t55.6\t44.4\n"
        "elaboration\t22.4\t77.6\n",
        encoding="utf-8",
    )
    assert run(["compare", "--observed", fig6, "--reference", str(other),
                "--tolerance", "3.0"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "worst cell" in out


def test_kwic_cli(tmp_path, capsys):
    corpus = tmp_path / "c.jsonl"
    run([
        "gen", "--genre", "procedure", "--corpus", "--count", "50", "--seed", "2",
        "--mode", "stochastic", "--output", str(corpus),
    ])
    assert run(["kwic", "--corpus", str(corpus), "--pattern", "fenêtre",
                "--window", "4"]) == 0
    out = capsys.readouterr().out
    assert "fenêtre" in out


def test_ttest_cli(capsys):
    assert run(["ttest", "--sample-a", "2.1,2.5,2.3,2.2",
                "--sample-b", "3.1,3.3,3.0,3.4"]) == 0
    out = capsys.readouterr().out
    assert "t = -7.400000" in out
    assert "df = 5.973451" in out


def test_validate_cli(tmp_path, capsys):
    assert run(["validate", "--task-model", str(DATA / "macwrite-sample.json")]) == 0
    bad = tmp_path / "bad.jsonl"
    bad.write_text(
        json.dumps({
            "id": "u1", "genre": "procedure", "element": "substep", "lang": "fr",
            "text": "Fermez la fenêtre",
            "bundle": {"modal-subtype": "obligation"},
            "context": {"finite": True, "clausal": True},
        }) + "\n",
        encoding="utf-8",
    )
    assert run(["validate", "--corpus", str(bad)]) == 1
    assert "entry condition not met" in capsys.readouterr().out


def test_tables_cross_and_plot(tmp_path):
    corpus = tmp_path / "c.jsonl"
    run([
        "gen", "--genre", "elaboration", "--corpus", "--count", "100", "--seed", "4",
        "--mode", "stochastic", "--output", str(corpus),
    ])
    out = tmp_path / "cross.tsv"
    png = tmp_path / "cross.png"
    assert run(["tables", "--corpus", str(corpus), "--cross",
                "--output", str(out), "--plot", str(png)]) == 0
    assert out.read_text(encoding="utf-8").startswith("genre\t")
    assert png.stat().st_size > 1000


def test_end_to_end_substep_mood_compare(tmp_path, capsys):
    parts = []
    for genre in ("procedure", "ready-reference", "elaboration"):
        out = tmp_path / f"{genre}.jsonl"
        assert run([
            "gen", "--genre", genre, "--corpus", "--count", "2000", "--seed", "7",
            "--mode", "stochastic", "--output", str(out),
        ]) == 0
        parts.append(out.read_text(encoding="utf-8"))
    combined = tmp_path / "all.jsonl"
    combined.write_text("".join(parts), encoding="utf-8")

    observed = tmp_path / "obs.tsv"
    assert run([
        "tables", "--corpus", str(combined), "--system", "mood-system",
        "--by", "genre", "--element", "substep", "--output", str(observed),
    ]) == 0
    assert run([
        "compare", "--observed", str(observed),
        "--reference", str(DATA / "reference" / "paper-fig6.tsv"),
        "--tolerance", "3.0",
    ]) == 0
    assert "PASS" in capsys.readouterr().out


def test_gen_corpus_english(tmp_path):
    out = tmp_path / "en.jsonl"
    assert run([
        "gen", "--genre", "ready-reference", "--corpus", "--count", "100",
        "--seed", "12", "--mode", "stochastic", "--lang", "en",
        "--output", str(out),
    ]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()[1:]
    units = [json.loads(line) for line in lines]
    assert all(u["lang"] == "en" for u in units)
    assert any(u["text"].startswith("This command") for u in units)


def test_compare_plot(tmp_path):
    fig4 = str(DATA / "reference" / "paper-fig4.tsv")
    png = tmp_path / "deltas.png"
    assert run(["compare", "--observed", fig4, "--reference", fig4,
                "--tolerance", "1.0", "--plot", str(png)]) == 0
    assert png.stat().st_size > 1000
