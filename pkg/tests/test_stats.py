import json
import math
from importlib import resources

import pytest
from hypothesis import given
from hypothesis import strategies as st

import genretext as gt
from genretext.corpus import CodedCorpus, CodedUnit
from genretext.errors import ShapeMismatchError, TooFewObservationsError
from genretext.stats import (
    BY_ELEMENT,
    BY_GENRE,
    compare_tables,
    cross_tab,
    kwic,
    local_mean_table,
    parse_tsv,
    render_pretty,
    render_tsv,
    t_test,
)
from genretext.systems import FINITE_CLAUSE, FeatureBundle, NON_FINITE_CLAUSE


def unit(i, genre, element, sel, ctx=FINITE_CLAUSE, text="Fermez la fenêtre Rechercher"):
    base = {
        "modal-system": "non-modal",
        "polarity": "positive",
        "agency": "reader-direct",
        "voice": "active",
        "process-type": "material",
        "clause-dependency": "independent",
        "conjunction-type": "none",
    }
    if ctx.finite:
        base["mood-system"] = "imperative"
    base.update(sel)
    return CodedUnit(f"x{i:03d}", genre, element, "fr", text, FeatureBundle(base, ctx))


def test_all_imperative_substeps(network):
    corpus = CodedCorpus([unit(i, "procedure", "substep", {}) for i in range(4)])
    table = local_mean_table(corpus, "mood-system", BY_ELEMENT, network)
    assert table.cells[("substep", "imperative")] == 100.0
    assert table.cells[("substep", "declarative")] == 0.0
    assert table.denominators["substep"] == 4


def test_local_mean_excludes_inapplicable(network):
    units = [
        unit(i, "procedure", "goal", {"conjunction-type": "purpose",
                                      "clause-dependency": "dependent"},
             ctx=NON_FINITE_CLAUSE)
        for i in range(2)
    ]
    units += [unit(i + 2, "procedure", "goal", {"mood-system": "declarative"}) for i in range(3)]
    table = local_mean_table(CodedCorpus(units), "mood-system", BY_ELEMENT, network)
    assert table.denominators["goal"] == 3
    assert table.cells[("goal", "declarative")] == 100.0


def test_row_sums_100(network, model, profiles, lexicon, rules):
    corpus = gt.generate_corpus(model, profiles["elaboration"], 500, "fr",
                                gt.STOCHASTIC, 3, lexicon, rules, network)
    for system in ("mood-system", "modal-system", "polarity", "conjunction-type"):
        table = local_mean_table(corpus, system, BY_ELEMENT, network)
        for row in table.rows:
            if table.is_empty_row(row):
                continue
            total = sum(table.cells[(row, f)] for f in table.features)
            assert abs(total - 100.0) <= 0.1


def test_denominators_never_exceed_corpus(network, model, profiles, lexicon, rules):
    corpus = gt.generate_corpus(model, profiles["ready-reference"], 300, "fr",
                                gt.STOCHASTIC, 21, lexicon, rules, network)
    from genretext.systems import applicable_systems

    for system in ("mood-system", "negation-kind", "modal-subtype"):
        table = local_mean_table(corpus, system, BY_GENRE, network)
        expected = sum(
            1 for u in corpus.units if system in applicable_systems(network, u.bundle)
        )
        assert sum(table.denominators.values()) == expected
        assert expected <= len(corpus.units)


def test_golden_mood_table(network, fixture_corpus):
    table = local_mean_table(fixture_corpus, "mood-system", BY_ELEMENT, network)
    golden = (
        resources.files("genretext")
        .joinpath("data/golden/fixture-mood-by-element.tsv")
        .read_text("utf-8")
    )
    assert render_tsv(table) == golden


def test_golden_polarity_table(network, fixture_corpus):
    table = local_mean_table(fixture_corpus, "polarity", BY_GENRE, network)
    golden = (
        resources.files("genretext")
        .joinpath("data/golden/fixture-polarity-by-genre.tsv")
        .read_text("utf-8")
    )
    assert render_tsv(table) == golden


def test_cross_tab_single_unit(network):
    corpus = CodedCorpus([unit(0, "procedure", "substep", {})])
    table = cross_tab(corpus)
    assert table.cells[("procedure", "substep")] == 100.0
    assert table.denominators["procedure"] == 1


def test_mixed_corpus_approximates_undifferentiated_mood_row(
    model, profiles, lexicon, rules, network
):
    # an even mix of the three genres lands near the genre-undifferentiated
    # substep mood row (imperative 76 / declarative 24)
    units = []
    for genre in gt.GENRES:
        corpus = gt.generate_corpus(model, profiles[genre], 2000, "fr",
                                    gt.STOCHASTIC, 7, lexicon, rules, network)
        units.extend(corpus.units)
    table = local_mean_table(CodedCorpus(units), "mood-system", BY_ELEMENT, network)
    assert table.cells[("substep", "imperative")] == pytest.approx(76.0, abs=5.0)
    assert table.cells[("substep", "declarative")] == pytest.approx(24.0, abs=5.0)


def test_cross_tab_rows_sum_100(model, profiles, lexicon, rules, network):
    corpus = gt.generate_corpus(model, profiles["ready-reference"], 250, "fr",
                                gt.STOCHASTIC, 17, lexicon, rules, network)
    table = cross_tab(corpus)
    total = sum(table.cells[("ready-reference", k)] for k in table.features)
    assert total == pytest.approx(100.0)


# --- t-test ---------------------------------------------------------------

def test_t_identical_samples():
    result = t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert result["t"] == 0.0
    assert not result["significant"]


def test_t_oracle_pairs():
    oracle = json.loads(
        resources.files("genretext").joinpath("data/ttest-oracle.json").read_text("utf-8")
    )
    assert len(oracle) == 5
    for case in oracle:
        result = t_test(case["a"], case["b"])
        assert result["t"] == pytest.approx(case["t"], abs=1e-6)
        assert result["df"] == pytest.approx(case["df"], abs=1e-6)


def test_t_zero_variance_sentinel():
    result = t_test([2.0, 2.0, 2.0], [3.0, 3.0])
    assert result["t"] == math.inf
    assert result["significant"]
    result = t_test([2.0, 2.0], [2.0, 2.0])
    assert result["t"] == 0.0
    assert not result["significant"]


def test_t_too_few():
    with pytest.raises(TooFewObservationsError):
        t_test([1.0], [1.0, 2.0])


@given(st.lists(st.floats(min_value=-100, max_value=100), min_size=3, max_size=12))
def test_t_self_is_zero(sample):
    if len(set(sample)) < 2:
        return
    assert t_test(sample, list(sample))["t"] == 0.0


def test_significance_uses_tabulated_criticals():
    # spec example pair is strongly significant at both levels
    r = t_test([2.1, 2.5, 2.3, 2.2], [3.1, 3.3, 3.0, 3.4], alpha=0.01)
    assert r["significant"]
    r = t_test([1.0, 1.1, 0.9, 1.05, 0.95], [1.02, 1.08, 0.92, 1.0], alpha=0.05)
    assert not r["significant"]


# --- KWIC -----------------------------------------------------------------

def test_kwic_basic():
    lines = kwic(["Fermez la fenêtre Rechercher"], "fenêtre", 4)
    assert len(lines) == 1
    assert lines[0] == "Fermez la  fenêtre  Rechercher"


def test_kwic_absent_pattern():
    assert kwic(["Fermez la fenêtre Rechercher"], "menu", 4) == []


def test_kwic_keyword_at_start():
    lines = kwic(["Fermez la fenêtre"], "fermez", 4)
    assert len(lines) == 1
    assert lines[0].strip().startswith("Fermez")


def test_kwic_case_insensitive_and_ordered():
    texts = ["La fenêtre apparaît", "Fermez la fenêtre Rechercher"]
    lines = kwic(texts, "FENÊTRE", 1)
    assert len(lines) == 2
    assert "apparaît" in lines[0]
    assert "Rechercher" in lines[1]


def test_kwic_window_zero():
    lines = kwic(["Fermez la fenêtre"], "la", 0)
    assert lines == ["la"]


def test_kwic_keeps_hyphen_and_apostrophe_tokens():
    lines = kwic(["Une copie du contenu du presse-papiers apparaît"], "presse-papiers", 2)
    assert len(lines) == 1
    lines = kwic(["On ouvre l'article du menu"], "l'article", 1)
    assert len(lines) == 1


# --- compare / serialization ----------------------------------------------

def test_compare_table_to_itself(network, fixture_corpus):
    table = local_mean_table(fixture_corpus, "mood-system", BY_ELEMENT, network)
    report = compare_tables(table, table, 0.0)
    assert report["pass"]


def test_compare_tolerance_boundary():
    a = gt.FrequencyTable("s", "element", ("r",), ("x", "y"),
                          {("r", "x"): 97.3, ("r", "y"): 2.7}, {"r": 10})
    b = gt.FrequencyTable("s", "element", ("r",), ("x", "y"),
                          {("r", "x"): 96.0, ("r", "y"): 2.9}, {"r": 10})
    assert compare_tables(a, b, 2.0)["pass"]
    report = compare_tables(a, b, 1.0)
    assert not report["pass"]
    assert report["worst_cell"] == ("r", "x")


def test_compare_symmetry(network, model, profiles, lexicon, rules):
    c1 = gt.generate_corpus(model, profiles["procedure"], 100, "fr", gt.STOCHASTIC, 1,
                            lexicon, rules, network)
    c2 = gt.generate_corpus(model, profiles["procedure"], 100, "fr", gt.STOCHASTIC, 2,
                            lexicon, rules, network)
    t1 = local_mean_table(c1, "mood-system", BY_ELEMENT, network)
    t2 = local_mean_table(c2, "mood-system", BY_ELEMENT, network)
    assert compare_tables(t1, t2, 5.0)["pass"] == compare_tables(t2, t1, 5.0)["pass"]
    assert compare_tables(t1, t2, 0.0)["pass"] == compare_tables(t2, t1, 0.0)["pass"]


def test_compare_shape_mismatch(network, fixture_corpus):
    mood = local_mean_table(fixture_corpus, "mood-system", BY_ELEMENT, network)
    pol = local_mean_table(fixture_corpus, "polarity", BY_ELEMENT, network)
    with pytest.raises(ShapeMismatchError):
        compare_tables(mood, pol, 1.0)


def test_compare_emptiness_mismatch(network):
    empty = CodedCorpus([unit(0, "procedure", "substep", {})])
    full = CodedCorpus([unit(0, "procedure", "substep", {}),
                        unit(1, "procedure", "goal", {"mood-system": "declarative"})])
    t_empty = local_mean_table(empty, "mood-system", BY_ELEMENT, network)
    t_full = local_mean_table(full, "mood-system", BY_ELEMENT, network)
    report = compare_tables(t_empty, t_full, 100.0)
    assert not report["pass"]


def test_tsv_round_trip(network, fixture_corpus):
    table = local_mean_table(fixture_corpus, "mood-system", BY_ELEMENT, network)
    parsed = parse_tsv(render_tsv(table))
    assert parsed.rows == table.rows
    assert parsed.features == table.features
    for row in table.rows:
        for feature in table.features:
            if table.is_empty_row(row):
                assert parsed.is_empty_row(row)
            else:
                assert parsed.cells[(row, feature)] == pytest.approx(
                    table.cells[(row, feature)], abs=0.05
                )


def test_pretty_render_contains_marker(network, fixture_corpus):
    # polarity is inapplicable to the heading unit only; mood has empty rows
    corpus = CodedCorpus([u for u in fixture_corpus.units if u.element == "substep"])
    table = local_mean_table(corpus, "mood-system", BY_ELEMENT, network)
    text = render_pretty(table)
    assert "—" in text
    assert "substep" in text
