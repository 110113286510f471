import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from citmesh.corpus import Corpus, Document
from citmesh.report import Report
from citmesh.stats import citations_by_mesh, corpus_counts, frequency_table, gini, top_frequencies, yearly_series
from citmesh.wos import parse_cited_reference
from oracles import gini_double_sum


@pytest.mark.parametrize("values, expected", [
    ([5, 5, 5, 5], 0.0),
    ([0, 0, 0, 1], 0.75),
    ([1, 2, 3], 2 / 9),
])
def test_gini_hand_values(values, expected):
    assert gini(values) == pytest.approx(expected, abs=1e-9)
    assert gini_double_sum(values) == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("bad", [[], [0, 0], [1, -1]])
def test_gini_rejects(bad):
    with pytest.raises(ValueError):
        gini(bad)


positive = st.lists(st.integers(0, 1000), min_size=1, max_size=40).filter(lambda x: sum(x) > 0)


@given(positive, st.integers(1, 50), st.randoms())
def test_gini_matches_double_sum_and_invariances(x, scale, rnd):
    g = gini(x)
    assert g == pytest.approx(gini_double_sum(x), abs=1e-9)
    assert 0.0 <= g <= 1.0 - 1.0 / len(x) + 1e-12
    assert gini([v * scale for v in x]) == pytest.approx(g, abs=1e-9)
    y = list(x)
    rnd.shuffle(y)
    assert gini(y) == pytest.approx(g, abs=1e-12)


def _doc(pmid, year=None, tc=0, mesh=(), refs=()):
    return Document(pmid=pmid, pub_year=year, times_cited=tc, mesh_terms=tuple(mesh),
                    cited_refs=tuple(parse_cited_reference(r) for r in refs), in_medline=True, in_wos=True)


def test_top_frequencies_tie_break():
    c = Corpus(documents=(_doc("1", mesh=["B", "A", "C"]), _doc("2", mesh=["C", "B"])))
    assert top_frequencies(c, "mesh", 2) == [("B", 2), ("C", 2)]
    assert top_frequencies(c, "mesh", None)[-1] == ("A", 1)
    with pytest.raises(ValueError):
        top_frequencies(c, "mesh", 0)


def test_journal_counts_are_instances():
    c = Corpus(documents=(_doc("1", refs=["A B, 2000, NATURE, V1, P1", "C D, 2001, NATURE, V2, P2"]),))
    assert frequency_table(c, "referenced_journal") == {"NATURE": 2}


def test_fixture_counts(corpus):
    k = corpus_counts(corpus)
    assert (k.n_docs_medline, k.n_docs_wos) == (10, 9)
    assert k.mesh_attributions == sum(len(d.mesh_terms) for d in corpus.documents) == 45
    assert (k.unique_mesh, k.cited_ref_instances, k.unique_cited_refs, k.unique_referenced_journals) == (17, 28, 18, 11)


def test_top_on_fixture_sorted(corpus):
    rows = top_frequencies(corpus, "referenced_journal", 5)
    assert len(rows) == 5
    assert rows == sorted(rows, key=lambda kv: (-kv[1], kv[0]))


def test_yearly_series():
    report = Report()
    c = Corpus(documents=(_doc("1", 2000, 4), _doc("2", 2000, 2), _doc("3", 2002, 9), _doc("4", None, 100)))
    s = yearly_series(c, report)
    assert [(p.year, p.n_papers, p.citations, p.c_per_p) for p in s] == [(2000, 2, 6, 3.0), (2002, 1, 9, 9.0)]
    assert report.facts["undated_documents"] == 1


def test_citations_by_mesh():
    c = Corpus(documents=(_doc("1", tc=3, mesh=["A", "B"]), _doc("2", tc=5, mesh=["B"])))
    assert citations_by_mesh(c) == {"A": 3, "B": 8}


def test_counts_empty_corpus():
    with pytest.raises(ValueError):
        corpus_counts(Corpus(documents=()))


def test_gini_random_seeded():
    rng = random.Random(3)
    for _ in range(100):
        x = [rng.random() * 10 for _ in range(rng.randint(1, 30))]
        assert gini(x) == pytest.approx(gini_double_sum(x), abs=1e-9)
