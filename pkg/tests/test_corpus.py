import math
import random
import re

import pytest
from hypothesis import given
from hypothesis import strategies as st

from citmesh.corpus import attach_times_cited, emit_pubmed_search_string, emit_wos_search_string, link_by_pmid
from citmesh.medline import MedlineRecord
from citmesh.wos import WosRecord


def _med(pmid, **kw):
    return MedlineRecord(pmid=pmid, **kw)


def _wos(pmid, tc=0, **kw):
    return WosRecord(ut=f"WOS:{pmid}", pmid=pmid, times_cited=tc, **kw)


def test_five_plus_five_sharing_three():
    medline = [_med(p) for p in ("1", "2", "3", "4", "5")]
    wos = [_wos(p) for p in ("3", "9", "1", "8", "5")]
    c = link_by_pmid(medline, wos)
    # oracle: intersection {1,3,5}, union has 7 members
    assert c.linked_n == len({"1", "2", "3", "4", "5"} & {"3", "9", "1", "8", "5"}) == 3
    assert len(c) == len({"1", "2", "3", "4", "5"} | {"3", "9", "1", "8", "5"}) == 7
    assert [d.pmid for d in c.documents] == ["1", "2", "3", "4", "5", "9", "8"]
    assert len(c) == c.medline_n + c.wos_n - c.linked_n


def test_empty_wos_leaves_everything_unlinked():
    c = link_by_pmid([_med("1"), _med("2")], [])
    assert all(not d.linked and d.times_cited == 0 for d in c.documents)
    assert c.provenance == {"medline_n": 2, "wos_n": 0, "linked_n": 0}


def test_wos_wins_metadata(corpus):
    d = corpus.by_pmid()["10000003"]
    assert d.linked and d.first_author == "Zhang, C. L."
    assert d.journal_abbrev == "CLIN CANCER RES"
    assert d.mesh_terms[0] == "Alzheimer Disease"
    assert len(d.cited_refs) == 4


def test_fixture_corpus(corpus):
    assert corpus.provenance == {"medline_n": 10, "wos_n": 9, "linked_n": 9}
    assert len(corpus) == 10
    garcia = corpus.by_pmid()["10000010"]
    assert not garcia.linked and garcia.times_cited == 0 and garcia.journal_abbrev == "BRAIN"


def test_duplicate_wos_pmid_first_used():
    c = link_by_pmid([_med("1")], [_wos("1", tc=4), _wos("1", tc=9)])
    assert c.documents[0].times_cited == 4
    assert c.warnings


def test_attach_times_cited():
    medline = [_med("1"), _med("2")]
    wos = [_wos("1", tc=16)]
    c = attach_times_cited(link_by_pmid(medline, wos), wos)
    assert [d.times_cited for d in c.documents] == [16, 0]
    assert attach_times_cited(c, wos) == c


def test_wos_only_without_pmid_keyed_by_ut():
    c = link_by_pmid([], [WosRecord(ut="WOS:1"), WosRecord()])
    assert [d.pmid for d in c.documents] == ["WOS:1", "WOS-REC-2"]


@given(st.lists(st.integers(1, 40), unique=True, max_size=15), st.lists(st.integers(1, 40), unique=True, max_size=15), st.randoms())
def test_link_invariants(med_ids, wos_ids, rnd):
    medline = [_med(str(i)) for i in med_ids]
    wos = [_wos(str(i), tc=i) for i in wos_ids]
    c = link_by_pmid(medline, wos)
    pmids = [d.pmid for d in c.documents]
    assert len(pmids) == len(set(pmids)) == c.medline_n + c.wos_n - c.linked_n
    assert c.linked_n <= min(c.medline_n, c.wos_n)
    shuffled = list(wos)
    rnd.shuffle(shuffled)
    c2 = link_by_pmid(medline, shuffled)
    assert c2.linked_n == c.linked_n
    assert c2.by_pmid() == c.by_pmid()


def test_wos_search_string_forced_form():
    assert emit_wos_search_string(["1", "2", "3"], 2) == ["PMID=(1 OR 2)", "PMID=(3)"]
    assert emit_wos_search_string(["7"]) == ["PMID=(7)"]
    assert emit_wos_search_string(["7"], field="PM") == ["PM=(7)"]


def test_wos_search_string_chunk_count():
    pmids = [str(10_000_000 + i) for i in range(3558)]
    assert len(emit_wos_search_string(pmids, 500)) == math.ceil(3558 / 500) == 8


def test_wos_search_string_errors():
    with pytest.raises(ValueError):
        emit_wos_search_string([])
    with pytest.raises(ValueError):
        emit_wos_search_string(["1"], 0)


@given(st.lists(st.integers(1, 10**8).map(str), min_size=1, max_size=60), st.integers(1, 25))
def test_wos_chunks_partition_input(pmids, chunk):
    out = emit_wos_search_string(pmids, chunk)
    back = [p for q in out for p in re.fullmatch(r"PMID=\((.*)\)", q).group(1).split(" OR ")]
    assert back == pmids
    assert all(q.count(" OR ") < chunk for q in out)


def test_pubmed_search_string():
    wos = [_wos("10"), WosRecord(ut="x"), _wos("20")]
    s = emit_pubmed_search_string(wos)
    assert s == "10[PMID] OR 20[PMID]"
    # round trip by string split
    assert [t.removesuffix("[PMID]") for t in s.split(" OR ")] == ["10", "20"]
    with pytest.raises(ValueError):
        emit_pubmed_search_string([WosRecord(ut="x")])
