"""Linking MEDLINE and WoS records into one document set keyed by PMID."""
from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .medline import MedlineRecord, MeshHeading, extract_mesh
from .report import Report, ensure
from .wos import CitedReference, WosRecord, parse_cited_reference


@dataclass(frozen=True)
class Document:
    pmid: str
    wos_ut: str | None = None
    first_author: str = ""
    pub_year: int | None = None
    journal_abbrev: str | None = None
    volume: str | None = None
    begin_page: str | None = None
    mesh: tuple[MeshHeading, ...] = ()
    mesh_terms: tuple[str, ...] = ()
    cited_refs: tuple[CitedReference, ...] = ()
    times_cited: int = 0
    linked: bool = False
    in_medline: bool = False
    in_wos: bool = False


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    medline_n: int = 0
    wos_n: int = 0
    linked_n: int = 0
    keep_qualifiers: bool = False
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def provenance(self) -> dict[str, int]:
        return {"medline_n": self.medline_n, "wos_n": self.wos_n, "linked_n": self.linked_n}

    def by_pmid(self) -> dict[str, Document]:
        return {d.pmid: d for d in self.documents}


def _mesh_terms(headings: Iterable[MeshHeading], keep_qualifiers: bool) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for h in headings:
        for term in h.term(keep_qualifiers):
            seen.setdefault(term, None)
    return tuple(seen)


def _first_page(pg: str | None) -> str | None:
    if not pg:
        return None
    return re.split(r"[-\s;,]", pg.strip(), maxsplit=1)[0] or None


def _from_medline(rec: MedlineRecord, keep_qualifiers: bool) -> Document:
    mesh = tuple(extract_mesh(rec, keep_qualifiers))
    return Document(
        pmid=rec.pmid,
        first_author=rec.authors[0] if rec.authors else "",
        pub_year=rec.pub_year,
        journal_abbrev=rec.journal_abbrev.upper() or None,
        volume=rec.first("VI"),
        begin_page=_first_page(rec.first("PG")),
        mesh=mesh,
        mesh_terms=_mesh_terms(mesh, keep_qualifiers),
        in_medline=True,
    )


def _wos_fields(rec: WosRecord) -> dict:
    return dict(
        wos_ut=rec.ut or None,
        first_author=rec.first_author,
        pub_year=rec.pub_year,
        journal_abbrev=rec.journal_abbrev_29 or None,
        volume=rec.volume,
        begin_page=rec.begin_page,
        cited_refs=tuple(parse_cited_reference(r) for r in rec.cited_refs_raw),
        times_cited=rec.times_cited,
        in_wos=True,
    )


def _wos_key(rec: WosRecord, index: int) -> str:
    if rec.pmid:
        return rec.pmid
    return rec.ut or f"WOS-REC-{index + 1}"


def link_by_pmid(
    medline: Sequence[MedlineRecord],
    wos: Sequence[WosRecord],
    keep_qualifiers: bool = False,
    report: Report | None = None,
) -> Corpus:
    """Merge records sharing a PMID; WoS metadata wins on linked documents.

    WoS records without a PM tag cannot link and are keyed by their UT.
    """
    report = ensure(report)
    warnings: list[str] = []

    wos_by_key: dict[str, WosRecord] = {}
    wos_order: list[str] = []
    for i, rec in enumerate(wos):
        key = _wos_key(rec, i)
        if key in wos_by_key:
            msg = f"duplicate WoS record for {key}; first one used"
            warnings.append(msg)
            report.warn("link", msg)
            continue
        wos_by_key[key] = rec
        wos_order.append(key)

    docs: list[Document] = []
    matched: set[str] = set()
    medline_keys: set[str] = set()
    for rec in medline:
        if rec.pmid in medline_keys:
            report.warn("link", f"duplicate MEDLINE PMID {rec.pmid}; first one used")
            continue
        medline_keys.add(rec.pmid)
        doc = _from_medline(rec, keep_qualifiers)
        w = wos_by_key.get(rec.pmid)
        if w is not None:
            merged = {k: v for k, v in _wos_fields(w).items() if v not in (None, "") or k == "cited_refs"}
            doc = replace(doc, linked=True, **merged)
            matched.add(rec.pmid)
        docs.append(doc)

    for key in wos_order:
        if key in matched:
            continue
        if key in medline_keys:
            continue
        docs.append(Document(pmid=key, **_wos_fields(wos_by_key[key])))

    corpus = Corpus(
        documents=tuple(docs),
        medline_n=len(medline_keys),
        wos_n=len(wos_order),
        linked_n=len(matched),
        keep_qualifiers=keep_qualifiers,
        warnings=tuple(warnings),
    )
    report.set("provenance", corpus.provenance)
    if medline_keys and wos_order:
        unmatched = len(medline_keys) - len(matched)
        if unmatched:
            report.notice("link", f"{unmatched} MEDLINE records without a WoS match")
    return corpus


def attach_times_cited(corpus: Corpus, wos: Sequence[WosRecord]) -> Corpus:
    """Copy WoS TC onto linked documents; MEDLINE-only documents get 0.

    WoS-only documents already carry their own TC and are left alone.
    """
    tc: dict[str, int] = {}
    for rec in wos:
        if rec.pmid and rec.pmid not in tc:
            tc[rec.pmid] = rec.times_cited
    docs = []
    for d in corpus.documents:
        if d.linked and d.pmid in tc:
            d = replace(d, times_cited=tc[d.pmid])
        elif not d.in_wos:
            d = replace(d, times_cited=0)
        docs.append(d)
    return replace(corpus, documents=tuple(docs))


def emit_wos_search_string(pmids: Sequence[str], chunk: int = 500, field: str = "PMID") -> list[str]:
    """Advanced-search queries for WoS, at most *chunk* PMIDs each."""
    if not pmids:
        raise ValueError("no PMIDs to search for")
    if chunk < 1:
        raise ValueError("chunk must be >= 1")
    n = math.ceil(len(pmids) / chunk)
    return [f"{field}=({' OR '.join(pmids[i * chunk:(i + 1) * chunk])})" for i in range(n)]


def emit_pubmed_search_string(wos: Sequence[WosRecord]) -> str:
    pmids = [r.pmid for r in wos if r.pmid]
    if not pmids:
        raise ValueError("no WoS record carries a PMID (PM tag)")
    return " OR ".join(f"{p}[PMID]" for p in pmids)


def write_corpus_csv(corpus: Corpus, path: str | Path, newline: str = "\n") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator=newline)
        w.writerow(["pmid", "linked", "times_cited", "n_mesh", "n_refs"])
        for d in corpus.documents:
            w.writerow([d.pmid, int(d.linked), d.times_cited, len(d.mesh_terms), len(d.cited_refs)])
