"""
Bounded ("local") citation network among corpus documents.

Each document gets a citation key written the way WoS writes cited
references ("ZHANG CL, 2002, CLIN CANCER RES, V8, P1234"); a document cites
another when one of its CR strings starts with that key at a token
boundary, so trailing ", DOI ..." parts do not prevent a match.
"""
from __future__ import annotations

import csv
import logging
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Sequence

from .corpus import Corpus, Document

log = logging.getLogger(__name__)

Mode = Literal["strict", "relaxed"]


class CitationKeyError(ValueError):
    """A document lacks the metadata needed for its citation key."""


@dataclass(frozen=True)
class CitationKey:
    text: str
    author: str | None
    year: int | None
    journal: str | None
    volume: str | None
    page: str | None
    strictness: Mode = "strict"


@dataclass(frozen=True)
class CitationGraph:
    vertices: tuple[str, ...]
    arcs: frozenset[tuple[int, int]]
    years: tuple[int | None, ...] = ()

    def __post_init__(self) -> None:
        n = len(self.vertices)
        for a, b in self.arcs:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"arc {(a, b)} out of range for {n} vertices")
        if self.years and len(self.years) != n:
            raise ValueError("years must align with vertices")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def year(self, v: int) -> int | None:
        return self.years[v] if self.years else None

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)

    def successors(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in sorted(self.arcs):
            out[a].append(b)
        return out

    def predecessors(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in sorted(self.arcs):
            out[b].append(a)
        return out


@dataclass
class MatchReport:
    mode: str
    documents: int = 0
    keys_built: int = 0
    keys_failed: int = 0
    refs_scanned: int = 0
    refs_matched: int = 0
    arcs: int = 0
    self_citations: int = 0
    ambiguous_keys: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)

    def rows(self) -> list[tuple[str, int | str]]:
        return [
            ("mode", self.mode),
            ("documents", self.documents),
            ("keys_built", self.keys_built),
            ("keys_failed", self.keys_failed),
            ("refs_scanned", self.refs_scanned),
            ("refs_matched", self.refs_matched),
            ("arcs", self.arcs),
            ("self_citations", self.self_citations),
            ("ambiguous_keys", self.ambiguous_keys),
        ]

    def write_csv(self, path: str | Path, newline: str = "\n") -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator=newline)
            w.writerow(["statistic", "value"])
            w.writerows(self.rows())


def fold(text: str) -> str:
    """Strip diacritics (WoS CR strings are ASCII)."""
    return unicodedata.normalize("NFKD", text).encode("ascii", "ignore").decode("ascii")


def format_author(name: str) -> str:
    """WoS AU value to CR author form: "Zhang, C. L." -> "ZHANG CL"."""
    name = fold(name).strip()
    if "," in name:
        surname, initials = name.split(",", 1)
        initials = re.sub(r"[.\s]", "", initials)
    else:
        # MEDLINE style "Zhang CL" already has the shape we want
        surname, initials = name, ""
    surname = " ".join(surname.replace(".", " ").split())
    return " ".join(p for p in (surname, initials) if p).upper()


def _clean(text: str) -> str:
    return " ".join(fold(text).upper().split())


def citation_key(doc: Document, mode: Mode = "strict") -> CitationKey:
    required = ["author", "year", "journal"] + (["volume", "page"] if mode == "strict" else [])
    author = format_author(doc.first_author) if doc.first_author else None
    journal = _clean(doc.journal_abbrev) if doc.journal_abbrev else None
    volume = _clean(doc.volume) if doc.volume else None
    page = _clean(doc.begin_page) if doc.begin_page else None
    present = {"author": author, "year": doc.pub_year, "journal": journal, "volume": volume, "page": page}
    missing = [k for k in required if not present[k]]
    if missing:
        raise CitationKeyError(f"document {doc.pmid}: cannot build {mode} key, missing {', '.join(missing)}")
    parts = [author, str(doc.pub_year), journal]
    if mode == "strict":
        parts += [f"V{volume}", f"P{page}"]
        return CitationKey(", ".join(parts), author, doc.pub_year, journal, volume, page, "strict")
    return CitationKey(", ".join(parts), author, doc.pub_year, journal, None, None, "relaxed")


def build_local_citation_graph(corpus: Corpus, mode: Mode = "strict",
                               exclude: Sequence[str] = ()) -> tuple[CitationGraph, MatchReport]:
    """Arcs citing -> cited among the documents of *corpus*.

    Documents whose key cannot be built can still cite but cannot be cited.
    PMIDs in *exclude* are dropped from the vertex set.
    """
    if mode == "relaxed":
        log.warning("relaxed citation keys (author, year, journal) collide for prolific authors; expect false positives")
    skip = set(exclude)
    docs = [d for d in corpus.documents if d.pmid not in skip]
    report = MatchReport(mode=mode, documents=len(docs))
    n_parts = 5 if mode == "strict" else 3

    index: dict[str, list[int]] = {}
    for i, d in enumerate(docs):
        try:
            key = citation_key(d, mode)
        except CitationKeyError as exc:
            report.keys_failed += 1
            report.failures.append((d.pmid, str(exc)))
            continue
        report.keys_built += 1
        index.setdefault(key.text, []).append(i)
    report.ambiguous_keys = sum(1 for v in index.values() if len(v) > 1)

    arcs: set[tuple[int, int]] = set()
    for a, d in enumerate(docs):
        for ref in d.cited_refs:
            report.refs_scanned += 1
            tokens = _clean(ref.raw).split(", ")
            if len(tokens) < n_parts:
                continue
            hits = index.get(", ".join(tokens[:n_parts]))
            if not hits:
                continue
            report.refs_matched += 1
            for b in hits:
                arcs.add((a, b))
    report.arcs = len(arcs)
    report.self_citations = sum(1 for a, b in arcs if a == b)
    graph = CitationGraph(tuple(d.pmid for d in docs), frozenset(arcs), tuple(d.pub_year for d in docs))
    return graph, report


def local_citation_scores(g: CitationGraph) -> dict[str, int]:
    """In-degree within the bounded network, keyed by vertex label."""
    indeg = [0] * g.n
    for _, b in g.arcs:
        indeg[b] += 1
    return {v: indeg[i] for i, v in enumerate(g.vertices)}
