"""File-level steps shared by the CLI subcommands.

Each ``run_*`` function reads its inputs, writes its named outputs into
``config.out`` and returns the paths it wrote.
"""
from __future__ import annotations

import csv
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import formats
from .citegraph import build_local_citation_graph, local_citation_scores
from .corpus import Corpus, attach_times_cited, emit_pubmed_search_string, emit_wos_search_string, link_by_pmid, write_corpus_csv
from .mainpath import main_path, make_acyclic, spc
from .matrices import (EmptyMatrixError, SparseLabeledMatrix, build_cr_mesh, build_doc_attributes, build_doc_cr,
                       build_doc_mesh, build_jcr_mesh, project_columns, similarity)
from .medline import MedlineRecord, parse_medline
from .report import Report
from .stats import (citations_by_mesh, corpus_counts, frequency_table, gini, top_frequencies, write_counts_csv,
                    write_gini_csv, write_mesh_citations_csv, write_ranked_csv, write_yearly_csv, yearly_series)
from .wos import WosRecord, parse_cited_reference, parse_wos

log = logging.getLogger(__name__)

CORE_FILES = ("mtrx.net", "mtrx.txt", "mtrx.sps", "cr_mh.net", "jcr_mh.net", "jcr_mh_a.net", "lcs.net")


@dataclass
class RunConfig:
    medline: list[Path] = field(default_factory=list)
    wos: list[Path] = field(default_factory=list)
    out: Path = Path(".")
    keep_qualifiers: bool = False
    match: str = "strict"
    k: int = 1
    variant: str = "key_route"
    field_tag: str = "PMID"
    chunk: int = 500
    dense_cap: int = formats.DENSE_CAP
    crlf: bool = False
    top: int = 10
    exclude: list[str] = field(default_factory=list)
    similarity: str | None = None

    def __post_init__(self) -> None:
        if self.chunk < 1:
            raise ValueError("chunk must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.match not in ("strict", "relaxed"):
            raise ValueError(f"unknown matching mode {self.match!r}")

    @property
    def newline(self) -> str:
        return "\r\n" if self.crlf else "\n"

    def path(self, name: str) -> Path:
        return self.out / name


class InputFormatError(ValueError):
    """A non-empty input file that does not look like the expected export."""


_MEDLINE_SNIFF = re.compile(rb"^PMID\s*-", re.MULTILINE)
_WOS_SNIFF = re.compile(rb"^(?:\xef\xbb\xbf)?(?:FN|PT|UT|ER)(?: |$)", re.MULTILINE)


def _read_checked(path: Path, sniff: re.Pattern[bytes], kind: str) -> bytes:
    data = Path(path).read_bytes()
    if data.strip() and not sniff.search(data):
        raise InputFormatError(f"{path} does not look like a {kind} export")
    return data


def load_medline(config: RunConfig, report: Report) -> list[MedlineRecord]:
    if not config.medline:
        return []
    data = b"\n".join(_read_checked(p, _MEDLINE_SNIFF, "MEDLINE") for p in config.medline)
    return parse_medline(data, report)


def load_wos(config: RunConfig, report: Report) -> list[WosRecord]:
    # exports downloaded in portions of 500 are parsed file by file
    records: list[WosRecord] = []
    for p in config.wos:
        records += parse_wos(_read_checked(p, _WOS_SNIFF, "WoS plain-text"), report)
    return records


def _write_text(path: Path, lines: Sequence[str], newline: str) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(newline.join(lines) + newline)
    return path


def write_search_strings(config: RunConfig, medline: Sequence[MedlineRecord], wos: Sequence[WosRecord], report: Report) -> list[Path]:
    written = []
    if medline:
        queries = emit_wos_search_string([r.pmid for r in medline], config.chunk, config.field_tag)
        written.append(_write_text(config.path("string.wos"), queries, config.newline))
        report.set("string_wos_queries", len(queries))
    if any(r.pmid for r in wos):
        written.append(_write_text(config.path("string.pubmed"), [emit_pubmed_search_string(wos)], config.newline))
    elif wos:
        report.notice("search-strings", "no WoS record carries a PMID; string.pubmed not written")
    return written


def build_corpus(config: RunConfig, report: Report) -> tuple[Corpus, list[MedlineRecord], list[WosRecord]]:
    medline = load_medline(config, report)
    wos = load_wos(config, report)
    corpus = link_by_pmid(medline, wos, config.keep_qualifiers, report)
    corpus = attach_times_cited(corpus, wos)
    return corpus, medline, wos


def write_parsed_medline(config: RunConfig, records: Sequence[MedlineRecord]) -> Path:
    path = config.path("medline.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator=config.newline)
        w.writerow(["pmid", "pub_year", "journal_abbrev", "first_author", "n_mesh", "title"])
        for r in records:
            w.writerow([r.pmid, r.pub_year or "", r.journal_abbrev, r.authors[0] if r.authors else "", len(r.mesh_raw), r.title])
    return path


def write_parsed_wos(config: RunConfig, records: Sequence[WosRecord]) -> list[Path]:
    recs = config.path("wos.csv")
    refs = config.path("cited_refs.csv")
    with open(recs, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator=config.newline)
        w.writerow(["ut", "pmid", "first_author", "pub_year", "j9", "volume", "begin_page", "times_cited", "n_refs"])
        for r in records:
            w.writerow([r.ut, r.pmid or "", r.first_author, r.pub_year or "", r.journal_abbrev_29, r.volume or "",
                        r.begin_page or "", r.times_cited, len(r.cited_refs_raw)])
    with open(refs, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator=config.newline)
        w.writerow(["ut", "pmid", "raw", "author", "year", "journal", "volume", "page", "doi"])
        for r in records:
            for raw in r.cited_refs_raw:
                c = parse_cited_reference(raw)
                w.writerow([r.ut, r.pmid or "", c.raw, c.author or "", c.year or "", c.journal or "",
                            c.volume or "", c.page or "", c.doi or ""])
    return [recs, refs]


def _dense_export(config: RunConfig, m: SparseLabeledMatrix, base: str, report: Report) -> list[Path]:
    if m.shape[1] > config.dense_cap:
        report.notice("matrices", f"{base}.txt/.sps skipped: {m.shape[1]} columns exceed the dense cap of {config.dense_cap}")
        return []
    return list(formats.write_spss_matrix(m, config.path(base), config.dense_cap, config.crlf))


def write_matrices(config: RunConfig, corpus: Corpus, report: Report) -> list[Path]:
    written: list[Path] = []
    doc_mesh = doc_cr = None
    try:
        doc_mesh = build_doc_mesh(corpus)
    except EmptyMatrixError as exc:
        report.notice("matrices", f"document x MeSH matrix skipped: {exc}")
    try:
        doc_cr = build_doc_cr(corpus)
    except EmptyMatrixError as exc:
        report.notice("matrices", f"document x cited-reference matrix skipped: {exc}")

    # mtrx.* is the MeSH matrix when MeSH exist, else the citation matrix
    named = [("mtrx", doc_mesh), ("mtrx_cr", doc_cr)] if doc_mesh is not None else [("mtrx", doc_cr)]
    for base, m in named:
        if m is None:
            continue
        formats.write_pajek(m, config.path(base + ".net"), config.crlf)
        written.append(config.path(base + ".net"))
        written += _dense_export(config, m, base, report)
        report.set(f"{base}_shape", list(m.shape))

    if doc_mesh is None or doc_cr is None or not any(d.mesh_terms and d.cited_refs for d in corpus.documents):
        report.notice("matrices", "cr_mh/jcr_mh/jcr_mh_a need linked documents with MeSH and references; skipped")
        return written

    for name, builder in (("cr_mh", build_cr_mesh), ("jcr_mh", build_jcr_mesh), ("jcr_mh_a", build_doc_attributes)):
        m = builder(corpus)
        formats.write_pajek(m, config.path(name + ".net"), config.crlf)
        written.append(config.path(name + ".net"))
        report.set(f"{name}_shape", list(m.shape))
        if name == "jcr_mh":
            connected = int((m.col_sums() > 0).sum())
            report.set("jcr_mh_connected_mesh", connected)
        if name == "jcr_mh_a" and config.similarity:
            sim = similarity(m, config.similarity, "columns")
            path = config.path(f"jcr_mh_a_{config.similarity}.net")
            formats.write_similarity_pajek(sim, path, config.crlf)
            written.append(path)
            proj = project_columns(m)
            path = config.path("jcr_mh_a_cols.net")
            formats.write_similarity_pajek(proj, path, config.crlf)
            written.append(path)
    return written


def write_lcs(config: RunConfig, corpus: Corpus, report: Report) -> list[Path]:
    if not any(d.in_wos for d in corpus.documents):
        report.notice("lcs", "no citation data (WoS records) present; lcs.net skipped - use string.wos to retrieve them")
        return []
    graph, match = build_local_citation_graph(corpus, config.match, config.exclude)
    formats.write_pajek(graph, config.path("lcs.net"), config.crlf)
    match.write_csv(config.path("lcs_report.csv"), config.newline)
    report.count("lcs_key_failures", len(match.failures))
    report.set("lcs", dict(match.rows()))
    scores = local_citation_scores(graph)
    path = config.path("lcs_scores.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator=config.newline)
        w.writerow(["pmid", "lcs"])
        w.writerows(scores.items())
    return [config.path("lcs.net"), config.path("lcs_report.csv"), path]


def write_stats(config: RunConfig, corpus: Corpus, report: Report) -> list[Path]:
    if not corpus.documents:
        report.notice("stats", "empty corpus; statistics skipped")
        return []
    nl = config.newline
    paths = [config.path(n) for n in ("counts.csv", "top_journals.csv", "top_mesh.csv", "yearly.csv", "gini.csv", "mesh_citations.csv")]
    write_counts_csv(corpus_counts(corpus), paths[0], nl)
    write_ranked_csv(top_frequencies(corpus, "referenced_journal", config.top), paths[1], ("journal", "references"), nl)
    write_ranked_csv(top_frequencies(corpus, "mesh", config.top), paths[2], ("mesh", "documents"), nl)
    write_yearly_csv(yearly_series(corpus, report), paths[3], nl)
    ginis = {}
    for name, dim in (("referenced_journals", "referenced_journal"), ("mesh", "mesh")):
        values = list(frequency_table(corpus, dim).values())
        ginis[name] = gini(values) if values and sum(values) > 0 else None
    write_gini_csv(ginis, paths[4], nl)
    write_mesh_citations_csv(citations_by_mesh(corpus), paths[5], nl)
    return paths


def run_mainpath(config: RunConfig, net_path: Path, report: Report) -> list[Path]:
    """Prep, SPC and main path for a 1-mode Pajek file (e.g. lcs.net)."""
    g = formats.graph_from_pajek(formats.read_pajek(net_path))
    dag, prep = make_acyclic(g)
    weights = spc(dag)
    result = main_path(dag, weights, config.variant, config.k)
    report.set("mainpath", {"variant": config.variant, "k": config.k, "arcs": len(result.arcs),
                            "vertices": len(result.vertices), "total_weight": result.total_weight,
                            "search_paths": weights.total_paths})

    nl = config.newline
    written = []
    path = config.path("mainpath_prep.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator=nl)
        w.writerow(["statistic", "value"])
        w.writerows(prep.rows())
    written.append(path)

    path = config.path("mainpath_members.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator=nl)
        w.writerow(["original", "prepared"])
        order = {v: i for i, v in enumerate(g.vertices)}
        w.writerows(sorted(prep.vertex_map.items(), key=lambda kv: order[kv[0]]))
    written.append(path)

    formats.write_pajek(dag, config.path("spc.net"), config.crlf, weights=weights.arc_weights)
    written.append(config.path("spc.net"))

    path = config.path("mainpath_arcs.csv")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator=nl)
        w.writerow(["citing", "cited", "spc"])
        for a, b in sorted(result.arcs):
            w.writerow([dag.vertices[a], dag.vertices[b], weights.arc_weights[(a, b)]])
    written.append(path)

    clu = config.path("mainpath.clu")
    formats.write_partition([1 if v in result.vertices else 0 for v in range(dag.n)], clu, config.crlf)
    written.append(clu)
    return written


def run_pipeline(config: RunConfig, report: Report) -> list[Path]:
    """parse -> link -> matrices -> lcs -> stats, in that order."""
    if not config.medline and not config.wos:
        raise ValueError("pipeline needs MEDLINE and/or WoS input")
    corpus, medline, wos = build_corpus(config, report)
    written = write_search_strings(config, medline, wos, report)
    written.append(config.path("documents.csv"))
    write_corpus_csv(corpus, written[-1], config.newline)
    written += write_matrices(config, corpus, report)
    written += write_lcs(config, corpus, report)
    written += write_stats(config, corpus, report)
    return written
