"""Descriptive statistics: counts, top-N tables, yearly series, Gini."""
from __future__ import annotations

import csv
from collections import Counter
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Literal, Sequence

from .corpus import Corpus
from .matrices import normalize_cr
from .report import Report
from .wos import referenced_journal


@dataclass(frozen=True)
class CountsReport:
    n_docs_medline: int
    n_docs_wos: int
    mesh_attributions: int
    unique_mesh: int
    cited_ref_instances: int
    unique_cited_refs: int
    unique_referenced_journals: int


@dataclass(frozen=True)
class YearlyPoint:
    year: int
    n_papers: int
    c_per_p: float
    citations: int = 0


def corpus_counts(corpus: Corpus) -> CountsReport:
    if not corpus.documents:
        raise ValueError("empty corpus")
    mesh: set[str] = set()
    crs: set[str] = set()
    journals: set[str] = set()
    attributions = instances = 0
    for d in corpus.documents:
        attributions += len(d.mesh_terms)
        mesh.update(d.mesh_terms)
        instances += len(d.cited_refs)
        for r in d.cited_refs:
            crs.add(normalize_cr(r.raw))
            j = referenced_journal(r)
            if j:
                journals.add(j)
    return CountsReport(
        n_docs_medline=sum(1 for d in corpus.documents if d.in_medline),
        n_docs_wos=sum(1 for d in corpus.documents if d.in_wos),
        mesh_attributions=attributions,
        unique_mesh=len(mesh),
        cited_ref_instances=instances,
        unique_cited_refs=len(crs),
        unique_referenced_journals=len(journals),
    )


def frequency_table(corpus: Corpus, dimension: Literal["referenced_journal", "mesh"]) -> Counter[str]:
    """Journal counts are reference instances; MeSH counts are documents."""
    tally: Counter[str] = Counter()
    if dimension == "referenced_journal":
        for d in corpus.documents:
            for r in d.cited_refs:
                j = referenced_journal(r)
                if j:
                    tally[j] += 1
    elif dimension == "mesh":
        for d in corpus.documents:
            tally.update(set(d.mesh_terms))
    else:
        raise ValueError(f"unknown dimension {dimension!r}")
    return tally


def top_frequencies(corpus: Corpus, dimension: Literal["referenced_journal", "mesh"], n: int | None = 10) -> list[tuple[str, int]]:
    if n is not None and n < 1:
        raise ValueError("n must be positive")
    tally = frequency_table(corpus, dimension)
    ranked = sorted(tally.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked if n is None else ranked[:n]


def yearly_series(corpus: Corpus, report: Report | None = None) -> list[YearlyPoint]:
    papers: Counter[int] = Counter()
    cites: Counter[int] = Counter()
    undated = 0
    for d in corpus.documents:
        if d.pub_year is None:
            undated += 1
            continue
        papers[d.pub_year] += 1
        cites[d.pub_year] += d.times_cited
    if report is not None:
        report.set("undated_documents", undated)
        if undated:
            report.notice("stats", f"{undated} documents without publication year left out of the yearly series")
    return [YearlyPoint(y, papers[y], cites[y] / papers[y], cites[y]) for y in sorted(papers)]


def gini(values: Iterable[float]) -> float:
    """Population Gini coefficient, sum_ij |x_i - x_j| / (2 n^2 mean)."""
    x = sorted(float(v) for v in values)
    if not x:
        raise ValueError("gini of an empty sequence")
    if x[0] < 0:
        raise ValueError("gini needs non-negative values")
    total = sum(x)
    if total == 0:
        raise ValueError("gini undefined for all-zero values")
    n = len(x)
    # sorted form of the double sum: sum_i (2i - n + 1) x_(i), i from 0
    weighted = sum((2 * i - n + 1) * v for i, v in enumerate(x))
    return weighted / (n * total)


def citations_by_mesh(corpus: Corpus) -> dict[str, int]:
    out: dict[str, int] = {}
    for d in corpus.documents:
        for term in d.mesh_terms:
            out[term] = out.get(term, 0) + d.times_cited
    return out


# CSV exports ---------------------------------------------------------------

def _writer(path: str | Path, newline: str):
    fh = open(path, "w", encoding="utf-8", newline="")
    return fh, csv.writer(fh, lineterminator=newline)


def write_counts_csv(counts: CountsReport, path: str | Path, newline: str = "\n") -> None:
    fh, w = _writer(path, newline)
    with fh:
        w.writerow(["statistic", "value"])
        w.writerows(asdict(counts).items())


def write_ranked_csv(rows: Sequence[tuple[str, int]], path: str | Path, header=("label", "count"), newline: str = "\n") -> None:
    fh, w = _writer(path, newline)
    with fh:
        w.writerow(["rank", *header])
        for rank, (label, count) in enumerate(rows, 1):
            w.writerow([rank, label, count])


def write_yearly_csv(series: Sequence[YearlyPoint], path: str | Path, newline: str = "\n") -> None:
    fh, w = _writer(path, newline)
    with fh:
        w.writerow(["year", "n_papers", "citations", "c_per_p"])
        for p in series:
            w.writerow([p.year, p.n_papers, p.citations, repr(p.c_per_p)])


def write_gini_csv(values: dict[str, float | None], path: str | Path, newline: str = "\n") -> None:
    fh, w = _writer(path, newline)
    with fh:
        w.writerow(["distribution", "gini"])
        for name, g in values.items():
            w.writerow([name, "" if g is None else repr(g)])


def write_mesh_citations_csv(table: dict[str, int], path: str | Path, newline: str = "\n") -> None:
    rows = sorted(table.items(), key=lambda kv: (-kv[1], kv[0]))
    fh, w = _writer(path, newline)
    with fh:
        w.writerow(["mesh", "times_cited_sum"])
        w.writerows(rows)
