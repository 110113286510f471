"""
Labelled sparse 2-mode matrices built from a corpus.

Rows and columns carry string vocabularies in first-appearance order; the
cells live in a canonical CSR matrix (sorted indices, no stored zeros).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, Sequence

import numpy as np
import scipy.sparse as sp

from .corpus import Corpus, Document
from .wos import referenced_journal

log = logging.getLogger(__name__)

Kind = Literal["binary", "count", "real"]


class EmptyMatrixError(ValueError):
    pass


def normalize_cr(raw: str) -> str:
    return " ".join(raw.upper().split())


@dataclass(frozen=True, eq=False)
class SparseLabeledMatrix:
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    data: sp.csr_matrix
    kind: Kind = "count"

    def __post_init__(self) -> None:
        if self.data.shape != (len(self.row_labels), len(self.col_labels)):
            raise ValueError(f"shape {self.data.shape} does not match labels {len(self.row_labels)}x{len(self.col_labels)}")
        if len(set(self.row_labels)) != len(self.row_labels) or len(set(self.col_labels)) != len(self.col_labels):
            raise ValueError("labels must be unique per axis")

    @classmethod
    def from_cells(cls, row_labels: Sequence[str], col_labels: Sequence[str],
                   cells: dict[tuple[int, int], float] | Iterable[tuple[int, int, float]], kind: Kind = "count") -> "SparseLabeledMatrix":
        items = cells.items() if isinstance(cells, dict) else (((i, j), v) for i, j, v in cells)
        rows, cols, vals = [], [], []
        for (i, j), v in items:
            rows.append(i)
            cols.append(j)
            vals.append(v)
        dtype = np.float64 if kind == "real" else np.int64
        m = sp.coo_matrix((np.asarray(vals, dtype=dtype), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
                          shape=(len(row_labels), len(col_labels)))
        return cls(tuple(row_labels), tuple(col_labels), canonical(m), kind)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    @property
    def nnz(self) -> int:
        return int(self.data.nnz)

    def cells(self) -> Iterator[tuple[int, int, int | float]]:
        """Stored cells in row-major order."""
        m = self.data
        cast = float if self.kind == "real" else int
        for i in range(m.shape[0]):
            lo, hi = m.indptr[i], m.indptr[i + 1]
            for j, v in zip(m.indices[lo:hi], m.data[lo:hi]):
                yield i, int(j), cast(v)

    def get(self, row: int | str, col: int | str) -> int | float:
        i = self.row_labels.index(row) if isinstance(row, str) else row
        j = self.col_labels.index(col) if isinstance(col, str) else col
        v = self.data[i, j]
        return float(v) if self.kind == "real" else int(v)

    def to_dense(self) -> np.ndarray:
        return self.data.toarray()

    def binarized(self) -> sp.csr_matrix:
        b = self.data.copy()
        b.data = np.ones_like(b.data, dtype=np.int64)
        return b.astype(np.int64)

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.data.sum(axis=1)).ravel()

    def col_sums(self) -> np.ndarray:
        return np.asarray(self.data.sum(axis=0)).ravel()

    def equals(self, other: "SparseLabeledMatrix") -> bool:
        return (
            self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
            and self.kind == other.kind
            and (self.data != other.data).nnz == 0
        )


def canonical(m: sp.spmatrix) -> sp.csr_matrix:
    out = sp.csr_matrix(m)
    out.sum_duplicates()
    out.eliminate_zeros()
    out.sort_indices()
    return out


class _Vocabulary:
    def __init__(self) -> None:
        self.index: dict[str, int] = {}

    def add(self, label: str) -> int:
        i = self.index.get(label)
        if i is None:
            i = self.index[label] = len(self.index)
        return i

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.index)


def _incidence(docs: Sequence[Document], items_of, vocab: _Vocabulary | None = None) -> tuple[sp.csr_matrix, _Vocabulary]:
    """Binary document x item incidence over *docs* (all rows kept)."""
    vocab = vocab or _Vocabulary()
    rows, cols = [], []
    for r, doc in enumerate(docs):
        seen: set[int] = set()
        for item in items_of(doc):
            c = vocab.add(item)
            if c not in seen:
                seen.add(c)
                rows.append(r)
                cols.append(c)
    m = sp.coo_matrix((np.ones(len(rows), dtype=np.int64), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
                      shape=(len(docs), len(vocab.index)))
    return canonical(m), vocab


def _mesh_items(doc: Document) -> Iterable[str]:
    return doc.mesh_terms


def _cr_items(doc: Document) -> Iterable[str]:
    return (normalize_cr(r.raw) for r in doc.cited_refs)


def _journal_items(doc: Document) -> Iterable[str]:
    for r in doc.cited_refs:
        j = referenced_journal(r)
        if j:
            yield j


def mesh_vocabulary(corpus: Corpus) -> tuple[str, ...]:
    v = _Vocabulary()
    for d in corpus.documents:
        for t in d.mesh_terms:
            v.add(t)
    return v.labels


def build_doc_mesh(corpus: Corpus) -> SparseLabeledMatrix:
    """Documents (MEDLINE side) x MeSH terms, binary."""
    docs = [d for d in corpus.documents if d.in_medline or d.mesh_terms]
    if not any(d.mesh_terms for d in docs):
        raise EmptyMatrixError("corpus carries no MeSH terms")
    m, vocab = _incidence(docs, _mesh_items)
    return SparseLabeledMatrix(tuple(d.pmid for d in docs), vocab.labels, m, "binary")


def build_doc_cr(corpus: Corpus) -> SparseLabeledMatrix:
    """Citing documents (WoS side) x cited references, binary."""
    docs = [d for d in corpus.documents if d.in_wos or d.cited_refs]
    if not any(d.cited_refs for d in docs):
        raise EmptyMatrixError("corpus carries no cited references")
    m, vocab = _incidence(docs, _cr_items)
    return SparseLabeledMatrix(tuple(d.pmid for d in docs), vocab.labels, m, "binary")


def _require_overlap(corpus: Corpus) -> None:
    if not any(d.mesh_terms and d.cited_refs for d in corpus.documents):
        raise EmptyMatrixError("no document carries both MeSH terms and cited references")


def build_cr_mesh(corpus: Corpus) -> SparseLabeledMatrix:
    """Cited references x MeSH; cell = number of documents holding both."""
    _require_overlap(corpus)
    docs = corpus.documents
    crs, cr_vocab = _incidence(docs, _cr_items)
    mesh, mesh_vocab = _incidence(docs, _mesh_items)
    return SparseLabeledMatrix(cr_vocab.labels, mesh_vocab.labels, canonical(crs.T @ mesh), "count")


def build_jcr_mesh(corpus: Corpus) -> SparseLabeledMatrix:
    """Referenced journals x MeSH; cell = number of documents holding both."""
    _require_overlap(corpus)
    docs = corpus.documents
    journals, j_vocab = _incidence(docs, _journal_items)
    mesh, mesh_vocab = _incidence(docs, _mesh_items)
    return SparseLabeledMatrix(j_vocab.labels, mesh_vocab.labels, canonical(journals.T @ mesh), "count")


def build_doc_attributes(corpus: Corpus) -> SparseLabeledMatrix:
    """Documents x (journals then MeSH), labels namespaced "J:" and "M:"."""
    docs = corpus.documents
    journals, j_vocab = _incidence(docs, _journal_items)
    mesh, mesh_vocab = _incidence(docs, _mesh_items)
    if journals.shape[1] + mesh.shape[1] == 0:
        raise EmptyMatrixError("corpus has neither referenced journals nor MeSH terms")
    cols = tuple("J:" + j for j in j_vocab.labels) + tuple("M:" + m for m in mesh_vocab.labels)
    return SparseLabeledMatrix(tuple(d.pmid for d in docs), cols, canonical(sp.hstack([journals, mesh])), "binary")


def project_columns(m: SparseLabeledMatrix) -> SparseLabeledMatrix:
    """2-mode to 1-mode over the columns: co-occurrence row counts."""
    if m.nnz == 0:
        raise EmptyMatrixError("cannot project an empty matrix")
    b = m.binarized()
    return SparseLabeledMatrix(m.col_labels, m.col_labels, canonical(b.T @ b), "count")


def similarity(m: SparseLabeledMatrix, measure: Literal["cosine", "jaccard"] = "cosine",
               axis: Literal["rows", "columns"] = "columns") -> SparseLabeledMatrix:
    """Pairwise cosine or Jaccard similarity between rows or columns.

    Zero vectors get an all-zero row and column, diagonal included.
    """
    if measure not in ("cosine", "jaccard"):
        raise ValueError(f"unknown measure {measure!r}")
    if axis == "rows":
        x, labels = m.data.astype(np.float64), m.row_labels
    elif axis == "columns":
        x, labels = m.data.T.tocsr().astype(np.float64), m.col_labels
    else:
        raise ValueError(f"unknown axis {axis!r}")
    if len(labels) < 2:
        raise ValueError("similarity needs at least two vectors")

    if measure == "jaccard":
        x = x.copy()
        x.data = np.ones_like(x.data)
    inner = (x @ x.T).tocoo()
    sq = np.asarray(x.multiply(x).sum(axis=1)).ravel()
    zero = np.flatnonzero(sq == 0)
    if zero.size:
        log.warning("%d zero vector(s) in similarity input: %s", zero.size, [labels[i] for i in zero[:5]])

    i, j, v = inner.row, inner.col, inner.data
    keep = i <= j
    i, j, v = i[keep], j[keep], v[keep]
    if measure == "cosine":
        s = v / np.sqrt(sq[i] * sq[j])
    else:
        s = v / (sq[i] + sq[j] - v)
    s = np.where(i == j, 1.0, np.minimum(s, 1.0))
    off = i != j
    rows = np.concatenate([i, j[off]])
    cols = np.concatenate([j, i[off]])
    vals = np.concatenate([s, s[off]])
    out = sp.coo_matrix((vals, (rows, cols)), shape=(len(labels), len(labels)))
    return SparseLabeledMatrix(labels, labels, canonical(out), "real")
