"""
Pajek .net/.clu and SPSS free-format matrix files.

Pajek 2-mode layout (rows first, columns numbered after them)::

    *Vertices 5 2
    1 "doc 1"
    2 "doc 2"
    3 "Animals"
    4 "Humans"
    5 "Mice"
    *Arcs
    1 3 1
    2 5 1

Writers emit LF by default; ``crlf=True`` switches to CRLF for old Pajek
builds on Windows.  Output bytes depend only on the input.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

from .citegraph import CitationGraph
from .matrices import SparseLabeledMatrix

log = logging.getLogger(__name__)

DENSE_CAP = 20_000
SPSS_LABEL_MAX = 120

Number = Union[int, float]


class PajekFormatError(ValueError):
    def __init__(self, message: str, lineno: int | None = None) -> None:
        super().__init__(f"line {lineno}: {message}" if lineno else message)
        self.lineno = lineno


@dataclass
class PajekNetwork:
    n_vertices: int
    vertex_labels: list[str]
    n_row_vertices: int | None = None
    arcs: list[tuple[int, int, Number]] = field(default_factory=list)
    edges: list[tuple[int, int, Number]] = field(default_factory=list)

    @property
    def two_mode(self) -> bool:
        return self.n_row_vertices is not None


def _eol(crlf: bool) -> str:
    return "\r\n" if crlf else "\n"


def _quote(label: str) -> str:
    return '"' + label.replace('"', '""') + '"'


def _num(v: Number) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(int(v))


def _write_lines(path: str | Path, lines: list[str], crlf: bool) -> None:
    path = Path(path)
    if path.exists():
        log.warning("overwriting %s", path)
    eol = _eol(crlf)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(eol.join(lines) + eol)


def pajek_lines(obj: SparseLabeledMatrix | CitationGraph | PajekNetwork) -> list[str]:
    if isinstance(obj, SparseLabeledMatrix):
        nr, nc = obj.shape
        if nr + nc == 0:
            raise ValueError("nothing to write")
        lines = [f"*Vertices {nr + nc} {nr}"]
        lines += [f"{i} {_quote(lab)}" for i, lab in enumerate(obj.row_labels + obj.col_labels, 1)]
        lines.append("*Arcs")
        coo = obj.data.tocoo()  # canonical CSR, so this is row-major
        fmt = repr if obj.kind == "real" else str
        vals = coo.data.astype(float if obj.kind == "real" else int).tolist()
        lines += [f"{i} {j} {fmt(v)}" for i, j, v in zip((coo.row + 1).tolist(), (coo.col + nr + 1).tolist(), vals)]
        return lines
    if isinstance(obj, CitationGraph):
        if obj.n == 0:
            raise ValueError("nothing to write")
        lines = [f"*Vertices {obj.n}"]
        lines += [f"{i} {_quote(lab)}" for i, lab in enumerate(obj.vertices, 1)]
        lines.append("*Arcs")
        lines += [f"{a + 1} {b + 1} 1" for a, b in obj.sorted_arcs()]
        return lines
    if isinstance(obj, PajekNetwork):
        head = f"*Vertices {obj.n_vertices}" + (f" {obj.n_row_vertices}" if obj.two_mode else "")
        lines = [head]
        lines += [f"{i} {_quote(lab)}" for i, lab in enumerate(obj.vertex_labels, 1)]
        if obj.arcs or not obj.edges:
            lines.append("*Arcs")
            lines += [f"{a} {b} {_num(w)}" for a, b, w in obj.arcs]
        if obj.edges:
            lines.append("*Edges")
            lines += [f"{a} {b} {_num(w)}" for a, b, w in obj.edges]
        return lines
    raise TypeError(f"cannot write {type(obj).__name__} as Pajek")


def write_pajek(obj: SparseLabeledMatrix | CitationGraph | PajekNetwork, path: str | Path,
                crlf: bool = False, weights: dict[tuple[int, int], int] | None = None) -> None:
    """Write a 2-mode matrix, a citation graph or a parsed network.

    *weights* replaces the unit arc values of a citation graph (SPC output).
    """
    if weights is not None and isinstance(obj, CitationGraph):
        net = PajekNetwork(obj.n, list(obj.vertices), arcs=[(a + 1, b + 1, weights[(a, b)]) for a, b in obj.sorted_arcs()])
        _write_lines(path, pajek_lines(net), crlf)
        return
    _write_lines(path, pajek_lines(obj), crlf)


def write_similarity_pajek(m: SparseLabeledMatrix, path: str | Path, crlf: bool = False) -> None:
    """Square symmetric matrix as a 1-mode network of undirected edges (i <= j)."""
    if m.row_labels != m.col_labels:
        raise ValueError("expected a square matrix with identical row and column labels")
    net = PajekNetwork(len(m.row_labels), list(m.row_labels),
                       edges=[(i + 1, j + 1, v) for i, j, v in m.cells() if i <= j])
    lines = pajek_lines(net)
    if not net.edges:
        lines.append("*Edges")
    _write_lines(path, lines, crlf)


def _parse_number(tok: str, lineno: int) -> Number:
    try:
        return int(tok)
    except ValueError:
        try:
            return float(tok)
        except ValueError:
            raise PajekFormatError(f"bad weight {tok!r}", lineno) from None


def _parse_index(tok: str, n: int, lineno: int) -> int:
    if not tok.isdigit():
        raise PajekFormatError(f"bad vertex index {tok!r}", lineno)
    i = int(tok)
    if not 1 <= i <= n:
        raise PajekFormatError(f"vertex index {i} outside 1..{n}", lineno)
    return i


_QUOTED = re.compile(r'^(\d+)\s+"((?:[^"]|"")*)"(.*)$')


def read_pajek(path: str | Path) -> PajekNetwork:
    """Tolerant reader: *Arcs and/or *Edges, default weight 1, '%' comments."""
    text = Path(path).read_text(encoding="utf-8-sig")
    net: PajekNetwork | None = None
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("*"):
            parts = line.split()
            name = parts[0].lower()
            if name == "*vertices":
                try:
                    n = int(parts[1])
                    nr = int(parts[2]) if len(parts) > 2 else None
                except (IndexError, ValueError):
                    raise PajekFormatError("malformed *Vertices header", lineno) from None
                net = PajekNetwork(n, [str(i) for i in range(1, n + 1)], nr)
                section = "vertices"
            elif name in ("*arcs", "*edges"):
                if net is None:
                    raise PajekFormatError(f"{parts[0]} before *Vertices", lineno)
                section = name[1:]
            elif name == "*network":
                continue
            else:
                raise PajekFormatError(f"unsupported section {parts[0]}", lineno)
            continue
        if net is None:
            raise PajekFormatError("file must begin with *Vertices", lineno)
        if section == "vertices":
            m = _QUOTED.match(line)
            if m:
                idx, label = m.group(1), m.group(2).replace('""', '"')
            else:
                toks = line.split()
                if len(toks) > 2 and not all(_is_number(t) for t in toks[2:]):
                    raise PajekFormatError("unquoted vertex label containing spaces", lineno)
                idx, label = toks[0], toks[1] if len(toks) > 1 else toks[0]
            i = _parse_index(idx, net.n_vertices, lineno)
            net.vertex_labels[i - 1] = label
        else:
            toks = line.split()
            if len(toks) < 2:
                raise PajekFormatError("arc line needs two vertex indices", lineno)
            a = _parse_index(toks[0], net.n_vertices, lineno)
            b = _parse_index(toks[1], net.n_vertices, lineno)
            w = _parse_number(toks[2], lineno) if len(toks) > 2 else 1
            (net.arcs if section == "arcs" else net.edges).append((a, b, w))
    if net is None:
        raise PajekFormatError("no *Vertices section")
    return net


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def graph_from_pajek(net: PajekNetwork) -> CitationGraph:
    """1-mode network to a citation graph (edges read as arcs both ways)."""
    if net.two_mode:
        raise ValueError("expected a 1-mode network, got a 2-mode file")
    labels = net.vertex_labels
    if len(set(labels)) != len(labels):
        log.warning("duplicate vertex labels; using indices as labels")
        labels = [str(i) for i in range(1, net.n_vertices + 1)]
    arcs = {(a - 1, b - 1) for a, b, _ in net.arcs}
    for a, b, _ in net.edges:
        arcs.add((a - 1, b - 1))
        arcs.add((b - 1, a - 1))
    return CitationGraph(tuple(labels), frozenset(arcs))


def matrix_from_pajek(net: PajekNetwork) -> SparseLabeledMatrix:
    if not net.two_mode:
        raise ValueError("expected a 2-mode network")
    nr = net.n_row_vertices
    cells = {}
    real = False
    for a, b, w in net.arcs:
        if not (a <= nr < b):
            raise ValueError(f"arc {a} {b} does not go from a row to a column vertex")
        cells[(a - 1, b - nr - 1)] = w
        real = real or isinstance(w, float)
    kind = "real" if real else ("binary" if all(v == 1 for v in cells.values()) else "count")
    return SparseLabeledMatrix.from_cells(net.vertex_labels[:nr], net.vertex_labels[nr:], cells, kind)


# partitions ----------------------------------------------------------------

def write_partition(assignment: Sequence[int], path: str | Path, crlf: bool = False) -> None:
    lines = [f"*Vertices {len(assignment)}"] + [str(int(c)) for c in assignment]
    _write_lines(path, lines, crlf)


def read_partition(path: str | Path) -> list[int]:
    lines = [ln.strip() for ln in Path(path).read_text(encoding="utf-8").splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("%")]
    if not lines or not lines[0].lower().startswith("*vertices"):
        raise PajekFormatError("partition must begin with *Vertices", 1)
    n = int(lines[0].split()[1])
    values = [int(v) for v in lines[1:]]
    if len(values) != n:
        raise PajekFormatError(f"expected {n} partition values, found {len(values)}")
    return values


# SPSS ----------------------------------------------------------------------

def _spss_quote(label: str) -> str:
    label = " ".join(label.split())[:SPSS_LABEL_MAX]
    return "'" + label.replace("'", "''") + "'"


def write_spss_matrix(m: SparseLabeledMatrix, basename: str | Path, cap: int = DENSE_CAP, crlf: bool = False) -> tuple[Path, Path]:
    """Dense ``basename.txt`` plus ``basename.sps`` that reads it.

    The syntax file uses DATA LIST FREE, one VARIABLE LABELS entry per
    column, and saves ``basename.sav`` next to the data.
    """
    nr, nc = m.shape
    if nc == 0:
        raise ValueError("matrix has no columns")
    if nc > cap:
        raise ValueError(f"{nc} columns exceed the dense export cap of {cap}; use the Pajek file instead")
    base = Path(basename)
    txt, sps, sav = (base.with_name(base.name + ext) for ext in (".txt", ".sps", ".sav"))

    # one dense row at a time; the full array can be large near the cap
    fmt, dtype = (repr, float) if m.kind == "real" else (str, int)
    rows = [" ".join(map(fmt, m.data[i].toarray().ravel().astype(dtype).tolist())) for i in range(nr)]
    _write_lines(txt, rows, crlf)

    variables = "v1" if nc == 1 else f"v1 TO v{nc}"
    lines = [
        f"DATA LIST FILE={_spss_quote(txt.name)} FREE",
        f"  / {variables}.",
        "VARIABLE LABELS",
    ]
    for i, label in enumerate(m.col_labels, 1):
        sep = " " if i == 1 else "/"
        end = "." if i == nc else ""
        lines.append(f" {sep}v{i} {_spss_quote(label)}{end}")
    lines += [f"SAVE OUTFILE={_spss_quote(sav.name)}.", "EXECUTE."]
    _write_lines(sps, lines, crlf)
    return txt, sps
