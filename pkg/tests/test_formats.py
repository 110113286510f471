import pytest

from citmesh.citegraph import CitationGraph
from citmesh.formats import (
    PajekFormatError,
    PajekNetwork,
    graph_from_pajek,
    matrix_from_pajek,
    read_pajek,
    read_partition,
    write_pajek,
    write_partition,
    write_similarity_pajek,
    write_spss_matrix,
)
from citmesh.matrices import SparseLabeledMatrix


def test_one_by_one_matrix(tmp_path):
    m = SparseLabeledMatrix.from_cells(["d1"], ["Animals"], {(0, 0): 1}, "binary")
    write_pajek(m, tmp_path / "m.net")
    assert (tmp_path / "m.net").read_text() == '*Vertices 2 1\n1 "d1"\n2 "Animals"\n*Arcs\n1 2 1\n'


def test_crlf_option(tmp_path):
    m = SparseLabeledMatrix.from_cells(["d1"], ["Animals"], {(0, 0): 1}, "binary")
    write_pajek(m, tmp_path / "m.net", crlf=True)
    raw = (tmp_path / "m.net").read_bytes()
    assert raw.count(b"\r\n") == 5 and raw.count(b"\n") == 5


def test_quotes_doubled_and_read_back(tmp_path):
    m = SparseLabeledMatrix.from_cells(['say "hi"'], ["x y"], {(0, 0): 3})
    write_pajek(m, tmp_path / "q.net")
    assert '"say ""hi"""' in (tmp_path / "q.net").read_text()
    back = matrix_from_pajek(read_pajek(tmp_path / "q.net"))
    assert back.equals(m)


def test_edges_only_file(tmp_path):
    p = tmp_path / "e.net"
    p.write_text("*Vertices 3\n1 a\n2 b\n3 c\n*Edges\n1 2\n2 3 4\n")
    net = read_pajek(p)
    assert net.arcs == [] and net.edges == [(1, 2, 1), (2, 3, 4)]
    g = graph_from_pajek(net)
    assert g.arcs == {(0, 1), (1, 0), (1, 2), (2, 1)}


def test_hand_written_three_vertex_file(tmp_path):
    p = tmp_path / "h.net"
    p.write_text('% comment\r\n*Network demo\r\n*Vertices 3\r\n1 "Hardy J"\r\n2 "Selkoe D"\r\n3 "Zhang CL"\r\n*Arcs\r\n2 1 1\r\n3 1\r\n3 2 1\r\n')
    g = graph_from_pajek(read_pajek(p))
    assert g.vertices == ("Hardy J", "Selkoe D", "Zhang CL")
    assert g.sorted_arcs() == [(1, 0), (2, 0), (2, 1)]


def test_graph_round_trip(tmp_path):
    g = CitationGraph(("10", "20", "30"), frozenset({(1, 0), (2, 0), (2, 1)}))
    write_pajek(g, tmp_path / "g.net")
    assert graph_from_pajek(read_pajek(tmp_path / "g.net")) == g


def test_spc_weights_written(tmp_path):
    g = CitationGraph(("a", "b"), frozenset({(0, 1)}))
    write_pajek(g, tmp_path / "w.net", weights={(0, 1): 7})
    assert read_pajek(tmp_path / "w.net").arcs == [(1, 2, 7)]


@pytest.mark.parametrize("body, lineno", [
    ("*Vertices 2\n1 a\n2 b\n*Arcs\n1 3\n", 5),
    ("*Vertices 2\n1 a\n2 b\n*Arcs\n1 x\n", 5),
    ("*Vertices 2\n1 a\n2 b\n*Arcs\n1 2 heavy\n", 5),
    ("*Vertices 2\n1 two words\n", 2),
    ("*Arcs\n1 2\n", 1),
    ("*Vertices two\n", 1),
    ("*Matrix\n", 1),
])
def test_malformed_lines_name_line_number(tmp_path, body, lineno):
    p = tmp_path / "bad.net"
    p.write_text(body)
    with pytest.raises(PajekFormatError) as exc:
        read_pajek(p)
    assert exc.value.lineno == lineno


def test_two_mode_reader_rejects_bad_direction(tmp_path):
    net = PajekNetwork(3, ["r", "c1", "c2"], 1, arcs=[(2, 3, 1)])
    with pytest.raises(ValueError):
        matrix_from_pajek(net)


def test_similarity_edges(tmp_path):
    m = SparseLabeledMatrix.from_cells(["a", "b"], ["a", "b"], {(0, 0): 1.0, (0, 1): 0.5, (1, 0): 0.5, (1, 1): 1.0}, "real")
    write_similarity_pajek(m, tmp_path / "s.net")
    net = read_pajek(tmp_path / "s.net")
    assert net.edges == [(1, 1, 1.0), (1, 2, 0.5), (2, 2, 1.0)]


def test_partition_round_trip(tmp_path):
    write_partition([1, 0, 0, 1], tmp_path / "p.clu")
    assert (tmp_path / "p.clu").read_text() == "*Vertices 4\n1\n0\n0\n1\n"
    assert read_partition(tmp_path / "p.clu") == [1, 0, 0, 1]
    (tmp_path / "bad.clu").write_text("*Vertices 3\n1\n")
    with pytest.raises(PajekFormatError):
        read_partition(tmp_path / "bad.clu")


def test_spss_identity(tmp_path):
    m = SparseLabeledMatrix.from_cells(["d1", "d2"], ["Animals", "Humans"], {(0, 0): 1, (1, 1): 1}, "binary")
    txt, sps = write_spss_matrix(m, tmp_path / "mtrx")
    assert txt.read_text() == "1 0\n0 1\n"
    assert sps.read_text() == (
        "DATA LIST FILE='mtrx.txt' FREE\n"
        "  / v1 TO v2.\n"
        "VARIABLE LABELS\n"
        "  v1 'Animals'\n"
        " /v2 'Humans'.\n"
        "SAVE OUTFILE='mtrx.sav'.\n"
        "EXECUTE.\n"
    )


def test_spss_deterministic_and_quoting(tmp_path):
    long_label = "Alzheimer's " + "x" * 200
    m = SparseLabeledMatrix.from_cells(["d"], [long_label], {(0, 0): 2})
    _, sps1 = write_spss_matrix(m, tmp_path / "a")
    first = sps1.read_bytes()
    _, sps2 = write_spss_matrix(m, tmp_path / "a")
    assert sps2.read_bytes() == first
    label_line = first.decode().splitlines()[3]
    assert "Alzheimer''s" in label_line
    assert len(label_line.split("'", 1)[1].rstrip(".").strip("'").replace("''", "'")) == 120
    assert "/ v1." in first.decode()


def test_spss_cap(tmp_path):
    m = SparseLabeledMatrix.from_cells(["d"], ["a", "b", "c"], {(0, 0): 1})
    with pytest.raises(ValueError, match="cap"):
        write_spss_matrix(m, tmp_path / "x", cap=2)


def test_spss_dotted_basename(tmp_path):
    m = SparseLabeledMatrix.from_cells(["d"], ["a"], {(0, 0): 1})
    txt, sps = write_spss_matrix(m, tmp_path / "jcr.mh")
    assert txt.name == "jcr.mh.txt" and sps.name == "jcr.mh.sps"


def test_overwrite_logs(tmp_path, caplog):
    write_partition([1], tmp_path / "p.clu")
    write_partition([1], tmp_path / "p.clu")
    assert "overwriting" in caplog.text
