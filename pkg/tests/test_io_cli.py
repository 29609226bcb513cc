import json
import subprocess
import sys
import xml.etree.ElementTree as ET
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given

from lna import __version__
from lna.cli import main
from lna.generators import complete_graph
from lna.graph import Graph
from lna.hierarchy import AbridgmentError, abridge
from lna.io import EdgeListError, export_level, graph_from_json, parse_edgelist

from conftest import graphs

GRAPHML = "{http://graphml.graphdrawing.org/xmlns}"


class TestParse:
    def test_triangle(self, triangle):
        assert parse_edgelist("0 1\n1 2\n2 0\n") == triangle

    def test_comments_weights_blank(self):
        g = parse_edgelist("# header\n\n0 1 2.5  # heavy\n1 2 1/3\n")
        assert g.weight(0, 1) == Fraction(5, 2) and g.weight(1, 2) == Fraction(1, 3)

    @pytest.mark.parametrize(
        "text,line,fragment",
        [
            ("0 0\n", 1, "self-loop"),
            ("0 1\n\n1 0\n", 3, "duplicate"),
            ("0 1\n1 2 0\n", 2, "positive"),
            ("0 1\n1 2 -3\n", 2, "positive"),
            ("0\n", 1, "expected"),
            ("a b\n", 1, "integers"),
            ("0 1 x\n", 1, "bad weight"),
            ("0 -1\n", 1, "non-negative"),
            ("0 1 2 3\n", 1, "expected"),
        ],
    )
    def test_errors(self, text, line, fragment):
        with pytest.raises(EdgeListError) as exc:
            parse_edgelist(text, source="g.txt")
        assert exc.value.line == line and fragment in str(exc.value)
        assert str(exc.value).startswith(f"g.txt:{line}:")


class TestExport:
    def test_triangle_dot(self, triangle):
        text = export_level(abridge(triangle), 1, "dot").decode()
        assert 'kind="type1"' in text and "L1:cycle:0" in text
        assert text.count("[kind=") == 1

    def test_dot_parses(self, k4):
        pydot = pytest.importorskip("pydot")
        text = export_level(abridge(k4), 1, "dot").decode()
        (g,) = pydot.graph_from_dot_data(text)
        assert len(g.get_nodes()) == 6 and len(g.get_edges()) == 6

    def test_k4_graphml(self, k4):
        data = export_level(abridge(k4), 1, "graphml")
        root = ET.fromstring(data)
        nodes = root.findall(f"{GRAPHML}graph/{GRAPHML}node")
        edges = root.findall(f"{GRAPHML}graph/{GRAPHML}edge")
        assert len(nodes) == 6 and len(edges) == 6
        kinds = sorted(n.find(f"{GRAPHML}data[@key='kind']").text for n in nodes)
        assert kinds == ["type1"] * 3 + ["type2"] * 3
        g = nx.read_graphml(__import__("io").BytesIO(data))
        assert nx.is_isomorphic(g, nx.cycle_graph(6))

    def test_json_attributes(self, k4):
        data = json.loads(export_level(abridge(k4), 1, "json"))
        v = data["vertices"][0]
        assert v["label"] == "L1:cycle:0" and v["kind"] == "type1" and v["resolved"] == [0, 1, 2]
        assert data["vertices"][3]["label"] == "L1:shared:3"

    @given(graphs(max_n=9, weighted=True))
    def test_level0_roundtrip(self, g):
        if g.n == 0:
            return
        try:
            h = abridge(g)
        except AbridgmentError:
            return
        again = graph_from_json(export_level(h, 0, "json"))
        assert again == g

    def test_errors(self, triangle):
        h = abridge(triangle)
        with pytest.raises(KeyError):
            export_level(h, 5, "dot")
        with pytest.raises(ValueError):
            export_level(h, 0, "svg")


@pytest.fixture
def files(tmp_path):
    (tmp_path / "tri.txt").write_text("0 1\n1 2\n2 0\n")
    (tmp_path / "bow.txt").write_text("0 1\n1 2\n0 2\n2 3\n3 4\n2 4\n")
    (tmp_path / "bad.txt").write_text("0 1\n1 1\n")
    scenario = {
        "topology": "bow.txt",
        "protocol": "r3",
        "tau0": 2,
        "b": 2.0,
        "seed": 1,
        "traffic": [{"source": 0, "destination": 4, "packets": 5, "start": 0}],
        "failures": [{"edge": [0, 2], "down": 2, "up": 6}],
    }
    (tmp_path / "sc.json").write_text(json.dumps(scenario))
    return tmp_path


def run_cli(args, capsys):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


class TestCli:
    def test_analyze_triangle(self, files, capsys):
        code, out, _ = run_cli(["analyze", files / "tri.txt"], capsys)
        data = json.loads(out)
        assert code == 0 and data["L"] == 1 and data["D"] == "1/3"

    def test_distance(self, files, capsys):
        assert run_cli(["distance", files / "tri.txt", 0, 2], capsys)[1] == "0\n"
        assert run_cli(["distance", files / "bow.txt", 0, 4], capsys)[1] == "cut-separated\n"
        code, _, err = run_cli(["distance", files / "tri.txt", 0, 9], capsys)
        assert code == 1 and json.loads(err)["error"] == "unknown-vertex"

    def test_basis(self, files, capsys):
        data = json.loads(run_cli(["basis", files / "bow.txt"], capsys)[1])
        assert data["dimension"] == 2 and data["total_weight"] == 6

    def test_export_to_file(self, files, capsys):
        out = files / "l1.graphml"
        code, stdout, _ = run_cli(["export", files / "tri.txt", "--level", "1", "--format", "graphml", "-o", out], capsys)
        assert code == 0 and stdout == "" and out.read_text().startswith("<?xml")
        code, _, err = run_cli(["export", files / "tri.txt", "--level", "4"], capsys)
        assert code == 1 and json.loads(err)["error"] == "unknown-level"

    def test_simulate(self, files, capsys):
        out = files / "report.json"
        assert run_cli(["simulate", files / "sc.json", "-o", out], capsys)[0] == 0
        report = json.loads(out.read_text())
        assert report["summary"]["delivered"] == 5
        code, stdout, _ = run_cli(["simulate", files / "sc.json", "--protocol", "spf"], capsys)
        assert json.loads(stdout)["protocol"] == "spf"

    def test_missing_file(self, files, capsys):
        code, out, err = run_cli(["simulate", files / "missing.json"], capsys)
        assert code != 0 and out == ""
        assert json.loads(err)["error"] == "file-not-found"

    def test_parse_error_has_line(self, files, capsys):
        code, _, err = run_cli(["analyze", files / "bad.txt"], capsys)
        payload = json.loads(err)
        assert code == 1 and payload["error"] == "parse-error" and payload["line"] == 2

    def test_bad_scenario(self, files, capsys):
        (files / "x.json").write_text('{"edges": [[0, 1]], "protocol": "nope"}')
        code, _, err = run_cli(["simulate", files / "x.json"], capsys)
        assert code == 1 and json.loads(err)["error"] == "invalid-scenario"
        (files / "y.json").write_text("{not json")
        code, _, err = run_cli(["simulate", files / "y.json"], capsys)
        assert json.loads(err)["error"] == "parse-error"

    def test_non_converging(self, tmp_path, capsys):
        from lna.generators import random_connected

        g = random_connected(12, 8, seed=0)
        (tmp_path / "d.txt").write_text("".join(f"{u} {v}\n" for u, v in g.edges))
        code, _, err = run_cli(["analyze", tmp_path / "d.txt"], capsys)
        assert code == 1 and json.loads(err)["error"] == "not-converging"

    def test_usage_errors(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["analyze", "x", "--bogus"])
        assert exc.value.code == 2

    def test_version_and_help(self, capsys):
        with pytest.raises(SystemExit):
            main(["--version"])
        assert __version__ in capsys.readouterr().out
        with pytest.raises(SystemExit):
            main(["--help"])
        out = capsys.readouterr().out
        for cmd in ("analyze", "basis", "export", "simulate", "distance"):
            assert cmd in out

    def test_stable_output(self, files, capsys):
        k5 = files / "k5.txt"
        k5.write_text("".join(f"{u} {v}\n" for u, v in complete_graph(5).edges))
        a = run_cli(["analyze", k5], capsys)[1]
        b = run_cli(["analyze", k5], capsys)[1]
        assert a == b and json.loads(a)["L"] == 3


def test_console_script(tmp_path):
    (tmp_path / "t.txt").write_text("0 1\n1 2\n2 0\n")
    proc = subprocess.run(
        [sys.executable, "-m", "lna.cli", "analyze", str(tmp_path / "t.txt")], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["L"] == 1
