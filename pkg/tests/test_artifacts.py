import csv
import json

from matplotlib.figure import Figure

from src.core.artifacts import ArtifactWriter


def test_json_is_sorted_and_atomic(output_dir):
    writer = ArtifactWriter(output_dir)
    path = writer.write_json("report.json", {"b": 1, "a": [1, 2]})
    assert json.loads(path.read_text()) == {"a": [1, 2], "b": 1}
    assert path.read_text().index('"a"') < path.read_text().index('"b"')
    assert [p.name for p in output_dir.iterdir()] == ["report.json"]
    assert writer.written == [path]


def test_creates_missing_directory(tmp_path):
    writer = ArtifactWriter(tmp_path / "nested" / "dir")
    path = writer.write_text("note.txt", "hello\n")
    assert path.read_text() == "hello\n"


def test_csv_columns_follow_first_seen_keys(output_dir):
    rows = [{"u_re": 0.5, "error": ""}, {"u_re": 0.0, "u_im": 1.0, "error": "singular fiber"}]
    path = ArtifactWriter(output_dir).write_csv("sweep.csv", rows)
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        assert reader.fieldnames == ["u_re", "error", "u_im"]
        records = list(reader)
    assert records[1]["error"] == "singular fiber"
    assert records[0]["u_im"] == ""


def test_overwrite_replaces_content(output_dir):
    writer = ArtifactWriter(output_dir)
    writer.write_dot("g.dot", "graph a {}\n")
    path = writer.write_dot("g.dot", "graph b {}\n")
    assert path.read_text() == "graph b {}\n"
    assert len(list(output_dir.iterdir())) == 1


def test_svg_is_reproducible(output_dir):
    def render():
        figure = Figure(figsize=(2, 2))
        figure.add_subplot(111).plot([0, 1], [1, 0])
        return figure

    writer = ArtifactWriter(output_dir)
    first = writer.write_svg("a.svg", render()).read_bytes()
    second = writer.write_svg("b.svg", render()).read_bytes()
    assert first.startswith(b"<?xml")
    assert first == second
