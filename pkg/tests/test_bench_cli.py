import json

import pytest

from gedgen.bench import (
    SCHEMA_LINE,
    BenchRecord,
    ValidityRecord,
    bench_cell,
    estimate_memory,
    parse_bytes,
    parse_grid,
    read_csv,
    run_bench,
    to_csv,
    validity,
)
from gedgen.cli import main
from gedgen.graph import LabeledGraph, running_example_graph, random_graph, read_graph, write_graph


def test_parsers():
    assert parse_grid("n=100,200;d=10") == [(100, 10), (200, 10)]
    assert parse_bytes("1.5K") == 1536 and parse_bytes("42") == 42
    with pytest.raises(ValueError):
        parse_grid("n=1")


def test_bench_records_and_memout():
    recs = run_bench([(8, 2), (6, 1)], "ge", 0, 2**34)
    assert [(r.n, r.d) for r in recs] == [(6, 1), (8, 2)]
    assert recs[0].depth == recs[1].depth and recs[0].wall_time_seconds >= 0
    skipped = bench_cell("ge", 400, 20, 0, estimate_memory("ge", 400, 20) - 1)
    assert skipped.wall_time_seconds == "MEMOUT"


def test_csv_schema_and_columns():
    text = to_csv([BenchRecord(5, 1, "gs", 0.1, 10, 6, 100)])
    assert text.splitlines()[0] == SCHEMA_LINE
    assert text.splitlines()[1] == "n,d,family,wall_time_seconds,neuron_count,depth,peak_memory_estimate"
    assert read_csv(text)[0]["family"] == "gs"
    with pytest.raises(ValueError):
        read_csv("n,d\n1,2\n")


def test_validity_single_sample():
    rec = validity(random_graph(6, 5, 1, 0), 2, 1, seed=3)
    assert rec == ValidityRecord(6, 5, 2, 1, 1, 1, 1)


def test_cli_generate_example_one(tmp_path, capsys):
    src = tmp_path / "g.json"
    write_graph(running_example_graph(), src)
    out = tmp_path / "out"
    rc = main(["generate", str(src), "--family", "gs", "--d", "3", "--x", "5,3,3,5,2,3", "--out", str(out)])
    assert rc == 0
    assert read_graph(out / "graph_00000.json").labels == (3, 5, 2, 2, 5)
    summary = json.loads((out / "summary.json").read_text())
    assert summary["outputs"][0]["certificate"]["distance"] == 2  # x_1 repeats, so two labels change


def test_cli_generate_count_zero_and_determinism(tmp_path):
    src = tmp_path / "g.json"
    write_graph(running_example_graph(), src)
    assert main(["generate", str(src), "--family", "gd", "--d", "1", "--count", "0", "--out", str(tmp_path / "z")]) == 0
    assert json.loads((tmp_path / "z" / "summary.json").read_text())["outputs"] == []
    args = ["generate", str(src), "--family", "ge", "--d", "2", "--count", "15", "--mode", "both"]
    main(args + ["--out", str(tmp_path / "a")])
    main(args + ["--out", str(tmp_path / "b")])
    assert (tmp_path / "a" / "summary.json").read_bytes() == (tmp_path / "b" / "summary.json").read_bytes()
    cert = json.loads((tmp_path / "a" / "summary.json").read_text())["outputs"]
    assert all(o["certificate"]["within"] and o["certificate"]["method"] == "exact_search" for o in cert)


def test_cli_refuses_uncertified(tmp_path, capsys):
    src = tmp_path / "g.json"
    write_graph(random_graph(10, 9, 2, 0), src)
    rc = main(["generate", str(src), "--family", "gi", "--d", "2", "--count", "40", "--out", str(tmp_path / "o")])
    assert rc == 2 and "UncertifiedOutput" in capsys.readouterr().err
    rc = main(["generate", str(src), "--family", "gi", "--d", "2", "--count", "40", "--allow-uncertified", "--out", str(tmp_path / "o")])
    assert rc == 0


def test_cli_edge_only_certifies_large_graphs(tmp_path):
    src = tmp_path / "g.json"
    write_graph(random_graph(10, 9, 1, 0), src)
    out = tmp_path / "o"
    assert main(["generate", str(src), "--family", "ge", "--edge-only", "--d", "5", "--count", "500", "--out", str(out)]) == 0
    outputs = json.loads((out / "summary.json").read_text())["outputs"]
    assert len(outputs) == 500 and all(o["certificate"]["within"] for o in outputs)


def test_cli_examples_and_fault(capsys):
    assert main(["examples"]) == 0
    assert "all 60 checks passed" in capsys.readouterr().out
    assert main(["examples", "--only", "2", "--override-c", "4"]) == 1
    assert "example 2 symbol x'" in capsys.readouterr().out


def test_cli_bench_and_validity(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bench", "--family", "gd", "--grid", "n=6;d=1", "--out", str(out)]) == 0
    assert len(read_csv(out.read_text())) == 1
    out = tmp_path / "v.csv"
    assert main(["validity", "--random-graph", "10,9", "--d", "5", "--count", "50", "--out", str(out)]) == 0
    row = read_csv(out.read_text())[0]
    assert (row["N_n"], row["N_E"], row["N_d"]) == ("50", "50", "50")
    assert main(["validity", "--random-graph", "10,9", "--d", "5", "--count", "50", "--out", str(tmp_path / "w.csv")]) == 0
    assert out.read_bytes() == (tmp_path / "w.csv").read_bytes()


def test_cli_reports_bad_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["generate", str(bad), "--d", "1"]) == 2
    assert "GraphFormatError" in capsys.readouterr().err
