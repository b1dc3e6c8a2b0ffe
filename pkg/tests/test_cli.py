from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from isarepair.cli import main
from tests.conftest import FIXTURES

PIZZA = str(FIXTURES / "pizza.onto")
MISSING = str(FIXTURES / "pizza.missing")
SCRIPT = str(FIXTURES / "example_run.session")


@pytest.fixture
def runner():
    return CliRunner()


def test_check_coherent_ontology(runner):
    result = runner.invoke(main, ["check", PIZZA])
    assert result.exit_code == 0
    assert "coherent: yes" in result.output


def test_check_incoherent_ontology(runner, tmp_path):
    bad = tmp_path / "bad.onto"
    bad.write_text(
        "concept A <= B and not B;\nconcept B <= top;\n"
    )
    result = runner.invoke(main, ["check", str(bad)])
    assert result.exit_code == 1
    assert "unsatisfiable: A" in result.output


def test_check_parse_error_exit_code(runner, tmp_path):
    bad = tmp_path / "broken.onto"
    bad.write_text("concept ;")
    result = runner.invoke(main, ["check", str(bad)])
    assert result.exit_code == 2


def test_repair_prints_five_solutions(runner):
    result = runner.invoke(main, ["repair", PIZZA, MISSING])
    assert result.exit_code == 0
    assert "combined solutions: 5" in result.output


def test_repair_output_byte_stable(runner):
    first = runner.invoke(main, ["repair", PIZZA, MISSING])
    second = runner.invoke(main, ["repair", PIZZA, MISSING])
    assert first.output == second.output


def test_repair_writes_report_and_csv(runner, tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(main, ["repair", PIZZA, MISSING, "--out", str(out)])
    assert result.exit_code == 0
    doc = json.loads(out.read_text())
    assert doc["schema_version"] == 1
    assert len(doc["combined"]) == 5
    csv_text = (tmp_path / "report.csv").read_text()
    assert csv_text.splitlines()[0] == "kind,relation,index,axioms"
    assert sum(1 for line in csv_text.splitlines() if line.startswith("combined")) == 5


def test_repair_optimized_matches_basic(runner, tmp_path):
    basic = tmp_path / "basic.json"
    optimized = tmp_path / "optimized.json"
    assert runner.invoke(main, ["repair", PIZZA, MISSING, "--out", str(basic)]).exit_code == 0
    assert (
        runner.invoke(
            main, ["repair", PIZZA, MISSING, "--optimized", "--out", str(optimized)]
        ).exit_code
        == 0
    )
    a = json.loads(basic.read_text())
    b = json.loads(optimized.read_text())
    key = lambda doc: {
        row["relation"]: sorted(map(tuple, row["actions"])) for row in doc["per_relation"]
    }
    assert key(a) == key(b)
    assert sorted(map(tuple, a["combined"])) == sorted(map(tuple, b["combined"]))


def test_repair_expand_alternatives_lists_ham_variant(runner):
    result = runner.invoke(main, ["repair", PIZZA, MISSING, "--expand-alternatives"])
    assert result.exit_code == 0
    assert "ParmaHamTopping <= HamTopping" in result.output


def test_repair_renders_figures(runner, tmp_path):
    figures = tmp_path / "figs"
    result = runner.invoke(
        main, ["repair", PIZZA, MISSING, "--figures", str(figures)]
    )
    assert result.exit_code == 0
    names = sorted(p.name for p in figures.iterdir())
    assert names == ["completion_1.png", "completion_2.png", "hierarchy.png"]
    assert all((figures / n).stat().st_size > 0 for n in names)


def test_graph_dump_17_nodes(runner):
    result = runner.invoke(
        main, ["graph", PIZZA, "MyPizza and not FishyMeatyPizza"]
    )
    assert result.exit_code == 0
    lines = result.output.splitlines()
    headers = [l for l in lines if l.startswith("ABox ")]
    assert len(headers) == 17
    assert sum(1 for h in headers if h.endswith("OPEN")) == 5
    assert sum(1 for h in headers if h.endswith("CLOSED")) == 6


def test_graph_render_figure(runner, tmp_path):
    out = tmp_path / "graph.png"
    result = runner.invoke(
        main,
        ["graph", PIZZA, "MyPizza and not FishyMeatyPizza", "--render", str(out)],
    )
    assert result.exit_code == 0
    assert out.stat().st_size > 0


def test_session_replay_example_run(runner):
    result = runner.invoke(main, ["session", "replay", SCRIPT])
    assert result.exit_code == 0, result.output
    assert "MyPizza <= FishyMeatyPizza: repaired" in result.output
    assert "MyFruttiDiMare <= NonVegetarianPizza: repaired" in result.output
    assert "AnchoviesTopping <= FishTopping, ParmaHamTopping <= HamTopping" in result.output


def test_session_replay_failed_expectation(runner, tmp_path):
    script = tmp_path / "bad.session"
    script.write_text(
        f"ontology {PIZZA}\n"
        f"missing {MISSING}\n"
        "expect repaired MyPizza <= FishyMeatyPizza\n"
    )
    result = runner.invoke(main, ["session", "replay", str(script)])
    assert result.exit_code == 1


def test_session_replay_with_snapshot(runner, tmp_path):
    snap = tmp_path / "end.json"
    result = runner.invoke(main, ["session", "replay", SCRIPT, "--save", str(snap)])
    assert result.exit_code == 0
    from isarepair.session import RepairSession

    loaded = RepairSession.load(snap)
    assert all(e.status == "repaired" for e in loaded.entries)
