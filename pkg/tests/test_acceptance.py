"""Acceptance suite: exact fixtures plus the randomized property suites.

Each criterion is one test that prints a single PASS line on success, so a
``pytest -s`` run reads as a checklist.
"""

from __future__ import annotations

import itertools
import time

from click.testing import CliRunner

from isarepair.abduction import (
    RepairingAction,
    apply_action,
    expand_alternatives,
    extract_closure_set,
    node_closure_sets,
    repair_single,
    repair_single_optimized,
    run_abduction,
    source_target_sets,
)
from isarepair.cli import main
from isarepair.model import And, Not, atom, isa
from isarepair.model import _find_cycle  # independent acyclicity re-check
from isarepair.tableau import build_completion_graph, coherence, entails_isa

from tests.conftest import FIXTURES
from tests.genutil import SUITE_LIMITS, brute_force_solution_set, random_cases

MY_PIZZA = isa("MyPizza", "FishyMeatyPizza")
FRUTTI = isa("MyFruttiDiMare", "NonVegetarianPizza")


def _passed(criterion: str) -> None:
    print(f"ACCEPTANCE PASS: {criterion}")


def _sets(actions) -> set[frozenset[str]]:
    return {frozenset(str(ax) for ax in a.axioms) for a in actions}


def _texts(statements) -> set[str]:
    return {str(s) for s in statements}


# ---------------------------------------------------------------------------
# exact fixtures
# ---------------------------------------------------------------------------

def test_completion_graph_fixture(pizza):
    started = time.monotonic()
    g = build_completion_graph(pizza, And(atom("MyPizza"), Not(atom("FishyMeatyPizza"))))
    assert len(g.nodes) == 17
    leaves = g.leaves()
    assert len(leaves) == 11
    assert sum(1 for n in leaves if n.status == "closed") == 6
    open_leaves = [n for n in leaves if n.status == "open"]
    assert len(open_leaves) == 5

    def pn(node_id, ind):
        pos, neg = g.node(node_id).pos_neg()[ind]
        return _texts(pos), _texts(neg)

    expected = {
        "1.2.2.2": {
            "x": ({"MyPizza", "Pizza"}, {"FishyMeatyPizza"}),
            "y": (
                {"AnchoviesTopping", "~AnchoviesTopping", "PizzaTopping", "MeatTopping", "~MeatTopping"},
                {"FishTopping"},
            ),
            "z": (
                {"ParmaHamTopping", "~ParmaHamTopping", "PizzaTopping", "MeatTopping", "~MeatTopping"},
                {"FishTopping"},
            ),
        },
        "1.2.2.3": {
            "x": ({"MyPizza", "Pizza"}, {"FishyMeatyPizza"}),
            "y": (
                {"AnchoviesTopping", "~AnchoviesTopping", "PizzaTopping", "MeatTopping", "~MeatTopping"},
                {"FishTopping"},
            ),
            "z": (
                {"ParmaHamTopping", "~ParmaHamTopping", "PizzaTopping"},
                {"FishTopping", "~FishTopping"},
            ),
        },
        "1.2.3.2": {
            "x": ({"MyPizza", "Pizza"}, {"FishyMeatyPizza"}),
            "y": (
                {"AnchoviesTopping", "~AnchoviesTopping", "PizzaTopping"},
                {"FishTopping", "~FishTopping"},
            ),
            "z": (
                {"ParmaHamTopping", "~ParmaHamTopping", "PizzaTopping", "MeatTopping", "~MeatTopping"},
                {"FishTopping"},
            ),
        },
        "1.2.3.3": {
            "x": ({"MyPizza", "Pizza"}, {"FishyMeatyPizza"}),
            "y": (
                {"AnchoviesTopping", "~AnchoviesTopping", "PizzaTopping"},
                {"FishTopping", "~FishTopping"},
            ),
            "z": (
                {"ParmaHamTopping", "~ParmaHamTopping", "PizzaTopping"},
                {"FishTopping", "~FishTopping"},
            ),
        },
        "1.3.2.2": {
            "x": ({"MyPizza", "Pizza"}, {"FishyMeatyPizza"}),
            "y": (
                {"AnchoviesTopping", "~AnchoviesTopping", "PizzaTopping"},
                {"MeatTopping", "~MeatTopping"},
            ),
            "z": (
                {"ParmaHamTopping", "~ParmaHamTopping", "PizzaTopping"},
                {"MeatTopping", "~MeatTopping"},
            ),
        },
    }
    assert {n.node_id for n in open_leaves} == set(expected)
    for node_id, table in expected.items():
        for ind, (pos, neg) in table.items():
            assert pn(node_id, ind) == (pos, neg), (node_id, ind)

    closure_common = {
        "MyPizza <= FishyMeatyPizza",
        "Pizza <= FishyMeatyPizza",
        "AnchoviesTopping <= FishTopping",
        "PizzaTopping <= FishTopping",
        "ParmaHamTopping <= FishTopping",
    }
    expected_closures = {
        "1.2.2.2": closure_common | {"MeatTopping <= FishTopping"},
        "1.2.2.3": closure_common | {"MeatTopping <= FishTopping"},
        "1.2.3.2": closure_common | {"MeatTopping <= FishTopping"},
        "1.2.3.3": closure_common,
        "1.3.2.2": {
            "MyPizza <= FishyMeatyPizza",
            "Pizza <= FishyMeatyPizza",
            "AnchoviesTopping <= MeatTopping",
            "PizzaTopping <= MeatTopping",
            "ParmaHamTopping <= MeatTopping",
        },
    }
    for node_id, expected_set in expected_closures.items():
        assert _texts(extract_closure_set(g.node(node_id))) == expected_set

    elapsed = time.monotonic() - started
    assert elapsed < 1.0, f"completion-graph fixture took {elapsed:.2f}s"
    _passed("completion-graph fixture (17 nodes, 11 leaves, 6 closed / 5 open, closure sets)")


EXPECTED_MY_PIZZA_COHERENT = {
    frozenset({"MyPizza <= FishyMeatyPizza"}),
    frozenset({"AnchoviesTopping <= FishTopping", "ParmaHamTopping <= MeatTopping"}),
    frozenset({"ParmaHamTopping <= FishTopping", "AnchoviesTopping <= MeatTopping"}),
}

EXPECTED_MY_PIZZA_PREFILTER = EXPECTED_MY_PIZZA_COHERENT | {
    frozenset({"Pizza <= FishyMeatyPizza"}),
    frozenset({"AnchoviesTopping <= FishTopping", "AnchoviesTopping <= MeatTopping"}),
    frozenset({"PizzaTopping <= FishTopping", "AnchoviesTopping <= MeatTopping"}),
    frozenset({"AnchoviesTopping <= FishTopping", "PizzaTopping <= MeatTopping"}),
    frozenset({"PizzaTopping <= FishTopping", "PizzaTopping <= MeatTopping"}),
    frozenset({"ParmaHamTopping <= FishTopping", "PizzaTopping <= MeatTopping"}),
    frozenset({"PizzaTopping <= FishTopping", "ParmaHamTopping <= MeatTopping"}),
    frozenset({"ParmaHamTopping <= FishTopping", "ParmaHamTopping <= MeatTopping"}),
}


def test_basic_algorithm_fixture(pizza):
    started = time.monotonic()
    result = repair_single(pizza, MY_PIZZA)
    assert len(result.candidates) == 11
    assert _sets(result.candidates) == EXPECTED_MY_PIZZA_PREFILTER
    assert _sets(result.actions) == EXPECTED_MY_PIZZA_COHERENT

    frutti = repair_single(pizza, FRUTTI)
    assert _sets(frutti.actions) == {
        frozenset({"MyFruttiDiMare <= NonVegetarianPizza"}),
        frozenset({"AnchoviesTopping <= FishTopping"}),
        frozenset({"AnchoviesTopping <= MeatTopping"}),
    }
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"basic-algorithm fixture took {elapsed:.2f}s"
    _passed("basic-algorithm fixture (11 pre-filter, 3 + 3 coherent actions)")


def test_combination_fixture(pizza, pizza_missing):
    report = run_abduction(pizza, list(pizza_missing))
    assert _sets(report.combined) == {
        frozenset({"MyPizza <= FishyMeatyPizza", "MyFruttiDiMare <= NonVegetarianPizza"}),
        frozenset({"AnchoviesTopping <= FishTopping", "ParmaHamTopping <= MeatTopping"}),
        frozenset({"ParmaHamTopping <= FishTopping", "AnchoviesTopping <= MeatTopping"}),
        frozenset({"MyPizza <= FishyMeatyPizza", "AnchoviesTopping <= FishTopping"}),
        frozenset({"MyPizza <= FishyMeatyPizza", "AnchoviesTopping <= MeatTopping"}),
    }
    _passed("combination fixture (exactly the 5 combined solutions)")


def test_optimized_variant_fixture(pizza):
    g = build_completion_graph(pizza, And(atom("MyPizza"), Not(atom("FishyMeatyPizza"))))
    sets = node_closure_sets(g)
    assert _texts(sets["1"]) == {
        "MyPizza <= FishyMeatyPizza",
        "Pizza <= FishyMeatyPizza",
    }
    assert _texts(sets["1.2"]) == {
        "AnchoviesTopping <= FishTopping",
        "PizzaTopping <= FishTopping",
        "ParmaHamTopping <= FishTopping",
    }
    result = repair_single_optimized(pizza, MY_PIZZA)
    assert _sets(result.actions) == EXPECTED_MY_PIZZA_COHERENT
    _passed("optimized-variant fixture (per-node closure sets, same 3 actions)")


def test_extension_fixture(pizza):
    source, target = source_target_sets(pizza, isa("AnchoviesTopping", "FishTopping"))
    assert _texts(source) == {"AnchoviesTopping"}
    assert _texts(target) == {"FishTopping"}
    source, target = source_target_sets(pizza, isa("ParmaHamTopping", "MeatTopping"))
    assert _texts(source) == {"ParmaHamTopping"}
    assert _texts(target) == {"MeatTopping", "HamTopping"}

    base = RepairingAction(
        frozenset({isa("AnchoviesTopping", "FishTopping"), isa("ParmaHamTopping", "MeatTopping")})
    )
    expanded = expand_alternatives(pizza, base)
    assert _sets(expanded) == {
        frozenset({"AnchoviesTopping <= FishTopping", "ParmaHamTopping <= MeatTopping"}),
        frozenset({"AnchoviesTopping <= FishTopping", "ParmaHamTopping <= HamTopping"}),
    }
    _passed("extension fixture (source/target sets plus the one additional action)")


# ---------------------------------------------------------------------------
# randomized property suites
# ---------------------------------------------------------------------------

_SOUNDNESS_SEED = 902_114
_SOUNDNESS_COUNT = 200
_suite_results: list[tuple] = []


def _run_random_suite() -> list[tuple]:
    if not _suite_results:
        for t, m in random_cases(_SOUNDNESS_SEED, _SOUNDNESS_COUNT):
            result = repair_single(t, m, SUITE_LIMITS)
            _suite_results.append((t, m, result))
    return _suite_results


def test_soundness_property_suite():
    started = time.monotonic()
    results = _run_random_suite()
    assert len(results) == _SOUNDNESS_COUNT
    checked_actions = 0
    for t, m, result in results:
        assert result.actions, f"no actions for {m}"
        for act in result.actions:
            extended = apply_action(t, act)
            assert extended is not None, f"{act} not acyclically addable for {m}"
            assert _find_cycle(dict(extended.definitions)) is None
            assert entails_isa(extended, m, SUITE_LIMITS), f"{act} does not repair {m}"
            ok, unsat = coherence(extended, SUITE_LIMITS)
            assert ok, f"{act} makes {unsat} unsatisfiable"
            checked_actions += 1
    elapsed = time.monotonic() - started
    assert elapsed < 60.0, f"soundness suite took {elapsed:.1f}s"
    _passed(
        f"soundness property suite ({_SOUNDNESS_COUNT} random terminologies, "
        f"{checked_actions} actions, {elapsed:.1f}s)"
    )


def test_minimality_property_suite():
    results = _run_random_suite()
    checked_subsets = 0
    for t, m, result in results:
        for act in result.actions:
            axioms = sorted(act.axioms, key=str)
            for k in range(1, len(axioms)):
                for subset in itertools.combinations(axioms, k):
                    extended = apply_action(t, RepairingAction(frozenset(subset)))
                    assert extended is None or not entails_isa(
                        extended, m, SUITE_LIMITS
                    ), f"proper subset {subset} of {act} already repairs {m}"
                    checked_subsets += 1
    _passed(f"minimality property suite ({checked_subsets} proper subsets checked)")


def test_oracle_containment():
    count = 50
    checked = 0
    for t, m in random_cases(417_209, count, max_names=6, max_roles=1):
        oracle = brute_force_solution_set(t, m, max_size=2)
        result = repair_single(t, m, SUITE_LIMITS)
        for act in result.actions:
            if len(act.axioms) > 2:
                continue
            assert act.axioms in oracle, (
                f"{act} emitted for {m} but missing from the brute-force set"
            )
            checked += 1
    _passed(f"oracle containment (50 tiny terminologies, {checked} actions contained)")


# ---------------------------------------------------------------------------
# scripted session replay through the CLI
# ---------------------------------------------------------------------------

def test_session_replay_example_run(pizza):
    runner = CliRunner()
    result = runner.invoke(
        main, ["session", "replay", str(FIXTURES / "example_run.session")]
    )
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert "MyPizza <= FishyMeatyPizza: repaired" in lines
    assert "MyFruttiDiMare <= NonVegetarianPizza: repaired" in lines
    assert lines[-1] == (
        "edits: AnchoviesTopping <= FishTopping, ParmaHamTopping <= HamTopping"
    )
    _passed("session replay (scripted interactive run ends fully repaired)")
