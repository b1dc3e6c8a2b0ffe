from __future__ import annotations

from isarepair.hierarchy import (
    ADDED_BY_REPAIR,
    ASSERTED,
    INFERRED,
    MISSING_UNREPAIRED,
    asserted_pairs,
    hierarchy_edges,
)
from isarepair.model import add_isa, isa


def _edge_map(edges):
    return {(e.sub, e.sup): e.provenance for e in edges}


def test_asserted_pairs_pizza(pizza):
    pairs = {(str(a), str(b)) for a, b in asserted_pairs(pizza)}
    assert ("HamTopping", "MeatTopping") in pairs
    assert ("FishTopping", "PizzaTopping") in pairs
    assert ("MyPizza", "Pizza") in pairs
    assert ("NonVegetarianPizza", "Pizza") in pairs
    # negative conjuncts and quantified conjuncts are not is-a assertions
    assert ("FishTopping", "MeatTopping") not in pairs


def test_hierarchy_base_edges(pizza):
    edges = _edge_map(hierarchy_edges(pizza))
    assert edges[("HamTopping", "MeatTopping")] == ASSERTED
    # transitive consequence, never asserted directly
    assert edges[("HamTopping", "PizzaTopping")] == INFERRED
    assert ("MyPizza", "FishyMeatyPizza") not in edges


def test_hierarchy_missing_and_repair_tags(pizza, pizza_missing):
    edited, _ = add_isa(pizza, isa("AnchoviesTopping", "FishTopping"))
    edges = _edge_map(
        hierarchy_edges(
            edited,
            base=pizza,
            applied_edits=[isa("AnchoviesTopping", "FishTopping")],
            missing_unrepaired=list(pizza_missing),
        )
    )
    assert edges[("AnchoviesTopping", "FishTopping")] == ADDED_BY_REPAIR
    assert edges[("MyPizza", "FishyMeatyPizza")] == MISSING_UNREPAIRED
    # MyFruttiDiMare <= NonVegetarianPizza became derivable through the repair
    assert edges[("MyFruttiDiMare", "NonVegetarianPizza")] == ADDED_BY_REPAIR
    assert edges[("HamTopping", "MeatTopping")] == ASSERTED
