"""Named-concept hierarchy with edge provenance for UI panels and figures.

Edges are classified so a client can style them: ``asserted`` edges are the
top-level named conjuncts of base definitions, ``inferred`` covers every
other derivable subsumption, ``added-by-repair`` marks the session's applied
edits, and ``missing-unrepaired`` marks loaded missing relations that are
not yet derivable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import Atom, ConceptName, IsaStatement, Terminology, and_parts
from .tableau import Limits, is_satisfiable
from .model import And, Not

ASSERTED = "asserted"
INFERRED = "inferred"
ADDED_BY_REPAIR = "added-by-repair"
MISSING_UNREPAIRED = "missing-unrepaired"


@dataclass(frozen=True)
class HierarchyEdge:
    sub: str
    sup: str
    provenance: str


def _entailed_pairs(t: Terminology, limits: Limits | None) -> set[tuple[ConceptName, ConceptName]]:
    names = t.original_names()
    pairs: set[tuple[ConceptName, ConceptName]] = set()
    for a in names:
        for b in names:
            if a == b:
                continue
            if not is_satisfiable(t, And(Atom(a), Not(Atom(b))), limits):
                pairs.add((a, b))
    return pairs


def asserted_pairs(t: Terminology) -> set[tuple[ConceptName, ConceptName]]:
    """Direct named superconcepts: top-level conjuncts of each definition."""

    pairs: set[tuple[ConceptName, ConceptName]] = set()
    for n, body in t.definitions:
        if n.bar:
            continue
        for part in and_parts(body):
            if isinstance(part, Atom) and not part.name.bar and part.name != n:
                pairs.add((n, part.name))
    return pairs


def hierarchy_edges(
    current: Terminology,
    base: Terminology | None = None,
    applied_edits: list[IsaStatement] | None = None,
    missing_unrepaired: list[IsaStatement] | None = None,
    limits: Limits | None = None,
) -> list[HierarchyEdge]:
    """Full subsumption DAG over original names, tagged by provenance."""

    base = base or current
    applied = {(s.sub, s.sup) for s in (applied_edits or [])}
    asserted = asserted_pairs(base)
    base_entailed = (
        _entailed_pairs(base, limits) if base is not current else None
    )
    edges: list[HierarchyEdge] = []
    for a, b in sorted(_entailed_pairs(current, limits), key=lambda p: (str(p[0]), str(p[1]))):
        if (a, b) in applied:
            provenance = ADDED_BY_REPAIR
        elif (a, b) in asserted:
            provenance = ASSERTED
        elif base_entailed is not None and (a, b) not in base_entailed:
            provenance = ADDED_BY_REPAIR
        else:
            provenance = INFERRED
        edges.append(HierarchyEdge(str(a), str(b), provenance))
    for m in missing_unrepaired or []:
        if not any(e.sub == str(m.sub) and e.sup == str(m.sup) for e in edges):
            edges.append(HierarchyEdge(str(m.sub), str(m.sup), MISSING_UNREPAIRED))
    return edges
