"""Generation of repairing actions for missing is-a relations.

For one missing relation ``A <= B`` the engine saturates the completion
graph of ``A and not B``.  Every open leaf yields a closure set: the is-a
candidates ``P <= N`` built from the leaf's per-individual positive and
negative named concepts, any one of which closes that leaf.  Choosing one
candidate per open leaf and taking unions enumerates repairing actions;
subset-redundant actions are dropped, and so are actions whose addition
makes some original named concept unsatisfiable or cannot be encoded as an
acyclic terminology at all.

The per-node variant computes closure sets incrementally at every open node
(only contributions new at that node) and covers whole subtrees with a
single choice, which avoids enumerating the redundant combinations the
leaf-only construction produces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    AlreadyEntailedError,
    PreconditionViolatedError,
    ResourceLimitError,
    UnknownNameError,
    WouldCreateCycleError,
)
from .model import And, Atom, ConceptName, IsaStatement, Not, Terminology, add_isa
from .tableau import (
    CLOSED,
    CompletionGraph,
    GraphNode,
    Limits,
    OPEN,
    build_completion_graph,
    coherence,
    entails_isa,
    is_satisfiable,
)

DEFAULT_MAX_CANDIDATES = 10_000


@dataclass(frozen=True)
class RepairingAction:
    """A finite set of is-a axioms between original named concepts."""

    axioms: frozenset[IsaStatement]

    def __post_init__(self) -> None:
        if not self.axioms:
            raise ValueError("a repairing action cannot be empty")

    def sort_key(self) -> tuple[int, tuple[str, ...]]:
        return (len(self.axioms), tuple(sorted(str(a) for a in self.axioms)))

    def __str__(self) -> str:
        return "{" + ", ".join(sorted(str(a) for a in self.axioms)) + "}"


def action(*axioms: IsaStatement) -> RepairingAction:
    return RepairingAction(frozenset(axioms))


@dataclass
class RepairStats:
    variant: str
    node_count: int = 0
    leaf_count: int = 0
    open_leaf_count: int = 0
    candidate_count: int = 0
    truncated: bool = False


@dataclass
class RelationRepairs:
    """Per-relation output: verified actions plus what the filters removed.

    ``discarded_unsound`` holds candidates that close every open leaf yet
    fail to make the relation derivable: rewriting a pure definition
    ``A := C`` into ``A := B and C`` weakens the unfolding of ``not A``
    into a disjunction, which can reopen a branch that depended on it.
    """

    relation: IsaStatement
    actions: list[RepairingAction]
    discarded_incoherent: list[RepairingAction]
    discarded_unsound: list[RepairingAction]
    stats: RepairStats

    @property
    def candidates(self) -> list[RepairingAction]:
        """Subset-minimal candidates before the coherence filter."""

        return sorted(
            self.actions + self.discarded_incoherent + self.discarded_unsound,
            key=RepairingAction.sort_key,
        )


@dataclass
class AbductionReport:
    per_relation: dict[IsaStatement, RelationRepairs]
    combined: list[RepairingAction]
    discarded_incoherent: list[RepairingAction]
    stats: dict[str, int | bool]


# ---------------------------------------------------------------------------
# Closure sets
# ---------------------------------------------------------------------------

def extract_closure_set(leaf: GraphNode) -> frozenset[IsaStatement]:
    """Candidate axioms ``P <= N`` from an open leaf's effective ABox.

    Auxiliary (bar) names are excluded on both sides, as are reflexive
    pairs; each remaining axiom closes this leaf on its own.
    """

    if leaf.status != OPEN:
        raise PreconditionViolatedError(f"leaf {leaf.node_id} is not open")
    pairs: set[IsaStatement] = set()
    for _, (pos, neg) in leaf.pos_neg().items():
        for p in pos:
            if p.bar:
                continue
            for n in neg:
                if n.bar or p == n:
                    continue
                p_n = IsaStatement(p, n)
                pairs.add(p_n)
    return frozenset(pairs)


def node_closure_sets(g: CompletionGraph) -> dict[str, frozenset[IsaStatement]]:
    """Per-node closure sets for the incremental variant.

    A node's set pairs cumulative positive and negative named concepts of
    the same individual where at least one side first appeared at this
    node, minus pairs already present in an ancestor's set.  Closed leaves
    carry no set.
    """

    out: dict[str, frozenset[IsaStatement]] = {}

    def walk(node: GraphNode, inherited: frozenset[IsaStatement]) -> None:
        if node.status == CLOSED:
            return
        fresh = node.local_pos_neg()
        cumulative = node.pos_neg()
        pairs: set[IsaStatement] = set()
        for ind, (new_pos, new_neg) in fresh.items():
            all_pos, all_neg = cumulative[ind]
            for p in all_pos:
                if p.bar:
                    continue
                for n in all_neg:
                    if n.bar or p == n:
                        continue
                    if p not in new_pos and n not in new_neg:
                        continue
                    stmt = IsaStatement(p, n)
                    if stmt not in inherited:
                        pairs.add(stmt)
        frozen = frozenset(pairs)
        out[node.node_id] = frozen
        for child in node.children:
            walk(child, inherited | frozen)

    walk(g.root, frozenset())
    return out


# ---------------------------------------------------------------------------
# Candidate enumeration, minimization, coherence filtering
# ---------------------------------------------------------------------------

def _sorted_axioms(axioms: frozenset[IsaStatement]) -> list[IsaStatement]:
    return sorted(axioms, key=str)


def _selection_unions(
    closure_sets: list[list[IsaStatement]], cap: int
) -> tuple[list[frozenset[IsaStatement]], bool]:
    """All distinct unions of one pick per set, deduplicating partial states."""

    states: list[frozenset[IsaStatement]] = [frozenset()]
    truncated = False
    for closure in closure_sets:
        nxt: set[frozenset[IsaStatement]] = set()
        for state in states:
            for element in closure:
                nxt.add(state | {element})
        ordered = sorted(nxt, key=lambda s: (len(s), tuple(sorted(map(str, s)))))
        if len(ordered) > cap:
            ordered = ordered[:cap]
            truncated = True
        states = ordered
    return states, truncated


def minimize_actions(candidates: set[frozenset[IsaStatement]]) -> list[frozenset[IsaStatement]]:
    """Drop supersets; result sorted by (size, text)."""

    ordered = sorted(candidates, key=lambda s: (len(s), tuple(sorted(map(str, s)))))
    kept: list[frozenset[IsaStatement]] = []
    for cand in ordered:
        if not any(k < cand for k in kept):
            kept.append(cand)
    return kept


def _prune_non_minimal(
    t: Terminology,
    m: IsaStatement,
    candidates: list[frozenset[IsaStatement]],
    limits: Limits | None,
) -> list[frozenset[IsaStatement]]:
    """Drop candidates some proper subset of which already entails ``m``.

    Subset redundancy alone misses this: through definitional chains a
    single axiom can close a leaf indirectly, without its pair appearing
    in that leaf's closure set.
    """

    kept: list[frozenset[IsaStatement]] = []
    for cand in candidates:
        redundant = False
        for k in range(1, len(cand)):
            for subset in itertools.combinations(sorted(cand, key=str), k):
                extended = apply_action(t, RepairingAction(frozenset(subset)))
                if extended is not None and entails_isa(extended, m, limits):
                    redundant = True
                    break
            if redundant:
                break
        if not redundant:
            kept.append(cand)
    return kept


def apply_action(t: Terminology, act: RepairingAction) -> Terminology | None:
    """Extend ``t`` with every axiom of the action; None when a cycle blocks it."""

    current = t
    for ax in _sorted_axioms(act.axioms):
        try:
            current, _ = add_isa(current, ax)
        except WouldCreateCycleError:
            return None
    return current


def preserves_coherence(t: Terminology, act: RepairingAction, limits: Limits | None = None) -> bool:
    extended = apply_action(t, act)
    if extended is None:
        return False
    ok, _ = coherence(extended, limits)
    return ok


def _filter_coherent(
    t: Terminology, candidates: list[frozenset[IsaStatement]], limits: Limits | None
) -> tuple[list[RepairingAction], list[RepairingAction]]:
    kept: list[RepairingAction] = []
    dropped: list[RepairingAction] = []
    for axioms in candidates:
        act = RepairingAction(axioms)
        if preserves_coherence(t, act, limits):
            kept.append(act)
        else:
            dropped.append(act)
    return kept, dropped


def _verify_repairs(
    t: Terminology,
    goals: list[IsaStatement],
    actions: list[RepairingAction],
    limits: Limits | None,
) -> tuple[list[RepairingAction], list[RepairingAction]]:
    """Keep only actions whose application makes every goal derivable."""

    kept: list[RepairingAction] = []
    unsound: list[RepairingAction] = []
    for act in actions:
        extended = apply_action(t, act)
        if extended is not None and all(
            entails_isa(extended, g, limits) for g in goals
        ):
            kept.append(act)
        else:
            unsound.append(act)
    return kept, unsound


def _check_preconditions(t: Terminology, m: IsaStatement, limits: Limits | None) -> None:
    for n in (m.sub, m.sup):
        if not t.knows(n):
            raise UnknownNameError(str(n))
    if entails_isa(t, m, limits):
        raise AlreadyEntailedError(str(m))
    for n in (m.sub, m.sup):
        if not is_satisfiable(t, Atom(n), limits):
            raise PreconditionViolatedError(f"concept '{n}' is unsatisfiable")
    try:
        extended, _ = add_isa(t, m)
    except WouldCreateCycleError:
        raise PreconditionViolatedError(
            f"'{m}' cannot be added as an acyclic definition"
        ) from None
    ok, unsat = coherence(extended, limits)
    if not ok:
        names = ", ".join(str(n) for n in unsat)
        raise PreconditionViolatedError(f"adding '{m}' makes unsatisfiable: {names}")


# ---------------------------------------------------------------------------
# Per-relation repair
# ---------------------------------------------------------------------------

def repair_single(
    t: Terminology,
    m: IsaStatement,
    limits: Limits | None = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> RelationRepairs:
    """Leaf-wise enumeration: one closure-set element per open leaf."""

    _check_preconditions(t, m, limits)
    g = build_completion_graph(t, And(Atom(m.sub), Not(Atom(m.sup))), limits)
    leaves = g.leaves()
    open_leaves = [n for n in leaves if n.status == OPEN]
    closure_sets = [sorted(extract_closure_set(leaf), key=str) for leaf in open_leaves]
    unions, truncated = _selection_unions(closure_sets, max_candidates)
    minimal = _prune_non_minimal(t, m, minimize_actions(set(unions)), limits)
    kept, dropped = _filter_coherent(t, minimal, limits)
    kept, unsound = _verify_repairs(t, [m], kept, limits)
    stats = RepairStats(
        variant="basic",
        node_count=len(g.nodes),
        leaf_count=len(leaves),
        open_leaf_count=len(open_leaves),
        candidate_count=len(minimal),
        truncated=truncated,
    )
    return RelationRepairs(m, kept, dropped, unsound, stats)


class _Truncation:
    """Mutable flag threaded through the subtree enumeration."""

    def __init__(self) -> None:
        self.hit = False


def _subtree_covers(
    node: GraphNode,
    sets: dict[str, frozenset[IsaStatement]],
    cap: int,
    truncation: _Truncation,
) -> list[frozenset[IsaStatement]]:
    """Ways to close every open leaf under ``node`` using sets within the subtree.

    Choosing an element of a node's closure set covers the whole subtree, so
    no further choice is made below it.
    """

    if node.status == CLOSED:
        return [frozenset()]
    options: set[frozenset[IsaStatement]] = {
        frozenset({e}) for e in sets.get(node.node_id, frozenset())
    }
    if node.children:
        combos: list[frozenset[IsaStatement]] = [frozenset()]
        for child in node.children:
            child_options = _subtree_covers(child, sets, cap, truncation)
            if not child_options:
                combos = []
                break
            merged = {a | b for a in combos for b in child_options}
            combos = sorted(merged, key=lambda s: (len(s), tuple(sorted(map(str, s)))))
            if len(combos) > cap:
                combos = combos[:cap]
                truncation.hit = True
        options.update(combos)
    ordered = sorted(options, key=lambda s: (len(s), tuple(sorted(map(str, s)))))
    if len(ordered) > cap:
        ordered = ordered[:cap]
        truncation.hit = True
    return ordered


def repair_single_optimized(
    t: Terminology,
    m: IsaStatement,
    limits: Limits | None = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> RelationRepairs:
    """Per-node variant; final action set matches ``repair_single``."""

    _check_preconditions(t, m, limits)
    g = build_completion_graph(t, And(Atom(m.sub), Not(Atom(m.sup))), limits)
    sets = node_closure_sets(g)
    truncation = _Truncation()
    covers = _subtree_covers(g.root, sets, max_candidates, truncation)
    minimal = _prune_non_minimal(t, m, minimize_actions(set(covers)), limits)
    kept, dropped = _filter_coherent(t, minimal, limits)
    kept, unsound = _verify_repairs(t, [m], kept, limits)
    leaves = g.leaves()
    stats = RepairStats(
        variant="optimized",
        node_count=len(g.nodes),
        leaf_count=len(leaves),
        open_leaf_count=len([n for n in leaves if n.status == OPEN]),
        candidate_count=len(minimal),
        truncated=truncation.hit,
    )
    return RelationRepairs(m, kept, dropped, unsound, stats)


# ---------------------------------------------------------------------------
# Combination across missing relations
# ---------------------------------------------------------------------------

def combine(
    t: Terminology,
    missing: list[IsaStatement],
    per_relation: dict[IsaStatement, list[RepairingAction]],
    limits: Limits | None = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> tuple[list[RepairingAction], list[RepairingAction]]:
    """Union one action per relation; seed with the missing set itself."""

    if not missing:
        raise PreconditionViolatedError("no missing is-a relations to repair")
    for m in missing:
        if m not in per_relation:
            raise PreconditionViolatedError(f"no per-relation actions for '{m}'")

    states: set[frozenset[IsaStatement]] = {frozenset(missing)}
    partial: list[frozenset[IsaStatement]] = [frozenset()]
    truncated = False
    for m in missing:
        nxt = {s | a.axioms for s in partial for a in per_relation[m]}
        partial = sorted(nxt, key=lambda s: (len(s), tuple(sorted(map(str, s)))))
        if len(partial) > max_candidates:
            partial = partial[:max_candidates]
            truncated = True
    states.update(partial)
    minimal = minimize_actions(states)
    kept, dropped = _filter_coherent(t, minimal, limits)
    kept, unsound = _verify_repairs(t, missing, kept, limits)
    if truncated and not kept:
        raise ResourceLimitError("combination truncated away all candidates")
    return kept, dropped + unsound


def run_abduction(
    t: Terminology,
    missing: list[IsaStatement],
    optimized: bool = False,
    limits: Limits | None = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> AbductionReport:
    """Full pipeline: per-relation repair plus the combined solution set."""

    repair = repair_single_optimized if optimized else repair_single
    per_relation: dict[IsaStatement, RelationRepairs] = {}
    for m in missing:
        per_relation[m] = repair(t, m, limits, max_candidates)
    combined, dropped = combine(
        t,
        missing,
        {m: r.actions for m, r in per_relation.items()},
        limits,
        max_candidates,
    )
    stats: dict[str, int | bool] = {
        "relations": len(missing),
        "combined_count": len(combined),
        "combined_discarded": len(dropped),
        "truncated": any(r.stats.truncated for r in per_relation.values()),
    }
    return AbductionReport(per_relation, combined, dropped, stats)


# ---------------------------------------------------------------------------
# Source / Target extension
# ---------------------------------------------------------------------------

def source_target_sets(
    t: Terminology, statement: IsaStatement, limits: Limits | None = None
) -> tuple[set[ConceptName], set[ConceptName]]:
    """Named super-concepts of the sub side and sub-concepts of the super side.

    Super-concepts of the super side are removed from the source set and
    sub-concepts of the sub side from the target set, so a repair picked
    from these sets never introduces an unvalidated equivalence.
    """

    a, b = statement.sub, statement.sup
    for n in (a, b):
        if not t.knows(n):
            raise UnknownNameError(str(n))
    names = t.original_names()
    source = {
        s
        for s in names
        if _name_subsumed(t, a, s, limits) and not _name_subsumed(t, b, s, limits)
    }
    target = {
        s
        for s in names
        if _name_subsumed(t, s, b, limits) and not _name_subsumed(t, s, a, limits)
    }
    return source, target


def _name_subsumed(
    t: Terminology, sub: ConceptName, sup: ConceptName, limits: Limits | None = None
) -> bool:
    if sub == sup:
        return True
    return not is_satisfiable(t, And(Atom(sub), Not(Atom(sup))), limits)


def expand_alternatives(
    t: Terminology, act: RepairingAction, limits: Limits | None = None
) -> list[RepairingAction]:
    """Substitute each axiom by any source/target pair; the cartesian product
    of the per-axiom alternatives, original action included."""

    per_axiom: list[list[IsaStatement]] = []
    for ax in _sorted_axioms(act.axioms):
        source, target = source_target_sets(t, ax, limits)
        alternatives = [
            IsaStatement(s, tt)
            for s in sorted(source, key=str)
            for tt in sorted(target, key=str)
            if s != tt
        ]
        per_axiom.append(alternatives)
    seen: set[frozenset[IsaStatement]] = set()
    out: list[RepairingAction] = []
    for combo in itertools.product(*per_axiom):
        axioms = frozenset(combo)
        if axioms not in seen:
            seen.add(axioms)
            out.append(RepairingAction(axioms))
    return sorted(out, key=RepairingAction.sort_key)
