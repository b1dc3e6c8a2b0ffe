"""Tableau engine with lazy unfolding over acyclic terminologies.

Satisfiability of a concept is checked by saturating a completion graph:
a tree of ABoxes where only disjunction branching creates children and all
other rules extend the node they fire in.  The effective ABox of a node is
the union of the local statements along the path from the root.

Rule order is fixed for reproducible graphs: unfolding, then conjunction,
then existential, then universal, then disjunction; within one rule the
oldest applicable statement fires first.  Disjunction spines are flattened,
so an n-way disjunction branches into n children in a single application.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .errors import ResourceLimitError, UnknownNameError, UnknownRoleError
from .model import (
    And,
    Atom,
    Bottom,
    Concept,
    ConceptName,
    Exists,
    Forall,
    IsaStatement,
    Not,
    Or,
    Terminology,
    and_parts,
    names_in,
    nnf,
    or_parts,
    roles_in,
)

OPEN = "open"
CLOSED = "closed"
INTERIOR = "interior"

_IND_NAMES = ("x", "y", "z", "w", "u", "v")


def _individual_name(index: int) -> str:
    if index < len(_IND_NAMES):
        return _IND_NAMES[index]
    return f"x{index}"


@dataclass(frozen=True)
class ConceptAssertion:
    ind: str
    concept: Concept

    def __str__(self) -> str:
        from .parser import render_concept

        return f"{self.ind} : {render_concept(self.concept)}"


@dataclass(frozen=True)
class RoleAssertion:
    src: str
    role: str
    dst: str

    def __str__(self) -> str:
        return f"{self.src} {self.role} {self.dst}"


Statement = ConceptAssertion | RoleAssertion


@dataclass
class Limits:
    """Safety caps; exceeding one raises ResourceLimitError."""

    max_nodes: int = 100_000
    max_individuals: int = 10_000

    @classmethod
    def from_env(cls) -> "Limits":
        return cls(
            max_nodes=int(os.environ.get("ISAREPAIR_MAX_NODES", cls.max_nodes)),
            max_individuals=int(
                os.environ.get("ISAREPAIR_MAX_INDIVIDUALS", cls.max_individuals)
            ),
        )


@dataclass
class GraphNode:
    """One ABox node; immutable once the graph is returned."""

    node_id: str
    parent: "GraphNode | None"
    local: list[Statement] = field(default_factory=list)
    children: list["GraphNode"] = field(default_factory=list)
    status: str = OPEN

    def path(self) -> list["GraphNode"]:
        nodes: list[GraphNode] = []
        cur: GraphNode | None = self
        while cur is not None:
            nodes.append(cur)
            cur = cur.parent
        nodes.reverse()
        return nodes

    def effective_statements(self) -> list[Statement]:
        out: list[Statement] = []
        for node in self.path():
            out.extend(node.local)
        return out

    def pos_neg(self) -> dict[str, tuple[set[ConceptName], set[ConceptName]]]:
        """Per individual: named concepts asserted positively / under negation.

        Individuals appear in creation order.
        """

        table: dict[str, tuple[set[ConceptName], set[ConceptName]]] = {}
        for st in self.effective_statements():
            if isinstance(st, RoleAssertion):
                table.setdefault(st.src, (set(), set()))
                table.setdefault(st.dst, (set(), set()))
                continue
            pos, neg = table.setdefault(st.ind, (set(), set()))
            if isinstance(st.concept, Atom):
                pos.add(st.concept.name)
            elif isinstance(st.concept, Not) and isinstance(st.concept.inner, Atom):
                neg.add(st.concept.inner.name)
        return table

    def local_pos_neg(self) -> dict[str, tuple[set[ConceptName], set[ConceptName]]]:
        """Pos/Neg contributed by this node's own statements only."""

        table: dict[str, tuple[set[ConceptName], set[ConceptName]]] = {}
        for st in self.local:
            if isinstance(st, RoleAssertion):
                continue
            pos, neg = table.setdefault(st.ind, (set(), set()))
            if isinstance(st.concept, Atom):
                pos.add(st.concept.name)
            elif isinstance(st.concept, Not) and isinstance(st.concept.inner, Atom):
                neg.add(st.concept.inner.name)
        return table


@dataclass
class CompletionGraph:
    root: GraphNode
    nodes: list[GraphNode]
    input_concept: Concept
    terminology: Terminology

    def leaves(self) -> list[GraphNode]:
        return [n for n in self.nodes if not n.children]

    def open_leaves(self) -> list[GraphNode]:
        return [n for n in self.nodes if n.status == OPEN]

    def node(self, node_id: str) -> GraphNode:
        for n in self.nodes:
            if n.node_id == node_id:
                return n
        raise KeyError(node_id)


class _FoundOpen(Exception):
    """Internal: one open saturated branch suffices in satisfiability mode."""


class _Branch:
    """Mutable effective-ABox state for the branch being expanded."""

    def __init__(self) -> None:
        self.stmts: set[Statement] = set()
        self.order: list[Statement] = []
        self.inds: list[str] = []
        self.pos: dict[str, set[ConceptName]] = {}
        self.neg: dict[str, set[ConceptName]] = {}
        self.succ: dict[tuple[str, str], list[str]] = {}
        self.clash = False
        self._journal: list[tuple[str, object]] = []

    def mark(self) -> int:
        return len(self._journal)

    def rollback(self, mark: int) -> None:
        while len(self._journal) > mark:
            kind, payload = self._journal.pop()
            if kind == "stmt":
                st = payload
                self.stmts.discard(st)  # type: ignore[arg-type]
                self.order.pop()
                if isinstance(st, ConceptAssertion):
                    if isinstance(st.concept, Atom):
                        self.pos[st.ind].discard(st.concept.name)
                    elif isinstance(st.concept, Not) and isinstance(st.concept.inner, Atom):
                        self.neg[st.ind].discard(st.concept.inner.name)
                else:
                    self.succ[(st.src, st.role)].pop()
            elif kind == "ind":
                self.inds.pop()
            else:  # 'clash'
                self.clash = False

    def new_individual(self) -> str:
        ind = _individual_name(len(self.inds))
        self.inds.append(ind)
        self._journal.append(("ind", ind))
        self.pos.setdefault(ind, set())
        self.neg.setdefault(ind, set())
        return ind

    def add(self, st: Statement) -> bool:
        if st in self.stmts:
            return False
        self.stmts.add(st)
        self.order.append(st)
        self._journal.append(("stmt", st))
        if isinstance(st, ConceptAssertion):
            pos = self.pos.setdefault(st.ind, set())
            neg = self.neg.setdefault(st.ind, set())
            c = st.concept
            if isinstance(c, Atom):
                pos.add(c.name)
                if c.name in neg:
                    self._set_clash()
            elif isinstance(c, Not) and isinstance(c.inner, Atom):
                neg.add(c.inner.name)
                if c.inner.name in pos:
                    self._set_clash()
            elif isinstance(c, Bottom):
                self._set_clash()
        else:
            self.succ.setdefault((st.src, st.role), []).append(st.dst)
        return True

    def _set_clash(self) -> None:
        if not self.clash:
            self.clash = True
            self._journal.append(("clash", None))


class _Engine:
    def __init__(self, t: Terminology, limits: Limits, satisfiability_mode: bool):
        self.t = t
        self.limits = limits
        self.sat_mode = satisfiability_mode
        self.node_count = 0
        self.all_nodes: list[GraphNode] = []
        self._unfold_cache: dict[tuple[ConceptName, bool], Concept] = {}

    def unfolded(self, n: ConceptName, negated: bool) -> Concept | None:
        body = self.t.body_of(n)
        if body is None:
            return None
        key = (n, negated)
        cached = self._unfold_cache.get(key)
        if cached is None:
            cached = nnf(Not(body)) if negated else nnf(body)
            self._unfold_cache[key] = cached
        return cached

    def new_node(self, node_id: str, parent: GraphNode | None) -> GraphNode:
        self.node_count += 1
        if self.node_count > self.limits.max_nodes:
            raise ResourceLimitError(
                f"completion graph exceeded {self.limits.max_nodes} nodes"
            )
        node = GraphNode(node_id, parent)
        self.all_nodes.append(node)
        return node

    # -- rule scan, in fixed priority order ---------------------------------

    def _find_unfold(self, b: _Branch) -> tuple[str, ConceptAssertion] | None:
        for st in b.order:
            if not isinstance(st, ConceptAssertion):
                continue
            c = st.concept
            if isinstance(c, Atom):
                body = self.unfolded(c.name, negated=False)
            elif isinstance(c, Not) and isinstance(c.inner, Atom):
                body = self.unfolded(c.inner.name, negated=True)
            else:
                continue
            if body is not None and ConceptAssertion(st.ind, body) not in b.stmts:
                return (st.ind, ConceptAssertion(st.ind, body))
        return None

    def _find_and(self, b: _Branch) -> list[ConceptAssertion] | None:
        for st in b.order:
            if isinstance(st, ConceptAssertion) and isinstance(st.concept, And):
                missing = [
                    ConceptAssertion(st.ind, p)
                    for p in and_parts(st.concept)
                    if ConceptAssertion(st.ind, p) not in b.stmts
                ]
                if missing:
                    return missing
        return None

    def _find_exists(self, b: _Branch) -> ConceptAssertion | None:
        for st in b.order:
            if isinstance(st, ConceptAssertion) and isinstance(st.concept, Exists):
                role, filler = st.concept.role, st.concept.filler
                if not any(
                    ConceptAssertion(d, filler) in b.stmts
                    for d in b.succ.get((st.ind, role), ())
                ):
                    return st
        return None

    def _find_forall(self, b: _Branch) -> list[ConceptAssertion] | None:
        for st in b.order:
            if isinstance(st, ConceptAssertion) and isinstance(st.concept, Forall):
                role, filler = st.concept.role, st.concept.filler
                missing = [
                    ConceptAssertion(d, filler)
                    for d in b.succ.get((st.ind, role), ())
                    if ConceptAssertion(d, filler) not in b.stmts
                ]
                if missing:
                    return missing
        return None

    def _find_or(self, b: _Branch) -> tuple[str, list[Concept]] | None:
        for st in b.order:
            if isinstance(st, ConceptAssertion) and isinstance(st.concept, Or):
                parts: list[Concept] = []
                for p in or_parts(st.concept):
                    if p not in parts:
                        parts.append(p)
                if any(ConceptAssertion(st.ind, p) in b.stmts for p in parts):
                    continue
                return (st.ind, parts)
        return None

    # -- expansion -----------------------------------------------------------

    def expand(self, node: GraphNode, b: _Branch) -> None:
        while True:
            if b.clash:
                node.status = CLOSED
                return

            added = self._find_unfold(b)
            if added is not None:
                _, assertion = added
                b.add(assertion)
                node.local.append(assertion)
                continue

            conjuncts = self._find_and(b)
            if conjuncts is not None:
                for a in conjuncts:
                    if b.add(a):
                        node.local.append(a)
                    if b.clash:
                        break
                continue

            existential = self._find_exists(b)
            if existential is not None:
                assert isinstance(existential.concept, Exists)
                if len(b.inds) >= self.limits.max_individuals:
                    raise ResourceLimitError(
                        f"branch exceeded {self.limits.max_individuals} individuals"
                    )
                fresh = b.new_individual()
                edge = RoleAssertion(existential.ind, existential.concept.role, fresh)
                b.add(edge)
                node.local.append(edge)
                filler = ConceptAssertion(fresh, existential.concept.filler)
                if b.add(filler):
                    node.local.append(filler)
                continue

            universal = self._find_forall(b)
            if universal is not None:
                for a in universal:
                    if b.add(a):
                        node.local.append(a)
                    if b.clash:
                        break
                continue

            disjunction = self._find_or(b)
            if disjunction is not None:
                ind, parts = disjunction
                node.status = INTERIOR
                for i, part in enumerate(parts, start=1):
                    child = self.new_node(f"{node.node_id}.{i}", node)
                    node.children.append(child)
                    mark = b.mark()
                    assertion = ConceptAssertion(ind, part)
                    if b.add(assertion):
                        child.local.append(assertion)
                    self.expand(child, b)
                    b.rollback(mark)
                return

            node.status = OPEN
            if self.sat_mode:
                raise _FoundOpen()
            return


def _check_known(t: Terminology, c: Concept) -> None:
    for n in names_in(c):
        if not t.knows(n):
            raise UnknownNameError(str(n))
    for r in roles_in(c):
        if r not in t.roles:
            raise UnknownRoleError(r)


def build_completion_graph(
    t: Terminology, c: Concept, limits: Limits | None = None
) -> CompletionGraph:
    """Build the full completion graph: every branch saturated, no early exit."""

    _check_known(t, c)
    engine = _Engine(t, limits or Limits.from_env(), satisfiability_mode=False)
    branch = _Branch()
    root = engine.new_node("1", None)
    ind = branch.new_individual()
    first = ConceptAssertion(ind, nnf(c))
    branch.add(first)
    root.local.append(first)
    engine.expand(root, branch)
    return CompletionGraph(root, engine.all_nodes, c, t)


def is_satisfiable(t: Terminology, c: Concept, limits: Limits | None = None) -> bool:
    """True iff some saturated branch stays open (stops at the first one)."""

    _check_known(t, c)
    engine = _Engine(t, limits or Limits.from_env(), satisfiability_mode=True)
    branch = _Branch()
    root = engine.new_node("1", None)
    ind = branch.new_individual()
    first = ConceptAssertion(ind, nnf(c))
    branch.add(first)
    root.local.append(first)
    try:
        engine.expand(root, branch)
    except _FoundOpen:
        return True
    return False


def is_subsumed(t: Terminology, sub: Concept, sup: Concept, limits: Limits | None = None) -> bool:
    """Subsumption via unsatisfiability of ``sub and not sup``."""

    return not is_satisfiable(t, And(sub, Not(sup)), limits)


def entails_isa(t: Terminology, statement: IsaStatement, limits: Limits | None = None) -> bool:
    return is_subsumed(t, Atom(statement.sub), Atom(statement.sup), limits)


def coherence(t: Terminology, limits: Limits | None = None) -> tuple[bool, list[ConceptName]]:
    """Check satisfiability of every original named concept."""

    unsatisfiable = [
        n for n in t.original_names() if not is_satisfiable(t, Atom(n), limits)
    ]
    return (not unsatisfiable, unsatisfiable)


def render_graph(g: CompletionGraph) -> str:
    """Plain-text dump: one block per node with id, status and local statements."""

    lines: list[str] = []
    for node in g.nodes:
        lines.append(f"ABox {node.node_id}: {node.status.upper()}")
        for st in node.local:
            lines.append(f"  {st}")
    return "\n".join(lines) + "\n"
