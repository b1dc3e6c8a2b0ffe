"""Concept-term algebra and acyclic terminologies.

A terminology is a finite set of concept definitions ``A := body`` whose
use-graph is acyclic.  Bound statements ``A <= C`` are encoded as definitions
``A := C and ~A`` where ``~A`` is a fresh auxiliary ("bar") name that never
appears in user input; this keeps the set a proper acyclic terminology while
preserving exactly the intended subsumptions between original names.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import (
    CyclicDefinitionError,
    MultipleDefinitionError,
    UnknownNameError,
    UnknownRoleError,
    WouldCreateCycleError,
)

BAR_MARKER = "~"


@dataclass(frozen=True)
class ConceptName:
    """A concept name; ``bar=True`` marks generated auxiliary names."""

    text: str
    bar: bool = False

    def __str__(self) -> str:
        return BAR_MARKER + self.text if self.bar else self.text


def name(text: str) -> ConceptName:
    return ConceptName(text)


def bar_of(n: ConceptName) -> ConceptName:
    if n.bar:
        raise ValueError(f"'{n}' is already an auxiliary name")
    return ConceptName(n.text, bar=True)


# ---------------------------------------------------------------------------
# Concept expressions
# ---------------------------------------------------------------------------

class Concept:
    """Base class for concept expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Top(Concept):
    pass


@dataclass(frozen=True)
class Bottom(Concept):
    pass


@dataclass(frozen=True)
class Atom(Concept):
    name: ConceptName


@dataclass(frozen=True)
class Not(Concept):
    inner: Concept


@dataclass(frozen=True)
class And(Concept):
    left: Concept
    right: Concept


@dataclass(frozen=True)
class Or(Concept):
    left: Concept
    right: Concept


@dataclass(frozen=True)
class Exists(Concept):
    role: str
    filler: Concept


@dataclass(frozen=True)
class Forall(Concept):
    role: str
    filler: Concept


TOP = Top()
BOTTOM = Bottom()


def atom(text: str, bar: bool = False) -> Atom:
    return Atom(ConceptName(text, bar))


def nnf(c: Concept) -> Concept:
    """Negation normal form: negation pushed down to atoms."""

    if isinstance(c, (Top, Bottom, Atom)):
        return c
    if isinstance(c, And):
        return And(nnf(c.left), nnf(c.right))
    if isinstance(c, Or):
        return Or(nnf(c.left), nnf(c.right))
    if isinstance(c, Exists):
        return Exists(c.role, nnf(c.filler))
    if isinstance(c, Forall):
        return Forall(c.role, nnf(c.filler))
    if isinstance(c, Not):
        inner = c.inner
        if isinstance(inner, Atom):
            return c
        if isinstance(inner, Top):
            return BOTTOM
        if isinstance(inner, Bottom):
            return TOP
        if isinstance(inner, Not):
            return nnf(inner.inner)
        if isinstance(inner, And):
            return Or(nnf(Not(inner.left)), nnf(Not(inner.right)))
        if isinstance(inner, Or):
            return And(nnf(Not(inner.left)), nnf(Not(inner.right)))
        if isinstance(inner, Exists):
            return Forall(inner.role, nnf(Not(inner.filler)))
        if isinstance(inner, Forall):
            return Exists(inner.role, nnf(Not(inner.filler)))
    raise TypeError(f"not a concept expression: {c!r}")


def and_parts(c: Concept) -> list[Concept]:
    """Flatten a conjunction spine; non-conjunctions yield themselves."""

    if isinstance(c, And):
        return and_parts(c.left) + and_parts(c.right)
    return [c]


def or_parts(c: Concept) -> list[Concept]:
    if isinstance(c, Or):
        return or_parts(c.left) + or_parts(c.right)
    return [c]


def conjoin(parts: Sequence[Concept]) -> Concept:
    """Right-fold a non-empty sequence into a conjunction spine."""

    if not parts:
        raise ValueError("cannot conjoin an empty sequence")
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = And(p, out)
    return out


def names_in(c: Concept) -> Iterator[ConceptName]:
    if isinstance(c, Atom):
        yield c.name
    elif isinstance(c, Not):
        yield from names_in(c.inner)
    elif isinstance(c, (And, Or)):
        yield from names_in(c.left)
        yield from names_in(c.right)
    elif isinstance(c, (Exists, Forall)):
        yield from names_in(c.filler)


def roles_in(c: Concept) -> Iterator[str]:
    if isinstance(c, Not):
        yield from roles_in(c.inner)
    elif isinstance(c, (And, Or)):
        yield from roles_in(c.left)
        yield from roles_in(c.right)
    elif isinstance(c, (Exists, Forall)):
        yield c.role
        yield from roles_in(c.filler)


def concept_size(c: Concept) -> int:
    if isinstance(c, (Top, Bottom, Atom)):
        return 1
    if isinstance(c, Not):
        return 1 + concept_size(c.inner)
    if isinstance(c, (And, Or)):
        return 1 + concept_size(c.left) + concept_size(c.right)
    if isinstance(c, (Exists, Forall)):
        return 1 + concept_size(c.filler)
    raise TypeError(f"not a concept expression: {c!r}")


# ---------------------------------------------------------------------------
# Axioms and is-a statements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Definition:
    """``name := body``"""

    name: ConceptName
    body: Concept


@dataclass(frozen=True)
class Primitive:
    """``name <= bound``; exists only before normalization."""

    name: ConceptName
    bound: Concept


Axiom = Definition | Primitive


@dataclass(frozen=True)
class IsaStatement:
    """An is-a relation between two distinct original concept names."""

    sub: ConceptName
    sup: ConceptName

    def __post_init__(self) -> None:
        if self.sub == self.sup:
            raise ValueError(f"self-subsumption '{self.sub} <= {self.sup}'")
        if self.sub.bar or self.sup.bar:
            raise ValueError("is-a statements relate original names only")

    def __str__(self) -> str:
        return f"{self.sub} <= {self.sup}"


def isa(sub: str, sup: str) -> IsaStatement:
    return IsaStatement(name(sub), name(sup))


# ---------------------------------------------------------------------------
# Terminology
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Terminology:
    """An acyclic terminology: role names, ordered definitions, primitive names.

    Values are immutable; every edit produces a new instance.
    """

    roles: frozenset[str]
    definitions: tuple[tuple[ConceptName, Concept], ...]
    primitive_names: frozenset[ConceptName]
    _index: dict[ConceptName, Concept] = field(repr=False, compare=False, default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", dict(self.definitions))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Terminology):
            return NotImplemented
        return (
            self.roles == other.roles
            and dict(self.definitions) == dict(other.definitions)
            and self.primitive_names == other.primitive_names
        )

    def __hash__(self) -> int:
        return hash((self.roles, frozenset(self.definitions), self.primitive_names))

    def body_of(self, n: ConceptName) -> Concept | None:
        return self._index.get(n)

    def knows(self, n: ConceptName) -> bool:
        return n in self._index or n in self.primitive_names

    def original_names(self) -> list[ConceptName]:
        """All original-kind names, defined ones first in definition order."""

        defined = [n for n, _ in self.definitions if not n.bar]
        primitives = sorted(
            (n for n in self.primitive_names if not n.bar), key=lambda n: n.text
        )
        return defined + primitives

    def uses(self, n: ConceptName) -> set[ConceptName]:
        body = self._index.get(n)
        return set(names_in(body)) if body is not None else set()


def _find_cycle(defs: dict[ConceptName, Concept]) -> list[ConceptName] | None:
    """Return one definitional cycle, or None when the use-graph is acyclic."""

    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[ConceptName, int] = {n: WHITE for n in defs}

    def visit(n: ConceptName, stack: list[ConceptName]) -> list[ConceptName] | None:
        color[n] = GREY
        stack.append(n)
        for m in names_in(defs[n]):
            if m not in defs:
                continue
            if color[m] == GREY:
                return stack[stack.index(m):]
            if color[m] == WHITE:
                found = visit(m, stack)
                if found:
                    return found
        stack.pop()
        color[n] = BLACK
        return None

    for n in defs:
        if color[n] == WHITE:
            found = visit(n, [])
            if found:
                return found
    return None


def _reaches(defs: dict[ConceptName, Concept], start: ConceptName, goal: ConceptName) -> bool:
    seen: set[ConceptName] = set()
    frontier = [start]
    while frontier:
        n = frontier.pop()
        if n == goal:
            return True
        if n in seen:
            continue
        seen.add(n)
        body = defs.get(n)
        if body is not None:
            frontier.extend(names_in(body))
    return False


def normalize_terminology(axioms: Sequence[Axiom], roles: Sequence[str] | frozenset[str]) -> Terminology:
    """Turn parsed axioms into an acyclic terminology.

    Every ``A <= C`` becomes ``A := C and ~A``; a bound of exactly ``top``
    leaves the name primitive (no auxiliary name is introduced).
    """

    role_set = frozenset(roles)
    defined: dict[ConceptName, Concept] = {}
    order: list[tuple[ConceptName, Concept]] = []
    top_primitives: set[ConceptName] = set()

    for ax in axioms:
        if ax.name.bar:
            raise ValueError(f"cannot define auxiliary name '{ax.name}'")
        if ax.name in defined or ax.name in top_primitives:
            raise MultipleDefinitionError(str(ax.name))
        if isinstance(ax, Definition):
            body = ax.body
        else:
            if ax.bound == TOP:
                top_primitives.add(ax.name)
                continue
            # splice the auxiliary atom into the conjunction spine so that
            # serialize -> parse -> normalize reproduces the body exactly
            body = conjoin(and_parts(ax.bound) + [Atom(bar_of(ax.name))])
        defined[ax.name] = body
        order.append((ax.name, body))

    mentioned: set[ConceptName] = set(top_primitives)
    for _, body in order:
        for r in roles_in(body):
            if r not in role_set:
                raise UnknownRoleError(r)
        mentioned.update(names_in(body))

    cycle = _find_cycle(defined)
    if cycle is not None:
        raise CyclicDefinitionError([str(n) for n in cycle] + [str(cycle[0])])

    primitives = frozenset(n for n in mentioned if n not in defined)
    return Terminology(role_set, tuple(order), primitives)


# ---------------------------------------------------------------------------
# Acyclicity-preserving axiom addition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsaEdit:
    """Record of one applied is-a addition, sufficient to invert it.

    ``created_definition`` is True when the sub had no definition before and
    the edit introduced ``sub := sup and ~sub``.
    """

    statement: IsaStatement
    created_definition: bool

    def undo(self, t: Terminology) -> Terminology:
        """Invert the edit applied last on ``sub``'s definition."""

        sub, sup = self.statement.sub, self.statement.sup
        body = t.body_of(sub)
        if body is None:
            raise ValueError(f"'{sub}' has no definition to restore")
        if self.created_definition:
            expected = And(Atom(sup), Atom(bar_of(sub)))
            if body != expected:
                raise ValueError(f"definition of '{sub}' changed since the edit")
            defs = tuple((n, b) for n, b in t.definitions if n != sub)
            primitives = (t.primitive_names - {bar_of(sub)}) | {sub}
            return Terminology(t.roles, defs, primitives)
        if not (isinstance(body, And) and body.left == Atom(sup)):
            raise ValueError(f"definition of '{sub}' changed since the edit")
        rest = body.right
        defs = tuple((n, rest if n == sub else b) for n, b in t.definitions)
        return Terminology(t.roles, defs, t.primitive_names)


def add_isa(t: Terminology, statement: IsaStatement) -> tuple[Terminology, IsaEdit]:
    """Add ``sub <= sup`` keeping the terminology acyclic.

    A name with an existing definition ``sub := C`` is changed to
    ``sub := sup and C``; an undefined name gets ``sub := sup and ~sub``.
    """

    sub, sup = statement.sub, statement.sup
    for n in (sub, sup):
        if not t.knows(n):
            raise UnknownNameError(str(n))

    defs = dict(t.definitions)
    if _reaches(defs, sup, sub):
        raise WouldCreateCycleError(str(sub), str(sup))

    body = t.body_of(sub)
    if body is not None:
        new_body = And(Atom(sup), body)
        order = tuple((n, new_body if n == sub else b) for n, b in t.definitions)
        return Terminology(t.roles, order, t.primitive_names), IsaEdit(statement, created_definition=False)

    bar = bar_of(sub)
    order = t.definitions + ((sub, And(Atom(sup), Atom(bar))),)
    primitives = (t.primitive_names - {sub}) | {bar}
    return Terminology(t.roles, order, primitives), IsaEdit(statement, created_definition=True)


def unfold_once(t: Terminology, n: ConceptName, negated: bool = False) -> Concept | None:
    """One lazy-unfolding step: the definition body, or its NNF complement."""

    body = t.body_of(n)
    if body is None:
        return None
    return nnf(Not(body)) if negated else body
