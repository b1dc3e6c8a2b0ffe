"""Interactive repair workflow state.

A session tracks one ontology snapshot plus a list of missing is-a
relations.  Actions are generated lazily per relation against the current
(possibly already edited) terminology.  Validating an axiom as correct adds
it to the ontology immediately; the later source/target repair step
replaces that plain edit with the chosen, possibly more informative axiom.
Validating as incorrect removes every action containing the axiom from
every relation.  Revocation drops all edits attributed to one relation and
rebuilds the terminology; verdicts encode domain truth and survive it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .abduction import (
    RepairingAction,
    repair_single,
    repair_single_optimized,
    source_target_sets,
)
from .errors import (
    ChoiceOutsideSetsError,
    ConflictingVerdictError,
    NothingToRevokeError,
    PreconditionViolatedError,
    SessionStateError,
    WouldCreateCycleError,
)
from .model import (
    Atom,
    ConceptName,
    IsaStatement,
    Terminology,
    add_isa,
    normalize_terminology,
)
from .parser import parse_ontology, serialize_ontology
from .tableau import Limits, coherence, entails_isa, is_satisfiable

CORRECT = "correct"
INCORRECT = "incorrect"

UNREPAIRED = "unrepaired"
REPAIRED = "repaired"

SNAPSHOT_VERSION = 1


@dataclass
class SessionEntry:
    relation: IsaStatement
    actions: list[RepairingAction] | None = None
    chosen_action: int | None = None
    status: str = UNREPAIRED


@dataclass
class EditLogEntry:
    entry_index: int
    statement: IsaStatement
    kind: str  # 'validated' | 'repair'
    repairs: IsaStatement | None = None  # the action axiom a repair edit covers


@dataclass
class SessionStatus:
    entries: list[dict]
    verdicts: dict[str, str]
    edits: list[str]
    repaired_count: int
    unrepaired_count: int


def _parse_statement(text: str) -> IsaStatement:
    left, _, right = text.partition("<=")
    sub, sup = left.strip(), right.strip()
    if not sub or not sup:
        raise ValueError(f"not an is-a statement: {text!r}")
    return IsaStatement(ConceptName(sub), ConceptName(sup))


class RepairSession:
    """Single-writer workflow state; all reads are cheap views."""

    def __init__(self, base: Terminology, missing: list[IsaStatement], *, _validate: bool = True):
        if _validate:
            _check_session_preconditions(base, missing)
        self.base = base
        self.current = base
        self.entries = [SessionEntry(m) for m in missing]
        self.verdicts: dict[IsaStatement, str] = {}
        self.edit_log: list[EditLogEntry] = []
        self.repaired_axioms: dict[IsaStatement, int] = {}
        self.limits = Limits.from_env()

    # -- helpers -------------------------------------------------------------

    def _entry(self, idx: int) -> SessionEntry:
        if not 0 <= idx < len(self.entries):
            raise SessionStateError(f"no missing relation with index {idx}")
        return self.entries[idx]

    def entry_index(self, relation: IsaStatement) -> int:
        for i, e in enumerate(self.entries):
            if e.relation == relation:
                return i
        raise SessionStateError(f"'{relation}' is not a loaded missing relation")

    def _rebuild_current(self) -> None:
        current = self.base
        for edit in self.edit_log:
            current, _ = add_isa(current, edit.statement)
        self.current = current

    def _axiom_in_actions(self, axiom: IsaStatement) -> int | None:
        for i, entry in enumerate(self.entries):
            for act in entry.actions or []:
                if axiom in act.axioms:
                    return i
        return None

    def _is_pending_choice(self, axiom: IsaStatement) -> int | None:
        """Entry owning a correct-verdict axiom whose source/target sets
        admit ``axiom`` as replacement."""

        for i, entry in enumerate(self.entries):
            for act in entry.actions or []:
                for ax in act.axioms:
                    if self.verdicts.get(ax) != CORRECT:
                        continue
                    source, target = source_target_sets(self.current, ax, self.limits)
                    if axiom.sub in source and axiom.sup in target:
                        return i
        return None

    def _recompute_statuses(self) -> None:
        for entry in self.entries:
            repaired = entry.actions is not None and any(
                all(ax in self.repaired_axioms for ax in act.axioms)
                for act in entry.actions
            )
            entry.status = REPAIRED if repaired else UNREPAIRED

    def _assert_no_incorrect_in_actions(self) -> None:
        for entry in self.entries:
            for act in entry.actions or []:
                assert not any(
                    self.verdicts.get(ax) == INCORRECT for ax in act.axioms
                ), "an action containing an incorrect axiom survived"

    # -- operations ----------------------------------------------------------

    def generate_actions(self, idx: int, *, optimized: bool = False, force: bool = False) -> None:
        entry = self._entry(idx)
        if entry.actions is not None and not force:
            raise SessionStateError(
                f"actions for '{entry.relation}' already generated; pass force to regenerate"
            )
        repair = repair_single_optimized if optimized else repair_single
        result = repair(self.current, entry.relation, self.limits)
        entry.actions = [
            act
            for act in result.actions
            if not any(self.verdicts.get(ax) == INCORRECT for ax in act.axioms)
        ]
        entry.chosen_action = None
        self._recompute_statuses()
        self._assert_no_incorrect_in_actions()

    def validate(self, axiom: IsaStatement, verdict: str) -> None:
        if verdict not in (CORRECT, INCORRECT):
            raise ValueError(f"unknown verdict {verdict!r}")
        previous = self.verdicts.get(axiom)
        if previous == verdict:
            return
        if previous is not None:
            raise ConflictingVerdictError(str(axiom), previous, verdict)

        owner = self._axiom_in_actions(axiom)
        if owner is None:
            owner = self._is_pending_choice(axiom)
        if owner is None:
            raise SessionStateError(
                f"'{axiom}' does not occur in any generated repairing action"
            )

        self.verdicts[axiom] = verdict
        if verdict == INCORRECT:
            for entry in self.entries:
                if entry.actions is not None:
                    entry.actions = [
                        act for act in entry.actions if axiom not in act.axioms
                    ]
                    if entry.chosen_action is not None and entry.chosen_action >= len(
                        entry.actions
                    ):
                        entry.chosen_action = None
        else:
            try:
                self.current, _ = add_isa(self.current, axiom)
            except WouldCreateCycleError:
                del self.verdicts[axiom]
                raise
            self.edit_log.append(EditLogEntry(owner, axiom, "validated"))
        self._recompute_statuses()
        self._assert_no_incorrect_in_actions()

    def repair_axiom(
        self,
        idx: int,
        axiom: IsaStatement,
        chosen_source: ConceptName,
        chosen_target: ConceptName,
    ) -> None:
        entry = self._entry(idx)
        if self.verdicts.get(axiom) != CORRECT:
            raise PreconditionViolatedError(
                f"'{axiom}' must be validated correct before repairing"
            )
        source, target = source_target_sets(self.current, axiom, self.limits)
        if chosen_source not in source:
            raise ChoiceOutsideSetsError("source", str(chosen_source))
        if chosen_target not in target:
            raise ChoiceOutsideSetsError("target", str(chosen_target))

        chosen = IsaStatement(chosen_source, chosen_target)
        new_log = [
            e
            for e in self.edit_log
            if not (e.kind == "validated" and e.statement == axiom)
        ]
        new_log.append(EditLogEntry(idx, chosen, "repair", repairs=axiom))

        current = self.base
        for e in new_log:
            current, _ = add_isa(current, e.statement)  # may raise WouldCreateCycle

        self.edit_log = new_log
        self.current = current
        self.repaired_axioms[axiom] = idx
        if not entails_isa(self.current, axiom, self.limits):
            raise SessionStateError(
                f"repair of '{axiom}' via '{chosen}' did not make it derivable"
            )
        self._recompute_statuses()

    def revoke(self, idx: int) -> None:
        entry = self._entry(idx)
        if not any(e.entry_index == idx for e in self.edit_log):
            raise NothingToRevokeError(str(entry.relation))
        self.edit_log = [e for e in self.edit_log if e.entry_index != idx]
        self.repaired_axioms = {
            ax: owner for ax, owner in self.repaired_axioms.items() if owner != idx
        }
        self._rebuild_current()
        self._recompute_statuses()

    def status(self) -> SessionStatus:
        entries = []
        for entry in self.entries:
            per_axiom: dict[str, str] = {}
            actions_view: list[dict] | None = None
            if entry.actions is not None:
                actions_view = []
                for act in entry.actions:
                    axioms = sorted(act.axioms, key=str)
                    for ax in axioms:
                        per_axiom[str(ax)] = (
                            REPAIRED if ax in self.repaired_axioms else UNREPAIRED
                        )
                    actions_view.append(
                        {
                            "axioms": [str(ax) for ax in axioms],
                            "verdicts": {
                                str(ax): self.verdicts.get(ax, "unvalidated")
                                for ax in axioms
                            },
                            "repaired": [
                                str(ax) for ax in axioms if ax in self.repaired_axioms
                            ],
                        }
                    )
            entries.append(
                {
                    "relation": str(entry.relation),
                    "status": entry.status,
                    "actions": actions_view,
                    "per_axiom": per_axiom,
                    "chosen_action": entry.chosen_action,
                }
            )
        verdicts = {str(ax): v for ax, v in self.verdicts.items()}
        edits = [str(e.statement) for e in self.edit_log]
        repaired = sum(1 for e in self.entries if e.status == REPAIRED)
        return SessionStatus(
            entries=entries,
            verdicts=verdicts,
            edits=edits,
            repaired_count=repaired,
            unrepaired_count=len(self.entries) - repaired,
        )

    # -- persistence ----------------------------------------------------------

    def to_snapshot(self) -> dict:
        return {
            "schema_version": SNAPSHOT_VERSION,
            "base_ontology": serialize_ontology(self.base),
            "missing": [str(e.relation) for e in self.entries],
            "verdicts": [[str(ax), v] for ax, v in self.verdicts.items()],
            "edit_log": [
                {
                    "entry": e.entry_index,
                    "statement": str(e.statement),
                    "kind": e.kind,
                    "repairs": str(e.repairs) if e.repairs else None,
                }
                for e in self.edit_log
            ],
            "repaired_axioms": [
                [str(ax), owner] for ax, owner in self.repaired_axioms.items()
            ],
            "entries": [
                {
                    "relation": str(e.relation),
                    "actions": (
                        None
                        if e.actions is None
                        else [sorted(str(ax) for ax in a.axioms) for a in e.actions]
                    ),
                    "chosen_action": e.chosen_action,
                }
                for e in self.entries
            ],
        }

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_snapshot(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def from_snapshot(cls, snapshot: dict) -> "RepairSession":
        if snapshot.get("schema_version") != SNAPSHOT_VERSION:
            raise SessionStateError(
                f"unsupported snapshot version {snapshot.get('schema_version')!r}"
            )
        axioms, roles = parse_ontology(snapshot["base_ontology"])
        base = normalize_terminology(axioms, roles)
        missing = [_parse_statement(s) for s in snapshot["missing"]]
        session = cls(base, missing, _validate=False)
        session.verdicts = {
            _parse_statement(ax): v for ax, v in snapshot["verdicts"]
        }
        session.edit_log = [
            EditLogEntry(
                e["entry"],
                _parse_statement(e["statement"]),
                e["kind"],
                _parse_statement(e["repairs"]) if e.get("repairs") else None,
            )
            for e in snapshot["edit_log"]
        ]
        session.repaired_axioms = {
            _parse_statement(ax): owner for ax, owner in snapshot["repaired_axioms"]
        }
        for entry, stored in zip(session.entries, snapshot["entries"]):
            if stored["actions"] is not None:
                entry.actions = [
                    RepairingAction(frozenset(_parse_statement(s) for s in axioms_))
                    for axioms_ in stored["actions"]
                ]
            entry.chosen_action = stored["chosen_action"]
        session._rebuild_current()
        session._recompute_statuses()
        return session

    @classmethod
    def load(cls, path) -> "RepairSession":
        with open(path) as fh:
            return cls.from_snapshot(json.load(fh))


def _check_session_preconditions(base: Terminology, missing: list[IsaStatement]) -> None:
    if not missing:
        raise PreconditionViolatedError("no missing is-a relations to repair")
    limits = Limits.from_env()
    for m in missing:
        for n in (m.sub, m.sup):
            if not base.knows(n):
                raise PreconditionViolatedError(f"unknown concept name '{n}'")
            if not is_satisfiable(base, Atom(n), limits):
                raise PreconditionViolatedError(f"concept '{n}' is unsatisfiable")
        if entails_isa(base, m, limits):
            raise PreconditionViolatedError(f"'{m}' is already derivable")
    extended = base
    for m in missing:
        try:
            extended, _ = add_isa(extended, m)
        except WouldCreateCycleError:
            raise PreconditionViolatedError(
                f"'{m}' cannot be added as an acyclic definition"
            ) from None
    ok, unsat = coherence(extended, limits)
    if not ok:
        names = ", ".join(str(n) for n in unsat)
        raise PreconditionViolatedError(
            f"adding all missing relations makes unsatisfiable: {names}"
        )


def create_session(base: Terminology, missing: list[IsaStatement]) -> RepairSession:
    return RepairSession(base, missing)
