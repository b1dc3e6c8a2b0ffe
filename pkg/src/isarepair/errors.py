"""Error taxonomy shared by the engine, session layer, CLI and HTTP service.

Every error carries a stable machine-readable ``code`` so that the CLI can map
it to an exit status and the service can put it in a response body.
"""

from __future__ import annotations


class IsaRepairError(Exception):
    """Base class for all domain errors."""

    code = "error"


class MultipleDefinitionError(IsaRepairError):
    code = "multiple_definition"

    def __init__(self, name: str):
        super().__init__(f"concept '{name}' has more than one definition")
        self.name = name


class CyclicDefinitionError(IsaRepairError):
    code = "cyclic_definition"

    def __init__(self, cycle: list[str]):
        super().__init__("cyclic definitions: " + " -> ".join(cycle))
        self.cycle = cycle


class UnknownNameError(IsaRepairError):
    code = "unknown_name"

    def __init__(self, name: str):
        super().__init__(f"unknown concept name '{name}'")
        self.name = name


class UnknownRoleError(IsaRepairError):
    code = "unknown_role"

    def __init__(self, role: str):
        super().__init__(f"role '{role}' is not declared")
        self.role = role


class WouldCreateCycleError(IsaRepairError):
    """The requested is-a addition cannot be encoded as an acyclic terminology."""

    code = "would_create_cycle"

    def __init__(self, sub: str, sup: str):
        super().__init__(
            f"adding '{sub} <= {sup}' would create a definitional cycle"
        )
        self.sub = sub
        self.sup = sup


class AlreadyEntailedError(IsaRepairError):
    code = "already_entailed"

    def __init__(self, statement: str):
        super().__init__(f"'{statement}' is already derivable, nothing to repair")
        self.statement = statement


class PreconditionViolatedError(IsaRepairError):
    code = "precondition_violated"

    def __init__(self, which: str):
        super().__init__(f"precondition violated: {which}")
        self.which = which


class ResourceLimitError(IsaRepairError):
    code = "resource_limit"


class ConflictingVerdictError(IsaRepairError):
    code = "conflicting_verdict"

    def __init__(self, statement: str, old: str, new: str):
        super().__init__(
            f"'{statement}' was validated {old}; revalidating {new} requires a revoke"
        )
        self.statement = statement


class ChoiceOutsideSetsError(IsaRepairError):
    code = "choice_outside_sets"

    def __init__(self, which: str, chosen: str):
        super().__init__(f"chosen {which} concept '{chosen}' is outside the {which} set")
        self.which = which
        self.chosen = chosen


class NothingToRevokeError(IsaRepairError):
    code = "nothing_to_revoke"

    def __init__(self, relation: str):
        super().__init__(f"no applied edits to revoke for '{relation}'")
        self.relation = relation


class SessionStateError(IsaRepairError):
    code = "session_state"
