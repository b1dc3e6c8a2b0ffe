from __future__ import annotations

import pytest

from isarepair.errors import (
    ChoiceOutsideSetsError,
    ConflictingVerdictError,
    NothingToRevokeError,
    PreconditionViolatedError,
    SessionStateError,
)
from isarepair.model import isa, name
from isarepair.session import (
    CORRECT,
    INCORRECT,
    REPAIRED,
    UNREPAIRED,
    RepairSession,
    create_session,
)
from isarepair.tableau import entails_isa

MY_PIZZA = isa("MyPizza", "FishyMeatyPizza")
FRUTTI = isa("MyFruttiDiMare", "NonVegetarianPizza")

AT_FISH = isa("AnchoviesTopping", "FishTopping")
AT_MEAT = isa("AnchoviesTopping", "MeatTopping")
PHT_MEAT = isa("ParmaHamTopping", "MeatTopping")
PHT_HAM = isa("ParmaHamTopping", "HamTopping")


@pytest.fixture
def session(pizza, pizza_missing) -> RepairSession:
    return create_session(pizza, list(pizza_missing))


def _run_example(session: RepairSession) -> RepairSession:
    """The full scripted run: repair MyFruttiDiMare, then MyPizza."""

    frutti = session.entry_index(FRUTTI)
    my_pizza = session.entry_index(MY_PIZZA)
    session.generate_actions(frutti)
    session.validate(AT_MEAT, INCORRECT)
    session.validate(AT_FISH, CORRECT)
    session.repair_axiom(frutti, AT_FISH, name("AnchoviesTopping"), name("FishTopping"))
    session.generate_actions(my_pizza)
    session.validate(PHT_MEAT, CORRECT)
    session.repair_axiom(my_pizza, PHT_MEAT, name("ParmaHamTopping"), name("HamTopping"))
    return session


# ---------------------------------------------------------------------------
# creation
# ---------------------------------------------------------------------------

def test_create_session_fresh(session):
    assert [e.relation for e in session.entries] == [MY_PIZZA, FRUTTI]
    assert all(e.status == UNREPAIRED for e in session.entries)
    assert all(e.actions is None for e in session.entries)
    assert session.verdicts == {}


def test_create_session_rejects_entailed(pizza):
    with pytest.raises(PreconditionViolatedError):
        create_session(pizza, [isa("HamTopping", "MeatTopping")])


def test_create_session_rejects_empty(pizza):
    with pytest.raises(PreconditionViolatedError):
        create_session(pizza, [])


# ---------------------------------------------------------------------------
# generation and validation propagation
# ---------------------------------------------------------------------------

def test_generate_fresh_my_pizza(session):
    idx = session.entry_index(MY_PIZZA)
    session.generate_actions(idx)
    assert len(session.entries[idx].actions) == 3


def test_generate_after_incorrect_verdict_drops_action(session):
    frutti = session.entry_index(FRUTTI)
    my_pizza = session.entry_index(MY_PIZZA)
    session.generate_actions(frutti)
    session.validate(AT_MEAT, INCORRECT)
    session.generate_actions(my_pizza)
    actions = session.entries[my_pizza].actions
    assert len(actions) == 2
    assert all(AT_MEAT not in a.axioms for a in actions)


def test_validate_incorrect_propagates_across_entries(session):
    frutti = session.entry_index(FRUTTI)
    my_pizza = session.entry_index(MY_PIZZA)
    session.generate_actions(my_pizza)
    session.generate_actions(frutti)
    assert len(session.entries[frutti].actions) == 3
    session.validate(AT_MEAT, INCORRECT)
    assert len(session.entries[frutti].actions) == 2
    assert len(session.entries[my_pizza].actions) == 2


def test_validate_correct_edits_ontology(session):
    frutti = session.entry_index(FRUTTI)
    session.generate_actions(frutti)
    session.validate(AT_FISH, CORRECT)
    assert entails_isa(session.current, AT_FISH)
    assert [e.statement for e in session.edit_log] == [AT_FISH]


def test_validate_same_verdict_idempotent(session):
    frutti = session.entry_index(FRUTTI)
    session.generate_actions(frutti)
    session.validate(AT_FISH, CORRECT)
    session.validate(AT_FISH, CORRECT)
    assert len(session.edit_log) == 1


def test_validate_conflicting_verdict_rejected(session):
    frutti = session.entry_index(FRUTTI)
    session.generate_actions(frutti)
    session.validate(AT_FISH, CORRECT)
    with pytest.raises(ConflictingVerdictError):
        session.validate(AT_FISH, INCORRECT)


def test_validate_unknown_axiom_rejected(session):
    with pytest.raises(SessionStateError):
        session.validate(isa("Pizza", "PizzaTopping"), CORRECT)


# ---------------------------------------------------------------------------
# repairing with source/target choices
# ---------------------------------------------------------------------------

def test_repair_identity_choice(session):
    frutti = session.entry_index(FRUTTI)
    session.generate_actions(frutti)
    session.validate(AT_FISH, CORRECT)
    session.repair_axiom(frutti, AT_FISH, name("AnchoviesTopping"), name("FishTopping"))
    assert session.entries[frutti].status == REPAIRED
    assert entails_isa(session.current, FRUTTI)


def test_repair_requires_correct_verdict(session):
    frutti = session.entry_index(FRUTTI)
    session.generate_actions(frutti)
    with pytest.raises(PreconditionViolatedError):
        session.repair_axiom(
            frutti, AT_FISH, name("AnchoviesTopping"), name("FishTopping")
        )


def test_repair_choice_outside_sets(session):
    frutti = session.entry_index(FRUTTI)
    session.generate_actions(frutti)
    session.validate(AT_FISH, CORRECT)
    with pytest.raises(ChoiceOutsideSetsError):
        session.repair_axiom(frutti, AT_FISH, name("AnchoviesTopping"), name("Pizza"))


def test_repair_more_informative_choice(session):
    _run_example(session)
    # the chosen replacement, not the plain axiom, is in the ontology edits
    edits = [str(e.statement) for e in session.edit_log]
    assert edits == ["AnchoviesTopping <= FishTopping", "ParmaHamTopping <= HamTopping"]
    assert entails_isa(session.current, PHT_MEAT)
    assert entails_isa(session.current, PHT_HAM)


def test_example_run_end_state(session):
    _run_example(session)
    assert all(e.status == REPAIRED for e in session.entries)
    assert entails_isa(session.current, MY_PIZZA)
    assert entails_isa(session.current, FRUTTI)
    status = session.status()
    assert status.repaired_count == 2
    assert status.unrepaired_count == 0
    assert status.edits == [
        "AnchoviesTopping <= FishTopping",
        "ParmaHamTopping <= HamTopping",
    ]


def test_no_action_ever_contains_incorrect_axiom(session):
    _run_example(session)
    for entry in session.entries:
        for act in entry.actions or []:
            assert all(session.verdicts.get(ax) != INCORRECT for ax in act.axioms)


# ---------------------------------------------------------------------------
# revoke
# ---------------------------------------------------------------------------

def test_revoke_restores_ontology(session):
    frutti = session.entry_index(FRUTTI)
    session.generate_actions(frutti)
    session.validate(AT_FISH, CORRECT)
    session.repair_axiom(frutti, AT_FISH, name("AnchoviesTopping"), name("FishTopping"))
    session.revoke(frutti)
    assert session.current == session.base
    assert session.entries[frutti].status == UNREPAIRED
    assert not entails_isa(session.current, AT_FISH)
    # verdicts survive revocation
    assert session.verdicts[AT_FISH] == CORRECT


def test_revoke_twice_rejected(session):
    frutti = session.entry_index(FRUTTI)
    session.generate_actions(frutti)
    session.validate(AT_FISH, CORRECT)
    session.revoke(frutti)
    with pytest.raises(NothingToRevokeError):
        session.revoke(frutti)


def test_revoke_one_entry_keeps_other_edits(session):
    _run_example(session)
    frutti = session.entry_index(FRUTTI)
    my_pizza = session.entry_index(MY_PIZZA)
    session.revoke(frutti)
    assert session.entries[frutti].status == UNREPAIRED
    # MyPizza's repair edit is untouched
    assert entails_isa(session.current, PHT_HAM)
    assert not entails_isa(session.current, AT_FISH)
    assert session.entries[my_pizza].status == REPAIRED


def test_revoke_all_restores_base(session):
    _run_example(session)
    session.revoke(session.entry_index(FRUTTI))
    session.revoke(session.entry_index(MY_PIZZA))
    assert session.current == session.base


# ---------------------------------------------------------------------------
# determinism and persistence
# ---------------------------------------------------------------------------

def test_replay_is_deterministic(pizza, pizza_missing):
    a = _run_example(create_session(pizza, list(pizza_missing)))
    b = _run_example(create_session(pizza, list(pizza_missing)))
    assert a.status() == b.status()
    assert a.current == b.current


def test_snapshot_round_trip(session, tmp_path):
    _run_example(session)
    path = tmp_path / "session.json"
    session.save(path)
    loaded = RepairSession.load(path)
    assert loaded.status() == session.status()
    assert loaded.current == session.current
    assert loaded.base == session.base
    # byte-level round trip of the snapshot itself
    path2 = tmp_path / "again.json"
    loaded.save(path2)
    assert path.read_text() == path2.read_text()
