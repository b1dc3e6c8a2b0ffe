"""Command-line interface: parse/check ontologies, run abduction, dump
completion graphs, replay scripted sessions and launch the HTTP service.

Output on stdout is byte-stable for fixed inputs and flags; timings and
progress go to stderr only.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import click

from . import __version__
from .abduction import (
    AbductionReport,
    expand_alternatives,
    run_abduction,
)
from .errors import IsaRepairError
from .hierarchy import hierarchy_edges
from .model import ConceptName, IsaStatement, normalize_terminology
from .parser import ParseError, parse_concept, parse_missing, parse_ontology
from .session import CORRECT, INCORRECT, RepairSession, create_session
from .tableau import build_completion_graph, coherence, entails_isa, render_graph

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2

REPORT_SCHEMA_VERSION = 1


def _load_terminology(path: str):
    text = Path(path).read_text()
    axioms, roles = parse_ontology(text)
    return normalize_terminology(axioms, roles)


def _fail(message: str, code: int = EXIT_INPUT) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Repair missing is-a relations in acyclic ALC terminologies."""


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

@main.command()
@click.argument("ontology", type=click.Path(exists=True))
def check(ontology: str) -> None:
    """Parse, normalize and report acyclicity and coherence."""

    try:
        t = _load_terminology(ontology)
    except (ParseError, IsaRepairError) as exc:
        _fail(str(exc))
        return
    ok, unsat = coherence(t)
    defined = sum(1 for n, _ in t.definitions)
    primitives = sum(1 for n in t.primitive_names if not n.bar)
    click.echo(f"definitions: {defined}")
    click.echo(f"primitive names: {primitives}")
    click.echo(f"roles: {len(t.roles)}")
    if ok:
        click.echo("coherent: yes")
    else:
        click.echo("coherent: no")
        for n in unsat:
            click.echo(f"unsatisfiable: {n}")
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


# ---------------------------------------------------------------------------
# repair
# ---------------------------------------------------------------------------

def _report_doc(
    report: AbductionReport,
    ontology: str,
    missing_path: str,
    optimized: bool,
    alternatives: dict[str, list[list[str]]] | None,
) -> dict:
    doc = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "ontology": ontology,
        "missing": missing_path,
        "variant": "optimized" if optimized else "basic",
        "per_relation": [
            {
                "relation": str(m),
                "actions": [sorted(str(ax) for ax in a.axioms) for a in r.actions],
                "discarded_incoherent": [
                    sorted(str(ax) for ax in a.axioms) for a in r.discarded_incoherent
                ],
                "discarded_unsound": [
                    sorted(str(ax) for ax in a.axioms) for a in r.discarded_unsound
                ],
                "stats": {
                    "nodes": r.stats.node_count,
                    "leaves": r.stats.leaf_count,
                    "open_leaves": r.stats.open_leaf_count,
                    "candidates": r.stats.candidate_count,
                    "truncated": r.stats.truncated,
                },
            }
            for m, r in report.per_relation.items()
        ],
        "combined": [sorted(str(ax) for ax in a.axioms) for a in report.combined],
        "combined_discarded": [
            sorted(str(ax) for ax in a.axioms) for a in report.discarded_incoherent
        ],
        "stats": report.stats,
    }
    if alternatives is not None:
        doc["alternatives"] = alternatives
    return doc


def _solutions_csv(doc: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["kind", "relation", "index", "axioms"])
    for row in doc["per_relation"]:
        for i, axioms in enumerate(row["actions"]):
            writer.writerow(["per-relation", row["relation"], i, "; ".join(axioms)])
    for i, axioms in enumerate(doc["combined"]):
        writer.writerow(["combined", "", i, "; ".join(axioms)])
    return buf.getvalue()


@main.command()
@click.argument("ontology", type=click.Path(exists=True))
@click.argument("missing", type=click.Path(exists=True))
@click.option("--optimized", is_flag=True, help="Use the per-node closure-set variant.")
@click.option("--expand-alternatives", "expand", is_flag=True, help="Also list source/target alternatives per combined solution.")
@click.option("--max-actions", default=10_000, show_default=True, help="Cap on candidate actions per relation.")
@click.option("--out", type=click.Path(), default=None, help="Write a JSON report and a CSV table to OUT(.json/.csv).")
@click.option("--figures", type=click.Path(), default=None, help="Render completion-graph and hierarchy figures into this directory.")
def repair(
    ontology: str,
    missing: str,
    optimized: bool,
    expand: bool,
    max_actions: int,
    out: str | None,
    figures: str | None,
) -> None:
    """Generate repairing actions for every missing relation plus combined solutions."""

    try:
        t = _load_terminology(ontology)
        missing_list = parse_missing(Path(missing).read_text())
        report = run_abduction(t, missing_list, optimized=optimized, max_candidates=max_actions)
    except (ParseError, IsaRepairError) as exc:
        _fail(str(exc))
        return

    alternatives: dict[str, list[list[str]]] | None = None
    if expand:
        alternatives = {}
        for act in report.combined:
            alternatives[str(act)] = [
                sorted(str(ax) for ax in alt.axioms)
                for alt in expand_alternatives(t, act)
            ]

    for m, r in report.per_relation.items():
        click.echo(f"missing: {m}")
        for i, act in enumerate(r.actions, start=1):
            click.echo(f"  action {i}: {act}")
        click.echo(f"  discarded as incoherence-introducing: {len(r.discarded_incoherent)}")
    click.echo(f"combined solutions: {len(report.combined)}")
    for i, act in enumerate(report.combined, start=1):
        click.echo(f"  solution {i}: {act}")
        if alternatives is not None:
            for alt in alternatives[str(act)]:
                alt_text = "{" + ", ".join(alt) + "}"
                if alt_text != str(act):
                    click.echo(f"    alternative: {alt_text}")

    doc = _report_doc(report, ontology, missing, optimized, alternatives)
    if out:
        out_path = Path(out)
        json_path = out_path.with_suffix(".json") if out_path.suffix != ".json" else out_path
        json_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        csv_path = json_path.with_suffix(".csv")
        csv_path.write_text(_solutions_csv(doc))
        click.echo(f"report written to {json_path} and {csv_path}", err=True)

    if figures:
        from .figures import render_completion_graph, render_hierarchy
        from .model import And, Atom, Not

        fig_dir = Path(figures)
        fig_dir.mkdir(parents=True, exist_ok=True)
        for i, m in enumerate(report.per_relation, start=1):
            g = build_completion_graph(t, And(Atom(m.sub), Not(Atom(m.sup))))
            render_completion_graph(
                g, fig_dir / f"completion_{i}.png", title=f"{m.sub} and not {m.sup}"
            )
        edges = hierarchy_edges(t, missing_unrepaired=missing_list)
        render_hierarchy(
            [str(n) for n in t.original_names()],
            edges,
            fig_dir / "hierarchy.png",
            title="named-concept hierarchy",
        )
        click.echo(f"figures written to {fig_dir}", err=True)

    sys.exit(EXIT_OK if report.combined else EXIT_FAIL)


# ---------------------------------------------------------------------------
# graph
# ---------------------------------------------------------------------------

@main.command()
@click.argument("ontology", type=click.Path(exists=True))
@click.argument("expression")
@click.option("--render", "render_path", type=click.Path(), default=None, help="Also render the tree to this image file.")
def graph(ontology: str, expression: str, render_path: str | None) -> None:
    """Dump the full completion graph for a concept expression."""

    try:
        t = _load_terminology(ontology)
        c = parse_concept(expression, t.roles)
        g = build_completion_graph(t, c)
    except (ParseError, IsaRepairError) as exc:
        _fail(str(exc))
        return
    click.echo(render_graph(g), nl=False)
    if render_path:
        from .figures import render_completion_graph

        render_completion_graph(g, render_path, title=expression)
        click.echo(f"figure written to {render_path}", err=True)


# ---------------------------------------------------------------------------
# session replay
# ---------------------------------------------------------------------------

@main.group()
def session() -> None:
    """Scripted session workflows."""


def _parse_script_statement(text: str, what: str) -> IsaStatement:
    parts = text.split("<=")
    if len(parts) != 2:
        raise ValueError(f"bad {what} {text!r}; expected 'A <= B'")
    return IsaStatement(ConceptName(parts[0].strip()), ConceptName(parts[1].strip()))


@session.command()
@click.argument("script", type=click.Path(exists=True))
@click.option("--save", "save_path", type=click.Path(), default=None, help="Write the end-state snapshot to this file.")
def replay(script: str, save_path: str | None) -> None:
    """Execute a scripted run; print the final status; fail on unmet expectations.

    \b
    Script lines ('#' comments):
      ontology <path>                    relative to the script file
      missing <path>
      generate <A> <= <B> [optimized]
      validate <A> <= <B> correct|incorrect
      repair <A> <= <B> of <C> <= <D> with <S> <= <T>
      revoke <C> <= <D>
      expect repaired|unrepaired <C> <= <D>
      expect entailed|not-entailed <A> <= <B>
    """

    script_path = Path(script)
    base_dir = script_path.parent
    sess: RepairSession | None = None
    ontology_path: Path | None = None
    missing_list = None
    failures: list[str] = []

    try:
        for lineno, raw in enumerate(script_path.read_text().splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            word, _, rest = line.partition(" ")
            rest = rest.strip()
            if word == "ontology":
                ontology_path = base_dir / rest
            elif word == "missing":
                if ontology_path is None:
                    raise ValueError("missing before ontology")
                t = _load_terminology(str(ontology_path))
                missing_list = parse_missing((base_dir / rest).read_text())
                sess = create_session(t, missing_list)
            elif sess is None:
                raise ValueError(f"line {lineno}: session not loaded yet")
            elif word == "generate":
                optimized = rest.endswith(" optimized")
                if optimized:
                    rest = rest[: -len(" optimized")].strip()
                relation = _parse_script_statement(rest, "relation")
                sess.generate_actions(sess.entry_index(relation), optimized=optimized, force=True)
            elif word == "validate":
                body, _, verdict = rest.rpartition(" ")
                if verdict not in (CORRECT, INCORRECT):
                    raise ValueError(f"line {lineno}: bad verdict {verdict!r}")
                sess.validate(_parse_script_statement(body, "axiom"), verdict)
            elif word == "repair":
                axiom_text, _, tail = rest.partition(" of ")
                relation_text, _, choice_text = tail.partition(" with ")
                axiom = _parse_script_statement(axiom_text, "axiom")
                relation = _parse_script_statement(relation_text, "relation")
                choice = _parse_script_statement(choice_text, "choice")
                sess.repair_axiom(
                    sess.entry_index(relation), axiom, choice.sub, choice.sup
                )
            elif word == "revoke":
                relation = _parse_script_statement(rest, "relation")
                sess.revoke(sess.entry_index(relation))
            elif word == "expect":
                kind, _, target = rest.partition(" ")
                statement = _parse_script_statement(target, "statement")
                if kind in ("repaired", "unrepaired"):
                    entry = sess.entries[sess.entry_index(statement)]
                    if entry.status != kind:
                        failures.append(
                            f"line {lineno}: expected {statement} {kind}, is {entry.status}"
                        )
                elif kind in ("entailed", "not-entailed"):
                    holds = entails_isa(sess.current, statement)
                    if holds != (kind == "entailed"):
                        failures.append(
                            f"line {lineno}: expected {statement} {kind}"
                        )
                else:
                    raise ValueError(f"line {lineno}: bad expectation {kind!r}")
            else:
                raise ValueError(f"line {lineno}: unknown command {word!r}")
    except (ParseError, IsaRepairError, ValueError, OSError) as exc:
        _fail(str(exc))
        return

    if sess is None:
        _fail("script did not load a session")
        return

    status = sess.status()
    for entry in status.entries:
        click.echo(f"{entry['relation']}: {entry['status']}")
    click.echo(f"edits: {', '.join(status.edits) if status.edits else '(none)'}")
    for f in failures:
        click.echo(f"expectation failed: {f}", err=True)
    if save_path:
        sess.save(save_path)
        click.echo(f"snapshot written to {save_path}", err=True)
    sys.exit(EXIT_OK if not failures else EXIT_FAIL)


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------

@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8642, show_default=True)
@click.option("--fixtures", type=click.Path(exists=True), default=None, help="Directory for ontology/missing paths in create requests.")
@click.option("--data-dir", type=click.Path(), default=None, help="Directory for session snapshots.")
@click.option("--ui", "ui_dir", type=click.Path(exists=True), default=None, help="Serve a built browser UI from this directory under /ui.")
def serve(host: str, port: int, fixtures: str | None, data_dir: str | None, ui_dir: str | None) -> None:
    """Start the local HTTP service."""

    import uvicorn

    from .service import create_app

    app = create_app(fixture_dir=fixtures, data_dir=data_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
