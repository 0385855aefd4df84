"""The command-line interface on the shipped fixtures.

Runs the extract -> synth -> verify-equal pipeline in-process and shows
the flow / focussed-set commands, the rewrite subcommand and the fixture
generator.
"""

import json
import pathlib
import tempfile

from pauliflow.cli import run

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
PAPER = str(FIXTURES / "worked-example.json")


def cli(*argv):
    print(f"$ pauliflow {' '.join(argv)}")
    code = run(list(argv))
    print(f"(exit {code})\n")
    return code


cli("--format", "table", "flow", "find", PAPER)
cli("--format", "table", "fsets", PAPER)

with tempfile.TemporaryDirectory() as tmp:
    dag_path = f"{tmp}/dag.json"
    circ_path = f"{tmp}/circ.json"
    import contextlib
    import io

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        run(["extract", PAPER])
    pathlib.Path(dag_path).write_text(buf.getvalue())
    print(f"extracted Pddag with {len(json.loads(buf.getvalue())['nodes'])} nodes")

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        run(["synth", dag_path, "--lower-exp"])
    pathlib.Path(circ_path).write_text(buf.getvalue())
    print(f"synthesized {len(json.loads(buf.getvalue())['gates'])} gates")

    cli("verify-equal", PAPER, circ_path)
    cli("rewrite", "lc", PAPER, "--at", "d")

cli("flow", "find", str(FIXTURES / "no-flow.json"))  # exits 1: no Pauli flow
cli("gen", "--vertices", "6", "--seed", "7")
