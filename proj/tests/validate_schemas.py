"""Runs CLI commands with --json and validates each report against its schema."""

import json
import pathlib
import subprocess
import sys

import jsonschema

cli, root = sys.argv[1], pathlib.Path(sys.argv[2])
schemas = root / "docs" / "schemas"
golden = root / "tests" / "golden"


def load(name):
    return json.loads((schemas / f"{name}.schema.json").read_text())


cases = [
    ("decompose", ["decompose", str(golden / "zero1x1.json")]),
    ("decompose", ["decompose", str(golden / "jordan_kronecker.json")]),
    ("decompose", ["decompose", "--real", str(golden / "quadratic.json")]),
    ("subspaces", ["subspaces", "--heights", "3,1", "--count"]),
    ("subspaces", ["subspaces", "--heights", "2,1", "--mults", "1,2", "--check", "--violating", "--trials", "20"]),
    ("turiel", ["turiel", "--signature", "2,1", "--show"]),
    ("distribution", ["distribution", "--signature", "2,2,1", "--all"]),
    ("product", ["product", "turiel:1", "flat:5x1,0x2"]),
    ("selftest", ["selftest", "--criteria", "4,9"]),
]

for path in [golden / "zero1x1.json", golden / "jordan_kronecker.json", golden / "quadratic.json"]:
    jsonschema.validate(json.loads(path.read_text()), load("pencil"))

failures = 0
for schema, args in cases:
    run = subprocess.run([cli, "--json", *args], capture_output=True, text=True)
    try:
        if run.returncode != 0:
            raise RuntimeError(f"exit {run.returncode}: {run.stderr.strip()}")
        jsonschema.validate(json.loads(run.stdout), load(schema))
        print(f"ok    {schema:13} {' '.join(args)}")
    except Exception as exc:  # report every case before failing
        failures += 1
        print(f"FAIL  {schema:13} {' '.join(args)}: {exc}")
sys.exit(1 if failures else 0)
