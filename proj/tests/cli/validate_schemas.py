"""Runs each subcommand at small sizes and validates its JSON against docs/schemas."""
import json
import pathlib
import subprocess
import sys

import jsonschema

cli, schemas = sys.argv[1], pathlib.Path(sys.argv[2])

runs = {
    "kernel-eval": [["--n", "4", "--s", "0.5", "--lattice", "0.5:2:3"], ["--family", "bessel_tw", "--lattice", "1:2:2"]],
    "converge": [["--n", "8,16", "--parts", "kernel", "--lattice", "0.5:2:3"], ["--n", "8", "--s", "-1.5", "--grid", "1e-5:40:4:12"]],
    "tails": [["--n", "8,16", "--r", "1,8", "--delta", "0.25,1"], ["--n", "8", "--r", "1e-9", "--delta", "1e-9"]],
    "sample": [["--n", "2", "--samples", "100"], ["--n", "3", "--s", "-1.5", "--beta", "1", "--samples", "50"]],
    "hellinger": [["--n", "200"], ["--n", "20", "--s", "0.5", "--s2", "0.5"]],
    "orbital": [["--n", "4", "--samples", "50", "--t", "0,0.5"]],
}

document = json.loads((schemas / "document.schema.json").read_text())
failures = 0
for command, variants in runs.items():
    summary_schema = json.loads((schemas / f"{command}.schema.json").read_text())
    for args in variants:
        proc = subprocess.run([cli, command, *args, "--format", "json"], capture_output=True, text=True)
        if proc.returncode not in (0, 3):
            print(f"{command} {args}: exit {proc.returncode}: {proc.stderr}")
            failures += 1
            continue
        doc = json.loads(proc.stdout)
        try:
            jsonschema.validate(doc, document)
            jsonschema.validate(doc["summary"], summary_schema)
            assert doc["command"] == command
            assert all(len(row) == len(doc["columns"]) for row in doc["rows"])
        except (jsonschema.ValidationError, AssertionError) as e:
            print(f"{command} {args}: {e}")
            failures += 1

print("schemas: all documents valid" if not failures else f"schemas: {failures} failure(s)")
sys.exit(1 if failures else 0)
