"""Runs the CLI on fixtures and a bench manifest, validating every report against the schema."""
import json
import os
import subprocess
import sys

import jsonschema

cli, schema_path, fixtures, work = sys.argv[1:5]
os.makedirs(work, exist_ok=True)
env = dict(os.environ, SDPRELAX_FIXTURES=fixtures)
schema = json.load(open(schema_path))
failures = []


def check(cond, what):
    if not cond:
        failures.append(what)
        print("FAIL", what)


def run(args):
    return subprocess.run([cli] + args, env=env, capture_output=True, text=True, cwd=work)


def validate(doc, what):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as e:
        check(False, f"{what}: {e.message}")


def strip(doc):
    doc = dict(doc)
    doc.pop("timings", None)
    return doc


commands = [
    ["maxcut", "--file", "petersen.edges", "--baselines", "greedy,sweep,brute"],
    ["maxcut", "--gen", "er:n=20,p=0.3", "--seed", "3", "--cuts", "hybrid", "--budget", "10", "--batch", "5"],
    ["maxcut", "--file", "berlin52.tsp", "--sdp-ref", "none"],
    ["spca", "identity3.csv", "--k", "1"],
    ["spca", "--synthetic", "--k", "4,4", "--seed", "2"],
    ["spca", "pitprops.csv", "--k", "5,2,2", "--sdp-ref", "none"],
    ["theta", "--file", "c5.edges"],
    ["theta", "--gen", "regular:n=12,d=3", "--seed", "1", "--cuts", "oracle", "--budget", "20", "--batch", "10"],
]
for args in commands:
    what = " ".join(args)
    first = run(args)
    check(first.returncode in (0, 2), f"{what}: exit {first.returncode} {first.stderr.strip()}")
    if first.returncode not in (0, 2):
        continue
    doc = json.loads(first.stdout)
    validate(doc, what)
    second = json.loads(run(args).stdout)
    check(strip(doc) == strip(second), f"{what}: reports differ between runs")

bad = run(["maxcut", "--file", "missing.edges"])
check(bad.returncode == 1, "missing file exits 1")
err = json.loads(bad.stderr)
check(err["error"]["type"] == "runtime_error", "missing file error type")

manifest = os.path.join(work, "manifest.txt")
with open(manifest, "w") as f:
    f.write("# smoke\n\nsdprelax maxcut --file c5.edges\ntheta --file c5.edges\nmaxcut --file missing.edges\n")
bench = run(["bench", manifest, "--out-dir", "bench-out", "--jobs", "2"])
check(bench.returncode == 3, f"bench with one bad row exits 3, got {bench.returncode}")
out = os.path.join(work, "bench-out")
for name in ("001.json", "002.json"):
    validate(json.load(open(os.path.join(out, name))), name)
check("error" in json.load(open(os.path.join(out, "003.json"))), "003.json holds the error")
rows = open(os.path.join(out, "aggregate.csv")).read().splitlines()
check(len(rows) == 4, "aggregate has a header and three rows")
check(rows[0].startswith("Graph,Optimality gap,LP Gap,LP cut value,Greedy,sweep,GW,OPT"), "aggregate header")

empty = os.path.join(work, "empty.txt")
open(empty, "w").write("# nothing\n")
e = run(["bench", empty, "--out-dir", "empty-out"])
check(e.returncode == 0, "empty manifest exits 0")
check(len(open(os.path.join(work, "empty-out", "aggregate.csv")).read().splitlines()) == 1, "empty aggregate")

print("ok" if not failures else f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
