#!/usr/bin/env python3
"""CLI contract: JSON outputs against schema/, CSV headers, exit codes, determinism."""
import csv
import io
import json
import os
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

CLI = sys.argv[1]
SCHEMAS = pathlib.Path(sys.argv[2])

failures = []


def load_registry():
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        resources.append((path.name, Resource.from_contents(json.loads(path.read_text()))))
    return Registry().with_resources(resources)


REGISTRY = load_registry()


def run(args, env=None, expect=0):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    proc = subprocess.run([CLI, *args], capture_output=True, text=True, env=full_env, timeout=240)
    if proc.returncode != expect:
        failures.append(f"{' '.join(args)}: exit {proc.returncode}, wanted {expect}\n{proc.stderr.strip()}")
    return proc


def check_json(name, args, schema, env=None):
    proc = run(args, env=env)
    if proc.returncode != 0:
        return None
    try:
        doc = json.loads(proc.stdout)
    except json.JSONDecodeError as err:
        failures.append(f"{name}: stdout is not JSON ({err})")
        return None
    schema_doc = json.loads((SCHEMAS / schema).read_text())
    validator = jsonschema.Draft202012Validator(schema_doc, registry=REGISTRY)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
    for err in errors[:3]:
        failures.append(f"{name}: {schema}: {'/'.join(map(str, err.path))}: {err.message}")
    print(f"{'ok  ' if not errors else 'FAIL'} {name}")
    return doc


def check_csv(name, args, header):
    proc = run(args)
    if proc.returncode != 0:
        return
    lines = [ln for ln in proc.stdout.splitlines() if ln and not ln.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(lines))))
    ok = rows and rows[0] == header and len(rows) > 1 and all(len(r) == len(header) for r in rows)
    if not ok:
        failures.append(f"{name}: csv header/shape mismatch: {rows[:2]}")
    print(f"{'ok  ' if ok else 'FAIL'} {name}")


with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)
    vugm = tmp / "vugm.json"
    vugm.write_text(json.dumps({"kind": "vugm", "mu": 1, "m": {"values": [1, 2], "probs": [0.5, 0.5]}}))
    mugm = tmp / "mugm.json"
    mugm.write_text(json.dumps({"kind": "mugm", "mu": 2, "m": {"values": [1, 3], "probs": [0.5, 0.5]}}))
    seed = tmp / "p3.txt"
    seed.write_text("0 1\n1 2\n")

    check_json("preset-list", ["preset-list"], "preset_list.schema.json")
    check_json("predict t-graph", ["predict", "--preset", "t-graph", "-t", "3"], "analytic_report.schema.json")
    check_json("predict stochastic", ["predict", "--spec", str(vugm), "-t", "4"], "analytic_report.schema.json")
    check_json("predict seed file", ["predict", "--spec", str(mugm), "--seed-file", str(seed), "-t", "2"],
               "analytic_report.schema.json")
    tree = check_json("generate", ["generate", "--preset", "vicsek", "--mu", "3", "-t", "2"], "tree.schema.json")
    if tree is not None and len(tree["edges"]) != tree["n"] - 1:
        failures.append("generate: edge count is not n-1")
    summary = run(["generate", "--preset", "t-graph", "-t", "2"]).stderr.strip().splitlines()
    if summary:
        doc = json.loads(summary[-1])
        validator = jsonschema.Draft202012Validator(json.loads((SCHEMAS / "tree_summary.schema.json").read_text()))
        if list(validator.iter_errors(doc)) or doc["n"] != 10 or doc["w"] != "117":
            failures.append(f"generate summary: {doc}")
    ident = check_json("verify-identities", ["verify-identities", "--preset", "vicsek", "--mu", "2", "-t", "2"],
                       "identity_report.schema.json")
    if ident is not None and not ident["passed"]:
        failures.append("verify-identities: vicsek did not pass")
    check_json("verify-ensemble", ["verify-ensemble", "--spec", str(vugm), "-t", "2", "-R", "200"],
               "ensemble_stats.schema.json")
    check_json("simulate", ["simulate", "--preset", "t-graph", "-t", "2", "--source", "0", "--target", "1",
                            "--trials", "2000"], "simulation.schema.json")
    check_json("sweep deterministic", ["sweep", "--preset", "t-graph", "--t-range", "1:4"], "sweep.schema.json")
    check_json("sweep stochastic", ["sweep", "--spec", str(vugm), "--t-range", "1:6"], "sweep.schema.json")
    check_json("sweep y1", ["sweep", "--preset", "y1", "--mu", "2", "--t-range", "1:5"], "sweep.schema.json")

    config = tmp / "config.json"
    config.write_text(json.dumps({"preset": "nu-fractal", "preset_params": {"nu": 2}, "t": 3}))
    config_schema = json.loads((SCHEMAS / "experiment_config.schema.json").read_text())
    jsonschema.Draft202012Validator(config_schema, registry=REGISTRY).validate(json.loads(config.read_text()))
    check_json("predict --config", ["--config", str(config), "predict"], "analytic_report.schema.json")

    check_csv("sweep csv", ["sweep", "--preset", "t-graph", "--t-range", "1:3", "--format", "csv"],
              ["t", "n", "w", "mfpt", "criticality"])
    check_csv("predict csv", ["predict", "--preset", "t-graph", "-t", "3", "--format", "csv"],
              ["family", "t", "n", "w", "mfpt", "kirchhoff", "criticality", "theta"])
    check_csv("simulate csv", ["simulate", "--preset", "t-graph", "-t", "2", "--source", "0", "--target", "1",
                               "--trials", "100", "--format", "csv"],
              ["n", "source", "target", "trials", "mean", "std_error", "exact", "z"])
    check_csv("verify-ensemble csv", ["verify-ensemble", "--spec", str(vugm), "-t", "2", "-R", "50",
                                      "--format", "csv"],
              ["quantity", "mean", "variance", "std_error", "replicates", "prediction", "z", "flagged"])

    # determinism across runs and thread counts
    base = ["verify-ensemble", "--spec", str(vugm), "-t", "3", "-R", "300", "--rng-seed", "77"]
    a = run(base + ["--threads", "1"]).stdout
    b = run(base + ["--threads", "1"]).stdout
    c = run(base + ["--threads", "3"]).stdout
    ok = a == b == c and a
    print(f"{'ok  ' if ok else 'FAIL'} ensemble determinism")
    if not ok:
        failures.append("verify-ensemble output depends on run or thread count")
    sim = ["simulate", "--preset", "t-graph", "-t", "2", "--source", "3", "--target", "0", "--trials", "10000",
           "--rng-seed", "5"]
    ok = run(sim + ["--threads", "1"]).stdout == run(sim + ["--threads", "2"]).stdout
    print(f"{'ok  ' if ok else 'FAIL'} simulate determinism")
    if not ok:
        failures.append("simulate output depends on thread count")
    g1 = run(["generate", "--spec", str(vugm), "-t", "4", "--rng-seed", "9"]).stdout
    g2 = run(["generate", "--spec", str(vugm), "-t", "4", "--rng-seed", "9"]).stdout
    g3 = run(["generate", "--spec", str(vugm), "-t", "4", "--rng-seed", "10"]).stdout
    ok = g1 == g2 and g1 != g3
    print(f"{'ok  ' if ok else 'FAIL'} generate seeding")
    if not ok:
        failures.append("generate is not a function of --rng-seed")

    # exit codes
    run(["generate", "--bogus"], expect=1)
    run(["predict"], expect=1)
    run(["predict", "--preset", "vicsek", "--mu", "1", "-t", "2"], expect=1)
    run(["generate", "--preset", "t-graph", "-t", "4"], env={"GROVETREE_MAX_N": "10"}, expect=3)
    run(["verify-ensemble", "--spec", str(mugm), "-t", "1", "-R", "20000"], expect=2)
    print("ok   exit codes" if not any("exit" in f for f in failures) else "FAIL exit codes")

if failures:
    print("\n".join(failures), file=sys.stderr)
    sys.exit(1)
print("cli contract: all checks passed")
