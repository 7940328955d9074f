#!/usr/bin/env python3
"""Schema check of shipped configs and suites, plus a cross-language check of the
fit JSON files: slopes recomputed from the CSV columns must match to 1e-9.

usage: check_configs.py <source dir>   (DEGENLAB_CLI enables the artifact check)
"""
import csv
import json
import math
import os
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
import numpy as np

FIT_TOL = 1e-9
failures = []


def fail(msg):
    failures.append(msg)
    print("FAIL", msg)


def load(p):
    with open(p) as f:
        return json.load(f)


def check_schemas(src):
    exp = load(src / "schemas" / "experiment.schema.json")
    suite = load(src / "schemas" / "suite.schema.json")
    jsonschema.Draft202012Validator.check_schema(exp)
    jsonschema.Draft202012Validator.check_schema(suite)
    ev = jsonschema.Draft202012Validator(exp)
    configs = sorted((src / "configs").rglob("*.json"))
    if len(configs) < 11:
        fail(f"expected at least 11 configs, found {len(configs)}")
    for p in configs:
        errs = list(ev.iter_errors(load(p)))
        for e in errs:
            fail(f"{p.relative_to(src)}: {e.message}")
    commands = {load(p)["command"] for p in configs}
    missing = set(exp["properties"]["command"]["enum"]) - commands
    if missing:
        fail(f"no shipped config for {sorted(missing)}")
    sv = jsonschema.Draft202012Validator(suite)
    for p in sorted((src / "suites").glob("*.json")):
        doc = load(p)
        for e in sv.iter_errors(doc):
            fail(f"{p.relative_to(src)}: {e.message}")
        for entry in doc.get("entries", []):
            if not (p.parent / entry["config"]).is_file():
                fail(f"{p.relative_to(src)}: missing config {entry['config']}")
    # the schema must reject what the runner rejects
    bad = load(src / "configs" / "vpnorm.json")
    bad["sweep"]["max_len"] = 13
    if ev.is_valid(bad):
        fail("schema accepts max_len 13")
    bad = load(src / "configs" / "solve.json")
    del bad["grid"]
    if ev.is_valid(bad):
        fail("schema accepts a solve config without a grid")
    print(f"schemas: {len(configs)} configs checked")


def read_csv(p):
    with open(p, newline="") as f:
        return list(csv.DictReader(f))


def slope(x, y):
    x, y = np.asarray(x, float), np.asarray(y, float)
    return float(np.polyfit(x, y, 1)[0])


def compare(name, fit_path, x, y):
    rec = load(fit_path)
    s = slope(x, y)
    d = abs(s - rec["slope"])
    print(f"{name}: recomputed {s:.12g} recorded {rec['slope']:.12g} diff {d:.2e}")
    if not d <= FIT_TOL or rec["n"] != len(x):
        fail(f"{name}: slope mismatch {d}")


def run(cli, cfg, out):
    cmd = load(cfg)["command"]
    r = subprocess.run([cli, cmd, "--config", str(cfg), "--out", str(out)], capture_output=True, text=True)
    if r.returncode not in (0, 2):
        fail(f"{cfg.name}: exit {r.returncode}: {r.stderr.strip()}")
        return False
    return True


def check_fits(src, cli):
    tmp = pathlib.Path(tempfile.mkdtemp(prefix="degenlab_fits_"))
    # strichartz: log2 of the per-k maximum norm against k
    if run(cli, src / "configs" / "strichartz.json", tmp / "s"):
        rows = read_csv(tmp / "s" / "strichartz.csv")
        best = {}
        for r in rows:
            best[int(r["k"])] = max(best.get(int(r["k"]), 0.0), float(r["norm"]))
        ks = sorted(best)
        compare("strichartz", tmp / "s" / "strichartz_fit.json", ks, [math.log2(best[k]) for k in ks])
    # kernel decay on a fast sweep
    cfg = load(src / "configs" / "kernel_decay.json")
    cfg["sweep"] = {"k_values": [-4, -3, -2], "t_values": [2, 4, 8], "k_fixed": -3, "t_fixed": 4}
    (tmp / "k.json").write_text(json.dumps(cfg))
    if run(cli, tmp / "k.json", tmp / "k"):
        rows = read_csv(tmp / "k" / "kernel.csv")
        at_k = [r for r in rows if int(r["k"]) == -3]
        compare("kernel t-fit", tmp / "k" / "fit_t.json", [math.log2(float(r["t"])) for r in at_k],
                [math.log2(float(r["sup_abs_K"])) for r in at_k])
        at_t = [r for r in rows if float(r["t"]) == 4.0]
        compare("kernel k-fit", tmp / "k" / "fit_k.json", [int(r["k"]) for r in at_t],
                [math.log2(float(r["sup_abs_K"])) for r in at_t])
    # rho_1 against eps
    cfg = load(src / "configs" / "picard.json")
    cfg["sweep"].pop("bisect")
    cfg["sweep"]["epsilon"] = 32
    (tmp / "p.json").write_text(json.dumps(cfg))
    if run(cli, tmp / "p.json", tmp / "p"):
        rows = read_csv(tmp / "p" / "eps_scaling.csv")
        compare("picard eps-fit", tmp / "p" / "eps_fit.json", [math.log2(float(r["eps"])) for r in rows],
                [math.log2(float(r["rho1_linf"])) for r in rows])


def main():
    src = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else ".").resolve()
    check_schemas(src)
    cli = os.environ.get("DEGENLAB_CLI")
    if cli:
        check_fits(src, cli)
    else:
        print("DEGENLAB_CLI not set; fit cross-check skipped")
    if failures:
        print(f"{len(failures)} failure(s)")
        return 1
    print("ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
