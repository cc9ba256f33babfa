"""Runs the CLI over the bundled examples.

  schemas: every JSON report (and every config) validates against its schema document.
  determinism: repeated runs, with different thread counts, give byte-identical artifacts.
  exit-codes: config, numeric and acceptance failures map to exit codes 1, 2 and 3.
"""

import argparse
import json
import os
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

# caustic forms need Q != 0
NO_CAUSTIC = {"horosphere.json"}


def run(cli, args, threads=None, check=True):
    env = dict(os.environ)
    if threads is not None:
        env["FLATFRONT_THREADS"] = str(threads)
    p = subprocess.run([cli] + args, capture_output=True, env=env)
    if check and p.returncode != 0:
        raise SystemExit(f"{' '.join(args)}: exit {p.returncode}\n{p.stderr.decode()}")
    return p


def load_schemas(schema_dir):
    resources = []
    schemas = {}
    for path in sorted(schema_dir.glob("*.schema.json")):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], Resource.from_contents(doc)))
        schemas[path.name.split(".")[0]] = doc
    return Registry().with_resources(resources), schemas


def jobs(configs, out):
    """(schema name, args, artifact paths) for every report the CLI writes."""
    for cfg in configs:
        stem = cfg.stem
        yield "classify", ["classify", str(cfg), "-o", str(out / f"{stem}.classify.json")], []
        yield "flux", ["flux", str(cfg), "-o", str(out / f"{stem}.flux.json")], []
        if cfg.name not in NO_CAUSTIC:
            mesh = out / f"{stem}.caustic.obj"
            yield "caustic", ["caustic", str(cfg), "-o", str(out / f"{stem}.caustic.json"), "--mesh", str(mesh)], [mesh]
        csv = out / f"{stem}.slice.csv"
        yield "slice", ["slice", str(cfg), "-o", str(out / f"{stem}.slice.json"), "--csv", str(csv)], [csv]
        obj = out / f"{stem}.mesh.obj"
        yield None, ["mesh", str(cfg), "-o", str(obj)], [obj]
    for m, n in [(1, 2), (2, 1), (5, 3), (1, 3)]:
        stem = f"cycloid_{m}_{n}"
        svg, csv = out / f"{stem}.svg", out / f"{stem}.csv"
        yield "cycloid", ["cycloid", "--m", str(m), "--n", str(n), "--ode", "-o", str(out / f"{stem}.json"),
                          "--svg", str(svg), "--csv", str(csv)], [svg, csv]


def report_path(args):
    return pathlib.Path(args[args.index("-o") + 1])


def check_schemas(cli, data, schema_dir):
    registry, schemas = load_schemas(schema_dir)
    validators = {k: jsonschema.Draft202012Validator(v, registry=registry) for k, v in schemas.items()}
    configs = sorted(data.glob("*.json"))
    failures = 0
    for cfg in configs:
        errs = list(validators["config"].iter_errors(json.loads(cfg.read_text())))
        for e in errs:
            print(f"{cfg.name}: config schema: {e.message}")
        failures += len(errs)
    with tempfile.TemporaryDirectory() as tmp:
        out = pathlib.Path(tmp)
        count = 0
        for schema, args, _ in jobs(configs, out):
            run(cli, args)
            if schema is None:
                continue
            doc = json.loads(report_path(args).read_text())
            errs = list(validators[schema].iter_errors(doc))
            for e in errs[:3]:
                print(f"{' '.join(args[:2])}: {schema} schema: {e.message} at {list(e.absolute_path)}")
            failures += len(errs)
            count += 1
        summary = out / "verify.json"
        run(cli, ["verify", "--data", str(data), "-o", str(summary)])
        errs = list(validators["verify"].iter_errors(json.loads(summary.read_text())))
        failures += len(errs)
        count += 1
    print(f"{count} reports and {len(configs)} configs checked, {failures} schema errors")
    return failures == 0


def check_determinism(cli, data):
    configs = sorted(data.glob("*.json"))
    with tempfile.TemporaryDirectory() as tmp:
        roots = [pathlib.Path(tmp) / name for name in ("a", "b", "c")]
        for root, threads in zip(roots, (1, 4, 4)):
            root.mkdir()
            for _, args, _ in jobs(configs, root):
                run(cli, args, threads=threads)
            # stdout reports as well
            for cfg in configs:
                (root / f"{cfg.stem}.stdout.json").write_bytes(run(cli, ["classify", str(cfg)], threads).stdout)
        names = sorted(p.name for p in roots[0].iterdir())
        bad = []
        for name in names:
            blobs = [(r / name).read_bytes() for r in roots]
            if not (blobs[0] == blobs[1] == blobs[2]):
                bad.append(name)
        for name in bad:
            print(f"differs between runs: {name}")
        print(f"{len(names)} artifacts compared across 3 runs, {len(bad)} differ")
        return not bad


def check_exit_codes(cli, data):
    ok = True
    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        cases = {
            "syntax.json": ('{"name": "x", "G": "z", "omega": "z^", "ends": [0]}', 1),
            "both.json": ('{"name": "x", "G": "z", "omega": "1", "Gstar": "z", "ends": [0]}', 1),
            "dup.json": ('{"name": "x", "G": "z", "Gstar": "z/2", "ends": [0, [0, 0]]}', 1),
            "unknown.json": ('{"name": "x", "G": "z", "Gstar": "z/2", "ends": [0], "colour": 1}', 1),
            "irregular.json": ('{"name": "x", "G": "z", "Gstar": "1+z", "ends": [0]}', 2),
        }
        for name, (text, want) in cases.items():
            (tmp / name).write_text(text)
            got = run(cli, ["classify", str(tmp / name)], check=False).returncode
            if got != want:
                print(f"{name}: exit {got}, expected {want}")
                ok = False
        got = run(cli, ["frobnicate"], check=False).returncode
        if got != 1:
            print(f"unknown subcommand: exit {got}, expected 1")
            ok = False
        # an empty example directory fails the Schwarzian criterion
        empty = tmp / "empty"
        empty.mkdir()
        got = run(cli, ["verify", "--data", str(empty), "--only", "6"], check=False).returncode
        if got != 3:
            print(f"failing acceptance: exit {got}, expected 3")
            ok = False
        got = run(cli, ["slice", str(data / "nodes.json"), "--heights", "0.5"], check=False).returncode
        if got != 2:
            print(f"slice outside the asymptotic regime: exit {got}, expected 2")
            ok = False
    print("exit codes " + ("as documented" if ok else "WRONG"))
    return ok


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("mode", choices=["schemas", "determinism", "exit-codes"])
    ap.add_argument("--cli", required=True)
    ap.add_argument("--data", required=True, type=pathlib.Path)
    ap.add_argument("--schemas", type=pathlib.Path)
    a = ap.parse_args()
    if a.mode == "schemas":
        ok = check_schemas(a.cli, a.data, a.schemas)
    elif a.mode == "determinism":
        ok = check_determinism(a.cli, a.data)
    else:
        ok = check_exit_codes(a.cli, a.data)
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    main()
