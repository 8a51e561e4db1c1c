"""Run every gevrey-kit command and validate its JSON report against schemas/."""

import json
import pathlib
import subprocess
import sys

import jsonschema

kit, schemas, samples = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])


def load(name):
    return json.loads((schemas / f"{name}.schema.json").read_text())


cases = [
    ("check-sector", ["--builtin", "riccati", "--theta", "0", "--gamma", "4.5"]),
    ("check-sector", ["--builtin", "riccati", "--theta", "3.14159"]),
    ("check-sector", ["--problem", str(samples / "coupled_pair.json")]),
    ("solve", ["--builtin", "riccati", "--eps", "0.1,0.05+0.02i", "--z", "0,0.05", "--I", "4"]),
    ("solve", ["--problem", str(samples / "coupled_pair.json"), "--eps", "0.1", "--z", "0.03"]),
    ("resum", ["--builtin", "riccati", "--eps", "0.05,0.1,0.2", "--z", "0.05"]),
    ("resum", ["--builtin", "riccati", "--eps", "-0.0275186+0.0961391i", "--theta", "1.8495794", "--z", "0.05"]),
    ("resum", ["--builtin", "riccati", "--eps", "0.1", "--precision", "quad"]),
    ("diagnose", ["--builtin", "riccati"]),
    ("diagnose", ["--norms", str(samples / "gevrey_norms.txt")]),
    ("diagnose", ["--problem", str(samples / "coupled_pair.json"), "--eps", "0.1", "--z", "0.03"]),
    ("validate-riccati", []),
]
errors = [
    ["solve", "--builtin", "riccati", "--eps", "-0.5"],
    ["diagnose", "--builtin", "riccati", "--I", "3"],
    ["check-sector"],
]

failed = 0
for command, args in cases:
    proc = subprocess.run([kit, command, *args], capture_output=True, text=True)
    try:
        jsonschema.validate(json.loads(proc.stdout), load(command))
        print(f"ok   {command} {' '.join(args)} (exit {proc.returncode})")
    except Exception as e:  # noqa: BLE001
        failed += 1
        print(f"FAIL {command} {' '.join(args)}: {e}")
for args in errors:
    proc = subprocess.run([kit, *args], capture_output=True, text=True)
    try:
        assert proc.returncode == 1, f"exit {proc.returncode}"
        jsonschema.validate(json.loads(proc.stdout), load("error"))
        print(f"ok   error report for {' '.join(args)}")
    except Exception as e:  # noqa: BLE001
        failed += 1
        print(f"FAIL error report for {' '.join(args)}: {e}")
for path in sorted(samples.glob("*.json")):
    try:
        jsonschema.validate(json.loads(path.read_text()), load("problem"))
        print(f"ok   problem file {path.name}")
    except Exception as e:  # noqa: BLE001
        failed += 1
        print(f"FAIL problem file {path.name}: {e}")

sys.exit(1 if failed else 0)
