"""Exit codes, determinism and batch mode of the command-line tool."""
import json
import os
import subprocess
import sys
import tempfile

tool, scenarios = sys.argv[1], sys.argv[2]
failures = []


def run(*args, env=None):
    return subprocess.run([tool, *args], capture_output=True, text=True, env=env)


def check(name, cond):
    print(("ok   " if cond else "FAIL ") + name)
    if not cond:
        failures.append(name)


a = run("sha1", f"{scenarios}/sha_klein_three_cyclic.json")
b = run("sha1", f"{scenarios}/sha_klein_three_cyclic.json")
check("sha1 exit 0", a.returncode == 0)
check("sha1 byte-identical reports", a.stdout == b.stdout and a.stdout)

r = run("counterexample-local", "--p", "13", "--q", "13")
doc = json.loads(r.stdout)
check("p = 13 period 2", doc["result"]["period"] == "2")
check("p = 13 divisibility 4", doc["result"]["index_divisibility"] == "4")

check("bad residue exits 1", run("counterexample-local", "--p", "5", "--q", "7").returncode == 1)
check("split-sim exits 0", run("split-sim", f"{scenarios}/split_klein.json").returncode == 0)
check("z4 split-sim exits 0", run("split-sim", f"{scenarios}/split_z4.json").returncode == 0)

env = dict(os.environ, TATEKIT_PRECISION="4")
t = json.loads(run("teichmuller", "--p", "5", "--alpha", "2", env=env).stdout)
check("TATEKIT_PRECISION honoured", t["result"]["value"] == "182")

obs = json.loads(run("tate-obstruction", f"{scenarios}/obstruction_obstructed.json").stdout)
check("obstructed scenario", obs["result"]["status"] == "OBSTRUCTED")

with tempfile.TemporaryDirectory() as out:
    r = run("--batch", f"{scenarios}/jobs", "--out", out)
    check("batch exits 0", r.returncode == 0)
    reports = sorted(os.listdir(out))
    check("batch writes one report per job", len(reports) == len([f for f in os.listdir(f"{scenarios}/jobs") if f.endswith(".json")]))
    path = os.path.join(out, "out.json")
    run("exponents", "--theta-order", "4", "--out", path)
    check("--out writes the report", json.load(open(path))["result"]["rho"] == "49")

sys.exit(1 if failures else 0)
