"""The same workflow through the command line.

solve -> evaluate -> export-milp -> render, all driven by one config file.
Outputs land in demos/out/.
"""

import json
import os
import subprocess
import sys

CFG = "demos/configs/toy.json"
OUT = "demos/out"

def run(*args):
    cmd = [sys.executable, "-m", "dimfac", *args]
    print("$ dimfac " + " ".join(args))
    subprocess.run(cmd, check=True)

os.makedirs(OUT, exist_ok=True)

run("solve", "--config", CFG, "--method", "grasp", "--out", f"{OUT}/toy_solution.json")
rec = json.load(open(f"{OUT}/toy_solution.json"))
cells = ";".join(f"{k},{l}" for k, l in rec["placement"]["cells"])
print(f"  -> total {rec['objective']['total']:.6f} at {cells}\n")

run("evaluate", "--config", CFG, "--placement", cells, "--out", f"{OUT}/toy_check.json")
chk = json.load(open(f"{OUT}/toy_check.json"))
print(f"  -> re-evaluated total {chk['objective']['total']:.6f}\n")

run("export-milp", "--config", CFG, "--out", f"{OUT}/toy.lp",
    "--warm-start", f"{OUT}/toy_solution.json")
print(f"  -> {sum(1 for _ in open(f'{OUT}/toy.lp'))} LP lines\n")

run("render", "--config", CFG, "--solution", f"{OUT}/toy_solution.json",
    "--out", f"{OUT}/toy.svg", "--show-grid")
print(f"  -> open {OUT}/toy.svg in a browser to see the cells and shapes")
