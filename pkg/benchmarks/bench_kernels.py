"""Time the shooting workload with and without numba.

Each backend runs in its own interpreter because the switch
(``YMSS_DISABLE_NUMBA``) is read at import time.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from ymss import _accel
from ymss.shooter import c_of_a, integrate_interior, find_astar
from ymss.roots import closed_form_roots
repeat = int(sys.argv[1])
r = closed_form_roots(13)
a = float(r.a_plus)
t0 = time.perf_counter()
c_of_a(13, a)                         # includes jit compilation / cache load
warm = time.perf_counter() - t0
times = {}
t0 = time.perf_counter()
for _ in range(repeat):
    integrate_interior(13, a)
times["integrate_interior"] = (time.perf_counter() - t0) / repeat
t0 = time.perf_counter()
for _ in range(repeat):
    c_of_a(19, 3.0)
times["c_of_a"] = (time.perf_counter() - t0) / repeat
t0 = time.perf_counter()
find_astar(13, float(r.c_plus))
times["find_astar"] = time.perf_counter() - t0
print(json.dumps({"numba": _accel.USE_NUMBA, "first_call": warm, "times": times}))
"""


def run_backend(disable: bool, repeat: int) -> dict:
    env = dict(os.environ, YMSS_DISABLE_NUMBA="1" if disable else "0")
    out = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="also write the raw timings here")
    args = ap.parse_args(argv)
    jit = run_backend(False, args.repeat)
    py = run_backend(True, args.repeat)
    print(f"{'workload':<20} {'numba [s]':>12} {'numpy [s]':>12} {'speedup':>9}")
    for k in jit["times"]:
        tj, tp = jit["times"][k], py["times"][k]
        print(f"{k:<20} {tj:>12.4g} {tp:>12.4g} {tp / tj:>8.1f}x")
    print(f"{'first call':<20} {jit['first_call']:>12.4g} {py['first_call']:>12.4g}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"numba": jit, "numpy": py}, fh, indent=2)


if __name__ == "__main__":
    main()
