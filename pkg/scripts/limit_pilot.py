"""Pilot runs for the limit-theorem experiments.

For every catalog experiment, runs the default ladder (n = 100, 1000, 10000;
10**4 replications) under pilot seeds 1..10, which are disjoint from the
acceptance seed 0, and records the KS distances.  Experiments whose top-rung
distances sit near their threshold are also run along an extended ladder up
to n = 10**7 to show the convergence rate.  Output goes to
tests/fixtures/limit_pilot.json.

Run from the repository root: ``python3 scripts/limit_pilot.py``.
"""

import json
import pathlib
import time

import numpy as np

from heavytail import limitlab

PILOT_SEEDS = range(1, 11)
EXTENDED = (10_000, 100_000, 1_000_000, 10_000_000)
EXTENDED_REPS = 20_000


def main():
    out = {"ladder": list(limitlab.DEFAULT_LADDER), "reps": limitlab.DEFAULT_REPS,
           "seeds": list(PILOT_SEEDS), "experiments": {}}
    for name in limitlab.ACCEPTANCE_EXPERIMENTS + limitlab.CONTROL_EXPERIMENTS:
        t0 = time.time()
        e = limitlab.get_experiment(name)
        rows = [limitlab.run_experiment(name, seed=s).ks for s in PILOT_SEEDS]
        top = np.array([r[-1] for r in rows])
        entry = {
            "threshold": e.threshold,
            "ks": rows,
            "top_mean": float(top.mean()),
            "top_max": float(top.max()),
            "fraction_below_threshold": float(np.mean(top < e.threshold)),
        }
        if top.mean() > 0.6 * e.threshold:
            ext = limitlab.run_experiment(name, ladder=EXTENDED, reps=EXTENDED_REPS, seed=1)
            entry["extended"] = {"ladder": list(EXTENDED), "reps": EXTENDED_REPS,
                                 "ks": ext.ks}
        out["experiments"][name] = entry
        print(name, round(entry["top_mean"], 4), entry["fraction_below_threshold"],
              entry.get("extended", {}).get("ks"), f"{time.time() - t0:.0f}s", flush=True)
    path = pathlib.Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "limit_pilot.json"
    path.write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main()
