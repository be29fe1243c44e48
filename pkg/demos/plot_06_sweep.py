"""
A reproducible sweep
====================

A sweep runs the corrector over a grid of sizes and ``eps`` values and
reports how much of the ``eps`` budget each distance used.
"""

from bpb.harness import SweepConfig, rows_to_csv, run_sweep, summarize, tightness_report, tightness_to_csv

cfg = SweepConfig.from_dict(
    {"dims": [[3, 3], [6, 4]], "eps": ["1/10", "9/10"], "trials": 5, "seed": 11}
)
rows = run_sweep(cfg)
print(rows_to_csv(rows[:4]))
print(tightness_to_csv(tightness_report(rows)))

###############################################################################
# Fixed points are instances where no change was needed at all.

summary = summarize(rows)
print("passed", summary["passed"], "of", summary["rows"], "- fixed points:", summary["fixed_points"])
print("same CSV on a rerun:", rows_to_csv(run_sweep(cfg)) == rows_to_csv(rows))
