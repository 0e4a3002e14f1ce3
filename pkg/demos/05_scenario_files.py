"""Scenario files and the command line.

Scenarios are JSON with sections topology/catalog/chains/workload/fws/sweep;
everything omitted takes a documented default and unknown keys are rejected
with their path.  The same file drives `run`, `sweep` and `validate`.
"""

import os
import tempfile

from sfcsched import load_results, parse_scenario, parse_sweep
from sfcsched.cli import main as sfcsched

here = os.path.dirname(__file__)
scenario_path = os.path.join(here, "example_scenario.json")

scenario = parse_scenario(scenario_path)
sweep = parse_sweep(scenario_path)
print(f"parsed scenario: policy={scenario.policy} requests={scenario.request_count} "
      f"seed={scenario.rng_seed}")
print(f"parsed sweep:    {len(sweep.demand_points)} demand points, "
      f"policies {', '.join(sweep.policies)}, {sweep.repetitions} repetitions")

# `validate` only parses; exit code 0 means the file is sound.
code = sfcsched(["validate", "--scenario", scenario_path])
print(f"validate exit code: {code}")

# One run, written as CSV rows (policy, sweep_var, sweep_value, metric, mean, reps).
out = os.path.join(tempfile.mkdtemp(), "run.csv")
sfcsched(["run", "--scenario", scenario_path, "--policy", "lfff",
          "--seed", "3", "--out", out])
for row in load_results(open(out).read()):
    print(f"  {row.policy} {row.metric:<14} {row.mean:12.3f}")

# A small demand sweep straight to stdout.  With a fixed arrival window the
# offered rate grows with the demand count, which is what drives the curves.
print("\nsweep over demand points:")
sfcsched(["sweep", "--scenario", scenario_path])
