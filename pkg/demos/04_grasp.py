"""The GRASP pipeline, one stage at a time.

Construction grows the shapes from points while pushing roots apart until a
full-size, non-overlapping placement snaps onto the grid.  Local search then
moves one facility at a time to better cells.  The full solver keeps a pool
of constructed+improved solutions and revisits perturbed variants.
"""

import json
import random

from dimfac.config import load_config
from dimfac.evaluate import objective
from dimfac.geometry import Point
from dimfac.grasp import GraspParams, grasp_solve, greedy_improve, wavefront_construct

cfg = load_config("demos/configs/toy.json")
di = cfg.discretized()
params = cfg.grasp_params

# stage 1: construction from two deliberately close starting roots
rng = random.Random(0)
roots = [Point(0.48, 0.5), Point(0.52, 0.5)]
placement = wavefront_construct(di, roots, params, rng)
ev = objective(di, cfg.facilities, cfg.lost_cost, placement)
print(f"construction from near-coincident roots: {placement}  total {ev.total:.4f}")

# stage 2: greedy cell moves to a local optimum
better, ev2 = greedy_improve(di, cfg.facilities, cfg.lost_cost, placement, params)
print(f"after greedy improvement:               {better}  total {ev2.total:.4f}")

# stage 3: the full solver (pool + perturbed revisits)
res = grasp_solve(di, cfg.facilities, cfg.lost_cost, params)
print(f"grasp_solve:                            {res.placement}  total {res.evaluation.total:.4f}")
print(
    f"  pool best after construction {res.step1_best_total:.4f}, "
    f"{res.visits} revisits, {res.improvements} pool improvements, "
    f"{res.constructions} constructions"
)

print("\nsolver knobs in use:")
print(json.dumps(cfg.normalized["solver"]["grasp"], indent=2, sort_keys=True))
