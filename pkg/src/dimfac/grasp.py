"""Randomized multistart heuristic for the discretized placement problem.

Construction works by inflation: every shape starts at a small fraction of
its size at a random root, grows in rounds, and whenever two shapes come
closer than a safety margin their roots are pushed apart along the line
joining them.  If pushing stalls, the crowded facilities are relocated to
locally maximin positions and growth restarts.  A greedy cell search then
improves each constructed placement, and the best solutions are revisited
with permuted roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .evaluate import Evaluation, Evaluator, Facility, objective
from .geometry import (
    PlacedShape,
    Point,
    Shape,
    l1_shape_distance_below,
    min_l1_shape_distance,
)
from .grid import (
    Cell,
    DiscretizedInstance,
    Placement,
    l1_project_to_cells,
    placement_is_suitable,
)

__all__ = [
    "GraspParams",
    "GraspResult",
    "ConstructionFailureError",
    "NoFeasiblePlacementError",
    "wavefront_construct",
    "local_maximin_relocate",
    "greedy_improve",
    "grasp_solve",
    "min_l1_shape_distance",
]


class ConstructionFailureError(RuntimeError):
    """Raised when the inflation constructor cannot separate the shapes."""


class NoFeasiblePlacementError(RuntimeError):
    """Raised when some facility has no feasible cell at all."""


@dataclass(frozen=True)
class GraspParams:
    """Tuning knobs for the constructor and the multistart loop.

    growth_step must divide 1 evenly (0.05 means 20 inflation rounds).
    push_step is an absolute distance in region units.  epsilon_ball
    defaults to twice the larger cell side, max_visits to 10 * list_size.
    """

    list_size: int = 50
    permute_count: int = 2
    growth_step: float = 0.05
    push_step: float = 0.05
    redirect_cap: int = 9
    push_repeats: int = 3
    search_radius_k: int = 5
    search_radius_l: int = 5
    epsilon_ball: float | None = None
    max_visits: int | None = None
    stop_on_clean_pass: bool = True
    restart_cap: int = 25
    root_sample_cap: int = 10_000
    construction_retry_cap: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.list_size < 1:
            raise ValueError("list_size must be at least 1")
        if self.permute_count < 2:
            raise ValueError("permute_count must be at least 2")
        if not 0.0 < self.growth_step <= 1.0:
            raise ValueError("growth_step must be in (0, 1]")
        rounds = round(1.0 / self.growth_step)
        if rounds < 1 or abs(rounds * self.growth_step - 1.0) > 1e-9:
            raise ValueError("growth_step must divide 1 evenly, e.g. 0.05 or 0.1")
        if self.push_step <= 0.0:
            raise ValueError("push_step must be positive")
        if self.redirect_cap < 1 or self.push_repeats < 1:
            raise ValueError("redirect_cap and push_repeats must be at least 1")
        if self.search_radius_k < 0 or self.search_radius_l < 0:
            raise ValueError("search radii must be non-negative")
        if self.epsilon_ball is not None and self.epsilon_ball <= 0.0:
            raise ValueError("epsilon_ball must be positive when given")
        if self.restart_cap < 1 or self.construction_retry_cap < 1:
            raise ValueError("restart_cap and construction_retry_cap must be at least 1")

    @property
    def n_rounds(self) -> int:
        return round(1.0 / self.growth_step)


@dataclass(frozen=True)
class GraspResult:
    placement: Placement
    evaluation: Evaluation
    step1_best_total: float
    visits: int
    improvements: int
    constructions: int


def _epsilon(di: DiscretizedInstance, params: GraspParams) -> float:
    if params.epsilon_ball is not None:
        return params.epsilon_ball
    return 2.0 * max(di.grid.hx, di.grid.hy)


def _project_root(di: DiscretizedInstance, i: int, q: Point) -> Point:
    if di.in_feasible_region(i, q):
        return q
    return l1_project_to_cells(di.grid, di.feasible[i], q)


def _containing_feasible_cell(di: DiscretizedInstance, i: int, q: Point) -> Cell:
    cell = di.grid.cell_of(q)
    if cell in di.feasible_sets[i]:
        return cell
    # q sits on a cell edge or just outside; take the closest feasible cell
    best = None
    best_d = math.inf
    for cand in di.feasible[i]:
        r = di.grid.cell_rect(cand)
        d = abs(q.x - r.clamp(q).x) + abs(q.y - r.clamp(q).y)
        if d < best_d:
            best, best_d = cand, d
    assert best is not None
    return best


class _ScaledShapes:
    """Cache of shapes scaled to round m of the inflation schedule."""

    def __init__(self, shapes: tuple[Shape, ...], params: GraspParams):
        self.shapes = shapes
        self.n_rounds = params.n_rounds
        self.step = params.growth_step
        self._cache: dict[tuple[int, int], Shape] = {}

    def at_round(self, i: int, m: int) -> Shape:
        if m == self.n_rounds:
            return self.shapes[i]
        key = (i, m)
        got = self._cache.get(key)
        if got is None:
            got = self.shapes[i].scaled(m * self.step)
            self._cache[key] = got
        return got


def _violating_pairs(
    roots: list[Point], scaled: _ScaledShapes, m: int, threshold: float
) -> list[tuple[int, int]]:
    rho = len(roots)
    out = []
    for i in range(rho):
        pi = PlacedShape(scaled.at_round(i, m), roots[i])
        for j in range(i + 1, rho):
            pj = PlacedShape(scaled.at_round(j, m), roots[j])
            if l1_shape_distance_below(pi, pj, threshold):
                out.append((i, j))
    return out


def _push_directions(
    roots: list[Point],
    pairs: list[tuple[int, int]],
    rng: np.random.Generator,
    tiny: float,
) -> list[tuple[float, float]]:
    dirs = [(0.0, 0.0)] * len(roots)
    for i, j in pairs:
        dx = roots[j].x - roots[i].x
        dy = roots[j].y - roots[i].y
        norm = math.hypot(dx, dy)
        if norm <= tiny:
            # coincident roots: pick a direction at random
            ang = rng.uniform(0.0, 2.0 * math.pi)
            dx, dy = math.cos(ang), math.sin(ang)
            norm = 1.0
        ux, uy = dx / norm, dy / norm
        dirs[i] = (dirs[i][0] - ux, dirs[i][1] - uy)
        dirs[j] = (dirs[j][0] + ux, dirs[j][1] + uy)
    return dirs


def _apply_push(
    di: DiscretizedInstance,
    roots: list[Point],
    dirs: list[tuple[float, float]],
    step: float,
) -> None:
    for i, (vx, vy) in enumerate(dirs):
        norm = math.hypot(vx, vy)
        if norm <= 1e-300:
            continue
        target = Point(roots[i].x + step * vx / norm, roots[i].y + step * vy / norm)
        if di.in_feasible_region(i, target):
            roots[i] = target


def local_maximin_relocate(
    di: DiscretizedInstance,
    i: int,
    others: list[Point],
    start: Point,
    params: GraspParams,
    rng: np.random.Generator,
) -> Point:
    """Move facility i away from the given roots, then jitter.

    A four-direction pattern search maximizes the smallest Euclidean
    distance to `others` while staying inside facility i's feasible cell
    union.  The result is perturbed by a uniform sample from an l1 ball
    so repeated relocations do not cycle.
    """

    def score(q: Point) -> float:
        return min(math.hypot(q.x - o.x, q.y - o.y) for o in others)

    best = _project_root(di, i, start)
    best_f = score(best)
    step = 4.0 * max(di.grid.hx, di.grid.hy)
    halvings = 0
    while True:
        moved = False
        cand_best = best
        cand_f = best_f
        for dx, dy in ((step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)):
            q = _project_root(di, i, Point(best.x + dx, best.y + dy))
            f = score(q)
            if f > cand_f:
                cand_best, cand_f = q, f
                moved = True
        if moved:
            best, best_f = cand_best, cand_f
            continue
        if halvings >= 6:
            break
        step *= 0.5
        halvings += 1

    eps = _epsilon(di, params)
    sample = best
    for _ in range(100):
        dx = rng.uniform(-eps, eps)
        dy = rng.uniform(-eps, eps)
        if abs(dx) + abs(dy) > eps:
            continue
        cand = Point(best.x + dx, best.y + dy)
        if di.in_feasible_region(i, cand):
            return cand
        sample = cand
    return _project_root(di, i, sample)


def wavefront_construct(
    di: DiscretizedInstance,
    roots: list[Point],
    params: GraspParams,
    rng: np.random.Generator,
) -> Placement:
    """Grow the shapes from the given roots into a suitable placement.

    Roots outside their facility's feasible cell union are projected in
    first.  Raises ConstructionFailureError when the separation loop keeps
    stalling (restart_cap relocation restarts).
    """
    rho = di.n_facilities
    if len(roots) != rho:
        raise ValueError(f"expected {rho} roots, got {len(roots)}")
    threshold = 3.0 * (di.grid.hx + di.grid.hy)
    tiny = 1e-12 * math.hypot(di.grid.bbox.width, di.grid.bbox.height)
    scaled = _ScaledShapes(di.shapes, params)
    n_rounds = params.n_rounds

    roots = [_project_root(di, i, q) for i, q in enumerate(roots)]
    order = list(range(rho))
    restarts = 0

    while True:
        m = 1
        redirects = 0
        stalled = False
        while m < n_rounds:
            pairs = _violating_pairs(roots, scaled, m, threshold)
            if not pairs:
                m += 1
                redirects = 0
                continue
            dirs = _push_directions(roots, pairs, rng, tiny)
            streak = 0
            while True:
                _apply_push(di, roots, dirs, params.push_step)
                pairs = _violating_pairs(roots, scaled, m, threshold)
                if pairs:
                    redirects += 1
                    break
                streak += 1
                if streak >= params.push_repeats:
                    break
            if redirects >= params.redirect_cap:
                stalled = True
                break

        if not stalled:
            placement = tuple(
                _containing_feasible_cell(di, i, roots[i]) for i in range(rho)
            )
            if placement_is_suitable(di, placement):
                return placement
            # snapping to cell centers can re-introduce an overlap; continue
            # from the snapped roots so the relocation step sees the conflict
            roots = [di.grid.cell_center(at) for at in placement]
            m = n_rounds

        restarts += 1
        if restarts > params.restart_cap:
            raise ConstructionFailureError(
                f"shape separation failed after {params.restart_cap} relocation restarts"
            )
        _relocate_crowded(di, roots, order, scaled, m, threshold, params, rng)
        rng.shuffle(order)


def _relocate_crowded(
    di: DiscretizedInstance,
    roots: list[Point],
    order: list[int],
    scaled: _ScaledShapes,
    m: int,
    threshold: float,
    params: GraspParams,
    rng: np.random.Generator,
) -> None:
    """Relocate facilities that still conflict with later ones in `order`."""
    rho = len(roots)
    crowd: list[tuple[int, list[Point]]] = []
    for si in range(rho - 1):
        fi = order[si]
        pi = PlacedShape(scaled.at_round(fi, m), roots[fi])
        partners = []
        for sj in range(si + 1, rho):
            fj = order[sj]
            pj = PlacedShape(scaled.at_round(fj, m), roots[fj])
            if l1_shape_distance_below(pi, pj, threshold):
                partners.append(roots[fj])
        if partners:
            crowd.append((fi, partners))
    # compute every target from the pre-relocation roots, then move
    targets = [
        (fi, local_maximin_relocate(di, fi, partners, roots[fi], params, rng))
        for fi, partners in crowd
    ]
    for fi, q in targets:
        roots[fi] = q


def _sample_root(
    di: DiscretizedInstance, i: int, params: GraspParams, rng: np.random.Generator
) -> Point:
    bbox = di.grid.bbox
    for _ in range(params.root_sample_cap):
        q = Point(rng.uniform(bbox.x_lo, bbox.x_hi), rng.uniform(bbox.y_lo, bbox.y_hi))
        if di.in_feasible_region(i, q):
            return q
    cells = di.feasible[i]
    return di.grid.cell_center(cells[rng.integers(len(cells))])


def _construct_with_retries(
    di: DiscretizedInstance,
    params: GraspParams,
    rng: np.random.Generator,
    roots: list[Point] | None = None,
) -> tuple[Placement, int]:
    attempts = 0
    if roots is not None:
        attempts += 1
        try:
            return wavefront_construct(di, roots, params, rng), attempts
        except ConstructionFailureError:
            pass
    last = None
    for _ in range(params.construction_retry_cap):
        fresh = [_sample_root(di, i, params, rng) for i in range(di.n_facilities)]
        attempts += 1
        try:
            return wavefront_construct(di, fresh, params, rng), attempts
        except ConstructionFailureError as err:
            last = err
    raise ConstructionFailureError(
        f"no suitable placement found in {attempts} construction attempts; "
        "the region may be too tight for these shapes"
    ) from last


def greedy_improve(
    di: DiscretizedInstance,
    facs: tuple[Facility, ...],
    lost_cost,
    placement: Placement,
    params: GraspParams,
    evaluator: Evaluator | None = None,
) -> tuple[Placement, Evaluation]:
    """Best-improvement search over single-facility cell moves.

    Each move shifts one facility by up to (search_radius_k, search_radius_l)
    cells; only feasible, non-overlapping candidates count.  Ties on the
    objective keep the first candidate in (facility, dk, dl) order.
    """
    ev = evaluator if evaluator is not None else Evaluator(di, facs)
    current = objective(di, facs, lost_cost, placement, evaluator=ev)
    cells = list(placement)
    rho = di.n_facilities
    while True:
        best_val = current.total
        best_move = None
        for i in range(rho):
            k0, l0 = cells[i]
            others = [di.footprints[j][cells[j]] for j in range(rho) if j != i]
            for dk in range(-params.search_radius_k, params.search_radius_k + 1):
                for dl in range(-params.search_radius_l, params.search_radius_l + 1):
                    if dk == 0 and dl == 0:
                        continue
                    cand = (k0 + dk, l0 + dl)
                    if cand not in di.feasible_sets[i]:
                        continue
                    fp = di.footprints[i][cand]
                    if any(not fp.isdisjoint(o) for o in others):
                        continue
                    trial = tuple(cand if j == i else cells[j] for j in range(rho))
                    val = objective(di, facs, lost_cost, trial, evaluator=ev)
                    if val.total < best_val:
                        best_val = val.total
                        best_move = (i, cand, val)
        if best_move is None:
            return tuple(cells), current
        i, cand, current = best_move
        cells[i] = cand


def grasp_solve(
    di: DiscretizedInstance,
    facs: tuple[Facility, ...],
    lost_cost,
    params: GraspParams,
) -> GraspResult:
    """Multistart search: build a sorted list of solutions, then revisit
    them with permuted roots until a visit budget or a clean pass.
    """
    rho = di.n_facilities
    for i in range(rho):
        if not di.feasible[i]:
            raise NoFeasiblePlacementError(f"facility {i} has no feasible cell")
    rng = np.random.default_rng(params.seed)
    ev = Evaluator(di, facs)
    constructions = 0

    pool: list[tuple[float, Placement, Evaluation]] = []
    for _ in range(params.list_size):
        placement, n = _construct_with_retries(di, params, rng)
        constructions += n
        placement, evaluation = greedy_improve(di, facs, lost_cost, placement, params, ev)
        pool.append((evaluation.total, placement, evaluation))
    pool.sort(key=lambda entry: entry[0])
    step1_best = pool[0][0]

    max_visits = params.max_visits if params.max_visits is not None else 10 * params.list_size
    visits = 0
    improvements = 0
    j = 0
    pass_improved = False
    while visits < max_visits:
        _, seed_placement, _ = pool[j]
        roots = [di.grid.cell_center(at) for at in seed_placement]
        if rho >= 2:
            m = min(params.permute_count, rho)
            picked = sorted(int(x) for x in rng.choice(rho, size=m, replace=False))
            perm = _non_identity_permutation(rng, m)
            moved = [roots[picked[perm[a]]] for a in range(m)]
            for a, idx in enumerate(picked):
                roots[idx] = moved[a]
        roots = [_project_root(di, i, q) for i, q in enumerate(roots)]
        placement, n = _construct_with_retries(di, params, rng, roots=roots)
        constructions += n
        placement, evaluation = greedy_improve(di, facs, lost_cost, placement, params, ev)
        if evaluation.total < pool[-1][0]:
            pool[-1] = (evaluation.total, placement, evaluation)
            pool.sort(key=lambda entry: entry[0])
            improvements += 1
            pass_improved = True
        visits += 1
        j += 1
        if j == len(pool):
            if params.stop_on_clean_pass and not pass_improved:
                break
            j = 0
            pass_improved = False

    total, placement, evaluation = pool[0]
    return GraspResult(
        placement=placement,
        evaluation=evaluation,
        step1_best_total=step1_best,
        visits=visits,
        improvements=improvements,
        constructions=constructions,
    )


def _non_identity_permutation(rng: np.random.Generator, m: int) -> np.ndarray:
    while True:
        perm = rng.permutation(m)
        if any(int(perm[a]) != a for a in range(m)):
            return perm
