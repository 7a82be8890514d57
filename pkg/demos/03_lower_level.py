"""The demand response to a fixed placement.

Once facilities are placed, every working cell either lies under a footprint
(its demand is lost, the space is occupied) or is assigned to the facility
with the cheapest access-plus-travel cost, ties to the lowest index.  The
objective adds installation cost, congestion cost on the assigned mass, and
the lost-demand penalty.
"""

from dimfac import costs, expr
from dimfac.evaluate import Facility, UtilitySpec, objective, solve_lower_level
from dimfac.geometry import Norm, Point, Polygon, Rect, RegionPolygon
from dimfac.grid import Grid, discretize

region = RegionPolygon((Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)))
grid = Grid(Rect(0, 0, 1, 1), 8, 8)
square = Polygon((Point(-0.05, -0.05), Point(0.05, -0.05), Point(0.05, 0.05), Point(-0.05, 0.05)))

di = discretize(
    region, grid, (square, square),
    expr.parse("1 + 2*x*y", {"x", "y"}),
    expr.parse("1", {"x", "y"}),
)

def plain_facility(access):
    return Facility(
        shape=square,
        access_cost=access,
        utility=UtilitySpec(kind="norm_to_root", scale=expr.parse("t", {"t"}), norm=Norm.l2()),
        install_cost=costs.pl_constant(0.1, 0.0, 6.0),
        congestion_cost=costs.pl_identity(0.0, 6.0),
    )

facs = (plain_facility(0.02), plain_facility(0.3))
lost = costs.pl_identity(0.0, 6.0)
placement = ((2, 2), (5, 5))

alloc = solve_lower_level(di, facs, placement)
print("assignment map (0/1 = serving facility, # = under a footprint):")
for l in reversed(range(grid.ny)):
    row = ""
    for k in range(grid.nx):
        c = (k, l)
        row += "#" if c in alloc.covered_by else str(alloc.assigned_to[c])
    print("  " + row)

print(f"\nassigned mass: {[round(m, 4) for m in alloc.assigned_mass]}")
print(f"lost mass:     {alloc.lost_mass:.4f}")

ev = objective(di, facs, lost, placement)
print("\nobjective breakdown")
for i, (ic, cc) in enumerate(zip(ev.install_costs, ev.congestion_costs)):
    print(f"  facility {i}: install {ic:.4f}  congestion {cc:.4f}")
print(f"  lost demand penalty: {ev.lost_cost_value:.4f}")
print(f"  total: {ev.total:.4f}")

# the second facility is pricier to reach, so only its own corner uses it;
# nudge its access cost down and watch the boundary move
cheap = (plain_facility(0.02), plain_facility(0.05))
moved = solve_lower_level(di, cheap, placement)
gained = sum(
    1 for c in moved.assigned_to
    if moved.assigned_to[c] == 1 and alloc.assigned_to.get(c) == 0
)
print(f"\nafter cutting facility 1's access cost: {gained} cells switch over")
