"""A downsized experiment grid with reproducible aggregates.

The full protocol averages each cell over 1000 seeded instances; here we
run 50 per cell so the demo finishes in seconds. Identical (grid, seed)
always produce byte-identical CSV, independent of the worker count.
"""

import robustkit as rk

grid = rk.ExperimentGrid(
    cells=[(10, 3, 2), (10, 3, 5), (10, 3, 10)],
    instance_count=50,
    master_seed=1,
)

result = rk.run_grid(grid, workers=2)

print("cell        Mid-1-Pre  LP-1-Pre  Mid-Post  LP-1-Post  MM-Post     OPT")
for n, p, N in grid.cells:
    print(
        f"({n},{p},{N:3d})   "
        f"{result.value(n, p, N, 'apriori', 'mid', 1):9.3f}"
        f"{result.value(n, p, N, 'apriori', 'lp', 1):10.3f}"
        f"{result.value(n, p, N, 'aposteriori', 'mid'):10.3f}"
        f"{result.value(n, p, N, 'aposteriori', 'lp', 1):11.3f}"
        f"{result.value(n, p, N, 'aposteriori', 'mm'):9.3f}"
        f"{result.value(n, p, N, 'opt', 'exact'):8.1f}"
    )

rerun = rk.run_grid(grid, workers=1)
print("\nserial rerun emits identical bytes:", rk.emit_csv(rerun) == rk.emit_csv(result))

print("\nfirst CSV lines:")
for line in rk.emit_csv(result).splitlines()[:6]:
    print(" ", line)
