"""Finite matrix-group checks and the scenario replay pipeline.

Run with:  python demos/finite_groups_and_scenarios.py
"""

from autfn import run_text
from autfn.modgroups import (
    center, invariant_subreps, kernel_of_reduction, load_generating_pair,
    sl_group, split_obstruction, splitting_search,
)


def show(title, value):
    print(f"{title:<46} {value}")


show("order of the 3x3 mod-2 group", sl_group(3, 2).order)
show("order of the 3x3 mod-4 group", sl_group(3, 4).order)
show("center size mod 3", len(center(sl_group(3, 3))))

report = kernel_of_reduction(3, 2)
show("mod-2 reduction kernel size", report.kernel_order)
show("kernel is additively a trace-zero space", report.additive_iso_verified)

result = splitting_search(load_generating_pair())
show("lift pairs screened", result.pairs_tried)
show("section found", result.found)
if result.found:
    wa, wb = result.witness
    show("  lift of the 3-cycle", list(wa))
    show("  lift of the transvection", list(wb))

scan = invariant_subreps(3)
show("invariant subspaces (n=3)", scan.classification)
obstruction = split_obstruction(6)
show("diagonal-parity system at n=6 feasible", obstruction.feasible)

print()
print("A scenario, inline:")
report = run_text(
    """
    rank 5
    graph X = rose(5)
    gaut tf = rotation on X
    aut f = induced tf at v0
    aut phi1 = L(1,2)^-1 * f * L(1,2) * f^-1
    aut phi2 = L(1,2) * f * L(1,2)^-1 * f^-1
    assert phi1 * phi2 == L(1, 3)
    """
)
print(report.human())
