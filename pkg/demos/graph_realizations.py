"""Realize automorphisms by graph symmetries and read off their action.

Run with:  python demos/graph_realizations.py
"""

from autfn import (
    change_basis, induced_endo, induced_out_rep, presentation, ring, rose,
    rotation_aut,
)
from autfn.graphs import path_from_ids


def show(title, value):
    print(f"{title:<46} {value}")


# Rotating the five-petal rose permutes the canonical generators.
R5 = rose(5)
pres = presentation(R5, "v0")
f = induced_endo(pres, rotation_aut(R5))
show("rose rotation on the fundamental group", f)

# A three-cycle of vertices with one loop each: the rotation moves the
# basepoint, so the action is read through the connecting edge s1.
Y = ring(3, 2)
presY = presentation(Y, "v0")
delta = path_from_ids(Y, "v0", [("s1", True)])
rep = induced_out_rep(presY, rotation_aut(Y), delta)
show("outer representative in canonical generators", rep)

# Rewriting in the nested loop basis makes the shift pattern visible.
basis = [
    presY.path_to_word(path_from_ids(Y, "v0", [("l0_1", True)])),
    presY.path_to_word(
        path_from_ids(Y, "v0", [("s1", True), ("l1_1", True), ("s1", False)])
    ),
    presY.path_to_word(
        path_from_ids(
            Y, "v0",
            [("s1", True), ("s2", True), ("l2_1", True), ("s2", False), ("s1", False)],
        )
    ),
    presY.path_to_word(
        path_from_ids(Y, "v0", [("s1", True), ("s2", True), ("s3", True)])
    ),
]
show("same map in the nested basis", change_basis(rep, basis))
