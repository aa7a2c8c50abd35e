"""Walk through the word and automorphism layer.

Run with:  python demos/words_and_automorphisms.py
"""

from autfn import (
    Endomorphism, compose, invert_automorphism, is_inner, named, order,
    out_order, parse_word,
)


def show(title, value):
    print(f"{title:<46} {value}")


rank = 4
w = parse_word("x1 x2^-1 x3^2", rank)
show("a reduced word", w)
show("its inverse", ~w)
show("product with the inverse", w * ~w)

# The five generator-level automorphisms.
L = named("L", 1, 2, rank=rank)   # x1 -> x2 x1
R = named("R", 1, 2, rank=rank)   # x1 -> x1 x2
C = named("C", 1, 2, rank=rank)   # x1 -> x2 x1 x2^-1
P = named("P", 1, 2, rank=rank)   # swap x1, x2
I1 = named("I", 1, rank=rank)     # x1 -> x1^-1
show("left multiplication L(1,2)", L)
show("C(1,2) == L(1,2) * R(1,2)^-1", C == compose(L, invert_automorphism(R)))

# Composition applies the rightmost factor first.
chain = L * P * I1
show("chain L(1,2) * P(1,2) * I(1)", chain)
show("chain applied to x1", chain.apply(parse_word("x1", rank)))

# A finite-order automorphism mixing a 3-block and a 4-cycle.
f = Endomorphism.from_images(
    [parse_word(s, 6) for s in ("x2", "x2^-1 x1^-1", "x4", "x5", "x6", "x3")]
)
show("order of the mixed-block map", order(f))

# An infinite-order automorphism whose cube is inner.
g = Endomorphism.from_images(
    [parse_word(s, 4) for s in ("x2", "x3", "x4 x1 x4^-1", "x4")]
)
show("order with caps (None = unbounded)", order(g))
show("outer order", out_order(g))
show("conjugator witnessing g^3 inner", is_inner(g * g * g))
show("inverse of g", invert_automorphism(g))
