"""Endomorphisms of a free group given by generator images.

The composition convention is fixed once and for all: ``(f * g)(w) =
f(g(w))``, so a written product applies its rightmost factor first.  Every
step-by-step chain in the bundled scenarios depends on this reading.

Automorphism certification goes through Nielsen reduction: a tuple of n words
is a basis of the rank-n free group exactly when length-decreasing Nielsen
moves drive it down to a permutation of possibly-inverted generators.  The
reduction log doubles as the inversion witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .words import RankMismatchError, Word, invert, multiply

NAMED_KINDS = ("L", "R", "C", "P", "I")

DEFAULT_MAX_POWER = 256
DEFAULT_MAX_LEN = 4096


class NotABasisError(ValueError):
    """The given word tuple does not form a free basis."""


@dataclass(frozen=True, slots=True)
class Endomorphism:
    """Rank plus the image of each generator, in generator order."""

    rank: int
    images: tuple[Word, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.rank:
            raise ValueError(
                f"expected {self.rank} images, got {len(self.images)}"
            )
        for w in self.images:
            if w.rank != self.rank:
                raise RankMismatchError(
                    f"image rank {w.rank} differs from endomorphism rank {self.rank}"
                )

    @staticmethod
    def identity(rank: int) -> "Endomorphism":
        return Endomorphism(
            rank, tuple(Word.generator(rank, i) for i in range(1, rank + 1))
        )

    @staticmethod
    def from_images(images: Sequence[Word]) -> "Endomorphism":
        if not images:
            raise ValueError("need at least one image")
        return Endomorphism(images[0].rank, tuple(images))

    def is_identity(self) -> bool:
        return self == Endomorphism.identity(self.rank)

    def apply(self, w: Word) -> Word:
        """Image of a word; homomorphic by construction."""
        if w.rank != self.rank:
            raise RankMismatchError(f"word rank {w.rank} vs rank {self.rank}")
        out: list[int] = []
        for a in w.letters:
            img = self.images[abs(a) - 1].letters
            if a < 0:
                img = tuple(-x for x in reversed(img))
            for x in img:
                if out and out[-1] == -x:
                    out.pop()
                else:
                    out.append(x)
        return Word(self.rank, tuple(out))

    def __mul__(self, other: "Endomorphism") -> "Endomorphism":
        return compose(self, other)

    def __pow__(self, n: int) -> "Endomorphism":
        base = self if n >= 0 else invert_automorphism(self)
        out = Endomorphism.identity(self.rank)
        for _ in range(abs(n)):
            out = compose(out, base)
        return out

    def max_image_length(self) -> int:
        return max(len(w) for w in self.images)

    def __str__(self) -> str:
        parts = [f"x{i + 1} -> {w}" for i, w in enumerate(self.images)]
        return "; ".join(parts)

    def __repr__(self) -> str:
        return f"Endomorphism({self.rank}, {str(self)!r})"


def named(kind: str, i: int, j: Optional[int] = None, *, rank: int) -> Endomorphism:
    """One of the five generator-level automorphisms.

    L(i,j): x_i -> x_j x_i;  R(i,j): x_i -> x_i x_j;
    C(i,j): x_i -> x_j x_i x_j^-1;  P(i,j): swap x_i, x_j;  I(i): x_i -> x_i^-1.
    All other generators are fixed.
    """
    if kind not in NAMED_KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {NAMED_KINDS}")
    if not 1 <= i <= rank:
        raise ValueError(f"index i={i} out of range for rank {rank}")
    if kind == "I":
        if j is not None:
            raise ValueError("I takes a single index")
    else:
        if j is None:
            raise ValueError(f"{kind} needs two indices")
        if not 1 <= j <= rank:
            raise ValueError(f"index j={j} out of range for rank {rank}")
        if i == j:
            raise ValueError(f"{kind} needs distinct indices, got i=j={i}")

    images = [Word.generator(rank, k) for k in range(1, rank + 1)]
    xi = Word.generator(rank, i)
    if kind == "I":
        images[i - 1] = invert(xi)
    else:
        assert j is not None
        xj = Word.generator(rank, j)
        if kind == "L":
            images[i - 1] = multiply(xj, xi)
        elif kind == "R":
            images[i - 1] = multiply(xi, xj)
        elif kind == "C":
            images[i - 1] = multiply(multiply(xj, xi), invert(xj))
        elif kind == "P":
            images[i - 1] = xj
            images[j - 1] = xi
    return Endomorphism.from_images(images)


def compose(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    """(f * g)(w) = f(g(w)): rightmost factor applies first."""
    if f.rank != g.rank:
        raise RankMismatchError(f"rank {f.rank} vs rank {g.rank}")
    return Endomorphism(f.rank, tuple(f.apply(w) for w in g.images))


def order(
    f: Endomorphism,
    max_power: int = DEFAULT_MAX_POWER,
    max_word_len: int = DEFAULT_MAX_LEN,
) -> Optional[int]:
    """Smallest k >= 1 with f^k the identity, or None once either cap trips.

    The caps turn infinite-order inputs into a reported outcome instead of
    unbounded growth.
    """
    if max_power < 1 or max_word_len < 1:
        raise ValueError("caps must be positive")
    h = f
    for k in range(1, max_power + 1):
        if h.is_identity():
            return k
        if h.max_image_length() > max_word_len:
            return None
        h = compose(f, h)
    return None


def is_inner(f: Endomorphism) -> Optional[Word]:
    """A conjugator w with f(x) = w x w^-1 for every generator, else None.

    Deterministic, no search: cyclically reduce f(x_1) to pin the conjugator
    up to a power of x_1, read that power off f(x_2), then verify the single
    candidate on all generators.  For rank 1 inner means identity.
    """
    rank = f.rank
    if rank == 1:
        return Word.identity(1) if f.is_identity() else None

    from .words import cyclic_reduce  # local to avoid import cycle noise

    core, v = cyclic_reduce(f.images[0])
    x1 = Word.generator(rank, 1)
    if core != x1:
        return None
    # Candidate conjugators are v * x1^k; determine k from f(x_2).
    u = multiply(multiply(invert(v), f.images[1]), v)
    k = 0
    letters = u.letters
    while k < len(letters) and abs(letters[k]) == 1:
        k += 1
    if k >= len(letters) or abs(letters[k]) != 2:
        return None
    head = letters[:k]
    if any(a != head[0] for a in head):
        return None
    power = k if not head or head[0] > 0 else -k
    w = multiply(v, x1**power)
    for i, img in enumerate(f.images):
        xi = Word.generator(rank, i + 1)
        if img != xi.conjugated_by(w):
            return None
    return w


def out_order(
    f: Endomorphism,
    max_power: int = DEFAULT_MAX_POWER,
    max_word_len: int = DEFAULT_MAX_LEN,
) -> Optional[int]:
    """Smallest k >= 1 with f^k inner, or None once either cap trips."""
    if max_power < 1 or max_word_len < 1:
        raise ValueError("caps must be positive")
    h = f
    for k in range(1, max_power + 1):
        if is_inner(h) is not None:
            return k
        if h.max_image_length() > max_word_len:
            return None
        h = compose(f, h)
    return None


def equal_up_to_inner(f: Endomorphism, g: Endomorphism) -> Optional[Word]:
    """Witness that f and g agree in the outer quotient: is_inner(f * g^-1)."""
    return is_inner(compose(f, invert_automorphism(g)))


# --- Nielsen reduction -----------------------------------------------------

# A log entry (side, i, j, sign) records u_i <- u_i * u_j^sign for side "R",
# u_i <- u_j^sign * u_i for side "L", and u_i <- u_i^-1 for side "I" (j and
# sign are ignored there).
NielsenMove = tuple[str, int, int, int]


def apply_nielsen_log(
    words: Sequence[Word], log: Sequence[NielsenMove]
) -> tuple[Word, ...]:
    """Replay a transformation log; reconstructs nielsen_reduce output."""
    out = list(words)
    for side, i, j, sign in log:
        if side == "I":
            out[i] = invert(out[i])
            continue
        factor = out[j] if sign > 0 else invert(out[j])
        out[i] = multiply(out[i], factor) if side == "R" else multiply(factor, out[i])
    return tuple(out)


def _word_key(w: Word) -> tuple:
    """Well-order used to break length ties: generator index first, plain
    letter before inverse."""
    return tuple((abs(a), 0 if a > 0 else 1) for a in w.letters)


def nielsen_reduce(
    words: Sequence[Word],
) -> tuple[tuple[Word, ...], list[NielsenMove]]:
    """Classical length-decreasing Nielsen reduction.

    Repeatedly applies the single elementary move u_i <- u_j^s * u_i,
    u_i <- u_i * u_j^s, or u_i <- u_i^-1 that most improves the pair
    (length of u_i, letter sequence of u_i); between strict length drops this
    lexicographic tie-break rebalances half-cancelling products, which pure
    length descent can stall on.  Every step strictly decreases a well-founded
    key, so the pass terminates; ties in the move choice break on
    (i, j, side, sign) for determinism.
    """
    if not words:
        raise ValueError("need a nonempty tuple of words")
    rank = words[0].rank
    for w in words:
        if w.rank != rank:
            raise RankMismatchError("mixed ranks in tuple")

    tup = list(words)
    log: list[NielsenMove] = []
    while True:
        best_key: tuple | None = None
        best_move: NielsenMove | None = None
        best_word: Word | None = None
        for i in range(len(tup)):
            current = (len(tup[i]), _word_key(tup[i]))

            def consider(cand: Word, move: NielsenMove) -> None:
                nonlocal best_key, best_move, best_word
                if (len(cand), _word_key(cand)) >= current:
                    return
                key = (len(cand) - current[0], _word_key(cand), move)
                if best_key is None or key < best_key:
                    best_key = key
                    best_move = move
                    best_word = cand

            consider(invert(tup[i]), ("I", i, i, 1))
            for j in range(len(tup)):
                if i == j:
                    continue
                for side in ("L", "R"):
                    for sign in (1, -1):
                        factor = tup[j] if sign > 0 else invert(tup[j])
                        cand = (
                            multiply(factor, tup[i])
                            if side == "L"
                            else multiply(tup[i], factor)
                        )
                        consider(cand, (side, i, j, sign))
        if best_move is None:
            break
        assert best_word is not None
        tup[best_move[1]] = best_word
        log.append(best_move)
    return tuple(tup), log


def _is_signed_permutation(words: Sequence[Word]) -> Optional[list[int]]:
    """If every word is a distinct single letter covering all generators,
    return ``perm`` with words[t] = x_{abs(perm[t])}^{sign(perm[t])}."""
    seen: set[int] = set()
    perm: list[int] = []
    for w in words:
        if len(w) != 1:
            return None
        a = w.letters[0]
        if abs(a) in seen:
            return None
        seen.add(abs(a))
        perm.append(a)
    if len(seen) != words[0].rank:
        return None
    return perm


def is_basis(words: Sequence[Word]) -> bool:
    """True iff Nielsen reduction lands on a permuted, possibly inverted,
    standard basis.  Requires exactly rank-many words."""
    if not words:
        return False
    if len(words) != words[0].rank:
        return False
    reduced, _ = nielsen_reduce(words)
    return _is_signed_permutation(reduced) is not None


def change_basis(f: Endomorphism, basis: Sequence[Word]) -> Endomorphism:
    """Rewrite f in the coordinates of a new free basis.

    With beta the substitution x_i -> basis[i], the result is
    beta^-1 * f * beta, so feeding the standard basis returns f unchanged.
    """
    if len(basis) != f.rank:
        raise NotABasisError(f"expected {f.rank} basis words, got {len(basis)}")
    beta = Endomorphism(f.rank, tuple(basis))
    if not is_basis(beta.images):
        raise NotABasisError("words do not form a free basis")
    return compose(invert_automorphism(beta), compose(f, beta))


def invert_automorphism(f: Endomorphism) -> Endomorphism:
    """Two-sided inverse of an automorphism.

    Nielsen-reduce the image tuple while mirroring every move on a witness
    tuple that starts at the standard basis; the invariant u_t = f(v_t) turns
    the terminal signed permutation into explicit preimages of each x_i.
    """
    rank = f.rank
    reduced, log = nielsen_reduce(f.images)
    perm = _is_signed_permutation(reduced)
    if perm is None:
        raise NotABasisError("images do not form a free basis")
    witnesses = apply_nielsen_log(
        [Word.generator(rank, i) for i in range(1, rank + 1)], log
    )
    images: list[Word] = [Word.identity(rank)] * rank
    for t, a in enumerate(perm):
        # f(witnesses[t]) = x_{abs(a)}^{sign(a)}  =>  f^-1(x_{abs(a)}) = w^{sign(a)}
        w = witnesses[t] if a > 0 else invert(witnesses[t])
        images[abs(a) - 1] = w
    return Endomorphism(rank, tuple(images))
