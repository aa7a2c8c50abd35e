"""Finite matrix groups over Z/m: enumeration, normal closures, kernels,
centers, simplicity, section searches, and GF(2) obstruction systems.

Elements are row-major ``bytes`` of length n*n with entries reduced mod m, so
they hash cheaply and enumeration stays array-driven.  Tables are immutable
once built and safe to share; element order is canonical (sorted after
closure), so repeated runs produce identical tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence

from .matrices import IntMatrix, ResidueMatrix

Mat = bytes


class EnumerationCapError(RuntimeError):
    """Breadth-first closure exceeded the configured size cap."""


# --- raw matrix arithmetic on packed bytes ----------------------------------


def mat_identity(n: int) -> Mat:
    out = bytearray(n * n)
    for i in range(n):
        out[i * n + i] = 1
    return bytes(out)


def mat_mul(a: Mat, b: Mat, n: int, m: int) -> Mat:
    out = bytearray(n * n)
    for i in range(n):
        base = i * n
        for j in range(n):
            s = 0
            for k in range(n):
                s += a[base + k] * b[k * n + j]
            out[base + j] = s % m
    return bytes(out)


def mat_det(a: Mat, n: int, m: int) -> int:
    """Determinant mod m by cofactor expansion; n stays desk-sized."""
    if n == 1:
        return a[0] % m
    total = 0
    rest = [a[r * n + c] for r in range(1, n) for c in range(n)]
    for j in range(n):
        if a[j] == 0:
            continue
        minor = bytes(
            rest[r * n + c] for r in range(n - 1) for c in range(n) if c != j
        )
        cof = mat_det(minor, n - 1, m)
        total += (a[j] * cof) if j % 2 == 0 else (-a[j] * cof)
    return total % m


def _unit_inverse(d: int, m: int) -> int:
    d %= m
    for x in range(1, m):
        if (d * x) % m == 1:
            return x
    raise ValueError(f"{d} is not a unit mod {m}")


def mat_inv(a: Mat, n: int, m: int) -> Mat:
    """Adjugate divided by the determinant; requires det to be a unit."""
    d = mat_det(a, n, m)
    dinv = _unit_inverse(d, m)
    out = bytearray(n * n)
    for i in range(n):
        for j in range(n):
            minor = bytes(
                a[r * n + c]
                for r in range(n)
                if r != j
                for c in range(n)
                if c != i
            )
            cof = mat_det(minor, n - 1, m)
            sign = 1 if (i + j) % 2 == 0 else -1
            out[i * n + j] = (sign * cof * dinv) % m
    return bytes(out)


def mat_pow(a: Mat, k: int, n: int, m: int) -> Mat:
    out = mat_identity(n)
    for _ in range(k):
        out = mat_mul(out, a, n, m)
    return out


def to_residue_matrix(a: Mat, n: int, m: int) -> ResidueMatrix:
    return ResidueMatrix(
        n, m, tuple(tuple(a[i * n + j] for j in range(n)) for i in range(n))
    )


def from_residue_matrix(mtx: ResidueMatrix) -> Mat:
    return bytes(a for row in mtx.rows for a in row)


def from_int_matrix(mtx: IntMatrix, m: int) -> Mat:
    return bytes(a % m for row in mtx.rows for a in row)


def elementary_mat(k: int, r: int, power: int, n: int, m: int) -> Mat:
    if k == r:
        raise ValueError("elementary matrix needs distinct indices")
    out = bytearray(mat_identity(n))
    out[(k - 1) * n + (r - 1)] = power % m
    return bytes(out)


def project_mod(a: Mat, m_to: int) -> Mat:
    return bytes(x % m_to for x in a)


# --- group tables ------------------------------------------------------------


class FiniteMatrixGroup:
    """A finite group of residue matrices with dense integer element indices.

    ``normalize`` (identity by default) canonicalizes products, which is how
    central quotients reuse this class: elements are distinguished coset
    representatives and every product is renormalized.
    """

    def __init__(
        self,
        n: int,
        modulus: int,
        elements: Sequence[Mat],
        generators: Sequence[Mat],
        normalize: Optional[Callable[[Mat], Mat]] = None,
    ) -> None:
        self.n = n
        self.modulus = modulus
        self.normalize = normalize
        self.elements: tuple[Mat, ...] = tuple(sorted(elements))
        self.index: dict[Mat, int] = {e: i for i, e in enumerate(self.elements)}
        self.generators: tuple[Mat, ...] = tuple(generators)
        ident = self._norm(mat_identity(n))
        if ident not in self.index:
            raise ValueError("table does not contain the identity")
        self.identity: Mat = ident
        for g in self.generators:
            if g not in self.index:
                raise ValueError("generator missing from element table")

    def _norm(self, a: Mat) -> Mat:
        return a if self.normalize is None else self.normalize(a)

    def op(self, a: Mat, b: Mat) -> Mat:
        return self._norm(mat_mul(a, b, self.n, self.modulus))

    def inv(self, a: Mat) -> Mat:
        return self._norm(mat_inv(a, self.n, self.modulus))

    def conj(self, g: Mat, x: Mat) -> Mat:
        return self.op(self.op(g, x), self.inv(g))

    def element_order(self, a: Mat) -> int:
        k = 1
        cur = a
        while cur != self.identity:
            cur = self.op(cur, a)
            k += 1
        return k

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, a: Mat) -> bool:
        return a in self.index

    def subgroup(self, generators: Iterable[Mat]) -> "FiniteMatrixGroup":
        gens = [self._norm(g) for g in generators]
        for g in gens:
            if g not in self.index:
                raise ValueError("subgroup generator outside the group")
        elems = _closure(gens, self.op, self.identity)
        return FiniteMatrixGroup(self.n, self.modulus, elems, gens, self.normalize)


def _closure(
    gens: Sequence[Mat],
    op: Callable[[Mat, Mat], Mat],
    identity: Mat,
    cap: Optional[int] = None,
) -> set[Mat]:
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt: list[Mat] = []
        for x in frontier:
            for g in gens:
                y = op(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if cap is not None and len(seen) > cap:
                        raise EnumerationCapError(
                            f"closure exceeded cap of {cap} elements"
                        )
        frontier = nxt
    return seen


def enumerate_group(
    n: int,
    modulus: int,
    generators: Sequence[Mat],
    cap: Optional[int] = 10_000_000,
) -> FiniteMatrixGroup:
    """Breadth-first closure of invertible generators mod ``modulus``."""
    for g in generators:
        _unit_inverse(mat_det(g, n, modulus), modulus)  # raises if singular
    op = lambda a, b: mat_mul(a, b, n, modulus)
    elems = _closure(list(generators), op, mat_identity(n), cap)
    return FiniteMatrixGroup(n, modulus, elems, list(generators))


def sl_generators(n: int, modulus: int) -> list[Mat]:
    """All off-diagonal elementary matrices; they generate SL_n(Z/m)."""
    return [
        elementary_mat(i, j, 1, n, modulus)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j
    ]


@lru_cache(maxsize=None)
def sl_group(n: int, modulus: int) -> FiniteMatrixGroup:
    return enumerate_group(n, modulus, sl_generators(n, modulus))


def center(group: FiniteMatrixGroup) -> list[Mat]:
    """Elements commuting with every generator."""
    out = [
        z
        for z in group.elements
        if all(group.op(z, g) == group.op(g, z) for g in group.generators)
    ]
    return out


def quotient_by_center(group: FiniteMatrixGroup) -> FiniteMatrixGroup:
    """Central quotient with min-bytes coset representatives."""
    zs = center(group)
    if len(zs) == 1:
        return group

    def rep(a: Mat) -> Mat:
        return min(mat_mul(a, z, group.n, group.modulus) for z in zs)

    reps = sorted({rep(e) for e in group.elements})
    gen_reps: list[Mat] = []
    for g in group.generators:
        r = rep(g)
        if r not in gen_reps:
            gen_reps.append(r)
    return FiniteMatrixGroup(group.n, group.modulus, reps, gen_reps, normalize=rep)


@lru_cache(maxsize=None)
def psl_group(n: int, modulus: int) -> FiniteMatrixGroup:
    return quotient_by_center(sl_group(n, modulus))


def conjugacy_classes(group: FiniteMatrixGroup) -> list[list[Mat]]:
    """Orbit partition under conjugation by the generators."""
    gens = list(group.generators)
    gen_invs = [group.inv(g) for g in gens]
    seen = [False] * len(group.elements)
    classes: list[list[Mat]] = []
    for idx, e in enumerate(group.elements):
        if seen[idx]:
            continue
        seen[idx] = True
        orbit = [e]
        queue = [e]
        while queue:
            x = queue.pop()
            for g, gi in zip(gens, gen_invs):
                y = group.op(group.op(g, x), gi)
                yi = group.index[y]
                if not seen[yi]:
                    seen[yi] = True
                    orbit.append(y)
                    queue.append(y)
        classes.append(orbit)
    return classes


def normal_closure(
    seeds: Iterable[Mat], group: FiniteMatrixGroup
) -> FiniteMatrixGroup:
    """Smallest normal subgroup containing the seeds.

    The generating set is closed under conjugation by the group's generators,
    re-enumerating the generated subgroup whenever a new conjugate appears.
    """
    gens: list[Mat] = []
    for s in seeds:
        s = group._norm(s)
        if s not in group.index:
            raise ValueError("seed lies outside the group")
        if s not in gens:
            gens.append(s)
    if not gens:
        return group.subgroup([])
    elems = _closure(gens, group.op, group.identity)
    changed = True
    while changed:
        changed = False
        for g in group.generators:
            gi = group.inv(g)
            for s in list(gens):
                c = group.op(group.op(g, s), gi)
                if c not in elems:
                    gens.append(c)
                    elems = _closure(gens, group.op, group.identity)
                    changed = True
    return FiniteMatrixGroup(group.n, group.modulus, elems, gens, group.normalize)


def is_simple(group: FiniteMatrixGroup) -> bool:
    """True iff the normal closure of every nontrivial conjugacy-class
    representative is the whole group."""
    if group.order == 1:
        return False
    for cls in conjugacy_classes(group):
        rep = cls[0]
        if rep == group.identity:
            continue
        if normal_closure([rep], group).order != group.order:
            return False
    return True


# --- reduction kernels -------------------------------------------------------


@dataclass(frozen=True)
class KernelReport:
    """Structure of the kernel of SL_n(Z/p^2) -> SL_n(Z/p)."""

    n: int
    p: int
    group_order: int
    kernel_order: int
    image_order: int
    kernel: FiniteMatrixGroup
    shape_verified: bool  # kernel == {I + pA : tr A = 0 mod p}
    additive_iso_verified: bool  # (I+pA)(I+pB) -> A+B, checked pairwise
    all_elements_order_p: bool


def _kernel_shape_members(n: int, p: int) -> set[Mat]:
    """All I + pA mod p^2 with tr A = 0 mod p."""
    m = p * p
    cells = n * n
    out: set[Mat] = set()

    def rec(pos: int, acc: list[int], diag_sum: int) -> None:
        if pos == cells:
            if diag_sum % p == 0:
                ident = mat_identity(n)
                out.add(bytes((ident[i] + p * acc[i]) % m for i in range(cells)))
            return
        on_diag = pos % (n + 1) == 0
        for val in range(p):
            acc.append(val)
            rec(pos + 1, acc, diag_sum + (val if on_diag else 0))
            acc.pop()

    rec(0, [], 0)
    return out


def kernel_of_reduction(
    n: int, p: int = 2, verify_pairs: bool = True
) -> KernelReport:
    """Kernel of the mod-p reduction of SL_n(Z/p^2), with its additive model.

    Writing each kernel element as I + pA, the map I + pA -> A mod p is an
    isomorphism onto the additive group of trace-zero matrices over Z/p;
    ``verify_pairs`` checks the homomorphism identity over every pair.
    """
    m = p * p
    group = sl_group(n, m)
    ident_small = mat_identity(n)
    kernel_elems = [e for e in group.elements if project_mod(e, p) == ident_small]
    image = {project_mod(e, p) for e in group.elements}
    sub = group.subgroup(kernel_elems)

    shape_ok = set(kernel_elems) == _kernel_shape_members(n, p)

    def additive_part(e: Mat) -> tuple[int, ...]:
        return tuple(((e[i] - ident_small[i]) // p) % p for i in range(n * n))

    parts = {e: additive_part(e) for e in kernel_elems}
    iso_ok = len(set(parts.values())) == len(kernel_elems)
    if iso_ok and verify_pairs:
        for a in kernel_elems:
            pa = parts[a]
            for b in kernel_elems:
                prod = mat_mul(a, b, n, m)
                want = tuple((pa[i] + parts[b][i]) % p for i in range(n * n))
                if parts[prod] != want:
                    iso_ok = False
                    break
            if not iso_ok:
                break

    order_p = all(mat_pow(e, p, n, m) == mat_identity(n) for e in kernel_elems)
    return KernelReport(
        n=n,
        p=p,
        group_order=group.order,
        kernel_order=len(kernel_elems),
        image_order=len(image),
        kernel=sub,
        shape_verified=shape_ok,
        additive_iso_verified=iso_ok,
        all_elements_order_p=order_p,
    )


def closure_equals_reduction_kernel(n: int, p: int, power: int) -> bool:
    """For every off-diagonal (k, r): the normal closure of e_{k,r}^power in
    SL_n(Z/p^2) is exactly the kernel of reduction mod p."""
    m = p * p
    group = sl_group(n, m)
    ident = mat_identity(n)
    kernel = {e for e in group.elements if project_mod(e, p) == ident}
    for k in range(1, n + 1):
        for r in range(1, n + 1):
            if k == r:
                continue
            seed = elementary_mat(k, r, power, n, m)
            closure = normal_closure([seed], group)
            if set(closure.elements) != kernel:
                return False
    return True


def closure_spans_kernel_additively(n: int, p: int, seed_pos: tuple[int, int]) -> bool:
    """Kernel-level check that avoids enumerating SL_n(Z/p^2).

    The kernel of SL_n(Z/p^2) -> SL_n(Z/p) is abelian: (I+pA)(I+pB) = I+p(A+B),
    so a subgroup of it is an F_p-span.  Close the seed e_{k,r}^p under
    conjugation by the elementary generators (staying inside the kernel) and
    test whether the additive parts span the full trace-zero space.
    """
    m = p * p
    k, r = seed_pos
    seed = elementary_mat(k, r, p, n, m)
    ident = mat_identity(n)
    if project_mod(seed, p) != ident:
        raise ValueError("seed does not lie in the reduction kernel")
    gens = sl_generators(n, m)
    gen_invs = [mat_inv(g, n, m) for g in gens]
    seen = {seed}
    queue = [seed]
    while queue:
        x = queue.pop()
        for g, gi in zip(gens, gen_invs):
            y = mat_mul(mat_mul(g, x, n, m), gi, n, m)
            if y not in seen:
                if project_mod(y, p) != ident:
                    raise AssertionError("conjugate left the kernel")
                seen.add(y)
                queue.append(y)

    # F_p Gaussian elimination on the additive parts.
    def additive(e: Mat) -> list[int]:
        return [((e[i] - ident[i]) // p) % p for i in range(n * n)]

    basis: list[list[int]] = []
    pivots: list[int] = []
    for vec in map(additive, sorted(seen)):
        for b, piv in zip(basis, pivots):
            if vec[piv] != 0:
                scale = vec[piv] * _unit_inverse(b[piv], p)
                vec = [(x - scale * y) % p for x, y in zip(vec, b)]
        nz = next((i for i, x in enumerate(vec) if x != 0), None)
        if nz is not None:
            basis.append(vec)
            pivots.append(nz)
    return len(basis) == n * n - 1


# --- section (splitting) searches --------------------------------------------


@dataclass(frozen=True)
class SectionSearchResult:
    found: bool
    pairs_tried: int
    pairs_expanded: int
    target_order: int
    witness: Optional[tuple] = None


def section_search(
    fiber_a: Sequence,
    fiber_b: Sequence,
    op: Callable,
    identity,
    is_kernel_element: Callable,
    order_a: int,
    order_b: int,
    target_order: int,
) -> SectionSearchResult:
    """Exhaustive search for a section through lifts of two generators.

    Any section sends the generators to lifts of the same element orders, so
    lifts failing the order test are excluded soundly; surviving pairs are
    expanded breadth-first and rejected as soon as the generated subgroup
    grows past the target order or swallows a nontrivial kernel element.
    """

    def power(x, k: int):
        out = identity
        for _ in range(k):
            out = op(out, x)
        return out

    good_a = [x for x in fiber_a if power(x, order_a) == identity]
    good_b = [x for x in fiber_b if power(x, order_b) == identity]
    pairs_tried = len(fiber_a) * len(fiber_b)
    pairs_expanded = 0
    for a in good_a:
        for b in good_b:
            pairs_expanded += 1
            seen = {identity}
            frontier = [identity]
            ok = True
            while frontier and ok:
                nxt = []
                for x in frontier:
                    for g in (a, b):
                        y = op(x, g)
                        if y not in seen:
                            if len(seen) >= target_order:
                                ok = False
                                break
                            if y != identity and is_kernel_element(y):
                                ok = False
                                break
                            seen.add(y)
                            nxt.append(y)
                    if not ok:
                        break
                frontier = nxt
            if ok and len(seen) == target_order:
                return SectionSearchResult(
                    True, pairs_tried, pairs_expanded, target_order, (a, b)
                )
    return SectionSearchResult(False, pairs_tried, pairs_expanded, target_order)


def splitting_search(
    pair: tuple[Mat, Mat], n: int = 3, p: int = 2
) -> SectionSearchResult:
    """Does SL_n(Z/p^2) -> SL_n(Z/p) split over the given generating pair?

    ``pair`` must generate SL_n(Z/p); this is certified by enumeration before
    the lift search runs.  Every lift pair is counted; completeness rests on
    the fact that a section restricts to one of these pairs.
    """
    m = p * p
    a, b = pair
    small = enumerate_group(n, p, [a, b])
    if small.order != sl_group(n, p).order:
        raise ValueError("pair does not generate the target group")
    order_a = small.element_order(a)
    order_b = small.element_order(b)

    report = kernel_of_reduction(n, p, verify_pairs=False)
    kernel_elems = list(report.kernel.elements)
    lift_a0 = bytes(x % m for x in a)  # entries already reduced mod p
    lift_b0 = bytes(x % m for x in b)
    fiber_a = [mat_mul(lift_a0, k, n, m) for k in kernel_elems]
    fiber_b = [mat_mul(lift_b0, k, n, m) for k in kernel_elems]
    ident = mat_identity(n)

    return section_search(
        fiber_a,
        fiber_b,
        op=lambda x, y: mat_mul(x, y, n, m),
        identity=ident,
        is_kernel_element=lambda x: project_mod(x, p) == mat_identity(n),
        order_a=order_a,
        order_b=order_b,
        target_order=small.order,
    )


def product_section_fixture(n: int = 3, p: int = 2) -> SectionSearchResult:
    """Sanity fixture: the projection of SL_n(Z/p) x Z/2 onto its first
    factor has an obvious section, and the search must find one."""
    pair = find_generating_pair(sl_group(n, p))
    a, b = pair
    small = enumerate_group(n, p, [a, b])
    ident = (mat_identity(n), 0)

    def op(x, y):
        return (mat_mul(x[0], y[0], n, p), (x[1] + y[1]) % 2)

    return section_search(
        fiber_a=[(a, 0), (a, 1)],
        fiber_b=[(b, 0), (b, 1)],
        op=op,
        identity=ident,
        is_kernel_element=lambda x: x[0] == mat_identity(n),
        order_a=small.element_order(a),
        order_b=small.element_order(b),
        target_order=small.order,
    )


def load_generating_pair(path: Optional[str] = None) -> tuple[Mat, Mat]:
    """Read the cached 2-element generating set (plain-text row-major rows,
    matrices separated by a blank line)."""
    if path is None:
        from importlib import resources

        text = resources.files("autfn").joinpath("data", "sl3z2_pair.txt").read_text()
    else:
        with open(path) as handle:
            text = handle.read()
    blocks = [b for b in text.strip().split("\n\n") if b.strip()]
    if len(blocks) != 2:
        raise ValueError("fixture must contain exactly two matrices")
    mats = []
    for block in blocks:
        rows = [
            [int(v) for v in line.split()]
            for line in block.strip().splitlines()
            if not line.strip().startswith("#")
        ]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("fixture matrix is not square")
        mats.append(bytes(v for row in rows for v in row))
    return (mats[0], mats[1])


def find_generating_pair(group: FiniteMatrixGroup) -> tuple[Mat, Mat]:
    """Bounded search for a 2-element generating set (first hit wins)."""
    n, m = group.n, group.modulus
    for a in group.elements:
        if a == group.identity:
            continue
        for b in group.elements:
            if b == group.identity or b == a:
                continue
            try:
                sub = _closure([a, b], group.op, group.identity, cap=group.order)
            except EnumerationCapError:
                continue
            if len(sub) == group.order:
                return (a, b)
    raise ValueError("group admits no 2-element generating set")


# --- GF(2) trace-zero space and its invariant subspaces ----------------------


def _bits_to_rows(mask: int, n: int) -> tuple[int, ...]:
    full = (1 << n) - 1
    return tuple((mask >> (i * n)) & full for i in range(n))


def _rows_to_bits(rows: Sequence[int], n: int) -> int:
    out = 0
    for i, r in enumerate(rows):
        out |= r << (i * n)
    return out


def _f2_mul_rows(x: Sequence[int], y: Sequence[int], n: int) -> tuple[int, ...]:
    out = []
    for i in range(n):
        acc = 0
        r = x[i]
        j = 0
        while r:
            if r & 1:
                acc ^= y[j]
            r >>= 1
            j += 1
        out.append(acc)
    return tuple(out)


def _trace_bit(mask: int, n: int) -> int:
    t = 0
    for i in range(n):
        t ^= (mask >> (i * n + i)) & 1
    return t


@dataclass(frozen=True)
class SubrepScan:
    """Orbit-span scan of the trace-zero GF(2) matrices under conjugation."""

    n: int
    dim: int  # n^2 - 1
    span_dims: tuple[int, ...]  # distinct orbit-span dimensions, sorted
    scalar_span_found: bool  # some vector spans exactly {0, I}
    classification: tuple[str, ...]  # labels among "0", "scalars", "full"
    complete: bool  # every invariant subspace is listed


def invariant_subreps(n: int) -> SubrepScan:
    """Span of the conjugation orbit of every nonzero trace-zero matrix.

    Each such span is the smallest invariant subspace containing its seed, so
    the set of spans determines all invariant subspaces: any invariant W is a
    union of spans of its members.
    """
    if n not in (3, 4):
        raise ValueError("scan is sized for n in {3, 4}")
    gens_rows = [
        _bits_to_rows(_mask_of_elementary(i, j, n), n)
        for i in range(n)
        for j in range(n)
        if i != j
    ]
    # Elementary matrices are involutions over GF(2): g^-1 = g.
    cells = n * n
    identity_mask = sum(1 << (i * n + i) for i in range(n))

    def conj(mask: int, g_rows: tuple[int, ...]) -> int:
        a_rows = _bits_to_rows(mask, n)
        return _rows_to_bits(
            _f2_mul_rows(_f2_mul_rows(g_rows, a_rows, n), g_rows, n), n
        )

    seen: set[int] = set()
    spans: dict[tuple[int, ...], int] = {}  # echelon signature -> dim
    scalar_span_found = False
    for v in range(1, 1 << cells):
        if _trace_bit(v, n) != 0 or v in seen:
            continue
        orbit = {v}
        queue = [v]
        while queue:
            x = queue.pop()
            for g in gens_rows:
                y = conj(x, g)
                if y not in orbit:
                    orbit.add(y)
                    queue.append(y)
        seen |= orbit
        basis: list[int] = []
        for w in sorted(orbit):
            for b in basis:
                if w.bit_length() == b.bit_length():
                    w ^= b
            if w:
                basis.append(w)
                basis.sort(key=int.bit_length, reverse=True)
        # Clear pivot bits from the other rows so the signature is canonical
        # for the subspace, not for the particular orbit that produced it.
        for i in range(len(basis)):
            pivot = 1 << (basis[i].bit_length() - 1)
            for j in range(len(basis)):
                if i != j and basis[j] & pivot:
                    basis[j] ^= basis[i]
        signature = tuple(sorted(basis))
        spans[signature] = len(basis)
        if signature == (identity_mask,):
            scalar_span_found = True

    dims = tuple(sorted(set(spans.values())))
    full_dim = cells - 1
    labels = ["0"]
    if scalar_span_found:
        labels.append("scalars")
    if full_dim in dims:
        labels.append("full")
    complete = all(
        d == full_dim or (d == 1 and scalar_span_found) for d in dims
    )
    return SubrepScan(
        n=n,
        dim=full_dim,
        span_dims=dims,
        scalar_span_found=scalar_span_found,
        classification=tuple(labels),
        complete=complete,
    )


def _mask_of_elementary(i: int, j: int, n: int) -> int:
    mask = sum(1 << (k * n + k) for k in range(n))
    return mask | (1 << (i * n + j))


# --- diagonal-parity obstruction ----------------------------------------------


@dataclass(frozen=True)
class ObstructionReport:
    """Infeasibility certificate for the diagonal-parity system.

    ``equations`` are (variable bitmask, parity) pairs over d_1..d_n; the
    certificate rows XOR to 0 = 1, and the all-zero assignment violates
    exactly one equation.
    """

    n: int
    feasible: bool
    equations: tuple[tuple[int, int], ...]
    certificate: tuple[int, ...]
    assignment: tuple[int, ...]


def split_obstruction(n: int) -> ObstructionReport:
    """GF(2) infeasibility of the diagonal constraints behind lifting an
    elementary involution pair through the mod-4 cover.

    Variables d_1..d_n are the diagonal entries of the correcting matrix for
    the probe pair (1, 2); commutation with disjoint pairs forces equal
    diagonal entries away from the probe, and the trace-zero requirement
    closes the contradiction.  Needs two index pairs disjoint from the probe,
    hence even n >= 6.
    """
    if n % 2 != 0 or n < 6:
        raise ValueError(
            "obstruction system needs an even n >= 6: the argument uses two "
            "disjoint index pairs away from the probe pair (1, 2)"
        )
    equations: list[tuple[int, int]] = [(0b11, 1)]  # d1 + d2 = 1
    others = list(range(3, n + 1))
    for ui in range(len(others)):
        for vi in range(ui + 1, len(others)):
            mask = (1 << (others[ui] - 1)) | (1 << (others[vi] - 1))
            equations.append((mask, 0))
    equations.append(((1 << n) - 1, 0))  # trace-zero membership

    # Eliminate, tracking provenance of each row as a set of equation indices.
    rows = [(mask, rhs, 1 << idx) for idx, (mask, rhs) in enumerate(equations)]
    reduced: list[tuple[int, int, int]] = []
    contradiction: Optional[int] = None
    for mask, rhs, prov in rows:
        for bmask, brhs, bprov in reduced:
            low = bmask & -bmask
            if mask & low:
                mask ^= bmask
                rhs ^= brhs
                prov ^= bprov
        if mask == 0:
            if rhs == 1:
                contradiction = prov
                break
        else:
            reduced.append((mask, rhs, prov))
            reduced.sort(key=lambda row: row[0] & -row[0])
    if contradiction is None:
        return ObstructionReport(n, True, tuple(equations), (), ())
    combo = tuple(i for i in range(len(equations)) if contradiction >> i & 1)
    assignment = tuple([0] * n)
    return ObstructionReport(n, False, tuple(equations), combo, assignment)


def verify_obstruction_certificate(report: ObstructionReport) -> bool:
    """Machine-check the certificate: the combo XORs to 0 = 1 and the
    assignment violates exactly one equation."""
    if report.feasible:
        return False
    mask, rhs = 0, 0
    for idx in report.certificate:
        emask, erhs = report.equations[idx]
        mask ^= emask
        rhs ^= erhs
    if mask != 0 or rhs != 1:
        return False
    violated = 0
    for emask, erhs in report.equations:
        acc = 0
        bits = emask
        i = 0
        while bits:
            if bits & 1:
                acc ^= report.assignment[i]
            bits >>= 1
            i += 1
        if acc != erhs:
            violated += 1
    return violated == 1
