"""Exact integer and rational linear algebra.

All arithmetic is done with arbitrary-precision ints and ``fractions.Fraction``;
nothing here ever rounds.  Matrices are plain lists of rows, vectors are
tuples, so every value is hashable once frozen into a tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]
IVec = tuple[int, ...]


def vec(entries: Iterable) -> Vec:
    return tuple(Fraction(e) for e in entries)


def ivec(entries: Iterable) -> IVec:
    out = []
    for e in entries:
        f = Fraction(e)
        if f.denominator != 1:
            raise ValueError(f"expected integer entry, got {e}")
        out.append(int(f))
    return tuple(out)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise ValueError("dimension mismatch in dot product")
    return sum(a * b for a, b in zip(u, v))


def vadd(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u: Sequence) -> tuple:
    return tuple(c * a for a in u)


def is_zero_vec(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def identity_matrix(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if a and b and len(a[0]) != len(b):
        raise ValueError("dimension mismatch in matrix product")
    bt = list(zip(*b)) if b else []
    return [[dot(row, col) for col in bt] for row in a]


def mat_vec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in a)


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)] if a else []


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _row_sub(m: list[list[int]], i: int, j: int, q: int) -> None:
    if q:
        mi, mj = m[i], m[j]
        for c in range(len(mi)):
            mi[c] -= q * mj[c]


def hnf(m: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u @ m == h``.  ``h`` is in
    row echelon form with positive pivots; entries above a pivot are reduced
    into ``[0, pivot)``.
    """
    nr = len(m)
    nc = len(m[0]) if nr else 0
    h = [list(map(int, row)) for row in m]
    u = identity_matrix(nr)
    row = 0
    for col in range(nc):
        if row == nr:
            break
        while True:
            nz = [i for i in range(row, nr) if h[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(h[i][col]))
            if piv != row:
                h[row], h[piv] = h[piv], h[row]
                u[row], u[piv] = u[piv], u[row]
            clean = True
            for i in range(row + 1, nr):
                if h[i][col] != 0:
                    q = h[i][col] // h[row][col]
                    _row_sub(h, i, row, q)
                    _row_sub(u, i, row, q)
                    if h[i][col] != 0:
                        clean = False
            if clean:
                break
        if h[row][col] != 0:
            if h[row][col] < 0:
                h[row] = [-x for x in h[row]]
                u[row] = [-x for x in u[row]]
            for i in range(row):
                q = h[i][col] // h[row][col]
                _row_sub(h, i, row, q)
                _row_sub(u, i, row, q)
            row += 1
    return h, u


def hnf_basis(rows: Sequence[Sequence[int]]) -> tuple[IVec, ...]:
    """Canonical HNF basis of the integer row span (zero rows dropped)."""
    if not rows:
        return ()
    h, _ = hnf(rows)
    return tuple(tuple(r) for r in h if any(x != 0 for x in r))


def snf_transforms(
    m: Sequence[Sequence[int]],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form with transforms: returns ``(u, d, v)``, ``u@m@v == d``.

    ``u`` and ``v`` are unimodular and ``d`` is diagonal with nonnegative
    entries satisfying ``d[i] | d[i+1]``.
    """
    nr = len(m)
    nc = len(m[0]) if nr else 0
    d = [list(map(int, row)) for row in m]
    u = identity_matrix(nr)
    v = identity_matrix(nc)

    def col_sub(j: int, t: int, q: int) -> None:
        if q:
            for r in range(nr):
                d[r][j] -= q * d[r][t]
            for r in range(nc):
                v[r][j] -= q * v[r][t]

    def col_swap(j: int, t: int) -> None:
        for r in range(nr):
            d[r][j], d[r][t] = d[r][t], d[r][j]
        for r in range(nc):
            v[r][j], v[r][t] = v[r][t], v[r][j]

    t = 0
    while t < min(nr, nc):
        entries = [
            (abs(d[i][j]), i, j)
            for i in range(t, nr)
            for j in range(t, nc)
            if d[i][j] != 0
        ]
        if not entries:
            break
        _, pi, pj = min(entries)
        if pi != t:
            d[pi], d[t] = d[t], d[pi]
            u[pi], u[t] = u[t], u[pi]
        if pj != t:
            col_swap(pj, t)
        dirty = False
        for i in range(t + 1, nr):
            if d[i][t] != 0:
                q = d[i][t] // d[t][t]
                _row_sub(d, i, t, q)
                _row_sub(u, i, t, q)
                if d[i][t] != 0:
                    dirty = True
        for j in range(t + 1, nc):
            if d[t][j] != 0:
                q = d[t][j] // d[t][t]
                col_sub(j, t, q)
                if d[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        pivot = d[t][t]
        off = next(
            (
                (i, j)
                for i in range(t + 1, nr)
                for j in range(t + 1, nc)
                if d[i][j] % pivot != 0
            ),
            None,
        )
        if off is not None:
            i, _ = off
            _row_sub(d, t, i, -1)
            _row_sub(u, t, i, -1)
            continue
        if pivot < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, d, v


def snf(m: Sequence[Sequence[int]]) -> tuple[list[int], int]:
    """Smith invariants ``> 1`` and the free rank of the cokernel.

    The cokernel is ``Z^{cols} / (row span of m)``; its free rank is
    ``cols - rank(m)`` and its torsion is the product of the listed invariants.
    """
    nc = len(m[0]) if m else 0
    _, d, _ = snf_transforms(m)
    diag = [d[i][i] for i in range(min(len(d), nc))] if m else []
    nonzero = [x for x in diag if x != 0]
    return [x for x in nonzero if x > 1], nc - len(nonzero)


def primitive(v: Sequence) -> tuple[IVec, int]:
    """Clear denominators: ``(w, mu)`` with ``w = mu*v`` and ``mu`` minimal.

    For ``v = 0`` returns ``(0, 1)``.  ``mu`` is the multiplicity of ``v`` as
    a rational point: the smallest positive integer making it a lattice point.
    """
    fv = vec(v)
    mu = lcm(*(f.denominator for f in fv)) if fv else 1
    return tuple(int(f * mu) for f in fv), mu


def primitive_direction(v: Sequence) -> IVec:
    """Primitive lattice vector on the ray through ``v`` (0 maps to 0)."""
    w, _ = primitive(v)
    g = gcd(*(abs(x) for x in w)) if any(w) else 1
    return tuple(x // (g or 1) for x in w)


def solve_left(a: Sequence[Sequence], b: Sequence) -> Vec | None:
    """Solve ``x @ a == b`` exactly over the rationals; None if inconsistent.

    ``a`` has ``len(a)`` rows; the solution has one coordinate per row.  When
    the rows are dependent an arbitrary consistent solution is returned.
    """
    rows = [vec(r) for r in a]
    target = vec(b)
    nr = len(rows)
    nc = len(target)
    if any(len(r) != nc for r in rows):
        raise ValueError("dimension mismatch")
    # Gaussian elimination on [a^T | b^T], tracking row combinations.
    aug = [[rows[i][c] for i in range(nr)] + [target[c]] for c in range(nc)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(nr):
        piv = next((i for i in range(r, nc) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = Fraction(1) / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(nc):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
    for i in range(r, nc):
        if aug[i][nr] != 0:
            return None
    x = [Fraction(0)] * nr
    for row, col in pivots:
        x[col] = aug[row][nr]
    return tuple(x)


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> tuple[IVec, ...]:
    """HNF basis of ``{x in Z^ncols : <x, r> = 0 for every row r}``.

    The result is saturated: it is the full lattice of integer solutions.
    """
    if not rows:
        return hnf_basis(identity_matrix(ncols))
    at = [[row[i] for row in rows] for i in range(ncols)]
    h, u = hnf(at)
    kernel = [u[i] for i in range(ncols) if all(x == 0 for x in h[i])]
    return hnf_basis(kernel)


@dataclass(frozen=True)
class Sublattice:
    """A saturable sublattice of Z^n, stored via a canonical row-HNF basis."""

    ambient_rank: int
    basis: tuple[IVec, ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], ambient_rank: int) -> "Sublattice":
        return Sublattice(ambient_rank, hnf_basis(rows))

    @staticmethod
    def full(ambient_rank: int) -> "Sublattice":
        return Sublattice.from_rows(identity_matrix(ambient_rank), ambient_rank)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coords(self, w: Sequence) -> Vec | None:
        """Rational coordinates of ``w`` in this basis, or None if outside the span."""
        sol = solve_left(self.basis, w) if self.basis else None
        if self.basis:
            return sol
        return () if is_zero_vec(vec(w)) else None

    def contains(self, w: Sequence[int]) -> bool:
        c = self.coords(w)
        return c is not None and all(f.denominator == 1 for f in c)


def perp_lattice(span_basis: Sequence[Sequence], ambient_rank: int) -> Sublattice:
    """The saturated lattice ``{m in Z^n : <m, v> = 0 for all spanning v}``."""
    int_rows = []
    for v in span_basis:
        w, _ = primitive(v)
        if any(w):
            int_rows.append(list(w))
    return Sublattice(ambient_rank, integer_kernel(int_rows, ambient_rank))


def saturation(rows: Sequence[Sequence], ambient_rank: int) -> Sublattice:
    """Saturated lattice ``span_Q(rows) ∩ Z^n`` via a double perp."""
    return perp_lattice(perp_lattice(rows, ambient_rank).basis, ambient_rank)


def lattice_index(inner: Sublattice, outer: Sublattice) -> int:
    """Index ``[outer : inner]`` for equal-rank nested sublattices."""
    if inner.ambient_rank != outer.ambient_rank:
        raise ValueError("ambient ranks differ")
    if inner.rank != outer.rank:
        raise ValueError("lattice_index requires equal ranks")
    change = []
    for row in inner.basis:
        c = outer.coords(row)
        if c is None or any(f.denominator != 1 for f in c):
            raise ValueError("inner lattice is not contained in outer lattice")
        change.append([int(f) for f in c])
    d = det(change)
    if d == 0:
        raise ValueError("inner basis is degenerate")
    return abs(d)


def quotient_generator(inner: Sublattice, outer: Sublattice) -> tuple[IVec, int]:
    """A vector of ``outer`` generating the free part of ``outer / inner``.

    Requires ``rank(outer) == rank(inner) + 1`` and containment.  Returns
    ``(v, index)`` where ``index`` is the order of the torsion subgroup of
    ``outer / (inner + Z v)`` (1 whenever ``inner`` is saturated in ``outer``).
    The sign of ``v`` is arbitrary; callers needing an orientation must fix it.
    """
    if inner.ambient_rank != outer.ambient_rank:
        raise ValueError("ambient ranks differ")
    if outer.rank != inner.rank + 1:
        raise ValueError("quotient_generator requires rank(outer) == rank(inner) + 1")
    change = []
    for row in inner.basis:
        c = outer.coords(row)
        if c is None or any(f.denominator != 1 for f in c):
            raise ValueError("inner lattice is not contained in outer lattice")
        change.append([int(f) for f in c])
    k1 = outer.rank
    if not change:
        # inner is zero; outer has rank 1
        return outer.basis[0], 1
    _, d, v = snf_transforms(change)
    vinv = unimodular_inverse(v)
    free_coords = vinv[k1 - 1]
    gen = tuple(
        sum(free_coords[i] * outer.basis[i][j] for i in range(k1))
        for j in range(outer.ambient_rank)
    )
    index = 1
    for i in range(len(change)):
        index *= abs(d[i][i])
    if index == 0:
        raise ValueError("inner basis is degenerate")
    return gen, index


def unimodular_inverse(m: Sequence[Sequence[int]]) -> list[list[int]]:
    """Exact inverse of a unimodular integer matrix."""
    n = len(m)
    aug = [list(map(Fraction, m[i])) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = Fraction(1) / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    out = []
    for i in range(n):
        row = aug[i][n:]
        if any(f.denominator != 1 for f in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(f) for f in row])
    return out


def face_character_lattice(
    tail_span: Sequence[Sequence], vertex_image: Sequence, ambient_rank: int
) -> Sublattice:
    """Characters integral on a face: ``{m ⟂ tail_span : <m, vertex> ∈ Z}``.

    The index of the result inside the perp lattice of ``tail_span`` equals
    the multiplicity of ``vertex_image``.
    """
    m0 = perp_lattice(tail_span, ambient_rank)
    if m0.rank == 0:
        return m0
    vert = vec(vertex_image)
    vals = [dot(b, vert) for b in m0.basis]
    q = lcm(*(t.denominator for t in vals))
    if q == 1:
        return m0
    row = [int(t * q) for t in vals] + [q]
    kern = integer_kernel([row], m0.rank + 1)
    coeff_rows = [k[:-1] for k in kern]
    new_rows = [
        [sum(c[i] * m0.basis[i][j] for i in range(m0.rank)) for j in range(ambient_rank)]
        for c in coeff_rows
    ]
    return Sublattice.from_rows(new_rows, ambient_rank)


def quotient_matrix(span_rows: Sequence[Sequence], ambient_rank: int) -> list[list[int]]:
    """Integer matrix ``P`` (n x q) realizing the projection ``N -> N/span``.

    The map ``x -> x @ P`` sends ``Z^n`` onto ``Z^q`` with kernel exactly the
    rational span of ``span_rows``; ``q = n - dim(span)``.
    """
    sat = saturation(span_rows, ambient_rank)
    r = sat.rank
    n = ambient_rank
    if r == 0:
        return identity_matrix(n)
    _, d, v = snf_transforms([list(row) for row in sat.basis])
    for i in range(r):
        if d[i][i] != 1:
            raise AssertionError("saturated lattice must have unit invariants")
    return [[v[i][j] for j in range(r, n)] for i in range(n)]


def project(p_matrix: Sequence[Sequence[int]], x: Sequence) -> tuple:
    """Apply a quotient matrix: image of row vector ``x``."""
    cols = len(p_matrix[0]) if p_matrix else 0
    return tuple(sum(x[i] * p_matrix[i][j] for i in range(len(x))) for j in range(cols))


def pair_through_quotient(
    m: Sequence, p_matrix: Sequence[Sequence[int]], image_vec: Sequence
):
    """Pair a character ``m`` that kills ``ker(P)`` with a vector in the quotient.

    Solves ``m = P @ mbar`` and returns ``<mbar, image_vec>``.
    """
    q = len(p_matrix[0]) if p_matrix else 0
    cols = [[p_matrix[i][j] for i in range(len(p_matrix))] for j in range(q)]
    mbar = solve_left(cols, m)
    if mbar is None:
        raise ValueError("character does not vanish on the projected-out span")
    return dot(mbar, image_vec)


def minimal_lattice_multiple(q_vec: Sequence, lattice_rows: Sequence[Sequence]) -> tuple:
    """Smallest positive multiple of ``q_vec`` lying in the given rational lattice."""
    coords = solve_left(lattice_rows, q_vec)
    if coords is None:
        raise ValueError("vector is not in the lattice span")
    if not any(coords):
        return vec(q_vec)
    b = lcm(*(c.denominator for c in coords))
    nums = [int(c * b) for c in coords]
    g = gcd(*(abs(x) for x in nums))
    return vscale(Fraction(b, g), vec(q_vec))
