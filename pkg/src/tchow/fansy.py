"""Marked fansy divisors and their cycle-generator combinatorics.

A marked fansy divisor is the combinatorial datum of a complete rational
complexity-one torus variety: a complete fan (the tailfan of the general
fiber), one complete polyhedral subdivision per special point of the base
line, and a marked set of tailfan cones recording which invariant cycles the
contraction morphism collapses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .exactlin import Vec, dot, hnf_basis, primitive, project, quotient_matrix, vec
from .polyhedra import (
    Cone,
    Fan,
    NonFanTailsError,
    PolyhedralComplex,
    Polyhedron,
    all_complex_faces,
    complex_tailfan,
    complex_validate,
    cone_as_polyhedron,
    cone_faces,
    empty_polyhedron,
    fan_is_complete,
    fan_validate,
    make_complex,
    minkowski_sum,
    poly_intersect,
)

AUX_LABELS = ("aux1", "aux2")


class NonUniqueFaceError(ValueError):
    """A marked cone fails to have a unique face over some point."""


@dataclass(frozen=True)
class MarkedFansyDivisor:
    """Tailfan, per-point subdivisions and marked cones; dim X = rank + 1.

    ``points`` is ordered; the last label plays the role of the basepoint at
    infinity in all relation blocks.
    """

    rank: int
    points: tuple[str, ...]
    complexes: tuple[PolyhedralComplex, ...]
    tailfan: Fan
    marked: frozenset[Cone]

    @property
    def n(self) -> int:
        return self.rank

    @property
    def dim_x(self) -> int:
        return self.rank + 1

    def complex_at(self, p: str) -> PolyhedralComplex:
        return self.complexes[self.points.index(p)]

    def is_marked(self, c: Cone) -> bool:
        return c in self.marked

    def point_index(self, p: str) -> int:
        return self.points.index(p)


@dataclass(frozen=True)
class CycleGenerator:
    """One invariant-cycle class: horizontal (R), vertical (V) or contracted (T)."""

    kind: str  # "V", "R" or "T"
    point: str | None = None
    face: Polyhedron | None = None
    cone: Cone | None = None

    def label(self) -> str:
        if self.kind == "V":
            verts = ",".join(
                "(" + ",".join(str(c) for c in v) + ")" for v in self.face.vertices
            )
            rays = ",".join(
                "(" + ",".join(str(c) for c in r) + ")" for r in self.face.tail.generators
            )
            return f"V[{self.point}; verts {verts}; rays {rays}]"
        rays = ",".join(
            "(" + ",".join(str(c) for c in r) + ")" for r in self.cone.generators
        )
        return f"{self.kind}[{rays}]"


def generator_sort_key(x: MarkedFansyDivisor, g: CycleGenerator):
    kind_order = {"V": 0, "R": 1, "T": 2}
    if g.kind == "V":
        return (kind_order[g.kind], x.point_index(g.point), g.face.sort_key())
    return (kind_order[g.kind], 0, g.cone.sort_key())


@dataclass(frozen=True)
class GeneratorSets:
    r: tuple[CycleGenerator, ...]
    v: tuple[CycleGenerator, ...]
    t: tuple[CycleGenerator, ...]

    @property
    def counts(self) -> tuple[int, int, int]:
        return (len(self.r), len(self.v), len(self.t))

    def ordered(self) -> tuple[CycleGenerator, ...]:
        return self.v + self.r + self.t


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(f"[{v.code}] {v.message}" for v in self.violations)


def sigma_as_complex(fan: Fan) -> PolyhedralComplex:
    """The trivial subdivision: the fan itself, viewed as a complex."""
    return make_complex(
        [cone_as_polyhedron(c) for c in fan.maximal_cones], fan.ambient_rank
    )


def make_divisor(
    rank: int,
    labeled_complexes: Sequence[tuple[str, PolyhedralComplex]],
    marked: Iterable[Cone],
) -> MarkedFansyDivisor:
    """Assemble a marked fansy divisor, padding to at least two points.

    Fewer than two supplied points get generic fibers (the tailfan itself)
    appended under the labels ``aux1``/``aux2``; the final point is the
    basepoint.
    """
    if not labeled_complexes:
        raise ValueError("at least one fiber subdivision is required")
    tailfan = complex_tailfan(labeled_complexes[0][1])
    pairs = list(labeled_complexes)
    i = 0
    while len(pairs) < 2:
        pairs.append((AUX_LABELS[i], sigma_as_complex(tailfan)))
        i += 1
    return MarkedFansyDivisor(
        rank,
        tuple(p for p, _ in pairs),
        tuple(s for _, s in pairs),
        tailfan,
        frozenset(marked),
    )


def with_extra_generic_point(x: MarkedFansyDivisor, label: str) -> MarkedFansyDivisor:
    """The same variety presented with one more generic fiber marked special."""
    return MarkedFansyDivisor(
        x.rank,
        x.points + (label,),
        x.complexes + (sigma_as_complex(x.tailfan),),
        x.tailfan,
        x.marked,
    )


def with_point_order(x: MarkedFansyDivisor, order: Sequence[str]) -> MarkedFansyDivisor:
    """Reorder the special points (changing which one is the basepoint)."""
    if sorted(order) != sorted(x.points):
        raise ValueError("order must be a permutation of the points")
    return MarkedFansyDivisor(
        x.rank,
        tuple(order),
        tuple(x.complex_at(p) for p in order),
        x.tailfan,
        x.marked,
    )


@dataclass(frozen=True)
class PDivisorSlice:
    """The formal sum with tail ``tail`` assembled from per-point fiber faces.

    Coefficients are keyed by point label in point order; a point without a
    face of the given tail carries the empty polyhedron.
    """

    tail: Cone
    coefficients: tuple[tuple[str, Polyhedron], ...]

    def coefficient(self, p: str) -> Polyhedron:
        for label, poly in self.coefficients:
            if label == p:
                return poly
        raise KeyError(p)


def pdivisor_slice(x: "MarkedFansyDivisor", sigma: Cone) -> PDivisorSlice:
    """The slice of the divisor with the given tailcone.

    Each fiber must contain at most one face with that tail (always true for
    full-dimensional or marked cones of a valid divisor).
    """
    coeffs = []
    for p in x.points:
        hits = faces_with_tail(x.complex_at(p), sigma)
        if len(hits) > 1:
            raise NonUniqueFaceError(
                f"{len(hits)} faces with tail {sigma.generators} over {p}"
            )
        coeffs.append((p, hits[0] if hits else empty_polyhedron(x.rank)))
    return PDivisorSlice(sigma, tuple(coeffs))


def faces_with_tail(s: PolyhedralComplex, c: Cone) -> list[Polyhedron]:
    return [f for f in all_complex_faces(s) if f.tail == c]


def unique_face_over(x: MarkedFansyDivisor, sigma: Cone, p: str) -> Polyhedron:
    """The unique face of the fiber over ``p`` whose tailcone is ``sigma``."""
    if not x.is_marked(sigma):
        raise NonUniqueFaceError("cone is not marked; its fiber face need not be unique")
    hits = faces_with_tail(x.complex_at(p), sigma)
    if len(hits) != 1:
        raise NonUniqueFaceError(
            f"expected exactly one face with tail {sigma.generators} over {p}, found {len(hits)}"
        )
    return hits[0]


def mu_of_face(x: MarkedFansyDivisor, p: str, face: Polyhedron) -> int:
    """Multiplicity of the image vertex of a fiber face.

    The face is projected modulo the span of its tailcone; the result is the
    lcm of the multiplicities of the image polytope's vertices (for a face
    whose dimension equals its tail's the image is a single vertex).
    """
    q = quotient_matrix([vec(g) for g in face.tail.generators], x.rank)
    if not q or not q[0]:
        return 1
    images = {project(q, v) for v in face.vertices}
    return lcm(*(primitive(im)[1] for im in images))


def vertex_image(x: MarkedFansyDivisor, face: Polyhedron) -> Vec:
    """Image of a tail-collapsed face under projection modulo its tail span."""
    q = quotient_matrix([vec(g) for g in face.tail.generators], x.rank)
    if not q or not q[0]:
        return ()
    images = {project(q, v) for v in face.vertices}
    if len(images) != 1:
        raise ValueError("face does not collapse to a vertex modulo its tail")
    return next(iter(images))


def s_sigma(x: MarkedFansyDivisor, sigma: Cone) -> int:
    """Order of the vertex-class group of a marked cone.

    The images of the per-point unique-face vertices generate a finite
    subgroup of ``N(sigma)_Q / N(sigma)``; this returns its order.  The
    multiplicity of every tail-``sigma`` face divides it.
    """
    if not x.is_marked(sigma):
        raise ValueError("s_sigma is defined for marked cones only")
    q = quotient_matrix([vec(g) for g in sigma.generators], x.rank)
    r = len(q[0]) if q else 0
    if r == 0:
        return 1
    vbars = []
    for p in x.points:
        face = unique_face_over(x, sigma, p)
        vbars.append(vec(project(q, face.vertices[0])))
    d = lcm(*(f.denominator for vb in vbars for f in vb)) if vbars else 1
    if d == 1:
        return 1
    rows = [[d if i == j else 0 for j in range(r)] for i in range(r)]
    rows += [[int(f * d) for f in vb] for vb in vbars]
    basis = hnf_basis(rows)
    covolume = 1
    for i, row in enumerate(basis):
        covolume *= row[i]
    return d**r // covolume


def deg_xi(x: MarkedFansyDivisor) -> list[tuple[Cone, Polyhedron]]:
    """Per marked full-dimensional cone, the Minkowski sum of its fiber cells."""
    out = []
    for sigma in x.tailfan.cones(x.rank):
        if not x.is_marked(sigma):
            continue
        total = None
        for p in x.points:
            cell = unique_face_over(x, sigma, p)
            total = cell if total is None else minkowski_sum(total, cell)
        out.append((sigma, total))
    return out


def enumerate_generators(x: MarkedFansyDivisor, k: int) -> GeneratorSets:
    """The three generator families of the k-cycle presentation.

    R: unmarked tailfan cones of dimension ``n+1-k``; V: fiber faces of
    dimension ``n-k`` with unmarked tail, over every special point; T: marked
    cones of dimension ``n-k``.
    """
    n = x.rank
    if not 0 <= k <= n + 1:
        raise ValueError(f"k must lie in [0, {n + 1}]")
    r_gens = [
        CycleGenerator("R", cone=c)
        for c in x.tailfan.cones(n + 1 - k)
        if not x.is_marked(c)
    ]
    v_gens = []
    if 0 <= n - k:
        for p in x.points:
            for f in all_complex_faces(x.complex_at(p)):
                if f.dim == n - k and not x.is_marked(f.tail):
                    v_gens.append(CycleGenerator("V", point=p, face=f))
    t_gens = [
        CycleGenerator("T", cone=c) for c in x.tailfan.cones(n - k) if x.is_marked(c)
    ]
    key = lambda g: generator_sort_key(x, g)
    return GeneratorSets(
        tuple(sorted(r_gens, key=key)),
        tuple(sorted(v_gens, key=key)),
        tuple(sorted(t_gens, key=key)),
    )


def _poly_min(face: Polyhedron, u: Sequence) -> Fraction | None:
    """Exact minimum of ``<u, .>`` on a polyhedron; None when unbounded below."""
    if any(dot(u, r) < 0 for r in face.tail.generators):
        return None
    return min(dot(u, v) for v in face.vertices)


def validate(x: MarkedFansyDivisor) -> ValidationReport:
    """Check every defining condition of a marked fansy divisor.

    Returns a report listing each violated condition; never raises on
    well-formed (if invalid) input.
    """
    out: list[Violation] = []
    add = lambda code, msg: out.append(Violation(code, msg))

    if len(x.points) < 2:
        add("TOO_FEW_POINTS", "at least two special points are required")
    if len(set(x.points)) != len(x.points):
        add("DUPLICATE_POINTS", "point labels must be distinct")
    if len(x.points) != len(x.complexes):
        add("POINTS_COMPLEXES_MISMATCH", "one subdivision per point is required")
        return ValidationReport(out)

    for problem in fan_validate(x.tailfan):
        add("BAD_TAILFAN", problem)
    if not fan_is_complete(x.tailfan):
        add("INCOMPLETE_TAILFAN", "the tailfan does not cover the whole space")

    complexes_ok = True
    for p, s in zip(x.points, x.complexes):
        problems = complex_validate(s)
        for problem in problems:
            add("BAD_COMPLEX", f"fiber over {p}: {problem}")
        if problems:
            complexes_ok = False
            continue
        try:
            tf = complex_tailfan(s)
        except NonFanTailsError as exc:
            add("NON_FAN_TAILS", f"fiber over {p}: {exc}")
            complexes_ok = False
            continue
        if tf != x.tailfan:
            add("TAILFAN_MISMATCH", f"fiber over {p} has a different tailfan")
            complexes_ok = False
    if not complexes_ok or not fan_is_complete(x.tailfan):
        return ValidationReport(out)

    fan_all = set(x.tailfan.all_cones())
    for c in x.marked:
        if c not in fan_all:
            add("MARK_NOT_IN_FAN", f"marked cone {c.generators} is not in the tailfan")
    if any(c.is_zero() for c in x.marked):
        add("MARKED_ZERO_CONE", "the zero cone must not be marked")
    if any(v.code == "MARK_NOT_IN_FAN" for v in out):
        return ValidationReport(out)

    for tau in x.marked:
        for sigma in fan_all:
            if sigma.dim > tau.dim and sigma.contains_cone(tau) and sigma not in x.marked:
                add(
                    "MARKS_NOT_UPWARD_CLOSED",
                    f"{tau.generators} is marked but the containing cone "
                    f"{sigma.generators} is not",
                )

    unique_ok = True
    for sigma in sorted(x.marked, key=Cone.sort_key):
        for p in x.points:
            hits = faces_with_tail(x.complex_at(p), sigma)
            if len(hits) != 1:
                add(
                    "NON_UNIQUE_MARKED_FACE",
                    f"marked cone {sigma.generators} has {len(hits)} faces over {p}",
                )
                unique_ok = False
            elif hits[0].dim != sigma.dim:
                add(
                    "MARKED_FACE_DIM",
                    f"the face over {p} with tail {sigma.generators} is not a translate",
                )
                unique_ok = False
    if not unique_ok:
        return ValidationReport(out)

    for sigma in x.tailfan.cones(x.rank):
        if not x.is_marked(sigma):
            continue
        cells = [unique_face_over(x, sigma, p) for p in x.points]
        for u in sigma.normals:
            mins = [_poly_min(cell, u) for cell in cells]
            if any(m is None for m in mins):
                add(
                    "EVALUATION_UNBOUNDED",
                    f"cell with tail {sigma.generators} sticks out of its dual constraint {u}",
                )
            elif sum(m for m in mins) < 0:
                add(
                    "NOT_SEMIAMPLE",
                    f"marked cone {sigma.generators}: evaluation against {u} "
                    "has negative total degree",
                )
        deg = None
        for cell in cells:
            deg = cell if deg is None else minkowski_sum(deg, cell)
        for tau in cone_faces(sigma):
            if tau == sigma:
                continue
            meets = not poly_intersect(deg, cone_as_polyhedron(tau)).is_empty
            if meets and not x.is_marked(tau) and not tau.is_zero():
                add(
                    "MARKING_TOO_SMALL",
                    f"face {tau.generators} of {sigma.generators} meets the degree "
                    "locus but is unmarked",
                )
            if meets and tau.is_zero():
                add(
                    "DEGREE_MEETS_ORIGIN",
                    f"degree locus of {sigma.generators} contains the origin",
                )
            if not meets and x.is_marked(tau):
                add(
                    "MARKING_TOO_LARGE",
                    f"face {tau.generators} of {sigma.generators} is marked but "
                    "misses the degree locus",
                )
    return ValidationReport(out)
