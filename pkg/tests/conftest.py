"""Shared test helpers: seeded random fans and bundles at desk scale."""

import random

from tchow.build import KlyachkoBundle, RayFiltration
from tchow.exactlin import primitive_direction, vec
from tchow.polyhedra import Fan, make_cone, make_fan, make_polyhedron


def random_complete_fan(rng: random.Random, rank: int = 3, max_extra: int = 6) -> Fan:
    """Face fan of a random lattice polytope with the origin in its interior."""
    pts = set()
    for s in (1, -1):
        for i in range(rank):
            v = [0] * rank
            v[i] = s
            pts.add(tuple(v))
    for _ in range(rng.randint(1, max_extra)):
        p = tuple(rng.randint(-3, 3) for _ in range(rank))
        if any(p):
            pts.add(primitive_direction(vec(p)))
    hull = make_polyhedron(list(pts), [], rank)
    cones = []
    for u, rhs in hull.ineqs:
        tight = [v for v in hull.vertices if sum(a * b for a, b in zip(u, v)) == rhs]
        cones.append(make_cone(tight, rank))
    return make_fan(cones, rank)


def random_bundle(rng: random.Random, base: Fan) -> KlyachkoBundle:
    """Arbitrary rank-two filtration data on a smooth complete surface fan."""
    labels = ["0", "1", "inf"]
    filts = []
    for ray_cone in base.cones(1):
        ray = ray_cone.generators[0]
        a = rng.randint(-2, 2)
        if rng.random() < 0.35:
            filts.append((ray, RayFiltration(a)))
        else:
            filts.append(
                (ray, RayFiltration(a, rng.choice(labels), a + rng.randint(1, 2)))
            )
    return KlyachkoBundle(base, tuple(filts))


def p2_fan() -> Fan:
    return make_fan(
        [
            make_cone([(1, 0), (0, 1)], 2),
            make_cone([(0, 1), (-1, -1)], 2),
            make_cone([(-1, -1), (1, 0)], 2),
        ],
        2,
    )


def p1p1_fan() -> Fan:
    quadrants = [
        [(1, 0), (0, 1)],
        [(0, 1), (-1, 0)],
        [(-1, 0), (0, -1)],
        [(0, -1), (1, 0)],
    ]
    return make_fan([make_cone(q, 2) for q in quadrants], 2)
