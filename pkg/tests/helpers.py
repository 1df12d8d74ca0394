"""Independent oracles and random generators shared by the tests.

Nothing here calls the code under test except to read finished objects.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from contask.complex import Complex, Vertex, build_complex
from contask.geometry import Point


def ordered_partitions_by_rank(items):
    """Ordered set partitions as surjective rank functions items -> {0..k-1}."""
    items = list(items)
    n = len(items)
    out = []
    for k in range(1, n + 1):
        for ranks in itertools.product(range(k), repeat=n):
            if set(ranks) == set(range(k)):
                blocks = tuple(frozenset(x for x, r in zip(items, ranks) if r == j) for j in range(k))
                out.append(blocks)
    return out


def snapshot_facets(n: int) -> set[frozenset]:
    """Facets of one chromatic subdivision of the (n-1)-simplex, from IS views.

    In an ordered partition B1..Bm a process in Bj sees B1 u ... u Bj.
    """
    out = set()
    for blocks in ordered_partitions_by_rank(range(n)):
        seen: set[int] = set()
        facet = set()
        for b in blocks:
            seen |= b
            for p in b:
                facet.add((p, frozenset(seen)))
        out.add(frozenset(facet))
    return out


def thirds(r: int) -> list[Fraction]:
    """Breakpoints of r rounds of splitting [0,1] into thirds."""
    pts = [Fraction(0), Fraction(1)]
    for _ in range(r):
        nxt = []
        for a, b in zip(pts, pts[1:]):
            d = (b - a) / 3
            nxt += [a, a + d, a + 2 * d]
        pts = nxt + [Fraction(1)]
    return pts


def random_point(rng: random.Random, face, K: Complex | None = None, hi: int = 50) -> Point:
    ws = [rng.randint(1, hi) for _ in face]
    tot = sum(ws)
    return Point.of({v: Fraction(w, tot) for v, w in zip(face, ws)}, K)


def random_chromatic_map(rng: random.Random, S, O: Complex) -> dict[int, int] | None:
    """A random chromatic simplicial vertex map from S.complex into O (randomized DFS)."""
    C = S.complex
    # breadth-first from a random vertex keeps each new vertex next to assigned ones
    order: list[int] = []
    for start in rng.sample(sorted(C.vertices), len(C.vertices)):
        if start in order:
            continue
        frontier = [start]
        seen = set(order) | {start}
        while frontier:
            v = frontier.pop(0)
            order.append(v)
            nbrs = sorted({u for g in C.facets_of_vertex[v] for u in g} - seen)
            rng.shuffle(nbrs)
            seen.update(nbrs)
            frontier.extend(nbrs)
    assign: dict[int, int] = {}

    def ok(v):
        for g in C.facets_of_vertex[v]:
            img = {assign[u] for u in g if u in assign}
            if not O.has_simplex(img):
                return False
        return True

    def rec(i):
        if i == len(order):
            return True
        v = order[i]
        opts = O.vertices_of_color(C.color(v))
        rng.shuffle(opts)
        for w in opts:
            assign[v] = w
            if ok(v) and rec(i + 1):
                return True
            del assign[v]
        return False

    return dict(assign) if rec(0) else None


def path_complex(colors) -> Complex:
    """A path whose i-th vertex has color colors[i]."""
    verts = [Vertex(i, c, str(i)) for i, c in enumerate(colors)]
    return build_complex(verts, [(i, i + 1) for i in range(len(colors) - 1)])


def two_triangles() -> Complex:
    """Two triangles glued along the edge {1, 2}; colors 0,1,2 and 0 again."""
    verts = [Vertex(0, 0), Vertex(1, 1), Vertex(2, 2), Vertex(3, 0)]
    return build_complex(verts, [(0, 1, 2), (1, 2, 3)])
