"""Chromatic simplicial approximation of chromatic piecewise-affine maps.

Pipeline: find a star-covered ``Ch^k(I)``, split its facets greedily by the
color of a covering star center, send color-i vertices to color-i centers,
project the rest of each part away from color i, solve the resulting
1-dimensional problem, and glue everything on one common ``Ch^K(I)``.  The
result is always re-verified, and the depth escalated when verification fails.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping

from .chromap import (
    PAMap,
    check_chromatic,
    evaluate,
    image_carrier,
    open_star_centers,
    project_map,
    pullback,
    realize_simplicial,
    remove_color,
)
from .complex import Complex, Simplex, faces_of
from .errors import (
    ApproximationError,
    DepthExhausted,
    DimensionUnsupported,
    MapError,
    MissingColorInCarrier,
    NotChromatic,
    NotSimplicial,
)
from .subdivision import Subdivision, iterate_chromatic


@dataclass(frozen=True, eq=False)
class DecisionMap:
    domain: Subdivision
    codomain: Complex
    images: Mapping[int, int]

    def __call__(self, v: int) -> int:
        return self.images[v]

    def image(self, s) -> Simplex:
        return tuple(sorted({self.images[v] for v in s}))

    def is_chromatic(self) -> bool:
        K = self.domain.complex
        return all(K.color(v) == self.codomain.color(w) for v, w in self.images.items())

    def is_simplicial(self) -> bool:
        return all(self.codomain.has_simplex(self.image(f)) for f in self.domain.complex.facets)

    def realize(self) -> PAMap:
        return realize_simplicial(self.domain, self.images, self.codomain)

    def to_json(self) -> dict:
        return {"depth": self.domain.depth,
                "map": {str(v): self.images[v] for v in sorted(self.images)}}


@dataclass(frozen=True)
class StarCover:
    subdivision: Subdivision
    assignment: Mapping[Simplex, frozenset]
    star_colors: Mapping[Simplex, frozenset]

    @property
    def depth(self) -> int:
        return self.subdivision.depth


@dataclass(frozen=True)
class ColorPartition:
    """Ordered parts ``(color, facets)``; empty parts are omitted."""

    parts: tuple[tuple[int, tuple[Simplex, ...]], ...]

    @property
    def colors(self) -> list[int]:
        return [c for c, _ in self.parts]


@dataclass(frozen=True)
class ApproxVerdict:
    ok: bool
    simplex: Simplex | None = None
    image: Simplex | None = None
    carrier: tuple[Simplex, ...] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out: dict = {"ok": self.ok}
        if not self.ok:
            out.update(reason=self.reason,
                       simplex=list(self.simplex or ()),
                       image=list(self.image or ()),
                       carrier=[list(s) for s in self.carrier or ()])
        return out


def _check_shapes(f: PAMap) -> None:
    I, O = f.base, f.codomain
    if not (I.is_pure and O.is_pure) or I.dim != O.dim:
        raise ApproximationError("input and output complexes must be pure of equal dimension")
    if I.color_set != O.color_set:
        raise ApproximationError("input and output complexes must share their color set")


def cover_facet(f: PAMap, S: Subdivision, facet: Simplex) -> frozenset:
    return frozenset(open_star_centers(f, [S.embedding[v] for v in facet]))


def star_cover_at(f: PAMap, r: int) -> StarCover | None:
    S = iterate_chromatic(f.base, r)
    assignment = {}
    for g in S.complex.facets:
        ws = cover_facet(f, S, g)
        if not ws:
            return None
        assignment[g] = ws
    colors = {g: f.codomain.colors(ws) for g, ws in assignment.items()}
    return StarCover(S, assignment, colors)


def star_covered_subdivide(f: PAMap, max_depth: int, min_depth: int = 0) -> StarCover:
    """Smallest depth r in [min_depth, max_depth] with Ch^r(I) star-covered by f."""
    _check_shapes(f)
    for r in range(min_depth, max_depth + 1):
        sc = star_cover_at(f, r)
        if sc is not None:
            return sc
    raise DepthExhausted(f"no star cover up to depth {max_depth}")


def color_partition(sc: StarCover) -> ColorPartition:
    left = set(sc.assignment)
    parts = []
    for c in sorted({c for cs in sc.star_colors.values() for c in cs}):
        part = tuple(sorted(g for g in left if c in sc.star_colors[g]))
        if part:
            parts.append((c, part))
            left.difference_update(part)
    return ColorPartition(tuple(parts))


def approximate_dim1(f: PAMap, sc: StarCover) -> DecisionMap:
    """Send every vertex to the same-colored vertex of its image's carrier."""
    S = sc.subdivision
    images = {}
    for v in sorted(S.complex.vertices):
        y = evaluate(f, S.embedding[v])
        w = f.codomain.vertex_of_color(y.support, S.complex.color(v))
        if w is None:
            raise MissingColorInCarrier(f"vertex {v}: carrier of f(v) lacks color {S.complex.color(v) + 1}")
        images[v] = w
    mu = DecisionMap(S, f.codomain, images)
    if not mu.is_simplicial():
        raise NotSimplicial("dimension-1 assignment is not simplicial")
    return mu


def verify_chromatic_approximation(mu: DecisionMap, f: PAMap) -> ApproxVerdict:
    """mu chromatic, simplicial, and mu(s) inside carr(f(|s|), O) for every simplex s."""
    if not mu.is_chromatic():
        return ApproxVerdict(False, reason="not chromatic")
    for g in mu.domain.complex.facets:
        if not mu.codomain.has_simplex(mu.image(g)):
            return ApproxVerdict(False, g, mu.image(g), reason="not simplicial")
    S = mu.domain
    for s in sorted(S.complex.faces, key=lambda s: (len(s), s)):
        img = set(mu.image(s))
        car = image_carrier(f, [S.embedding[v] for v in s])
        if not any(img.issubset(c) for c in car):
            return ApproxVerdict(False, s, tuple(sorted(img)), tuple(sorted(car)),
                                 reason="image leaves the carrier of f")
    return ApproxVerdict(True)


# -- the construction ---------------------------------------------------------

def _dim1(f: PAMap, max_depth: int, min_depth: int = 0) -> tuple[Subdivision, DecisionMap]:
    r = min_depth
    while r <= max_depth:
        sc = star_covered_subdivide(f, max_depth, r)
        mu = approximate_dim1(f, sc)
        if verify_chromatic_approximation(mu, f):
            return sc.subdivision, mu
        r = sc.depth + 1
    raise DepthExhausted(f"no verified approximation up to depth {max_depth}")


@dataclass
class _Part:
    color: int
    faces: frozenset
    edge_faces: frozenset
    mu0: dict[int, int]
    level: int = 0  # depth of the recursive subdivision of the opposite edges
    mu1: DecisionMap | None = None


def _build_part(f: PAMap, sc: StarCover, color: int, facets, max_depth: int) -> _Part:
    S = sc.subdivision
    O = f.codomain
    K0 = Complex.from_simplices(S.complex.vertices, facets)
    mu0: dict[int, int] = {}
    for u in K0.vertices:
        if S.complex.color(u) != color:
            continue
        around = [sc.assignment[g] for g in K0.facets_of_vertex[u]]
        common = frozenset.intersection(*around)
        pool = sorted(w for w in common if O.color(w) == color)
        if not pool:
            own = O.vertex_of_color(evaluate(f, S.embedding[u]).support, color)
            pool = [own] if own is not None else sorted(
                w for ws in around for w in ws if O.color(w) == color)
        if not pool:
            raise MissingColorInCarrier(f"no color-{color + 1} star center for vertex {u}")
        mu0[u] = pool[0]
    K1 = remove_color(K0, color)
    part = _Part(color, K0.faces, K1.faces, mu0)
    g = pullback(f, S, K0)
    fi = project_map(g, color, K0)
    if check_chromatic(fi).kind == "violation":
        raise NotChromatic(f"projection away from color {color + 1} is not chromatic")
    sub, mu1 = _dim1(fi, max_depth)
    part.level = sub.depth
    part.mu1 = mu1
    return part


def _globalize(f: PAMap, k: int, parts: list[_Part], depth: int) -> DecisionMap:
    S = iterate_chromatic(f.base, depth)
    C = S.complex
    images = {}
    for v in sorted(C.vertices):
        c = C.color(v)
        ck = S.carrier_at_level((v,), k)
        part = next((p for p in parts if ck in p.faces), None)
        if part is None:
            raise ApproximationError(f"vertex {v} lies in no part")
        if c == part.color:
            u = S.level(k).complex.vertex_of_color(ck, c)
            images[v] = part.mu0[u]
        elif ck in part.edge_faces:
            lvl = k + part.level
            top = S.carrier_at_level((v,), lvl)
            L = S.level(lvl)
            u = L.complex.vertex_of_color(top, c)
            key = L.relative_key(u, k)
            dom = part.mu1.domain
            images[v] = part.mu1.images[dom.key_index[key]]
        else:
            y = evaluate(f, S.embedding[v])
            w = f.codomain.vertex_of_color(y.support, c)
            if w is None:
                raise MissingColorInCarrier(f"vertex {v}: carrier of f(v) lacks color {c + 1}")
            images[v] = w
    return DecisionMap(S, f.codomain, images)


def chromatic_approximation(f: PAMap, max_depth: int = 6,
                            min_depth: int = 0) -> tuple[Subdivision, DecisionMap]:
    """A verified chromatic simplicial approximation of ``f`` on some Ch^K(I).

    The depth searched starts at ``min_depth``; the smallest verified one wins.
    """
    _check_shapes(f)
    dim = f.base.dim
    if dim >= 3:
        raise DimensionUnsupported("approximation is implemented up to dimension 2")
    verdict = check_chromatic(f)
    if verdict.kind == "violation":
        raise NotChromatic(f"f is not chromatic near {verdict.witness}")
    if dim <= 1:
        return _dim1(f, max_depth, min_depth)
    r = min_depth
    while r <= max_depth:
        sc = star_covered_subdivide(f, max_depth, r)
        k = sc.depth
        try:
            parts = [_build_part(f, sc, c, facets, max_depth - k)
                     for c, facets in color_partition(sc).parts]
        except (MapError, ApproximationError):
            r = k + 1
            continue
        for depth in range(max(min_depth, k + max(p.level for p in parts)), max_depth + 1):
            try:
                mu = _globalize(f, k, parts, depth)
            except (MapError, ApproximationError):
                continue
            if verify_chromatic_approximation(mu, f):
                return mu.domain, mu
        r = k + 1
    raise DepthExhausted(f"no verified approximation up to depth {max_depth}")
