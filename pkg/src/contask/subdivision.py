"""Barycentric and standard chromatic subdivisions with exact embeddings.

Every iterated chromatic subdivision keeps a pointer to the level below it
(``parent``) and, per vertex, its *view*: the simplex of the parent complex it
was created from.  Vertex ``(i, view)`` sits at

    pos(i, view) = (pos(v_i) + 2 * sum(pos(v_j) for j != i)) / (2k + 1)

in the realization of the base, where ``k = dim(view)`` and ``v_i`` is the
color-i vertex of the view.  A process that saw more sits farther from its own
corner; on an edge this puts the new vertices at exact thirds.

The structural key of a vertex is the nested ``(color, frozenset(keys of
view))`` tuple, which is exactly the full-information state of an
immediate-snapshot process.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Hashable, Iterable, Mapping

from .complex import Complex, Simplex, Vertex, build_complex, faces_of
from .errors import DepthDecrease, ImproperColoring, NotASubcomplex, SubdivisionError
from .geometry import AffineFrame, Point, combine, tv_distance


@dataclass(frozen=True, eq=False)
class Subdivision:
    base: Complex
    complex: Complex
    carrier: Mapping[int, Simplex]
    embedding: Mapping[int, Point]
    depth: int | None = None
    parent: "Subdivision | None" = None
    views: Mapping[int, Simplex] | None = None
    chromatic: bool = True
    _frames: dict = field(default_factory=dict, repr=False)

    # -- carriers ----------------------------------------------------------
    def carrier_of_simplex(self, s: Iterable[int]) -> Simplex:
        out: set[int] = set()
        for v in s:
            out.update(self.carrier[v])
        c = tuple(sorted(out))
        if not self.base.has_simplex(c):
            raise SubdivisionError(f"carrier {c} of {tuple(s)} is not a base simplex")
        return c

    def carrier_at_level(self, s: Iterable[int], level: int) -> Simplex:
        """Smallest simplex of the level-``level`` complex containing ``|s|``."""
        if self.depth is None or level > self.depth or level < 0:
            raise SubdivisionError(f"no level {level} below depth {self.depth}")
        cur: set[int] = set(s)
        node: Subdivision = self
        while node.depth > level:
            nxt: set[int] = set()
            for v in cur:
                nxt.update(node.views[v])
            cur = nxt
            node = node.parent
        return tuple(sorted(cur))

    def level(self, d: int) -> "Subdivision":
        node = self
        while node.depth is not None and node.depth > d:
            node = node.parent
        if node.depth != d:
            raise SubdivisionError(f"no level {d} in the chain")
        return node

    # -- structural keys ---------------------------------------------------
    def key(self, v: int) -> Hashable:
        return self._keys[v]

    @cached_property
    def _keys(self) -> dict[int, Hashable]:
        if self.views is None:
            return {v: v for v in self.complex.vertices}
        pk = self.parent._keys
        return {v: (self.complex.color(v), frozenset(pk[u] for u in self.views[v]))
                for v in self.complex.vertices}

    @cached_property
    def key_index(self) -> dict[Hashable, int]:
        return {k: v for v, k in self._keys.items()}

    def relative_key(self, v: int, level: int) -> Hashable:
        """Key of ``v`` with level-``level`` vertex ids as the leaves."""
        if self.depth == level:
            return v
        return (self.complex.color(v),
                frozenset(self.parent.relative_key(u, level) for u in self.views[v]))

    # -- geometry ----------------------------------------------------------
    def frame(self, facet: Simplex) -> AffineFrame:
        fr = self._frames.get(facet)
        if fr is None:
            fr = AffineFrame([self.embedding[v] for v in facet], self.carrier_of_simplex(facet))
            self._frames[facet] = fr
        return fr

    @cached_property
    def _facets_by_carrier(self) -> dict[Simplex, list[Simplex]]:
        out: dict[Simplex, list[Simplex]] = {}
        for f in self.complex.facets:
            out.setdefault(self.carrier_of_simplex(f), []).append(f)
        return out

    def candidate_facets(self, x: Point) -> list[Simplex]:
        sup = set(x.support)
        out = []
        for c, fs in self._facets_by_carrier.items():
            if sup.issubset(c):
                out.extend(fs)
        return out

    def locate(self, x: Point) -> list[tuple[Simplex, list[Fraction]]]:
        """All facets whose closed embedded cell contains ``x``, with local coordinates."""
        hits = []
        for f in self.candidate_facets(x):
            fr = self.frame(f)
            if fr.degenerate:
                continue
            c = fr.coords(x)
            if c is not None and all(t >= 0 for t in c):
                hits.append((f, c))
        return hits

    def nondegenerate(self) -> bool:
        return all(not self.frame(f).degenerate for f in self.complex.facets)

    # -- export ------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "base": self.base.to_json(),
            "complex": self.complex.to_json(),
            "embedding": {str(v): self.embedding[v].to_json() for v in sorted(self.embedding)},
            "carrier": {str(v): list(self.carrier[v]) for v in sorted(self.carrier)},
            "depth": self.depth,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Subdivision":
        base = Complex.from_json(data["base"])
        depth = data.get("depth")
        cplx = Complex.from_json(data["complex"])
        if depth is not None:
            sub = iterate_chromatic(base, int(depth))
            if sub.complex.same_as(cplx):
                return sub
        return cls(
            base=base,
            complex=cplx,
            carrier={int(k): tuple(v) for k, v in data["carrier"].items()},
            embedding={int(k): Point.from_json(p, base) for k, p in data["embedding"].items()},
            depth=None,
        )

    def __repr__(self) -> str:
        return f"Subdivision(depth={self.depth}, {self.complex!r})"


def identity(K: Complex) -> Subdivision:
    return Subdivision(
        base=K,
        complex=K,
        carrier={v: (v,) for v in K.vertices},
        embedding={v: Point.vertex(v, K) for v in K.vertices},
        depth=0,
    )


# -- chromatic subdivision -------------------------------------------------

@lru_cache(maxsize=None)
def _ch_pattern(n: int) -> tuple[tuple[tuple[int, tuple[int, ...]], ...], ...]:
    """Facets of Ch of the simplex {0..n-1} (vertex j has color j).

    A facet picks, for every color c, a face sigma_c containing c such that the
    faces form a chain and c in sigma_d implies sigma_c is inside sigma_d.
    """
    idx = list(range(n))
    options = {c: [frozenset(s) for s in faces_of(idx) if c in s] for c in idx}
    out = []

    def compatible(c, sc, d, sd):
        if not (sc <= sd or sd <= sc):
            return False
        if c in sd and not sc <= sd:
            return False
        if d in sc and not sd <= sc:
            return False
        return True

    def rec(c, chosen):
        if c == n:
            out.append(tuple((k, tuple(sorted(s))) for k, s in chosen))
            return
        for s in options[c]:
            if all(compatible(c, s, d, sd) for d, sd in chosen):
                chosen.append((c, s))
                rec(c + 1, chosen)
                chosen.pop()

    rec(0, [])
    return tuple(out)


def _label(color: int, view: Simplex) -> str:
    return f"({color + 1},{{{','.join(map(str, view))}}})"


def _ch_step(prev: Subdivision) -> Subdivision:
    K = prev.complex
    for f in K.facets:
        if len(K.colors(f)) != len(f):
            raise ImproperColoring(f"facet {f} is not properly colored")
    pairs = sorted({(K.color(u), s) for s in K.faces for u in s})
    vid = {p: i for i, p in enumerate(pairs)}
    verts = [Vertex(i, c, _label(c, s)) for (c, s), i in vid.items()]
    facets = []
    for F in K.facets:
        ordered = sorted(F, key=K.color)
        for pat in _ch_pattern(len(F)):
            facet = []
            for pos, sub in pat:
                c = K.color(ordered[pos])
                view = tuple(sorted(ordered[j] for j in sub))
                facet.append(vid[(c, view)])
            facets.append(facet)
    cplx = build_complex(verts, facets)
    views = {i: s for (c, s), i in vid.items()}
    carrier = {}
    embedding = {}
    for (c, s), i in vid.items():
        carrier[i] = prev.carrier_of_simplex(s)
        own = K.vertex_of_color(s, c)
        denom = 2 * len(s) - 1
        terms = [(Fraction(1 if u == own else 2, denom), prev.embedding[u]) for u in s]
        embedding[i] = combine(terms, prev.base)
    return Subdivision(
        base=prev.base,
        complex=cplx,
        carrier=carrier,
        embedding=embedding,
        depth=prev.depth + 1,
        parent=prev,
        views=views,
    )


_CHAINS: dict[int, tuple[Complex, list[Subdivision]]] = {}


def iterate_chromatic(K: Complex, r: int) -> Subdivision:
    """Ch^r(K); levels are cached per complex object so chains share identity."""
    if r < 0:
        raise SubdivisionError("depth must be >= 0")
    entry = _CHAINS.get(id(K))
    if entry is None or entry[0] is not K:
        entry = (K, [identity(K)])
        _CHAINS[id(K)] = entry
    levels = entry[1]
    while len(levels) <= r:
        levels.append(_ch_step(levels[-1]))
    return levels[r]


def chromatic(K: Complex) -> Subdivision:
    return iterate_chromatic(K, 1)


# -- barycentric subdivision -----------------------------------------------

def barycentric(K: Complex) -> Subdivision:
    """Bary(K): vertices are faces, facets are maximal chains.

    The result is colored by face dimension, which is proper but does not
    match the base colors, so ``chromatic`` is False.
    """
    faces = sorted(K.faces, key=lambda s: (len(s), s))
    vid = {s: i for i, s in enumerate(faces)}
    verts = [Vertex(i, len(s) - 1, "{" + ",".join(map(str, s)) + "}") for s, i in vid.items()]
    facets = []
    for F in K.facets:
        for perm in itertools.permutations(F):
            facets.append([vid[tuple(sorted(perm[:k]))] for k in range(1, len(F) + 1)])
    cplx = build_complex(verts, sorted({tuple(sorted(f)) for f in facets}))
    return Subdivision(
        base=K,
        complex=cplx,
        carrier={i: s for s, i in vid.items()},
        embedding={i: Point.barycenter(s, K) for s, i in vid.items()},
        depth=None,
        chromatic=False,
    )


# -- measurements and refinement -------------------------------------------

def mesh(S: Subdivision) -> Fraction:
    best = Fraction(0)
    for f in S.complex.facets:
        for a, b in itertools.combinations(f, 2):
            d = tv_distance(S.embedding[a], S.embedding[b])
            if d > best:
                best = d
    return best


def restrict(S: Subdivision, L: Complex) -> Subdivision:
    """The part of ``S`` lying over the base subcomplex ``L``."""
    for v, vx in L.vertices.items():
        if v not in S.base.vertices or S.base.vertices[v].color != vx.color:
            raise NotASubcomplex(f"vertex {v} is not a base vertex")
    if not all(S.base.has_simplex(f) for f in L.facets):
        raise NotASubcomplex("some facet of L is not a base simplex")
    Lfaces = L.faces
    if S.depth == 0:
        return identity(L)
    sims = [s for s in S.complex.faces if S.carrier_of_simplex(s) in Lfaces]
    keep = {v for s in sims for v in s}
    cplx = Complex.from_simplices(S.complex.vertices, sims)
    parent = restrict(S.parent, L) if S.parent is not None else None
    return Subdivision(
        base=L,
        complex=cplx,
        carrier={v: S.carrier[v] for v in keep},
        embedding={v: S.embedding[v].with_ambient(L) for v in keep},
        depth=S.depth,
        parent=parent,
        views={v: S.views[v] for v in keep} if S.views is not None else None,
        chromatic=S.chromatic,
    )


def facet_keys(S: Subdivision) -> set[frozenset]:
    return {frozenset(S.key(v) for v in f) for f in S.complex.facets}


def refine_to_depth(S: Subdivision, r: int) -> Subdivision:
    if S.depth is None:
        raise SubdivisionError("refinement is only defined for iterated chromatic subdivisions")
    if r < S.depth:
        raise DepthDecrease(f"cannot refine depth {S.depth} to {r}")
    return iterate_chromatic(S.base, r)


def common_refinement(pieces: Iterable[Subdivision]) -> Subdivision:
    """One Ch^k refining every piece: the deepest level over the shared base."""
    pieces = list(pieces)
    base = pieces[0].base
    return iterate_chromatic(base, max(p.depth for p in pieces))


def refines(fine: Subdivision, coarse: Subdivision) -> bool:
    """Every facet of ``fine`` lies in the closed cell of some facet of ``coarse``."""
    for f in fine.complex.facets:
        pts = [fine.embedding[v] for v in f]
        if not any(all(coarse.frame(g).contains(p) for p in pts)
                   for g in coarse.candidate_facets(pts[0])):
            return False
    return True
