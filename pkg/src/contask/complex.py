"""Finite abstract chromatic simplicial complexes.

A complex is stored by its vertices and its facets; faces are enumerated on
demand.  Simplices are strictly increasing tuples of vertex ids.  Colors are
0-indexed internally and printed 1-indexed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

from .errors import (
    DanglingVertexId,
    DuplicateColorInFacet,
    NonMaximalFacet,
    NotPure,
    RankOutOfRange,
    UnknownSimplex,
    UnknownVertex,
)

Simplex = tuple  # strictly sorted tuple of vertex ids


def simplex(ids: Iterable[int]) -> Simplex:
    s = tuple(sorted(set(ids)))
    if not s:
        raise UnknownSimplex("empty simplex")
    return s


def faces_of(s: Sequence[int]) -> Iterable[Simplex]:
    """All non-empty faces of ``s`` (including ``s``), by size then lexicographic."""
    for k in range(1, len(s) + 1):
        yield from itertools.combinations(s, k)


@dataclass(frozen=True)
class Vertex:
    id: int
    color: int
    payload: Any = ""


@dataclass(frozen=True, eq=False)
class Complex:
    """An immutable chromatic simplicial complex given by its facets.

    Equality is identity; use :meth:`same_as` for structural comparison.
    """

    vertices: Mapping[int, Vertex]
    facets: tuple[Simplex, ...]
    name: str = field(default="", compare=False)

    # -- basic queries -----------------------------------------------------
    @cached_property
    def dim(self) -> int:
        return max((len(f) - 1 for f in self.facets), default=-1)

    @cached_property
    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) <= 1

    @cached_property
    def faces(self) -> frozenset[Simplex]:
        out: set[Simplex] = set()
        for f in self.facets:
            out.update(faces_of(f))
        return frozenset(out)

    def faces_by_dim(self) -> dict[int, list[Simplex]]:
        out: dict[int, list[Simplex]] = {}
        for s in sorted(self.faces, key=lambda s: (len(s), s)):
            out.setdefault(len(s) - 1, []).append(s)
        return out

    def has_simplex(self, s: Iterable[int]) -> bool:
        return tuple(sorted(s)) in self.faces

    def color(self, v: int) -> int:
        try:
            return self.vertices[v].color
        except KeyError:
            raise UnknownVertex(v) from None

    def colors(self, s: Iterable[int]) -> frozenset[int]:
        return frozenset(self.color(v) for v in s)

    @cached_property
    def color_set(self) -> frozenset[int]:
        return frozenset(v.color for v in self.vertices.values())

    def payload(self, v: int) -> Any:
        return self.vertices[v].payload

    def vertex_of_color(self, s: Iterable[int], c: int) -> int | None:
        for v in s:
            if self.color(v) == c:
                return v
        return None

    def vertices_of_color(self, c: int) -> list[int]:
        return sorted(v for v, vx in self.vertices.items() if vx.color == c)

    @cached_property
    def facets_of_vertex(self) -> dict[int, list[Simplex]]:
        out: dict[int, list[Simplex]] = {v: [] for v in self.vertices}
        for f in self.facets:
            for v in f:
                out[v].append(f)
        return out

    def same_as(self, other: "Complex") -> bool:
        return (dict(self.vertices) == dict(other.vertices)
                and self.facets == other.facets)

    # -- constructors ------------------------------------------------------
    @classmethod
    def from_simplices(cls, vertices: Mapping[int, Vertex] | Iterable[Vertex],
                       simplices: Iterable[Iterable[int]], name: str = "") -> "Complex":
        """Build the complex generated by ``simplices``; keeps only used vertices."""
        if not isinstance(vertices, Mapping):
            vertices = {v.id: v for v in vertices}
        sims = {tuple(sorted(s)) for s in simplices if s}
        maximal = _maximal(sims)
        used = {v for f in maximal for v in f}
        for v in used:
            if v not in vertices:
                raise DanglingVertexId(v)
        return build_complex([vertices[v] for v in sorted(used)], maximal, name=name)

    # -- the combinatorial operations --------------------------------------
    def skeleton(self, r: int) -> "Complex":
        if not 0 <= r <= self.dim:
            raise RankOutOfRange(f"rank {r} outside 0..{self.dim}")
        return Complex.from_simplices(self.vertices, (s for s in self.faces if len(s) == r + 1))

    def star(self, v: int) -> "Complex":
        if v not in self.vertices:
            raise UnknownVertex(v)
        return Complex.from_simplices(self.vertices, self.facets_of_vertex[v])

    def link(self, s: Iterable[int]) -> "Complex":
        s = tuple(sorted(s))
        if s not in self.faces:
            raise UnknownSimplex(s)
        ss = set(s)
        parts = [tuple(v for v in f if v not in ss) for f in self.facets if ss.issubset(f)]
        return Complex.from_simplices(self.vertices, parts)

    def is_connected(self) -> bool:
        """Graph connectivity of the 1-skeleton; the empty complex is not connected."""
        if not self.vertices:
            return False
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for f in self.facets:
            for a in f:
                adj[a].update(f)
        start = next(iter(self.vertices))
        seen = {start}
        todo = [start]
        while todo:
            for w in adj[todo.pop()]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(self.vertices)

    def is_link_connected(self) -> "LinkVerdict":
        """Graded link-connectivity (grades -1 and 0 only).

        For a simplex ``s`` the required grade is ``dim - dim(s) - 2``: grade -1
        asks for a nonempty link, grade >= 0 for a graph-connected one.  Higher
        grades are checked only up to graph connectivity.
        """
        if not self.is_pure:
            raise NotPure("link-connectivity is defined here for pure complexes")
        for s in sorted(self.faces, key=lambda s: (len(s), s)):
            grade = self.dim - (len(s) - 1) - 2
            if grade < -1:
                continue
            lk = self.link(s)
            ok = bool(lk.vertices) if grade == -1 else lk.is_connected()
            if not ok:
                return LinkVerdict(False, s, grade)
        return LinkVerdict(True)

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vertices": [
                {"id": v.id, "color": v.color, "payload": str(v.payload)}
                for v in sorted(self.vertices.values(), key=lambda v: v.id)
            ],
            "facets": [list(f) for f in self.facets],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Complex":
        verts = [Vertex(int(v["id"]), int(v["color"]), v.get("payload", "")) for v in data["vertices"]]
        return build_complex(verts, [[int(x) for x in f] for f in data["facets"]])

    def __repr__(self) -> str:
        return f"Complex(dim={self.dim}, vertices={len(self.vertices)}, facets={len(self.facets)})"


@dataclass(frozen=True)
class LinkVerdict:
    ok: bool
    witness: Simplex | None = None
    grade: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def _maximal(sims: set[Simplex]) -> list[Simplex]:
    out = []
    kept: dict[int, list[frozenset]] = {}
    for s in sorted(sims, key=len, reverse=True):
        fs = frozenset(s)
        if not any(fs < k for k in kept.get(s[0], ())):
            out.append(s)
            for v in s:
                kept.setdefault(v, []).append(fs)
    return sorted(out)


def build_complex(vertex_list: Iterable[Vertex], facet_list: Iterable[Iterable[int]],
                  name: str = "") -> Complex:
    """Validate and build a complex.  Facets must be maximal and properly colored."""
    vertices: dict[int, Vertex] = {}
    for v in vertex_list:
        if v.id in vertices:
            raise DanglingVertexId(f"duplicate vertex id {v.id}")
        vertices[v.id] = v
    facets = []
    for f in facet_list:
        f = tuple(f)
        if not f:
            raise NonMaximalFacet("empty facet")
        if len(set(f)) != len(f):
            raise DuplicateColorInFacet(f"repeated vertex in facet {f}")
        for v in f:
            if v not in vertices:
                raise DanglingVertexId(v)
        cols = [vertices[v].color for v in f]
        if len(set(cols)) != len(cols):
            raise DuplicateColorInFacet(f"facet {sorted(f)} has colors {cols}")
        facets.append(tuple(sorted(f)))
    facets = sorted(set(facets))
    if len({len(f) for f in facets}) > 1:
        by_vertex: dict[int, list[frozenset]] = {}
        for f in facets:
            by_vertex.setdefault(f[0], [])
            for v in f:
                by_vertex.setdefault(v, []).append(frozenset(f))
        for f in facets:
            fs = frozenset(f)
            for g in by_vertex[f[0]]:
                if fs < g:
                    raise NonMaximalFacet(f"facet {f} is contained in {tuple(sorted(g))}")
    return Complex(vertices, tuple(facets), name=name)


def simplex_complex(colors: Sequence[int] | int, payloads: Sequence[Any] | None = None) -> Complex:
    """A single simplex whose vertex ``i`` has color ``colors[i]``."""
    if isinstance(colors, int):
        colors = list(range(colors + 1))
    payloads = payloads or [str(i) for i in range(len(colors))]
    verts = [Vertex(i, c, p) for i, (c, p) in enumerate(zip(colors, payloads))]
    return build_complex(verts, [range(len(colors))])
