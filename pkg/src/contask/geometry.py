"""Exact points of geometric realizations.

A point is a finite map from vertex ids to positive :class:`~fractions.Fraction`
weights summing to one; its support is its carrier.  Nothing here uses floats.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .complex import Complex, Simplex
from .errors import InvalidPoint, MixedAmbients, NoCommonCell, UnknownVertex


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise InvalidPoint("floats are not accepted; pass 'p/q' strings or Fractions")
    return Fraction(x)


@dataclass(frozen=True)
class Point:
    """Barycentric point; ``weights`` is a sorted tuple of ``(vertex, weight)``.

    ``ambient`` is the complex the point lives in (optional, not part of equality).
    """

    weights: tuple[tuple[int, Fraction], ...]
    ambient: Complex | None = field(default=None, compare=False, repr=False)

    @classmethod
    def of(cls, weights: Mapping[int, object], ambient: Complex | None = None) -> "Point":
        items = []
        total = Fraction(0)
        for v, w in weights.items():
            w = as_fraction(w)
            if w < 0:
                raise InvalidPoint(f"negative weight {w} on vertex {v}")
            total += w
            if w:
                items.append((int(v), w))
        if total != 1:
            raise InvalidPoint(f"weights sum to {total}, not 1")
        items.sort()
        p = cls(tuple(items), ambient)
        if ambient is not None and not ambient.has_simplex(p.support):
            raise InvalidPoint(f"support {p.support} is not a simplex of the ambient complex")
        return p

    @classmethod
    def vertex(cls, v: int, ambient: Complex | None = None) -> "Point":
        return cls(((v, Fraction(1)),), ambient)

    @classmethod
    def barycenter(cls, s: Iterable[int], ambient: Complex | None = None) -> "Point":
        s = sorted(s)
        w = Fraction(1, len(s))
        return cls(tuple((v, w) for v in s), ambient)

    @property
    def support(self) -> Simplex:
        return tuple(v for v, _ in self.weights)

    def weight(self, v: int) -> Fraction:
        for u, w in self.weights:
            if u == v:
                return w
        return Fraction(0)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.weights)

    def with_ambient(self, ambient: Complex | None) -> "Point":
        return Point(self.weights, ambient)

    def to_json(self) -> dict:
        return {"support": {str(v): str(w) for v, w in self.weights}}

    @classmethod
    def from_json(cls, data: Mapping, ambient: Complex | None = None) -> "Point":
        sup = data["support"] if "support" in data else data
        return cls.of({int(k): Fraction(v) for k, v in sup.items()}, ambient)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{v}: {w}" for v, w in self.weights) + "}"


def combine(terms: Iterable[tuple[Fraction, Point]], ambient: Complex | None = None) -> Point:
    """Convex combination ``sum(c * p)``; coefficients must be >= 0 and sum to 1."""
    acc: dict[int, Fraction] = {}
    for c, p in terms:
        if not c:
            continue
        for v, w in p.weights:
            acc[v] = acc.get(v, Fraction(0)) + c * w
    return Point.of(acc, ambient)


def lerp(a: Point, b: Point, t) -> Point:
    """The point ``(1 - t) a + t b``."""
    t = as_fraction(t)
    return combine([(1 - t, a), (t, b)], a.ambient)


def _ambient_of(points: Sequence[Point]) -> Complex | None:
    amb = None
    for p in points:
        if p.ambient is None:
            continue
        if amb is None:
            amb = p.ambient
        elif p.ambient is not amb:
            raise MixedAmbients("points belong to different complexes")
    return amb


def carrier_of_point(x: Point) -> Simplex:
    return x.support


def carrier_of_set(points: Iterable[Point]) -> set[Simplex]:
    """Carrier of a finite set of points, as the set of their carrier simplices."""
    points = list(points)
    _ambient_of(points)
    return {p.support for p in points}


def extended_coloring(x: Point, K: Complex | None = None) -> frozenset[int]:
    K = K or x.ambient
    return K.colors(x.support)


def in_open_star(x: Point, w: int, K: Complex | None = None) -> bool:
    K = K or x.ambient
    if K is not None and w not in K.vertices:
        raise UnknownVertex(w)
    return x.weight(w) > 0


def in_closed_star(x: Point, w: int, K: Complex | None = None) -> bool:
    K = K or x.ambient
    if w not in K.vertices:
        raise UnknownVertex(w)
    return K.has_simplex(set(x.support) | {w})


def tv_distance(x: Point, y: Point, K: Complex | None = None) -> Fraction:
    """Half the l1 distance between barycentric weight vectors."""
    K = K or _ambient_of([x, y])
    union = set(x.support) | set(y.support)
    if K is not None and not K.has_simplex(union):
        raise NoCommonCell(f"{x} and {y} share no closed cell")
    a, b = x.as_dict(), y.as_dict()
    return sum((abs(a.get(v, 0) - b.get(v, 0)) for v in union), Fraction(0)) / 2


# -- exact linear algebra -------------------------------------------------

def solve_exact(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Solve the square system ``A x = b`` over the rationals; None if singular."""
    n = len(A)
    M = [list(row) + [bi] for row, bi in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        p = M[col][col]
        row = [v / p for v in M[col]]
        M[col] = row
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * c for a, c in zip(M[r], row)]
    return [M[r][n] for r in range(n)]


def invert_exact(A: list[list[Fraction]]) -> list[list[Fraction]] | None:
    n = len(A)
    cols = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        x = solve_exact(A, e)
        if x is None:
            return None
        cols.append(x)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


class AffineFrame:
    """Barycentric coordinates with respect to embedded points ``corners``.

    All corners are points over the vertex set ``frame`` (a simplex of the
    ambient complex with ``len(frame) == len(corners)``).
    """

    def __init__(self, corners: Sequence[Point], frame: Sequence[int]):
        self.corners = list(corners)
        self.frame = tuple(frame)
        if len(self.frame) != len(self.corners):
            raise InvalidPoint("frame and corner counts differ")
        A = [[c.weight(v) for c in self.corners] for v in self.frame]
        self.inverse = invert_exact(A)

    @property
    def degenerate(self) -> bool:
        return self.inverse is None

    def coords(self, x: Point) -> list[Fraction] | None:
        """Local coordinates of ``x``; None if its support leaves the frame."""
        fs = set(self.frame)
        if not fs.issuperset(x.support):
            return None
        xv = [x.weight(v) for v in self.frame]
        return [sum((a * b for a, b in zip(row, xv)), Fraction(0)) for row in self.inverse]

    def contains(self, x: Point) -> bool:
        c = self.coords(x)
        return c is not None and all(t >= 0 for t in c)
