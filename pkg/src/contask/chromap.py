"""Piecewise-affine maps |I| -> |O| and the chromaticity checker.

A :class:`PAMap` is a subdivision of the input complex plus an image point per
subdivision vertex; it is affine on every embedded facet.  Cells of other
subdivisions of the same base are handled by *overlay*: a cell is cut into the
pieces where it meets the map's own cells, and each piece is affine.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .complex import Complex, Simplex, Vertex, build_complex, faces_of
from .errors import (
    IncompatibleDomains,
    ImageHitsColorVertex,
    MapError,
    NotSimplicial,
    PointOutsideDomain,
    UndefinedAtColorVertex,
)
from .geometry import AffineFrame, Point, combine
from .subdivision import Subdivision, identity

CHROMATIC_SIMPLICIAL = "chromatic-simplicial"


@dataclass(frozen=True, eq=False)
class PAMap:
    domain: Subdivision
    codomain: Complex
    images: Mapping[int, Point]
    certificate: str | None = None

    def __post_init__(self):
        for f in self.domain.complex.facets:
            sup = set()
            for v in f:
                sup.update(self.images[v].support)
            if not self.codomain.has_simplex(sup):
                raise NotSimplicial(f"images of domain facet {f} span {sorted(sup)}, not a simplex")

    @property
    def base(self) -> Complex:
        return self.domain.base

    def image_json(self) -> dict:
        return {str(v): self.images[v].to_json() for v in sorted(self.images)}

    def to_json(self) -> dict:
        return {
            "domain": self.domain.to_json(),
            "codomain": self.codomain.to_json(),
            "images": self.image_json(),
            "certificate": self.certificate,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PAMap":
        dom = Subdivision.from_json(data["domain"])
        cod = Complex.from_json(data["codomain"])
        imgs = {int(k): Point.from_json(p, cod) for k, p in data["images"].items()}
        return cls(dom, cod, imgs, data.get("certificate"))


def _apply(f: PAMap, facet: Simplex, coords: Sequence[Fraction]) -> Point:
    return combine(zip(coords, (f.images[v] for v in facet)), f.codomain)


def evaluate(f: PAMap, x: Point, check: bool = False) -> Point:
    """f(x); with ``check`` every containing cell must agree."""
    hits = f.domain.locate(x)
    if not hits:
        raise PointOutsideDomain(f"{x} is not covered by the domain subdivision")
    y = _apply(f, *hits[0])
    if check:
        for h in hits[1:]:
            if _apply(f, *h) != y:
                raise MapError(f"cells disagree at {x}")
    return y


# -- overlay ----------------------------------------------------------------

@dataclass
class Piece:
    """One affine piece of f over a cell.

    ``local`` holds barycentric coordinates of the piece's vertices relative to
    the cell's own vertices; ``images`` their images; ``points`` their positions
    in the base.
    """

    local: list[tuple[Fraction, ...]]
    points: list[Point]
    images: list[Point]

    @property
    def generic_support(self) -> Simplex:
        s = set()
        for p in self.images:
            s.update(p.support)
        return tuple(sorted(s))


def _vertex_pieces(f: PAMap, x: Point) -> list[Piece]:
    return [Piece([(Fraction(1),)], [x], [evaluate(f, x)])]


def _segment_pieces(f: PAMap, a: Point, b: Point) -> list[Piece]:
    union = set(a.support) | set(b.support)
    intervals: dict[tuple[Fraction, Fraction], tuple[Simplex, list, list]] = {}
    for g in f.domain.candidate_facets(Point.barycenter(union)):
        fr = f.domain.frame(g)
        if fr.degenerate:
            continue
        ca, cb = fr.coords(a), fr.coords(b)
        if ca is None or cb is None:
            continue
        lo, hi = Fraction(0), Fraction(1)
        for p, q in zip(ca, cb):
            # coordinate (1-t) p + t q >= 0
            d = q - p
            if d == 0:
                if p < 0:
                    lo, hi = Fraction(1), Fraction(0)
                    break
            elif d > 0:
                lo = max(lo, -p / d)
            else:
                hi = min(hi, -p / d)
        if hi > lo and (lo, hi) not in intervals:
            intervals[(lo, hi)] = (g, ca, cb)
    pieces = []
    for (lo, hi), (g, ca, cb) in sorted(intervals.items()):
        loc, pts, imgs = [], [], []
        for t in (lo, hi):
            c = [(1 - t) * p + t * q for p, q in zip(ca, cb)]
            loc.append((1 - t, t))
            pts.append(combine([(1 - t, a), (t, b)], a.ambient))
            imgs.append(_apply(f, g, c))
        pieces.append(Piece(loc, pts, imgs))
    _check_cover_1d([(p.local[0][1], p.local[1][1]) for p in pieces])
    return pieces


def _check_cover_1d(ivs: list[tuple[Fraction, Fraction]]) -> None:
    at = Fraction(0)
    for lo, hi in sorted(ivs):
        if lo > at:
            raise IncompatibleDomains(f"segment not covered near parameter {at}")
        at = max(at, hi)
    if at != 1:
        raise IncompatibleDomains("segment not covered up to its end")


def _volume(rows: list[tuple[Fraction, ...]]) -> Fraction:
    n = len(rows)
    M = [list(r) for r in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        for r in range(col + 1, n):
            fac = M[r][col] / M[col][col]
            M[r] = [x - fac * y for x, y in zip(M[r], M[col])]
    return abs(det)


def _cell_pieces(f: PAMap, pts: Sequence[Point]) -> list[Piece]:
    union = set()
    for p in pts:
        union.update(p.support)
    frame_vs = tuple(sorted(union))
    cell = AffineFrame(pts, frame_vs) if len(frame_vs) == len(pts) else None
    if cell is None or cell.degenerate:
        raise IncompatibleDomains("cell is not full-dimensional in its base carrier")
    center = combine([(Fraction(1, len(pts)), p) for p in pts], pts[0].ambient)
    cands = f.domain.candidate_facets(center)
    unit = [tuple(Fraction(int(i == j)) for j in range(len(pts))) for i in range(len(pts))]
    for g in cands:
        fr = f.domain.frame(g)
        if fr.degenerate:
            continue
        cs = [fr.coords(p) for p in pts]
        if all(c is not None and min(c) >= 0 for c in cs):
            return [Piece(unit, list(pts), [_apply(f, g, c) for c in cs])]
    pieces = []
    total = Fraction(0)
    for g in cands:
        gpts = [f.domain.embedding[v] for v in g]
        loc = [cell.coords(p) for p in gpts]
        if all(c is not None and min(c) >= 0 for c in loc):
            loc = [tuple(c) for c in loc]
            pieces.append(Piece(loc, gpts, [f.images[v] for v in g]))
            total += _volume(loc)
    if total != 1:
        raise IncompatibleDomains("cell is not a union of the map's cells; overlay unsupported")
    return pieces


def image_pieces(f: PAMap, pts: Sequence[Point]) -> list[Piece]:
    """Affine pieces of ``f`` over the closed cell spanned by ``pts`` (base points)."""
    pts = list(pts)
    if len(pts) == 1:
        return _vertex_pieces(f, pts[0])
    if len(pts) == 2:
        return _segment_pieces(f, pts[0], pts[1])
    return _cell_pieces(f, pts)


def image_carrier(f: PAMap, pts: Sequence[Point]) -> set[Simplex]:
    """carr(f(|cell|), O) as the set of maximal image carriers (one per piece)."""
    return {p.generic_support for p in image_pieces(f, pts)}


def open_star_centers(f: PAMap, pts: Sequence[Point]) -> set[int]:
    """Vertices w with f(interior of the cell) inside ostar(w), decided exactly.

    A point of the open cell lies in the relative interior of some face of some
    piece; its image's support is the union of that face's image supports.
    """
    pieces = image_pieces(f, pts)
    cands: set[int] | None = None
    for pc in pieces:
        for face in faces_of(range(len(pc.local))):
            k = len(face)
            centroid = [sum(pc.local[j][i] for j in face) / k for i in range(len(pts))]
            if min(centroid) <= 0:
                continue
            sup = set()
            for j in face:
                sup.update(pc.images[j].support)
            cands = sup if cands is None else cands & sup
            if not cands:
                return set()
    return cands or set()


# -- simplicial maps ----------------------------------------------------------

def realize_simplicial(domain: Subdivision, vertex_map: Mapping[int, int], codomain: Complex) -> PAMap:
    """Geometric realization of a vertex map; certified when it is chromatic."""
    for g in domain.complex.facets:
        img = {vertex_map[v] for v in g}
        if not codomain.has_simplex(img):
            raise NotSimplicial(f"facet {g} maps to {sorted(img)}, not a simplex")
    chrom = all(domain.complex.color(v) == codomain.color(w) for v, w in vertex_map.items())
    imgs = {v: Point.vertex(vertex_map[v], codomain) for v in domain.complex.vertices}
    return PAMap(domain, codomain, imgs, CHROMATIC_SIMPLICIAL if chrom else None)


def identity_map(K: Complex) -> PAMap:
    return realize_simplicial(identity(K), {v: v for v in K.vertices}, K)


# -- chromatic projection ------------------------------------------------------

def chromatic_projection(c: int, x: Point, O: Complex | None = None) -> Point:
    """Drop the color-c coordinate of ``x`` and rescale the rest."""
    O = O or x.ambient
    v = O.vertex_of_color(x.support, c)
    if v is None:
        return x
    alpha = x.weight(v)
    if alpha == 1:
        raise UndefinedAtColorVertex(f"projection along color {c} is undefined at vertex {v}")
    return Point(tuple((u, w / (1 - alpha)) for u, w in x.weights if u != v), O)


def remove_color(K: Complex, c: int) -> Complex:
    """K minus its color-c vertices (the faces opposite them)."""
    sims = []
    for f in K.facets:
        rest = tuple(v for v in f if K.color(v) != c)
        if rest:
            sims.append(rest)
    return Complex.from_simplices(K.vertices, sims)


def _restrict_general(S: Subdivision, L: Complex) -> Subdivision:
    Lf = L.faces
    sims = [s for s in S.complex.faces if S.carrier_of_simplex(s) in Lf]
    keep = {v for s in sims for v in s}
    return Subdivision(
        base=L,
        complex=Complex.from_simplices(S.complex.vertices, sims),
        carrier={v: S.carrier[v] for v in keep},
        embedding={v: S.embedding[v].with_ambient(L) for v in keep},
        depth=S.depth,
    )


def project_map(f: PAMap, c: int, S_c: Complex | None = None) -> PAMap:
    """f_c = pi_c o f on S_c minus its color-c vertices, into O minus color c.

    ``S_c`` is a subcomplex of f's base (default: the whole base).  Image points
    are projected exactly at every domain vertex and interpolated affinely in
    between.  Inside one output simplex this is a monotone reparametrization of
    the true projection, so supports (hence every carrier) agree pointwise.
    """
    S_c = S_c or f.base
    S_prime = remove_color(S_c, c)
    dom = _restrict_general(f.domain, S_prime)
    O_prime = remove_color(f.codomain, c)
    imgs = {}
    for v in dom.complex.vertices:
        try:
            imgs[v] = chromatic_projection(c, f.images[v], f.codomain).with_ambient(O_prime)
        except UndefinedAtColorVertex:
            raise ImageHitsColorVertex(f"f({v}) is the color-{c} vertex") from None
    return PAMap(dom, O_prime, imgs)


def pullback(f: PAMap, host: Subdivision, L: Complex) -> PAMap:
    """f restricted to |L|, re-expressed over L as its own base.

    ``L`` is a pure subcomplex of ``host.complex`` and ``host`` subdivides the
    same base as ``f.domain``.  Each facet of L is cut into f's pieces; piece
    vertices that are not vertices of L must be vertices of f's domain (their
    colors come from there).
    """
    vid_of_pos: dict[Point, int] = {}
    verts: dict[int, Vertex] = {}
    carrier: dict[int, Simplex] = {}
    emb: dict[int, Point] = {}
    imgs: dict[int, Point] = {}
    for v in L.vertices:
        p = host.embedding[v]
        vid_of_pos[p] = v
    f_pos = {p: u for u, p in f.domain.embedding.items()}
    next_id = max(L.vertices) + 1 if L.vertices else 0
    facets = []
    for F in L.facets:
        pts = [host.embedding[v] for v in F]
        for pc in image_pieces(f, pts):
            facet = []
            for loc, pt, img in zip(pc.local, pc.points, pc.images):
                lp = Point.of({F[i]: w for i, w in enumerate(loc)}, L)
                v = vid_of_pos.get(pt)
                if v is None:
                    u = f_pos.get(pt)
                    if u is None:
                        raise IncompatibleDomains(f"overlay vertex {pt} has no color")
                    v = next_id
                    next_id += 1
                    vid_of_pos[pt] = v
                    verts[v] = Vertex(v, f.domain.complex.color(u), f"f{u}")
                if v in L.vertices:
                    verts.setdefault(v, L.vertices[v])
                carrier.setdefault(v, lp.support)
                emb.setdefault(v, lp)
                imgs.setdefault(v, img)
                facet.append(v)
            facets.append(facet)
    cplx = build_complex(list(verts.values()), sorted({tuple(sorted(x)) for x in facets}))
    dom = Subdivision(L, cplx, carrier, emb, depth=0 if cplx.same_as(L) else None)
    if dom.depth == 0:
        dom = identity(L)
    return PAMap(dom, f.codomain, imgs)


# -- chromaticity ----------------------------------------------------------------

@dataclass(frozen=True)
class ChromaticityVerdict:
    kind: str  # "chromatic" | "violation" | "no-violation-found"
    certificate: str | None = None
    witness: Point | None = None
    neighborhood_dim: int | None = None
    domain_colors: frozenset | None = None
    image_colors: frozenset | None = None
    samples: int | None = None

    @property
    def is_chromatic(self) -> bool:
        return self.kind == "chromatic"

    def __bool__(self) -> bool:
        return self.kind != "violation"

    def to_json(self) -> dict:
        out: dict = {"verdict": self.kind}
        if self.certificate:
            out["certificate"] = self.certificate
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
            out["neighborhood_dim"] = self.neighborhood_dim
            out["domain_colors"] = sorted(c + 1 for c in self.domain_colors)
            out["image_colors"] = sorted(c + 1 for c in self.image_colors)
        if self.samples is not None:
            out["samples"] = self.samples
        return out


def _violation(x, d, dc, ic) -> ChromaticityVerdict:
    return ChromaticityVerdict("violation", witness=x, neighborhood_dim=d,
                               domain_colors=frozenset(dc), image_colors=frozenset(ic))


def _check_dim1(f: PAMap) -> ChromaticityVerdict:
    I, O, D = f.base, f.codomain, f.domain
    for v in sorted(D.complex.vertices):
        base_car = D.carrier[v]
        dc = I.colors(base_car)
        ic = O.colors(f.images[v].support)
        if not dc & ic:
            return _violation(D.embedding[v], 0, dc, ic)
        if len(base_car) == 1 and not dc <= ic:
            return _violation(D.embedding[v], 0, dc, ic)
    for g in D.complex.facets:
        base_car = D.carrier_of_simplex(g)
        if len(base_car) < 2:
            continue
        dc = I.colors(base_car)
        sup = set()
        for v in g:
            sup.update(f.images[v].support)
        ic = O.colors(sup)
        if not dc <= ic:
            mid = combine([(Fraction(1, len(g)), D.embedding[v]) for v in g], I)
            return _violation(mid, 1, dc, ic)
    return ChromaticityVerdict("chromatic", certificate="dim1-exact")


def _sample_once(f: PAMap, facets: list, rng: random.Random) -> ChromaticityVerdict | None:
    """One random neighborhood inside a single affine cell of f.

    Any violating neighborhood contains a smaller violating one inside a cell,
    so sampling cell-wise loses nothing in the limit.
    """
    I, O, D = f.base, f.codomain, f.domain
    g = facets[rng.randrange(len(facets))]
    top = D.carrier_of_simplex(g)
    rho = tuple(sorted(rng.sample(top, rng.randint(1, len(top)))))
    psi = [u for u in g if set(D.carrier[u]) <= set(rho)]
    if not psi or D.carrier_of_simplex(psi) != rho:
        return None
    ws = [Fraction(rng.randint(1, 64)) for _ in psi]
    tot = sum(ws)
    x = [w / tot for w in ws]
    d = rng.randint(0, len(psi) - 1)
    J = rng.sample(range(len(psi)), d + 1)
    eps = min(x) / 2
    sup: set[int] = set()
    for j in J:
        loc = list(x)
        for i in J:
            loc[i] -= eps / (d + 1)
        loc[j] += eps
        for i, c in enumerate(loc):
            if c:
                sup.update(f.images[psi[i]].support)
    dc = I.colors(rho)
    ic = O.colors(sup)
    if len(dc & ic) < d + 1:
        pt = combine(zip(x, (D.embedding[u] for u in psi)), I)
        return _violation(pt, d, dc, ic)
    return None


def check_chromatic(f: PAMap, samples: int = 10_000, seed: int = 0) -> ChromaticityVerdict:
    """Decide (dimension <= 1) or certify/falsify (dimension >= 2) chromaticity."""
    if f.base.dim <= 1:
        return _check_dim1(f)
    if f.certificate == CHROMATIC_SIMPLICIAL:
        return ChromaticityVerdict("chromatic", certificate=CHROMATIC_SIMPLICIAL)
    rng = random.Random(seed)
    facets = list(f.domain.complex.facets)
    for _ in range(samples):
        v = _sample_once(f, facets, rng)
        if v is not None:
            return v
    return ChromaticityVerdict("no-violation-found", samples=samples)


def recheck_violation(f: PAMap, verdict: ChromaticityVerdict) -> bool:
    """Rebuild an explicit neighborhood at the witness and test the definition."""
    x = verdict.witness
    d = verdict.neighborhood_dim
    I, O = f.base, f.codomain
    rho = x.support
    if d == 0:
        nbhd = [x]
    else:
        hits = f.domain.locate(x)
        pts = None
        for g, _ in hits:
            fr = f.domain.frame(g)
            for corners in itertools.combinations(rho, d + 1):
                eps = Fraction(1, 8)
                cen = Point.barycenter(corners, I)
                for _ in range(40):
                    cand = [{v: x.weight(v) + eps * (int(v == u) - cen.weight(v)) for v in rho}
                            for u in corners]
                    if all(min(s.values()) > 0 for s in cand):
                        ps = [Point.of(s, I) for s in cand]
                        if all(fr.contains(p) for p in ps):
                            pts = ps
                            break
                    eps /= 2
                if pts:
                    break
            if pts:
                break
        if pts is None:
            return False
        nbhd = pts
    sup = set()
    for p in nbhd:
        sup.update(evaluate(f, p).support)
    return len(I.colors(rho) & O.colors(sup)) < d + 1
