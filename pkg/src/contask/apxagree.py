"""Consensus-preferent 1/3-approximate agreement for two processes.

Inputs are bits, outputs are values in {0, 1/3, 2/3, 1}.  On the two mixed
input edges the preference map zigzags through the output complex so that two
long segments land on the exact-agreement edges at 1/3 and 2/3; approximating
it on a fine enough ``Ch^r`` forces exact agreement on most facets.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .approx import DecisionMap, chromatic_approximation, verify_chromatic_approximation
from .chromap import PAMap, realize_simplicial
from .complex import Complex, Simplex, Vertex, build_complex
from .errors import BadParameters
from .geometry import Point, as_fraction
from .iis import enumerate_outcomes
from .subdivision import Subdivision, iterate_chromatic, mesh
from .task import CarrierMap, Task, cact_condition, induced_task, verify_solution

P1, P2 = 0, 1
VALUES = (Fraction(0), Fraction(1, 3), Fraction(2, 3), Fraction(1))
THIRD = Fraction(1, 3)

# input vertex ids: (p1,0)=0 (p1,1)=1 (p2,0)=2 (p2,1)=3
SIGMA = {"sigma0": (0, 2), "sigma1": (1, 3), "sigma2": (0, 3), "sigma3": (1, 2)}
MIXED = ("sigma2", "sigma3")


def in_vertex(p: int, b: int) -> int:
    return 2 * p + b


def out_vertex(p: int, value) -> int:
    return 4 * p + VALUES.index(as_fraction(value))


def build_io() -> tuple[Complex, Complex]:
    I = build_complex([Vertex(in_vertex(p, b), p, str(b)) for p in (P1, P2) for b in (0, 1)],
                      list(SIGMA.values()), name="binary-inputs-2")
    overts = [Vertex(out_vertex(p, v), p, str(v)) for p in (P1, P2) for v in VALUES]
    edges = [(out_vertex(P1, a), out_vertex(P2, b))
             for a in VALUES for b in VALUES if abs(a - b) <= THIRD]
    return I, build_complex(overts, edges, name="third-agreement-outputs")


def output_value(O: Complex, w: int) -> Fraction:
    return Fraction(O.payload(w))


@dataclass(frozen=True)
class PreferenceParams:
    K: Fraction
    M1: Fraction

    def __post_init__(self):
        object.__setattr__(self, "K", as_fraction(self.K))
        object.__setattr__(self, "M1", as_fraction(self.M1))
        if not 0 < self.K < self.M1 < 1:
            raise BadParameters(f"need 0 < K < M1 < 1, got K={self.K}, M1={self.M1}")

    @property
    def R(self) -> Fraction:
        return (1 - self.M1) / 3

    def breakpoints(self) -> tuple[Fraction, ...]:
        """Distances of x1..x4 from the first endpoint of a mixed edge."""
        R, M = self.R, self.M1
        return (R, M / 2 + R, 2 * R + M / 2, 2 * R + M)


# zigzag targets of x1..x4 as (process, value); on sigma3 the values mirror
_ZIGZAG = ((P2, THIRD), (P1, THIRD), (P2, 2 * THIRD), (P1, 2 * THIRD))


def build_preference_map(p: PreferenceParams) -> PAMap:
    I, O = build_io()
    verts = [I.vertices[v] for v in sorted(I.vertices)]
    carrier = {v: (v,) for v in I.vertices}
    emb = {v: Point.vertex(v, I) for v in I.vertices}
    images = {in_vertex(q, b): out_vertex(q, b) for q in (P1, P2) for b in (0, 1)}
    facets = [SIGMA["sigma0"], SIGMA["sigma1"]]
    nid = 4
    for name in MIXED:
        a, b = SIGMA[name]
        chain = [a]
        for i, (alpha, (q, val)) in enumerate(zip(p.breakpoints(), _ZIGZAG)):
            if name == "sigma3":
                val = 1 - val
            verts.append(Vertex(nid, q, f"x{i + 1}@{name}"))
            carrier[nid] = (a, b)
            emb[nid] = Point.of({a: 1 - alpha, b: alpha}, I)
            images[nid] = out_vertex(q, val)
            chain.append(nid)
            nid += 1
        chain.append(b)
        facets.extend(tuple(sorted(e)) for e in zip(chain, chain[1:]))
    dom = Subdivision(I, build_complex(verts, facets, name="preference-cells"), carrier, emb)
    return realize_simplicial(dom, images, O)


def required_rounds(p: PreferenceParams) -> int:
    """Smallest r with 3^-r < (M1 - K) / 4."""
    bound = (p.M1 - p.K) / 4
    r = 0
    while Fraction(1, 3 ** r) >= bound:
        r += 1
    return r


def agreement_task(I: Complex, O: Complex) -> Task:
    """1/3-agreement: outputs within the inputs' range, pairwise within 1/3."""
    def delta(s: Simplex):
        ins = [Fraction(I.payload(v)) for v in s]
        lo, hi = min(ins), max(ins)
        cols = I.colors(s)
        return [t for t in O.faces if O.colors(t) <= cols
                and all(lo <= output_value(O, w) <= hi for w in t)]
    return Task(I, O, CarrierMap.build(I, O, delta), "third-agreement")


def consensus_delta(I: Complex, O: Complex) -> CarrierMap:
    def delta(s: Simplex):
        ins = {Fraction(I.payload(v)) for v in s}
        cols = I.colors(s)
        return [t for t in O.faces if O.colors(t) <= cols
                and len({output_value(O, w) for w in t}) == 1
                and {output_value(O, w) for w in t} <= ins]
    return CarrierMap.build(I, O, delta)


@dataclass
class DensityReport:
    rounds: int
    required: int
    mesh: Fraction
    per_facet: dict[str, tuple[int, int]]
    forced: dict[str, int]
    bound: Fraction
    rows: list[dict] = field(default_factory=list)
    within_third: bool = True
    solution_valid: bool = True
    approximation_valid: bool = True
    cact_agreement: bool = True
    iis_agrees: bool = True

    @property
    def agree(self) -> int:
        return sum(a for a, _ in self.per_facet.values())

    @property
    def total(self) -> int:
        return sum(t for _, t in self.per_facet.values())

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.agree, self.total)

    def to_json(self) -> dict:
        return {
            "rounds": self.rounds,
            "required_rounds": self.required,
            "mesh": str(self.mesh),
            "per_facet": {k: {"agree": a, "total": t, "fraction": str(Fraction(a, t))}
                          for k, (a, t) in self.per_facet.items()},
            "forced_interior": self.forced,
            "mixed_edge_bound": str(self.bound),
            "fraction": str(self.fraction),
            "within_third": self.within_third,
            "solution_valid": self.solution_valid,
            "approximation_valid": self.approximation_valid,
            "cact_agreement": self.cact_agreement,
            "iis_agrees": self.iis_agrees,
            "rows": self.rows,
        }


def _position(S: Subdivision, g: Simplex, far: int) -> Fraction:
    return min(S.embedding[v].weight(far) for v in g)


def _forced(p: PreferenceParams, r: int) -> int:
    """Facets of Ch^r of a mixed edge lying strictly inside (x1,x2) or (x3,x4)."""
    n = 3 ** r
    x1, x2, x3, x4 = p.breakpoints()
    return sum(1 for i in range(n)
               if (x1 < Fraction(i, n) and Fraction(i + 1, n) < x2)
               or (x3 < Fraction(i, n) and Fraction(i + 1, n) < x4))


def solve(p: PreferenceParams, rounds: int | None = None,
          extra_depth: int = 3) -> tuple[DecisionMap, DensityReport]:
    """Approximate the preference map on Ch^r(I), r = required_rounds unless given.

    The mesh bound alone does not guarantee a star cover: a cell wider than the
    gap R between x2 and x3 has no single star around its image.  In that case
    the depth escalates up to ``extra_depth`` levels and ``rounds`` reports the
    depth actually used.
    """
    f = build_preference_map(p)
    I, O = f.base, f.codomain
    req = required_rounds(p) if rounds is None else rounds
    S, mu = chromatic_approximation(f, max_depth=max(req, 1) + extra_depth, min_depth=req)
    r = S.depth
    per: dict[str, tuple[int, int]] = {}
    rows = []
    within = True
    for name, sigma in SIGMA.items():
        far = sigma[1]
        cells = sorted((g for g in S.complex.facets if S.carrier_of_simplex(g) == sigma),
                       key=lambda g: _position(S, g, far))
        agree = 0
        for idx, g in enumerate(cells):
            outs = {S.complex.color(v): output_value(O, mu.images[v]) for v in g}
            within &= abs(outs[P1] - outs[P2]) <= THIRD
            agree += outs[P1] == outs[P2]
            rows.append({"facet": name, "index": idx,
                         "p1": str(outs[P1]), "p2": str(outs[P2])})
        per[name] = (agree, len(cells))
    table = enumerate_outcomes(I, r, mu)
    iis_per = {k: table.per_facet[v] for k, v in SIGMA.items()}
    report = DensityReport(
        rounds=r,
        required=req,
        mesh=mesh(S),
        per_facet=per,
        forced={name: _forced(p, r) for name in MIXED},
        bound=p.M1 - 4 * Fraction(1, 3 ** r),
        rows=rows,
        within_third=within,
        solution_valid=bool(verify_solution(mu, induced_task(f))),
        approximation_valid=bool(verify_chromatic_approximation(mu, f)),
        cact_agreement=bool(cact_condition(f, agreement_task(I, O).delta)),
        iis_agrees=iis_per == per,
    )
    return mu, report
