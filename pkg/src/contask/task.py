"""Tasks, carrier maps, induced tasks, solution checks and decision-map search."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .approx import DecisionMap
from .chromap import PAMap, check_chromatic, image_pieces
from .complex import Complex, Simplex, Vertex, build_complex, faces_of
from .errors import BadParameters, DomainMismatch, NotChromatic, TaskError
from .geometry import Point
from .subdivision import Subdivision

BOT = "⊥"


def _closure(sims: Iterable[Iterable[int]]) -> frozenset[Simplex]:
    out: set[Simplex] = set()
    for s in sims:
        out.update(faces_of(tuple(sorted(s))))
    return frozenset(out)


def _maximal_of(sims: frozenset) -> list[Simplex]:
    return sorted(s for s in sims if not any(set(s) < set(t) for t in sims if len(t) > len(s)))


def face_key(s: Simplex) -> str:
    return ",".join(map(str, s))


@dataclass(frozen=True, eq=False)
class CarrierMap:
    """Extensional carrier map: every face of ``source`` to a downward-closed set."""

    source: Complex
    target: Complex
    mapping: Mapping[Simplex, frozenset]

    @classmethod
    def build(cls, source: Complex, target: Complex,
              images: Mapping[Simplex, Iterable[Iterable[int]]] | Callable) -> "CarrierMap":
        m = {}
        for s in source.faces:
            gen = images(s) if callable(images) else images.get(s, ())
            img = _closure(gen)
            for t in img:
                if not target.has_simplex(t):
                    raise TaskError(f"image of {s} contains {t}, not a simplex of the target")
            m[s] = img
        return cls(source, target, m)

    def __call__(self, s: Iterable[int]) -> frozenset:
        return self.mapping[tuple(sorted(s))]

    def allows(self, s: Iterable[int], t: Iterable[int]) -> bool:
        return tuple(sorted(set(t))) in self(s)

    def is_monotone(self) -> bool:
        for s, img in self.mapping.items():
            for f in faces_of(s):
                if not self.mapping[f] <= img:
                    return False
        return True

    def is_rigid(self) -> bool:
        for s, img in self.mapping.items():
            if not img or any(len(t) > len(s) for t in img):
                return False
            if any(not any(set(t) <= set(u) and len(u) == len(s) for u in img) for t in img):
                return False
        return True

    def is_strict(self) -> bool:
        for s, t in itertools.combinations(self.mapping, 2):
            common = tuple(sorted(set(s) & set(t)))
            if common and self.mapping[common] != self.mapping[s] & self.mapping[t]:
                return False
        return True

    def to_json(self) -> dict:
        return {face_key(s): [list(t) for t in _maximal_of(self.mapping[s])]
                for s in sorted(self.mapping, key=lambda s: (len(s), s))}


@dataclass(frozen=True, eq=False)
class Task:
    input: Complex
    output: Complex
    delta: CarrierMap
    name: str = ""

    def __post_init__(self):
        if not (self.input.is_pure and self.output.is_pure):
            raise TaskError("input and output complexes must be pure")
        if self.input.dim != self.output.dim:
            raise TaskError("input and output complexes must have the same dimension")
        if not self.delta.is_monotone():
            raise TaskError("carrier map is not monotone")

    def to_json(self) -> dict:
        return {"name": self.name, "input": self.input.to_json(), "output": self.output.to_json(),
                "delta": self.delta.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "Task":
        I = Complex.from_json(data["input"])
        O = Complex.from_json(data["output"])
        raw = {tuple(int(x) for x in k.split(",")): v for k, v in data["delta"].items()}
        return cls(I, O, CarrierMap.build(I, O, raw), data.get("name", ""))


@dataclass(frozen=True, eq=False)
class ContinuousTask:
    input: Complex
    output: Complex
    f: PAMap

    def __post_init__(self):
        if check_chromatic(self.f).kind == "violation":
            raise NotChromatic("the map of a continuous task must be chromatic")


@dataclass(frozen=True)
class SolutionVerdict:
    ok: bool
    simplex: Simplex | None = None
    image: Simplex | None = None
    carrier: Simplex | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out: dict = {"ok": self.ok}
        if not self.ok:
            out.update(reason=self.reason, simplex=list(self.simplex or ()),
                       image=list(self.image or ()), carrier=list(self.carrier or ()))
        return out


def _base_points(f: PAMap, s: Simplex) -> list[Point]:
    return [Point.vertex(v, f.base) for v in s]


def induced_task(ct: ContinuousTask | PAMap, name: str = "induced") -> Task:
    """The task whose carrier map sends s to carr(f(|s|), O)."""
    f = ct.f if isinstance(ct, ContinuousTask) else ct
    images = {s: [p.generic_support for p in image_pieces(f, _base_points(f, s))]
              for s in f.base.faces}
    return Task(f.base, f.codomain, CarrierMap.build(f.base, f.codomain, images), name)


def verify_solution(mu: DecisionMap, T: Task) -> SolutionVerdict:
    """mu chromatic, simplicial and carried by the task's carrier map."""
    if not mu.domain.base.same_as(T.input):
        raise DomainMismatch("the decision map does not subdivide the task's input complex")
    if not mu.codomain.same_as(T.output):
        raise DomainMismatch("the decision map does not map into the task's output complex")
    if not mu.is_chromatic():
        return SolutionVerdict(False, reason="not chromatic")
    S = mu.domain
    for s in sorted(S.complex.faces, key=lambda s: (len(s), s)):
        img = mu.image(s)
        car = S.carrier_of_simplex(s)
        if not T.delta.allows(car, img):
            return SolutionVerdict(False, s, img, car, reason="not carried by the task")
    return SolutionVerdict(True)


def cact_condition(f: PAMap, delta: CarrierMap) -> SolutionVerdict:
    """f(|s|) inside |delta(s)| for every input face s."""
    for s in sorted(f.base.faces, key=lambda s: (len(s), s)):
        allowed = delta(s)
        for pc in image_pieces(f, _base_points(f, s)):
            if pc.generic_support not in allowed:
                return SolutionVerdict(False, s, pc.generic_support, s, reason="image leaves delta")
    return SolutionVerdict(True)


# -- search -------------------------------------------------------------------

def facet_order(S: Subdivision) -> list[int]:
    """Vertices in breadth-first facet order, ties by id."""
    C = S.complex
    order: list[int] = []
    seen: set[int] = set()
    done: set[Simplex] = set()
    for start in C.facets:
        if start in done:
            continue
        queue = deque([start])
        done.add(start)
        while queue:
            g = queue.popleft()
            for v in g:
                if v not in seen:
                    seen.add(v)
                    order.append(v)
            for v in g:
                for h in C.facets_of_vertex[v]:
                    if h not in done:
                        done.add(h)
                        queue.append(h)
    return order


def search_decision_map(S: Subdivision, T: Task, order: list[int] | None = None) -> DecisionMap | None:
    """Exhaustive backtracking for a chromatic simplicial map on S carried by T."""
    if not S.base.same_as(T.input):
        raise DomainMismatch("subdivision does not subdivide the task's input complex")
    C, O = S.complex, T.output
    order = list(order) if order is not None else facet_order(S)
    pos = {v: i for i, v in enumerate(order)}
    allowed = {s: T.delta(S.carrier_of_simplex(s)) for s in C.faces}
    domains = {v: [w for w in O.vertices_of_color(C.color(v)) if (w,) in allowed[(v,)]]
               for v in order}
    simplices_of: dict[int, list[Simplex]] = {v: [] for v in order}
    for s in C.faces:
        if len(s) > 1:
            for v in s:
                simplices_of[v].append(s)
    assign: dict[int, int] = {}

    def ok_with(v: int, w: int) -> bool:
        for s in simplices_of[v]:
            img = set()
            for u in s:
                if u == v:
                    img.add(w)
                elif u in assign:
                    img.add(assign[u])
                else:
                    break
            else:
                if tuple(sorted(img)) not in allowed[s]:
                    return False
        return True

    neighbors = {v: sorted({u for s in simplices_of[v] for u in s if u != v}, key=pos.get)
                 for v in order}

    def rec(i: int, doms: dict[int, list[int]]) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in doms[v]:
            if not ok_with(v, w):
                continue
            assign[v] = w
            # forward check: every unassigned neighbor keeps some candidate
            new = dict(doms)
            dead = False
            for u in neighbors[v]:
                if u in assign:
                    continue
                kept = [x for x in new[u] if ok_with(u, x)]
                if not kept:
                    dead = True
                    break
                new[u] = kept
            if not dead and rec(i + 1, new):
                return True
            del assign[v]
        return False

    if any(not d for d in domains.values()):
        return None
    if not rec(0, domains):
        return None
    return DecisionMap(S, O, dict(sorted(assign.items())))


# -- generators ---------------------------------------------------------------

def binary_input_complex(n: int) -> Complex:
    """All binary input assignments for n processes; vertex 2p+b is (p, b)."""
    verts = [Vertex(2 * p + b, p, str(b)) for p in range(n) for b in (0, 1)]
    facets = [[2 * p + b for p, b in enumerate(bits)] for bits in itertools.product((0, 1), repeat=n)]
    return build_complex(verts, facets, name=f"binary-inputs-{n}")


def generate_failsafe_consensus(n: int, k: int) -> Task:
    """Binary consensus where up to k processes may output the abstain value."""
    if n < 1 or k < 0:
        raise BadParameters("need n >= 1 and k >= 0")
    k = min(k, n)
    I = binary_input_complex(n)
    values = ("0", "1", BOT)
    verts = [Vertex(3 * p + i, p, val) for p in range(n) for i, val in enumerate(values)]
    facets = set()
    for outs in itertools.product(range(3), repeat=n):
        bots = sum(1 for o in outs if o == 2)
        vals = {o for o in outs if o != 2}
        if bots <= k and len(vals) <= 1:
            facets.add(tuple(3 * p + o for p, o in enumerate(outs)))
    O = build_complex(verts, sorted(facets), name=f"{k}-failsafe-consensus-{n}")
    Ofaces = O.faces

    def delta(s: Simplex):
        procs = {v // 2 for v in s}
        inputs = {str(v % 2) for v in s}
        out = []
        for t in Ofaces:
            if not {u // 3 for u in t} <= procs:
                continue
            vals = {O.payload(u) for u in t}
            bots = sum(1 for u in t if O.payload(u) == BOT)
            plain = vals - {BOT}
            if bots <= k and len(plain) <= 1 and plain <= inputs:
                out.append(t)
        return out

    name = "consensus" if k == 0 else f"{k}-failsafe-consensus"
    return Task(I, O, CarrierMap.build(I, O, delta), f"{name}-{n}")


def binary_consensus(n: int) -> Task:
    return generate_failsafe_consensus(n, 0)


def unconstrained_task(I: Complex, O: Complex) -> Task:
    """Control task: any output simplex on the participating colors is allowed."""
    Ofaces = O.faces

    def delta(s: Simplex):
        cols = I.colors(s)
        return [t for t in Ofaces if O.colors(t) <= cols]

    return Task(I, O, CarrierMap.build(I, O, delta), "unconstrained")
