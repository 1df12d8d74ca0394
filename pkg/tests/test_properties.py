"""Property tests over random points, maps and schedules."""
import random
from fractions import Fraction as F

from hypothesis import given, strategies as st

from contask.approx import chromatic_approximation
from contask.chromap import PAMap, chromatic_projection, evaluate, project_map, realize_simplicial
from contask.complex import simplex_complex
from contask.geometry import Point, combine, extended_coloring, in_open_star, tv_distance
from contask.iis import enumerate_round_schedules, execution_to_facet, fubini, run_execution
from contask.subdivision import chromatic, iterate_chromatic

from helpers import ordered_partitions_by_rank, random_chromatic_map

E = simplex_complex(1)
T = simplex_complex(2)
S1 = chromatic(T)
S2 = iterate_chromatic(T, 2)

weights = st.lists(st.integers(0, 40), min_size=3, max_size=3).filter(lambda w: sum(w) > 0)


def _pt(ws, K=T):
    tot = sum(ws)
    return Point.of({v: F(w, tot) for v, w in enumerate(ws) if w}, K)


def _in_cell(S, g, ws):
    tot = sum(ws)
    return combine([(F(w, tot), S.embedding[v]) for w, v in zip(ws, g)], S.base)


@given(weights, st.integers(0, 2))
def test_projection_idempotent_and_affine(ws, c):
    x = _pt(ws)
    if x.support == (c,):
        return
    y = chromatic_projection(c, x)
    assert chromatic_projection(c, y) == y
    assert c not in y.support
    # oracle: drop the c-coordinate and renormalize
    rest = 1 - x.weight(c)
    assert y.as_dict() == {v: w / rest for v, w in x.as_dict().items() if v != c}
    if c not in x.support:
        assert y == x


@given(weights, weights)
def test_tv_distance_metric(a, b):
    x, y = _pt(a), _pt(b)
    assert tv_distance(x, y) == tv_distance(y, x)
    assert 0 <= tv_distance(x, y) <= 1
    assert (tv_distance(x, y) == 0) == (x == y)


@given(weights)
def test_point_json_round_trip(ws):
    x = _pt(ws)
    assert Point.from_json(x.to_json(), T) == x


@given(st.integers(0, len(S2.complex.facets) - 1), weights)
def test_identity_map_on_subdivision_is_identity(i, ws):
    g = S2.complex.facets[i]
    x = _in_cell(S2, g, ws)
    f = PAMap(S2, T, {v: p.with_ambient(T) for v, p in S2.embedding.items()})
    assert evaluate(f, x) == x.with_ambient(T)
    assert any(g == h for h, _ in S2.locate(x))


@given(st.integers(0, 10 ** 6), weights)
def test_realizations_preserve_colors(seed, ws):
    rng = random.Random(seed)
    mu = random_chromatic_map(rng, S1, T)
    f = realize_simplicial(S1, mu, T)
    g = rng.choice(S1.complex.facets)
    x = _in_cell(S1, g, ws)
    y = evaluate(f, x)
    assert extended_coloring(y) <= extended_coloring(x)


@given(st.integers(0, 10 ** 6), weights, st.integers(0, 2))
def test_projection_commutes_with_carriers(seed, ws, c):
    rng = random.Random(seed)
    mu = random_chromatic_map(rng, S1, T)
    f = realize_simplicial(S1, mu, T)
    g = project_map(f, c)
    edge = g.base
    a, b = edge.facets[0]
    x = Point.of({a: F(ws[0] + 1, ws[0] + ws[1] + 2), b: F(ws[1] + 1, ws[0] + ws[1] + 2)}, edge)
    assert evaluate(g, x).support == chromatic_projection(c, evaluate(f, x.with_ambient(T))).support


@given(st.integers(1, 4))
def test_schedules_match_rank_oracle(n):
    got = set(enumerate_round_schedules(range(n)))
    assert got == set(ordered_partitions_by_rank(range(n)))
    assert len(got) == fubini(n)


@given(st.lists(st.integers(0, 12), min_size=0, max_size=2))
def test_random_schedules_land_on_facets(picks):
    scheds = enumerate_round_schedules(range(3))
    rounds = [scheds[i] for i in picks]
    S = iterate_chromatic(T, len(rounds))
    e = run_execution(T, (0, 1, 2), rounds)
    assert execution_to_facet(e, S) in S.complex.facets


_APPROX = {}


def _approx(seed):
    if seed not in _APPROX:
        rng = random.Random(seed)
        f = realize_simplicial(S1, random_chromatic_map(rng, S1, S1.complex), S1.complex)
        _APPROX[seed] = (f, chromatic_approximation(f)[1])
    return _APPROX[seed]


@given(st.integers(0, 3), st.integers(0, 10 ** 6), weights)
def test_approximation_star_condition(seed, pick, ws):
    # f(x) lies in the open star of mu(v) for every vertex v of the cell holding x
    f, mu = _approx(seed)
    S = mu.domain
    g = S.complex.facets[pick % len(S.complex.facets)]
    x = _in_cell(S, g, [w + 1 for w in ws])
    y = evaluate(f, x)
    assert all(in_open_star(y, mu.images[v]) for v in g)
