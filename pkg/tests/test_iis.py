from fractions import Fraction as F

import pytest

from contask.apxagree import SIGMA, PreferenceParams, build_io, solve
from contask.complex import simplex_complex
from contask.errors import DepthMismatch, ExplosionGuard, MalformedExecution
from contask.iis import (
    all_executions,
    decide,
    enumerate_outcomes,
    enumerate_round_schedules,
    execution_to_facet,
    fubini,
    run_execution,
    schedule_facet_bijection,
)
from contask.subdivision import iterate_chromatic

from helpers import ordered_partitions_by_rank

E = simplex_complex(1)
T = simplex_complex(2)


def test_schedule_counts():
    assert [fubini(n) for n in range(5)] == [1, 1, 3, 13, 75]
    for n in range(1, 5):
        scheds = enumerate_round_schedules(range(n))
        assert len(scheds) == len(set(scheds)) == fubini(n)
        assert len(ordered_partitions_by_rank(range(n))) == fubini(n)


def test_two_process_round():
    scheds = enumerate_round_schedules([0, 1])
    assert set(scheds) == {(frozenset({0}), frozenset({1})), (frozenset({1}), frozenset({0})),
                           (frozenset({0, 1}),)}
    S = iterate_chromatic(E, 1)
    e = run_execution(E, (0, 1), [(frozenset({0}), frozenset({1}))])
    g = execution_to_facet(e, S)
    pos = {S.complex.color(v): S.embedding[v].weight(1) for v in g}
    # p1 ran alone and stays at its corner; p2 saw both
    assert pos == {0: 0, 1: F(1, 3)}
    same = run_execution(E, (0, 1), [(frozenset({0, 1}),)])
    pos = {S.complex.color(v): S.embedding[v].weight(1) for v in execution_to_facet(same, S)}
    assert pos == {0: F(2, 3), 1: F(1, 3)}


def test_states_are_views():
    e = run_execution(T, (0, 1, 2), [(frozenset({2}), frozenset({0, 1}))])
    final = e.states[-1]
    assert final[2] == (2, frozenset({2}))
    assert final[0] == (0, frozenset({0, 1, 2}))


@pytest.mark.parametrize("I,r", [(E, r) for r in range(5)] + [(T, r) for r in range(3)])
def test_bijection(I, r):
    assert schedule_facet_bijection(I, r)
    assert len(list(all_executions(I, r))) == fubini(len(I.vertices)) ** r


def test_malformed_executions():
    with pytest.raises(MalformedExecution):
        run_execution(E, (0, 1), [(frozenset({0}),)])
    with pytest.raises(MalformedExecution):
        run_execution(E, (0, 1), [(frozenset({0, 1}), frozenset({1}))])
    with pytest.raises(MalformedExecution):
        run_execution(E, (0, 7), [])
    e = run_execution(E, (0, 1), [(frozenset({0, 1}),)])
    with pytest.raises(DepthMismatch):
        execution_to_facet(e, iterate_chromatic(E, 2))


def test_cap():
    with pytest.raises(ExplosionGuard):
        list(all_executions(T, 4, cap=1000))


@pytest.fixture(scope="module")
def solved():
    return solve(PreferenceParams(F(1, 2), F(3, 5)))


def test_outcomes_of_the_solution(solved):
    mu, report = solved
    I, _ = build_io()
    table = enumerate_outcomes(I, 4, mu)
    assert table.total == 4 * 81
    assert table.per_facet[SIGMA["sigma0"]] == (81, 81)
    assert table.per_facet[SIGMA["sigma1"]] == (81, 81)
    for name in ("sigma2", "sigma3"):
        assert table.per_facet[SIGMA[name]][0] >= 48
    assert {SIGMA[k]: v for k, v in report.per_facet.items()} == table.per_facet


def test_decide_matches_facet_lookup(solved):
    mu, _ = solved
    I, _ = build_io()
    S = mu.domain
    for e in all_executions(I, 4):
        g = execution_to_facet(e, S)
        expect = {S.complex.color(v): mu.codomain.payload(mu.images[v]) for v in g}
        assert decide(e, mu) == expect
    e = run_execution(I, (0, 2), [])
    with pytest.raises(DepthMismatch):
        decide(e, mu)


def test_outcome_json(solved):
    mu, _ = solved
    I, _ = build_io()
    js = enumerate_outcomes(I, 4, mu).to_json()
    assert js["rounds"] == 4 and len(js["outcomes"]) == 324
    assert set(js["outcomes"][0]["outputs"]) == {"1", "2"}
