"""Acceptance criteria 1-8, each with its runtime budget.

Every test prints one ``criterion N: PASS|FAIL`` line straight to the terminal.
"""
import random
import time
from contextlib import contextmanager
from fractions import Fraction as F

import pytest

from contask.approx import DecisionMap, chromatic_approximation, verify_chromatic_approximation
from contask.apxagree import MIXED, PreferenceParams, build_io, build_preference_map, required_rounds, solve
from contask.chromap import PAMap, check_chromatic, chromatic_projection, identity_map, realize_simplicial
from contask.complex import simplex_complex
from contask.geometry import Point
from contask.iis import all_executions, decide, schedule_facet_bijection
from contask.subdivision import chromatic, iterate_chromatic, mesh
from contask.task import (
    binary_consensus,
    generate_failsafe_consensus,
    induced_task,
    search_decision_map,
    unconstrained_task,
    verify_solution,
)

from helpers import ordered_partitions_by_rank, random_chromatic_map, snapshot_facets, thirds

E = simplex_complex(1)
T = simplex_complex(2)


@contextmanager
def criterion(n, budget, capsys):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - t0
        assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s, budget {budget}s)")


def _facet_views(S):
    C = S.complex
    return {frozenset((C.color(v), frozenset(S.base.color(u) for u in S.views[v])) for v in g)
            for g in C.facets}


def test_criterion_1_subdivision_counts(capsys):
    with criterion(1, 1.0, capsys):
        for d, expect in ((1, 3), (2, 13), (3, 75)):
            S = chromatic(simplex_complex(d))
            assert len(S.complex.facets) == expect == len(ordered_partitions_by_rank(range(d + 1)))
            assert _facet_views(S) == snapshot_facets(d + 1)
        S2 = iterate_chromatic(E, 2)
        assert len(S2.complex.facets) == 9
        assert sorted(S2.embedding[v].weight(1) for v in S2.complex.vertices) == thirds(2)
        assert thirds(2) == [F(i, 9) for i in range(10)]


def test_criterion_2_chromatic_round_trip(capsys):
    rng = random.Random(2024)
    with criterion(2, 10.0, capsys):
        cases = 0
        for i in range(100):
            base = E if i % 2 == 0 else T
            S = chromatic(base)
            target = base if i % 4 < 2 else chromatic(base).complex
            mu = random_chromatic_map(rng, S, target)
            assert mu is not None
            f = realize_simplicial(S, mu, target)
            v = check_chromatic(f, seed=i)
            assert v.is_chromatic, v.to_json()
            # same map without the certificate: the exact or sampling check must agree
            bare = check_chromatic(PAMap(f.domain, f.codomain, f.images), samples=500, seed=i)
            assert bare.kind != "violation", bare.to_json()
            cases += 1
        assert cases == 100


def test_criterion_3_projection(capsys):
    rng = random.Random(3)
    with criterion(3, 60.0, capsys):
        x = Point.of({0: F(1, 2), 1: F(1, 4), 2: F(1, 4)}, T)
        assert chromatic_projection(2, x).as_dict() == {0: F(2, 3), 1: F(1, 3)}
        for _ in range(1000):
            k = rng.randint(1, 3)
            face = tuple(sorted(rng.sample(range(3), k)))
            ws = [rng.randint(1, 10 ** 6) for _ in face]
            tot = sum(ws)
            p = Point.of({v: F(w, tot) for v, w in zip(face, ws)}, T)
            c = rng.randrange(3)
            if p.support == (c,):
                continue
            y = chromatic_projection(c, p)
            assert chromatic_projection(c, y) == y
            if c not in p.support:
                assert y == p


def _approx_ok(f):
    S, mu = chromatic_approximation(f)
    assert verify_chromatic_approximation(mu, f)
    assert verify_solution(mu, induced_task(f))


def test_criterion_4_approximation(capsys):
    rng = random.Random(44)
    with criterion(4, 60.0, capsys):
        for K in (E, T):
            _approx_ok(identity_map(K))
        domains = {1: [chromatic(E), iterate_chromatic(E, 2)], 2: [chromatic(T)]}
        targets = {1: [E, chromatic(E).complex, iterate_chromatic(E, 2).complex],
                   2: [T, chromatic(T).complex]}
        for i in range(50):
            d = 1 if i < 25 else 2
            S = rng.choice(domains[d])
            O = rng.choice(targets[d])
            mu = random_chromatic_map(rng, S, O)
            _approx_ok(realize_simplicial(S, mu, O))
        _approx_ok(build_preference_map(PreferenceParams(F(1, 2), F(3, 5))))


def test_criterion_5_preference_experiment(capsys):
    p = PreferenceParams(F(1, 2), F(3, 5))
    with criterion(5, 10.0, capsys):
        assert required_rounds(p) == 4
        mu, rep = solve(p)
        assert rep.rounds == 4
        assert mesh(mu.domain) == F(1, 81) < F(1, 40)
        for name in MIXED:
            a, t = rep.per_facet[name]
            assert t == 81
            assert F(a, t) >= F(48, 81)
            assert F(a, t) >= F(3, 5) - F(4, 81)
        assert rep.fraction >= F(43, 54) >= p.K
        assert rep.within_third
        _, O = build_io()
        for g in mu.domain.complex.facets:
            a, b = (F(O.payload(mu.images[v])) for v in g)
            assert abs(a - b) <= F(1, 3)


def _simulate_states(input_facet, I, rounds):
    """Independent IIS run: each process's final state as its full-information view."""
    state = {I.color(v): v for v in input_facet}
    for sched in rounds:
        seen, new = set(), {}
        for block in sched:
            seen |= set(block)
            snap = frozenset(state[q] for q in seen)
            for q in block:
                new[q] = (q, snap)
        state = new
    return state


def _decisions_agree(I, r, mu):
    S = mu.domain
    n = 0
    for e in all_executions(I, r):
        states = _simulate_states(e.input_facet, I, e.rounds)
        lookup = {p: mu.codomain.payload(mu.images[S.key_index[s]]) for p, s in states.items()}
        assert decide(e, mu) == lookup
        n += 1
    return n


def test_criterion_6_iis(capsys):
    rng = random.Random(6)
    I2, O2 = build_io()
    with criterion(6, 30.0, capsys):
        for r in range(5):
            assert schedule_facet_bijection(E, r)
            assert len(iterate_chromatic(E, r).complex.facets) == 3 ** r
            S = iterate_chromatic(I2, r)
            mu = DecisionMap(S, O2, random_chromatic_map(rng, S, O2))
            assert _decisions_agree(I2, r, mu) == 4 * 3 ** r
        for r, count in ((0, 1), (1, 13), (2, 169)):
            assert schedule_facet_bijection(T, r)
            S = iterate_chromatic(T, r)
            assert len(S.complex.facets) == count
            O = chromatic(T).complex
            mu = DecisionMap(S, O, random_chromatic_map(rng, S, O))
            assert _decisions_agree(T, r, mu) == count


def test_criterion_7_refutations(capsys):
    with criterion(7, 300.0, capsys):
        cons = binary_consensus(2)
        for depth in (1, 2):
            assert search_decision_map(iterate_chromatic(cons.input, depth), cons) is None
        fs = generate_failsafe_consensus(3, 1)
        assert search_decision_map(iterate_chromatic(fs.input, 1), fs) is None
        ctl = unconstrained_task(fs.input, fs.output)
        mu = search_decision_map(iterate_chromatic(ctl.input, 1), ctl)
        assert mu is not None and verify_solution(mu, ctl)


def test_criterion_8_link_connectivity(capsys):
    with criterion(8, 60.0, capsys):
        v = generate_failsafe_consensus(3, 1).output.is_link_connected()
        assert not v.ok and v.witness
        assert simplex_complex(2).is_link_connected().ok
