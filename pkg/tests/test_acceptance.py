"""Acceptance suite.

Each test implements one acceptance criterion end to end and prints a single
``[criterion N] PASS`` line (run with ``pytest -s`` to see them live).  All
checks are exact; there are no tolerances anywhere.  Criteria 4-7 share one
randomised corpus of 200 small games, built once per module.
"""

import random
from itertools import product

import pytest

from cpe_solver import (
    CorrelatedStrategy,
    DeviationPlan,
    DualVectorProfile,
    Game,
    Infeasible,
    LinearProgram,
    Optimal,
    Perfect,
    ProductSupport,
    Refuted,
    SupportWeights,
    aggregate_gain,
    ce_with_exact_support,
    certify_support,
    enumerate_product_supports,
    find_support_weights,
    is_completely_mixed,
    is_correlated_equilibrium,
    is_cpe,
    is_dual_vector,
    is_restricted,
    pdce_check,
    product_support,
    solve,
    supporting_sequence_term,
    verify_farkas_certificate,
    verify_parametric_sequence,
    verify_sequence_term,
    weakly_dominated_strategies,
)
from cpe_solver.polynomials import EpsPolynomial
from cpe_solver.rationals import rat

from conftest import brute_force_lp_maximum, ce_within_support, random_game

SUITE_SEED = 73001
SUITE_GAMES = 200


def report(criterion: int, detail: str):
    print(f"[criterion {criterion}] PASS - {detail}")


class SupportRecord:
    __slots__ = ("support", "perfect", "verdict", "weights")

    def __init__(self, support, perfect, verdict, weights):
        self.support = support
        self.perfect = perfect
        self.verdict = verdict
        self.weights = weights


class GameRecord:
    __slots__ = ("game", "records", "by_support")

    def __init__(self, game, records):
        self.game = game
        self.records = records
        self.by_support = {rec.support: rec for rec in records}


@pytest.fixture(scope="module")
def suite():
    """200 random games with every product support certified by both routes
    (refutation LP and weight-system feasibility)."""
    rng = random.Random(SUITE_SEED)
    games = []
    for _ in range(SUITE_GAMES):
        game = random_game(rng, players=(2, 3), strategies=(2, 3), span=3)
        records = []
        for support in enumerate_product_supports(game.shape):
            verdict = certify_support(game, support)
            weights = find_support_weights(game, support)
            records.append(
                SupportRecord(
                    support=support,
                    perfect=verdict.is_perfect,
                    verdict=verdict,
                    weights=weights,
                )
            )
        games.append(GameRecord(game, records))
    return games


def test_criterion_1_example1_positive(game1, delta_y, fig1b_family):
    verdict = is_cpe(game1, delta_y)
    assert isinstance(verdict, Perfect)

    support = product_support(delta_y)
    check = verify_parametric_sequence(game1, fig1b_family, delta_y, support)
    assert check and check.limit_matches

    y1 = game1.strategy_index(0, "y1")
    x1 = game1.strategy_index(0, "x1")
    z1 = game1.strategy_index(0, "z1")
    assert check.constraint(0, y1, x1) == EpsPolynomial.zero()
    assert check.constraint(0, y1, z1) == EpsPolynomial([0, 6])
    report(1, "point mass at (y1,y2,y3) perfect; noise family verified, "
              "advantage polynomials 0 and 6*eps")


def test_criterion_2_example1_nonconvexity(game1, delta_z, half_mix):
    assert isinstance(is_cpe(game1, delta_z), Perfect)
    assert isinstance(is_cpe(game1, half_mix), Refuted)

    x1, y1, z1 = (game1.strategy_index(0, s) for s in ("x1", "y1", "z1"))
    plan12 = DeviationPlan.from_map(3, {y1: x1, z1: x1})
    alpha = DualVectorProfile([plan12, plan12, DeviationPlan.identity(2)])
    support = product_support(half_mix)
    assert is_dual_vector(game1, alpha)
    assert is_restricted(alpha, support)
    x3 = game1.strategy_index(2, "x3")
    for s1, s2 in product((y1, z1), repeat=2):
        assert aggregate_gain(game1, (s1, s2, x3), alpha) > 0
    report(2, "both point masses perfect, their mixture refuted, explicit "
              "deviation plans strictly gain on the whole block")


def test_criterion_3_example2_separation(game2, fig2b, appendix_trembles):
    assert is_correlated_equilibrium(game2, fig2b)

    robust = pdce_check(game2, fig2b, appendix_trembles)
    assert robust
    w1, y1, z1 = (game2.strategy_index(0, s) for s in ("w1", "y1", "z1"))
    assert robust.gain(0, w1, y1) == EpsPolynomial([rat(-9, 16), rat(7, 4), rat(-1, 2)])
    assert robust.gain(0, w1, z1) == EpsPolynomial([rat(-3, 16), rat(1, 4), rat(-1, 2)])

    assert isinstance(is_cpe(game2, fig2b), Refuted)

    plan12 = DeviationPlan.from_map(4, {2: 0, 3: 0})
    alpha = DualVectorProfile([plan12, plan12, DeviationPlan.identity(2)])
    y2 = game2.strategy_index(1, "y2")
    x3 = game2.strategy_index(2, "x3")
    assert aggregate_gain(game2, (y1, y2, x3), alpha) == 2
    report(3, "tremble-robust per the shipped family (exact gain polynomials) "
              "yet refuted as correlated perfect; plan gain at (y1,y2,x3) is 2")


def test_criterion_4_dual_route_cross_check(suite):
    supports = perfect = refuted = sequences = 0
    for record in suite:
        game = record.game
        for entry in record.records:
            supports += 1
            feasible = isinstance(entry.weights, SupportWeights)
            assert entry.perfect == feasible, (game, entry.support)
            if entry.perfect:
                perfect += 1
                rho = ce_within_support(game, entry.support)
                if rho is not None:
                    for k in (1, 7, 1000):
                        term = supporting_sequence_term(rho, entry.weights, k)
                        assert verify_sequence_term(game, term, entry.support)
                    sequences += 1
            else:
                refuted += 1
                verdict = entry.verdict
                assert is_restricted(verdict.alpha, entry.support)
                assert is_dual_vector(game, verdict.alpha)
                assert verdict.witnesses
                for witness in verdict.witnesses:
                    gain = aggregate_gain(game, witness.profile, verdict.alpha)
                    assert gain == witness.gain > 0
    assert supports >= 200
    report(4, f"{len(suite)} games, {supports} supports: refutation LP and "
              f"weight feasibility agree everywhere ({perfect} certified, "
              f"{refuted} refuted, {sequences} supporting sequences verified "
              "at k=1,7,1000)")


def test_criterion_5_no_dominated_strategy_in_certified_supports(suite):
    checked = 0
    for record in suite:
        game = record.game
        dominated = {
            i: weakly_dominated_strategies(game, i) for i in game.players()
        }
        if not any(dominated.values()):
            continue
        for entry in record.records:
            if entry.perfect:
                for i, subset in enumerate(entry.support.sets):
                    assert not (set(subset) & dominated[i]), (game, entry.support)
                checked += 1
    assert checked
    report(5, f"{checked} certified supports in games with weakly dominated "
              "strategies, none containing one")


def test_criterion_6_completely_mixed_ce_certified(suite):
    found = 0
    for record in suite:
        game = record.game
        full = ProductSupport.full(game.shape)
        rho = ce_with_exact_support(game, full)
        if rho is None or not is_completely_mixed(rho):
            continue
        found += 1
        assert record.by_support[full].perfect
        assert isinstance(is_cpe(game, rho), Perfect)
    assert found
    report(6, f"{found} completely mixed correlated equilibria found, all "
              "certified perfect")


def test_criterion_7_monotone_verdicts(suite):
    rng = random.Random(SUITE_SEED + 7)
    up = down = 0
    for record in suite:
        shape = record.game.shape
        for entry in record.records:
            if entry.perfect:
                for subset in _random_subsets(entry.support, rng, 3):
                    assert record.by_support[subset].perfect, (record.game, subset)
                    down += 1
            else:
                for superset in _random_supersets(entry.support, shape, rng, 3):
                    assert not record.by_support[superset].perfect, (record.game, superset)
                    up += 1
    report(7, f"refutations inherited by {up} sampled supersets, equality by "
              f"{down} sampled subsets")


def _random_subsets(support, rng, count):
    for _ in range(count):
        sets = []
        for subset in support.sets:
            size = rng.randint(1, len(subset))
            sets.append(tuple(sorted(rng.sample(subset, size))))
        yield ProductSupport(sets)


def _random_supersets(support, shape, rng, count):
    for _ in range(count):
        sets = []
        for i, subset in enumerate(support.sets):
            extra = [s for s in range(shape[i]) if s not in subset]
            take = rng.randint(0, len(extra))
            sets.append(tuple(sorted(set(subset) | set(rng.sample(extra, take)))))
        yield ProductSupport(sets)


def test_criterion_8_duplication_invariance(game1, delta_y):
    y1 = game1.strategy_index(0, "y1")
    names = [list(row) for row in game1.strategy_names]
    names[0].append("y1_copy")
    payoffs = {}
    for profile in product(*(range(len(row)) for row in names)):
        source = list(profile)
        if source[0] == game1.shape[0]:
            source[0] = y1
        payoffs[profile] = game1.payoff_vector(source)
    bigger = Game(names, payoffs)
    lifted = CorrelatedStrategy(
        bigger.shape, {p: v for p, v in delta_y.items() if v}
    )
    assert isinstance(is_cpe(bigger, lifted), Perfect)
    report(8, "duplicating y1 and lifting the point mass keeps the perfect verdict")


def test_criterion_9_lp_kernel_against_brute_force():
    rng = random.Random(SUITE_SEED + 9)
    optimal = infeasible = unbounded = 0
    for _ in range(500):
        lp = _random_lp(rng)
        outcome = solve(lp)
        if isinstance(outcome, Optimal):
            optimal += 1
            assert lp.is_feasible_point(outcome.point)
            assert brute_force_lp_maximum(lp) == outcome.value
        elif isinstance(outcome, Infeasible):
            infeasible += 1
            assert verify_farkas_certificate(lp, outcome.farkas_certificate)
            assert brute_force_lp_maximum(lp) is None
        else:
            unbounded += 1
    assert optimal and infeasible and unbounded
    report(9, f"500 random programs: {optimal} optima match vertex enumeration, "
              f"{infeasible} infeasibility certificates validate, "
              f"{unbounded} unbounded rays verified")


def _random_lp(rng):
    n = rng.randint(1, 4)
    m = rng.randint(1, 6)
    objective = [rng.randint(-4, 4) for _ in range(n)]
    cons = []
    for _ in range(m):
        coeffs = [rng.randint(-4, 4) for _ in range(n)]
        relation = rng.choice(["<=", ">=", "="])
        cons.append((coeffs, relation, rng.randint(-6, 6)))
    lower = [rng.choice([0, 0, 0, -2, 1]) for _ in range(n)]
    return LinearProgram(objective, cons, lower_bounds=lower)
