import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpe_solver import (
    CorrelatedStrategy,
    Game,
    MixedProfile,
    conditional_deviation_value,
    is_completely_mixed,
    is_correlated_equilibrium,
    marginal,
    product_distribution,
    product_support,
)
from cpe_solver.rationals import ZERO, rat


def test_game_validation():
    with pytest.raises(ValueError):
        Game([], [])
    with pytest.raises(ValueError):
        Game([["a", "a"]], [[0], [0]])
    with pytest.raises(ValueError):
        Game([["a", "b"]], [[0]])  # missing profiles
    with pytest.raises(ValueError):
        Game([["a", "b"]], [[0, 1], [0, 1]])  # wrong payoff arity


def test_payoff_lookup_and_labels(game1):
    p = game1.profile_of_labels(["y1", "y2", "x3"])
    assert game1.payoff(0, p) == 3
    assert game1.payoff(1, p) == 0
    assert game1.labels_of_profile(p) == ("y1", "y2", "x3")
    with pytest.raises(ValueError):
        game1.payoff(3, p)
    with pytest.raises(ValueError):
        game1.strategy_index(0, "nope")


def test_single_strategy_player_is_permitted():
    g = Game([["a", "b"], ["only"]], {(0, 0): (1, 0), (1, 0): (0, 0)})
    rho = CorrelatedStrategy.point_mass(g.shape, (0, 0))
    assert is_correlated_equilibrium(g, rho)


def test_distribution_validation():
    with pytest.raises(ValueError):
        CorrelatedStrategy((2, 2), {(0, 0): rat(1, 2)})  # sums to 1/2
    with pytest.raises(ValueError):
        CorrelatedStrategy((2, 2), {(0, 0): rat(3, 2), (1, 1): rat(-1, 2)})
    with pytest.raises(ValueError):
        CorrelatedStrategy((2, 2), [1])  # wrong length


def test_conditional_value_matching_pennies(matching_pennies):
    uniform = CorrelatedStrategy.uniform((2, 2))
    assert conditional_deviation_value(matching_pennies, uniform, 0, 0, 0) == 0
    assert conditional_deviation_value(matching_pennies, uniform, 0, 0, 1) == 0


def test_conditional_value_zero_marginal(game1, delta_y):
    # x1 is never recommended under the point mass at (y1,y2,y3)
    x1 = game1.strategy_index(0, "x1")
    for target in range(3):
        assert conditional_deviation_value(game1, delta_y, 0, x1, target) == 0


def test_conditional_value_on_noise_family(game1, fig1b_family):
    # Exact values at eps = 1/100: the three conditional payoffs for player 1
    # at recommendation y1 are (15eps+3)/Z, (15eps+3)/Z, (9eps+3)/Z with
    # Z = 1 + 25 eps, i.e. 63/25, 63/25, 309/125.
    rho = fig1b_family.at(rat(1, 100))
    y1 = game1.strategy_index(0, "y1")
    vals = [conditional_deviation_value(game1, rho, 0, y1, t) for t in range(3)]
    assert vals == [rat(63, 25), rat(63, 25), rat(309, 125)]
    assert vals[1] >= vals[0] and vals[1] >= vals[2]


def test_ce_examples(game1, game2, delta_y, fig2b, matching_pennies):
    assert is_correlated_equilibrium(matching_pennies, CorrelatedStrategy.uniform((2, 2)))
    assert is_correlated_equilibrium(game1, delta_y)
    assert is_correlated_equilibrium(game2, fig2b)


def test_ce_witness_soundness(game1):
    bad = CorrelatedStrategy.point_mass(game1.shape, game1.profile_of_labels(["y1", "x2", "x3"]))
    check = is_correlated_equilibrium(game1, bad)
    assert not check
    v = check.violation
    # recompute both sides of the violated inequality
    obey = conditional_deviation_value(game1, bad, v.player, v.recommended, v.recommended)
    dev = conditional_deviation_value(game1, bad, v.player, v.recommended, v.deviation)
    assert obey == v.obey_value and dev == v.deviate_value and dev > obey


def test_marginals(game1, game2, delta_y, fig2b):
    assert marginal(delta_y, 2) == (ZERO, rat(1))
    assert marginal(fig2b, 0) == (rat(1, 4),) * 4
    uniform = CorrelatedStrategy.uniform((2, 2))
    assert marginal(uniform, 0) == (rat(1, 2), rat(1, 2))
    with pytest.raises(ValueError):
        marginal(uniform, 2)


def test_product_support(game1, delta_y, half_mix, fig2b):
    assert product_support(delta_y).sets == ((1,), (1,), (1,))
    assert product_support(half_mix).sets == ((1, 2), (1, 2), (1,))
    assert product_support(fig2b).sets == ((0, 1, 2, 3), (0, 1, 2, 3), (0, 1))


def test_completely_mixed(game1, delta_y, fig1b_family):
    assert is_completely_mixed(CorrelatedStrategy.uniform((2, 3)))
    assert not is_completely_mixed(delta_y)
    for eps in (rat(1, 10), rat(1, 1000)):
        assert is_completely_mixed(fig1b_family.at(eps))


def test_product_distribution_examples():
    point = MixedProfile([[0, 1], [0, 1], [0, 1]])
    assert product_distribution(point) == CorrelatedStrategy.point_mass((2, 2, 2), (1, 1, 1))
    uniform = MixedProfile([[rat(1, 2)] * 2, [rat(1, 2)] * 2])
    assert product_distribution(uniform) == CorrelatedStrategy.uniform((2, 2))
    sigma = MixedProfile([[rat(1, 3), rat(2, 3)], [rat(1, 4), rat(3, 4)]])
    rho = product_distribution(sigma)
    assert rho.probs == (rat(1, 12), rat(1, 4), rat(1, 6), rat(1, 2))


shapes = st.lists(st.integers(min_value=1, max_value=3), min_size=1, max_size=3)


@st.composite
def distributions(draw):
    shape = tuple(draw(shapes))
    total = 1
    for k in shape:
        total *= k
    raw = draw(
        st.lists(st.integers(min_value=0, max_value=6), min_size=total, max_size=total)
    )
    if not any(raw):
        raw[draw(st.integers(min_value=0, max_value=total - 1))] = 1
    denom = sum(raw)
    return CorrelatedStrategy(shape, [rat(v, denom) for v in raw])


@settings(max_examples=60, deadline=None)
@given(distributions())
def test_marginal_sums_to_one(rho):
    for i in range(len(rho.shape)):
        assert sum(marginal(rho, i), ZERO) == 1


@settings(max_examples=60, deadline=None)
@given(distributions())
def test_support_consistency(rho):
    sup = product_support(rho)
    for profile, p in rho.items():
        if p:
            assert sup.contains_profile(profile)


@settings(max_examples=40, deadline=None)
@given(distributions())
def test_point_masses_round_trip(rho):
    assert CorrelatedStrategy(rho.shape, dict(rho.items())) == rho


@st.composite
def mixed_profiles(draw):
    shape = tuple(draw(shapes))
    rows = []
    for k in shape:
        raw = draw(st.lists(st.integers(min_value=0, max_value=5), min_size=k, max_size=k))
        if not any(raw):
            raw[0] = 1
        denom = sum(raw)
        rows.append([rat(v, denom) for v in raw])
    return MixedProfile(rows)


@settings(max_examples=60, deadline=None)
@given(mixed_profiles())
def test_product_distribution_mixing(sigma):
    rho = product_distribution(sigma)
    assert sum(rho.probs, ZERO) == 1
    assert is_completely_mixed(rho) == sigma.is_completely_mixed()
