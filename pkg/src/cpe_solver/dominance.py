"""Weak-dominance detection.

A pure strategy is weakly dominated if some mixture over the player's own
strategies does at least as well against every opponent profile and strictly
better against at least one.  Each strategy is decided by one exact LP:
maximise the total slack across opponent profiles subject to every slack
being nonnegative; the strategy is dominated iff the optimum is positive.
The mixture may put weight on the candidate strategy itself, which is always
feasible with value zero, so the LP is never infeasible.
"""

from __future__ import annotations

from .game import Game
from .lp import EQUAL, GREATER_EQ, LinearProgram, Optimal, solve
from .rationals import ONE, ZERO


def dominating_mixture(game: Game, i: int, s_i: int):
    """A mixture weakly dominating ``s_i`` for player ``i``, or None.

    Returns a tuple of weights over player ``i``'s strategies whose total
    advantage over ``s_i`` is strictly positive while never being negative
    against any opponent profile.
    """
    game._check_player(i)
    k = game.shape[i]
    if not 0 <= s_i < k:
        raise ValueError(f"strategy index {s_i} out of range for player {i}")

    opponents = list(game.opponents_profiles(i))
    rows = []
    objective = [ZERO] * k
    for template in opponents:
        profile = list(template)
        coeffs = []
        for t in range(k):
            profile[i] = t
            coeffs.append(game.payoff(i, profile))
        profile[i] = s_i
        base = game.payoff(i, profile)
        row = tuple(c - base for c in coeffs)
        rows.append((row, GREATER_EQ, ZERO))
        for j in range(k):
            objective[j] += row[j]
    rows.append(([ONE] * k, EQUAL, ONE))

    outcome = solve(LinearProgram(objective, rows))
    if not isinstance(outcome, Optimal):
        raise RuntimeError("dominance LP must have an optimum")
    if outcome.value > 0:
        return outcome.point
    return None


def weakly_dominated_strategies(game: Game, i: int) -> frozenset:
    """Indices of player ``i``'s weakly dominated strategies."""
    return frozenset(
        s_i for s_i in range(game.shape[i]) if dominating_mixture(game, i, s_i) is not None
    )
