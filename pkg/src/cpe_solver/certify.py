"""Correlated-perfection certification.

The object of interest is a profile of deviation plans: per player, a
row-stochastic matrix sending each recommendation to a randomised deviation.
Such a profile is a *dual vector* if the players' aggregate expected gain
from deviating is nonnegative at every strategy profile, and it is
*restricted* to a product support if it obeys every recommendation outside
that support.

A correlated equilibrium is correlated perfect exactly when every restricted
dual vector for its product support has aggregate gain zero everywhere.  The
universal quantifier collapses to a single exact LP: maximise the sum over
profiles of the aggregate gains, subject to each being nonnegative and the
plans being row-stochastic.  The optimum is zero iff no collectively
profitable restricted deviation exists; a positive optimum yields a
machine-checkable refutation (the optimising plans plus every profile where
the gain is strictly positive).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .game import (
    CeViolation,
    CorrelatedStrategy,
    Game,
    ProductSupport,
    is_correlated_equilibrium,
    product_support,
)
from .lp import EQUAL, GREATER_EQ, LinearProgram, Optimal, solve
from .rationals import ONE, ZERO, rat


class DeviationPlan:
    """Row-stochastic recommendation-to-deviation matrix for one player.

    ``rows[s_i][t_i]`` is the probability of playing ``t_i`` when told
    ``s_i``.  Rows must be nonnegative and sum to exactly 1.
    """

    __slots__ = ("rows",)

    def __init__(self, rows):
        cleaned = []
        width = None
        for s_i, row in enumerate(rows):
            row = tuple(rat(v) for v in row)
            if width is None:
                width = len(row)
            if len(row) != width:
                raise ValueError("deviation plan rows must have equal length")
            if any(v < 0 for v in row):
                raise ValueError(f"negative probability in row {s_i}")
            if sum(row, ZERO) != 1:
                raise ValueError(f"row {s_i} must sum to exactly 1")
            cleaned.append(row)
        if not cleaned or len(cleaned) != width:
            raise ValueError("a deviation plan must be a square matrix")
        self.rows = tuple(cleaned)

    @classmethod
    def identity(cls, size: int) -> "DeviationPlan":
        return cls(
            tuple(
                tuple(ONE if t == s else ZERO for t in range(size))
                for s in range(size)
            )
        )

    @classmethod
    def from_map(cls, size: int, moves: dict) -> "DeviationPlan":
        """Deterministic plan: follow the recommendation except where
        ``moves`` sends it elsewhere."""
        rows = []
        for s in range(size):
            t = moves.get(s, s)
            rows.append(tuple(ONE if j == t else ZERO for j in range(size)))
        return cls(rows)

    @property
    def size(self) -> int:
        return len(self.rows)

    def is_identity_row(self, s_i: int) -> bool:
        row = self.rows[s_i]
        return row[s_i] == 1

    def __eq__(self, other):
        if not isinstance(other, DeviationPlan):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"DeviationPlan({self.rows!r})"


class DualVectorProfile:
    """One deviation plan per player."""

    __slots__ = ("plans",)

    def __init__(self, plans):
        self.plans = tuple(plans)
        if not self.plans:
            raise ValueError("at least one player required")
        for plan in self.plans:
            if not isinstance(plan, DeviationPlan):
                raise TypeError("plans must be DeviationPlan instances")

    @classmethod
    def identity(cls, shape) -> "DualVectorProfile":
        return cls(tuple(DeviationPlan.identity(k) for k in shape))

    @property
    def shape(self):
        return tuple(plan.size for plan in self.plans)

    def __eq__(self, other):
        if not isinstance(other, DualVectorProfile):
            return NotImplemented
        return self.plans == other.plans

    def __hash__(self):
        return hash(self.plans)


@dataclass(frozen=True)
class DualVectorCheck:
    ok: bool
    witness: Optional[tuple] = None
    total: Optional[object] = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class RefutationWitness:
    profile: tuple
    gain: object


@dataclass(frozen=True)
class Perfect:
    """Equality certificate: the gain-maximising LP topped out at zero."""

    certificate: Optimal

    @property
    def is_perfect(self) -> bool:
        return True


@dataclass(frozen=True)
class Refuted:
    """A restricted dual vector with strictly positive aggregate gain."""

    alpha: DualVectorProfile
    witnesses: Tuple[RefutationWitness, ...]

    @property
    def is_perfect(self) -> bool:
        return False


CpeVerdict = Union[Perfect, Refuted]


class NotCorrelatedEquilibriumError(ValueError):
    """Perfection is only defined for correlated equilibria."""

    def __init__(self, violation: CeViolation):
        self.violation = violation
        super().__init__(
            "not a correlated equilibrium: player "
            f"{violation.player} recommended {violation.recommended} gains by "
            f"deviating to {violation.deviation} "
            f"({violation.deviate_value} > {violation.obey_value})"
        )


def deviation_gain(game: Game, profile, i: int, plan: DeviationPlan):
    """Expected payoff gain for player ``i`` at ``profile`` from following
    ``plan`` instead of the recommendation."""
    game._check_player(i)
    if plan.size != game.shape[i]:
        raise ValueError("plan size does not match the player's strategy count")
    profile = tuple(profile)
    base = game.payoff(i, profile)
    row = plan.rows[profile[i]]
    total = ZERO
    scratch = list(profile)
    for t, weight in enumerate(row):
        if weight and t != profile[i]:
            scratch[i] = t
            total += weight * (game.payoff(i, scratch) - base)
    return total


def aggregate_gain(game: Game, profile, alpha: DualVectorProfile):
    """Sum of all players' deviation gains at ``profile``."""
    total = ZERO
    for i, plan in enumerate(alpha.plans):
        total += deviation_gain(game, profile, i, plan)
    return total


def is_dual_vector(game: Game, alpha: DualVectorProfile) -> DualVectorCheck:
    """True iff the aggregate deviation gain is nonnegative at every profile;
    otherwise the first profile with negative aggregate gain is returned."""
    if alpha.shape != game.shape:
        raise ValueError("plan shape does not match the game")
    for profile in game.profiles():
        total = aggregate_gain(game, profile, alpha)
        if total < 0:
            return DualVectorCheck(ok=False, witness=profile, total=total)
    return DualVectorCheck(ok=True)


def is_restricted(alpha: DualVectorProfile, support: ProductSupport) -> bool:
    """True iff every plan obeys all recommendations outside the support."""
    if len(alpha.plans) != support.player_count:
        raise ValueError("plan and support player counts differ")
    for i, plan in enumerate(alpha.plans):
        for s_i in range(plan.size):
            if not support.contains_strategy(i, s_i) and not plan.is_identity_row(s_i):
                return False
    return True


def certify_support(game: Game, support: ProductSupport) -> CpeVerdict:
    """Decide whether the equality condition holds on ``support``.

    Builds the gain-maximising LP over restricted row-stochastic plans.
    ``Perfect`` is returned iff the optimum is exactly zero; otherwise the
    optimiser, completed with identity rows off support, refutes perfection
    together with every profile at which its aggregate gain is positive.
    """
    if not support.is_valid_for(game.shape):
        raise ValueError("support does not fit the game")

    index = {}
    for i in game.players():
        for s_i in support.sets[i]:
            for t_i in range(game.shape[i]):
                index[(i, s_i, t_i)] = len(index)
    nvars = len(index)

    constraints = []
    for i in game.players():
        for s_i in support.sets[i]:
            row = [ZERO] * nvars
            for t_i in range(game.shape[i]):
                row[index[(i, s_i, t_i)]] = ONE
            constraints.append((row, EQUAL, ONE))

    objective = [ZERO] * nvars
    for profile in game.profiles():
        row = [ZERO] * nvars
        base = list(profile)
        touched = False
        for i in game.players():
            s_i = profile[i]
            if not support.contains_strategy(i, s_i):
                continue
            u_base = game.payoff(i, profile)
            for t_i in range(game.shape[i]):
                if t_i == s_i:
                    continue
                base[i] = t_i
                diff = game.payoff(i, base) - u_base
                if diff:
                    row[index[(i, s_i, t_i)]] = diff
                    touched = True
            base[i] = s_i
        if touched:
            constraints.append((row, GREATER_EQ, ZERO))
            for j, v in enumerate(row):
                if v:
                    objective[j] += v

    outcome = solve(LinearProgram(objective, constraints))
    if not isinstance(outcome, Optimal):
        raise RuntimeError("certification LP must have an optimum")
    if outcome.value == 0:
        return Perfect(certificate=outcome)

    plans = []
    for i in game.players():
        size = game.shape[i]
        rows = []
        for s_i in range(size):
            if support.contains_strategy(i, s_i):
                rows.append(
                    tuple(outcome.point[index[(i, s_i, t_i)]] for t_i in range(size))
                )
            else:
                rows.append(tuple(ONE if t == s_i else ZERO for t in range(size)))
        plans.append(DeviationPlan(rows))
    alpha = DualVectorProfile(plans)

    witnesses = []
    for profile in game.profiles():
        gain = aggregate_gain(game, profile, alpha)
        if gain < 0:
            raise RuntimeError("refuting plans fail the dual-vector recheck")
        if gain > 0:
            witnesses.append(RefutationWitness(profile=profile, gain=gain))
    if not witnesses:
        raise RuntimeError("positive LP optimum without a positive-gain profile")
    return Refuted(alpha=alpha, witnesses=tuple(witnesses))


def is_cpe(game: Game, rho: CorrelatedStrategy) -> CpeVerdict:
    """Full correlated-perfection test for a correlated equilibrium.

    Raises :class:`NotCorrelatedEquilibriumError` when ``rho`` fails the
    obedience inequalities; perfection is only classified for correlated
    equilibria, and the verdict depends on ``rho`` only through its product
    support.
    """
    check = is_correlated_equilibrium(game, rho)
    if not check:
        raise NotCorrelatedEquilibriumError(check.violation)
    return certify_support(game, product_support(rho))
