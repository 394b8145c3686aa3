"""Supporting sequences of completely mixed distributions.

This is the constructive side of the perfection test.  For a product
support, a vector of profile weights (each >= 1) satisfying the supported
best-response system yields, for every correlated equilibrium on that
support, an explicit sequence of completely mixed distributions along which
every supported recommendation stays a best response.  Feasibility of the
weight system is exactly complementary to the refutation LP: one of the two
always produces a certificate.

Sequences come in two forms, matching how they are used: exact rational
terms indexed by an integer k, and symbolic families whose masses are
polynomials in a noise parameter eps shrinking to zero.  The symbolic path
decides every inequality by lowest-order coefficients, with no thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .game import (
    CorrelatedStrategy,
    Game,
    ProductSupport,
    is_completely_mixed,
)
from .lp import GREATER_EQ, Infeasible, LinearProgram, feasible_point
from .polynomials import EpsPolynomial, limit_ratio_at_zero
from .rationals import ONE, ZERO, rat


class SupportWeights:
    """Profile weights, all >= 1, from which supporting sequences are built."""

    __slots__ = ("shape", "values")

    def __init__(self, shape, values):
        self.shape = tuple(shape)
        self.values = tuple(rat(v) for v in values)
        total = 1
        for k in self.shape:
            total *= k
        if len(self.values) != total:
            raise ValueError(f"expected {total} weights, got {len(self.values)}")
        if any(v < 1 for v in self.values):
            raise ValueError("every weight must be at least 1")

    def value(self, game: Game, profile):
        return self.values[game.profile_index(profile)]

    def __eq__(self, other):
        if not isinstance(other, SupportWeights):
            return NotImplemented
        return self.shape == other.shape and self.values == other.values

    def __hash__(self):
        return hash((self.shape, self.values))


def support_weight_system(game: Game, support: ProductSupport) -> LinearProgram:
    """The weight feasibility system as an explicit linear program.

    Variables are one weight per profile with lower bound 1.  For every
    player, every supported recommendation and every alternative strategy,
    the weighted advantage of the recommendation over the alternative
    (summed over opponent profiles) must be nonnegative.
    """
    if not support.is_valid_for(game.shape):
        raise ValueError("support does not fit the game")
    nvars = game.profile_count
    constraints = []
    for i in game.players():
        for rec in support.sets[i]:
            for alt in range(game.shape[i]):
                if alt == rec:
                    continue
                row = [ZERO] * nvars
                nonzero = False
                for template in game.opponents_profiles(i):
                    profile = list(template)
                    profile[i] = rec
                    u_rec = game.payoff(i, profile)
                    idx = game.profile_index(profile)
                    profile[i] = alt
                    diff = u_rec - game.payoff(i, profile)
                    if diff:
                        row[idx] = diff
                        nonzero = True
                if nonzero:
                    constraints.append((row, GREATER_EQ, ZERO))
    objective = [ZERO] * nvars
    return LinearProgram(objective, constraints, lower_bounds=[ONE] * nvars)


def find_support_weights(
    game: Game, support: ProductSupport
) -> Union[SupportWeights, Infeasible]:
    """A feasible weight vector for the support, or the Farkas certificate
    proving none exists."""
    lp = support_weight_system(game, support)
    outcome = feasible_point(lp)
    if isinstance(outcome, Infeasible):
        return outcome
    return SupportWeights(game.shape, outcome)


def supporting_sequence_term(
    rho: CorrelatedStrategy, weights: SupportWeights, k: int
) -> CorrelatedStrategy:
    """The k-th term of the supporting sequence: blend rho with weights/k and
    renormalise.  Every term is completely mixed and the sequence converges
    to rho as k grows."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if weights.shape != rho.shape:
        raise ValueError("weights do not match the distribution shape")
    step = rat(1, k)
    masses = [p + step * w for p, w in zip(rho.probs, weights.values)]
    total = sum(masses, ZERO)
    return CorrelatedStrategy(rho.shape, [m / total for m in masses])


@dataclass(frozen=True)
class SequenceTermCheck:
    ok: bool
    witness: Optional[tuple] = None  # (player, recommended, alternative, value)

    def __bool__(self) -> bool:
        return self.ok


def verify_sequence_term(
    game: Game, rho_k: CorrelatedStrategy, support: ProductSupport
) -> SequenceTermCheck:
    """Exact check that every supported recommendation is a best response
    under the completely mixed term ``rho_k``."""
    if game.shape != rho_k.shape:
        raise ValueError("distribution shape does not match the game")
    if not support.is_valid_for(game.shape):
        raise ValueError("support does not fit the game")
    if not is_completely_mixed(rho_k):
        raise ValueError("sequence terms must be completely mixed")
    for i in game.players():
        for rec in support.sets[i]:
            for alt in range(game.shape[i]):
                if alt == rec:
                    continue
                advantage = ZERO
                for template in game.opponents_profiles(i):
                    profile = list(template)
                    profile[i] = rec
                    mass = rho_k.prob(profile)
                    u_rec = game.payoff(i, profile)
                    profile[i] = alt
                    advantage += mass * (u_rec - game.payoff(i, profile))
                if advantage < 0:
                    return SequenceTermCheck(
                        ok=False, witness=(i, rec, alt, advantage)
                    )
    return SequenceTermCheck(ok=True)


class ParametricDistribution:
    """Unnormalised profile masses as polynomials in eps.

    Each mass must be strictly positive for all sufficiently small eps > 0,
    so every term of the family is completely mixed; the normalisation is a
    positive scalar and is applied only when taking the eps -> 0 limit.
    """

    __slots__ = ("shape", "masses", "_strides")

    def __init__(self, shape, masses):
        self.shape = tuple(shape)
        strides = [1] * len(self.shape)
        for i in range(len(self.shape) - 2, -1, -1):
            strides[i] = strides[i + 1] * self.shape[i + 1]
        self._strides = tuple(strides)
        total = 1
        for k in self.shape:
            total *= k
        if isinstance(masses, dict):
            dense = [EpsPolynomial.zero()] * total
            for profile, poly in masses.items():
                dense[self._index(tuple(profile))] = _as_poly(poly)
        else:
            dense = [_as_poly(p) for p in masses]
            if len(dense) != total:
                raise ValueError(f"expected {total} masses, got {len(dense)}")
        for poly in dense:
            if poly.sign_near_zero() <= 0:
                raise ValueError(
                    "every unnormalised mass must be strictly positive near eps = 0"
                )
        self.masses = tuple(dense)

    def _index(self, profile) -> int:
        idx = 0
        for s, k, stride in zip(profile, self.shape, self._strides):
            if not 0 <= s < k:
                raise ValueError(f"strategy index {s} out of range")
            idx += s * stride
        return idx

    def mass(self, game: Game, profile) -> EpsPolynomial:
        return self.masses[self._index(tuple(profile))]

    def total_mass(self) -> EpsPolynomial:
        total = EpsPolynomial.zero()
        for poly in self.masses:
            total = total + poly
        return total

    def at(self, eps_value) -> CorrelatedStrategy:
        """Exact normalised distribution at a specific rational eps > 0."""
        value = rat(eps_value)
        if value <= 0:
            raise ValueError("eps must be positive")
        masses = [poly.evaluate(value) for poly in self.masses]
        total = sum(masses, ZERO)
        if any(m <= 0 for m in masses):
            raise ValueError(f"family is not completely mixed at eps = {value}")
        return CorrelatedStrategy(self.shape, [m / total for m in masses])

    def limit(self) -> CorrelatedStrategy:
        """Exact normalised limit as eps -> 0+."""
        total = self.total_mass()
        probs = [limit_ratio_at_zero(poly, total) for poly in self.masses]
        return CorrelatedStrategy(self.shape, probs)

    def __eq__(self, other):
        if not isinstance(other, ParametricDistribution):
            return NotImplemented
        return self.shape == other.shape and self.masses == other.masses

    def __hash__(self):
        return hash((self.shape, self.masses))


@dataclass(frozen=True)
class ParametricConstraint:
    player: int
    recommended: int
    alternative: int
    advantage: EpsPolynomial


@dataclass(frozen=True)
class ParametricCheck:
    ok: bool
    limit_matches: bool
    constraints: Tuple[ParametricConstraint, ...]
    failures: Tuple[ParametricConstraint, ...]

    def __bool__(self) -> bool:
        return self.ok

    def constraint(self, player: int, recommended: int, alternative: int) -> EpsPolynomial:
        for entry in self.constraints:
            if (entry.player, entry.recommended, entry.alternative) == (
                player,
                recommended,
                alternative,
            ):
                return entry.advantage
        raise KeyError((player, recommended, alternative))


def verify_parametric_sequence(
    game: Game,
    family: ParametricDistribution,
    target: CorrelatedStrategy,
    support: ProductSupport,
) -> ParametricCheck:
    """Symbolic verification of a hand-specified supporting family.

    Checks (a) that the normalised family converges exactly to ``target`` as
    eps -> 0+, and (b) that for every player, supported recommendation and
    alternative strategy, the unnormalised advantage polynomial is
    nonnegative for all sufficiently small eps > 0 (zero polynomials pass).
    Normalisation is a positive scalar, so dropping it cannot change any
    sign.  Returns the full per-constraint polynomial report.
    """
    if family.shape != game.shape or target.shape != game.shape:
        raise ValueError("family/target shape does not match the game")
    if not support.is_valid_for(game.shape):
        raise ValueError("support does not fit the game")

    limit_matches = family.limit() == target

    constraints = []
    failures = []
    for i in game.players():
        for rec in support.sets[i]:
            for alt in range(game.shape[i]):
                if alt == rec:
                    continue
                advantage = EpsPolynomial.zero()
                for template in game.opponents_profiles(i):
                    profile = list(template)
                    profile[i] = rec
                    mass = family.mass(game, profile)
                    u_rec = game.payoff(i, profile)
                    profile[i] = alt
                    diff = u_rec - game.payoff(i, profile)
                    if diff:
                        advantage = advantage + mass.scale(diff)
                entry = ParametricConstraint(
                    player=i, recommended=rec, alternative=alt, advantage=advantage
                )
                constraints.append(entry)
                if advantage.sign_near_zero() < 0:
                    failures.append(entry)

    return ParametricCheck(
        ok=limit_matches and not failures,
        limit_matches=limit_matches,
        constraints=tuple(constraints),
        failures=tuple(failures),
    )


def _as_poly(value) -> EpsPolynomial:
    if isinstance(value, EpsPolynomial):
        return value
    return EpsPolynomial.constant(rat(value))
