"""Robustness to vanishing independent player trembles (the direct-mechanism
perfection notion attributed to player mistakes rather than mediator noise).

A tremble family gives, per player and per recommendation, a row of
probabilities of actually playing each strategy, as polynomials in a noise
scale eps.  The test asks whether, conditional on not trembling oneself,
every recommendation stays optimal against the opponents' trembles for all
sufficiently small eps.  All polynomial signs are decided exactly by
lowest-order coefficients.

The check takes the tremble family as an input and verifies it; it does not
search for one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

from .game import CorrelatedStrategy, Game
from .polynomials import EpsPolynomial
from .rationals import rat


class TrembleFamily:
    """Per player, per recommended strategy, a row of eps-polynomials giving
    the probability of each played strategy.

    Rows must sum to the constant polynomial 1, entries must be nonnegative
    near eps = 0, and each diagonal entry must have constant coefficient 1
    (no trembling in the limit).  Zero off-diagonal entries are permitted so
    that the exact-obedience (identity) family is expressible; a family is
    ``completely_mixed`` when every entry is strictly positive near 0.
    """

    __slots__ = ("shape", "rows")

    def __init__(self, rows):
        players = []
        for i, table in enumerate(rows):
            table = tuple(tuple(_as_poly(v) for v in row) for row in table)
            size = len(table)
            if size == 0:
                raise ValueError(f"player {i} has no tremble rows")
            one = EpsPolynomial.one()
            for s_i, row in enumerate(table):
                if len(row) != size:
                    raise ValueError(f"player {i} tremble row {s_i} has wrong length")
                total = EpsPolynomial.zero()
                for poly in row:
                    if poly.sign_near_zero() < 0:
                        raise ValueError(
                            f"player {i} tremble row {s_i} has a negative entry near eps = 0"
                        )
                    total = total + poly
                if total != one:
                    raise ValueError(
                        f"player {i} tremble row {s_i} must sum to the constant 1"
                    )
                if row[s_i].constant_term != 1:
                    raise ValueError(
                        f"player {i} tremble row {s_i} must follow the recommendation "
                        "in the limit (diagonal constant coefficient 1)"
                    )
            players.append(table)
        if not players:
            raise ValueError("a tremble family needs at least one player")
        self.rows = tuple(players)
        self.shape = tuple(len(table) for table in players)

    @classmethod
    def identity(cls, shape) -> "TrembleFamily":
        one = EpsPolynomial.one()
        zero = EpsPolynomial.zero()
        return cls(
            tuple(
                tuple(
                    tuple(one if t == s else zero for t in range(k))
                    for s in range(k)
                )
                for k in shape
            )
        )

    def entry(self, i: int, recommended: int, played: int) -> EpsPolynomial:
        return self.rows[i][recommended][played]

    @property
    def completely_mixed(self) -> bool:
        return all(
            poly.is_positive_near_zero()
            for table in self.rows
            for row in table
            for poly in row
        )

    def __eq__(self, other):
        if not isinstance(other, TrembleFamily):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)


class PerceivedDistribution:
    """From one player's viewpoint: the polynomial probability of each full
    profile when the mediator draws from rho and the *other* players tremble
    independently."""

    __slots__ = ("player", "shape", "table")

    def __init__(self, player: int, shape, table: Dict[tuple, EpsPolynomial]):
        self.player = player
        self.shape = tuple(shape)
        self.table = dict(table)

    def at(self, profile) -> EpsPolynomial:
        return self.table.get(tuple(profile), EpsPolynomial.zero())


def perceived_distribution(
    game: Game, rho: CorrelatedStrategy, trembles: TrembleFamily, i: int
) -> PerceivedDistribution:
    """Exact polynomial table of play probabilities as seen by player ``i``.

    The entry at (s_i, s_-i) sums, over the opponents' true recommendations,
    the mediator mass on (s_i, that recommendation) times the probability
    the opponents tremble onto s_-i.
    """
    if trembles.shape != game.shape or rho.shape != game.shape:
        raise ValueError("tremble family / distribution does not match the game")
    game._check_player(i)
    table: Dict[tuple, EpsPolynomial] = {}
    opponents = [j for j in game.players() if j != i]
    for played in game.profiles():
        acc = EpsPolynomial.zero()
        for drawn in game.opponents_profiles(i):
            rec = list(drawn)
            rec[i] = played[i]
            mass = rho.prob(rec)
            if not mass:
                continue
            weight = EpsPolynomial.constant(mass)
            for j in opponents:
                weight = weight * trembles.entry(j, rec[j], played[j])
                if weight.is_zero():
                    break
            acc = acc + weight
        table[played] = acc
    return PerceivedDistribution(player=i, shape=game.shape, table=table)


@dataclass(frozen=True)
class TrembleGain:
    player: int
    recommended: int
    deviation: int
    gain: EpsPolynomial


@dataclass(frozen=True)
class TrembleRobustnessReport:
    ok: bool
    gains: Tuple[TrembleGain, ...]
    failures: Tuple[TrembleGain, ...]

    def __bool__(self) -> bool:
        return self.ok

    def gain(self, player: int, recommended: int, deviation: int) -> EpsPolynomial:
        for entry in self.gains:
            if (entry.player, entry.recommended, entry.deviation) == (
                player,
                recommended,
                deviation,
            ):
                return entry.gain
        raise KeyError((player, recommended, deviation))


def pdce_check(
    game: Game, rho: CorrelatedStrategy, trembles: TrembleFamily
) -> TrembleRobustnessReport:
    """Verify robustness of ``rho`` against the given tremble family.

    For every player, recommendation and deviation target, the expected gain
    from deviating (under the player's perceived distribution, i.e.
    conditional on not trembling) must be nonpositive for all sufficiently
    small eps > 0.  Recommendations the mediator never issues have an
    identically zero perceived table and pass vacuously.  Returns the full
    gain-polynomial report.
    """
    if trembles.shape != game.shape or rho.shape != game.shape:
        raise ValueError("tremble family / distribution does not match the game")
    gains = []
    failures = []
    for i in game.players():
        perceived = perceived_distribution(game, rho, trembles, i)
        for rec in range(game.shape[i]):
            for alt in range(game.shape[i]):
                if alt == rec:
                    continue
                gain = EpsPolynomial.zero()
                for template in game.opponents_profiles(i):
                    profile = list(template)
                    profile[i] = rec
                    mass = perceived.at(profile)
                    if mass.is_zero():
                        continue
                    u_rec = game.payoff(i, profile)
                    profile[i] = alt
                    diff = game.payoff(i, profile) - u_rec
                    if diff:
                        gain = gain + mass.scale(diff)
                entry = TrembleGain(player=i, recommended=rec, deviation=alt, gain=gain)
                gains.append(entry)
                if gain.sign_near_zero() > 0:
                    failures.append(entry)
    return TrembleRobustnessReport(ok=not failures, gains=tuple(gains), failures=tuple(failures))


def _as_poly(value) -> EpsPolynomial:
    if isinstance(value, EpsPolynomial):
        return value
    return EpsPolynomial.constant(rat(value))
