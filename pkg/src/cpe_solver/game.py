"""Finite normal-form games, correlated strategies and their basic queries.

Profiles are tuples of per-player strategy indices and are enumerated in
lexicographic order (player 0's index varies slowest), which fixes the dense
payoff/probability layout used throughout the package and in the file
formats.  All values are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Optional, Sequence

from .rationals import ONE, ZERO, rat


class Game:
    """n-player game: per-player strategy labels plus a dense payoff tensor.

    ``payoffs`` maps each profile (lexicographic order) to a vector of one
    payoff per player.  It may be given as a mapping from index-profiles to
    payoff vectors or as a flat sequence in profile order.
    """

    __slots__ = ("strategy_names", "player_names", "shape", "_payoffs", "_strides")

    def __init__(self, strategy_names, payoffs, player_names=None):
        names = tuple(tuple(labels) for labels in strategy_names)
        if not names:
            raise ValueError("a game needs at least one player")
        for i, labels in enumerate(names):
            if not labels:
                raise ValueError(f"player {i} has an empty strategy set")
            if len(set(labels)) != len(labels):
                raise ValueError(f"player {i} has duplicate strategy labels")
        self.strategy_names = names
        if player_names is None:
            player_names = tuple(f"P{i + 1}" for i in range(len(names)))
        else:
            player_names = tuple(player_names)
            if len(player_names) != len(names):
                raise ValueError("one player name per player required")
            if len(set(player_names)) != len(player_names):
                raise ValueError("duplicate player names")
        self.player_names = player_names
        self.shape = tuple(len(labels) for labels in names)
        self._strides = _strides(self.shape)
        total = _profile_count(self.shape)
        n = len(names)

        if isinstance(payoffs, dict):
            flat = [None] * total
            for profile, vector in payoffs.items():
                flat[self.profile_index(tuple(profile))] = vector
            if any(v is None for v in flat):
                raise ValueError("payoff map does not cover every profile")
            payoffs = flat
        rows = []
        for entry in payoffs:
            vector = tuple(rat(v) for v in entry)
            if len(vector) != n:
                raise ValueError(f"payoff vector {entry!r} must list one value per player")
            rows.append(vector)
        if len(rows) != total:
            raise ValueError(f"expected {total} payoff vectors, got {len(rows)}")
        self._payoffs = tuple(rows)

    @property
    def player_count(self) -> int:
        return len(self.shape)

    @property
    def profile_count(self) -> int:
        return len(self._payoffs)

    def players(self) -> range:
        return range(len(self.shape))

    def profiles(self) -> Iterator[tuple]:
        return product(*(range(k) for k in self.shape))

    def profile_index(self, profile: Sequence[int]) -> int:
        if len(profile) != len(self.shape):
            raise ValueError("profile length does not match player count")
        idx = 0
        for s, k, stride in zip(profile, self.shape, self._strides):
            if not 0 <= s < k:
                raise ValueError(f"strategy index {s} out of range")
            idx += s * stride
        return idx

    def payoff(self, i: int, profile: Sequence[int]):
        """Player ``i``'s payoff at ``profile``."""
        self._check_player(i)
        return self._payoffs[self.profile_index(profile)][i]

    def payoff_vector(self, profile: Sequence[int]) -> tuple:
        return self._payoffs[self.profile_index(profile)]

    def strategy_index(self, i: int, label: str) -> int:
        self._check_player(i)
        try:
            return self.strategy_names[i].index(label)
        except ValueError:
            raise ValueError(f"player {i} has no strategy {label!r}") from None

    def profile_of_labels(self, labels: Sequence[str]) -> tuple:
        if len(labels) != len(self.shape):
            raise ValueError("one label per player required")
        return tuple(self.strategy_index(i, lab) for i, lab in enumerate(labels))

    def labels_of_profile(self, profile: Sequence[int]) -> tuple:
        return tuple(self.strategy_names[i][s] for i, s in enumerate(profile))

    def opponents_profiles(self, i: int) -> Iterator[tuple]:
        """All opponent sub-profiles, as full-length tuples with ``None`` at i."""
        self._check_player(i)
        ranges = [range(k) for k in self.shape]
        ranges[i] = (None,)
        return product(*ranges)

    def _check_player(self, i: int) -> None:
        if not 0 <= i < len(self.shape):
            raise ValueError(f"player index {i} out of range")

    def __eq__(self, other):
        if not isinstance(other, Game):
            return NotImplemented
        return (
            self.strategy_names == other.strategy_names
            and self.player_names == other.player_names
            and self._payoffs == other._payoffs
        )

    def __hash__(self):
        return hash((self.strategy_names, self.player_names, self._payoffs))

    def __repr__(self):
        dims = "x".join(str(k) for k in self.shape)
        return f"Game({dims}, {len(self.shape)} players)"


class CorrelatedStrategy:
    """Exact probability distribution over strategy profiles."""

    __slots__ = ("shape", "probs", "_strides")

    def __init__(self, shape, probabilities):
        self.shape = tuple(int(k) for k in shape)
        if not self.shape or any(k <= 0 for k in self.shape):
            raise ValueError("shape must list positive strategy counts")
        self._strides = _strides(self.shape)
        total = _profile_count(self.shape)
        if isinstance(probabilities, dict):
            dense = [ZERO] * total
            for profile, value in probabilities.items():
                dense[self._index(tuple(profile))] = rat(value)
        else:
            dense = [rat(v) for v in probabilities]
            if len(dense) != total:
                raise ValueError(f"expected {total} probabilities, got {len(dense)}")
        if any(p < 0 for p in dense):
            raise ValueError("probabilities must be nonnegative")
        if sum(dense, ZERO) != 1:
            raise ValueError("probabilities must sum to exactly 1")
        self.probs = tuple(dense)

    @classmethod
    def point_mass(cls, shape, profile) -> "CorrelatedStrategy":
        return cls(shape, {tuple(profile): ONE})

    @classmethod
    def uniform(cls, shape) -> "CorrelatedStrategy":
        total = _profile_count(shape)
        weight = rat(1, total)
        return cls(shape, [weight] * total)

    @classmethod
    def mix(cls, components) -> "CorrelatedStrategy":
        """Exact convex combination of (weight, strategy) pairs."""
        components = list(components)
        if not components:
            raise ValueError("empty mixture")
        shape = components[0][1].shape
        dense = [ZERO] * _profile_count(shape)
        for weight, strategy in components:
            w = rat(weight)
            if strategy.shape != shape:
                raise ValueError("mixture components must share a shape")
            for k, p in enumerate(strategy.probs):
                if p:
                    dense[k] += w * p
        return cls(shape, dense)

    def _index(self, profile) -> int:
        idx = 0
        for s, k, stride in zip(profile, self.shape, self._strides):
            if not 0 <= s < k:
                raise ValueError(f"strategy index {s} out of range")
            idx += s * stride
        return idx

    def prob(self, profile):
        return self.probs[self._index(tuple(profile))]

    def profiles(self) -> Iterator[tuple]:
        return product(*(range(k) for k in self.shape))

    def items(self):
        for profile in self.profiles():
            yield profile, self.probs[self._index(profile)]

    def support(self):
        """Profiles with strictly positive probability."""
        return [profile for profile, p in self.items() if p]

    def __eq__(self, other):
        if not isinstance(other, CorrelatedStrategy):
            return NotImplemented
        return self.shape == other.shape and self.probs == other.probs

    def __hash__(self):
        return hash((self.shape, self.probs))

    def __repr__(self):
        live = {p: str(v) for p, v in self.items() if v}
        return f"CorrelatedStrategy({live})"


class MixedProfile:
    """One independent mixed strategy per player."""

    __slots__ = ("weights",)

    def __init__(self, weights):
        rows = []
        for i, row in enumerate(weights):
            row = tuple(rat(v) for v in row)
            if not row:
                raise ValueError(f"player {i} has an empty mixed strategy")
            if any(v < 0 for v in row):
                raise ValueError(f"player {i} has a negative weight")
            if sum(row, ZERO) != 1:
                raise ValueError(f"player {i}'s weights must sum to exactly 1")
            rows.append(row)
        if not rows:
            raise ValueError("a mixed profile needs at least one player")
        self.weights = tuple(rows)

    @property
    def shape(self):
        return tuple(len(row) for row in self.weights)

    def is_completely_mixed(self) -> bool:
        return all(all(v > 0 for v in row) for row in self.weights)

    def __eq__(self, other):
        if not isinstance(other, MixedProfile):
            return NotImplemented
        return self.weights == other.weights

    def __hash__(self):
        return hash(self.weights)


class ProductSupport:
    """One nonempty strategy subset per player, as sorted index tuples."""

    __slots__ = ("sets",)

    def __init__(self, sets):
        cleaned = []
        for i, subset in enumerate(sets):
            subset = tuple(sorted(set(int(s) for s in subset)))
            if not subset:
                raise ValueError(f"player {i}'s support set is empty")
            if any(s < 0 for s in subset):
                raise ValueError("negative strategy index")
            cleaned.append(subset)
        if not cleaned:
            raise ValueError("a product support needs at least one player")
        self.sets = tuple(cleaned)

    @classmethod
    def full(cls, shape) -> "ProductSupport":
        return cls(tuple(range(k)) for k in shape)

    @property
    def player_count(self) -> int:
        return len(self.sets)

    def total_size(self) -> int:
        return sum(len(s) for s in self.sets)

    def contains_strategy(self, i: int, s: int) -> bool:
        return s in self.sets[i]

    def contains_profile(self, profile) -> bool:
        return all(s in subset for s, subset in zip(profile, self.sets))

    def profiles(self) -> Iterator[tuple]:
        return product(*self.sets)

    def is_subset_of(self, other: "ProductSupport") -> bool:
        if len(self.sets) != len(other.sets):
            return False
        return all(set(a) <= set(b) for a, b in zip(self.sets, other.sets))

    def is_valid_for(self, shape) -> bool:
        return len(self.sets) == len(shape) and all(
            subset[-1] < k for subset, k in zip(self.sets, shape)
        )

    def labels(self, game: Game):
        return tuple(
            tuple(game.strategy_names[i][s] for s in subset)
            for i, subset in enumerate(self.sets)
        )

    def __eq__(self, other):
        if not isinstance(other, ProductSupport):
            return NotImplemented
        return self.sets == other.sets

    def __hash__(self):
        return hash(self.sets)

    def __repr__(self):
        return f"ProductSupport({self.sets})"


@dataclass(frozen=True)
class CeViolation:
    """Witness of a failed obedience inequality: player ``i`` recommended
    ``recommended`` strictly gains by deviating to ``deviation``."""

    player: int
    recommended: int
    deviation: int
    obey_value: object
    deviate_value: object


@dataclass(frozen=True)
class CeCheck:
    ok: bool
    violation: Optional[CeViolation] = None

    def __bool__(self) -> bool:
        return self.ok


def _strides(shape):
    strides = [1] * len(shape)
    for i in range(len(shape) - 2, -1, -1):
        strides[i] = strides[i + 1] * shape[i + 1]
    return tuple(strides)


def _profile_count(shape) -> int:
    total = 1
    for k in shape:
        total *= k
    return total


def _check_shapes(game: Game, rho: CorrelatedStrategy) -> None:
    if game.shape != rho.shape:
        raise ValueError(
            f"distribution shape {rho.shape} does not match game shape {game.shape}"
        )


def conditional_deviation_value(
    game: Game, rho: CorrelatedStrategy, i: int, s_i: int, s_i_prime: int
):
    """Expected payoff mass for player ``i`` from playing ``s_i_prime`` on the
    event of being recommended ``s_i``: the sum over opponent profiles of
    rho(s_i, s_-i) * u_i(s_i_prime, s_-i)."""
    _check_shapes(game, rho)
    game._check_player(i)
    if not 0 <= s_i < game.shape[i]:
        raise ValueError(f"strategy index {s_i} out of range for player {i}")
    if not 0 <= s_i_prime < game.shape[i]:
        raise ValueError(f"strategy index {s_i_prime} out of range for player {i}")
    total = ZERO
    for template in game.opponents_profiles(i):
        rec = list(template)
        rec[i] = s_i
        mass = rho.prob(rec)
        if mass:
            rec[i] = s_i_prime
            total += mass * game.payoff(i, rec)
    return total


def is_correlated_equilibrium(game: Game, rho: CorrelatedStrategy) -> CeCheck:
    """Exact obedience test: following every recommendation must be at least
    as good as any deviation.  On failure the first violated inequality is
    returned as a witness."""
    _check_shapes(game, rho)
    for i in game.players():
        for s_i in range(game.shape[i]):
            obey = None
            for s_prime in range(game.shape[i]):
                if s_prime == s_i:
                    continue
                if obey is None:
                    obey = conditional_deviation_value(game, rho, i, s_i, s_i)
                deviate = conditional_deviation_value(game, rho, i, s_i, s_prime)
                if deviate > obey:
                    return CeCheck(
                        ok=False,
                        violation=CeViolation(
                            player=i,
                            recommended=s_i,
                            deviation=s_prime,
                            obey_value=obey,
                            deviate_value=deviate,
                        ),
                    )
    return CeCheck(ok=True)


def marginal(rho: CorrelatedStrategy, i: int) -> tuple:
    """Recommendation marginal for player ``i``; entries sum to exactly 1."""
    if not 0 <= i < len(rho.shape):
        raise ValueError(f"player index {i} out of range")
    totals = [ZERO] * rho.shape[i]
    for profile, p in rho.items():
        if p:
            totals[profile[i]] += p
    return tuple(totals)


def product_support(rho: CorrelatedStrategy) -> ProductSupport:
    """Smallest product set containing the support: per player, the
    strategies with strictly positive recommendation marginal."""
    sets = []
    for i in range(len(rho.shape)):
        margin = marginal(rho, i)
        sets.append(tuple(s for s, p in enumerate(margin) if p > 0))
    return ProductSupport(sets)


def is_completely_mixed(rho: CorrelatedStrategy) -> bool:
    return all(p > 0 for p in rho.probs)


def product_distribution(sigma: MixedProfile) -> CorrelatedStrategy:
    """The correlated strategy induced by independent play of ``sigma``."""
    shape = sigma.shape
    dense = []
    for profile in product(*(range(k) for k in shape)):
        value = ONE
        for i, s in enumerate(profile):
            value *= sigma.weights[i][s]
        dense.append(value)
    return CorrelatedStrategy(shape, dense)
