"""Support-by-support classification of the perfection condition.

Every nonempty product support of a small game is classified: does the
equality condition hold (so every correlated equilibrium with that exact
support is correlated perfect), and does a correlated equilibrium with that
exact support actually exist?  The equality condition is inherited downward
(subsets of a certified support) and refutations upward (supersets of a
refuted support), which the enumeration exploits by walking supports in
decreasing size.  The set of correlated perfect equilibria is then the
finite union, over certified supports, of the corresponding equilibrium
polytopes; ``maximal_cpe_supports`` reports the maximal certified supports
carrying an equilibrium.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import List, Optional, Tuple

from .certify import CpeVerdict, Refuted, certify_support
from .game import CorrelatedStrategy, Game, ProductSupport, marginal
from .lp import EQUAL, GREATER_EQ, LinearProgram, Optimal, Unbounded, solve
from .rationals import ONE, ZERO

DEFAULT_SUPPORT_CAP = 20000


class SupportEnumerationCapError(RuntimeError):
    """The game has more product supports than the configured cap allows."""

    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(
            f"game has {count} nonempty product supports, exceeding the cap of {cap}; "
            "raise the cap to force enumeration"
        )


@dataclass(frozen=True)
class SupportClassification:
    support: ProductSupport
    equality_holds: bool
    ce_exists_with_exact_support: bool
    sample_ce: Optional[CorrelatedStrategy]
    refutation: Optional[Refuted]
    pruned: bool


def ce_with_exact_support(
    game: Game, support: ProductSupport
) -> Optional[CorrelatedStrategy]:
    """A correlated equilibrium whose product support is exactly ``support``,
    or None.

    Exactness is at the marginal level: every supported strategy must carry
    strictly positive recommendation probability and nothing outside the
    support may.  The LP maximises the smallest supported marginal subject to
    the obedience inequalities; a positive optimum is the openness test.
    """
    if not support.is_valid_for(game.shape):
        raise ValueError("support does not fit the game")

    profiles = list(support.profiles())
    index = {profile: j for j, profile in enumerate(profiles)}
    nvars = len(profiles) + 1  # trailing variable: the smallest supported marginal
    t_var = len(profiles)

    constraints = []
    for i in game.players():
        others = [support.sets[j] for j in game.players()]
        for rec in support.sets[i]:
            for alt in range(game.shape[i]):
                if alt == rec:
                    continue
                row = [ZERO] * nvars
                nonzero = False
                others[i] = (rec,)
                for profile in product(*others):
                    u_rec = game.payoff(i, profile)
                    scratch = list(profile)
                    scratch[i] = alt
                    diff = u_rec - game.payoff(i, scratch)
                    if diff:
                        row[index[profile]] = diff
                        nonzero = True
                others[i] = support.sets[i]
                if nonzero:
                    constraints.append((row, GREATER_EQ, ZERO))

    total = [ONE] * len(profiles) + [ZERO]
    constraints.append((total, EQUAL, ONE))

    for i in game.players():
        for rec in support.sets[i]:
            row = [ZERO] * nvars
            for profile in profiles:
                if profile[i] == rec:
                    row[index[profile]] = ONE
            row[t_var] = -ONE
            constraints.append((row, GREATER_EQ, ZERO))

    objective = [ZERO] * len(profiles) + [ONE]
    outcome = solve(LinearProgram(objective, constraints))
    if isinstance(outcome, Unbounded):
        raise RuntimeError("exact-support LP cannot be unbounded")
    if not isinstance(outcome, Optimal) or outcome.value <= 0:
        return None

    dense = {profile: outcome.point[j] for profile, j in index.items()}
    rho = CorrelatedStrategy(game.shape, dense)
    for i in game.players():
        margin = marginal(rho, i)
        for s in range(game.shape[i]):
            inside = support.contains_strategy(i, s)
            if inside != (margin[s] > 0):
                raise RuntimeError("exact-support LP produced a wrong support")
    return rho


def enumerate_product_supports(shape, cap: int = DEFAULT_SUPPORT_CAP) -> List[ProductSupport]:
    """All nonempty product supports, in decreasing total size with a
    lexicographic tiebreak."""
    count = 1
    for k in shape:
        count *= 2 ** k - 1
    if count > cap:
        raise SupportEnumerationCapError(count, cap)
    per_player = []
    for k in shape:
        subsets = []
        for size in range(1, k + 1):
            subsets.extend(combinations(range(k), size))
        per_player.append(subsets)
    supports = [ProductSupport(sets) for sets in product(*per_player)]
    supports.sort(key=lambda sup: (-sup.total_size(), sup.sets))
    return supports


def classify_all_supports(
    game: Game,
    cap: int = DEFAULT_SUPPORT_CAP,
    spot_check_fraction: float = 0.0,
    seed: Optional[int] = None,
) -> List[SupportClassification]:
    """Classify every nonempty product support of the game.

    Walks supports from largest to smallest.  A support contained in an
    equality-certified one inherits the equality verdict; a support
    containing a refuted one inherits that refutation (the refuting plans
    remain restricted and their witnesses remain valid).  Everything else is
    certified directly.  ``spot_check_fraction`` re-certifies that share of
    pruned supports directly and raises if any inherited verdict disagrees.
    """
    supports = enumerate_product_supports(game.shape, cap)
    certified_equal: List[ProductSupport] = []
    refuted: List[Tuple[ProductSupport, Refuted]] = []
    results: List[SupportClassification] = []

    for support in supports:
        verdict: Optional[CpeVerdict] = None
        pruned = False
        inherited_refutation: Optional[Refuted] = None

        for equal in certified_equal:
            if support.is_subset_of(equal):
                pruned = True
                break
        if not pruned:
            for small, refutation in refuted:
                if small.is_subset_of(support):
                    pruned = True
                    inherited_refutation = refutation
                    break

        if pruned:
            equality = inherited_refutation is None
            refutation = inherited_refutation
        else:
            verdict = certify_support(game, support)
            equality = verdict.is_perfect
            refutation = None if equality else verdict
            if equality:
                certified_equal.append(support)
            else:
                refuted.append((support, verdict))

        sample = ce_with_exact_support(game, support)
        results.append(
            SupportClassification(
                support=support,
                equality_holds=equality,
                ce_exists_with_exact_support=sample is not None,
                sample_ce=sample,
                refutation=refutation,
                pruned=pruned,
            )
        )

    if spot_check_fraction > 0:
        _spot_check(game, results, spot_check_fraction, seed)
    return results


def _spot_check(game, results, fraction, seed):
    pruned = [entry for entry in results if entry.pruned]
    if not pruned:
        return
    rng = random.Random(seed)
    sample_size = max(1, int(len(pruned) * fraction))
    for entry in rng.sample(pruned, min(sample_size, len(pruned))):
        direct = certify_support(game, entry.support)
        if direct.is_perfect != entry.equality_holds:
            raise RuntimeError(
                f"pruning produced a wrong verdict on {entry.support!r}"
            )


def maximal_cpe_supports(
    game: Game,
    cap: int = DEFAULT_SUPPORT_CAP,
    classifications: Optional[List[SupportClassification]] = None,
) -> List[ProductSupport]:
    """Maximal supports (under componentwise inclusion) that are certified
    and carry a correlated equilibrium with that exact support."""
    if classifications is None:
        classifications = classify_all_supports(game, cap)
    certified = [
        entry.support
        for entry in classifications
        if entry.equality_holds and entry.ce_exists_with_exact_support
    ]
    maximal = []
    for support in certified:
        if not any(
            support is not other and support.is_subset_of(other)
            for other in certified
        ):
            maximal.append(support)
    return maximal
