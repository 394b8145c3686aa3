"""Shared fixtures: the two shipped example games, a couple of tiny classics,
and independent oracle helpers (brute-force LP vertex enumeration, CE
polytope sampling, dominance grid search)."""

import random
from itertools import combinations, product

import pytest

from cpe_solver import (
    CorrelatedStrategy,
    Game,
    Infeasible,
    LinearProgram,
    ProductSupport,
    feasible_point,
)
from cpe_solver.fileio import (
    load_distribution,
    load_family,
    load_game,
    load_trembles,
)
from cpe_solver.lp import EQUAL, GREATER_EQ
from cpe_solver.rationals import ONE, ZERO, rat

try:
    from importlib.resources import files as _pkg_files
except ImportError:  # pragma: no cover
    from importlib_resources import files as _pkg_files

CORPUS = _pkg_files("cpe_solver.corpus")


def corpus_path(name: str) -> str:
    return str(CORPUS.joinpath(name))


@pytest.fixture(scope="session")
def game1():
    return load_game(corpus_path("example1.game"))


@pytest.fixture(scope="session")
def game2():
    return load_game(corpus_path("example2.game"))


@pytest.fixture(scope="session")
def delta_y(game1):
    return load_distribution(corpus_path("delta_y.dist"), game1)


@pytest.fixture(scope="session")
def delta_z(game1):
    return load_distribution(corpus_path("delta_z.dist"), game1)


@pytest.fixture(scope="session")
def half_mix(game1):
    return load_distribution(corpus_path("mix.dist"), game1)


@pytest.fixture(scope="session")
def fig2b(game2):
    return load_distribution(corpus_path("fig2b.dist"), game2)


@pytest.fixture(scope="session")
def appendix_trembles(game2):
    return load_trembles(corpus_path("appendixB.trembles"), game2)


@pytest.fixture(scope="session")
def fig1b_family(game1):
    return load_family(corpus_path("figure1b.family"), game1)


@pytest.fixture(scope="session")
def matching_pennies():
    # +1 to player 1 on a match, -1 otherwise; zero-sum.
    payoffs = {
        (0, 0): (1, -1),
        (0, 1): (-1, 1),
        (1, 0): (-1, 1),
        (1, 1): (1, -1),
    }
    return Game([["H", "T"], ["H", "T"]], payoffs)


def random_game(rng: random.Random, players=(2, 3), strategies=(2, 3), span=3) -> Game:
    n = rng.randint(*players)
    shape = tuple(rng.randint(*strategies) for _ in range(n))
    total = 1
    for k in shape:
        total *= k
    payoffs = [
        [rng.randint(-span, span) for _ in range(n)] for _ in range(total)
    ]
    return Game([[f"s{j}" for j in range(k)] for k in shape], payoffs)


def ce_within_support(game: Game, support: ProductSupport):
    """Any correlated equilibrium supported inside the product set (zero mass
    elsewhere), or None.  Pure feasibility; no openness requirement."""
    profiles = list(support.profiles())
    index = {p: j for j, p in enumerate(profiles)}
    cons = []
    sets = list(support.sets)
    for i in game.players():
        for rec in support.sets[i]:
            for alt in range(game.shape[i]):
                if alt == rec:
                    continue
                row = [ZERO] * len(profiles)
                nonzero = False
                sets[i] = (rec,)
                for p in product(*sets):
                    gain = game.payoff(i, p)
                    q = list(p)
                    q[i] = alt
                    diff = gain - game.payoff(i, q)
                    if diff:
                        row[index[p]] = diff
                        nonzero = True
                sets[i] = support.sets[i]
                if nonzero:
                    cons.append((row, GREATER_EQ, ZERO))
    cons.append(([ONE] * len(profiles), EQUAL, ONE))
    outcome = feasible_point(LinearProgram([ZERO] * len(profiles), cons))
    if isinstance(outcome, Infeasible):
        return None
    return CorrelatedStrategy(game.shape, {p: outcome[j] for p, j in index.items()})


def sample_ce_vertex(game: Game, support: ProductSupport, rng: random.Random):
    """A vertex of the CE polytope restricted to the support, selected by a
    random integer objective; None when the polytope is empty."""
    from cpe_solver.lp import Optimal, solve

    profiles = list(support.profiles())
    index = {p: j for j, p in enumerate(profiles)}
    cons = []
    sets = list(support.sets)
    for i in game.players():
        for rec in support.sets[i]:
            for alt in range(game.shape[i]):
                if alt == rec:
                    continue
                row = [ZERO] * len(profiles)
                nonzero = False
                sets[i] = (rec,)
                for p in product(*sets):
                    diff = game.payoff(i, p)
                    q = list(p)
                    q[i] = alt
                    diff -= game.payoff(i, q)
                    if diff:
                        row[index[p]] = diff
                        nonzero = True
                sets[i] = support.sets[i]
                if nonzero:
                    cons.append((row, GREATER_EQ, ZERO))
    cons.append(([ONE] * len(profiles), EQUAL, ONE))
    objective = [rat(rng.randint(-9, 9)) for _ in profiles]
    outcome = solve(LinearProgram(objective, cons))
    if not isinstance(outcome, Optimal):
        return None
    return CorrelatedStrategy(game.shape, {p: outcome.point[j] for p, j in index.items()})


# -- brute-force LP oracle ----------------------------------------------------


def _solve_square(rows, rhs):
    """Exact Gaussian elimination; None when the system is singular."""
    n = len(rows)
    a = [list(row) + [b] for row, b in zip(rows, rhs)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if a[r][col]:
                pivot = r
                break
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        piv = a[col][col]
        a[col] = [v / piv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def brute_force_lp_maximum(lp: LinearProgram):
    """Maximum of the objective over all feasible basic solutions (vertices),
    found by enumerating every square subsystem of active constraints.
    Returns None when no feasible vertex exists.  Independent of the simplex
    path: only Gaussian elimination and exact comparisons."""
    rows, rhs = lp.canonical_system()
    n = lp.variable_count
    best = None
    for chosen in combinations(range(len(rows)), n):
        point = _solve_square([rows[k] for k in chosen], [rhs[k] for k in chosen])
        if point is None:
            continue
        if all(
            sum((c * x for c, x in zip(row, point)), ZERO) >= b
            for row, b in zip(rows, rhs)
        ):
            value = sum((c * x for c, x in zip(lp.objective, point)), ZERO)
            if best is None or value > best:
                best = value
    return best


def dominance_grid_refuter(game: Game, i: int, s_i: int, denominator: int = 4):
    """Search a rational grid of mixtures for a witness that ``s_i`` is weakly
    dominated.  Finding one proves dominance; finding none proves nothing."""
    k = game.shape[i]
    opponents = list(game.opponents_profiles(i))

    def payoff_row(t):
        out = []
        for template in opponents:
            p = list(template)
            p[i] = t
            out.append(game.payoff(i, p))
        return out

    table = [payoff_row(t) for t in range(k)]
    base = table[s_i]
    for weights in _compositions(denominator, k):
        mixed = [
            sum((rat(w, denominator) * table[t][j] for t, w in enumerate(weights)), ZERO)
            for j in range(len(opponents))
        ]
        if all(m >= b for m, b in zip(mixed, base)) and any(
            m > b for m, b in zip(mixed, base)
        ):
            return tuple(rat(w, denominator) for w in weights)
    return None


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest
