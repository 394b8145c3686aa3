"""File formats: games, distributions, tremble families and parametric
mass families.

All four are JSON documents.  Every number is an exact rational string
("3", "-5/7") or, where a polynomial in the noise scale eps is meant, a list
of coefficient strings ordered by power.  Floats are rejected everywhere.
Profiles are keyed by comma-joined strategy labels in player order, so
labels may not contain commas.

Parsing and serialisation are exact inverses at the object level:
``parse(serialise(parse(text))) == parse(text)`` for every well-formed
document.
"""

from __future__ import annotations

import json
from .game import CorrelatedStrategy, Game
from .pdce import TrembleFamily
from .polynomials import EpsPolynomial
from .rationals import format_rational, rat
from .sequences import ParametricDistribution


class ParseError(ValueError):
    """Malformed input document, with a location breadcrumb."""

    def __init__(self, message: str, source: str = "<input>", location: str = ""):
        self.source = source
        self.location = location
        where = f"{source}:{location}" if location else source
        super().__init__(f"{where}: {message}")


def _load_json(text: str, source: str):
    try:
        doc = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON ({exc.msg})", source, f"line {exc.lineno}") from exc
    except ValueError as exc:  # the parse_float hook
        raise ParseError(str(exc), source) from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level value must be an object", source)
    return doc


def _reject_float(text):
    raise ValueError(f"float literal {text} is not allowed; use rational strings")


def _rational(value, source, location):
    if isinstance(value, (int, str)):
        try:
            return rat(value)
        except (TypeError, ValueError) as exc:
            raise ParseError(str(exc), source, location) from exc
    raise ParseError(f"expected a rational string, got {value!r}", source, location)


def _coeff_list(value, source, location) -> EpsPolynomial:
    if not isinstance(value, list):
        raise ParseError(f"expected a coefficient list, got {value!r}", source, location)
    return EpsPolynomial(
        [_rational(v, source, f"{location}[{k}]") for k, v in enumerate(value)]
    )


def _split_profile(key: str, game: Game, source, location):
    labels = key.split(",")
    if len(labels) != game.player_count:
        raise ParseError(
            f"profile key {key!r} must list {game.player_count} strategies",
            source,
            location,
        )
    try:
        return game.profile_of_labels(labels)
    except ValueError as exc:
        raise ParseError(str(exc), source, location) from exc


def _join_profile(game: Game, profile) -> str:
    return ",".join(game.labels_of_profile(profile))


# -- games ------------------------------------------------------------------


def parse_game(text: str, source: str = "<game>") -> Game:
    doc = _load_json(text, source)
    for key in ("players", "strategies", "payoffs"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}", source)
    players = doc["players"]
    strategies = doc["strategies"]
    if not isinstance(players, list) or not all(isinstance(p, str) for p in players):
        raise ParseError("'players' must be a list of labels", source, "players")
    if not isinstance(strategies, list) or len(strategies) != len(players):
        raise ParseError(
            "'strategies' must list one label list per player", source, "strategies"
        )
    for i, row in enumerate(strategies):
        if not isinstance(row, list) or not all(isinstance(s, str) for s in row):
            raise ParseError("strategy labels must be strings", source, f"strategies[{i}]")
        for label in row:
            if "," in label:
                raise ParseError(
                    f"strategy label {label!r} may not contain a comma",
                    source,
                    f"strategies[{i}]",
                )
    payoffs = doc["payoffs"]
    if not isinstance(payoffs, dict):
        raise ParseError("'payoffs' must be an object", source, "payoffs")

    try:
        skeleton = Game(strategies, _zero_payoffs(strategies), player_names=players)
    except ValueError as exc:
        raise ParseError(str(exc), source) from exc

    expected = skeleton.profile_count
    if len(payoffs) != expected:
        raise ParseError(
            f"'payoffs' must cover exactly {expected} profiles, got {len(payoffs)}",
            source,
            "payoffs",
        )
    table = {}
    for key, vector in payoffs.items():
        location = f"payoffs[{key!r}]"
        profile = _split_profile(key, skeleton, source, location)
        if not isinstance(vector, list) or len(vector) != len(players):
            raise ParseError(
                f"payoff entry must list {len(players)} rationals", source, location
            )
        table[profile] = [
            _rational(v, source, f"{location}[{k}]") for k, v in enumerate(vector)
        ]
    return Game(strategies, table, player_names=players)


def _zero_payoffs(strategies):
    total = 1
    for row in strategies:
        total *= len(row)
    return [[0] * len(strategies)] * total


def game_to_doc(game: Game) -> dict:
    return {
        "players": list(game.player_names),
        "strategies": [list(row) for row in game.strategy_names],
        "payoffs": {
            _join_profile(game, profile): [
                format_rational(v) for v in game.payoff_vector(profile)
            ]
            for profile in game.profiles()
        },
    }


# -- distributions ------------------------------------------------------------


def parse_distribution(text: str, game: Game, source: str = "<dist>") -> CorrelatedStrategy:
    doc = _load_json(text, source)
    if "probabilities" not in doc:
        raise ParseError("missing key 'probabilities'", source)
    probs = doc["probabilities"]
    if not isinstance(probs, dict):
        raise ParseError("'probabilities' must be an object", source, "probabilities")
    table = {}
    for key, value in probs.items():
        location = f"probabilities[{key!r}]"
        profile = _split_profile(key, game, source, location)
        table[profile] = _rational(value, source, location)
    try:
        return CorrelatedStrategy(game.shape, table)
    except ValueError as exc:
        raise ParseError(str(exc), source, "probabilities") from exc


def distribution_to_doc(game: Game, rho: CorrelatedStrategy) -> dict:
    return {
        "probabilities": {
            _join_profile(game, profile): format_rational(p)
            for profile, p in rho.items()
            if p
        }
    }


# -- tremble families ---------------------------------------------------------


def parse_trembles(text: str, game: Game, source: str = "<trembles>") -> TrembleFamily:
    doc = _load_json(text, source)
    if "trembles" not in doc:
        raise ParseError("missing key 'trembles'", source)
    body = doc["trembles"]
    if not isinstance(body, dict):
        raise ParseError("'trembles' must be an object", source, "trembles")
    if set(body) != set(game.player_names):
        raise ParseError(
            f"'trembles' must have one entry per player {list(game.player_names)}",
            source,
            "trembles",
        )
    tables = []
    for i, player in enumerate(game.player_names):
        rows_doc = body[player]
        location = f"trembles[{player!r}]"
        if not isinstance(rows_doc, dict):
            raise ParseError("player entry must be an object", source, location)
        labels = game.strategy_names[i]
        if set(rows_doc) != set(labels):
            raise ParseError(
                f"rows must cover exactly the strategies {list(labels)}",
                source,
                location,
            )
        table = []
        for label in labels:
            row_doc = rows_doc[label]
            row_loc = f"{location}[{label!r}]"
            if not isinstance(row_doc, dict) or "coeffs" not in row_doc:
                raise ParseError("row must be an object with key 'coeffs'", source, row_loc)
            coeffs = row_doc["coeffs"]
            if not isinstance(coeffs, list) or len(coeffs) != len(labels):
                raise ParseError(
                    f"'coeffs' must list {len(labels)} polynomials", source, row_loc
                )
            table.append(
                tuple(
                    _coeff_list(entry, source, f"{row_loc}.coeffs[{t}]")
                    for t, entry in enumerate(coeffs)
                )
            )
        tables.append(tuple(table))
    try:
        return TrembleFamily(tables)
    except ValueError as exc:
        raise ParseError(str(exc), source, "trembles") from exc


def trembles_to_doc(game: Game, trembles: TrembleFamily) -> dict:
    body = {}
    for i, player in enumerate(game.player_names):
        rows = {}
        for s_i, label in enumerate(game.strategy_names[i]):
            rows[label] = {
                "coeffs": [
                    [format_rational(c) for c in poly.coeffs]
                    for poly in trembles.rows[i][s_i]
                ]
            }
        body[player] = rows
    return {"trembles": body}


# -- parametric mass families ---------------------------------------------------


def parse_family(text: str, game: Game, source: str = "<family>") -> ParametricDistribution:
    doc = _load_json(text, source)
    if "masses" not in doc:
        raise ParseError("missing key 'masses'", source)
    body = doc["masses"]
    if not isinstance(body, dict):
        raise ParseError("'masses' must be an object", source, "masses")
    table = {}
    for key, coeffs in body.items():
        location = f"masses[{key!r}]"
        profile = _split_profile(key, game, source, location)
        table[profile] = _coeff_list(coeffs, source, location)
    try:
        return ParametricDistribution(game.shape, table)
    except ValueError as exc:
        raise ParseError(str(exc), source, "masses") from exc


def family_to_doc(game: Game, family: ParametricDistribution) -> dict:
    return {
        "masses": {
            _join_profile(game, profile): [
                format_rational(c) for c in family.mass(game, profile).coeffs
            ]
            for profile in game.profiles()
        }
    }


# -- file helpers ---------------------------------------------------------------


def load_game(path) -> Game:
    return parse_game(_read(path), source=str(path))


def load_distribution(path, game: Game) -> CorrelatedStrategy:
    return parse_distribution(_read(path), game, source=str(path))


def load_trembles(path, game: Game) -> TrembleFamily:
    return parse_trembles(_read(path), game, source=str(path))


def load_family(path, game: Game) -> ParametricDistribution:
    return parse_family(_read(path), game, source=str(path))


def dump_doc(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _read(path) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc}", source=str(path)) from exc
