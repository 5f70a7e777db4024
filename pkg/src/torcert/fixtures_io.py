"""Reading and writing JSON fixtures for groups, lattices and fibre actions."""

import json
from importlib import resources
from pathlib import Path

from .conic import fibre_action_from_dict
from .groups import DEFAULT_MAX_ORDER, GroupOrderError, close_generators
from .lattice import VerificationError, from_generator_action

FIXTURE_VERSION = "v1"


class FixtureError(ValueError):
    pass


def builtin_dir():
    return resources.files("torcert") / "fixtures" / FIXTURE_VERSION


def builtin_names():
    return sorted(p.name for p in builtin_dir().iterdir() if p.name.endswith(".json"))


def resolve_fixture_path(path):
    """The given path if it exists, else a shipped fixture with the same file name."""
    p = Path(path)
    if p.is_file():
        return p
    candidate = builtin_dir() / p.name
    if candidate.is_file():
        return candidate
    raise FixtureError(f"{path}: no such file, and no built-in fixture named {p.name} "
                       f"(available: {', '.join(builtin_names())})")


def read_json(path):
    p = resolve_fixture_path(path)
    text = p.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FixtureError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _require(data, key, where, kind=None):
    if not isinstance(data, dict) or key not in data:
        raise FixtureError(f"{where}: missing field '{key}'")
    value = data[key]
    if kind is not None and not isinstance(value, kind):
        raise FixtureError(f"{where}.{key}: expected {kind.__name__}")
    return value


def group_from_dict(data, max_order=DEFAULT_MAX_ORDER, where="group"):
    from .catalog import GROUPS
    if isinstance(data, str):
        if data not in GROUPS:
            raise FixtureError(f"{where}: unknown group name '{data}' (known: {', '.join(GROUPS)})")
        G = GROUPS[data]()
        if G.order > max_order:
            raise GroupOrderError(f"group order {G.order} exceeds the bound {max_order}")
        return G
    degree = _require(data, "degree", where, int)
    gens = _require(data, "generators", where, list)
    try:
        return close_generators(degree, gens, max_order=max_order, name=data.get("name", ""))
    except GroupOrderError:
        raise
    except ValueError as exc:
        raise FixtureError(f"{where}.generators: {exc}") from exc


def group_to_dict(G):
    degree = len(G.elements[0])
    return {"name": G.name, "degree": degree,
            "generators": [list(G.elements[g]) for g in G.generators]}


def lattice_from_dict(data, max_order=DEFAULT_MAX_ORDER, where="lattice"):
    G = group_from_dict(_require(data, "group", where), max_order, where=f"{where}.group")
    mats = _require(data, "generator_action", where, list)
    rank = data.get("rank")
    if len(mats) != len(G.generators):
        raise FixtureError(f"{where}.generator_action: {len(mats)} matrices for "
                           f"{len(G.generators)} group generators")
    for k, m in enumerate(mats):
        if not isinstance(m, list) or any(not isinstance(row, list) for row in m):
            raise FixtureError(f"{where}.generator_action[{k}]: expected a list of rows")
        if rank is not None and (len(m) != rank or any(len(row) != rank for row in m)):
            raise FixtureError(f"{where}.generator_action[{k}]: expected a {rank}x{rank} matrix")
    try:
        return from_generator_action(G, mats, name=data.get("name", ""))
    except (ValueError, VerificationError) as exc:
        raise FixtureError(f"{where}.generator_action: {exc}") from exc


def lattice_to_dict(M):
    G = M.group
    return {"name": M.name, "group": group_to_dict(G), "rank": M.rank,
            "generator_action": [[[int(x) for x in row] for row in M.action[g]]
                                 for g in G.generators]}


def conic_from_dict(data, max_order=DEFAULT_MAX_ORDER):
    try:
        return fibre_action_from_dict(data, max_order=max_order)
    except ValueError as exc:
        raise FixtureError(f"conic fixture: {exc}") from exc


def fixture_kind(data):
    if isinstance(data, dict):
        if "fibres" in data:
            return "conic"
        if "generator_action" in data or "group" in data:
            return "lattice"
        if "degree" in data:
            return "group"
    raise FixtureError("unrecognized fixture: expected a lattice, group or conic-bundle object")


def load_lattice(path, max_order=DEFAULT_MAX_ORDER):
    data = read_json(path)
    if fixture_kind(data) != "lattice":
        raise FixtureError(f"{path}: not a lattice fixture")
    return lattice_from_dict(data, max_order)


def load_conic(path, max_order=DEFAULT_MAX_ORDER):
    data = read_json(path)
    if fixture_kind(data) != "conic":
        raise FixtureError(f"{path}: not a conic-bundle fixture")
    return conic_from_dict(data, max_order)


def dumps_fixture(data):
    """One top-level field per line, values compact."""
    body = ",\n".join(f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in data.items())
    return "{\n" + body + "\n}\n"


def write_builtin_fixtures(directory):
    """Regenerate the shipped fixtures from the catalog builders."""
    from .catalog import CONIC_ACTIONS, GROUPS, LATTICES
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for name, build in GROUPS.items():
        fname = "group_" + name.lower().replace("^", "x") + ".json"
        (d / fname).write_text(dumps_fixture(group_to_dict(build())))
    for name, build in LATTICES.items():
        (d / f"{name}.json").write_text(dumps_fixture(lattice_to_dict(build())))
    for name, data in CONIC_ACTIONS.items():
        (d / f"{name}.json").write_text(dumps_fixture(data))
