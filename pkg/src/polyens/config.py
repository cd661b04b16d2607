"""JSON configuration for measures, recurrence tables, and ensembles.

The command-line tool describes inputs as small JSON documents.  Three
shapes are understood:

measure::

    {"kind": "named", "name": "chebyshev-arcsine", "alpha": -1, "beta": 1}
    {"kind": "atoms", "points": [...], "weights": [...]}
    {"kind": "grid", "points": [...], "density": [...]}

table::

    {"form": "op", "a": [...], "b": [...]}
    {"form": "banded", "q": 2, "K": 12, "c": [[k, j, value], ...]}

ensemble::

    {"classical": "gue", "N": 50}
    {"measure": {...}, "N": 20}                  # table built from atoms
    {"measure": {...}, "table": {...}, "N": 20}  # explicit recurrence
    {"base": {...}, "tilt": [[...], ...]}        # non-orthogonal Q family

Banded ``c`` entries are triplets ``[k, j, value]`` where ``j = -1`` is the
coefficient on the step up and ``j = 0..q`` the steps down.
"""

import hashlib
import json

import numpy as np

from .errors import ConfigError
from .measure import atoms_measure, grid_measure, named_measure
from .recurrence import banded_table, classical_table, op_table, table_from_measure
from .ensemble import PolynomialEnsemble
from .asymptotics import CoefficientProfile, gue_profile, op_profile

CLASSICAL_NAMES = ("gue", "chebyshev", "uniform-circle", "circle")


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


def _as_dict(obj, what):
    _require(isinstance(obj, dict), f"{what} config must be a JSON object, got {type(obj).__name__}")
    return obj


def build_measure(cfg):
    """Construct a ReferenceMeasure from its JSON description."""
    cfg = _as_dict(cfg, "measure")
    kind = cfg.get("kind")
    _require(kind in ("named", "atoms", "grid"), f"unknown measure kind {kind!r}")
    if kind == "named":
        params = {k: v for k, v in cfg.items() if k not in ("kind", "name")}
        _require("name" in cfg, "named measure needs a 'name' field")
        try:
            return named_measure(cfg["name"], **params)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"bad named measure: {exc}") from exc
    if kind == "atoms":
        _require("points" in cfg and "weights" in cfg, "atoms measure needs 'points' and 'weights'")
        points = np.asarray(cfg["points"])
        if np.iscomplexobj(points) or any(isinstance(p, list) for p in cfg["points"]):
            # allow [re, im] pairs for circle-like supports
            pts = [complex(p[0], p[1]) if isinstance(p, list) else complex(p) for p in cfg["points"]]
            points = np.asarray(pts)
        return atoms_measure(points, np.asarray(cfg["weights"], dtype=float))
    _require("points" in cfg and "density" in cfg, "grid measure needs 'points' and 'density'")
    return grid_measure(np.asarray(cfg["points"], dtype=float), np.asarray(cfg["density"], dtype=float))


def build_table(cfg, N=None):
    """Construct a RecurrenceTable from its JSON description."""
    cfg = _as_dict(cfg, "table")
    form = cfg.get("form")
    _require(form in ("op", "banded"), f"unknown table form {form!r}")
    if form == "op":
        _require("a" in cfg, "op table needs an 'a' array")
        a = np.asarray(cfg["a"], dtype=float)
        b = np.asarray(cfg.get("b", np.zeros(a.size)), dtype=float)
        n = int(cfg.get("N", N if N is not None else a.size))
        _require(n >= 1, "table N must be >= 1")
        return op_table(a, b, n)
    _require("q" in cfg and "c" in cfg, "banded table needs 'q' and 'c'")
    q = int(cfg["q"])
    _require(len(cfg["c"]) > 0, "banded table needs at least one 'c' entry")
    K = int(cfg.get("K", max(int(e[0]) for e in cfg["c"])))
    _require(q >= 0 and K >= 0, "banded table needs q >= 0 and K >= 0")
    c = np.zeros((K + 1, q + 2))
    complex_seen = False
    for entry in cfg["c"]:
        _require(isinstance(entry, list) and len(entry) in (3, 4), "banded 'c' entries are [k, j, value] or [k, j, re, im]")
        k, j = int(entry[0]), int(entry[1])
        _require(0 <= k <= K, f"banded 'c' row {k} outside 0..{K}")
        _require(-1 <= j <= q, f"banded 'c' step {j} outside -1..{q}")
        val = complex(entry[2], entry[3]) if len(entry) == 4 else float(entry[2])
        if len(entry) == 4:
            complex_seen = True
        if complex_seen and not np.iscomplexobj(c):
            c = c.astype(complex)
        c[k, j + 1] = val
    n = int(cfg.get("N", N if N is not None else K + 1))
    _require(n >= 1, "table N must be >= 1")
    return banded_table(c, q, n)


def build_ensemble(cfg):
    """Construct a PolynomialEnsemble from its JSON description."""
    cfg = _as_dict(cfg, "ensemble")
    if "base" in cfg:
        _require("tilt" in cfg, "tilted ensemble needs a 'tilt' matrix")
        base = build_ensemble(cfg["base"])
        tilt = np.asarray(cfg["tilt"], dtype=float)
        return base.tilt_nonorthogonal(tilt)
    if "classical" in cfg:
        name = cfg["classical"]
        _require(name in CLASSICAL_NAMES, f"unknown classical ensemble {name!r}")
        _require("N" in cfg, "classical ensemble needs 'N'")
        N = int(cfg["N"])
        _require(N >= 1, "ensemble N must be >= 1")
        kwargs = {}
        if "alpha" in cfg:
            kwargs["alpha"] = float(cfg["alpha"])
        if "beta" in cfg:
            kwargs["beta"] = float(cfg["beta"])
        table = classical_table(name, N, pad=int(cfg.get("pad", 8)), **kwargs)
        if name == "gue":
            measure = named_measure("scaled-hermite", N=N, nodes=int(cfg.get("nodes", 256)))
        elif name == "chebyshev":
            measure = named_measure(
                "chebyshev-arcsine",
                alpha=kwargs.get("alpha", -1.0),
                beta=kwargs.get("beta", 1.0),
                nodes=int(cfg.get("nodes", 256)),
            )
        else:
            measure = named_measure("uniform-circle", n=int(cfg.get("nodes", max(4 * N, 64))))
        return PolynomialEnsemble.from_table(table, measure, N=N, name=name)
    _require("measure" in cfg, "ensemble needs 'classical', 'measure', or 'base'")
    measure = build_measure(cfg["measure"])
    if "table" in cfg:
        table = build_table(cfg["table"], N=int(cfg["N"]) if "N" in cfg else None)
        return PolynomialEnsemble.from_table(table, measure, N=int(cfg.get("N", table.N)))
    _require("N" in cfg, "ensemble needs 'N'")
    N = int(cfg["N"])
    _require(N >= 1, "ensemble N must be >= 1")
    table = table_from_measure(measure, N, pad=int(cfg.get("pad", 8)))
    return PolynomialEnsemble.from_table(table, measure, N=N)


def _profile_fn(raw, label):
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    if raw == "sqrt":
        return np.sqrt
    if isinstance(raw, dict) and "s" in raw and "value" in raw:
        s = np.asarray(raw["s"], dtype=float)
        v = np.asarray(raw["value"], dtype=float)
        _require(
            s.ndim == 1 and s.shape == v.shape and s.size >= 2 and np.all(np.diff(s) > 0),
            f"profile {label}: piecewise-linear table needs increasing 's' and matching 'value'",
        )
        return lambda u, s=s, v=v: np.interp(u, s, v)
    raise ConfigError(f"profile {label} must be a number, \"sqrt\", or a {{'s', 'value'}} table")


def build_profile(cfg):
    """Construct a CoefficientProfile from its JSON description.

    {"kind": "gue"} | {"kind": "op", "a": <fn>, "b": <fn>} |
    {"kind": "banded", "funcs": {"-1": <fn>, "0": <fn>, ...}}
    where <fn> is a constant, "sqrt", or a piecewise-linear
    {"s": [...], "value": [...]} table.
    """
    cfg = _as_dict(cfg, "profile")
    kind = cfg.get("kind")
    _require(kind in ("gue", "op", "banded"), f"unknown profile kind {kind!r}")
    if kind == "gue":
        return gue_profile()
    if kind == "op":
        _require("a" in cfg, "op profile needs 'a'")
        return op_profile(_profile_fn(cfg["a"], "a"), _profile_fn(cfg.get("b", 0.0), "b"))
    _require("funcs" in cfg and isinstance(cfg["funcs"], dict), "banded profile needs a 'funcs' object")
    funcs = {int(j): _profile_fn(f, f"funcs[{j}]") for j, f in cfg["funcs"].items()}
    try:
        return CoefficientProfile(funcs)
    except ValueError as exc:
        raise ConfigError(f"bad profile: {exc}") from exc


def config_hash(cfg):
    """Short stable digest of a config document, for output provenance."""
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:12]


def load_config(path_or_json):
    """Parse a config from a file path or an inline JSON string."""
    text = path_or_json
    try:
        return json.loads(text)
    except (json.JSONDecodeError, TypeError):
        pass
    try:
        with open(path_or_json) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config is neither valid JSON nor a readable file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path_or_json} is not valid JSON: {exc}") from exc
