"""Scenario files: JSON schema, validation and defaults.

A scenario bundles the starting symplectic matrix (explicit or generated
from a rotation angle and a symmetric coupling block), the coefficient
curve A(t, eps) as expression text, the horizon T for the eps family,
parameter grids, and tolerance overrides.  Validation is strict: unknown
keys are rejected, and every complaint carries a JSON-pointer-style path.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import SchemaError
from .expr import SymmetricCurve
from .spectral import make_jordan_symplectic


@dataclass(frozen=True)
class GridSpec:
    """Parameter grid: count points in [lo, hi], log- or linearly spaced."""

    lo: float = 1e-7
    hi: float = 1e-3
    count: int = 16
    log: bool = True

    def points(self):
        if self.log:
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)


@dataclass(frozen=True)
class Tolerances:
    """Documented defaults, overridable per scenario.

    cluster / circle feed multiplier detection; drift flags flow
    solutions; steps_t and steps_eps are the Runge-Kutta step counts for
    the time-family tracking integrations and the [0, T] endpoint
    integrations; probe is the |t| used by the stability dichotomy check.
    """

    cluster: float = 1e-6
    circle: float = 1e-6
    drift: float = 1e-8
    steps_t: int = 10000
    steps_eps: int = 3000
    probe: float = 1e-4


@dataclass(frozen=True)
class Scenario:
    name: str
    curve: SymmetricCurve
    gamma0: np.ndarray | None = None
    generator: tuple | None = None  # (theta0, C) for the block generator
    T: float = 1.0
    t_grid: GridSpec = field(default_factory=GridSpec)
    eps_grid: GridSpec = field(default_factory=GridSpec)
    tolerances: Tolerances = field(default_factory=Tolerances)

    def initial_matrix(self):
        if self.gamma0 is not None:
            return np.array(self.gamma0, dtype=float)
        theta0, C = self.generator
        return make_jordan_symplectic(theta0, C)


def _require_keys(obj, allowed, required, path):
    if not isinstance(obj, dict):
        raise SchemaError(path, f"expected an object, got {type(obj).__name__}")
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"{path}/{key}", "unknown key")
    for key in required:
        if key not in obj:
            raise SchemaError(path, f"missing required key {key!r}")


def _number(value, path, positive=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, f"expected a number, got {type(value).__name__}")
    v = float(value)
    if not np.isfinite(v):
        raise SchemaError(path, "number must be finite")
    if positive and v <= 0:
        raise SchemaError(path, "number must be positive")
    return v


def _matrix(value, shape, path):
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(path, "expected a numeric matrix") from None
    if arr.shape != shape:
        raise SchemaError(path, f"expected shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise SchemaError(path, "matrix entries must be finite")
    return arr


def _grid(obj, path):
    _require_keys(obj, {"min", "max", "count", "log"}, (), path)
    lo = _number(obj.get("min", 1e-7), f"{path}/min", positive=True)
    hi = _number(obj.get("max", 1e-3), f"{path}/max", positive=True)
    if hi <= lo:
        raise SchemaError(path, "max must exceed min")
    count = obj.get("count", 16)
    if isinstance(count, bool) or not isinstance(count, int) or count < 4:
        raise SchemaError(f"{path}/count", "count must be an integer >= 4")
    log = obj.get("log", True)
    if not isinstance(log, bool):
        raise SchemaError(f"{path}/log", "log must be a boolean")
    return GridSpec(lo=lo, hi=hi, count=count, log=log)


def _tolerances(obj, path):
    allowed = {"cluster", "circle", "drift", "steps_t", "steps_eps", "probe"}
    _require_keys(obj, allowed, (), path)
    kwargs = {}
    for key in ("cluster", "circle", "drift", "probe"):
        if key in obj:
            kwargs[key] = _number(obj[key], f"{path}/{key}", positive=True)
    for key in ("steps_t", "steps_eps"):
        if key in obj:
            v = obj[key]
            if isinstance(v, bool) or not isinstance(v, int) or v < 2:
                raise SchemaError(f"{path}/{key}", "must be an integer >= 2")
            kwargs[key] = v
    return Tolerances(**kwargs)


def parse_scenario(obj, default_name="scenario"):
    """Validate a decoded JSON object into a Scenario."""
    _require_keys(obj, {"name", "gamma0", "curve", "T", "grids", "tolerances"},
                  ("gamma0", "curve"), "")
    name = obj.get("name", default_name)
    if not isinstance(name, str) or not name:
        raise SchemaError("/name", "name must be a non-empty string")

    g0 = obj["gamma0"]
    _require_keys(g0, {"matrix", "generator"}, (), "/gamma0")
    if ("matrix" in g0) == ("generator" in g0):
        raise SchemaError("/gamma0", "give exactly one of 'matrix' or 'generator'")
    gamma0 = None
    generator = None
    if "matrix" in g0:
        gamma0 = _matrix(g0["matrix"], (4, 4), "/gamma0/matrix")
    else:
        gen = g0["generator"]
        _require_keys(gen, {"theta0", "C"}, ("theta0", "C"), "/gamma0/generator")
        theta0 = _number(gen["theta0"], "/gamma0/generator/theta0")
        C = _matrix(gen["C"], (2, 2), "/gamma0/generator/C")
        if C[0, 1] != C[1, 0]:
            raise SchemaError("/gamma0/generator/C", "coupling block must be symmetric")
        generator = (theta0, C)

    cur = obj["curve"]
    _require_keys(cur, {"entries"}, ("entries",), "/curve")
    entries = cur["entries"]
    if not isinstance(entries, dict):
        raise SchemaError("/curve/entries", "expected an object of 'i,j': expression")
    for key, text in entries.items():
        if not isinstance(text, str):
            raise SchemaError(f"/curve/entries/{key}", "expression must be a string")
    # Expression and symmetry errors propagate as-is; they already carry
    # their own locations and belong to the same input-error family.
    try:
        curve = SymmetricCurve.from_strings(entries)
    except ValueError as exc:
        raise SchemaError("/curve/entries", str(exc)) from None

    T = _number(obj.get("T", 1.0), "/T", positive=True)
    grids = obj.get("grids", {})
    _require_keys(grids, {"t", "eps"}, (), "/grids")
    t_grid = _grid(grids["t"], "/grids/t") if "t" in grids else GridSpec()
    eps_grid = _grid(grids["eps"], "/grids/eps") if "eps" in grids else GridSpec()
    tolerances = _tolerances(obj.get("tolerances", {}), "/tolerances")

    return Scenario(name=name, curve=curve, gamma0=gamma0, generator=generator,
                    T=T, t_grid=t_grid, eps_grid=eps_grid, tolerances=tolerances)


def load_scenario(path):
    """Load and validate a scenario JSON file."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError("", f"cannot read {path}: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"invalid JSON: {exc}") from None
    return parse_scenario(obj, default_name=p.stem)
