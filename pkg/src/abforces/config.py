"""Run configuration for the ``ab-forces`` command line.

Configs are TOML documents with three optional sections::

    command = "figure2"          # optional; the command line may supply it

    [scenario]
    kR = 4.3e-3                  # or R and k separately
    beta = 0.2                   # finite barrier: flux ratio
    V0_over_k2 = 1e8             # or V0 (absolute), or V0 = "inf"
    # kappa = 0.2                # hard wall (V0 = "inf") takes kappa instead

    [grid]
    phi = [3.141592653589793]    # angles in radians
    ladder = [1e4, 1e6, 1e8]     # barrier heights in units of k**2

    [output]
    path = "fig2.csv"

Unknown keys are rejected by name.
"""

from __future__ import annotations

import hashlib
import math
import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ParseError, ValidationError
from .scenario import CylinderScenario

COMMANDS = (
    "figure2", "figure3a", "figure3b", "slope-profile", "force",
    "force-scan", "converge", "infer-kappa", "periodicity",
)

# commands that only make sense for one of the two models
_IDEAL_ONLY = {"figure3a", "figure3b", "force-scan"}
_FINITE_ONLY = {"figure2", "converge", "periodicity"}

DEFAULT_LADDER = (1e4, 1e5, 1e6, 1e7, 1e8)
DEFAULT_PHI = (1.3 * math.pi,)

_SCENARIO_KEYS = {"R", "k", "kR", "beta", "kappa", "V0", "V0_over_k2", "rho"}
_GRID_KEYS = {
    "angles", "phi", "r_min", "r_max", "r_points", "ladder", "quadrature",
    "kR_list", "alpha_list", "kappa_list", "offsets", "alpha", "slopes",
    "observable", "component",
}
_OUTPUT_KEYS = {"path"}


@dataclass(frozen=True)
class RunConfig:
    """Validated settings for one command.

    ``kappa`` is set for hard-wall runs and ``None`` for finite-barrier
    runs, where ``scenario.beta`` carries the flux.  Radii are in units of
    R and ``ladder`` in units of k**2.
    """

    command: str
    scenario: CylinderScenario
    kappa: float | None = None
    angles: int | tuple = 256
    phi: tuple = DEFAULT_PHI
    r_min: float = 0.9
    r_max: float = 1.5
    r_points: int = 61
    ladder: tuple = DEFAULT_LADDER
    quadrature: int = 512
    kR_list: tuple = ()
    alpha_list: tuple = ()
    kappa_list: tuple = ()
    offsets: tuple = (0, 1)
    alpha: float | None = None
    slopes: tuple = ()
    observable: str = "slope"
    component: str = "f1"
    output: str | None = None
    digest: str = field(default="", compare=False)

    @property
    def ideal(self) -> bool:
        return not self.scenario.finite

    def angle_grid(self):
        from .ideal import check_angle_grid, uniform_angles

        if isinstance(self.angles, int):
            return uniform_angles(self.angles)
        return check_angle_grid(self.angles)


def _number(key, value, *, positive=False, nonneg=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(key, "must be a number")
    if integer and not isinstance(value, int):
        raise ValidationError(key, "must be an integer")
    if not math.isfinite(value):
        raise ValidationError(key, "must be finite")
    if positive and not value > 0:
        raise ValidationError(key, "must be > 0")
    if nonneg and not value >= 0:
        raise ValidationError(key, "must be >= 0")
    return value


def _numbers(key, value, **kw):
    if not isinstance(value, list) or not value:
        raise ValidationError(key, "must be a non-empty list of numbers")
    return tuple(_number(key, v, **kw) for v in value)


def _unit_interval(key, value):
    value = _number(key, value)
    if not 0.0 <= value < 1.0:
        raise ValidationError(key, "must lie in [0, 1)")
    return float(value)


def _check_keys(name, table, allowed):
    if not isinstance(table, dict):
        raise ValidationError(name, "must be a table")
    for key in table:
        if key not in allowed:
            raise ValidationError(f"{name}.{key}" if name else key, "unknown key")


def _scenario(table, command):
    _check_keys("scenario", table, _SCENARIO_KEYS)
    kw = {}
    if "kR" in table:
        if "k" in table:
            raise ValidationError("kR", "give either kR or k, not both")
        R = _number("R", table.get("R", 1.0), positive=True)
        kw["R"] = float(R)
        kw["k"] = float(_number("kR", table["kR"], positive=True)) / R
    else:
        for key in ("R", "k"):
            if key in table:
                kw[key] = float(_number(key, table[key], positive=True))
    if "rho" in table:
        kw["rho"] = float(_number("rho", table["rho"], positive=True))
    k = kw.get("k", 1.0)

    if "V0" in table and "V0_over_k2" in table:
        raise ValidationError("V0", "give either V0 or V0_over_k2, not both")
    raw = table.get("V0", table.get("V0_over_k2", "inf"))
    vkey = "V0" if "V0" in table else "V0_over_k2"
    if isinstance(raw, str):
        if raw.strip().lower() not in ("inf", "infinite"):
            raise ValidationError(vkey, 'must be a number or "inf"')
        V0 = math.inf
    else:
        V0 = float(_number(vkey, raw, nonneg=True))
        if vkey == "V0_over_k2":
            V0 *= k * k
    if command in _FINITE_ONLY and "V0" not in table and "V0_over_k2" not in table:
        # figure2 and converge take V0 from the ladder
        V0 = 1e8 * k * k if command == "periodicity" else 0.0
    kw["V0"] = V0

    kappa = None
    if math.isinf(V0):
        if "beta" in table:
            raise ValidationError("beta", 'not allowed with V0 = "inf"; the hard wall takes kappa')
        if command in _FINITE_ONLY:
            raise ValidationError("V0", f"{command} needs a finite barrier")
        kappa = _unit_interval("kappa", table.get("kappa", 0.0))
    else:
        if "kappa" in table:
            raise ValidationError("kappa", "only valid with V0 = \"inf\"; finite barriers take beta")
        if command in _IDEAL_ONLY:
            raise ValidationError("V0", f'{command} uses the hard wall; set V0 = "inf"')
        kw["beta"] = float(_number("beta", table.get("beta", 0.0), nonneg=True))
    try:
        scenario = CylinderScenario(**kw)
    except ValueError as exc:
        name, _, constraint = str(exc).partition(" ")
        raise ValidationError(name, constraint) from None
    return scenario, kappa


def _grid(table, command):
    _check_keys("grid", table, _GRID_KEYS)
    out = {}
    if "angles" in table:
        value = table["angles"]
        if isinstance(value, int) and not isinstance(value, bool):
            if value < 1:
                raise ValidationError("angles", "must be >= 1")
            out["angles"] = value
        else:
            angles = _numbers("angles", value)
            if any(a < 0 or a >= 2 * math.pi for a in angles):
                raise ValidationError("angles", "must lie in [0, 2 pi)")
            if any(b <= a for a, b in zip(angles, angles[1:])):
                raise ValidationError("angles", "must be strictly increasing")
            out["angles"] = angles
    if "phi" in table:
        value = table["phi"]
        out["phi"] = _numbers("phi", value if isinstance(value, list) else [value])
    for key in ("r_min", "r_max"):
        if key in table:
            out[key] = float(_number(key, table[key], positive=True))
    if "r_points" in table:
        n = _number("r_points", table["r_points"], integer=True)
        if n < 2:
            raise ValidationError("r_points", "must be >= 2")
        out["r_points"] = n
    if out.get("r_min", 0.9) >= out.get("r_max", 1.5):
        raise ValidationError("r_max", "must exceed r_min")
    if "ladder" in table:
        ladder = _numbers("ladder", table["ladder"], positive=True)
        if any(b <= a for a, b in zip(ladder, ladder[1:])):
            raise ValidationError("ladder", "must be strictly increasing")
        out["ladder"] = tuple(float(v) for v in ladder)
    if "quadrature" in table:
        n = _number("quadrature", table["quadrature"], integer=True)
        if n < 64 or n & (n - 1):
            raise ValidationError("quadrature", "must be a power of two >= 64")
        out["quadrature"] = n
    if "kR_list" in table:
        out["kR_list"] = tuple(float(v) for v in _numbers("kR_list", table["kR_list"], positive=True))
    for key in ("alpha_list", "kappa_list"):
        if key in table:
            if not isinstance(table[key], list) or not table[key]:
                raise ValidationError(key, "must be a non-empty list of numbers")
            out[key] = tuple(_unit_interval(key, v) for v in table[key])
    if "alpha" in table:
        out["alpha"] = _unit_interval("alpha", table["alpha"])
    if "offsets" in table:
        offsets = _numbers("offsets", table["offsets"], integer=True, nonneg=True)
        out["offsets"] = tuple(int(v) for v in offsets)
    if "slopes" in table:
        pairs = table["slopes"]
        if not isinstance(pairs, list) or not pairs:
            raise ValidationError("slopes", "must be a non-empty list of [phi, slope] pairs")
        parsed = []
        for pair in pairs:
            if not isinstance(pair, list) or len(pair) != 2:
                raise ValidationError("slopes", "each entry must be a [phi, slope] pair")
            parsed.append((float(_number("slopes", pair[0])),
                           float(_number("slopes", pair[1], nonneg=True))))
        out["slopes"] = tuple(parsed)
    if "observable" in table:
        if table["observable"] not in ("slope", "force"):
            raise ValidationError("observable", 'must be "slope" or "force"')
        out["observable"] = table["observable"]
    if "component" in table:
        if table["component"] not in ("f1", "f2"):
            raise ValidationError("component", 'must be "f1" or "f2"')
        out["component"] = table["component"]
    return out


def parse_config(text: str, command: str | None = None) -> RunConfig:
    """Parse and validate a TOML run configuration.

    Parameters
    ----------
    text : str
        The document.
    command : str, optional
        Command given on the command line.  If the document also names
        one, the two must agree.

    Raises
    ------
    ParseError
        Malformed TOML, with line and column.
    ValidationError
        Well-formed but invalid content, naming the offending field.
    """
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        col = getattr(exc, "colno", None)
        msg = getattr(exc, "msg", str(exc))
        raise ParseError(msg, line, col) from None

    allowed_top = {"command", "scenario", "grid", "output"}
    for key in doc:
        if key not in allowed_top:
            raise ValidationError(key, "unknown key")
    named = doc.get("command")
    if named is not None and command is not None and named != command:
        raise ValidationError("command", f"config says {named!r} but {command!r} was requested")
    command = command or named
    if command is None:
        raise ValidationError("command", "no command given")
    if command not in COMMANDS:
        raise ValidationError("command", f"must be one of {', '.join(COMMANDS)}")

    scenario, kappa = _scenario(doc.get("scenario", {}), command)
    grid = _grid(doc.get("grid", {}), command)
    output = doc.get("output", {})
    _check_keys("output", output, _OUTPUT_KEYS)
    path = output.get("path")
    if path is not None and (not isinstance(path, str) or not path):
        raise ValidationError("output.path", "must be a non-empty string")

    if command == "force-scan":
        grid.setdefault("kR_list", (scenario.kR,))
        if "alpha_list" not in grid:
            raise ValidationError("alpha_list", "force-scan needs alpha_list")
    if command in ("figure3b", "infer-kappa"):
        grid.setdefault("phi", (math.pi, 1.3 * math.pi))
    if command == "figure3a":
        grid.setdefault("r_min", 1.0)
        if grid["r_min"] < 1.0:
            raise ValidationError("r_min", "hard-wall wavefunction needs r >= R (r_min >= 1)")
    if command == "periodicity" and "alpha" not in grid:
        grid["alpha"] = scenario.alpha()
    if command in ("converge", "periodicity", "figure2") and not scenario.finite:
        raise ValidationError("V0", f"{command} needs a finite barrier")
    if command == "infer-kappa" and "slopes" not in grid and "phi" not in grid:
        raise ValidationError("slopes", "infer-kappa needs slopes or phi to synthesise them")

    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return RunConfig(command=command, scenario=scenario, kappa=kappa, output=path,
                     digest=digest, **grid)


__all__ = ["COMMANDS", "RunConfig", "parse_config"]
