"""``ab-forces``: figure data, force tables and checks as CSV.

Usage::

    ab-forces <command> --config run.toml [--out result.csv]

Every CSV starts with ``#`` provenance comments (config hash, library
versions, largest partial-wave truncation used) followed by one or more
tables, each with its own header row and separated by a blank line.
Floats are written with 17 significant digits, so identical configs give
byte-identical files.  ``AB_FORCES_THREADS`` caps the worker threads used
for independent ladder and grid points (0 or unset: one per CPU).
"""

from __future__ import annotations

import argparse
import io
import math
import os
import sys
import tempfile
from dataclasses import replace
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy

from . import __version__
from ._series import record_truncations
from .analysis import convergence_study, flux_periodicity_check, infer_kappa
from .config import COMMANDS, RunConfig, parse_config
from .errors import ABForcesError, InputError, ParseError, ValidationError
from .finite import finite_psi, finite_slope, finite_slope_profile
from .forces import QuadratureSpec, force_asymptotic, force_finite, force_ideal
from .ideal import ideal_psi, ideal_slope, ideal_slope_profile
from .scenario import CylinderScenario

_HELP = {
    "figure2": "|psi| across the boundary for a ladder of barrier heights, plus slopes",
    "figure3a": "hard-wall |psi| near the boundary for several kappa",
    "figure3b": "hard-wall boundary slope against kappa at fixed angles",
    "slope-profile": "boundary slope on an angle grid",
    "force": "force for one scenario next to the small-kR law",
    "force-scan": "hard-wall forces over a kR x alpha grid",
    "converge": "V0 -> inf extrapolation of a slope or force component",
    "infer-kappa": "kappa from boundary slopes at two or more angles",
    "periodicity": "slope differences between fluxes alpha + m",
}

def _workers() -> int:
    raw = os.environ.get("AB_FORCES_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"AB_FORCES_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise InputError("AB_FORCES_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def _map(fn, items):
    """Ordered map over independent work items."""
    items = list(items)
    workers = min(_workers(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _radii(cfg: RunConfig) -> np.ndarray:
    return np.linspace(cfg.r_min, cfg.r_max, cfg.r_points)


def _ladder(cfg: RunConfig) -> list:
    k2 = cfg.scenario.k ** 2
    return [v * k2 for v in cfg.ladder]


def _figure2(cfg: RunConfig) -> list:
    base = cfg.scenario
    phi = cfg.phi[0]
    radii = _radii(cfg)
    kappa = base.alpha()

    def column(V0):
        sc = replace(base, V0=V0)
        curve = [abs(finite_psi(sc, x * base.R, phi)) for x in radii]
        return curve, finite_slope(sc, phi)

    results = _map(column, _ladder(cfg))
    rows = []
    for (curve, _), v in zip(results, cfg.ladder):
        rows += [(v, x, p) for x, p in zip(radii, curve)]
    for x in radii:
        inside = x < 1.0
        p = 0.0 if inside else abs(ideal_psi(base, kappa, x * base.R, phi))
        rows.append((math.inf, x, p))
    slopes = [(v, s) for (_, s), v in zip(results, cfg.ladder)]
    slopes.append((math.inf, ideal_slope(base, kappa, phi)))
    return [(("V0_over_k2", "r_over_R", "abs_psi"), rows),
            (("V0_over_k2", "slope"), slopes)]


def _kappas(cfg: RunConfig) -> tuple:
    return cfg.kappa_list or (cfg.kappa,)


def _figure3a(cfg: RunConfig) -> list:
    sc = cfg.scenario
    phi = cfg.phi[0]
    radii = _radii(cfg)
    rows = []
    for kap in _kappas(cfg):
        rows += [(kap, x, abs(ideal_psi(sc, kap, x * sc.R, phi))) for x in radii]
    return [(("kappa", "r_over_R", "abs_psi"), rows)]


def _figure3b(cfg: RunConfig) -> list:
    sc = cfg.scenario
    kappas = cfg.kappa_list or tuple(np.arange(100) / 100.0)
    phis = np.asarray(cfg.phi)
    values = _map(lambda kap: ideal_slope(sc, kap, phis), kappas)
    rows = [(kap, phi, s) for kap, vals in zip(kappas, values) for phi, s in zip(cfg.phi, vals)]
    return [(("kappa", "phi", "slope"), rows)]


def _slope_profile(cfg: RunConfig) -> list:
    angles = cfg.angle_grid()
    if cfg.ideal:
        prof = ideal_slope_profile(cfg.scenario, cfg.kappa, angles)
    else:
        prof = finite_slope_profile(cfg.scenario, angles)
    return [(("phi", "slope"), list(zip(prof.angles, prof.slopes)))]


_FORCE_HEADER = ("kR", "alpha_or_kappa", "f1", "f2", "f1_asym", "f2_asym")


def _force_row(sc: CylinderScenario, kappa, quad) -> tuple:
    if kappa is None:
        f, a = force_finite(sc, quad), sc.alpha()
    else:
        f, a = force_ideal(sc, kappa, quad), kappa
    g = force_asymptotic(a)
    return (sc.kR, a, f.f1, f.f2, g.f1, g.f2)


def _force(cfg: RunConfig) -> list:
    quad = QuadratureSpec(cfg.quadrature)
    return [(_FORCE_HEADER, [_force_row(cfg.scenario, cfg.kappa, quad)])]


def _force_scan(cfg: RunConfig) -> list:
    quad = QuadratureSpec(cfg.quadrature)
    base = cfg.scenario
    jobs = [(kR, a) for kR in cfg.kR_list for a in cfg.alpha_list]
    rows = _map(lambda job: _force_row(CylinderScenario.from_kR(job[0], R=base.R, rho=base.rho),
                                       job[1], quad), jobs)
    return [(_FORCE_HEADER, rows)]


def _converge(cfg: RunConfig) -> list:
    rep = convergence_study(cfg.scenario, _ladder(cfg), observable=cfg.observable,
                            phi=cfg.phi[0], component=cfg.component,
                            quad=QuadratureSpec(cfg.quadrature))
    k2 = cfg.scenario.k ** 2
    ladder = [(v / k2, x) for v, x in rep.ladder]
    summary = [(rep.extrapolated_limit, rep.fitted_order, rep.reference, rep.relative_error)]
    return [(("V0_over_k2", "value"), ladder),
            (("extrapolated_limit", "fitted_order", "reference", "relative_error"), summary)]


def _infer_kappa(cfg: RunConfig) -> list:
    sc = cfg.scenario
    if cfg.slopes:
        samples = list(cfg.slopes)
    elif cfg.ideal:
        samples = [(p, ideal_slope(sc, cfg.kappa, p)) for p in cfg.phi]
    else:
        samples = [(p, finite_slope(sc, p)) for p in cfg.phi]
    est = infer_kappa(sc, samples)
    return [(("phi", "slope"), samples),
            (("kappa_hat", "residual", "n_angles"), [(est.kappa_hat, est.residual, len(samples))])]


def _periodicity(cfg: RunConfig) -> list:
    sc = cfg.scenario
    defect = flux_periodicity_check(sc, cfg.alpha, cfg.offsets)
    offsets = ";".join(str(m) for m in cfg.offsets)
    return [(("alpha", "offsets", "V0_over_k2", "max_defect"),
             [(cfg.alpha, offsets, sc.V0 / sc.k ** 2, defect)])]


_RUNNERS = {
    "figure2": _figure2,
    "figure3a": _figure3a,
    "figure3b": _figure3b,
    "slope-profile": _slope_profile,
    "force": _force,
    "force-scan": _force_scan,
    "converge": _converge,
    "infer-kappa": _infer_kappa,
    "periodicity": _periodicity,
}


def render(cfg: RunConfig) -> str:
    """Run ``cfg`` and return the CSV text."""
    with record_truncations() as found:
        tables = _RUNNERS[cfg.command](cfg)
    n_max = max((t.n_max for t in found), default=None)
    out = io.StringIO()
    out.write(f"# ab-forces {cfg.command}\n")
    out.write(f"# config_sha256: {cfg.digest}\n")
    out.write(f"# versions: abforces={__version__} numpy={np.__version__} scipy={scipy.__version__}\n")
    out.write(f"# n_max: {n_max if n_max is not None else 'none'}\n")
    for i, (header, rows) in enumerate(tables):
        if i:
            out.write("\n")
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(_fmt(v) for v in row) + "\n")
    return out.getvalue()


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".ab-forces-", suffix=".csv", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def execute(config: RunConfig, out: str | None = None) -> str | None:
    """Run ``config`` and write its CSV.

    The file is written to ``out``, else to the config's output path; with
    neither, the CSV text is returned instead.  Files appear atomically, so
    a failed run leaves nothing behind.
    """
    text = render(config)
    path = out or config.output
    if path is None:
        return text
    _write_atomic(path, text)
    return None


def _parser() -> argparse.ArgumentParser:
    lines = [f"  {name:<14} {_HELP[name]}" for name in COMMANDS]
    parser = argparse.ArgumentParser(
        prog="ab-forces",
        description="Aharonov-Bohm forces on a shielded flux cylinder.",
        epilog="commands:\n" + "\n".join(lines)
        + "\n\nAB_FORCES_THREADS caps worker threads (0 = one per CPU).",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("command", choices=COMMANDS, metavar="command",
                        help="one of the commands listed below")
    parser.add_argument("--config", required=True, help="TOML run configuration")
    parser.add_argument("--out", help="CSV output path (default: [output] path, else stdout)")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
        config = parse_config(text, args.command)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"ab-forces: error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except (ParseError, ValidationError) as exc:
        print(f"ab-forces: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    try:
        text = execute(config, args.out)
    except (ABForcesError, ValueError, OSError) as exc:
        print(f"ab-forces: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if text is not None:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
