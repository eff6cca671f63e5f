"""Command-line front end.

Every command writes one table, as CSV (default) or JSON, to ``--output`` or
stdout. Options may also come from a flat ``key=value`` file given with
``--config``; flags on the command line take precedence.

Exit codes: 0 on success, 2 on invalid parameters, 3 on numerical failure.
Errors print a single ``squeezelab-error <tag>: <message>`` line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .config import DEFAULT_TOLERANCES, Tolerances
from .energy import EnergyDensityConfig, t00_profile
from .errors import NumericalError, ParameterError, SqueezeLabError
from .fock import photon_number_distribution
from .optimizer import OptimizationProblem, minimize_eigen, minimize_simplex, reproduce_table1
from .squeezing import (
    hillery_report,
    hong_mandel_moment,
    principal_report,
    two_mode_hillery_report,
    two_mode_hong_mandel_moment,
    two_mode_principal_report,
    two_mode_variance,
)
from .states import (
    MAX_ALPHA,
    MAX_ALPHA_COHERENT,
    MAX_M,
    MAX_R,
    PacsParam,
    SqueezeParam,
    SuperpositionSpec,
    cat,
    coherent,
    first_kind_superposition,
    generalized_superposition,
    pacs,
    squeezed_vacuum,
    two_mode_first_kind,
    two_mode_squeezed_vacuum,
)
from .sweep import negativity_sweep

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3

SINGLE_FAMILIES = (
    "coherent",
    "svs",
    "pacs",
    "even-cat",
    "odd-cat",
    "yurke-stoler",
    "first-kind-svs",
    "first-kind-pacs",
    "generalized-svs",
)
TWO_MODE_FAMILIES = ("tmsv", "first-kind-tmsv")
ENERGY_FAMILIES = SINGLE_FAMILIES


class ValidationError(ParameterError):
    tag = "invalid-parameter"


# -- output -------------------------------------------------------------------


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (tuple, list)):
        return ";".join(_fmt(v) for v in value)
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        v = float(format(float(value), ".12g"))
        return v if math.isfinite(v) else str(v)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (tuple, list)):
        return [_json_value(v) for v in value]
    return value


def render(rows: list[dict], columns: list[str], fmt: str, meta: dict) -> str:
    """Serialize a table; the same inputs always give the same bytes."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])
        return buf.getvalue()
    payload = {
        "meta": {k: _json_value(v) for k, v in meta.items()},
        "data": [{c: _json_value(row[c]) for c in columns} for row in rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def emit(rows: list[dict], columns: list[str], fmt: str, meta: dict, path: str | None) -> None:
    text = render(rows, columns, fmt, meta)
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    target = Path(path)
    try:
        # write beside the target, then rename, so readers never see a partial file
        fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
        try:
            os.chmod(tmp, 0o644)
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            os.replace(tmp, target)
        except OSError:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoError(str(exc)) from exc


class IoError(SqueezeLabError):
    tag = "io-error"


# -- parsing ------------------------------------------------------------------


def _complex(text: str) -> complex:
    try:
        return complex(str(text).replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(x) for x in str(text).replace(";", ",").split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from None


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in str(text).replace(";", ",").split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value file; command-line flags override it")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--output", "-o", default=None, help="output path (default: stdout)")
    common.add_argument("--cutoff", type=int, default=None, help="Fock cutoff override")
    common.add_argument("--tail-tol", type=float, default=None)
    common.add_argument("--norm-tol", type=float, default=None)
    common.add_argument("--moment-tol", type=float, default=None)
    common.add_argument("--seed", type=int, default=None)

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family", default=None)
    fam.add_argument("--r", type=float, default=None, help="squeezing parameter")
    fam.add_argument("--theta", type=float, default=None, help="squeeze phase")
    fam.add_argument("--alpha", type=_complex, default=None, help="coherent amplitude, e.g. 1.5 or 1+0.5j")
    fam.add_argument("--m", type=int, default=None, help="added photons (PACS)")
    fam.add_argument("--l", type=int, default=None, help="number of superposed states")
    fam.add_argument("--r-list", type=_float_list, default=None)
    fam.add_argument("--weights", type=_float_list, default=None)

    parser = argparse.ArgumentParser(prog="squeezelab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"squeezelab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("state", parents=[common, fam], help="photon-number amplitudes of a state")
    sub.add_parser("variance", parents=[common, fam], help="quadrature variances")
    p = sub.add_parser("higher-order", parents=[common, fam], help="Hong-Mandel and Hillery diagnostics")
    p.add_argument("--orders", type=_int_list, default=None, help="even orders, default 4,6")
    p.add_argument("--phi", type=float, default=None, help="quadrature angle")
    p = sub.add_parser("energy", parents=[common, fam], help="energy density over the spacetime phase")
    p.add_argument("--grid", type=int, default=None, help="number of phase points in [0, 2pi)")
    p.add_argument("--k00", type=float, default=None)
    p = sub.add_parser("optimize", parents=[common], help="optimal weights for fixed squeezing parameters")
    p.add_argument("--r-list", type=_float_list, default=None)
    p.add_argument("--method", choices=("simplex", "eigen", "both"), default=None)
    p.add_argument("--restarts", type=int, default=None)
    p = sub.add_parser("table1", parents=[common], help="reference-table reproduction")
    p.add_argument("--restarts", type=int, default=None)
    sub.add_parser("report", parents=[common], help="squeezing versus negative energy density sweep")
    return parser


DEFAULTS = {
    "format": "csv",
    "theta": 0.0,
    "m": 0,
    "l": 1,
    "orders": (4, 6),
    "phi": 0.0,
    "grid": 64,
    "k00": 1.0,
    "method": "both",
    "restarts": 32,
    "seed": 0,
}


def read_config_file(path: str) -> dict:
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config file: {exc}") from None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _merge_config(parser: argparse.ArgumentParser, args: argparse.Namespace) -> argparse.Namespace:
    sub = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in sub._actions}
    if args.config:
        for key, raw in read_config_file(args.config).items():
            if key not in actions or key in ("config", "help"):
                raise ValidationError(f"unknown config key {key!r} for command {args.command}")
            if getattr(args, key) is not None:
                continue
            action = actions[key]
            if action.choices is not None and raw not in action.choices:
                raise ValidationError(f"config key {key!r} must be one of {list(action.choices)}")
            try:
                value = action.type(raw) if action.type else raw
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise ValidationError(f"config key {key!r}: {exc}") from None
            setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    return args


# -- validation ---------------------------------------------------------------


def _tolerances(args) -> Tolerances:
    overrides = {}
    for name in ("tail_tol", "norm_tol", "moment_tol"):
        value = getattr(args, name)
        if value is not None:
            if not (value > 0 and math.isfinite(value)):
                raise ValidationError(f"--{name.replace('_', '-')} must be positive")
            overrides[name] = value
    return Tolerances(**{**DEFAULT_TOLERANCES.__dict__, **overrides})


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise ValidationError(f"--{name.replace('_', '-')} is required for family {args.family}")


def _state_factory(args, tol: Tolerances) -> tuple[Callable, bool]:
    """Validate family parameters and return ``(build, is_two_mode)`` without computing."""
    family = args.family
    if family is None:
        raise ValidationError("--family is required")
    if args.cutoff is not None and args.cutoff < 0:
        raise ValidationError("--cutoff must be nonnegative")
    kw = {"cutoff": args.cutoff, "tol": tol}

    def squeeze():
        _require(args, "r")
        if not 0 <= args.r <= MAX_R:
            raise ValidationError(f"--r must lie in [0, {MAX_R}]")
        return SqueezeParam(args.r, args.theta)

    def alpha(limit=MAX_ALPHA):
        _require(args, "alpha")
        if not abs(args.alpha) <= limit:
            raise ValidationError(f"|alpha| must not exceed {limit}")
        return args.alpha

    def order_l():
        if args.l < 1:
            raise ValidationError("--l must be a positive integer")
        return args.l

    def pacs_param():
        a = alpha()
        if not 0 <= args.m <= MAX_M:
            raise ValidationError(f"--m must lie in [0, {MAX_M}]")
        return PacsParam(a, args.m)

    if family == "coherent":
        a = alpha(MAX_ALPHA_COHERENT)
        return (lambda: coherent(a, **kw)), False
    if family == "svs":
        p = squeeze()
        return (lambda: squeezed_vacuum(p, **kw)), False
    if family == "pacs":
        p = pacs_param()
        return (lambda: pacs(p, **kw)), False
    if family in ("even-cat", "odd-cat", "yurke-stoler"):
        a = alpha()
        kind = {"even-cat": "even", "odd-cat": "odd", "yurke-stoler": "yurke_stoler"}[family]
        return (lambda: cat(a, kind, **kw)), False
    if family == "first-kind-svs":
        p, l = squeeze(), order_l()
        return (lambda: first_kind_superposition(p, l, **kw)), False
    if family == "first-kind-pacs":
        p, l = pacs_param(), order_l()
        return (lambda: first_kind_superposition(p, l, **kw)), False
    if family == "generalized-svs":
        _require(args, "r_list", "weights")
        if any(not 0 <= r <= MAX_R for r in args.r_list):
            raise ValidationError(f"--r-list entries must lie in [0, {MAX_R}]")
        spec = SuperpositionSpec.real_squeezed_vacua(args.r_list, args.weights)
        return (lambda: generalized_superposition(spec, **kw)), False
    if family == "tmsv":
        p = squeeze()
        return (lambda: two_mode_squeezed_vacuum(p, **kw)), True
    if family == "first-kind-tmsv":
        p, l = squeeze(), order_l()
        return (lambda: two_mode_first_kind(p, l, **kw)), True
    raise ValidationError(f"unknown family {family!r}; choose from {', '.join(SINGLE_FAMILIES + TWO_MODE_FAMILIES)}")


def _meta(args, **extra) -> dict:
    skip = {"config", "output", "format", "command"}
    params = {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}
    params = {k: (str(v) if isinstance(v, complex) else v) for k, v in params.items()}
    meta = {"command": args.command, "tool": "squeezelab", "version": __version__, "seed": args.seed}
    meta["parameters"] = {k: _json_value(v) for k, v in params.items()}
    meta.update(extra)
    return meta


# -- commands -----------------------------------------------------------------


def _cmd_state(args, tol):
    build, two_mode = _state_factory(args, tol)
    state = build()
    if two_mode:
        amps = state.amplitudes
        rows = [
            {"n_a": i, "n_b": j, "probability": abs(amps[i, j]) ** 2, "re": amps[i, j].real, "im": amps[i, j].imag}
            for i, j in zip(*np.nonzero(amps))
        ]
        return rows, ["n_a", "n_b", "probability", "re", "im"]
    probs = photon_number_distribution(state)
    rows = [
        {"n": n, "probability": probs[n], "re": c.real, "im": c.imag} for n, c in enumerate(state.amplitudes)
    ]
    return rows, ["n", "probability", "re", "im"]


def _cmd_variance(args, tol):
    build, two_mode = _state_factory(args, tol)
    state = build()
    if two_mode:
        rep = two_mode_principal_report(state, tol)
        row = {
            "family": args.family,
            "var_x1": two_mode_variance(state, "X1", tol),
            "var_x2": two_mode_variance(state, "X2", tol),
            "principal_variance": rep.principal_variance,
            "principal_angle": rep.principal_angle,
            "squeezed": rep.squeezed,
        }
        return [row], list(row)
    rep = principal_report(state, tol)
    row = {
        "family": args.family,
        "var_x": rep.var_x,
        "var_p": rep.var_p,
        "principal_variance": rep.principal_variance,
        "principal_angle": rep.principal_angle,
        "squeezed": rep.squeezed,
    }
    return [row], list(row)


def _cmd_higher_order(args, tol):
    for order in args.orders:
        if order % 2 or not 2 <= order <= 8:
            raise ValidationError("--orders entries must be even and between 2 and 8")
    build, two_mode = _state_factory(args, tol)
    state = build()
    hm = two_mode_hong_mandel_moment if two_mode else hong_mandel_moment
    hil = two_mode_hillery_report if two_mode else hillery_report
    rows = []
    for order in args.orders:
        rep = hm(state, order // 2, args.phi, tol)
        rows.append({"kind": "hong-mandel", "order": order, "phi": args.phi, "value": rep.moment,
                     "bound": rep.vacuum_benchmark, "squeezed": rep.squeezed})
    h = hil(state, tol)
    for name, value in (("hillery-y1", h.var_y1), ("hillery-y2", h.var_y2)):
        rows.append({"kind": name, "order": 2, "phi": 0.0, "value": value, "bound": h.bound,
                     "squeezed": value < h.bound - tol.decision_slack})
    return rows, ["kind", "order", "phi", "value", "bound", "squeezed"]


def _cmd_energy(args, tol):
    if args.grid < 0:
        raise ValidationError("--grid must be nonnegative")
    if not (args.k00 > 0 and math.isfinite(args.k00)):
        raise ValidationError("--k00 must be positive")
    build, two_mode = _state_factory(args, tol)
    if two_mode:
        raise ValidationError("energy density is only defined here for single-mode families")
    cfg = EnergyDensityConfig.uniform(args.grid, args.k00)
    prof = t00_profile(build(), cfg, tol)
    rows = [{"theta": t, "t00": v} for t, v in zip(prof.theta, prof.values)]
    return rows, ["theta", "t00"]


def _cmd_optimize(args, tol):
    if args.r_list is None:
        raise ValidationError("--r-list is required")
    problem = OptimizationProblem(args.r_list, restarts=args.restarts, seed=args.seed)
    methods = {"simplex": [minimize_simplex], "eigen": [minimize_eigen], "both": [minimize_eigen, minimize_simplex]}
    rows = []
    for method in methods[args.method]:
        res = method(problem, tol)
        row = {"method": res.method, "variance": res.variance, "converged": res.converged, "iterations": res.iterations}
        row.update({f"w{i + 1}": w for i, w in enumerate(res.weights)})
        rows.append(row)
    columns = ["method", "variance", "converged", "iterations"] + [f"w{i + 1}" for i in range(problem.size)]
    return rows, columns


def _cmd_table1(args, tol):
    if args.restarts < 1:
        raise ValidationError("--restarts must be positive")
    rows = reproduce_table1(seed=args.seed, restarts=args.restarts, tol=tol)
    columns = [
        "row", "l", "r_list", "printed_variance", "printed_weights", "variance_at_printed_weights",
        "printed_weights_pass", "eigen_variance", "eigen_weights", "simplex_variance",
        "simplex_weights", "simplex_converged", "pass",
    ]
    return rows, columns


def _cmd_report(args, tol):
    rows = negativity_sweep(tol)
    columns = ["family", "params", "zero_mean", "principal_variance", "squeezed", "min_t00",
               "ever_negative", "consistent", "asserted"]
    return rows, columns


COMMANDS = {
    "state": _cmd_state,
    "variance": _cmd_variance,
    "higher-order": _cmd_higher_order,
    "energy": _cmd_energy,
    "optimize": _cmd_optimize,
    "table1": _cmd_table1,
    "report": _cmd_report,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge_config(parser, args)
        if args.seed < 0:
            raise ValidationError("--seed must be an unsigned integer")
        tol = _tolerances(args)
        rows, columns = COMMANDS[args.command](args, tol)
        emit(rows, columns, args.format, _meta(args), args.output)
    except ParameterError as exc:
        print(f"squeezelab-error {exc.tag}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalError, IoError) as exc:
        print(f"squeezelab-error {exc.tag}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main() -> None:
    sys.exit(run())
