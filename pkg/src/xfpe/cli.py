"""Command-line front end emitting plot data and verification reports.

Subcommands: drift, evolve, stationary, verify, mc. Tabular data goes to
CSV (or JSON with --format json); reports are JSON. Every invocation also
writes a run manifest next to its data files; re-running the recorded
argv reproduces the numeric files byte for byte (fields are printed with
round-trip repr precision, LF endings, UTF-8).

Exit codes: 0 success, 1 validation error, 2 numerical threshold failure,
3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, quadrature, sde, spectral
from .xpoly import ModelParams

SCHEMA_VERSION = 1

VERIFY_THRESHOLDS = {
    "orthonormality": 1e-8,
    "eigen_residual": 1e-6,
    "fpe_residual": 1e-4,
    "drift_consistency": 1e-6,
}


class _CliError(Exception):
    """Bad arguments or parameters; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(message)


def _fmt(value) -> str:
    # repr of a python float is the shortest round-trip decimal form
    return repr(float(value))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return obj


def _write_json(path: Path, obj) -> None:
    text = json.dumps(_jsonable(obj), indent=2)
    path.write_bytes((text + "\n").encode("utf-8"))


def _write_table(path: Path, columns: dict, fmt: str) -> None:
    """columns maps header -> 1-d array; all columns share one length."""
    names = list(columns)
    arrays = [np.asarray(columns[k]) for k in names]
    if fmt == "json":
        payload = {"schema": SCHEMA_VERSION, "columns": {}}
        for name, arr in zip(names, arrays):
            if arr.dtype.kind in "iub":
                payload["columns"][name] = [int(v) for v in arr]
            else:
                payload["columns"][name] = [float(v) for v in arr]
        _write_json(path, payload)
        return
    lines = [",".join(names)]
    for row in zip(*arrays):
        cells = [str(int(v)) if isinstance(v, (np.integer, np.bool_)) else _fmt(v)
                 for v in row]
        lines.append(",".join(cells))
    path.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))


def _table_name(stem: str, fmt: str) -> str:
    return f"{stem}.{ 'json' if fmt == 'json' else 'csv' }"


def _parse_ell_list(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok != ""]
    except ValueError:
        raise _CliError(f"--ell expects comma-separated integers, got {text!r}")
    if not values:
        raise _CliError("--ell list is empty")
    return values


def _parse_times(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok != ""]
    except ValueError:
        raise _CliError(f"--times expects comma-separated numbers, got {text!r}")
    if not values:
        raise _CliError("--times list is empty")
    return values


def _build_params(family: str, g: float, h, ell: int) -> ModelParams:
    try:
        return ModelParams(family=family, g=g, h=h, ell=ell)
    except ValueError as exc:
        raise _CliError(str(exc))


def _grid_for(args, params: ModelParams) -> np.ndarray:
    if not params.is_laguerre and args.xmax is not None:
        raise _CliError("--xmax applies to Laguerre families only")
    x_max = spectral.DEFAULT_X_MAX if args.xmax is None else args.xmax
    try:
        return spectral.default_grid(params, points=args.points, x_max=x_max)
    except ValueError as exc:
        raise _CliError(str(exc))


def _params_dict(family, g, h, ells) -> dict:
    return {"family": family, "g": float(g),
            "h": None if h is None else float(h),
            "ell": _jsonable(ells)}


# each cmd_* returns (exit_code, manifest_settings, written_file_names)

def cmd_drift(args, out: Path):
    ells = _parse_ell_list(args.ell)
    models = [_build_params(args.family, args.g, args.h, ell) for ell in ells]
    grid = _grid_for(args, models[0])
    columns = {"x": grid}
    for ell, params in zip(ells, models):
        columns[f"U_l{ell}"] = spectral.drift_potential(params, grid)
        columns[f"D1_l{ell}"] = spectral.drift(params, grid)
    name = _table_name(f"drift_{args.family}", args.format)
    _write_table(out / name, columns, args.format)
    settings = {"params": _params_dict(args.family, args.g, args.h, ells),
                "points": args.points,
                "xmax": None if args.xmax is None else float(args.xmax)}
    return 0, settings, [name]


def cmd_stationary(args, out: Path):
    ells = _parse_ell_list(args.ell)
    models = [_build_params(args.family, args.g, args.h, ell) for ell in ells]
    grid = _grid_for(args, models[0])
    columns = {"x": grid}
    for ell, params in zip(ells, models):
        columns[f"P_l{ell}"] = spectral.stationary_pdf(params, grid)
    name = _table_name(f"stationary_{args.family}", args.format)
    _write_table(out / name, columns, args.format)
    settings = {"params": _params_dict(args.family, args.g, args.h, ells),
                "points": args.points,
                "xmax": None if args.xmax is None else float(args.xmax)}
    return 0, settings, [name]


def cmd_evolve(args, out: Path):
    ells = _parse_ell_list(args.ell)
    times = _parse_times(args.times)
    if any(t <= 0.0 for t in times):
        raise _CliError(f"--times must all be > 0, got {args.times!r}")
    models = [_build_params(args.family, args.g, args.h, ell) for ell in ells]
    grid = _grid_for(args, models[0])
    terms = args.terms if args.terms is not None else spectral.default_terms(models[0])

    files = []
    stat = {ell: spectral.stationary_pdf(params, grid)
            for ell, params in zip(ells, models)}
    summary = []
    for t in times:
        columns = {"x": grid}
        for ell, params in zip(ells, models):
            values, tail = spectral.pdf_delta(params, args.x0, t, grid,
                                              n_terms=terms, return_tail=True)
            columns[f"P_l{ell}"] = values
            columns[f"tail_l{ell}"] = tail.astype(np.int64)
            dist = float(np.max(np.abs(values - stat[ell])) / np.max(stat[ell]))
            summary.append({"ell": ell, "t": float(t),
                            "stationary_distance": dist,
                            "tail_flagged_points": int(np.count_nonzero(tail))})
        name = _table_name(f"evolve_{args.family}_t{_fmt(t)}", args.format)
        _write_table(out / name, columns, args.format)
        files.append(name)

    summary_name = f"evolve_{args.family}_summary.json"
    _write_json(out / summary_name, {"schema": SCHEMA_VERSION,
                                     "x0": float(args.x0), "terms": int(terms),
                                     "rows": summary})
    files.append(summary_name)
    settings = {"params": _params_dict(args.family, args.g, args.h, ells),
                "x0": float(args.x0), "times": [float(t) for t in times],
                "terms": int(terms), "points": args.points,
                "xmax": None if args.xmax is None else float(args.xmax)}
    return 0, settings, files


def _drift_consistency(params: ModelParams, grid: np.ndarray) -> float:
    h = 1e-6
    fd = (spectral.prepotential(params, grid + h)
          - spectral.prepotential(params, grid - h)) / (2.0 * h)
    d1 = spectral.drift(params, grid)
    return float(np.max(np.abs(d1 - 2.0 * fd)) / np.max(np.abs(d1)))


def cmd_verify(args, out: Path):
    if args.n_max > 20:
        raise _CliError(f"--n-max must be <= 20, got {args.n_max}")
    params = _build_params(args.family, args.g, args.h, args.ell)

    gram = quadrature.orthonormality_matrix(params, n_max=args.n_max)
    # test hook: emulates every normalization constant mis-scaled by this factor
    gram = gram * float(args.corrupt_norm) ** 2
    ortho = float(np.max(np.abs(gram - np.eye(args.n_max + 1))))

    eigen = max(spectral.eigen_residual(params, n) for n in range(args.n_max + 1))

    grid = spectral.default_grid(params)
    x0 = float(grid[int(np.argmax(spectral.stationary_pdf(params, grid)))])
    terms = spectral.default_terms(params)
    fpe = max(spectral.fpe_residual(params, x0, t, n_terms=terms) for t in (0.2, 0.5))

    drift_dev = _drift_consistency(params, spectral._residual_grid(params, 401))

    metrics = {}
    failed = []
    for key, value in [("orthonormality", ortho), ("eigen_residual", float(eigen)),
                       ("fpe_residual", float(fpe)), ("drift_consistency", drift_dev)]:
        limit = VERIFY_THRESHOLDS[key]
        ok = bool(value <= limit)
        metrics[key] = {"value": value, "threshold": limit, "pass": ok}
        if not ok:
            failed.append(key)

    report = {"schema": SCHEMA_VERSION,
              "params": _params_dict(args.family, args.g, args.h, args.ell),
              "n_max": int(args.n_max), "fpe_x0": x0, "fpe_times": [0.2, 0.5],
              "terms": int(terms), "metrics": metrics, "pass": not failed}
    name = f"verify_{args.family}.json"
    _write_json(out / name, report)
    if failed:
        print(f"verify failed: {', '.join(failed)}", file=sys.stderr)
    settings = {"params": _params_dict(args.family, args.g, args.h, args.ell),
                "n_max": int(args.n_max)}
    return (2 if failed else 0), settings, [name]


def cmd_mc(args, out: Path):
    params = _build_params(args.family, args.g, args.h, args.ell)
    if not params.is_laguerre and args.xmax is not None:
        raise _CliError("--xmax applies to Laguerre families only")
    try:
        config = sde.SdeConfig(dt=args.dt, n_paths=args.paths,
                               t_samples=[args.t], seed=args.seed)
        samples = sde.simulate(params, args.x0, config)[0]
    except ValueError as exc:
        raise _CliError(str(exc))
    lower, upper = params.domain()
    if params.is_laguerre:
        upper = spectral.DEFAULT_X_MAX if args.xmax is None else float(args.xmax)
    estimate = sde.histogram(samples, np.linspace(lower, upper, args.bins + 1))

    def reference(x):
        return spectral.pdf_delta(params, args.x0, args.t, x)

    l1, max_sigma = sde.compare(estimate, reference)
    ref_avg = sde.bin_average(estimate.bin_edges, reference)

    stem = f"mc_{args.family}_l{args.ell}"
    table = {"bin_left": estimate.bin_edges[:-1], "bin_right": estimate.bin_edges[1:],
             "density": estimate.density, "std_err": estimate.std_err,
             "ref_density": ref_avg}
    table_name = _table_name(stem, args.format)
    _write_table(out / table_name, table, args.format)

    report = {"schema": SCHEMA_VERSION,
              "params": _params_dict(args.family, args.g, args.h, args.ell),
              "x0": float(args.x0), "t": float(args.t),
              "paths": int(args.paths), "dt": float(args.dt),
              "bins": int(args.bins), "seed": int(args.seed),
              "backend": sde.backend_name(),
              "n_samples": estimate.n_samples, "n_escaped": estimate.n_escaped,
              "l1_distance": float(l1), "max_sigma_deviation": float(max_sigma)}
    report_name = f"{stem}_report.json"
    _write_json(out / report_name, report)
    settings = {"params": _params_dict(args.family, args.g, args.h, args.ell),
                "x0": float(args.x0), "t": float(args.t), "paths": int(args.paths),
                "dt": float(args.dt), "bins": int(args.bins),
                "seed": int(args.seed)}
    return 0, settings, [table_name, report_name]


def _add_common(p, ell_list: bool, with_grid: bool = True):
    p.add_argument("--family", required=True, choices=("L1", "L2", "J1", "J2"))
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--h", type=float, default=None)
    if ell_list:
        p.add_argument("--ell", required=True,
                       help="comma-separated deformation degrees, e.g. 0,1,5")
    else:
        p.add_argument("--ell", type=int, required=True)
    if with_grid:
        p.add_argument("--points", type=int, default=spectral.DEFAULT_GRID_POINTS)
        p.add_argument("--xmax", type=float, default=None,
                       help="right edge of the plot window (Laguerre only)")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="xfpe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("drift", help="drift potential and drift coefficient tables")
    _add_common(p, ell_list=True)
    p.set_defaults(func=cmd_drift)

    p = sub.add_parser("stationary", help="stationary density tables")
    _add_common(p, ell_list=True)
    p.set_defaults(func=cmd_stationary)

    p = sub.add_parser("evolve", help="time-dependent density tables")
    _add_common(p, ell_list=True)
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--times", required=True,
                   help="comma-separated observation times, e.g. 0.05,0.2,0.5,2.0")
    p.add_argument("--terms", type=int, default=None,
                   help="series truncation (default 80 Laguerre / 50 Jacobi)")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("verify", help="orthonormality and residual report")
    _add_common(p, ell_list=False, with_grid=False)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--corrupt-norm", type=float, default=1.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mc", help="Monte Carlo histogram vs spectral density")
    _add_common(p, ell_list=False, with_grid=False)
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--bins", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--xmax", type=float, default=None,
                   help="histogram upper edge (Laguerre only)")
    p.set_defaults(func=cmd_mc)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    started = time.perf_counter()
    try:
        args = parser.parse_args(argv)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        code, settings, files = args.func(args, out)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - boundary of the process
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3

    manifest = {"schema": SCHEMA_VERSION,
                "command": args.command,
                "argv": argv,
                "settings": settings,
                "format": getattr(args, "format", "json"),
                "version": __version__,
                "files": files,
                "duration_s": round(time.perf_counter() - started, 6)}
    _write_json(out / f"{args.command}_{args.family}_manifest.json", manifest)
    return code


if __name__ == "__main__":
    sys.exit(main())
