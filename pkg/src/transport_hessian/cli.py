"""Command-line front end: load densities, run one computation, write CSV."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO

import numpy as np
from pydantic import ValidationError

from .config import Command, InputFormat, RunConfig, TransportSettings, load_config_file
from .density import GridDensity, build_density, from_samples
from .distance import (
    dist_h_map,
    dist_h_quantile,
    dist_hellinger,
    dist_wasserstein,
    dist_wasserstein_map,
    distance_matrix,
    geodesic,
)
from .entropy import f_entropy_value, h_eval, h_numeric
from .errors import (
    ConfigError,
    InputFileNotFound,
    OutputWriteError,
    ParseError,
    TransportHessianError,
)
from .hessian import cosine_perturbation, hessian_form, taylor_residual, wasserstein_form, wasserstein_taylor_residual
from .structured_logging import configure_logging, log_json
from .telemetry import get_tracer, setup_telemetry

logger = logging.getLogger(__name__)

GRID_SPACING_TOLERANCE = 1e-9
TABLE_POINTS = 50

Row = Sequence[Any]


def _read_rows(path: Path, header: List[str]) -> List[List[str]]:
    try:
        with path.open("r", encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    except FileNotFoundError as exc:
        raise InputFileNotFound(f"input file not found: {path}") from exc
    except (OSError, UnicodeDecodeError, csv.Error) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    if not rows or [cell.strip() for cell in rows[0]] != header:
        raise ParseError(f"{path}: expected header {','.join(header)}")
    body = rows[1:]
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise ParseError(f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}")
    return body


def _floats(path: Path, column: List[str]) -> np.ndarray:
    try:
        return np.array([float(cell) for cell in column], dtype=float)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _resample(p: GridDensity, n: int) -> GridDensity:
    if p.n == n:
        return p
    unit = np.arange(n + 1, dtype=float) / n
    return build_density(p.evaluate_unit(unit), p.support_lo, p.support_hi, normalize=True)


def load_input(path: str | Path, fmt: InputFormat | str = InputFormat.grid, *, normalize: bool = False) -> GridDensity:
    """Read a grid CSV (`x,p`) or samples CSV (`sample`) into a density."""
    path = Path(path)
    fmt = InputFormat(fmt)
    if fmt is InputFormat.samples:
        rows = _read_rows(path, ["sample"])
        return from_samples(_floats(path, [row[0] for row in rows]))

    rows = _read_rows(path, ["x", "p"])
    x = _floats(path, [row[0] for row in rows])
    values = _floats(path, [row[1] for row in rows])
    if x.size < 2 or not np.all(np.isfinite(x)):
        raise ParseError(f"{path}: grid needs at least two finite x values")
    lo, hi = float(x[0]), float(x[-1])
    if not hi > lo:
        raise ParseError(f"{path}: x column must increase")
    expected = lo + (hi - lo) * np.arange(x.size, dtype=float) / (x.size - 1)
    if np.max(np.abs(x - expected)) > GRID_SPACING_TOLERANCE * (hi - lo):
        raise ParseError(f"{path}: x column is not a uniform increasing grid")
    return build_density(values, lo, hi, normalize=normalize)


def _format_cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Row]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([_format_cell(cell) for cell in row])
    return buffer.getvalue()


def write_output(
    rows: Iterable[Row],
    path: Optional[str | Path],
    *,
    header: Sequence[str],
    stream: Optional[TextIO] = None,
) -> None:
    """Write rows as CSV to `path`, or to `stream` (stdout) when no path is given."""
    text = render_csv(header, rows)
    if path is None:
        (stream or sys.stdout).write(text)
        return
    target = Path(path)
    try:
        with target.open("w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    except OSError as exc:
        raise OutputWriteError(f"cannot write {target}: {exc}") from exc


# commands


def _densities(config: RunConfig) -> List[GridDensity]:
    loaded = []
    for spec in config.inputs:
        density = load_input(spec.path, spec.format, normalize=config.normalize)
        loaded.append(_resample(density, config.grid))
        log_json(logging.DEBUG, "input_loaded", path=str(spec.path), format=spec.format.value, nodes=density.n + 1)
    return loaded


def _run_dist(config: RunConfig, out: TextIO) -> None:
    e = config.entropy_model()
    p, q = _densities(config)
    via_quantile = dist_h_quantile(e, p, q, config.quantiles)
    via_map = dist_h_map(e, p, q)
    rows = [
        ("dist_h_quantile", via_quantile),
        ("dist_h_map", via_map),
        ("formulation_gap", abs(via_quantile - via_map)),
        ("dist_wasserstein", dist_wasserstein(p, q, config.quantiles)),
        ("dist_wasserstein_map", dist_wasserstein_map(p, q)),
        ("dist_hellinger", dist_hellinger(p, q)),
    ]
    write_output(rows, config.output, header=("metric", "value"), stream=out)
    if config.output is not None:
        for name, value in rows:
            out.write(f"{name} {_format_cell(value)}\n")


def _run_matrix(config: RunConfig, out: TextIO) -> None:
    e = config.entropy_model()
    densities = _densities(config)
    matrix = distance_matrix(e, densities, config.quantiles, max_workers=config.workers)
    names = [spec.path.stem for spec in config.inputs]
    rows = [[name, *matrix[i]] for i, name in enumerate(names)]
    write_output(rows, config.output, header=("name", *names), stream=out)


def _run_geodesic(config: RunConfig, out: TextIO) -> None:
    e = config.entropy_model()
    p, q = _densities(config)
    t_grid = np.linspace(0.0, 1.0, config.steps)
    path = geodesic(e, p, q, t_grid, config.quantiles)
    rows = (
        (float(t), float(y), float(value), float(derivative))
        for t, qf in zip(path.t_grid, path.quantiles)
        for y, value, derivative in zip(qf.y_grid, qf.values, qf.derivative)
    )
    write_output(rows, config.output, header=("t", "y", "quantile", "quantile_derivative"), stream=out)


def _run_hessian_check(config: RunConfig, out: TextIO) -> None:
    e = config.entropy_model()
    (p,) = _densities(config)
    s = cosine_perturbation(p)
    residuals = taylor_residual(e, p, s, config.eps, m=config.quantiles)
    transport = wasserstein_taylor_residual(p, s, config.eps, m=config.quantiles)
    form = hessian_form(e, p, s)
    log_json(
        logging.INFO,
        "hessian_check",
        entropy=e.label,
        hessian_form=form,
        wasserstein_form=wasserstein_form(p, s),
        residuals=residuals,
        wasserstein_residuals=transport,
    )
    write_output(residuals, config.output, header=("eps", "residual"), stream=out)
    if config.output is not None:
        out.write(f"hessian_form {_format_cell(form)}\n")


def _run_entropy_table(config: RunConfig, out: TextIO) -> None:
    e = config.entropy_model()
    ys = np.logspace(-1.0, 1.0, TABLE_POINTS)
    rows = []
    for y in ys:
        closed = h_eval(e, float(y))
        numeric = h_numeric(e.f_second, float(y))
        rows.append((float(y), closed, numeric, abs(closed - numeric)))
    write_output(rows, config.output, header=("y", "h_closed", "h_numeric", "abs_diff"), stream=out)
    for spec, density in zip(config.inputs, _densities(config)):
        out.write(f"entropy {spec.path.stem} {_format_cell(f_entropy_value(e, density))}\n")


_HANDLERS = {
    Command.dist: _run_dist,
    Command.matrix: _run_matrix,
    Command.geodesic: _run_geodesic,
    Command.hessian_check: _run_hessian_check,
    Command.entropy_table: _run_entropy_table,
}


def run(config: RunConfig, *, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    """Execute one command; returns the process exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    tracer = get_tracer(__name__)
    with tracer.start_as_current_span("tihd.run") as span:
        span.set_attribute("tihd.command", config.command.value)
        span.set_attribute("tihd.entropy", config.entropy)
        span.set_attribute("tihd.quantiles", config.quantiles)
        span.set_attribute("tihd.grid", config.grid)
        try:
            _HANDLERS[config.command](config, out)
        except TransportHessianError as exc:
            span.set_attribute("tihd.error", type(exc).__name__)
            log_json(logging.WARNING, "command_failed", command=config.command.value, error=type(exc).__name__)
            err.write(f"tihd: {type(exc).__name__}: {exc}\n")
            return exc.exit_code
    log_json(logging.INFO, "command_completed", command=config.command.value)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tihd",
        description="Transport information Hessian distances between 1-D densities.",
    )
    parser.add_argument("command", choices=[c.value for c in Command])
    parser.add_argument("inputs", nargs="*", help="density CSV files")
    parser.add_argument("--config", default=None, help="YAML run configuration; flags override it")
    parser.add_argument("--entropy", default=None, help="boltzmann|quadratic|cross|reciprocal|gamma[:γ]")
    parser.add_argument("--gamma", type=float, default=None)
    parser.add_argument("--grid", type=int, default=None, metavar="N")
    parser.add_argument("--quantiles", type=int, default=None, metavar="M")
    parser.add_argument("--steps", type=int, default=None, metavar="K")
    parser.add_argument("--eps", type=float, nargs="+", default=None)
    parser.add_argument("--format", choices=[f.value for f in InputFormat], default=None)
    parser.add_argument("--normalize", action="store_true", default=None)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--out", default=None, metavar="PATH")
    parser.add_argument("--trace", action="store_true", default=None, help="export spans to stderr")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge the optional config file with command-line flags (flags win)."""
    data: Dict[str, Any] = load_config_file(args.config) if args.config else {}
    data["command"] = args.command
    flags = {
        "entropy": args.entropy,
        "gamma": args.gamma,
        "grid": args.grid,
        "quantiles": args.quantiles,
        "steps": args.steps,
        "eps": tuple(args.eps) if args.eps else None,
        "normalize": args.normalize,
        "workers": args.workers,
        "output": args.out,
        "trace": args.trace,
    }
    data.update({key: value for key, value in flags.items() if value is not None})
    if args.inputs:
        data["inputs"] = [{"path": item} for item in args.inputs]
    if args.format:
        data["inputs"] = [{**dict(item), "format": args.format} for item in data.get("inputs", [])]
    try:
        return RunConfig(**data)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first.get("loc", ())) or "config"
        raise ConfigError(f"{where}: {first.get('msg')}") from exc


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = TransportSettings.from_env()
    configure_logging("cli", settings.log_level)
    try:
        config = resolve_config(args)
    except TransportHessianError as exc:
        sys.stderr.write(f"tihd: {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    setup_telemetry(console=config.trace)
    return run(config)


__all__ = [
    "load_input",
    "write_output",
    "render_csv",
    "run",
    "build_parser",
    "resolve_config",
    "main",
]
