"""Command-line front end: argument parsing, sweep orchestration, figure
presets, CSV and SVG emission.

All dB <-> linear threshold conversion happens here and only here
(T = 10^(dB/10)); the library works in linear units throughout.  CSV output
is deterministic byte-for-byte for a fixed invocation: 9 significant digits,
'.' decimal separator, header row first, newline-terminated rows.
"""
from __future__ import annotations

import argparse
import math
import os
import re
import sys
from typing import Iterable, Sequence

import numpy as np

from .coverage import coverage_sinr, coverage_sir, coverage_snr
from .errors import DensecovError
from .mcsim import SimConfig, estimate_coverage
from .model import NetworkModel, make_model
from .throughput import SweepMetric, potential_throughput, sweep

_OUT_DIR_ENV = "DENSECOV_OUT_DIR"
_DEFAULT_SLACK = 0.005


# ---------------------------------------------------------------------------
# CSV emission


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _resolve_out(path: str) -> str:
    base = os.environ.get(_OUT_DIR_ENV)
    if base and not os.path.isabs(path):
        os.makedirs(base, exist_ok=True)
        return os.path.join(base, path)
    return path


def write_csv(
    path: str,
    header: Sequence[str],
    rows: Iterable[Sequence[object]],
    comment: str | None = None,
) -> str:
    """Write rows as CSV; floats at 9 significant digits, rows newline-terminated."""
    path = _resolve_out(path)
    with open(path, "w", newline="\n") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            cells = [_fmt(c) if isinstance(c, float) else str(c) for c in row]
            fh.write(",".join(cells) + "\n")
    return path


# ---------------------------------------------------------------------------
# SVG emission: a minimal static line chart (axes, ticks, legend, log scales)

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_W, _H = 720, 480
_ML, _MR, _MT, _MB = 72, 24, 40, 56  # plot margins


def _linear_ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((m for m in (1.0, 2.0, 2.5, 5.0, 10.0)), key=lambda m: abs(m * mag - raw)) * mag
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _log_ticks(lo: float, hi: float) -> list[float]:
    ticks = [10.0**e for e in range(math.ceil(math.log10(lo) - 1e-9),
                                    math.floor(math.log10(hi) + 1e-9) + 1)]
    return ticks or [lo, hi]


def render_line_chart(
    path: str,
    series: Sequence[tuple[str, Sequence[float], Sequence[float]]],
    title: str,
    x_label: str,
    y_label: str,
    x_log: bool = False,
    y_log: bool = False,
) -> str:
    """Write a self-contained static SVG line chart (no scripts, no external deps).

    `series` is a list of (label, xs, ys) tuples sharing the chart axes.
    """
    path = _resolve_out(path)
    xs_all = [x for _, xs, ys in series for x, y in zip(xs, ys)
              if (not y_log or y > 0.0) and (not x_log or x > 0.0)]
    ys_all = [y for _, xs, ys in series for x, y in zip(xs, ys)
              if (not y_log or y > 0.0) and (not x_log or x > 0.0)]
    if not xs_all:
        raise ValueError("nothing to plot: all points fall outside the scale domain")
    x0, x1 = min(xs_all), max(xs_all)
    y0, y1 = min(ys_all), max(ys_all)
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if not y_log:  # a little headroom on linear axes
        pad = 0.05 * (y1 - y0)
        y0, y1 = y0 - pad, y1 + pad

    def sx(x: float) -> float:
        u = (math.log10(x) - math.log10(x0)) / (math.log10(x1) - math.log10(x0)) if x_log \
            else (x - x0) / (x1 - x0)
        return _ML + u * (_W - _ML - _MR)

    def sy(y: float) -> float:
        u = (math.log10(y) - math.log10(y0)) / (math.log10(y1) - math.log10(y0)) if y_log \
            else (y - y0) / (y1 - y0)
        return _H - _MB - u * (_H - _MB - _MT)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.1f}" y="24" text-anchor="middle" font-size="15">{title}</text>',
    ]
    xticks = _log_ticks(x0, x1) if x_log else _linear_ticks(x0, x1)
    yticks = _log_ticks(y0, y1) if y_log else _linear_ticks(y0, y1)
    for t in xticks:
        if not x0 <= t <= x1:
            continue
        px = sx(t)
        out.append(f'<line x1="{px:.1f}" y1="{_MT}" x2="{px:.1f}" y2="{_H - _MB}" '
                   'stroke="#dddddd"/>')
        out.append(f'<text x="{px:.1f}" y="{_H - _MB + 18}" text-anchor="middle">'
                   f'{_fmt(t)}</text>')
    for t in yticks:
        if not y0 <= t <= y1:
            continue
        py = sy(t)
        out.append(f'<line x1="{_ML}" y1="{py:.1f}" x2="{_W - _MR}" y2="{py:.1f}" '
                   'stroke="#dddddd"/>')
        out.append(f'<text x="{_ML - 6}" y="{py + 4:.1f}" text-anchor="end">{_fmt(t)}</text>')
    out.append(f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" '
               f'height="{_H - _MB - _MT}" fill="none" stroke="black"/>')
    out.append(f'<text x="{_W / 2:.1f}" y="{_H - 14}" text-anchor="middle">{x_label}</text>')
    out.append(f'<text x="18" y="{_H / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {_H / 2:.1f})">{y_label}</text>')
    for i, (label, xs, ys) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(
            f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys)
            if (not y_log or y > 0.0) and (not x_log or x > 0.0)
        )
        if pts:
            out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                       'stroke-width="1.8"/>')
        ly = _MT + 16 + 18 * i
        out.append(f'<line x1="{_W - _MR - 150}" y1="{ly}" x2="{_W - _MR - 126}" '
                   f'y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{_W - _MR - 120}" y="{ly + 4}">{label}</text>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
    return path


# ---------------------------------------------------------------------------
# Argument plumbing


def _parse_tdb(spec: str) -> list[float]:
    """A single dB value, or an inclusive lo:hi:step dB range."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"dB range must be lo:hi:step, got {spec!r}")
        lo, hi, step = (float(p) for p in parts)
        if step <= 0 or hi < lo:
            raise ValueError(f"degenerate dB range {spec!r}")
        n = int(round((hi - lo) / step))
        vals = [lo + i * step for i in range(n + 1)]
        return [v for v in vals if v <= hi + 1e-9]
    return [float(spec)]


def _thresholds(args: argparse.Namespace) -> tuple[list[float], list[float]]:
    """Returns (t_db, t_linear); exactly one of --tdb / --t must be given."""
    if getattr(args, "t", None):
        lin = [float(v) for v in args.t.split(",")]
        if any(v <= 0 for v in lin):
            raise ValueError("linear thresholds must be positive")
        return [10.0 * math.log10(v) for v in lin], lin
    spec = getattr(args, "tdb", None) or "-10:20:1"
    dbs = _parse_tdb(spec)
    return dbs, [10.0 ** (db / 10.0) for db in dbs]


def _model_from(args: argparse.Namespace) -> NetworkModel:
    return make_model(args.dim, args.a0, args.a1, args.rc, args.lam, args.sigma2)


def _log_lambdas(lo: float, hi: float, per_decade: int) -> list[float]:
    if lo <= 0 or hi <= lo:
        raise ValueError(f"need 0 < lam-min < lam-max, got {lo}, {hi}")
    n = max(2, int(round(math.log10(hi / lo) * per_decade)) + 1)
    return list(np.geomspace(lo, hi, n))


_CONFIG_TYPES = {
    "dim": str, "a0": float, "a1": float, "rc": float, "lam": float,
    "sigma2": float, "tdb": str, "t": str, "lam_min": float, "lam_max": float,
    "per_decade": int, "metric": str, "trials": int, "seed": int,
    "workers": int, "eps": float, "slack": float, "csv": str, "svg": str,
}


def _load_config(path: str) -> dict:
    """Flat `key = value` file mirroring flag names; '#' starts a comment."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _CONFIG_TYPES:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _CONFIG_TYPES[key](val.strip())
    return values


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", choices=["2d", "3d", "3d+"], default=None)
    p.add_argument("--a0", type=float, default=None, help="close-in path loss exponent")
    p.add_argument("--a1", type=float, default=None, help="far-field path loss exponent")
    p.add_argument("--rc", type=float, default=None, help="critical distance")
    p.add_argument("--lambda", dest="lam", type=float, default=None, help="BS density")
    p.add_argument("--sigma2", type=float, default=None, help="noise power")


def _add_threshold_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tdb", default=None,
                   help="SINR threshold in dB: single value or lo:hi:step "
                        "(default -10:20:1)")
    p.add_argument("--t", default=None, help="linear thresholds, comma separated")


def _add_sim_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--eps", type=float, default=None,
                   help="truncation tail fraction (default 1e-3)")


def _add_out_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--csv", default=None)
    p.add_argument("--svg", default=None)
    p.add_argument("--config", default=None, help="key = value defaults file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="densecov",
        description="Coverage and throughput for dense d-dimensional cellular "
                    "networks under a dual-slope path loss model.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_cov = sub.add_parser("coverage", help="analytic SINR/SIR/SNR coverage vs threshold")
    p_sweep = sub.add_parser("sweep", help="metric vs density, log-spaced")
    p_tp = sub.add_parser("throughput", help="potential throughput vs threshold")
    p_sim = sub.add_parser("simulate", help="Monte Carlo coverage vs threshold")
    p_cmp = sub.add_parser("compare", help="analytic vs Monte Carlo with pass/fail")
    p_fig = sub.add_parser("figure", help="reproduce a figure preset (1, 2 or 3)")

    for p in (p_cov, p_sweep, p_tp, p_sim, p_cmp):
        _add_model_args(p)
        _add_out_args(p)
    for p in (p_cov, p_tp, p_sim, p_cmp):
        _add_threshold_args(p)
    for p in (p_sim, p_cmp):
        _add_sim_args(p)
    p_cmp.add_argument("--slack", type=float, default=None,
                       help=f"absolute agreement slack on top of the 3-sigma "
                            f"half width (default {_DEFAULT_SLACK})")

    p_sweep.add_argument("--tdb", default=None, help="threshold in dB (single value)")
    p_sweep.add_argument("--t", default=None, help="threshold, linear (single value)")
    p_sweep.add_argument("--lam-min", dest="lam_min", type=float, default=None)
    p_sweep.add_argument("--lam-max", dest="lam_max", type=float, default=None)
    p_sweep.add_argument("--per-decade", dest="per_decade", type=int, default=None)
    p_sweep.add_argument("--metric", choices=[m.value for m in SweepMetric], default=None)

    p_fig.add_argument("number", type=int, choices=[1, 2, 3])
    p_fig.add_argument("--csv", default=None)
    p_fig.add_argument("--svg", default=None)
    p_fig.add_argument("--config", default=None)
    _add_sim_args(p_fig)

    # let argparse accept "-10:20:1" and "-5" as option values
    matcher = re.compile(r"^-\d+.*$")
    parser._negative_number_matcher = matcher
    for p in (p_cov, p_sweep, p_tp, p_sim, p_cmp, p_fig):
        p._negative_number_matcher = matcher
    return parser


_MODEL_DEFAULTS = {"dim": "3d", "a0": 3.3, "a1": 5.0, "rc": 0.4, "lam": 10.0,
                   "sigma2": 1.0}
_SIM_DEFAULTS = {"trials": 20_000, "seed": 1, "workers": 1, "eps": 1e-3}


def _finalize(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset flags from the config file, then from built-in defaults."""
    if getattr(args, "config", None):
        for key, val in _load_config(args.config).items():
            if getattr(args, key, None) is None and hasattr(args, key):
                setattr(args, key, val)
    for source in (_MODEL_DEFAULTS, _SIM_DEFAULTS):
        for key, val in source.items():
            if hasattr(args, key) and getattr(args, key) is None:
                setattr(args, key, val)
    if getattr(args, "slack", None) is None and hasattr(args, "slack"):
        args.slack = _DEFAULT_SLACK
    return args


# ---------------------------------------------------------------------------
# Subcommands


def _emit(args, default_name, header, rows, series=None, comment=None,
          title="", x_label="", y_label="", x_log=False, y_log=False) -> None:
    csv_path = write_csv(args.csv or default_name, header, rows, comment)
    print(f"wrote {csv_path}")
    if args.svg and series:
        svg_path = render_line_chart(args.svg, series, title, x_label, y_label,
                                     x_log=x_log, y_log=y_log)
        print(f"wrote {svg_path}")


def _cmd_coverage(args: argparse.Namespace) -> int:
    model = _model_from(args)
    dbs, ts = _thresholds(args)
    rows = [(db, coverage_sinr(model, t), coverage_sir(model, t), coverage_snr(model, t))
            for db, t in zip(dbs, ts)]
    series = [(name, dbs, [r[i] for r in rows])
              for i, name in ((1, "SINR"), (2, "SIR"), (3, "SNR"))]
    _emit(args, "coverage.csv", ("t_db", "pc_sinr", "pc_sir", "pc_snr"), rows,
          series, title="Coverage probability", x_label="threshold (dB)",
          y_label="P_c")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    model = _model_from(args)
    _, ts = _thresholds(args)
    if len(ts) != 1:
        raise ValueError("sweep takes a single threshold")
    metric = SweepMetric(args.metric or "coverage-sinr")
    lams = _log_lambdas(args.lam_min or 0.1, args.lam_max or 1e4,
                        args.per_decade or 8)
    sw = sweep(model, ts[0], lams, metric)
    rows = list(zip(sw.lambdas, sw.values))
    _emit(args, "sweep.csv", ("lambda", "value"), rows,
          [(metric.value, sw.lambdas, sw.values)],
          comment="lambda in normalized units (BS per unit d-volume)",
          title=f"{metric.value} vs density", x_label="lambda", y_label="value",
          x_log=True, y_log=metric is SweepMetric.THROUGHPUT)
    return 0


def _cmd_throughput(args: argparse.Namespace) -> int:
    model = _model_from(args)
    dbs, ts = _thresholds(args)
    rows = [(db, potential_throughput(model, t)) for db, t in zip(dbs, ts)]
    _emit(args, "throughput.csv", ("t_db", "throughput"), rows,
          [("throughput", dbs, [r[1] for r in rows])],
          title="Potential throughput", x_label="threshold (dB)",
          y_label="tau")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    model = _model_from(args)
    dbs, ts = _thresholds(args)
    cfg = SimConfig(args.trials, args.seed, args.eps)
    est = estimate_coverage(model, ts, cfg, workers=args.workers)
    rows = [(db, e.p_hat, e.ci_half_width) for db, e in zip(dbs, est)]
    _emit(args, "simulate.csv", ("t_db", "p_hat", "ci"), rows,
          [("p_hat", dbs, [r[1] for r in rows])],
          title="Monte Carlo coverage", x_label="threshold (dB)", y_label="p_hat")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    model = _model_from(args)
    dbs, ts = _thresholds(args)
    cfg = SimConfig(args.trials, args.seed, args.eps)
    est = estimate_coverage(model, ts, cfg, workers=args.workers)
    rows = []
    failures = 0
    for db, t, e in zip(dbs, ts, est):
        pc = coverage_sinr(model, t)
        ok = abs(e.p_hat - pc) <= e.ci_half_width + args.slack
        failures += not ok
        rows.append((db, pc, e.p_hat, e.ci_half_width, "pass" if ok else "fail"))
    _emit(args, "compare.csv",
          ("t_db", "pc_analytic", "p_hat", "ci_half_width", "agree"), rows,
          [("analytic", dbs, [r[1] for r in rows]),
           ("monte-carlo", dbs, [r[2] for r in rows])],
          title="Analytic vs Monte Carlo", x_label="threshold (dB)", y_label="P_c")
    if failures:
        print(f"compare: {failures}/{len(rows)} points disagree beyond tolerance",
              file=sys.stderr)
        return 1
    return 0


def _figure1(args) -> tuple:
    dbs = _parse_tdb("-10:20:1")
    ts = [10.0 ** (db / 10.0) for db in dbs]
    m_plus = make_model("3d+", 3.3, 5.0, 0.4, 10.0, 1.0)
    m_half = make_model("3d", 3.3, 5.0, 0.4, 5.0, 1.0)
    cfg = SimConfig(args.trials, args.seed, args.eps)
    est = estimate_coverage(m_plus, ts, cfg, workers=args.workers)
    rows = [(db, coverage_sinr(m_plus, t), coverage_sinr(m_half, t), e.p_hat)
            for db, t, e in zip(dbs, ts, est)]
    header = ("t_db", "pc_3dplus", "pc_3d_half_density", "p_hat_3dplus")
    series = [("3D+ analytic", dbs, [r[1] for r in rows]),
              ("3D (lambda/2) analytic", dbs, [r[2] for r in rows]),
              ("3D+ simulated", dbs, [r[3] for r in rows])]
    return header, rows, series, "SINR coverage, 3D+ vs 3D", "threshold (dB)", \
        "P_c", False, False


def _figure2(args) -> tuple:
    lams = _log_lambdas(0.1, 4e4, 8)
    cols, series = [], []
    for a0 in (2.5, 3.5):
        base = make_model("3d", a0, 4.0, 0.4, 1.0, 1.0)
        for metric, tag in ((SweepMetric.COVERAGE_SINR, "sinr"),
                            (SweepMetric.COVERAGE_SIR, "sir")):
            sw = sweep(base, 1.0, lams, metric)
            cols.append((f"pc_{tag}_a0_{a0:g}", sw.values))
            series.append((f"{tag.upper()}, a0={a0:g}", lams, sw.values))
    rows = [(lam, *(vals[i] for _, vals in cols)) for i, lam in enumerate(lams)]
    header = ("lambda", *(name for name, _ in cols))
    return header, rows, series, "Coverage vs density", "lambda", "P_c", True, False


def _figure3(args) -> tuple:
    lams = _log_lambdas(0.1, 4e4, 8)
    cols, series = [], []
    for a0 in (1.0, 1.5, 2.0, 3.0):
        base = make_model("3d", a0, 4.0, 0.4, 1.0, 1.0)
        sw = sweep(base, 1.0, lams, SweepMetric.THROUGHPUT)
        cols.append((f"tau_a0_{a0:g}", sw.values))
        series.append((f"a0={a0:g}", lams, sw.values))
    rows = [(lam, *(vals[i] for _, vals in cols)) for i, lam in enumerate(lams)]
    header = ("lambda", *(name for name, _ in cols))
    return header, rows, series, "Potential throughput vs density", "lambda", \
        "tau", True, True


def _cmd_figure(args: argparse.Namespace) -> int:
    builder = {1: _figure1, 2: _figure2, 3: _figure3}[args.number]
    header, rows, series, title, xl, yl, x_log, y_log = builder(args)
    csv_path = write_csv(args.csv or f"figure{args.number}.csv", header, rows,
                         comment="lambda and all lengths in normalized units")
    svg_path = render_line_chart(args.svg or f"figure{args.number}.svg", series,
                                 title, xl, yl, x_log=x_log, y_log=y_log)
    print(f"wrote {csv_path}")
    print(f"wrote {svg_path}")
    return 0


_COMMANDS = {
    "coverage": _cmd_coverage,
    "sweep": _cmd_sweep,
    "throughput": _cmd_throughput,
    "simulate": _cmd_simulate,
    "compare": _cmd_compare,
    "figure": _cmd_figure,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.cmd](_finalize(args))
    except (DensecovError, ValueError, OSError) as exc:
        print(f"densecov: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
