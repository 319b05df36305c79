"""Command-line frontend: ``fermibath {trace,transport,spectrum,grassmann-verify}``.

CSV output is the contract (17 significant digits, ``#`` metadata lines);
``--svg`` adds a bare line plot next to it.
"""
from __future__ import annotations

import argparse
import io
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import analytics, lindblad, spectrum, transport
from .errors import (ConfigurationError, ConvergenceError, DomainError, FermibathError,
                     NumericalInstabilityError, StructuralError)
from .reservoirs import Statistics

EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

DEFAULTS = dict(omega=1e12, gamma_e=1e9, gamma_c=1e9, temp_e=300.0, n0=1.0,
                variant="reference", stats="fermi", n_max=lindblad.DEFAULT_N_MAX,
                ratio=2.0, jobs=1, points=None)
DEFAULT_TRACE_TC = "150"
DEFAULT_SPECTRUM_TC = "100,150,200,250"


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in str(text).replace(";", ",").split(",") if v.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; keys use flag names with '-' or '_'."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.lstrip("-").replace("-", "_")] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value file; flags override it")
    common.add_argument("--omega", type=float, help="system frequency ω_s [rad/s]")
    common.add_argument("--gamma-e", type=float, help="emitter rate γ_e [1/s]")
    common.add_argument("--gamma-c", type=float, help="collector rate γ_c [1/s]")
    common.add_argument("--temp-e", type=float, help="emitter temperature [K]")
    common.add_argument("--temp-c", type=_floats, help="collector temperature(s) [K], comma separated")
    common.add_argument("--n0", type=float, help="initial occupation")
    common.add_argument("--variant", choices=["reference", "paper-literal"])
    common.add_argument("--stats", choices=["fermi", "bose"])
    common.add_argument("--n-max", type=int, help="bosonic Fock cut-off")
    common.add_argument("--t-max", type=float, help="trace length [s] (default 5/(γ_e+γ_c))")
    common.add_argument("--dt", type=float, help="RK4 step [s] (default 0.01/(γ_e+γ_c))")
    common.add_argument("--ratio", type=float, help="T_e/T_c for the transport sweep")
    common.add_argument("--points", type=int, help="grid size")
    common.add_argument("--out", default="-", help="CSV destination ('-' for stdout)")
    common.add_argument("--svg", help="also write an SVG line plot here")
    common.add_argument("--jobs", type=int, help="worker threads for sweeps")

    parser = argparse.ArgumentParser(prog="fermibath", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("trace", parents=[common], help="occupation and current versus time")
    tp = sub.add_parser("transport", parents=[common], help="transport factors vs Carnot")
    tp.add_argument("--x-min", type=float, default=1e-3)
    tp.add_argument("--x-max", type=float, default=30.0)
    tp.add_argument("--use-shifted-omega", type=float, default=None,
                    help="frequency used in the fermionic prefactor instead of ω_s")
    sp = sub.add_parser("spectrum", parents=[common], help="current power spectra")
    sp.add_argument("--omega-max", type=float, help="half width of the frequency grid [rad/s]")
    sub.add_parser("grassmann-verify", parents=[common], help="P-representation identity report")
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = read_config(args.config)
        for key, value in cfg.items():
            if not hasattr(args, key):
                raise ConfigurationError(f"unknown config key {key!r}")
            if getattr(args, key) is None:
                setattr(args, key, _convert(key, value))
    for key, value in DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return args


def _convert(key: str, value: str):
    if key == "temp_c":
        return _floats(value)
    if key in ("n_max", "jobs", "points"):
        return int(value)
    if key in ("variant", "stats", "out", "svg", "config"):
        return value
    return float(value)


def _params_line(args, extra: dict | None = None) -> str:
    keys = ["omega", "gamma_e", "gamma_c", "temp_e", "temp_c", "n0", "variant", "stats",
            "n_max", "t_max", "dt", "ratio"]
    items = []
    for k in keys:
        v = getattr(args, k, None)
        if v is None:
            continue
        if isinstance(v, list):
            v = ";".join(fmt(x) for x in v)
        elif isinstance(v, float):
            v = fmt(v)
        items.append(f"{k}={v}")
    for k, v in (extra or {}).items():
        items.append(f"{k}={v}")
    return "# params: " + ",".join(items)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def _initial_state(stats: Statistics, n0: float, dim: int) -> np.ndarray:
    if stats is Statistics.FERMIONIC:
        return lindblad.fermion_state(n0)
    if n0 == 0:
        return lindblad.number_state(0, dim)
    if float(n0).is_integer():
        return lindblad.number_state(int(n0), dim)
    return lindblad.thermal_state(n0, dim)


def cmd_trace(args) -> tuple[str, list]:
    stats = Statistics.parse(args.stats)
    temp_c = (args.temp_c or _floats(DEFAULT_TRACE_TC))[0]
    p = analytics.TransportParams.from_temperatures(
        args.omega, args.temp_e, temp_c, args.gamma_e, args.gamma_c, args.n0, stats)
    G = lindblad.GeneratorSpec(stats, args.omega, args.gamma_e, args.gamma_c, p.nbar_e, p.nbar_c,
                               variant=lindblad.Variant.parse(args.variant), n_max=args.n_max)
    t_max = 5.0 / p.gamma_total if args.t_max is None else args.t_max
    n_pts = args.points or 101
    times = np.linspace(0.0, t_max, n_pts)
    states = lindblad.trajectory(G, _initial_state(stats, args.n0, G.dim), times, args.dt)
    n_num = np.array([lindblad.occupation(r) for r in states])
    tr = analytics.closed_form_trace(p, times)
    buf = io.StringIO()
    buf.write(_params_line(args, {"T_c": fmt(temp_c)}) + "\n")
    buf.write(f"# nbar_e={fmt(p.nbar_e)},nbar_c={fmt(p.nbar_c)},nbar_s={fmt(p.nbar_s)}\n")
    buf.write("t_s,n_analytic,n_numeric,current_analytic\n")
    for row in zip(times, tr.occupation, n_num, tr.current):
        buf.write(",".join(fmt(v) for v in row) + "\n")
    series = [("n analytic", times, tr.occupation), ("n numeric", times, n_num)]
    return buf.getvalue(), series


def cmd_transport(args) -> tuple[str, list]:
    if not args.ratio > 1:
        raise DomainError(f"--ratio must exceed 1, got {args.ratio}")
    if args.temp_c:
        grid = np.array(sorted(args.temp_c))
    else:
        xs = np.geomspace(args.x_max, args.x_min, args.points or 61)
        grid = transport.T_c_for_x(args.omega, xs)
    pts = transport.sweep_fig1(args.omega, args.ratio, grid, jobs=args.jobs,
                               use_shifted_omega=args.use_shifted_omega)
    buf = io.StringIO()
    buf.write(_params_line(args) + "\n")
    buf.write(f"# carnot_crossing_x_c={fmt(transport.carnot_crossing(args.ratio))}\n")
    buf.write("T_c_K,x_c,eta_carnot,eta_fermi,eta_bose\n")
    for q in pts:
        buf.write(",".join(fmt(v) for v in (q.T_c, q.x_c, q.eta_carnot, q.eta_fermi, q.eta_bose)) + "\n")
    x = np.array([q.x_c for q in pts])
    series = [(name, x, np.array([getattr(q, name) for q in pts]))
              for name in ("eta_carnot", "eta_fermi", "eta_bose")]
    return buf.getvalue(), series


def cmd_spectrum(args) -> tuple[str, list]:
    stats = Statistics.parse(args.stats)
    temps = args.temp_c or _floats(DEFAULT_SPECTRUM_TC)
    g = args.gamma_e + args.gamma_c
    width = args.omega_max or 10.0 * g
    omegas = spectrum.symmetric_grid(width, args.points or 513)

    def curve(T_c):
        p = analytics.TransportParams.from_temperatures(
            args.omega, args.temp_e, T_c, args.gamma_e, args.gamma_c, args.n0, stats)
        return spectrum.spectrum_analytic(p, omegas)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(curve, temps))
    else:
        results = [curve(T) for T in temps]
    buf = io.StringIO()
    buf.write(_params_line(args) + "\n")
    series = []
    for T_c, res in zip(temps, results):
        buf.write(f"# T_c_K={fmt(T_c)}\n")
        buf.write(f"# dc_weight={fmt(res.dc_weight)}\n")
        buf.write("omega_rad_s,S_continuous\n")
        for w, s in zip(res.omegas, res.continuous):
            buf.write(f"{fmt(w)},{fmt(s)}\n")
        series.append((f"T_c={fmt(T_c)} K", res.omegas, res.continuous))
    return buf.getvalue(), series


def cmd_grassmann_verify(args) -> tuple[str, bool]:
    from .fokker_planck import format_report, verification_report
    checks, ok = verification_report()
    return format_report(checks) + "\n", ok


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------

def render_svg(series, width: int = 640, height: int = 400, margin: int = 40) -> str:
    """Minimal multi-line plot; no axes labels beyond the min/max of each axis."""
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    xs = np.concatenate([np.asarray(s[1], float) for s in series])
    ys = np.concatenate([np.asarray(s[2], float) for s in series])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def sx(v):
        return margin + (v - x0) / (x1 - x0) * (width - 2 * margin)

    def sy(v):
        return height - margin - (v - y0) / (y1 - y0) * (height - 2 * margin)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<rect x="{margin}" y="{margin}" width="{width - 2 * margin}" '
           f'height="{height - 2 * margin}" fill="none" stroke="black"/>']
    for i, (name, x, y) in enumerate(series):
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, y))
        color = colors[i % len(colors)]
        out.append(f'<polyline fill="none" stroke="{color}" points="{pts}"/>')
        out.append(f'<text x="{margin + 5}" y="{margin + 15 * (i + 1)}" fill="{color}" '
                   f'font-size="12">{name}</text>')
    out.append(f'<text x="{margin}" y="{height - 10}" font-size="10">x: {x0:.4g} .. {x1:.4g}; '
               f'y: {y0:.4g} .. {y1:.4g}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


COMMANDS = {"trace": cmd_trace, "transport": cmd_transport, "spectrum": cmd_spectrum}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
        if args.command == "grassmann-verify":
            text, ok = cmd_grassmann_verify(args)
            _write(args.out, text)
            return 0 if ok else 1
        text, series = COMMANDS[args.command](args)
        _write(args.out, text)
        if args.svg:
            _write(args.svg, render_svg(series))
        return 0
    except (NumericalInstabilityError, ConvergenceError) as err:
        print(f"fermibath: numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DomainError, ConfigurationError, StructuralError, FermibathError, OSError) as err:
        print(f"fermibath: invalid input: {err}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
