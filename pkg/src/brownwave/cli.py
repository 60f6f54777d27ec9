"""Command-line interface.

    brownwave duality --mass 720Da --radius 0.35nm --temperature 300 --format json
    brownwave nogo --catalog C60 --temperature 300 --times 1e-3,1,1e3
    brownwave figures fig5 --out fig5.csv
    brownwave evolve ou --engine pde --x0-over-sigma0 2 --times 0.5,1,2 --out ou.csv
    brownwave catalog

Exit codes: 0 success, 2 usage or validation error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .core import NATURAL, SI, DomainError, ParticleSpec, SolverError
from .datasets import (
    FIG2_RATIOS,
    FIG2_TIMES,
    FIG4_RATIOS,
    FIG5_PHASES,
    FIG5_RATIOS,
    coherent_rows,
    fig2_rows,
    fig3_rows,
    fig4_rows,
    fig5_rows,
    fmt,
    ou_rows,
    rows_to_csv,
)
from .duality import catalog_lookup, duality_report, molecule_catalog, required_diffusion

VERDICT = "no time-independent D satisfies the equipartition condition"

_UNITS = {
    "mass": {"da": SI.dalton, "kg": 1.0},
    "length": {"nm": 1e-9, "m": 1.0},
    "temperature": {"k": 1.0},
    "time": {"s": 1.0},
}
_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z]*)\s*$")


class UsageError(Exception):
    pass


def parse_quantity(text: str, kind: str, flag: str, natural: bool = False) -> float:
    """Parse '720Da', '0.35nm', '300K', ... into SI (or a bare number in natural units)."""
    m = _NUMBER.match(text or "")
    if not m:
        raise UsageError(f"{flag}: cannot parse {text!r}")
    value, unit = float(m.group(1)), m.group(2).lower()
    if natural:
        if unit:
            raise UsageError(f"{flag}: units are not allowed with --natural-units")
        scale = 1.0
    elif not unit:
        scale = 1.0 if kind in ("temperature", "time") else None
        if scale is None:
            raise UsageError(f"{flag}: missing unit (one of {', '.join(_UNITS[kind])})")
    elif unit in _UNITS[kind]:
        scale = _UNITS[kind][unit]
    else:
        raise UsageError(f"{flag}: unknown unit {m.group(2)!r}")
    if not (value > 0 and math.isfinite(value)):
        raise UsageError(f"{flag}: must be positive, got {text!r}")
    return value * scale


def parse_list(text: str, flag: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{flag}: expected a comma-separated list of numbers") from None
    if not values:
        raise UsageError(f"{flag}: empty list")
    return values


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int | None = None
    artifact_version: str = __version__
    output_paths: list[str] = field(default_factory=list)


class Output:
    """Collects everything a command writes so the manifest can list it."""

    def __init__(self, args):
        self.args = args
        self.paths: list[str] = []

    def emit(self, text: str, path: str | None = None):
        path = path or self.args.out
        if path:
            Path(path).write_text(text)
            self.paths.append(str(path))
        else:
            sys.stdout.write(text)

    def manifest(self, command, parameters, seed=None):
        if not self.args.out:
            return
        target = str(self.args.out) + ".manifest.json"
        m = RunManifest(command, parameters, seed, output_paths=self.paths + [target])
        Path(target).write_text(json.dumps(asdict(m), indent=2, sort_keys=True) + "\n")


def _constants(args):
    return NATURAL if args.natural_units else SI


def _particle(args) -> tuple[ParticleSpec, dict]:
    if args.catalog:
        if args.natural_units:
            raise UsageError("--catalog: catalog entries are SI, not natural units")
        try:
            entry = catalog_lookup(args.catalog)
        except DomainError as exc:
            raise UsageError(f"--catalog: {exc}") from None
        return entry.particle, {"catalog": entry.particle.label}
    if args.mass is None:
        raise UsageError("--mass: required unless --catalog is given")
    mass = parse_quantity(args.mass, "mass", "--mass", args.natural_units)
    radius = 1.0
    if getattr(args, "radius", None) is not None:
        radius = parse_quantity(args.radius, "length", "--radius", args.natural_units)
    elif args.command == "duality":
        raise UsageError("--radius: required unless --catalog is given")
    return ParticleSpec(mass, radius, "custom"), {}


def _temperature(args) -> float:
    return parse_quantity(args.temperature, "temperature", "--temperature", args.natural_units)


def cmd_duality(args, out: Output) -> int:
    particle, extra = _particle(args)
    T = _temperature(args)
    report = duality_report(particle, T, _constants(args)).as_dict()
    params = {"mass": particle.mass, "radius": particle.radius, "temperature": T,
              "natural_units": args.natural_units, **extra}
    if args.format == "json":
        out.emit(json.dumps({"inputs": params, **report}, indent=2) + "\n")
    elif args.format == "csv":
        out.emit("quantity,value\n" + "".join(f"{k},{fmt(v)}\n" for k, v in report.items()))
    else:
        out.emit("".join(f"{k:>20} = {v:.6e}\n" for k, v in report.items()))
    out.manifest("duality", params)
    return 0


def cmd_nogo(args, out: Output) -> int:
    particle, extra = _particle(args)
    T = _temperature(args)
    times = [parse_quantity(t, "time", "--times", args.natural_units)
             for t in args.times.split(",") if t.strip()] if args.times else []
    if not times:
        raise UsageError("--times: empty list")
    const = _constants(args)
    table = [(t, required_diffusion(particle.mass, T, t, const)) for t in times]
    dt_const = table[0][1] * table[0][0]
    params = {"mass": particle.mass, "temperature": T, "times": times,
              "natural_units": args.natural_units, **extra}
    if args.format == "json":
        out.emit(json.dumps({
            "inputs": params,
            "rows": [{"t": t, "D_required": d, "D_times_t": d * t} for t, d in table],
            "D_times_t": dt_const,
            "verdict": VERDICT,
        }, indent=2) + "\n")
    elif args.format == "csv":
        out.emit("t,D_required,D_times_t\n"
                 + "".join(f"{fmt(t)},{fmt(d)},{fmt(d * t)}\n" for t, d in table))
    else:
        lines = [f"{'t':>14} {'D_required':>14} {'D*t':>14}"]
        lines += [f"{t:14.6e} {d:14.6e} {d * t:14.6e}" for t, d in table]
        lines.append(f"D(t)*t = {dt_const:.6e} for every t, so D diverges as t -> 0: {VERDICT}")
        out.emit("\n".join(lines) + "\n")
    out.manifest("nogo", params)
    return 0


def cmd_figures(args, out: Output) -> int:
    params = {"figure": args.which}
    if args.which == "fig2":
        rows = fig2_rows()
        params.update(x0_over_sigma0=list(FIG2_RATIOS), t_times_kM=list(FIG2_TIMES))
    elif args.which == "fig3":
        T = _temperature(args) if args.temperature else 300.0
        rows = fig3_rows(T, args.n_points, _constants(args))
        params.update(temperature=T, n_points=args.n_points)
    elif args.which == "fig4":
        rows = fig4_rows(FIG4_RATIOS, args.t_min, args.t_max, args.n_points, _constants(args))
        params.update(m_over_R=list(FIG4_RATIOS), t_min=args.t_min, t_max=args.t_max, n_points=args.n_points)
    else:
        rows = fig5_rows()
        params.update(x0_over_sigma=list(FIG5_RATIOS), omega_t=list(FIG5_PHASES))
    _emit_rows(rows, args, out)
    out.manifest(f"figures {args.which}", params)
    return 0


def _emit_rows(rows, args, out: Output):
    if args.format == "json":
        out.emit(json.dumps([dict(zip(("series", "t_or_param", "x", "value"), r)) for r in rows]) + "\n")
    else:
        out.emit(rows_to_csv(rows))


def cmd_evolve(args, out: Output) -> int:
    if args.mode == "coherent" and args.engine == "ensemble":
        raise UsageError("--engine: ensemble is only available for mode 'ou'")
    times = parse_list(args.times, "--times") if args.times else None
    ratio = args.x0_over_sigma0
    params = {"mode": args.mode, "engine": args.engine, "x0_over_sigma": ratio}
    seed = None
    if args.mode == "ou":
        times = times or list(FIG2_TIMES)
        if min(times) <= 0:
            raise UsageError("--times: values must be positive")
        kw = {}
        if args.engine == "ensemble":
            seed = args.seed
            kw = {"seed": args.seed, "n_trajectories": args.n_trajectories}
            params.update(n_trajectories=args.n_trajectories, dt=args.dt or 0.01)
        if args.dt:
            kw["dt"] = args.dt
        rows, moments = ou_rows(ratio, times, args.engine, **kw)
    else:
        times = times or list(FIG5_PHASES)
        if min(times) < 0:
            raise UsageError("--times: values must be non-negative")
        rows, moments = coherent_rows(ratio, times, args.engine)
    params["times"] = times
    _emit_rows(rows, args, out)
    if args.out:
        table = "t,mean,variance\n" + "".join(f"{fmt(t)},{fmt(m)},{fmt(v)}\n" for t, m, v in moments)
        out.emit(table, _sibling(args.out, ".moments.csv"))
    out.manifest(f"evolve {args.mode}", params, seed)
    return 0


def _sibling(path: str, suffix: str) -> str:
    p = Path(path)
    return str(p.with_name(p.stem + suffix))


def cmd_catalog(args, out: Output) -> int:
    entries = molecule_catalog()
    if args.format == "json":
        out.emit(json.dumps([
            {"label": e.particle.label, "mass_da": e.mass_da, "radius_nm": e.radius_nm,
             "mass_kg": e.particle.mass, "radius_m": e.particle.radius, "m_over_R": e.m_over_R}
            for e in entries], indent=2) + "\n")
    elif args.format == "csv":
        out.emit("label,mass_da,radius_nm,m_over_R\n" + "".join(
            f"{e.particle.label},{fmt(e.mass_da)},{fmt(e.radius_nm)},{fmt(e.m_over_R)}\n" for e in entries))
    else:
        out.emit("".join(f"{e.particle.label:<14} {e.mass_da:7.0f} Da {e.radius_nm:5.2f} nm"
                         f"  m/R = {e.m_over_R:.3g} kg/m\n" for e in entries))
    out.manifest("catalog", {})
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--out", metavar="PATH", help="write output here (plus a .manifest.json sidecar)")
    common.add_argument("--natural-units", action="store_true", help="hbar = k_B = 1, bare numbers")

    parser = argparse.ArgumentParser(prog="brownwave", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def particle_flags(p, radius=True):
        p.add_argument("--mass", help="e.g. 720Da or 1.2e-24kg")
        if radius:
            p.add_argument("--radius", help="e.g. 0.35nm or 3.5e-10m")
        p.add_argument("--catalog", metavar="NAME", help="use a catalog molecule (C60, PFNS10, ...)")
        p.add_argument("--temperature", required=True, help="kelvin, e.g. 300 or 300K")

    p = sub.add_parser("duality", parents=[common], help="duality requirements for one particle")
    particle_flags(p)
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("nogo", parents=[common], help="diffusion coefficient free diffusion would need")
    particle_flags(p, radius=False)
    p.add_argument("--times", default="1e-3,1,1e3", help="comma-separated times in s")
    p.set_defaults(func=cmd_nogo)

    p = sub.add_parser("figures", parents=[common], help="figure datasets as long-format CSV")
    p.add_argument("which", choices=("fig2", "fig3", "fig4", "fig5"))
    p.add_argument("--temperature", help="fig3 temperature (default 300 K)")
    p.add_argument("--t-min", type=float, default=1.0, help="fig4 sweep start, K")
    p.add_argument("--t-max", type=float, default=400.0, help="fig4 sweep end, K")
    p.add_argument("--n-points", type=int, default=None)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("evolve", parents=[common], help="density snapshots from one engine")
    p.add_argument("mode", choices=("ou", "coherent"))
    p.add_argument("--engine", choices=("analytic", "pde", "ensemble"), default="analytic")
    p.add_argument("--x0-over-sigma0", "--x0-over-sigma", dest="x0_over_sigma0", type=float, default=2.0)
    p.add_argument("--times", help="t*kM (ou) or omega*t (coherent), comma-separated")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--n-trajectories", type=int, default=20000)
    p.add_argument("--dt", type=float, default=None, help="nondimensional time step")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("catalog", parents=[common], help="list the molecule catalog")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "figures" and args.n_points is None:
        args.n_points = 200 if args.which == "fig3" else 400
    out = Output(args)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"brownwave {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"brownwave {args.command}: solver failure: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"brownwave {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
