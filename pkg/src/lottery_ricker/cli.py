"""Command-line frontend.

Subcommands: simulate | orbit | stability | regime | heteroclinic |
preimage | basin | sweep | certify.  Options can also be supplied through
``--config FILE`` as flat ``key=value`` lines (``#`` comments allowed);
explicit flags win over the file.  Exit codes: 0 success, 2 validation
error, 3 numerical failure (e.g. no interior 2-cycle).

CSV outputs use 17-significant-digit formatting with LF line endings and
always carry a header row; human summaries use shortest round-trip
decimals.  ``--fig PATH`` renders a matplotlib figure next to the
delimited output.  The LRL_THREADS environment variable caps raster
worker threads.
"""
from __future__ import annotations

import argparse
import sys
import time

from .basin import CellClass, boundary_overlay, rasterize, undecided_near_overlay_fraction
from .errors import BlowupError, DomainError, NoInteriorOrbitError, StaleOrbitError
from .geometry import axis_equilibria, preimages_curve, preimages_point, trace_heteroclinic
from .maps import LotteryRicker, StockingRicker, iterate
from .orbits import find_2cycle_by_iteration, interior_2cycle, ricker_2cycle
from .pnm import write_grid_csv, write_pgm, write_ppm
from .stability import (
    Regime,
    classify_regime,
    cycle_stability,
    lyapunov_bound,
    lyapunov_certificate,
    persistence_probe,
)
from .sweep import SweepSpec, run_sweep, write_sweep_csv


def f17(v: float) -> str:
    return format(float(v), ".17g")


def human(v: float) -> str:
    return repr(float(v))


# ---------------------------------------------------------------------------
# option plumbing: every option parses with default=None so that values can
# be filled from --config, then from the hard defaults below.

_COMMON = [
    ("r1", float, 2.0, "growth parameter of species x"),
    ("r2", float, 2.2, "Ricker parameter of species y"),
    ("a", float, 0.0, "resource shift (0 = lottery model)"),
    ("family", str, "lottery", "map family: lottery | stocking"),
    ("s1", float, 0.5, "stocking rate (stocking family)"),
    ("q1", float, 1.5, "x growth exponent (stocking family)"),
    ("q2", float, 2.2, "y growth exponent (stocking family)"),
    ("p1", float, 1.0, "x crowding coefficient (stocking family)"),
    ("p2", float, 1.0, "y crowding coefficient (stocking family)"),
    ("seed", int, 42, "random seed for sampled computations"),
    ("out", str, None, "output file (CSV unless noted)"),
    ("fig", str, None, "render a figure (PNG) to this path"),
    ("config", str, None, "key=value config file; flags override"),
]

_OPTIONS = {
    "simulate": _COMMON
    + [
        ("x0", float, 2.0, "initial x"),
        ("y0", float, 0.001, "initial y"),
        ("n", int, 200, "number of iterations (max 10^7)"),
    ],
    "orbit": _COMMON,
    "stability": _COMMON,
    "regime": _COMMON,
    "heteroclinic": _COMMON
    + [
        ("offset", float, 1e-3, "seed offset along the unstable eigenvector"),
        ("tol", float, 1e-2, "success distance to the y-axis equilibrium"),
        ("max-iter", int, 500, "iteration cap"),
        ("x0", float, None, "optional explicit seed x"),
        ("y0", float, None, "optional explicit seed y"),
    ],
    "preimage": _COMMON
    + [
        ("x", float, None, "target point x (point mode)"),
        ("y", float, None, "target point y (point mode)"),
        ("rank", int, 1, "pre-image rank to compute"),
        ("of-curve", bool, False, "take pre-images of the traced heteroclinic curve"),
        ("samples-per-segment", int, 8, "curve resampling density"),
    ],
    "basin": _COMMON
    + [
        ("xmin", float, 0.0, "window x min"),
        ("xmax", float, 3.0, "window x max"),
        ("ymin", float, 0.0, "window y min"),
        ("ymax", float, 4.0, "window y max"),
        ("nx", int, 200, "cells along x"),
        ("ny", int, 200, "cells along y"),
        ("max-iter", int, 5000, "iteration cap per cell"),
        ("tol", float, 1e-4, "phase-lock distance"),
        ("axis-tol", float, 1e-10, "extinction detection threshold"),
        ("pgm", str, None, "write class-index PGM (P5) here"),
        ("ppm", str, None, "write colored PPM (P6) here"),
        ("overlay-rank", int, 0, "overlay heteroclinic pre-images up to this rank"),
    ],
    "sweep": _COMMON
    + [
        ("parameter", str, "delta", "swept parameter: delta | r1 | r2 | a"),
        ("start", float, 0.0, "sweep start"),
        ("stop", float, 1.0, "sweep stop"),
        ("steps", int, 101, "number of grid points (>= 2)"),
    ],
    "certify": _COMMON
    + [
        ("samples", int, 10000, "Lyapunov certificate sample count"),
        ("points", int, 1000, "persistence probe sample points"),
        ("burn-in", int, 1000, "persistence probe burn-in"),
        ("horizon", int, 2000, "persistence probe horizon"),
        ("exclusion-tol", float, 1e-4, "axis-proximity tolerance for exceptional points"),
    ],
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrl",
        description="Two-species lottery-Ricker competition map analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, opts in _OPTIONS.items():
        p = sub.add_parser(cmd)
        for name, typ, default, help_ in opts:
            flag = "--" + name
            if typ is bool:
                p.add_argument(flag, action="store_const", const=True, default=None, help=help_)
            else:
                p.add_argument(flag, type=typ, default=None, help=help_)
    return parser


def load_config(path: str) -> dict[str, str]:
    """Flat key=value file, one pair per line, # comments."""
    cfg: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, _, value = line.partition("=")
            cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


def _coerce(typ, raw: str):
    if typ is bool:
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"expected a boolean, got {raw!r}")
    return typ(raw)


def _resolve(args: argparse.Namespace) -> argparse.Namespace:
    cfg = load_config(args.config) if args.config else {}
    for name, typ, default, _ in _OPTIONS[args.command]:
        attr = name.replace("-", "_")
        if getattr(args, attr) is None:
            if attr in cfg:
                setattr(args, attr, _coerce(typ, cfg[attr]))
            else:
                setattr(args, attr, default)
    unknown = set(cfg) - {n.replace("-", "_") for n, _, _, _ in _OPTIONS[args.command]}
    if unknown:
        raise ValueError(f"unknown config keys for {args.command}: {sorted(unknown)}")
    return args


def _family(args):
    if args.family == "lottery":
        return LotteryRicker(args.r1, args.r2, args.a)
    if args.family == "stocking":
        return StockingRicker(args.s1, args.q1, args.q2, args.p1, args.p2)
    raise ValueError(f"unknown family {args.family!r} (expected lottery or stocking)")


def _require_lottery(args) -> LotteryRicker:
    f = _family(args)
    if not isinstance(f, LotteryRicker):
        raise ValueError(f"the {args.command} command requires the lottery family")
    return f


def _orbit_for(f):
    """Best-effort 2-cycle for classification; None when none exists."""
    try:
        if isinstance(f, LotteryRicker):
            return interior_2cycle(f)
        xi, _ = axis_equilibria(f)
        return find_2cycle_by_iteration(f, (xi.x, 1e-3))
    except (DomainError, NoInteriorOrbitError, BlowupError):
        return None


# ---------------------------------------------------------------------------
# command handlers


def cmd_simulate(args) -> int:
    f = _family(args)
    if not 0 <= args.n <= 10_000_000:
        raise ValueError(f"n must be in [0, 1e7], got {args.n}")
    traj = iterate(f, (args.x0, args.y0), args.n)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write("n,x,y\n")
            for k, (x, y) in enumerate(traj):
                fh.write(f"{k},{f17(x)},{f17(y)}\n")
    if args.fig:
        from .figures import save_trajectory_figure

        save_trajectory_figure(traj, args.fig)
    x, y = traj[-1]
    print(f"simulate: n={args.n} start=({human(args.x0)}, {human(args.y0)}) "
          f"final=({human(x)}, {human(y)})")
    return 0


def cmd_orbit(args) -> int:
    f = _require_lottery(args)
    t0 = time.perf_counter()
    o = interior_2cycle(f)
    dt = time.perf_counter() - t0
    print(f"interior 2-cycle: p1=({human(o.p1.x)}, {human(o.p1.y)}) "
          f"p2=({human(o.p2.x)}, {human(o.p2.y)})")
    print(f"sums: s1={human(o.s1)} s2={human(o.s2)} residual={o.residual:.3g} "
          f"[{dt * 1e3:.3f} ms]")
    if o.labels_swapped:
        print("note: closed-form labels swapped to ascending point sums")
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write("point,x,y,sum\n")
            fh.write(f"p1,{f17(o.p1.x)},{f17(o.p1.y)},{f17(o.s1)}\n")
            fh.write(f"p2,{f17(o.p2.x)},{f17(o.p2.y)},{f17(o.s2)}\n")
    return 0


def cmd_stability(args) -> int:
    f = _require_lottery(args)
    o = interior_2cycle(f)
    rep = cycle_stability(f, o)
    e1, e2 = rep.eigenvalues
    print(f"2-cycle stability: eigenvalues=({e1:.6g}, {e2:.6g}) "
          f"trace={human(rep.trace)} det={human(rep.det)}")
    print(f"jury_pass={str(rep.jury_pass).lower()} spectral_radius={human(rep.spectral_radius)}")
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write("x1,y1,x2,y2,s1,s2,residual,trace,det,"
                     "eig1_re,eig1_im,eig2_re,eig2_im,jury_pass,spectral_radius\n")
            fh.write(",".join([
                f17(o.p1.x), f17(o.p1.y), f17(o.p2.x), f17(o.p2.y),
                f17(o.s1), f17(o.s2), f17(o.residual), f17(rep.trace), f17(rep.det),
                f17(e1.real), f17(e1.imag), f17(e2.real), f17(e2.imag),
                str(rep.jury_pass).lower(), f17(rep.spectral_radius),
            ]) + "\n")
    return 0


def _regime_text(f: LotteryRicker) -> str:
    rep = classify_regime(f)
    lines = [
        f"regime: {rep.regime.value}",
        f"transverse multiplier at (r1,0): {human(rep.transverse_xi)}",
        f"transverse multiplier at (0,r2): {human(rep.transverse_eta)}",
        f"extinction threshold: {human(rep.extinction_threshold)}",
        f"C1 (saddle structure, y invades x): {'PASS' if rep.c1 else 'FAIL'}",
        f"C2 (x invades the boundary 2-cycle): {'PASS' if rep.c2 else 'FAIL'}",
        f"C3 (heteroclinic connection found): {'PASS' if rep.c3 else 'FAIL'}",
    ]
    return "\n".join(lines)


def cmd_regime(args) -> int:
    f = _require_lottery(args)
    if f.a != 0.0:
        raise ValueError("regime classification requires a = 0")
    text = _regime_text(f)
    print(text)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text + "\n")
    return 0


def cmd_heteroclinic(args) -> int:
    f = _family(args)
    seed = None
    if args.x0 is not None or args.y0 is not None:
        if args.x0 is None or args.y0 is None:
            raise ValueError("provide both --x0 and --y0 for an explicit seed")
        seed = (args.x0, args.y0)
    res = trace_heteroclinic(f, offset=args.offset, tol=args.tol,
                             max_iter=args.max_iter, seed_point=seed)
    print(f"heteroclinic: found={str(res.found).lower()} "
          f"min_dist_to_eta={human(res.min_dist_to_eta)} "
          f"points={len(res.orbit)} exit={res.exit_reason.value}")
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write("rank,curve_id,point_index,x,y\n")
            for k, (x, y) in enumerate(res.orbit.points):
                fh.write(f"0,0,{k},{f17(x)},{f17(y)}\n")
    if args.fig:
        from .figures import save_heteroclinic_figure

        xi, eta = axis_equilibria(f)
        save_heteroclinic_figure(res.orbit.points, xi, eta, args.fig, res.found)
    return 0 if res.found else 3


def cmd_preimage(args) -> int:
    f = _require_lottery(args)
    rows: list[tuple[int, int, int, float, float]] = []
    curves_for_fig = []
    target = None
    if args.of_curve:
        res = trace_heteroclinic(f)
        if not res.found:
            raise DomainError("heteroclinic trace did not converge; no curve to pre-image")
        for k, (x, y) in enumerate(res.orbit.points):
            rows.append((0, 0, k, x, y))
        curves = preimages_curve(f, res.orbit, rank=args.rank,
                                 samples_per_segment=args.samples_per_segment)
        curves_for_fig = [res.orbit] + curves
        for cid, c in enumerate(curves, start=1):
            rank = int(c.meta.split(";")[0].split()[-1])
            for k, (x, y) in enumerate(c.points):
                rows.append((rank, cid, k, x, y))
        print(f"preimage: curve mode rank<={args.rank} curves={len(curves)} "
              f"points={sum(len(c.points) for c in curves)}")
    else:
        if args.x is None or args.y is None:
            raise ValueError("point mode requires --x and --y (or use --of-curve)")
        target = (args.x, args.y)
        rows.append((0, 0, 0, args.x, args.y))
        level = [target]
        total = 0
        for rank in range(1, args.rank + 1):
            nxt = []
            for q in level:
                nxt.extend(preimages_point(f, q))
            for cid, s in enumerate(nxt):
                rows.append((rank, cid, 0, s.x, s.y))
            total += len(nxt)
            level = nxt
        print(f"preimage: point mode target=({human(args.x)}, {human(args.y)}) "
              f"rank<={args.rank} points={total}")
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write("rank,curve_id,point_index,x,y\n")
            for rank, cid, k, x, y in rows:
                fh.write(f"{rank},{cid},{k},{f17(x)},{f17(y)}\n")
    if args.fig:
        from .figures import save_preimage_figure

        save_preimage_figure(curves_for_fig, args.fig, target=target)
    return 0


def cmd_basin(args) -> int:
    f = _family(args)
    o = _orbit_for(f)
    t0 = time.perf_counter()
    grid = rasterize(
        f, o, (args.xmin, args.xmax, args.ymin, args.ymax),
        args.nx, args.ny, max_iter=args.max_iter, tol=args.tol, axis_tol=args.axis_tol,
    )
    dt = time.perf_counter() - t0
    counts = {cls.name: int((grid.cells == int(cls)).sum()) for cls in CellClass}
    summary = " ".join(f"{k}={v}" for k, v in counts.items() if v)
    print(f"basin: {args.nx}x{args.ny} cells in {dt:.2f} s  {summary}")
    overlay_curves = []
    if args.overlay_rank > 0:
        res = trace_heteroclinic(f)
        overlay_curves = [res.orbit]
        if isinstance(f, LotteryRicker) and f.a == 0.0:
            overlay_curves += preimages_curve(f, res.orbit, rank=args.overlay_rank)
        mask = boundary_overlay(grid, overlay_curves)
        frac = undecided_near_overlay_fraction(grid, mask)
        print(f"overlay: curves={len(overlay_curves)} cells={int(mask.sum())} "
              f"undecided_within_2_cells={frac:.3f}")
    if args.out:
        write_grid_csv(args.out, grid)
    if args.pgm:
        write_pgm(args.pgm, grid)
    if args.ppm:
        write_ppm(args.ppm, grid)
    if args.fig:
        from .figures import save_basin_figure

        save_basin_figure(grid, args.fig, curves=overlay_curves)
    return 0


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        parameter=args.parameter, start=args.start, stop=args.stop, steps=args.steps,
        r1=args.r1, r2=args.r2, a=args.a,
    )
    rows = run_sweep(spec)
    ok = [r for r in rows if r["status"] == "ok"]
    flips = [
        (prev["value"], cur["value"])
        for prev, cur in zip(ok, ok[1:])
        if prev["jury_pass"] != cur["jury_pass"]
    ]
    print(f"sweep: {args.parameter} in [{human(args.start)}, {human(args.stop)}] "
          f"steps={args.steps} ok_rows={len(ok)} jury_transitions={len(flips)}")
    for lo, hi in flips:
        print(f"  jury_pass changes between {human(lo)} and {human(hi)}")
    if args.out:
        write_sweep_csv(args.out, rows)
    if args.fig:
        from .figures import save_sweep_figure

        save_sweep_figure(rows, args.fig)
    return 0


def _certify_text(args, f: LotteryRicker) -> str:
    rep = classify_regime(f)
    het = trace_heteroclinic(f) if f.r2 > f.r1 else None
    lines = [
        "certification report",
        f"family: lottery r1={human(f.r1)} r2={human(f.r2)} a={human(f.a)}",
        _regime_text(f),
    ]
    if rep.c2 and f.r2 > 2.0:
        bc = ricker_2cycle(f.r2)
        lines.append(f"  boundary 2-cycle invasion factor r1^2/(y1*y2): "
                     f"{human(f.r1 ** 2 / (bc.y1 * bc.y2))}")
    if het is not None:
        lines.append(f"  heteroclinic min distance: {human(het.min_dist_to_eta)} "
                     f"({het.exit_reason.value})")
    if rep.regime is Regime.X_WINS_GLOBALLY:
        ratio = lyapunov_certificate(f, "x_wins", samples=args.samples, seed=args.seed)
        bound = lyapunov_bound(f, "x_wins")
        verdict = "PASS" if ratio <= bound + 1e-12 else "FAIL"
        lines.append(f"lyapunov certificate (x_wins): max_ratio={human(ratio)} "
                     f"bound={human(bound)} {verdict}")
    elif rep.regime is Regime.Y_PERSISTS_X_EXTINCT:
        ratio = lyapunov_certificate(f, "x_extinct", samples=args.samples, seed=args.seed)
        bound = lyapunov_bound(f, "x_extinct")
        verdict = "PASS" if ratio <= bound + 1e-12 else "FAIL"
        lines.append(f"lyapunov certificate (x_extinct): max_ratio={human(ratio)} "
                     f"bound={human(bound)} {verdict}")
    else:
        lines.append("lyapunov certificate: n/a for this regime")
    est = persistence_probe(
        f, sample_points=args.points, burn_in=args.burn_in, horizon=args.horizon,
        exclusion_tol=args.exclusion_tol, seed=args.seed,
    )
    interior = int(est.interior_mask.sum())
    lines += [
        f"persistence probe: points={est.sample_points} burn_in={est.burn_in} "
        f"horizon={est.horizon}",
        f"  liminf min(x,y) over interior samples: {human(est.liminf_min)} "
        f"({'PASS' if est.liminf_min > 0 else 'FAIL'}: > 0)",
        f"  limsup x lower bound: {human(est.limsup_x)}",
        f"  interior samples: {interior}  boundary excluded: {est.boundary_count}  "
        f"suspected exceptional: {int(est.suspected_exceptional_mask.sum())}",
    ]
    return "\n".join(lines)


def cmd_certify(args) -> int:
    f = _require_lottery(args)
    if f.a != 0.0:
        raise ValueError("certify requires the lottery family with a = 0")
    text = _certify_text(args, f)
    print(text)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text + "\n")
    return 0


_HANDLERS = {
    "simulate": cmd_simulate,
    "orbit": cmd_orbit,
    "stability": cmd_stability,
    "regime": cmd_regime,
    "heteroclinic": cmd_heteroclinic,
    "preimage": cmd_preimage,
    "basin": cmd_basin,
    "sweep": cmd_sweep,
    "certify": cmd_certify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        args = _resolve(args)
        return _HANDLERS[args.command](args)
    except (DomainError, BlowupError, StaleOrbitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
