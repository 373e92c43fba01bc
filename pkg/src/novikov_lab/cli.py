"""Command-line front end: ``novikov-lab oracle|solve|analyze|compare``.

Exit codes: 0 ok, 1 usage, 2 truncation, 3 divergence, 4 comparison
impossible.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import io
from .charsolver import init_from_u0, run
from .config import RunConfig
from .errors import DivergenceError, NovikovLabError, UsageError
from .jets import EXACT, REAL, format_coeff
from .oracle import Model, make_config, mixed_orders, orders
from .refsolver import compare_solutions, ref_init, ref_run
from .singularity import analyze_run, report_to_dict

log = logging.getLogger("novikov_lab")

CONFIG_ECHO = "config.toml"
SNAPSHOTS = "snapshots.csv"
ENERGY = "energy.csv"
EVENTS_RAW = "events_raw.jsonl"
EVENTS = "events.jsonl"
REPORT = "report.json"
DEVIATION = "deviation.csv"
LAST_GOOD = "last_good.csv"


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; 2 is reserved for truncation
    def error(self, message):
        raise UsageError(message)


def _add_config_args(p):
    p.add_argument("--config", type=Path, help="TOML run configuration")
    p.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                   help="override one config entry (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="novikov-lab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("oracle", help="exact vanishing orders at a singular point")
    p.add_argument("--model", default="novikov", help="novikov or ch")
    p.add_argument("--v", default="pi,1", help='angle jet, e.g. "pi,0,2"')
    p.add_argument("--q", default="1", help="q jet coefficients")
    p.add_argument("--order", type=int, default=12, help="truncation order K")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="domain", action="store_const", const=EXACT)
    mode.add_argument("--real", dest="domain", action="store_const", const=REAL)
    p.set_defaults(domain=EXACT)
    p.add_argument("--u", help="u jet coefficients (default: integrated from u_Y)")
    p.add_argument("--u0", default="0", help="u at the point when --u is absent")
    p.add_argument("--w", help="jet of P1 + dxP2 (default: zero)")
    p.add_argument("--mixed", action="store_true", help="also report T-derivative orders")
    p.add_argument("--out", type=Path, help="write JSON here instead of stdout")

    p = sub.add_parser("solve", help="run the characteristic solver")
    _add_config_args(p)
    p.add_argument("--out", type=Path, required=True, help="output directory")

    p = sub.add_parser("analyze", help="detect, classify and fit v = pi events")
    p.add_argument("run_dir", type=Path, help="directory written by solve")
    _add_config_args(p)
    p.add_argument("--out", type=Path, help="output directory (default: run_dir)")

    p = sub.add_parser("compare", help="characteristic vs x-space solver")
    _add_config_args(p)
    p.add_argument("--out", type=Path, required=True, help="output directory")
    return parser


def _load_config(args, fallback: Path | None = None) -> RunConfig:
    path = args.config or (fallback if fallback is not None and fallback.exists() else None)
    cfg = RunConfig.load(path) if path is not None else RunConfig()
    for item in args.set:
        key, sep, raw = item.partition("=")
        if not sep:
            raise UsageError(f"--set expects SECTION.KEY=VALUE, got {item!r}")
        cfg.set(key.strip(), raw.strip())
    return cfg.validate()


def _outdir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    return path


def _dump_last_good(out, exc):
    state = exc.last_good
    if state is None:
        return
    if hasattr(state, "Y"):
        io.write_snapshots_csv(out / LAST_GOOD, [state])
    else:
        io.write_ref_snapshots_csv(out / LAST_GOOD, [state])


def cmd_oracle(args) -> int:
    cfg = make_config(model=args.model, v=args.v, q=args.q, order=args.order,
                      domain=args.domain, u=args.u, w=args.w, u0=args.u0)
    data = orders(cfg).to_dict()
    if args.mixed:
        if cfg.model is not Model.NOVIKOV:
            raise UsageError("--mixed is only defined for the Novikov model")
        m = mixed_orders(cfg)
        data["mixed"] = {
            "uYt_order": m["uYt_order"],
            "xYt_order": m["xYt_order"],
            "v_Yt": format_coeff(m["v_Yt"]),
            "paper_claims": {k: format_coeff(v) for k, v in m["paper"].items()},
            "oracle_values": {k: format_coeff(v) for k, v in m["oracle"].items()},
        }
    text = json.dumps(data, indent=2) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return 0


def cmd_solve(args) -> int:
    cfg = _load_config(args)
    out = _outdir(args.out)
    cfg.write(out / CONFIG_ECHO)
    state = init_from_u0(cfg.u0.profile(), cfg.grid.L, cfg.grid.N)
    try:
        rec = run(state, cfg.time.dt, cfg.time.t_end, cfg.time.snapshot_every)
    except DivergenceError as exc:
        _dump_last_good(out, exc)
        print(f"diverged: {exc}; last good state in {out / LAST_GOOD}", file=sys.stderr)
        return exc.exit_code
    io.write_snapshots_csv(out / SNAPSHOTS, rec.snapshots)
    io.write_energy_csv(out / ENERGY, rec.energy_series)
    io.write_jsonl(out / EVENTS_RAW, [
        {"t_before": a, "t_after": b, "node": i, "v_before": va, "v_after": vb}
        for a, b, i, va, vb in rec.events_raw])
    print(f"t_end={rec.snapshots[-1].t:.6g} snapshots={len(rec.snapshots)} "
          f"energy_drift={rec.energy_drift():.3e} crossings={len(rec.events_raw)}")
    return 0


def plot_rows(snap, event, fits) -> list:
    """(r, |u - u0|, side) for every node inside the outermost fit window."""
    if not fits:
        return []
    r_lo = min(f.window[0] for f in fits)
    r_hi = max(f.window[1] for f in fits)
    rows = []
    for side in ("left", "right"):
        r = snap.x - event.x0 if side == "right" else event.x0 - snap.x
        sel = np.flatnonzero((r >= r_lo) & (r <= r_hi))
        sel = sel[np.argsort(r[sel], kind="stable")]
        rows.extend((float(r[i]), float(abs(snap.u[i] - event.u0_val)), side) for i in sel)
    return rows


def cmd_analyze(args) -> int:
    cfg = _load_config(args, fallback=args.run_dir / CONFIG_ECHO)
    rec = io.record_from_csv(args.run_dir / SNAPSHOTS)
    out = _outdir(args.out or args.run_dir)
    report = analyze_run(rec, cfg.analysis.fit_config())
    io.write_json(out / REPORT, report_to_dict(report))
    io.write_jsonl(out / EVENTS, [item["event"].to_dict() for item in report["events"]])
    for k, item in enumerate(report["events"]):
        e = item["event"]
        if item["fits"]:
            io.write_plot_data_csv(out / f"plot_event_{k:03d}.csv",
                                   plot_rows(rec.snapshots[e.snapshot], e, item["fits"]))
    for item in report["events"]:
        e, med = item["event"], item["median_alpha"]
        alpha = "-" if med is None else f"{med:.4f}"
        print(f"t0={e.t0:.6g} x0={e.x0:.6g} type={e.classification} median_alpha={alpha}")
    return 0


def cmd_compare(args) -> int:
    cfg = _load_config(args)
    out = _outdir(args.out)
    cfg.write(out / CONFIG_ECHO)
    profile = cfg.u0.profile()
    t = cfg.time
    try:
        rec = run(init_from_u0(profile, cfg.grid.L, cfg.grid.N), t.dt, t.t_end,
                  t.snapshot_every)
        ref = ref_run(ref_init(profile, cfg.grid.L, cfg.grid.N, cfg.compare.slope_cap),
                      t.dt, t.t_end, t.snapshot_every, stop_at_cap=True)
    except DivergenceError as exc:
        _dump_last_good(out, exc)
        print(f"diverged: {exc}; last good state in {out / LAST_GOOD}", file=sys.stderr)
        return exc.exit_code
    worst, series = compare_solutions(rec, ref, cfg.compare.jac_floor)
    io.write_deviation_csv(out / DEVIATION, series)
    print(f"max relative L2 deviation {worst:.6e} over {len(series)} shared times "
          f"(t <= {series[-1][0]:.6g})")
    return 0


COMMANDS = {"oracle": cmd_oracle, "solve": cmd_solve,
            "analyze": cmd_analyze, "compare": cmd_compare}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return COMMANDS[args.command](args)
    except NovikovLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
