"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 regime violation,
4 check failure (gap bound, containment or FM verdict).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from .achievable import achievable_region, all_private_split, etw_split, hk_parameters
from .channel import ChannelRatios, Regime, classify_regime
from .constraints import ConstraintSet
from .gap import EmptySweep, SweepConfig, channel_gap_report, sweep
from .io import OutputDir, RunManifest, SpecError, digest, load_spec, load_specs, parse_json
from .outer import NotStrongRegime, mac_intersection, outer_region, strong_capacity
from .polytope import UnboundedPolytope, enumerate_vertices, remove_redundant
from .polytope.system import InfeasibleSystem
from .verify import EQUAL, TIMEOUT, fm_check

log = logging.getLogger("cyclic_ic")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_REGIME = 3
EXIT_CHECK = 4

FM_MAX_K = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _vertices_csv(variables, vertices) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(variables) + ["exact"])
    for v in vertices:
        w.writerow([repr(float(x)) for x in v] + [" ".join(str(x) for x in v)])
    return buf.getvalue()


def _parse_fix(items) -> dict[str, str]:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise CliError(f"--fix expects NAME=VALUE, got {item!r}", EXIT_VALIDATION)
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _write_set(out: OutputDir, stem: str, cs: ConstraintSet) -> None:
    out.write(f"{stem}.csv", cs.to_csv())
    out.write(f"{stem}.json", cs.to_json())


def _vertex_listing(cs: ConstraintSet, fix: Optional[dict] = None) -> tuple[tuple, list]:
    sys_ = remove_redundant(cs.to_system())
    if fix:
        sys_ = sys_.fix(fix)
    return sys_.variables, enumerate_vertices(sys_)


def _manifest(args, r: Optional[ChannelRatios], out: OutputDir, **extra) -> None:
    spec_digest = digest(r.to_dict()) if r is not None else digest(extra.get("config"))
    regime = classify_regime(r).value if r is not None else None
    RunManifest(args.command, spec_digest, getattr(args, "seed", None), regime,
                list(out.written), extra={k: v for k, v in extra.items() if k != "config"}
                ).write(out.path)


def cmd_region(args) -> int:
    r = load_spec(args.spec, args.db)
    cs = achievable_region(r, args.split)
    out = OutputDir(args.out)
    _write_set(out, "achievable", cs)
    if r.K <= 3:
        variables, verts = _vertex_listing(cs)
        out.write("achievable_vertices.csv", _vertices_csv(variables, verts))
    _manifest(args, r, out, split=args.split)
    print(f"achievable region: {len(cs)} constraints (K={r.K}, split={args.split})")
    return EXIT_OK


def cmd_outer(args) -> int:
    r = load_spec(args.spec, args.db)
    cs = outer_region(r)
    out = OutputDir(args.out)
    _write_set(out, "outer", cs)
    _manifest(args, r, out, annotations=list(cs.notes))
    for note in cs.notes:
        print(f"note: {note}", file=sys.stderr)
    print(f"outer bound: {len(cs)} constraints (K={r.K}, regime={cs.regime})")
    return EXIT_OK


def cmd_strong(args) -> int:
    r = load_spec(args.spec, args.db)
    try:
        cs = strong_capacity(r)
    except NotStrongRegime as exc:
        raise CliError(str(exc), EXIT_REGIME) from exc
    out = OutputDir(args.out)
    _write_set(out, "strong", cs)
    _manifest(args, r, out, annotations=list(cs.notes))
    for note in cs.notes:
        print(f"note: {note}")
    print(f"strong-regime capacity: {len(cs)} constraints (K={r.K}, regime={cs.regime})")
    return EXIT_OK


def cmd_mac(args) -> int:
    r = load_spec(args.spec, args.db)
    cs = mac_intersection(r)
    out = OutputDir(args.out)
    _write_set(out, "mac", cs)
    reduced = remove_redundant(cs.to_system())
    out.write("mac_reduced.txt", reduced.dumps())
    _manifest(args, r, out, annotations=list(cs.notes))
    print(f"MAC intersection: {len(cs)} rows, {len(reduced)} after redundancy removal")
    return EXIT_OK


def _run_sweep(args, cfg: SweepConfig, out: OutputDir) -> int:
    try:
        rep = sweep(cfg)
    except EmptySweep as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc
    out.write("sweep.csv", rep.to_csv())
    out.write("sweep_summary.json", rep.summary_json())
    out.write("replay.json", json.dumps(rep.replay(), indent=2) + "\n")
    _manifest(args, None, out, config=cfg.to_dict())
    s = rep.summary()
    print(f"sweep: {s['samples']} samples, max normalized gap {s['max_normalized_gap']:.4f} bits, "
          f"{s['gap_violations']} gap violations, "
          f"{s['containment_failures']}/{s['containment_checked']} containment failures")
    return EXIT_CHECK if rep.failures else EXIT_OK


def _load_sweep_config(path: str, seed: Optional[int]) -> SweepConfig:
    p = Path(path)
    data = parse_json(p.read_text(), str(p))
    if not isinstance(data, dict):
        raise SpecError(f"{p}: sweep config must be an object")
    if seed is not None:
        data["seed"] = seed
    try:
        return SweepConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"{p}: {exc}") from exc


def cmd_gap(args) -> int:
    out = OutputDir(args.out)
    if args.sweep:
        return _run_sweep(args, _load_sweep_config(args.sweep, args.seed), out)
    if not args.spec:
        raise CliError("gap needs a channel spec or --sweep CONFIG", EXIT_VALIDATION)
    channels = load_specs(args.spec, args.db)
    failed = False
    summaries = []
    for k, r in enumerate(channels):
        regime = classify_regime(r)
        if regime != Regime.WEAK and not args.force:
            raise CliError(
                f"channel {k} is in the {regime.value} regime; the two-bit gap is only "
                "established for weak interference (use --force to report anyway)", EXIT_REGIME)
        rep = channel_gap_report(r, args.split)
        suffix = "" if len(channels) == 1 else f"_{k}"
        out.write(f"gap{suffix}.csv", rep.to_csv())
        summaries.append(rep.summary())
        if rep.asserted and not rep.all_pass:
            failed = True
            print(f"channel {k}: gap bound violated at {rep.summary()['violations']}",
                  file=sys.stderr)
        else:
            print(f"channel {k}: regime={regime.value} max normalized gap "
                  f"{rep.max_normalized_gap:.4f} bits, all pass={rep.all_pass}")
    out.write("gap_summary.json", json.dumps(
        summaries[0] if len(summaries) == 1 else summaries, indent=2) + "\n")
    _manifest(args, channels[0] if len(channels) == 1 else None, out,
              **({} if len(channels) == 1 else {"config": [c.to_dict() for c in channels]}))
    return EXIT_CHECK if failed else EXIT_OK


def cmd_sweep(args) -> int:
    try:
        cfg = SweepConfig(
            k_values=tuple(args.k), samples=args.samples, snr_db=tuple(args.snr_db),
            inr_db=tuple(args.inr_db), regime=args.regime, seed=args.seed,
            containment=args.containment, split=args.split, workers=args.workers)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc
    return _run_sweep(args, cfg, OutputDir(args.out))


def cmd_fm_check(args) -> int:
    r = load_spec(args.spec, args.db)
    if r.K > args.max_k:
        if not args.allow_large:
            raise CliError(f"K={r.K} exceeds the FM guard --max-k={args.max_k}; "
                           "pass --allow-large to run anyway", EXIT_VALIDATION)
        log.warning("running FM at K=%d; elimination cost grows quickly with K", r.K)
    split = {"etw": etw_split, "none": all_private_split}[args.split](r)
    verdict = fm_check(hk_parameters(r, split), corrupt=args.corrupt, timeout=args.timeout)
    out = OutputDir(args.out)
    out.write("fm_verdict.json", json.dumps(verdict.to_dict(), indent=2) + "\n")
    out.write("fm_projected.txt", verdict.projected.dumps())
    out.write("fm_closed_form.txt", verdict.closed_form.dumps())
    _manifest(args, r, out, verdict=verdict.verdict)
    print(f"fm-check K={r.K}: {verdict.verdict} ({verdict.seconds:.2f}s)")
    if verdict.verdict == TIMEOUT:
        print(f"partial result after eliminating {list(verdict.eliminated)}", file=sys.stderr)
    elif verdict.witness is not None:
        print(f"witness: {[str(v) for v in verdict.witness.point]} ({verdict.witness.note})")
    return EXIT_OK if verdict.verdict == EQUAL else EXIT_CHECK


def cmd_vertices(args) -> int:
    r = load_spec(args.spec, args.db)
    builders = {
        "achievable": lambda: achievable_region(r, args.split),
        "outer": lambda: outer_region(r),
        "strong": lambda: strong_capacity(r),
        "mac": lambda: mac_intersection(r),
    }
    try:
        cs = builders[args.region]()
    except NotStrongRegime as exc:
        raise CliError(str(exc), EXIT_REGIME) from exc
    fix = _parse_fix(args.fix)
    if r.K - len(fix) > 3:
        raise CliError(f"{r.K - len(fix)} free rates; fix all but at most 3 with --fix",
                       EXIT_VALIDATION)
    try:
        variables, verts = _vertex_listing(cs, fix)
    except (ValueError, UnboundedPolytope, InfeasibleSystem) as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc
    out = OutputDir(args.out)
    out.write(f"{args.region}_vertices.csv", _vertices_csv(variables, verts))
    _manifest(args, r, out, region=args.region, fixed=fix)
    print(f"{args.region}: {len(verts)} vertices over {', '.join(variables)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclic-ic", description="Rate regions of the K-user cyclic Gaussian interference channel.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def spec_cmd(name, func, help_, spec_required=True):
        p = sub.add_parser(name, help=help_)
        if spec_required:
            p.add_argument("spec", help="channel spec JSON file")
        p.add_argument("--db", action="store_true", help="snr/inr/gains in the spec are in dB")
        p.add_argument("--out", default=".", help="output directory")
        p.set_defaults(func=func)
        return p

    p = spec_cmd("region", cmd_region, "Han-Kobayashi achievable region")
    p.add_argument("--split", choices=("etw", "none"), default="etw")
    spec_cmd("outer", cmd_outer, "outer bound (asserted in the weak regime)")
    spec_cmd("strong", cmd_strong, "capacity region in the strong regime")
    spec_cmd("mac", cmd_mac, "intersection of the per-receiver MAC regions")

    p = spec_cmd("gap", cmd_gap, "per-constraint gap report", spec_required=False)
    p.add_argument("spec", nargs="?", help="channel spec or replay file")
    p.add_argument("--sweep", metavar="CONFIG", help="run a sweep from a JSON config instead")
    p.add_argument("--seed", type=int, default=None, help="override the sweep config seed")
    p.add_argument("--force", action="store_true", help="report outside the weak regime")
    p.add_argument("--split", choices=("etw", "none"), default="etw")

    p = spec_cmd("sweep", cmd_sweep, "seeded random gap sweep", spec_required=False)
    p.add_argument("--k", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--snr-db", type=float, nargs=2, default=[0.0, 40.0])
    p.add_argument("--inr-db", type=float, nargs=2, default=[0.0, 40.0])
    p.add_argument("--regime", choices=("weak", "strong", "mixed", "any"), default="weak")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--containment", action="store_true", help="exact polytope containment too")
    p.add_argument("--split", choices=("etw", "none"), default="etw")
    p.add_argument("--workers", type=int, default=1)

    p = spec_cmd("fm-check", cmd_fm_check, "FM projection vs closed-form achievable region")
    p.add_argument("--max-k", type=int, default=FM_MAX_K)
    p.add_argument("--allow-large", action="store_true")
    p.add_argument("--timeout", type=float, default=1800.0, help="seconds")
    p.add_argument("--split", choices=("etw", "none"), default="etw")
    p.add_argument("--corrupt", action="store_true",
                   help="tighten the closed form slightly (negative control)")

    p = spec_cmd("vertices", cmd_vertices, "vertex list of a region (<= 3 free rates)")
    p.add_argument("--region", choices=("achievable", "outer", "strong", "mac"), default="achievable")
    p.add_argument("--split", choices=("etw", "none"), default="etw")
    p.add_argument("--fix", action="append", metavar="R3=VALUE", help="slice at a fixed rate")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
