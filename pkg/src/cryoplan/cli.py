"""Command-line interface.

Verbs:
    solve <scenario>                solve one scenario, print the report
    compare <a> <b> [...]           side-by-side loads/temperatures with deltas
    noise <scenario> --chain NAME [--target K@GHz]
    fit <dir> [--exclude a..b]      batch-fit a trace directory
    synth <specfile>                generate a synthetic trace batch
    serve [--port N]                run the HTTP service

Common flags: --data-dir (or CRYOPLAN_DATA_DIR), --format human|machine,
--full-precision.  Exit codes: 0 ok, 2 validation problem, 3 solver
non-convergence, 4 I/O problem.
"""

from __future__ import annotations

import argparse
import os
import sys

from .analysis import analyze_batch, render_batch_summary
from .data import DataContext
from .errors import (
    ConvergenceError,
    CryoplanError,
    MaterialError,
    ParseError,
    ScenarioError,
    SolverError,
    UnreachableTargetError,
    ValidationError,
)
from .noise import OccupationState, bose_einstein_occupation, infer_source_temperature
from .report import compare, render_comparison, render_human, render_machine, run_report
from .synth import generate_interleaved_batch
from .traceio import write_batch

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cryoplan", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--data-dir", default=None,
                        help="material/capacity/scenario data directory (env CRYOPLAN_DATA_DIR)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("human", "machine"), default="human")
        p.add_argument("--full-precision", action="store_true",
                       help="print full float precision instead of 4 significant digits")

    p = sub.add_parser("solve", help="solve one scenario")
    p.add_argument("scenario", help="bundled scenario name or file path")
    add_format(p)

    p = sub.add_parser("compare", help="compare two or more scenarios")
    p.add_argument("scenarios", nargs="+", help="bundled names or file paths (>= 2)")
    add_format(p)

    p = sub.add_parser("noise", help="noise chain inference for a scenario")
    p.add_argument("scenario")
    p.add_argument("--chain", required=True, help="noise chain name in the scenario")
    p.add_argument("--target", default=None, metavar="K@GHz",
                   help="override target, e.g. 0.1@6 for 100 mK at 6 GHz")
    add_format(p)

    p = sub.add_parser("fit", help="batch-fit a directory of traces")
    p.add_argument("trace_dir")
    p.add_argument("--exclude", action="append", default=[], metavar="FROM..TO",
                   help="timestamp window to exclude (repeatable)")
    add_format(p)

    p = sub.add_parser("synth", help="generate a synthetic interleaved batch")
    p.add_argument("spec", help="key: value spec file (see docs)")
    p.add_argument("--out", default=None, help="output directory (default from spec)")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8791)
    p.add_argument("--host", default="127.0.0.1")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (ParseError, ValidationError, MaterialError, ScenarioError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ConvergenceError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        for stage, res in sorted(exc.residuals.items()):
            print(f"  residual {stage}: {res:.3e} W", file=sys.stderr)
        return EXIT_SOLVER
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except CryoplanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def _sig(args) -> int:
    return 0 if getattr(args, "full_precision", False) else 4


def _dispatch(args) -> int:
    if args.command == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(args.data_dir), host=args.host, port=args.port)
        return EXIT_OK

    if args.command == "synth":
        return _cmd_synth(args)

    if args.command == "fit":
        exclusions = []
        for window in args.exclude:
            try:
                lo, hi = window.split("..")
                exclusions.append((float(lo), float(hi)))
            except ValueError:
                raise ValidationError(f"bad exclusion window {window!r} (want FROM..TO)",
                                      field="exclude") from None
        summary = analyze_batch(args.trace_dir, exclusions)
        sys.stdout.write(render_batch_summary(summary, machine=args.format == "machine"))
        return EXIT_OK

    data = DataContext.open(args.data_dir)
    if args.command == "solve":
        bundle = run_report(data.load_scenario(args.scenario), data)
        render = render_machine if args.format == "machine" else render_human
        sys.stdout.write(render(bundle, sig=_sig(args)))
        return EXIT_OK

    if args.command == "compare":
        if len(args.scenarios) < 2:
            raise ValidationError("compare needs at least two scenarios", field="scenarios")
        bundles = [run_report(data.load_scenario(s), data) for s in args.scenarios]
        sys.stdout.write(render_comparison(compare(bundles), machine=args.format == "machine",
                                           sig=_sig(args)))
        return EXIT_OK

    if args.command == "noise":
        scenario = data.load_scenario(args.scenario)
        if args.chain not in scenario.noise_chains:
            raise ValidationError(
                f"no chain {args.chain!r} (have: {', '.join(sorted(scenario.noise_chains))})",
                field="chain",
            )
        spec = scenario.noise_chains[args.chain]
        chain = spec.chain
        target_k = spec.target_temperature_k
        if args.target:
            try:
                t_s, f_s = args.target.split("@")
                target_k = float(t_s)
                freq = float(f_s) * 1e9
            except ValueError:
                raise ValidationError(f"bad target {args.target!r} (want K@GHz)",
                                      field="target") from None
            if freq != chain.frequency_hz:
                raise ValidationError(
                    f"target frequency {freq:g} Hz differs from chain frequency "
                    f"{chain.frequency_hz:g} Hz", field="target")
        if target_k is None:
            raise ValidationError("chain has no configured target; pass --target", field="target")
        occ = OccupationState(bose_einstein_occupation(target_k, chain.frequency_hz),
                              chain.frequency_hz)
        try:
            source = infer_source_temperature(occ, chain)
        except UnreachableTargetError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        if args.format == "machine":
            print(f"chain\t{args.chain}\ttarget_K\t{target_k:g}\tinferred_source_K\t{source:.6g}")
        else:
            print(f"chain '{args.chain}' @ {chain.frequency_hz / 1e9:g} GHz")
            print(f"  target {target_k * 1e3:g} mK -> inferred source {source:.4g} K")
            assumed = [e for e in chain.elements if e.assumed]
            for el in assumed:
                print(f"  assumption: {el.label} = {el.attenuation_db:g} dB at {el.temperature_k:g} K")
        return EXIT_OK

    raise ValidationError(f"unknown command {args.command!r}", field="command")


def _cmd_synth(args) -> int:
    spec: dict[str, str] = {}
    with open(args.spec, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if ":" not in line:
                raise ParseError("expected 'key: value'", line=lineno, path=args.spec)
            key, _, val = line.partition(":")
            spec[key.strip()] = val.strip()

    def get(key, cast, default):
        return cast(spec[key]) if key in spec else default

    out_dir = args.out or spec.get("out_dir")
    if not out_dir:
        raise ValidationError("spec needs out_dir (or pass --out)", field="synth.out_dir")
    traces = generate_interleaved_batch(
        hours=get("hours", float, 20.0),
        cycle_s=get("cycle_s", float, 240.0),
        t1_mean_s=get("t1_mean_us", float, 100.0) * 1e-6,
        t1_sigma_s=get("t1_sigma_us", float, 10.0) * 1e-6,
        target_t_phi_s=get("t_phi_us", float, 65.0) * 1e-6,
        ramsey_frequency_hz=get("ramsey_frequency_khz", float, 50.0) * 1e3,
        noise_sigma=get("noise_sigma", float, 0.02),
        seed=get("seed", int, 1),
        start_timestamp=get("start_timestamp", float, 0.0),
        label=spec.get("label", "synthetic"),
        tilt_sigma_per_s=get("tilt_sigma_per_s", float, 0.0),
    )
    paths = write_batch(out_dir, traces)
    print(f"wrote {len(paths)} traces to {out_dir}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
