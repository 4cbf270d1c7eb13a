"""Command-line entry point: reproducible simulate / count / estimate runs,
QPM design, and the bundled source-comparison report.

Subcommands: qpm, simulate, count, estimate, table1. All numeric inputs are
SI base units (meters, watts, hertz, seconds); temperatures are degrees
Celsius. Whenever a command writes an output file it also writes a
``<output>.manifest`` key-value file carrying the fully resolved
configuration, the seed, and the output digest; ``simulate --from-manifest``
re-runs a manifest and reproduces the event file bit-exactly.

Exit codes: 0 success, 1 usage/config error, 2 data/parse error,
3 inference/solver error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import (ConfigError, DataFormatError, OpticalPower, Rate,
                   SolverError, Wavelength)
from . import counting, estimator, keyvalue, qpm, source
from .events import read_event_file, write_event_file

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_SOLVER = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; this CLI reserves 2
    for data errors, so usage problems are rethrown and mapped to 1."""

    def error(self, message):
        raise _UsageError(message)


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _write_manifest(out_path: Path, command: str,
                    fields: dict[str, object]) -> Path:
    manifest = {"command": command, "version": __version__}
    manifest.update(fields)
    if out_path.exists():
        manifest["output_sha256"] = _sha256_file(out_path)
    mpath = Path(str(out_path) + ".manifest")
    keyvalue.write_keyvalue(mpath, manifest, header=["pairsim run manifest"])
    return mpath


def _emit(text: str, out: str | None, command: str,
          manifest_fields: dict[str, object]) -> None:
    """Print a report, or write it to --out plus a manifest."""
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.write_text(text, encoding="utf-8")
    fields = dict(manifest_fields)
    fields["output"] = str(path)
    _write_manifest(path, command, fields)


def _mapping_report(mapping: dict[str, object], csv: bool) -> str:
    """Key-value or CSV rendering of one flat result mapping; both carry
    identical numeric values (float repr)."""
    def fmt(v):
        if v is None:
            return ""
        if isinstance(v, float):
            return repr(v)
        if isinstance(v, bool):
            return "true" if v else "false"
        return str(v)

    if csv:
        keys = list(mapping)
        return (",".join(keys) + "\n"
                + ",".join(fmt(mapping[k]) for k in keys) + "\n")
    return "".join(f"{k} = {fmt(v)}\n" for k, v in mapping.items())


# ---------------------------------------------------------------- qpm ----

def _point_mapping(point: qpm.QpmPoint, model) -> dict[str, object]:
    return {
        "poling_period_m": point.poling_period_um * 1e-6,
        "temperature_c": point.temperature_c,
        "pump_wavelength_m": point.pump.meters,
        "signal_wavelength_m": point.signal.meters,
        "idler_wavelength_m": point.idler.meters,
        "qpm_order": point.qpm_order,
        "phase_mismatch_rad_per_m": qpm.phase_mismatch(point, model),
    }


def _cmd_qpm(args) -> int:
    model = (qpm.load_sellmeier_file(args.sellmeier) if args.sellmeier
             else qpm.default_sellmeier_model())
    pump = Wavelength.from_meters(args.pump)
    order = args.order

    if args.curve is not None:
        if args.period is None:
            raise _UsageError("--curve requires --period")
        try:
            t0, t1, n = args.curve.split(":")
            temps = np.linspace(float(t0), float(t1), int(n))
        except ValueError:
            raise _UsageError(
                f"--curve expects START:STOP:POINTS, got {args.curve!r}") from None
        points = qpm.temperature_tuning_curve(
            pump, args.period * 1e6, temps, model, order)
        lines = ["temperature_c,signal_wavelength_m,idler_wavelength_m"]
        lines += [f"{p.temperature_c:.8g},{p.signal.meters:.10g},"
                  f"{p.idler.meters:.10g}" for p in points]
        _emit("\n".join(lines) + "\n", args.out, "qpm", {
            "pump_wavelength_m": args.pump,
            "poling_period_m": args.period,
            "qpm_order": order,
            "curve": args.curve,
        })
        return EXIT_OK

    have_signal = args.signal is not None
    have_period = args.period is not None
    have_temp = args.temp is not None

    if have_signal and have_temp and not have_period:
        point = qpm.solve_poling_period(
            pump, Wavelength.from_meters(args.signal), args.temp, model, order)
    elif have_period and have_temp and not have_signal:
        point = qpm.solve_signal_wavelength(
            pump, args.period * 1e6, args.temp, model, order)
    elif have_period and have_signal and not have_temp:
        point = qpm.solve_temperature(
            pump, Wavelength.from_meters(args.signal), args.period * 1e6,
            model, order)
    elif have_period and not have_signal and not have_temp:
        # degenerate operation assumed when only the period is pinned
        t = qpm.solve_degeneracy_temperature(pump, args.period * 1e6, model,
                                             order)
        degenerate = Wavelength(2.0 * pump.nm)
        point = qpm.QpmPoint(poling_period_um=args.period * 1e6,
                             temperature_c=t, pump=pump, signal=degenerate,
                             idler=degenerate, qpm_order=order)
    elif have_signal and have_period and have_temp:
        raise _UsageError("period, temperature, and signal are all given; "
                          "leave exactly one unknown")
    else:
        raise _UsageError("give two of --period/--temp/--signal (or just "
                          "--period for degenerate operation)")

    _emit(_mapping_report(_point_mapping(point, model), args.csv),
          args.out, "qpm", {"pump_wavelength_m": args.pump,
                            "qpm_order": order})
    return EXIT_OK


# ----------------------------------------------------------- simulate ----

def _load_run_configs(path: str):
    kv = keyvalue.read_keyvalue(path)
    return (source.source_from_mapping(kv, path),
            source.chain_from_mapping(kv, path))


def _simulate_one(src_cfg, chain_cfg, run_cfg, out_path: Path,
                  manifest_extra: dict[str, object]) -> dict[str, object]:
    stream, truth = source.simulate_run(src_cfg, chain_cfg, run_cfg)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_event_file(stream, out_path)

    fields: dict[str, object] = {}
    for k, v in source.source_to_mapping(src_cfg).items():
        fields[f"config.{k}"] = v
    for k, v in source.chain_to_mapping(chain_cfg).items():
        fields[f"config.{k}"] = v
    fields["duration_s"] = run_cfg.duration_s
    fields["seed"] = run_cfg.seed
    fields["resolution_ps"] = run_cfg.timestamp_resolution_ps
    fields.update(manifest_extra)
    fields["output"] = str(out_path)
    _write_manifest(out_path, "simulate", fields)

    n1, n2 = stream.counts()
    return {
        "output": str(out_path),
        "seed": run_cfg.seed,
        "events_written": stream.n_events,
        "singles_1": n1,
        "singles_2": n2,
        "pairs_emitted": truth.pairs_emitted,
        "pairs_detected_coincident": truth.pairs_detected_coincident,
        "darks_emitted_1": truth.darks_emitted[0],
        "darks_emitted_2": truth.darks_emitted[1],
    }


def _cmd_simulate(args) -> int:
    if args.from_manifest:
        kv = keyvalue.read_keyvalue(args.from_manifest)
        src_txt = args.from_manifest
        cfg = {k.partition(".")[2]: v for k, v in kv.items()
               if k.startswith("config.")}
        src_cfg = source.source_from_mapping(cfg, src_txt)
        chain_cfg = source.chain_from_mapping(cfg, src_txt)
        duration = keyvalue.get_float(kv, "duration_s", src_txt)
        seed = keyvalue.get_int(kv, "seed", src_txt)
        resolution = keyvalue.get_int(kv, "resolution_ps", src_txt)
        out = args.out or keyvalue.get_str(kv, "output", src_txt)
        config_path = kv.get("config_file", "")
    else:
        if args.config is None or args.duration is None or args.seed is None:
            raise _UsageError("simulate needs --config, --duration, and "
                              "--seed (or --from-manifest)")
        if args.out is None:
            raise _UsageError("simulate needs --out")
        src_cfg, chain_cfg = _load_run_configs(args.config)
        duration, seed, resolution = args.duration, args.seed, args.resolution_ps
        out = args.out
        config_path = args.config

    if duration <= 0:
        raise _UsageError(f"duration must be > 0 s, got {duration}")

    seeds = [seed + k for k in range(args.jobs)]
    outputs = ([Path(out)] if args.jobs == 1
               else [Path(f"{out}.seed{s}") for s in seeds])
    extra = {"config_file": config_path} if config_path else {}

    if args.jobs == 1:
        summaries = [_simulate_one(
            src_cfg, chain_cfg,
            source.RunConfig(duration, seeds[0], resolution),
            outputs[0], extra)]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(
                _simulate_one, src_cfg, chain_cfg,
                source.RunConfig(duration, s, resolution), path, extra)
                for s, path in zip(seeds, outputs)]
            summaries = [f.result() for f in futures]

    for summary in summaries:
        sys.stdout.write(_mapping_report(summary, csv=False))
    return EXIT_OK


# -------------------------------------------------------------- count ----

def _cmd_count(args) -> int:
    stream = read_event_file(args.events)
    window = counting.WindowConfig(
        coincidence_window_ns=args.window * 1e9,
        accidental_delay_ns=args.delay * 1e9)
    summary = counting.net_summary(
        stream, window, (Rate(args.dark1), Rate(args.dark2)))
    _emit(_mapping_report(summary.to_mapping(), args.csv), args.out, "count", {
        "events_file": args.events,
        "window_s": args.window,
        "delay_s": args.delay,
        "dark1_hz": args.dark1,
        "dark2_hz": args.dark2,
    })
    return EXIT_OK


# ----------------------------------------------------------- estimate ----

def _read_summary_csv(path: str) -> dict[str, str]:
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines()
             if ln.strip()]
    if len(lines) < 2:
        raise DataFormatError(f"{path}: expected a CSV header and one row")
    keys = lines[0].split(",")
    values = lines[1].split(",")
    if len(keys) != len(values):
        raise DataFormatError(f"{path}: header/row column mismatch")
    return dict(zip(keys, values))


def _cmd_estimate(args) -> int:
    duration = args.duration
    if args.summary:
        row = _read_summary_csv(args.summary)
        s1 = keyvalue.get_float(row, "s1_net_hz", args.summary)
        s2 = keyvalue.get_float(row, "s2_net_hz", args.summary)
        rc = keyvalue.get_float(row, "rc_net_hz", args.summary)
        if duration is None and "duration_s" in row:
            duration = keyvalue.get_float(row, "duration_s", args.summary)
    else:
        if args.s1 is None or args.s2 is None or args.rc is None:
            raise _UsageError("estimate needs --s1, --s2, and --rc "
                              "(or --summary)")
        s1, s2, rc = args.s1, args.s2, args.rc

    inp = estimator.EstimateInput(
        s1_net=Rate(s1), s2_net=Rate(s2), rc_net=Rate(rc),
        splitter_correction=args.splitter,
        pump_power_guided=OpticalPower(args.power) if args.power is not None else None,
        pump_wavelength=Wavelength.from_meters(args.pump) if args.pump is not None else None,
    )
    result = estimator.estimate(inp, duration_s=duration)
    _emit(_mapping_report(result.to_mapping(), args.csv), args.out,
          "estimate", {
              "s1_net_hz": s1, "s2_net_hz": s2, "rc_net_hz": rc,
              "splitter_correction": args.splitter,
              "pump_power_w": args.power, "pump_wavelength_m": args.pump,
              "duration_s": duration,
          })
    return EXIT_OK


# ------------------------------------------------------------- table1 ----

def _cmd_table1(args) -> int:
    records = estimator.load_source_records(args.data)
    rows = estimator.compare_sources(records,
                                     max_deviation_factor=args.max_dev)
    text = (estimator.comparison_csv(rows) if args.csv
            else estimator.comparison_text(rows))
    _emit(text, args.out, "table1", {
        "data_file": args.data or "<bundled>",
        "max_deviation_factor": args.max_dev,
    })
    return EXIT_OK


# ---------------------------------------------------------------- main ----

def _build_parser() -> _Parser:
    parser = _Parser(prog="pairsim",
                     description="Photon-pair source simulation, coincidence "
                                 "counting, rate inversion, and QPM design. "
                                 "Numeric inputs are SI base units; "
                                 "temperatures are degrees Celsius.")
    parser.add_argument("--version", action="version",
                        version=f"pairsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qpm", help="solve a QPM operating point")
    p.add_argument("--pump", type=float, required=True,
                   help="pump wavelength [m]")
    p.add_argument("--signal", type=float, help="signal wavelength [m]")
    p.add_argument("--period", type=float, help="poling period [m]")
    p.add_argument("--temp", type=float, help="temperature [deg C]")
    p.add_argument("--order", type=int, default=1, help="QPM order (odd)")
    p.add_argument("--sellmeier", help="alternative coefficient file")
    p.add_argument("--curve", metavar="T0:T1:N",
                   help="sweep temperature, emit CSV tuning curve")
    p.add_argument("--csv", action="store_true", help="CSV output")
    p.add_argument("--out", help="write the report here (plus manifest)")
    p.set_defaults(func=_cmd_qpm)

    p = sub.add_parser("simulate", help="generate a detection event stream")
    p.add_argument("--config", help="source+chain config file")
    p.add_argument("--duration", type=float, help="run duration [s]")
    p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--resolution-ps", type=int, default=1,
                   help="timestamp resolution [ps]")
    p.add_argument("--out", help="event file to write")
    p.add_argument("--jobs", type=int, default=1,
                   help="run N consecutive seeds in parallel, one file each")
    p.add_argument("--from-manifest", help="re-run a previous manifest")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("count", help="count singles/coincidences in a stream")
    p.add_argument("events", help="event file from simulate")
    p.add_argument("--window", type=float, default=1e-9,
                   help="coincidence window, full width [s]")
    p.add_argument("--delay", type=float, default=1e-7,
                   help="accidental-estimate delay [s]")
    p.add_argument("--dark1", type=float, default=0.0,
                   help="assumed dark rate, detector 1 [Hz]")
    p.add_argument("--dark2", type=float, default=0.0,
                   help="assumed dark rate, detector 2 [Hz]")
    p.add_argument("--csv", action="store_true", help="CSV output")
    p.add_argument("--out", help="write the report here (plus manifest)")
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("estimate", help="invert net rates into source figures")
    p.add_argument("--s1", type=float, help="net singles, detector 1 [Hz]")
    p.add_argument("--s2", type=float, help="net singles, detector 2 [Hz]")
    p.add_argument("--rc", type=float, help="net coincidence rate [Hz]")
    p.add_argument("--summary", help="CSV report from 'count --csv'")
    p.add_argument("--splitter", action="store_true",
                   help="apply the 50/50-coupler factor-2 correction")
    p.add_argument("--power", type=float, help="guided pump power [W]")
    p.add_argument("--pump", type=float, help="pump wavelength [m]")
    p.add_argument("--duration", type=float,
                   help="run duration [s] for Poisson uncertainties")
    p.add_argument("--csv", action="store_true", help="CSV output")
    p.add_argument("--out", help="write the report here (plus manifest)")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("table1", help="five-source comparison report")
    p.add_argument("--data", help="alternative source data file")
    p.add_argument("--max-dev", type=float, default=2.0,
                   help="deviation factor that flags a row")
    p.add_argument("--csv", action="store_true", help="CSV output")
    p.add_argument("--out", help="write the report here (plus manifest)")
    p.set_defaults(func=_cmd_table1)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MemoryError:
        print("error: out of memory", file=sys.stderr)
        return EXIT_USAGE
    except DataFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
