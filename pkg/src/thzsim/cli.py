"""Command-line interface: ``thzsim <subcommand> [options]``.

Exit status is 0 on success, 1 when some computation failed and 2 for bad
configuration or usage. Validity warnings go to stderr only.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace

import numpy as np

from . import io as tio
from .atmosphere import absorption_coefficient
from .channel import deterministic_gains, misalignment_model
from .config import ConfigError, parse_config
from .experiments import MC_INFEASIBLE, Method, db_to_linear, run_sweep, validity_check
from .montecarlo import run_mc
from .ser import ModulationScheme, QMode, avg_ser_closed, avg_ser_quadrature, ser_params

_LINK_FLAGS = (
    ("frequency", float, "carrier frequency in Hz"),
    ("gain_tx", float, "TX antenna gain in dBi"),
    ("gain_rx", float, "RX antenna gain in dBi"),
    ("distance", float, "TX-RX distance in m"),
    ("aperture_radius", float, "RX detection radius in m"),
    ("beam_waist", float, "TX beam footprint radius in m"),
    ("jitter", float, "pointing jitter (m^2 or m, see --jitter-interpretation)"),
    ("jitter_interpretation", str, "variance or std_dev"),
    ("temperature", float, "temperature in K"),
    ("pressure", float, "pressure in Pa"),
    ("relative_humidity", float, "relative humidity in %"),
)
_OTHER_FLAGS = (
    ("seed", str, "Monte Carlo seed"),
    ("trials", str, "Monte Carlo trials"),
    ("mode", str, "symbol_level or semi_analytic"),
    ("snr_db", str, "SNR grid in dB: a,b,c or start:stop:step"),
    ("distances", str, "sweep distances in m"),
    ("jitters", str, "sweep jitter values"),
    ("schemes", str, "bpsk,qpsk"),
    ("methods", str, "closed_form,quadrature_exact,mc_symbol,mc_semi"),
)


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--out", default="-", help="output path, '-' for stdout")
    parser.add_argument("--format", default="csv", choices=tio.FORMATS)
    parser.add_argument("--workers", type=int, help="worker threads (capped by THZSIM_THREADS)")
    for name, typ, help_text in _LINK_FLAGS + _OTHER_FLAGS:
        parser.add_argument("--" + name.replace("_", "-"), dest=name, type=typ, help=help_text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="thzsim", description="LOS THz link error-rate toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("absorption", help="absorption coefficient table")
    _common(p)
    p.add_argument("--f-min", type=float, default=200e9)
    p.add_argument("--f-max", type=float, default=400e9)
    p.add_argument("--step", type=float, default=1e9)

    p = sub.add_parser("channel", help="gain breakdown for one link")
    _common(p)

    p = sub.add_parser("ser", help="closed-form and quadrature SER over the SNR grid")
    _common(p)

    p = sub.add_parser("simulate", help="one Monte Carlo run")
    _common(p)
    p.add_argument("--snr", type=float, default=40.0, help="average SNR in dB")
    p.add_argument("--scheme", default="bpsk", choices=[s.value for s in ModulationScheme])

    p = sub.add_parser("sweep", help="full SER-vs-SNR sweep")
    _common(p)

    p = sub.add_parser("validate", help="report parameters outside the model's validity range")
    _common(p)
    return parser


def _overrides(args) -> dict:
    names = [n for n, _, _ in _LINK_FLAGS + _OTHER_FLAGS]
    return {name: getattr(args, name) for name in names if getattr(args, name) is not None}


def _records_text(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(records, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(records[0]), lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow({k: tio.format_float(v) if isinstance(v, float) else v for k, v in rec.items()})
    return buf.getvalue()


def _need_tabular(fmt: str) -> None:
    if fmt == "svg_plot":
        raise ConfigError("format", "svg_plot is only available for 'ser' and 'sweep'")


def _cmd_absorption(args, settings) -> int:
    _need_tabular(args.format)
    cond = settings.link.conditions
    freqs = np.arange(args.f_min, args.f_max + args.step / 2, args.step)
    records = []
    for f in freqs:
        b = absorption_coefficient(float(f), cond)
        records.append({
            "frequency_hz": float(f), "g_term": b.g_term, "y1_term": b.y1_term, "y2_term": b.y2_term,
            "coefficient": b.coefficient, "mixing_ratio": b.mixing_ratio, "clamped": int(b.clamped),
        })
    tio.write_text(_records_text(records, args.format), args.out)
    return 0


def _cmd_channel(args, settings) -> int:
    _need_tabular(args.format)
    link = settings.link
    gains = deterministic_gains(link)
    model = misalignment_model(link)
    absorption = absorption_coefficient(link.frequency, link.conditions)
    record = {
        "h_p": gains.h_p, "h_a": gains.h_a, "product": gains.product,
        "absorption_coefficient": absorption.coefficient, "mixing_ratio": absorption.mixing_ratio,
        "u": model.u, "w_eq": model.w_eq, "a0": model.a0, "gamma": model.gamma, "sigma_r": model.sigma_r,
        "b_param": model.gamma_sq / 2.0,
    }
    tio.write_text(_records_text([record], args.format), args.out)
    return 0


def _cmd_ser(args, settings) -> int:
    link = settings.link
    spec = replace(
        settings.sweep,
        distances=(link.distance,),
        jitter_values=(link.jitter_value,),
        methods=(Method.CLOSED_FORM, Method.QUADRATURE_EXACT),
    )
    return _emit_sweep(args, run_sweep(spec, workers=args.workers))


def _cmd_sweep(args, settings) -> int:
    return _emit_sweep(args, run_sweep(settings.sweep, workers=args.workers))


def _emit_sweep(args, rows) -> int:
    status = 0
    for row in rows:
        if row.error is None:
            continue
        print(f"{row.scheme.value} {row.method.value} d={row.distance_m:g} jitter={row.jitter_value:g} "
              f"snr={row.snr_db:g} dB: {row.error}", file=sys.stderr)
        if row.error != MC_INFEASIBLE:
            status = 1
    tio.emit_rows(rows, args.format, args.out)
    return status


def _cmd_simulate(args, settings) -> int:
    _need_tabular(args.format)
    link = settings.link
    gains = deterministic_gains(link)
    model = misalignment_model(link)
    avg_snr = db_to_linear(args.snr)
    est = run_mc(settings.mc, args.scheme, avg_snr, gains, model, workers=args.workers)
    params = ser_params(avg_snr, gains, model)
    record = {
        "scheme": args.scheme, "mode": est.mode.value, "snr_db": float(args.snr), "ser": est.ser,
        "half_width": est.half_width, "num_trials": est.num_trials,
        "num_errors": "" if est.num_errors is None else est.num_errors, "seed": est.seed,
        "closed_form": avg_ser_closed(args.scheme, params),
        "quadrature_exact": avg_ser_quadrature(args.scheme, avg_snr, gains, model, QMode.EXACT_Q),
    }
    tio.write_text(_records_text([record], args.format), args.out)
    return 0


def _cmd_validate(args, settings) -> int:
    _need_tabular(args.format)
    warns = validity_check(settings.link)
    if args.format == "json":
        tio.write_text(json.dumps(warns, indent=1) + "\n", args.out)
    else:
        tio.write_text("warning\n" + "".join(f"{w}\n" for w in warns), args.out)
    return 0


_COMMANDS = {
    "absorption": _cmd_absorption,
    "channel": _cmd_channel,
    "ser": _cmd_ser,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = parse_config(args.config, _overrides(args))
        for warning in validity_check(settings.link):
            print(f"warning: {warning}", file=sys.stderr)
        return _COMMANDS[args.command](args, settings)
    except ConfigError as exc:
        print(f"thzsim: config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"thzsim: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError) as exc:
        print(f"thzsim: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
