"""Command-line interface.

    gtapl tables [--env ENV] [--freq F] [--link L]
    gtapl pl --env urban --freq 28 --link los --d 200
    gtapl pl --env urban --freq 28 --r2d 100 --lambda 0.01
    gtapl fit samples.csv --reference urban/28 [-o fit.json]
    gtapl map config.json raster.csv --layer outage [--ppm map.ppm]
    gtapl config > config.json

Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

import numpy as np

from . import core, coverage
from . import io as gio
from .errors import GTAError
from .fitting import fit_report, fit_scenario
from .params import (
    FIT_RANGE_M,
    Environment,
    FrequencyBand,
    LinkType,
    Scenario,
    lookup_params,
    scenario_params,
)

log = logging.getLogger("gtapl")

EXIT_USAGE, EXIT_DATA, EXIT_IO = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _enum_arg(cls):
    def convert(text):
        try:
            return cls.parse(text)
        except GTAError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    convert.__name__ = cls.__name__
    return convert


def _reference_arg(text):
    try:
        env, band = text.split("/")
        return Environment.parse(env), FrequencyBand.parse(band)
    except (ValueError, GTAError):
        raise argparse.ArgumentTypeError(
            f"reference must look like ENV/FREQ, e.g. urban/28; got {text!r}"
        ) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS lets the flags go before or after the subcommand
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="RNG seed for random commands")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS, help="suppress warnings")

    parser = _Parser(prog="gtapl", description="Ground-to-air mmWave path-loss model")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--json", action="store_true", default=False)
    parser.add_argument("--quiet", action="store_true", default=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("tables", parents=[common], help="print the embedded parameter tables")
    p.add_argument("--env", type=_enum_arg(Environment))
    p.add_argument("--freq", type=_enum_arg(FrequencyBand))
    p.add_argument("--link", type=_enum_arg(LinkType))

    p = sub.add_parser("pl", parents=[common], help="evaluate path loss for one link")
    p.add_argument("--env", type=_enum_arg(Environment), required=True)
    p.add_argument("--freq", type=_enum_arg(FrequencyBand), required=True)
    p.add_argument("--link", type=_enum_arg(LinkType))
    p.add_argument("--d", type=float, help="3D distance in m")
    p.add_argument("--r2d", type=float, help="horizontal distance in m (enables LOS probability chain)")
    p.add_argument("--h-d", type=float, default=core.DEFAULT_UAV_HEIGHT_M, help="UAV height, m")
    p.add_argument("--h-r", type=float, default=core.DEFAULT_TX_HEIGHT_M, help="transmitter height, m")
    p.add_argument("--lambda", dest="lambda_density", type=float, default=0.0,
                   help="blocker density, 1/m^2")
    p.add_argument("--g-b", type=float, default=0.5, help="blocker diameter, m")
    p.add_argument("--h-b", type=float, default=1.8, help="blocker height, m")
    p.add_argument("--p-t", type=float, default=core.DEFAULT_TX_POWER_DBM, help="transmit power, dBm")
    p.add_argument("--g-t", type=float, default=0.0, help="transmit antenna gain, dB")
    p.add_argument("--g-r", type=float, default=0.0, help="receive antenna gain, dB")

    p = sub.add_parser("fit", parents=[common], help="fit LOS/NLOS parameters to a measurement CSV")
    p.add_argument("csv")
    p.add_argument("--reference", type=_reference_arg, help="compare with table entry ENV/FREQ")
    p.add_argument("-o", "--output", help="write results as JSON to this path")

    p = sub.add_parser("map", parents=[common], help="write a coverage raster")
    p.add_argument("config")
    p.add_argument("output", help="raster CSV path")
    p.add_argument("--layer", choices=("mean", "outage"), default="mean")
    p.add_argument("--ppm", help="also write a colour pixmap here")
    p.add_argument("--workers", type=int, default=1)

    sub.add_parser("config", parents=[common], help="print the default scenario config")
    return parser


def _emit(args, text: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _fmt_params(prm) -> str:
    return f"alpha={prm.alpha:.2f} beta={prm.beta:.2f} sigma_sq={prm.sigma_sq:.2f}"


def cmd_tables(args) -> int:
    text = gio.render_tables(
        None if args.env is None else {args.env},
        None if args.freq is None else {args.freq},
        None if args.link is None else {args.link},
    )
    entries = [
        s for s in (Scenario(e, b, lk) for b in FrequencyBand for lk in LinkType for e in Environment)
        if (args.env in (None, s.environment) and args.freq in (None, s.band)
            and args.link in (None, s.link))
    ]
    payload = [
        {"environment": s.environment.value, "band_ghz": s.band.value, "link": s.link.value,
         **vars(lookup_params(s))}
        for s in entries
    ]
    _emit(args, text, {"entries": payload})
    return 0


def cmd_pl(args) -> int:
    if (args.d is None) == (args.r2d is None):
        raise UsageError("give exactly one of --d or --r2d")
    los, nlos = scenario_params(args.env, args.freq)
    lines, payload = [], {"environment": args.env.value, "band_ghz": args.freq.value}

    if args.d is not None:
        links = [args.link] if args.link else [LinkType.LOS, LinkType.NLOS]
        d = args.d
        payload["d_3d"] = d
        for link in links:
            prm = los if link is LinkType.LOS else nlos
            pl = core.mean_path_loss(prm, d)
            pr = core.received_power(args.p_t, args.g_t, args.g_r, pl)
            lines.append(f"{link.value}: {_fmt_params(prm)}")
            lines.append(f"{link.value}: mean path loss {pl:.2f} dB, received power {pr:.2f} dBm")
            payload[link.value] = {**vars(prm), "path_loss_db": pl, "received_power_dbm": pr}
    else:
        geometry = core.LinkGeometry(args.r2d, args.h_d, args.h_r)
        blockers = core.BlockerField(args.lambda_density, args.g_b, args.h_b)
        res = core.scenario_path_loss(args.env, args.freq, geometry, blockers)
        d = res.d_3d
        pr = core.received_power(args.p_t, args.g_t, args.g_r, res.mean)
        lines += [
            f"LOS: {_fmt_params(los)}",
            f"NLOS: {_fmt_params(nlos)}",
            f"d_3d: {res.d_3d:.2f} m",
            f"P_LOS: {res.p_los:.6f}",
            f"PL_LOS: {res.pl_los:.2f} dB",
            f"PL_NLOS: {res.pl_nlos:.2f} dB",
            f"PL_avg: {res.mean:.2f} dB",
            f"received power: {pr:.2f} dBm",
        ]
        payload.update(
            d_3d=res.d_3d, p_los=res.p_los, pl_los=res.pl_los, pl_nlos=res.pl_nlos,
            pl_avg=res.mean, received_power_dbm=pr,
            LOS=vars(los), NLOS=vars(nlos),
        )
    extrapolated = not core.in_fit_range(d)
    payload["extrapolated"] = extrapolated
    if extrapolated:
        log.warning(
            "distance %.2f m is outside the fitted range %g-%g m; extrapolating",
            d, *FIT_RANGE_M,
        )
    _emit(args, "\n".join(lines), payload)
    return 0


def _fit_dict(fit) -> dict:
    return {
        **vars(fit.params),
        "n_samples": fit.n_samples,
        "residual_rms_db": fit.residual_rms_db,
        "distance_range": list(fit.distance_range),
    }


def cmd_fit(args) -> int:
    samples = gio.read_measurements(args.csv)
    results = fit_scenario(samples)
    reference = scenario_params(*args.reference) if args.reference else None
    payload = {"LOS": _fit_dict(results[0]), "NLOS": _fit_dict(results[1])}
    if reference is not None:
        env, band = args.reference
        payload["reference"] = {
            "environment": env.value, "band_ghz": band.value,
            "LOS": vars(reference[0]), "NLOS": vars(reference[1]),
        }
    for fit in results:
        lo, hi = fit.distance_range
        if lo < FIT_RANGE_M[0] or hi > FIT_RANGE_M[1]:
            log.warning("samples span %.1f-%.1f m, beyond the %g-%g m fit range", lo, hi, *FIT_RANGE_M)
            break
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    _emit(args, fit_report(results, reference), payload)
    return 0


def cmd_map(args) -> int:
    cfg = gio.load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    grid = cfg.grid()
    if args.layer == "mean":
        layer = coverage.mean_coverage_map(
            grid, cfg.environment, cfg.band, cfg.blockers, params=cfg.model
        )
    else:
        layer = coverage.outage_map(
            grid, cfg.environment, cfg.band, cfg.blockers, cfg.outage(),
            workers=args.workers, params=cfg.model,
        )
    gio.write_raster_csv(args.output, layer)
    if args.ppm:
        gio.write_ppm(args.ppm, layer)
    lo, hi = float(np.min(layer.values)), float(np.max(layer.values))
    fmt = "{:.2f}" if args.layer == "mean" else "{:.6f}"
    text = (f"{layer.statistic}: {grid.n_cells} cells, range "
            f"[{fmt.format(lo)}, {fmt.format(hi)}]")
    _emit(args, text, {"statistic": layer.statistic, "cells": grid.n_cells, "min": lo, "max": hi})
    return 0


def cmd_config(args) -> int:
    sys.stdout.write(gio.ScenarioConfig().dumps())
    return 0


COMMANDS = {"tables": cmd_tables, "pl": cmd_pl, "fit": cmd_fit, "map": cmd_map, "config": cmd_config}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.ERROR if args.quiet else logging.WARNING,
        format="%(name)s: %(levelname)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"gtapl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GTAError as exc:
        log.error("%s", exc)
        return EXIT_DATA
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
