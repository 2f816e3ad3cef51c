"""Command-line interface.

Subcommands:
  run     simulate a scenario and write the four metric CSVs
  detect  run the change detector over a text file of 0/1 ACK bits
  toa     print the airtime/energy breakdown for given radio settings
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .change_detect import detect_bits
from .energy_model import EnergyProfile, RadioParams, payload_symbol_count, transmission_cost
from .metrics import emit_csv
from .runner import run_methods
from .scenario import ScenarioError, bundled_scenario_path, load_scenario


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loramab",
        description=(
            "Simulator for decentralized LoRa transmission-parameter selection: "
            "UCB1-tuned bandits with change-detector resets."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a scenario and emit CSV metrics")
    p_run.add_argument(
        "--scenario",
        type=Path,
        default=None,
        help="scenario file (default: the bundled paper.scenario)",
    )
    p_run.add_argument(
        "--method",
        choices=["proposed", "baseline", "both"],
        default="both",
        help="which policy variant(s) to run (default: both)",
    )
    p_run.add_argument("--seed", type=int, default=None, help="override the scenario base seed")
    p_run.add_argument(
        "--replications", type=int, default=None, help="override the replication count"
    )
    p_run.add_argument(
        "--out", type=Path, default=Path("results"), help="output directory (default: results)"
    )
    p_run.add_argument(
        "--workers", type=int, default=1, help="worker processes (default: 1, serial)"
    )

    p_detect = sub.add_parser("detect", help="change detection over a 0/1 bit file")
    p_detect.add_argument("--input", type=Path, required=True, help="file of 0/1 characters")
    p_detect.add_argument("--window", type=int, default=10, help="window length (default: 10)")
    p_detect.add_argument("--shift", type=int, default=5, help="window shift step (default: 5)")
    p_detect.add_argument("--theta", type=float, default=20.0, help="detection threshold (default: 20)")

    p_toa = sub.add_parser("toa", help="airtime/energy of one transmission")
    p_toa.add_argument("--sf", type=int, default=7, help="spreading factor (default: 7)")
    p_toa.add_argument("--bw", type=float, default=125000, help="bandwidth in Hz (default: 125000)")
    p_toa.add_argument("--payload", type=int, default=50, help="payload bytes (default: 50)")
    p_toa.add_argument("--preamble", type=int, default=8, help="preamble symbols (default: 8)")
    p_toa.add_argument("--cr", type=int, default=1, help="coding rate index 1..4 (default: 1)")
    p_toa.add_argument("--no-crc", action="store_true", help="disable the payload CRC")
    p_toa.add_argument(
        "--tx-dbm",
        type=int,
        default=None,
        help="also print energy at this transmit power (default profile table)",
    )
    return parser


def _cmd_run(args) -> int:
    path = args.scenario if args.scenario is not None else bundled_scenario_path()
    scenario = load_scenario(path)
    overrides = {}
    if args.seed is not None:
        overrides["base_seed"] = args.seed
    if args.replications is not None:
        overrides["replications"] = args.replications
    if overrides:
        scenario = replace(scenario, **overrides).validate()

    methods = ["proposed", "baseline"] if args.method == "both" else [args.method]
    reports = run_methods(scenario, methods, workers=args.workers)
    paths = emit_csv([reports[m] for m in methods], args.out)
    for m in methods:
        rep = reports[m]
        print(
            f"method={m} overall_success_rate={rep.overall_success_rate:.4f} "
            f"overall_ee_bit_per_joule={rep.overall_ee:.1f} "
            f"mean_detection_latency={rep.mean_detection_latency:.1f}"
        )
    print(f"wrote {', '.join(p.name for p in paths)} to {args.out}")
    return 0


def _cmd_detect(args) -> int:
    try:
        text = args.input.read_text()
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return 2
    bits = [int(c) for c in text if c in "01"]
    stray = set(text) - set("01 \t\r\n")
    if stray:
        print(
            f"error: input contains characters other than 0/1: {sorted(stray)}",
            file=sys.stderr,
        )
        return 2
    if len(bits) < args.window:
        print(
            f"error: need at least window ({args.window}) bits, got {len(bits)}",
            file=sys.stderr,
        )
        return 2
    result = detect_bits(bits, args.window, args.shift, args.theta)
    print(f"samples={len(bits)}")
    print(f"sic_h0={result.sic_h0:.6f}")
    print(f"sic_h1_min={result.sic_h1_min:.6f}")
    print(f"best_split={result.best_split}")
    print(f"statistic={result.statistic:.6f}")
    print(f"detected={'true' if result.detected else 'false'}")
    return 0


def _cmd_toa(args) -> int:
    params = RadioParams(
        spreading_factor=args.sf,
        bandwidth=args.bw,
        preamble_symbols=args.preamble,
        payload_bytes=args.payload,
        coding_rate_index=args.cr,
        crc_enabled=not args.no_crc,
    )
    profile = EnergyProfile()
    tx_dbm = args.tx_dbm
    cost = transmission_cost(params, profile, tx_dbm if tx_dbm is not None else -3)
    print(f"payload_symbols={payload_symbol_count(params)}")
    print(f"t_symbol_s={cost.t_symbol:.9f}")
    print(f"t_preamble_s={cost.t_preamble:.9f}")
    print(f"t_payload_s={cost.t_payload:.9f}")
    print(f"t_toa_s={cost.t_toa:.9f}")
    if tx_dbm is not None:
        print(f"e_toa_j={cost.e_toa:.9f}")
        print(f"e_active_j={cost.e_active:.9f}")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "detect":
            return _cmd_detect(args)
        return _cmd_toa(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
