"""Command-line front end: verification, figure sweeps, sequences, simulations.

Exit codes: 0 ok, 1 verification failure, 2 precondition/domain violation,
3 I/O error.  ``CHANCAP_SEED`` supplies the default seed; an optional config
file of ``key = value`` lines mirrors the long flags, with flags winning.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from . import capacity as cap
from . import output
from . import verify as verify_mod
from . import wiretap as wt
from .errors import ChancapError, DomainError, PreconditionViolated

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PRECONDITION = 2
EXIT_IO = 3


@dataclass
class RunConfig:
    command: str
    scenario: str = "fig3"
    lambda_min: float = 0.0
    lambda_max: float = 0.0
    p_min: float = 0.0
    p_max: float = 0.0
    points: int = 100
    terms: int = 5
    uses: int = 100_000
    seed: int = 0
    kind: str = "both"
    out_path: Optional[str] = None
    fmt: str = "csv"
    emit_plot_script: bool = False
    only: Optional[str] = None

    def validate(self) -> None:
        for name, v in (
            ("lambda-min", self.lambda_min),
            ("lambda-max", self.lambda_max),
            ("p-min", self.p_min),
            ("p-max", self.p_max),
        ):
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"--{name} must lie in [0, 1], got {v!r}")
        if self.points < 2:
            raise DomainError(f"--points must be >= 2, got {self.points!r}")
        if self.uses < 1:
            raise DomainError(f"--uses must be >= 1, got {self.uses!r}")
        if not 1 <= self.terms <= 64:
            raise DomainError(f"--terms must lie in [1, 64], got {self.terms!r}")
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"--seed must be an unsigned 64-bit integer, got {self.seed!r}")


def _read_config_file(path: str) -> dict:
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _resolve(args: argparse.Namespace) -> RunConfig:
    file_values = _read_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(name: str, cast, default):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        if name in file_values:
            return cast(file_values[name])
        return default

    seed_default = 0
    env_seed = os.environ.get("CHANCAP_SEED")
    if env_seed is not None:
        seed_default = int(env_seed)

    lam = getattr(args, "lam", None)
    p = getattr(args, "p", None)
    cfg = RunConfig(
        command=args.command,
        scenario=pick("scenario", str, "fig3"),
        lambda_min=lam if lam is not None else pick("lambda_min", float, 0.0),
        lambda_max=lam if lam is not None else pick("lambda_max", float, 0.0),
        p_min=p if p is not None else pick("p_min", float, 0.0),
        p_max=p if p is not None else pick("p_max", float, 0.0),
        points=pick("points", int, 100),
        terms=pick("terms", int, 5),
        uses=pick("uses", int, 100_000),
        seed=pick("seed", int, seed_default),
        kind=pick("kind", str, "both"),
        out_path=pick("out", str, None),
        fmt=pick("format", str, "csv"),
        emit_plot_script=bool(getattr(args, "emit_plot_script", False)),
        only=getattr(args, "only", None),
    )
    cfg.validate()
    return cfg


def _write(cfg: RunConfig, text: str, plot_scenario: Optional[str] = None) -> None:
    if cfg.out_path is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    if cfg.emit_plot_script and cfg.out_path and plot_scenario and cfg.fmt == "csv":
        script = output.gnuplot_script(os.path.basename(cfg.out_path), plot_scenario)
        with open(cfg.out_path + ".gp", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(script)


def cmd_verify(cfg: RunConfig) -> int:
    results = verify_mod.run_checks(only=cfg.only)
    if not results:
        print(f"no checks match filter {cfg.only!r}", file=sys.stderr)
        return EXIT_PRECONDITION
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{status} {r.name} {r.residual:.6e}"
        if r.detail and not r.passed:
            line += f"  ({r.detail})"
        print(line)
    failures = sum(not r.passed for r in results)
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return EXIT_OK if failures == 0 else EXIT_VERIFY_FAILED


def _sweep_points_meta(cfg: RunConfig):
    if cfg.scenario == "fig3":
        points = cap.sweep_fig3(cfg.points)
        meta = {
            "scenario": "fig3",
            "p_of_lambda": "4*lambda - 1",
            "lambda_range": [0.25, 0.3125],
            "upper_bound_note": "continuity bound certifies the capacity only for lambda >= 1/2",
        }
    elif cfg.scenario == "fig4":
        points = cap.sweep_fig4(cfg.points)
        meta = {
            "scenario": "fig4",
            "lambda_of_p": "p / log2(1/p)",
            "p_range": [0.35, 0.5],
            "log_base_note": (
                "log read base-2 via p/log2(1/p) so the weight stays in [0, 1/2]. "
                "Under this reading the one-way curve is not monotone on the "
                "range; only the p=1/2 endpoint equality is asserted."
            ),
            "upper_bound_note": "continuity bound certifies the capacity only for lambda >= 1/2",
        }
    elif cfg.scenario == "fig6":
        points = wt.sweep_fig6(cfg.points)
        meta = {
            "scenario": "fig6",
            "lambda_of_p": "p / (2*log2(6/p))",
            "p_range": [0.8687, 1.0],
            "slope_crossover_p": wt.fig6_crossover(),
            "crossover_note": "display range endpoint 0.8687 is not asserted equal to the crossover",
        }
    else:
        points = cap.sweep_custom(cfg.lambda_min, cfg.lambda_max, cfg.p_min, cfg.p_max, cfg.points)
        meta = {
            "scenario": "custom",
            "lambda_range": [cfg.lambda_min, cfg.lambda_max],
            "p_range": [cfg.p_min, cfg.p_max],
            "one_way_note": "one-way column is empty where lambda > 1/2 (no certified value)",
        }
    meta["tool"] = "chancap"
    meta["version"] = __version__
    return points, meta


def cmd_sweep(cfg: RunConfig) -> int:
    points, meta = _sweep_points_meta(cfg)
    if cfg.fmt == "json":
        text = output.sweep_json(points, cfg.scenario, meta)
    else:
        text = output.sweep_csv(points, cfg.scenario)
    _write(cfg, text, plot_scenario=cfg.scenario)
    return EXIT_OK


def cmd_seq(cfg: RunConfig) -> int:
    items, meta = cap.default_sequence(cfg.terms)
    meta["tool"] = "chancap"
    meta["version"] = __version__
    text = output.seq_json(items, meta) if cfg.fmt == "json" else output.seq_csv(items, meta)
    _write(cfg, text, plot_scenario="seq")
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    lam, p = cfg.lambda_min, cfg.p_min
    rows = []
    if cfg.kind in ("quantum_two_way", "both"):
        rate, err = cap.simulate_two_way_protocol(lam, p, cfg.uses, cfg.seed)
        rows.append(
            {
                "kind": "quantum_two_way",
                "lambda": lam,
                "p": p,
                "uses": cfg.uses,
                "seed": cfg.seed,
                "estimate": rate,
                "std_error": err,
                "target": cap.two_way_capacity(lam),
                "leakage": None,
            }
        )
    if cfg.kind in ("wiretap_feedback", "both"):
        throughput, leakage = wt.simulate_feedback_protocol(lam, p, cfg.uses, cfg.seed)
        rows.append(
            {
                "kind": "wiretap_feedback",
                "lambda": lam,
                "p": p,
                "uses": cfg.uses,
                "seed": cfg.seed,
                "estimate": throughput,
                "std_error": float(np.sqrt(lam * (1.0 - lam) / cfg.uses)),
                "target": wt.two_way_secrecy_capacity(lam),
                "leakage": leakage,
            }
        )
    if not rows:
        raise DomainError(f"unknown simulation kind {cfg.kind!r}")
    meta = {"tool": "chancap", "version": __version__}
    text = output.simulate_json(rows, meta) if cfg.fmt == "json" else output.simulate_csv(rows)
    _write(cfg, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chancap",
        description="Capacity workbench for the glued identity/dephasing-complement "
        "channel family and its classical wiretap analogue.",
    )
    parser.add_argument("--version", action="version", version=f"chancap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="config file of 'key = value' lines (flags win)")
    common.add_argument("--out", "-o", dest="out", help="output path (default: stdout)")
    common.add_argument("--format", dest="format", choices=("csv", "json"), help="output format")
    common.add_argument("--seed", dest="seed", type=int, help="RNG seed (default: $CHANCAP_SEED or 0)")

    p_verify = sub.add_parser("verify", parents=[common], help="run the invariant suites")
    p_verify.add_argument("--only", help="run only checks whose name contains this substring")

    p_sweep = sub.add_parser("sweep", parents=[common], help="emit a capacity-curve data file")
    p_sweep.add_argument(
        "--scenario", choices=("fig3", "fig4", "fig6", "custom"), default="fig3"
    )
    p_sweep.add_argument("--points", type=int, help="grid size (default 100)")
    p_sweep.add_argument("--lambda-min", dest="lambda_min", type=float)
    p_sweep.add_argument("--lambda-max", dest="lambda_max", type=float)
    p_sweep.add_argument("--p-min", dest="p_min", type=float)
    p_sweep.add_argument("--p-max", dest="p_max", type=float)
    p_sweep.add_argument("--lambda", dest="lam", type=float, help="fix lambda (custom sweeps)")
    p_sweep.add_argument("--p", dest="p", type=float, help="fix p (custom sweeps)")
    p_sweep.add_argument(
        "--emit-plot-script", action="store_true", help="also write a gnuplot script"
    )

    p_seq = sub.add_parser("seq", parents=[common], help="emit the alternating-bounds sequence")
    p_seq.add_argument("--terms", type=int, help="number of terms (default 5, max 64)")
    p_seq.add_argument("--emit-plot-script", action="store_true")

    p_sim = sub.add_parser("simulate", parents=[common], help="run the Monte Carlo protocols")
    p_sim.add_argument(
        "--kind", choices=("quantum_two_way", "wiretap_feedback", "both"), help="protocol(s)"
    )
    p_sim.add_argument("--lambda", dest="lam", type=float, help="flag weight (default 0.3)")
    p_sim.add_argument("--p", dest="p", type=float, help="dephasing weight (default 0.1)")
    p_sim.add_argument("--uses", type=int, help="channel uses (default 1e5)")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        if cfg.command == "simulate":
            if getattr(args, "lam", None) is None and cfg.lambda_min == 0.0:
                cfg.lambda_min = cfg.lambda_max = 0.3
            if getattr(args, "p", None) is None and cfg.p_min == 0.0:
                cfg.p_min = cfg.p_max = 0.1
        if cfg.command == "verify":
            return cmd_verify(cfg)
        if cfg.command == "sweep":
            return cmd_sweep(cfg)
        if cfg.command == "seq":
            return cmd_seq(cfg)
        if cfg.command == "simulate":
            return cmd_simulate(cfg)
        raise DomainError(f"unknown command {cfg.command!r}")
    except PreconditionViolated as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ChancapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED


if __name__ == "__main__":
    sys.exit(main())
