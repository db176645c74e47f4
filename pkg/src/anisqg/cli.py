"""Command-line entry point: ``anisqg <subcommand> ...``.

Exit status is 0 on success, 1 when a run reports a violation or blow-up,
2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__, gronwall, inequalities
from .config import ConfigError, config_to_dict, parse_config, parse_gronwall_config
from .persistence import Checkpoint, CheckpointError, DiagnosticsWriter, write_checkpoint
from .solver import check_admissibility, run

log = logging.getLogger("anisqg")


def _open_out(path: str):
    if path == "-":
        return _NoClose(sys.stdout)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", encoding="utf-8")


class _NoClose:
    def __init__(self, stream):
        self.stream = stream

    def __enter__(self):
        return self.stream

    def __exit__(self, *exc):
        self.stream.flush()
        return False


def cmd_simulate(args) -> int:
    cfg = parse_config(Path(args.config).read_text(encoding="utf-8"), source=args.config)
    result = run(cfg)
    adm = result.admissibility
    header = {
        "version": __version__,
        "config": config_to_dict(cfg),
        "admissibility": asdict(adm) if adm is not None else None,
        "exploratory": result.exploratory,
    }
    with _open_out(args.out) as stream, DiagnosticsWriter(stream) as w:
        w.header(header)
        for rec in result.records:
            w.record(rec)
        if result.blew_up:
            w.trailer({"blowup": {"t": result.blowup_t}})
        if result.violations:
            w.trailer({"violations": result.violations})
    if args.checkpoint:
        write_checkpoint(args.checkpoint, Checkpoint.from_state(result.final_state, cfg.alpha, cfg.beta, cfg.mu, cfg.nu))
    if result.blew_up:
        log.error("blow-up at t=%g", result.blowup_t)
    for v in result.violations:
        log.error("monitor: %s", v)
    return 1 if result.blew_up or result.violations else 0


def _resolutions(text: str) -> list[int]:
    try:
        values = sorted(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("at least one resolution is required")
    return values


def cmd_verify_inequalities(args) -> int:
    ids = inequalities.CASE_IDS if args.case == "all" else (args.case,)
    failed = False
    with _open_out(args.out) as stream:
        for cid in ids:
            case = inequalities.InequalityCase(cid) if args.random_parameters else inequalities.InequalityCase.default(cid)
            report = inequalities.run_campaign(case, args.samples, args.resolutions, args.seed)
            summary = report.summary()
            stream.write(json.dumps(summary) + "\n")
            if report.violations or not report.all_finite:
                failed = True
                log.error("%s: %d violation(s)", cid, len(report.violations))
    return 1 if failed else 0


def _problem_factory(args):
    if args.config:
        problem = parse_gronwall_config(Path(args.config).read_text(encoding="utf-8"), source=args.config)
        return lambda seed: problem
    if args.preset not in gronwall.PRESETS:
        raise ConfigError(f"unknown preset {args.preset!r}; expected one of {sorted(gronwall.PRESETS)}")
    return gronwall.PRESETS[args.preset]


def cmd_verify_gronwall(args) -> int:
    trials = gronwall.run_campaign(_problem_factory(args), args.trials, args.seed)
    failed = False
    with _open_out(args.out) as stream:
        for tr in trials:
            line = {
                "seed": tr.seed,
                "problem": {
                    "gamma": tr.problem.gamma, "alpha_g": tr.problem.alpha_g, "beta_g": tr.problem.beta_g,
                    "C1": tr.problem.C1, "K": tr.problem.K, "T": tr.problem.T, "A0": tr.problem.A0,
                    **{k: getattr(tr.problem, k).describe() for k in ("l", "m", "n", "f")},
                },
                "certificate": tr.certificate.summary() if tr.certificate else None,
                "error": tr.error,
                "trajectories": {
                    mode: {**asdict(c), "truncated": tr.truncated[mode]} for mode, c in tr.checks.items()
                },
                "sound": tr.sound,
            }
            stream.write(json.dumps(line) + "\n")
            failed |= not tr.sound
        stream.write(json.dumps({"trials": len(trials), "sound": sum(t.sound for t in trials)}) + "\n")
    return 1 if failed else 0


def cmd_admissible(args) -> int:
    adm = check_admissibility(args.alpha, args.beta)
    print(json.dumps({"alpha": args.alpha, "beta": args.beta, **asdict(adm)}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="anisqg", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the solver from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="diagnostics file ('-' for stdout)")
    p.add_argument("--checkpoint", help="write the final state here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify-inequalities", help="random-field campaigns for the inequality cases")
    p.add_argument("--case", required=True, choices=(*inequalities.CASE_IDS, "all"))
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--resolutions", type=_resolutions, default=[64, 128, 256])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random-parameters", action="store_true", help="draw parameters per sample instead of the defaults")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_verify_inequalities)

    p = sub.add_parser("verify-gronwall", help="build certificates and test them on ODE trajectories")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(gronwall.PRESETS))
    src.add_argument("--config")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_verify_gronwall)

    p = sub.add_parser("admissible", help="check the global-regularity condition on (alpha, beta)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.set_defaults(func=cmd_admissible)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ConfigError, CheckpointError, gronwall.GronwallError, ValueError, OSError) as exc:
        print(f"anisqg: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
