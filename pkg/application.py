import argparse
import logging
import os
import re
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

# Load environment variables from .env file at startup
env_path = Path(__file__).parent / '.env'
if env_path.exists():
    load_dotenv(dotenv_path=env_path, override=False)

from prolearn.classes.config import DEFAULT_OUTPUT_DIR, parse_config  # noqa: E402
from prolearn.classes.errors import ConfigError  # noqa: E402
from prolearn.harness import reproduce, run_learnability, run_streaming  # noqa: E402

logger = logging.getLogger()

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_RUNTIME_ERROR = 2

SEED = re.compile(r"-?\d+")
SEED_RANGE = re.compile(r"(-?\d+)-(-?\d+)")


def configure_logging(level: str) -> None:
    # Configure logging
    logger.setLevel(level.upper())
    if not logger.handlers:
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        logger.addHandler(console_handler)


class CLIParser(argparse.ArgumentParser):
    """Usage errors are config errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG_ERROR, f"{self.prog}: error: {message}\n")


def parse_seed_list(text: Optional[str]) -> Optional[List[int]]:
    """Parse "1,2,5" or ranges like "1-10" (inclusive) into a list of seeds."""
    if not text:
        return None
    seeds: List[int] = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if match := SEED_RANGE.fullmatch(part):
            seeds.extend(range(int(match.group(1)), int(match.group(2)) + 1))
        elif SEED.fullmatch(part):
            seeds.append(int(part))
        else:
            raise ConfigError(f"invalid seed list '{text}'", field="seeds")
    if not seeds:
        raise ConfigError(f"empty seed list '{text}'", field="seeds")
    return seeds


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {
        "seeds": parse_seed_list(getattr(args, "seed_list", None)),
        "output_dir": getattr(args, "out_dir", None),
        "workers": getattr(args, "workers", None),
        "emit_pdf": True if getattr(args, "pdf", False) else None,
    }
    if getattr(args, "mc_risk", None):
        overrides["risk"] = {"mode": "monte_carlo", "mc_samples": args.mc_risk}
    return overrides


def cmd_run(args: argparse.Namespace) -> int:
    config = parse_config(args.config, protocol="streaming", **overrides_from_args(args))
    result = run_streaming(config)
    print(f"Streaming run {result.run_id} finished; results in {result.output_dir}")
    return EXIT_OK


def cmd_learnability(args: argparse.Namespace) -> int:
    config = parse_config(args.config, protocol="frozen", **overrides_from_args(args))
    result = run_learnability(config)
    for report in result.reports:
        print(report.summary())
    print(f"Results in {result.output_dir}")
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    overrides = overrides_from_args(args)
    output_dir = overrides.pop("output_dir") or os.getenv("PROLEARN_OUTPUT_DIR", DEFAULT_OUTPUT_DIR)
    results = reproduce(
        args.scenario,
        Path(output_dir) / args.scenario,
        seeds=overrides.pop("seeds"),
        workers=overrides.pop("workers"),
        **overrides,
    )
    for report in results["frozen"].reports:
        print(report.summary())
    print(f"Reproduction of {args.scenario} finished; results in {Path(output_dir) / args.scenario}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    config = parse_config(args.config, **overrides_from_args(args))
    print(config.echo())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = CLIParser(prog="prolearn", description="Prospective learning simulations on periodic Gaussian task sequences")
    p.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")
    sub = p.add_subparsers(dest="cmd", required=True)

    def add_run_flags(sp: argparse.ArgumentParser, mc: bool = True) -> None:
        sp.add_argument("--seed-list", help="Seeds, e.g. 1,2,3 or 1-10")
        sp.add_argument("--out-dir", help="Output directory (default $PROLEARN_OUTPUT_DIR or results)")
        sp.add_argument("--workers", type=int, help="Concurrent runs/trials (default $PROLEARN_WORKERS or 1)")
        sp.add_argument("--pdf", action="store_true", help="Also render summary.pdf")
        if mc:
            sp.add_argument("--mc-risk", type=int, metavar="N", help="Monte Carlo risk with N test samples per step")

    pr = sub.add_parser("run", help="Streaming run: risk of every learner at every step")
    pr.add_argument("config", help="Config file (.json/.yaml) or inline YAML")
    add_run_flags(pr)
    pr.set_defaults(func=cmd_run)

    pl = sub.add_parser("learnability", help="Frozen prospective-learnability test")
    pl.add_argument("config", help="Config file (.json/.yaml) or inline YAML")
    add_run_flags(pl, mc=False)
    pl.set_defaults(func=cmd_learnability)

    pp = sub.add_parser("reproduce", help="Built-in streaming and frozen presets for one scenario")
    pp.add_argument("scenario", choices=["fig3a", "fig3b"])
    add_run_flags(pp)
    pp.set_defaults(func=cmd_reproduce)

    pv = sub.add_parser("validate", help="Validate a config and print it with every default resolved")
    pv.add_argument("config", help="Config file (.json/.yaml) or inline YAML")
    pv.set_defaults(func=cmd_validate)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging("DEBUG" if args.verbose else os.getenv("PROLEARN_LOG_LEVEL", "INFO"))
    try:
        return args.func(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR
    except Exception as e:
        logger.error(f"Run failed: {str(e)}", exc_info=True)
        return EXIT_RUNTIME_ERROR


if __name__ == "__main__":
    sys.exit(main())
