import argparse
import asyncio
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from causevo_exec.commands import COMMANDS
from causevo_exec.controller import run_command_with_record
from causevo_exec.run_config import RunConfig

INPUT_ERROR_EXIT = 2


def add_common_arguments(parser: argparse.ArgumentParser, needs_input: bool = True) -> None:
    if needs_input:
        parser.add_argument("--input", dest="input_path", help="Evolution or curve-measure JSON file")
    parser.add_argument("--model", help="Override the document's model: minkowski, cylinder, flrw:<eps> or a JSON descriptor")
    parser.add_argument("--levels", type=int, nargs="+", help="Refinement levels (>= 1); the highest is the input grid")
    parser.add_argument("--dt", type=float, help="Largest grid step; coarser inputs are resampled")
    parser.add_argument("--out", dest="output_dir", help="Output directory for reports and artifacts")
    parser.add_argument("--seed", type=int, help="Seed for sampled up-set families")
    parser.add_argument("--arith", dest="arithmetic", choices=["rational", "float"], help="Weight arithmetic")
    parser.add_argument("--cont-factor", type=float, help="First-order tolerance factor")
    parser.add_argument("--quad-factor", type=float, help="Second-order tolerance factor")
    parser.add_argument("--current-eps", type=float, help="Epsilon of the relative current discrepancy")


def setup_argparser():
    """Set up command line argument parser."""
    parser = argparse.ArgumentParser(description="Causevo CLI for causal evolutions of measures")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    check_parser = subparsers.add_parser("check-causal", help="Check that an evolution is causal")
    add_common_arguments(check_parser)

    build_parser = subparsers.add_parser("build-sigma", help="Build dyadic curve measures from an evolution")
    add_common_arguments(build_parser)

    verify_parser = subparsers.add_parser("verify-field", help="Residuals of the causal vector field across refinement levels")
    add_common_arguments(verify_parser)

    transform_parser = subparsers.add_parser("transform", help="Observer invariance over a frame battery")
    add_common_arguments(transform_parser)
    transform_parser.add_argument("--frames", help="Comma-separated frames: canonical, boost:<v>, sheared:<lam>")

    demo_parser = subparsers.add_parser("demo", help="Run a worked example end to end")
    demo_parser.add_argument("example", choices=["example1", "example2"])
    add_common_arguments(demo_parser, needs_input=False)

    return parser


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    """Only the flags that were given; RunConfig supplies the defaults."""
    fields: Dict[str, Any] = {"command": args.command}
    for name in (
        "input_path", "model", "levels", "dt", "output_dir", "seed", "arithmetic",
        "cont_factor", "quad_factor", "current_eps", "example",
    ):
        value = getattr(args, name, None)
        if value is not None:
            fields[name] = value
    frames = getattr(args, "frames", None)
    if frames is not None:
        fields["frames"] = [f.strip() for f in frames.split(",") if f.strip()]
    return RunConfig(**fields)


def main(argv: Optional[List[str]] = None) -> None:
    """Main CLI entry point."""
    parser = setup_argparser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        sys.exit(INPUT_ERROR_EXIT)

    try:
        config = run_config_from_args(args)
    except ValidationError as e:
        print(f"Invalid arguments: {e}")
        sys.exit(INPUT_ERROR_EXIT)

    sys.exit(asyncio.run(run_command_with_record(config, COMMANDS[args.command])))


if __name__ == "__main__":
    main()
