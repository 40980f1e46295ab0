"""Command-line entry point: `python -m app.cli --model net.pnml --log log.xes --approach hybrid`."""
import argparse
import asyncio
import logging
import sys

from pydantic import ValidationError

from app.config import DEFAULT_EXPANSION_CAP, DEFAULT_STATE_CAP, DEFAULT_THREADS, env_flag, env_value
from app.errors import PipelineError
from app.pipeline.orchestrator import Approach, RunConfig, run
from app.pipeline.report import OutputFormat, emit_report

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conformance",
        description="Align event-log traces against a workflow net.",
    )
    parser.add_argument("--model", default=env_value("MODEL"), help="PNML workflow net")
    parser.add_argument("--log", default=env_value("LOG"), help="event log (.xes, .xes.gz, .txt)")
    parser.add_argument(
        "--approach",
        choices=[a.value for a in Approach],
        default=env_value("APPROACH"),
        help="automata, tandem or hybrid",
    )
    parser.add_argument(
        "--output",
        choices=[f.value for f in OutputFormat],
        default=env_value("OUTPUT", OutputFormat.json.value),
    )
    parser.add_argument("--emit-alignments", action="store_true", default=env_flag("EMIT_ALIGNMENTS"))
    parser.add_argument("--verify", action="store_true", default=env_flag("VERIFY"))
    parser.add_argument("--no-timing", action="store_true", default=env_flag("NO_TIMING"))
    parser.add_argument("--threads", type=int, default=DEFAULT_THREADS)
    parser.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)
    parser.add_argument("--expansion-cap", type=int, default=DEFAULT_EXPANSION_CAP)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
    )

    missing = [flag for flag, value in (("--model", args.model), ("--log", args.log), ("--approach", args.approach)) if not value]
    if missing:
        parser.error(f"missing required options: {', '.join(missing)}")

    try:
        cfg = RunConfig(
            model_path=args.model,
            log_path=args.log,
            approach=args.approach,
            output=args.output,
            emit_alignments=args.emit_alignments,
            verify=args.verify,
            timing=not args.no_timing,
            threads=args.threads,
            state_cap=args.state_cap,
            expansion_cap=args.expansion_cap,
        )
    except ValidationError as exc:
        print(f"error [config]: {exc}", file=sys.stderr)
        return 1

    try:
        report = asyncio.run(run(cfg))
    except PipelineError as exc:
        print(f"error [{exc.phase}]: {exc.cause}", file=sys.stderr)
        return 1

    try:
        emit_report(report, cfg.output, sys.stdout)
    except OSError as exc:
        print(f"error [report]: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
