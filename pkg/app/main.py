# app/main.py
"""
Command-line front end.

Exit codes: 0 ok, 1 errors detected (unshape/check), 2 invalid input,
3 I/O failure, 4 budget exceeded.
"""
import argparse
import csv
import hashlib
import io
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import ValidationError

from . import crud
from .config import DATABASE_URL
from .database import init_db
from .entropy import format_sequence, parse_sequence
from .errors import BudgetExceededError, DomainError, InvalidLengthError, InvalidSymbolError, NotACodewordError
from .experiments import (
    exact_detection,
    huffman_compare,
    parity_baseline_detection,
    simulate_detection,
    sweep_delta,
)
from .logger_config import logger, setup_logger
from .schemas import ChannelSpec, ExperimentRunSchema, RunConfig
from .shaping import build_context, is_member, shape, unshape
from .typeclass import dump_table, get_class_table

EXIT_OK = 0
EXIT_DETECTED = 1
EXIT_INVALID = 2
EXIT_IO = 3
EXIT_BUDGET = 4

DELTA_HEADER = ["h", "N", "K", "avg_NH0_X", "avg_N2H0_Y", "delta", "sign"]
DETECT_HEADER = ["h", "N", "K", "p", "trials", "seed", "clean", "detected", "undetected", "detected_rate", "undetected_rate"]
EXACT_HEADER = ["h", "N", "K", "weight", "detected_fraction", "baseline_detected_fraction"]
HUFFMAN_HEADER = [
    "h", "N", "K", "mode",
    "mean_bits_plain", "mean_bits_shaped", "mean_bits_plain_hdr", "mean_bits_shaped_hdr",
    "mean_NH0_plain", "mean_N2H0_shaped", "frac_improved", "mean_gain_bits",
]


class InputLineError(Exception):
    def __init__(self, line_no: int, cause: Exception):
        super().__init__(f"line {line_no}: {cause}")
        self.line_no = line_no


def parse_grid(text: Optional[str]) -> List[int]:
    """'2,3,4' or inclusive ranges 'start:stop[:step]', mixed; '' is an empty grid."""
    values: List[int] = []
    if not text:
        return values
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            bounds = [int(v) for v in part.split(":")]
            if len(bounds) not in (2, 3) or (len(bounds) == 3 and bounds[2] < 1):
                raise argparse.ArgumentTypeError(f"bad range {part!r}")
            start, stop = bounds[0], bounds[1]
            step = bounds[2] if len(bounds) == 3 else 1
            values.extend(range(start, stop + 1, step))
        else:
            values.append(int(part))
    return values


# --- Text I/O ---

def _read_input(path: Optional[str]) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write_output(path: Optional[str], text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _join_lines(lines: List[str], trailing_newline: bool) -> str:
    return "\n".join(lines) + ("\n" if lines and trailing_newline else "")


def _parse_lines(text: str, h: int, length: int):
    sequences = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        try:
            seq = parse_sequence(line, h)
            if len(seq) != length:
                raise InvalidLengthError(f"expected length {length}, got {len(seq)}")
        except (InvalidSymbolError, InvalidLengthError) as e:
            raise InputLineError(line_no, e) from e
        sequences.append(seq)
    return sequences


def _csv_text(header: List[str], rows: List[List[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _json_text(header: List[str], rows: List[List[str]]) -> str:
    return json.dumps([dict(zip(header, row)) for row in rows], indent=2) + "\n"


def _table_text(config: RunConfig, header: List[str], rows: List[List[str]]) -> str:
    if config.fmt == "json":
        return _json_text(header, rows)
    return _csv_text(header, rows)


# --- Commands ---
# each returns (exit_code, output_text, row_count)

def cmd_shape(config: RunConfig) -> Tuple[int, str, int]:
    ctx = build_context(config.params, config.class_budget)
    text = _read_input(config.in_path)
    sources = _parse_lines(text, config.h, config.N)
    lines = [format_sequence(shape(x, ctx)) for x in sources]
    logger.info(f"Shaped {len(lines)} sequences")
    return EXIT_OK, _join_lines(lines, text.endswith("\n")), len(lines)


def cmd_unshape(config: RunConfig) -> Tuple[int, str, int]:
    ctx = build_context(config.params, config.class_budget)
    text = _read_input(config.in_path)
    received = _parse_lines(text, config.h, config.params.N2)
    lines = []
    detected = 0
    for line_no, y in enumerate(received, start=1):
        try:
            lines.append(format_sequence(unshape(y, ctx)))
        except NotACodewordError as e:
            detected += 1
            lines.append("")  # keeps output line-aligned with input
            logger.warning(f"DETECTED line {line_no}: {e}")
            print(f"DETECTED line {line_no}", file=sys.stderr)
    logger.info(f"Unshaped {len(lines) - detected} sequences, {detected} detected")
    return (EXIT_DETECTED if detected else EXIT_OK), _join_lines(lines, text.endswith("\n")), len(lines)


def cmd_check(config: RunConfig) -> Tuple[int, str, int]:
    ctx = build_context(config.params, config.class_budget)
    received = _parse_lines(_read_input(config.in_path), config.h, config.params.N2)
    rows = []
    for line_no, y in enumerate(received, start=1):
        member = is_member(y, ctx)
        if not member:
            logger.warning(f"DETECTED line {line_no}: {format_sequence(y)}")
        rows.append([str(line_no), format_sequence(y), "true" if member else "false"])
    code = EXIT_DETECTED if any(r[2] == "false" for r in rows) else EXIT_OK
    return code, _table_text(config, ["line", "sequence", "member"], rows), len(rows)


def cmd_sweep_delta(config: RunConfig) -> Tuple[int, str, int]:
    reports = sweep_delta(config.h_grid, config.N_grid, config.K_grid, config.class_budget, config.workers)
    rows = [r.csv_row() for r in reports]
    return EXIT_OK, _table_text(config, DELTA_HEADER, rows), len(rows)


def _fmt(value: float) -> str:
    return f"{value:.9f}"


def cmd_detect(config: RunConfig) -> Tuple[int, str, int]:
    ctx = build_context(config.params, config.class_budget)
    p = config.params
    if config.exact:
        weights = [config.weight] if config.weight is not None else list(range(1, p.N2 + 1))
        rows = []
        for w in weights:
            fraction = exact_detection(ctx, w, config.enum_budget)
            baseline = (
                _fmt(parity_baseline_detection(p.h, p.N, w, config.enum_budget)) if w <= p.N + 1 else ""
            )
            rows.append([str(p.h), str(p.N), str(p.K), str(w), _fmt(fraction), baseline])
        return EXIT_OK, _table_text(config, EXACT_HEADER, rows), len(rows)

    report = simulate_detection(ctx, ChannelSpec(p=config.p), config.trials, config.seed, config.workers)
    row = [
        str(p.h), str(p.N), str(p.K), repr(config.p), str(config.trials), str(config.seed),
        str(report.clean), str(report.detected), str(report.undetected),
        _fmt(report.detected_rate), _fmt(report.undetected_rate),
    ]
    return EXIT_OK, _table_text(config, DETECT_HEADER, [row]), 1


def cmd_huffman(config: RunConfig) -> Tuple[int, str, int]:
    ctx = build_context(config.params, config.class_budget)
    sample = None if config.exact else config.sample
    per_sequence, summary = huffman_compare(ctx, sample, config.seed, config.enum_budget)
    rows = [r.csv_row() for r in per_sequence] if config.per_sequence else []
    rows.append(summary.csv_row())
    return EXIT_OK, _table_text(config, HUFFMAN_HEADER, rows), len(rows)


def cmd_table(config: RunConfig) -> Tuple[int, str, int]:
    length = config.L if config.L is not None else config.params.N2
    table = get_class_table(config.h, length, config.class_budget)
    return EXIT_OK, dump_table(table) + "\n", len(table)


def cmd_runs(config: RunConfig) -> Tuple[int, str, int]:
    if not config.db_url:
        raise DomainError("no run ledger configured (use --db or SST_DATABASE_URL)")
    session_factory = init_db(config.db_url)
    with session_factory() as db:
        runs = [ExperimentRunSchema.model_validate(r) for r in crud.list_runs(db)]
    header = ["id", "command", "exit_code", "rows", "output_sha256", "started_at", "parameters"]
    rows = [
        [str(r.id), r.command, str(r.exit_code), str(r.rows), r.output_sha256, r.started_at.isoformat(), r.parameters]
        for r in runs
    ]
    return EXIT_OK, _table_text(config, header, rows), len(rows)


COMMANDS = {
    "shape": cmd_shape,
    "unshape": cmd_unshape,
    "check": cmd_check,
    "sweep-delta": cmd_sweep_delta,
    "detect": cmd_detect,
    "huffman": cmd_huffman,
    "table": cmd_table,
    "runs": cmd_runs,
}


# --- Run ledger ---

def record_run(config: RunConfig, exit_code: int, output: str, rows: int, started_at: datetime) -> None:
    """Store the run; failures are logged and never change the command's result."""
    try:
        session_factory = init_db(config.db_url)
        with session_factory() as db:
            run = crud.create_run(
                db,
                command=config.command,
                parameters=config.model_dump_json(),
                exit_code=exit_code,
                rows=rows,
                output_sha256=hashlib.sha256(output.encode("utf-8")).hexdigest(),
                started_at=started_at,
            )
            logger.info(f"Recorded run {run.id} in ledger")
    except Exception as e:
        logger.error(f"!!! Failed to record run in ledger: {e}", exc_info=True)


# --- Argument parsing ---

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sst",
        description="Set shaping codec: shape/unshape sequences, test membership, run experiments",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Shape length-2 binary sequences into the 8 -> 4 lowest-entropy set
  sst shape --h 2 --N 2 --K 1 --in source.txt --out shaped.txt

  # Recover them; corrupted lines are reported as DETECTED (exit 1)
  sst unshape --h 2 --N 2 --K 1 --in shaped.txt --out source.txt

  # Average-entropy sweep
  sst sweep-delta --h-grid 2,3,4 --N-grid 4:64:4 --K-grid 1,2

  # Exact detection fraction for single substitutions
  sst detect --h 3 --N 1 --K 1 --exact --weight 1
        """,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--h", type=int, default=2, help="alphabet size, 2..36 (default: 2)")
    common.add_argument("--N", type=int, default=1, help="source length (default: 1)")
    common.add_argument("--K", type=int, default=1, help="shaping order (default: 1)")
    common.add_argument("--in", dest="in_path", default=None, help="input file ('-' or omitted: stdin)")
    common.add_argument("--out", dest="out_path", default=None, help="output file ('-' or omitted: stdout)")
    common.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
    common.add_argument("--class-budget", type=int, default=None, help="max classes per table")
    common.add_argument("--enum-budget", type=int, default=None, help="max brute-force work items")
    common.add_argument("--workers", type=int, default=None, help="process pool size")
    common.add_argument("--db", dest="db_url", default=DATABASE_URL, help="SQLAlchemy URL of the run ledger")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ERROR")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("shape", parents=[common], help="shape length-N sequences")
    sub.add_parser("unshape", parents=[common], help="invert shaping, flag non-members")
    sub.add_parser("check", parents=[common], help="membership test of length-(N+K) sequences")

    sweep = sub.add_parser("sweep-delta", parents=[common], help="average-entropy delta over a grid")
    sweep.add_argument("--h-grid", type=parse_grid, default=[])
    sweep.add_argument("--N-grid", type=parse_grid, default=[])
    sweep.add_argument("--K-grid", type=parse_grid, default=[])

    detect = sub.add_parser("detect", parents=[common], help="error detection study")
    detect.add_argument("--p", type=float, default=0.0, help="substitution probability")
    detect.add_argument("--trials", type=int, default=10_000)
    detect.add_argument("--seed", type=int, default=0)
    detect.add_argument("--weight", type=int, default=None, help="error weight for --exact")
    detect.add_argument("--exact", action="store_true", help="exhaustive enumeration instead of simulation")

    huff = sub.add_parser("huffman", parents=[common], help="Huffman coding comparison")
    huff.add_argument("--exact", action="store_true", help="exhaustive over X^N (default unless --sample)")
    huff.add_argument("--sample", type=int, default=None, help="number of uniformly drawn sources")
    huff.add_argument("--seed", type=int, default=0)
    huff.add_argument("--summary-only", dest="per_sequence", action="store_false")

    table = sub.add_parser("table", parents=[common], help="JSON dump of the class table")
    table.add_argument("--L", type=int, default=None, help="sequence length (default: N+K)")

    sub.add_parser("runs", parents=[common], help="list the run ledger")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if v is not None and k != "log_level"}
    return RunConfig(**values)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.log_level:
        setup_logger(args.log_level.upper())

    try:
        config = config_from_args(args)
    except ValidationError as e:
        print(f"error: invalid parameters: {e}", file=sys.stderr)
        return EXIT_INVALID

    started_at = datetime.now(timezone.utc)
    output, rows = "", 0
    try:
        code, output, rows = COMMANDS[config.command](config)
        _write_output(config.out_path, output)
    except InputLineError as e:
        logger.error(f"Invalid input at line {e.line_no}: {e}")
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_INVALID
    except (InvalidSymbolError, InvalidLengthError, DomainError, ValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_INVALID
    except BudgetExceededError as e:
        logger.error(f"Budget exceeded: {e}")
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_BUDGET
    except OSError as e:
        logger.error(f"!!! I/O failure: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        code = EXIT_IO

    if config.db_url and config.command != "runs":
        record_run(config, code, output, rows, started_at)
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
