# cli.py

import argparse
import logging
import os
import sys
from typing import Callable, Optional

import numpy as np

from semiwqo.codec import dominates, encode_layout, parse_codeword, serialize_codeword
from semiwqo.config import FileSettings, RunConfig, load_settings
from semiwqo.constants import (
    EXIT_INVALID,
    EXIT_NEGATIVE,
    EXIT_OK,
    EXIT_USAGE,
    FORMAT_LINES,
    OUTPUT_FORMATS,
)
from semiwqo.digraph import (
    gen_alternating_cycle,
    gen_random_bounded_ctw,
    gen_random_semicomplete,
    gen_random_tournament,
    read_digraph,
    require_semi_complete,
    serialize_digraph,
    symmetric_pairs,
    validate_semi_complete,
    write_digraph,
)
from semiwqo.errors import ReconstructionError, SemiWQOError
from semiwqo.immersion import (
    find_immersion_bruteforce,
    immerse_with_trace,
    parse_model,
    serialize_model,
    serialize_trace,
    verify_strong_immersion,
    wqo_scan,
)
from semiwqo.logger import configure_logging
from semiwqo.ordering import build_layout, cutwidth_exact, serialize_ordered_cuts, serialize_ordering

logger = logging.getLogger(__name__)

GEN_KINDS = ("tournament", "semicomplete", "bounded-ctw", "altcycle")

# which size caps --limit-n overrides, per subcommand
LIMIT_TARGETS = {
    "cutwidth": ("cutwidth_n", "bruteforce_cutwidth_n"),
    "order": ("cutwidth_n",),
    "encode": ("cutwidth_n",),
    "immerse": ("cutwidth_n",),
    "scan": ("cutwidth_n",),
    "immerse-brute": ("immersion_pattern_n", "immersion_host_n"),
}


class UsageError(Exception):
    """A well-formed command line asking for something unsupported."""


class Report:
    """Collects output as human text or as key=value records, one per line."""

    def __init__(self, output_format: str):
        self.machine = output_format == FORMAT_LINES
        self.lines: list[str] = []

    def record(self, human: str, **fields) -> None:
        if self.machine:
            self.lines.append(" ".join(f"{k}={_field(v)}" for k, v in fields.items()))
        else:
            self.lines.append(human)

    def block(self, text: str) -> None:
        """Verbatim text in a documented file format; identical in both modes."""
        self.lines.extend(text.rstrip("\n").split("\n"))

    def text(self) -> str:
        return "\n".join(self.lines) + ("\n" if self.lines else "")


def _field(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(map(str, value)) or "-"
    return str(value).replace(" ", "_")


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------

def cmd_validate(config: RunConfig, report: Report) -> int:
    d = read_digraph(config.inputs[0])
    result = validate_semi_complete(d)
    pairs = len(symmetric_pairs(d))
    if result.semi_complete:
        kind = "tournament" if result.tournament else f"semi-complete with {pairs} symmetric pairs"
        human = f"✅ {config.inputs[0]}: {kind}"
    else:
        human = f"❌ {config.inputs[0]}: not semi-complete, pair {result.witness} has no arc"
    report.record(human, semi_complete=result.semi_complete, tournament=result.tournament,
                  symmetric_pairs=pairs, witness=result.witness)
    return EXIT_OK if result.semi_complete else EXIT_NEGATIVE


def cmd_cutwidth(config: RunConfig, report: Report) -> int:
    d = read_digraph(config.inputs[0])
    result = cutwidth_exact(d, config.limits)
    report.record(f"ctw = {result.ctw}, ordering: {' '.join(map(str, result.ordering.order))}",
                  ctw=result.ctw, ordering=result.ordering.order)
    return EXIT_OK


def cmd_order(config: RunConfig, report: Report) -> int:
    d = read_digraph(config.inputs[0])
    layout = build_layout(d, config.limits)
    report.record(f"width {layout.width}, cut vector {layout.cuts.cut_vector}",
                  width=layout.width, cut_vector=layout.cuts.cut_vector)
    report.block(serialize_ordering(layout.ordering))
    report.block(serialize_ordered_cuts(layout.ordered_cuts))
    return EXIT_OK


def cmd_encode(config: RunConfig, report: Report) -> int:
    d = require_semi_complete(read_digraph(config.inputs[0]))
    layout = build_layout(d, config.limits)
    c = layout.width if config.c is None else config.c
    report.block(serialize_codeword(encode_layout(layout, c)))
    return EXIT_OK


def _read_text(path) -> str:
    with open(path, 'r') as f:
        return f.read()


def cmd_dominate(config: RunConfig, report: Report) -> int:
    cw, cw2 = (parse_codeword(_read_text(p)) for p in config.inputs[:2])
    f = dominates(cw, cw2)
    if f is None:
        report.record("no embedding: the first codeword is not dominated", dominated=False, embedding=None)
        return EXIT_NEGATIVE
    report.record(f"dominated via f = {f.f}", dominated=True, embedding=f.f)
    return EXIT_OK


def cmd_immerse(config: RunConfig, report: Report) -> int:
    s, s2 = (read_digraph(p) for p in config.inputs[:2])
    model, trace, c = immerse_with_trace(s, s2, config.c, config.limits)
    if trace is not None and config.trace_path:
        with open(config.trace_path, 'w') as f:
            f.write(serialize_trace(trace))
        logger.info(f"Trace written to {config.trace_path}")
    if model is None:
        report.record(f"c = {c}: codeword not dominated (no model; this does not rule out an immersion)",
                      c=c, immersed=False)
        return EXIT_NEGATIVE
    report.record(f"c = {c}: model found", c=c, immersed=True)
    report.block(serialize_model(model))
    return EXIT_OK


def cmd_immerse_brute(config: RunConfig, report: Report) -> int:
    h, d = (read_digraph(p) for p in config.inputs[:2])
    model = find_immersion_bruteforce(h, d, config.limits)
    if model is None:
        report.record("no strong immersion", immersed=False)
        return EXIT_NEGATIVE
    report.record("strong immersion found", immersed=True)
    report.block(serialize_model(model))
    return EXIT_OK


def cmd_verify(config: RunConfig, report: Report) -> int:
    model = parse_model(_read_text(config.inputs[0]))
    h, d = (read_digraph(p) for p in config.inputs[1:3])
    result = verify_strong_immersion(h, d, model)
    if result:
        report.record("✅ model verified", valid=True, clause=None, witness=None)
        return EXIT_OK
    report.record(f"❌ clause {result.clause} violated: {result.message}",
                  valid=False, clause=result.clause, witness=result.witness)
    return EXIT_NEGATIVE


def _generate(kind: str, options: dict, seed: int):
    n = options.get("n")
    if kind == "altcycle":
        return gen_alternating_cycle(options.get("k") or 2)
    if n is None:
        raise UsageError(f"gen {kind} needs --n")
    if kind == "tournament":
        return gen_random_tournament(n, seed)
    if kind == "semicomplete":
        return gen_random_semicomplete(n, seed, options.get("sym_prob", 0.5))
    c = options.get("c")
    if c is None:
        raise UsageError("gen bounded-ctw needs --c")
    return gen_random_bounded_ctw(n, c, seed, options.get("sym_prob", 0.5))


def cmd_gen(config: RunConfig, report: Report) -> int:
    kind = config.options["kind"]
    seed = config.seed
    if seed is None and kind != "altcycle":
        if report.machine:
            raise UsageError("randomized generators need an explicit --seed with --format lines")
        seed = int(np.random.SeedSequence().entropy % (2 ** 32))
        logger.info(f"Using seed {seed}")
    seed = seed or 0
    options = dict(config.options, c=config.c)

    count = config.options.get("count") or 1
    out_dir = config.options.get("out")
    if count == 1 and not out_dir:
        report.block(serialize_digraph(_generate(kind, options, seed)))
        return EXIT_OK

    out_dir = out_dir or "."
    os.makedirs(out_dir, exist_ok=True)
    for k in range(count):
        path = os.path.join(out_dir, f"{kind}-{seed + k}.txt")
        write_digraph(_generate(kind, options, seed + k), path)
        report.record(f"wrote {path}", path=path, seed=seed + k)
    return EXIT_OK


def _scan_inputs(directory) -> list[str]:
    names = sorted(name for name in os.listdir(directory) if not name.startswith("."))
    return [os.path.join(directory, name) for name in names if os.path.isfile(os.path.join(directory, name))]


def cmd_scan(config: RunConfig, report: Report) -> int:
    paths = _scan_inputs(config.inputs[0])
    sequence = [read_digraph(p) for p in paths]
    c = config.c
    if c is None:
        c = max((cutwidth_exact(d, config.limits).ctw for d in sequence), default=0)
        logger.info(f"Scanning {len(sequence)} digraphs with c = {c}")
    hit = wqo_scan(sequence, c, config.limits)
    if hit is None:
        report.record(f"no dominating pair among {len(sequence)} digraphs (c = {c})", c=c, found=False)
        return EXIT_NEGATIVE
    report.record(f"{paths[hit.i]} immerses in {paths[hit.j]} (c = {c}, f = {hit.embedding.f})",
                  c=c, found=True, i=hit.i, j=hit.j, first=paths[hit.i], second=paths[hit.j],
                  embedding=hit.embedding.f)
    report.block(serialize_model(hit.model))
    return EXIT_OK


COMMANDS: dict[str, tuple[Callable[[RunConfig, Report], int], int]] = {
    "validate": (cmd_validate, 1),
    "cutwidth": (cmd_cutwidth, 1),
    "order": (cmd_order, 1),
    "encode": (cmd_encode, 1),
    "dominate": (cmd_dominate, 2),
    "immerse": (cmd_immerse, 2),
    "immerse-brute": (cmd_immerse_brute, 2),
    "verify": (cmd_verify, 3),
    "gen": (cmd_gen, 0),
    "scan": (cmd_scan, 1),
}


def dispatch(config: RunConfig) -> tuple[int, str]:
    """Run one subcommand; returns the exit status and the report text."""
    handler, arity = COMMANDS[config.subcommand]
    if len(config.inputs) != arity:
        logger.error(f"{config.subcommand} expects {arity} input path(s), got {len(config.inputs)}")
        return EXIT_USAGE, ""
    report = Report(config.output_format)
    try:
        status = handler(config, report)
    except UsageError as e:
        logger.error(str(e))
        return EXIT_USAGE, ""
    except ReconstructionError as e:
        logger.error(f"Internal construction failed: {e}")
        if e.trace is not None:
            logger.error(f"Trace: {e.trace}")
        return EXIT_INVALID, report.text()
    except (SemiWQOError, ValueError, OSError) as e:
        logger.error(f"❌ {e}")
        return EXIT_INVALID, report.text()
    return status, report.text()


# ----------------------------------------------------------------------
# Argument parsing
# ----------------------------------------------------------------------

def _common_options() -> argparse.ArgumentParser:
    """Options accepted before or after the subcommand; absent unless given."""
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="YAML settings file (default: $SEMIWQO_CONFIG or ./semiwqo.yaml)")
    common.add_argument("--log-level", default=argparse.SUPPRESS, help="override the configured log level")
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=argparse.SUPPRESS,
                        help="output format (default from config)")
    common.add_argument("--c", type=int, default=argparse.SUPPRESS, help="width bound for encoding")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="generator seed")
    common.add_argument("--limit-n", type=int, default=argparse.SUPPRESS,
                        help="size cap for the exact/brute-force step of the command")
    common.add_argument("--trace", default=argparse.SUPPRESS,
                        help="write the reconstruction trace to this path (immerse)")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(prog="semiwqo", parents=[common], allow_abbrev=False,
                                     description="Cutwidth layouts, codewords and strong immersions "
                                                 "of semi-complete digraphs")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def command(name: str, help_text: str, *positionals: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, parents=[common], allow_abbrev=False)
        for positional in positionals:
            p.add_argument(positional)
        return p

    command("validate", "check semi-completeness", "digraph")
    command("cutwidth", "exact cutwidth and an optimal ordering", "digraph")
    command("order", "linked ordering and linked ordered cuts", "digraph")
    command("encode", "codeword of the linked layout", "digraph")
    command("dominate", "domination between two codeword files", "codeword", "codeword2")
    command("immerse", "codeword pipeline: model of the first digraph in the second", "digraph", "digraph2")
    command("immerse-brute", "exhaustive strong immersion search", "digraph", "digraph2")
    command("verify", "check a model file against pattern and host", "model", "digraph", "digraph2")
    command("scan", "first dominating pair in a directory of digraphs", "directory")

    p = command("gen", "generate instances")
    p.add_argument("kind", choices=GEN_KINDS)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, help="half-length of the alternating cycle")
    p.add_argument("--sym-prob", type=float, default=0.5)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", help="output directory")
    return parser


_INPUT_ARGS = ("model", "codeword", "codeword2", "digraph", "digraph2", "directory")
_OPTION_ARGS = ("kind", "n", "k", "sym_prob", "count", "out")


def build_config(args: argparse.Namespace, settings: FileSettings) -> RunConfig:
    inputs = tuple(getattr(args, name) for name in _INPUT_ARGS if getattr(args, name, None) is not None)
    options = {name: getattr(args, name) for name in _OPTION_ARGS if hasattr(args, name)}
    config = RunConfig(
        subcommand=args.subcommand,
        inputs=inputs,
        c=getattr(args, "c", None),
        seed=getattr(args, "seed", None),
        limits=settings.limits,
        output_format=getattr(args, "format", None) or settings.output_format,
        trace_path=getattr(args, "trace", None),
        options=options,
    )
    limit_n = getattr(args, "limit_n", None)
    if limit_n is not None:
        targets = LIMIT_TARGETS.get(args.subcommand, ())
        config = config.with_limits(**{name: limit_n for name in targets})
    return config


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings(getattr(args, "config", None))
        config = build_config(args, settings)
    except (ValueError, OSError) as e:
        print(f"semiwqo: {e}", file=sys.stderr)
        return EXIT_USAGE

    configure_logging(getattr(args, "log_level", None) or settings.log_level, settings.log_file)
    logger.debug(f"Running {config.subcommand} with {config}")
    status, text = dispatch(config)
    sys.stdout.write(text)
    return status
