import argparse
import logging
import os
import sys
from importlib import metadata
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from dotenv import load_dotenv

from core.config import PATHOGRAPH_LOG_LEVEL, PATHOGRAPH_MAX_INTERNAL
from core.limits_loader import get_default
from core.log_formatter import EnhancedLogFormatter, configure_file_logging
from core.utils import EXIT_NO, EXIT_UNKNOWN, EXIT_YES, PreconditionError, handle_command_errors

dotenv_path = os.path.join(os.path.dirname(os.path.abspath(__file__)), ".env")
load_dotenv(dotenv_path=dotenv_path)

logging.basicConfig(
    level=getattr(logging, PATHOGRAPH_LOG_LEVEL, logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

configure_file_logging()

# Library imports come after logging is configured so their module loggers inherit it
from automaton.builder import build_decision_dfa  # noqa: E402
from automaton.machines import format_dfa, is_empty, minimize, run, to_dot  # noqa: E402
from automaton.regex import regex_from_dfa  # noqa: E402
from closedcase.closed import ClosedDecider, is_closed  # noqa: E402
from containment.closures import RELATIONS, encode  # noqa: E402
from containment.truemper import TRUEMPER_KINDS, find_configuration, truemper  # noqa: E402
from pathograph.formats import format_pgf_many, load_pgf_file  # noqa: E402
from pathograph.model import Pathograph  # noqa: E402
from realization.formats import format_pgr, load_pgr_file  # noqa: E402
from realization.realization import decide_bounded, enumerate_realizations  # noqa: E402
from realization.strings import (  # noqa: E402
    determination_string,
    format_determination_string,
    realization_from_string,
)
from reductions.stages import build_stage1, build_stage2, build_stage3, format_stage, stage_counts  # noqa: E402
from reductions.tiles import load_tiles_file, search_periodic_tiling, uniform_patch  # noqa: E402
from reductions.witness import tiling_to_realization  # noqa: E402

MODES = ("auto", "rungless", "closed", "oracle")
REGEX_MAX_LENGTH = 4000


def safe_print(text):
    # Banner and progress go to stderr only when a person is watching; results go to stdout
    if not sys.stderr.isatty():
        logger.debug(f"[console] {text}")
        return

    try:
        print(text, file=sys.stderr)
    except UnicodeEncodeError:
        print(text.encode("ascii", errors="replace").decode(), file=sys.stderr)


def configure_safe_logging():
    class SafeEnhancedFormatter(EnhancedLogFormatter):
        """Enhanced ASCII formatter with additional Windows safety."""

        def format(self, record):
            try:
                return super().format(record)
            except UnicodeEncodeError:
                # Fallback to ASCII-safe formatting
                service_prefix = self._get_ascii_prefix(record.name, record.levelname)
                safe_msg = (
                    str(record.getMessage())
                    .encode("ascii", errors="replace")
                    .decode("ascii")
                )
                return f"{service_prefix} {safe_msg}"

    # Replace all console handlers' formatters with safe enhanced ones
    for handler in logging.root.handlers:
        # Only apply to console/stream handlers, keep file handlers as-is
        if isinstance(handler, logging.StreamHandler) and getattr(handler.stream, "name", None) in [
            "<stderr>",
            "<stdout>",
        ]:
            safe_formatter = SafeEnhancedFormatter(use_colors=True)
            handler.setFormatter(safe_formatter)


def package_version() -> str:
    try:
        return metadata.version("pathograph-calculus")
    except metadata.PackageNotFoundError:
        return "dev"


# output helpers


class Output:
    """Collects result text for stdout or the --out file."""

    def __init__(self, path: Optional[str]):
        self.path = path
        self.lines: List[str] = []

    def write(self, text: str) -> None:
        self.lines.append(text.rstrip("\n"))

    def flush(self) -> None:
        text = "\n".join(self.lines) + ("\n" if self.lines else "")
        if self.path:
            with open(self.path, "w", encoding="utf-8") as f:
                f.write(text)
            safe_print(f"📝 Wrote {self.path}")
        else:
            sys.stdout.write(text)


def load_instance(h_path: str, family_paths: Sequence[str]) -> Tuple[Pathograph, List[Pathograph]]:
    hs = load_pgf_file(h_path)
    if len(hs) != 1:
        raise PreconditionError(f"{h_path} must hold exactly one pathograph, found {len(hs)}")
    family: List[Pathograph] = []
    for path in family_paths:
        family.extend(load_pgf_file(path))
    h = hs[0].ensure_valid()
    for f in family:
        f.ensure_valid()
    return h, family


def resolve_mode(mode: str, h: Pathograph, family: Sequence[Pathograph]) -> str:
    """Auto mode prefers the rungless machine, then rung elimination, then the bounded oracle."""
    if mode != "auto":
        return mode
    if h.is_rungless:
        return "rungless"
    if is_closed(family):
        return "closed"
    return "oracle"


def write_witness(out: Output, h: Pathograph, sigma) -> None:
    out.write(f"witness: {format_determination_string(sigma, h)}")
    out.write(format_pgr(realization_from_string(h, sigma)))


# commands


@handle_command_errors("validate")
def cmd_validate(args) -> int:
    out = Output(args.out)
    status = EXIT_YES
    for i, p in enumerate(load_pgf_file(args.file), start=1):
        problems = p.validate()
        if problems:
            status = EXIT_NO
            out.write(f"pathograph {i}: invalid")
            for problem in problems:
                out.write(f"  - {problem}")
        else:
            out.write(f"pathograph {i}: ok ({p.describe()})")
    out.flush()
    return status


def _decide(h: Pathograph, family: List[Pathograph], mode: str, max_internal: int, out: Output) -> int:
    mode = resolve_mode(mode, h, family)
    out.write(f"mode: {mode}")
    if mode == "rungless":
        verdict = is_empty(build_decision_dfa(h, family))
        answer = not verdict.empty
        out.write(f"answer: {'yes' if answer else 'no'}")
        if answer:
            write_witness(out, h, verdict.witness)
    elif mode == "closed":
        decision = ClosedDecider(family).decide(h)
        answer = decision.answer
        out.write(f"answer: {'yes' if answer else 'no'}")
        if answer:
            out.write(f"rungless member: {decision.member.describe()}")
            write_witness(out, decision.member, decision.witness)
    else:
        decision = decide_bounded(h, family, max_internal)
        if decision.answer == "unknown":
            out.write(f"answer: unknown at bound {decision.bound}")
            logger.info(f"Decision for ({h.describe()}) via oracle: unknown")
            return EXIT_UNKNOWN
        answer = True
        out.write("answer: yes")
        if h.is_rungless:
            out.write(f"witness: {format_determination_string(determination_string(decision.realization), h)}")
        out.write(format_pgr(decision.realization))
    logger.info(f"Decision for ({h.describe()}) via {mode}: {'yes' if answer else 'no'}")
    return EXIT_YES if answer else EXIT_NO


@handle_command_errors("decide")
def cmd_decide(args) -> int:
    h, family = load_instance(args.h, args.family)
    out = Output(args.out)
    status = _decide(h, family, args.mode, args.max_internal, out)
    out.flush()
    return status


@handle_command_errors("oracle")
def cmd_oracle(args) -> int:
    h, family = load_instance(args.h, args.family)
    out = Output(args.out)
    status = _decide(h, family, "oracle", args.max_internal, out)
    out.flush()
    return status


@handle_command_errors("characterize")
def cmd_characterize(args) -> int:
    h, family = load_instance(args.h, args.family)
    dfa = minimize(build_decision_dfa(h, family))
    out = Output(args.out)
    verdict = is_empty(dfa)
    if verdict.empty:
        out.write("empty language")
    if args.format == "regex":
        text = regex_from_dfa(dfa, max_length=REGEX_MAX_LENGTH)
        if text is None:
            logger.warning("Regular expression too long, writing the machine instead")
            out.write(format_dfa(dfa))
        elif not verdict.empty:
            out.write(text)
    elif args.format == "dot":
        out.write(to_dot(dfa, name="characterization"))
    else:
        out.write(format_dfa(dfa))
    out.flush()
    return EXIT_YES


@handle_command_errors("check")
def cmd_check(args) -> int:
    h, family = load_instance(args.h, args.family)
    r = load_pgr_file(args.realization, h)
    sigma = determination_string(r)
    dfa = build_decision_dfa(h, family)
    result = run(dfa, sigma)
    out = Output(args.out)
    out.write(f"string: {format_determination_string(sigma, h)}")
    out.write(f"transitions: {result.transitions}")
    out.write(f"forbidden-free: {'yes' if result.accepted else 'no'}")
    out.flush()
    return EXIT_YES if result.accepted else EXIT_NO


@handle_command_errors("encode")
def cmd_encode(args) -> int:
    graphs = load_pgf_file(args.graph)
    out = Output(args.out)
    members: List[Pathograph] = []
    for g in graphs:
        if not g.is_graph:
            raise PreconditionError("encode takes plain graphs (no urpaths)")
        members.extend(encode(g, args.relation, args.max_order))
    out.write(format_pgf_many(members))
    out.flush()
    safe_print(f"🧩 {len(members)} pathographs for {args.relation}")
    return EXIT_YES


@handle_command_errors("truemper")
def cmd_truemper(args) -> int:
    out = Output(args.out)
    if not args.graph:
        out.write(format_pgf_many(truemper(args.kind)))
        out.flush()
        return EXIT_YES

    status = EXIT_YES
    for i, g in enumerate(load_pgf_file(args.graph), start=1):
        if not g.is_graph:
            raise PreconditionError("truemper --graph takes plain graphs (no urpaths)")
        found = find_configuration(g, args.kind)
        if found is None:
            out.write(f"graph {i}: {args.kind}-free")
        else:
            status = EXIT_NO
            out.write(f"graph {i}: {args.kind} on {{{','.join(sorted(found))}}}")
    out.flush()
    return status


@handle_command_errors("enumerate")
def cmd_enumerate(args) -> int:
    h, _ = load_instance(args.h, [])
    if not h.is_rungless and not args.pgr:
        raise PreconditionError("determination strings need a rungless pathograph; use --pgr")
    out = Output(args.out)
    count = 0
    for r in enumerate_realizations(h, args.max_internal):
        count += 1
        if args.pgr:
            out.write(("---\n" if count > 1 else "") + format_pgr(r))
        else:
            out.write(format_determination_string(determination_string(r), h))
    out.flush()
    safe_print(f"🔢 {count} realizations with at most {args.max_internal} internal vertices per urpath")
    return EXIT_YES


@handle_command_errors("reduce")
def cmd_reduce(args) -> int:
    tiles, patch = load_tiles_file(args.tiles)
    if patch is None:
        patch = uniform_patch(tiles.tiles[0].name)
        logger.info(f"No patch given, using {tiles.tiles[0].name} in every cell")
    stage = build_stage1(tiles, patch)
    if args.stage >= 2:
        stage = build_stage2(stage)
    if args.stage == 3:
        stage = build_stage3(stage)

    out = Output(args.out)
    out.write(format_stage(stage))
    out.flush()
    n, k, e, s, r = stage_counts(stage)
    kinds = ", ".join(f"{kind}: {count}" for kind, count in stage.kinds().items())
    safe_print(f"🧱 Stage {args.stage}: {n} vertices, {k} urpaths, {e} edges, {s} spokes, {r} rungs")
    safe_print(f"   Forbidden types: {kinds}")
    logger.info(f"counts: {n} {k} {e} {s} {r}")

    a_max, b_max = args.bounds
    tiling = search_periodic_tiling(tiles, a_max, b_max, patch)
    if tiling is None:
        logger.warning(f"no periodic tiling with periods up to {a_max}x{b_max}")
        return EXIT_NO
    report = tiling_to_realization(args.stage, tiling, patch)
    for line in report.lines():
        logger.info(line)
    return EXIT_YES


# argument parsing


def parse_bounds(text: str) -> Tuple[int, int]:
    try:
        a, b = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bounds must look like 4x4, got '{text}'")
    if a < 1 or b < 1:
        raise argparse.ArgumentTypeError("bounds must be at least 1x1")
    return a, b


def default_max_internal() -> int:
    if "PATHOGRAPH_MAX_INTERNAL" in os.environ:
        return PATHOGRAPH_MAX_INTERNAL
    return int(get_default("max_internal"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathograph", description="Pathographs, realizations and forbidden-structure decisions"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {package_version()}")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    parser.add_argument("--out", help="Write results to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def instance(p: argparse.ArgumentParser) -> None:
        p.add_argument("h", help="PGF file holding the pathograph")
        p.add_argument("family", nargs="*", help="PGF files holding the forbidden pathographs")

    def max_internal(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--max-internal",
            type=int,
            default=default_max_internal(),
            help="Largest number of internal vertices per urpath for enumeration and the oracle",
        )

    p = sub.add_parser("validate", help="Check the pathograph invariants of every block in a PGF file")
    p.add_argument("file")

    p = sub.add_parser("decide", help="Is there a realization containing no forbidden pathograph?")
    instance(p)
    p.add_argument("--mode", choices=MODES, default="auto")
    max_internal(p)

    p = sub.add_parser("characterize", help="Machine accepting the forbidden-free determination strings")
    instance(p)
    p.add_argument("--format", choices=("dfa", "regex", "dot"), default="dfa")

    p = sub.add_parser("check", help="Run the decision machine over a realization")
    instance(p)
    p.add_argument("--realization", required=True, help="PGR file with the labeled realization")

    p = sub.add_parser("encode", help="Encode a containment relation of a graph as pathographs")
    p.add_argument("graph", help="PGF file with one or more plain graphs")
    p.add_argument("--relation", choices=RELATIONS, required=True)
    p.add_argument("--max-order", type=int, default=None)

    p = sub.add_parser("truemper", help="Pathograph set of a Truemper configuration")
    p.add_argument("kind", choices=TRUEMPER_KINDS)
    p.add_argument("--graph", help="PGF file of plain graphs to search for the configuration instead")

    p = sub.add_parser("enumerate", help="List realizations up to a length bound")
    p.add_argument("h")
    max_internal(p)
    p.add_argument("--pgr", action="store_true", help="Write realizations as PGR instead of strings")

    p = sub.add_parser("oracle", help="Bounded brute-force decision")
    instance(p)
    max_internal(p)

    p = sub.add_parser("reduce", help="Build a staged instance from Wang tiles")
    p.add_argument("tiles", help="Tile file")
    p.add_argument("--stage", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("--bounds", type=parse_bounds, default=tuple(get_default("bounds")))
    return parser


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "validate": cmd_validate,
    "decide": cmd_decide,
    "characterize": cmd_characterize,
    "check": cmd_check,
    "encode": cmd_encode,
    "truemper": cmd_truemper,
    "enumerate": cmd_enumerate,
    "oracle": cmd_oracle,
    "reduce": cmd_reduce,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main entry point for the pathograph command line.
    Returns the command's exit code.
    """
    # Configure safe logging for Windows Unicode handling
    configure_safe_logging()

    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    safe_print("🔧 Pathograph Calculus")
    safe_print("=" * 35)
    safe_print(f"   📦 Version: {package_version()}")
    safe_print(f"   🐍 Python: {sys.version.split()[0]}")
    safe_print(f"   ▶️  Command: {args.command}")
    safe_print(f"   📝 Log Level: {logging.getLogger().getEffectiveLevel()}")
    safe_print("")

    try:
        return COMMANDS[args.command](args)
    except KeyboardInterrupt:
        safe_print("\n👋 Interrupted")
        return 130


if __name__ == "__main__":
    sys.exit(main())
