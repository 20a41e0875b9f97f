"""Command line interface for epsk."""

import argparse
import logging
import logging.config
import os
import sys
from typing import List, Optional

from .config.settings import (
    COLOR_ENV,
    DEFAULT_CALCULUS,
    DEFAULT_CUT_POLICY,
    DEFAULT_EPS_MODE,
    EXIT_CODES,
    LOGGING_CONFIG,
    SEARCH_DEFAULTS,
)
from .core.kernel import Calculus, CutPolicy, EpsMode
from .core.syntax import EpskError, ParseError
from .core.workbench import Outcome, Workbench
from .search.saturation import SearchConfig
from .utils.serialization import dumps

# Configure logging
logging.config.dictConfig(LOGGING_CONFIG)
logger = logging.getLogger(__name__)

_COLORS = {"ok": "32", "failed": "31", "exhausted": "33"}
_MARKS = {"ok": "✓", "failed": "✗", "exhausted": "?"}


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the usage code instead of argparse's 2."""

    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_CODES["usage"], f"{self.prog}: error: {message}\n")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--calculus", choices=[c.value for c in Calculus],
                        default=DEFAULT_CALCULUS, help="ipc or ipce (default: %(default)s)")
    common.add_argument("--eps-mode", choices=[m.value for m in EpsMode],
                        default=DEFAULT_EPS_MODE, help="what the ∃ε rule deposits")
    common.add_argument("--cut-policy", choices=[p.value for p in CutPolicy],
                        default=DEFAULT_CUT_POLICY, help="which cuts are admitted")
    common.add_argument("--depth", type=int, default=SEARCH_DEFAULTS["instantiation_depth"],
                        help="new domain terms per world / quantifier instances")
    common.add_argument("--eps-nesting", type=int, default=SEARCH_DEFAULTS["eps_nesting"],
                        help="maximal ε-nesting of terms used by search")
    common.add_argument("--worlds", type=int, default=SEARCH_DEFAULTS["world_budget"],
                        help="maximal number of countermodel worlds")
    common.add_argument("--formulas", type=int, default=SEARCH_DEFAULTS["formula_budget"],
                        help="maximal number of formulas per sequent")
    common.add_argument("--steps", type=int, default=SEARCH_DEFAULTS["step_budget"],
                        help="step budget of each search")
    common.add_argument("--format", choices=["human", "json"], default="human",
                        help="report format (default: %(default)s)")
    common.add_argument("--out", default=None,
                        help="directory for written certificates")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _Parser(
        prog="epsk",
        description="Proof kernel, Kripke semantics and bounded search for IPC with ε-terms",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Check a derivation file (sequent calculus or natural deduction)
  epsk check golden/cut_example.json --cut-policy definedness-only

  # Proof or countermodel search, writing the certificate
  epsk decide "=> (C -> exists x. A(x)) -> exists x. (C -> A(x))"

  # Forcing of a formula at every world of a model
  epsk eval models/two_world.json "P(eps x. P(x)) -> exists x. P(x)"

  # Agreement of IPC and IPCε over a corpus
  epsk conserve corpus/conservativity.txt --format json
        """,
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    check = subparsers.add_parser("check", parents=[common], help="Check a derivation file")
    check.add_argument("derivation", help="derivation JSON file")

    for name, text in (("prove", "Search for a derivation"),
                       ("refute", "Search for a countermodel"),
                       ("decide", "Search for a countermodel, then a derivation")):
        command = subparsers.add_parser(name, parents=[common], help=text)
        command.add_argument("sequent", help='sequent text, e.g. "A, B => C"')

    evaluate = subparsers.add_parser("eval", parents=[common],
                                     help="Forcing of a formula at every world")
    evaluate.add_argument("model", help="model JSON file")
    evaluate.add_argument("formula", help="formula text")

    validate = subparsers.add_parser("validate-model", parents=[common],
                                     help="Check every model condition")
    validate.add_argument("model", help="model JSON file")

    translate = subparsers.add_parser("translate", parents=[common],
                                      help="Translate between sequent calculus and NJ")
    translate.add_argument("derivation", help="derivation JSON file")
    translate.add_argument("--to", choices=["nj", "seq"], required=True,
                           help="target system")

    extend = subparsers.add_parser("extend-model", parents=[common],
                                   help="Strictify an ε-free model and add ε-values")
    extend.add_argument("model", help="ε-free model JSON file")
    extend.add_argument("--term", action="append", default=[],
                        help="additional ε-term to track (repeatable)")

    conserve = subparsers.add_parser("conserve", parents=[common],
                                     help="Compare IPC and IPCε verdicts over a corpus")
    conserve.add_argument("corpus", help="corpus file, one sequent per line")
    conserve.add_argument("--no-progress", action="store_true",
                          help="do not show a progress bar")

    axiom = subparsers.add_parser("axiom", parents=[common],
                                  help="Recognize and prove a Hilbert axiom instance")
    axiom.add_argument("formula", help="formula text")
    return parser


def _search_config(args: argparse.Namespace) -> SearchConfig:
    return SearchConfig(
        calculus=Calculus(args.calculus),
        eps_mode=EpsMode(args.eps_mode),
        cut_policy=CutPolicy(args.cut_policy),
        instantiation_depth=args.depth,
        eps_nesting=args.eps_nesting,
        world_budget=args.worlds,
        formula_budget=args.formulas,
        step_budget=args.steps,
    )


def _color_enabled() -> bool:
    setting = os.environ.get(COLOR_ENV)
    if setting in ("0", "1"):
        return setting == "1"
    return sys.stdout.isatty()


def _dispatch(bench: Workbench, args: argparse.Namespace) -> Outcome:
    command = args.command
    if command == "check":
        return bench.check(args.derivation)
    if command in ("prove", "refute", "decide"):
        return bench.search_sequent(args.sequent, command)
    if command == "eval":
        return bench.evaluate(args.model, args.formula)
    if command == "validate-model":
        return bench.validate(args.model)
    if command == "translate":
        return bench.translate(args.derivation, args.to)
    if command == "extend-model":
        return bench.extend(args.model, args.term)
    if command == "conserve":
        progress = args.format == "human" and not args.no_progress
        return bench.conserve(args.corpus, progress=progress)
    if command == "axiom":
        return bench.axiom(args.formula)
    raise ValueError(f"Unknown command: {command}")


def _report(command: str, outcome: Outcome, fmt: str) -> None:
    if fmt == "json":
        print(dumps({"command": command, "status": outcome.status,
                     "exit_code": EXIT_CODES[outcome.status], **outcome.data}))
        return
    mark = f"{_MARKS[outcome.status]} {outcome.status}"
    if _color_enabled():
        mark = f"\033[{_COLORS[outcome.status]}m{mark}\033[0m"
    for line in outcome.lines:
        print(line)
    print(mark)


def run(argv: Optional[List[str]] = None) -> int:
    """Run one command line and return its exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_CODES["usage"]

    try:
        bench = Workbench(_search_config(args), args.out)
        outcome = _dispatch(bench, args)
    except ValueError as e:
        logger.error("Invalid option: %s", e)
        return EXIT_CODES["usage"]
    except (ParseError, OSError) as e:
        logger.error("%s", e)
        return EXIT_CODES["usage"]
    except EpskError as e:
        logger.error("%s failed: %s", args.command, e)
        return EXIT_CODES["failed"]
    except KeyboardInterrupt:
        logger.info("Cancelled")
        return EXIT_CODES["failed"]

    _report(args.command, outcome, args.format)
    return EXIT_CODES[outcome.status]


def main() -> int:
    """Main CLI function."""
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
