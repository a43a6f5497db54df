"""Command line interface.

Usage:
    halting-nets net --dim 3 --level 2 [--boundary | --puncture auto|D2] [-o FILE]
    halting-nets homology NETFILE [--level M] [--timing]
    halting-nets complex NETFILE [--level M]
    halting-nets reduce (--machine FILE | --sample NAME | --fool) --budget M [--quantum Q]
    halting-nets machine NAME [--steps S] [-o FILE]

JSON goes to standard output, a one-line human summary to standard error.
Exit codes: 0 success, 1 a --fool run that was not fooled, 2 usage,
3 I/O failure, 4 invalid data.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .cubical import build_cubical
from .homology import q_hat
from .machines import ProgramError, format_program, halt_after, parse_program, sample_programs
from .netbuilder import OffGridError, boundary_net, covering_radius_sq, cumulative_net, punctured_net
from .netio import NetFormatError, format_csv, format_net, header_of, parse_net
from .reduction import fooling_program, run_F

EXIT_OK, EXIT_NOT_FOOLED, EXIT_USAGE, EXIT_IO, EXIT_DATA = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _dimension(text: str) -> int:
    d = int(text)
    if not 2 <= d <= 4:
        raise argparse.ArgumentTypeError("dimension must be 2, 3 or 4")
    return d


def _natural(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _puncture(text: str):
    if text == "auto":
        return text
    try:
        v = Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'auto' or a positive fraction such as 1/16") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("squared radius must be positive")
    return v


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from None


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _note(message: str) -> None:
    print(message, file=sys.stderr)


def _load_net(path: str):
    try:
        return parse_net(_read(path))
    except OffGridError as exc:
        raise CliError(str(exc), EXIT_DATA) from None
    except NetFormatError as exc:
        raise CliError(f"{path}: {exc}", EXIT_DATA) from None


def cmd_net(args) -> int:
    if args.boundary:
        net = boundary_net(args.level, args.dim)
    elif args.puncture is not None:
        switch = args.switch_round - 1
        if switch > args.level:
            raise CliError("--switch-round is past the last layer", EXIT_USAGE)
        d_sq = None if args.puncture == "auto" else args.puncture
        net = punctured_net(args.level, args.dim, d_sq, switch)
    else:
        net = cumulative_net(args.level, args.dim)
    text = format_net(net)
    summary = dict(header_of(net))
    summary["points"] = len(net)
    summary["covering_radius_sq"] = str(covering_radius_sq(net, net.level + 2))
    if args.csv:
        _write(args.csv, format_csv(net))
    if args.out:
        _write(args.out, text)
        _emit(summary)
    else:
        sys.stdout.write(text)
    _note(f"{summary['space_tag']} net: {len(net)} points, level {net.level}, epsilon_bound {net.epsilon_bound}")
    return EXIT_OK


def cmd_homology(args) -> int:
    net = _load_net(args.netfile)
    timings = {}
    try:
        verdict = q_hat(net, args.level, timings)
    except OffGridError as exc:
        raise CliError(str(exc), EXIT_DATA) from None
    _emit(verdict.to_dict(timings["elapsed_ms"] if args.timing else None))
    _note(f"{verdict.verdict}: betti {list(verdict.evidence.betti)} at level {verdict.level}")
    return EXIT_OK


def cmd_complex(args) -> int:
    net = _load_net(args.netfile)
    level = net.level if args.level is None else args.level
    try:
        cx = build_cubical(net, level, net.dimension)
    except OffGridError as exc:
        raise CliError(str(exc), EXIT_DATA) from None
    _emit(cx.summary())
    _note(f"cell counts {cx.cell_counts}, euler {cx.euler()}")
    return EXIT_OK


def _program_from_args(args):
    if args.fool:
        return fooling_program(args.quantum, args.budget)
    if args.machine:
        try:
            return parse_program(_read(args.machine), name=Path(args.machine).stem)
        except ProgramError as exc:
            raise CliError(f"{args.machine}: {exc}", EXIT_DATA) from None
    if args.sample.startswith("halt_after_"):
        try:
            return halt_after(int(args.sample.rsplit("_", 1)[1]))
        except ValueError:
            raise CliError(f"bad sample name {args.sample}", EXIT_USAGE) from None
    library = sample_programs()
    if args.sample not in library:
        raise CliError(f"unknown sample {args.sample}; choose from {', '.join(library)}", EXIT_USAGE)
    return library[args.sample]


def cmd_reduce(args) -> int:
    program = _program_from_args(args)
    report = run_F(program, args.input, args.quantum, args.budget, args.dim, args.truth_steps)
    text = report.to_json() + "\n"
    if args.out:
        _write(args.out, text)
    sys.stdout.write(text)
    if args.export_net:
        _write(args.export_net, format_net(report.stream.accumulated))
    _note(
        f"{report.program}(n={report.input}): answer {report.answer} after {report.steps_executed} steps, "
        f"ground truth {report.ground_truth}, misclassified {report.misclassified}"
    )
    if args.fool and not report.misclassified:
        _note("the fooling instance was not misclassified")
        return EXIT_NOT_FOOLED
    return EXIT_OK


def cmd_machine(args) -> int:
    if args.name == "halt_after":
        program = halt_after(args.steps)
    else:
        library = sample_programs()
        if args.name not in library:
            raise CliError(f"unknown sample {args.name}; choose from halt_after, {', '.join(library)}", EXIT_USAGE)
        program = library[args.name]
    text = format_program(program)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    _note(f"{program.name}: {len(program.states)} states")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="halting-nets", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("net", help="build a net and write it in the point format")
    p.add_argument("--dim", type=_dimension, default=3)
    p.add_argument("--level", type=_natural, required=True)
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--boundary", action="store_true", help="boundary of the cube only")
    kind.add_argument("--puncture", type=_puncture, metavar="auto|D2", help="remove an open ball about the centre")
    p.add_argument(
        "--switch-round", type=_positive, default=1,
        help="round in which the machine halted; earlier layers stay full (default 1)",
    )
    p.add_argument("-o", "--out", help="net file (default: standard output)")
    p.add_argument("--csv", help="also write a decimal point cloud for plotting")
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("homology", help="Betti numbers and verdict for a net file")
    p.add_argument("netfile")
    p.add_argument("--level", type=_natural, help="grid level of the complex (default: the net's)")
    p.add_argument("--timing", action="store_true", help="include elapsed_ms (output is then not reproducible)")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("complex", help="cell counts and Euler characteristic for a net file")
    p.add_argument("netfile")
    p.add_argument("--level", type=_natural)
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("reduce", help="run the dovetailed decision procedure")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--machine", help="machine description file")
    src.add_argument("--sample", help="sample machine name, e.g. collatz or halt_after_7")
    src.add_argument("--fool", action="store_true", help="use the machine halting just past the budget")
    p.add_argument("--input", type=_natural, default=1)
    p.add_argument("--budget", type=_positive, default=4, help="number of dovetailed rounds M")
    p.add_argument("--quantum", type=_positive, default=1000, help="machine steps per round")
    p.add_argument("--dim", type=_dimension, default=3)
    p.add_argument("--truth-steps", type=_natural, help="simulation budget for the ground truth (0 skips it)")
    p.add_argument("-o", "--out", help="also write the report here")
    p.add_argument("--export-net", help="write the accumulated net here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("machine", help="print a sample machine in the text format")
    p.add_argument("name", help="halt_after, loop_forever, collatz, ...")
    p.add_argument("--steps", type=_positive, default=3, help="halting step for halt_after")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_machine)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        _note(f"error: {exc}")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
