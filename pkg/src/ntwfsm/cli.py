"""Command-line front end.

Exit codes: 0 success, 1 no result or oracle mismatch, 2 usage errors,
3 machine-content errors (syntax, validation, epsilon cycles).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench as bench_mod
from .align import AlignerSpec, align_pair
from .errors import MachineError, MarkerInAlphabet, NoAcceptingPath
from .machine import (
    format_label_element,
    format_weight,
    parse_machine,
    validate,
)
from .oracle_check import CaseConfig, run_check
from .search import best_transduction, fsm_viterbi
from .semirings import TROPICAL_MAX, TROPICAL_MIN


def _load_machine(path):
    with open(path, encoding="utf-8") as handle:
        return parse_machine(handle.read())


def _parse_tapes(text):
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"bad --input-tapes value {text!r}") from None


def _directed(machine, direction):
    if direction is None or machine.semiring.direction == direction:
        return machine
    if machine.semiring.name == "tropical-min":
        return machine.with_semiring(TROPICAL_MAX)
    if machine.semiring.name == "tropical-max":
        return machine.with_semiring(TROPICAL_MIN)
    raise ValueError(
        f"--direction {direction} is not available for semiring "
        f"{machine.semiring.name}"
    )


def _default_tapes(args, count):
    if args.input_tapes is not None:
        return _parse_tapes(args.input_tapes)
    return tuple(range(1, count + 1))


def cmd_validate(args):
    machine = _load_machine(args.machine)
    tapes = _default_tapes(args, machine.arity)
    validate(machine, tapes, allow_eps=True if args.allow_eps else None)
    print("ok")
    return 0


def cmd_bestpath(args):
    machine = _directed(_load_machine(args.machine), args.direction)
    tapes = _default_tapes(args, len(args.strings))
    validate(machine, tapes)
    best = fsm_viterbi(machine, tuple(args.strings), tapes)
    for t in best.transitions:
        label = " ".join(format_label_element(el) for el in t.label)
        print(f"t {t.src} {t.dst} {label} {format_weight(t.weight)}")
    for i, label in enumerate(best.labels, start=1):
        print(f"tape{i}\t{label}")
    print(format_weight(best.weight))
    return 0


def cmd_transduce(args):
    machine = _directed(_load_machine(args.machine), args.direction)
    tapes = _default_tapes(args, len(args.strings))
    validate(machine, tapes)
    result = best_transduction(machine, tuple(args.strings), tapes)
    output_tapes = [i for i in range(1, machine.arity + 1) if i not in set(tapes)]
    for tape, value in zip(output_tapes, result.outputs):
        print(f"tape{tape}\t{value}")
    print(format_weight(result.weight))
    return 0


def _alignment_line(result):
    return f"{result.a}\t{result.b}\t{result.ops}\t{result.weight}"


def cmd_align(args):
    spec = AlignerSpec(
        marker=args.marker, forbid_insert_then_delete=args.forbid_id
    )
    if args.batch is not None:
        with open(args.batch, encoding="utf-8") as handle:
            for line_no, raw in enumerate(handle, start=1):
                line = raw.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ValueError(
                        f"{args.batch}:{line_no}: expected two tab-separated words"
                    )
                print(_alignment_line(align_pair(parts[0], parts[1], spec)))
        return 0
    if args.a is None or args.b is None:
        raise ValueError("align needs two words or --batch FILE")
    print(_alignment_line(align_pair(args.a, args.b, spec)))
    return 0


def cmd_bench(args):
    if ":" in args.pair:
        word_a, word_b = args.pair.split(":", 1)
    else:
        raise ValueError(f"--pair must look like a:b, got {args.pair!r}")
    if not word_a or not word_b:
        raise ValueError("--pair words must be non-empty")
    report = bench_mod.run_bench(
        word_a, word_b, rmax=args.rmax, trials=args.trials, alt_heap=args.alt_heap
    )
    if args.format == "csv":
        sys.stdout.write(bench_mod.format_csv(report))
    else:
        sys.stdout.write(bench_mod.format_text(report))
    if args.out is not None:
        out = Path(args.out)
        out.write_text(bench_mod.format_csv(report), encoding="utf-8")
        if not args.no_plot:
            figure = out.with_suffix(".png")
            bench_mod.save_plot(report, figure)
            print(f"wrote {out} and {figure}", file=sys.stderr)
        else:
            print(f"wrote {out}", file=sys.stderr)
    return 0


def cmd_oracle_check(args):
    cfg = CaseConfig(
        cases=args.cases,
        seed=args.seed,
        max_arity=args.arity,
        max_states=args.max_states,
        max_transitions=args.max_trans,
    )
    report = run_check(cfg)
    if report.ok:
        print(
            f"oracle-check: {report.cases_run}/{cfg.cases} cases agree "
            f"(seed {cfg.seed}, {report.elapsed:.2f}s)"
        )
        return 0
    failure = report.failures[0]
    print(
        f"oracle-check: mismatch at case {failure.index} (seed {cfg.seed})",
        file=sys.stderr,
    )
    print(f"inputs: {failure.strings!r}", file=sys.stderr)
    print(f"search weight: {failure.search_weight}", file=sys.stderr)
    print(f"oracle weight: {failure.oracle_weight}", file=sys.stderr)
    print("machine:", file=sys.stderr)
    sys.stderr.write(failure.machine_text)
    return 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ntwfsm",
        description="n-tape weighted machines: best-path search, transduction, "
        "word alignment, oracle cross-checks, and a scaling benchmark.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="random seed")
    common.add_argument(
        "--format", choices=("text", "csv"), default="text", help="report format"
    )
    machine_opts = argparse.ArgumentParser(add_help=False)
    machine_opts.add_argument("--machine", required=True, help="machine file")
    machine_opts.add_argument(
        "--input-tapes", default=None, help="comma-separated 1-based tape indices"
    )
    machine_opts.add_argument(
        "--direction",
        choices=("min", "max"),
        default=None,
        help="override the tropical search direction",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "validate", parents=[common, machine_opts], help="check a machine file"
    )
    p.add_argument("--allow-eps", action="store_true", help="permit epsilon moves")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser(
        "bestpath",
        parents=[common, machine_opts],
        help="best path accepting an input tuple",
    )
    p.add_argument("strings", nargs="+", help="one string per input tape")
    p.set_defaults(func=cmd_bestpath)

    p = sub.add_parser(
        "transduce",
        parents=[common, machine_opts],
        help="best output tuple for an input tuple",
    )
    p.add_argument("strings", nargs="+", help="one string per input tape")
    p.set_defaults(func=cmd_transduce)

    p = sub.add_parser("align", parents=[common], help="align a word pair")
    p.add_argument("a", nargs="?", default=None)
    p.add_argument("b", nargs="?", default=None)
    p.add_argument("--marker", default="-", help="filler symbol for edit slots")
    p.add_argument(
        "--forbid-id",
        action="store_true",
        help="forbid an insertion immediately followed by a deletion",
    )
    p.add_argument("--batch", default=None, help="tab-separated pairs, one per line")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("bench", parents=[common], help="alignment scaling benchmark")
    p.add_argument("--rmax", type=int, default=8, help="largest repetition factor")
    p.add_argument("--pair", default="gemacht:machen", help="word pair as a:b")
    p.add_argument("--trials", type=int, default=5, help="trials per point (median)")
    p.add_argument(
        "--alt-heap",
        action="store_true",
        help="also time the pairing-heap build (column D)",
    )
    p.add_argument("--out", default=None, help="write CSV here (figure alongside)")
    p.add_argument("--no-plot", action="store_true", help="skip the figure")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser(
        "oracle-check",
        parents=[common],
        help="random search-vs-oracle equivalence cases",
    )
    p.add_argument("--cases", type=int, default=300)
    p.add_argument("--max-states", type=int, default=6)
    p.add_argument("--max-trans", type=int, default=20)
    p.add_argument("--arity", type=int, default=3, help="largest tape count")
    p.set_defaults(func=cmd_oracle_check)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoAcceptingPath as exc:
        print(f"ntwfsm: {exc}", file=sys.stderr)
        return 1
    except MarkerInAlphabet as exc:
        print(f"ntwfsm: {exc}", file=sys.stderr)
        return 2
    except MachineError as exc:
        print(f"ntwfsm: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"ntwfsm: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"ntwfsm: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
