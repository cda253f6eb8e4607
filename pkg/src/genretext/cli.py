"""Command-line entry point.

Subcommands: gen (documents and coded corpora), tables, compare, kwic,
ttest, validate. Exit codes: 0 success/pass, 1 comparison fail or
violations found, 2 data error, 64 usage error. All outputs are
reproducible: identical inputs and flags produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from importlib import resources
from pathlib import Path

from . import corpus as corpus_mod
from . import stats as stats_mod
from .errors import GenretextError
from .generate import generate_corpus, generate_document
from .genre import (
    DETERMINISTIC,
    GENRES,
    STOCHASTIC,
    load_profiles,
    profile_file_hash,
)
from .lexicon import load_lexicon
from .realize import load_rules
from .systems import load_network
from .task_model import ELEMENT_KINDS, parse_task_model, validate_task_model

USAGE_EXIT = 64
DATA_EXIT = 2
FAIL_EXIT = 1


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _data_path(name: str) -> str:
    return str(resources.files("genretext").joinpath(f"data/{name}"))


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write_out(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8", newline="\n")


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--task-model", default=_data_path("macwrite-sample.json"),
                   help="task model JSON (default: bundled sample)")
    p.add_argument("--profiles", default=_data_path("paper-profiles.json"),
                   help="genre profile JSON (default: bundled)")
    p.add_argument("--network", default=_data_path("network.json"),
                   help="system network JSON (default: bundled)")
    p.add_argument("--lexicon", default=_data_path("lexicon.json"),
                   help="lexicon JSON (default: bundled)")
    p.add_argument("--rules", default=_data_path("rules.json"),
                   help="template rules JSON (default: bundled)")


def build_parser() -> _Parser:
    parser = _Parser(prog="genretext", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a document or a coded corpus")
    _add_data_flags(gen)
    gen.add_argument("--genre", required=True, choices=GENRES)
    gen.add_argument("--lang", default="fr", choices=("fr", "en"))
    gen.add_argument("--mode", default=DETERMINISTIC, choices=(DETERMINISTIC, STOCHASTIC))
    gen.add_argument("--seed", type=int, default=None, help="64-bit unsigned seed")
    gen.add_argument("--goal", help="goal id: emit one document")
    gen.add_argument("--corpus", action="store_true", help="emit a coded corpus")
    gen.add_argument("--count", type=int, default=None, help="corpus size")
    gen.add_argument("--output", help="output file (default: stdout)")

    tables = sub.add_parser("tables", help="frequency tables from a coded corpus")
    tables.add_argument("--corpus", required=True)
    tables.add_argument("--network", default=_data_path("network.json"))
    tables.add_argument("--system", help="system to tabulate")
    tables.add_argument("--by", choices=(stats_mod.BY_ELEMENT, stats_mod.BY_GENRE),
                        default=stats_mod.BY_ELEMENT)
    tables.add_argument("--cross", action="store_true",
                        help="element-kind by genre cross-tabulation")
    tables.add_argument("--genre", choices=GENRES, help="restrict to one genre")
    tables.add_argument("--element", choices=ELEMENT_KINDS, help="restrict to one kind")
    tables.add_argument("--pretty", action="store_true", help="aligned text, not TSV")
    tables.add_argument("--output", help="output file (default: stdout)")
    tables.add_argument("--plot", help="also render a bar chart to this file")

    compare = sub.add_parser("compare", help="compare an observed table to a reference")
    compare.add_argument("--observed", required=True)
    compare.add_argument("--reference", required=True)
    compare.add_argument("--tolerance", type=float, default=3.0,
                         help="max per-cell deviation in percentage points")
    compare.add_argument("--plot", help="render per-cell deltas to this file")

    kwic = sub.add_parser("kwic", help="keyword-in-context concordance")
    kwic.add_argument("--corpus", required=True)
    kwic.add_argument("--pattern", required=True)
    kwic.add_argument("--window", type=int, default=4)
    kwic.add_argument("--output")

    ttest = sub.add_parser("ttest", help="Welch two-sample t-test")
    ttest.add_argument("--sample-a", required=True, help="comma-separated values")
    ttest.add_argument("--sample-b", required=True, help="comma-separated values")
    ttest.add_argument("--alpha", type=float, default=0.05, choices=(0.05, 0.01))

    validate = sub.add_parser("validate", help="validate a task model or coded corpus")
    validate.add_argument("--task-model")
    validate.add_argument("--corpus")
    validate.add_argument("--network", default=_data_path("network.json"))
    validate.add_argument("--lexicon", default=_data_path("lexicon.json"))

    return parser


def _load_world(args):
    network = load_network(_read(args.network))
    lexicon = load_lexicon(_read(args.lexicon))
    rules = load_rules(_read(args.rules))
    model = parse_task_model(_read(args.task_model))
    profiles_text = _read(args.profiles)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        profiles = load_profiles(profiles_text, network)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return network, lexicon, rules, model, profiles, profiles_text


def _cmd_gen(args) -> int:
    if args.mode == STOCHASTIC and args.seed is None:
        raise _UsageError("stochastic mode requires --seed")
    if args.mode == DETERMINISTIC and args.seed is not None:
        print("warning: deterministic mode ignores --seed", file=sys.stderr)
    if bool(args.goal) == bool(args.corpus):
        raise _UsageError("exactly one of --goal or --corpus is required")
    network, lexicon, rules, model, profiles, profiles_text = _load_world(args)
    profile = profiles[args.genre]
    if args.corpus:
        if args.count is None or args.count < 1:
            raise _UsageError("--corpus requires a positive --count")
        out = generate_corpus(
            model, profile, args.count, args.lang, args.mode, args.seed,
            lexicon, rules, network,
            metadata={
                "source": Path(args.task_model).name,
                "profile_sha256": profile_file_hash(profiles_text),
            },
        )
        _write_out(corpus_mod.dump_corpus(out), args.output)
    else:
        doc = generate_document(
            model, profile, args.goal, args.lang, args.mode, args.seed,
            lexicon, rules, network,
        )
        _write_out(doc + "\n", args.output)
    return 0


def _cmd_tables(args) -> int:
    network = load_network(_read(args.network))
    corpus = corpus_mod.load_corpus(_read(args.corpus))
    if args.cross == bool(args.system):
        raise _UsageError("exactly one of --system or --cross is required")
    filtered = corpus.filter(genre=args.genre, element=args.element)
    if not filtered.units:
        raise GenretextError("no units left after filtering")
    if args.cross:
        table = stats_mod.cross_tab(filtered)
    else:
        table = stats_mod.local_mean_table(filtered, args.system, args.by, network)
    text = stats_mod.render_pretty(table) if args.pretty else stats_mod.render_tsv(table)
    _write_out(text, args.output)
    if args.plot:
        from .plots import render_table_chart

        render_table_chart(table, args.plot)
    return 0


def _cmd_compare(args) -> int:
    observed = stats_mod.parse_tsv(_read(args.observed))
    reference = stats_mod.parse_tsv(_read(args.reference))
    report = stats_mod.compare_tables(observed, reference, args.tolerance)
    if report["worst_cell"] is not None:
        row, feature = report["worst_cell"]
        worst = f"worst cell ({row}, {feature}): delta {report['worst_delta']:.2f}"
    else:
        worst = "no comparable cells"
    verdict = "PASS" if report["pass"] else "FAIL"
    print(f"{verdict} (tolerance {args.tolerance:g} points); {worst}")
    if args.plot:
        from .plots import render_compare_chart

        render_compare_chart(report, args.plot)
    return 0 if report["pass"] else FAIL_EXIT


def _cmd_kwic(args) -> int:
    corpus = corpus_mod.load_corpus(_read(args.corpus))
    lines = stats_mod.kwic([u.text for u in corpus.units], args.pattern, args.window)
    _write_out("\n".join(lines) + ("\n" if lines else ""), args.output)
    return 0


def _parse_samples(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise _UsageError(f"bad sample list {text!r}") from None


def _cmd_ttest(args) -> int:
    a = _parse_samples(args.sample_a)
    b = _parse_samples(args.sample_b)
    result = stats_mod.t_test(a, b, args.alpha)
    flag = "significant" if result["significant"] else "not significant"
    print(
        f"t = {result['t']:.6f}, df = {result['df']:.6f}, "
        f"{flag} at alpha {args.alpha:g}"
    )
    return 0


def _cmd_validate(args) -> int:
    if not args.task_model and not args.corpus:
        raise _UsageError("give --task-model and/or --corpus")
    records = []
    if args.task_model:
        lexicon = load_lexicon(_read(args.lexicon))
        model = parse_task_model(_read(args.task_model))
        for rec in validate_task_model(model, lexicon):
            records.append(f"task-model: {rec['invariant']} [{rec['id']}]")
    if args.corpus:
        network = load_network(_read(args.network))
        corpus = corpus_mod.load_corpus(_read(args.corpus))
        for rec in corpus_mod.validate_corpus(corpus, network):
            records.append(f"corpus unit {rec['unit']}: {rec['message']}")
    for line in records:
        print(line)
    if not records:
        print("no violations")
        return 0
    return FAIL_EXIT


_COMMANDS = {
    "gen": _cmd_gen,
    "tables": _cmd_tables,
    "compare": _cmd_compare,
    "kwic": _cmd_kwic,
    "ttest": _cmd_ttest,
    "validate": _cmd_validate,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"genretext {args.command}: error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (GenretextError, json.JSONDecodeError, OSError) as exc:
        print(f"genretext {args.command}: {exc}", file=sys.stderr)
        return DATA_EXIT


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
