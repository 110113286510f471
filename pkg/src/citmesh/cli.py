"""Command-line entry point.

Examples::

    citmesh pipeline --medline data_pubmed.txt --wos wos_part1.txt wos_part2.txt --out run1
    citmesh mainpath run1/lcs.net --variant key_route -k 2 --out run1/mp
    citmesh parse-medline --medline data.txt --out tmp      # also writes string.wos

Exit codes: 0 ok, 1 usage, 2 unparseable input, 3 data or output error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from contextlib import contextmanager
from pathlib import Path

from . import __version__
from .formats import DENSE_CAP, PajekFormatError
from .matrices import EmptyMatrixError
from .medline import MedlineDecodeError
from .pipeline import (InputFormatError, RunConfig, build_corpus, load_medline, load_wos, run_mainpath, run_pipeline, write_lcs,
                       write_matrices, write_parsed_medline, write_parsed_wos, write_search_strings, write_stats)
from .corpus import write_corpus_csv
from .report import Report

log = logging.getLogger("citmesh")

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_DATA = 0, 1, 2, 3
LOCK_NAME = ".citmesh.lock"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, inputs: bool = True) -> None:
    if inputs:
        p.add_argument("--medline", nargs="+", type=Path, default=[], metavar="FILE", help="MEDLINE tagged export(s)")
        p.add_argument("--wos", nargs="+", type=Path, default=[], metavar="FILE", help="WoS plain-text export(s)")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory (default: current)")
    p.add_argument("--config", type=Path, help="JSON file with option defaults; flags win")
    p.add_argument("--crlf", action="store_true", default=False, help="CRLF line endings in written files")
    p.add_argument("--log-file", type=Path, help="also log to this file")
    p.add_argument("-v", "--verbose", action="store_true")


def _corpus_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--keep-qualifiers", action="store_true", default=False,
                   help="treat descriptor/qualifier pairs as distinct MeSH terms")
    p.add_argument("--field-tag", default="PMID", help="WoS advanced-search field tag for string.wos")
    p.add_argument("--chunk", type=int, default=500, help="PMIDs per string.wos query")


def _matrix_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dense-cap", type=int, default=DENSE_CAP, help="max columns for mtrx.txt/.sps")
    p.add_argument("--similarity", choices=["cosine", "jaccard"], help="also write a normalised jcr_mh_a column network")


def _lcs_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--match", choices=["strict", "relaxed"], default="strict",
                   help="citation-key matching (relaxed: author, year, journal only)")
    p.add_argument("--exclude", type=Path, help="file with PMIDs (one per line) to leave out of lcs.net")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="citmesh", description="MEDLINE/WoS matrices, bounded citation networks and main paths")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse-medline", help="parse MEDLINE export; write medline.csv and string.wos")
    _common(p)
    _corpus_opts(p)

    p = sub.add_parser("parse-wos", help="parse WoS export; write wos.csv, cited_refs.csv and string.pubmed")
    _common(p)

    p = sub.add_parser("link", help="link records by PMID; write documents.csv and search strings")
    _common(p)
    _corpus_opts(p)

    p = sub.add_parser("matrices", help="write mtrx.*, cr_mh.net, jcr_mh.net, jcr_mh_a.net")
    _common(p)
    _corpus_opts(p)
    _matrix_opts(p)

    p = sub.add_parser("lcs", help="write the bounded citation network lcs.net")
    _common(p)
    _corpus_opts(p)
    _lcs_opts(p)

    p = sub.add_parser("stats", help="write counts, top-N, yearly series, Gini and MeSH citation tables")
    _common(p)
    _corpus_opts(p)
    p.add_argument("--top", type=int, default=10)

    p = sub.add_parser("mainpath", help="acyclic prep, SPC weights and main path of a 1-mode Pajek network")
    p.add_argument("net", type=Path, help="1-mode Pajek .net file, e.g. lcs.net")
    _common(p, inputs=False)
    p.add_argument("--variant", choices=["local", "global_standard", "key_route"], default="key_route")
    p.add_argument("-k", type=int, default=1, help="number of key routes")

    p = sub.add_parser("pipeline", help="parse, link, matrices, lcs and stats in one run")
    _common(p)
    _corpus_opts(p)
    _matrix_opts(p)
    _lcs_opts(p)
    p.add_argument("--top", type=int, default=10)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    try:
        values = json.loads(args.config.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(values, dict):
        raise UsageError("config file must hold a JSON object")
    sub = parser._subparsers._group_actions[0].choices[args.command]  # type: ignore[union-attr]
    known = {a.dest for a in sub._actions}
    unknown = set(values) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key in ("medline", "wos"):
        if key in values and isinstance(values[key], str):
            values[key] = [values[key]]
    for key in ("medline", "wos"):
        if key in values:
            values[key] = [Path(v) for v in values[key]]
    for key in ("out", "exclude", "net"):
        if key in values and values[key] is not None:
            values[key] = Path(values[key])
    sub.set_defaults(**values)
    return parser.parse_args(argv)


def _config(args: argparse.Namespace) -> RunConfig:
    exclude: list[str] = []
    if getattr(args, "exclude", None):
        exclude = [ln.strip() for ln in args.exclude.read_text(encoding="utf-8").splitlines() if ln.strip()]
    try:
        return RunConfig(
            medline=list(getattr(args, "medline", []) or []),
            wos=list(getattr(args, "wos", []) or []),
            out=args.out,
            keep_qualifiers=getattr(args, "keep_qualifiers", False),
            match=getattr(args, "match", "strict"),
            k=getattr(args, "k", 1),
            variant=getattr(args, "variant", "key_route"),
            field_tag=getattr(args, "field_tag", "PMID"),
            chunk=getattr(args, "chunk", 500),
            dense_cap=getattr(args, "dense_cap", DENSE_CAP),
            crlf=args.crlf,
            top=getattr(args, "top", 10),
            exclude=exclude,
            similarity=getattr(args, "similarity", None),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


@contextmanager
def _locked(out: Path):
    out.mkdir(parents=True, exist_ok=True)
    lock = out / LOCK_NAME
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise OSError(f"{lock} exists: another run is using {out} (delete the lock if it is stale)") from None
    os.close(fd)
    try:
        yield
    finally:
        lock.unlink(missing_ok=True)


def _check_inputs(config: RunConfig, need: str) -> None:
    for p in [*config.medline, *config.wos]:
        if not Path(p).is_file():
            raise UsageError(f"input file not found: {p}")
    if need == "medline" and not config.medline:
        raise UsageError("--medline is required")
    if need == "wos" and not config.wos:
        raise UsageError("--wos is required")
    if need == "any" and not (config.medline or config.wos):
        raise UsageError("give --medline and/or --wos")


def _dispatch(args: argparse.Namespace, config: RunConfig, report: Report) -> list[Path]:
    cmd = args.command
    if cmd == "mainpath":
        if not args.net.is_file():
            raise UsageError(f"network file not found: {args.net}")
        return run_mainpath(config, args.net, report)
    if cmd == "parse-medline":
        _check_inputs(config, "medline")
        records = load_medline(config, report)
        return [write_parsed_medline(config, records), *write_search_strings(config, records, [], report)]
    if cmd == "parse-wos":
        _check_inputs(config, "wos")
        records = load_wos(config, report)
        return [*write_parsed_wos(config, records), *write_search_strings(config, [], records, report)]
    if cmd == "pipeline":
        _check_inputs(config, "any")
        return run_pipeline(config, report)

    _check_inputs(config, "any")
    corpus, medline, wos = build_corpus(config, report)
    if cmd == "link":
        written = write_search_strings(config, medline, wos, report)
        write_corpus_csv(corpus, config.path("documents.csv"), config.newline)
        return [*written, config.path("documents.csv")]
    if cmd == "matrices":
        return write_matrices(config, corpus, report)
    if cmd == "lcs":
        return write_lcs(config, corpus, report)
    if cmd == "stats":
        return write_stats(config, corpus, report)
    raise UsageError(f"unknown command {cmd}")


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        config = _config(args)
    except UsageError as exc:
        print(f"citmesh: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if args.log_file:
        handlers.append(logging.FileHandler(args.log_file, encoding="utf-8"))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", handlers=handlers, force=True)

    report = Report()
    report.set("command", args.command)
    try:
        with _locked(config.out):
            written = _dispatch(args, config, report)
            report.write_json(config.path("report.json"))
    except UsageError as exc:
        print(f"citmesh: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MedlineDecodeError, PajekFormatError, InputFormatError, UnicodeDecodeError) as exc:
        print(f"citmesh: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (EmptyMatrixError, ValueError, OSError) as exc:
        print(f"citmesh: {exc}", file=sys.stderr)
        return EXIT_DATA
    for path in written:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
