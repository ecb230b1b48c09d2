"""Command-line entry point: ``reviewmine <subcommand> ...``."""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import asdict, dataclass, replace
from pathlib import Path

from . import __version__
from .agreement import (
    SIX_WAY,
    agreement_report,
    disagreement_report,
    dump_annotations,
    load_annotations,
    summaries_to_annotations,
)
from .corpus import Review, corpus_checksum, is_interrogative, load_reviews, load_tagged, prepare_corpus
from .errors import ReviewMineError
from .extract import ExtractConfig, SentenceSummary, summarize_corpus, summary_record
from .insight import build_graph, export_graph, stats
from .lexicons import FILES, SEED_DIR, LexiconSet, lexicon_checksums, load_lexicons

log = logging.getLogger("reviewmine")

GRAPH_FORMATS = ("dot", "csv")


@dataclass(frozen=True)
class RunConfig:
    window: int = 3
    min_freq: int = 3
    lexicons: str = str(SEED_DIR)
    input: str | None = None
    tagged: bool = False
    out: str | None = None
    filter_interrogative: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.window < 1:
            raise ReviewMineError("--window must be >= 1")
        if self.min_freq < 1:
            raise ReviewMineError("--min-freq must be >= 1")

    def resolved(self) -> "RunConfig":
        def res(p):
            return None if p is None else str(Path(p).resolve())
        return replace(self, lexicons=res(self.lexicons), input=res(self.input), out=res(self.out))

    def argv(self, command: str) -> list[str]:
        out = [command, self.input or "", "--lexicons", self.lexicons,
               "--window", str(self.window), "--min-freq", str(self.min_freq),
               "--seed", str(self.seed)]
        if self.tagged:
            out.append("--tagged")
        if self.filter_interrogative:
            out.append("--filter-interrogative")
        if self.out:
            out += ["--out", self.out]
        return out


def load_corpus(config: RunConfig, lexicons: LexiconSet) -> list[Review]:
    if config.input is None:
        raise ReviewMineError("no input corpus given")
    path = Path(config.input)
    if not path.is_file():
        raise ReviewMineError(f"input not found: {path}")
    if config.tagged:
        return load_tagged(path)
    return prepare_corpus(load_reviews(path), lexicons)


def _drop_questions(reviews: list[Review]) -> list[Review]:
    return [replace(r, sentences=tuple(s for s in r.sentences if not is_interrogative(s)))
            for r in reviews]


def run(config: RunConfig) -> tuple[list[Review], list[SentenceSummary], LexiconSet]:
    lexicons = load_lexicons(config.lexicons)
    corpus = load_corpus(config, lexicons)
    working = _drop_questions(corpus) if config.filter_interrogative else corpus
    summaries = summarize_corpus(working, lexicons, window=config.window,
                                 min_freq=config.min_freq)
    return corpus, summaries, lexicons


def _sha(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _write(out: Path, name: str, data: bytes, written: dict[str, str]) -> None:
    (out / name).write_bytes(data)
    written[name] = _sha(data)


def _json(obj) -> bytes:
    return (json.dumps(obj, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def cmd_summarize(config: RunConfig) -> dict[str, str]:
    """Write summaries, stats, standoff annotations and a manifest; return file checksums."""
    config = config.resolved()
    if config.out is None:
        raise ReviewMineError("summarize needs --out DIR")
    corpus, summaries, _ = run(config)
    checksum = corpus_checksum(corpus)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    written: dict[str, str] = {}
    records = "".join(json.dumps(summary_record(s), ensure_ascii=False) + "\n" for s in summaries)
    _write(out, "summaries.jsonl", records.encode("utf-8"), written)
    st = stats(summaries)
    _write(out, "stats.json", _json(st.record()), written)
    _write(out, "stats.txt", st.table().encode("utf-8"), written)
    ann = dump_annotations(summaries_to_annotations(summaries, checksum))
    _write(out, "annotations.ann", ann.encode("utf-8"), written)
    manifest = {
        "version": __version__,
        "command": config.argv("summarize"),
        "config": asdict(config),
        "corpus_sha256": checksum,
        "lexicon_sha256": lexicon_checksums(config.lexicons),
        "outputs": written,
    }
    (out / "manifest.json").write_bytes(_json(manifest))
    return written


def cmd_stats(config: RunConfig, as_json: bool = False) -> str:
    _, summaries, _ = run(config.resolved())
    st = stats(summaries)
    return _json(st.record()).decode("utf-8") if as_json else st.table()


def cmd_graph(config: RunConfig, fmt: str | None = None) -> dict[str, bytes]:
    """Render the co-occurrence graph; writes into --out when given."""
    config = config.resolved()
    formats = GRAPH_FORMATS if fmt is None else (fmt,)
    for f in formats:
        if f not in GRAPH_FORMATS:
            raise ReviewMineError(f"unknown graph format {f!r} (expected dot or csv)")
    _, summaries, _ = run(config)
    graph = build_graph(summaries)
    rendered = {f: export_graph(graph, f) for f in formats}
    if config.out is not None:
        out = Path(config.out)
        out.mkdir(parents=True, exist_ok=True)
        for f, data in rendered.items():
            (out / f"graph.{f}").write_bytes(data)
    return rendered


def cmd_kappa(config: RunConfig, paths: list[str], mode: str | None = None,
              disagreements: bool = False) -> str:
    if len(paths) < 2:
        raise ReviewMineError("kappa needs at least two annotation files")
    config = config.resolved()
    lexicons = load_lexicons(config.lexicons)
    corpus = load_corpus(config, lexicons)
    sets = [load_annotations(p, corpus) for p in paths]
    report = agreement_report(sets, corpus)
    lines = report.table().splitlines()
    if mode == SIX_WAY:
        lines = lines[:2] + lines[-1:]
    elif mode == "per-concept":
        lines = lines[:1] + lines[2:-1]
    text = "\n".join(lines) + "\n"
    if disagreements:
        text += "\n" + disagreement_report(sets, corpus).table()
    if config.out is not None:
        out = Path(config.out)
        out.mkdir(parents=True, exist_ok=True)
        record = report.record()
        record["disagreements"] = disagreement_report(sets, corpus).record()
        (out / "agreement.json").write_bytes(_json(record))
    return text


def cmd_validate_lexicons(config: RunConfig) -> str:
    lexicons = load_lexicons(config.lexicons)
    sizes = {
        "emotion": len(lexicons.emotion_words),
        "antonyms": len(lexicons.antonym_pairs),
        "affordance_suffixes": len(lexicons.affordance_suffixes),
        "action_nouns": len(lexicons.action_nouns),
    }
    lines = [f"lexicons OK: {Path(config.lexicons).resolve()}"]
    for name in FILES:
        size = sizes.get(name, None)
        if size is None:
            size = len(getattr(lexicons, name))
        lines.append(f"  {name:<22}{size:>6}")
    return "\n".join(lines) + "\n"


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lexicons", default=str(SEED_DIR), metavar="DIR",
                        help="lexicon directory (default: bundled seed lexicons)")
    common.add_argument("--window", type=_positive, default=3, metavar="N",
                        help="token window, articles not counted (default 3)")
    common.add_argument("--min-freq", type=_positive, default=3, metavar="N",
                        help="corpus frequency for a noun to count as a feature (default 3)")
    common.add_argument("--tagged", action="store_true",
                        help="input is a pre-tagged corpus instead of JSONL reviews")
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--filter-interrogative", action="store_true",
                        help="drop sentences ending in '?' before extraction")
    common.add_argument("--seed", type=int, default=0, help="recorded in the manifest")

    parser = argparse.ArgumentParser(prog="reviewmine",
                                     description="Mine design evidence from product reviews.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", parents=[common], help="extract and write structured data")
    p.add_argument("input")
    p = sub.add_parser("stats", parents=[common], help="print concept counts")
    p.add_argument("input")
    p.add_argument("--json", action="store_true")
    p = sub.add_parser("graph", parents=[common], help="export the co-occurrence graph")
    p.add_argument("input")
    p.add_argument("--format", help="dot or csv (default: both, needs --out)")
    p = sub.add_parser("kappa", parents=[common], help="agreement between annotation files")
    p.add_argument("input", help="corpus the annotations refer to")
    p.add_argument("annotations", nargs="+", help="two or more standoff files")
    p.add_argument("--mode", choices=(SIX_WAY, "per-concept"))
    p.add_argument("--disagreements", action="store_true", help="list disagreeing tokens")
    sub.add_parser("validate-lexicons", parents=[common], help="load and check a lexicon dir")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if args.command == "kappa" and len(args.annotations) < 2:
        parser.error("kappa needs at least two annotation files")
    if args.command == "graph" and args.format is None and args.out is None:
        parser.error("graph without --out needs --format")
    try:
        config = RunConfig(args.window, args.min_freq, args.lexicons,
                           getattr(args, "input", None), args.tagged, args.out,
                           args.filter_interrogative, args.seed)
        if args.command == "summarize":
            written = cmd_summarize(config)
            print(f"wrote {len(written) + 1} files to {Path(args.out or '.').resolve()}")
        elif args.command == "stats":
            sys.stdout.write(cmd_stats(config, args.json))
        elif args.command == "graph":
            rendered = cmd_graph(config, args.format)
            if args.out is None:
                sys.stdout.buffer.write(rendered[args.format])
        elif args.command == "kappa":
            sys.stdout.write(cmd_kappa(config, args.annotations, args.mode, args.disagreements))
        elif args.command == "validate-lexicons":
            sys.stdout.write(cmd_validate_lexicons(config))
    except (ReviewMineError, OSError) as exc:
        print(f"reviewmine: error: {exc}", file=sys.stderr)
        return 1
    return 0
