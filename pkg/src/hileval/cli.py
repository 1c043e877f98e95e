"""Command-line pipeline: ingest, gen-tasks, hrouge, rouge-doc, agreement,
report, serve, make-sanity.

Scores are printed x100 with two decimals to match the usual table style;
``--raw`` switches the CSV output to plain fractions.  Usage errors exit 2,
data errors exit 1 with a machine-readable JSON error record on stderr;
outputs are written atomically so failures leave no partial files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import protocol
from .metrics import MODE_HIGHLIGHTED, MODE_UNIFORM
from .report import (
    agreement_rows,
    build_report,
    hrouge_rows,
    render_records,
    render_section_csv,
    write_report,
)
from .store import (
    Campaign,
    CorpusFile,
    canonical_dumps,
    corpus_to_canonical_json,
    load_corpus,
    load_highlight_file,
    write_atomic,
)
from .text import tokenize

__all__ = ["main", "run"]


def _corpus_path(arg: str) -> Path:
    path = Path(arg)
    if path.is_dir():
        return path / "corpus.json"
    return path


def _load_corpus_and_docs(arg: str, summaries_path: str | None):
    corpus = load_corpus(_corpus_path(arg))
    if summaries_path:
        extra: dict[str, dict[str, str]] = {}
        with open(summaries_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                record = json.loads(line)
                extra.setdefault(str(record["doc_id"]), {})[str(record["system"])] = str(
                    record["text"]
                )
        corpus.summaries = extra
    return corpus, corpus.tokenized_documents()


def _write_rows(
    rows: list[dict], out_dir: str, name: str, section: str, fmt: str, raw: bool
) -> Path:
    out = Path(out_dir)
    if fmt == "csv":
        path = out / f"{name}.csv"
        write_atomic(path, render_section_csv(section, rows, raw=raw))
    else:
        path = out / f"{name}.ndjson"
        write_atomic(path, render_records(rows))
    return path


def _provenance(corpus: CorpusFile, extra: dict) -> dict:
    return {
        "budget_k": corpus.budget_k,
        "tokenizer": corpus.tokenizer.to_dict(),
        "count_mode": "clipped",
        **extra,
    }


def cmd_ingest(args) -> int:
    corpus = load_corpus(args.corpus)
    campaign = Campaign.create(corpus, args.out, seed=args.seed)
    print(f"campaign at {campaign.root}: {len(corpus.documents)} documents, "
          f"{sum(len(s) for s in corpus.summaries.values())} summaries, seed {campaign.seed}")
    return 0


def cmd_export(args) -> int:
    corpus = load_corpus(_corpus_path(args.corpus))
    data = corpus_to_canonical_json(corpus)
    if args.out:
        write_atomic(Path(args.out), data)
    else:
        sys.stdout.write(data.decode("utf-8"))
    return 0


def cmd_gen_tasks(args) -> int:
    campaign = Campaign.open(args.corpus)
    task_set = campaign.generate_tasks(
        annotators_per_doc=args.annotators,
        judges_per_item=args.judges,
        include_no_highlight=args.include_nohl,
    )
    print(
        f"{len(task_set.annotation)} annotation, {len(task_set.content)} content, "
        f"{len(task_set.quality)} quality tasks ({task_set.assignment_count} assignments)"
    )
    return 0


def cmd_hrouge(args) -> int:
    corpus, documents = _load_corpus_and_docs(args.corpus, args.summaries)
    entries = load_highlight_file(args.highlights, documents, corpus.budget_k)
    orders = tuple(args.n or (1, 2))
    rows = hrouge_rows(entries, corpus.summaries, documents, orders, modes=(MODE_HIGHLIGHTED,))
    path = _write_rows(rows, args.out, "hrouge", "hrouge", args.format, raw=args.raw)
    write_atomic(
        Path(args.out) / "provenance.json",
        (canonical_dumps(_provenance(corpus, {"ngram_orders": list(orders), "mode": MODE_HIGHLIGHTED})) + "\n").encode(),
    )
    print(f"wrote {path}")
    return 0


def cmd_rouge_doc(args) -> int:
    corpus, documents = _load_corpus_and_docs(args.corpus, args.summaries)
    orders = tuple(args.n or (1, 2))
    rows = hrouge_rows({}, corpus.summaries, documents, orders, modes=(MODE_UNIFORM,))
    path = _write_rows(rows, args.out, "rouge_doc", "hrouge", args.format, raw=args.raw)
    write_atomic(
        Path(args.out) / "provenance.json",
        (canonical_dumps(_provenance(corpus, {"ngram_orders": list(orders), "mode": MODE_UNIFORM})) + "\n").encode(),
    )
    print(f"wrote {path}")
    return 0


def cmd_agreement(args) -> int:
    corpus, documents = _load_corpus_and_docs(args.corpus, None)
    entries = load_highlight_file(args.highlights, documents, corpus.budget_k)
    rows = agreement_rows(entries)
    path = _write_rows(rows, args.out, "agreement", "agreement", args.format, raw=False)
    print(f"wrote {path}")
    return 0


def cmd_report(args) -> int:
    campaign = Campaign.open(args.corpus)
    report = build_report(campaign, orders=tuple(args.n or (1, 2)))
    written = write_report(
        report,
        args.out,
        fmt=args.format,
        raw=args.raw,
        figures=not args.no_figures,
        campaign=campaign,
    )
    for name in written:
        print(f"wrote {Path(args.out) / name}")
    for section, status in sorted(report.section_status.items()):
        if status != "ok":
            print(f"note: {section}: {status}")
    return 0


def cmd_make_sanity(args) -> int:
    corpus, documents = _load_corpus_and_docs(args.corpus, args.summaries)
    lines = []
    for doc_id in sorted(documents):
        doc = documents[doc_id]
        per_doc = corpus.summaries.get(doc_id) or {}
        if not per_doc:
            raise protocol.MissingSummary(f"document {doc_id!r} has no summaries")
        system = "reference" if "reference" in per_doc else sorted(per_doc)[0]
        original = tokenize(per_doc[system], doc.config)
        triple = protocol.make_sanity_summaries(doc, original, f"{args.seed}|{doc_id}")
        lines.append(
            canonical_dumps(
                {
                    "doc_id": doc_id,
                    "good": triple.good.raw,
                    "mediocre": triple.mediocre.raw,
                    "bad": triple.bad.raw,
                    "edit_count": triple.edit_count,
                    "seed": triple.seed,
                    "source_system": system,
                }
            )
        )
    write_atomic(Path(args.out), ("\n".join(lines) + "\n").encode())
    print(f"wrote {args.out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    campaign = Campaign.open(args.corpus)
    host, _, port = args.addr.rpartition(":")
    app = create_app(campaign)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hileval",
        description="highlight-based, reference-less summary evaluation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, corpus=True, out=True, fmt=True):
        if corpus:
            p.add_argument("--corpus", required=True, help="corpus file or campaign directory")
        if out:
            p.add_argument("--out", required=True, help="output directory")
        if fmt:
            p.add_argument("--format", choices=("csv", "records"), default="csv")
            p.add_argument("--raw", action="store_true", help="CSV as raw fractions, not x100")

    p = sub.add_parser("ingest", help="create a campaign directory from a corpus file")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("export", help="print or write the normalized corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("gen-tasks", help="generate the campaign task set")
    p.add_argument("--corpus", required=True, help="campaign directory")
    p.add_argument("--annotators", type=int, default=10)
    p.add_argument("--judges", type=int, default=3)
    p.add_argument("--include-nohl", action="store_true")
    p.set_defaults(func=cmd_gen_tasks)

    p = sub.add_parser("hrouge", help="highlight-weighted n-gram scores")
    add_common(p)
    p.add_argument("--highlights", required=True)
    p.add_argument("--summaries")
    p.add_argument("--n", type=int, action="append")
    p.set_defaults(func=cmd_hrouge)

    p = sub.add_parser("rouge-doc", help="uniform-weight document n-gram scores")
    add_common(p)
    p.add_argument("--summaries")
    p.add_argument("--n", type=int, action="append")
    p.set_defaults(func=cmd_rouge_doc)

    p = sub.add_parser("agreement", help="per-document kappa and coverage")
    add_common(p)
    p.add_argument("--highlights", required=True)
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("report", help="full evaluation report from a campaign")
    add_common(p)
    p.add_argument("--n", type=int, action="append")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("make-sanity", help="planted good/mediocre/bad summaries")
    p.add_argument("--corpus", required=True)
    p.add_argument("--summaries")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output ndjson file")
    p.set_defaults(func=cmd_make_sanity)

    p = sub.add_parser("serve", help="run the judging HTTP service")
    p.add_argument("--corpus", required=True, help="campaign directory")
    p.add_argument("--addr", default="127.0.0.1:8000")
    p.set_defaults(func=cmd_serve)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        record = {"error": type(exc).__name__, "message": str(exc)}
        print(canonical_dumps(record), file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
