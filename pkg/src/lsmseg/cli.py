"""Command line front end: ``lsmseg segment|baseline|combine|evaluate|generate``.

Every stage reads and writes plain files so runs can be piped together.
Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import warnings
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .baselines import (
    RNG_ALGORITHM,
    RandomTrialConfig,
    doc_seed,
    random_boundaries,
    random_trial_scores,
    trial_rngs,
)
from .cohesion import build_link_matrix
from .evaluation import (
    PRECISION_READING,
    MeanScore,
    add_significance,
    aggregate,
    extract_reference,
    reports_csv,
    score,
)
from .lsm import DegenerateTextWarning, Segmentation, combine, segment, trace
from .text_model import NormalizationConfig, ParseError, ValidationError, load_corpus, load_stoplist

log = logging.getLogger("lsmseg")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_levels(text):
    """``"2"``, ``"1..6"`` or ``"1,3,5"`` to a sorted list of levels."""
    levels = set()
    try:
        for part in str(text).split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..", 1)
                lo, hi = int(lo), int(hi)
                if lo > hi:
                    raise ValueError
                levels.update(range(lo, hi + 1))
            else:
                levels.add(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid link level {text!r}; use N, N..M or N,M") from None
    if not levels or min(levels) < 1:
        raise argparse.ArgumentTypeError("link levels must be >= 1")
    return sorted(levels)


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _pos_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _file_digest(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def make_manifest(args, command, **extra):
    """The settings that determine a run's outputs, plus their hash."""
    manifest = {
        "command": command,
        "tool_version": __version__,
        "corpus": str(getattr(args, "corpus", None)),
        "levels": getattr(args, "level", None),
        "normalization": None,
        "empty_link_sets": getattr(args, "empty_sets", None),
        "window": getattr(args, "window", None),
        "trials": getattr(args, "trials", None),
        "seed": getattr(args, "seed", None),
        "out": str(args.out),
    }
    if hasattr(args, "no_stem"):
        manifest["normalization"] = {
            "stem": not args.no_stem,
            "stoplist": str(args.stoplist) if args.stoplist else "builtin",
            "stoplist_sha256": _file_digest(args.stoplist) if args.stoplist else None,
        }
    manifest.update(extra)
    blob = json.dumps(manifest, sort_keys=True, separators=(",", ":")).encode()
    manifest["manifest_hash"] = hashlib.sha256(blob).hexdigest()
    return manifest


def _write_json(path, obj):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", "utf-8")


def _write_manifest(out, manifest):
    _write_json(out / "manifest.json", manifest)


def _seg_filename(seg, suffix=""):
    lvl = "x" if seg.link_level is None else seg.link_level
    return f"{seg.doc_id}.L{lvl}.{seg.method}{suffix}.json"


def _write_seg(out, seg, manifest_hash, suffix=""):
    d = seg.to_dict()
    d["manifest_hash"] = manifest_hash
    _write_json(out / _seg_filename(seg, suffix), d)


def _normalization(args):
    words = load_stoplist(args.stoplist) if args.stoplist else None
    return NormalizationConfig.from_words(words, stem=not args.no_stem)


def _load_corpus(args, config=None):
    if config is None:
        config = _normalization(args)
    try:
        docs = load_corpus(args.corpus, config, skip_invalid=True, warn=log.warning)
    except (FileNotFoundError, NotADirectoryError, PermissionError, ParseError, ValidationError) as exc:
        raise DataError(str(exc)) from None
    if not docs:
        raise DataError(f"no usable documents in corpus {args.corpus}")
    return docs


def load_segmentations(dirs):
    segs = []
    for d in dirs:
        d = Path(d)
        if not d.is_dir():
            raise DataError(f"segmentation directory not found: {d}")
        for path in sorted(d.glob("*.json")):
            if path.name == "manifest.json":
                continue
            try:
                with open(path, encoding="utf-8") as fh:
                    segs.append(Segmentation.from_dict(json.load(fh)))
            except (ValueError, TypeError) as exc:
                raise DataError(f"{path}: {exc}") from None
    if not segs:
        raise DataError("no segmentation files found in " + ", ".join(map(str, dirs)))
    return segs


def _map(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _segment_job(job):
    doc, levels, empty = job
    matrix = build_link_matrix(doc)
    out = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateTextWarning)
        for lvl in levels:
            out.append(segment(doc, lvl, empty, matrix))
    return out, [str(w.message) for w in caught]


def cmd_segment(args):
    docs = _load_corpus(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = make_manifest(args, "segment")
    results = _map(_segment_job, [(d, args.level, args.empty_sets) for d in docs], args.jobs)
    rows = []
    for doc, (segs, msgs) in zip(docs, results):
        for m in msgs:
            log.warning(m)
        for seg in segs:
            _write_seg(out, seg, manifest["manifest_hash"])
            rows.append(seg)
        if args.export_links:
            (out / f"{doc.id}.links.csv").write_text(
                f"# manifest {manifest['manifest_hash']}\n" + build_link_matrix(doc).to_csv(), "utf-8")
        if args.plot:
            from .plotting import plot_trace

            figdir = out / "figures"
            figdir.mkdir(exist_ok=True)
            ref = extract_reference(doc).positions
            for lvl in args.level:
                plot_trace(trace(doc, lvl, args.empty_sets), figdir / f"{doc.id}.L{lvl}.png",
                           ref, title=f"{doc.id} (link level {lvl})",
                           metadata={"Description": f"manifest {manifest['manifest_hash']}"})
    if args.format == "csv":
        lines = [f"# manifest {manifest['manifest_hash']}", "doc_id,method,link_level,n_sentences,boundaries"]
        lines += [f"{s.doc_id},{s.method},{s.link_level},{s.n},{' '.join(map(str, s.boundaries))}"
                  for s in rows]
        (out / "segmentations.csv").write_text("\n".join(lines) + "\n", "utf-8")
    _write_manifest(out, manifest)
    log.info("wrote %d segmentations for %d documents to %s", len(rows), len(docs), out)
    return EXIT_OK


def cmd_baseline(args):
    docs = _load_corpus(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = make_manifest(args, "baseline", k=args.k)
    by_doc = {d.id: d for d in docs}
    targets = []
    if args.k is not None:
        targets = [(d, args.k, lvl) for d in docs for lvl in (args.level or [None])]
    else:
        if not args.segmentations:
            raise DataError("baseline needs --segmentations to match boundary counts, or --k")
        for seg in load_segmentations(args.segmentations):
            if seg.method != "lsm":
                continue
            doc = _lookup(by_doc, seg)
            targets.append((doc, len(seg.boundaries), seg.link_level))
    for doc, k, lvl in targets:
        if k > doc.n - 1:
            raise DataError(f"{doc.id}: cannot place {k} boundaries in {doc.n} sentences")
        for t, rng in enumerate(trial_rngs(doc_seed(args.seed, doc.id, lvl), args.trials)):
            params = {"k": k, "trial": t, "seed": args.seed, "rng": RNG_ALGORITHM}
            seg = Segmentation(doc.id, doc.n, random_boundaries(doc.n, k, rng), "random", lvl, params)
            _write_seg(out, seg, manifest["manifest_hash"], f".t{t:04d}" if args.trials > 1 else "")
    _write_manifest(out, manifest)
    return EXIT_OK


def _lookup(by_doc, seg):
    doc = by_doc.get(seg.doc_id)
    if doc is None:
        raise DataError(f"segmentation for {seg.doc_id!r} has no matching corpus document")
    if doc.n != seg.n:
        raise DataError(f"{seg.doc_id}: segmentation covers {seg.n} sentences, corpus document has {doc.n}")
    return doc


def cmd_combine(args):
    a = load_segmentations([args.a])
    b = load_segmentations([args.b])
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = make_manifest(args, "combine", a=str(args.a), b=str(args.b))
    b_index = defaultdict(list)
    for s in b:
        b_index[s.doc_id].append(s)
    missing = sorted({s.doc_id for s in a} ^ set(b_index))
    if missing:
        raise DataError("document ids present in only one input: " + ", ".join(missing))
    written = 0
    for sa in a:
        for sb in b_index[sa.doc_id]:
            if sa.link_level is not None and sb.link_level is not None and sa.link_level != sb.link_level:
                continue
            try:
                c = combine(sa, sb)
            except ValueError as exc:
                raise DataError(str(exc)) from None
            if c.link_level is None:
                c = Segmentation(c.doc_id, c.n, c.boundaries, c.method,
                                 sa.link_level if sa.link_level is not None else sb.link_level,
                                 c.params)
            _write_seg(out, c, manifest["manifest_hash"])
            written += 1
    if not written:
        raise DataError("no segmentation pairs with matching link levels")
    _write_manifest(out, manifest)
    return EXIT_OK


def _random_job(job):
    doc, ref, k, cfg, window, lvl = job
    return MeanScore.from_trials(doc.id, random_trial_scores(doc, ref, k, cfg, window, lvl), lvl, doc.genre)


def cmd_evaluate(args):
    docs = _load_corpus(args)
    by_doc = {d.id: d for d in docs}
    segs = load_segmentations(args.segmentations)
    if args.level:
        segs = [s for s in segs if s.link_level in args.level or s.link_level is None]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest = make_manifest(args, "evaluate",
                             segmentations=[str(p) for p in args.segmentations],
                             permutations=args.permutations, baseline_for=args.baseline_for)
    reports = []
    random_jobs = []
    cfg = RandomTrialConfig(args.trials, args.seed) if args.trials else None
    for seg in segs:
        doc = _lookup(by_doc, seg)
        ref = extract_reference(doc)
        reports.append(score(seg, ref, args.window, doc.genre))
        if cfg is not None and seg.method == args.baseline_for:
            random_jobs.append((doc, ref, cfg.k_for(seg), cfg, args.window, seg.link_level))
    random_reports = _map(_random_job, random_jobs, args.jobs)
    all_reports = reports + random_reports
    summary = aggregate(all_reports)
    summary.metadata.update({
        "precision": PRECISION_READING,
        "recall": "matches / reference boundaries",
        "window": args.window,
        "aggregation": "unweighted mean over documents, not-applicable skipped",
        "manifest_hash": manifest["manifest_hash"],
    })
    if random_reports:
        summary.metadata["random_baseline"] = {
            "trials": args.trials, "seed": args.seed, "rng": RNG_ALGORITHM,
            "boundary_count": f"matched to {args.baseline_for}",
        }
        add_significance(summary, all_reports, args.seed, args.permutations,
                         treatment=args.baseline_for, control="random")

    if args.format == "csv":
        (out / "reports.csv").write_text(f"# manifest {manifest['manifest_hash']}\n" + reports_csv(all_reports),
                                         "utf-8")
    else:
        _write_json(out / "reports.json", {"manifest_hash": manifest["manifest_hash"],
                                           "reports": [r.to_dict() for r in all_reports]})
    _write_json(out / "summary.json", summary.to_dict())
    (out / "table1.csv").write_text(f"# manifest {manifest['manifest_hash']}\n" + summary.table1_csv(), "utf-8")
    if not args.no_plots:
        from .plotting import plot_summary

        (out / "figures").mkdir(exist_ok=True)
        plot_summary(summary, out / "figures" / "summary.png",
                     metadata={"Description": f"manifest {manifest['manifest_hash']}"})
    _write_manifest(out, manifest)
    for (g, method), v in sorted(summary.by_genre.items()):
        print(f"{g}\t{method}\trecall={_pct(v['recall'])}\tprecision={_pct(v['precision'])}")
    for (g, lvl, m), p in sorted(summary.p_values.items(), key=lambda kv: str(kv[0])):
        if g == "all" and lvl == "all":
            print(f"p({m}, {args.baseline_for} > random) = {p:.3g}")
    return EXIT_OK


def _pct(v):
    return "n/a" if v is None else f"{100 * v:.2f}%"


def cmd_generate(args):
    from .synthetic import topic_corpus, two_topic_corpus, write_corpus

    if args.kind == "two-topic":
        docs = two_topic_corpus(args.docs, args.seed)
    else:
        docs = topic_corpus(args.docs, args.seed)
    write_corpus(docs, args.out)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="lsmseg", description="Link Set Median text segmentation and evaluation.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def corpus_opts(sp):
        sp.add_argument("--corpus", required=True, type=Path, help="directory of corpus files")
        sp.add_argument("--stoplist", type=Path, help="stoplist file (one word per line)")
        sp.add_argument("--no-stem", action="store_true", help="disable Porter stemming")

    def common(sp):
        sp.add_argument("--out", required=True, type=Path, help="output directory")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--jobs", type=_pos_int, default=1, help="worker processes")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    s = sub.add_parser("segment", help="LSM segmentation of every document")
    corpus_opts(s)
    common(s)
    s.add_argument("--level", type=parse_levels, default=[1], help="link level N or N..M")
    s.add_argument("--empty-sets", choices=("carry", "zero", "exclude"), default="carry",
                   help="treatment of sentences without links")
    s.add_argument("--plot", action="store_true", help="write a median/difference figure per document")
    s.add_argument("--export-links", action="store_true", help="write the link matrix as i,j,count CSV")
    s.set_defaults(func=cmd_segment)

    b = sub.add_parser("baseline", help="random segmentations")
    corpus_opts(b)
    common(b)
    b.add_argument("--segmentations", nargs="+", type=Path, help="LSM output to match boundary counts")
    b.add_argument("--k", type=_nonneg_int, help="fixed boundary count instead of matching")
    b.add_argument("--level", type=parse_levels, help="levels to label fixed-k output with")
    b.add_argument("--trials", type=_pos_int, default=1)
    b.set_defaults(func=cmd_baseline)

    c = sub.add_parser("combine", help="union of two segmentation sets")
    c.add_argument("--a", required=True, type=Path)
    c.add_argument("--b", required=True, type=Path)
    c.add_argument("--out", required=True, type=Path)
    c.set_defaults(func=cmd_combine)

    e = sub.add_parser("evaluate", help="score segmentations against section headings")
    corpus_opts(e)
    common(e)
    e.add_argument("--segmentations", nargs="+", required=True, type=Path)
    e.add_argument("--level", type=parse_levels, help="only evaluate these link levels")
    e.add_argument("--window", type=_nonneg_int, default=0, help="match tolerance in sentences")
    e.add_argument("--trials", type=_nonneg_int, default=0, help="random baseline trials per document")
    e.add_argument("--permutations", type=_pos_int, default=10_000)
    e.add_argument("--baseline-for", default="lsm", help="method whose boundary counts the baseline matches")
    e.add_argument("--no-plots", action="store_true")
    e.set_defaults(func=cmd_evaluate)

    g = sub.add_parser("generate", help="write a synthetic planted-topic corpus")
    g.add_argument("--out", required=True, type=Path)
    g.add_argument("--docs", type=_pos_int, default=50)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--kind", choices=("topics", "two-topic"), default="topics")
    g.set_defaults(func=cmd_generate)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except DataError as exc:
        print(f"lsmseg: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"lsmseg: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
