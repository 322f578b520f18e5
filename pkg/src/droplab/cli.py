"""Command-line interface.

Subcommands: sample, train, eval, curves, verify, demo-influence.
Exit codes: 0 success, 1 validation/usage error, 2 verification failure.
Every output carries (version, full config, master seed) in its header and is
reproducible from that header alone.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import serialize
from .classifiers import (LinearClassifier, TrainConfig, evaluate_error,
                          recalibrate_intercept, train_logistic,
                          train_logistic_dropout, train_naive_bayes)
from .corpus import Corpus, SplitSpec, corpus_from_text, load_corpus
from .dropout import DropoutConfig
from .experiments import (VERSION, CurveSpec, curve_csv, curve_summary,
                          run_influence_demo, run_learning_curves)
from .streams import make_rng
from .topics import (DiscreteSampler, DocumentBatch, SYNTHETIC_PRESET,
                     TopicModel, build_synthetic_model, sample_documents)
from .verify import VERIFY_SUITES, run_verification


class ValidationError(ValueError):
    """Bad command-line input; maps to exit code 1."""


def _load_sampler(spec: str):
    """Resolve --model: a named preset or a path to a model JSON file."""
    if spec == SYNTHETIC_PRESET:
        return build_synthetic_model()
    path = Path(spec)
    if not path.exists():
        raise ValidationError(
            f"model {spec!r} is neither the preset {SYNTHETIC_PRESET!r} "
            f"nor an existing file")
    with open(path, "r", encoding="utf-8") as fh:
        return DiscreteSampler(TopicModel.from_dict(json.load(fh)))


def _write_output(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _meta(args, **config) -> dict:
    return {"version": VERSION, "config": config,
            "seed": getattr(args, "seed", 0)}


def _cmd_sample(args) -> int:
    sampler = _load_sampler(args.model)
    rng = make_rng(args.seed, "cli-sample")
    batch = sample_documents(sampler, args.n, rng)
    lines = ["# " + serialize.dumps(_meta(args, command="sample",
                                          model=args.model, n=args.n))]
    for i in range(len(batch)):
        lines.append(serialize.dumps({
            "counts": batch.counts[i].tolist(),
            "label": int(batch.labels[i]),
            "topic": float(batch.topics[i]),
            "length": int(batch.counts[i].sum()),
        }))
    _write_output("\n".join(lines) + "\n", args.out)
    return 0


def _read_docs_jsonl(path: str) -> DocumentBatch:
    counts, labels, topics = [], [], []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            doc = json.loads(line)
            counts.append(doc["counts"])
            labels.append(int(doc["label"]))
            topics.append(float(doc.get("topic", -1)))
    if not counts:
        raise ValidationError(f"no documents found in {path}")
    return DocumentBatch(counts=np.asarray(counts, dtype=np.int64),
                         labels=np.asarray(labels, dtype=np.int64),
                         topics=np.asarray(topics))


def _corpus_batch(c: Corpus) -> DocumentBatch:
    return DocumentBatch(counts=c.counts, labels=c.labels,
                         topics=np.full(len(c), -1.0))


def _check_delta(delta: float):
    if not 0.0 <= delta <= 1.0:
        raise ValidationError(f"delta must be in [0, 1], got {delta:g}")


def _cmd_train(args) -> int:
    _check_delta(args.delta)
    if (args.corpus is None) == (args.docs is None):
        raise ValidationError("provide exactly one of --corpus / --docs")
    vocabulary = None
    if args.corpus is not None:
        split = SplitSpec(seed=args.seed, train_fraction=None,
                          train_size=args.train_size) \
            if args.train_size else SplitSpec(seed=args.seed,
                                              train_fraction=args.train_frac)
        train_corpus, test_corpus = load_corpus(args.corpus, split)
        vocabulary = train_corpus.vocabulary
        train = _corpus_batch(train_corpus)
        heldout = _corpus_batch(test_corpus)
    else:
        train = _read_docs_jsonl(args.docs)
        heldout = None

    if args.delta >= 1.0:
        clf = train_naive_bayes(train, smoothing=args.smoothing)
    else:
        cfg = TrainConfig(l2_weight=args.l2, step_size=args.step,
                          epochs=args.epochs, batch_size=args.batch_size,
                          dropout=DropoutConfig(delta=args.delta,
                                                mc_replicates=args.mc_replicates),
                          seed=args.seed)
        if args.delta == 0.0:
            clf = train_logistic(train, cfg)
        else:
            clf = train_logistic_dropout(train, cfg)
    clf = recalibrate_intercept(clf, train)

    meta = _meta(args, command="train", delta=args.delta,
                 corpus=args.corpus, docs=args.docs,
                 l2=args.l2, epochs=args.epochs,
                 mc_replicates=args.mc_replicates,
                 smoothing=args.smoothing)
    meta["train_error"] = evaluate_error(clf, train)
    if heldout is not None:
        meta["test_error"] = evaluate_error(clf, heldout)
    if vocabulary is not None:
        meta["vocabulary"] = vocabulary
    _write_output(serialize.dumps(clf.to_dict(meta=meta), indent=2) + "\n",
                  args.out)
    return 0


def _cmd_eval(args) -> int:
    if (args.corpus is None) == (args.docs is None):
        raise ValidationError("provide exactly one of --corpus / --docs")
    with open(args.classifier, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    clf = LinearClassifier.from_dict(doc)
    if args.corpus is not None:
        vocabulary = doc.get("meta", {}).get("vocabulary")
        if vocabulary is None:
            raise ValidationError(
                "classifier JSON carries no vocabulary; evaluate with --docs")
        data = _corpus_batch(corpus_from_text(args.corpus, vocabulary))
    else:
        data = _read_docs_jsonl(args.docs)
    report = _meta(args, command="eval", classifier=args.classifier,
                   corpus=args.corpus, docs=args.docs)
    report = {"meta": report, "error": evaluate_error(clf, data),
              "n": len(data)}
    _write_output(serialize.dumps(report, indent=2) + "\n", args.out)
    return 0


def _cmd_curves(args) -> int:
    sampler = _load_sampler(args.model)
    for d in args.delta_grid:
        _check_delta(d)
    cfg = TrainConfig(l2_weight=args.l2, step_size=args.step,
                      epochs=args.epochs, batch_size=args.batch_size,
                      dropout=DropoutConfig(delta=0.0,
                                            mc_replicates=args.mc_replicates))
    spec = CurveSpec(sampler=sampler, n_grid=tuple(args.n_grid),
                     delta_grid=tuple(args.delta_grid), trials=args.trials,
                     test_size=args.test_size, train_cfg=cfg,
                     master_seed=args.seed, sampler_name=args.model)
    result = run_learning_curves(spec, threads=args.threads)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "curves.csv", "w", encoding="utf-8") as fh:
        fh.write(curve_csv(result, include_timing=args.timing))
    with open(out_dir / "summary.json", "w", encoding="utf-8") as fh:
        fh.write(serialize.dumps(curve_summary(result), indent=2) + "\n")
    return 0


def _cmd_verify(args) -> int:
    report = run_verification(suite=args.suite, mc=args.mc, seed=args.seed)
    _write_output(serialize.dumps(report, indent=2) + "\n", args.out)
    return 0 if report["passed"] else 2


def _cmd_demo_influence(args) -> int:
    _check_delta(args.delta)
    rep = run_influence_demo(delta=args.delta, n=args.n,
                             master_seed=args.seed)
    doc = {
        "meta": _meta(args, command="demo-influence", delta=args.delta,
                      n=args.n),
        "plain": rep.clf_plain.to_dict(),
        "dropout": rep.clf_dropout.to_dict(),
        "angle_degrees": rep.angle_degrees,
        "plain_error_by_cluster":
            {str(k): v for k, v in rep.plain_error_by_cluster.items()},
        "dropout_error_by_cluster":
            {str(k): v for k, v in rep.dropout_error_by_cluster.items()},
        "plain_test_error": rep.plain_test_error,
        "dropout_test_error": rep.dropout_test_error,
    }
    _write_output(serialize.dumps(doc, indent=2) + "\n", args.out)
    return 0


def _int_list(text: str) -> list[int]:
    return [int(p) for p in text.split(",") if p]


def _float_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p]


def _default_threads() -> int:
    return min(8, os.cpu_count() or 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="droplab",
        description="Dropout training and bound verification for Poisson "
                    "topic models")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=False):
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--out", type=str, default=None, help="output path")
        if model:
            p.add_argument("--model", type=str, default=SYNTHETIC_PRESET,
                           help=f"preset name ({SYNTHETIC_PRESET}) or model "
                                f"JSON path")

    p = sub.add_parser("sample", help="sample documents from a model")
    common(p, model=True)
    p.add_argument("--n", type=int, default=100)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("train", help="fit a classifier, write JSON")
    common(p)
    p.add_argument("--corpus", type=str, help="label<TAB>text corpus file")
    p.add_argument("--docs", type=str, help="document JSONL (from sample)")
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--mc", dest="mc_replicates", type=int, default=8,
                   help="thinned replicates per pass")
    p.add_argument("--l2", type=float, default=1e-7)
    p.add_argument("--epochs", type=int, default=400)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--smoothing", type=float, default=1.0,
                   help="naive Bayes smoothing (delta = 1)")
    p.add_argument("--train-frac", type=float, default=0.6)
    p.add_argument("--train-size", type=int, default=None)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="error of a saved classifier on data")
    common(p)
    p.add_argument("--classifier", type=str, required=True)
    p.add_argument("--corpus", type=str)
    p.add_argument("--docs", type=str)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("curves", help="learning-curve grid to CSV + summary")
    common(p, model=True)
    p.add_argument("--n-grid", type=_int_list,
                   default=[100, 300, 1000, 3000, 10000])
    p.add_argument("--delta-grid", type=_float_list,
                   default=[0.0, 0.5, 0.75, 0.9, 0.95, 1.0])
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--test-size", type=int, default=100_000)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--l2", type=float, default=1e-7)
    p.add_argument("--epochs", type=int, default=150)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--batch-size", type=int, default=None)
    p.add_argument("--mc", dest="mc_replicates", type=int, default=4,
                   help="thinned replicates per pass")
    p.add_argument("--timing", action="store_true",
                   help="write measured per-cell wall times (breaks "
                        "byte-for-byte reproducibility)")
    p.set_defaults(func=_cmd_curves)

    p = sub.add_parser("verify", help="run analytical verification suites")
    common(p)
    p.add_argument("--suite", type=str, default="all",
                   choices=list(VERIFY_SUITES) + ["all"])
    p.add_argument("--mc", type=int, default=1_000_000)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("demo-influence",
                       help="two-cluster influence geometry data")
    common(p)
    p.add_argument("--delta", type=float, default=0.75)
    p.add_argument("--n", type=int, default=10_000)
    p.set_defaults(func=_cmd_demo_influence)

    return parser


def cli_dispatch(argv) -> int:
    """Parse and run; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (ValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))
