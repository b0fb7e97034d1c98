"""Command-line entry point.

Commands: ``convert`` (public corpus layouts -> canonical JSONL),
``train`` (fit one model on one split), ``evaluate`` (score a saved model
on a split's test side), ``experiment`` (full fraction x run grid for
both methods), and ``trace`` (print one greedy reading episode).

Exit codes: 0 success, 1 validation error, 2 runtime failure, 3 partial
experiment.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import evaluation, features, learn
from .baseline import BaselineModel, predict_baseline, train_baseline
from .config import ConfigError, RunConfig, load_config
from .corpus import CategorySet, Vocabulary
from .mdp import run_episode
from .policy import Greedy, LinearQ, action_scores, load_model, policy_callable, save_model

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_PARTIAL = 3


def _eprint(*args) -> None:
    print(*args, file=sys.stderr)


def _load_corpus(path) -> list:
    docs, dropped = corpus_mod.load_jsonl(path)
    if dropped:
        _eprint(f"warning: dropped {dropped} empty document(s) from {path}")
    if not docs:
        raise ValueError(f"corpus {path} contains no documents")
    return docs


def _get_split(raw_docs, fraction: float, run: int, seed: int) -> corpus_mod.Split:
    return corpus_mod.make_splits(raw_docs, fraction, run + 1, seed)[run]


def cmd_convert(args) -> int:
    try:
        if args.layout == "cardoso":
            if not args.train or not args.test:
                _eprint("convert: layout 'cardoso' requires --train and --test")
                return EXIT_VALIDATION
            for path in (args.train, args.test):
                if not Path(path).exists():
                    _eprint(f"convert: input file not found: {path}")
                    return EXIT_VALIDATION
            docs = corpus_mod.convert_cardoso(args.train, args.test)
        else:
            if not args.root:
                _eprint("convert: layout 'dirs-by-class' requires --root")
                return EXIT_VALIDATION
            if not Path(args.root).is_dir():
                _eprint(f"convert: input directory not found: {args.root}")
                return EXIT_VALIDATION
            docs = corpus_mod.convert_dirs_by_class(args.root)
    except ValueError as exc:
        # Malformed or empty inputs are validation failures, not crashes.
        _eprint(f"convert: {exc}")
        return EXIT_VALIDATION
    if not docs:
        _eprint("convert: no documents found in the input")
        return EXIT_VALIDATION
    corpus_mod.save_jsonl(docs, args.out)
    stats = corpus_mod.corpus_stats(docs)
    print(
        f"wrote {stats['n_docs']} documents, {stats['n_categories']} categories, "
        f"mean {stats['mean_sentences_per_doc']:.2f} sentences/doc -> {args.out}"
    )
    return EXIT_OK


def _prepare(cfg: RunConfig, fraction: float, run: int):
    raw_docs = _load_corpus(cfg.corpus)
    categories = CategorySet.from_documents(raw_docs)
    split = _get_split(raw_docs, fraction, run, cfg.seed)
    by_id = {d.id: d for d in raw_docs}
    train_raw = [by_id[i] for i in split.train_ids]
    test_raw = [by_id[i] for i in split.test_ids]
    vocab = corpus_mod.build_vocabulary(train_raw)
    train_docs = corpus_mod.vectorize_corpus(train_raw, vocab, categories, cfg.mode)
    test_docs = corpus_mod.vectorize_corpus(test_raw, vocab, categories, cfg.mode)
    return categories, split, vocab, train_docs, test_docs


def cmd_train(args) -> int:
    cfg = load_config(args.config, _config_overrides(args))
    fraction = args.fraction if args.fraction is not None else cfg.fractions[0]
    run = args.run
    categories, split, vocab, train_docs, _ = _prepare(cfg, fraction, run)
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    metadata = {
        "corpus": str(cfg.corpus),
        "fraction": fraction,
        "run": run,
        "seed": cfg.seed,
        "vocabulary": vocab.to_record(),
    }
    if args.method == "stc":
        result = learn.policy_iteration(train_docs, cfg.mode, cfg.rollout_config())
        model_path = cfg.output_dir / "stc.model.json"
        save_model(
            model_path,
            kind="policy",
            mode=cfg.mode,
            categories=categories.names,
            vocab_checksum=vocab.checksum(),
            weights={"theta": result.q.theta},
            metadata=metadata,
        )
        telemetry_path = cfg.output_dir / "telemetry.jsonl"
        with open(telemetry_path, "w", encoding="utf-8") as fh:
            for record in result.telemetry:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
        print(f"wrote {model_path} and {telemetry_path} ({len(result.telemetry)} iteration(s))")
    else:
        model = train_baseline(train_docs, cfg.baseline_config(), cfg.mode)
        model_path = cfg.output_dir / "baseline.model.json"
        save_model(
            model_path,
            kind="baseline",
            mode=cfg.mode,
            categories=categories.names,
            vocab_checksum=vocab.checksum(),
            weights={f"w_{k}": model.weights[k] for k in range(model.weights.shape[0])},
            metadata=metadata,
        )
        print(f"wrote {model_path}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    cfg = load_config(args.config, _config_overrides(args))
    record = load_model(args.model)
    fraction = args.fraction if args.fraction is not None else record["metadata"]["fraction"]
    run = args.run if args.run is not None else record["metadata"]["run"]
    categories, split, vocab, _, test_docs = _prepare(cfg, fraction, run)
    if vocab.checksum() != record["vocab_checksum"]:
        raise ValueError(
            "vocabulary checksum mismatch: the model was trained on a different split or corpus"
        )
    n_categories = len(categories)
    if record["kind"] == "policy":
        q = LinearQ(
            record["weights"]["theta"],
            n_categories,
            features.state_dim(len(vocab), n_categories),
        )
        preds, logs = evaluation.evaluate_policy(Greedy(q), test_docs, cfg.mode)
        metrics = {
            "method": "stc",
            "fraction": fraction,
            "run": run,
            "micro_f1": evaluation.micro_f1(preds),
            "macro_f1": evaluation.macro_f1(preds, n_categories),
            "reading_size": evaluation.reading_size(logs),
        }
    else:
        import numpy as np

        weights = np.stack([record["weights"][f"w_{k}"] for k in range(n_categories)])
        model = BaselineModel(weights=weights, mode=record["mode"])
        preds = [
            evaluation.Prediction(
                d.id, tuple(int(v) for v in d.y), tuple(int(v) for v in predict_baseline(model, d))
            )
            for d in test_docs
        ]
        metrics = {
            "method": "baseline",
            "fraction": fraction,
            "run": run,
            "micro_f1": evaluation.micro_f1(preds),
            "macro_f1": evaluation.macro_f1(preds, n_categories),
        }
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    metrics_path = cfg.output_dir / f"metrics_{metrics['method']}.json"
    with open(metrics_path, "w", encoding="utf-8") as fh:
        json.dump(metrics, fh, sort_keys=True, indent=1)
        fh.write("\n")
    print(json.dumps(metrics, sort_keys=True))
    print(f"wrote {metrics_path}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = load_config(args.config, _config_overrides(args))
    raw_docs = _load_corpus(cfg.corpus)
    report = evaluation.run_experiment(raw_docs, cfg.experiment_plan())
    written = evaluation.write_report_files(report, cfg.output_dir)
    for name, path in sorted(written.items()):
        print(f"wrote {name}: {path}")
    if not report.complete:
        failed = [c for c in report.cells if c.error is not None]
        _eprint(f"experiment finished with {len(failed)} failed cell(s)")
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_trace(args) -> int:
    record = load_model(args.model)
    if record["kind"] != "policy":
        _eprint("trace: only reading-agent models have episode traces")
        return EXIT_VALIDATION
    raw_docs = _load_corpus(args.corpus)
    matches = [d for d in raw_docs if d.id == args.doc_id]
    if not matches:
        _eprint(f"trace: document id {args.doc_id!r} not found in {args.corpus}")
        return EXIT_VALIDATION
    vocab = Vocabulary.from_record(record["metadata"]["vocabulary"])
    categories = CategorySet(tuple(record["categories"]))
    mode = record["mode"]
    doc = corpus_mod.vectorize_corpus(matches, vocab, categories, mode)[0]
    n_categories = len(categories)
    q = LinearQ(
        record["weights"]["theta"], n_categories, features.state_dim(len(vocab), n_categories)
    )

    from .mdp import initial_state, is_terminal, prf1, transition

    state = initial_state(doc)
    print(f"doc {doc.id}: {doc.n_sentences} sentence(s), labels: "
          f"{', '.join(n for n, v in zip(categories.names, doc.y) if v)}")
    step = 0
    while not is_terminal(state, mode):
        scored = dict()
        pairs = action_scores(q, state, mode)
        chosen = max(range(len(pairs)), key=lambda i: (pairs[i][1], -i))
        action, value = pairs[chosen]
        label = str(action)
        if action.kind == "classify":
            label = f"classify:{categories.names[action.category]}"
        step += 1
        print(f"step {step}: p={state.p} action={label} q={value:.6f}")
        state = transition(state, action, mode)
    reward = prf1(doc.y, state.assigned)[2]
    print(f"reward: {reward:.6f}  read {state.p}/{doc.n_sentences} sentence(s)")
    return EXIT_OK


def _config_overrides(args) -> dict:
    overrides = {}
    for attr, key in (
        ("seed", "seed"),
        ("n_runs", "n_runs"),
        ("workers", "workers"),
        ("mode", "mode"),
        ("output_dir", "output_dir"),
        ("corpus_override", "corpus"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
    return overrides


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="path to the JSON run configuration")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--n-runs", dest="n_runs", type=int, help="override the run count")
    parser.add_argument("--workers", type=int, help="override the worker count")
    parser.add_argument("--mode", choices=["mono", "multi"], help="override the task mode")
    parser.add_argument("--output-dir", dest="output_dir", help="override the output directory")
    parser.add_argument("--corpus", dest="corpus_override", help="override the corpus path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stc",
        description="Sequential text classification: train, evaluate, and inspect reading agents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_convert = sub.add_parser("convert", help="convert a public corpus layout to canonical JSONL")
    p_convert.add_argument("--layout", required=True, choices=["cardoso", "dirs-by-class"])
    p_convert.add_argument("--train", help="train file (cardoso layout)")
    p_convert.add_argument("--test", help="test file (cardoso layout)")
    p_convert.add_argument("--root", help="root directory (dirs-by-class layout)")
    p_convert.add_argument("--out", required=True, help="output canonical corpus path")
    p_convert.set_defaults(func=cmd_convert)

    p_train = sub.add_parser("train", help="train one model on one split")
    _add_config_flags(p_train)
    p_train.add_argument("--method", required=True, choices=["stc", "baseline"])
    p_train.add_argument("--fraction", type=float, help="training fraction (default: first in config)")
    p_train.add_argument("--run", type=int, default=0, help="split run index (default 0)")
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("evaluate", help="evaluate a saved model on a split's test side")
    _add_config_flags(p_eval)
    p_eval.add_argument("--model", required=True, help="model file written by train")
    p_eval.add_argument("--fraction", type=float, help="training fraction (default: from the model)")
    p_eval.add_argument("--run", type=int, help="split run index (default: from the model)")
    p_eval.set_defaults(func=cmd_evaluate)

    p_exp = sub.add_parser("experiment", help="full fraction x run grid for both methods")
    _add_config_flags(p_exp)
    p_exp.set_defaults(func=cmd_experiment)

    p_trace = sub.add_parser("trace", help="print one greedy reading episode")
    p_trace.add_argument("--model", required=True, help="reading-agent model file")
    p_trace.add_argument("--corpus", required=True, help="canonical corpus file")
    p_trace.add_argument("--doc-id", dest="doc_id", required=True, help="document id to trace")
    p_trace.set_defaults(func=cmd_trace)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        _eprint(f"configuration error: {exc}")
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not raises
        _eprint(f"error: {exc}")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
