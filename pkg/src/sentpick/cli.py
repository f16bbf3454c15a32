"""Command-line driver for the full pipeline.

Subcommands: select, classify, train, features, exercise, evaluate, serve.
Exit codes: 0 success, 2 usage/validation error, 1 internal error. Output
is deterministic given --seed, with stable JSON key order for golden files.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import evaluation as ev
from .classifier import (
    CefrModel,
    ClassifierError,
    TrainConfig,
    classify,
    train,
)
from .config import (
    ConfigValidationError,
    config_to_dict,
    default_config,
    validate_config,
)
from .corpus import (
    AnnotatedSentence,
    CorpusError,
    SearchQuery,
    fetch_corpus,
    parse_conllu_file,
)
from .exercises import (
    ExerciseError,
    answer_key,
    assemble_from_seeds,
    build_exercise,
    distractor_pool_from_corpus,
    exercise_to_dict,
    render_exercise_text,
    worksheet_to_dict,
)
from .features import FEATURE_NAMES, extract_features
from .lexicons import (
    LexiconError,
    Lexicons,
    load_aux,
    load_kelly,
    load_lmi,
    load_svalex,
)
from .levels import CLASSIFIER_LEVELS
from .ranking import SelectionError, outcome_to_dict, select, select_best_per_lemma
from .tagset import DEFAULT_TAGSET, TagsetConfig

USAGE_ERROR = 2


class UsageError(ValueError):
    pass


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corpus", action="append", default=[], metavar="PATH",
                   help="CoNLL-U corpus file or http(s) URL (repeatable)")
    p.add_argument("--kelly", metavar="PATH")
    p.add_argument("--svalex", metavar="PATH")
    p.add_argument("--lmi", metavar="PATH")
    p.add_argument("--aux", metavar="DIR",
                   help="directory of auxiliary lists (defaults to packaged data)")
    p.add_argument("--tagset", metavar="PATH", help="tagset config JSON")


def _add_query_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--term", help="search term")
    p.add_argument("--match-kind", default="lemma",
                   choices=("wordform", "lemma", "pos_pattern"))
    p.add_argument("--pos", help="POS restriction for the search term")
    p.add_argument("--level", default="B1", choices=CLASSIFIER_LEVELS,
                   help="target CEFR level")
    p.add_argument("--max-candidates", type=int, default=None)


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    p.add_argument("--format", default="json", choices=("json", "tsv", "md", "text"))


def _load_corpus(args) -> list[AnnotatedSentence]:
    if not args.corpus:
        raise UsageError("--corpus is required")
    sentences: list[AnnotatedSentence] = []
    for source in args.corpus:
        sentences.extend(fetch_corpus(source))
    return sentences


def _load_lexicons(args) -> Lexicons:
    empty = Lexicons.empty()
    return Lexicons(
        kelly=load_kelly(args.kelly) if args.kelly else empty.kelly,
        svalex=load_svalex(args.svalex) if args.svalex else empty.svalex,
        lmi=load_lmi(args.lmi) if args.lmi else empty.lmi,
        aux=load_aux(args.aux),
    )


def _load_tagset(args) -> TagsetConfig:
    return TagsetConfig.from_json(args.tagset) if args.tagset else DEFAULT_TAGSET


def _build_query(args) -> SearchQuery:
    if not args.term:
        raise UsageError("--term is required")
    return SearchQuery(
        term=args.term, match_kind=args.match_kind, pos=args.pos,
        target_level=args.level,
        max_candidates=args.max_candidates if args.max_candidates else 300)


def _build_config(args):
    if args.config:
        with open(args.config, encoding="utf-8") as f:
            doc = json.load(f)
        if args.term:
            doc["query"] = {
                "term": args.term, "match_kind": args.match_kind, "pos": args.pos,
                "target_level": args.level,
                "max_candidates": args.max_candidates or
                doc.get("query", {}).get("max_candidates", 300),
            }
        return validate_config(doc)
    profile = args.profile or "paper_eval"
    return default_config(profile, _build_query(args))


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump_json(doc) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def _select_tsv(doc: dict) -> str:
    cols = ("id", "rank", "goodness", "set", "filtered_by", "subscores", "criteria", "text")
    lines = ["\t".join(cols)]
    for set_name in ("results", "rejected"):
        for r in doc[set_name]:
            lines.append("\t".join([
                r["id"], str(r["rank"]), str(r["goodness"]), set_name,
                ",".join(r["filtered_by"]),
                json.dumps(r["subscores"], ensure_ascii=False, separators=(",", ":")),
                json.dumps(r["criteria"], ensure_ascii=False, separators=(",", ":")),
                r["text"],
            ]))
    return "\n".join(lines) + "\n"


def _select_md(doc: dict) -> str:
    lines = [
        f"# Selection for `{doc['query']['term']}` "
        f"(level {doc['query']['target_level']}, status {doc['status']})",
        "",
        "| rank | id | goodness | filtered by | text |",
        "| --- | --- | --- | --- | --- |",
    ]
    for r in doc["results"] + doc["rejected"]:
        lines.append(f"| {r['rank']} | {r['id']} | {r['goodness']} | "
                     f"{', '.join(r['filtered_by'])} | {r['text']} |")
    lines.append("")
    lines.append("```json")
    lines.append(json.dumps(doc, ensure_ascii=False, indent=2))
    lines.append("```")
    return "\n".join(lines) + "\n"


def cmd_select(args) -> int:
    config = _build_config(args)
    if args.dump_request:
        body = {"query": config_to_dict(config)["query"],
                "config": config_to_dict(config)}
        _emit(args, json.dumps(body, ensure_ascii=False, separators=(",", ":")) + "\n")
        return 0
    corpus = _load_corpus(args)
    lexicons = _load_lexicons(args)
    tagset = _load_tagset(args)
    model = CefrModel.load(args.model) if args.model else None
    if args.retain_suboptimal:
        config.retain_suboptimal = True
    outcome = select(corpus, config, lexicons, model, tagset, top_k=args.top_k)
    doc = outcome_to_dict(outcome, config, config_echo=config_to_dict(config))
    if args.format == "tsv":
        _emit(args, _select_tsv(doc))
    elif args.format == "md":
        _emit(args, _select_md(doc))
    else:
        _emit(args, _dump_json(doc))
    return 0


def cmd_classify(args) -> int:
    corpus = _load_corpus(args)
    lexicons = _load_lexicons(args)
    tagset = _load_tagset(args)
    if not args.model:
        raise UsageError("--model is required")
    model = CefrModel.load(args.model)
    out = []
    for sent in corpus:
        fv = extract_features(sent, args.level, lexicons, tagset)
        level, probs = classify(model, fv)
        out.append({"id": sent.id, "level": level, "probabilities": probs})
    _emit(args, _dump_json({"sentences": out}))
    return 0


def cmd_features(args) -> int:
    corpus = _load_corpus(args)
    lexicons = _load_lexicons(args)
    tagset = _load_tagset(args)
    rows = []
    for sent in corpus:
        fv = extract_features(sent, args.level, lexicons, tagset)
        rows.append((sent.id, fv))
    if args.format == "tsv":
        lines = ["\t".join(("id",) + FEATURE_NAMES)]
        for sid, fv in rows:
            lines.append("\t".join([sid] + [repr(fv[n]) for n in FEATURE_NAMES]))
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _dump_json({"sentences": [
            {"id": sid, "features": {n: fv[n] for n in FEATURE_NAMES}}
            for sid, fv in rows]}))
    return 0


def _load_training_file(path: str, lexicons: Lexicons, tagset: TagsetConfig):
    """TSV with a `level` column plus either the 61 feature columns or a
    `conllu_ref` column (path#sent_id, path relative to the TSV)."""
    import csv

    base = Path(path).parent
    corpus_cache: dict[str, dict[str, AnnotatedSentence]] = {}
    dataset = []
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f, delimiter="\t")
        if reader.fieldnames is None or "level" not in reader.fieldnames:
            raise UsageError(f"{path}: training TSV needs a 'level' column")
        by_ref = "conllu_ref" in reader.fieldnames
        if not by_ref:
            missing = [n for n in FEATURE_NAMES if n not in reader.fieldnames]
            if missing:
                raise UsageError(f"{path}: missing feature column(s) {missing[:3]}...")
        for row in reader:
            level = row["level"].strip()
            if by_ref:
                ref = row["conllu_ref"].strip()
                if "#" not in ref:
                    raise UsageError(f"{path}: conllu_ref must look like file.conllu#sent_id")
                fname, sid = ref.split("#", 1)
                fpath = str(base / fname)
                if fpath not in corpus_cache:
                    corpus_cache[fpath] = {s.id: s for s in parse_conllu_file(fpath)}
                if sid not in corpus_cache[fpath]:
                    raise UsageError(f"{path}: sentence {sid!r} not found in {fname}")
                fv = extract_features(corpus_cache[fpath][sid], level, lexicons, tagset)
            else:
                fv = {n: float(row[n]) for n in FEATURE_NAMES}
            dataset.append((fv, level))
    return dataset


def cmd_train(args) -> int:
    lexicons = _load_lexicons(args)
    tagset = _load_tagset(args)
    dataset = _load_training_file(args.train_file, lexicons, tagset)
    hp = TrainConfig(learning_rate=args.lr, l2=args.l2, epochs=args.epochs)
    model = train(dataset, hp)
    if not args.model_out:
        raise UsageError("--model-out is required")
    model.save(args.model_out)
    preds = [classify(model, fv)[0] for fv, _lvl in dataset]
    gold = [lvl for _fv, lvl in dataset]
    acc = sum(p == g for p, g in zip(preds, gold)) / len(gold)
    _emit(args, _dump_json({
        "model": args.model_out, "rows": len(dataset),
        "labels": model.labels, "training_accuracy": acc,
        "hyperparams": model.hyperparams,
    }))
    return 0


def cmd_exercise(args) -> int:
    corpus = _load_corpus(args)
    lexicons = _load_lexicons(args)
    tagset = _load_tagset(args)
    model = CefrModel.load(args.model) if args.model else None

    query = SearchQuery(term="<seed>", match_kind="lemma", target_level=args.level,
                        max_candidates=args.max_candidates or 300)
    if args.config:
        with open(args.config, encoding="utf-8") as f:
            doc = json.load(f)
        doc.setdefault("query", {"term": "<seed>", "target_level": args.level})
        config = validate_config(doc)
    else:
        config = default_config(args.profile or "paper_eval", query)

    if args.seeds_file:
        with open(args.seeds_file, encoding="utf-8") as f:
            seeds = json.load(f)
        ws = assemble_from_seeds(corpus, seeds, args.level, args.seed, config,
                                 lexicons, model, tagset)
        doc = worksheet_to_dict(ws, include_answers=False)
        answers = [answer_key(ex) for ex in ws.exercises]
    else:
        if not args.terms:
            raise UsageError("--terms or --seeds-file is required")
        terms = [t.strip() for t in args.terms.split(",") if t.strip()]
        best = select_best_per_lemma(corpus, terms, config, lexicons, model, tagset)
        results = [r for r in best.values() if r is not None]
        pool = distractor_pool_from_corpus(corpus, lexicons, args.level, tagset)
        ex = build_exercise(results, args.mode, args.level, args.seed,
                            distractor_pool=pool,
                            manual_distractor=args.distractor)
        if args.format == "text":
            _emit(args, render_exercise_text(ex) + "\n")
            return 0
        doc = exercise_to_dict(ex, include_answers=False)
        answers = answer_key(ex)

    _emit(args, _dump_json(doc))
    answers_path = args.answers_out or (args.out + ".answers.json" if args.out else None)
    if answers_path:
        Path(answers_path).write_text(_dump_json(answers), encoding="utf-8")
    else:
        sys.stderr.write(_dump_json({"answer_key": answers}))
    return 0


def _format_scalar(value: float) -> str:
    text = f"{value:.6f}".rstrip("0").rstrip(".")
    return text if text else "0"


def cmd_evaluate(args) -> int:
    metric = args.metric
    if metric == "chance":
        value = ev.chance_probability(args.items, args.options)
        _emit(args, _format_scalar(value) + "\n")
        return 0
    if metric == "iid":
        p = args.p_chance if args.p_chance is not None else \
            ev.chance_probability(args.items, args.options)
        _emit(args, _format_scalar(ev.ideal_item_difficulty(p)) + "\n")
        return 0
    if metric == "alpha":
        if not args.ratings:
            raise UsageError("--ratings is required")
        blocks = {}
        for path in args.ratings:
            records = ev.read_ratings(path)
            raters = sorted({r.rater for r in records})
            sentences = sorted({r.sentence for r in records})
            cell: dict[tuple[str, str], object] = {}
            for r in records:
                if args.value == "level":
                    cell[(r.rater, r.sentence)] = r.suggested_level
                else:
                    cell[(r.rater, r.sentence)] = r.scores.get(args.value)
            matrix = [[cell.get((rater, s)) for s in sentences] for rater in raters]
            blocks[path] = ev.krippendorff_alpha(matrix, args.distance_metric)
        doc = {"blocks": blocks, "average": sum(blocks.values()) / len(blocks)}
        _emit(args, _dump_json(doc))
        return 0
    if metric == "spearman":
        if not args.ratings:
            raise UsageError("--ratings is required")
        records = ev.read_ratings(args.ratings[0])
        per_sentence: dict[str, dict[str, list[int]]] = {}
        for r in records:
            slot = per_sentence.setdefault(r.sentence, {})
            for name, val in r.scores.items():
                slot.setdefault(name, []).append(val)
        xs, ys = [], []
        for scores in per_sentence.values():
            if args.x in scores and args.y in scores:
                xs.append(sum(scores[args.x]) / len(scores[args.x]))
                ys.append(sum(scores[args.y]) / len(scores[args.y]))
        _emit(args, _format_scalar(ev.spearman_rho(xs, ys)) + "\n")
        return 0
    if metric == "difficulty":
        if not args.responses:
            raise UsageError("--responses is required")
        responses = ev.read_responses(args.responses)
        meta = None
        if args.items_meta:
            with open(args.items_meta, encoding="utf-8") as f:
                meta = json.load(f)
        group_by = tuple(args.by.split(",")) if args.by else ()
        table = ev.item_difficulty(responses, group_by, meta)
        _emit(args, _dump_json({"difficulty": table}))
        return 0
    if metric == "distance":
        if not args.ratings:
            raise UsageError("--ratings is required")
        records = []
        for path in args.ratings:
            records.extend(ev.read_ratings(path))
        system = {}
        if args.system_csv:
            import csv
            with open(args.system_csv, encoding="utf-8", newline="") as f:
                for row in csv.DictReader(f):
                    system[row["sentence"].strip()] = row["level"].strip()
        per_sentence: dict[str, list[str]] = {}
        for r in records:
            if r.suggested_level:
                per_sentence.setdefault(r.sentence, []).append(r.suggested_level)
        assignments = [{"teachers": teachers, "system": system.get(sid)}
                       for sid, teachers in sorted(per_sentence.items())]
        _emit(args, _dump_json(ev.level_distance_table(assignments)))
        return 0
    raise UsageError(f"unknown metric {metric!r}")


def cmd_serve(args) -> int:
    import os

    import uvicorn

    from .service import create_app, load_state

    if not args.service_config:
        raise UsageError("--service-config is required")
    state = load_state(args.service_config)
    app = create_app(state, ui_dir=args.ui)
    bind = os.environ.get("SENTPICK_BIND", "")
    host = args.host or (bind.split(":")[0] if bind else "127.0.0.1")
    port = args.port or (int(bind.split(":")[1]) if ":" in bind else 8000)
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sentpick")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("select", help="search, filter and rank candidate sentences")
    _add_data_flags(p)
    _add_query_flags(p)
    _add_output_flags(p)
    p.add_argument("--config", metavar="PATH", help="selection config JSON")
    p.add_argument("--profile", choices=("paper_eval", "dictionary_example", "permissive"))
    p.add_argument("--model", metavar="PATH", help="classifier model JSON")
    p.add_argument("--top-k", type=int, default=None)
    p.add_argument("--retain-suboptimal", action="store_true")
    p.add_argument("--dump-request", action="store_true",
                   help="print the canonical service request body and exit")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("classify", help="assign CEFR levels to corpus sentences")
    _add_data_flags(p)
    _add_output_flags(p)
    p.add_argument("--model", metavar="PATH", required=False)
    p.add_argument("--level", default="B1", choices=CLASSIFIER_LEVELS,
                   help="target level for relative features")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("features", help="dump complexity feature vectors")
    _add_data_flags(p)
    _add_output_flags(p)
    p.add_argument("--level", default="B1", choices=CLASSIFIER_LEVELS)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("train", help="train the level classifier")
    _add_data_flags(p)
    _add_output_flags(p)
    p.add_argument("--train-file", required=True, metavar="PATH")
    p.add_argument("--model-out", metavar="PATH")
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--l2", type=float, default=1e-4)
    p.add_argument("--epochs", type=int, default=500)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("exercise", help="assemble word-bank exercises")
    _add_data_flags(p)
    _add_output_flags(p)
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--profile", choices=("paper_eval", "dictionary_example", "permissive"))
    p.add_argument("--model", metavar="PATH")
    p.add_argument("--terms", help="comma-separated search lemmas")
    p.add_argument("--seeds-file", metavar="PATH",
                   help="JSON {level: [{terms: [...], mode: ...}]} for worksheets")
    p.add_argument("--mode", default="same_msd", choices=("same_msd", "mixed_pos"))
    p.add_argument("--level", default="B1", choices=CLASSIFIER_LEVELS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-candidates", type=int, default=None)
    p.add_argument("--distractor", help="manual distractor override")
    p.add_argument("--answers-out", metavar="PATH")
    p.set_defaults(func=cmd_exercise)

    p = sub.add_parser("evaluate", help="study metrics over ratings/responses")
    p.add_argument("metric", choices=("iid", "chance", "alpha", "spearman",
                                      "difficulty", "distance"))
    _add_output_flags(p)
    p.add_argument("--items", type=int, default=5)
    p.add_argument("--options", type=int, default=6)
    p.add_argument("--p-chance", type=float, default=None)
    p.add_argument("--ratings", action="append", metavar="PATH")
    p.add_argument("--responses", metavar="PATH")
    p.add_argument("--items-meta", metavar="PATH",
                   help="JSON {exercise_id: {mode: ..., pos: ...}}")
    p.add_argument("--by", help="comma-separated grouping keys")
    p.add_argument("--value", default="level", choices=("level", "l2", "ctx", "overall"))
    p.add_argument("--distance-metric", default="nominal",
                   choices=("nominal", "ordinal-distance"))
    p.add_argument("--x", default="overall", choices=("l2", "ctx", "overall"))
    p.add_argument("--y", default="ctx", choices=("l2", "ctx", "overall"))
    p.add_argument("--system-csv", metavar="PATH")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("serve", help="run the web service")
    p.add_argument("--service-config", metavar="PATH")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--ui", metavar="DIR", help="serve a built UI at /ui")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ConfigValidationError, CorpusError, LexiconError,
            SelectionError, ClassifierError, ExerciseError,
            ev.EvaluationError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR
    except Exception as exc:  # pragma: no cover
        sys.stderr.write(f"internal error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
