"""JSON web service over the selection, classification, exercise and
evaluation pipelines.

State (corpora, word lists, optional classifier model) loads once at
startup from a JSON config file; request handling never mutates it, so
responses are pure functions of (state, request). Endpoint bodies mirror
the library's JSON projections byte for byte.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException, Request, Response

from . import evaluation as ev
from .classifier import CefrModel, classify
from .config import (
    PROFILES,
    ConfigValidationError,
    config_to_dict,
    criteria_catalog,
    default_config,
    profile_modes,
    validate_config,
)
from .corpus import CorpusError, SearchQuery, fetch_corpus, parse_conllu
from .exercises import (
    ExerciseError,
    assemble_from_seeds,
    build_exercise,
    distractor_pool_from_corpus,
    exercise_to_dict,
    worksheet_to_dict,
)
from .features import extract_features
from .lexicons import Lexicons, load_aux, load_kelly, load_lmi, load_svalex
from .ranking import SelectionError, outcome_to_dict, select, select_best_per_lemma
from .tagset import DEFAULT_TAGSET, TagsetConfig

MAX_BODY_BYTES = 10 * 1024 * 1024


@dataclass
class ServiceState:
    corpora: dict[str, list] = field(default_factory=dict)
    lexicons: Lexicons = field(default_factory=Lexicons.empty)
    model: CefrModel | None = None
    tagset: TagsetConfig = DEFAULT_TAGSET


def load_state(config_path: str) -> ServiceState:
    """Build service state from a startup config file listing corpus,
    word-list and model paths (relative paths resolve against the file)."""
    base = Path(config_path).parent
    with open(config_path, encoding="utf-8") as f:
        doc = json.load(f)

    def resolve(p: str) -> str:
        if p.startswith(("http://", "https://")):
            return p
        path = Path(p)
        return str(path if path.is_absolute() else base / path)

    state = ServiceState()
    for name, source in doc.get("corpora", {}).items():
        state.corpora[name] = fetch_corpus(resolve(source))
    kelly = load_kelly(resolve(doc["kelly"])) if "kelly" in doc else Lexicons.empty().kelly
    svalex = load_svalex(resolve(doc["svalex"])) if "svalex" in doc else Lexicons.empty().svalex
    lmi = load_lmi(resolve(doc["lmi"])) if "lmi" in doc else Lexicons.empty().lmi
    aux = load_aux(resolve(doc["aux"])) if "aux" in doc else load_aux()
    state.lexicons = Lexicons(kelly=kelly, svalex=svalex, lmi=lmi, aux=aux)
    if "model" in doc:
        state.model = CefrModel.load(resolve(doc["model"]))
    if "tagset" in doc:
        state.tagset = TagsetConfig.from_json(resolve(doc["tagset"]))
    return state


def _bad_request(errors: list[str]):
    raise HTTPException(status_code=400, detail={"errors": errors})


def _pick_corpus(state: ServiceState, name: str | None) -> list:
    if not state.corpora:
        raise HTTPException(status_code=404, detail={"errors": ["no corpus loaded"]})
    if name is None:
        name = next(iter(state.corpora))
    if name not in state.corpora:
        raise HTTPException(status_code=404,
                            detail={"errors": [f"unknown corpus {name!r}"]})
    return state.corpora[name]


def _config_from_body(body: dict):
    """A request supplies either a full config document or a profile name
    plus a query object."""
    if "config" in body:
        doc = dict(body["config"])
        if "query" not in doc and "query" in body:
            doc["query"] = body["query"]
        try:
            return validate_config(doc)
        except ConfigValidationError as exc:
            _bad_request(exc.errors)
    profile = body.get("profile")
    if profile is None:
        _bad_request(["either 'config' or 'profile' is required"])
    q = body.get("query")
    if not isinstance(q, dict):
        _bad_request(["query: required object"])
    try:
        query = SearchQuery(
            term=q.get("term", ""), match_kind=q.get("match_kind", "lemma"),
            pos=q.get("pos"), target_level=q.get("target_level", "B1"),
            max_candidates=q.get("max_candidates", 300))
        return default_config(profile, query)
    except (CorpusError, SelectionError) as exc:
        _bad_request([str(exc)])


def create_app(state: ServiceState, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="sentpick", version="0.1.0")

    from fastapi.middleware.cors import CORSMiddleware

    # a local no-auth tool; the UI may be served from another origin
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    @app.middleware("http")
    async def limit_body(request: Request, call_next):
        length = request.headers.get("content-length")
        if length and int(length) > MAX_BODY_BYTES:
            return Response(status_code=413, content="request body too large")
        return await call_next(request)

    @app.get("/criteria")
    def get_criteria() -> dict:
        return {"criteria": criteria_catalog(),
                "profiles": {name: profile_modes(name) for name in PROFILES}}

    @app.post("/select")
    def post_select(body: dict = Body(...)) -> dict:
        corpus = _pick_corpus(state, body.get("corpus"))
        config = _config_from_body(body)
        top_k = body.get("top_k")
        try:
            outcome = select(corpus, config, state.lexicons, state.model,
                             state.tagset, top_k=top_k)
        except SelectionError as exc:
            _bad_request([str(exc)])
        return outcome_to_dict(outcome, config, config_echo=config_to_dict(config))

    @app.post("/classify")
    def post_classify(body: dict = Body(...)) -> dict:
        if state.model is None:
            raise HTTPException(status_code=409,
                                detail={"errors": ["no classifier model loaded"]})
        conllu = body.get("conllu")
        if not isinstance(conllu, str) or not conllu.strip():
            _bad_request(["conllu: non-empty string required"])
        target = body.get("target_level", "B1")
        try:
            sentences = parse_conllu(conllu, source="<request>")
        except CorpusError as exc:
            _bad_request([str(exc)])
        out = []
        for sent in sentences:
            fv = extract_features(sent, target, state.lexicons, state.tagset)
            level, probs = classify(state.model, fv)
            out.append({"id": sent.id, "level": level, "probabilities": probs})
        return {"sentences": out}

    @app.post("/exercises")
    def post_exercises(body: dict = Body(...)) -> dict:
        corpus = _pick_corpus(state, body.get("corpus"))
        config = _config_from_body(body)
        seed = int(body.get("seed", 0))
        mode = body.get("mode", "same_msd")
        level = body.get("level", config.query.target_level)

        if "seeds" in body:
            try:
                ws = assemble_from_seeds(corpus, body["seeds"], level, seed,
                                         config, state.lexicons, state.model,
                                         state.tagset)
            except ExerciseError as exc:
                _bad_request([str(exc)])
            return {"seed": seed, "worksheet": worksheet_to_dict(ws)}

        terms = body.get("terms")
        if not isinstance(terms, list) or not terms:
            _bad_request(["terms: non-empty list required"])
        best = select_best_per_lemma(corpus, terms, config, state.lexicons,
                                     state.model, state.tagset)
        results = [r for r in best.values() if r is not None]
        pool = distractor_pool_from_corpus(corpus, state.lexicons, level, state.tagset)
        try:
            exercise = build_exercise(results, mode, level, seed,
                                      distractor_pool=pool,
                                      manual_distractor=body.get("distractor"))
        except ExerciseError as exc:
            _bad_request([str(exc)])
        return {"seed": seed, "exercise": exercise_to_dict(exercise)}

    @app.post("/evaluate")
    def post_evaluate(body: dict = Body(...)) -> dict:
        metric = body.get("metric")
        try:
            if metric == "chance":
                value = ev.chance_probability(int(body["items"]), int(body["options"]))
                return {"metric": metric, "value": value}
            if metric == "iid":
                if "p_chance" in body:
                    p = float(body["p_chance"])
                else:
                    p = ev.chance_probability(int(body["items"]), int(body["options"]))
                return {"metric": metric, "p_chance": p,
                        "value": ev.ideal_item_difficulty(p)}
            if metric == "alpha":
                return {"metric": metric,
                        "value": ev.krippendorff_alpha(
                            body["ratings"], body.get("distance_metric", "nominal"))}
            if metric == "spearman":
                return {"metric": metric,
                        "value": ev.spearman_rho(body["x"], body["y"])}
            if metric == "difficulty":
                rows = _responses_from_csv(body.get("responses_csv", ""))
                table = ev.item_difficulty(rows,
                                           tuple(body.get("group_by", [])),
                                           body.get("item_meta"))
                return {"metric": metric, "table": table}
            if metric == "distance":
                return {"metric": metric,
                        "table": ev.level_distance_table(body["assignments"])}
        except (ev.EvaluationError, KeyError, ValueError) as exc:
            _bad_request([str(exc)])
        _bad_request([f"unknown metric {metric!r}"])

    return app


def _responses_from_csv(text: str) -> list[ev.ResponseRecord]:
    import io

    if not text.strip():
        raise ev.EvaluationError("responses_csv: non-empty CSV text required")
    return ev.parse_responses(io.StringIO(text))
