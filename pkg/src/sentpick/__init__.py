"""sentpick: select, grade and package corpus sentences for L2 exercises."""

from .classifier import CefrModel, TrainConfig, classify, train, within_distance_accuracy
from .corpus import (
    AnnotatedSentence,
    SearchQuery,
    Token,
    concordance_search,
    parse_conllu,
    parse_conllu_file,
    serialize_conllu,
)
from .config import default_config, validate_config
from .criteria import CATALOG, CriterionValue
from .exercises import Exercise, Worksheet, build_exercise, build_worksheet
from .features import FEATURE_NAMES, extract_features
from .lexicons import Lexicons, load_aux, load_kelly, load_lmi, load_svalex
from .ranking import (
    CriterionConfig,
    SelectionConfig,
    SelectionResult,
    evaluate_all,
    rank,
    select,
)
from .tagset import DEFAULT_TAGSET, TagsetConfig

__version__ = "0.1.0"

__all__ = [
    "AnnotatedSentence", "CATALOG", "CefrModel", "CriterionConfig",
    "CriterionValue", "DEFAULT_TAGSET", "Exercise", "FEATURE_NAMES",
    "Lexicons", "SearchQuery", "SelectionConfig", "SelectionResult",
    "TagsetConfig", "Token", "TrainConfig", "Worksheet", "build_exercise",
    "build_worksheet", "classify", "concordance_search", "default_config",
    "evaluate_all", "extract_features", "load_aux", "load_kelly", "load_lmi",
    "load_svalex", "parse_conllu", "parse_conllu_file", "rank", "select",
    "serialize_conllu", "train", "validate_config",
    "within_distance_accuracy",
]
