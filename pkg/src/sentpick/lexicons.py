"""Graded and auxiliary word lists backing the lexical criteria and features.

All stores load from UTF-8 tab-separated files with a mandatory header row:

  kelly   columns lemma, pos, level, log_freq
  svalex  columns lemma, pos, a1, a2, b1, b2, c1
  lmi     columns head, relation, dep, score  (relation: subj, obj or attr;
          rows under score 50 are dropped at load time)
  aux     a directory of single-purpose lists, each with an `item` column:
          sensitive.tsv (+ `topic`), anaphoric_adverbs.tsv,
          speaking_verbs.tsv, paired_conjunctions.tsv (item holds the two
          words space-separated), sense_counts.tsv (+ `senses`)

Stores are built once and read-only afterwards. Lookups are exact on
(lemma, pos); when the tagged POS misses, a POS-less retry covers tagset
mismatches between corpus and word list (disable with strict=True).
"""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .levels import is_level

log = logging.getLogger(__name__)

LMI_MIN_SCORE = 50.0
LMI_RELATIONS = ("subj", "obj", "attr")


class LexiconError(ValueError):
    """Malformed word-list input."""


@dataclass(frozen=True, slots=True)
class KellyEntry:
    lemma: str
    pos: str
    level: str
    log_freq: float


@dataclass(frozen=True, slots=True)
class SvalexEntry:
    lemma: str
    pos: str
    freq_per_level: dict[str, float]


@dataclass(frozen=True, slots=True)
class LmiEntry:
    head_lemma: str
    relation: str
    dep_lemma: str
    score: float


@dataclass
class AuxLists:
    """Small hand-editable lists: sensitive vocabulary with topic tags,
    anaphoric adverbs, speaking verbs, paired conjunctions and per-lemma
    sense counts."""
    sensitive: dict[str, str] = field(default_factory=dict)  # lemma -> topic
    anaphoric_adverbs: set[str] = field(default_factory=set)
    speaking_verbs: set[str] = field(default_factory=set)
    paired_conjunctions: set[tuple[str, str]] = field(default_factory=set)
    sense_counts: dict[str, int] = field(default_factory=dict)

    def senses(self, lemma: str | None) -> int:
        """Sense count with a neutral default of 1 for unknown lemmas."""
        if lemma is None:
            return 1
        return self.sense_counts.get(lemma, 1)


def _read_tsv(path: str | Path, required: tuple[str, ...]) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f, delimiter="\t")
        if reader.fieldnames is None:
            raise LexiconError(f"{path}: empty file, header row required")
        missing = [c for c in required if c not in reader.fieldnames]
        if missing:
            raise LexiconError(f"{path}: missing required column(s) {missing}")
        return [row for row in reader]


class KellyStore:
    """Web-corpus frequency list with a suggested CEFR level per lemma."""

    def __init__(self, entries: list[KellyEntry]):
        self._by_key: dict[tuple[str, str], KellyEntry] = {}
        self._by_lemma: dict[str, KellyEntry] = {}
        for e in entries:
            key = (e.lemma, e.pos)
            if key in self._by_key:
                log.warning("kelly: duplicate key %s, keeping last", key)
            self._by_key[key] = e
            self._by_lemma[e.lemma] = e

    def __len__(self) -> int:
        return len(self._by_key)

    def entry(self, lemma: str, pos: str | None = None, strict: bool = False) -> KellyEntry | None:
        if pos is not None:
            hit = self._by_key.get((lemma, pos))
            if hit is not None or strict:
                return hit
        return self._by_lemma.get(lemma)

    def level(self, lemma: str, pos: str | None = None, strict: bool = False) -> str | None:
        e = self.entry(lemma, pos, strict)
        return e.level if e else None

    def log_freq(self, lemma: str, pos: str | None = None, strict: bool = False) -> float | None:
        e = self.entry(lemma, pos, strict)
        return e.log_freq if e else None


class SvalexStore:
    """Coursebook frequency list: occurrences per CEFR level A1..C1."""

    def __init__(self, entries: list[SvalexEntry]):
        self._by_key: dict[tuple[str, str], SvalexEntry] = {}
        self._by_lemma: dict[str, SvalexEntry] = {}
        for e in entries:
            key = (e.lemma, e.pos)
            if key in self._by_key:
                log.warning("svalex: duplicate key %s, keeping last", key)
            self._by_key[key] = e
            self._by_lemma[e.lemma] = e

    def __len__(self) -> int:
        return len(self._by_key)

    def entry(self, lemma: str, pos: str | None = None, strict: bool = False) -> SvalexEntry | None:
        if pos is not None:
            hit = self._by_key.get((lemma, pos))
            if hit is not None or strict:
                return hit
        return self._by_lemma.get(lemma)

    def freq(self, lemma: str, pos: str | None, level: str, strict: bool = False) -> float | None:
        e = self.entry(lemma, pos, strict)
        if e is None:
            return None
        return e.freq_per_level.get(level)


class LmiStore:
    """Collocation-strength table keyed by (head lemma, relation, dependent
    lemma); every stored score is >= 50."""

    def __init__(self, entries: list[LmiEntry]):
        self._by_key: dict[tuple[str, str, str], float] = {}
        for e in entries:
            key = (e.head_lemma, e.relation, e.dep_lemma)
            if key in self._by_key:
                log.warning("lmi: duplicate key %s, keeping last", key)
            self._by_key[key] = e.score

    def __len__(self) -> int:
        return len(self._by_key)

    def score(self, head_lemma: str, relation: str, dep_lemma: str) -> float | None:
        return self._by_key.get((head_lemma, relation, dep_lemma))


def load_kelly(path: str | Path) -> KellyStore:
    entries = []
    for row in _read_tsv(path, ("lemma", "pos", "level", "log_freq")):
        level = row["level"].strip()
        if not is_level(level):
            raise LexiconError(f"{path}: bad CEFR level {level!r} for {row['lemma']!r}")
        entries.append(KellyEntry(
            lemma=row["lemma"].strip(),
            pos=row["pos"].strip(),
            level=level,
            log_freq=float(row["log_freq"]),
        ))
    return KellyStore(entries)


def load_svalex(path: str | Path) -> SvalexStore:
    entries = []
    for row in _read_tsv(path, ("lemma", "pos", "a1", "a2", "b1", "b2", "c1")):
        freqs = {}
        for col in ("a1", "a2", "b1", "b2", "c1"):
            value = float(row[col])
            if value < 0:
                raise LexiconError(f"{path}: negative frequency for {row['lemma']!r}")
            freqs[col.upper()] = value
        entries.append(SvalexEntry(lemma=row["lemma"].strip(), pos=row["pos"].strip(),
                                   freq_per_level=freqs))
    return SvalexStore(entries)


def load_lmi(path: str | Path) -> LmiStore:
    entries = []
    dropped = 0
    for row in _read_tsv(path, ("head", "relation", "dep", "score")):
        relation = row["relation"].strip()
        if relation not in LMI_RELATIONS:
            raise LexiconError(f"{path}: unknown relation {relation!r}")
        score = float(row["score"])
        if score < LMI_MIN_SCORE:
            dropped += 1
            continue
        entries.append(LmiEntry(head_lemma=row["head"].strip(), relation=relation,
                                dep_lemma=row["dep"].strip(), score=score))
    if dropped:
        log.warning("lmi: dropped %d row(s) under the score-%s threshold", dropped, LMI_MIN_SCORE)
    return LmiStore(entries)


_AUX_FILES = {
    "sensitive": "sensitive.tsv",
    "anaphoric_adverbs": "anaphoric_adverbs.tsv",
    "speaking_verbs": "speaking_verbs.tsv",
    "paired_conjunctions": "paired_conjunctions.tsv",
    "sense_counts": "sense_counts.tsv",
}


def default_aux_dir() -> Path:
    return Path(__file__).parent / "data"


def load_aux(directory: str | Path | None = None) -> AuxLists:
    """Load the auxiliary lists from `directory`, falling back to the
    packaged defaults for any file missing there."""
    base = Path(directory) if directory is not None else default_aux_dir()
    fallback = default_aux_dir()
    aux = AuxLists()
    for attr, fname in _AUX_FILES.items():
        path = base / fname
        if not path.exists():
            path = fallback / fname
        if attr == "sensitive":
            for row in _read_tsv(path, ("item", "topic")):
                aux.sensitive[row["item"].strip()] = row["topic"].strip()
        elif attr == "paired_conjunctions":
            for row in _read_tsv(path, ("item",)):
                parts = row["item"].split()
                if len(parts) != 2:
                    raise LexiconError(f"{path}: paired conjunction needs two words: {row['item']!r}")
                aux.paired_conjunctions.add((parts[0], parts[1]))
        elif attr == "sense_counts":
            for row in _read_tsv(path, ("item", "senses")):
                senses = int(row["senses"])
                if senses < 1:
                    raise LexiconError(f"{path}: sense count must be >= 1 for {row['item']!r}")
                aux.sense_counts[row["item"].strip()] = senses
        else:
            items = {row["item"].strip() for row in _read_tsv(path, ("item",))}
            setattr(aux, attr, items)
    return aux


@dataclass
class Lexicons:
    """Bundle of every store the criteria and features consume."""
    kelly: KellyStore
    svalex: SvalexStore
    lmi: LmiStore
    aux: AuxLists

    @classmethod
    def empty(cls) -> "Lexicons":
        return cls(kelly=KellyStore([]), svalex=SvalexStore([]), lmi=LmiStore([]),
                   aux=AuxLists())


def load_wordlist(path: str | Path, kind: str):
    """Uniform loader entry point; kind is one of kelly, svalex, lmi, aux
    (aux expects a directory)."""
    loaders = {"kelly": load_kelly, "svalex": load_svalex, "lmi": load_lmi, "aux": load_aux}
    if kind not in loaders:
        raise LexiconError(f"unknown word list kind {kind!r}")
    return loaders[kind](path)
