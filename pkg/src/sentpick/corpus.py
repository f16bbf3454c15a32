"""Annotated-sentence domain types, CoNLL-U ingestion and concordance search.

Sentences arrive fully annotated (lemma, POS, morphology, dependency arcs);
this module never tokenizes or parses raw text. The 10-column CoNLL-U layout
is the interchange format: column 4 is read as the coarse POS tag and column
6 as the morphosyntactic description. Multiword-token ranges ("1-2") and
enhanced-graph nodes ("1.1") are skipped.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .levels import CLASSIFIER_LEVELS


class CorpusError(ValueError):
    """Malformed corpus input."""


@dataclass(frozen=True, slots=True)
class Token:
    """One annotated token. `head` is 0 for the dependency root, otherwise
    the 1-based index of the governing token. `lemma` is None when the
    lemmatizer produced no dictionary form."""
    index: int
    form: str
    lemma: str | None
    pos: str
    msd: str
    deprel: str
    head: int

    def __post_init__(self):
        if self.index < 1:
            raise CorpusError(f"token index must be >= 1, got {self.index}")
        if self.head < 0:
            raise CorpusError(f"token head must be >= 0, got {self.head}")
        if self.head == self.index:
            raise CorpusError(f"token {self.index} cannot head itself")


@dataclass(frozen=True, slots=True)
class AnnotatedSentence:
    """A corpus sentence with its annotation layers.

    `match_spans` holds 1-based inclusive (start, end) token ranges matching
    the active search term; empty until a concordance search populates it.
    """
    id: str
    tokens: tuple[Token, ...]
    source: str = ""
    match_spans: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if not self.tokens:
            raise CorpusError(f"sentence {self.id!r} has no tokens")
        roots = 0
        for i, tok in enumerate(self.tokens, start=1):
            if tok.index != i:
                raise CorpusError(
                    f"sentence {self.id!r}: token indices not contiguous at {tok.index}"
                )
            if tok.head == 0:
                roots += 1
        # zero roots is representable (the dependency-root criterion detects it)
        if roots > 1:
            raise CorpusError(f"sentence {self.id!r}: multiple dependency roots")

    @property
    def text(self) -> str:
        return " ".join(t.form for t in self.tokens)

    def token_at(self, index: int) -> Token:
        return self.tokens[index - 1]


MATCH_KINDS = ("wordform", "lemma", "pos_pattern")


@dataclass(frozen=True, slots=True)
class SearchQuery:
    """Concordance query: an inflected form, a lemma, or a space-separated
    POS tag sequence, with the learner level the results should suit."""
    term: str
    match_kind: str = "lemma"
    pos: str | None = None
    target_level: str = "B1"
    max_candidates: int = 300

    def __post_init__(self):
        if not self.term:
            raise CorpusError("search term must be non-empty")
        if self.match_kind not in MATCH_KINDS:
            raise CorpusError(f"match_kind must be one of {MATCH_KINDS}")
        if self.target_level not in CLASSIFIER_LEVELS:
            raise CorpusError(f"target level must be one of {CLASSIFIER_LEVELS}")
        if self.max_candidates < 1:
            raise CorpusError("max_candidates must be >= 1")


_RANGE_ID = re.compile(r"^\d+-\d+$")
_EMPTY_ID = re.compile(r"^\d+\.\d+$")


def parse_conllu(data: bytes | str, source: str = "<input>") -> list[AnnotatedSentence]:
    """Parse CoNLL-U text into sentences.

    Sentence ids come from `# sent_id =` comments when present, otherwise
    `<source>:<ordinal>` is synthesized. `_` in the lemma column maps to
    None. CRLF input is tolerated.
    """
    if isinstance(data, bytes):
        text = data.decode("utf-8")
    else:
        text = data

    sentences: list[AnnotatedSentence] = []
    tokens: list[Token] = []
    sent_id: str | None = None
    ordinal = 0

    def flush(line_no: int):
        nonlocal tokens, sent_id, ordinal
        if not tokens:
            sent_id = None
            return
        ordinal += 1
        sid = sent_id if sent_id else f"{source}:{ordinal}"
        try:
            sentences.append(AnnotatedSentence(id=sid, tokens=tuple(tokens), source=source))
        except CorpusError as exc:
            raise CorpusError(f"line {line_no}: {exc}") from None
        tokens = []
        sent_id = None

    lines = text.split("\n")
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            flush(line_no)
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("sent_id") and "=" in body:
                sent_id = body.split("=", 1)[1].strip()
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise CorpusError(f"line {line_no}: expected 10 columns, got {len(cols)}")
        if _RANGE_ID.match(cols[0]) or _EMPTY_ID.match(cols[0]):
            continue
        try:
            index = int(cols[0])
        except ValueError:
            raise CorpusError(f"line {line_no}: non-integer token id {cols[0]!r}") from None
        try:
            head = int(cols[6])
        except ValueError:
            raise CorpusError(f"line {line_no}: non-integer head {cols[6]!r}") from None
        try:
            tokens.append(Token(
                index=index,
                form=cols[1],
                lemma=None if cols[2] == "_" else cols[2],
                pos=cols[3],
                msd=cols[5],
                deprel=cols[7],
                head=head,
            ))
        except CorpusError as exc:
            raise CorpusError(f"line {line_no}: {exc}") from None
    flush(len(lines))
    return sentences


def parse_conllu_file(path: str) -> list[AnnotatedSentence]:
    with open(path, "rb") as f:
        return parse_conllu(f.read(), source=str(path))


def fetch_corpus(source: str, timeout: float = 30.0) -> list[AnnotatedSentence]:
    """Pluggable corpus backend: a local file path, or an http(s) URL whose
    GET response is the same CoNLL-U payload."""
    if source.startswith(("http://", "https://")):
        import urllib.request

        with urllib.request.urlopen(source, timeout=timeout) as resp:
            return parse_conllu(resp.read(), source=source)
    return parse_conllu_file(source)


def serialize_conllu(sentences: list[AnnotatedSentence]) -> str:
    """Render sentences back to CoNLL-U. Columns we do not model (XPOS,
    DEPS, MISC) are written as `_`; round-trips preserve form, lemma, pos,
    msd, deprel and head."""
    blocks = []
    for sent in sentences:
        lines = [f"# sent_id = {sent.id}"]
        for t in sent.tokens:
            lines.append("\t".join([
                str(t.index), t.form, t.lemma if t.lemma is not None else "_",
                t.pos, "_", t.msd, str(t.head), t.deprel, "_", "_",
            ]))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def _match_spans(sent: AnnotatedSentence, query: SearchQuery) -> list[tuple[int, int]]:
    spans: list[tuple[int, int]] = []
    if query.match_kind == "pos_pattern":
        pattern = query.term.split()
        n = len(pattern)
        tags = [t.pos for t in sent.tokens]
        i = 0
        # non-overlapping, left-to-right
        while i + n <= len(tags):
            if tags[i:i + n] == pattern:
                spans.append((i + 1, i + n))
                i += n
            else:
                i += 1
        return spans
    term = query.term.casefold() if query.match_kind == "wordform" else query.term
    for t in sent.tokens:
        if query.pos is not None and t.pos != query.pos:
            continue
        if query.match_kind == "wordform":
            hit = t.form.casefold() == term
        else:
            hit = t.lemma == term
        if hit:
            spans.append((t.index, t.index))
    return spans


def concordance_search(
    corpus: list[AnnotatedSentence], query: SearchQuery
) -> list[AnnotatedSentence]:
    """Return, in corpus order, the sentences containing the search term,
    with match_spans filled in; at most query.max_candidates results."""
    out: list[AnnotatedSentence] = []
    for sent in corpus:
        spans = _match_spans(sent, query)
        if spans:
            out.append(replace(sent, match_spans=tuple(spans)))
            if len(out) >= query.max_candidates:
                break
    return out
