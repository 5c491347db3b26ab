"""Dialog corpus ingestion and the text normalization shared by every metric.

Two on-disk formats are understood:

* ``jsonl``: one object per line, ``{"id": "...", "turns": [{"speaker": "...", "text": "..."}]}``
* ``transcript``: a ``=== <id>`` header opens each dialog, followed by
  ``SPEAKER: text`` lines.  Blank lines are ignored.
"""

from __future__ import annotations

import io
import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

FORMATS = ("jsonl", "transcript")

_TOKEN_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*")
_HEADER = "==="


class CorpusError(ValueError):
    """Base class for malformed or invalid corpus input."""


class ParseError(CorpusError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ValidationError(CorpusError):
    pass


@dataclass(frozen=True)
class Turn:
    speaker: str
    text: str
    index: int

    def __post_init__(self):
        if not self.text.strip():
            raise ValidationError(f"turn {self.index}: empty text")
        if self.index < 0:
            raise ValidationError(f"turn index must be >= 0, got {self.index}")


@dataclass(frozen=True)
class Dialog:
    id: str
    turns: tuple[Turn, ...]

    def __post_init__(self):
        if not self.turns:
            raise ValidationError(f"dialog {self.id!r} has no turns")
        for pos, turn in enumerate(self.turns):
            if turn.index != pos:
                raise ValidationError(
                    f"dialog {self.id!r}: turn at position {pos} has index {turn.index}"
                )

    @classmethod
    def from_pairs(cls, dialog_id: str, pairs: Iterable[tuple[str, str]]) -> Dialog:
        """Build a dialog from ``(speaker, text)`` pairs, numbering turns in order."""
        turns = tuple(Turn(speaker, text, i) for i, (speaker, text) in enumerate(pairs))
        return cls(dialog_id, turns)

    def __len__(self) -> int:
        return len(self.turns)

    @property
    def text(self) -> str:
        """The dialog flattened to free text, one utterance per line."""
        return "\n".join(t.text for t in self.turns)


@dataclass(frozen=True)
class Corpus:
    dialogs: tuple[Dialog, ...]

    def __post_init__(self):
        seen = set()
        for d in self.dialogs:
            if d.id in seen:
                raise ValidationError(f"duplicate dialog id {d.id!r}")
            seen.add(d.id)

    def __len__(self) -> int:
        return len(self.dialogs)

    def __iter__(self) -> Iterator[Dialog]:
        return iter(self.dialogs)

    def __getitem__(self, i: int) -> Dialog:
        return self.dialogs[i]

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(d.id for d in self.dialogs)

    def index(self, dialog_id: str) -> int:
        for i, d in enumerate(self.dialogs):
            if d.id == dialog_id:
                return i
        raise KeyError(f"unknown dialog id {dialog_id!r}")

    def get(self, dialog_id: str) -> Dialog:
        return self.dialogs[self.index(dialog_id)]


# ---------------------------------------------------------------------------
# parsing / serialization
# ---------------------------------------------------------------------------


def _lines(data: bytes | str | IO) -> Iterator[tuple[int, str]]:
    if isinstance(data, (bytes, bytearray)):
        text = bytes(data).decode("utf-8")
    elif isinstance(data, str):
        text = data
    else:
        raw = data.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    for lineno, line in enumerate(io.StringIO(text), start=1):
        yield lineno, line.rstrip("\r\n")


def _parse_jsonl(data) -> list[Dialog]:
    dialogs = []
    for lineno, line in _lines(data):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON ({e.msg})", lineno) from None
        if not isinstance(obj, dict) or "id" not in obj or "turns" not in obj:
            raise ParseError("expected an object with 'id' and 'turns'", lineno)
        if not isinstance(obj["id"], (str, int)) or isinstance(obj["id"], bool):
            raise ParseError("'id' must be a string", lineno)
        if not isinstance(obj["turns"], list):
            raise ParseError("'turns' must be a list", lineno)
        pairs = []
        for t in obj["turns"]:
            if not isinstance(t, dict) or not isinstance(t.get("text"), str):
                raise ParseError("each turn needs a string 'text'", lineno)
            speaker = t.get("speaker", "")
            if not isinstance(speaker, str):
                raise ParseError("'speaker' must be a string", lineno)
            pairs.append((speaker, t["text"]))
        try:
            dialogs.append(Dialog.from_pairs(str(obj["id"]), pairs))
        except ValidationError as e:
            raise ValidationError(f"line {lineno}: {e}") from None
    return dialogs


def _parse_transcript(data) -> list[Dialog]:
    dialogs = []
    current_id: str | None = None
    header_line = 0
    pairs: list[tuple[str, str]] = []

    def close():
        if current_id is None:
            return
        try:
            dialogs.append(Dialog.from_pairs(current_id, pairs))
        except ValidationError as e:
            raise ValidationError(f"line {header_line}: {e}") from None

    for lineno, line in _lines(data):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith(_HEADER):
            close()
            current_id = stripped[len(_HEADER):].strip()
            if not current_id:
                raise ParseError("dialog header without an id", lineno)
            header_line = lineno
            pairs = []
            continue
        if current_id is None:
            raise ParseError("turn line before the first '=== <id>' header", lineno)
        speaker, sep, text = stripped.partition(":")
        speaker = speaker.strip()
        if not sep or not speaker:
            raise ParseError("expected 'SPEAKER: text'", lineno)
        text = text.strip()
        if not text:
            raise ParseError("turn has empty text", lineno)
        pairs.append((speaker, text))
    close()
    return dialogs


def parse_corpus(data: bytes | str | IO, format: str = "jsonl") -> Corpus:
    """Parse a corpus from bytes, text or a file object.

    Raises ParseError (with the offending line number) on malformed lines and
    ValidationError for duplicate ids or dialogs without turns.
    """
    if format == "jsonl":
        dialogs = _parse_jsonl(data)
    elif format == "transcript":
        dialogs = _parse_transcript(data)
    else:
        raise ValueError(f"unknown corpus format {format!r}; expected one of {FORMATS}")
    if not dialogs:
        raise ValidationError("empty corpus")
    return Corpus(tuple(dialogs))


def load_corpus(path: str | Path, format: str | None = None) -> Corpus:
    path = Path(path)
    if format is None:
        format = "jsonl" if path.suffix in (".jsonl", ".json") else "transcript"
    return parse_corpus(path.read_bytes(), format)


def serialize_corpus(corpus: Corpus, format: str = "jsonl") -> str:
    out = []
    if format == "jsonl":
        for d in corpus:
            obj = {"id": d.id, "turns": [{"speaker": t.speaker, "text": t.text} for t in d.turns]}
            out.append(json.dumps(obj, ensure_ascii=False) + "\n")
    elif format == "transcript":
        for d in corpus:
            out.append(f"{_HEADER} {d.id}\n")
            out.extend(f"{t.speaker}: {t.text}\n" for t in d.turns)
    else:
        raise ValueError(f"unknown corpus format {format!r}; expected one of {FORMATS}")
    return "".join(out)


# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------


def tokenize(text: str) -> list[str]:
    """Lowercase and split on anything that is not a letter, digit or internal apostrophe.

    >>> tokenize("You can't find them.")
    ['you', "can't", 'find', 'them']
    """
    return _TOKEN_RE.findall(text.lower().replace("’", "'"))


def read_stopwords(lines: Iterable[str]) -> frozenset[str]:
    terms = set()
    for line in lines:
        term = line.strip().lower()
        if term and not term.startswith("#"):
            terms.add(term)
    return frozenset(terms)


@lru_cache(maxsize=None)
def default_stopwords() -> frozenset[str]:
    text = resources.files("dialogsim").joinpath("stopwords.txt").read_text("utf-8")
    return read_stopwords(text.splitlines())


def load_stopwords(path: str | Path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return read_stopwords(fh)


def remove_stopwords(tokens: Sequence[str], stoplist: frozenset[str] | None = None) -> list[str]:
    if stoplist is None:
        stoplist = default_stopwords()
    return [t for t in tokens if t not in stoplist]


def content_terms(text: str, stoplist: frozenset[str] | None = None) -> list[str]:
    """Tokens of ``text`` with stopwords removed."""
    return remove_stopwords(tokenize(text), stoplist)


def word_count(turn: Turn | str) -> int:
    # Whitespace split of the raw text; punctuation stays attached to its word.
    text = turn.text if isinstance(turn, Turn) else turn
    return len(text.split())
