"""Documents, sentences and tokens, plus the line-oriented corpus format.

Corpus format (UTF-8): one sentence per line, ``## Title`` declares a
section heading placed before the next sentence line, ``# ...`` is a
comment, blank lines are ignored.  A corpus is a directory of ``*.txt``
files; sub-directories are treated as genres.
"""

from __future__ import annotations

import io
import re
from functools import lru_cache
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import porter

__all__ = [
    "Token",
    "Sentence",
    "Document",
    "NormalizationConfig",
    "ParseError",
    "ValidationError",
    "default_config",
    "default_stoplist",
    "load_stoplist",
    "normalize",
    "tokenize",
    "parse_document",
    "format_document",
    "load_document",
    "load_corpus",
]

CORPUS_SUFFIX = ".txt"

_WORD = re.compile(r"[^\W_]+(?:['’][^\W_]+)*")
_POSSESSIVE = re.compile(r"['’]s$")


class ParseError(ValueError):
    """Malformed corpus markup."""

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class ValidationError(ValueError):
    """Well-formed input that does not make a usable document."""


def _read_stoplist(lines):
    words = []
    for line in lines:
        line = line.strip()
        if line and not line.startswith("#"):
            words.append(line)
    return words


def load_stoplist(path):
    """Read a stoplist file: one word per line, ``#`` comments allowed."""
    with open(path, encoding="utf-8") as fh:
        return _read_stoplist(fh)


def default_stoplist():
    text = resources.files("lsmseg").joinpath("data/stoplist_en.txt").read_text("utf-8")
    return _read_stoplist(text.splitlines())


def _normalize_form(surface, stem, case_fold):
    form = surface.lower() if case_fold else surface
    form = _POSSESSIVE.sub("", form)
    form = form.replace("'", "").replace("’", "")
    # Without case folding only all-lowercase forms are stemmed ("Bioko" stays).
    if stem and form.isalpha() and form.islower():
        form = _stem_to_fixpoint(form)
    return form


def _stem_to_fixpoint(form):
    # A single Porter pass is not idempotent ("agreed" -> "agre" -> "agr").
    while True:
        nxt = porter.stem(form)
        if nxt == form:
            return form
        form = nxt


@dataclass(frozen=True)
class NormalizationConfig:
    """How surface words become comparable items.

    ``stoplist`` holds *normalized* forms; build from raw words with
    :meth:`from_words` so entries go through the same pipeline as text.
    """

    stoplist: frozenset = frozenset()
    stem: bool = True
    case_fold: bool = True
    min_token_len: int = 2

    def __post_init__(self):
        if self.min_token_len < 1:
            raise ValueError("min_token_len must be >= 1")
        object.__setattr__(self, "stoplist", frozenset(self.stoplist))

    @classmethod
    def from_words(cls, words=None, *, stem=True, case_fold=True, min_token_len=2):
        if words is None:
            words = default_stoplist()
        stop = frozenset(_normalize_form(w, stem, case_fold) for w in words)
        stop = frozenset(w for w in stop if w)
        return cls(stop, stem, case_fold, min_token_len)

    def metadata(self):
        return {
            "stem": "porter-1980" if self.stem else None,
            "case_fold": self.case_fold,
            "min_token_len": self.min_token_len,
            "stoplist_size": len(self.stoplist),
        }


@lru_cache(maxsize=1)
def default_config():
    return NormalizationConfig.from_words()


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    is_lexical: bool


@dataclass(frozen=True)
class Sentence:
    index: int
    tokens: tuple
    raw: str

    def lexical_items(self):
        return [t.normalized for t in self.tokens if t.is_lexical]


@dataclass(frozen=True)
class Document:
    """A text as a sequence of sentences with author section headings.

    ``headings`` is a tuple of ``(position, title)`` pairs; a heading at
    position ``p`` sits immediately before sentence ``p``.
    """

    id: str
    sentences: tuple
    headings: tuple = ()
    genre: str = "default"
    config: NormalizationConfig = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        n = len(self.sentences)
        if n < 2:
            raise ValidationError(f"document {self.id!r} has {n} sentence(s); need at least 2")
        for i, s in enumerate(self.sentences, 1):
            if s.index != i:
                raise ValidationError(f"sentence indices must run 1..n, got {s.index} at {i}")
        for pos, _ in self.headings:
            if not 1 <= pos <= n:
                raise ValidationError(f"heading position {pos} outside 1..{n}")

    def __len__(self):
        return len(self.sentences)

    @property
    def n(self):
        return len(self.sentences)

    @property
    def heading_positions(self):
        return tuple(sorted({pos for pos, _ in self.headings}))


def normalize(surface, config):
    return _normalize_form(surface, config.stem, config.case_fold)


def tokenize(raw, config=None):
    """Split ``raw`` into word tokens and flag which ones can form links.

    A token is non-lexical when it is numeric, shorter than
    ``config.min_token_len`` or its normalized form is in the stoplist.
    """
    if config is None:
        config = default_config()
    tokens = []
    for match in _WORD.finditer(raw):
        surface = match.group()
        norm = normalize(surface, config)
        lexical = (
            bool(norm)
            and not any(ch.isdigit() for ch in norm)
            and len(norm) >= config.min_token_len
            and norm not in config.stoplist
        )
        tokens.append(Token(surface, norm, lexical))
    return tokens


def _decode_lines(source, name):
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif isinstance(source, str):
        data = source.encode("utf-8")
    else:
        data = source.read()
        if isinstance(data, str):
            data = data.encode("utf-8")
    for lineno, line in enumerate(data.splitlines(), 1):
        try:
            yield lineno, line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"invalid UTF-8 ({exc.reason})", lineno, name) from None


def parse_document(source, doc_id="doc", config=None, genre="default", name=None):
    """Parse one document in the corpus format.

    ``source`` may be bytes, str, or a binary file object.  Heading lines
    are not sentences; they only record a position.
    """
    if config is None:
        config = default_config()
    name = name if name is not None else doc_id
    sentences = []
    headings = []
    pending = []
    for lineno, line in _decode_lines(source, name):
        line = line.lstrip("﻿").rstrip("\r\n")
        text = line.strip()
        if not text:
            continue
        if text.startswith("#"):
            if text == "#" or text.startswith("# "):
                continue
            if text.startswith("## "):
                title = text[3:].strip()
                if not title:
                    raise ParseError("empty section heading", lineno, name)
                pending.append((lineno, title))
                continue
            raise ParseError(f"unrecognised markup {text[:20]!r}", lineno, name)
        index = len(sentences) + 1
        for _, title in pending:
            headings.append((index, title))
        pending = []
        sentences.append(Sentence(index, tuple(tokenize(text, config)), text))
    if pending:
        raise ParseError("section heading not followed by any sentence", pending[0][0], name)
    return Document(doc_id, tuple(sentences), tuple(headings), genre, config)


def format_document(doc):
    """Serialize ``doc`` back to the corpus format."""
    titles = {}
    for pos, title in doc.headings:
        titles.setdefault(pos, []).append(title)
    out = io.StringIO()
    for s in doc.sentences:
        for title in titles.get(s.index, ()):
            out.write(f"## {title}\n")
        out.write(s.raw.replace("\n", " ") + "\n")
    return out.getvalue()


def load_document(path, config=None, genre="default"):
    path = Path(path)
    with open(path, "rb") as fh:
        return parse_document(fh, path.stem, config, genre, name=str(path))


def load_corpus(root, config=None, skip_invalid=False, warn=None):
    """Load every ``*.txt`` under ``root``.

    Files directly in ``root`` get genre ``"default"``; files in a
    sub-directory take that directory's name as genre.  Invalid documents
    raise unless ``skip_invalid`` is set, in which case ``warn`` (if
    given) is called with a message and the file is skipped.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {root}")
    docs = []
    seen = {}
    for path in sorted(root.rglob("*" + CORPUS_SUFFIX)):
        rel = path.relative_to(root)
        genre = rel.parts[0] if len(rel.parts) > 1 else "default"
        try:
            doc = load_document(path, config, genre)
        except ValidationError as exc:
            if not skip_invalid:
                raise ValidationError(f"{path}: {exc}") from None
            if warn is not None:
                warn(f"skipping {path}: {exc}")
            continue
        if doc.id in seen:
            raise ValidationError(f"duplicate document id {doc.id!r}: {seen[doc.id]} and {path}")
        seen[doc.id] = path
        docs.append(doc)
    return docs
