"""Corpus acquisition and cleaning for collections of historical letters.

A corpus is described by a tab-separated manifest: one row per letter
with an identifier, sender, addressee, year and the path of the
transcription file.  Transcriptions arrive as plain text with light
editorial markup (angle-bracket tags, square-bracketed notes) which is
stripped before any linguistic processing.
"""

from __future__ import annotations

import csv
import logging
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterator

log = logging.getLogger(__name__)

YEAR_MIN = 1400
YEAR_MAX = 1900

_TAG_RE = re.compile(r"<[^<>]*>")
_HYPHEN_BREAK_RE = re.compile(r"(\w)-[ \t]*\n\s*(\w)")
_WS_RE = re.compile(r"\s+")

_MANIFEST_COLUMNS = (
    "letter_id",
    "sender",
    "addressee",
    "year",
    "year_uncertain",
    "language",
    "file",
)
_TRUE_WORDS = frozenset({"1", "true", "yes", "y"})
_FALSE_WORDS = frozenset({"0", "false", "no", "n", ""})


class ManifestError(ValueError):
    """Raised for unreadable or inconsistent corpus manifests."""


class LetterLoadError(ValueError):
    """Raised when a letter transcription cannot be read."""


@dataclass(frozen=True)
class CleaningConfig:
    """Switches for the transcription cleaning pass.

    ``cut_marker`` names a literal string at which the text is truncated
    before cleaning; manifests use it to drop trailing passages in
    another language.
    """

    strip_markup: bool = True
    drop_bracketed: bool = True
    rejoin_hyphenation: bool = True
    cut_marker: str | None = None


@dataclass(frozen=True)
class LetterMeta:
    letter_id: str
    sender: str
    addressee: str | None
    year: int
    year_uncertain: bool = False
    language: str = "en"

    def __post_init__(self) -> None:
        if not self.letter_id:
            raise ValueError("letter_id must be non-empty")
        if not (YEAR_MIN <= self.year <= YEAR_MAX):
            raise ValueError(
                f"letter {self.letter_id!r}: year {self.year} outside "
                f"plausible range {YEAR_MIN}..{YEAR_MAX}"
            )


@dataclass(frozen=True)
class Letter:
    """A transcription together with its metadata.

    ``clean_text`` is derived from ``raw_text`` by :func:`clean_text`
    under the letter's cleaning configuration.
    """

    meta: LetterMeta
    raw_text: str
    clean_text: str


def _strip_markup(text: str) -> str:
    stripped = _TAG_RE.sub(" ", text)
    if "<" in stripped or ">" in stripped:
        log.warning("unbalanced angle markup left as literal text")
    return stripped


def _drop_bracketed(text: str) -> str:
    # Non-nested [...] spans are editorial notes and are removed whole;
    # nested or unbalanced brackets are reported and kept verbatim.
    out: list[str] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "[":
            j, depth, max_depth = i + 1, 1, 1
            while j < n and depth:
                if text[j] == "[":
                    depth += 1
                    max_depth = max(max_depth, depth)
                elif text[j] == "]":
                    depth -= 1
                j += 1
            if depth:
                log.warning("unbalanced '[' at offset %d left as literal text", i)
                out.append(text[i:])
                break
            if max_depth > 1:
                log.warning("nested brackets at offset %d left untouched", i)
                out.append(text[i:j])
            else:
                out.append(" ")
            i = j
        elif ch == "]":
            log.warning("stray ']' at offset %d left as literal text", i)
            out.append(ch)
            i += 1
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def clean_text(text: str, config: CleaningConfig = CleaningConfig()) -> str:
    """Normalise a raw transcription to plain prose.

    Angle-bracket markup and square-bracketed editorial notes are
    dropped, hyphenation across line breaks is rejoined when configured,
    and whitespace runs collapse to single spaces.  Unbalanced or nested
    markers are kept verbatim and reported as warnings rather than
    guessed at.  The function is idempotent: cleaning cleaned text is a
    no-op.
    """
    if config.cut_marker:
        pos = text.find(config.cut_marker)
        if pos >= 0:
            text = text[:pos]
    if config.rejoin_hyphenation:
        text = _HYPHEN_BREAK_RE.sub(r"\1\2", text)
    if config.strip_markup:
        text = _strip_markup(text)
    if config.drop_bracketed:
        text = _drop_bracketed(text)
    return _WS_RE.sub(" ", text).strip()


def load_letter(
    path: str | Path,
    meta: LetterMeta,
    cleaning: CleaningConfig = CleaningConfig(),
) -> Letter:
    """Read one transcription file and attach cleaned text.

    Missing files and undecodable bytes raise :class:`LetterLoadError`;
    an empty file is only a warning and yields an empty-bodied letter.
    """
    p = Path(path)
    try:
        raw_bytes = p.read_bytes()
    except OSError as exc:
        raise LetterLoadError(f"cannot read letter {meta.letter_id!r}: {exc}") from exc
    try:
        raw = raw_bytes.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise LetterLoadError(
            f"letter {meta.letter_id!r}: {p} is not valid UTF-8 "
            f"(byte offset {exc.start})"
        ) from exc
    cleaned = clean_text(raw, cleaning)
    if not cleaned:
        log.warning("letter %s (%s) is empty after cleaning", meta.letter_id, p)
    return Letter(meta=meta, raw_text=raw, clean_text=cleaned)


@dataclass
class Corpus:
    """An ordered collection of letters with distinct identifiers."""

    letters: list[Letter] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.letters = sorted(
            self.letters, key=lambda l: (l.meta.year, l.meta.letter_id)
        )
        seen: set[str] = set()
        for letter in self.letters:
            if letter.meta.letter_id in seen:
                raise ManifestError(f"duplicate letter id {letter.meta.letter_id!r}")
            seen.add(letter.meta.letter_id)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def ids(self) -> list[str]:
        return [letter.meta.letter_id for letter in self.letters]

    def get(self, letter_id: str) -> Letter:
        for letter in self.letters:
            if letter.meta.letter_id == letter_id:
                return letter
        raise KeyError(letter_id)


def filter_corpus(
    corpus: Corpus, predicate: Callable[[LetterMeta], bool]
) -> Corpus:
    """Subset of the corpus whose metadata satisfies ``predicate``.

    Letter contents are shared, not copied, and the (year, id) ordering
    is preserved.
    """
    return Corpus([letter for letter in corpus if predicate(letter.meta)])


def _parse_bool(value: str, lineno: int, path: Path) -> bool:
    v = value.strip().lower()
    if v in _TRUE_WORDS:
        return True
    if v in _FALSE_WORDS:
        return False
    raise ManifestError(f"{path}:{lineno}: bad boolean {value!r}")


def load_manifest(
    path: str | Path, cleaning: CleaningConfig = CleaningConfig()
) -> Corpus:
    """Load a corpus from a tab-separated manifest.

    Expected columns: letter_id, sender, addressee, year,
    year_uncertain, language, file and optional cut_marker.  "-" stands
    for an absent addressee or cut marker.  Paths are resolved relative
    to the manifest's directory.  An empty manifest is a warning, not an
    error; malformed rows and duplicate identifiers are errors naming
    the offending line.
    """
    p = Path(path)
    if not p.is_file():
        raise ManifestError(f"manifest not found: {p}")
    base = p.parent
    letters: list[Letter] = []
    with p.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh, delimiter="\t")
        fields = reader.fieldnames or []
        missing = [c for c in _MANIFEST_COLUMNS if c not in fields]
        if missing:
            raise ManifestError(f"{p}: manifest misses columns {missing}")
        for lineno, row in enumerate(reader, start=2):
            letter_id = (row.get("letter_id") or "").strip()
            if not letter_id:
                raise ManifestError(f"{p}:{lineno}: empty letter_id")
            try:
                year = int((row.get("year") or "").strip())
            except ValueError:
                raise ManifestError(
                    f"{p}:{lineno}: bad year {row.get('year')!r}"
                ) from None
            addressee = (row.get("addressee") or "").strip()
            try:
                meta = LetterMeta(
                    letter_id=letter_id,
                    sender=(row.get("sender") or "").strip(),
                    addressee=None if addressee in ("", "-") else addressee,
                    year=year,
                    year_uncertain=_parse_bool(
                        row.get("year_uncertain") or "", lineno, p
                    ),
                    language=(row.get("language") or "en").strip() or "en",
                )
            except ValueError as exc:
                raise ManifestError(f"{p}:{lineno}: {exc}") from None
            marker = (row.get("cut_marker") or "").strip()
            cfg = cleaning
            if marker and marker != "-":
                cfg = replace(cleaning, cut_marker=marker)
            rel = (row.get("file") or "").strip()
            if not rel:
                raise ManifestError(f"{p}:{lineno}: empty file column")
            letters.append(load_letter(base / rel, meta, cfg))
    if not letters:
        log.warning("manifest %s lists no letters", p)
    return Corpus(letters)
