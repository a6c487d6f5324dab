"""Linguistic annotation for early modern English prose.

The pipeline takes cleaned letter text through sentence splitting,
tokenisation, spelling normalisation (u/v and i/j conventions, a
lexicon of period variants), rule-based part-of-speech tagging and
suffix-stripping lemmatisation.  Annotated documents can be written to
and re-read from a simple one-token-per-line vertical format so that a
better external tagger can be substituted without touching the rest of
the toolchain.
"""

from __future__ import annotations

import enum
import logging
import os
import re
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Iterator, Protocol

log = logging.getLogger(__name__)


class PosClass(enum.Enum):
    """Coarse word classes used throughout the toolkit."""

    NOUN = "NOUN"
    VERB = "VERB"
    ADJ = "ADJ"
    ADV = "ADV"
    PRON = "PRON"
    MODAL = "MODAL"
    DET = "DET"
    PREP = "PREP"
    CONJ = "CONJ"
    NUM = "NUM"
    PUNCT = "PUNCT"
    OTHER = "OTHER"


MODAL_LEMMAS = frozenset(
    {"must", "can", "may", "shall", "will", "might", "could", "should", "would", "ought"}
)

_VOWELS = "aeiou"
_TERMINATORS = ".!?"
_CLOSERS = "'’\"”)"

_TOKEN_RE = re.compile(r"[A-Za-z]+(?:['’][A-Za-z]+)*|\d+|\.{2,}|[^\sA-Za-z0-9]")
_WORD_BEFORE_RE = re.compile(r"[A-Za-z]+$")


class LexiconFormatError(ValueError):
    """Raised for malformed lexicon resource files."""


class VerticalFormatError(ValueError):
    """Raised for malformed vertical (one token per line) files."""


@dataclass(frozen=True)
class Token:
    """One annotated token.

    ``surface`` is the form as transcribed, ``normalized`` the
    modernised spelling, ``lemma`` the dictionary head word.  Indices
    locate the token: ``sent_idx`` within the document, ``tok_idx``
    within its sentence.
    """

    surface: str
    normalized: str
    lemma: str
    pos: PosClass
    sent_idx: int
    tok_idx: int


@dataclass(frozen=True)
class AnnotatedDoc:
    """All sentences of one letter, fully annotated."""

    letter_id: str
    sentences: tuple[tuple[Token, ...], ...]

    def tokens(self) -> Iterator[Token]:
        for sentence in self.sentences:
            yield from sentence

    def __len__(self) -> int:
        return sum(len(s) for s in self.sentences)


# ---------------------------------------------------------------------------
# sentence splitting


@dataclass(frozen=True)
class SplitConfig:
    """Sentence boundary options.

    ``colon_boundary`` additionally breaks sentences at colons, which
    helps on period texts that chain clauses with ":" where a modern
    writer would end the sentence.  ``abbreviations`` lists lower-cased
    words (without the trailing dot) whose following "." never ends a
    sentence.
    """

    colon_boundary: bool = False
    abbreviations: frozenset[str] = frozenset()


def _is_abbreviation(text: str, dot_pos: int, config: SplitConfig) -> bool:
    match = _WORD_BEFORE_RE.search(text, 0, dot_pos)
    return bool(match) and match.group(0).lower() in config.abbreviations


def split_sentences(text: str, config: SplitConfig = SplitConfig()) -> list[str]:
    """Split cleaned text into sentences.

    Boundaries fall after ".", "!" and "?" (plus ":" when configured)
    followed by whitespace or end of text; runs like "..." or "?!" count
    once, and closing quotes attach to the sentence they end.  Text
    without a final terminator still yields its last sentence.  The
    pieces cover every non-whitespace character of the input in order.
    """
    terminators = _TERMINATORS + (":" if config.colon_boundary else "")
    sentences: list[str] = []
    start = 0
    i, n = 0, len(text)
    while i < n:
        if text[i] in terminators:
            j = i + 1
            while j < n and text[j] in terminators:
                j += 1
            while j < n and text[j] in _CLOSERS:
                j += 1
            if text[i] == "." and j == i + 1 and _is_abbreviation(text, i, config):
                i += 1
                continue
            if j >= n or text[j].isspace():
                piece = text[start:j].strip()
                if piece:
                    sentences.append(piece)
                start = j
                i = j
                continue
        i += 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def tokenize(sentence: str) -> list[str]:
    """Break a sentence into word, number and punctuation tokens.

    Word-internal apostrophes stay attached, runs of dots form a single
    token, and every other punctuation character stands alone.  Every
    non-whitespace character of the input ends up in exactly one token.
    """
    return _TOKEN_RE.findall(sentence)


# ---------------------------------------------------------------------------
# variant lexicon


@dataclass(frozen=True)
class VariantEntry:
    normalized: str
    pos: PosClass | None
    lemma: str | None


class VariantLexicon:
    """Maps historical spellings to modern forms.

    Each entry gives the normalised spelling and may force a word class
    and lemma; where those are left open ("-") the tagger and
    lemmatiser decide.  Keys are case-folded, so "Tutour" and "tutour"
    hit the same entry.
    """

    def __init__(self, entries: dict[str, VariantEntry] | None = None) -> None:
        self._entries = {
            key.casefold(): entry for key, entry in (entries or {}).items()
        }

    def lookup(self, surface: str) -> VariantEntry | None:
        return self._entries.get(surface.casefold())

    def __contains__(self, surface: str) -> bool:
        return surface.casefold() in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    @classmethod
    def from_file(cls, path: str | Path) -> "VariantLexicon":
        """Read a four-column file: historical, normalized, pos, lemma.

        "-" leaves pos or lemma open; "#" starts a comment line.
        """
        entries: dict[str, VariantEntry] = {}
        p = Path(path)
        try:
            lines = p.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise LexiconFormatError(f"cannot read lexicon {p}: {exc}") from exc
        for lineno, line in enumerate(lines, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise LexiconFormatError(
                    f"{p}:{lineno}: expected 4 tab-separated fields, got {len(parts)}"
                )
            historical, normalized, pos_label, lemma = (x.strip() for x in parts)
            if not historical or not normalized:
                raise LexiconFormatError(f"{p}:{lineno}: empty form")
            pos: PosClass | None = None
            if pos_label != "-":
                try:
                    pos = PosClass[pos_label]
                except KeyError:
                    raise LexiconFormatError(
                        f"{p}:{lineno}: unknown word class {pos_label!r}"
                    ) from None
            entries[historical] = VariantEntry(
                normalized=normalized.lower(),
                pos=pos,
                lemma=None if lemma == "-" else lemma.lower(),
            )
        return cls(entries)


# ---------------------------------------------------------------------------
# spelling modernisation (u/v, i/j)


def _swap_variants(word: str) -> list[str]:
    out: list[str] = []
    if word[:1] == "v":
        out.append("u" + word[1:])
    elif word[:1] == "u":
        out.append("v" + word[1:])
    if word[:1] == "i" and word[1:2] in _VOWELS:
        out.append("j" + word[1:])
    elif word[:1] == "j":
        out.append("i" + word[1:])
    for i in range(1, len(word)):
        ch = word[i]
        nxt = word[i + 1 : i + 2]
        if ch == "u" and nxt and nxt in _VOWELS + "y":
            out.append(word[:i] + "v" + word[i + 1 :])
        elif ch == "v":
            out.append(word[:i] + "u" + word[i + 1 :])
        elif ch == "i" and nxt and nxt in _VOWELS:
            out.append(word[:i] + "j" + word[i + 1 :])
        elif ch == "j":
            out.append(word[:i] + "i" + word[i + 1 :])
    return out


def modernize_spelling(word: str, known: Callable[[str], bool]) -> str:
    """Undo the u/v and i/j printing conventions of the period.

    Candidate respellings (vse - use, moue - move, ioy - joy) are only
    accepted when ``known`` validates them against a modern word list;
    up to two swaps are tried.  As a last resort an initial "v" before a
    consonant becomes "u", which is safe for this period even off-list.
    """
    if len(word) < 2 or known(word):
        return word
    seen = {word}
    frontier = [word]
    for _ in range(2):
        nxt: list[str] = []
        for form in frontier:
            for cand in _swap_variants(form):
                if cand in seen:
                    continue
                seen.add(cand)
                if known(cand):
                    return cand
                nxt.append(cand)
        frontier = nxt
    if word[0] == "v" and word[1] not in _VOWELS:
        return "u" + word[1:]
    return word


# ---------------------------------------------------------------------------
# tagging


class TaggerInterface(Protocol):
    """Anything that can assign a word class to a normalised token."""

    def tag(self, normalized: str, surface: str = "") -> PosClass:
        ...


class RuleTagger:
    """Dictionary-first tagger with suffix fallbacks.

    Looks the normalised form up in a word-to-class lexicon; unknown
    words get a class from suffix heuristics, capitalised unknowns count
    as proper nouns, and anything left defaults to NOUN.
    """

    _SUFFIX_RULES = (
        (("ly",), 4, PosClass.ADV),
        (("ing", "ed"), 5, PosClass.VERB),
        (
            ("tion", "sion", "ment", "ness", "ity", "ship", "hood", "ancy", "ency", "cy", "dom", "ance", "ence"),
            5,
            PosClass.NOUN,
        ),
        (("ous", "ful", "ive", "able", "ible", "ish", "less", "al", "ic"), 5, PosClass.ADJ),
    )

    def __init__(self, lexicon: dict[str, PosClass]) -> None:
        self.lexicon = {word.casefold(): pos for word, pos in lexicon.items()}

    def known(self, word: str) -> bool:
        return word.casefold() in self.lexicon

    def known_as(self, word: str, pos: PosClass) -> bool:
        return self.lexicon.get(word.casefold()) is pos

    def tag(self, normalized: str, surface: str = "") -> PosClass:
        word = normalized.casefold()
        hit = self.lexicon.get(word)
        if hit is not None:
            return hit
        if word.isdigit():
            return PosClass.NUM
        for suffixes, min_len, pos in self._SUFFIX_RULES:
            if len(word) >= min_len and word.endswith(suffixes):
                return pos
        if surface[:1].isupper():
            return PosClass.NOUN
        return PosClass.NOUN

    @classmethod
    def from_file(cls, path: str | Path) -> "RuleTagger":
        """Read a two-column word class list (word, class)."""
        lexicon: dict[str, PosClass] = {}
        p = Path(path)
        try:
            lines = p.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise LexiconFormatError(f"cannot read word list {p}: {exc}") from exc
        for lineno, line in enumerate(lines, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split("\t")
            if len(parts) != 2:
                raise LexiconFormatError(
                    f"{p}:{lineno}: expected 2 tab-separated fields, got {len(parts)}"
                )
            word, label = parts[0].strip(), parts[1].strip()
            try:
                lexicon[word] = PosClass[label]
            except KeyError:
                raise LexiconFormatError(
                    f"{p}:{lineno}: unknown word class {label!r}"
                ) from None
        return cls(lexicon)


# ---------------------------------------------------------------------------
# lemmatisation


class Lemmatizer:
    """Suffix-stripping lemmatiser with an exception list.

    Exceptions (irregular verbs, mutated plurals) are consulted first;
    regular inflection is then undone by class-conditioned rules.  Stem
    restoration ("moved" - "move", "fitted" - "fit") consults a known
    word check so the right variant is picked; without a hit a
    deterministic heuristic applies.  Only NOUN and VERB forms carry
    rules, every other class maps to itself.  Lemmatising a lemma is a
    no-op.
    """

    def __init__(
        self,
        exceptions: dict[tuple[str, PosClass | None], str] | None = None,
        known_as: Callable[[str, PosClass], bool] | None = None,
    ) -> None:
        self.exceptions = dict(exceptions or {})
        self._known_as = known_as or (lambda word, pos: False)

    def _restore(self, stem: str, pos: PosClass) -> str:
        if self._known_as(stem, pos):
            return stem
        if self._known_as(stem + "e", pos):
            return stem + "e"
        if len(stem) > 2 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS + "ls":
            return stem[:-1]
        return stem

    def _strip_or_keep(self, word: str, stem: str, pos: PosClass) -> str:
        """Restore a stripped stem, but keep words that already are lemmas.

        "bring" must stay "bring": its restored stem "br" is nonsense,
        and the full form is a known verb, so stripping loses.
        """
        candidate = self._restore(stem, pos)
        if self._known_as(candidate, pos):
            return candidate
        if self._known_as(word, pos):
            return word
        return candidate

    def _verb(self, w: str) -> str:
        pos = PosClass.VERB
        if len(w) > 4 and w.endswith("ies"):
            return w[:-3] + "y"
        if len(w) > 4 and w.endswith("ied"):
            return w[:-3] + "y"
        if len(w) > 4 and w.endswith("ing"):
            return self._strip_or_keep(w, w[:-3], pos)
        if len(w) > 4 and w.endswith("ed"):
            return self._strip_or_keep(w, w[:-2], pos)
        if len(w) > 3 and w.endswith("es"):
            if self._known_as(w[:-1], pos):
                return w[:-1]
            if w[-4:-2] in ("ch", "sh") or w[-3] in "sxzo":
                return w[:-2]
        if len(w) > 3 and w.endswith("s") and not w.endswith(("ss", "us", "is")):
            return w[:-1]
        return w

    def _noun(self, w: str) -> str:
        pos = PosClass.NOUN
        if len(w) > 4 and w.endswith("ies"):
            return w[:-3] + "y"
        if len(w) > 3 and w.endswith("es"):
            if self._known_as(w[:-1], pos):
                return w[:-1]
            if w[-4:-2] in ("ch", "sh") or w[-3] in "sxz":
                return w[:-2]
        if len(w) > 3 and w.endswith("s") and not w.endswith(("ss", "us", "is")):
            return w[:-1]
        return w

    def lemmatize(self, normalized: str, pos: PosClass) -> str:
        word = normalized.casefold()
        hit = self.exceptions.get((word, pos))
        if hit is None:
            hit = self.exceptions.get((word, None))
        if hit is not None:
            return hit
        if pos is PosClass.VERB:
            return self._verb(word)
        if pos is PosClass.NOUN:
            return self._noun(word)
        return word

    @classmethod
    def from_file(
        cls,
        path: str | Path,
        known_as: Callable[[str, PosClass], bool] | None = None,
    ) -> "Lemmatizer":
        """Read a three-column exception list (form, class-or-"-", lemma)."""
        exceptions: dict[tuple[str, PosClass | None], str] = {}
        p = Path(path)
        try:
            lines = p.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise LexiconFormatError(f"cannot read exceptions {p}: {exc}") from exc
        for lineno, line in enumerate(lines, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split("\t")
            if len(parts) != 3:
                raise LexiconFormatError(
                    f"{p}:{lineno}: expected 3 tab-separated fields, got {len(parts)}"
                )
            form, label, lemma = (x.strip() for x in parts)
            pos: PosClass | None = None
            if label != "-":
                try:
                    pos = PosClass[label]
                except KeyError:
                    raise LexiconFormatError(
                        f"{p}:{lineno}: unknown word class {label!r}"
                    ) from None
            exceptions[(form.casefold(), pos)] = lemma.casefold()
        return cls(exceptions, known_as)


# ---------------------------------------------------------------------------
# token annotation


def normalize_and_tag(
    surfaces: Iterable[str],
    lexicon: VariantLexicon,
    tagger: TaggerInterface,
    lemmatizer: Lemmatizer,
    sent_idx: int = 0,
) -> list[Token]:
    """Annotate one sentence's surface tokens.

    The variant lexicon wins where it has an entry (and may force class
    and lemma); everything else goes through spelling modernisation,
    the tagger and the lemmatiser.  Punctuation, numbers and "&" are
    classed directly.  A tagger failure downgrades the token to OTHER
    with a warning instead of aborting the sentence.
    """
    known = getattr(tagger, "known", None)
    known_word = known if callable(known) else (lambda word: False)
    tokens: list[Token] = []
    for idx, surface in enumerate(surfaces):
        if surface == "&":
            tokens.append(Token(surface, "&", "&", PosClass.CONJ, sent_idx, idx))
            continue
        if surface.isdigit():
            tokens.append(Token(surface, surface, surface, PosClass.NUM, sent_idx, idx))
            continue
        if not any(ch.isalpha() for ch in surface):
            tokens.append(
                Token(surface, surface, surface, PosClass.PUNCT, sent_idx, idx)
            )
            continue
        key = surface.casefold()
        entry = lexicon.lookup(key)
        if entry is not None:
            normalized = entry.normalized
            pos = entry.pos
            lemma = entry.lemma
        else:
            normalized = modernize_spelling(key, known_word)
            pos = None
            lemma = None
        if pos is None:
            try:
                pos = tagger.tag(normalized, surface)
            except Exception:
                log.warning(
                    "tagger failed on %r (sentence %d, token %d); classing as OTHER",
                    surface,
                    sent_idx,
                    idx,
                )
                pos = PosClass.OTHER
            if pos is None:
                pos = PosClass.OTHER
        if lemma is None:
            lemma = lemmatizer.lemmatize(normalized, pos)
        tokens.append(Token(surface, normalized, lemma, pos, sent_idx, idx))
    return tokens


@dataclass
class Annotator:
    """Bundles the pipeline components for convenient whole-letter runs."""

    lexicon: VariantLexicon
    tagger: TaggerInterface
    lemmatizer: Lemmatizer
    split: SplitConfig = SplitConfig()

    def annotate_text(self, letter_id: str, text: str) -> AnnotatedDoc:
        sentences = []
        for sent_idx, sentence in enumerate(split_sentences(text, self.split)):
            surfaces = tokenize(sentence)
            sentences.append(
                tuple(
                    normalize_and_tag(
                        surfaces, self.lexicon, self.tagger, self.lemmatizer, sent_idx
                    )
                )
            )
        return AnnotatedDoc(letter_id=letter_id, sentences=tuple(sentences))

    def annotate(self, letter) -> AnnotatedDoc:
        return self.annotate_text(letter.meta.letter_id, letter.clean_text)


# ---------------------------------------------------------------------------
# bundled resources


def data_path(name: str) -> Path:
    """Path of a bundled resource file."""
    return Path(resources.files("letternet.data") / name)


def load_default_abbreviations() -> frozenset[str]:
    path = data_path("abbreviations.txt")
    words = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        stripped = line.strip().rstrip(".")
        if stripped and not stripped.startswith("#"):
            words.add(stripped.lower())
    return frozenset(words)


def default_annotator(
    *,
    colon_boundary: bool = False,
    variant_lexicon: str | Path | None = None,
    abbreviations: str | Path | None = None,
) -> Annotator:
    """Annotator wired with the bundled lexicons.

    ``variant_lexicon`` and ``abbreviations`` replace the bundled files
    when given.
    """
    tagger = RuleTagger.from_file(data_path("tagger_lexicon.tsv"))
    lemmatizer = Lemmatizer.from_file(
        data_path("lemma_exceptions.tsv"), known_as=tagger.known_as
    )
    lex_path = Path(variant_lexicon) if variant_lexicon else data_path("variant_lexicon.tsv")
    lexicon = VariantLexicon.from_file(lex_path)
    if abbreviations:
        abbrevs = frozenset(
            line.strip().rstrip(".").lower()
            for line in Path(abbreviations).read_text(encoding="utf-8").splitlines()
            if line.strip() and not line.strip().startswith("#")
        )
    else:
        abbrevs = load_default_abbreviations()
    split = SplitConfig(colon_boundary=colon_boundary, abbreviations=abbrevs)
    return Annotator(lexicon=lexicon, tagger=tagger, lemmatizer=lemmatizer, split=split)


# ---------------------------------------------------------------------------
# vertical format


def write_vertical(doc: AnnotatedDoc, path: str | Path) -> None:
    """Write a document in vertical form.

    One token per line (surface, normalized, lemma, class separated by
    tabs), a blank line between sentences, "#" comment lines.  The write
    is atomic: the file appears complete or not at all.
    """
    lines = [f"# letter {doc.letter_id}"]
    for i, sentence in enumerate(doc.sentences):
        if i:
            lines.append("")
        for token in sentence:
            lines.append(
                f"{token.surface}\t{token.normalized}\t{token.lemma}\t{token.pos.name}"
            )
    payload = ("\n".join(lines) + "\n").encode("utf-8")
    target = Path(path)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent, prefix=target.name + ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp_name, target)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def ingest_pretagged(path: str | Path, letter_id: str | None = None) -> AnnotatedDoc:
    """Read a vertical file produced here or by an external tagger.

    Blank lines separate sentences and "#" lines are comments.  A row
    with the wrong number of fields raises :class:`VerticalFormatError`
    naming the line; an unknown word class label degrades to OTHER with
    a warning.  The letter id defaults to the file's stem.
    """
    p = Path(path)
    if letter_id is None:
        letter_id = p.stem
    try:
        lines = p.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise VerticalFormatError(f"cannot read {p}: {exc}") from exc
    sentences: list[tuple[Token, ...]] = []
    current: list[Token] = []

    def flush() -> None:
        nonlocal current
        if current:
            sentences.append(tuple(current))
            current = []

    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            flush()
            continue
        if line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise VerticalFormatError(
                f"{p}:{lineno}: expected 4 tab-separated fields, got {len(parts)}"
            )
        surface, normalized, lemma, label = parts
        try:
            pos = PosClass[label.strip()]
        except KeyError:
            log.warning("%s:%d: unknown word class %r, using OTHER", p, lineno, label)
            pos = PosClass.OTHER
        current.append(
            Token(
                surface=surface,
                normalized=normalized,
                lemma=lemma,
                pos=pos,
                sent_idx=len(sentences),
                tok_idx=len(current),
            )
        )
    flush()
    if not sentences:
        log.warning("%s: no tokens found", p)
    return AnnotatedDoc(letter_id=letter_id, sentences=tuple(sentences))
