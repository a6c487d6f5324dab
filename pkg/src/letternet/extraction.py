"""Relation extraction over annotated letters.

Two extractors produce the records that graphs are built from:
plain co-occurrence within a sentence or token window, and a shallow
verb-argument heuristic that reads the nearest noun to the left of a
verb as its subject and the nearest noun to the right as its object.
The heuristic trades parsing for robustness: early modern prose defeats
modern parsers, while noun-verb adjacency survives the spelling.
"""

from __future__ import annotations

import enum
import logging
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping

from letternet.pipeline import AnnotatedDoc, PosClass, Token

log = logging.getLogger(__name__)


class RelationKind(enum.Enum):
    COOCCUR = "COOCCUR"
    SUBJ = "SUBJ"
    OBJ = "OBJ"


DIRECTED_KINDS = frozenset({RelationKind.SUBJ, RelationKind.OBJ})

DEFAULT_CONTENT_CLASSES = frozenset({PosClass.NOUN, PosClass.VERB, PosClass.ADJ})

DEFAULT_MAX_DISTANCE = 4


class GoldFormatError(ValueError):
    """Raised for malformed gold-standard triple files."""


class AnaphoraError(ValueError):
    """Raised for malformed anaphora files or non-pronoun targets."""


@dataclass(frozen=True)
class PairRecord:
    """One extracted relation instance.

    For SUBJ the source is the noun and the target the verb; for OBJ
    the source is the verb and the target the noun.  COOCCUR records
    are unordered and stored with their endpoints in canonical
    (lemma, class) order.  ``letter_id`` and ``sent_idx`` say where the
    instance was found.
    """

    src_lemma: str
    src_pos: PosClass
    dst_lemma: str
    dst_pos: PosClass
    kind: RelationKind
    letter_id: str
    sent_idx: int


def _node_sort_key(lemma: str, pos: PosClass) -> tuple[str, str]:
    return (lemma, pos.name)


def extract_cooccurrences(
    doc: AnnotatedDoc,
    window: int | None = None,
    pos_filter: frozenset[PosClass] = DEFAULT_CONTENT_CLASSES,
) -> list[PairRecord]:
    """Co-occurrence records for every content-word pair in context.

    With ``window=None`` the context is the whole sentence; otherwise
    two tokens co-occur when their positions differ by at most
    ``window``.  Only tokens whose class is in ``pos_filter`` take part.
    Each unordered pair of token occurrences yields one record, so a
    pair seen n times carries multiplicity n; endpoints are stored in
    canonical order.  Two occurrences of the same lemma still co-occur
    (a node may pair with itself).
    """
    if window is not None and window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    records: list[PairRecord] = []
    for sentence in doc.sentences:
        content = [t for t in sentence if t.pos in pos_filter]
        for a, b in combinations(content, 2):
            if window is not None and abs(a.tok_idx - b.tok_idx) > window:
                continue
            first, second = sorted(
                (a, b), key=lambda t: _node_sort_key(t.lemma, t.pos)
            )
            records.append(
                PairRecord(
                    src_lemma=first.lemma,
                    src_pos=first.pos,
                    dst_lemma=second.lemma,
                    dst_pos=second.pos,
                    kind=RelationKind.COOCCUR,
                    letter_id=doc.letter_id,
                    sent_idx=a.sent_idx,
                )
            )
    return records


def _scan(
    sentence: tuple[Token, ...],
    verb_idx: int,
    step: int,
    max_dist: int,
    verb_blocker: bool,
) -> Token | None:
    # Nearest noun on one side of the verb, looking through at most
    # max_dist intervening tokens of any class.  Pronouns, punctuation
    # and everything else are looked through; a plain verb in between
    # blocks the search when the blocker is on (modals never block).
    j = verb_idx + step
    while 0 <= j < len(sentence):
        intervening = abs(j - verb_idx) - 1
        if intervening > max_dist:
            return None
        token = sentence[j]
        if token.pos is PosClass.NOUN:
            return token
        if verb_blocker and token.pos is PosClass.VERB:
            return None
        j += step
    return None


def extract_window_pairs(
    doc: AnnotatedDoc,
    max_dist: int = DEFAULT_MAX_DISTANCE,
    verb_blocker: bool = True,
) -> list[PairRecord]:
    """Shallow subject and object pairs for every full verb.

    For each VERB token the nearest NOUN to its left within ``max_dist``
    intervening tokens becomes the subject candidate and the nearest
    NOUN to its right the object candidate; either side may come up
    empty.  Pronouns are never selected, modals are not treated as
    verbs, and with ``verb_blocker`` another verb between noun and verb
    cancels that side (it usually signals an intervening clause).
    Records come out in reading order, subject before object per verb.
    """
    if max_dist < 0:
        raise ValueError(f"max_dist must be >= 0, got {max_dist}")
    records: list[PairRecord] = []
    for sentence in doc.sentences:
        for i, token in enumerate(sentence):
            if token.pos is not PosClass.VERB:
                continue
            subj = _scan(sentence, i, -1, max_dist, verb_blocker)
            if subj is not None:
                records.append(
                    PairRecord(
                        src_lemma=subj.lemma,
                        src_pos=PosClass.NOUN,
                        dst_lemma=token.lemma,
                        dst_pos=PosClass.VERB,
                        kind=RelationKind.SUBJ,
                        letter_id=doc.letter_id,
                        sent_idx=token.sent_idx,
                    )
                )
            obj = _scan(sentence, i, 1, max_dist, verb_blocker)
            if obj is not None:
                records.append(
                    PairRecord(
                        src_lemma=token.lemma,
                        src_pos=PosClass.VERB,
                        dst_lemma=obj.lemma,
                        dst_pos=PosClass.NOUN,
                        kind=RelationKind.OBJ,
                        letter_id=doc.letter_id,
                        sent_idx=token.sent_idx,
                    )
                )
    return records


# ---------------------------------------------------------------------------
# anaphora


@dataclass(frozen=True)
class AnaphoraMap:
    """Manual pronoun resolutions keyed by token position.

    Maps (letter_id, sent_idx, tok_idx) to the noun lemma the pronoun
    stands for.  Replacements always take the NOUN class.
    """

    entries: Mapping[tuple[str, int, int], str]

    def __len__(self) -> int:
        return len(self.entries)

    def for_letter(self, letter_id: str) -> dict[tuple[int, int], str]:
        return {
            (sent, tok): lemma
            for (lid, sent, tok), lemma in self.entries.items()
            if lid == letter_id
        }

    @classmethod
    def from_file(cls, path: str | Path) -> "AnaphoraMap":
        """Read a four-column file: letter_id, sent_idx, tok_idx, lemma."""
        p = Path(path)
        try:
            lines = p.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise AnaphoraError(f"cannot read anaphora file {p}: {exc}") from exc
        entries: dict[tuple[str, int, int], str] = {}
        for lineno, line in enumerate(lines, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split("\t")
            if len(parts) != 4:
                raise AnaphoraError(
                    f"{p}:{lineno}: expected 4 tab-separated fields, got {len(parts)}"
                )
            letter_id, sent_s, tok_s, lemma = (x.strip() for x in parts)
            try:
                sent_idx, tok_idx = int(sent_s), int(tok_s)
            except ValueError:
                raise AnaphoraError(
                    f"{p}:{lineno}: bad token position {sent_s!r}/{tok_s!r}"
                ) from None
            if not lemma or lemma == "-":
                raise AnaphoraError(f"{p}:{lineno}: empty replacement lemma")
            entries[(letter_id, sent_idx, tok_idx)] = lemma.lower()
        return cls(entries=entries)


def apply_anaphora(doc: AnnotatedDoc, amap: AnaphoraMap) -> AnnotatedDoc:
    """Replace mapped pronouns by their antecedent nouns.

    Every map entry for this letter must point at a PRON token;
    anything else (wrong class, position out of range) raises
    :class:`AnaphoraError` naming the position.  The surface form stays
    as transcribed, only normalized form, lemma and class change.  An
    empty map returns the document unchanged.
    """
    targets = amap.for_letter(doc.letter_id)
    if not targets:
        return doc
    for (sent_idx, tok_idx) in targets:
        if sent_idx < 0 or sent_idx >= len(doc.sentences):
            raise AnaphoraError(
                f"{doc.letter_id}: no sentence {sent_idx} for anaphora target"
            )
        sentence = doc.sentences[sent_idx]
        if tok_idx < 0 or tok_idx >= len(sentence):
            raise AnaphoraError(
                f"{doc.letter_id}: no token {tok_idx} in sentence {sent_idx}"
            )
        token = sentence[tok_idx]
        if token.pos is not PosClass.PRON:
            raise AnaphoraError(
                f"{doc.letter_id}: anaphora target at sentence {sent_idx}, "
                f"token {tok_idx} is {token.pos.name}, not PRON"
            )
    new_sentences = []
    for sent_idx, sentence in enumerate(doc.sentences):
        new_sentence = []
        for token in sentence:
            lemma = targets.get((sent_idx, token.tok_idx))
            if lemma is None:
                new_sentence.append(token)
            else:
                new_sentence.append(
                    Token(
                        surface=token.surface,
                        normalized=lemma,
                        lemma=lemma,
                        pos=PosClass.NOUN,
                        sent_idx=token.sent_idx,
                        tok_idx=token.tok_idx,
                    )
                )
        new_sentences.append(tuple(new_sentence))
    return AnnotatedDoc(letter_id=doc.letter_id, sentences=tuple(new_sentences))


# ---------------------------------------------------------------------------
# gold triples and evaluation


@dataclass(frozen=True)
class GoldTriple:
    """A manually judged verb with its subject and/or object lemma."""

    letter_id: str
    sent_idx: int
    verb_lemma: str
    subj_lemma: str | None
    obj_lemma: str | None

    def __post_init__(self) -> None:
        if self.subj_lemma is None and self.obj_lemma is None:
            raise ValueError(
                f"gold triple for {self.verb_lemma!r} needs a subject or an object"
            )


def load_gold(path: str | Path) -> list[GoldTriple]:
    """Read gold triples: letter_id, sent_idx, verb, subj-or-"-", obj-or-"-".

    "#" lines are comments.  Rows with the wrong field count, bad
    indices or neither argument raise :class:`GoldFormatError` naming
    the line.
    """
    p = Path(path)
    try:
        lines = p.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise GoldFormatError(f"cannot read gold file {p}: {exc}") from exc
    triples: list[GoldTriple] = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split("\t")
        if len(parts) != 5:
            raise GoldFormatError(
                f"{p}:{lineno}: expected 5 tab-separated fields, got {len(parts)}"
            )
        letter_id, sent_s, verb, subj, obj = (x.strip() for x in parts)
        try:
            sent_idx = int(sent_s)
        except ValueError:
            raise GoldFormatError(f"{p}:{lineno}: bad sentence index {sent_s!r}") from None
        if not verb or verb == "-":
            raise GoldFormatError(f"{p}:{lineno}: empty verb lemma")
        try:
            triples.append(
                GoldTriple(
                    letter_id=letter_id,
                    sent_idx=sent_idx,
                    verb_lemma=verb.lower(),
                    subj_lemma=None if subj in ("", "-") else subj.lower(),
                    obj_lemma=None if obj in ("", "-") else obj.lower(),
                )
            )
        except ValueError as exc:
            raise GoldFormatError(f"{p}:{lineno}: {exc}") from None
    return triples


@dataclass(frozen=True)
class Scores:
    """Precision, recall and F1 with their supporting counts.

    A score is None where it is undefined: precision without system
    output, recall without expected pairs, F1 when either is missing.
    """

    precision: float | None
    recall: float | None
    f1: float | None
    true_positives: int
    n_auto: int
    n_gold: int


@dataclass(frozen=True)
class EvalReport:
    subj: Scores
    obj: Scores
    overall: Scores

    def format(self) -> str:
        def fmt(value: float | None) -> str:
            return "n/a" if value is None else f"{value:.3f}"

        lines = ["kind      P      R      F1     tp  auto  gold"]
        for name, s in (("SUBJ", self.subj), ("OBJ", self.obj), ("overall", self.overall)):
            lines.append(
                f"{name:<8}{fmt(s.precision):>7}{fmt(s.recall):>7}{fmt(s.f1):>7}"
                f"{s.true_positives:>7}{s.n_auto:>6}{s.n_gold:>6}"
            )
        return "\n".join(lines)


def _score(auto: Counter, gold: Counter) -> Scores:
    tp = sum((auto & gold).values())
    n_auto = sum(auto.values())
    n_gold = sum(gold.values())
    precision = tp / n_auto if n_auto else None
    recall = tp / n_gold if n_gold else None
    f1: float | None = None
    if precision is not None and recall is not None:
        f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return Scores(precision, recall, f1, tp, n_auto, n_gold)


def _auto_key(record: PairRecord) -> tuple[str, int, str, str, RelationKind]:
    if record.kind is RelationKind.SUBJ:
        noun, verb = record.src_lemma, record.dst_lemma
    else:
        verb, noun = record.src_lemma, record.dst_lemma
    return (record.letter_id, record.sent_idx, verb, noun, record.kind)


def evaluate_pairs(records: Iterable[PairRecord], gold: Iterable[GoldTriple]) -> EvalReport:
    """Compare extracted pairs against gold triples.

    Matching is by (letter, sentence, verb lemma, noun lemma, kind) with
    multiset semantics, so a pair extracted twice can only match two
    gold instances.  COOCCUR records are ignored.  Scores are reported
    per kind and overall.
    """
    auto_subj: Counter = Counter()
    auto_obj: Counter = Counter()
    for record in records:
        if record.kind is RelationKind.SUBJ:
            auto_subj[_auto_key(record)] += 1
        elif record.kind is RelationKind.OBJ:
            auto_obj[_auto_key(record)] += 1
    gold_subj: Counter = Counter()
    gold_obj: Counter = Counter()
    for triple in gold:
        if triple.subj_lemma is not None:
            gold_subj[
                (
                    triple.letter_id,
                    triple.sent_idx,
                    triple.verb_lemma,
                    triple.subj_lemma,
                    RelationKind.SUBJ,
                )
            ] += 1
        if triple.obj_lemma is not None:
            gold_obj[
                (
                    triple.letter_id,
                    triple.sent_idx,
                    triple.verb_lemma,
                    triple.obj_lemma,
                    RelationKind.OBJ,
                )
            ] += 1
    return EvalReport(
        subj=_score(auto_subj, gold_subj),
        obj=_score(auto_obj, gold_obj),
        overall=_score(auto_subj + auto_obj, gold_subj + gold_obj),
    )
