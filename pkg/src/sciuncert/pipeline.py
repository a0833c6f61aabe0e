"""Per-sentence annotation workflow.

Stage order: pattern matching over the twelve uncertainty groups; if nothing
matched the sentence is a claim. Otherwise complex-sentence checking looks
for rebuttal/confirmation/neutral statements anywhere in the sentence, and a
single hit cancels every candidate span (whole-sentence relabeling). Only
confirmed-uncertain sentences get an authorial reference.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from enum import Enum

from .groups import CANCELLATION_GROUPS, SU_GROUP_NAMES, describe_group
from .matcher import PatternLibrary, SpanMatch, match_sentence
from .preprocess import preprocess_document
from .textmodel import (
    FLAG_FORMER_REF,
    FLAG_SELF_REF,
    Document,
    Sentence,
    naive_tokenize,
    parse_conllu,
)

LABEL_UNCERTAINTY = "UNCERTAINTY"
LABEL_CLAIM = "CLAIM"


class AuthorialRef(Enum):
    AUTHOR = "AUTHOR"
    FORMER_STUDY = "FORMER_STUDY"
    BOTH = "BOTH"
    NONE = "NONE"

    @property
    def display(self) -> str:
        return _REF_DISPLAY[self]


_REF_DISPLAY = {
    AuthorialRef.AUTHOR: "Author(s)",
    AuthorialRef.FORMER_STUDY: "Former/Prev. Study(s)",
    AuthorialRef.BOTH: "Author(s) & Former/Prev. Study(s)",
    AuthorialRef.NONE: "None",
}


@dataclass(frozen=True)
class Verdict:
    sentence_id: str
    label: str
    su_spans: tuple
    canceled: tuple  # of (SpanMatch, cancellation SpanMatch)
    authorial_ref: AuthorialRef
    explanation: str
    library_version: str
    text_checksum: str


def text_checksum(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


def check_complex(sentence: Sentence, su_spans, lib: PatternLibrary):
    """Sentence-level cancellation: any rebuttal/confirmation/neutral match
    revokes every uncertainty span."""
    cancel_matches = match_sentence(sentence, lib, groups=CANCELLATION_GROUPS)
    if cancel_matches:
        first = cancel_matches[0]
        return [], [(span, first) for span in su_spans]
    return list(su_spans), []


_YEAR_TOKEN_RE = re.compile(r"(?:1[5-9]\d{2}|20\d{2})[a-z]?")
_NAME_TOKEN_RE = re.compile(r"[A-Z][\w'’\-]*")


def _is_name_token(tok) -> bool:
    return bool(_NAME_TOKEN_RE.fullmatch(tok.text)) and not tok.text.isupper()


def detect_name_mentions(sentence: Sentence):
    """Rule-based detector for author-name mentions: capitalized token runs
    followed by an "et al." or a parenthesized-year trigger."""
    toks = sentence.tokens
    n = len(toks)
    mentions = []
    i = 0
    while i < n:
        if not _is_name_token(toks[i]):
            i += 1
            continue
        j = i + 1
        while j < n:
            if _is_name_token(toks[j]):
                j += 1
            elif toks[j].text.lower() in ("and", "&") and j + 1 < n and _is_name_token(toks[j + 1]):
                j += 2
            elif toks[j].text in ("'s", "’s"):
                j += 1
            else:
                break
        end = _trigger_end(toks, j)
        if end is not None:
            mentions.append(
                SpanMatch(
                    sentence_id=sentence.id,
                    start_token=i,
                    end_token=end,
                    group="FORMER_REF",
                    pattern_id="name_mention",
                    matched_text=sentence.token_span_text(i, end),
                )
            )
            i = end
        else:
            i += 1
    return mentions


def _trigger_end(toks, j):
    n = len(toks)
    if j < n and toks[j].lemma == "et":
        k = j + 1
        if k < n and toks[k].text.lower() in ("al", "al."):
            k += 1
            if k < n and toks[k].text == ".":
                k += 1
            return k
        return None
    if (
        j + 2 < n
        and toks[j].text == "("
        and _YEAR_TOKEN_RE.fullmatch(toks[j + 1].text)
        and toks[j + 2].text == ")"
    ):
        return j + 3
    return None


def resolve_authorial_ref(sentence: Sentence, su_spans, lib: PatternLibrary) -> AuthorialRef:
    """Evidence table: in-sentence markers win; carryover flags break the tie
    only when the sentence itself is unmarked; AUTHOR is the default."""
    self_evidence = bool(match_sentence(sentence, lib, groups=("SELF_REF",)))
    former_evidence = bool(match_sentence(sentence, lib, groups=("FORMER_REF",))) or bool(
        detect_name_mentions(sentence)
    )
    if not self_evidence and not former_evidence:
        self_evidence = FLAG_SELF_REF in sentence.carryover_flags
        former_evidence = FLAG_FORMER_REF in sentence.carryover_flags
    if self_evidence and former_evidence:
        return AuthorialRef.BOTH
    if former_evidence:
        return AuthorialRef.FORMER_STUDY
    return AuthorialRef.AUTHOR


def build_explanation(label, su_spans, canceled, ref: AuthorialRef) -> str:
    if label == LABEL_UNCERTAINTY:
        clauses = [f"{describe_group(s.group)} expressed by '{s.matched_text}'" for s in su_spans]
        clauses.append(f"Authorial reference: {ref.display}")
        return "; ".join(clauses)
    if canceled:
        clauses = [
            f"Uncertainty cue '{span.matched_text}' canceled by {cancel.group.lower()} "
            f"statement '{cancel.matched_text}'"
            for span, cancel in canceled
        ]
        return "; ".join(clauses)
    return "No scientific uncertainty pattern matched."


def annotate_sentence(sentence: Sentence, lib: PatternLibrary) -> Verdict:
    su_spans = match_sentence(sentence, lib, groups=SU_GROUP_NAMES)
    canceled = ()
    if su_spans:
        surviving, canceled_pairs = check_complex(sentence, su_spans, lib)
        canceled = tuple(canceled_pairs)
    else:
        surviving = []
    if surviving:
        label = LABEL_UNCERTAINTY
        ref = resolve_authorial_ref(sentence, surviving, lib)
    else:
        label = LABEL_CLAIM
        ref = AuthorialRef.NONE
    return Verdict(
        sentence_id=sentence.id,
        label=label,
        su_spans=tuple(surviving),
        canceled=canceled,
        authorial_ref=ref,
        explanation=build_explanation(label, surviving, canceled, ref),
        library_version=lib.version,
        text_checksum=text_checksum(sentence.raw_text),
    )


def annotate_document(doc: Document, lib: PatternLibrary):
    return [annotate_sentence(s, lib) for s in doc.sentences]


def annotate_text(text: str, lib: PatternLibrary, doc_id: str = "doc"):
    """Raw-text convenience path: naive tokenization + preprocessing + annotation."""
    doc = preprocess_document(naive_tokenize(text, doc_id))
    return doc, annotate_document(doc, lib)


def annotate_conllu(source, lib: PatternLibrary, doc_id: str = "doc"):
    doc = preprocess_document(parse_conllu(source, doc_id))
    return doc, annotate_document(doc, lib)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def _span_record(span: SpanMatch) -> dict:
    return {
        "start": span.start_token,
        "end": span.end_token,
        "group": span.group,
        "pattern_id": span.pattern_id,
        "text": span.matched_text,
    }


def verdict_record(v: Verdict) -> dict:
    return {
        "sentence_id": v.sentence_id,
        "label": v.label,
        "spans": [_span_record(s) for s in v.su_spans],
        "canceled": [
            {"span": _span_record(s), "by": _span_record(c)} for s, c in v.canceled
        ],
        "authorial_ref": v.authorial_ref.value,
        "explanation": v.explanation,
        "library_version": v.library_version,
        "text_checksum": v.text_checksum,
    }


def serialize_verdict(v: Verdict) -> str:
    return json.dumps(verdict_record(v), ensure_ascii=False, sort_keys=True)


def serialize_verdicts(verdicts) -> str:
    return "\n".join(serialize_verdict(v) for v in verdicts) + ("\n" if verdicts else "")


def validate_verdict(v: Verdict) -> None:
    """Structural invariants; raises AssertionError on breach (test helper)."""
    assert (v.label == LABEL_UNCERTAINTY) == bool(v.su_spans), "label/span coupling violated"
    if v.label == LABEL_CLAIM:
        assert v.authorial_ref is AuthorialRef.NONE
    else:
        assert v.authorial_ref in (AuthorialRef.AUTHOR, AuthorialRef.FORMER_STUDY, AuthorialRef.BOTH)
    for _, cancel in v.canceled:
        assert cancel.group in CANCELLATION_GROUPS
