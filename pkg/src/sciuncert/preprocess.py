"""Text cleaning, in-text citation standardization, and reference carryover.

Citations in any of three styles are replaced by the literal token
``@CITATION``; adjacent citations separated only by whitespace, ``;`` or
``,`` collapse into a single token. Replacement happens on raw sentence
text first; ``standardize_document`` then re-derives token alignment so
dependency-annotated input keeps its remaining annotations.

Full coreference resolution is deliberately out of scope: the only consumer
would be authorial attribution, so a two-flag carryover heuristic
(``compute_carryover``) covers the cross-sentence cases with an auditable
rule table.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .textmodel import (
    CITATION_TOKEN,
    FLAG_FORMER_REF,
    FLAG_SELF_REF,
    ROOT,
    UNKNOWN,
    AnnotatedToken,
    Document,
    Sentence,
    normalize_raw_text,
    with_sentences,
)

NUMERIC_BRACKET = "NUMERIC_BRACKET"
PARENTHETICAL_AUTHOR_YEAR = "PARENTHETICAL_AUTHOR_YEAR"
NARRATIVE_AUTHOR_YEAR = "NARRATIVE_AUTHOR_YEAR"


@dataclass(frozen=True)
class CitationSpan:
    char_start: int
    char_end: int
    style: str
    original_text: str


def normalize_text(text: str) -> str:
    """Unicode NFC, control characters removed, whitespace runs collapsed, stripped."""
    return normalize_raw_text(text)


# Years 1500-2099 with an optional letter suffix; avoids matching bracketed
# measurements and large counts.
_YEAR = r"(?:1[5-9]\d{2}|20\d{2})[a-z]?"

_NUMERIC_RE = re.compile(r"\[\s*\d+(?:\s*[,\-–]\s*\d+)*\s*\]")

_PAREN_RE = re.compile(r"\(([^()]*)\)")

# One author-year segment inside a parenthetical citation. Requires a
# capitalized word run and a year; tolerates "see"/"e.g.," leads, "&"/"and"
# coordination, "et al.", and a trailing page reference.
_CAP_WORD = r"[A-Z][\w'’\-]*"
_SEGMENT_RE = re.compile(
    rf"^\s*(?:(?:see|e\.g\.,?|cf\.)\s+)?"
    rf"{_CAP_WORD}(?:\s*(?:{_CAP_WORD}|et\s+al\.?|and|&|,))*"
    rf"\s*,?\s+{_YEAR}"
    rf"(?:\s*,\s*pp?\.?\s*\d+(?:\s*[-–]\s*\d+)?)?\s*$"
)

# Narrative style: non-possessive surname(s), optional "et al.", then "(YEAR)".
_SURNAME = r"[A-Z][A-Za-z\-]*[a-z](?!['’]s)"
_NARRATIVE_RE = re.compile(
    rf"\b{_SURNAME}"
    rf"(?:\s*(?:,|and|&)\s*{_SURNAME})*"
    rf"(?:\s+et\s+al\.?)?"
    rf"\s*\(\s*{_YEAR}\s*\)"
)


def _parenthetical_matches(text: str):
    for m in _PAREN_RE.finditer(text):
        inner = m.group(1)
        segments = inner.split(";")
        if segments and all(_SEGMENT_RE.match(seg) for seg in segments):
            yield m.start(), m.end()


def _collect_citation_spans(text: str):
    """All recognized citations as (start, end, style), in priority order,
    later recognizers skipping anything that overlaps an earlier match."""
    taken = []

    def overlaps(s, e):
        return any(s < te and ts < e for ts, te, _ in taken)

    for m in _NUMERIC_RE.finditer(text):
        taken.append((m.start(), m.end(), NUMERIC_BRACKET))
    for s, e in _parenthetical_matches(text):
        if not overlaps(s, e):
            taken.append((s, e, PARENTHETICAL_AUTHOR_YEAR))
    for m in _NARRATIVE_RE.finditer(text):
        if not overlaps(m.start(), m.end()):
            taken.append((m.start(), m.end(), NARRATIVE_AUTHOR_YEAR))
    return sorted(taken)


_BLOCK_SEP_RE = re.compile(r"^[\s;,]*$")


def standardize_citations(text: str):
    """Replace every recognized citation with ``@CITATION``.

    Returns the rewritten text and one CitationSpan per replacement, in
    original coordinates. Adjacent citations whose gap is only
    whitespace/";"/"," are collapsed into a single replacement whose span
    covers the whole block.
    """
    raw = _collect_citation_spans(text)
    blocks = []
    for s, e, style in raw:
        if blocks and _BLOCK_SEP_RE.match(text[blocks[-1][1] : s]):
            blocks[-1] = (blocks[-1][0], e, blocks[-1][2])
        else:
            blocks.append((s, e, style))

    spans = [CitationSpan(s, e, style, text[s:e]) for s, e, style in blocks]
    out = []
    cursor = 0
    for span in spans:
        out.append(text[cursor : span.char_start])
        out.append(CITATION_TOKEN)
        cursor = span.char_end
    out.append(text[cursor:])
    return "".join(out), spans


# ---------------------------------------------------------------------------
# Document-level application
# ---------------------------------------------------------------------------


def _standardize_sentence(sent: Sentence) -> Sentence:
    _, spans = standardize_citations(sent.raw_text)
    if not spans:
        return sent

    # Extend each replaced block to token boundaries so every token is either
    # fully kept or fully merged into the citation token.
    regions = []
    for span in spans:
        s, e = span.char_start, span.char_end
        for tok in sent.tokens:
            if tok.char_start < e and s < tok.char_end:
                s = min(s, tok.char_start)
                e = max(e, tok.char_end)
        if regions and s <= regions[-1][1]:
            regions[-1] = (regions[-1][0], max(e, regions[-1][1]))
        else:
            regions.append((s, e))

    new_text_parts = []
    cursor = 0
    for s, e in regions:
        new_text_parts.append(sent.raw_text[cursor:s])
        new_text_parts.append(CITATION_TOKEN)
        cursor = e
    new_text_parts.append(sent.raw_text[cursor:])
    new_text = "".join(new_text_parts)

    # Rebuild the token list: old index -> new index, citations collapsed.
    new_tokens = []
    index_map = {}
    offset_delta = 0
    i, ri, n = 0, 0, len(sent.tokens)
    while i < n or ri < len(regions):
        if ri < len(regions) and (i >= n or sent.tokens[i].char_start >= regions[ri][0]):
            rs, re_ = regions[ri]
            new_start = rs + offset_delta
            cit_index = len(new_tokens)
            new_tokens.append(
                AnnotatedToken(
                    index=cit_index,
                    text=CITATION_TOKEN,
                    lemma=CITATION_TOKEN.lower(),
                    upos="X",
                    dep=UNKNOWN,
                    head=ROOT,
                    char_start=new_start,
                    char_end=new_start + len(CITATION_TOKEN),
                )
            )
            while i < n and sent.tokens[i].char_end <= re_:
                index_map[i] = cit_index
                i += 1
            offset_delta += len(CITATION_TOKEN) - (re_ - rs)
            ri += 1
        else:
            tok = sent.tokens[i]
            index_map[i] = len(new_tokens)
            new_tokens.append(
                AnnotatedToken(
                    index=len(new_tokens),
                    text=tok.text,
                    lemma=tok.lemma,
                    upos=tok.upos,
                    morph=tok.morph,
                    dep=tok.dep,
                    head=tok.head,  # remapped below
                    char_start=tok.char_start + offset_delta,
                    char_end=tok.char_end + offset_delta,
                )
            )
            i += 1

    remapped = []
    for tok in new_tokens:
        if tok.text == CITATION_TOKEN and tok.head == ROOT:
            remapped.append(tok)
            continue
        old_head = tok.head
        if old_head == ROOT:
            new_head = ROOT
        else:
            new_head = index_map.get(old_head, ROOT)
            if new_head == tok.index:
                new_head = ROOT
        remapped.append(
            AnnotatedToken(
                index=tok.index,
                text=tok.text,
                lemma=tok.lemma,
                upos=tok.upos,
                morph=tok.morph,
                dep=tok.dep,
                head=new_head,
                char_start=tok.char_start,
                char_end=tok.char_end,
            )
        )

    return Sentence(
        id=sent.id,
        raw_text=new_text,
        tokens=tuple(remapped),
        carryover_flags=sent.carryover_flags,
    )


def standardize_document(doc: Document) -> Document:
    """Apply citation standardization to every sentence, merging the affected
    tokens into single ``@CITATION`` tokens and remapping heads."""
    return with_sentences(doc, [_standardize_sentence(s) for s in doc.sentences])


# ---------------------------------------------------------------------------
# Cross-sentence carryover
# ---------------------------------------------------------------------------

_FORMER_ANAPHORS = ("these authors", "these studies", "this study", "that study", "they", "their")
_SELF_ANAPHORS = ("these results", "these findings", "this")

_FORMER_SIGNAL_RE = re.compile(
    r"\b(?:previous|prior|earlier|former|past)\s+"
    r"(?:stud(?:y|ies)|research|work|works|meta-analys[ei]s|analys[ei]s|literature|findings?|reports?|authors?)\b"
    r"|\bet\s+al\b",
    re.IGNORECASE,
)
_SELF_SIGNAL_RE = re.compile(r"\b(?:i|we|our|my|us)\b", re.IGNORECASE)


def _begins_with_any(text: str, anaphors) -> bool:
    lowered = text.lower()
    for a in anaphors:
        if lowered.startswith(a) and (len(lowered) == len(a) or not lowered[len(a)].isalnum()):
            return True
    return False


def has_former_signal(sent: Sentence) -> bool:
    return CITATION_TOKEN in sent.raw_text or bool(_FORMER_SIGNAL_RE.search(sent.raw_text))


def has_self_signal(sent: Sentence) -> bool:
    return bool(_SELF_SIGNAL_RE.search(sent.raw_text))


def compute_carryover(doc: Document) -> Document:
    """Set FORMER_REF / SELF_REF flags on sentences that open with an anaphor
    continuing the previous sentence's reference. Flags feed the authorial
    resolver only; they never change the uncertainty label."""
    out = []
    for i, sent in enumerate(doc.sentences):
        flags = set()
        if i > 0:
            prev = doc.sentences[i - 1]
            if _begins_with_any(sent.raw_text, _FORMER_ANAPHORS) and has_former_signal(prev):
                flags.add(FLAG_FORMER_REF)
            if _begins_with_any(sent.raw_text, _SELF_ANAPHORS) and has_self_signal(prev):
                flags.add(FLAG_SELF_REF)
        if flags:
            out.append(
                Sentence(
                    id=sent.id,
                    raw_text=sent.raw_text,
                    tokens=sent.tokens,
                    carryover_flags=frozenset(flags),
                )
            )
        else:
            out.append(sent)
    return with_sentences(doc, out)


def preprocess_document(doc: Document) -> Document:
    """Citation standardization followed by carryover computation."""
    return compute_carryover(standardize_document(doc))
