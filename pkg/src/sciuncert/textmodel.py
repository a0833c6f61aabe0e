"""Linguistic data model and ingestion.

Two ingestion paths produce the same immutable ``Document`` structure:

* ``parse_conllu`` reads dependency-annotated text in CoNLL-U (UD v2), the
  canonical input format; part-of-speech, morphology and dependency fields
  map one-to-one onto its columns.
* ``naive_tokenize`` is the degraded path for plain text: regex sentence
  splitting and tokenization, lemma = lowercased surface, every linguistic
  attribute set to UNKNOWN. Patterns constrained on unknown attributes
  simply fail to match.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field, replace

UNKNOWN = "UNKNOWN"
ROOT = -1

#: The 17-tag Universal Dependencies part-of-speech inventory.
UD_UPOS_TAGS = frozenset(
    "ADJ ADP ADV AUX CCONJ DET INTJ NOUN NUM PART PRON PROPN PUNCT SCONJ SYM VERB X".split()
)

#: Token used to stand in for any recognized in-text citation.
CITATION_TOKEN = "@CITATION"

#: Cross-sentence reference flags (see preprocess.compute_carryover).
FLAG_SELF_REF = "SELF_REF"
FLAG_FORMER_REF = "FORMER_REF"


class ParseError(ValueError):
    """Malformed input (bad column count, etc.); carries a line number."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class ValidationError(ValueError):
    """Structurally invalid document content (bad head index, bad offsets)."""


@dataclass(frozen=True)
class AnnotatedToken:
    index: int
    text: str
    lemma: str
    upos: str = UNKNOWN
    morph: frozenset = frozenset()
    dep: str = UNKNOWN
    head: int = ROOT
    char_start: int = 0
    char_end: int = 0


@dataclass(frozen=True)
class Sentence:
    id: str
    raw_text: str
    tokens: tuple
    carryover_flags: frozenset = frozenset()

    def token_span_text(self, start: int, end: int) -> str:
        """Raw-text slice covered by tokens [start, end)."""
        return self.raw_text[self.tokens[start].char_start : self.tokens[end - 1].char_end]


@dataclass(frozen=True)
class Document:
    id: str
    sentences: tuple
    metadata: dict = field(default_factory=dict)


def validate_document(doc: Document) -> None:
    """Assert every structural invariant; raises ValidationError on the first breach."""
    seen_ids = set()
    for sent in doc.sentences:
        if sent.id in seen_ids:
            raise ValidationError(f"duplicate sentence id {sent.id!r} in document {doc.id!r}")
        seen_ids.add(sent.id)
        n = len(sent.tokens)
        prev_end = -1
        for i, tok in enumerate(sent.tokens):
            where = f"sentence {sent.id!r} token {i}"
            if tok.index != i:
                raise ValidationError(f"{where}: index {tok.index} not contiguous")
            if not (0 <= tok.char_start < tok.char_end <= len(sent.raw_text)):
                raise ValidationError(f"{where}: char range {tok.char_start}:{tok.char_end} out of bounds")
            if tok.char_start < prev_end:
                raise ValidationError(f"{where}: char ranges overlap or are not increasing")
            prev_end = tok.char_end
            if sent.raw_text[tok.char_start : tok.char_end] != tok.text:
                raise ValidationError(f"{where}: surface {tok.text!r} does not match raw text slice")
            if tok.head != ROOT and not (0 <= tok.head < n and tok.head != i):
                raise ValidationError(f"{where}: head {tok.head} invalid")


# ---------------------------------------------------------------------------
# CoNLL-U ingestion
# ---------------------------------------------------------------------------

_MWT_ID = re.compile(r"^\d+-\d+$")
_EMPTY_NODE_ID = re.compile(r"^\d+\.\d+$")


def _align_tokens(raw_text: str, forms: list) -> list:
    """Scan raw_text left-to-right assigning each form its character range.

    Only whitespace may separate consecutive forms; anything else means the
    ``# text`` line and the token column disagree.
    """
    spans = []
    cursor = 0
    for form in forms:
        while cursor < len(raw_text) and raw_text[cursor].isspace():
            cursor += 1
        if not raw_text.startswith(form, cursor):
            raise ValidationError(f"token {form!r} does not align with sentence text at offset {cursor}")
        spans.append((cursor, cursor + len(form)))
        cursor += len(form)
    return spans


def _finish_sentence(rows, sent_text, sent_id, ordinal):
    conllu_ids = [r[0] for r in rows]
    id_to_index = {cid: i for i, cid in enumerate(conllu_ids)}
    forms = [r[1] for r in rows]
    if sent_text is None:
        sent_text = " ".join(forms)
    spans = _align_tokens(sent_text, forms)
    sid = sent_id if sent_id is not None else f"s{ordinal}"

    tokens = []
    for i, (cid, form, lemma, upos, feats, head_col, deprel) in enumerate(rows):
        if head_col in ("_", ""):
            head = ROOT
        else:
            head_id = int(head_col)
            if head_id == 0:
                head = ROOT
            elif head_id in id_to_index:
                head = id_to_index[head_id]
            else:
                raise ValidationError(f"sentence {sid!r}: head {head_id} of token {cid} out of range")
        morph = frozenset() if feats in ("_", "") else frozenset(feats.split("|"))
        tokens.append(
            AnnotatedToken(
                index=i,
                text=form,
                lemma=(form if lemma in ("_", "") else lemma).lower(),
                upos=upos if upos in UD_UPOS_TAGS else UNKNOWN,
                morph=morph,
                dep=deprel if deprel not in ("_", "") else UNKNOWN,
                head=head,
                char_start=spans[i][0],
                char_end=spans[i][1],
            )
        )
    return Sentence(id=sid, raw_text=sent_text, tokens=tuple(tokens))


def parse_conllu(source, doc_id: str = "doc") -> Document:
    """Parse a CoNLL-U character stream (string or file-like) into a Document.

    Multiword-token range lines (``3-4``) and empty nodes (``3.1``) are
    skipped; MISC and DEPS columns are ignored.
    """
    if hasattr(source, "read"):
        source = source.read()
    sentences = []
    rows = []
    sent_text = None
    sent_id = None

    def flush():
        nonlocal rows, sent_text, sent_id
        if rows:
            sentences.append(_finish_sentence(rows, sent_text, sent_id, len(sentences) + 1))
        rows, sent_text, sent_id = [], None, None

    for line_no, line in enumerate(source.splitlines(), start=1):
        line = line.rstrip("\n")
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("text") and "=" in body:
                key, value = body.split("=", 1)
                if key.strip() == "text":
                    sent_text = value.strip()
            elif body.startswith("sent_id") and "=" in body:
                sent_id = body.split("=", 1)[1].strip()
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ParseError(f"expected 10 tab-separated columns, got {len(cols)}", line_no)
        tok_id = cols[0]
        if _MWT_ID.match(tok_id) or _EMPTY_NODE_ID.match(tok_id):
            continue
        try:
            cid = int(tok_id)
        except ValueError:
            raise ParseError(f"bad token id {tok_id!r}", line_no)
        rows.append((cid, cols[1], cols[2], cols[3], cols[5], cols[6], cols[7]))
    flush()

    doc = Document(id=doc_id, sentences=tuple(sentences))
    validate_document(doc)
    return doc


def to_conllu(doc: Document) -> str:
    """Serialize the retained columns (form, lemma, upos, feats, head, deprel)."""
    out = []
    for sent in doc.sentences:
        out.append(f"# sent_id = {sent.id}")
        out.append(f"# text = {sent.raw_text}")
        for tok in sent.tokens:
            feats = "|".join(sorted(tok.morph)) if tok.morph else "_"
            head = 0 if tok.head == ROOT else tok.head + 1
            dep = tok.dep if tok.dep != UNKNOWN else "_"
            upos = tok.upos if tok.upos != UNKNOWN else "_"
            out.append(
                "\t".join([str(tok.index + 1), tok.text, tok.lemma, upos, "_", feats, str(head), dep, "_", "_"])
            )
        out.append("")
    return "\n".join(out) + ("\n" if out else "")


# ---------------------------------------------------------------------------
# Naive raw-text ingestion
# ---------------------------------------------------------------------------

# Guard entries checked against the word carrying the sentence-final period;
# pair guards look one word further back ("et al.").
_SINGLE_GUARDS = frozenset(
    ["e.g.", "i.e.", "cf.", "vs.", "fig.", "figs.", "eq.", "eqs.", "ref.", "refs.",
     "no.", "ca.", "approx.", "dr.", "prof.", "mr.", "ms.", "mrs.", "st."]
)
_PAIR_GUARDS = frozenset(["et al."])

_TOKEN_RE = re.compile(r"@CITATION|\w+(?:['’’-]\w+)*|[^\w\s]", re.UNICODE)
_BOUNDARY_RE = re.compile(r"[.!?]+")


def _guarded(text: str, end: int) -> bool:
    words = text[:end].split()
    if not words:
        return False
    last = words[-1].lower()
    if last in _SINGLE_GUARDS:
        return True
    if len(words) >= 2 and f"{words[-2].lower()} {last}" in _PAIR_GUARDS:
        return True
    return False


def split_sentences(text: str) -> list:
    """Sentence boundaries: terminal punctuation followed by whitespace and an
    uppercase letter (or end of text), unless an abbreviation guard applies."""
    boundaries = []
    for m in _BOUNDARY_RE.finditer(text):
        end = m.end()
        rest = text[end:]
        stripped = rest.lstrip()
        if stripped and not (rest != stripped and stripped[0].isupper()):
            continue
        if stripped and _guarded(text, end):
            continue
        boundaries.append(end)
    pieces = []
    start = 0
    for b in boundaries:
        piece = text[start:b].strip()
        if piece:
            pieces.append(piece)
        start = b
    tail = text[start:].strip()
    if tail:
        pieces.append(tail)
    return pieces


def tokenize_sentence(raw: str, sent_id: str) -> Sentence:
    """One Sentence from one raw string; no sentence splitting is applied."""
    tokens = []
    for i, m in enumerate(_TOKEN_RE.finditer(raw)):
        tokens.append(
            AnnotatedToken(
                index=i,
                text=m.group(0),
                lemma=m.group(0).lower(),
                char_start=m.start(),
                char_end=m.end(),
            )
        )
    return Sentence(id=sent_id, raw_text=raw, tokens=tuple(tokens))


def normalize_raw_text(text: str) -> str:
    """NFC + control-character removal + whitespace collapse (shared with preprocess)."""
    text = unicodedata.normalize("NFC", text)
    text = "".join(ch for ch in text if unicodedata.category(ch) != "Cc")
    return re.sub(r"\s+", " ", text).strip()


def naive_tokenize(text: str, doc_id: str = "doc") -> Document:
    """Degraded ingestion path for plain UTF-8 text."""
    normalized = normalize_raw_text(text)
    sentences = tuple(
        tokenize_sentence(raw, f"s{i + 1}") for i, raw in enumerate(split_sentences(normalized))
    )
    doc = Document(id=doc_id, sentences=sentences)
    validate_document(doc)
    return doc


def document_from_rows(rows, doc_id: str = "doc") -> Document:
    """One single-sentence-per-row document set is common for gold corpora;
    here each row becomes one Sentence with no re-splitting."""
    sentences = tuple(
        tokenize_sentence(normalize_raw_text(row), f"s{i + 1}") for i, row in enumerate(rows)
    )
    return Document(id=doc_id, sentences=sentences)


def with_sentences(doc: Document, sentences) -> Document:
    return replace(doc, sentences=tuple(sentences))
