"""sciuncert: rule-based annotation of scientific uncertainty in scholarly text."""

from .groups import SuGroup
from .knowledge import load_default_library
from .matcher import PatternLibrary, SpanMatch, compile  # noqa: A004
from .pipeline import AuthorialRef, Verdict, annotate_document, annotate_text
from .textmodel import Document, Sentence, naive_tokenize, parse_conllu

__version__ = "0.1.0"

__all__ = [
    "AuthorialRef",
    "Document",
    "PatternLibrary",
    "Sentence",
    "SpanMatch",
    "SuGroup",
    "Verdict",
    "annotate_document",
    "annotate_text",
    "compile",
    "load_default_library",
    "naive_tokenize",
    "parse_conllu",
    "__version__",
]
