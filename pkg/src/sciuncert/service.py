"""HTTP service over the annotation pipeline and pattern assets.

The live pattern library is a single immutable value behind a lock; PUT
/patterns swaps the whole value atomically, so concurrent annotation
requests always see one complete library and report the version they used.
Asset replacement is in-memory: the pattern directory on disk stays the
source of truth across restarts, and GET /patterns exports the current
assets for saving.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import knowledge
from .matcher import CompileError
from .matcher import compile as compile_patterns
from .pipeline import annotate_document, verdict_record
from .preprocess import preprocess_document
from .textmodel import ParseError, ValidationError, document_from_rows, naive_tokenize, parse_conllu

MAX_BODY_BYTES = 1_000_000


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    patterns_dir: str = None
    paper_faithful: bool = False
    max_body_bytes: int = MAX_BODY_BYTES
    extra_corpora: dict = field(default_factory=dict)  # corpus_id -> text file of sentences


class LibraryHolder:
    def __init__(self, lib):
        self._lib = lib
        self._lock = threading.Lock()

    def get(self):
        with self._lock:
            return self._lib

    def swap(self, lib):
        with self._lock:
            self._lib = lib


def _error_findings(exc: CompileError):
    return [{"severity": "ERROR", "code": "COMPILE", "message": str(exc),
             "rule_id": exc.rule_id, "lexicon": None}]


def _lint_findings(lib):
    return [
        {"severity": f.severity, "code": f.code, "message": f.message,
         "rule_id": f.rule_id, "lexicon": f.lexicon}
        for f in knowledge.lint(lib)
    ]


def _compile_candidate(assets):
    """(library, findings, ok) for a candidate asset document."""
    try:
        lib = compile_patterns(assets)
    except CompileError as exc:
        return None, _error_findings(exc), False
    findings = _lint_findings(lib)
    ok = not any(f["severity"] == knowledge.SEVERITY_ERROR for f in findings)
    return lib, findings, ok


def _fixture_corpora():
    golden = knowledge.golden_cases()
    default_rows = [c["text"] for c in golden["samples"]]
    default_rows += [c["text"] for c in golden["cancellations"]]
    default_rows += [c["text"] for c in golden["both_reference"]]
    default_rows += list(dict.fromkeys(c["text"] for c in knowledge.exemplar_cases()))
    error_rows = [c["text"] for c in golden["error_analysis"]]
    corpora = {
        "default": [preprocess_document(document_from_rows(default_rows, doc_id="fixtures"))],
        "error_analysis": [preprocess_document(document_from_rows(error_rows, doc_id="error_analysis"))],
    }
    corpora["default"].append(preprocess_document(naive_tokenize(knowledge.demo_text(), doc_id="demo")))
    return corpora


def create_app(config: ServiceConfig = None) -> FastAPI:
    config = config or ServiceConfig()
    if config.patterns_dir:
        lib = knowledge.load_library_from_dir(config.patterns_dir, config.paper_faithful)
    else:
        lib = knowledge.load_default_library(config.paper_faithful)
    holder = LibraryHolder(lib)

    corpora = _fixture_corpora()
    for corpus_id, path in config.extra_corpora.items():
        with open(path, encoding="utf-8") as fh:
            rows = [line.strip() for line in fh if line.strip()]
        corpora[corpus_id] = [preprocess_document(document_from_rows(rows, doc_id=corpus_id))]

    app = FastAPI(title="sciuncert", version="0.1.0")

    @app.middleware("http")
    async def _limit_body(request: Request, call_next):
        length = request.headers.get("content-length")
        if length is not None and length.isdigit() and int(length) > config.max_body_bytes:
            return JSONResponse(status_code=413, content={"error": "request body too large"})
        return await call_next(request)

    async def _json_body(request: Request):
        try:
            data = await request.json()
        except Exception:
            return None
        return data if isinstance(data, dict) else None

    @app.get("/health")
    def health():
        return {"status": "ok", "library_version": holder.get().version}

    @app.post("/annotate")
    async def annotate(request: Request):
        data = await _json_body(request)
        if data is None:
            return JSONResponse(status_code=400, content={"error": "malformed JSON body"})
        text = data.get("text")
        conllu = data.get("conllu")
        if (text is None) == (conllu is None):
            return JSONResponse(
                status_code=400,
                content={"error": "provide exactly one of 'text' or 'conllu'"},
            )
        lib = holder.get()
        try:
            if text is not None:
                doc = preprocess_document(naive_tokenize(str(text)))
                degraded = True
            else:
                doc = preprocess_document(parse_conllu(str(conllu)))
                degraded = False
        except (ParseError, ValidationError) as exc:
            return JSONResponse(status_code=400, content={"error": str(exc)})
        verdicts = annotate_document(doc, lib)
        return {
            "library_version": lib.version,
            "degraded_linguistics": degraded,
            "sentences": [
                {
                    "id": s.id,
                    "text": s.raw_text,
                    "tokens": [
                        {"text": t.text, "start": t.char_start, "end": t.char_end} for t in s.tokens
                    ],
                }
                for s in doc.sentences
            ],
            "verdicts": [verdict_record(v) for v in verdicts],
        }

    @app.get("/patterns")
    def get_patterns():
        lib = holder.get()
        return {"version": lib.version, "assets": lib.source}

    @app.post("/patterns/validate")
    async def validate_patterns(request: Request):
        data = await _json_body(request)
        if data is None or "assets" not in data:
            return JSONResponse(status_code=400, content={"error": "missing 'assets'"})
        candidate, findings, ok = _compile_candidate(data["assets"])
        if not ok:
            return JSONResponse(status_code=422, content={"findings": findings})
        return {"version": candidate.version, "findings": findings}

    @app.put("/patterns")
    async def put_patterns(request: Request):
        data = await _json_body(request)
        if data is None or "assets" not in data:
            return JSONResponse(status_code=400, content={"error": "missing 'assets'"})
        candidate, findings, ok = _compile_candidate(data["assets"])
        if not ok:
            return JSONResponse(status_code=422, content={"findings": findings})
        expected = data.get("expected_version")
        current = holder.get()
        if expected is not None and expected != current.version:
            return JSONResponse(
                status_code=409,
                content={"error": "version_conflict", "current_version": current.version},
            )
        holder.swap(candidate)
        return {"version": candidate.version}

    @app.post("/preview")
    async def preview(request: Request):
        data = await _json_body(request)
        if data is None or "assets" not in data:
            return JSONResponse(status_code=400, content={"error": "missing 'assets'"})
        corpus_id = data.get("corpus_id", "default")
        if corpus_id not in corpora:
            return JSONResponse(status_code=400, content={"error": f"unknown corpus {corpus_id!r}"})
        candidate, findings, ok = _compile_candidate(data["assets"])
        if not ok:
            return JSONResponse(status_code=422, content={"findings": findings})
        current = holder.get()
        changed = []
        for doc in corpora[corpus_id]:
            before = annotate_document(doc, current)
            after = annotate_document(doc, candidate)
            for sent, b, a in zip(doc.sentences, before, after):
                if _differs(b, a):
                    changed.append(
                        {
                            "sentence_id": f"{doc.id}:{sent.id}",
                            "text": sent.raw_text,
                            "before": verdict_record(b),
                            "after": verdict_record(a),
                        }
                    )
        return {
            "corpus_id": corpus_id,
            "before_version": current.version,
            "after_version": candidate.version,
            "changed": changed,
        }

    return app


def _differs(before, after) -> bool:
    """Library version always differs between current and candidate; only
    report sentences whose substantive verdict changed."""
    b, a = verdict_record(before), verdict_record(after)
    for rec in (b, a):
        rec.pop("library_version", None)
    return b != a
