"""Gold-corpus loading, metric computation, and determinism reporting.

Gold rows are independent sentences (one per row), so each is annotated as
its own single-sentence document and alignment with predictions is
positional; the per-row text checksum carried by every verdict guards
against silent misalignment.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

from .matcher import PatternLibrary
from .pipeline import (
    LABEL_UNCERTAINTY,
    AuthorialRef,
    annotate_document,
    serialize_verdict,
)
from .preprocess import preprocess_document
from .textmodel import document_from_rows

YES = "YES"
NO = "NO"


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class GoldRecord:
    text: str
    label: str  # YES / NO
    ref: AuthorialRef = None
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class EvalReport:
    confusion: dict          # tp/fp/fn/tn with UNCERTAINTY as positive class
    per_label: dict          # label -> precision/recall/f1/support
    accuracy: float
    size: int
    authorial_agreement: float  # None when there are no true positives
    library_version: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "confusion": self.confusion,
                "per_label": self.per_label,
                "accuracy": self.accuracy,
                "size": self.size,
                "authorial_agreement": self.authorial_agreement,
                "library_version": self.library_version,
            },
            ensure_ascii=False,
            sort_keys=True,
        )


_DEFAULT_LABEL_ALIASES = {
    "yes": YES, "y": YES, "1": YES, "true": YES, "uncertainty": YES,
    "no": NO, "n": NO, "0": NO, "false": NO, "claim": NO,
}

_DEFAULT_REF_ALIASES = {
    "author(s)": AuthorialRef.AUTHOR,
    "authors": AuthorialRef.AUTHOR,
    "author": AuthorialRef.AUTHOR,
    "1": AuthorialRef.AUTHOR,
    "former/prev. study(s)": AuthorialRef.FORMER_STUDY,
    "former/prev. study(ies)": AuthorialRef.FORMER_STUDY,
    "former study(ies)": AuthorialRef.FORMER_STUDY,
    "former study": AuthorialRef.FORMER_STUDY,
    "former studies": AuthorialRef.FORMER_STUDY,
    "previous study": AuthorialRef.FORMER_STUDY,
    "previous studies": AuthorialRef.FORMER_STUDY,
    "former": AuthorialRef.FORMER_STUDY,
    "2": AuthorialRef.FORMER_STUDY,
    "both": AuthorialRef.BOTH,
    "both author(s) & former study(ies)": AuthorialRef.BOTH,
    "3": AuthorialRef.BOTH,
}

_SENTENCE_COLUMNS = ("sentence", "text")
_LABEL_COLUMNS = ("uncertainty", "label", "uncertainty_label")
_REF_COLUMNS = ("authorial ref.", "authorial_ref", "authorial reference", "ref")


def _resolve_column(header, wanted, candidates, kind):
    if wanted is not None:
        if wanted not in header:
            raise EvalError(f"mapped {kind} column {wanted!r} not in header {header}")
        return wanted
    lowered = {h.lower(): h for h in header}
    for cand in candidates:
        if cand in lowered:
            return lowered[cand]
    raise EvalError(f"no {kind} column found in header {header}; supply a column mapping")


def load_gold(path, mapping=None):
    """Read a delimited gold file into GoldRecords.

    ``mapping`` keys: sentence / label / ref (column names), delimiter,
    label_aliases, ref_aliases. Everything is optional; common column names
    and label spellings are tried by default.
    """
    mapping = dict(mapping or {})
    label_aliases = {**_DEFAULT_LABEL_ALIASES, **{
        k.lower(): (YES if str(v).upper() == YES else NO)
        for k, v in mapping.get("label_aliases", {}).items()
    }}
    ref_aliases = dict(_DEFAULT_REF_ALIASES)
    for k, v in mapping.get("ref_aliases", {}).items():
        ref_aliases[k.lower()] = AuthorialRef(v)

    with open(path, encoding="utf-8", newline="") as fh:
        sample = fh.read(8192)
        fh.seek(0)
        delimiter = mapping.get("delimiter")
        if delimiter is None:
            if str(path).endswith(".tsv") or ("\t" in sample.splitlines()[0] if sample else False):
                delimiter = "\t"
            else:
                delimiter = ","
        reader = csv.DictReader(fh, delimiter=delimiter)
        if reader.fieldnames is None:
            return []
        header = list(reader.fieldnames)
        sent_col = _resolve_column(header, mapping.get("sentence"), _SENTENCE_COLUMNS, "sentence")
        label_col = _resolve_column(header, mapping.get("label"), _LABEL_COLUMNS, "label")
        try:
            ref_col = _resolve_column(header, mapping.get("ref"), _REF_COLUMNS, "ref")
        except EvalError:
            ref_col = None
            if mapping.get("ref") is not None:
                raise

        records = []
        for row_no, row in enumerate(reader, start=2):
            text = (row.get(sent_col) or "").strip()
            raw_label = (row.get(label_col) or "").strip().lower()
            if raw_label not in label_aliases:
                raise EvalError(f"row {row_no}: unrecognized label {row.get(label_col)!r}")
            label = label_aliases[raw_label]
            ref = None
            if ref_col is not None:
                raw_ref = (row.get(ref_col) or "").strip()
                if label == YES:
                    if not raw_ref or raw_ref == "-":
                        raise EvalError(f"row {row_no}: uncertainty row with empty authorial reference")
                    key = raw_ref.lower()
                    if key not in ref_aliases:
                        raise EvalError(f"row {row_no}: unrecognized authorial reference {raw_ref!r}")
                    ref = ref_aliases[key]
            meta = {k: v for k, v in row.items() if k not in (sent_col, label_col, ref_col) and v}
            records.append(GoldRecord(text=text, label=label, ref=ref, meta=meta))
    return records


def annotate_gold(records, lib: PatternLibrary):
    """One single-sentence document per gold row (rows are unrelated, so no
    cross-row carryover)."""
    verdicts = []
    for i, rec in enumerate(records):
        doc = preprocess_document(document_from_rows([rec.text], doc_id=f"g{i + 1}"))
        verdicts.extend(annotate_document(doc, lib))
    return verdicts


def _prf(correct, predicted, support):
    precision = correct / predicted if predicted else 0.0
    recall = correct / support if support else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def compute_metrics(gold, verdicts) -> EvalReport:
    if len(gold) != len(verdicts):
        raise EvalError(f"gold size {len(gold)} does not match prediction size {len(verdicts)}")
    tp = fp = fn = tn = 0
    agree = 0
    for rec, v in zip(gold, verdicts):
        pred_yes = v.label == LABEL_UNCERTAINTY
        if rec.label == YES and pred_yes:
            tp += 1
            if rec.ref is not None and v.authorial_ref is rec.ref:
                agree += 1
        elif rec.label == YES:
            fn += 1
        elif pred_yes:
            fp += 1
        else:
            tn += 1

    p_unc, r_unc, f_unc = _prf(tp, tp + fp, tp + fn)
    p_cl, r_cl, f_cl = _prf(tn, tn + fn, tn + fp)
    total = len(gold)
    version = verdicts[0].library_version if verdicts else ""
    return EvalReport(
        confusion={"tp": tp, "fp": fp, "fn": fn, "tn": tn},
        per_label={
            "uncertainty": {"precision": p_unc, "recall": r_unc, "f1": f_unc, "support": tp + fn},
            "claim": {"precision": p_cl, "recall": r_cl, "f1": f_cl, "support": tn + fp},
        },
        accuracy=(tp + tn) / total if total else 0.0,
        size=total,
        authorial_agreement=(agree / tp) if tp else None,
        library_version=version,
    )


def report_table(report: EvalReport) -> str:
    lines = [
        f"{'label':<14}{'precision':>10}{'recall':>10}{'f1':>10}{'support':>10}",
    ]
    for label in ("uncertainty", "claim"):
        row = report.per_label[label]
        lines.append(
            f"{label:<14}{row['precision']:>10.3f}{row['recall']:>10.3f}"
            f"{row['f1']:>10.3f}{row['support']:>10d}"
        )
    lines.append(f"{'accuracy':<14}{report.accuracy:>10.3f}{'':>20}{report.size:>10d}")
    if report.authorial_agreement is not None:
        lines.append(f"{'ref agreement':<14}{report.authorial_agreement:>10.3f}")
    lines.append(f"library_version {report.library_version}")
    return "\n".join(lines)


def determinism_check(docs, lib: PatternLibrary, n_runs: int = 3, lib_provider=None) -> dict:
    """Serialize every verdict across n_runs and count sentences whose bytes
    differ between any two runs. ``lib_provider(run_index)`` lets tests swap
    libraries mid-check."""
    runs = []
    versions = []
    for r in range(max(1, n_runs)):
        library = lib_provider(r) if lib_provider is not None else lib
        versions.append(library.version)
        serialized = []
        for doc in docs:
            for v in annotate_document(doc, library):
                serialized.append((f"{doc.id}:{v.sentence_id}", serialize_verdict(v)))
        runs.append(serialized)

    inconsistent = []
    for idx, (key, first) in enumerate(runs[0]):
        if any(run[idx][1] != first for run in runs[1:]):
            inconsistent.append(key)
    return {
        "runs": len(runs),
        "sentences": len(runs[0]),
        "inconsistent": len(inconsistent),
        "inconsistent_ids": inconsistent,
        "library_versions": versions,
    }
