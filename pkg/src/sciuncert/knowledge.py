"""Bundled pattern library: loading, linting, and coverage telemetry.

The shipped library reconstructs the original rule inventory from its
published exemplars and cue lists; it is versioned by content hash so any
evaluation number is tied to the exact assets that produced it. Rules whose
id starts with ``errfix_`` are post-error-analysis additions and are dropped
when ``paper_faithful`` is requested.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from . import matcher as engine
from .groups import SU_GROUP_NAMES, SuGroup  # noqa: F401  (re-exported)
from .matcher import CompileError, PatternLibrary

ASSET_FILES = ("lexicons.json", "su_groups.json", "cancellation.json", "authorial.json")
ERROR_ANALYSIS_PREFIX = "errfix_"

SEVERITY_ERROR = "ERROR"
SEVERITY_WARNING = "WARNING"


@dataclass(frozen=True)
class LintFinding:
    severity: str
    code: str
    message: str
    rule_id: str = None
    lexicon: str = None


def _read_asset(name: str) -> dict:
    path = resources.files(__package__).joinpath("patterns").joinpath(name)
    return json.loads(path.read_text(encoding="utf-8"))


def merge_assets(documents) -> dict:
    """Combine several pattern documents into one (duplicate lexicon names or
    rule ids surface as compile errors later)."""
    lexicons = {}
    rules = []
    for doc in documents:
        for name, entries in doc.get("lexicons", {}).items():
            if name in lexicons:
                raise CompileError(f"duplicate lexicon {name!r} across asset files", field="lexicons")
            lexicons[name] = entries
        rules.extend(doc.get("rules", []))
    return {"lexicons": lexicons, "rules": rules}


def load_assets_from_dir(directory) -> dict:
    """Merge every ``*.json`` pattern document under ``directory``."""
    from pathlib import Path

    paths = sorted(Path(directory).glob("*.json"))
    if not paths:
        raise FileNotFoundError(f"no pattern files in {directory}")
    return merge_assets([json.loads(p.read_text(encoding="utf-8")) for p in paths])


def strip_error_analysis_rules(assets: dict) -> dict:
    return {
        "lexicons": assets.get("lexicons", {}),
        "rules": [r for r in assets.get("rules", []) if not str(r.get("id", "")).startswith(ERROR_ANALYSIS_PREFIX)],
    }


def default_assets(paper_faithful: bool = False) -> dict:
    assets = merge_assets([_read_asset(name) for name in ASSET_FILES])
    if paper_faithful:
        assets = strip_error_analysis_rules(assets)
    return assets


def load_default_library(paper_faithful: bool = False) -> PatternLibrary:
    return engine.compile(default_assets(paper_faithful))


def load_library_from_dir(directory, paper_faithful: bool = False) -> PatternLibrary:
    assets = load_assets_from_dir(directory)
    if paper_faithful:
        assets = strip_error_analysis_rules(assets)
    return engine.compile(assets)


# ---------------------------------------------------------------------------
# Lint
# ---------------------------------------------------------------------------


def _matcher_subsumes(a, b) -> bool:
    """True when every token b's matcher accepts is also accepted by a."""
    if a.quantifier != b.quantifier:
        return False
    scalar = ("text_exact", "case_sensitive", "text_regex", "lexicon_ref")
    for f in scalar:
        va = getattr(a, f)
        if va not in (None, False) and va != getattr(b, f):
            return False
    for f in ("lemma_in", "upos_in", "dep_in", "head_lemma_in"):
        va, vb = getattr(a, f), getattr(b, f)
        if va is not None and (vb is None or not va >= vb):
            return False
    for f in ("upos_not_in", "morph_all"):
        va, vb = getattr(a, f), getattr(b, f)
        if va is not None and (vb is None or not va <= vb):
            return False
    return True


def lint(lib: PatternLibrary):
    """Static checks over a compiled library; ERROR findings should block a swap."""
    findings = []

    by_shape = {}
    for rule in lib.rules:
        key = (rule.group, rule.matchers, rule.max_span_tokens)
        if key in by_shape:
            findings.append(
                LintFinding(
                    SEVERITY_ERROR,
                    "DUPLICATE",
                    f"rule {rule.id!r} duplicates {by_shape[key]!r}",
                    rule_id=rule.id,
                )
            )
        else:
            by_shape[key] = rule.id

    for rule in lib.rules:
        if all(engine.QUANTIFIERS[m.quantifier][0] == 0 for m in rule.matchers):
            findings.append(
                LintFinding(
                    SEVERITY_ERROR,
                    "DEGENERATE",
                    f"rule {rule.id!r} has no required matcher and can match an empty span",
                    rule_id=rule.id,
                )
            )

    by_group = {}
    for rule in lib.rules:
        by_group.setdefault(rule.group, []).append(rule)
    for group_rules in by_group.values():
        for b in group_rules:
            for a in group_rules:
                if a.id == b.id or len(a.matchers) != len(b.matchers):
                    continue
                if all(_matcher_subsumes(ma, mb) for ma, mb in zip(a.matchers, b.matchers)) and (
                    a.matchers != b.matchers
                ):
                    findings.append(
                        LintFinding(
                            SEVERITY_WARNING,
                            "SHADOWED",
                            f"rule {b.id!r} is shadowed by the more general {a.id!r}",
                            rule_id=b.id,
                        )
                    )

    reachable = {name: set() for name in lib.lexicons}
    for rule in lib.rules:
        for m in rule.matchers:
            if m.lexicon_ref is not None:
                entries = lib.lexicons[m.lexicon_ref]
                if m.lemma_in is None:
                    reachable[m.lexicon_ref] |= entries
                else:
                    reachable[m.lexicon_ref] |= entries & m.lemma_in
    for name, entries in lib.lexicons.items():
        unreachable = entries - reachable[name]
        if unreachable:
            findings.append(
                LintFinding(
                    SEVERITY_WARNING,
                    "UNREACHABLE",
                    f"lexicon {name!r} has {len(unreachable)} entr{'y' if len(unreachable) == 1 else 'ies'} "
                    f"unreachable from any rule (e.g. {sorted(unreachable)[0]!r})",
                    lexicon=name,
                )
            )
    return findings


def coverage_report(lib: PatternLibrary, docs):
    """Per-group count of sentences with at least one match."""
    groups = [g for g in SU_GROUP_NAMES] + [r.group for r in lib.rules if r.group not in SU_GROUP_NAMES]
    counts = {g: 0 for g in dict.fromkeys(groups)}
    for doc in docs:
        for sent in doc.sentences:
            hit = {m.group for m in engine.match_sentence(sent, lib)}
            for g in hit:
                if g in counts:
                    counts[g] += 1
    return counts


# ---------------------------------------------------------------------------
# Bundled fixtures
# ---------------------------------------------------------------------------


def _read_fixture(name: str) -> str:
    return resources.files(__package__).joinpath("fixtures").joinpath(name).read_text(encoding="utf-8")


def exemplar_cases():
    """The group-exemplar span fixtures (text, group, span)."""
    return json.loads(_read_fixture("exemplars.json"))["cases"]


def golden_cases():
    """Sample-table, cancellation, error-analysis, and mixed-reference fixtures."""
    return json.loads(_read_fixture("golden.json"))


def demo_text() -> str:
    """Five-sentence demonstration paragraph (four uncertain, two citing prior work)."""
    return _read_fixture("demo.txt")


def sample_conllu() -> str:
    return _read_fixture("sample.conllu")
