"""Token-sequence pattern engine.

Patterns are ordered lists of token matchers with per-matcher quantifiers
("1", "?", "*", "+"). Matching is anchored at every start token; for each
(rule, anchor) only the longest satisfying span is kept, overlaps across
rules are all reported, and the result order is deterministic.

``brute_force_match`` is a deliberately naive oracle (exhaustive enumeration
of repetition assignments) kept independent of the production matcher so the
two can be checked against each other.
"""

from __future__ import annotations

import hashlib
import io
import json
import re
from dataclasses import dataclass, field

from .groups import ALL_GROUP_NAMES
from .textmodel import ROOT, UD_UPOS_TAGS, UNKNOWN, Sentence

DEFAULT_MAX_SPAN = 12

QUANTIFIERS = {"1": (1, 1), "?": (0, 1), "*": (0, None), "+": (1, None)}

_MATCHER_FIELDS = frozenset(
    ["text_exact", "case_sensitive", "text_regex", "lemma_in", "lexicon_ref",
     "upos_in", "upos_not_in", "morph_all", "dep_in", "head_lemma_in", "quantifier"]
)
_RULE_FIELDS = frozenset(["id", "group", "matchers", "max_span_tokens", "note"])
_TOP_FIELDS = frozenset(["lexicons", "rules"])


class CompileError(ValueError):
    def __init__(self, message, rule_id=None, field=None):
        parts = []
        if rule_id is not None:
            parts.append(f"rule {rule_id!r}")
        if field is not None:
            parts.append(f"field {field!r}")
        prefix = " ".join(parts)
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.rule_id = rule_id
        self.field = field


class OracleScaleError(ValueError):
    """brute_force_match is test-scale only."""


@dataclass(frozen=True)
class TokenMatcher:
    text_exact: str = None
    case_sensitive: bool = False
    text_regex: str = None
    lemma_in: frozenset = None
    lexicon_ref: str = None
    upos_in: frozenset = None
    upos_not_in: frozenset = None
    morph_all: frozenset = None
    dep_in: frozenset = None
    head_lemma_in: frozenset = None
    quantifier: str = "1"

    def has_constraints(self) -> bool:
        return any(
            getattr(self, f) is not None
            for f in ("text_exact", "text_regex", "lemma_in", "lexicon_ref",
                      "upos_in", "upos_not_in", "morph_all", "dep_in", "head_lemma_in")
        )


@dataclass(frozen=True)
class PatternRule:
    id: str
    group: str
    matchers: tuple
    max_span_tokens: int = DEFAULT_MAX_SPAN
    note: str = ""


@dataclass(frozen=True)
class SpanMatch:
    sentence_id: str
    start_token: int
    end_token: int
    group: str
    pattern_id: str
    matched_text: str

    @property
    def sort_key(self):
        return (self.start_token, -(self.end_token - self.start_token), self.group, self.pattern_id)


class CompiledMatcher:
    """One token predicate plus its repetition bounds (max_rep None = span cap)."""

    __slots__ = ("text_ci", "text_cs", "regex", "lemmas", "phrase_word",
                 "upos_in", "upos_not_in", "morph_all", "dep_in", "head_lemma_in",
                 "min_rep", "max_rep")

    def __init__(self, *, text_ci=None, text_cs=None, regex=None, lemmas=None, phrase_word=None,
                 upos_in=None, upos_not_in=None, morph_all=None, dep_in=None, head_lemma_in=None,
                 min_rep=1, max_rep=1):
        self.text_ci = text_ci
        self.text_cs = text_cs
        self.regex = regex
        self.lemmas = lemmas
        self.phrase_word = phrase_word
        self.upos_in = upos_in
        self.upos_not_in = upos_not_in
        self.morph_all = morph_all
        self.dep_in = dep_in
        self.head_lemma_in = head_lemma_in
        self.min_rep = min_rep
        self.max_rep = max_rep

    def matches(self, tok, sentence: Sentence) -> bool:
        if self.text_ci is not None and tok.text.casefold() != self.text_ci:
            return False
        if self.text_cs is not None and tok.text != self.text_cs:
            return False
        if self.regex is not None and self.regex.fullmatch(tok.text) is None:
            return False
        if self.lemmas is not None and tok.lemma.lower() not in self.lemmas:
            return False
        if self.phrase_word is not None and not (
            tok.lemma.lower() == self.phrase_word or tok.text.casefold() == self.phrase_word
        ):
            return False
        # UNKNOWN attributes never satisfy positive constraints and always
        # satisfy negative ones (degraded raw-text mode).
        if self.upos_in is not None and (tok.upos == UNKNOWN or tok.upos not in self.upos_in):
            return False
        if self.upos_not_in is not None and tok.upos in self.upos_not_in:
            return False
        if self.morph_all is not None and not self.morph_all <= tok.morph:
            return False
        if self.dep_in is not None and (tok.dep == UNKNOWN or tok.dep not in self.dep_in):
            return False
        if self.head_lemma_in is not None:
            if tok.head == ROOT:
                return False
            if sentence.tokens[tok.head].lemma.lower() not in self.head_lemma_in:
                return False
        return True

    def gate_lexemes(self):
        """A finite lexeme set a satisfying token's lemma-or-text must hit, or None."""
        if self.phrase_word is not None:
            return frozenset([self.phrase_word])
        if self.lemmas is not None:
            return self.lemmas
        if self.text_ci is not None:
            return frozenset([self.text_ci])
        if self.text_cs is not None:
            return frozenset([self.text_cs.casefold()])
        return None


class CompiledAlternative:
    __slots__ = ("matchers", "gates", "min_total")

    def __init__(self, matchers):
        self.matchers = tuple(matchers)
        gates = []
        for m in self.matchers:
            if m.min_rep >= 1:
                lex = m.gate_lexemes()
                if lex is not None:
                    gates.append(lex)
        self.gates = tuple(gates)
        self.min_total = sum(m.min_rep for m in self.matchers)


class CompiledRule:
    __slots__ = ("id", "group", "max_span_tokens", "alternatives")

    def __init__(self, id, group, max_span_tokens, alternatives):
        self.id = id
        self.group = group
        self.max_span_tokens = max_span_tokens
        self.alternatives = tuple(alternatives)


@dataclass(frozen=True)
class PatternLibrary:
    rules: tuple
    lexicons: dict
    version: str
    source: dict = field(repr=False)
    compiled: tuple = field(repr=False)

    def rule_ids(self):
        return [r.id for r in self.rules]


# ---------------------------------------------------------------------------
# Compilation
# ---------------------------------------------------------------------------


def _as_frozenset(value, rule_id, fname, lower=True):
    if not isinstance(value, (list, tuple)) or not all(isinstance(v, str) for v in value):
        raise CompileError("expected an array of strings", rule_id, fname)
    return frozenset(v.lower() if lower else v for v in value)


def _parse_matcher(obj, rule_id) -> TokenMatcher:
    if not isinstance(obj, dict):
        raise CompileError("matcher must be an object", rule_id, "matchers")
    unknown = set(obj) - _MATCHER_FIELDS
    if unknown:
        raise CompileError(f"unknown field {sorted(unknown)[0]!r}", rule_id, sorted(unknown)[0])
    quant = obj.get("quantifier", "1")
    if quant not in QUANTIFIERS:
        raise CompileError(f"unknown quantifier {quant!r}", rule_id, "quantifier")
    kwargs = {"quantifier": quant}
    if "text_exact" in obj:
        kwargs["text_exact"] = obj["text_exact"]
        kwargs["case_sensitive"] = bool(obj.get("case_sensitive", False))
    elif obj.get("case_sensitive"):
        raise CompileError("case_sensitive requires text_exact", rule_id, "case_sensitive")
    if "text_regex" in obj:
        try:
            re.compile(obj["text_regex"])
        except re.error as exc:
            raise CompileError(f"bad regular expression: {exc}", rule_id, "text_regex")
        kwargs["text_regex"] = obj["text_regex"]
    for fname in ("lemma_in", "dep_in", "head_lemma_in"):
        if fname in obj:
            kwargs[fname] = _as_frozenset(obj[fname], rule_id, fname)
    for fname in ("upos_in", "upos_not_in"):
        if fname in obj:
            tags = _as_frozenset(obj[fname], rule_id, fname, lower=False)
            bad = tags - UD_UPOS_TAGS
            if bad:
                raise CompileError(f"unknown UPOS tag {sorted(bad)[0]!r}", rule_id, fname)
            kwargs[fname] = tags
    if "morph_all" in obj:
        pairs = _as_frozenset(obj["morph_all"], rule_id, "morph_all", lower=False)
        for p in pairs:
            if "=" not in p:
                raise CompileError(f"morph feature {p!r} is not key=value", rule_id, "morph_all")
        kwargs["morph_all"] = pairs
    if "lexicon_ref" in obj:
        if not isinstance(obj["lexicon_ref"], str):
            raise CompileError("lexicon_ref must be a string", rule_id, "lexicon_ref")
        kwargs["lexicon_ref"] = obj["lexicon_ref"]

    m = TokenMatcher(**kwargs)
    if not m.has_constraints() and QUANTIFIERS[quant][0] >= 1:
        raise CompileError("matcher without constraints requires quantifier '*' or '?'", rule_id, "quantifier")
    return m


def _base_compiled(m: TokenMatcher, lemmas_override=None):
    min_rep, max_rep = QUANTIFIERS[m.quantifier]
    return CompiledMatcher(
        text_ci=None if m.text_exact is None or m.case_sensitive else m.text_exact.casefold(),
        text_cs=m.text_exact if (m.text_exact is not None and m.case_sensitive) else None,
        regex=re.compile(m.text_regex) if m.text_regex is not None else None,
        lemmas=lemmas_override if lemmas_override is not None else m.lemma_in,
        upos_in=m.upos_in,
        upos_not_in=m.upos_not_in,
        morph_all=m.morph_all,
        dep_in=m.dep_in,
        head_lemma_in=m.head_lemma_in,
        min_rep=min_rep,
        max_rep=max_rep,
    )


def _phrase_matchers(phrase):
    return [CompiledMatcher(phrase_word=w, min_rep=1, max_rep=1) for w in phrase.split()]


def _expand_rule(rule: PatternRule, lexicons) -> CompiledRule:
    variants = [[]]
    for m in rule.matchers:
        options = []
        if m.lexicon_ref is not None:
            entries = lexicons[m.lexicon_ref]
            singles = frozenset(e for e in entries if " " not in e)
            phrases = sorted(e for e in entries if " " in e)
            if phrases:
                if m.quantifier not in ("1", "?"):
                    raise CompileError(
                        f"lexicon {m.lexicon_ref!r} has multiword entries; quantifier "
                        f"{m.quantifier!r} is not supported on phrase matchers",
                        rule.id, "quantifier",
                    )
                others = TokenMatcher(quantifier=m.quantifier, lexicon_ref=m.lexicon_ref)
                if m != others:
                    raise CompileError(
                        f"lexicon {m.lexicon_ref!r} has multiword entries; other constraints "
                        "cannot combine with phrase expansion",
                        rule.id, "lexicon_ref",
                    )
            base = _base_compiled(m, lemmas_override=_merge_lemma_sets(m.lemma_in, singles))
            if singles or not phrases:
                options.append([base])
            for ph in phrases:
                options.append(_phrase_matchers(ph))
            if m.quantifier == "?" and phrases and not singles:
                options.append([])
        else:
            options.append([_base_compiled(m)])
        variants = [v + opt for v in variants for opt in options]
    return CompiledRule(rule.id, rule.group, rule.max_span_tokens,
                        [CompiledAlternative(v) for v in variants])


def _merge_lemma_sets(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a & b


def _canonical_source(lexicons, rule_objs):
    return {
        "lexicons": {name: sorted(set(entries)) for name, entries in sorted(lexicons.items())},
        "rules": sorted(rule_objs, key=lambda r: r["id"]),
    }


def library_hash(source: dict) -> str:
    blob = json.dumps(source, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def compile(pattern_source, lexicons=None) -> PatternLibrary:
    """Compile a pattern document (dict, JSON string, or file-like) plus any
    externally supplied lexicons into an immutable PatternLibrary."""
    if isinstance(pattern_source, (str, bytes)):
        data = json.loads(pattern_source)
    elif isinstance(pattern_source, io.IOBase) or hasattr(pattern_source, "read"):
        data = json.load(pattern_source)
    else:
        data = pattern_source
    if not isinstance(data, dict):
        raise CompileError("pattern source must be an object")
    unknown = set(data) - _TOP_FIELDS
    if unknown:
        raise CompileError(f"unknown field {sorted(unknown)[0]!r}", field=sorted(unknown)[0])

    merged_lexicons = {}
    for src in (lexicons or {}), data.get("lexicons", {}):
        for name, entries in src.items():
            if name in merged_lexicons:
                raise CompileError(f"duplicate lexicon {name!r}", field="lexicons")
            if not isinstance(entries, (list, tuple, set, frozenset)) or not all(
                isinstance(e, str) for e in entries
            ):
                raise CompileError(f"lexicon {name!r} must be an array of strings", field="lexicons")
            lowered = [e.lower() for e in entries]
            if len(set(lowered)) != len(lowered):
                raise CompileError(f"lexicon {name!r} has duplicate entries", field="lexicons")
            merged_lexicons[name] = frozenset(lowered)

    rules = []
    rule_objs = []
    seen = set()
    for obj in data.get("rules", []):
        if not isinstance(obj, dict):
            raise CompileError("rule must be an object")
        unknown = set(obj) - _RULE_FIELDS
        if unknown:
            raise CompileError(f"unknown field {sorted(unknown)[0]!r}",
                               obj.get("id"), sorted(unknown)[0])
        rid = obj.get("id")
        if not rid or not isinstance(rid, str):
            raise CompileError("missing or invalid rule id", rid, "id")
        if rid in seen:
            raise CompileError("duplicate id", rid, "id")
        seen.add(rid)
        group = obj.get("group")
        if group not in ALL_GROUP_NAMES:
            raise CompileError(f"unknown group {group!r}", rid, "group")
        matcher_objs = obj.get("matchers")
        if not isinstance(matcher_objs, list) or not matcher_objs:
            raise CompileError("matchers must be a non-empty array", rid, "matchers")
        matchers = tuple(_parse_matcher(mo, rid) for mo in matcher_objs)
        max_span = obj.get("max_span_tokens", DEFAULT_MAX_SPAN)
        if not isinstance(max_span, int) or max_span < 1:
            raise CompileError("max_span_tokens must be a positive integer", rid, "max_span_tokens")
        required = sum(1 for m in matchers if QUANTIFIERS[m.quantifier][0] >= 1)
        if max_span < required:
            raise CompileError(
                f"max_span_tokens {max_span} is below the {required} required matchers",
                rid, "max_span_tokens",
            )
        for m in matchers:
            if m.lexicon_ref is not None and m.lexicon_ref not in merged_lexicons:
                raise CompileError(f"unresolved lexicon_ref {m.lexicon_ref!r}", rid, "lexicon_ref")
        note = obj.get("note", "")
        rules.append(PatternRule(rid, group, matchers, max_span, note))
        rule_objs.append(obj)

    compiled = tuple(_expand_rule(r, merged_lexicons) for r in rules)
    source = _canonical_source(merged_lexicons, rule_objs)
    return PatternLibrary(
        rules=tuple(rules),
        lexicons=merged_lexicons,
        version=library_hash(source),
        source=source,
        compiled=compiled,
    )


# ---------------------------------------------------------------------------
# Matching
# ---------------------------------------------------------------------------


def _longest_end(alt: CompiledAlternative, sat_rows, anchor: int, n: int, cap: int):
    """Maximum end position of a full match of ``alt`` anchored at ``anchor``,
    or None. Forward reachability over (matcher, position)."""
    limit = min(n, anchor + cap)
    positions = {anchor}
    for mi, m in enumerate(alt.matchers):
        row = sat_rows[mi]
        nxt = set()
        for p in positions:
            if m.min_rep == 0:
                nxt.add(p)
            q = p
            reps = 0
            while q < limit and row[q]:
                q += 1
                reps += 1
                if reps >= m.min_rep:
                    nxt.add(q)
                if m.max_rep is not None and reps >= m.max_rep:
                    break
        positions = nxt
        if not positions:
            return None
    return max(positions)


def _sentence_lexemes(sentence: Sentence):
    out = set()
    for t in sentence.tokens:
        out.add(t.lemma.lower())
        out.add(t.text.casefold())
    return out


def match_rule(sentence: Sentence, rule: CompiledRule, lexemes=None):
    """All maximal matches of one compiled rule (one span per anchor)."""
    n = len(sentence.tokens)
    if n == 0:
        return []
    if lexemes is None:
        lexemes = _sentence_lexemes(sentence)
    best = {}
    for alt in rule.alternatives:
        if alt.min_total > n:
            continue
        if any(g.isdisjoint(lexemes) for g in alt.gates):
            continue
        sat_rows = [[m.matches(t, sentence) for t in sentence.tokens] for m in alt.matchers]
        for anchor in range(n):
            end = _longest_end(alt, sat_rows, anchor, n, rule.max_span_tokens)
            if end is not None and end > anchor and end > best.get(anchor, anchor):
                best[anchor] = end
    return [
        SpanMatch(
            sentence_id=sentence.id,
            start_token=start,
            end_token=end,
            group=rule.group,
            pattern_id=rule.id,
            matched_text=sentence.token_span_text(start, end),
        )
        for start, end in best.items()
    ]


def match_sentence(sentence: Sentence, lib: PatternLibrary, groups=None):
    """All matches of the (optionally group-filtered) library against one
    sentence, ordered by (start_token, -length, group, pattern_id)."""
    if groups is not None:
        groups = set(groups)
    lexemes = _sentence_lexemes(sentence)
    out = []
    for rule in lib.compiled:
        if groups is not None and rule.group not in groups:
            continue
        out.extend(match_rule(sentence, rule, lexemes))
    out.sort(key=lambda s: s.sort_key)
    return out


# ---------------------------------------------------------------------------
# Oracle
# ---------------------------------------------------------------------------

ORACLE_MAX_TOKENS = 25


def brute_force_match(sentence: Sentence, rule: CompiledRule):
    """Exhaustive enumeration over (anchor, per-matcher repetition counts);
    same dedup and ordering as the production matcher. Test-scale only."""
    from itertools import product

    n = len(sentence.tokens)
    if n > ORACLE_MAX_TOKENS:
        raise OracleScaleError(f"oracle refuses sentences over {ORACLE_MAX_TOKENS} tokens (got {n})")
    cap = rule.max_span_tokens
    best = {}
    for alt in rule.alternatives:
        sat = [[m.matches(t, sentence) for t in sentence.tokens] for m in alt.matchers]
        ranges = []
        for m in alt.matchers:
            hi = cap if m.max_rep is None else min(m.max_rep, cap)
            ranges.append(range(m.min_rep, hi + 1))
        for start in range(n):
            for reps in product(*ranges):
                if sum(reps) > cap:
                    continue
                pos = start
                ok = True
                for mi, r in enumerate(reps):
                    for _ in range(r):
                        if pos >= n or not sat[mi][pos]:
                            ok = False
                            break
                        pos += 1
                    if not ok:
                        break
                if ok and pos > start and pos > best.get(start, start):
                    best[start] = pos
    spans = [
        SpanMatch(
            sentence_id=sentence.id,
            start_token=start,
            end_token=end,
            group=rule.group,
            pattern_id=rule.id,
            matched_text=sentence.token_span_text(start, end),
        )
        for start, end in best.items()
    ]
    spans.sort(key=lambda s: s.sort_key)
    return spans
