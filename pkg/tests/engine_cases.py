"""Random (sentence, rule) case generator shared by the engine tests and the
acceptance-level oracle run."""

import random

from sciuncert import matcher as engine
from sciuncert.textmodel import ROOT, UNKNOWN, AnnotatedToken, Sentence

VOCAB = ["alpha", "beta", "gamma", "delta", "omega", "sigma", "kappa", "zeta"]
UPOS_POOL = ["NOUN", "VERB", "ADJ", "ADV", "DET"]
DEP_POOL = ["nsubj", "obj", "amod", "advmod", "mark"]
MORPH_POOL = ["Number=Sing", "Number=Plur", "Tense=Pres", "Degree=Pos"]

LEXICONS = {
    "small": ["alpha", "beta"],
    "wide": ["gamma", "delta", "omega", "sigma"],
    "phrasal": ["kappa", "alpha beta", "sigma zeta omega"],
}


def random_sentence(rng: random.Random, max_tokens: int = 15) -> Sentence:
    n = rng.randint(1, max_tokens)
    tokens = []
    cursor = 0
    for i in range(n):
        word = rng.choice(VOCAB)
        if rng.random() < 0.2:
            word = word.capitalize()
        head = ROOT if n == 1 or rng.random() < 0.3 else rng.choice([j for j in range(n) if j != i])
        tokens.append(
            AnnotatedToken(
                index=i,
                text=word,
                lemma=rng.choice(VOCAB) if rng.random() < 0.3 else word.lower(),
                upos=UNKNOWN if rng.random() < 0.25 else rng.choice(UPOS_POOL),
                morph=frozenset(rng.sample(MORPH_POOL, rng.randint(0, 2))),
                dep=UNKNOWN if rng.random() < 0.25 else rng.choice(DEP_POOL),
                head=head,
                char_start=cursor,
                char_end=cursor + len(word),
            )
        )
        cursor += len(word) + 1
    raw = " ".join(t.text for t in tokens)
    return Sentence(id="r", raw_text=raw, tokens=tuple(tokens))


def _random_matcher(rng: random.Random, quantifier: str) -> dict:
    m = {"quantifier": quantifier}
    picks = rng.sample(
        ["lemma_in", "text_exact", "upos_in", "dep_in", "morph_all",
         "head_lemma_in", "upos_not_in", "text_regex", "lexicon_ref"],
        rng.randint(1, 2),
    )
    for p in picks:
        if p == "lemma_in":
            m[p] = rng.sample(VOCAB, rng.randint(1, 3))
        elif p == "text_exact":
            m[p] = rng.choice(VOCAB)
            if rng.random() < 0.3:
                m["case_sensitive"] = True
        elif p == "upos_in":
            m[p] = rng.sample(UPOS_POOL, rng.randint(1, 2))
        elif p == "upos_not_in":
            m[p] = rng.sample(UPOS_POOL, rng.randint(1, 2))
        elif p == "dep_in":
            m[p] = rng.sample(DEP_POOL, rng.randint(1, 2))
        elif p == "morph_all":
            m[p] = rng.sample(MORPH_POOL, rng.randint(1, 2))
        elif p == "head_lemma_in":
            m[p] = rng.sample(VOCAB, rng.randint(1, 3))
        elif p == "text_regex":
            m[p] = rng.choice(["al.*", ".*a", "[gd].+", "(?i)sigma|beta"])
        elif p == "lexicon_ref":
            # phrase-bearing lexicons only combine with 1/? quantifiers and
            # no other constraints
            name = rng.choice(["small", "wide", "phrasal"])
            if name == "phrasal" and quantifier not in ("1", "?"):
                name = "wide"
            if name == "phrasal":
                return {"quantifier": quantifier, "lexicon_ref": name}
            m[p] = name
    return m


def random_rule(rng: random.Random, max_matchers: int = 3, max_span: int = 6) -> dict:
    n = rng.randint(1, max_matchers)
    matchers = []
    for _ in range(n):
        quantifier = rng.choice(["1", "1", "1", "?", "*", "+"])
        if rng.random() < 0.08 and quantifier in ("*", "?"):
            matchers.append({"quantifier": quantifier})  # wildcard gap
        else:
            matchers.append(_random_matcher(rng, quantifier))
    required = sum(1 for m in matchers if m["quantifier"] in ("1", "+"))
    span_cap = max(required, rng.randint(2, max_span))
    return {"id": "case", "group": "MODALITY", "matchers": matchers, "max_span_tokens": span_cap}


def compile_case_rule(rule_obj: dict):
    lib = engine.compile({"lexicons": LEXICONS, "rules": [rule_obj]})
    return lib, lib.compiled[0]


def run_case(rng: random.Random, max_tokens: int = 15, max_matchers: int = 3, max_span: int = 6):
    """One random comparison; returns (sentence, rule_obj, engine_spans, oracle_spans)."""
    sentence = random_sentence(rng, max_tokens)
    rule_obj = random_rule(rng, max_matchers, max_span)
    lib, compiled = compile_case_rule(rule_obj)
    got = engine.match_rule(sentence, compiled)
    got.sort(key=lambda s: s.sort_key)
    expected = engine.brute_force_match(sentence, compiled)
    return sentence, rule_obj, got, expected
