import io

import pytest

from sciuncert.knowledge import sample_conllu
from sciuncert.textmodel import (
    ROOT,
    UNKNOWN,
    ParseError,
    ValidationError,
    naive_tokenize,
    parse_conllu,
    split_sentences,
    to_conllu,
    validate_document,
)

MINIMAL_BLOCK = "1\tunclear\tunclear\tADJ\t_\t_\t0\troot\t_\t_\n"


def test_empty_input_gives_empty_document():
    doc = parse_conllu("")
    assert doc.sentences == ()


def test_minimal_block():
    doc = parse_conllu(MINIMAL_BLOCK)
    assert len(doc.sentences) == 1
    (tok,) = doc.sentences[0].tokens
    assert tok.lemma == "unclear"
    assert tok.upos == "ADJ"
    assert tok.head == ROOT
    assert doc.sentences[0].raw_text == "unclear"


def test_sample_fixture_parses_with_expected_tags():
    doc = parse_conllu(sample_conllu())
    sent = doc.sentences[0]
    assert sent.id == "gold_s1"
    assert len(sent.tokens) >= 10
    possible = [t for t in sent.tokens if t.text == "possible"]
    assert possible and possible[0].upos == "ADJ"
    # text offsets line up with the # text comment
    validate_document(doc)
    assert sent.raw_text.startswith("It is possible that")


def test_mwt_and_empty_node_lines_are_skipped():
    block = (
        "# text = don't stop\n"
        "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
        "1\tdo\tdo\tAUX\t_\t_\t3\taux\t_\t_\n"
        "2\tn't\tnot\tPART\t_\t_\t3\tadvmod\t_\t_\n"
        "2.1\tghost\tghost\tX\t_\t_\t_\t_\t_\t_\n"
        "3\tstop\tstop\tVERB\t_\t_\t0\troot\t_\t_\n"
    )
    doc = parse_conllu(block)
    assert [t.text for t in doc.sentences[0].tokens] == ["do", "n't", "stop"]


def test_wrong_column_count_reports_line_number():
    with pytest.raises(ParseError) as err:
        parse_conllu("1\tword\tword\n")
    assert "line 1" in str(err.value)


def test_head_out_of_range_names_sentence():
    block = "# sent_id = bad_sent\n1\tword\tword\tNOUN\t_\t_\t9\tnsubj\t_\t_\n"
    with pytest.raises(ValidationError) as err:
        parse_conllu(block)
    assert "bad_sent" in str(err.value)


def test_reads_file_like_sources():
    doc = parse_conllu(io.StringIO(MINIMAL_BLOCK))
    assert len(doc.sentences) == 1


def test_round_trip_is_lossless_for_retained_columns():
    doc = parse_conllu(sample_conllu())
    doc2 = parse_conllu(to_conllu(doc))
    for s1, s2 in zip(doc.sentences, doc2.sentences):
        for t1, t2 in zip(s1.tokens, s2.tokens):
            assert (t1.text, t1.lemma, t1.upos, t1.head, t1.dep, t1.morph) == (
                t2.text, t2.lemma, t2.upos, t2.head, t2.dep, t2.morph
            )


def test_lemma_falls_back_to_lowercased_form():
    doc = parse_conllu("1\tJames\t_\tPROPN\t_\t_\t0\troot\t_\t_\n")
    assert doc.sentences[0].tokens[0].lemma == "james"


# ---------------------------------------------------------------------------
# naive tokenization
# ---------------------------------------------------------------------------


def test_empty_text_gives_empty_document():
    assert naive_tokenize("").sentences == ()


def test_abbreviation_guard_keeps_citation_sentences_whole():
    doc = naive_tokenize("James et al. (2005) found X.")
    assert len(doc.sentences) == 1


def test_unguarded_initials_split():
    doc = naive_tokenize("A. B.")
    assert len(doc.sentences) == 2


def test_split_requires_uppercase_after_whitespace():
    assert split_sentences("pH 7.4 was stable. Next we measured flow.") == [
        "pH 7.4 was stable.",
        "Next we measured flow.",
    ]


def test_naive_tokens_have_unknown_linguistics():
    doc = naive_tokenize("It may rain.")
    sent = doc.sentences[0]
    assert [t.text for t in sent.tokens] == ["It", "may", "rain", "."]
    assert all(t.upos == UNKNOWN and t.dep == UNKNOWN and t.head == ROOT for t in sent.tokens)
    assert all(t.lemma == t.text.lower() for t in sent.tokens)


def test_citation_token_is_atomic():
    doc = naive_tokenize("@CITATION reported results.")
    assert doc.sentences[0].tokens[0].text == "@CITATION"


def test_naive_tokenize_is_deterministic():
    text = "Results were unclear. We suspect bias, e.g. sampling effects."
    assert naive_tokenize(text) == naive_tokenize(text)


def test_invariants_hold_on_both_ingestion_paths():
    validate_document(naive_tokenize("One sentence here. And another—with punctuation!"))
    validate_document(parse_conllu(sample_conllu()))
