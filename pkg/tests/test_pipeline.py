import pytest

import frameparse as fp


def test_default_model_is_uniform(demo_grammar, demo_wordlist):
    pipe = fp.ParserPipeline(demo_grammar, wordlist=demo_wordlist)
    result = pipe.analyze("the child sleeps")
    assert result.in_coverage
    assert len(result.analyses) == 1


def test_out_of_coverage_result(uniform_pipeline):
    result = uniform_pipeline.analyze("the the the")
    assert not result.in_coverage
    assert result.analyses == []
    assert len(result.tokens) == 3


def test_baseline_mode_lexical_zero(adversarial_pipeline):
    result = adversarial_pipeline.analyze("the child sleeps")
    assert result.analyses[0].lexical_logprob == 0.0
    assert result.analyses[0].total_score == \
        result.analyses[0].structural_logprob


def test_lexicalized_flag_forced_off(lexicalized_pipeline):
    sentence = "the child sees a dog in the park"
    base = lexicalized_pipeline.analyze(sentence, lexicalized=False)
    assert base.analyses[0].lexical_logprob == 0.0
    lex = lexicalized_pipeline.analyze(sentence, lexicalized=True)
    assert lex.analyses[0].lexical_logprob < 0.0


def test_wordlist_tag_outside_terminals_rejected(demo_grammar):
    wl = fp.parse_wordlist("weird\tzz\n")
    with pytest.raises(ValueError, match="zz"):
        fp.ParserPipeline(demo_grammar, wordlist=wl)


def test_mismatched_table_rejected(demo_grammar):
    other = fp.build_table(fp.parse_grammar("terminals: a\nstart: S\nS -> a\n"))
    with pytest.raises(ValueError, match="not built from"):
        fp.ParserPipeline(demo_grammar, table=other)


def test_n_limits_analyses(uniform_pipeline):
    sentence = "the meeting will hear a greeting from the senator"
    assert len(uniform_pipeline.analyze(sentence, n=2).analyses) == 2
    assert len(uniform_pipeline.analyze(sentence, n=None).analyses) == 4
