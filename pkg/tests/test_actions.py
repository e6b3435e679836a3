import math

import pytest

import frameparse as fp
from frameparse.actions import (derivation_logprob, replay_actions,
                                trace_sort_key, tree_actions)
from frameparse.grammar import END_MARKER

MOD_TREEBANK = """
(S (NP (det the) (n child)) (VP (v sees) (NP (NP (det a) (n dog)) (PP (prep in) (NP (det the) (n park))))))
(S (NP (det the) (n man)) (VP (v hears) (NP (NP (det a) (n story)) (PP (prep about) (NP (det the) (n garden))))))
(S (NP (det the) (n woman)) (VP (v reads) (NP (NP (det a) (n report)) (PP (prep from) (NP (det the) (n senator))))))
"""


def _gold_trees(text, grammar):
    return [fp.to_derivation_tree(t, grammar) for t in fp.read_treebank(text)]


def test_empty_treebank_is_uniform(demo_table):
    model = fp.train_actions([], demo_table)
    for state, lookahead in model.classes():
        dist = model.distribution(state, lookahead)
        k = len(dist)
        assert all(abs(p - 1.0 / k) < 1e-12 for p in dist.values())


def test_class_distributions_sum_to_one(demo_table, adversarial_model):
    for model in (fp.ActionModel(demo_table), adversarial_model):
        for state, lookahead in model.classes():
            total = sum(model.distribution(state, lookahead).values())
            assert abs(total - 1.0) <= 1e-9


def test_modification_treebank_trains_that_reduce(demo_normalized, demo_table):
    model = fp.train_actions(_gold_trees(MOD_TREEBANK, demo_normalized),
                             demo_table)
    mod = demo_normalized.rule_by_shape("NP", ["NP", "PP"]).rule_id
    arg = demo_normalized.rule_by_shape("VP", ["v", "NP", "PP"]).rule_id
    conflict = [key for key in model.classes()
                if ("reduce", mod) in demo_table.actions[key]
                and ("reduce", arg) in demo_table.actions[key]]
    assert conflict
    for state, lookahead in conflict:
        if model.counts.get((state, lookahead)):
            assert model.prob(state, lookahead, ("reduce", mod)) > \
                model.prob(state, lookahead, ("reduce", arg))


def test_hand_counted_smoothing(demo_normalized, demo_table):
    # Three modification trees reduce NP -> NP PP three times in the
    # two-action conflict class: add-1 gives 4/5 against 1/5.
    model = fp.train_actions(_gold_trees(MOD_TREEBANK, demo_normalized),
                             demo_table)
    mod = demo_normalized.rule_by_shape("NP", ["NP", "PP"]).rule_id
    arg = demo_normalized.rule_by_shape("VP", ["v", "NP", "PP"]).rule_id
    for (state, lookahead), counter in model.counts.items():
        if counter.get(("reduce", mod)) and lookahead == END_MARKER:
            assert counter[("reduce", mod)] == 3
            assert len(demo_table.actions[(state, lookahead)]) == 2
            assert model.prob(state, lookahead, ("reduce", mod)) == \
                pytest.approx(4 / 5)
            assert model.prob(state, lookahead, ("reduce", arg)) == \
                pytest.approx(1 / 5)
            break
    else:
        pytest.fail("conflict class not trained")


def test_modification_trained_model_ranks_modification_first(demo_normalized,
                                                             demo_table):
    model = fp.train_actions(_gold_trees(MOD_TREEBANK, demo_normalized),
                             demo_table)
    forest = fp.glr_parse("det n v det n prep det n".split(), demo_table)
    ranked = fp.unpack_n_best(forest, model, None)
    # exhaustive scoring oracle: sorting all scored derivations agrees
    scores = [(score, trace_sort_key(d.actions)) for d, score in ranked]
    assert scores == sorted(scores, key=lambda pair: (-pair[0], pair[1]))
    mod = demo_normalized.rule_by_shape("NP", ["NP", "PP"])
    top = ranked[0][0]
    assert any(node.rule is mod for node in top.tree.iter_nodes())


def test_underivable_tree_reports_sentence(demo_normalized, demo_table):
    good = fp.read_treebank("(S (NP (pn Paul)) (VP (v sleeps)))")[0]
    bad = fp.read_treebank("(S (VP (v sleeps)) (NP (pn Paul)))")[0]
    trees = [fp.to_derivation_tree(good, demo_normalized)]
    with pytest.raises(fp.UnderivableTreeError, match="no rule"):
        fp.to_derivation_tree(bad, demo_normalized)
    # a tree bound to a different grammar cannot replay against this table
    other = fp.parse_grammar(
        "terminals: pn v\nstart: S\nS -> NP VP(head)\nNP -> pn\nVP -> v\n")
    foreign = fp.to_derivation_tree(good, other)
    with pytest.raises(fp.UnderivableTreeError, match="sentence 1"):
        fp.train_actions(trees + [foreign], demo_table)


def test_trace_replay_round_trip(demo_table):
    forest = fp.glr_parse("det n aux v det n prep det n".split(), demo_table)
    model = fp.ActionModel(demo_table)
    for derivation, _ in fp.unpack_n_best(forest, model, None):
        assert replay_actions(derivation.actions, demo_table) == derivation.tree


def test_single_action_probability_one_scores_zero(demo_table):
    model = fp.ActionModel(demo_table)
    for (state, lookahead), actions in demo_table.actions.items():
        if len(actions) == 1:
            assert model.logprob(state, lookahead, actions[0]) == 0.0
            break


def test_two_halves_product():
    g = fp.parse_grammar("terminals: a b\nstart: S\nS -> a b(head)\nS -> a+ b(head)\n")
    table = fp.build_table(fp.normalize_kleene(g))
    model = fp.ActionModel(table)
    forest = fp.glr_parse(["a", "b"], table)
    ranked = fp.unpack_n_best(forest, model, None)
    assert len(ranked) == 2
    for derivation, logprob in ranked:
        halves = [model.prob(*step) for step in derivation.actions
                  if model.prob(*step) < 1.0]
        assert logprob == pytest.approx(sum(math.log(p) for p in halves))


def test_derivation_logprob_matches_hand_product(demo_table, adversarial_model):
    forest = fp.glr_parse("det n v det n prep det n".split(), demo_table)
    (derivation, logprob), *_ = fp.unpack_n_best(forest, adversarial_model, 1)
    assert len(derivation.actions) >= 8
    by_hand = 1.0
    for state, lookahead, action in derivation.actions:
        by_hand *= adversarial_model.prob(state, lookahead, action)
    assert logprob == pytest.approx(math.log(by_hand))
    assert derivation_logprob(derivation, adversarial_model) == \
        pytest.approx(logprob)
    assert logprob <= 0.0


def test_unknown_class_uses_floor_never_fails(demo_table):
    model = fp.ActionModel(demo_table)
    lp = model.logprob(demo_table.n_states + 7, "det", ("shift", 1))
    assert lp < 0.0 and math.isfinite(lp)


def test_nbest_ordering_monotone(demo_table):
    forest = fp.glr_parse("det n aux v det n prep det n".split(), demo_table)
    model = fp.ActionModel(demo_table)
    ranked = fp.unpack_n_best(forest, model, None)
    scores = [score for _, score in ranked]
    assert scores == sorted(scores, reverse=True)


def test_uniform_model_tie_break():
    grammar = fp.parse_grammar("""
terminals: n v det prep
start: S
S  -> NP VP(head)
NP -> n
NP -> det n(head)
NP -> NP(head) PP
PP -> prep NP(head)
VP -> v(head) NP : VSUBCAT=NP
VP -> v(head) NP PP : VSUBCAT=NP_PP
""")
    table = fp.build_table(grammar)
    model = fp.ActionModel(table)
    forest = fp.glr_parse("n v det n prep n".split(), table)
    ranked = fp.unpack_n_best(forest, model, None)
    assert len(ranked) == 2
    # both readings pass exactly one binary conflict twice; scores tie
    assert ranked[0][1] == pytest.approx(ranked[1][1])
    keys = [trace_sort_key(d.actions) for d, _ in ranked]
    assert keys == sorted(keys)
    # the modification reduce has the lower rule id, so it sorts first
    mod = grammar.rule_by_shape("NP", ["NP", "PP"])
    assert any(node.rule is mod for node in ranked[0][0].tree.iter_nodes())
    assert not any(node.rule is mod for node in ranked[1][0].tree.iter_nodes())


def test_nbest_cap(demo_table):
    forest = fp.glr_parse("det n aux v det n prep det n".split(), demo_table)
    model = fp.ActionModel(demo_table)
    assert len(fp.unpack_n_best(forest, model, 2)) == 2
    assert len(fp.unpack_n_best(forest, model, 99)) == \
        forest.derivation_count()


def test_exponentiated_scores_finite_positive(demo_table, trained_model):
    forest = fp.glr_parse("det n aux v det n prep det n".split(), demo_table)
    ranked = fp.unpack_n_best(forest, trained_model, None)
    total = sum(math.exp(score) for _, score in ranked)
    assert 0.0 < total < math.inf


class TestPersistence:
    def test_round_trip(self, tmp_path, demo_table, adversarial_model):
        path = tmp_path / "m.model"
        fp.save_model(adversarial_model, path)
        loaded = fp.load_model(path, demo_table)
        assert loaded.counts == adversarial_model.counts
        for state, lookahead in adversarial_model.classes():
            assert loaded.distribution(state, lookahead) == \
                pytest.approx(adversarial_model.distribution(state, lookahead))

    def test_file_format(self, tmp_path, demo_table, adversarial_model):
        path = tmp_path / "m.model"
        fp.save_model(adversarial_model, path)
        for line in path.read_text().splitlines():
            fields = line.split("\t")
            assert len(fields) == 5
            int(fields[0]), int(fields[3]), float(fields[4])

    def test_mismatched_table_rejected(self, tmp_path, adversarial_model):
        small = fp.build_table(
            fp.parse_grammar("terminals: a\nstart: S\nS -> a\n"))
        path = tmp_path / "m.model"
        fp.save_model(adversarial_model, path)
        with pytest.raises(ValueError, match="mismatch"):
            fp.load_model(path, small)

    def test_tampered_probability_rejected(self, tmp_path, demo_table,
                                           adversarial_model):
        path = tmp_path / "m.model"
        fp.save_model(adversarial_model, path)
        lines = path.read_text().splitlines()
        fields = lines[0].split("\t")
        fields[4] = "0.1234567890"
        lines[0] = "\t".join(fields)
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(ValueError, match="disagrees"):
            fp.load_model(path, demo_table)
