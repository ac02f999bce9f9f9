import re
from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given
from hypothesis import strategies as st

from logsummary.errors import EmptyLog, ParseError
from logsummary.extraction import (
    LogIE,
    TripleCache,
    extract_for_template,
    extract_rule_triples,
    process_log,
    substitute,
)
from logsummary.openie import HeuristicOpenIE, extract_openie_triples, is_verb
from logsummary.synthetic import synthetic_corpus
from logsummary.templates import Template, TemplateStore, split_template, tokenize
from logsummary.triples import OPENIE, RE, Triple, parse_triples, read_triples, write_triples

BANDWIDTH_LOG = "Link bandwidth lost totally is resumed. ( Reason = fault )"
BANDWIDTH = Template(0, tuple("Link bandwidth lost totally is resumed . ( Reason = * )".split()))


def keys(triples):
    return [t.key for t in triples]


class TestRuleTriples:
    def test_equals(self):
        out = extract_rule_triples("( Reason = VAR1 )".split())
        assert keys(out) == [("Reason", "is", "VAR1")]
        assert out[0].source == RE

    def test_colon(self):
        assert keys(extract_rule_triples("status : ok".split())) == [("status", "is", "ok")]

    def test_flags(self):
        # by hand: --retries takes the next non-flag token, --verbose has none
        assert keys(extract_rule_triples("--retries 3 --verbose".split())) == [
            ("retries", "is", "3"), ("verbose", "is", "set")]

    def test_multi_token_key(self):
        assert keys(extract_rule_triples("( Reason code = 5 )".split())) == [
            ("Reason code", "is", "5")]

    def test_several_pairs_in_one_clause(self):
        assert keys(extract_rule_triples("a = 1 b = 2".split())) == [
            ("a", "is", "1"), ("b", "is", "2")]

    def test_comma_separated_pairs(self):
        assert keys(extract_rule_triples("( value = VAR2 , limit = 85 )".split())) == [
            ("value", "is", "VAR2"), ("limit", "is", "85")]

    def test_flag_key_with_equals(self):
        assert keys(extract_rule_triples(tokenize("--retries=4"))) == [("retries", "is", "4")]

    def test_unparseable(self):
        assert extract_rule_triples("( = )".split()) == []
        assert extract_rule_triples("( foo bar )".split()) == []

    @given(st.lists(st.sampled_from(["k", "v", "key", "=", "(", ")", ",", "--f", "x", "VAR1"]),
                    max_size=15))
    def test_equals_colon_symmetry(self, toks):
        swapped = [":" if t == "=" else t for t in toks]
        assert keys(extract_rule_triples(toks)) == keys(extract_rule_triples(swapped))


class TestOpenIE:
    def test_bandwidth_free_text(self):
        out = extract_openie_triples("Link bandwidth lost totally is resumed .".split())
        assert ("Link bandwidth", "is", "resumed") in keys(out)

    def test_interface(self):
        out = extract_openie_triples(tokenize("Interface ae3, changed state to down"))
        assert keys(out) == [("Interface ae3", "changed state to", "down")]

    def test_no_verb(self):
        assert extract_openie_triples(["foobar", "quux"]) == []

    def test_apposition(self):
        assert keys(extract_openie_triples(tokenize("node R01, master"))) == [
            ("node R01", "is", "master")]

    def test_conjunction_split(self):
        out = extract_openie_triples(tokenize("replication failed and will retry"))
        assert keys(out) == [("replication", "failed", None), ("replication", "will retry", None)]

    def test_prepositions_join_predicate(self):
        out = extract_openie_triples(tokenize("connection closed by remote host"))
        assert keys(out) == [("connection", "closed by", "remote host")]

    def test_predicate_needs_an_argument(self):
        assert extract_openie_triples(["failed"]) == []

    def test_placeholders_never_predicates(self):
        assert not is_verb("VAR1")
        out = extract_openie_triples("VAR1 started VAR2".split())
        assert keys(out) == [("VAR1", "started", "VAR2")]

    @pytest.mark.parametrize("word,verb", [
        ("changed", True), ("stopped", True), ("retries", True), ("receiving", True),
        ("lost", True), ("state", False), ("block", False), ("blocked", True),
        ("interface", False), ("status", False),
    ])
    def test_verb_morphology(self, word, verb):
        assert is_verb(word) is verb

    @given(st.lists(st.sampled_from(["a", "b", "is", "failed", "to", ",", "and", "VAR1", ".",
                                     "opened", "on", "x"]), max_size=20))
    def test_every_triple_has_relation_and_argument(self, toks):
        for t in HeuristicOpenIE()(toks):
            assert t.relation
            assert t.arg1 or t.arg2
            assert t.source == OPENIE


class TestExtractForTemplate:
    def test_bandwidth(self):
        out = extract_for_template(BANDWIDTH, split_template(BANDWIDTH))
        assert keys(out) == [("Reason", "is", "VAR1"), ("Link bandwidth", "is", "resumed")]
        assert [t.source for t in out] == [RE, OPENIE]
        assert all(t.origin_template == 0 and t.origin_log is None for t in out)

    def test_free_text_only(self):
        t = Template(1, tuple("connection closed by remote host".split()))
        out = extract_for_template(t)
        assert all(x.source == OPENIE for x in out) and out

    def test_structured_only(self):
        t = Template(2, tuple("( a = * , b = 2 )".split()))
        out = extract_for_template(t)
        assert keys(out) == [("a", "is", "VAR1"), ("b", "is", "2")]
        assert all(x.source == RE for x in out)

    def test_split_must_belong(self):
        with pytest.raises(ValueError):
            extract_for_template(BANDWIDTH, split_template(Template(5, ("a",))))


class TestProcessLog:
    def test_bandwidth_replay(self):
        store = TemplateStore(templates={0: BANDWIDTH})
        cache = TripleCache()
        cache.put(BANDWIDTH, extract_for_template(BANDWIDTH))
        out = process_log(store, cache, BANDWIDTH_LOG, log_index=4)
        assert keys(out) == [("Reason", "is", "fault"), ("Link bandwidth", "is", "resumed")]
        assert all(t.origin_log == 4 for t in out)

    def test_hit_does_no_extraction(self):
        calls = []

        def spy(tokens, template_id=None):
            calls.append(template_id)
            return HeuristicOpenIE()(tokens, template_id)

        ie = LogIE(extractor=spy)
        first = ie.process_log(BANDWIDTH_LOG)
        n_calls = len(calls)
        assert ie.stats.extractions == 1
        second = ie.process_log(BANDWIDTH_LOG)
        assert second == first
        assert len(calls) == n_calls
        assert ie.stats.extractions == 1 and ie.stats.hits == 1

    def test_unseen_log_then_replay(self):
        ie = LogIE()
        cold = ie.process_log("Interface ae3, changed state to down", 0)
        warm = ie.process_log("Interface ae3, changed state to down", 0)
        assert cold == warm
        assert keys(cold) == [("Interface ae3", "changed state to", "down")]

    def test_generalization_invalidates_cache(self):
        ie = LogIE()
        a = ie.process_log("job alpha finished on node 1", 0)
        assert keys(a) == [("job alpha", "finished on", "node 1")]
        b = ie.process_log("job beta finished on node 2", 1)
        assert keys(b) == [("job beta", "finished on", "node 2")]
        assert ie.store[0].tokens == ("job", "*", "finished", "on", "node", "*")
        assert ie.stats.extractions == 2

    def test_empty_log(self):
        with pytest.raises(EmptyLog):
            LogIE().process_log("   ")

    def test_substitute_handles_two_digit_ordinals(self):
        t = Triple(relation="is", arg1="VAR1", arg2="VAR10 VAR2")
        from logsummary.templates import MatchResult
        m = MatchResult(0, tuple((i, f"v{i}") for i in range(1, 11)))
        assert substitute([t], m)[0].key == ("v1", "is", "v10 v2")


def test_cache_coherence_and_substitution_totality():
    logs = synthetic_corpus(1500, 24, seed=21)
    cached, cold = LogIE(), LogIE(use_cache=False)
    for i, log in enumerate(logs):
        a = cached.process_log(log, i)
        b = cold.process_log(log, i)
        assert a == b
        for t in a:
            assert t.relation
            assert not any(re.fullmatch(r"VAR\d+", w) for _, text in t.elements()
                           for w in text.split(" "))
    assert cached.stats.extractions < 60
    assert cold.stats.extractions == len(logs)


def test_threadsafe_hit_path_matches_serial():
    logs = synthetic_corpus(600, 20, seed=4)
    store = TemplateStore()
    for log in logs:
        store.learn_log(log)
    serial = LogIE(TemplateStore(templates=dict(store.templates)))
    expected = [serial.process_log(log, i) for i, log in enumerate(logs)]
    ie = LogIE(store, threadsafe=True)
    with ThreadPoolExecutor(8) as pool:
        got = list(pool.map(lambda p: ie.process_log(p[1], p[0]), enumerate(logs)))
    assert got == expected
    assert ie.stats.lookups == len(logs)


class TestTripleFile:
    def test_round_trip(self, tmp_path):
        ie = LogIE()
        triples = [t for i, log in enumerate(synthetic_corpus(50, 20, seed=1))
                   for t in ie.process_log(log, i)]
        path = tmp_path / "triples.jsonl"
        write_triples(triples, path)
        assert read_triples(path) == triples

    def test_record_shape(self):
        t = Triple(relation="is", arg1="Reason", arg2="fault", source=RE,
                   origin_template=0, origin_log=3)
        assert t.to_record() == {
            "origin_log": 3, "template_id": 0, "source": "RE",
            "elements": [{"role": "arg1", "text": "Reason"}, {"role": "relation", "text": "is"},
                         {"role": "arg2", "text": "fault"}]}

    def test_two_element_triple(self):
        t = Triple(relation="terminating", arg1="PacketResponder 1")
        assert Triple.from_record(t.to_record()) == t
        assert t.render() == "( PacketResponder 1 | terminating )"

    @pytest.mark.parametrize("line", [
        "{", '{"elements": [{"role": "arg1", "text": "a"}]}',
        '{"elements": [{"role": "verb", "text": "a"}]}', '{"source": "X", "elements": '
        '[{"role": "relation", "text": "a"}]}',
    ])
    def test_malformed(self, line):
        with pytest.raises(ParseError) as exc:
            parse_triples(["", line])
        assert exc.value.line == 2
