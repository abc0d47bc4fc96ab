"""Parse forests: null parses, counting, enumeration, JSON export."""

import json

import pytest

from derivparse import (
    Context, INFINITE, Leaf, Pair, Prod,
    count_parses, enumerate_trees, forest_to_json, load_grammar, parse,
    parse_null, recognize, tree_text, use_context,
)
from derivparse.forest import EMPTY_SET, ForestSet


CATALAN = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862]


def _counts(src: str, words) -> list:
    g = load_grammar(src)
    return [count_parses(parse(g, list(w))) for w in words]


def test_reject_gives_empty_forest():
    g = load_grammar("start = A ;\nA : 'a' ;")
    fs = parse(g, ["b"])
    assert fs.is_empty()
    assert count_parses(fs) == 0
    assert enumerate_trees(fs, 10) == []


def test_unambiguous_parse_yields_one_tree():
    g = load_grammar("start = A ;\nA : 'a' B ;\nB : 'b' ;")
    fs = parse(g, ["a", "b"])
    assert count_parses(fs) == 1
    [t] = enumerate_trees(fs, 10)
    assert tree_text(t) == "A[a B[b]]"


def test_empty_word_parse_uses_null_results():
    g = load_grammar("start = A ;\nA : | 'a' ;")
    fs = parse(g, [])
    assert count_parses(fs) == 1
    [t] = enumerate_trees(fs, 10)
    assert tree_text(t) == "A[]"


def test_ambiguous_word_lists_every_tree():
    g = load_grammar("start = S ;\nS : S S | 'a' ;")
    fs = parse(g, ["a", "a", "a"])
    assert count_parses(fs) == 2
    texts = sorted(tree_text(t) for t in enumerate_trees(fs, 10))
    assert texts == [
        "S[S[S[a] S[a]] S[a]]",
        "S[S[a] S[S[a] S[a]]]",
    ]


def test_catalan_counts():
    g = load_grammar("start = S ;\nS : S S | 'a' ;")
    for n in range(1, 10):
        fs = parse(g, ["a"] * n)
        assert count_parses(fs) == CATALAN[n - 1], n


def test_infinitely_ambiguous_count():
    # the unit cycle S -> S pumps forever on any accepted word
    g = load_grammar("start = S ;\nS : S | 'a' ;", normalize=False)
    fs = parse(g, ["a"])
    assert count_parses(fs) is INFINITE
    assert repr(count_parses(fs)) == "Infinite"


def test_infinite_absorbs_in_arithmetic():
    from derivparse.forest import _add, _mul
    assert _add(INFINITE, 1) is INFINITE
    assert _mul(INFINITE, 2) is INFINITE
    assert _mul(0, INFINITE) == 0  # no parse remains no parse
    assert _mul(INFINITE, 0) == 0


def test_enumeration_is_capped_but_counting_is_not():
    g = load_grammar("start = S ;\nS : S S | 'a' ;")
    fs = parse(g, ["a"] * 8)
    assert count_parses(fs) == CATALAN[7]
    got = enumerate_trees(fs, 5)
    assert len(got) == 5
    assert len({tree_text(t) for t in got}) == 5


def test_enumeration_of_infinite_forest_terminates():
    g = load_grammar("start = S ;\nS : S | 'a' ;", normalize=False)
    fs = parse(g, ["a"])
    got = enumerate_trees(fs, 8)
    # finitely many distinct finite trees exist even though the count is not
    assert got
    assert all("a" in tree_text(t) for t in got)


def test_forest_shares_subtrees_across_ambiguity():
    # exponential tree count, polynomial forest size
    g = load_grammar("start = S ;\nS : S S | 'a' ;")
    fs = parse(g, ["a"] * 16)
    assert count_parses(fs) == 9694845
    payload = forest_to_json(fs)
    assert len(payload["nodes"]) < 2000


def test_parse_null_on_nullable_choice():
    g = load_grammar("start = A ;\nA : | B ;\nB : ;", normalize=False)
    with g.activate():
        fs = parse_null(g.root)
    texts = sorted(tree_text(t) for t in enumerate_trees(fs, 10))
    assert texts == ["A[B[]]", "A[]"]


def test_parse_null_of_non_nullable_is_empty():
    g = load_grammar("start = A ;\nA : 'a' ;")
    with g.activate():
        assert parse_null(g.root).is_empty()


def test_union_deduplicates_and_flattens():
    with use_context(Context()):
        a = ForestSet.single_leaf("a")
        b = ForestSet.single_leaf("b")
        u = a.union(b)
        assert count_parses(u) == 2
        assert count_parses(u.union(a)) == 2   # same object, deduplicated
        fresh = ForestSet.single_leaf("a")
        assert count_parses(u.union(fresh)) == 3  # same label, new object
        assert u.union(u) is u
        assert EMPTY_SET.union(a) is a
        assert a.union(EMPTY_SET) is a


def test_forest_json_schema():
    g = load_grammar("start = S ;\nS : S S | 'a' ;")
    payload = forest_to_json(parse(g, ["a", "a", "a"]))
    assert set(payload) == {"root", "nodes"}
    ids = {n["id"] for n in payload["nodes"]}
    assert payload["root"] in ids
    kinds = {n["kind"] for n in payload["nodes"]}
    assert kinds <= {"leaf", "pair", "prod", "amb", "defer"}
    assert "amb" in kinds
    for n in payload["nodes"]:
        assert set(n) == {"id", "kind", "label", "children"}
        for c in n["children"]:
            assert c in ids
    json.dumps(payload)  # round-trippable


def test_forest_json_empty_marker():
    g = load_grammar("start = S ;\nS : 'a' ;")
    assert forest_to_json(parse(g, ["b"])) == {"root": None, "nodes": []}


def test_ambiguity_nodes_have_at_least_two_children():
    g = load_grammar("start = S ;\nS : S S | 'a' ;")
    payload = forest_to_json(parse(g, ["a"] * 6))
    for n in payload["nodes"]:
        if n["kind"] == "amb":
            assert len(n["children"]) >= 2


def test_tree_text_orders_pairs_and_prods():
    t = Prod("P", (Pair(Leaf("a"), Leaf("b")),))
    assert tree_text(t) == "P[(a,b)]"
