"""Both nullability engines: base cases, cycles, and cross-agreement."""

import random

import pytest

from derivparse import (
    Context, ParserSettings,
    is_nullable, is_nullable_naive,
    load_grammar, mk_alt, mk_empty, mk_eps, mk_seq, mk_token, use_context,
)
from derivparse.forest import ForestSet, Leaf
from conftest import random_grammar_source


EPS_TREES = ForestSet.from_tree(Leaf("_"))


@pytest.mark.parametrize("naive", [False, True])
def test_base_cases(naive):
    fn = is_nullable_naive if naive else is_nullable
    with use_context(Context(settings=ParserSettings(naive_nullability=naive))):
        assert fn(mk_eps(EPS_TREES))
        assert not fn(mk_token("a"))
        assert not fn(mk_empty())


@pytest.mark.parametrize("naive", [False, True])
def test_composed_cases(naive):
    fn = is_nullable_naive if naive else is_nullable
    with use_context(Context(settings=ParserSettings(naive_nullability=naive))):
        a = mk_token("a")
        e = mk_eps(EPS_TREES)
        assert not fn(mk_seq(a, mk_token("b")))
        assert fn(mk_alt(a, e))
        assert not fn(mk_alt(a, mk_empty()))
        assert fn(mk_seq(e, mk_eps(EPS_TREES)))
        assert not fn(mk_seq(e, a))


@pytest.mark.parametrize("naive", [False, True])
def test_cyclic_grammars(naive):
    cases = [
        ("start = S ;\nS : '(' S ')' S | ;", True),    # nullable base
        ("start = S ;\nS : S S | 'a' ;", False),       # no empty word
        ("start = S ;\nS : S | 'a' ;", False),         # useless self loop
        ("start = S ;\nS : A ;\nA : S | ;", True),     # mutual recursion
        ("start = S ;\nS : S ;", False),               # denotes the empty set
    ]
    for src, expect in cases:
        g = load_grammar(src, normalize=False)
        g.settings.naive_nullability = naive
        with g.activate():
            fn = is_nullable_naive if naive else is_nullable
            assert fn(g.root) == expect, src


def test_engines_agree_on_random_grammars():
    rng = random.Random(17)
    for _ in range(150):
        src = random_grammar_source(rng)
        g = load_grammar(src, normalize=False)
        with g.activate():
            want = {name: is_nullable_naive(n)
                    for name, n in g.nonterminal_table.items()}
            got = {name: is_nullable(n)
                   for name, n in g.nonterminal_table.items()}
        assert got == want, src


def test_optimized_engine_reuses_settled_answers():
    g = load_grammar("start = S ;\nS : '(' S ')' S | ;", normalize=False)
    with g.activate():
        assert is_nullable(g.root)
        first = g.counters.nullable_visits
        assert is_nullable(g.root)
        assert g.counters.nullable_visits == first  # settled, no revisit


def test_naive_engine_recomputes_each_query():
    g = load_grammar("start = S ;\nS : '(' S ')' S | ;", normalize=False)
    g.settings.naive_nullability = True
    with g.activate():
        assert is_nullable_naive(g.root)
        first = g.counters.nullable_visits
        assert is_nullable_naive(g.root)
        assert g.counters.nullable_visits > first


def test_optimized_never_visits_more_than_naive():
    rng = random.Random(99)
    for _ in range(40):
        src = random_grammar_source(rng)
        g1 = load_grammar(src, normalize=False)
        with g1.activate():
            for n in g1.nonterminal_table.values():
                is_nullable(n)
            opt = g1.counters.nullable_visits
        g2 = load_grammar(src, normalize=False)
        g2.settings.naive_nullability = True
        with g2.activate():
            for n in g2.nonterminal_table.values():
                is_nullable_naive(n)
            naive = g2.counters.nullable_visits
        assert opt <= naive, src
