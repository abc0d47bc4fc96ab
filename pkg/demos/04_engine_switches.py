"""The three performance mechanisms, toggled one at a time.

Each switch changes work counts, never answers: the accelerated nullability
fixed point vs full recomputation, the one-slot derivative cache vs a
per-token map, and construction-time compaction vs raw construction.

Run:  python3 demos/04_engine_switches.py
"""

import sys

from derivparse import load_grammar, recognize

# without compaction the derived graph gets deep; recursive walks need room
sys.setrecursionlimit(20000)

ARITH = """
start = E ;
E : T '+' E | T ;
T : F '*' T | F ;
F : '-' F | '(' E ')' | 'n' ;
"""


def tokens(n: int) -> list:
    toks = ["-", "n"]
    ops = ["+", "*"]
    i = 0
    while len(toks) < n:
        toks.extend([ops[i % 2], "n"])
        i += 1
    return toks


def run(n: int, **settings) -> dict:
    g = load_grammar(ARITH)
    for k, v in settings.items():
        setattr(g.settings, k, v)
    g.counters.reset()
    toks = tokens(n)
    ok = recognize(g, toks)
    c = g.counters
    return {
        "accept": ok,
        "nodes": c.nodes_created,
        "uncached": c.derive_calls_uncached,
        "cached": c.derive_calls_cached,
        "visits": c.nullable_visits,
    }


def show(label: str, stats: dict) -> None:
    print(f"  {label:28} nodes={stats['nodes']:<7} uncached={stats['uncached']:<7} "
          f"cached={stats['cached']:<7} visits={stats['visits']}")
    assert stats["accept"]


def main() -> None:
    n = 600
    print(f"arithmetic grammar, {n} tokens\n")
    print("nullability:")
    show("accelerated fixed point", run(n))
    show("full recomputation", run(n, naive_nullability=True))
    print("derivative cache:")
    show("one slot per node", run(n))
    show("map per node", run(n, memo_full=True))
    print("compaction:")
    show("on", run(n))
    show("off", run(n, compaction=False))


if __name__ == "__main__":
    main()
