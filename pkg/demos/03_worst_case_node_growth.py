"""Node growth on the hardest known grammar stays cubic.

L : L L | '.' ; forces maximal sharing pressure: every substring of the
input is derivable, so the graph of derivatives is as dense as it gets.
Feeding pairwise-distinct tokens (the wildcard matches anything) keeps every
substring's derivative distinct; nodes-created divided by n^3 then settles
to a constant instead of blowing up.

Run:  python3 demos/03_worst_case_node_growth.py
"""

import time

from derivparse import load_grammar, parse

WORST = "start = L ;\nL : L L | '.' ;"


def main() -> None:
    print(f"{'n':>4} {'nodes created':>14} {'nodes/n^3':>10} {'seconds':>8}")
    for n in (20, 40, 80, 160):
        g = load_grammar(WORST)
        g.counters.reset()
        toks = [str(i) for i in range(n)]
        t0 = time.perf_counter()
        fs = parse(g, toks)
        dt = time.perf_counter() - t0
        assert not fs.is_empty()
        made = g.counters.nodes_created
        print(f"{n:>4} {made:>14} {made / n**3:>10.4f} {dt:>8.2f}")


if __name__ == "__main__":
    main()
