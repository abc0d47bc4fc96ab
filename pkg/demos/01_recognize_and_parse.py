"""Load a grammar from text, test words against it, and extract parse trees.

Run:  python3 demos/01_recognize_and_parse.py
"""

import json

from derivparse import (
    count_parses, enumerate_trees, forest_to_json, load_grammar, parse,
    recognize, tree_text,
)

SOURCE = """
# nested function-call expressions: f(x), f(x,g(y)), ...
start = Call ;
Call : 'id' '(' Args ')' | 'id' ;
Args : Call ',' Args | Call ;
"""


def main() -> None:
    g = load_grammar(SOURCE)

    print("recognition:")
    for text in ["id", "id ( id )", "id ( id , id ( id ) )", "id ( )"]:
        toks = text.split()
        print(f"  {text!r:32} -> {'accept' if recognize(g, toks) else 'reject'}")

    toks = "id ( id , id ( id ) )".split()
    fs = parse(g, toks)
    print(f"\nparses of {' '.join(toks)!r}: {count_parses(fs)}")
    for t in enumerate_trees(fs, 5):
        print(" ", tree_text(t))

    payload = forest_to_json(fs)
    print(f"\nforest as JSON: {len(payload['nodes'])} nodes, root id {payload['root']}")
    print(json.dumps(payload, indent=2)[:400], "...")


if __name__ == "__main__":
    main()
