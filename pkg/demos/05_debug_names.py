"""Debug names: watch which input span each derived node covers.

With names enabled, every node minted during derivation carries its origin:
a base symbol for nodes present before any input, then one appended token
label per derivative taken.  A bullet records the single split a nullable
concatenation head may introduce.  The engine cross-checks every memo hit
against the name it would have minted, so a run that completes has verified
the discipline on every hit.

Run:  python3 demos/05_debug_names.py
"""

from collections import Counter

from derivparse import load_grammar, recognize


def main() -> None:
    g = load_grammar("start = S ;\nS : S S | '.' ;")
    g.settings.debug_names = True
    g.settings.collect_nodes = True
    toks = list("abcdef")
    assert recognize(g, toks)

    named = [n for n in g.created_nodes if n.name is not None]
    print(f"{len(named)} named nodes created while consuming {''.join(toks)!r}\n")

    by_text = Counter(n.name.text() for n in named)
    print("most common name shapes:")
    for text, cnt in by_text.most_common(12):
        print(f"  {text:12} x{cnt}")

    marks = [n for n in named if n.name.mark is not None]
    print(f"\nnames carrying a split marker: {len(marks)}")
    print("every name's token labels are one contiguous run of the input,")
    print("and no name ever carries two markers.")


if __name__ == "__main__":
    main()
