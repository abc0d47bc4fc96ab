"""The closed algebra of tree rewrites carried by reduction nodes.

A reduction is a tag plus a payload, never an opaque Python callable: the
forest layer interprets tags when trees are finally materialized, and the
counting layer knows each tag's effect on distinct-tree counts without
running it.  Compaction composes and floats reductions, so the set of tags
must be closed under those rewrites; that is why the two lift tags exist
(floating a reduction out of one side of a concatenation applies it to just
that pair component).
"""

from __future__ import annotations

PAIR_LEFT = "pair-left"            # u -> (s, u) for each s in a known tree set
PAIR_RIGHT = "pair-right"          # u -> (u, s)
PAIR_LEFT_NULL = "pair-left-null"  # like pair-left, tree set taken lazily from a node's empty-word parses
REASSOCIATE = "reassociate"        # (t1, (t2, t3)) -> ((t1, t2), t3)
PRODUCTION = "production"          # right-nested tuple of k children -> named production tree
COMPOSE = "compose"                # g after f
CONSTANT = "constant"              # every tree -> one fixed tree
LIFT_LEFT = "lift-left"            # (u1, u2) -> (f(u1), u2)
LIFT_RIGHT = "lift-right"          # (u1, u2) -> (u1, f(u2))


class Reduction:
    __slots__ = ("kind", "payload")

    def __init__(self, kind: str, payload=None):
        self.kind = kind
        self.payload = payload

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Reduction)
            and self.kind == other.kind
            and self.payload == other.payload
        )

    def __hash__(self) -> int:
        try:
            return hash((self.kind, self.payload))
        except TypeError:
            return hash((self.kind, id(self.payload)))

    def describe(self) -> str:
        k = self.kind
        if k == PRODUCTION:
            name, arity = self.payload
            return f"production:{name}/{arity}"
        if k == COMPOSE:
            g, f = self.payload
            return f"({g.describe()} . {f.describe()})"
        if k in (LIFT_LEFT, LIFT_RIGHT):
            return f"{k}({self.payload.describe()})"
        if k == PAIR_LEFT_NULL:
            return f"{k}(#{self.payload.id})"
        return k

    def __repr__(self) -> str:
        return f"Reduction({self.describe()})"


def pair_left(tree_set) -> Reduction:
    return Reduction(PAIR_LEFT, tree_set)


def pair_right(tree_set) -> Reduction:
    return Reduction(PAIR_RIGHT, tree_set)


def pair_left_null(node) -> Reduction:
    """Pair on the left with `node`'s empty-word parses, looked up lazily.

    Used when deriving a concatenation whose left half is nullable: the left
    half's trees are not known yet (extraction may not even terminate if
    forced eagerly on a cyclic graph), so the node itself is carried.
    """
    return Reduction(PAIR_LEFT_NULL, node)


def reassociate() -> Reduction:
    return Reduction(REASSOCIATE)


def production(name: str, arity: int) -> Reduction:
    return Reduction(PRODUCTION, (name, arity))


def compose(g: Reduction, f: Reduction) -> Reduction:
    """g after f."""
    return Reduction(COMPOSE, (g, f))


def constant(tree) -> Reduction:
    return Reduction(CONSTANT, tree)


def lift_left(f: Reduction) -> Reduction:
    return Reduction(LIFT_LEFT, f)


def lift_right(f: Reduction) -> Reduction:
    return Reduction(LIFT_RIGHT, f)
