"""Shared parse forests: compact tree-set values and their consumers.

A forest node denotes a set of parse trees:

  leaf   one token leaf
  pair   the cross product of two child sets (one node, not |A|x|B|)
  prod   a named production over child sets (cross product of the children)
  amb    the union of the child sets
  defer  an unapplied Reduction over a child set

Forests may be cyclic (a cyclic grammar parse can denote infinitely many
trees), so everything here that walks a forest is iterative and
cycle-aware.  parse_null extracts the forest of empty-word parses from a
grammar node using the same shell-first construction the derivative engine
uses for its own cycles.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from typing import Callable, Optional

from . import grammar as _g
from . import reductions
from .nullability import is_nullable
from .reductions import Reduction


# --- resolved trees ---------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    label: str


@dataclass(frozen=True)
class Pair:
    left: object
    right: object


@dataclass(frozen=True)
class Prod:
    name: str
    children: tuple


def tree_text(t) -> str:
    """Deterministic rendering, usable as a total order key."""
    if isinstance(t, Leaf):
        return t.label
    if isinstance(t, Pair):
        return f"({tree_text(t.left)},{tree_text(t.right)})"
    if isinstance(t, Prod):
        inner = " ".join(tree_text(c) for c in t.children)
        return f"{t.name}[{inner}]"
    return repr(t)


# --- forest graph -----------------------------------------------------------

LEAF, PAIR, PROD, AMB, DEFER = "leaf", "pair", "prod", "amb", "defer"

_fnode_ids = itertools.count(1)


class FNode:
    __slots__ = ("id", "kind", "label", "left", "right", "children", "red",
                 "in_progress", "leaked")

    def __init__(self, kind: str):
        self.id = next(_fnode_ids)
        self.kind = kind
        self.label = None
        self.left = None
        self.right = None
        self.children = None
        self.red = None
        self.in_progress = False
        self.leaked = False

    def __repr__(self) -> str:
        return f"<{self.kind}@{self.id}>"


def leaf_node(label: str) -> FNode:
    n = FNode(LEAF)
    n.label = label
    return n


def pair_node(left: FNode, right: FNode) -> FNode:
    n = FNode(PAIR)
    n.left = left
    n.right = right
    return n


def prod_node(name: str, children: list) -> FNode:
    n = FNode(PROD)
    n.label = name
    n.children = list(children)
    return n


def amb_node(children: list) -> FNode:
    n = FNode(AMB)
    n.children = list(children)
    return n


def defer_node(red: Reduction, inner: FNode) -> FNode:
    n = FNode(DEFER)
    n.red = red
    n.left = inner
    return n


class ForestSet:
    """A set of parse trees, represented by one forest root (or none)."""

    __slots__ = ("root",)

    def __init__(self, root: Optional[FNode] = None):
        self.root = root

    def is_empty(self) -> bool:
        return self.root is None

    def union(self, other: "ForestSet") -> "ForestSet":
        a, b = self.root, other.root
        if a is None:
            return other
        if b is None or a is b:
            return self
        items = []
        seen = set()
        for r in (a, b):
            group = r.children if (r.kind == AMB and not r.in_progress) else (r,)
            for it in group:
                if it.id not in seen:
                    seen.add(it.id)
                    items.append(it)
        if len(items) == 1:
            return ForestSet(items[0])
        return ForestSet(amb_node(items))

    def apply(self, red: Reduction) -> "ForestSet":
        if self.root is None:
            return EMPTY_SET
        return ForestSet(defer_node(red, self.root))

    @staticmethod
    def single_leaf(label: str) -> "ForestSet":
        return ForestSet(leaf_node(label))

    @staticmethod
    def from_tree(tree) -> "ForestSet":
        return ForestSet(_fnode_from_tree(tree))

    def __repr__(self) -> str:
        return f"ForestSet({self.root!r})"


EMPTY_SET = ForestSet(None)


def _fnode_from_tree(t) -> FNode:
    if isinstance(t, Leaf):
        return leaf_node(t.label)
    if isinstance(t, Pair):
        return pair_node(_fnode_from_tree(t.left), _fnode_from_tree(t.right))
    if isinstance(t, Prod):
        return prod_node(t.name, [_fnode_from_tree(c) for c in t.children])
    raise TypeError(f"not a tree: {t!r}")


# --- empty-word extraction --------------------------------------------------

def parse_null(node) -> ForestSet:
    """The forest of parses of the empty word at a grammar node.

    Memoized on the node.  Cyclic grammars are handled shell-first, exactly
    like the derivative cache: a forest shell is registered before children
    are extracted, so a cycle re-entry picks up the shell.  Non-nullable
    nodes short-circuit to the empty set, which prunes cycles that would
    otherwise denote zero finite trees.
    """
    memo = node.pn_memo
    if memo is not None:
        r = memo.root
        if r is not None and r.in_progress:
            r.leaked = True
        return memo
    ENTER, COMBINE = 0, 1
    work = [(ENTER, node)]
    while work:
        phase, n = work.pop()
        if phase == ENTER:
            if n.pn_memo is not None:
                continue
            form = n.form
            if form == _g.EPSILON:
                n.pn_memo = n.results
                continue
            if form == _g.EMPTY or form == _g.TOKEN or not is_nullable(n):
                n.pn_memo = EMPTY_SET
                continue
            if form == _g.ALT:
                shell = FNode(AMB)
            elif form == _g.SEQ:
                shell = FNode(PAIR)
            else:  # RED
                shell = FNode(DEFER)
                shell.red = n.fn
            shell.in_progress = True
            n.pn_memo = ForestSet(shell)
            work.append((COMBINE, n))
            if form == _g.RED:
                work.append((ENTER, n.left))
            else:
                work.append((ENTER, n.right))
                work.append((ENTER, n.left))
        else:
            shell = n.pn_memo.root
            form = n.form
            if form == _g.ALT:
                items = []
                seen = set()
                for child in (n.left, n.right):
                    r = child.pn_memo.root
                    if r is None:
                        continue
                    if r.kind == AMB and not r.in_progress:
                        group = r.children
                    else:
                        if r.in_progress:
                            r.leaked = True
                        group = (r,)
                    for it in group:
                        if it.id not in seen:
                            seen.add(it.id)
                            items.append(it)
                if not items:
                    n.pn_memo = EMPTY_SET
                elif len(items) == 1 and not shell.leaked:
                    n.pn_memo = ForestSet(items[0])
                else:
                    shell.children = items
                    shell.in_progress = False
            elif form == _g.SEQ:
                l = n.left.pn_memo.root
                r = n.right.pn_memo.root
                if l is None or r is None:
                    n.pn_memo = EMPTY_SET
                    continue
                if l.in_progress:
                    l.leaked = True
                if r.in_progress:
                    r.leaked = True
                shell.left = l
                shell.right = r
                shell.in_progress = False
            else:  # RED
                c = n.left.pn_memo.root
                if c is None:
                    n.pn_memo = EMPTY_SET
                    continue
                if c.in_progress:
                    c.leaked = True
                shell.left = c
                shell.in_progress = False
    return node.pn_memo


# --- counting ---------------------------------------------------------------

class _Infinite:
    __slots__ = ()

    def __repr__(self) -> str:
        return "Infinite"


INFINITE = _Infinite()


def _mul(a, b):
    if a == 0 or b == 0:
        return 0
    if a is INFINITE or b is INFINITE:
        return INFINITE
    return a * b


def _add(a, b):
    if a is INFINITE or b is INFINITE:
        return INFINITE
    return a + b


def _reduction_count(red: Reduction) -> Callable:
    """The effect of a reduction on a distinct-tree count, as a function.

    All loader-produced reductions are multiplicity-preserving or
    multiplicative (pairing against a known set).  The constant tag collapses
    any non-empty input to one tree; a constant nested under a lift would
    need the companion component's count to be exact, which the loader never
    produces, so that corner is approximated by the plain constant rule.
    """
    stages = []
    stack = [red]
    while stack:
        r = stack.pop()
        k = r.kind
        if k == reductions.COMPOSE:
            g, f = r.payload
            stack.append(g)
            stack.append(f)
        elif k in (reductions.LIFT_LEFT, reductions.LIFT_RIGHT):
            stack.append(r.payload)
        elif k in (reductions.PAIR_LEFT, reductions.PAIR_RIGHT):
            m = count_parses(r.payload)
            stages.append(("mul", m))
        elif k == reductions.PAIR_LEFT_NULL:
            m = count_parses(parse_null(r.payload))
            stages.append(("mul", m))
        elif k == reductions.CONSTANT:
            stages.append(("collapse", None))
        else:  # reassociate, production: bijective on tuples
            pass

    def run(x):
        for op, m in stages:
            if op == "mul":
                x = _mul(m, x)
            else:
                x = 0 if x == 0 else 1
        return x

    return run


def count_parses(fs: ForestSet):
    """How many distinct trees the forest denotes; INFINITE for cyclic pumps."""
    root = fs.root
    if root is None:
        return 0
    counts: dict = {}
    onstack: set = set()
    ENTER, COMBINE = 0, 1
    work = [(ENTER, root)]
    while work:
        phase, n = work.pop()
        nid = n.id
        if phase == ENTER:
            if nid in counts or nid in onstack:
                continue
            k = n.kind
            if k == LEAF:
                counts[nid] = 1
                continue
            onstack.add(nid)
            work.append((COMBINE, n))
            if k == PAIR:
                work.append((ENTER, n.left))
                work.append((ENTER, n.right))
            elif k == DEFER:
                work.append((ENTER, n.left))
            else:
                for c in n.children:
                    work.append((ENTER, c))
        else:
            onstack.discard(nid)
            k = n.kind
            if k == PAIR:
                v = _mul(counts.get(n.left.id, INFINITE),
                         counts.get(n.right.id, INFINITE))
            elif k == PROD:
                v = 1
                for c in n.children:
                    v = _mul(v, counts.get(c.id, INFINITE))
            elif k == AMB:
                v = 0
                for c in n.children:
                    v = _add(v, counts.get(c.id, INFINITE))
            else:  # DEFER
                v = _reduction_count(n.red)(counts.get(n.left.id, INFINITE))
            counts[nid] = v
    return counts[root.id]


# --- enumeration ------------------------------------------------------------

def _payload_roots(red: Reduction) -> list:
    """Roots of every forest a reduction's payload references (lazy ones
    forced through parse_null)."""
    out = []
    stack = [red]
    while stack:
        r = stack.pop()
        k = r.kind
        if k == reductions.COMPOSE:
            g, f = r.payload
            stack.append(g)
            stack.append(f)
        elif k in (reductions.LIFT_LEFT, reductions.LIFT_RIGHT):
            stack.append(r.payload)
        elif k in (reductions.PAIR_LEFT, reductions.PAIR_RIGHT):
            if r.payload.root is not None:
                out.append(r.payload.root)
        elif k == reductions.PAIR_LEFT_NULL:
            fs = parse_null(r.payload)
            if fs.root is not None:
                out.append(fs.root)
    return out


def _fchildren(n: FNode) -> tuple:
    k = n.kind
    if k == PAIR:
        return (n.left, n.right)
    if k == PROD or k == AMB:
        return tuple(n.children or ())
    if k == DEFER:
        return (n.left,) + tuple(_payload_roots(n.red))
    return ()


def _is_cyclic(root: FNode) -> bool:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {}
    stack = [(root, None)]
    while stack:
        n, it = stack.pop()
        if it is None:
            c = color.get(n.id, WHITE)
            if c == GRAY:
                return True
            if c == BLACK:
                continue
            color[n.id] = GRAY
            it = iter(_fchildren(n))
        advanced = False
        for child in it:
            cc = color.get(child.id, WHITE)
            if cc == GRAY:
                return True
            if cc == WHITE:
                stack.append((n, it))
                stack.append((child, None))
                advanced = True
                break
        if not advanced:
            color[n.id] = BLACK
    return False


def _forest_digests(root: FNode) -> dict:
    """Structural digest per node (ids excluded, so stable across runs);
    cycles are cut with a fixed marker at back edges."""
    digests: dict = {}
    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict = {}
    stack = [(root, None)]
    while stack:
        n, it = stack.pop()
        if it is None:
            c = color.get(n.id, WHITE)
            if c == BLACK:
                continue
            if c == GRAY:
                continue
            color[n.id] = GRAY
            it = iter(_fchildren(n))
        advanced = False
        for child in it:
            cc = color.get(child.id, WHITE)
            if cc == WHITE:
                stack.append((n, it))
                stack.append((child, None))
                advanced = True
                break
        if advanced:
            continue
        color[n.id] = BLACK
        h = hashlib.sha1()
        h.update(n.kind.encode())
        if n.label is not None:
            h.update(b"\x00" + str(n.label).encode())
        if n.kind == DEFER:
            h.update(b"\x00" + n.red.describe().encode())
        for child in _fchildren(n):
            h.update(b"\x01")
            h.update(digests.get(child.id, b"cycle"))
        digests[n.id] = h.digest()
    return digests


def _dedup(trees):
    return list(dict.fromkeys(trees))


def apply_reduction(red: Reduction, tree, *, limit: int = 64) -> list:
    """Apply one reduction to one resolved tree; one-to-many, total."""

    def enum_root(r: Optional[FNode]) -> list:
        if r is None:
            return []
        return enumerate_trees(ForestSet(r), limit)

    return _apply(red, tree, enum_root)


def _apply(red: Reduction, t, enum_root) -> list:
    k = red.kind
    if k == reductions.PAIR_LEFT:
        return [Pair(s, t) for s in enum_root(red.payload.root)]
    if k == reductions.PAIR_RIGHT:
        return [Pair(t, s) for s in enum_root(red.payload.root)]
    if k == reductions.PAIR_LEFT_NULL:
        return [Pair(s, t) for s in enum_root(parse_null(red.payload).root)]
    if k == reductions.REASSOCIATE:
        if isinstance(t, Pair) and isinstance(t.right, Pair):
            return [Pair(Pair(t.left, t.right.left), t.right.right)]
        return [t]
    if k == reductions.PRODUCTION:
        name, arity = red.payload
        parts = []
        cur = t
        while len(parts) < arity - 1 and isinstance(cur, Pair):
            parts.append(cur.left)
            cur = cur.right
        parts.append(cur)
        if len(parts) != arity:
            parts = [t]
        return [Prod(name, tuple(parts))]
    if k == reductions.CONSTANT:
        return [red.payload]
    if k == reductions.COMPOSE:
        g, f = red.payload
        out = []
        for s in _apply(f, t, enum_root):
            out.extend(_apply(g, s, enum_root))
        return _dedup(out)
    if k == reductions.LIFT_LEFT:
        if isinstance(t, Pair):
            return [Pair(a, t.right) for a in _apply(red.payload, t.left, enum_root)]
        return [t]
    if k == reductions.LIFT_RIGHT:
        if isinstance(t, Pair):
            return [Pair(t.left, b) for b in _apply(red.payload, t.right, enum_root)]
        return [t]
    raise ValueError(f"unknown reduction kind: {k!r}")


def _combine(n: FNode, lists, enum_root, limit: int, digests) -> list:
    k = n.kind
    if k == LEAF:
        return [Leaf(n.label)]
    if k == PAIR:
        left, right = lists(n.left), lists(n.right)
        out = []
        for a in left:
            for b in right:
                out.append(Pair(a, b))
                if len(out) >= limit * 4:
                    break
            if len(out) >= limit * 4:
                break
        return _dedup(out)[:limit]
    if k == PROD:
        combos = [()]
        for c in n.children:
            nxt = []
            cl = lists(c)
            for t in combos:
                for x in cl:
                    nxt.append(t + (x,))
                    if len(nxt) >= limit * 4:
                        break
                if len(nxt) >= limit * 4:
                    break
            combos = nxt
        return _dedup(Prod(n.label, t) for t in combos)[:limit]
    if k == AMB:
        ordered = sorted(n.children, key=lambda c: digests.get(c.id, b""))
        out = []
        for c in ordered:
            out.extend(lists(c))
        return _dedup(out)[:limit]
    # DEFER
    out = []
    for t in lists(n.left):
        out.extend(_apply(n.red, t, enum_root))
        if len(out) >= limit * 4:
            break
    return _dedup(out)[:limit]


def enumerate_trees(fs: ForestSet, limit: int) -> list:
    """Up to `limit` fully resolved trees, deterministically ordered.

    Acyclic forests are enumerated bottom-up (exact first-`limit` in the
    canonical order).  Cyclic forests are enumerated by iteratively deepened
    depth budgets until the limit is reached or the result stabilizes.
    """
    root = fs.root
    if root is None or limit <= 0:
        return []
    digests = _forest_digests(root)
    if not _is_cyclic(root):
        order = _postorder(root)
        table: dict = {}

        def lists(c):
            return table[c.id]

        def enum_root(r):
            if r is None:
                return []
            return table[r.id]

        for n in order:
            table[n.id] = _combine(n, lists, enum_root, limit, digests)
        return table[root.id][:limit]

    # cyclic: deepening rounds
    node_count = len(_postorder(root))
    max_depth = 2 * node_count + 16
    prev = None
    depth = 2
    while True:
        memo: dict = {}

        def enum_at(n, d):
            if d <= 0:
                return []
            key = (n.id, d)
            hit = memo.get(key)
            if hit is not None:
                return hit
            memo[key] = []  # cycle guard within one budget level

            def lists(c):
                return enum_at(c, d - 1)

            def enum_root(r):
                if r is None:
                    return []
                return enum_at(r, d - 1)

            out = _combine(n, lists, enum_root, limit, digests)
            memo[key] = out
            return out

        res = enum_at(root, depth)
        if len(res) >= limit:
            return res[:limit]
        if prev is not None and res == prev:
            return res
        if depth >= max_depth:
            return res
        prev = res
        depth *= 2


def _postorder(root: FNode) -> list:
    out = []
    done = set()
    GRAY = object()
    state: dict = {}
    stack = [(root, None)]
    while stack:
        n, it = stack.pop()
        if it is None:
            if n.id in done or state.get(n.id) is GRAY:
                continue
            state[n.id] = GRAY
            it = iter(_fchildren(n))
        advanced = False
        for child in it:
            if child.id not in done and state.get(child.id) is not GRAY:
                stack.append((n, it))
                stack.append((child, None))
                advanced = True
                break
        if not advanced:
            done.add(n.id)
            out.append(n)
    return out


# --- serialization ----------------------------------------------------------

def forest_to_json(fs: ForestSet) -> dict:
    """Nodes listed once (ordered by id), edges by id; cycles are fine.

    Deferred nodes list their inner forest first, then the roots of any
    forest their reduction's payload references.
    """
    root = fs.root
    if root is None:
        return {"root": None, "nodes": []}
    nodes = _postorder(root)
    nodes.sort(key=lambda n: n.id)
    out = []
    for n in nodes:
        entry = {"id": n.id, "kind": n.kind, "label": None, "children": []}
        if n.kind == LEAF:
            entry["label"] = n.label
        elif n.kind == PAIR:
            entry["children"] = [n.left.id, n.right.id]
        elif n.kind == PROD:
            entry["label"] = n.label
            entry["children"] = [c.id for c in n.children]
        elif n.kind == AMB:
            entry["children"] = [c.id for c in n.children]
        else:
            entry["label"] = n.red.describe()
            entry["children"] = [c.id for c in _fchildren(n)]
        out.append(entry)
    return {"root": root.id, "nodes": out}
