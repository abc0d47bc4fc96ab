"""Parsing-expression graph: node forms, constructors, compaction, normalization.

A grammar is a possibly-cyclic graph of six node forms: the empty language,
the empty word carrying a set of result trees, a single token, concatenation,
choice, and reduction (a child plus a tree rewrite).  Nonterminal references
are direct object references, which is where the cycles come from.

Construction goes through the mk_* constructors.  These apply local,
non-iterating simplification rules ("compaction"): each call fires at most one
structural rule plus at most one follow-up rule while building a replacement
reduction node.  Rules that inspect a node still under construction simply
decline.  normalize_grammar applies the same rules plus the right-child rules
exhaustively to a loaded grammar so the per-token engine never needs to look
at a concatenation's right child.
"""

from __future__ import annotations

import itertools
import threading
from contextlib import contextmanager
from typing import Optional

from . import reductions
from .instrumentation import FORM_NAMES, Counters

EMPTY, EPSILON, TOKEN, SEQ, ALT, RED = range(6)

WILDCARD = "."

# nullability facts stored on nodes; UNKNOWN doubles as "assumed not nullable"
NV_UNKNOWN, NV_NULLABLE, NV_NOT = 0, 1, 2

_node_ids = itertools.count(1)


class GrammarNode:
    """One graph node.  Field use depends on `form`:

    left/right: children (SEQ, ALT); left alone: child (RED)
    label: token label (TOKEN)
    results: tree set for the empty word (EPSILON)
    fn: a Reduction (RED)

    The remaining slots are engine state: the nullability cell, the derivative
    cache (single-entry pair or full dict, depending on the active mode), the
    under-construction flag with its leak mark, the empty-word parse memo, and
    the optional debug name.
    """

    __slots__ = (
        "id", "form", "left", "right", "label", "results", "fn",
        "n_value", "n_gen", "n_dependents",
        "d_key", "d_val", "d_map",
        "in_progress", "leaked", "pn_memo", "name",
    )

    def __init__(self, form: int):
        self.id = next(_node_ids)
        self.form = form
        self.left = None
        self.right = None
        self.label = None
        self.results = None
        self.fn = None
        self.n_value = NV_UNKNOWN
        self.n_gen = 0
        self.n_dependents = None
        self.d_key = None
        self.d_val = None
        self.d_map = None
        self.in_progress = False
        self.leaked = False
        self.pn_memo = None
        self.name = None

    def __repr__(self) -> str:
        extra = ""
        if self.form == TOKEN:
            extra = f" {self.label!r}"
        elif self.name is not None:
            extra = f" {self.name.text()!r}"
        return f"<{FORM_NAMES[self.form]}#{self.id}{extra}>"


# --- ambient build context --------------------------------------------------

class ParserSettings:
    """Engine switches.  Defaults match the CLI defaults."""

    __slots__ = ("memo_full", "compaction", "naive_nullability", "debug_names",
                 "collect_nodes")

    def __init__(self, *, memo_full: bool = False, compaction: bool = True,
                 naive_nullability: bool = False, debug_names: bool = False,
                 collect_nodes: bool = False):
        self.memo_full = memo_full
        self.compaction = compaction
        self.naive_nullability = naive_nullability
        self.debug_names = debug_names
        self.collect_nodes = collect_nodes

    def copy(self) -> "ParserSettings":
        return ParserSettings(
            memo_full=self.memo_full, compaction=self.compaction,
            naive_nullability=self.naive_nullability,
            debug_names=self.debug_names, collect_nodes=self.collect_nodes,
        )


class Context:
    """What the free-function constructors and engines consult: counters to
    bump, settings to honor, and an optional registry of every node created."""

    __slots__ = ("counters", "settings", "created")

    def __init__(self, counters: Optional[Counters] = None,
                 settings: Optional[ParserSettings] = None,
                 created: Optional[list] = None):
        self.counters = counters if counters is not None else Counters()
        self.settings = settings if settings is not None else ParserSettings()
        self.created = created


_tls = threading.local()


def current_context() -> Context:
    ctx = getattr(_tls, "ctx", None)
    if ctx is None:
        ctx = Context()
        _tls.ctx = ctx
    return ctx


@contextmanager
def use_context(ctx: Context):
    prev = getattr(_tls, "ctx", None)
    _tls.ctx = ctx
    try:
        yield ctx
    finally:
        _tls.ctx = prev


# --- constructors -----------------------------------------------------------

def _new(form: int) -> GrammarNode:
    ctx = current_context()
    node = GrammarNode(form)
    ctx.counters.record_node(FORM_NAMES[form])
    if ctx.created is not None:
        ctx.created.append(node)
    return node


def mk_empty() -> GrammarNode:
    n = _new(EMPTY)
    n.n_value = NV_NOT
    return n


def mk_eps(results) -> GrammarNode:
    """The empty word, carrying a non-empty set of result trees."""
    if results is None or results.is_empty():
        raise ValueError("epsilon node needs a non-empty result set")
    n = _new(EPSILON)
    n.results = results
    n.n_value = NV_NULLABLE
    return n


def mk_token(label: str) -> GrammarNode:
    n = _new(TOKEN)
    n.label = label
    n.n_value = NV_NOT
    return n


def new_alt(left, right) -> GrammarNode:
    n = _new(ALT)
    n.left = left
    n.right = right
    return n


def new_seq(left, right) -> GrammarNode:
    n = _new(SEQ)
    n.left = left
    n.right = right
    return n


def new_red(child, fn) -> GrammarNode:
    n = _new(RED)
    n.left = child
    n.fn = fn
    return n


def _fire(rule: str) -> None:
    current_context().counters.record_compaction(rule)


def _red_limited(child: GrammarNode, fn) -> GrammarNode:
    """Build a reduction of `child`, firing at most one leaf rule."""
    f = child.form
    if f == EMPTY:
        _fire("red-empty")
        return child
    if f == EPSILON:
        _fire("red-epsilon")
        return mk_eps(child.results.apply(fn))
    return new_red(child, fn)


def _compact_alt(left: GrammarNode, right: GrammarNode) -> Optional[GrammarNode]:
    if left.in_progress or right.in_progress:
        return None
    if left.form == EMPTY:
        _fire("alt-empty-left")
        return right
    if right.form == EMPTY:
        _fire("alt-empty-right")
        return left
    if left.form == EPSILON and right.form == EPSILON:
        _fire("alt-epsilon-merge")
        return mk_eps(left.results.union(right.results))
    return None


def _compact_seq(left: GrammarNode, right: GrammarNode) -> Optional[GrammarNode]:
    if left.in_progress or right.in_progress:
        return None
    f = left.form
    if f == EMPTY:
        _fire("seq-empty-left")
        return left
    if f == EPSILON:
        _fire("seq-epsilon-left")
        return _red_limited(right, reductions.pair_left(left.results))
    if f == SEQ:
        # ((p1 . p2) . p3) -> (p1 . (p2 . p3)) plus a reassociation rewrite
        _fire("seq-associate")
        return _red_limited(
            new_seq(left.left, new_seq(left.right, right)),
            reductions.reassociate(),
        )
    if f == RED:
        # ((p -> f) . q) -> (p . q) -> lift-left(f)
        _fire("seq-float-left")
        return _red_limited(new_seq(left.left, right),
                            reductions.lift_left(left.fn))
    return None


def _compact_red(child: GrammarNode, fn) -> Optional[GrammarNode]:
    if child.in_progress:
        return None
    f = child.form
    if f == EMPTY:
        _fire("red-empty")
        return child
    if f == EPSILON:
        _fire("red-epsilon")
        return mk_eps(child.results.apply(fn))
    if f == RED:
        _fire("red-compose")
        return _red_limited(child.left, reductions.compose(fn, child.fn))
    return None


def mk_alt(left: GrammarNode, right: GrammarNode) -> GrammarNode:
    c = _compact_alt(left, right)
    return c if c is not None else new_alt(left, right)


def mk_seq(left: GrammarNode, right: GrammarNode) -> GrammarNode:
    c = _compact_seq(left, right)
    return c if c is not None else new_seq(left, right)


def mk_red(child: GrammarNode, fn) -> GrammarNode:
    c = _compact_red(child, fn)
    return c if c is not None else new_red(child, fn)


# --- graph walks ------------------------------------------------------------

def node_children(n: GrammarNode) -> tuple:
    form = n.form
    if form == SEQ or form == ALT:
        out = []
        if n.left is not None:
            out.append(n.left)
        if n.right is not None:
            out.append(n.right)
        return tuple(out)
    if form == RED and n.left is not None:
        return (n.left,)
    return ()


def reachable_nodes(root: GrammarNode) -> list:
    """Every node reachable through child edges, root first (iterative)."""
    seen = {root.id}
    order = [root]
    stack = [root]
    while stack:
        n = stack.pop()
        for c in node_children(n):
            if c.id not in seen:
                seen.add(c.id)
                order.append(c)
                stack.append(c)
    return order


# --- normalization ----------------------------------------------------------

_SWEEP_CAP = 1000


def _collapse_dead(root: GrammarNode) -> int:
    """Rewrite every node denoting the empty language to an Empty node.

    "Denotes the empty language" is the complement of a least fixed point:
    a node produces a word if it is a token or epsilon, a choice with a
    producing child, a concatenation of two producing children, or a
    reduction of a producing child.  Degenerate recursions like S : 'a' S ;
    (no base case) land here, which is also what makes the rewrite sweeps
    below terminate on cyclic graphs.
    """
    nodes = reachable_nodes(root)
    producing: set = set()
    changed = True
    while changed:
        changed = False
        for n in nodes:
            if n.id in producing:
                continue
            form = n.form
            if form == TOKEN or form == EPSILON:
                ok = True
            elif form == ALT:
                ok = n.left.id in producing or n.right.id in producing
            elif form == SEQ:
                ok = n.left.id in producing and n.right.id in producing
            elif form == RED:
                ok = n.left.id in producing
            else:
                ok = False
            if ok:
                producing.add(n.id)
                changed = True
    dead = 0
    for n in nodes:
        if n.id not in producing and n.form != EMPTY:
            n.form = EMPTY
            n.left = None
            n.right = None
            n.label = None
            n.results = None
            n.fn = None
            n.n_value = NV_NOT
            dead += 1
            _fire("dead-subgraph")
    return dead


def _shape(n: GrammarNode) -> tuple:
    return (n.form, id(n.left), id(n.right), id(n.label), id(n.results), id(n.fn))


def _become(n: GrammarNode, form: int, *, left=None, right=None, label=None,
            results=None, fn=None, n_value=NV_UNKNOWN) -> bool:
    before = _shape(n)
    n.form = form
    n.left = left
    n.right = right
    n.label = label
    n.results = results
    n.fn = fn
    n.n_value = n_value
    return _shape(n) != before


def become_node(dst: GrammarNode, src: GrammarNode) -> bool:
    """Overwrite dst's structural fields with src's.  dst keeps its identity
    (and id), so existing references to dst now see src's structure."""
    return _become(dst, src.form, left=src.left, right=src.right,
                   label=src.label, results=src.results, fn=src.fn,
                   n_value=src.n_value)


def _normalize_step(n: GrammarNode) -> bool:
    form = n.form
    if form == ALT:
        l, r = n.left, n.right
        if l.form == EMPTY and r is not n:
            _fire("alt-empty-left")
            return become_node(n, r)
        if r.form == EMPTY and l is not n:
            _fire("alt-empty-right")
            return become_node(n, l)
        if l.form == EPSILON and r.form == EPSILON:
            _fire("alt-epsilon-merge")
            return _become(n, EPSILON, results=l.results.union(r.results),
                           n_value=NV_NULLABLE)
        return False
    if form == SEQ:
        l, r = n.left, n.right
        if l.form == EMPTY or r.form == EMPTY:
            _fire("seq-empty-left" if l.form == EMPTY else "seq-empty-right")
            return _become(n, EMPTY, n_value=NV_NOT)
        if l.form == EPSILON:
            _fire("seq-epsilon-left")
            return _become(n, RED, left=r, fn=reductions.pair_left(l.results))
        if l.form == SEQ:
            _fire("seq-associate")
            return _become(n, RED,
                           left=new_seq(l.left, new_seq(l.right, r)),
                           fn=reductions.reassociate())
        if l.form == RED:
            _fire("seq-float-left")
            return _become(n, RED, left=new_seq(l.left, r),
                           fn=reductions.lift_left(l.fn))
        if r.form == EPSILON:
            _fire("seq-epsilon-right")
            return _become(n, RED, left=l, fn=reductions.pair_right(r.results))
        if r.form == RED:
            _fire("seq-float-right")
            return _become(n, RED, left=new_seq(l, r.left),
                           fn=reductions.lift_right(r.fn))
        return False
    if form == RED:
        c = n.left
        if c.form == EMPTY:
            _fire("red-empty")
            return _become(n, EMPTY, n_value=NV_NOT)
        if c.form == EPSILON:
            _fire("red-epsilon")
            return _become(n, EPSILON, results=c.results.apply(n.fn),
                           n_value=NV_NULLABLE)
        if c.form == RED:
            _fire("red-compose")
            n.fn = reductions.compose(n.fn, c.fn)
            n.left = c.left
            return True
        return False
    return False


class Grammar:
    """A loaded grammar: root node, nonterminal table (kept for diagnostics
    and printing), per-grammar counters and settings, and the BNF twin the
    loader derived from the same source."""

    __slots__ = ("root", "start", "nonterminal_table", "size_G", "counters",
                 "settings", "bnf", "created_nodes")

    def __init__(self, root: GrammarNode, start: str,
                 nonterminal_table: Optional[dict] = None, bnf=None):
        self.root = root
        self.start = start
        self.nonterminal_table = nonterminal_table or {}
        self.size_G = len(reachable_nodes(root))
        self.counters = Counters()
        self.settings = ParserSettings()
        self.bnf = bnf
        self.created_nodes = None

    def activate(self):
        created = [] if self.settings.collect_nodes else None
        return use_context(Context(self.counters, self.settings, created))

    def __repr__(self) -> str:
        return f"Grammar(start={self.start!r}, size_G={self.size_G})"


def normalize_grammar(g) -> "Grammar | GrammarNode":
    """Rewrite the grammar so no reachable Seq has an Empty, Epsilon, or Red
    right child (and apply every other compaction rule exhaustively).

    Accepts a Grammar or a bare root node; rewrites in place and returns the
    argument.  Terminates on cyclic graphs because empty-language subgraphs
    are collapsed first (see _collapse_dead); a sweep cap guards the rest.
    """
    root = g.root if isinstance(g, Grammar) else g
    _collapse_dead(root)
    for _ in range(_SWEEP_CAP):
        changed = False
        for n in reachable_nodes(root):
            if _normalize_step(n):
                changed = True
        if not changed:
            break
    else:
        raise RuntimeError("grammar normalization did not converge")
    if isinstance(g, Grammar):
        g.size_G = len(reachable_nodes(root))
    return g


# --- printing ---------------------------------------------------------------

def describe_node(n: GrammarNode, *, max_depth: int = 6) -> str:
    """A short structural sketch, cycle-safe."""

    def go(x: GrammarNode, depth: int, seen: frozenset) -> str:
        if x.id in seen:
            return f"#{x.id}"
        if depth >= max_depth:
            return "..."
        s = seen | {x.id}
        f = x.form
        if f == EMPTY:
            return "{}"
        if f == EPSILON:
            return "eps"
        if f == TOKEN:
            return repr(x.label)
        if f == SEQ:
            return f"(seq#{x.id} {go(x.left, depth + 1, s)} {go(x.right, depth + 1, s)})"
        if f == ALT:
            return f"(alt#{x.id} {go(x.left, depth + 1, s)} {go(x.right, depth + 1, s)})"
        return f"(red#{x.id} {go(x.left, depth + 1, s)})"

    return go(n, 0, frozenset())


def grammar_to_text(g: Grammar) -> str:
    lines = [f"start = {g.start} ;"]
    for name, node in g.nonterminal_table.items():
        lines.append(f"# {name}: {describe_node(node)}")
    return "\n".join(lines) + "\n"
