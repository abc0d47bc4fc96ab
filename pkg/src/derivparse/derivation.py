"""The per-token derivative engine.

derive(n, c) returns a node whose language is every word w such that c
followed by w is in n's language, with result trees threaded through so the
final forest rebuilds full parse trees.  Memoized per (node, token): in the
default single-entry mode each node holds one cached (token, result) pair and
an insert under a different token evicts it; full-map mode keeps a dict per
node for comparison runs.

Cycles are handled shell-first: for composite forms the result node is
registered in the cache *before* the children are derived, so a cyclic
grammar re-enters the cache instead of looping.  When a compaction rule
applies to the finished children, an unleaked shell is discarded in favor of
the replacement; a shell that was handed out during the recursion (it
"leaked") already shares its identity, so the replacement's structure is
copied into it instead.  Without that in-place step, every derivative along
a cyclic spine would keep one stale choice layer per token and parsing such
grammars would degrade to quadratic.  Discarded shells keep
in_progress=True; they are unreachable and only the created-node registry
ever sees them.

recognize/parse fold derive over the input inside the grammar's context;
caches are cleared first, so parses are independent.
"""

from __future__ import annotations

import time
from typing import Iterable

from .forest import ForestSet, parse_null
from .grammar import (
    ALT, EMPTY, EPSILON, RED, SEQ, TOKEN, WILDCARD,
    Grammar, become_node, current_context, mk_empty, mk_eps, new_alt, new_red,
    new_seq, reachable_nodes, _compact_alt, _compact_red, _compact_seq,
)
from .instrumentation import EXTEND, MARK_EXTEND, NamingError, fresh_name, name_node
from .nullability import is_nullable, is_nullable_naive
from .reductions import pair_left_null


def _nullable(node, settings) -> bool:
    if settings.naive_nullability:
        return is_nullable_naive(node)
    return is_nullable(node)


def _put(n, c, res, settings) -> None:
    if settings.memo_full:
        m = n.d_map
        if m is None:
            m = n.d_map = {}
        m[c] = res
    else:
        n.d_key = c
        n.d_val = res


def _settle(n, c, shell, repl, settings):
    """Install a compacted replacement for a freshly filled shell.  Unleaked:
    the cache entry is redirected and the shell discarded.  Leaked: the shell
    is already referenced as a child somewhere, so the replacement's
    structure is copied into it, keeping its identity."""
    if not shell.leaked:
        _put(n, c, repl, settings)
        return repl
    become_node(shell, repl)
    shell.in_progress = False
    return shell


def _check_hit_name(n, c, hit, settings) -> None:
    if n.name is None or hit.name is None:
        return
    if n.form == SEQ and _nullable(n.left, settings):
        expected = name_node(n.name, c, MARK_EXTEND)
    else:
        expected = name_node(n.name, c, EXTEND)
    if hit.name != expected:
        raise NamingError(
            f"memo hit named {hit.name.text()!r}, minting gives {expected.text()!r}"
        )


def derive(n, c: str):
    """One-token derivative of a grammar node, under the ambient context."""
    return _derive(n, c, current_context())


def _derive(n, c, ctx):
    st = ctx.settings
    if st.memo_full:
        m = n.d_map
        hit = m.get(c) if m is not None else None
    else:
        hit = n.d_val if n.d_key == c else None
    if hit is not None:
        ctx.counters.derive_calls_cached += 1
        if hit.in_progress:
            hit.leaked = True
        if st.debug_names:
            _check_hit_name(n, c, hit, st)
        return hit
    ctx.counters.derive_calls_uncached += 1
    naming = st.debug_names
    form = n.form
    if form == TOKEN:
        if n.label == c or n.label == WILDCARD:
            res = mk_eps(ForestSet.single_leaf(c))
        else:
            res = mk_empty()
        if naming and n.name is not None:
            res.name = name_node(n.name, c, EXTEND)
        _put(n, c, res, st)
        return res
    if form == EMPTY or form == EPSILON:
        res = mk_empty()
        if naming and n.name is not None:
            res.name = name_node(n.name, c, EXTEND)
        _put(n, c, res, st)
        return res
    compacting = st.compaction and not naming
    if form == ALT:
        shell = new_alt(None, None)
        shell.in_progress = True
        if naming and n.name is not None:
            shell.name = name_node(n.name, c, EXTEND)
        _put(n, c, shell, st)
        dl = _derive(n.left, c, ctx)
        dr = _derive(n.right, c, ctx)
        if compacting:
            repl = _compact_alt(dl, dr)
            if repl is not None:
                return _settle(n, c, shell, repl, st)
        shell.left = dl
        shell.right = dr
        shell.in_progress = False
        return shell
    if form == RED:
        shell = new_red(None, n.fn)
        shell.in_progress = True
        if naming and n.name is not None:
            shell.name = name_node(n.name, c, EXTEND)
        _put(n, c, shell, st)
        dc = _derive(n.left, c, ctx)
        if compacting:
            repl = _compact_red(dc, n.fn)
            if repl is not None:
                return _settle(n, c, shell, repl, st)
        shell.left = dc
        shell.in_progress = False
        return shell
    # SEQ
    if not _nullable(n.left, st):
        shell = new_seq(None, n.right)
        shell.in_progress = True
        if naming and n.name is not None:
            shell.name = name_node(n.name, c, EXTEND)
        _put(n, c, shell, st)
        dl = _derive(n.left, c, ctx)
        if compacting:
            repl = _compact_seq(dl, n.right)
            if repl is not None:
                return _settle(n, c, shell, repl, st)
        shell.left = dl
        shell.in_progress = False
        return shell
    # nullable left half: the derivative may consume c in either half, so
    # the result is a choice; its first branch extends the left parse, the
    # second starts the right half, pairing in the left half's empty-word
    # trees (threaded lazily; skipped entirely in the pure naming engine)
    alt_shell = new_alt(None, None)
    alt_shell.in_progress = True
    if naming and n.name is not None:
        alt_shell.name = name_node(n.name, c, MARK_EXTEND)
    _put(n, c, alt_shell, st)
    seq_shell = new_seq(None, n.right)
    seq_shell.in_progress = True
    if naming and n.name is not None:
        seq_shell.name = name_node(n.name, c, EXTEND)
    dl = _derive(n.left, c, ctx)
    left = None
    if compacting:
        left = _compact_seq(dl, n.right)
    if left is None:
        seq_shell.left = dl
        seq_shell.in_progress = False
        left = seq_shell
    dr = _derive(n.right, c, ctx)
    if naming:
        right = dr
    else:
        inj = pair_left_null(n.left)
        right = None
        if compacting:
            right = _compact_red(dr, inj)
        if right is None:
            right = new_red(dr, inj)
    if compacting:
        repl = _compact_alt(left, right)
        if repl is not None:
            return _settle(n, c, alt_shell, repl, st)
    alt_shell.left = left
    alt_shell.right = right
    alt_shell.in_progress = False
    return alt_shell


# --- whole-input operations --------------------------------------------------

def _prepare(g: Grammar, ctx) -> None:
    nodes = reachable_nodes(g.root)
    for n in nodes:
        n.d_key = None
        n.d_val = None
        n.d_map = None
        n.pn_memo = None
        n.leaked = False
    if ctx.settings.debug_names:
        for n in nodes:
            if n.name is None:
                n.name = fresh_name()


def recognize(g: Grammar, tokens: Iterable[str]) -> bool:
    with g.activate() as ctx:
        _prepare(g, ctx)
        node = g.root
        for c in tokens:
            node = _derive(node, c, ctx)
        ok = _nullable(node, ctx.settings)
        g.created_nodes = ctx.created
        return ok


def parse(g: Grammar, tokens: Iterable[str]) -> ForestSet:
    if g.settings.debug_names:
        raise ValueError("tree extraction is not supported with debug names on")
    with g.activate() as ctx:
        _prepare(g, ctx)
        node = g.root
        for c in tokens:
            node = _derive(node, c, ctx)
        result = parse_null(node)
        g.created_nodes = ctx.created
        return result


def timed_parse(g: Grammar, tokens: list) -> tuple:
    """(forest, wall seconds) for one parse; used by the benchmark driver."""
    t0 = time.perf_counter()
    fs = parse(g, tokens)
    return fs, time.perf_counter() - t0
