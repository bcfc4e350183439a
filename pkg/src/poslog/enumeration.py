"""Enumeration of finite structures up to isomorphism.

Structures are generated in two layers.  The algebraic reduct (function
symbols only) comes first: for one unary function these are functional
digraphs, built directly as multisets of connected components (a cycle of
rooted trees, up to rotation), so no isomorphism test is needed.  Any other
function signature is filled cell by cell and deduplicated with a
colour-refinement invariant plus an explicit isomorphism search.  Constants
and relations are then laid over each reduct representative R.  A decoration
is kept only when its encoding is minimal under Aut(R), which gives exactly
one representative per isomorphism class.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

from .morphisms import automorphisms, find_isomorphism
from .structures import FinStructure, is_model
from .syntax import Signature, Theory


# ---------------------------------------------------------- functional digraphs

def _tree_size(t):
    return 1 + sum(_tree_size(c) for c in t)


def _key(t):
    return (_tree_size(t), t)


@lru_cache(maxsize=None)
def rooted_trees(m: int) -> tuple:
    """Unlabelled rooted trees with ``m`` nodes (a tree is its sorted tuple of subtrees)."""
    return tuple(sorted(_forests(m - 1, None), key=lambda f: _key(f)))


@lru_cache(maxsize=None)
def _forests(total, bound):
    if total == 0:
        return ((),)
    out = []
    top = total if bound is None else min(total, bound[0])
    for s in range(top, 0, -1):
        for t in reversed(rooted_trees(s)):
            key = (s, t)
            if bound is not None and key > bound:
                continue
            for rest in _forests(total - s, key):
                out.append((t,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def connected_components(size: int) -> tuple:
    """Connected functional digraphs on ``size`` nodes: tuples of trees hung on a cycle."""
    out = []
    for k in range(1, size + 1):
        for parts in _compositions(size, k):
            for trees in itertools.product(*(rooted_trees(p) for p in parts)):
                keys = tuple(_key(t) for t in trees)
                if all(keys <= keys[i:] + keys[:i] for i in range(1, k)):
                    out.append(trees)
    return tuple(out)


def _compositions(total, k):
    if k == 1:
        yield (total,)
        return
    for first in range(1, total - k + 2):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def _component_key(c):
    return (sum(_tree_size(t) for t in c), len(c), tuple(_key(t) for t in c))


@lru_cache(maxsize=None)
def _component_multisets(total, bound):
    if total == 0:
        return ((),)
    out = []
    top = total if bound is None else min(total, bound[0])
    for s in range(1, top + 1):
        for c in connected_components(s):
            key = _component_key(c)
            if bound is not None and key > bound:
                continue
            for rest in _component_multisets(total - s, key):
                out.append((c,) + rest)
    return tuple(out)


def functional_digraphs(n: int) -> list:
    """Every unary function on ``n`` points up to isomorphism, as image tables."""
    tables = []
    for components in _component_multisets(n, None):
        table = []
        for comp in components:
            base = len(table)
            k = len(comp)
            table.extend(base + (i + 1) % k for i in range(k))
            for i, tree in enumerate(comp):
                _hang(table, base + i, tree)
        tables.append(tuple(table))
    return tables


def _hang(table, parent, tree):
    queue = [(parent, tree)]
    while queue:
        node, t = queue.pop(0)
        for child in t:
            table.append(node)
            queue.append((len(table) - 1, child))


# ----------------------------------------------------------- generic reducts

def _refined_colours(S: FinStructure, rounds=3):
    n = len(S)
    facts = []
    for fn, arity in S.signature.functions:
        for args in itertools.product(range(n), repeat=arity):
            facts.append((fn, args + (S.apply(fn, args),)))
    colour = [0] * n
    for _ in range(rounds):
        sig = [[colour[a]] for a in range(n)]
        for fn, t in facts:
            shape = (fn, tuple(colour[x] for x in t))
            for pos, x in enumerate(t):
                sig[x].append((pos, shape))
        sig = [(s[0], tuple(sorted(s[1:]))) for s in sig]
        palette = {s: i for i, s in enumerate(sorted(set(sig)))}
        colour = [palette[s] for s in sig]
    return colour, tuple(sorted(palette.items(), key=lambda kv: kv[1]))


def _generic_reducts(sig: Signature, n: int) -> list:
    cells = [(fn, args) for fn, arity in sig.functions
             for args in itertools.product(range(n), repeat=arity)]
    names = [f"a{i}" for i in range(n)]
    buckets = {}
    reps = []
    for values in itertools.product(range(n), repeat=len(cells)):
        tables = {fn: [] for fn, _ in sig.functions}
        for (fn, _), v in zip(cells, values):
            tables[fn].append(v)
        S = FinStructure.from_tables(sig, names, tables)
        colours, cert = _refined_colours(S)
        key = (cert, tuple(sorted(colours)))
        bucket = buckets.setdefault(key, [])
        if any(find_isomorphism(S, R) is not None for R in bucket):
            continue
        bucket.append(S)
        reps.append(S)
    return reps


def _reducts(sig: Signature, n: int) -> list:
    reduct_sig = Signature(sig.name + "_alg", sig.functions)
    names = [f"a{i}" for i in range(n)]
    if not sig.functions:
        return [FinStructure(reduct_sig, names, {})]
    if [a for _, a in sig.functions] == [1]:
        fn = sig.functions[0][0]
        return [FinStructure(reduct_sig, names, {fn: list(t)}) for t in functional_digraphs(n)]
    return _generic_reducts(reduct_sig, n)


def _decorations(sig: Signature, R: FinStructure):
    """Constants and relations over R, one per Aut(R)-orbit, in ascending order."""
    n = len(R)
    rel_tuples = [list(itertools.product(range(n), repeat=a)) for _, a in sig.relations]
    if not sig.relations and not sig.constants:
        yield (), ()
        return
    auts = [p for p in automorphisms(R) if p != tuple(range(n))]
    perm_tables = []
    for p in auts:
        per_rel = []
        for tuples in rel_tuples:
            pos = {t: i for i, t in enumerate(tuples)}
            per_rel.append([pos[tuple(p[x] for x in t)] for t in tuples])
        perm_tables.append((p, per_rel))

    def image(p, per_rel, consts, masks):
        new_masks = []
        for mask, moved in zip(masks, per_rel):
            out = 0
            for i, j in enumerate(moved):
                if mask >> i & 1:
                    out |= 1 << j
            new_masks.append(out)
        return tuple(p[c] for c in consts), tuple(new_masks)

    mask_ranges = [range(2 ** len(t)) for t in rel_tuples]
    for consts in itertools.product(range(n), repeat=len(sig.constants)):
        for masks in itertools.product(*mask_ranges):
            code = (consts, masks)
            if all(code <= image(p, per_rel, consts, masks) for p, per_rel in perm_tables):
                yield consts, masks


@lru_cache(maxsize=None)
def structures_of_size(sig: Signature, n: int) -> tuple:
    """All structures over ``sig`` with ``n`` elements, one per isomorphism class."""
    names = [f"a{i}" for i in range(n)]
    out = []
    for R in _reducts(sig, n):
        rel_tuples = [list(itertools.product(range(n), repeat=a)) for _, a in sig.relations]
        for consts, masks in _decorations(sig, R):
            relations = {}
            for (rel, _), tuples, mask in zip(sig.relations, rel_tuples, masks):
                relations[rel] = {t for i, t in enumerate(tuples) if mask >> i & 1}
            S = FinStructure.from_tables(sig, names, R.functions, relations,
                                         dict(zip(sig.constants, consts)), f"M{n}.{len(out)}")
            out.append(S)
    return tuple(out)


@lru_cache(maxsize=64)
def _models_of_size(theory: Theory, n: int) -> tuple:
    return tuple(S for S in structures_of_size(theory.signature, n) if is_model(S, theory))


def enumerate_models(theory: Theory, max_size: int, ticker=None, min_size=1):
    """Yield every model of ``theory`` with at most ``max_size`` elements.

    One representative per isomorphism class, ordered by size and then by a
    fixed generation order.  Representatives are named ``M<n>.<k>``; the name
    depends only on the signature, so the same structure keeps its name
    across theories.
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    for n in range(min_size, max_size + 1):
        for S in _models_of_size(theory, n):
            if ticker is not None:
                ticker.tick()
            yield S


def count_models(theory: Theory, max_size: int) -> list:
    return [len(_models_of_size(theory, n)) for n in range(1, max_size + 1)]
