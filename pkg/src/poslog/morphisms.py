"""Homomorphisms, embeddings and immersions between finite structures.

A homomorphism ``m: A -> B`` of finite structures is an immersion exactly
when some homomorphism ``j: B -> A`` satisfies ``j . m = id``.  One direction:
a retraction pulls any positive formula true at ``m(a)`` back to ``a``.  The
other direction: the positive diagram of B, with the elements of ``m(A)`` as
parameters and the rest existentially closed, is a single positive formula;
if A satisfies it at ``a``, its witnesses define ``j``.  So immersion is
decided by one retraction search, no formula enumeration required.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import BudgetExhausted, MorphismError, SignatureError
from .structures import FinStructure

KINDS = ("hom", "embedding", "immersion", "unchecked")


@dataclass(frozen=True, eq=True)
class Morphism:
    domain: FinStructure
    codomain: FinStructure
    map: tuple
    kind: str = "unchecked"

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))
        if self.kind not in KINDS:
            raise ValueError(f"unknown morphism kind {self.kind!r}")
        if len(self.map) != len(self.domain):
            raise MorphismError("map is not total on the domain")
        if any(not 0 <= b < len(self.codomain) for b in self.map):
            raise MorphismError("map leaves the codomain")

    @classmethod
    def from_names(cls, domain, codomain, mapping, kind="unchecked"):
        """Build from ``{domain element: codomain element}`` and verify ``kind``."""
        missing = set(domain.universe) - set(map(str, mapping))
        if missing:
            raise MorphismError(f"map is not total: no image for {sorted(missing)}")
        images = tuple(codomain.index(mapping[u] if u in mapping else mapping[int(u)])
                       for u in domain.universe)
        return checked(cls(domain, codomain, images), kind)

    def __call__(self, element):
        return self.codomain.universe[self.map[self.domain.index(element)]]

    def as_names(self) -> dict:
        return {u: self.codomain.universe[b] for u, b in zip(self.domain.universe, self.map)}

    def then(self, other: "Morphism", kind="unchecked") -> "Morphism":
        """``other . self``."""
        if other.domain.table_key() != self.codomain.table_key():
            raise MorphismError("composition of non-matching morphisms")
        return Morphism(self.domain, other.codomain, tuple(other.map[b] for b in self.map), kind)

    @property
    def injective(self):
        return len(set(self.map)) == len(self.map)

    def literal(self):
        return ",".join(f"{a}={b}" for a, b in self.as_names().items())

    def to_dict(self, verified=None):
        return {"domain": self.domain.name, "codomain": self.codomain.name,
                "map": self.as_names(), "kind": self.kind,
                "verified": self.kind != "unchecked" if verified is None else verified}

    def __repr__(self):
        return f"<{self.kind} {self.domain.name}->{self.codomain.name} {self.literal()}>"


def checked(m: Morphism, kind: str) -> Morphism:
    """Return ``m`` relabelled with ``kind`` after verifying it."""
    if kind != "unchecked" and not check_kind(m, kind):
        article = "an" if kind[0] in "aeiou" else "a"
        raise MorphismError(f"{m.literal()} is not {article} {kind}")
    return Morphism(m.domain, m.codomain, m.map, kind)


def identity(A: FinStructure, kind="immersion") -> Morphism:
    return Morphism(A, A, tuple(range(len(A))), kind)


# --------------------------------------------------------------------- checks

def _same_signature(A, B):
    if A.signature != B.signature:
        raise SignatureError(f"{A.name} and {B.name} have different signatures")


def is_hom(m: Morphism) -> bool:
    A, B, h = m.domain, m.codomain, m.map
    for fn, arity in A.signature.functions:
        for args in itertools.product(range(len(A)), repeat=arity):
            if h[A.apply(fn, args)] != B.apply(fn, [h[a] for a in args]):
                return False
    for rel, _ in A.signature.relations:
        rb = B.relations[rel]
        if any(tuple(h[a] for a in t) not in rb for t in A.relations[rel]):
            return False
    return all(h[v] == B.constants[c] for c, v in A.constants.items())


def is_embedding(m: Morphism) -> bool:
    if not m.injective or not is_hom(m):
        return False
    inverse = {b: a for a, b in enumerate(m.map)}
    A, B = m.domain, m.codomain
    for rel, _ in A.signature.relations:
        ra = A.relations[rel]
        for t in B.relations[rel]:
            if all(b in inverse for b in t) and tuple(inverse[b] for b in t) not in ra:
                return False
    return True


def find_retraction(m: Morphism, ticker=None):
    """A homomorphism ``j`` with ``j . m = id``, or None."""
    if not m.injective:
        return None
    pin = {b: a for a, b in enumerate(m.map)}
    for j in find_morphisms(m.codomain, m.domain, "hom", limit=1, pin=pin, ticker=ticker):
        return j
    return None


def check_kind(m: Morphism, kind: str, ticker=None) -> bool:
    _same_signature(m.domain, m.codomain)
    if kind == "unchecked":
        return True
    if kind == "hom":
        return is_hom(m)
    if kind == "embedding":
        return is_embedding(m)
    if kind == "immersion":
        return is_hom(m) and find_retraction(m, ticker) is not None
    raise ValueError(f"unknown morphism kind {kind!r}")


# --------------------------------------------------------------------- search

class Ticker:
    """Counts search nodes against a shared limit; optionally a wall-clock deadline."""

    def __init__(self, max_nodes=None, deadline=None):
        self.max_nodes = max_nodes
        self.deadline = deadline
        self.nodes = 0

    def tick(self, k=1):
        self.nodes += k
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExhausted(f"node limit {self.max_nodes} reached")
        if self.deadline is not None and self.nodes % 256 == 0:
            import time
            if time.monotonic() > self.deadline:
                raise BudgetExhausted("time limit reached")


class _Search:
    def __init__(self, A, B, injective, reflect, ticker):
        self.A, self.B = A, B
        self.nA, self.nB = len(A), len(B)
        self.injective = injective
        self.reflect = reflect
        self.ticker = ticker
        sig = A.signature
        self.unary = [(A.functions[f], B.functions[f]) for f, a in sig.functions if a == 1]
        self.higher = [(f, a) for f, a in sig.functions if a > 1]
        self.rels = [(r, a, A.relations[r], B.relations[r]) for r, a in sig.relations]
        # relation tuples of A incident to each element
        self.incident = [[] for _ in range(self.nA)]
        for r, _, ra, rb in self.rels:
            for t in ra:
                for a in set(t):
                    self.incident[a].append((t, rb))

    def assign(self, m, used, a, b):
        stack = [(a, b)]
        while stack:
            a, b = stack.pop()
            if m[a] >= 0:
                if m[a] != b:
                    return False
                continue
            if self.injective and b in used:
                return False
            m[a] = b
            used.add(b)
            if self.ticker is not None:
                self.ticker.tick()
            for fa, fb in self.unary:
                stack.append((fa[a], fb[b]))
            for fn, arity in self.higher:
                for args in self._tuples_with(m, a, arity):
                    stack.append((self.A.apply(fn, args), self.B.apply(fn, [m[x] for x in args])))
            for t, rb in self.incident[a]:
                if all(m[x] >= 0 for x in t) and tuple(m[x] for x in t) not in rb:
                    return False
            if self.reflect:
                for _, arity, ra, rb in self.rels:
                    for t in self._tuples_with(m, a, arity):
                        if t not in ra and tuple(m[x] for x in t) in rb:
                            return False
        return True

    @staticmethod
    def _tuples_with(m, a, arity):
        assigned = [x for x in range(len(m)) if m[x] >= 0]
        for t in itertools.product(assigned, repeat=arity):
            if a in t:
                yield t

    def candidates(self, m, used, a):
        out = []
        for b in range(self.nB):
            if self.injective and b in used:
                continue
            ok = True
            for fa, fb in self.unary:
                target = fa[a]
                if target == a:
                    if fb[b] != b:
                        ok = False
                        break
                elif m[target] >= 0 and fb[b] != m[target]:
                    ok = False
                    break
            if ok:
                for t, rb in self.incident[a]:
                    if all(x == a or m[x] >= 0 for x in t):
                        if tuple(b if x == a else m[x] for x in t) not in rb:
                            ok = False
                            break
            if ok:
                out.append(b)
        return out

    def run(self, m, used):
        free = [a for a in range(self.nA) if m[a] < 0]
        if not free:
            yield tuple(m)
            return
        best, best_cands = None, None
        for a in free:
            cands = self.candidates(m, used, a)
            if best is None or len(cands) < len(best_cands):
                best, best_cands = a, cands
                if not cands:
                    return
        for b in best_cands:
            m2, used2 = list(m), set(used)
            if self.assign(m2, used2, best, b):
                yield from self.run(m2, used2)


def find_morphisms(A: FinStructure, B: FinStructure, kind="hom", limit=None, pin=None, ticker=None):
    """Yield every morphism of ``kind`` from A to B extending ``pin``, once each.

    ``pin`` maps domain elements (names or indices) to codomain elements.
    Variables are chosen most-constrained first, values in universe order, so
    the stream is deterministic.  Raises :class:`BudgetExhausted` after the
    last morphism found within the ticker's limit.
    """
    _same_signature(A, B)
    if kind not in ("hom", "embedding", "immersion"):
        raise ValueError(f"cannot search for kind {kind!r}")
    if limit is not None and limit < 1:
        raise ValueError("limit must be at least 1")
    injective = kind == "embedding"
    search = _Search(A, B, injective, injective, ticker)
    m, used = [-1] * len(A), set()
    for c, v in A.constants.items():
        if not search.assign(m, used, v, B.constants[c]):
            return
    for a, b in (pin or {}).items():
        if not search.assign(m, used, A.index(a), B.index(b)):
            return
    count = 0
    for images in search.run(m, used):
        mor = Morphism(A, B, images, "embedding" if injective else "hom")
        if kind == "immersion":
            if find_retraction(mor, ticker) is None:
                continue
            mor = Morphism(A, B, images, "immersion")
        yield mor
        count += 1
        if limit is not None and count >= limit:
            return


def find_isomorphism(A: FinStructure, B: FinStructure, ticker=None):
    if len(A) != len(B) or A.signature != B.signature:
        return None
    for m in find_morphisms(A, B, "embedding", limit=1, ticker=ticker):
        return m
    return None


def is_isomorphic(A, B) -> bool:
    return find_isomorphism(A, B) is not None


def automorphisms(A: FinStructure) -> list:
    return [m.map for m in find_morphisms(A, A, "embedding")]


def compose(first: Morphism, second: Morphism, kind="unchecked") -> Morphism:
    """``second . first``."""
    return first.then(second, kind)
