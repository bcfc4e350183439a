"""Bounded search for amalgamation squares.

Given an embedding ``e: A -> B`` and an immersion ``i: A -> C`` between models
of T, :func:`amalgamate_ei` looks for a model D of T of size at most N with
an embedding ``e': C -> D`` and an immersion ``i': B -> D`` such that
``i'.e = e'.i``.  :func:`embedding_amalgamation_probe` instead tries to close
pairs of embeddings out of A with a pair of embeddings.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .enumeration import enumerate_models
from .errors import BudgetExhausted, MorphismError
from .morphisms import Morphism, check_kind, find_morphisms, find_retraction
from .structures import FinStructure, require_model, structure_to_dict
from .syntax import Theory
from .theories import BoundedVerdict, Outcome, SearchBudget, Witness


@dataclass(frozen=True)
class AmalgamRequest:
    A: FinStructure
    B: FinStructure
    e: Morphism          # A -> B, embedding
    C: FinStructure
    i: Morphism          # A -> C, immersion
    theory: Theory
    budget: SearchBudget

    def validate(self):
        for m, src, dst, label in ((self.e, self.A, self.B, "e"), (self.i, self.A, self.C, "i")):
            if m.domain.table_key() != src.table_key() or m.codomain.table_key() != dst.table_key():
                raise MorphismError(f"{label} does not go from {src.name} to {dst.name}")
        if not check_kind(self.e, "embedding"):
            raise MorphismError(f"e = {self.e.literal()} is not an embedding")
        if not check_kind(self.i, "immersion"):
            raise MorphismError(f"i = {self.i.literal()} is not an immersion")
        for S in (self.A, self.B, self.C):
            require_model(S, self.theory)
        return self


@dataclass(frozen=True)
class AmalgamResult:
    D: FinStructure
    e_prime: Morphism    # C -> D
    i_prime: Morphism    # B -> D
    e_prime_is_embedding: bool
    i_prime_is_immersion: bool
    commutes: bool

    @property
    def ok(self):
        return self.e_prime_is_embedding and self.i_prime_is_immersion and self.commutes

    def to_dict(self):
        return {"D": structure_to_dict(self.D), "e_prime": self.e_prime.to_dict(),
                "i_prime": self.i_prime.to_dict(),
                "flags": {"e_prime_embedding": self.e_prime_is_embedding,
                          "i_prime_immersion": self.i_prime_is_immersion,
                          "commutes": self.commutes}}


def square_commutes(e: Morphism, i_prime: Morphism, i: Morphism, e_prime: Morphism) -> bool:
    """``i'.e == e'.i`` as maps on A."""
    return all(i_prime.map[e.map[a]] == e_prime.map[i.map[a]] for a in range(len(e.domain)))


def result_for(req: AmalgamRequest, D, e_prime, i_prime) -> AmalgamResult:
    """Re-check a candidate square through the independent kind checks."""
    return AmalgamResult(D, e_prime, i_prime, check_kind(e_prime, "embedding"),
                         check_kind(i_prime, "immersion"), square_commutes(req.e, i_prime, req.i, e_prime))


def amalgamate_ei(req: AmalgamRequest):
    """First square in model order; ``(verdict, AmalgamResult or None)``.

    D is only required to be a model of T with i' an immersion; that stands in
    for D being a model of the full h-inductive theory of B.
    """
    req.validate()
    budget = req.budget
    ticker = budget.ticker()
    A = req.A
    try:
        for D in enumerate_models(req.theory, budget.max_model_size, ticker):
            for e_prime in find_morphisms(req.C, D, "embedding", ticker=ticker):
                pin = {req.B.universe[req.e.map[a]]: D.universe[e_prime.map[req.i.map[a]]]
                       for a in range(len(A))}
                for i_prime in find_morphisms(req.B, D, "hom", pin=pin, ticker=ticker):
                    if find_retraction(i_prime, ticker) is None:
                        continue
                    i_prime = Morphism(req.B, D, i_prime.map, "immersion")
                    result = result_for(req, D, e_prime, i_prime)
                    witness = Witness(D, morphisms=(("e_prime", e_prime), ("i_prime", i_prime)))
                    return BoundedVerdict(Outcome.FOUND, budget, witness), result
    except BudgetExhausted as exc:
        return BoundedVerdict(Outcome.UNKNOWN, budget, None, (str(exc),)), None
    return BoundedVerdict(Outcome.NOT_FOUND, budget, None, ("bounded",)), None


@dataclass(frozen=True)
class ProbeReport:
    base: FinStructure
    sample_size: int
    budget: SearchBudget
    checked: int
    failures: tuple          # ((e1, e2), ...) with no completion in the bound
    completions: tuple       # ((e1, e2, D, g1, g2), ...)
    unknown: bool = False

    @property
    def complete(self):
        return not self.failures and not self.unknown

    def to_dict(self):
        return {"base": self.base.name, "sample_size": self.sample_size,
                "bound": self.budget.to_dict(), "pairs_checked": self.checked,
                "all_complete": self.complete, "unknown": self.unknown,
                "failures": [{"left": e1.to_dict(), "right": e2.to_dict(),
                              "left_target": structure_to_dict(e1.codomain),
                              "right_target": structure_to_dict(e2.codomain)}
                             for e1, e2 in self.failures]}

    def describe(self):
        head = (f"embedding amalgamation over {self.base.name}: {self.checked} pair(s) with targets "
                f"of size <= {self.sample_size}")
        if self.unknown:
            return head + f"; Unknown (budget exhausted {self.budget.bound_text()})"
        if not self.failures:
            return head + f"; all complete (Holds up to size N={self.budget.max_model_size})"
        lines = [head + f"; {len(self.failures)} without a completion {self.budget.bound_text()}"]
        for e1, e2 in self.failures:
            lines.append(f"  {e1.codomain.name} [{e1.literal()}]  vs  {e2.codomain.name} [{e2.literal()}]")
        return "\n".join(lines)


def complete_embeddings(e1: Morphism, e2: Morphism, theory: Theory, budget: SearchBudget, ticker=None):
    """Smallest D |= T with embeddings g1, g2 such that g1.e1 = g2.e2, or None."""
    A = e1.domain
    for D in enumerate_models(theory, budget.max_model_size, ticker):
        for g1 in find_morphisms(e1.codomain, D, "embedding", ticker=ticker):
            pin = {e2.codomain.universe[e2.map[a]]: D.universe[g1.map[e1.map[a]]] for a in range(len(A))}
            for g2 in find_morphisms(e2.codomain, D, "embedding", limit=1, pin=pin, ticker=ticker):
                return D, g1, g2
    return None


def embedding_amalgamation_probe(A: FinStructure, theory: Theory, sample_size: int,
                                 budget: SearchBudget) -> ProbeReport:
    """Try to complete every pair of embeddings of A into models of size <= sample_size.

    Unordered pairs only (each pair with itself included); the square is
    symmetric in its two sides.
    """
    require_model(A, theory)
    embeddings = [e for B in enumerate_models(theory, sample_size)
                  for e in find_morphisms(A, B, "embedding")]
    ticker = budget.ticker()
    failures, completions, checked = [], [], 0
    try:
        for x, y in itertools.combinations_with_replacement(range(len(embeddings)), 2):
            e1, e2 = embeddings[x], embeddings[y]
            checked += 1
            found = complete_embeddings(e1, e2, theory, budget, ticker)
            if found is None:
                failures.append((e1, e2))
            else:
                completions.append((e1, e2) + found)
    except BudgetExhausted:
        return ProbeReport(A, sample_size, budget, checked, tuple(failures), tuple(completions), True)
    return ProbeReport(A, sample_size, budget, checked, tuple(failures), tuple(completions))
