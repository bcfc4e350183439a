"""Bounded semantics: entailment by countermodel search, Ctr probing, continuations.

Every answer is a :class:`BoundedVerdict`.  ``Holds`` only ever means that no
counterexample exists among the models enumerated within the budget.
``Fails`` always carries a concrete witness that can be re-checked with
:func:`poslog.structures.satisfies`.
"""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field, replace

from .enumeration import enumerate_models
from .errors import BudgetExhausted
from .morphisms import Morphism, Ticker, find_morphisms
from .structures import FinStructure, find_violation, require_model, structure_to_dict
from .syntax import (
    HInductiveSentence, Theory, conj, enumerate_qf_positive, format_formula, format_sentence,
    free_vars, h_universal, require_positive,
)


@dataclass(frozen=True)
class SearchBudget:
    max_model_size: int = 6
    max_formula_atoms: int = 3
    max_term_depth: int = 1
    max_nodes: int | None = None
    time_limit: float | None = None

    def __post_init__(self):
        for name in ("max_model_size", "max_formula_atoms"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.max_term_depth < 0:
            raise ValueError("max_term_depth must be non-negative")
        if self.max_nodes is not None and self.max_nodes < 1:
            raise ValueError("max_nodes must be at least 1")

    def ticker(self) -> Ticker:
        deadline = None if self.time_limit is None else time.monotonic() + self.time_limit
        return Ticker(self.max_nodes, deadline)

    def with_size(self, n):
        return replace(self, max_model_size=n)

    def to_dict(self):
        return {"N": self.max_model_size, "d": self.max_term_depth,
                "atoms": self.max_formula_atoms, "nodes": self.max_nodes}

    def bound_text(self):
        return f"up to size N={self.max_model_size}"


class Outcome(str, enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    UNKNOWN = "Unknown"
    FOUND = "Found"
    NOT_FOUND = "NotFoundWithinBudget"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Witness:
    structure: FinStructure | None = None
    assignment: dict | None = None
    morphisms: tuple = ()   # ((label, Morphism), ...)
    note: str = ""

    def to_dict(self):
        out = {}
        if self.structure is not None:
            out["structure"] = structure_to_dict(self.structure)
        if self.assignment is not None:
            out["assignment"] = dict(sorted(self.assignment.items()))
        if self.morphisms:
            out["morphisms"] = {label: m.to_dict() for label, m in self.morphisms}
        if self.note:
            out["note"] = self.note
        return out

    def morphism(self, label):
        return dict(self.morphisms)[label]


@dataclass(frozen=True)
class BoundedVerdict:
    outcome: Outcome
    budget: SearchBudget
    witness: Witness | None = None
    flags: tuple = ()

    @property
    def holds(self):
        return self.outcome == Outcome.HOLDS

    @property
    def fails(self):
        return self.outcome == Outcome.FAILS

    @property
    def found(self):
        return self.outcome == Outcome.FOUND

    def to_dict(self):
        out = {"outcome": self.outcome.value, "bound": self.budget.to_dict(),
               "flags": list(self.flags)}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        return out

    def describe(self):
        if self.outcome == Outcome.HOLDS:
            text = f"Holds (no counterexample {self.budget.bound_text()})"
        elif self.outcome == Outcome.NOT_FOUND:
            text = f"NotFoundWithinBudget ({self.budget.bound_text()})"
        elif self.outcome == Outcome.UNKNOWN:
            text = f"Unknown (search budget exhausted {self.budget.bound_text()})"
        else:
            text = f"{self.outcome.value} ({self.budget.bound_text()})"
        if self.flags:
            text += " [" + ", ".join(self.flags) + "]"
        return text


def _holds(budget, seen_any=True, extra=()):
    flags = ("bounded",) + (() if seen_any else ("inconsistent_up_to_bound",)) + tuple(extra)
    return BoundedVerdict(Outcome.HOLDS, budget, None, flags)


def entails_bounded(theory: Theory, sentence: HInductiveSentence, budget: SearchBudget) -> BoundedVerdict:
    """Search the models of ``theory`` up to the size bound for one violating ``sentence``."""
    sentence.check_well_sorted(theory.signature)
    ticker = budget.ticker()
    seen_any = False
    try:
        for A in enumerate_models(theory, budget.max_model_size, ticker):
            seen_any = True
            bad = find_violation(A, sentence)
            if bad is not None:
                return BoundedVerdict(Outcome.FAILS, budget, Witness(A, bad, note=format_sentence(sentence)))
    except BudgetExhausted as exc:
        return BoundedVerdict(Outcome.UNKNOWN, budget, None, (str(exc),))
    return _holds(budget, seen_any)


def ctr_probe(theory: Theory, phi, budget: SearchBudget, variables=None) -> list:
    """Bounded members of Ctr_T(phi): positive psi with T |- not exists x (phi and psi).

    Candidates are conjunctions of atoms in phi's free variables, up to the
    budget's atom count and term depth.  Returns ``[(psi, verdict), ...]`` for
    every candidate whose inconsistency with phi Holds within the bound.
    """
    require_positive(phi)
    variables = tuple(variables) if variables is not None else tuple(sorted(free_vars(phi)))
    out = []
    for psi in enumerate_qf_positive(theory.signature, variables, "conjunction",
                                     budget.max_formula_atoms, budget.max_term_depth):
        verdict = entails_bounded(theory, h_universal(variables, conj(phi, psi)), budget)
        if verdict.outcome == Outcome.UNKNOWN:
            raise BudgetExhausted("Ctr probe ran out of budget")
        if verdict.holds:
            out.append((psi, verdict))
    return out


def common_continuation(A: FinStructure, B: FinStructure, theory: Theory,
                        budget: SearchBudget) -> BoundedVerdict:
    """Find D |= T (|D| <= N) receiving homomorphisms from both A and B.

    Outcome is ``Found`` with D and both maps, or ``NotFoundWithinBudget``.
    """
    require_model(A, theory)
    require_model(B, theory)
    ticker = budget.ticker()
    try:
        for D in enumerate_models(theory, budget.max_model_size, ticker):
            for h in find_morphisms(A, D, "hom", limit=1, ticker=ticker):
                for g in find_morphisms(B, D, "hom", limit=1, ticker=ticker):
                    return BoundedVerdict(Outcome.FOUND, budget,
                                          Witness(D, morphisms=(("left", h), ("right", g))))
    except BudgetExhausted as exc:
        return BoundedVerdict(Outcome.UNKNOWN, budget, None, (str(exc),))
    return BoundedVerdict(Outcome.NOT_FOUND, budget, None, ("bounded",))
