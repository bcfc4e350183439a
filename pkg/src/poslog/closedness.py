"""Bounded pc / pac checks, pac certificates, Alc pairs, T_h, saturation, e-elementary maps.

A model A of T is pac (pc) within a bound when every embedding (homomorphism)
from A into a model of T of size at most N is an immersion.  Immersion is the
retraction test from :mod:`poslog.morphisms`, so a failing check always
carries a concrete map with no retraction, together with a positive formula
that the target gains.

Certificates pair a formula psi false at a tuple a of A with two
quantifier-free formulas: theta1, a conjunction of atoms true at (a, b), and
theta2, a disjunction of atoms false there, such that T proves
``forall x y ((psi and theta1) -> theta2)`` within the bound.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .enumeration import enumerate_models
from .errors import BudgetExhausted, MorphismError, PoslogError
from .morphisms import Morphism, check_kind, find_morphisms, find_retraction, identity
from .structures import (
    FinStructure, atom_holds, diagram_formula, eval_positive, require_model, structure_to_dict,
)
from .syntax import (
    FALSE, TRUE, And, App, Eq, Exists, Forall, HInductiveSentence, Not, Or, Signature, Theory,
    Var, atoms_over, conj, disj, exists, format_formula, format_sentence, free_vars,
    fresh_names, require_positive, substitute, terms_up_to_depth,
)
from .theories import BoundedVerdict, Outcome, SearchBudget, Witness, entails_bounded


class PreconditionError(PoslogError):
    """An operation was called outside its precondition."""


# ------------------------------------------------------------------ helpers

def cycle_sentence(fn: str, k: int):
    """``exists y. f^k(y) = y``."""
    t = Var("y")
    for _ in range(k):
        t = App(fn, (t,))
    return Exists(("y",), Eq(t, Var("y")))


def all_variables(phi) -> set:
    """Every variable name occurring in ``phi``, bound or free."""
    out = set(free_vars(phi))
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, (And, Or)):
            stack.extend(f.parts)
        elif isinstance(f, (Exists, Forall)):
            out.update(f.vars)
            stack.append(f.body)
        elif isinstance(f, Not):
            stack.append(f.body)
    return out


def gained_formula(m: Morphism):
    """A positive formula true at the image under ``m`` but false at the source.

    Returns ``(phi, assignment)`` where ``assignment`` names elements of the
    domain, or None when ``m`` is an immersion.  Preference order: a cycle
    sentence, then a single atom, then the positive diagram of the target.
    """
    A, B = m.domain, m.codomain
    if find_retraction(m) is not None:
        return None
    for fn, arity in A.signature.functions:
        if arity != 1:
            continue
        for k in range(1, len(B) + 1):
            s = cycle_sentence(fn, k)
            if eval_positive(B, s) and not eval_positive(A, s):
                return s, {}
    names = {i: f"x_{u}" for i, u in enumerate(A.universe)}
    env_a = {names[i]: i for i in range(len(A))}
    env_b = {names[i]: m.map[i] for i in range(len(A))}
    terms = terms_up_to_depth(A.signature, [names[i] for i in range(len(A))], 1)
    for atom in atoms_over(A.signature, terms, reflexive=False):
        if atom_holds(B, atom, env_b) and not atom_holds(A, atom, env_a):
            used = sorted(free_vars(atom))
            return atom, {v: A.universe[env_a[v]] for v in used}
    # m is injective and preserves and reflects depth-1 atoms; the diagram of B
    # with the image as parameters is reflected only through a retraction
    var_of = {}
    for i, b in enumerate(m.map):
        var_of.setdefault(b, names[i])
    extra = [b for b in range(len(B)) if b not in var_of]
    fresh = fresh_names(len(extra), avoid=set(names.values()), base=("z",))
    var_of.update(zip(extra, fresh))
    phi = exists(fresh, diagram_formula(B, var_of))
    return phi, {names[i]: A.universe[i] for i in range(len(A)) if names[i] in free_vars(phi)}


# ------------------------------------------------------------ pc / pac checks

@dataclass(frozen=True)
class CheckReport:
    subject: FinStructure
    theory: object          # Theory, or a description for lazily represented theories
    mode: str               # pc | pac | e_elementary
    verdict: BoundedVerdict
    counterexample: Morphism | None = None
    gained: tuple | None = None     # (formula, assignment)
    stage: int | None = None

    @property
    def outcome(self):
        return self.verdict.outcome

    @property
    def holds(self):
        return self.verdict.holds

    @property
    def fails(self):
        return self.verdict.fails

    def to_dict(self):
        out = {"mode": self.mode, "subject": self.subject.name,
               "theory": getattr(self.theory, "name", str(self.theory))}
        out.update(self.verdict.to_dict())
        if self.counterexample is not None:
            out["counterexample"] = {"target": structure_to_dict(self.counterexample.codomain),
                                     "morphism": self.counterexample.to_dict()}
        if self.gained is not None:
            phi, sigma = self.gained
            out["gained"] = {"formula": format_formula(phi), "at": dict(sorted(sigma.items()))}
        if self.stage is not None:
            out["stage"] = self.stage
        return out

    def describe(self):
        theory = getattr(self.theory, "name", str(self.theory))
        lines = [f"{self.mode} {self.subject.name} under {theory}: {self.verdict.describe()}"]
        if self.stage is not None and self.fails:
            lines.append(f"  failed at stage {self.stage}")
        if self.counterexample is not None:
            m = self.counterexample
            size = f"{len(m.codomain)} element" + ("s" if len(m.codomain) != 1 else "")
            lines.append(f"  {m.kind} into {m.codomain.name} ({size}): {m.literal()}")
            lines.append("  no retraction exists, so it is not an immersion")
        if self.gained is not None:
            phi, sigma = self.gained
            at = ", ".join(f"{k}={v}" for k, v in sorted(sigma.items()))
            lines.append(f"  gained: {format_formula(phi)}" + (f"  at {at}" if at else ""))
        return "\n".join(lines)


def _closure_check(A, theory, budget, kind, mode):
    require_model(A, theory)
    ticker = budget.ticker()
    try:
        for B in enumerate_models(theory, budget.max_model_size, ticker):
            for m in find_morphisms(A, B, kind, ticker=ticker):
                if find_retraction(m, ticker) is None:
                    verdict = BoundedVerdict(Outcome.FAILS, budget,
                                             Witness(B, morphisms=((kind, m),)))
                    return CheckReport(A, theory, mode, verdict, m, gained_formula(m))
    except BudgetExhausted as exc:
        return CheckReport(A, theory, mode, BoundedVerdict(Outcome.UNKNOWN, budget, None, (str(exc),)))
    flags = ("bounded",)
    if len(A) >= budget.max_model_size:
        # no model inside the bound is strictly larger than A
        flags += ("no_larger_target_in_bound",)
    return CheckReport(A, theory, mode, BoundedVerdict(Outcome.HOLDS, budget, None, flags))


def is_pc_bounded(A: FinStructure, theory: Theory, budget: SearchBudget) -> CheckReport:
    """Every homomorphism from A into a model of size <= N is an immersion."""
    return _closure_check(A, theory, budget, "hom", "pc")


def is_pac_bounded(A: FinStructure, theory: Theory, budget: SearchBudget) -> CheckReport:
    """Every embedding from A into a model of size <= N is an immersion."""
    return _closure_check(A, theory, budget, "embedding", "pac")


# --------------------------------------------------------------- certificates

@dataclass(frozen=True)
class PacCertificate:
    psi: object
    x_vars: tuple
    a_tuple: tuple
    theta1: object
    theta2: object
    y_vars: tuple
    b_tuple: tuple
    entailment: BoundedVerdict

    @property
    def sentence(self) -> HInductiveSentence:
        return HInductiveSentence(self.x_vars + self.y_vars, conj(self.psi, self.theta1), self.theta2)

    def assignment(self):
        return dict(zip(self.x_vars + self.y_vars, self.a_tuple + self.b_tuple))

    def to_dict(self):
        return {"psi": format_formula(self.psi), "x": list(self.x_vars), "a": list(self.a_tuple),
                "theta1": format_formula(self.theta1), "theta2": format_formula(self.theta2),
                "y": list(self.y_vars), "b": list(self.b_tuple),
                "sentence": format_sentence(self.sentence), "entailment": self.entailment.to_dict()}

    def describe(self):
        a = ", ".join(self.a_tuple)
        b = ", ".join(self.b_tuple)
        return (f"certificate for {format_formula(self.psi)} at ({a}):\n"
                f"  theta1 = {format_formula(self.theta1)}\n"
                f"  theta2 = {format_formula(self.theta2)}\n"
                f"  b = ({b}) for ({', '.join(self.y_vars)})\n"
                f"  {format_sentence(self.sentence)}: {self.entailment.describe()}")


class Verification:
    """Truthy when every check passed; ``reasons`` lists the failures."""

    def __init__(self, reasons):
        self.reasons = list(reasons)

    @property
    def ok(self):
        return not self.reasons

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"Verification(ok={self.ok}, reasons={self.reasons})"


def _x_vars(psi, x_vars):
    return tuple(x_vars) if x_vars is not None else tuple(sorted(free_vars(psi)))


@lru_cache(maxsize=256)
def _type_table(theory, psi, x_vars, y_vars, max_size, depth):
    """Candidate atoms over (x, y) and the atom-truth masks realised with psi in models.

    A pair (theta1, theta2) of atom sets is entailed within the bound exactly
    when no realised mask contains all of theta1 and none of theta2.
    """
    sig = theory.signature
    atoms = atoms_over(sig, terms_up_to_depth(sig, x_vars + y_vars, depth), reflexive=False)
    masks = set()
    for D in enumerate_models(theory, max_size):
        n = len(D)
        for xs in itertools.product(range(n), repeat=len(x_vars)):
            env = dict(zip(x_vars, xs))
            if not eval_positive(D, psi, {v: D.universe[i] for v, i in env.items()}):
                continue
            for ys in itertools.product(range(n), repeat=len(y_vars)):
                env.update(zip(y_vars, ys))
                mask = 0
                for i, atom in enumerate(atoms):
                    if atom_holds(D, atom, env):
                        mask |= 1 << i
                masks.add(mask)
    return tuple(atoms), frozenset(masks)


def _pair_entailed(masks, s1, s2):
    return not any(m & s1 == s1 and not m & s2 for m in masks)


def _bits(mask):
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _mask_of(indices):
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def _minimal_pair(masks, true_idx, false_idx, cap):
    for total in range(0, cap + 1):
        for i in range(0, total + 1):
            if i > len(true_idx) or total - i > len(false_idx):
                continue
            for c1 in itertools.combinations(true_idx, i):
                s1 = _mask_of(c1)
                for c2 in itertools.combinations(false_idx, total - i):
                    if _pair_entailed(masks, s1, _mask_of(c2)):
                        return list(c1), list(c2)
    # fall back to pruning the maximal pair one atom at a time
    c1, c2 = list(true_idx), list(false_idx)
    for lst in (c1, c2):
        for idx in list(lst):
            lst.remove(idx)
            if not _pair_entailed(masks, _mask_of(c1), _mask_of(c2)):
                lst.append(idx)
                lst.sort()
    return c1, c2


def find_certificate(A: FinStructure, theory: Theory, psi, a_tuple, budget: SearchBudget,
                     x_vars=None, max_extra=None):
    """Search for a certificate that psi fails at ``a_tuple`` in A.

    b ranges over tuples of distinct elements outside a (shorter first, then
    in universe order); repeated or shared elements add nothing a shorter
    tuple lacks.  For each b the maximal pair (every true atom, every false
    atom) is tried first; if even that is not entailed no smaller pair is.
    Otherwise the pair with the fewest atoms (fewer theta1 atoms first) is
    returned, searched exhaustively up to ``budget.max_formula_atoms`` atoms
    and by greedy pruning beyond.  Returns a :class:`PacCertificate`, or a
    ``NotFoundWithinBudget`` verdict.
    """
    require_positive(psi)
    require_model(A, theory)
    x_vars = _x_vars(psi, x_vars)
    a_tuple = tuple(a_tuple)
    if len(a_tuple) != len(x_vars):
        raise PreconditionError(f"need {len(x_vars)} parameters for {', '.join(x_vars) or 'none'}")
    sigma = dict(zip(x_vars, a_tuple))
    if eval_positive(A, psi, sigma):
        raise PreconditionError(f"{format_formula(psi)} already holds at {a_tuple}")
    a_idx = [A.index(a) for a in a_tuple]
    rest = [i for i in range(len(A)) if i not in a_idx]
    max_extra = len(rest) if max_extra is None else min(max_extra, len(rest))
    taken = all_variables(psi) | set(x_vars)
    for k in range(0, max_extra + 1):
        y_vars = fresh_names(k, avoid=taken)
        atoms, masks = _type_table(theory, psi, x_vars, y_vars, budget.max_model_size,
                                   budget.max_term_depth)
        for b_idx in itertools.combinations(rest, k):
            env = dict(zip(x_vars + y_vars, a_idx + list(b_idx)))
            truth = [atom_holds(A, atom, env) for atom in atoms]
            true_idx = [i for i, t in enumerate(truth) if t]
            false_idx = [i for i, t in enumerate(truth) if not t]
            if not _pair_entailed(masks, _mask_of(true_idx), _mask_of(false_idx)):
                continue
            c1, c2 = _minimal_pair(masks, true_idx, false_idx, budget.max_formula_atoms)
            theta1 = conj(*[atoms[i] for i in c1])
            theta2 = disj(*[atoms[i] for i in c2])
            sentence = HInductiveSentence(x_vars + y_vars, conj(psi, theta1), theta2)
            verdict = entails_bounded(theory, sentence, budget)
            if not verdict.holds:
                raise AssertionError("certificate table disagrees with entailment search")
            return PacCertificate(psi, x_vars, a_tuple, theta1, theta2, y_vars,
                                  tuple(A.universe[i] for i in b_idx), verdict)
    return BoundedVerdict(Outcome.NOT_FOUND, budget, None, ("bounded",))


def verify_certificate(c: PacCertificate, A: FinStructure, theory: Theory,
                       budget: SearchBudget) -> Verification:
    """Re-check the three satisfaction facts and re-run the entailment search."""
    reasons = []
    try:
        sigma_x = dict(zip(c.x_vars, c.a_tuple))
        sigma = c.assignment()
        if len(c.a_tuple) != len(c.x_vars) or len(c.b_tuple) != len(c.y_vars):
            reasons.append("tuple lengths do not match the variables")
        if eval_positive(A, c.psi, sigma_x):
            reasons.append("psi holds at a")
        if not eval_positive(A, c.theta1, sigma):
            reasons.append("theta1 fails at (a, b)")
        if eval_positive(A, c.theta2, sigma):
            reasons.append("theta2 holds at (a, b)")
        verdict = entails_bounded(theory, c.sentence, budget)
        if not verdict.holds:
            reasons.append(f"entailment {verdict.outcome.value} {budget.bound_text()}")
    except PoslogError as exc:
        reasons.append(f"{type(exc).__name__}: {exc}")
    return Verification(reasons)


# ------------------------------------------------------------------ Alc pairs

@dataclass(frozen=True)
class AlcPair:
    theta1: object
    theta2: object
    y_vars: tuple
    provenance: tuple = field(default=(), compare=False)   # ((A, a, b), ...)

    def key(self):
        return (self.theta1, self.theta2, self.y_vars)

    def to_dict(self):
        return {"theta1": format_formula(self.theta1), "theta2": format_formula(self.theta2),
                "y": list(self.y_vars),
                "sources": [{"structure": A.name, "a": list(a), "b": list(b)}
                            for A, a, b in self.provenance]}


def alc_probe(theory: Theory, psi, budget: SearchBudget, x_vars=None, sample_size=None) -> list:
    """Certificate pairs for psi harvested from every bounded-pac model of T.

    Models are sampled up to ``sample_size`` elements, by default N - 1: a
    model of size N has no larger target within the bound, so its pac
    verdict there is vacuous.
    """
    require_positive(psi)
    x_vars = _x_vars(psi, x_vars)
    if sample_size is None:
        sample_size = max(1, budget.max_model_size - 1)
    found = {}
    for A in enumerate_models(theory, sample_size):
        if not is_pac_bounded(A, theory, budget).holds:
            continue
        for a in itertools.product(A.universe, repeat=len(x_vars)):
            if eval_positive(A, psi, dict(zip(x_vars, a))):
                continue
            c = find_certificate(A, theory, psi, a, budget, x_vars)
            if not isinstance(c, PacCertificate):
                continue
            key = (c.theta1, c.theta2, c.y_vars)
            prov = found.get(key, ())
            found[key] = prov + ((A, c.a_tuple, c.b_tuple),)
    return [AlcPair(t1, t2, ys, prov) for (t1, t2, ys), prov in found.items()]


def alc_disjunction_combine(p: AlcPair, q: AlcPair, x_vars=()) -> AlcPair:
    """(p1 or q1, p2 or q2), with q's extra variables renamed apart from p's."""
    fresh = fresh_names(len(q.y_vars), avoid=set(x_vars) | set(p.y_vars)
                        | all_variables(p.theta1) | all_variables(p.theta2))
    ren = {old: Var(new) for old, new in zip(q.y_vars, fresh)}
    return AlcPair(disj(p.theta1, substitute(q.theta1, ren)),
                   disj(p.theta2, substitute(q.theta2, ren)),
                   p.y_vars + fresh, p.provenance + q.provenance)


def star_witness(theory: Theory, psi, x_vars, pair: AlcPair, A: FinStructure, a_tuple,
                 budget: SearchBudget):
    """Check the defining property of an Alc pair at (A, a).

    Needs A bounded-pac, psi false at a, some b with theta1 true and theta2
    false at (a, b), and the entailment.  Returns the b found, or None.
    """
    x_vars = tuple(x_vars)
    sigma = dict(zip(x_vars, a_tuple))
    if eval_positive(A, psi, sigma) or not is_pac_bounded(A, theory, budget).holds:
        return None
    sentence = HInductiveSentence(x_vars + pair.y_vars, conj(psi, pair.theta1), pair.theta2)
    if not entails_bounded(theory, sentence, budget).holds:
        return None
    for b in itertools.product(A.universe, repeat=len(pair.y_vars)):
        s = {**sigma, **dict(zip(pair.y_vars, b))}
        if eval_positive(A, pair.theta1, s) and not eval_positive(A, pair.theta2, s):
            return b
    return None


# ------------------------------------------------------------------------ T_h

@dataclass(frozen=True)
class AlcBinding:
    psi: object
    x_vars: tuple
    theta1: object
    theta2: object
    y_vars: tuple
    entailment: BoundedVerdict
    flags: tuple = ()

    @property
    def sentence(self):
        return HInductiveSentence(self.x_vars + self.y_vars, conj(self.psi, self.theta1), self.theta2)

    def cover_formula(self):
        """``forall x (psi or exists y (theta1 and not theta2))``."""
        witness = And((self.theta1, Not(self.theta2)))
        if self.y_vars:
            witness = Exists(self.y_vars, witness)
        body = Or((self.psi, witness))
        return Forall(self.x_vars, body) if self.x_vars else body


def alc_binding(theory: Theory, psi, budget: SearchBudget, x_vars=None, sample_size=None) -> AlcBinding:
    """One pair standing for all harvested pairs of psi, joined by disjunction.

    When no bounded-pac model refutes psi the pair (false, false) is used:
    the emitted axioms then say that psi holds everywhere.
    """
    x_vars = _x_vars(psi, x_vars)
    pairs = alc_probe(theory, psi, budget, x_vars, sample_size)
    if not pairs:
        p = AlcPair(FALSE, FALSE, ())
        flags = ("no_pac_refutation",)
    else:
        p = pairs[0]
        for q in pairs[1:]:
            p = alc_disjunction_combine(p, q, x_vars)
        flags = (f"combined_{len(pairs)}",) if len(pairs) > 1 else ()
    sentence = HInductiveSentence(x_vars + p.y_vars, conj(psi, p.theta1), p.theta2)
    return AlcBinding(psi, x_vars, p.theta1, p.theta2, p.y_vars,
                      entails_bounded(theory, sentence, budget), flags)


def build_th_axioms(theory: Theory, bindings) -> Theory:
    """T plus, per binding, its entailment axiom and its covering companion axiom."""
    bindings = list(bindings)
    if not bindings:
        return theory
    axioms, companions = [], []
    for i, b in enumerate(bindings):
        if not b.entailment.holds:
            raise PreconditionError(f"binding {i} for {format_formula(b.psi)} is not verified "
                                    f"({b.entailment.outcome.value})")
        b.sentence.check_well_sorted(theory.signature)
        axioms.append((f"alc{i}_entail", b.sentence))
        companions.append((f"alc{i}_cover", b.cover_formula()))
    return theory.with_axioms(axioms, companions, name=f"{theory.name}_h")


# ----------------------------------------------------------------- saturation

@dataclass(frozen=True)
class SaturationStep:
    source: FinStructure
    target: FinStructure
    embedding: Morphism
    gained: tuple


@dataclass(frozen=True)
class SaturationResult:
    start: FinStructure
    final: FinStructure
    embedding: Morphism        # start -> final
    steps: tuple
    report: CheckReport        # is_pac_bounded on the final structure

    def to_dict(self):
        return {"start": self.start.name, "final": structure_to_dict(self.final),
                "embedding": self.embedding.to_dict(),
                "steps": [{"from": s.source.name, "to": s.target.name,
                           "embedding": s.embedding.to_dict(),
                           "gained": format_formula(s.gained[0]),
                           "at": dict(sorted(s.gained[1].items()))} for s in self.steps],
                "final_check": self.report.to_dict()}

    def describe(self):
        lines = [f"saturate {self.start.name}: {len(self.steps)} step(s)"]
        for s in self.steps:
            lines.append(f"  {s.source.name} -> {s.target.name} gains {format_formula(s.gained[0])}")
        lines.append(f"  final {self.final.name} ({len(self.final)} elements)")
        lines.append("  " + self.report.describe().replace("\n", "\n  "))
        return "\n".join(lines)


def pac_saturate(A: FinStructure, theory: Theory, budget: SearchBudget, max_steps=None) -> SaturationResult:
    """Greedy approximation of a pac extension.

    While the current structure has an embedding into a model of size <= N
    that is not an immersion, move to that model.  Stops when the bounded pac
    check Holds (or runs out), or after ``max_steps`` moves.  The result is
    only as pac as the final report says.
    """
    require_model(A, theory)
    current, total = A, identity(A, "embedding")
    steps = []
    while True:
        report = is_pac_bounded(current, theory, budget)
        if not report.fails or (max_steps is not None and len(steps) >= max_steps):
            break
        e = report.counterexample
        steps.append(SaturationStep(current, e.codomain, e, report.gained))
        total = total.then(e, "embedding")
        current = e.codomain
    return SaturationResult(A, current, total, tuple(steps), report)


# -------------------------------------------------------------- e-elementary

def is_e_elementary_bounded(A: FinStructure, B: FinStructure, m: Morphism,
                            budget: SearchBudget) -> CheckReport:
    """Bounded test that B, read through ``m``, is a pac model of T_A.

    Stage 1: B is a model of T_A, i.e. ``m`` is an immersion.  Stage 2: for
    every structure D of size <= N and every embedding e: B -> D such that
    e.m is an immersion (so D is a model of T_A), e must be an immersion.
    """
    if m.domain.table_key() != A.table_key() or m.codomain.table_key() != B.table_key():
        raise MorphismError("map does not go from A to B")
    if not check_kind(m, "embedding"):
        raise MorphismError(f"{m.literal()} is not an embedding")
    label = f"T_A({A.name})"
    if find_retraction(m) is None:
        verdict = BoundedVerdict(Outcome.FAILS, budget, Witness(B, morphisms=(("embedding", m),)))
        return CheckReport(B, label, "e_elementary", verdict, m, gained_formula(m), stage=1)
    empty = Theory("empty", A.signature)
    ticker = budget.ticker()
    try:
        for D in enumerate_models(empty, budget.max_model_size, ticker):
            for e in find_morphisms(B, D, "embedding", ticker=ticker):
                if find_retraction(m.then(e), ticker) is None:
                    continue
                if find_retraction(e, ticker) is None:
                    verdict = BoundedVerdict(Outcome.FAILS, budget,
                                             Witness(D, morphisms=(("embedding", e),)))
                    return CheckReport(B, label, "e_elementary", verdict, e, gained_formula(e), stage=2)
    except BudgetExhausted as exc:
        return CheckReport(B, label, "e_elementary",
                           BoundedVerdict(Outcome.UNKNOWN, budget, None, (str(exc),)))
    return CheckReport(B, label, "e_elementary", BoundedVerdict(Outcome.HOLDS, budget, None, ("bounded",)))
