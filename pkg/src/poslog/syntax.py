"""Signatures, terms and the formula ASTs of positive logic.

Positive formulas are built from atoms with ``And``, ``Or`` and ``Exists``.
``Not``, ``Implies`` and ``Forall`` exist as node types so that the parser can
report where they occur and so that the companion axioms emitted by
:func:`poslog.closedness.build_th_axioms` (which are inductive but not
h-inductive) have a representation.  Every object here is immutable and
hashable.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import ArityError, PositivityError, SignatureError, UnknownSymbolError


@dataclass(frozen=True)
class Signature:
    name: str
    functions: tuple = ()   # ((symbol, arity), ...)
    relations: tuple = ()
    constants: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "functions", tuple((s, int(a)) for s, a in self.functions))
        object.__setattr__(self, "relations", tuple((s, int(a)) for s, a in self.relations))
        object.__setattr__(self, "constants", tuple(self.constants))
        seen = set()
        for sym in self.symbols():
            if sym in seen:
                raise SignatureError(f"symbol {sym!r} declared twice in signature {self.name}")
            seen.add(sym)
        for sym, arity in self.functions + self.relations:
            if arity < 1:
                raise SignatureError(f"{sym}/{arity}: arities must be positive")

    def symbols(self):
        return [s for s, _ in self.functions] + [s for s, _ in self.relations] + list(self.constants)

    def function_arity(self, sym):
        for s, a in self.functions:
            if s == sym:
                return a
        return None

    def relation_arity(self, sym):
        for s, a in self.relations:
            if s == sym:
                return a
        return None

    def has_constant(self, sym):
        return sym in self.constants

    def is_unary_algebra(self):
        return not self.relations and not self.constants and [a for _, a in self.functions] == [1]


def expand_with_constants(signature: Signature, elements: Sequence[str], prefix="c_") -> Signature:
    """The signature L(A): one fresh constant per element of A."""
    extra = tuple(prefix + str(e) for e in elements)
    return Signature(f"{signature.name}({','.join(map(str, elements))})",
                     signature.functions, signature.relations,
                     signature.constants + extra)


# --------------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple

    def __str__(self):
        return f"{self.fn}({', '.join(map(str, self.args))})"


Term = Var | Const | App


def term_depth(t) -> int:
    if isinstance(t, App):
        return 1 + max(term_depth(a) for a in t.args)
    return 0


def term_vars(t) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        out = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


def term_key(t):
    # deeper terms sort first so that canonical equalities read f(x) = x
    return (-term_depth(t), str(t))


def substitute_term(t, mapping):
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, App):
        return App(t.fn, tuple(substitute_term(a, mapping) for a in t.args))
    return t


# ------------------------------------------------------------------ formulas

@dataclass(frozen=True)
class Eq:
    left: object
    right: object

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class And:
    parts: tuple = ()

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Or:
    parts: tuple = ()

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Exists:
    vars: tuple
    body: object

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Not:
    body: object

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Implies:
    left: object
    right: object

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Forall:
    vars: tuple
    body: object

    def __str__(self):
        return format_formula(self)


TRUE = And(())
FALSE = Or(())

ATOMS = (Eq, Rel)
POSITIVE_NODES = (Eq, Rel, And, Or, Exists)


def eq(left, right):
    """Equality atom in canonical orientation."""
    if term_key(right) < term_key(left):
        left, right = right, left
    return Eq(left, right)


def conj(*parts):
    flat = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, And) else (p,))
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*parts):
    flat = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, Or) else (p,))
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def exists(variables, body):
    variables = tuple(variables)
    return Exists(variables, body) if variables else body


def is_positive(phi) -> bool:
    if isinstance(phi, ATOMS):
        return True
    if isinstance(phi, (And, Or)):
        return all(is_positive(p) for p in phi.parts)
    if isinstance(phi, Exists):
        return is_positive(phi.body)
    return False


def is_quantifier_free(phi) -> bool:
    if isinstance(phi, ATOMS):
        return True
    if isinstance(phi, (And, Or)):
        return all(is_quantifier_free(p) for p in phi.parts)
    if isinstance(phi, Not):
        return is_quantifier_free(phi.body)
    if isinstance(phi, Implies):
        return is_quantifier_free(phi.left) and is_quantifier_free(phi.right)
    return False


def require_positive(phi, what="formula"):
    if not is_positive(phi):
        raise PositivityError(f"{what} is not positive: {format_formula(phi)}")
    return phi


def free_vars(phi) -> frozenset:
    if isinstance(phi, Eq):
        return frozenset(term_vars(phi.left) | term_vars(phi.right))
    if isinstance(phi, Rel):
        out = set()
        for a in phi.args:
            out |= term_vars(a)
        return frozenset(out)
    if isinstance(phi, (And, Or)):
        out = frozenset()
        for p in phi.parts:
            out |= free_vars(p)
        return out
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.body) - set(phi.vars)
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, Implies):
        return free_vars(phi.left) | free_vars(phi.right)
    raise TypeError(f"not a formula: {phi!r}")


def substitute(phi, mapping):
    """Replace free variables by terms.  Bound variables shadow the mapping."""
    if isinstance(phi, Eq):
        return Eq(substitute_term(phi.left, mapping), substitute_term(phi.right, mapping))
    if isinstance(phi, Rel):
        return Rel(phi.name, tuple(substitute_term(a, mapping) for a in phi.args))
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(substitute(p, mapping) for p in phi.parts))
    if isinstance(phi, (Exists, Forall)):
        inner = {k: v for k, v in mapping.items() if k not in phi.vars}
        return type(phi)(phi.vars, substitute(phi.body, inner))
    if isinstance(phi, Not):
        return Not(substitute(phi.body, mapping))
    if isinstance(phi, Implies):
        return Implies(substitute(phi.left, mapping), substitute(phi.right, mapping))
    raise TypeError(f"not a formula: {phi!r}")


def quantifier_depth(phi) -> int:
    if isinstance(phi, ATOMS):
        return 0
    if isinstance(phi, (And, Or)):
        return max((quantifier_depth(p) for p in phi.parts), default=0)
    if isinstance(phi, (Exists, Forall)):
        return len(phi.vars) + quantifier_depth(phi.body)
    if isinstance(phi, Not):
        return quantifier_depth(phi.body)
    if isinstance(phi, Implies):
        return max(quantifier_depth(phi.left), quantifier_depth(phi.right))
    raise TypeError(f"not a formula: {phi!r}")


def atoms_of(phi) -> list:
    if isinstance(phi, ATOMS):
        return [phi]
    if isinstance(phi, (And, Or)):
        return [a for p in phi.parts for a in atoms_of(p)]
    if isinstance(phi, (Exists, Forall, Not)):
        return atoms_of(phi.body)
    if isinstance(phi, Implies):
        return atoms_of(phi.left) + atoms_of(phi.right)
    raise TypeError(f"not a formula: {phi!r}")


def check_well_sorted(phi, signature: Signature):
    """Raise if a symbol is unknown or used at the wrong arity."""
    def term(t):
        if isinstance(t, App):
            arity = signature.function_arity(t.fn)
            if arity is None:
                raise UnknownSymbolError(f"unknown function symbol {t.fn!r}")
            if arity != len(t.args):
                raise ArityError(f"{t.fn} has arity {arity}, applied to {len(t.args)} arguments")
            for a in t.args:
                term(a)
        elif isinstance(t, Const) and not signature.has_constant(t.name):
            raise UnknownSymbolError(f"unknown constant {t.name!r}")

    for atom in atoms_of(phi):
        if isinstance(atom, Eq):
            term(atom.left)
            term(atom.right)
        else:
            arity = signature.relation_arity(atom.name)
            if arity is None:
                raise UnknownSymbolError(f"unknown relation symbol {atom.name!r}")
            if arity != len(atom.args):
                raise ArityError(f"{atom.name} has arity {arity}, applied to {len(atom.args)} arguments")
            for a in atom.args:
                term(a)


# ----------------------------------------------------------------- sentences

@dataclass(frozen=True)
class HInductiveSentence:
    """``forall variables. antecedent -> consequent`` with both sides positive.

    A consequent of ``FALSE`` makes the sentence h-universal; an antecedent of
    ``TRUE`` makes it the universal closure of a positive formula.
    """
    variables: tuple
    antecedent: object = TRUE
    consequent: object = FALSE

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        require_positive(self.antecedent, "antecedent")
        require_positive(self.consequent, "consequent")
        loose = (free_vars(self.antecedent) | free_vars(self.consequent)) - set(self.variables)
        if loose:
            raise PositivityError(f"free variables {sorted(loose)} are not universally bound")

    @property
    def is_h_universal(self):
        return self.consequent == FALSE

    def check_well_sorted(self, signature):
        check_well_sorted(self.antecedent, signature)
        check_well_sorted(self.consequent, signature)

    def __str__(self):
        return format_sentence(self)


def h_universal(variables, body):
    """The sentence ``not exists variables. body``."""
    return HInductiveSentence(tuple(variables), body, FALSE)


def sentence_formula(s: HInductiveSentence):
    """The sentence as a general formula tree (for display and naive evaluation)."""
    body = Implies(s.antecedent, s.consequent)
    return Forall(s.variables, body) if s.variables else body


@dataclass(frozen=True)
class Theory:
    name: str
    signature: Signature
    axioms: tuple = ()        # ((name, HInductiveSentence), ...)
    companions: tuple = ()    # ((name, closed general formula), ...)

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple((n, s) for n, s in self.axioms))
        object.__setattr__(self, "companions", tuple((n, f) for n, f in self.companions))
        names = [n for n, _ in self.axioms + self.companions]
        if len(set(names)) != len(names):
            raise SignatureError(f"duplicate axiom names in theory {self.name}")
        for _, s in self.axioms:
            s.check_well_sorted(self.signature)
        for name, f in self.companions:
            check_well_sorted(f, self.signature)
            if free_vars(f):
                raise PositivityError(f"companion axiom {name} is not a sentence")

    def sentences(self):
        return [s for _, s in self.axioms]

    def with_axioms(self, extra, companions=(), name=None):
        return Theory(name or self.name, self.signature, self.axioms + tuple(extra),
                      self.companions + tuple(companions))

    def __str__(self):
        return format_theory(self)


# ------------------------------------------------------------------ printing

def format_formula(phi) -> str:
    if isinstance(phi, Eq):
        return f"{phi.left} = {phi.right}"
    if isinstance(phi, Rel):
        return f"{phi.name}({', '.join(map(str, phi.args))})"
    if isinstance(phi, And):
        if not phi.parts:
            return "true"
        return " and ".join(_wrapped(p) for p in phi.parts)
    if isinstance(phi, Or):
        if not phi.parts:
            return "false"
        return " or ".join(_wrapped(p) for p in phi.parts)
    if isinstance(phi, Exists):
        return f"exists {' '.join(phi.vars)}. {format_formula(phi.body)}"
    if isinstance(phi, Forall):
        return f"forall {' '.join(phi.vars)}. {format_formula(phi.body)}"
    if isinstance(phi, Not):
        return f"not {_wrapped(phi.body)}"
    if isinstance(phi, Implies):
        return f"{_wrapped(phi.left)} -> {_wrapped(phi.right)}"
    raise TypeError(f"not a formula: {phi!r}")


def _wrapped(phi):
    text = format_formula(phi)
    if isinstance(phi, ATOMS) or phi in (TRUE, FALSE):
        return text
    return f"({text})"


def format_sentence(s: HInductiveSentence) -> str:
    # each branch is chosen so that parsing the text gives back the same object
    vs = " ".join(s.variables)
    if s.consequent == FALSE and s.variables:
        return f"not exists {vs}. {format_formula(s.antecedent)}"
    if s.antecedent == TRUE and s.consequent != FALSE:
        body = format_formula(s.consequent)
        return f"forall {vs}. {body}" if vs else body
    body = f"{_wrapped(s.antecedent)} -> {_wrapped(s.consequent)}"
    return f"forall {vs}. {body}" if vs else body


def format_signature(sig: Signature) -> str:
    decls = [f"func {s}/{a};" for s, a in sig.functions]
    decls += [f"rel {s}/{a};" for s, a in sig.relations]
    decls += [f"const {c};" for c in sig.constants]
    return f"signature {sig.name} {{ {' '.join(decls)} }}" if decls else f"signature {sig.name} {{ }}"


def format_theory(t: Theory, include_signature=False) -> str:
    lines = [format_signature(t.signature)] if include_signature else []
    lines.append(f"theory {t.name} over {t.signature.name} {{")
    for name, s in t.axioms:
        lines.append(f"  axiom {name}: {format_sentence(s)};")
    for name, f in t.companions:
        lines.append(f"  companion {name}: {format_formula(f)};")
    lines.append("}")
    return "\n".join(lines)


# ------------------------------------------------------- disjunctive normal form

@dataclass(frozen=True)
class Clause:
    """``exists bound. atom_1 and ... and atom_k``."""
    bound: tuple
    atoms: tuple


def dnf(phi) -> list:
    """Rewrite a positive formula as a disjunction of primitive-positive clauses.

    Bound variables are renamed apart (``_1``, ``_2``, ...) so clauses never
    capture a free variable.
    """
    counter = itertools.count(1)

    def go(f):
        if isinstance(f, ATOMS):
            return [Clause((), (f,))]
        if isinstance(f, Or):
            return [c for p in f.parts for c in go(p)]
        if isinstance(f, And):
            out = [Clause((), ())]
            for p in f.parts:
                out = [Clause(a.bound + b.bound, a.atoms + b.atoms) for a in out for b in go(p)]
            return out
        if isinstance(f, Exists):
            fresh = {v: Var(f"_{next(counter)}") for v in f.vars}
            names = tuple(t.name for t in fresh.values())
            return [Clause(names + c.bound, c.atoms) for c in go(substitute(f.body, fresh))]
        raise PositivityError(f"not a positive formula: {format_formula(f)}")

    return go(phi)


# ----------------------------------------------------------------- enumeration

def terms_up_to_depth(signature: Signature, variables: Sequence[str], max_depth: int) -> list:
    """All terms over ``variables`` and the signature's constants of depth <= max_depth."""
    levels = [[Var(v) for v in variables] + [Const(c) for c in signature.constants]]
    everything = list(levels[0])
    for _ in range(max_depth):
        older = everything
        newest = set(levels[-1])
        level = []
        for fn, arity in signature.functions:
            for args in itertools.product(older, repeat=arity):
                if any(a in newest for a in args):
                    level.append(App(fn, args))
        levels.append(level)
        everything = older + level
    return everything


def atoms_over(signature: Signature, terms: Sequence, reflexive=True) -> list:
    """Every atom over ``terms``, equalities canonically oriented, in a fixed order."""
    ordered = sorted(terms, key=term_key)
    out = []
    for i, s in enumerate(ordered):
        for t in ordered[i if reflexive else i + 1:]:
            out.append(Eq(s, t))
    for rel, arity in signature.relations:
        for args in itertools.product(ordered, repeat=arity):
            out.append(Rel(rel, args))
    return out


def enumerate_qf_positive(signature: Signature, variables: Sequence[str], shape: str,
                          max_atoms: int, max_term_depth: int = 1) -> Iterator:
    """Yield every conjunction (or disjunction) of 1..max_atoms distinct atoms.

    Atoms range over terms in ``variables`` of depth <= max_term_depth.  Each
    formula appears once, with its atoms in canonical order; fewer atoms come
    first.
    """
    if shape not in ("conjunction", "disjunction", "conjunction_of_atoms", "disjunction_of_atoms"):
        raise ValueError(f"unknown shape {shape!r}")
    if max_atoms < 1:
        raise ValueError("max_atoms must be at least 1")
    if max_term_depth < 0:
        raise ValueError("max_term_depth must be non-negative")
    combine = conj if shape.startswith("conjunction") else disj
    atoms = atoms_over(signature, terms_up_to_depth(signature, variables, max_term_depth))
    for k in range(1, max_atoms + 1):
        for chosen in itertools.combinations(atoms, k):
            yield combine(*chosen)


def fresh_names(count: int, avoid=(), base=("y", "z", "w", "u", "v")) -> tuple:
    """``count`` variable names not in ``avoid``: y, z, w, u, v, then y1, y2, ..."""
    taken = set(avoid)
    pool = itertools.chain(base, (f"y{i}" for i in itertools.count(1)))
    out = []
    for name in pool:
        if len(out) == count:
            break
        if name not in taken:
            out.append(name)
            taken.add(name)
    return tuple(out)
