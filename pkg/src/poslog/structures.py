"""Finite structures and Tarskian evaluation.

Elements carry display names but every table is stored over indices
``0..n-1``; a function of arity k is a flat tuple indexed in row-major order.
Positive formulas are evaluated through their disjunctive normal form with a
small constraint solver, which forces a variable as soon as an equation
``t = v`` has every other variable bound.  :func:`evaluate` is the plain
recursive evaluator; it handles arbitrary first-order formulas and is kept
deliberately naive.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import EvaluationError, NotAModelError, SignatureError
from .syntax import (
    ATOMS, FALSE, TRUE, And, App, Const, Eq, Exists, Forall, HInductiveSentence, Implies, Not,
    Or, Rel, Signature, Theory, Var, atoms_over, dnf, expand_with_constants, free_vars,
    require_positive, term_vars, terms_up_to_depth,
)


class FinStructure:
    """A finite structure over a single-sorted signature."""

    __slots__ = ("signature", "universe", "functions", "relations", "constants", "name",
                 "_index", "_key", "_hash")

    def __init__(self, signature: Signature, universe: Sequence[str], functions=None,
                 relations=None, constants=None, name="A"):
        universe = tuple(str(u) for u in universe)
        if not universe:
            raise SignatureError("a structure needs a non-empty universe")
        if len(set(universe)) != len(universe):
            raise SignatureError("duplicate element names in universe")
        index = {u: i for i, u in enumerate(universe)}
        n = len(universe)

        def idx(e):
            if isinstance(e, int) and not isinstance(e, bool):
                if not 0 <= e < n:
                    raise SignatureError(f"element index {e} out of range")
                return e
            try:
                return index[str(e)]
            except KeyError:
                raise SignatureError(f"{e!r} is not an element of the universe") from None

        functions = dict(functions or {})
        ftables = {}
        for fn, arity in signature.functions:
            if fn not in functions:
                raise SignatureError(f"no table for function {fn}")
            table = functions.pop(fn)
            if isinstance(table, Mapping):
                flat = [None] * (n ** arity)
                for args, value in table.items():
                    args = args if isinstance(args, tuple) else (args,)
                    if len(args) != arity:
                        raise SignatureError(f"{fn}: entry {args} has wrong arity")
                    pos = 0
                    for a in args:
                        pos = pos * n + idx(a)
                    flat[pos] = idx(value)
                if None in flat:
                    raise SignatureError(f"function {fn} is not total")
            else:
                flat = [idx(v) for v in table]
                if len(flat) != n ** arity:
                    raise SignatureError(f"function {fn} is not total")
            ftables[fn] = tuple(flat)
        if functions:
            raise SignatureError(f"unknown function symbols {sorted(functions)}")

        relations = dict(relations or {})
        rtables = {}
        for rel, arity in signature.relations:
            tuples = set()
            for t in relations.pop(rel, ()):
                t = t if isinstance(t, tuple) else (t,)
                if len(t) != arity:
                    raise SignatureError(f"{rel}: tuple {t} has wrong arity")
                tuples.add(tuple(idx(a) for a in t))
            rtables[rel] = frozenset(tuples)
        if relations:
            raise SignatureError(f"unknown relation symbols {sorted(relations)}")

        constants = dict(constants or {})
        ctable = {}
        for c in signature.constants:
            if c not in constants:
                raise SignatureError(f"constant {c} is not interpreted")
            ctable[c] = idx(constants.pop(c))
        if constants:
            raise SignatureError(f"unknown constants {sorted(constants)}")

        self.signature = signature
        self.universe = universe
        self.functions = ftables
        self.relations = rtables
        self.constants = ctable
        self.name = name
        self._index = index
        self._key = (signature, universe, tuple(sorted(ftables.items())),
                     tuple(sorted((r, tuple(sorted(ts))) for r, ts in rtables.items())),
                     tuple(sorted(ctable.items())))
        self._hash = hash((name, self._key))

    # -- basics
    def __len__(self):
        return len(self.universe)

    @property
    def size(self):
        return len(self.universe)

    def index(self, element) -> int:
        if isinstance(element, int) and not isinstance(element, bool):
            return element
        try:
            return self._index[str(element)]
        except KeyError:
            raise EvaluationError(f"{element!r} is not an element of {self.name}") from None

    def apply(self, fn, args) -> int:
        table = self.functions[fn]
        n = len(self.universe)
        pos = 0
        for a in args:
            pos = pos * n + a
        return table[pos]

    def unary(self, fn):
        return self.functions[fn]

    def table_key(self):
        """Everything except the name: two structures with equal keys are identical."""
        return self._key

    def __eq__(self, other):
        return (isinstance(other, FinStructure) and self.name == other.name
                and self._key == other._key)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"<FinStructure {self.name} |{len(self.universe)}| over {self.signature.name}>"

    def __str__(self):
        return format_structure(self)

    def renamed(self, name):
        return FinStructure.from_tables(self.signature, self.universe, self.functions,
                                        self.relations, self.constants, name)

    def relabeled(self, names):
        return FinStructure.from_tables(self.signature, names, self.functions,
                                        self.relations, self.constants, self.name)

    @classmethod
    def from_tables(cls, signature, universe, functions, relations=None, constants=None, name="A"):
        """Build from index-based tables (flat tuples, sets of index tuples)."""
        return cls(signature, universe, {f: list(t) for f, t in functions.items()},
                   {r: set(ts) for r, ts in (relations or {}).items()},
                   dict(constants or {}), name)


# ------------------------------------------------------------------ builders

def unary_structure(signature, table, names=None, name="A", relations=None, constants=None):
    """Structure with a single unary function given as a list of images."""
    fn = signature.functions[0][0]
    names = names or [f"a{i}" for i in range(len(table))]
    return FinStructure(signature, names, {fn: list(table)}, relations, constants, name)


def disjoint_union(a: FinStructure, b: FinStructure, name=None, names=None) -> FinStructure:
    """Disjoint union of two structures without constants."""
    if a.signature != b.signature:
        raise SignatureError("disjoint union of structures over different signatures")
    if a.signature.constants:
        raise SignatureError("disjoint union is undefined with constants")
    na, nb = len(a), len(b)
    n = na + nb
    functions = {}
    for fn, arity in a.signature.functions:
        flat = []
        for args in itertools.product(range(n), repeat=arity):
            if all(x < na for x in args):
                flat.append(a.apply(fn, args))
            elif all(x >= na for x in args):
                flat.append(b.apply(fn, [x - na for x in args]) + na)
            else:
                raise SignatureError("disjoint union is undefined for mixed arguments of "
                                     f"the {arity}-ary function {fn}")
        functions[fn] = flat
    relations = {r: set(a.relations[r]) | {tuple(x + na for x in t) for t in b.relations[r]}
                 for r, _ in a.signature.relations}
    names = names or [f"a{i}" for i in range(n)]
    return FinStructure(a.signature, names, functions, relations, {}, name or f"{a.name}+{b.name}")


def substructure_is_closed(A: FinStructure, elements) -> bool:
    keep = {A.index(e) for e in elements}
    for fn, arity in A.signature.functions:
        for args in itertools.product(sorted(keep), repeat=arity):
            if A.apply(fn, args) not in keep:
                return False
    return all(c in keep for c in A.constants.values())


def expand(A: FinStructure, prefix="c_"):
    """A viewed as an L(A)-structure: each element names itself."""
    sig = expand_with_constants(A.signature, A.universe, prefix)
    consts = dict(A.constants)
    consts.update({prefix + u: i for i, u in enumerate(A.universe)})
    return FinStructure.from_tables(sig, A.universe, A.functions, A.relations, consts, A.name)


# ------------------------------------------------------------------ evaluation

def eval_term(A: FinStructure, t, env) -> int:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {t.name}") from None
    if isinstance(t, App):
        return A.apply(t.fn, [eval_term(A, a, env) for a in t.args])
    try:
        return A.constants[t.name]
    except KeyError:
        raise EvaluationError(f"constant {t.name} is not interpreted in {A.name}") from None


def atom_holds(A: FinStructure, atom, env) -> bool:
    if isinstance(atom, Eq):
        return eval_term(A, atom.left, env) == eval_term(A, atom.right, env)
    return tuple(eval_term(A, t, env) for t in atom.args) in A.relations[atom.name]


@lru_cache(maxsize=4096)
def _clauses(phi):
    return tuple((c.bound, tuple((a, frozenset(_atom_vars(a))) for a in c.atoms)) for c in dnf(phi))


def _atom_vars(atom):
    if isinstance(atom, Eq):
        return term_vars(atom.left) | term_vars(atom.right)
    out = set()
    for t in atom.args:
        out |= term_vars(t)
    return out


def solve(A: FinStructure, atoms, variables, env):
    """Yield every extension of ``env`` to ``variables`` satisfying all ``atoms``.

    ``atoms`` is a sequence of ``(atom, variable_set)`` pairs.  Results are
    produced in lexicographic order of the free choices made.
    """
    env = dict(env)
    pending = list(atoms)
    # propagate forced equations and fail fast on fully bound atoms
    while True:
        forced = False
        rest = []
        for atom, vs in pending:
            unbound = [v for v in vs if v not in env]
            if not unbound:
                if not atom_holds(A, atom, env):
                    return
                continue
            if len(unbound) == 1 and isinstance(atom, Eq):
                w = unbound[0]
                for side, other in ((atom.left, atom.right), (atom.right, atom.left)):
                    if side == Var(w) and w not in term_vars(other):
                        env[w] = eval_term(A, other, env)
                        forced = True
                        break
            rest.append((atom, vs))
        pending = rest
        if not forced:
            break
    free = [v for v in variables if v not in env]
    if not free:
        yield env
        return
    v = free[0]
    for value in range(len(A.universe)):
        env[v] = value
        yield from solve(A, pending, free[1:], env)
    return


def _holds_positive(A, phi, env) -> bool:
    for bound, atoms in _clauses(phi):
        for _ in solve(A, atoms, bound, env):
            return True
    return False


def _index_env(A, sigma):
    return {k: A.index(v) for k, v in (sigma or {}).items()}


@lru_cache(maxsize=4096)
def _checked_free_vars(phi):
    require_positive(phi)
    return free_vars(phi)


def eval_positive(A: FinStructure, phi, sigma=None) -> bool:
    """Truth of a positive formula under an assignment of element names."""
    fv = _checked_free_vars(phi)
    env = _index_env(A, sigma)
    missing = fv - set(env)
    if missing:
        raise EvaluationError(f"unbound free variables {sorted(missing)}")
    return _holds_positive(A, phi, env)


def evaluate(A: FinStructure, phi, sigma=None) -> bool:
    """Naive recursive evaluation of an arbitrary first-order formula."""
    env = _index_env(A, sigma)
    missing = free_vars(phi) - set(env)
    if missing:
        raise EvaluationError(f"unbound free variables {sorted(missing)}")
    return _naive(A, phi, env)


def _naive(A, phi, env):
    if isinstance(phi, ATOMS):
        return atom_holds(A, phi, env)
    if isinstance(phi, And):
        return all(_naive(A, p, env) for p in phi.parts)
    if isinstance(phi, Or):
        return any(_naive(A, p, env) for p in phi.parts)
    if isinstance(phi, Not):
        return not _naive(A, phi.body, env)
    if isinstance(phi, Implies):
        return (not _naive(A, phi.left, env)) or _naive(A, phi.right, env)
    if isinstance(phi, (Exists, Forall)):
        test = any if isinstance(phi, Exists) else all
        n = len(A.universe)
        return test(_naive(A, phi.body, {**env, **dict(zip(phi.vars, values))})
                    for values in itertools.product(range(n), repeat=len(phi.vars)))
    raise TypeError(f"not a formula: {phi!r}")


def find_violation(A: FinStructure, s: HInductiveSentence):
    """An assignment (element names) falsifying ``s`` in A, or None."""
    checked = set()
    for bound, atoms in _clauses(s.antecedent):
        for env in solve(A, atoms, s.variables + bound, {}):
            xs = tuple(env[v] for v in s.variables)
            if xs in checked:
                continue
            checked.add(xs)
            if not _holds_positive(A, s.consequent, dict(zip(s.variables, xs))):
                return {v: A.universe[x] for v, x in zip(s.variables, xs)}
    return None


def satisfies(A: FinStructure, s: HInductiveSentence) -> bool:
    s.check_well_sorted(A.signature)
    return find_violation(A, s) is None


def is_model(A: FinStructure, theory: Theory) -> bool:
    """A satisfies every axiom, companion axioms included."""
    if A.signature != theory.signature:
        raise SignatureError(f"{A.name} is over {A.signature.name}, theory over {theory.signature.name}")
    if any(find_violation(A, s) is not None for _, s in theory.axioms):
        return False
    return all(evaluate(A, f) for _, f in theory.companions)


def require_model(A: FinStructure, theory: Theory):
    if not is_model(A, theory):
        raise NotAModelError(f"{A.name} is not a model of {theory.name}")


# ------------------------------------------------------------------- diagrams

def _diagram_atoms(A, depth, prefix):
    L = expand(A, prefix)
    terms = terms_up_to_depth(L.signature, (), depth)
    return L, atoms_over(L.signature, terms)


def diag_plus(A: FinStructure, depth=1, prefix="c_") -> list:
    """The atomic L(A)-sentences true in A, over terms of depth <= ``depth``.

    This is a finite generating set of the positive diagram; closure under
    conjunction and disjunction is left implicit.
    """
    L, atoms = _diagram_atoms(A, depth, prefix)
    return [a for a in atoms if atom_holds(L, a, {})]


def diag(A: FinStructure, depth=1, prefix="c_") -> list:
    """Atomic and negated atomic L(A)-sentences true in A (term depth <= ``depth``)."""
    L, atoms = _diagram_atoms(A, depth, prefix)
    return [a if atom_holds(L, a, {}) else Not(a) for a in atoms]


def diagram_formula(A: FinStructure, var_of=None):
    """Conjunction of every depth-1 atomic fact of A, elements read as variables.

    ``var_of`` maps element index to variable name (default ``v_<element>``).
    Existentially closing some of those variables yields the positive diagram
    of A with the rest as parameters.
    """
    var_of = var_of or {i: f"v_{u}" for i, u in enumerate(A.universe)}
    parts = []
    for fn, arity in A.signature.functions:
        for args in itertools.product(range(len(A)), repeat=arity):
            parts.append(Eq(App(fn, tuple(Var(var_of[a]) for a in args)), Var(var_of[A.apply(fn, args)])))
    for rel, _ in A.signature.relations:
        for t in sorted(A.relations[rel]):
            parts.append(Rel(rel, tuple(Var(var_of[a]) for a in t)))
    for c, v in A.constants.items():
        parts.append(Eq(Const(c), Var(var_of[v])))
    return And(tuple(parts)) if len(parts) != 1 else parts[0]


# ------------------------------------------------------------ text and JSON

def format_structure(A: FinStructure, include_signature=False) -> str:
    from .syntax import format_signature
    lines = [format_signature(A.signature)] if include_signature else []
    u = A.universe
    lines.append(f"structure {A.name} over {A.signature.name} {{")
    lines.append(f"  universe {{{', '.join(u)}}};")
    n = len(u)
    for fn, arity in A.signature.functions:
        entries = []
        for args in itertools.product(range(n), repeat=arity):
            lhs = u[args[0]] if arity == 1 else f"({', '.join(u[a] for a in args)})"
            entries.append(f"{lhs} -> {u[A.apply(fn, args)]}")
        lines.append(f"  {fn}: {', '.join(entries)};")
    for rel, _ in A.signature.relations:
        tuples = sorted(A.relations[rel])
        if tuples:
            lines.append(f"  {rel}: {', '.join('(' + ', '.join(u[a] for a in t) + ')' for t in tuples)};")
    for c in A.signature.constants:
        lines.append(f"  {c} = {u[A.constants[c]]};")
    lines.append("}")
    return "\n".join(lines)


def signature_to_dict(sig: Signature) -> dict:
    return {"name": sig.name,
            "functions": [[s, a] for s, a in sig.functions],
            "relations": [[s, a] for s, a in sig.relations],
            "constants": list(sig.constants)}


def signature_from_dict(d) -> Signature:
    return Signature(d["name"], tuple(map(tuple, d["functions"])),
                     tuple(map(tuple, d["relations"])), tuple(d["constants"]))


def theory_to_dict(t: Theory) -> dict:
    from .syntax import format_formula, format_sentence
    return {"name": t.name, "signature": signature_to_dict(t.signature),
            "axioms": {n: format_sentence(s) for n, s in t.axioms},
            "companions": {n: format_formula(f) for n, f in t.companions}}


def structure_to_dict(A: FinStructure) -> dict:
    u = A.universe
    n = len(u)
    functions = {}
    for fn, arity in A.signature.functions:
        functions[fn] = [[u[a] for a in args] + [u[A.apply(fn, args)]]
                         for args in itertools.product(range(n), repeat=arity)]
    return {"name": A.name,
            "signature": signature_to_dict(A.signature),
            "universe": list(u),
            "functions": functions,
            "relations": {r: [[u[a] for a in t] for t in sorted(A.relations[r])]
                          for r, _ in A.signature.relations},
            "constants": {c: u[v] for c, v in sorted(A.constants.items())}}


def structure_from_dict(d) -> FinStructure:
    sig = signature_from_dict(d["signature"])
    functions = {fn: {tuple(row[:-1]): row[-1] for row in rows} for fn, rows in d["functions"].items()}
    relations = {r: [tuple(t) for t in ts] for r, ts in d["relations"].items()}
    return FinStructure(sig, d["universe"], functions, relations, d["constants"], d["name"])


def diagram_to_dict(A: FinStructure, depth=1) -> dict:
    from .syntax import format_formula
    return {"structure": A.name,
            "depth": depth,
            "positive": [format_formula(a) for a in diag_plus(A, depth)],
            "full": [format_formula(a) for a in diag(A, depth)]}


__all__ = [
    "FinStructure", "unary_structure", "disjoint_union", "expand", "eval_term", "atom_holds",
    "eval_positive", "evaluate", "satisfies", "find_violation", "is_model", "require_model",
    "diag_plus", "diag", "diagram_formula", "format_structure", "structure_to_dict",
    "structure_from_dict", "diagram_to_dict", "solve", "TRUE", "FALSE",
]
