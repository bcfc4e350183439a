"""Text front end: tokenizer, recursive-descent parser and the matching printer.

Grammar (``#`` starts a line comment)::

    signature S { func f/1; rel R/2; const c; }
    theory T over S { axiom inj: forall x y. f(x) = f(y) -> x = y;
                      axiom nofix: not exists x. f(x) = x; }
    structure A over S { universe {a0, a1}; f: a0 -> a1, a1 -> a0; R: (a0, a1); c = a0; }

Formulas use ``and``, ``or``, ``exists x y. body``, ``true``, ``false``,
``t = s`` and ``R(t, ...)``.  Inside an axiom, ``->`` and ``forall`` may appear
only at the top and ``not`` only as the outermost symbol.  ``companion``
declarations take arbitrary first-order sentences.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ArityError, ParseError, PositivityError, SignatureError, UnknownSymbolError
from .structures import FinStructure, format_structure
from .syntax import (
    FALSE, TRUE, And, App, Const, Eq, Exists, Forall, HInductiveSentence, Implies, Not, Or, Rel,
    Signature, Theory, Var, format_formula, format_sentence, format_signature, format_theory,
    free_vars, is_positive,
)

KEYWORDS = {"signature", "theory", "structure", "over", "func", "rel", "const", "axiom",
            "companion", "universe", "exists", "forall", "not", "and", "or", "true", "false"}

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<arrow>->) | (?P<num>\d+) | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}();,.=:/]) | (?P<bad>.)
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    out = []
    line, start = 1, 0
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        col = m.start() - start + 1
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind in ("ws", "comment"):
            continue
        elif kind == "bad":
            raise ParseError(f"unexpected character {m.group()!r}", line, col)
        else:
            word = m.group()
            if kind == "ident" and word in KEYWORDS:
                kind = "kw"
            out.append(Token(kind, word, line, col))
    out.append(Token("eof", "", line, len(text) - start + 1))
    return out


@dataclass
class Workspace:
    """Named signatures, theories and structures loaded from text."""
    signatures: dict = field(default_factory=dict)
    theories: dict = field(default_factory=dict)
    structures: dict = field(default_factory=dict)
    sources: list = field(default_factory=list)

    def add(self, obj):
        table = {Signature: self.signatures, Theory: self.theories,
                 FinStructure: self.structures}[type(obj)]
        old = table.get(obj.name)
        if old is not None and old != obj:
            raise SignatureError(f"conflicting definitions of {obj.name!r}")
        table[obj.name] = obj
        return obj

    def merge(self, other: "Workspace"):
        for table in (other.signatures, other.theories, other.structures):
            for obj in table.values():
                self.add(obj)
        self.sources.extend(other.sources)


class Parser:
    def __init__(self, text, workspace=None, signature=None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.ws = workspace if workspace is not None else Workspace()
        self.sig = signature
        self.origins = {}   # id(node) -> token, for positivity diagnostics

    # -- token helpers
    @property
    def tok(self):
        return self.tokens[self.pos]

    def error(self, message, tok=None, cls=ParseError):
        tok = tok or self.tok
        return cls(message, tok.line, tok.col)

    def at(self, text):
        return self.tok.text == text and self.tok.kind in ("kw", "punct", "arrow")

    def take(self, text):
        if not self.at(text):
            shown = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}")
        tok = self.tok
        self.pos += 1
        return tok

    def accept(self, text):
        if self.at(text):
            self.pos += 1
            return True
        return False

    def ident(self, what="identifier"):
        if self.tok.kind != "ident":
            shown = self.tok.text or "end of input"
            raise self.error(f"expected {what}, found {shown!r}")
        tok = self.tok
        self.pos += 1
        return tok.text

    def number(self):
        if self.tok.kind != "num":
            raise self.error("expected a number")
        tok = self.tok
        self.pos += 1
        return int(tok.text)

    def expect_end(self):
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")

    # -- documents
    def document(self):
        while self.tok.kind != "eof":
            if self.at("signature"):
                self.ws.add(self.signature())
            elif self.at("theory"):
                self.ws.add(self.theory())
            elif self.at("structure"):
                self.ws.add(self.structure())
            else:
                raise self.error("expected 'signature', 'theory' or 'structure'")
        return self.ws

    def lookup_signature(self):
        tok = self.tok
        name = self.ident("signature name")
        if name not in self.ws.signatures:
            raise self.error(f"unknown signature {name!r}", tok, UnknownSymbolError)
        return self.ws.signatures[name]

    def signature(self):
        self.take("signature")
        name = self.ident("signature name")
        self.take("{")
        funcs, rels, consts = [], [], []
        while not self.accept("}"):
            tok = self.tok
            if self.accept("func") or self.accept("rel"):
                kind = self.tokens[self.pos - 1].text
                sym = self.ident("symbol")
                self.take("/")
                arity = self.number()
                if arity < 1:
                    raise self.error("arity must be at least 1", tok, ArityError)
                (funcs if kind == "func" else rels).append((sym, arity))
            elif self.accept("const"):
                consts.append(self.ident("constant"))
            else:
                raise self.error("expected 'func', 'rel' or 'const'")
            self.take(";")
        try:
            return Signature(name, tuple(funcs), tuple(rels), tuple(consts))
        except SignatureError as exc:
            raise self.error(str(exc)) from None

    def theory(self):
        self.take("theory")
        name = self.ident("theory name")
        self.take("over")
        self.sig = self.lookup_signature()
        self.take("{")
        axioms, companions = [], []
        while not self.accept("}"):
            if self.accept("axiom"):
                label = self.ident("axiom name")
                self.take(":")
                axioms.append((label, self.sentence()))
            elif self.accept("companion"):
                label = self.ident("axiom name")
                self.take(":")
                tok = self.tok
                phi = self.formula()
                if free_vars(phi):
                    raise self.error(f"companion axiom {label} has free variables", tok)
                companions.append((label, phi))
            else:
                raise self.error("expected 'axiom' or 'companion'")
            self.take(";")
        return Theory(name, self.sig, tuple(axioms), tuple(companions))

    def structure(self):
        self.take("structure")
        name = self.ident("structure name")
        self.take("over")
        sig = self.sig = self.lookup_signature()
        self.take("{")
        self.take("universe")
        self.take("{")
        universe = [self.ident("element")]
        while self.accept(","):
            universe.append(self.ident("element"))
        self.take("}")
        self.take(";")
        functions, relations, constants = {}, {}, {}
        while not self.accept("}"):
            tok = self.tok
            sym = self.ident("symbol")
            if sig.function_arity(sym) is not None:
                self.take(":")
                arity = sig.function_arity(sym)
                table = {}
                while True:
                    args = self.element_tuple()
                    if len(args) != arity:
                        raise self.error(f"{sym} has arity {arity}", tok, ArityError)
                    self.take("->")
                    table[args] = self.ident("element")
                    if not self.accept(","):
                        break
                functions[sym] = table
            elif sig.relation_arity(sym) is not None:
                self.take(":")
                arity = sig.relation_arity(sym)
                tuples = []
                if not self.at(";"):
                    while True:
                        args = self.element_tuple()
                        if len(args) != arity:
                            raise self.error(f"{sym} has arity {arity}", tok, ArityError)
                        tuples.append(args)
                        if not self.accept(","):
                            break
                relations[sym] = tuples
            elif sig.has_constant(sym):
                self.take("=")
                constants[sym] = self.ident("element")
            else:
                raise self.error(f"unknown symbol {sym!r}", tok, UnknownSymbolError)
            self.take(";")
        try:
            return FinStructure(sig, universe, functions, relations, constants, name)
        except SignatureError as exc:
            raise self.error(str(exc)) from None

    def element_tuple(self):
        if self.accept("("):
            items = [self.ident("element")]
            while self.accept(","):
                items.append(self.ident("element"))
            self.take(")")
            return tuple(items)
        return (self.ident("element"),)

    # -- formulas
    def sentence(self):
        tok = self.tok
        node = self.formula()
        return self.to_sentence(node, tok)

    def to_sentence(self, node, tok):
        if isinstance(node, Not):
            body = node.body
            if isinstance(body, Exists):
                variables, ant = body.vars, body.body
            else:
                variables, ant = (), body
            self.check_positive(ant)
            parts = (variables, ant, FALSE)
        else:
            variables = ()
            while isinstance(node, Forall):
                variables += node.vars
                node = node.body
            if isinstance(node, Implies):
                self.check_positive(node.left)
                self.check_positive(node.right)
                parts = (variables, node.left, node.right)
            else:
                self.check_positive(node)
                parts = (variables, TRUE, node)
        try:
            return HInductiveSentence(*parts)
        except PositivityError as exc:
            raise PositivityError(str(exc), tok.line, tok.col) from None

    def check_positive(self, node):
        bad = _first_non_positive(node)
        if bad is not None:
            tok = self.origins.get(id(bad), self.tok)
            what = {Not: "negation", Implies: "implication", Forall: "universal quantifier"}[type(bad)]
            raise PositivityError(f"{what} is not allowed inside a positive formula",
                                  tok.line, tok.col)

    def formula(self):
        return self.implication()

    def implication(self):
        left = self.disjunction()
        if self.at("->"):
            tok = self.take("->")
            node = Implies(left, self.implication())
            self.origins[id(node)] = tok
            return node
        return left

    def disjunction(self):
        parts = [self.conjunction()]
        while self.accept("or"):
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction(self):
        parts = [self.unary()]
        while self.accept("and"):
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        tok = self.tok
        if self.accept("not"):
            node = Not(self.unary())
            self.origins[id(node)] = tok
            return node
        if self.at("exists") or self.at("forall"):
            kind = self.tok.text
            self.pos += 1
            variables = [self.variable()]
            while self.tok.kind == "ident":
                variables.append(self.variable())
            self.take(".")
            body = self.implication()
            node = (Exists if kind == "exists" else Forall)(tuple(variables), body)
            self.origins[id(node)] = tok
            return node
        return self.primary()

    def variable(self):
        tok = self.tok
        name = self.ident("variable")
        if self.sig is not None and name in self.sig.symbols():
            raise self.error(f"{name!r} is a signature symbol, not a variable", tok)
        return name

    def primary(self):
        if self.accept("("):
            node = self.implication()
            self.take(")")
            return node
        if self.accept("true"):
            return TRUE
        if self.accept("false"):
            return FALSE
        tok = self.tok
        if tok.kind == "ident" and self.sig is not None and self.sig.relation_arity(tok.text) is not None:
            self.pos += 1
            args = self.arguments(tok)
            arity = self.sig.relation_arity(tok.text)
            if len(args) != arity:
                raise self.error(f"{tok.text} has arity {arity}, applied to {len(args)} arguments",
                                 tok, ArityError)
            return Rel(tok.text, args)
        left = self.term()
        self.take("=")
        return Eq(left, self.term())

    def arguments(self, tok):
        if not self.at("("):
            raise self.error(f"{tok.text} needs arguments", tok, ArityError)
        self.take("(")
        args = [self.term()]
        while self.accept(","):
            args.append(self.term())
        self.take(")")
        return tuple(args)

    def term(self):
        tok = self.tok
        name = self.ident("term")
        sig = self.sig
        if self.at("("):
            if sig is None or sig.function_arity(name) is None:
                kind = "relation" if sig is not None and sig.relation_arity(name) else "function"
                raise self.error(f"unknown {kind} symbol {name!r}", tok, UnknownSymbolError)
            args = self.arguments(tok)
            arity = sig.function_arity(name)
            if len(args) != arity:
                raise self.error(f"{name} has arity {arity}, applied to {len(args)} arguments",
                                 tok, ArityError)
            return App(name, args)
        if sig is not None:
            if sig.function_arity(name) is not None:
                raise self.error(f"function {name} used without arguments", tok, ArityError)
            if sig.relation_arity(name) is not None:
                raise self.error(f"relation {name} used as a term", tok, ArityError)
            if sig.has_constant(name):
                return Const(name)
        return Var(name)


def _first_non_positive(node):
    if isinstance(node, (Not, Implies, Forall)):
        return node
    if isinstance(node, (And, Or)):
        for p in node.parts:
            bad = _first_non_positive(p)
            if bad is not None:
                return bad
    if isinstance(node, Exists):
        return _first_non_positive(node.body)
    return None


# ---------------------------------------------------------------- public API

def parse_document(text: str, workspace: Workspace = None) -> Workspace:
    return Parser(text, workspace).document()


def parse(text: str, expected_kind: str, signature: Signature = None, workspace: Workspace = None):
    """Parse ``text`` as a signature, structure, theory, formula or sentence.

    ``formula`` yields a positive formula, or an h-inductive sentence when the
    text uses sentence-level syntax (``not``, ``forall`` or ``->`` at the top).
    ``positive`` and ``sentence`` force one reading.  Documents for the first
    three kinds may declare the signature inline.
    """
    if expected_kind in ("signature", "structure", "theory"):
        ws = parse_document(text, workspace)
        table = {"signature": ws.signatures, "structure": ws.structures,
                 "theory": ws.theories}[expected_kind]
        if not table:
            raise ParseError(f"no {expected_kind} declared", 1, 1)
        return list(table.values())[-1]
    p = Parser(text, workspace, signature)
    if expected_kind in ("formula", "positive", "sentence"):
        tok = p.tok
        node = p.formula()
        p.expect_end()
        top_level = isinstance(node, (Not, Implies, Forall))
        if expected_kind == "sentence" or (expected_kind == "formula" and top_level and not free_vars(node)):
            return p.to_sentence(node, tok)
        p.check_positive(node)
        return node
    if expected_kind == "general":
        node = p.formula()
        p.expect_end()
        return node
    raise ValueError(f"unknown kind {expected_kind!r}")


def to_text(obj, include_signature=True) -> str:
    """Print an object so that :func:`parse` reads it back unchanged."""
    if isinstance(obj, Signature):
        return format_signature(obj)
    if isinstance(obj, Theory):
        return format_theory(obj, include_signature)
    if isinstance(obj, FinStructure):
        return format_structure(obj, include_signature)
    if isinstance(obj, HInductiveSentence):
        return format_sentence(obj)
    return format_formula(obj)


def parse_map(literal: str) -> dict:
    """``"a0=b1,a1=b0"`` -> ``{"a0": "b1", "a1": "b0"}``."""
    out = {}
    for item in filter(None, (s.strip() for s in literal.split(","))):
        if "=" not in item:
            raise ParseError(f"bad map entry {item!r}; expected elem=elem")
        k, v = (s.strip() for s in item.split("=", 1))
        if k in out:
            raise ParseError(f"element {k} mapped twice")
        out[k] = v
    return out
