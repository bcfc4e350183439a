"""``poslog`` command line.

Exit codes: 0 Holds / Found / true, 1 Fails / NotFound / false,
2 Unknown (budget exhausted), 3 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import corpus
from .amalgamation import AmalgamRequest, amalgamate_ei, embedding_amalgamation_probe
from .closedness import (
    PacCertificate, alc_binding, alc_probe, build_th_axioms, find_certificate, is_e_elementary_bounded,
    is_pac_bounded, is_pc_bounded, pac_saturate, verify_certificate,
)
from .enumeration import enumerate_models
from .errors import PoslogError
from .morphisms import Morphism, check_kind, find_morphisms
from .parser import Workspace, parse, parse_document, parse_map, to_text
from .structures import (
    eval_positive, find_violation, format_structure, structure_to_dict, theory_to_dict,
)
from .syntax import HInductiveSentence, format_formula, format_sentence, free_vars
from .theories import Outcome, SearchBudget, common_continuation, ctr_probe, entails_bounded
from .verify import corpus_verify, format_table

EXIT = {Outcome.HOLDS: 0, Outcome.FOUND: 0, Outcome.FAILS: 1, Outcome.NOT_FOUND: 1, Outcome.UNKNOWN: 2}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _global(p):
    p.add_argument("--bound", type=int, default=None, help="largest model size N (default 6)")
    p.add_argument("--depth", type=int, default=1, help="term depth of generated atoms")
    p.add_argument("--atoms", type=int, default=3, help="atoms per generated formula")
    p.add_argument("--nodes", type=int, default=None, help="search node limit")
    p.add_argument("--time-limit", type=float, default=None, help="seconds per search")
    p.add_argument("--limit", type=int, default=None, help="maximum number of listed results")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser():
    top = _Parser(prog="poslog", description="Bounded positive model theory on finite structures.")
    sub = top.add_subparsers(dest="command", parser_class=_Parser)

    def cmd(name, help, *positional):
        p = sub.add_parser(name, help=help)
        for arg in positional:
            p.add_argument(arg)
        _global(p)
        return p

    p = cmd("parse", "parse a file and print it back", "file")
    p.add_argument("--kind", choices=["document", "signature", "theory", "structure"], default="document")
    p = cmd("eval", "evaluate a positive formula or sentence on a structure", "structure")
    p.add_argument("--formula", required=True)
    p.add_argument("--at", default="", help="assignment, e.g. x=a0,y=a1")
    p.add_argument("--theory", help="theory whose signature the formula uses (default: the structure's)")
    p = cmd("models", "list models of a theory up to the bound")
    p.add_argument("--theory", required=True)
    p = cmd("entails", "bounded entailment of an h-inductive sentence")
    p.add_argument("--theory", required=True)
    p.add_argument("--sentence", required=True)
    p = cmd("ctr", "positive formulas inconsistent with a formula, within the bound")
    p.add_argument("--theory", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--vars", default=None, help="comma separated free variables")
    p = cmd("continue", "common continuation of two models", "left", "right")
    p.add_argument("--theory", required=True)

    mp = sub.add_parser("morphisms", help="find or check morphisms")
    msub = mp.add_subparsers(dest="action", parser_class=_Parser)
    p = msub.add_parser("find", help="list morphisms of a kind")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--kind", choices=["hom", "embedding", "immersion"], default="hom")
    _global(p)
    p = msub.add_parser("check", help="check a map literal against a kind")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--map", required=True)
    p.add_argument("--kind", choices=["hom", "embedding", "immersion"], default="hom")
    _global(p)

    for name in ("pc", "pac"):
        p = cmd(name, f"bounded {name} check", "structure")
        p.add_argument("--theory", required=True)
    p = cmd("certify", "search a certificate that a formula fails at a tuple", "structure")
    p.add_argument("--theory", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--at", default="", help="elements for the free variables, comma separated")
    p.add_argument("--vars", default=None, help="free variables in order (default: sorted)")
    p = cmd("verify-cert", "re-check a certificate written by certify --json", "structure")
    p.add_argument("--theory", required=True)
    p.add_argument("--cert", required=True, help="JSON file from certify --json")
    p = cmd("alc", "harvest certificate pairs for a formula from bounded-pac models")
    p.add_argument("--theory", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--vars", default=None)
    p = cmd("build-th", "extend a theory by the certificate axioms for some formulas")
    p.add_argument("--theory", required=True)
    p.add_argument("--formula", action="append", default=[], help="repeatable")
    p.add_argument("--vars", action="append", default=None, help="per formula, comma separated")
    p = cmd("saturate", "greedily extend towards a pac model", "structure")
    p.add_argument("--theory", required=True)
    p.add_argument("--steps", type=int, default=None)
    p = cmd("e-elem", "bounded e-elementary extension check", "A", "B")
    p.add_argument("--map", required=True)
    p = cmd("amalgamate", "embedding-immersion amalgamation search")
    for flag in ("--base", "--top", "--map-e", "--left", "--map-i", "--theory"):
        p.add_argument(flag, required=True)
    p = cmd("embed-amalg-probe", "try to amalgamate pairs of embeddings", "structure")
    p.add_argument("--theory", required=True)
    p.add_argument("--sample", type=int, default=3, help="size bound for the sampled targets")
    p = cmd("examples", "list or show the bundled corpus")
    p.add_argument("--list", action="store_true")
    p.add_argument("--show", default=None)
    p = cmd("corpus-verify", "rerun the golden example table")
    p.add_argument("--golden", default=None, help="alternative golden JSON file")
    return top


# ------------------------------------------------------------------- helpers

def _budget(a, default=6):
    return SearchBudget(a.bound if a.bound is not None else default, a.atoms, a.depth, a.nodes, a.time_limit)


def _vars(text):
    return None if text is None else tuple(v.strip() for v in text.split(",") if v.strip())


def _tuple(text):
    return tuple(v.strip() for v in text.split(",") if v.strip())


class Report:
    def __init__(self, args, argv):
        self.args = args
        self.data = {"command": list(argv)}
        self.lines = []
        self.code = 0

    def verdict(self, v, key="verdict"):
        self.data[key] = v.to_dict()
        self.code = max(self.code, EXIT[v.outcome])


def _emit(report, started, out):
    if report.args.json:
        report.data["wall_time"] = round(time.monotonic() - started, 3)
        out.write(json.dumps(report.data, indent=2, sort_keys=True) + "\n")
    else:
        out.write("\n".join(report.lines) + "\n")


# ------------------------------------------------------------------ commands

def _parse(a, r):
    text, _ = corpus._source(a.file)
    if text is None:
        raise corpus.CorpusError(f"cannot read {a.file}")
    ws = parse_document(text)
    blocks = [to_text(s) for s in ws.signatures.values()]
    blocks += [to_text(t, False) for t in ws.theories.values()]
    blocks += [to_text(s, False) for s in ws.structures.values()]
    r.lines.append("\n\n".join(blocks))
    r.data["signatures"] = sorted(ws.signatures)
    r.data["theories"] = {n: theory_to_dict(t) for n, t in sorted(ws.theories.items())}
    r.data["structures"] = {n: structure_to_dict(s) for n, s in sorted(ws.structures.items())}


def _eval(a, r):
    A = corpus.structure(a.structure)
    sig = corpus.theory(a.theory).signature if a.theory else A.signature
    obj = parse(a.formula, "formula", sig)
    sigma = parse_map(a.at)
    if isinstance(obj, HInductiveSentence):
        bad = find_violation(A, obj)
        value = bad is None
        r.data.update({"sentence": format_sentence(obj), "value": value, "violation": bad})
        r.lines.append(f"{A.name} {'satisfies' if value else 'violates'} {format_sentence(obj)}")
        if bad:
            r.lines.append("  at " + ", ".join(f"{k}={v}" for k, v in sorted(bad.items())))
    else:
        value = eval_positive(A, obj, sigma)
        r.data.update({"formula": format_formula(obj), "at": sigma, "value": value})
        at = ", ".join(f"{k}={v}" for k, v in sorted(sigma.items()))
        r.lines.append(f"{format_formula(obj)}{' at ' + at if at else ''} is {str(value).lower()} in {A.name}")
    r.code = 0 if value else 1


def _models(a, r):
    T = corpus.theory(a.theory)
    b = _budget(a)
    ticker = b.ticker()
    listed = []
    for M in enumerate_models(T, b.max_model_size, ticker):
        if a.limit is not None and len(listed) >= a.limit:
            break
        listed.append(M)
    r.data["models"] = [structure_to_dict(M) for M in listed]
    r.data["count"] = len(listed)
    r.data["bound"] = b.to_dict()
    r.lines.extend(format_structure(M) for M in listed)
    r.lines.append(f"{len(listed)} model(s) of {T.name} up to size N={b.max_model_size}"
                   + (" (listing cut by --limit)" if a.limit is not None and len(listed) >= a.limit else ""))


def _entails(a, r):
    T = corpus.theory(a.theory)
    s = parse(a.sentence, "sentence", T.signature)
    v = entails_bounded(T, s, _budget(a))
    r.verdict(v)
    r.lines.append(f"{T.name} |- {format_sentence(s)}: {v.describe()}")
    if v.fails:
        r.lines.append(format_structure(v.witness.structure))
        r.lines.append("  violated at " + ", ".join(f"{k}={x}" for k, x in sorted(v.witness.assignment.items())))


def _ctr(a, r):
    T = corpus.theory(a.theory)
    phi = parse(a.formula, "positive", T.signature)
    b = _budget(a, 4)
    found = ctr_probe(T, phi, b, _vars(a.vars))
    if a.limit is not None:
        found = found[: a.limit]
    r.data["members"] = [{"psi": format_formula(p), "verdict": v.to_dict()} for p, v in found]
    r.data["bound"] = b.to_dict()
    r.lines.extend(f"{format_formula(p)}: {v.describe()}" for p, v in found)
    r.lines.append(f"{len(found)} member(s) found up to size N={b.max_model_size}")


def _continue(a, r):
    T = corpus.theory(a.theory)
    A, B = corpus.structure(a.left), corpus.structure(a.right)
    v = common_continuation(A, B, T, _budget(a))
    r.verdict(v)
    r.lines.append(f"common continuation of {A.name} and {B.name}: {v.describe()}")
    if v.found:
        r.lines.append(format_structure(v.witness.structure))
        for label, m in v.witness.morphisms:
            r.lines.append(f"  {label}: {m.literal()}")


def _morphisms(a, r):
    A, B = corpus.structure(a.source), corpus.structure(a.target)
    if a.action == "find":
        ms = list(find_morphisms(A, B, a.kind, limit=a.limit, ticker=_budget(a).ticker()))
        r.data["morphisms"] = [m.to_dict() for m in ms]
        r.lines.extend(m.literal() for m in ms)
        r.lines.append(f"{len(ms)} {a.kind}(s) {A.name} -> {B.name}")
        r.code = 0 if ms else 1
    elif a.action == "check":
        m = Morphism.from_names(A, B, parse_map(a.map))
        ok = check_kind(m, a.kind)
        r.data["morphism"] = m.to_dict(verified=ok) | {"kind": a.kind}
        r.data["value"] = ok
        article = "an" if a.kind[0] in "aeiou" else "a"
        r.lines.append(f"{m.literal()} is {'' if ok else 'not '}{article} {a.kind}")
        r.code = 0 if ok else 1
    else:
        raise InputError("morphisms needs 'find' or 'check'")


def _closure(a, r):
    T = corpus.theory(a.theory)
    A = corpus.structure(a.structure)
    check = is_pc_bounded if a.command == "pc" else is_pac_bounded
    rep = check(A, T, _budget(a))
    r.data["report"] = rep.to_dict()
    r.code = EXIT[rep.outcome]
    r.lines.append(rep.describe())


def _certify(a, r):
    T = corpus.theory(a.theory)
    A = corpus.structure(a.structure)
    psi = parse(a.formula, "positive", T.signature)
    b = _budget(a, 4)
    c = find_certificate(A, T, psi, _tuple(a.at), b, _vars(a.vars))
    if isinstance(c, PacCertificate):
        r.data["certificate"] = c.to_dict()
        r.lines.append(c.describe())
        r.code = 0
    else:
        r.verdict(c)
        r.lines.append(f"no certificate for {format_formula(psi)}: {c.describe()}")


def _verify_cert(a, r):
    T = corpus.theory(a.theory)
    A = corpus.structure(a.structure)
    with open(a.cert, encoding="utf-8") as fh:
        d = json.load(fh)
    d = d.get("certificate", d)
    sig = T.signature
    c = PacCertificate(parse(d["psi"], "positive", sig), tuple(d["x"]), tuple(d["a"]),
                       parse(d["theta1"], "positive", sig), parse(d["theta2"], "positive", sig),
                       tuple(d["y"]), tuple(d["b"]), None)
    result = verify_certificate(c, A, T, _budget(a, 4))
    r.data.update({"valid": result.ok, "reasons": result.reasons})
    r.lines.append("certificate accepted" if result.ok else "certificate rejected: " + "; ".join(result.reasons))
    if result.ok:
        r.lines.append(f"  entailment Holds (no counterexample up to size N={_budget(a, 4).max_model_size})")
    r.code = 0 if result.ok else 1


def _alc(a, r):
    T = corpus.theory(a.theory)
    psi = parse(a.formula, "positive", T.signature)
    b = _budget(a)
    pairs = alc_probe(T, psi, b, _vars(a.vars))
    r.data["pairs"] = [p.to_dict() for p in pairs]
    r.data["bound"] = b.to_dict()
    for p in pairs:
        src = ", ".join(f"{A.name}@({','.join(x)})" for A, x, _ in p.provenance)
        r.lines.append(f"({format_formula(p.theta1)} ; {format_formula(p.theta2)})  from {src}")
    r.lines.append(f"{len(pairs)} pair(s) from models up to size {max(1, b.max_model_size - 1)}, "
                   f"pac checked up to size N={b.max_model_size}")


def _build_th(a, r):
    T = corpus.theory(a.theory)
    b = _budget(a)
    var_lists = a.vars or [None] * len(a.formula)
    if len(var_lists) != len(a.formula):
        raise InputError("give --vars once per --formula or not at all")
    bindings = [alc_binding(T, parse(f, "positive", T.signature), b, _vars(v))
                for f, v in zip(a.formula, var_lists)]
    Th = build_th_axioms(T, bindings)
    r.data["theory"] = theory_to_dict(Th)
    r.data["bindings"] = [{"psi": format_formula(x.psi), "theta1": format_formula(x.theta1),
                           "theta2": format_formula(x.theta2), "flags": list(x.flags),
                           "entailment": x.entailment.to_dict()} for x in bindings]
    r.lines.append(to_text(Th, False))
    for x in bindings:
        r.lines.append(f"# {format_formula(x.psi)}: {x.entailment.describe()}")


def _saturate(a, r):
    T = corpus.theory(a.theory)
    A = corpus.structure(a.structure)
    res = pac_saturate(A, T, _budget(a), a.steps)
    r.data["saturation"] = res.to_dict()
    r.code = EXIT[res.report.outcome]
    r.lines.append(res.describe())


def _e_elem(a, r):
    A, B = corpus.structure(a.A), corpus.structure(a.B)
    m = Morphism.from_names(A, B, parse_map(a.map), "embedding")
    rep = is_e_elementary_bounded(A, B, m, _budget(a))
    r.data["report"] = rep.to_dict()
    r.code = EXIT[rep.outcome]
    r.lines.append(rep.describe())


def _amalgamate(a, r):
    T = corpus.theory(a.theory)
    A, B, C = corpus.structure(a.base), corpus.structure(a.top), corpus.structure(a.left)
    req = AmalgamRequest(A, B, Morphism.from_names(A, B, parse_map(a.map_e)), C,
                         Morphism.from_names(A, C, parse_map(a.map_i)), T, _budget(a))
    v, res = amalgamate_ei(req)
    r.verdict(v)
    r.lines.append(f"amalgamation of {B.name} and {C.name} over {A.name}: {v.describe()}")
    if res is not None:
        r.data["result"] = res.to_dict()
        r.lines.append(format_structure(res.D))
        r.lines.append(f"  e': {res.e_prime.literal()}  embedding={res.e_prime_is_embedding}")
        r.lines.append(f"  i': {res.i_prime.literal()}  immersion={res.i_prime_is_immersion}")
        r.lines.append(f"  commutes={res.commutes}")


def _probe(a, r):
    T = corpus.theory(a.theory)
    A = corpus.structure(a.structure)
    rep = embedding_amalgamation_probe(A, T, a.sample, _budget(a))
    r.data["probe"] = rep.to_dict()
    r.code = 2 if rep.unknown else (0 if rep.complete else 1)
    r.lines.append(rep.describe())


def _examples(a, r):
    if a.show:
        text = corpus.bundled_text(a.show)
        if text is None:
            raise corpus.CorpusError(f"no corpus entry {a.show!r}")
        r.lines.append(text.rstrip())
        r.data["text"] = text
        return
    rows = corpus.entries()
    r.data["entries"] = [{"file": stem, "kind": kind, "name": name, "about": about}
                         for stem, kind, name, about in rows]
    for stem, kind, name, about in rows:
        r.lines.append(f"{stem:<20} {kind:<10} {name:<10} {about}")


def _corpus_verify(a, r):
    golden = None
    if a.golden:
        with open(a.golden, encoding="utf-8") as fh:
            golden = json.load(fh)
    rows = corpus_verify(golden, a.bound)
    r.data["rows"] = [x.to_dict() for x in rows]
    r.data["bound_override"] = a.bound
    r.lines.append(format_table(rows))
    r.code = 0 if all(x.status == "pass" for x in rows) else 1


COMMANDS = {
    "parse": _parse, "eval": _eval, "models": _models, "entails": _entails, "ctr": _ctr,
    "continue": _continue, "morphisms": _morphisms, "pc": _closure, "pac": _closure,
    "certify": _certify, "verify-cert": _verify_cert, "alc": _alc, "build-th": _build_th,
    "saturate": _saturate, "e-elem": _e_elem, "amalgamate": _amalgamate,
    "embed-amalg-probe": _probe, "examples": _examples, "corpus-verify": _corpus_verify,
}


def run(argv=None, out=None, err=None) -> int:
    """Run one command; returns the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    err = err or sys.stderr
    started = time.monotonic()
    try:
        args = build_parser().parse_args(argv)
        if not args.command:
            raise InputError("missing command; try poslog --help")
        report = Report(args, argv)
        COMMANDS[args.command](args, report)
    except InputError as exc:
        err.write(f"poslog: {exc}\n")
        return 3
    except (PoslogError, OSError, ValueError, KeyError) as exc:
        err.write(f"poslog: {type(exc).__name__}: {exc}\n")
        return 3
    _emit(report, started, out)
    return report.code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
