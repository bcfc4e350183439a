"""Re-run the golden example table and compare outcomes.

Each golden row names an operation, its arguments and a bound, and records
the outcome obtained when the row was first checked against an independent
oracle.  :func:`corpus_verify` reruns every row, optionally with a different
bound, and reports a pass/fail table.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import corpus
from .closedness import PacCertificate, find_certificate, is_e_elementary_bounded, is_pac_bounded, \
    is_pc_bounded, pac_saturate
from .amalgamation import AmalgamRequest, amalgamate_ei
from .enumeration import count_models
from .morphisms import Morphism
from .parser import parse, parse_map
from .structures import FinStructure
from .syntax import Signature
from .theories import SearchBudget, common_continuation, entails_bounded


def cycle_structure(lengths, signature=None, name=None) -> FinStructure:
    """Disjoint cycles of the given lengths, elements ``p0, p1, ...``."""
    sig = signature or Signature("U", (("f", 1),))
    table, start = [], 0
    for k in lengths:
        table.extend(start + (i + 1) % k for i in range(k))
        start += k
    label = name or "cyc_" + "_".join(map(str, lengths))
    return FinStructure.from_tables(sig, [f"p{i}" for i in range(start)], {"f": table}, name=label)


def _structure(args, key, theory):
    ref = args[key]
    if isinstance(ref, list):
        return cycle_structure(ref, theory.signature)
    return corpus.structure(ref)


def _budget(row, bound):
    return SearchBudget(bound, row.get("atoms", 3), row.get("depth", 1))


def _run(row, bound):
    op, args = row["op"], row.get("args", {})
    T = corpus.theory(args["theory"]) if "theory" in args else None
    b = _budget(row, bound) if bound is not None else None
    if op == "models":
        return str(sum(count_models(T, bound)))
    if op in ("pc", "pac"):
        check = is_pc_bounded if op == "pc" else is_pac_bounded
        return check(_structure(args, "structure", T), T, b).outcome.value
    if op == "entails":
        return entails_bounded(T, parse(args["sentence"], "sentence", T.signature), b).outcome.value
    if op == "certify":
        A = _structure(args, "structure", T)
        psi = parse(args["formula"], "positive", T.signature)
        c = find_certificate(A, T, psi, tuple(args["at"]), b, tuple(args["vars"]))
        return "Found" if isinstance(c, PacCertificate) else c.outcome.value
    if op == "continue":
        return common_continuation(_structure(args, "left", T), _structure(args, "right", T), T, b).outcome.value
    if op == "saturate":
        return pac_saturate(_structure(args, "structure", T), T, b).report.outcome.value
    if op == "e_elem":
        A, B = corpus.structure(args["A"]), corpus.structure(args["B"])
        m = Morphism.from_names(A, B, parse_map(args["map"]), "embedding")
        return is_e_elementary_bounded(A, B, m, b).outcome.value
    if op == "amalgamate":
        A, B, C = (corpus.structure(args[k]) for k in ("base", "top", "left"))
        req = AmalgamRequest(A, B, Morphism.from_names(A, B, parse_map(args["map_e"]), "embedding"),
                             C, Morphism.from_names(A, C, parse_map(args["map_i"]), "immersion"), T, b)
        return amalgamate_ei(req)[0].outcome.value
    raise ValueError(f"unknown golden operation {op!r}")


@dataclass
class Row:
    id: str
    expected: str
    got: str
    bound: int | None
    golden_bound: int | None

    @property
    def bound_changed(self):
        return self.bound != self.golden_bound

    @property
    def status(self):
        if self.got == self.expected:
            return "pass"
        return "FLIPPED" if self.bound_changed else "FAIL"

    def to_dict(self):
        return {"id": self.id, "expected": self.expected, "got": self.got, "bound": self.bound,
                "golden_bound": self.golden_bound, "status": self.status}


def corpus_verify(golden=None, bound=None) -> list:
    """Rows of ``Row``; ``bound`` overrides every row's bound."""
    table = golden if golden is not None else corpus.golden()
    rows = []
    for row in table["rows"]:
        gb = row.get("bound")
        use = bound if (bound is not None and gb is not None) else gb
        rows.append(Row(row["id"], str(row["expected"]), _run(row, use), use, gb))
    return rows


def format_table(rows) -> str:
    width = max(len(r.id) for r in rows)
    lines = [f"{'row':<{width}}  {'expected':<21} {'got':<21} {'bound':<10} status"]
    for r in rows:
        b = "-" if r.bound is None else f"N={r.bound}"
        if r.bound_changed:
            b = f"N={r.golden_bound}->{r.bound}"
        lines.append(f"{r.id:<{width}}  {r.expected:<21} {r.got:<21} {b:<10} {r.status}")
    bad = [r for r in rows if r.status != "pass"]
    lines.append(f"{len(rows) - len(bad)}/{len(rows)} rows match"
                 + (f"; mismatched: {', '.join(r.id for r in bad)}" if bad else ""))
    return "\n".join(lines)
