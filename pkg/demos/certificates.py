"""Certificates that a formula fails in a pac model, and the theory they axiomatise.

When A is pac and psi(a) is false in A, some facts about a and a few more
elements b force psi to stay false in every model: T proves
(psi and theta1) -> theta2 while theta1 holds and theta2 fails at (a, b).
"""
from poslog import corpus
from poslog.closedness import (
    alc_binding, alc_probe, build_th_axioms, find_certificate, is_pac_bounded, verify_certificate,
)
from poslog.enumeration import structures_of_size
from poslog.parser import parse
from poslog.structures import is_model
from poslog.syntax import format_theory
from poslog.theories import SearchBudget

T = corpus.theory("t_inj")
A = corpus.structure("inj_fix2cycle")
budget = SearchBudget(max_model_size=5)

for text, at in [("f(x) = x", ("a",)), ("exists y. f(y) = x and f(x) = y and f(y) = y", ("a",))]:
    psi = parse(text, "positive", T.signature)
    c = find_certificate(A, T, psi, at, budget)
    print(c.describe())
    print("  re-check:", "ok" if verify_certificate(c, A, T, budget) else "rejected", "\n")

C2 = corpus.structure("two_cycle")
psi = parse("exists y. f(y) = y", "positive", T.signature)
print("2-cycle, exists y. f(y) = y:", find_certificate(C2, T, psi, (), budget).describe(), "\n")

print("pairs harvested for f(x) = x from bounded-pac models:")
for pair in alc_probe(T, parse("f(x) = x", "positive", T.signature), budget):
    print("  ", pair.to_dict()["theta1"], "|", pair.to_dict()["theta2"], "from",
          ", ".join(S.name for S, _, _ in pair.provenance))

binding = alc_binding(T, psi, SearchBudget(6))
Th = build_th_axioms(T, [binding])
print("\n" + format_theory(Th))
sizes = {n: sum(is_model(S, Th) for S in structures_of_size(T.signature, n)) for n in range(1, 5)}
print("models of the extended theory by size:", sizes)
agree = all(is_model(S, Th) == (is_model(S, T) and is_pac_bounded(S, T, SearchBudget(6)).holds)
            for n in range(1, 5) for S in structures_of_size(T.signature, n))
print("same as the bounded pac models:", agree)
