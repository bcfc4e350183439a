"""Immersions, e-elementary extensions and amalgamation squares.

An injective map m: A -> B is an immersion exactly when some homomorphism
j: B -> A undoes it.  That single search replaces "preserves and reflects
every positive formula" and drives everything below.
"""
from poslog import corpus
from poslog.amalgamation import AmalgamRequest, amalgamate_ei, embedding_amalgamation_probe
from poslog.closedness import is_e_elementary_bounded
from poslog.morphisms import Morphism, check_kind, find_retraction
from poslog.theories import SearchBudget

C2 = corpus.structure("two_cycle")
C2C2 = corpus.structure("two_two_cycles")
fixC2 = corpus.structure("inj_fix2cycle")
T = corpus.theory("t_inj")
budget = SearchBudget(6)

into_pair = Morphism.from_names(C2, C2C2, {"a": "a", "b": "b"}, "embedding")
into_fix = Morphism.from_names(C2, fixC2, {"a": "a", "b": "b"}, "embedding")
for m in (into_pair, into_fix):
    j = find_retraction(m)
    print(f"{C2.name} -> {m.codomain.name}: immersion={check_kind(m, 'immersion')}",
          f"retraction {j.literal()}" if j else "no retraction")

print()
print(is_e_elementary_bounded(C2, C2C2, into_pair, budget).describe())
print(is_e_elementary_bounded(C2, fixC2, into_fix, budget).describe())

print()
req = AmalgamRequest(C2, C2C2, into_pair, C2C2,
                     Morphism.from_names(C2, C2C2, {"a": "c", "b": "d"}, "immersion"), T, budget)
verdict, result = amalgamate_ei(req)
print("amalgamation square:", verdict.describe())
print("  D =", result.D.name, "e' =", result.e_prime.literal(), "i' =", result.i_prime.literal(),
      "flags", result.to_dict()["flags"])

print()
for name in ("a_e", "two_cycle"):
    print(embedding_amalgamation_probe(corpus.structure(name), T, 3, budget).describe())
