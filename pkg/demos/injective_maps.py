"""Which finite injective unary algebras are closed?

Every model of "f is injective" is a disjoint union of cycles.  This script
lists them up to size 4 and runs the bounded pc and pac checks on each.
"""
from poslog import corpus
from poslog.closedness import is_pac_bounded, is_pc_bounded
from poslog.enumeration import enumerate_models
from poslog.structures import format_structure
from poslog.theories import SearchBudget

T = corpus.theory("t_inj")
budget = SearchBudget(max_model_size=6)


def cycle_type(S):
    seen, lengths = set(), []
    for i in range(len(S)):
        if i in seen:
            continue
        k, x = 0, i
        while x not in seen:
            seen.add(x)
            x = S.apply("f", (x,))
            k += 1
        lengths.append(k)
    return tuple(sorted(lengths))


print(f"models of {T.name} up to size 4, checked against every model up to size {budget.max_model_size}\n")
print(f"{'model':<8} {'cycles':<14} {'pc':<6} pac")
for S in enumerate_models(T, 4):
    pc = is_pc_bounded(S, T, budget)
    pac = is_pac_bounded(S, T, budget)
    print(f"{S.name:<8} {str(cycle_type(S)):<14} {pc.outcome.value:<6} {pac.outcome.value}")

print("\nOnly the single fixed point survives every homomorphism.  Embeddings are")
print("kinder: any model with a fixed point already has everything an extension")
print("could add.  Here is why the 2-cycle is not pac:\n")
C2 = corpus.structure("two_cycle")
print(format_structure(C2))
print(is_pac_bounded(C2, T, budget).describe())
