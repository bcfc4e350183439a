"""Fixed-point-free unary functions: no finite model is closed.

A finite model only has cycles of finitely many lengths, so some larger model
adds a cycle whose length it lacks, and the inclusion gains the sentence
"exists y. f^k(y) = y".  How large that model must be depends on the cycles
already present, which this script makes visible.
"""
from poslog import corpus
from poslog.closedness import is_pac_bounded, pac_saturate
from poslog.enumeration import count_models
from poslog.theories import SearchBudget
from poslog.verify import cycle_structure

T = corpus.theory("t_nofix")
print("models of", T.name, "by size:", count_models(T, 8))

for lengths in [(3,), (2, 2), (4,), (2, 3)]:
    S = cycle_structure(lengths, T.signature)
    for n in (len(S) + 2, 9, 10):
        r = is_pac_bounded(S, T, SearchBudget(n))
        gained = f", gains {r.gained[0]}" if r.fails else ""
        print(f"cycles {lengths}: pac at N={n:<2} {r.outcome.value}{gained}")
    print()

print("The 2-cycle next to a 3-cycle is the awkward one: both 2- and 3-cycles map")
print("into it, so a target needs a fresh cycle of length at least 5 on top of its")
print("own five elements before the inclusion stops being an immersion.\n")

res = pac_saturate(cycle_structure((3,), T.signature), T, SearchBudget(9))
print(res.describe())
