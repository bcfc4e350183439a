"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""
import itertools
import random
import time

import pytest

from conftest import ACCEPTANCE_LINES, FR, U, cycles
from oracles import amalgam_brute_force, immersion_by_diagram
from poslog.amalgamation import AmalgamRequest, amalgamate_ei
from poslog.cli import run
from poslog.closedness import (
    PacCertificate, alc_binding, alc_disjunction_combine, alc_probe, build_th_axioms, cycle_sentence,
    find_certificate, is_e_elementary_bounded, is_pac_bounded, is_pc_bounded, star_witness,
    verify_certificate,
)
from poslog.enumeration import enumerate_models, structures_of_size
from poslog.morphisms import Morphism, check_kind, find_morphisms, identity
from poslog.parser import parse, to_text
from poslog.structures import eval_positive, is_model
from poslog.syntax import enumerate_qf_positive, exists, free_vars
from poslog.theories import Outcome, SearchBudget


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail, started):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}  ({time.monotonic() - started:.1f}s)"
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return emit


def has_fixed_point(S):
    return any(S.apply("f", (i,)) == i for i in range(len(S)))


def test_criterion_01_pac_models_of_injective_theory(t_inj, report):
    t0 = time.monotonic()
    models = list(enumerate_models(t_inj, 4))
    budget = SearchBudget(max_model_size=6, max_term_depth=3)
    wrong = [S.name for S in models if is_pac_bounded(S, t_inj, budget).holds != has_fixed_point(S)]
    # cycle types are partitions: 1, 2, 3, 5 classes of sizes 1..4
    counts = [sum(1 for S in models if len(S) == n) for n in range(1, 5)]
    ok = not wrong and counts == [1, 2, 3, 5]
    report(1, ok, f"{len(models)} models of T_inj up to size 4 {counts}; pac at N=6 iff fixed point; "
                  f"mismatches {wrong}", t0)


def test_criterion_02_pc_models_of_injective_theory(t_inj, report):
    t0 = time.monotonic()
    models = list(enumerate_models(t_inj, 4))
    pc = [S for S in models if is_pc_bounded(S, t_inj, SearchBudget(6)).holds]
    ok = len(pc) == 1 and len(pc[0]) == 1
    report(2, ok, f"pc at N=6 holds for {[S.name for S in pc]} (expected only the one-point model)", t0)


def _verified_witness(A, r, kind):
    """The returned map is of the right kind, has no retraction, and gains its formula."""
    if not r.fails:
        return False
    m = r.counterexample
    phi, sigma = r.gained
    image = {v: m(a) for v, a in sigma.items()}
    return (check_kind(m, kind) and not check_kind(m, "immersion")
            and eval_positive(m.codomain, phi, image) and not eval_positive(A, phi, sigma))


def _cycle_witness(A, T, kind, n):
    """A map of ``kind`` from A into a model of size <= n gaining some cycle sentence."""
    for B in enumerate_models(T, n):
        gained = [k for k in range(1, len(B) + 1)
                  if eval_positive(B, cycle_sentence("f", k)) and not eval_positive(A, cycle_sentence("f", k))]
        if gained:
            for m in find_morphisms(A, B, kind, limit=1):
                assert not check_kind(m, "immersion")
                return m, gained[0]
    return None


def test_criterion_03_nofix_models_not_closed(t_nofix, report):
    t0 = time.monotonic()
    budget = SearchBudget(9)
    models = list(enumerate_models(t_nofix, 5))
    bad = []
    for A in models:
        for check, kind in ((is_pc_bounded, "hom"), (is_pac_bounded, "embedding")):
            r = check(A, t_nofix, budget)
            if not _verified_witness(A, r, kind) or _cycle_witness(A, t_nofix, kind, 9) is None:
                cyc = sorted(len(c) for c in _cycles(A))
                bad.append(f"{r.mode}({A.name}, cycles {cyc}) = {r.outcome.value}")
    report(3, not bad, f"{len(models)} models of T_nofix up to size 5, pc and pac at N=9; "
                       f"without a Fails verdict and a cycle-sentence witness: {bad}", t0)


def _cycles(S):
    seen, out = set(), []
    for i in range(len(S)):
        x = i
        path = []
        while x not in path:
            path.append(x)
            x = S.apply("f", (x,))
        cyc = frozenset(path[path.index(x):])
        if cyc not in seen:
            seen.add(cyc)
            out.append(cyc)
    return out


def test_criterion_04_immersion_matches_diagram_oracle(report):
    t0 = time.monotonic()
    structures = [S for n in (1, 2, 3) for S in structures_of_size(FR, n)]
    homs = disagreements = 0
    for A, B in itertools.product(structures, repeat=2):
        for m in find_morphisms(A, B, "hom"):
            homs += 1
            if check_kind(m, "immersion") != immersion_by_diagram(m):
                disagreements += 1
    report(4, disagreements == 0 and homs > 0,
           f"{len(structures)} structures over f/1, R/2 up to size 3; {homs} homomorphisms; "
           f"{disagreements} disagreements", t0)


def _sampled_formulas():
    """psi(x): existential closure over y of conjunctions/disjunctions of depth <= 2 atoms.

    Every formula with one or two atoms, plus a fixed-seed sample of three-atom ones.
    """
    out = []
    rng = random.Random(20240611)
    for shape in ("conjunction", "disjunction"):
        threes = []
        for phi in enumerate_qf_positive(U, ("x", "y"), shape, 3, 2):
            parts = getattr(phi, "parts", (phi,))
            (out if len(parts) <= 2 else threes).append(phi)
        out.extend(rng.sample(threes, 60))
    return [exists(sorted(free_vars(phi) - {"x"}), phi) for phi in out]


def test_criterion_05_certificates_match_pac_verdicts(ws, t_inj, report):
    t0 = time.monotonic()
    A = ws.structures["fix_C2"]
    budget = SearchBudget(6)
    assert is_pac_bounded(A, t_inj, budget).holds
    tried, missing, rejected = 0, [], []
    for psi in _sampled_formulas():
        for a in A.universe:
            if eval_positive(A, psi, {"x": a}):
                continue
            tried += 1
            c = find_certificate(A, t_inj, psi, (a,), budget, ("x",))
            if not isinstance(c, PacCertificate):
                missing.append((psi, a))
            elif not verify_certificate(c, A, t_inj, budget):
                rejected.append((psi, a))
    C2 = ws.structures["C2"]
    psi = parse("exists y. f(y) = y", "positive", U)
    found_on_c2 = []
    for n in range(3, 9):
        c = find_certificate(C2, t_inj, psi, (), SearchBudget(n))
        if isinstance(c, PacCertificate) or c.outcome != Outcome.NOT_FOUND:
            found_on_c2.append(n)
    ok = tried > 0 and not missing and not rejected and not found_on_c2
    report(5, ok, f"{tried} (psi, a) pairs false in fixed point + 2-cycle: {len(missing)} without certificate, "
                  f"{len(rejected)} rejected; 2-cycle with exists y. f(y) = y certified at N in {found_on_c2}", t0)


ALC_FORMULAS = ["f(x) = x", "f(f(x)) = x", "exists y. f(y) = y", "exists y. f(y) = x and f(x) = y",
                "f(x) = x or f(f(f(x))) = x"]


def test_criterion_06_combined_alc_pairs_keep_the_star_property(t_inj, report):
    t0 = time.monotonic()
    budget = SearchBudget(6)
    checked, failures, harvested = 0, [], 0
    for text in ALC_FORMULAS:
        psi = parse(text, "positive", U)
        xs = tuple(sorted(free_vars(psi)))
        pairs = alc_probe(t_inj, psi, budget)
        harvested += len(pairs)
        for p, q in itertools.product(pairs, repeat=2):
            r = alc_disjunction_combine(p, q, xs)
            for S, a, _ in r.provenance:
                checked += 1
                if star_witness(t_inj, psi, xs, r, S, a, budget) is None:
                    failures.append((text, S.name, a))
    ok = checked > 0 and not failures
    report(6, ok, f"{harvested} harvested pairs over {len(ALC_FORMULAS)} formulas; {checked} combined (source, a) "
                  f"re-checks; {len(failures)} failures", t0)


def test_criterion_07_th_classifies_like_pac(t_inj, report):
    t0 = time.monotonic()
    budget = SearchBudget(6)
    binding = alc_binding(t_inj, parse("exists y. f(y) = y", "positive", U), budget)
    Th = build_th_axioms(t_inj, [binding])
    structures = [S for n in range(1, 5) for S in structures_of_size(U, n)]
    disagree = []
    for S in structures:
        pac = is_model(S, t_inj) and is_pac_bounded(S, t_inj, budget).holds
        if is_model(S, Th) != pac:
            disagree.append(S.name)
    report(7, not disagree, f"T_h from {len(Th.axioms) - len(t_inj.axioms)} binding(s) on {len(structures)} "
                            f"structures up to size 4; disagreements with pac at N=6: {disagree}", t0)


def _inclusion(A, C):
    return Morphism(A, C, tuple(range(len(A))), "embedding")


CHAINS = [[(1,), (1, 2), (1, 2, 2)], [(2,), (2, 2), (2, 2, 2)], [(1,), (1, 1), (1, 1, 2)],
          [(2,), (2, 1), (2, 1, 3)], [(1,), (1, 3), (1, 3, 2)], [(3,), (3, 3), (3, 3)]]


def test_criterion_08_e_elementary_properties(ws, report):
    t0 = time.monotonic()
    budget = SearchBudget(6)
    fixtures = [S for n in (1, 2, 3) for S in structures_of_size(U, n)]
    fixtures += [S for S in ws.structures.values() if len(S) <= 3]
    not_reflexive = [S.name for S in fixtures if not is_e_elementary_bounded(S, S, identity(S), budget).holds]
    failures, used = [], 0
    for chain in CHAINS:
        A, B, C = (cycles(*c) for c in chain)
        ab = is_e_elementary_bounded(A, B, _inclusion(A, B), budget).holds
        bc = is_e_elementary_bounded(B, C, _inclusion(B, C), budget).holds
        ac = is_e_elementary_bounded(A, C, _inclusion(A, C), budget).holds
        used += (ab and bc) + (ac and bc)
        if ab and bc and not ac:
            failures.append(("transitivity", chain))
        if ac and bc and not ab:
            failures.append(("descent", chain))
    ok = not not_reflexive and not failures and used > 0
    report(8, ok, f"reflexivity on {len(fixtures)} fixtures, failures {not_reflexive}; {len(CHAINS)} chains, "
                  f"{used} premises met, violations {failures}", t0)


def _curated_requests(T):
    models = list(enumerate_models(T, 2))
    for A, B, C in itertools.product(models, repeat=3):
        for e in find_morphisms(A, B, "embedding"):
            for i in find_morphisms(A, C, "immersion"):
                yield AmalgamRequest(A, B, e, C, i, T, SearchBudget(6))


def test_criterion_09_amalgamation_fixtures(t_inj, report):
    t0 = time.monotonic()
    requests = list(_curated_requests(t_inj))
    bad = []
    for r in requests:
        verdict, result = amalgamate_ei(r)
        oracle = amalgam_brute_force(r, 6)
        if not (verdict.found and result.ok and oracle is not None):
            bad.append((r.A.name, r.B.name, r.C.name))
    ok = bool(requests) and not bad
    report(9, ok, f"{len(requests)} requests over T_inj with sizes <= 2 at N=6: Found with all flags and "
                  f"oracle agreement except {bad}", t0)


JSON_COMMANDS = [
    ["pc", "cycle3", "--theory", "t_nofix", "--bound", "7"],
    ["pac", "inj_fix2cycle", "--theory", "t_inj"],
    ["models", "--theory", "t_inj", "--bound", "4"],
    ["certify", "inj_fix2cycle", "--theory", "t_inj", "--formula", "f(x) = x", "--at", "a", "--bound", "4"],
    ["alc", "--theory", "t_inj", "--formula", "f(x) = x", "--bound", "5"],
    ["saturate", "cycle3", "--theory", "t_nofix", "--bound", "8"],
    ["e-elem", "two_cycle", "two_two_cycles", "--map", "a=a,b=b"],
    ["embed-amalg-probe", "two_cycle", "--theory", "t_inj"],
    ["corpus-verify"],
]


def _json_without_time(argv):
    import io
    out = io.StringIO()
    run(argv + ["--json"], out, io.StringIO())
    return "\n".join(l for l in out.getvalue().splitlines() if '"wall_time"' not in l)


def test_criterion_10_determinism_and_round_trip(ws, report):
    t0 = time.monotonic()
    differing = [" ".join(a) for a in JSON_COMMANDS if _json_without_time(a) != _json_without_time(a)]
    objects = ([(o, "signature") for o in ws.signatures.values()]
               + [(o, "theory") for o in ws.theories.values()]
               + [(o, "structure") for o in ws.structures.values()])
    broken = [o.name for o, kind in objects if parse(to_text(o), kind) != o]
    ok = not differing and not broken
    report(10, ok, f"{len(JSON_COMMANDS)} commands run twice, JSON differs for {differing}; "
                   f"{len(objects)} corpus objects, round-trip failures {broken}", t0)
