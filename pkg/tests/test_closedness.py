import itertools

import pytest

from conftest import U, cycles
from poslog.amalgamation import embedding_amalgamation_probe
from poslog.closedness import (
    AlcPair, PacCertificate, PreconditionError, alc_binding, alc_disjunction_combine, alc_probe,
    build_th_axioms, cycle_sentence, find_certificate, gained_formula, is_e_elementary_bounded,
    is_pac_bounded, is_pc_bounded, pac_saturate, star_witness, verify_certificate,
)
from poslog.enumeration import enumerate_models, structures_of_size
from poslog.errors import MorphismError, NotAModelError
from poslog.morphisms import Morphism, check_kind, identity
from poslog.parser import parse
from poslog.structures import eval_positive, is_model
from poslog.syntax import TRUE, atoms_over, conj, disj, fresh_names, terms_up_to_depth
from poslog.theories import BoundedVerdict, Outcome, SearchBudget


def B(n, **kw):
    return SearchBudget(max_model_size=n, **kw)


def P(text):
    return parse(text, "positive", U)


def inclusion(A, C, kind="embedding"):
    """The map sending the i-th element of A to the i-th element of C."""
    return Morphism(A, C, tuple(range(len(A))), kind)


def has_fixed_point(S):
    return any(S.apply("f", (i,)) == i for i in range(len(S)))


# ------------------------------------------------------------------ pc / pac

def test_pc_examples(ws, t_inj, t_nofix):
    assert is_pc_bounded(ws.structures["A_e"], t_inj, B(6)).holds
    r = is_pc_bounded(ws.structures["C2"], t_inj, B(6))
    assert r.fails and len(r.counterexample.codomain) == 1
    assert not check_kind(r.counterexample, "embedding")
    r = is_pc_bounded(cycles(3), t_nofix, B(8))
    assert r.fails
    m = r.counterexample
    assert check_kind(m, "hom") and not check_kind(m, "immersion")
    phi, sigma = r.gained
    assert eval_positive(m.codomain, phi) and not eval_positive(cycles(3), phi)
    assert phi in {cycle_sentence("f", k) for k in range(1, 9)}


def test_pac_examples(ws, t_inj):
    assert is_pac_bounded(ws.structures["fix_C2"], t_inj, B(6)).holds
    r = is_pac_bounded(ws.structures["C2"], t_inj, B(6))
    assert r.fails
    assert check_kind(r.counterexample, "embedding") and not check_kind(r.counterexample, "immersion")
    assert r.gained[0] == cycle_sentence("f", 1)
    assert is_pac_bounded(ws.structures["A_e"], t_inj, B(6)).holds


def test_reports_say_the_bound(ws, t_inj):
    r = is_pac_bounded(ws.structures["fix_C2"], t_inj, B(6))
    assert "up to size N=6" in r.describe()
    assert r.to_dict()["bound"]["N"] == 6


def test_size_n_subject_is_flagged(t_inj):
    r = is_pac_bounded(cycles(2, 2), t_inj, B(4))
    assert r.holds and "no_larger_target_in_bound" in r.verdict.flags


def test_checks_require_a_model(ws, t_nofix):
    with pytest.raises(NotAModelError):
        is_pc_bounded(ws.structures["A_e"], t_nofix, B(3))


@pytest.mark.parametrize("name", ["t_inj", "t_nofix", "t_prime", "t_any"])
def test_pc_implies_pac(name, request):
    T = request.getfixturevalue(name)
    for A in enumerate_models(T, 3):
        for n in (3, 5):
            if is_pc_bounded(A, T, B(n)).holds:
                assert is_pac_bounded(A, T, B(n)).holds


def test_failures_carry_gained_formulas(t_inj, t_nofix, t_any):
    for T in (t_inj, t_nofix, t_any):
        for A in enumerate_models(T, 3):
            for check in (is_pc_bounded, is_pac_bounded):
                r = check(A, T, B(5))
                if r.fails:
                    phi, sigma = r.gained
                    m = r.counterexample
                    image = {v: m(a) for v, a in sigma.items()}
                    assert not eval_positive(A, phi, sigma)
                    assert eval_positive(m.codomain, phi, image)


# -------------------------------------------------------------- certificates

def test_certificate_for_fixed_point_atom(ws, t_inj):
    A = ws.structures["fix_C2"]
    c = find_certificate(A, t_inj, P("f(x) = x"), ("a",), B(4))
    assert isinstance(c, PacCertificate)
    assert c.theta1 == TRUE and c.theta2 == P("f(x) = x") and c.b_tuple == ()
    assert verify_certificate(c, A, t_inj, B(4))


def test_hand_written_certificate_verifies(ws, t_inj):
    A = ws.structures["fix_C2"]
    c = PacCertificate(P("f(x) = x"), ("x",), ("a",), P("f(x) = y and f(y) = x"), P("x = y"),
                       ("y",), ("b",), BoundedVerdict(Outcome.HOLDS, B(4)))
    assert verify_certificate(c, A, t_inj, B(4)).ok


def _cert(theta1, theta2):
    return PacCertificate(P("f(x) = x"), ("x",), ("a",), P(theta1), P(theta2), ("y",), ("b",),
                          BoundedVerdict(Outcome.HOLDS, B(4)))


def test_tampered_certificates_are_rejected(ws, t_inj):
    A = ws.structures["fix_C2"]
    v = verify_certificate(_cert("f(x) = y and f(y) = x", "f(x) = y"), A, t_inj, B(4))
    assert v.reasons == ["theta2 holds at (a, b)"]
    v = verify_certificate(_cert("f(x) = x", "x = y"), A, t_inj, B(4))
    assert "theta1 fails at (a, b)" in v.reasons
    v = verify_certificate(_cert("x = x", "x = y"), A, t_inj, B(4))
    assert v.reasons == ["entailment Fails up to size N=4"]


def test_theta2_equal_to_psi_is_still_valid(ws, t_inj):
    # (psi and theta1) -> psi is valid, and f(a) = a is false in A
    assert verify_certificate(_cert("f(x) = y and f(y) = x", "f(x) = x"), ws.structures["fix_C2"], t_inj, B(4))


def test_degenerate_certificate_is_legal(ws, t_inj):
    A = ws.structures["C2"]
    psi = P("f(x) = x")
    c = PacCertificate(psi, ("x",), ("a",), TRUE, psi, (), (), BoundedVerdict(Outcome.HOLDS, B(4)))
    assert verify_certificate(c, A, t_inj, B(4)).ok


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_no_certificate_for_fixed_point_sentence_on_two_cycle(ws, t_inj, n):
    c = find_certificate(ws.structures["C2"], t_inj, P("exists y. f(y) = y"), (), B(n))
    assert isinstance(c, BoundedVerdict) and c.outcome == Outcome.NOT_FOUND


def test_certificate_precondition(ws, t_inj):
    with pytest.raises(PreconditionError):
        find_certificate(ws.structures["A_e"], t_inj, P("f(x) = x"), ("x",), B(4))
    with pytest.raises(PreconditionError):
        find_certificate(ws.structures["C2"], t_inj, P("f(x) = x"), (), B(4))


def sampled_formulas(variables=("x",), atoms=2):
    """Existential closures over one extra variable of small atom conjunctions/disjunctions."""
    from poslog.syntax import enumerate_qf_positive, exists, free_vars
    out = []
    for shape in ("conjunction", "disjunction"):
        for phi in enumerate_qf_positive(U, tuple(variables) + ("y",), shape, atoms, 1):
            extra = sorted(free_vars(phi) - set(variables))
            out.append(exists(extra, phi))
    return out


def test_pac_models_have_certificates(t_inj):
    budget = B(5)
    for A in enumerate_models(t_inj, 3):
        if not is_pac_bounded(A, t_inj, budget).holds:
            continue
        for psi in sampled_formulas():
            for a in A.universe:
                if eval_positive(A, psi, {"x": a}):
                    continue
                c = find_certificate(A, t_inj, psi, (a,), budget, ("x",))
                assert isinstance(c, PacCertificate), (A.name, psi, a)
                assert verify_certificate(c, A, t_inj, budget)


def test_failing_pac_rejects_every_candidate(ws, t_inj):
    A = ws.structures["C2"]
    r = is_pac_bounded(A, t_inj, B(3))
    psi, _ = r.gained
    for k in (0, 1, 2):
        ys = fresh_names(k)
        atoms = atoms_over(U, terms_up_to_depth(U, ys, 1), reflexive=False)
        for bs in itertools.product(A.universe, repeat=k):
            env = dict(zip(ys, bs))
            true = [t for t in atoms if eval_positive(A, t, env)]
            false = [t for t in atoms if not eval_positive(A, t, env)]
            for n1 in range(0, 3):
                for t1 in itertools.combinations(true, n1):
                    for t2 in itertools.combinations(false, 2):
                        c = PacCertificate(psi, (), (), conj(*t1), disj(*t2), ys, bs,
                                           BoundedVerdict(Outcome.HOLDS, B(3)))
                        assert not verify_certificate(c, A, t_inj, B(3))


# ------------------------------------------------------------------ Alc pairs

def test_alc_probe_pairs_have_the_star_property(t_inj):
    budget = B(4)
    psi = P("f(x) = x")
    pairs = alc_probe(t_inj, psi, budget)
    assert pairs
    for p in pairs:
        for S, a, b in p.provenance:
            assert star_witness(t_inj, psi, ("x",), p, S, a, budget) is not None


def test_two_cycle_pair_has_the_star_property(ws, t_inj):
    pair = AlcPair(P("f(x) = y and f(y) = x"), P("x = y"), ("y",))
    b = star_witness(t_inj, P("f(x) = x"), ("x",), pair, ws.structures["fix_C2"], ("a",), B(4))
    assert b == ("b",)


def test_alc_probe_of_valid_formula_is_empty(t_inj):
    assert alc_probe(t_inj, P("x = x"), B(4)) == []


def test_disjunction_combination_keeps_the_star_property(t_inj):
    budget = B(4)
    psi = P("f(x) = x")
    pairs = alc_probe(t_inj, psi, budget)
    extra = AlcPair(P("f(x) = y and f(y) = x"), P("x = y"), ("y",), ((cycles(1, 2), ("p1",), ("p2",)),))
    for p, q in itertools.product(pairs + [extra], repeat=2):
        r = alc_disjunction_combine(p, q, ("x",))
        assert len(set(r.y_vars)) == len(r.y_vars)
        for S, a, _ in r.provenance:
            assert star_witness(t_inj, psi, ("x",), r, S, a, budget) is not None


# ------------------------------------------------------------------------ T_h

def test_th_for_fixed_point_sentence(t_inj):
    binding = alc_binding(t_inj, P("exists y. f(y) = y"), B(6))
    assert binding.entailment.holds
    Th = build_th_axioms(t_inj, [binding])
    assert Th.name == "T_inj_h"
    for n in range(1, 5):
        for S in structures_of_size(U, n):
            assert is_model(S, Th) == (is_model(S, t_inj) and has_fixed_point(S))


def test_th_with_no_bindings_is_unchanged(t_inj):
    assert build_th_axioms(t_inj, []) is t_inj


def test_unverified_binding_is_refused(t_inj):
    binding = alc_binding(t_inj, P("exists y. f(y) = y"), B(6))
    from dataclasses import replace
    bad = replace(binding, entailment=BoundedVerdict(Outcome.UNKNOWN, B(6)))
    with pytest.raises(PreconditionError):
        build_th_axioms(t_inj, [bad])


# ----------------------------------------------------------------- saturation

def test_saturating_a_two_cycle(ws, t_inj):
    res = pac_saturate(ws.structures["C2"], t_inj, B(6))
    assert res.report.holds
    assert has_fixed_point(res.final)
    assert check_kind(res.embedding, "embedding")
    assert len(res.steps) == 1


def test_saturating_a_pc_model_does_nothing(ws, t_inj):
    res = pac_saturate(ws.structures["A_e"], t_inj, B(6))
    assert res.steps == () and res.final is ws.structures["A_e"]


def test_saturating_a_three_cycle(t_nofix):
    res = pac_saturate(cycles(3), t_nofix, B(9))
    assert res.steps
    for s in res.steps:
        assert check_kind(s.embedding, "embedding") and not check_kind(s.embedding, "immersion")
    # the bound stops the growth; one size more exposes the next gap
    assert is_pac_bounded(res.final, t_nofix, B(10)).fails


def test_max_steps(t_nofix):
    res = pac_saturate(cycles(3), t_nofix, B(9), max_steps=1)
    assert len(res.steps) == 1


# -------------------------------------------------------------- e-elementary

def test_e_elementary_examples(ws):
    C2 = ws.structures["C2"]
    assert is_e_elementary_bounded(C2, C2, identity(C2), B(6)).holds
    fc = ws.structures["fix_C2"]
    r = is_e_elementary_bounded(C2, fc, Morphism.from_names(C2, fc, {"a": "a", "b": "b"}), B(6))
    assert r.fails and r.stage == 1
    cc = ws.structures["C2_C2"]
    r = is_e_elementary_bounded(C2, cc, Morphism.from_names(C2, cc, {"a": "a", "b": "b"}), B(6))
    assert r.holds


def test_e_elementary_needs_an_embedding(ws):
    C2, Ae = ws.structures["C2"], ws.structures["A_e"]
    with pytest.raises(MorphismError):
        is_e_elementary_bounded(C2, Ae, Morphism(C2, Ae, (0, 0)), B(3))


def test_e_elementary_reflexive_on_small_structures():
    for n in (1, 2, 3):
        for S in structures_of_size(U, n):
            assert is_e_elementary_bounded(S, S, identity(S), B(6)).holds


CHAINS = [(1,), (1, 2), (1, 2, 2)], [(2,), (2, 2), (2, 2, 2)], [(1,), (1, 1), (1, 1, 2)], [(2,), (2, 1), (2, 1, 3)]


@pytest.mark.parametrize("chain", CHAINS, ids=lambda c: "<".join("+".join(map(str, s)) for s in c))
def test_e_elementary_chains(chain):
    A, Bs, C = (cycles(*c) for c in chain)
    b = B(6)
    ab = is_e_elementary_bounded(A, Bs, inclusion(A, Bs), b)
    bc = is_e_elementary_bounded(Bs, C, inclusion(Bs, C), b)
    ac = is_e_elementary_bounded(A, C, inclusion(A, C), b)
    if ab.holds and bc.holds:
        assert ac.holds
    if ac.holds and bc.holds:
        assert ab.holds


def test_chain_corpus_is_not_vacuous():
    A, Bs, C = (cycles(*c) for c in CHAINS[1])
    assert is_e_elementary_bounded(A, Bs, inclusion(A, Bs), B(6)).holds
    assert is_e_elementary_bounded(Bs, C, inclusion(Bs, C), B(6)).holds


# ---------------------------------------------------- substructure instances

@pytest.mark.parametrize("small,big", [((1,), (1, 2)), ((1, 2), (1, 2, 2)), ((1, 1), (1, 1, 2))])
def test_immersed_substructure_of_pac_model_is_pac(t_inj, small, big):
    A, C = cycles(*small), cycles(*big)
    m = inclusion(A, C)
    assert check_kind(m, "immersion")
    assert is_pac_bounded(C, t_inj, B(5)).holds
    for _, s in t_inj.axioms:
        from poslog.structures import satisfies
        assert satisfies(A, s) and satisfies(C, s)
    assert is_pac_bounded(A, t_inj, B(5)).holds


@pytest.mark.parametrize("small,big", [((1,), (1, 2)), ((1, 2), (1, 2, 2))])
def test_amalgamating_immersed_structure_is_pac(t_inj, small, big):
    A, C = cycles(*small), cycles(*big)
    assert check_kind(inclusion(A, C), "immersion")
    assert is_pac_bounded(C, t_inj, B(6)).holds
    assert embedding_amalgamation_probe(A, t_inj, 3, B(6)).complete
    assert is_pac_bounded(A, t_inj, B(6)).holds


# ------------------------------------------------------------- T'' at N = 10

def test_two_plus_three_cycle_needs_ten_elements(t_nofix):
    S = cycles(2, 3)
    for check in (is_pc_bounded, is_pac_bounded):
        assert check(S, t_nofix, B(9)).holds
        r = check(S, t_nofix, B(10))
        assert r.fails and len(r.counterexample.codomain) == 10
        phi, _ = r.gained
        assert phi in {cycle_sentence("f", k) for k in range(5, 11)}


def test_gained_formula_none_for_immersions(ws):
    assert gained_formula(identity(ws.structures["C2"])) is None
