import itertools

import pytest

from conftest import cycles
from oracles import amalgam_brute_force
from poslog.amalgamation import (
    AmalgamRequest, amalgamate_ei, complete_embeddings, embedding_amalgamation_probe, square_commutes,
)
from poslog.enumeration import enumerate_models
from poslog.errors import MorphismError, NotAModelError
from poslog.morphisms import Morphism, check_kind, find_morphisms, identity, is_isomorphic
from poslog.theories import Outcome, SearchBudget


def req(A, B, e, C, i, T, n):
    return AmalgamRequest(A, B, e, C, i, T, SearchBudget(max_model_size=n))


def test_non_immersion_is_rejected(ws, t_inj):
    A, B, C = ws.structures["C2"], ws.structures["C2_C2"], ws.structures["fix_C2"]
    e = Morphism.from_names(A, B, {"a": "a", "b": "b"}, "embedding")
    i = Morphism.from_names(A, C, {"a": "a", "b": "b"})
    with pytest.raises(MorphismError, match="not an immersion"):
        amalgamate_ei(req(A, B, e, C, i, t_inj, 6))


def test_two_cycle_square(ws, t_inj):
    A, B = ws.structures["C2"], ws.structures["C2_C2"]
    e = Morphism.from_names(A, B, {"a": "a", "b": "b"}, "embedding")
    i = Morphism.from_names(A, B, {"a": "a", "b": "b"}, "immersion")
    r = req(A, B, e, B, i, t_inj, 6)
    verdict, result = amalgamate_ei(r)
    assert verdict.outcome == Outcome.FOUND
    assert result.ok and result.e_prime_is_embedding and result.i_prime_is_immersion and result.commutes
    assert amalgam_brute_force(r, 6) is not None


def test_identity_square(ws, t_inj):
    A = ws.structures["fix_C2"]
    verdict, result = amalgamate_ei(req(A, A, identity(A, "embedding"), A, identity(A), t_inj, 3))
    assert verdict.found and is_isomorphic(result.D, A)


def test_not_found_when_bound_is_too_small(ws, t_inj):
    A, B = ws.structures["C2"], ws.structures["C2_C2"]
    e = Morphism.from_names(A, B, {"a": "a", "b": "b"}, "embedding")
    i = Morphism.from_names(A, B, {"a": "a", "b": "b"}, "immersion")
    verdict, result = amalgamate_ei(req(A, B, e, B, i, t_inj, 2))
    assert verdict.outcome == Outcome.NOT_FOUND and result is None


def small_requests(T, max_size=2):
    models = list(enumerate_models(T, max_size))
    for A, B, C in itertools.product(models, repeat=3):
        for e in find_morphisms(A, B, "embedding"):
            for i in find_morphisms(A, C, "immersion"):
                yield A, B, e, C, i


@pytest.mark.parametrize("n", [2, 4])
@pytest.mark.parametrize("name", ["t_any", "t_inj", "t_nofix"])
def test_agrees_with_brute_force(name, n, request):
    T = request.getfixturevalue(name)
    count = 0
    for A, B, e, C, i in small_requests(T):
        r = req(A, B, e, C, i, T, n)
        verdict, result = amalgamate_ei(r)
        oracle = amalgam_brute_force(r, n)
        assert verdict.found == (oracle is not None)
        if verdict.found:
            assert result.ok
        count += 1
    assert count > 0


def test_found_square_also_amalgamates_homs_and_embeddings(t_any):
    for A, B, e, C, i in small_requests(t_any):
        r = req(A, B, e, C, i, t_any, 4)
        verdict, result = amalgamate_ei(r)
        if not verdict.found:
            continue
        assert check_kind(result.i_prime, "hom") and check_kind(result.e_prime, "hom")
        assert square_commutes(e, result.i_prime, i, result.e_prime)
        # two embeddings out of A complete through the separate probe path
        assert complete_embeddings(e, Morphism(A, C, i.map, "embedding"), t_any, r.budget) is not None


def test_probe_over_fixed_point(ws, t_inj):
    report = embedding_amalgamation_probe(ws.structures["A_e"], t_inj, 3, SearchBudget(6))
    assert report.complete and report.checked > 0
    assert "Holds up to size N=6" in report.describe()


def test_probe_over_two_cycle(ws, t_inj):
    report = embedding_amalgamation_probe(ws.structures["C2"], t_inj, 3, SearchBudget(6))
    assert report.checked == len(report.completions) + len(report.failures)
    for e1, e2, D, g1, g2 in report.completions:
        assert check_kind(g1, "embedding") and check_kind(g2, "embedding")
        assert all(g1.map[e1.map[a]] == g2.map[e2.map[a]] for a in range(2))


def test_identity_pair_completes_on_the_base(ws, t_inj):
    A = ws.structures["fix_C2"]
    D, g1, g2 = complete_embeddings(identity(A, "embedding"), identity(A, "embedding"), t_inj, SearchBudget(3))
    assert is_isomorphic(D, A)


def test_probe_on_non_model(t_nofix):
    with pytest.raises(NotAModelError):
        embedding_amalgamation_probe(cycles(1), t_nofix, 2, SearchBudget(3))
