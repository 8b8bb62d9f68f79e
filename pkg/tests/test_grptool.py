from __future__ import annotations

import numpy as np
import pytest

import oracles
from sylowlie import chevalley as ch
from sylowlie import grptool as gt
from sylowlie.errors import UsageError
from sylowlie.lemmas import named_subgroups


def S_of(fam, q):
    return gt.whole(ch.build_group(fam, q))


def test_closure_basics():
    T = ch.build_group("su4", 3)
    assert gt.closure(T, []).order == 1
    J = gt.root_product(T, ["b", "a+b", "2a+b"])
    assert J.order == 3**4
    assert gt.root_product(T, T.roots).order == T.order
    H = gt.closure(T, [T.root_index_of("a", 1)])
    assert H.order == 3 and H.is_elementary_abelian


@pytest.mark.parametrize("q", [2, 3])
def test_su4_centralizers_of_derived_elements(q):
    T = ch.build_group("su4", q)
    named = named_subgroups(T)
    Sd, Z = named["S'"], named["Z(S)"]
    for x in Sd.elements[~Z.mask[Sd.elements]]:
        assert gt.centralizer_of_element(T, x).order == q**5


@pytest.mark.parametrize("q", [3, 4])
def test_su4_centralizers_outside_q2(q):
    T = ch.build_group("su4", q)
    named = named_subgroups(T)
    Q1, Q2 = named["Q1"], named["Q2"]
    S = gt.whole(T)
    xs = S.elements[(S.orders == T.p) & ~Q2.mask[S.elements]]
    for x in xs[:: max(1, len(xs) // 200)]:
        C = gt.centralizer_of_element(T, x)
        assert C.order == q**4 and C <= Q1


def test_centralizer_is_intersection_of_element_centralizers():
    T = ch.build_group("g2", 2)
    S = gt.whole(T)
    H = named_subgroups(T)["T"]
    C = gt.centralizer(H, within=S)
    mask = np.ones(T.order, dtype=bool)
    for h in H.elements:
        mask &= gt.centralizer_of_element(T, h).mask
    assert np.array_equal(C.mask, mask)


def test_center_g2_p5():
    T = ch.build_group("g2", 5)
    Z = gt.center(gt.whole(T))
    assert Z.order == 5 and np.array_equal(Z.elements, T.root_subgroup("3a+2b"))


@pytest.mark.parametrize("q", [5, 7])
def test_g2_series_coincide_p_at_least_5(q):
    S = S_of("g2", q)
    up = gt.upper_central_series(S)
    low = gt.lower_central_series(S)[::-1]
    assert [H.order for H in up] == [1, q, q**2, q**3, q**4, q**6]
    assert len(up) == len(low) and all(A == B for A, B in zip(up, low))


def test_g2_p2_z_series():
    # the orders q, q^2, q^4 hold for the upper central series at q = 4
    up = gt.upper_central_series(S_of("g2", 4))
    assert [H.order for H in up[1:4]] == [4, 4**2, 4**4]
    # at q = 2 the literal upper central series is different
    assert [H.order for H in gt.upper_central_series(S_of("g2", 2))] == [1, 2, 8, 64]


def test_abelian_series_and_frattini():
    T = ch.build_group("g2", 3)
    A = gt.root_product(T, ["3a+b", "3a+2b"])
    assert [H.order for H in gt.upper_central_series(A)] == [1, 9]
    assert gt.frattini(A).order == 1
    assert gt.thompson(A) == A


def test_p3_agemo_and_omega():
    T = ch.build_group("g2", 3)
    S = gt.whole(T)
    assert gt.agemo(S) == gt.center(S)
    assert gt.omega(S) == S


def test_p2_frattini_of_q1():
    T = ch.build_group("g2", 4)
    named = named_subgroups(T)
    Q1 = named["Q1"]
    assert gt.frattini(Q1) == gt.center(Q1) == named["Z(S)"]


@pytest.mark.parametrize("q", [2, 3])
def test_su4_thompson(q):
    T = ch.build_group("su4", q)
    J = gt.thompson(gt.whole(T))
    assert J == gt.root_product(T, ["b", "a+b", "2a+b"]) and J.order == q**4


def test_g2_q2_maximal_elementary_abelians():
    T = ch.build_group("g2", 2)
    S = gt.whole(T)
    named = named_subgroups(T)
    mea = [A for A in gt.maximal_elementary_abelians(S) if A.order == 8]
    classes = []
    for A in mea:
        if not any(A in c for c in classes):
            classes.append(gt.s_class(A, S))
    assert len(classes) == 5
    # each named representative lies in its own class
    assert len({next(i for i, c in enumerate(classes) if named[n] in c) for n in "TUVWX"}) == 5
    want = {"T": named["Q2"], "U": named["Q1"], "V": named["Q1"], "W": S, "X": S}
    for name, N in want.items():
        assert gt.normalizer(named[name], within=S) == N


@pytest.mark.parametrize("fam,q", [("g2", 2), ("g2", 3), ("su4", 2), ("su4", 3), ("g2", 5)])
def test_frattini_rank_against_hom_oracle(fam, q):
    T = ch.build_group(fam, q)
    S = gt.whole(T)
    d = oracles.hom_dimension(T, S.gens)
    assert gt.frattini_rank(S) == d
    assert len(gt.minimal_generating_set(S)) == d


def test_g2_q2_needs_three_generators():
    T = ch.build_group("g2", 2)
    H = gt.closure(T, [T.root_index_of("a", 1), T.root_index_of("b", 1)])
    assert H.order == 16
    assert len(gt.minimal_generating_set(gt.whole(T))) == 3


@pytest.mark.parametrize("q", [2, 3, 4])
def test_su4_q1_rank(q):
    T = ch.build_group("su4", q)
    Q1 = named_subgroups(T)["Q1"]
    d = oracles.hom_dimension(T, Q1.gens, Q1.elements)
    n = T.n
    assert d == 4 * n
    assert len(gt.minimal_generating_set(Q1)) == d


@pytest.mark.parametrize("fam,q", [("g2", 2), ("g2", 3), ("su4", 3)])
def test_maximal_subgroups(fam, q):
    T = ch.build_group(fam, q)
    S = gt.whole(T)
    d = oracles.hom_dimension(T, S.gens)
    p = T.p
    maxes = gt.maximal_subgroups(S)
    assert len(maxes) == (p**d - 1) // (p - 1)
    assert len({M.key for M in maxes}) == len(maxes)
    Phi = gt.frattini(S)
    for M in maxes:
        assert M.order * p == S.order and Phi <= M and gt.is_normal(M, S)


def test_g2_q3_exponent_three_maximals_are_q1_q2():
    T = ch.build_group("g2", 3)
    named = named_subgroups(T)
    exp3 = [M for M in gt.maximal_subgroups(gt.whole(T)) if M.exponent == 3]
    assert sorted(M.key for M in exp3) == sorted([named["Q1"].key, named["Q2"].key])


@pytest.mark.slow
def test_g2_q9_maximal_count():
    T = ch.build_group("g2", 9)
    S = gt.whole(T)
    d = oracles.hom_dimension(T, S.gens)
    assert d == gt.frattini_rank(S) == 4
    # hyperplanes of a 4-dimensional space over GF(3)
    assert (3**d - 1) // (3 - 1) == 40


def test_centric_examples():
    T = ch.build_group("su4", 2)
    S = gt.whole(T)
    assert gt.is_s_centric(S)
    Q2 = named_subgroups(T)["Q2"]
    assert Q2.is_abelian and gt.is_s_centric(Q2)
    assert not gt.is_s_centric(gt.center(S))


def test_s_class_and_conjugation():
    T = ch.build_group("g2", 2)
    S = gt.whole(T)
    H = named_subgroups(T)["T"]
    cls = gt.s_class(H, S)
    N = gt.normalizer(H, within=S)
    assert len(cls) * N.order == S.order
    # brute-force orbit over every element
    orbit = {gt.conjugate_subgroup(H, g).key for g in S.elements}
    assert orbit == {K.key for K in cls}


def test_chain_prune_certificate_is_valid():
    T = ch.build_group("g2", 2)
    S = gt.whole(T)
    E = gt.root_product(T, ["a+b", "2a+b", "3a+b", "3a+2b"])
    w = gt.chain_centralizer_prune(E, S)
    assert w is not None
    g = w.element
    assert gt.normalizer(E, within=S).mask[g]
    assert not gt.join(E, gt.centralizer(E, within=S)).mask[g]
    for lo, hi in zip(w.chain, w.chain[1:]):
        assert lo <= hi and gt.is_normal(lo, E)
        assert np.all(lo.mask[T.comm(hi.elements, g)])


def test_recipes():
    T = ch.build_group("su4", 2)
    assert gt.subgroup_by_recipe(T, "J").order == 16
    assert gt.subgroup_by_recipe(T, "Z").order == 2
    assert gt.subgroup_by_recipe(T, "roots:b,2a+b").order == 4
    d = gt.subgroup_by_recipe(T, "S'").to_dict()
    assert d["order"] == 2**3 and d["ambient"]["family"] == "SU4"
    with pytest.raises(UsageError):
        gt.subgroup_by_recipe(T, "nonsense")
