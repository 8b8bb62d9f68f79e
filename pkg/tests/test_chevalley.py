from __future__ import annotations

import json

import numpy as np
import pytest

import oracles
from sylowlie import chevalley as ch
from sylowlie import grptool as gt
from sylowlie.errors import ConfigurationError, DomainError, ResourceError, UsageError
from sylowlie.gf import FieldParams, gf


def assoc_sample(T, n, seed=0):
    rng = np.random.default_rng(seed)
    a, b, c = rng.integers(0, T.order, size=(3, n))
    return np.array_equal(T.mul(T.mul(a, b), c), T.mul(a, T.mul(b, c)))


# construction -------------------------------------------------------------

@pytest.mark.parametrize("fam,q", [("g2", 2), ("su4", 3), ("g2", 4), ("su4", 2)])
def test_order_and_indexing_bijection(fam, q):
    T = ch.build_group(fam, q)
    assert T.order == q**6
    idx = np.arange(T.order)
    assert np.array_equal(T.encode(T.decode(idx)), idx)


def test_unknown_family_and_bad_q():
    with pytest.raises(ConfigurationError):
        ch.build_group("e8", 2)
    with pytest.raises(ConfigurationError):
        ch.build_group("g2", 6)


def test_enumeration_cap():
    T = ch.build_group("g2", 16)
    assert not T.enumerable
    with pytest.raises(ResourceError):
        T.all_orders()
    # element arithmetic still works above the cap
    x = T.root_index_of("a", gf(16).gen)
    assert int(T.mul(x, T.inv(x))) == 0


def test_identity_and_root_elements():
    T = ch.build_group("g2", 3)
    F = gf(3)
    assert T.root_element("a", F.zero) == T.identity()
    assert T.root_element("alpha", F.one).coords[0] == F.one
    t, u = F(1), F(2)
    prod = T.root_element("a", t) * T.root_element("b", u)
    assert prod.coords == (t, u) + (F.zero,) * 4
    with pytest.raises(UsageError):
        T.root_element("c", F.one)


def test_su4_fixed_field_constraint():
    T = ch.build_group("su4", 2)
    w = T.ext.big.gen
    with pytest.raises(DomainError):
        T.root_element("b", w)
    # subfield elements are accepted on every root
    assert T.root_element("b", T.ext.big.one).coords[1] == T.ext.sub.one


@pytest.mark.parametrize("fam,q", [("g2", 3), ("g2", 4), ("su4", 2), ("su4", 3)])
def test_root_subgroup_additivity(fam, q):
    T = ch.build_group(fam, q)
    for r in range(T.nroots):
        F = T.ext.big if (T.ext is not None and T.datum.wide[r]) else (T.ext.sub if T.ext else T.field)
        a = np.arange(F.q)
        A, B = np.meshgrid(a, a, indexing="ij")
        got = T.mul(A * T.place[r], B * T.place[r])
        assert np.array_equal(got, F.add(A, B) * T.place[r])


@pytest.mark.parametrize("fam,q", [("g2", 3), ("g2", 4), ("g2", 5), ("su4", 3), ("su4", 4), ("su4", 5)])
def test_associativity_sample(fam, q):
    assert assoc_sample(ch.build_group(fam, q), 20_000)


def test_group_operation_identities():
    T = ch.build_group("g2", 3)
    a = np.arange(T.order)
    assert np.all(T.mul(a, T.inv(a)) == 0)
    assert np.all(T.mul(a, 0) == a)
    assert np.all(T.comm(a, a) == 0)
    rng = np.random.default_rng(1)
    x, y = rng.integers(0, T.order, size=(2, 500))
    assert np.array_equal(T.comm(x, y), T.mul(T.mul(T.inv(x), T.inv(y)), T.mul(x, y)))
    assert np.array_equal(T.conj(x, y), T.mul(T.inv(y), T.mul(x, y)))
    assert np.array_equal(T.power(x, -1), T.inv(x))
    orders = T.all_orders()
    assert np.all(T.exponent() % orders == 0)
    for z in x[:20]:
        assert orders[z] == oracles.brute_order(T, z)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_commutators_match_displayed_tables(q):
    T = ch.build_group("g2", q)
    expected = oracles.g2_expected_commutators(q)
    t = np.arange(q)[:, None]
    u = np.arange(q)[None, :]
    for (r, s), arr in expected.items():
        got = T.comm(t * T.place[T.datum.root_index(r)], u * T.place[T.datum.root_index(s)])
        assert np.array_equal(got, arr), (r, s)


def test_commutator_examples():
    T5 = ch.build_group("g2", 5)
    F = gf(5)
    t, u = F(2), F(3)
    c = T5.root_element("a", t).comm(T5.root_element("2a+b", u))
    assert c == T5.root_element("3a+b", F.from_int(3) * t * u)
    T3 = ch.build_group("g2", 3)
    F = gf(3)
    t, u = F(1), F(2)
    c = T3.root_element("a", t).comm(T3.root_element("a+b", u))
    assert c == T3.root_element("2a+b", t * u)


def test_reduced_tables():
    r2 = ch.reduced_table(ch.build_group("g2", 2))
    assert [x[0] for x in r2[("a", "b")]] == ["a+b", "2a+b", "3a+b"]
    assert [x[0] for x in r2[("a", "a+b")]] == ["3a+b", "3a+2b"]
    r3 = ch.reduced_table(ch.build_group("g2", 3))
    assert ("a+b", "2a+b") not in r3 and ("a", "2a+b") not in r3
    assert r3[("a", "a+b")] == [("2a+b", 1, "mono", 1, 1)]


@pytest.mark.parametrize("fam,q,root", [("g2", 2, "3a+2b"), ("g2", 5, "3a+2b"),
                                        ("su4", 2, "2a+b"), ("su4", 3, "2a+b")])
def test_center_is_highest_root_group(fam, q, root):
    T = ch.build_group(fam, q)
    Z = gt.center(gt.whole(T))
    assert np.array_equal(Z.elements, T.root_subgroup(root))


def test_su4_orders_at_q2():
    T = ch.build_group("su4", 2)
    assert set(T.all_orders()[1:].tolist()) <= {2, 4}


# unitary sign conventions ------------------------------------------------------

def test_su4_sign_constraint():
    """The signs must multiply to -1 in odd characteristic, and the trace needs the twist."""
    for q in (3, 5):
        assert assoc_sample(ch.build_group("su4", q, signs=(1, 1, -1)), 20_000)
        assert assoc_sample(ch.build_group("su4", q, signs=(-1, 1, 1)), 20_000)
        assert not assoc_sample(ch.build_group("su4", q, signs=(1, 1, 1)), 20_000)
    for q in (2, 3):
        untwisted = ch.GroupTable(ch.su4_datum(conjugate_trace=False), FieldParams.for_order(q))
        assert not assoc_sample(untwisted, 20_000)
    with pytest.raises(ConfigurationError):
        ch.build_group("su4", 3, signs=(1, 1, 1)).matrix_oracle


def test_matrix_oracle_basics():
    T = ch.build_group("su4", 2)
    M = T.matrix_oracle
    assert np.array_equal(M(0), np.eye(4, dtype=np.int64))
    w = T.ext.big.gen
    x = T.root_element("b", T.ext.big.one) * T.root_element("a", w)
    assert np.array_equal(M(x.index), M.matmul(M(T.root_index_of("b", 1)), M(T.root_index_of("a", w))))
    with pytest.raises(ConfigurationError):
        ch.build_group("g2", 2).matrix_oracle


def test_matrix_oracle_trace_formula():
    T = ch.build_group("su4", 3)
    M = T.matrix_oracle
    big = T.ext.big
    for t in big.elements():
        for u in big.elements():
            c = T.root_element("a", t).comm(T.root_element("a+b", u))
            tr = T.ext.sub(int(T.ext.trace_t[big.mul(t.index, T.ext.frob[u.index])]))
            assert c == T.root_element("2a+b", -tr)
            # commutator of matrices equals matrix of commutator
            x, y = T.root_index_of("a", t), T.root_index_of("a+b", u)
            A, B = M(x), M(y)
            Ai, Bi = M(int(T.inv(x))), M(int(T.inv(y)))
            assert np.array_equal(M.matmul(M.matmul(Ai, Bi), M.matmul(A, B)), M(c.index))


# G2 sign convention -----------------------------------------------------------

def test_g2_convention_flag_is_isomorphic():
    q = 3
    A = ch.build_group("g2", q)
    B = ch.build_group("g2", q, convention=-1)
    assert A.datum.table != B.datum.table
    F = A.field
    # x_r(t) -> x_r(-t) on every coordinate
    coords = A.decode(np.arange(A.order))
    phi = A.encode([F.neg(c) for c in coords])
    a = np.arange(A.order)
    X, Y = np.meshgrid(a, a, indexing="ij")
    assert np.array_equal(phi[A.mul(X, Y)], B.mul(phi[X], phi[Y]))
    assert B.exponent() == A.exponent()
    with pytest.raises(ConfigurationError):
        ch.g2_datum(2)


# cache and dumps ---------------------------------------------------------------

def test_table_cache_roundtrip(tmp_path):
    T = ch.build_group("su4", 3)
    T.build_cayley()
    path = ch.save_table(T, tmp_path)
    with np.load(path) as z:
        assert z["cayley"].dtype.str == "<i4"
        assert z["orders"].dtype.str == "<i8"
        meta = json.loads(bytes(z["meta"]).decode())
    assert meta["cache_version"] == ch.CACHE_VERSION
    fresh = ch.GroupTable(ch.su4_datum(), T.params)
    assert ch.load_table(fresh, tmp_path)
    assert np.array_equal(fresh.build_cayley(), T.build_cayley())
    assert np.array_equal(fresh.all_orders(), T.all_orders())
    other = ch.GroupTable(ch.su4_datum((-1, 1, 1)), T.params)
    assert not ch.load_table(other, tmp_path)


def test_cache_rejects_stale_version(tmp_path, monkeypatch):
    T = ch.build_group("g2", 2)
    ch.save_table(T, tmp_path)
    monkeypatch.setattr(ch, "CACHE_VERSION", ch.CACHE_VERSION + 1)
    assert not ch.load_table(ch.GroupTable(ch.g2_datum(), T.params), tmp_path)


def test_datum_json():
    d = json.loads(ch.g2_datum().to_json())
    assert d["roots"] == list(ch.G2_ROOTS)
    words = {tuple(r["pair"]): r["word"] for r in d["table"]}
    assert words[("a", "b")][-1] == "x_3a+2b(-2t^3u^2)"
    with pytest.raises(ConfigurationError):
        ch.RootDatum("X", ("a", "b"), {(1, 0): ()})
