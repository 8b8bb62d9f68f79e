"""Registry of runnable structural checks on the Sylow subgroups.

Each entry scans a fixed instance exhaustively and returns a
:class:`LemmaReport` made of named :class:`Check` items.  A failing check
always carries a concrete witness (element indices or subgroup generators).
"""

from __future__ import annotations

import json
import time
from collections.abc import Mapping
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from . import autom
from . import grptool as gt
from .chevalley import GroupTable, build_group
from .errors import UsageError
from .grptool import Subgroup

SCHEMA_VERSION = 1

# root supports of the named subgroups, by family
G2_SETS = {
    "Q1": ("b", "a+b", "2a+b", "3a+b", "3a+2b"),
    "Q2": ("a", "a+b", "2a+b", "3a+b", "3a+2b"),
    "T": ("a", "3a+b", "3a+2b"),
    "U": ("b", "2a+b", "3a+2b"),
    "V": ("b", "a+b", "3a+2b"),
    "W": ("2a+b", "3a+b", "3a+2b"),
    "X": ("a+b", "3a+b", "3a+2b"),
    "X1": ("b", "3a+b", "3a+2b"),
    "X2": ("a+b", "2a+b", "3a+2b"),
}
# central series as root products; the p = 2 list describes q > 2 only
G2_SERIES = {
    2: {"Z(S)": ("3a+2b",), "Z2(S)": ("3a+b", "3a+2b"), "Z3(S)": ("a+b", "2a+b", "3a+b", "3a+2b")},
    3: {"Z(S)": ("2a+b", "3a+2b"), "Z(Q1)": ("a+b", "2a+b", "3a+2b"), "Z(Q2)": ("2a+b", "3a+b", "3a+2b"),
        "Q1&Q2": ("a+b", "2a+b", "3a+b", "3a+2b"), "Phi(Q1)": ("3a+2b",), "Phi(Q2)": ("2a+b",)},
    5: {"Z(S)": ("3a+2b",), "Z2(S)": ("3a+b", "3a+2b"), "Z3(S)": ("2a+b", "3a+b", "3a+2b"),
        "Z4(S)": ("a+b", "2a+b", "3a+b", "3a+2b")},
}
SU4_SETS = {
    "Q1": ("a", "a+b", "2a+b"),
    "Q2": ("b", "a+b", "2a+b"),
    "S'": ("a+b", "2a+b"),
    "Z(S)": ("2a+b",),
}


def _series_key(p: int) -> int:
    return p if p in (2, 3) else 5


class NamedSubgroups(Mapping):
    """Lazily built root-product subgroups of ``S``, keyed by name."""

    def __init__(self, table: GroupTable):
        self.table = table
        if table.family == "G2":
            self.recipes = dict(G2_SETS)
            self.recipes.update(G2_SERIES[_series_key(table.p)])
        else:
            self.recipes = dict(SU4_SETS)
        self._cache: dict[str, Subgroup] = {}

    def __getitem__(self, name: str) -> Subgroup:
        if name == "S":
            return gt.whole(self.table)
        if name not in self.recipes:
            raise KeyError(name)
        if name not in self._cache:
            self._cache[name] = gt.root_product(self.table, self.recipes[name], tag=name)
        return self._cache[name]

    def __iter__(self):
        yield "S"
        yield from self.recipes

    def __len__(self):
        return len(self.recipes) + 1


def named_subgroups(table: GroupTable) -> NamedSubgroups:
    named = getattr(table, "_named", None)
    if named is None:
        named = NamedSubgroups(table)
        table._named = named
    return named


# reports ---------------------------------------------------------------------

@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""
    witness: dict | None = None
    # informational checks are reported but do not enter the verdict
    informational: bool = False

    def to_dict(self) -> dict:
        out = {"name": self.name, "ok": self.ok, "detail": self.detail}
        if self.informational:
            out["informational"] = True
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class LemmaReport:
    lemma_id: str
    family: str
    q: int
    verdict: str
    checks: list[Check] = dc_field(default_factory=list)
    reason: str = ""
    instantiation: str = ""
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def witness(self) -> dict | None:
        for c in self.checks:
            if not c.ok and not c.informational:
                return {"check": c.name, **(c.witness or {})}
        return None

    def to_dict(self, with_time: bool = True) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "lemma": self.lemma_id,
            "family": self.family,
            "q": self.q,
            "verdict": self.verdict,
            "instantiation": self.instantiation,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.reason:
            out["reason"] = self.reason
        if self.verdict == "fail":
            out["witness"] = self.witness
        if with_time:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def summary(self) -> str:
        line = f"{self.lemma_id:<16} {self.family:<4} q={self.q:<3} {self.verdict}"
        if self.verdict == "skipped":
            line += f" ({self.reason})"
        elif self.verdict == "fail":
            bad = [c.name for c in self.checks if not c.ok and not c.informational]
            line += f" [{', '.join(bad)}]"
        return line


# witness helpers ---------------------------------------------------------------

def _sub_w(H: Subgroup) -> dict:
    return {"subgroup": H.tag, "order": H.order, "generators": sorted(H.gens)}


def _elt_w(t: GroupTable, x) -> dict:
    x = int(x)
    return {"element": x, "coords": [c.index for c in t.coords_of(x)]}


def _equal(name: str, A: Subgroup, B: Subgroup) -> Check:
    ok = A == B
    detail = f"{A.tag or 'lhs'} = {B.tag or 'rhs'} (orders {A.order}, {B.order})"
    return Check(name, ok, detail, None if ok else {"lhs": _sub_w(A), "rhs": _sub_w(B)})


def _value(name: str, got, want) -> Check:
    ok = got == want
    return Check(name, ok, f"got {got}, expected {want}", None if ok else {"got": got, "expected": want})


def _all(name: str, flags: np.ndarray, t: GroupTable, subjects: np.ndarray, detail: str) -> Check:
    flags = np.asarray(flags, dtype=bool)
    if flags.all():
        return Check(name, True, f"{detail}: {flags.size} cases")
    bad = int(np.flatnonzero(~flags.ravel())[0])
    return Check(name, False, f"{detail}: {int((~flags).sum())} of {flags.size} cases fail",
                 _elt_w(t, np.asarray(subjects).ravel()[bad]))


# context with cached series ------------------------------------------------

class Context:
    """One instance plus the subgroups several checks share."""

    _cache: dict[int, Context] = {}

    def __init__(self, table: GroupTable):
        self.table = table
        self.S = gt.whole(table)
        self.named = named_subgroups(table)
        self._memo: dict[str, object] = {}

    @classmethod
    def of(cls, table: GroupTable) -> Context:
        ctx = cls._cache.get(id(table))
        if ctx is None or ctx.table is not table:
            ctx = cls._cache[id(table)] = cls(table)
        return ctx

    def memo(self, key: str, fn):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    @property
    def p(self) -> int:
        return self.table.p

    @property
    def q(self) -> int:
        return self.table.q

    def upper(self) -> list[Subgroup]:
        return self.memo("upper", lambda: gt.upper_central_series(self.S))

    def lower(self) -> list[Subgroup]:
        return self.memo("lower", lambda: gt.lower_central_series(self.S))

    def center(self) -> Subgroup:
        return self.upper()[1]

    def thompson(self) -> Subgroup:
        return self.memo("J", lambda: gt.thompson(self.S).named("J(S)"))

    def root_elt(self, root, c) -> np.ndarray:
        """Indices of ``x_root(c)`` for field-index arrays ``c``."""
        t = self.table
        r = t.datum.root_index(root)
        return np.asarray(c, dtype=np.int64) * t.place[r]

    def word(self, *letters) -> np.ndarray:
        """Product of root elements ``x_r1(c1) x_r2(c2) ...`` (broadcast)."""
        t = self.table
        out = None
        for root, c in letters:
            e = self.root_elt(root, c)
            out = e if out is None else t.mul(out, e)
        return out

    def class_reps(self, candidates: np.ndarray) -> np.ndarray:
        """One representative per S-class among ``candidates`` (a union of classes)."""
        t = self.table
        live = np.zeros(t.order, dtype=bool)
        live[candidates] = True
        reps = []
        for x in candidates:
            if not live[x]:
                continue
            reps.append(int(x))
            live[t.conj(int(x), self.S.elements)] = False
        return np.asarray(reps, dtype=np.int64)


# matrices over the field -----------------------------------------------------

def _unitri(a, b, c) -> np.ndarray:
    """``[[1,0,0],[a,1,0],[c,b,1]]`` as field-index arrays of shape (..., 3, 3)."""
    a, b, c = np.broadcast_arrays(np.asarray(a), np.asarray(b), np.asarray(c))
    M = np.zeros(a.shape + (3, 3), dtype=np.int64)
    M[..., 0, 0] = M[..., 1, 1] = M[..., 2, 2] = 1
    M[..., 1, 0] = a
    M[..., 2, 0] = c
    M[..., 2, 1] = b
    return M


def _matmul(F, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    shape = np.broadcast_shapes(A.shape, B.shape)
    out = np.zeros(shape, dtype=np.int64)
    for i in range(3):
        for j in range(3):
            acc = np.zeros(shape[:-2], dtype=np.int64)
            for k in range(3):
                acc = F.add(acc, F.mul(A[..., i, k], B[..., k, j]))
            out[..., i, j] = acc
    return out


def _field_grid(q: int, k: int) -> list[np.ndarray]:
    return [g.ravel() for g in np.meshgrid(*[np.arange(q)] * k, indexing="ij")]


def _hom_checks(label: str, ctx: Context, reps: np.ndarray, mats: np.ndarray,
                coset_of: Callable[[np.ndarray], np.ndarray] | None = None) -> list[Check]:
    """``reps[i] -> mats[i]`` is a well-defined injective homomorphism, all pairs.

    Without ``coset_of`` the reps must be the elements of a subgroup; with
    it they are coset representatives and products are located by coset label.
    """
    t = ctx.table
    F = t.F
    m = len(reps)
    keys = reps if coset_of is None else coset_of(reps)
    out = []
    distinct = len(np.unique(keys)) == m
    out.append(Check(f"{label}: parametrization is a bijection", distinct,
                     f"{len(np.unique(keys))} distinct of {m}"))
    flat = mats.reshape(m, 9)
    inj = len(np.unique(flat, axis=0)) == m
    out.append(Check(f"{label}: injective", inj, f"{len(np.unique(flat, axis=0))} distinct matrices of {m}"))
    if not distinct:
        return out
    pos = -np.ones(t.order, dtype=np.int64)
    pos[keys] = np.arange(m)
    prod = t.mul(reps[:, None], reps[None, :])
    k = pos[prod if coset_of is None else coset_of(prod)]
    closed = np.all(k >= 0)
    out.append(Check(f"{label}: products stay in the domain", bool(closed), f"{m * m} products"))
    if not closed:
        return out
    lhs = mats[k]
    rhs = _matmul(F, mats[:, None], mats[None, :])
    good = np.all(lhs == rhs, axis=(-1, -2))
    if good.all():
        out.append(Check(f"{label}: homomorphism", True, f"{m * m} pairs"))
    else:
        i, j = np.argwhere(~good)[0]
        out.append(Check(f"{label}: homomorphism", False, f"{int((~good).sum())} of {m * m} pairs fail",
                         {"x": _elt_w(t, reps[i]), "y": _elt_w(t, reps[j])}))
    return out


# the lemmas ------------------------------------------------------------------

def _check_g2_exponent(ctx: Context) -> list[Check]:
    p = ctx.p
    want = 8 if p == 2 else p * p if p in (3, 5) else p
    orders = ctx.table.all_orders()
    got = int(orders.max())
    c = _value("exponent", got, want)
    c.witness = c.witness and {**c.witness, **_elt_w(ctx.table, int(np.argmax(orders)))}
    return [c]


def _check_psu_exponent(ctx: Context) -> list[Check]:
    p = ctx.p
    want = 4 if p == 2 else 9 if p == 3 else p
    orders = ctx.table.all_orders()
    c = _value("exponent", int(orders.max()), want)
    c.witness = c.witness and {**c.witness, **_elt_w(ctx.table, int(np.argmax(orders)))}
    return [c]


THOMAS_CENTRALIZERS = (3, 4, 4, 4, 5, 6)


def _thomas_forms(ctx: Context) -> list[np.ndarray]:
    q = ctx.q
    nz = np.arange(1, q)
    a, b = np.meshgrid(nz, np.arange(q), indexing="ij")
    return [
        ctx.root_elt("a", nz),
        ctx.word(("b", a.ravel()), ("2a+b", b.ravel())),
        ctx.root_elt("2a+b", nz),
        ctx.root_elt("a+b", nz),
        ctx.root_elt("3a+b", nz),
        ctx.root_elt("3a+2b", nz),
    ]


def _check_thomas(ctx: Context) -> list[Check]:
    t, S, q = ctx.table, ctx.S, ctx.q
    out = []
    forms = _thomas_forms(ctx)
    for k, (els, e) in enumerate(zip(forms, THOMAS_CENTRALIZERS), start=1):
        invol = t.all_orders()[els] == 2
        out.append(_all(f"form {k} consists of involutions", invol, t, els, "order 2"))
        sizes = np.array([gt.centralizer_of_element(t, x, within=S).order for x in els])
        out.append(_all(f"form {k} centralizer order q^{e}", sizes == q**e, t, els, f"|C_S(x)| = {q**e}"))
    involutions = S.elements[S.orders == 2]
    reach = np.zeros(t.order, dtype=bool)
    allforms = np.concatenate(forms)
    for x in allforms:
        reach[t.conj(int(x), S.elements)] = True
    missed = involutions[~reach[involutions]]
    out.append(Check("every involution is S-conjugate to a listed form", missed.size == 0,
                     f"{involutions.size} involutions, {missed.size} missed",
                     None if missed.size == 0 else _elt_w(t, missed[0])))
    maximal = gt.maximal_elementary_abelians(S)
    classes: list[list[Subgroup]] = []
    seen: set[bytes] = set()
    for A in maximal:
        if A.key in seen:
            continue
        cls = gt.s_class(A, S)
        seen.update(B.key for B in cls)
        classes.append(cls)
    out.append(_value("S-classes of maximal elementary abelian subgroups", len(classes), 5))
    out.append(_value("orders of maximal elementary abelian subgroups",
                      sorted({A.order for A in maximal}), [q**3]))
    named = ctx.named
    normalizers = {"T": "Q2", "U": "Q1", "V": "Q1", "W": "S", "X": "S"}
    hit = []
    for name, nname in normalizers.items():
        A = named[name]
        out.append(Check(f"{name} is elementary abelian of order q^3",
                         A.is_elementary_abelian and A.order == q**3, f"order {A.order}",
                         None if A.is_elementary_abelian else _sub_w(A)))
        idx = next((i for i, cls in enumerate(classes) if any(B == A for B in cls)), None)
        out.append(Check(f"{name} is maximal elementary abelian", idx is not None, "", None if idx is not None else _sub_w(A)))
        hit.append(idx)
        out.append(_equal(f"N_S({name}) = {nname}", gt.normalizer(A, within=S).named(f"N_S({name})"), named[nname]))
    out.append(Check("T, U, V, W, X lie in distinct classes", None not in hit and len(set(hit)) == 5,
                     f"class indices {hit}"))
    return out


def _check_z_series_p2(ctx: Context) -> list[Check]:
    up = ctx.upper()
    q, named = ctx.q, ctx.named
    out = []
    for i, name, e in ((1, "Z(S)", 1), (2, "Z2(S)", 2), (3, "Z3(S)", 4)):
        Zi = up[i].named(f"upper Z{i}") if i < len(up) else ctx.S
        out.append(_equal(f"{name} is the listed root product", Zi, named[name]))
        out.append(_value(f"|{name}| = q^{e}", Zi.order, q**e))
    return out


def _check_q_facts_p2(ctx: Context) -> list[Check]:
    S, named, q = ctx.S, ctx.named, ctx.q
    up = ctx.upper()
    Z1, Z2, Z3 = up[1], up[2], up[3]
    Q1 = gt.centralizer_mod(Z3, Z1, within=S).named("C_S(Z3/Z)")
    Q2 = gt.centralizer(Z2, within=S).named("C_S(Z2)")
    out = [
        _equal("C_S(Z3(S)/Z(S)) = Q1", Q1, named["Q1"]),
        _equal("C_S(Z2(S)) = Q2", Q2, named["Q2"]),
        _value("|Q1|", Q1.order, q**5),
        _value("|Q2|", Q2.order, q**5),
        Check("Q1, Q2 normal in S", gt.is_normal(Q1, S) and gt.is_normal(Q2, S)),
    ]
    P1, C1 = gt.frattini(Q1).named("Phi(Q1)"), gt.center(Q1).named("Z(Q1)")
    P2, C2 = gt.frattini(Q2).named("Phi(Q2)"), gt.center(Q2).named("Z(Q2)")
    out += [
        _equal("Phi(Q1) = Z(Q1)", P1, C1),
        _equal("Z(Q1) = Z(S)", C1, Z1.named("Z(S)")),
        _equal("Phi(Q2) = Z2(S)", P2, Z2.named("Z2(S)")),
        _equal("Z2(S) = Z(Q2)", Z2.named("Z2(S)"), C2),
    ]
    return out


def _sl3sub_checks(ctx: Context, label: str, roots, entry) -> list[Check]:
    """``x_r1(t1) x_r2(t2) x_r3(t3) -> [[1,0,0],[t1,1,0],[t3, entry(t2), 1]]``."""
    q = ctx.q
    t1, t2, t3 = _field_grid(q, 3)
    reps = ctx.word((roots[0], t1), (roots[1], t2), (roots[2], t3))
    mats = _unitri(t1, entry(t2), t3)
    return _hom_checks(label, ctx, reps, mats)


def _check_sl3sub(ctx: Context) -> list[Check]:
    named, q = ctx.named, ctx.q
    X = named["X1"].named("X")
    out = [
        _value("|X|", X.order, q**3),
        Check("X <= Q1", X <= named["Q1"]),
    ]
    ZX, DX, PX = gt.center(X), gt.derived(X), gt.frattini(X)
    out.append(Check("X has shape q^(1+2)", ZX == DX == PX and ZX.order == q,
                     f"|Z(X)|={ZX.order} |X'|={DX.order} |Phi(X)|={PX.order}"))
    out += _sl3sub_checks(ctx, "theta", ("3a+b", "b", "3a+2b"), lambda s: s)
    return out


def _check_sl3quo(ctx: Context) -> list[Check]:
    t, S, named, q = ctx.table, ctx.S, ctx.named, ctx.q
    F = t.F
    out = []
    t1, t2, t3 = _field_grid(q, 3)
    specs = (
        ("theta1", "Q1", "Z(Q1)", (("b", t1), ("a", t2), ("3a+b", t3)), _unitri(t1, F.pow(t2, 3), t3)),
        ("theta2", "Q2", "Z(Q2)", (("a", t1), ("b", t2), ("a+b", t3)), _unitri(t1, t2, t3)),
    )
    for label, qname, zname, letters, mats in specs:
        Z = gt.center(named[qname]).named(zname)
        out.append(_equal(f"{zname} is the listed root product", Z, named[zname]))
        out.append(Check(f"{zname} normal in S", gt.is_normal(Z, S)))
        # coset label: least element of gZ
        lab = np.min(t.mul(S.elements[:, None], Z.elements[None, :]), axis=1)
        coset_of = lab.__getitem__
        reps = ctx.word(*letters)
        # every element of S lies in exactly one represented coset
        covered = np.isin(lab, coset_of(reps))
        out.append(_all(f"{label}: representatives cover S/{zname}", covered, t, S.elements,
                        "coset of each element is represented"))
        # representatives moved by Z(Q_i) give the same matrix
        moved = t.mul(reps[:, None], Z.elements[None, :])
        same = coset_of(moved) == coset_of(reps)[:, None]
        out.append(_all(f"{label}: constant on cosets of {zname}", same, t, moved, "rz in the coset of r"))
        out += _hom_checks(label, ctx, reps, mats, coset_of=coset_of)
    return out


def _commutator_closure(t: GroupTable, xs, ys) -> Subgroup:
    comms = np.unique(t.comm(np.asarray(xs)[:, None], np.asarray(ys)[None, :]).ravel())
    return gt.closure(t, comms)


def _check_pstructure(ctx: Context) -> list[Check]:
    t, S, named, q = ctx.table, ctx.S, ctx.named, ctx.q
    Q = {1: named["Q1"], 2: named["Q2"]}
    ZQ = {i: gt.center(Q[i]).named(f"Z(Q{i})") for i in Q}
    PQ = {i: gt.frattini(Q[i]).named(f"Phi(Q{i})") for i in Q}
    ZS = ctx.center().named("Z(S)")
    I = gt.intersection(Q[1], Q[2]).named("Q1&Q2")
    out = []
    # (i)
    out.append(_equal("(i) Q1 & Q2 = Z(Q1)Z(Q2)", I, gt.join(ZQ[1], ZQ[2], tag="Z(Q1)Z(Q2)")))
    out.append(_value("(i) |Q1 & Q2|", I.order, q**4))
    A = gt.max_rank_elementary_abelians(S)
    out.append(Check("(i) Q1 & Q2 in A(S)", any(B == I for B in A), f"|A(S)| = {len(A)}, rank {A[0].log_order}",
                     None if any(B == I for B in A) else _sub_w(I)))
    # (ii)
    out.append(_value("(ii) nilpotency class", len(ctx.upper()) - 1, 3))
    # (iii)
    for i in Q:
        out.append(_equal(f"(iii) C_S(Z(Q{i})) = Q{i}", gt.centralizer(ZQ[i], within=S).named("C_S(Z(Qi))"), Q[i]))
        out.append(_value(f"(iii) |Z(Q{i})|", ZQ[i].order, q**3))
        out.append(_value(f"(iii) |Phi(Q{i})|", PQ[i].order, q))
        out.append(_equal(f"(iii) Z(Q{i}) is the listed root product", ZQ[i], named[f"Z(Q{i})"]))
        out.append(_equal(f"(iii) Phi(Q{i}) is the listed root product", PQ[i], named[f"Phi(Q{i})"]))
    out.append(_equal("(iii) Z(Q1) & Z(Q2) = Z(S)", gt.intersection(ZQ[1], ZQ[2]).named("Z(Q1)&Z(Q2)"), ZS))
    out.append(_value("(iii) Phi(Q1) & Phi(Q2) = 1", gt.intersection(PQ[1], PQ[2]).order, 1))
    out.append(_equal("(iii) Phi(Q1)Phi(Q2) = Z(S)", gt.join(PQ[1], PQ[2], tag="Phi(Q1)Phi(Q2)"), ZS))
    out.append(_value("(iii) |Z(S)|", ZS.order, q**2))
    out.append(_equal("(iii) Z(S) is the listed root product", ZS, named["Z(S)"]))
    # (iv)
    for i in Q:
        C = gt.commutator_subgroup(Q[i], ZQ[3 - i], tag=f"[Q{i},Z(Q{3 - i})]")
        out.append(_equal(f"(iv) [Q{i}, Z(Q{3 - i})] = Phi(Q{i})", C, PQ[i]))
    # (v)
    for i in Q:
        outside = S.elements[~Q[i].mask]
        bad_a = bad_b = None
        for x in outside:
            if bad_a is None:
                K = gt.join(_commutator_closure(t, [x], Q[i].elements), ZQ[i])
                if K != I:
                    bad_a = int(x)
            if bad_b is None:
                K = gt.join(_commutator_closure(t, [x], ZQ[i].elements), PQ[i])
                if K != ZS:
                    bad_b = int(x)
        n = outside.size
        out.append(Check(f"(v) [x,Q{i}]Z(Q{i}) = Q1 & Q2 for x outside Q{i}", bad_a is None, f"{n} elements",
                         None if bad_a is None else _elt_w(t, bad_a)))
        out.append(Check(f"(v) [x,Z(Q{i})]Phi(Q{i}) = Z(S) for x outside Q{i}", bad_b is None, f"{n} elements",
                         None if bad_b is None else _elt_w(t, bad_b)))
    # (vi)
    for i in Q:
        out.append(_value(f"(vi) exponent of Q{i}", Q[i].exponent, 3))
    out.append(_value("(vi) exponent of S", S.exponent, 9))
    out.append(_equal("(vi) Omega(S) = S", gt.omega(S).named("Omega(S)"), S))
    out.append(_equal("(vi) Agemo(S) = Z(S)", gt.agemo(S).named("Agemo(S)"), ZS))
    # (vii)
    threes = S.elements[S.orders == 3]
    inside = Q[1].mask[threes] | Q[2].mask[threes]
    out.append(_all("(vii) order-3 elements lie in Q1 u Q2", inside, t, threes, "membership"))
    # (viii)
    x = Q[1].elements[~Q[2].mask[Q[1].elements]]
    y = Q[2].elements[~Q[1].mask[Q[2].elements]]
    X, Y = x[:, None], y[None, :]
    yxx = t.comm(t.comm(Y, X), X)
    xyy = t.comm(t.comm(X, Y), Y)
    good = (yxx != 0) & (xyy != 0)
    if good.all():
        out.append(Check("(viii) [y,x,x] != 1 != [x,y,y]", True, f"{good.size} pairs"))
    else:
        i, j = np.argwhere(~good)[0]
        out.append(Check("(viii) [y,x,x] != 1 != [x,y,y]", False, f"{int((~good).sum())} pairs fail",
                         {"x": _elt_w(t, x[i]), "y": _elt_w(t, y[j])}))
    return out


def _check_exp3(ctx: Context) -> list[Check]:
    """An exponent-3 subgroup outside both Q_i would contain some x outside Q1
    and some y outside Q2 of order 3; so it suffices that every such ``<x, y>``
    has exponent 9."""
    t, S, named = ctx.table, ctx.S, ctx.named
    Q1, Q2 = named["Q1"], named["Q2"]
    threes = S.elements[S.orders == 3]
    xs = threes[~Q1.mask[threes]]
    ys = threes[~Q2.mask[threes]]
    orders = t.all_orders()[t.mul(xs[:, None], ys[None, :])]
    bad = np.argwhere(orders <= 3)
    # fall back to the full closure for pairs whose product has order 3
    fails = []
    for i, j in bad:
        R = gt.closure(t, [int(xs[i]), int(ys[j])])
        if R.exponent <= 3:
            fails.append((int(xs[i]), int(ys[j])))
            break
    out = [Check("every <x, y> with x outside Q1, y outside Q2 of order 3 has exponent 9", not fails,
                 f"{xs.size} x {ys.size} pairs, {len(bad)} needed a closure",
                 None if not fails else {"x": _elt_w(t, fails[0][0]), "y": _elt_w(t, fails[0][1])})]
    out.append(_value("Q1 has exponent 3", Q1.exponent, 3))
    out.append(_value("Q2 has exponent 3", Q2.exponent, 3))
    return out


def _check_swapping_core(ctx: Context) -> list[Check]:
    S, named, q = ctx.S, ctx.named, ctx.q
    M = gt.maximal_subgroups(S)
    exp3 = [H for H in M if H.exponent == 3]
    want = sorted([named["Q1"].key, named["Q2"].key])
    d = gt.frattini_rank(S)
    p = ctx.p
    out = [
        _value(f"maximal subgroups of S (rank of S/Phi(S) is {d})", len(M), (p**d - 1) // (p - 1)),
        _value("order q^5 subgroups are the maximal ones", all(H.order == q**5 for H in M), True),
        Check("exponent-3 maximal subgroups are exactly Q1 and Q2", sorted(H.key for H in exp3) == want,
              f"{len(exp3)} of {len(M)} have exponent 3",
              None if sorted(H.key for H in exp3) == want else {"found": [_sub_w(H) for H in exp3]}),
    ]
    return out


def _check_qicent(ctx: Context) -> list[Check]:
    t, named, q = ctx.table, ctx.named, ctx.q
    out = []
    for i in (1, 2):
        Q = named[f"Q{i}"]
        Z = gt.center(Q)
        xs = Q.elements[~Z.mask[Q.elements]]
        cents = {}
        sizes = []
        for x in xs:
            C = gt.centralizer_of_element(t, x, within=Q)
            sizes.append(C.order)
            cents.setdefault(C.key, C)
        out.append(_all(f"|C_Q{i}(x)| = q^4", np.array(sizes) == q**4, t, xs, f"x in Q{i} - Z(Q{i})"))
        A = gt.max_rank_elementary_abelians(Q)
        same = sorted(cents) == sorted(B.key for B in A)
        out.append(Check(f"A(Q{i}) = {{C_Q{i}(x)}}", same, f"{len(cents)} centralizers, |A(Q{i})| = {len(A)}",
                         None if same else {"centralizers": len(cents), "A": [_sub_w(B) for B in A[:4]]}))
    return out


def _check_q15iden(ctx: Context) -> list[Check]:
    t, named, q = ctx.table, ctx.named, ctx.q
    F = t.F
    X1, X2, Q1 = named["X1"], named["X2"], named["Q1"]
    ZS = ctx.center().named("Z(S)")
    out = [
        _value("|X1|", X1.order, q**3),
        _value("|X2|", X2.order, q**3),
    ]
    out += _sl3sub_checks(ctx, "theta1", ("3a+b", "b", "3a+2b"), lambda s: s)
    out += _sl3sub_checks(ctx, "theta2", ("2a+b", "a+b", "3a+2b"), lambda s: F.scale(3, s))
    c = t.comm(X1.elements[:, None], X2.elements[None, :])
    out.append(_all("[X1, X2] = 1", c == 0, t, np.broadcast_to(X1.elements[:, None], c.shape), "commuting pairs"))
    out.append(_equal("X1 & X2 = Z(S)", gt.intersection(X1, X2).named("X1&X2"), ZS))
    out.append(_equal("X1 X2 = Q1", gt.join(X1, X2, tag="X1X2"), Q1))
    out.append(_equal("Z(X1) = Z(S)", gt.center(X1).named("Z(X1)"), ZS))
    out.append(_equal("Z(X2) = Z(S)", gt.center(X2).named("Z(X2)"), ZS))
    return out


def _check_5conj(ctx: Context) -> list[Check]:
    t, q = ctx.table, ctx.q
    F = t.F
    up = ctx.upper()
    Z2, Z3 = up[2], up[3]
    t1, t2, t3 = _field_grid(q, 3)
    keep = t1 != 0
    t1, t2, t3 = t1[keep], t2[keep], t3[keep]
    x = ctx.word(("2a+b", t1), ("3a+b", t2), ("3a+2b", t3))
    diff = Z3.elements[~Z2.mask[Z3.elements]]
    out = [Check("x_{2a+b}(t1)x_{3a+b}(t2)x_{3a+2b}(t3), t1 != 0, is Z3(S) - Z2(S)",
                 np.array_equal(np.sort(x), diff), f"{x.size} parametrized, {diff.size} in Z3 - Z2")]
    inv3 = F.pow(F.from_int(3).index, -1)
    target = ctx.root_elt("2a+b", t1)
    gen = t2 != 0
    ia, ib = np.flatnonzero(gen), np.flatnonzero(~gen)
    g_a = ctx.word(("b", F.mul(t3[ia], F.pow(t2[ia], -1))),
                   ("a", F.mul(inv3, F.mul(t2[ia], F.pow(t1[ia], -1)))))
    g_b = ctx.root_elt("a+b", F.mul(inv3, F.mul(t3[ib], F.pow(t1[ib], -1))))
    ok_a = t.conj(x[ia], g_a) == target[ia]
    ok_b = t.conj(x[ib], g_b) == target[ib]
    out.append(_all("t2 != 0: x^g = x_{2a+b}(t1) with g = x_b(t3/t2) x_a(t2/(3 t1))", ok_a, t, x[ia], "conjugations"))
    out.append(_all("t2 = 0: x^g = x_{2a+b}(t1) with g = x_{a+b}(t3/(3 t1))", ok_b, t, x[ib], "conjugations"))
    return out


def _check_series_p5(ctx: Context) -> list[Check]:
    S, named, q = ctx.S, ctx.named, ctx.q
    up, low = ctx.upper(), ctx.lower()
    out = [_value("upper central series orders", [H.order for H in up], [1, q, q**2, q**3, q**4, q**6])]
    for i, name in ((1, "Z(S)"), (2, "Z2(S)"), (3, "Z3(S)"), (4, "Z4(S)")):
        if i < len(up):
            out.append(_equal(f"{name} is the listed root product", up[i].named(f"upper Z{i}"), named[name]))
    out.append(_value("lower central series orders", [H.order for H in low], [q**6, q**4, q**3, q**2, q, 1]))
    for k in range(1, min(len(low), 5)):
        j = 5 - k
        if j < len(up):
            out.append(_equal(f"gamma{k + 1}(S) = Z{j}(S)", low[k].named(f"gamma{k + 1}"), up[j].named(f"Z{j}")))
    Z1, Z2, Z3 = up[1], up[2], up[3]
    Q1 = gt.centralizer_mod(Z3, Z1, within=S).named("C_S(Z3/Z)")
    Q2 = gt.centralizer(Z2, within=S).named("C_S(Z2)")
    out += [
        _equal("C_S(Z3(S)/Z(S)) = Q1", Q1, named["Q1"]),
        _equal("C_S(Z2(S)) = Q2", Q2, named["Q2"]),
        _value("|Q1|", Q1.order, q**5),
        _value("|Q2|", Q2.order, q**5),
    ]
    P1, C1 = gt.frattini(Q1).named("Phi(Q1)"), gt.center(Q1).named("Z(Q1)")
    out += [
        _equal("Phi(Q1) = Z(Q1)", P1, C1),
        _equal("Z(Q1) = Z(S)", C1, Z1.named("Z(S)")),
        _equal("Phi(Q2) = Z3(S)", gt.frattini(Q2).named("Phi(Q2)"), Z3.named("Z3(S)")),
    ]
    return out


def _check_q1unique(ctx: Context) -> list[Check]:
    S, named, q = ctx.S, ctx.named, ctx.q
    X, J = named["Q1"].named("X"), ctx.thompson()
    Sd, ZS = named["S'"], named["Z(S)"]
    out = [
        _equal("J(S) = X_b X_{a+b} X_{2a+b}", J, named["Q2"]),
        _equal("S' is the listed root product", gt.derived(S).named("S'"), Sd),
        _equal("Z(S) is the listed root product", ctx.center().named("Z(S)"), ZS),
        _value("|X|", X.order, q**5),
        _equal("X' = Z(S)", gt.derived(X).named("X'"), ZS),
        _equal("X & J(S) = S'", gt.intersection(X, J).named("X&J"), Sd),
        _equal("Z(X) = Z(S)", gt.center(X).named("Z(X)"), ZS),
    ]
    if q == ctx.p:
        # subgroups of order > q^4 are S and its maximal subgroups
        props = []
        for M in gt.maximal_subgroups(S):
            if gt.derived(M) == ZS and gt.intersection(M, J) == Sd:
                props.append(M)
        only = len(props) == 1 and props[0] == X
        out.append(Check("X is the only subgroup of order > q^4 with these properties", only,
                         f"{len(props)} maximal subgroups qualify; S' != Z(S) rules out S",
                         None if only else {"found": [_sub_w(M) for M in props]}))
    return out


def _check_q5cent(ctx: Context) -> list[Check]:
    t, S, named, q = ctx.table, ctx.S, ctx.named, ctx.q
    Q2, Sd, ZS = named["Q2"], named["S'"], named["Z(S)"]
    xs = Sd.elements[~ZS.mask[Sd.elements]]
    cents: dict[bytes, tuple[Subgroup, int]] = {}
    for x in xs:
        C = gt.centralizer_of_element(t, x, within=S)
        cents.setdefault(C.key, (C, int(x)))
    out = [Check("distinct centralizers", True, f"{len(cents)} for {xs.size} elements")]
    fails: dict[str, int] = {}

    def need(name, cond, x):
        if not cond and name not in fails:
            fails[name] = x

    for C, x in cents.values():
        need("Q2 <= C_S(x)", Q2 <= C, x)
        need("|C_S(x)| = q^5", C.order == q**5, x)
        Z = gt.center(C)
        need("Z(C_S(x)) = C_Q2(C_S(x))", Z == gt.centralizer(C, within=Q2), x)
        need("|Z(C_S(x))| = q^2", Z.order == q**2, x)
        D = gt.derived(C)
        need("C_S(x)' = [Q2, C_S(x)]", D == gt.commutator_subgroup(Q2, C), x)
        need("|C_S(x)'| = q^2", D.order == q**2, x)
    for name in ("Q2 <= C_S(x)", "|C_S(x)| = q^5", "Z(C_S(x)) = C_Q2(C_S(x))", "|Z(C_S(x))| = q^2",
                 "C_S(x)' = [Q2, C_S(x)]", "|C_S(x)'| = q^2"):
        out.append(Check(name, name not in fails, f"x in S' - Z(S), {len(cents)} centralizers",
                         _elt_w(t, fails[name]) if name in fails else None))
    return out


def _check_q4cent(ctx: Context) -> list[Check]:
    """Literal statement over all order-p elements outside Q2.

    For p >= 5 the group has exponent p, so order-p elements outside both
    Q1 and Q2 exist and cannot have their centralizer inside Q1.  The
    conclusions restricted to ``Q1 - Q2`` are reported alongside as an
    informational check.
    """
    t, S, named, q, p = ctx.table, ctx.S, ctx.named, ctx.q, ctx.p
    Q1, Q2, ZS = named["Q1"], named["Q2"], named["Z(S)"]
    n = t.n
    cand = S.elements[(~Q2.mask) & (t.all_orders() == p)]
    reps = ctx.class_reps(cand)
    names = ("C_S(x) <= Q1", "|C_S(x)| = q^4", "|C_S(x) & Q2| = q^2", "m_p(C_S(x)) <= 3n",
             "C_S(x)' = Z(S)", "|Z(C_S(x))| = q^2")
    verdicts: dict[bytes, tuple] = {}
    fails: dict[str, int] = {}
    restricted: dict[str, int] = {}
    for x in reps:
        C = gt.centralizer_of_element(t, x, within=S)
        if C.key not in verdicts:
            verdicts[C.key] = (
                C <= Q1,
                C.order == q**4,
                gt.intersection(C, Q2).order == q**2,
                gt.p_rank(C) <= 3 * n,
                gt.derived(C) == ZS,
                gt.center(C).order == q**2,
            )
        for name, ok in zip(names, verdicts[C.key]):
            if not ok:
                fails.setdefault(name, int(x))
                if Q1.mask[x]:
                    restricted.setdefault(name, int(x))
    inside = int(Q1.mask[reps].sum())
    out = [Check("S-classes scanned", True, f"{len(reps)} classes of order-p elements outside Q2 "
                                            f"({inside} inside Q1), {len(verdicts)} distinct centralizers")]
    for name in names:
        out.append(Check(name, name not in fails, "", _elt_w(t, fails[name]) if name in fails else None))
    out.append(Check("restricted to x in Q1 - Q2: all conclusions hold", not restricted,
                     f"{inside} classes", _elt_w(t, next(iter(restricted.values()))) if restricted else None,
                     informational=True))
    return out


def _check_q2omega(ctx: Context) -> list[Check]:
    """The trichotomy for cyclic ``F = <x>``, ``x`` outside ``Q2``.

    ``Q2`` is abelian and normal, so ``y -> [y, x]`` is a homomorphism of
    ``Q2``; its image is ``[Q2, F]`` and its kernel is ``C_Q2(F)``.
    """
    t, S, named, q, p = ctx.table, ctx.S, ctx.named, ctx.q, ctx.p
    Q2, Sd, ZS = named["Q2"], named["S'"], named["Z(S)"]
    out = [Check("Q2 is abelian", Q2.is_abelian)]
    QS = _commutator_closure(t, Q2.elements, S.gens)
    out.append(_equal("[Q2, S] = S'", QS.named("[Q2,S]"), Sd))
    out.append(_equal("C_Q2(S) = Z(S)", gt.centralizer(S, within=Q2).named("C_Q2(S)"), ZS))
    reps = ctx.class_reps(S.elements[~Q2.mask])
    counts = {"i": 0, "ii": 0, "iii": 0}
    bad = None
    for x in reps:
        c = t.comm(Q2.elements, int(x))
        img = np.unique(c)
        ker = Q2.elements[c == 0]
        if np.array_equal(img, Sd.elements) and np.array_equal(ker, ZS.elements):
            counts["i"] += 1
            continue
        if p == 2:
            if img.size == q * q and np.array_equal(img, ker):
                counts["ii"] += 1
                continue
        else:
            prod = np.unique(t.mul(img[:, None], ker[None, :]).ravel())
            meet = np.intersect1d(img, ker)
            if (img.size == q * q and ker.size == q * q and np.array_equal(prod, Sd.elements)
                    and np.array_equal(meet, ZS.elements)):
                counts["iii"] += 1
                continue
        bad = int(x)
        break
    detail = f"{reps.size} S-classes outside Q2; cases (i) {counts['i']}, (ii) {counts['ii']}, (iii) {counts['iii']}"
    out.append(Check("each cyclic F outside Q2 meets a case of the trichotomy", bad is None, detail,
                     None if bad is None else _elt_w(t, bad)))
    return out


def _check_burnside(ctx: Context) -> list[Check]:
    S = ctx.S
    t, p = ctx.table, ctx.p
    A = autom.aut_group(S)
    if isinstance(A, autom.Undecided):
        return [Check("Aut(S) computed", False, A.reason, {"reason": A.reason})]
    Phi = gt.frattini(S)
    els = S.elements
    pos_inv = np.searchsorted(els, t.inv(els))
    # phi acts trivially on S/Phi(S) iff phi(x) x^-1 lies in Phi(S)
    K = [k for k in range(A.order) if np.all(Phi.mask[t.mul(els[A.perms[k]], els[pos_inv])])]
    Kset = set(K)
    m, e = len(K), 0
    while m % p == 0:
        m //= p
        e += 1
    closed = all(A.mul(a, b) in Kset for a in K for b in K[:8])
    normal = all(A.conj(k, g) in Kset for k in K for g in A.generators)
    return [
        Check("Aut(S) computed", True, f"|Aut(S)| = {A.order}"),
        Check("C_Aut(S)(S/Phi(S)) is a p-group", m == 1, f"order {len(K)}", None if m == 1 else {"order": len(K)}),
        Check("closed under composition", closed),
        Check("normal in Aut(S)", normal),
    ]


# registry ----------------------------------------------------------------------

def _p_is(p_req: int, q_min: int = 0, q_max: int | None = None):
    def applies(p: int, q: int) -> str | None:
        if p != p_req:
            return f"needs p = {p_req}"
        if q < q_min:
            return f"stated for q >= {q_min}"
        if q_max is not None and q > q_max:
            return f"instantiated only for q <= {q_max}"
        return None
    return applies


def _p_at_least(p_min: int):
    def applies(p: int, q: int) -> str | None:
        return None if p >= p_min else f"needs p >= {p_min}"
    return applies


def _always(p: int, q: int) -> str | None:
    return None


def _q_at_most(q_max: int):
    def applies(p: int, q: int) -> str | None:
        return None if q <= q_max else f"instantiated only for q <= {q_max}"
    return applies


@dataclass(frozen=True)
class Lemma:
    id: str
    families: tuple[str, ...]
    statement: str
    applies: Callable[[int, int], str | None]
    run: Callable[[Context], list[Check]]
    support: tuple[int, ...] = ()


REGISTRY: dict[str, Lemma] = {}


def _register(*lemmas: Lemma):
    for lem in lemmas:
        REGISTRY[lem.id] = lem


_register(
    Lemma("G2Exponent", ("G2",), "exponent 8 for p = 2, p^2 for p in {3, 5}, p for p >= 7",
          _always, _check_g2_exponent, (2, 3, 4, 5, 7, 8, 9)),
    Lemma("PSUExponent", ("SU4",), "exponent 4 for p = 2, 9 for p = 3, p for p >= 5",
          _always, _check_psu_exponent, (2, 3, 4, 5)),
    Lemma("thomas", ("G2",), "involution classes, their centralizers, maximal elementary abelians",
          _p_is(2, q_max=4), _check_thomas, (2, 4)),
    Lemma("Z-series", ("G2",), "Z(S), Z2(S), Z3(S) of orders q, q^2, q^4 (q > 2)",
          _p_is(2, q_min=4), _check_z_series_p2, (4,)),
    Lemma("Q-facts", ("G2",), "Q1, Q2 as centralizers; Phi(Q1) = Z(Q1) = Z(S), Phi(Q2) = Z2(S) = Z(Q2) (q > 2)",
          _p_is(2, q_min=4), _check_q_facts_p2, (4,)),
    Lemma("SL3Sub", ("G2",), "X_b X_{3a+b} X_{3a+2b} embeds as a unitriangular 3x3 group",
          _p_is(3, q_max=9), _check_sl3sub, (3,)),
    Lemma("SL3Quo", ("G2",), "S/Z(Q_i) embeds as a unitriangular 3x3 group",
          _p_is(3, q_max=3), _check_sl3quo, (3,)),
    Lemma("pStructure", ("G2",), "structure of S, Q1, Q2 for p = 3, items (i) to (viii)",
          _p_is(3, q_max=3), _check_pstructure, (3,)),
    Lemma("exp3", ("G2",), "an exponent-3 subgroup lies in Q1 or Q2",
          _p_is(3, q_max=3), _check_exp3, (3,)),
    Lemma("swapping-core", ("G2",), "Q1, Q2 are the only order-q^5 subgroups of exponent 3",
          _p_is(3, q_max=3), _check_swapping_core, (3,)),
    Lemma("QiCent", ("G2",), "|C_Qi(x)| = q^4 off Z(Q_i), and these are A(Q_i)",
          _p_is(3, q_max=3), _check_qicent, (3,)),
    Lemma("Q15Iden", ("G2",), "Q1 is the central product of two unitriangular 3x3 groups",
          _p_at_least(5), _check_q15iden, (5, 7)),
    Lemma("5conj", ("G2",), "explicit conjugators from Z3(S) - Z2(S) into X_{2a+b}",
          _p_at_least(5), _check_5conj, (5, 7)),
    Lemma("series", ("G2",), "upper and lower central series coincide; Q1, Q2 as centralizers",
          _p_at_least(5), _check_series_p5, (5, 7)),
    Lemma("Q1Unique", ("SU4",), "X = X_a X_{a+b} X_{2a+b}: X' = Z(S), X & J(S) = S', unique at q = p",
          _always, _check_q1unique, (3, 4, 5)),
    Lemma("q^5cent", ("SU4",), "centralizers of x in S' - Z(S)",
          _always, _check_q5cent, (3, 4, 5)),
    Lemma("q^4cent", ("SU4",), "centralizers of order-p elements outside Q2",
          _always, _check_q4cent, (3, 4, 5)),
    Lemma("Q_2Omega", ("SU4",), "commutator/centralizer trichotomy on Q2 for cyclic F outside Q2",
          _always, _check_q2omega, (3, 4, 5)),
    Lemma("burnside-sanity", ("G2", "SU4"), "C_Aut(S)(S/Phi(S)) is a normal p-subgroup of Aut(S)",
          _q_at_most(2), _check_burnside, (2,)),
)


def lemma_ids(family: str | None = None) -> list[str]:
    from .chevalley import _family_key

    if family is None:
        return list(REGISTRY)
    fam = _family_key(family)
    return [k for k, lem in REGISTRY.items() if fam in lem.families]


def verify(lemma_id: str, family: str, q: int, modulus=None, table: GroupTable | None = None) -> LemmaReport:
    """Run one registry entry on one instance."""
    from .chevalley import _family_key

    if lemma_id not in REGISTRY:
        raise UsageError(f"unknown lemma id {lemma_id!r}; known: {', '.join(REGISTRY)}")
    lem = REGISTRY[lemma_id]
    fam = _family_key(family)
    start = time.perf_counter()
    if fam not in lem.families:
        return LemmaReport(lemma_id, fam, q, "skipped", reason=f"stated for {'/'.join(lem.families)} only")
    t = table if table is not None else build_group(fam, q, modulus=modulus)
    reason = lem.applies(t.p, t.q)
    if reason is None and not t.enumerable:
        reason = f"|S| = {t.order} above the enumeration cap"
    if reason is not None:
        return LemmaReport(lemma_id, fam, t.q, "skipped", reason=reason,
                           wall_time=time.perf_counter() - start)
    ctx = Context.of(t)
    checks = lem.run(ctx)
    verdict = "pass" if all(c.ok or c.informational for c in checks) else "fail"
    inst = f"{fam} q={t.q} (p={t.p}, n={t.n}); exhaustive scans over S of order {t.order}"
    return LemmaReport(lemma_id, fam, t.q, verdict, checks, instantiation=inst,
                       wall_time=time.perf_counter() - start)


def verify_all(family: str, q: int, modulus=None) -> list[LemmaReport]:
    return [verify(k, family, q, modulus=modulus) for k in lemma_ids(family)]
