"""Normal-form elements of the Sylow p-subgroups of G2(q) and PSU4(q).

An element is a product ``x_r1(t1) x_r2(t2) ...`` over the positive roots in
a fixed order.  Products are computed by collection against the Chevalley
commutator table.  Control flow of the collector never looks at the field
values, so the same code multiplies one pair or a million pairs at once: the
values are numpy arrays of field-element indices.

Elements are numbered by a mixed-radix integer over their root coordinates
(first root least significant), so index 0 is the identity.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, DomainError, ResourceError, UsageError
from .gf import GF, FieldParams, Fq, field, prime_power, quadratic_extension

G2_ROOTS = ("a", "b", "a+b", "2a+b", "3a+b", "3a+2b")
SU4_ROOTS = ("a", "b", "a+b", "2a+b")

ENUMERATION_CAP = 531441
CAYLEY_CAP = 729
CHUNK = 1 << 15


@dataclass(frozen=True)
class Term:
    """One factor ``x_target(c(t, u))`` of a commutator ``[x_i(t), x_j(u)]``.

    ``kind`` is ``"mono"`` for ``coeff * t**t_exp * u**u_exp``, ``"norm"`` for
    ``coeff * N(t) * u`` and ``"trace"`` for ``coeff * Tr(t * u**q)``.
    """

    target: int
    coeff: int
    kind: str = "mono"
    t_exp: int = 1
    u_exp: int = 1

    def describe(self, roots) -> str:
        if self.kind == "norm":
            body = "N(t)u"
        elif self.kind == "trace":
            body = "Tr(t u^q)"
        else:
            t = "" if self.t_exp == 0 else ("t" if self.t_exp == 1 else f"t^{self.t_exp}")
            u = "" if self.u_exp == 0 else ("u" if self.u_exp == 1 else f"u^{self.u_exp}")
            body = t + u
        c = {1: "", -1: "-"}.get(self.coeff, str(self.coeff))
        return f"x_{roots[self.target]}({c}{body})"


@dataclass(frozen=True)
class RootDatum:
    family: str
    roots: tuple[str, ...]
    # pair (i, j) with i < j  ->  [x_i(t), x_j(u)] as a word of Terms
    table: dict = dc_field(hash=False)
    # True where the coordinate ranges over GF(q^2) (SU4 roots a, a+b)
    wide: tuple[bool, ...] = ()

    def __post_init__(self):
        for (i, j), terms in self.table.items():
            if not i < j:
                raise ConfigurationError(f"table entry {(i, j)} is not in root order")
            for term in terms:
                if term.target <= j:
                    raise ConfigurationError(
                        f"commutator of {self.roots[i]}, {self.roots[j]} lands in an earlier root"
                    )

    def root_index(self, root) -> int:
        if isinstance(root, (int, np.integer)):
            if not 0 <= root < len(self.roots):
                raise UsageError(f"root index {root} out of range")
            return int(root)
        key = str(root).replace("alpha", "a").replace("beta", "b").replace(" ", "")
        key = key.replace("α", "a").replace("β", "b")
        try:
            return self.roots.index(key)
        except ValueError:
            raise UsageError(f"unknown root {root!r} for {self.family}") from None

    def to_json(self) -> str:
        rows = []
        for (i, j), terms in sorted(self.table.items()):
            rows.append({
                "pair": [self.roots[i], self.roots[j]],
                "word": [t.describe(self.roots) for t in terms],
                "terms": [
                    {"target": self.roots[t.target], "coeff": t.coeff, "kind": t.kind,
                     "t_exp": t.t_exp, "u_exp": t.u_exp}
                    for t in terms
                ],
            })
        return json.dumps({
            "family": self.family,
            "roots": list(self.roots),
            "wide": list(self.wide) if self.wide else [False] * len(self.roots),
            "commutator": "[x,y] = x^-1 y^-1 x y",
            "table": rows,
        }, indent=2)


def g2_datum(convention: int = 1) -> RootDatum:
    """Integer structure constants for the G2 root subgroups, before reduction mod p.

    ``convention=-1`` gives the opposite sign convention: the table obtained
    by renaming every ``x_r(t)`` as ``x_r(-t)``, so a term ``c t^i u^j``
    becomes ``-(-1)^(i+j) c t^i u^j``.  Both describe the same group.
    """
    if convention not in (1, -1):
        raise ConfigurationError(f"convention must be 1 or -1, got {convention!r}")
    a, b, ab, a2b, a3b, a3b2 = range(6)
    table = {
        (a, b): (Term(ab, -1, t_exp=1, u_exp=1), Term(a2b, -1, t_exp=2, u_exp=1),
                 Term(a3b, 1, t_exp=3, u_exp=1), Term(a3b2, -2, t_exp=3, u_exp=2)),
        (a, ab): (Term(a2b, -2, t_exp=1, u_exp=1), Term(a3b, 3, t_exp=2, u_exp=1),
                  Term(a3b2, 3, t_exp=1, u_exp=2)),
        (a, a2b): (Term(a3b, 3),),
        (b, a3b): (Term(a3b2, 1),),
        (ab, a2b): (Term(a3b2, 3),),
    }
    if convention == -1:
        table = {
            k: tuple(Term(t.target, -(-1) ** (t.t_exp + t.u_exp) * t.coeff, t.kind, t.t_exp, t.u_exp)
                     for t in terms)
            for k, terms in table.items()
        }
    return RootDatum("G2", G2_ROOTS, table, (False,) * 6)


# default signs (eps, eps', eps''); the product must be -1 for the relations
# to be consistent, see tests/test_chevalley.py::test_su4_sign_constraint
SU4_SIGNS = (1, 1, -1)


def su4_datum(signs=SU4_SIGNS, conjugate_trace: bool = True) -> RootDatum:
    """Commutator table of the unitary Sylow subgroup.

    With ``conjugate_trace=False`` the trace term is read as ``Tr(t u)``
    instead of ``Tr(t u^q)``; that variant does not define a group and is kept
    only so the inconsistency can be demonstrated.
    """
    eps, eps1, eps2 = signs
    a, b, ab, a2b = range(4)
    trace = Term(a2b, eps2, "trace") if conjugate_trace else Term(a2b, eps2, "mono_trace")
    table = {
        (a, b): (Term(ab, eps), Term(a2b, eps1, "norm")),
        (a, ab): (trace,),
    }
    return RootDatum("SU4", SU4_ROOTS, table, (True, False, True, False))


FAMILIES = {"G2": g2_datum, "SU4": su4_datum}


def _family_key(family: str) -> str:
    key = str(family).upper().replace("PSU4", "SU4").replace("U4", "SU4").replace("SSU4", "SU4")
    if key not in FAMILIES:
        raise ConfigurationError(f"unknown family {family!r}; expected g2 or su4")
    return key


class GroupTable:
    """One Sylow subgroup instance: root datum, field(s), element indexing."""

    def __init__(self, datum: RootDatum, params: FieldParams, big_params: FieldParams | None = None,
                 enumeration_cap: int = ENUMERATION_CAP):
        self.datum = datum
        self.family = datum.family
        self.params = params
        self.p, self.n, self.q = params.p, params.n, params.q
        self.enumeration_cap = enumeration_cap
        self.field = field(params)
        if datum.family == "SU4":
            self.ext = quadratic_extension(params, big_params)
            self.F: GF = self.ext.big
        else:
            self.ext = None
            self.F = self.field
        q = self.q
        self.radix = tuple(q * q if w else q for w in datum.wide)
        self.nroots = len(datum.roots)
        self.order = int(np.prod(self.radix))
        self.place = tuple(int(np.prod(self.radix[:i])) for i in range(self.nroots))
        self._cayley = None
        self._inv = None
        self._orders = None

    def __repr__(self):
        return f"GroupTable({self.family}, q={self.q})"

    @property
    def roots(self):
        return self.datum.roots

    @property
    def enumerable(self) -> bool:
        return self.order <= self.enumeration_cap

    def require_enumerable(self):
        if not self.enumerable:
            raise ResourceError(
                f"|S| = {self.order} exceeds the enumeration cap {self.enumeration_cap}"
            )

    # coordinates <-> indices -------------------------------------------------
    def decode(self, idx) -> list[np.ndarray]:
        """Root coordinates as indices into the arithmetic field ``self.F``."""
        idx = np.asarray(idx, dtype=np.int64)
        out = []
        for r in range(self.nroots):
            c = (idx // self.place[r]) % self.radix[r]
            if self.ext is not None and not self.datum.wide[r]:
                c = self.ext.embed[c]
            out.append(c)
        return out

    def encode(self, coords) -> np.ndarray:
        total = 0
        for r, c in enumerate(coords):
            c = np.asarray(c, dtype=np.int64)
            if self.ext is not None and not self.datum.wide[r]:
                c = self.ext.restrict[c]
                if np.any(c < 0):
                    raise AssertionError(f"coordinate at root {self.roots[r]} left the subfield")
            total = total + c * self.place[r]
        return np.asarray(total, dtype=np.int64)

    # collection --------------------------------------------------------------
    def _term_value(self, term: Term, t, u):
        F = self.F
        if term.kind == "mono":
            val = F.mul(F.pow(t, term.t_exp), F.pow(u, term.u_exp))
        elif term.kind == "norm":
            val = F.mul(F.mul(t, self.ext.frob[t]), u)
        elif term.kind == "trace":
            x = F.mul(t, self.ext.frob[u])
            val = F.add(x, self.ext.frob[x])
        elif term.kind == "mono_trace":
            x = F.mul(t, u)
            val = F.add(x, self.ext.frob[x])
        else:
            raise ConfigurationError(f"unknown term kind {term.kind}")
        return F.scale(term.coeff, val)

    def _collect(self, word: list) -> list:
        """Collect a word of ``(root, values)`` letters into normal form."""
        F = self.F
        table = self.datum.table
        i = 0
        while i < len(word) - 1:
            r1, v1 = word[i]
            r2, v2 = word[i + 1]
            if r1 < r2:
                i += 1
                continue
            if r1 == r2:
                word[i:i + 2] = [(r1, F.add(v1, v2))]
            else:
                # x_r1(v1) x_r2(v2) = x_r2(v2) x_r1(v1) [x_r1(v1), x_r2(v2)]
                # and [x_r1, x_r2] is the inverse of the tabulated [x_r2, x_r1]
                terms = table.get((r2, r1), ())
                correction = [(t.target, F.neg(self._term_value(t, v2, v1))) for t in reversed(terms)]
                word[i:i + 2] = [(r2, v2), (r1, v1)] + correction
            i = max(i - 1, 0)
        return word

    def _normal_form(self, word, shape) -> list[np.ndarray]:
        coords = [np.zeros(shape, dtype=np.int64) for _ in range(self.nroots)]
        for r, v in self._collect(word):
            coords[r] = np.broadcast_to(v, shape)
        return coords

    def _mul_coords(self, ca, cb, shape):
        word = [(r, np.broadcast_to(c, shape)) for r, c in enumerate(ca)]
        word += [(r, np.broadcast_to(c, shape)) for r, c in enumerate(cb)]
        return self._normal_form(word, shape)

    def _mul_collect(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        shape = a.shape
        flat_a, flat_b = a.ravel(), b.ravel()
        out = np.empty(flat_a.shape, dtype=np.int64)
        for s in range(0, max(len(flat_a), 1), CHUNK):
            sa, sb = flat_a[s:s + CHUNK], flat_b[s:s + CHUNK]
            if len(sa) == 0:
                break
            out[s:s + CHUNK] = self.encode(self._mul_coords(self.decode(sa), self.decode(sb), sa.shape))
        return out.reshape(shape)

    def _inv_collect(self, a):
        a = np.asarray(a, dtype=np.int64)
        flat = a.ravel()
        out = np.empty(flat.shape, dtype=np.int64)
        F = self.F
        for s in range(0, len(flat), CHUNK):
            part = flat[s:s + CHUNK]
            coords = self.decode(part)
            word = [(r, F.neg(c)) for r, c in reversed(list(enumerate(coords)))]
            out[s:s + CHUNK] = self.encode(self._normal_form(word, part.shape))
        return out.reshape(a.shape)

    # vectorised group operations on indices ------------------------------
    def build_cayley(self) -> np.ndarray:
        """Dense multiplication table; only for small groups."""
        if self._cayley is None:
            if self.order > CAYLEY_CAP:
                raise ResourceError(f"Cayley table for |S| = {self.order} exceeds cap {CAYLEY_CAP}")
            allx = np.arange(self.order)
            self._cayley = self._mul_collect(allx[:, None], allx[None, :]).astype(np.int32)
            self._cayley.setflags(write=False)
        return self._cayley

    @property
    def has_cayley(self) -> bool:
        return self._cayley is not None

    def mul(self, a, b) -> np.ndarray:
        if self._cayley is None and self.order <= CAYLEY_CAP:
            self.build_cayley()
        if self._cayley is not None:
            return self._cayley[np.asarray(a), np.asarray(b)].astype(np.int64)
        return self._mul_collect(a, b)

    def inv(self, a) -> np.ndarray:
        if self._inv is None and self.order <= CAYLEY_CAP:
            self._inv = self._inv_collect(np.arange(self.order))
        if self._inv is not None:
            return self._inv[np.asarray(a)]
        return self._inv_collect(a)

    def comm(self, a, b) -> np.ndarray:
        """``[a, b] = a^-1 b^-1 a b``."""
        return self.mul(self.inv(self.mul(b, a)), self.mul(a, b))

    def conj(self, a, g) -> np.ndarray:
        """``a^g = g^-1 a g``."""
        return self.mul(self.inv(g), self.mul(a, g))

    def power(self, a, k: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if k < 0:
            a, k = self.inv(a), -k
        result = np.zeros_like(a)
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def element_order(self, a) -> np.ndarray:
        """Orders of the elements ``a`` (always powers of p)."""
        a = np.asarray(a, dtype=np.int64)
        order = np.ones(a.shape, dtype=np.int64)
        cur = a.copy()
        live = cur != 0
        while np.any(live):
            order[live] *= self.p
            cur[live] = self.power(cur[live], self.p)
            live = cur != 0
        return order

    def all_orders(self) -> np.ndarray:
        """Order of every element, indexed by element index (cached)."""
        if getattr(self, "_orders", None) is None:
            self.require_enumerable()
            out = np.empty(self.order, dtype=np.int64)
            for s in range(0, self.order, CHUNK * 4):
                part = np.arange(s, min(self.order, s + CHUNK * 4))
                out[part] = self.element_order(part)
            out.setflags(write=False)
            self._orders = out
        return self._orders

    def exponent(self) -> int:
        return int(self.all_orders().max())

    # root subgroups -----------------------------------------------------
    def root_value(self, root, t) -> int:
        """Index (in the root's own coordinate range) of the parameter ``t``."""
        r = self.datum.root_index(root)
        if self.ext is None:
            return int(self.field(t).index) if not isinstance(t, int) else int(self.field.from_int(t).index)
        if isinstance(t, Fq):
            if t.field is self.ext.big:
                if self.datum.wide[r]:
                    return t.index
                sub = int(self.ext.restrict[t.index])
                if sub < 0:
                    raise DomainError(f"x_{self.roots[r]} needs a parameter fixed by t -> t^q; got {t}")
                return sub
            if t.field is self.ext.sub:
                return int(self.ext.embed[t.index]) if self.datum.wide[r] else t.index
            raise UsageError(f"parameter {t} lives in an unrelated field")
        F = self.ext.big if self.datum.wide[r] else self.ext.sub
        return int(F.from_int(t).index)

    def root_index_of(self, root, t) -> int:
        r = self.datum.root_index(root)
        return self.root_value(r, t) * self.place[r]

    def root_subgroup(self, root) -> np.ndarray:
        r = self.datum.root_index(root)
        return np.arange(self.radix[r], dtype=np.int64) * self.place[r]

    def product_of_roots(self, roots) -> np.ndarray:
        """Indices of all elements supported on the given roots (any order-closed set)."""
        idx = np.zeros(1, dtype=np.int64)
        for root in roots:
            sub = self.root_subgroup(root)
            idx = (idx[:, None] + sub[None, :]).ravel()
        return np.sort(idx)

    def root_element(self, root, t) -> GroupElement:
        return GroupElement(self, self.root_index_of(root, t))

    def identity(self) -> GroupElement:
        return GroupElement(self, 0)

    def element(self, idx) -> GroupElement:
        return GroupElement(self, int(idx))

    def from_coords(self, coords) -> GroupElement:
        """Element with the given per-root parameters (field elements or ints)."""
        if len(coords) != self.nroots:
            raise UsageError(f"expected {self.nroots} coordinates")
        idx = sum(self.root_value(r, c) * self.place[r] for r, c in enumerate(coords))
        return GroupElement(self, idx)

    def coords_of(self, idx: int) -> tuple[Fq, ...]:
        out = []
        for r in range(self.nroots):
            c = (int(idx) // self.place[r]) % self.radix[r]
            if self.ext is None:
                out.append(Fq(self.field, c))
            else:
                out.append(Fq(self.ext.big if self.datum.wide[r] else self.ext.sub, c))
        return tuple(out)

    def support(self, idx) -> np.ndarray:
        """Boolean mask (..., nroots) of nonzero coordinates."""
        idx = np.asarray(idx, dtype=np.int64)
        return np.stack([(idx // self.place[r]) % self.radix[r] != 0 for r in range(self.nroots)], axis=-1)

    # independent model ------------------------------------------------------
    @cached_property
    def matrix_oracle(self) -> MatrixOracle:
        if self.family != "SU4":
            raise ConfigurationError("no matrix model is shipped for G2")
        return MatrixOracle(self)


@dataclass(frozen=True, eq=False)
class GroupElement:
    table: GroupTable
    index: int

    @property
    def coords(self) -> tuple[Fq, ...]:
        return self.table.coords_of(self.index)

    def __mul__(self, other: GroupElement) -> GroupElement:
        if other.table is not self.table:
            raise UsageError("elements of different groups")
        return GroupElement(self.table, int(self.table.mul(self.index, other.index)))

    def inverse(self) -> GroupElement:
        return GroupElement(self.table, int(self.table.inv(self.index)))

    def __pow__(self, k: int) -> GroupElement:
        return GroupElement(self.table, int(self.table.power(self.index, k)))

    def comm(self, other: GroupElement) -> GroupElement:
        return GroupElement(self.table, int(self.table.comm(self.index, other.index)))

    def conj(self, g: GroupElement) -> GroupElement:
        return GroupElement(self.table, int(self.table.conj(self.index, g.index)))

    def order(self) -> int:
        return int(self.table.element_order(self.index))

    def is_identity(self) -> bool:
        return self.index == 0

    def __eq__(self, other):
        return isinstance(other, GroupElement) and other.table is self.table and other.index == self.index

    def __hash__(self):
        return hash((id(self.table), self.index))

    def __repr__(self):
        parts = [f"x_{r}({c!r})" for r, c in zip(self.table.roots, self.coords) if c.index]
        return " ".join(parts) if parts else "1"


# public functional interface -----------------------------------------------

_CACHE: dict = {}


def build_group(family: str, q: int, modulus=None, big_modulus=None,
                enumeration_cap: int = ENUMERATION_CAP, signs=None,
                convention: int = 1) -> GroupTable:
    """Sylow p-subgroup of ``G2(q)`` or ``PSU4(q)``; cached per configuration.

    ``signs`` overrides the unitary signs; ``convention`` selects the G2 sign
    convention (see :func:`g2_datum`).
    """
    key_family = _family_key(family)
    p, n = prime_power(q)
    params = FieldParams(p, n, tuple(modulus)) if modulus is not None else FieldParams.default(p, n)
    big = None
    if big_modulus is not None:
        big = FieldParams(p, 2 * n, tuple(big_modulus))
    signs = None if signs is None else tuple(signs)
    key = (key_family, params, big, enumeration_cap, signs, convention)
    if key not in _CACHE:
        if key_family == "SU4":
            datum = su4_datum() if signs is None else su4_datum(signs)
        else:
            datum = g2_datum(convention)
        _CACHE[key] = GroupTable(datum, params, big, enumeration_cap)
    return _CACHE[key]


# on-disk table cache ---------------------------------------------------------

CACHE_VERSION = 1


def table_fingerprint(table: GroupTable) -> dict:
    """Everything that determines the element numbering and multiplication."""
    big = table.ext.big.params if table.ext is not None else None
    return {
        "cache_version": CACHE_VERSION,
        "family": table.family,
        "p": table.p,
        "n": table.n,
        "modulus": list(table.params.modulus),
        "big_modulus": list(big.modulus) if big is not None else None,
        "datum": json.loads(table.datum.to_json()),
    }


def cache_path(table: GroupTable, cache_dir) -> Path:
    blob = json.dumps(table_fingerprint(table), sort_keys=True).encode()
    digest = hashlib.sha256(blob).hexdigest()[:16]
    return Path(cache_dir) / f"{table.family.lower()}_q{table.q}_{digest}.npz"


def save_table(table: GroupTable, cache_dir) -> Path:
    """Write element orders (and the Cayley table if built) as little-endian arrays."""
    path = cache_path(table, cache_dir)
    path.parent.mkdir(parents=True, exist_ok=True)
    meta = json.dumps(table_fingerprint(table), sort_keys=True).encode()
    arrays = {"meta": np.frombuffer(meta, dtype=np.uint8)}
    if table.enumerable:
        arrays["orders"] = table.all_orders().astype("<i8")
    if table.has_cayley:
        arrays["cayley"] = table.build_cayley().astype("<i4")
    tmp = path.with_suffix(".tmp.npz")
    np.savez(tmp, **arrays)
    tmp.replace(path)
    return path


def load_table(table: GroupTable, cache_dir) -> bool:
    """Fill ``table`` from the cache; returns False when no valid entry exists."""
    path = cache_path(table, cache_dir)
    if not path.exists():
        return False
    try:
        with np.load(path, allow_pickle=False) as z:
            meta = json.loads(bytes(z["meta"]).decode())
            if meta != json.loads(json.dumps(table_fingerprint(table), sort_keys=True)):
                return False
            if "orders" in z.files:
                orders = z["orders"].astype(np.int64)
                if orders.shape != (table.order,):
                    return False
                table._orders = orders
            if "cayley" in z.files:
                cay = z["cayley"].astype(np.int32)
                if cay.shape != (table.order, table.order):
                    return False
                cay.setflags(write=False)
                table._cayley = cay
    except (OSError, ValueError, KeyError):
        return False
    return True


def identity(table: GroupTable) -> GroupElement:
    return table.identity()


def root_element(table: GroupTable, root, t) -> GroupElement:
    return table.root_element(root, t)


def mul(a: GroupElement, b: GroupElement) -> GroupElement:
    return a * b


def inv(a: GroupElement) -> GroupElement:
    return a.inverse()


def comm(a: GroupElement, b: GroupElement) -> GroupElement:
    return a.comm(b)


def conjugate(a: GroupElement, g: GroupElement) -> GroupElement:
    return a.conj(g)


def pow(a: GroupElement, k: int) -> GroupElement:  # noqa: A001
    return a**k


def element_order(a: GroupElement) -> int:
    return a.order()


def exponent(table: GroupTable) -> int:
    return table.exponent()


def reduced_table(table: GroupTable) -> dict:
    """The commutator table with structure constants reduced mod p.

    Returns ``{(root_i, root_j): [(target, coeff mod p, kind, t_exp, u_exp), ...]}``
    with vanishing terms dropped, which is what the per-characteristic
    displays list.
    """
    out = {}
    for (i, j), terms in table.datum.table.items():
        kept = [(table.roots[t.target], t.coeff % table.p, t.kind, t.t_exp, t.u_exp)
                for t in terms if t.coeff % table.p]
        if kept:
            out[(table.roots[i], table.roots[j])] = kept
    return out


class MatrixOracle:
    """4x4 upper unitriangular model of the unitary Sylow subgroup over GF(q^2).

    ``x_a(t) = I + t E12 + t^q E34``, ``x_b(u) = I + u E23``,
    ``x_{a+b}(s) = I + eps s E13 - eps s^q E24`` and ``x_{2a+b}(v) = I + eps' v E14``.
    These satisfy the commutator table exactly when ``eps eps' eps'' = -1``.
    """

    def __init__(self, table: GroupTable):
        eps, eps1, eps2 = self._signs(table.datum)
        if eps * eps1 * eps2 != -1:
            raise ConfigurationError("signs with eps*eps'*eps'' = 1 have no matrix model")
        self.table = table
        self.F = table.F
        self.frob = table.ext.frob
        self.eps, self.eps1 = eps, eps1

    @staticmethod
    def _signs(datum: RootDatum):
        ab = datum.table[(0, 1)]
        tr = datum.table[(0, 2)][0]
        return ab[0].coeff, ab[1].coeff, tr.coeff

    def _root_matrix(self, r: int, v):
        F = self.F
        shape = np.shape(v)
        M = np.zeros(shape + (4, 4), dtype=np.int64)
        for i in range(4):
            M[..., i, i] = 1
        if r == 0:
            M[..., 0, 1] = v
            M[..., 2, 3] = self.frob[v]
        elif r == 1:
            M[..., 1, 2] = v
        elif r == 2:
            M[..., 0, 2] = F.scale(self.eps, v)
            M[..., 1, 3] = F.scale(-self.eps, self.frob[v])
        else:
            M[..., 0, 3] = F.scale(self.eps1, v)
        return M

    def matmul(self, A, B):
        F = self.F
        C = np.zeros(np.broadcast_shapes(A.shape, B.shape), dtype=np.int64)
        for k in range(4):
            C = F.add(C, F.mul(A[..., :, k:k + 1], B[..., k:k + 1, :]))
        return C

    def __call__(self, idx) -> np.ndarray:
        """Matrices (..., 4, 4) over GF(q^2), entries as field indices."""
        coords = self.table.decode(idx)
        M = self._root_matrix(0, coords[0])
        for r in range(1, 4):
            M = self.matmul(M, self._root_matrix(r, coords[r]))
        return M
