"""Subgroups of an enumerated ambient group, carried as sorted index sets.

Everything here is a set-theoretic scan over element indices of a
:class:`~sylowlie.chevalley.GroupTable`.  There is no quotient-group object:
statements about ``K/L`` are tested elementwise (``[k, g] in L``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import product as iproduct

import numpy as np

from .chevalley import GroupTable
from .errors import ResourceError, UsageError

CHARACTERISTIC_ROUNDS = 2


class Subgroup:
    """Immutable handle: ambient table, sorted elements, a generating set, a recipe tag."""

    __slots__ = ("table", "elements", "_gens", "tag", "__dict__")

    def __init__(self, table: GroupTable, elements, gens=None, tag: str | None = None):
        els = np.unique(np.asarray(elements, dtype=np.int64))
        els.setflags(write=False)
        self.table = table
        self.elements = els
        self._gens = None if gens is None else tuple(int(g) for g in gens)
        self.tag = tag

    # identity and comparison -------------------------------------------
    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    @cached_property
    def key(self) -> bytes:
        return self.elements.tobytes()

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.table.order, dtype=bool)
        m[self.elements] = True
        m.setflags(write=False)
        return m

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def contains(self, xs) -> np.ndarray:
        return self.mask[np.asarray(xs, dtype=np.int64)]

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.table is self.table and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __le__(self, other: Subgroup) -> bool:
        return bool(np.all(other.mask[self.elements]))

    def __lt__(self, other: Subgroup) -> bool:
        return self.order < other.order and self <= other

    def __repr__(self):
        tag = f" {self.tag}" if self.tag else ""
        return f"<Subgroup{tag} order {self.order} of {self.table!r}>"

    def named(self, tag: str) -> Subgroup:
        out = Subgroup.__new__(Subgroup)
        out.table, out.elements, out._gens, out.tag = self.table, self.elements, self._gens, tag
        return out

    # generators -------------------------------------------------------------
    @property
    def gens(self) -> tuple[int, ...]:
        if self._gens is None:
            self._gens = _greedy_generators(self.table, self.elements)
        return self._gens

    # cheap invariants ------------------------------------------------------
    @cached_property
    def orders(self) -> np.ndarray:
        return self.table.all_orders()[self.elements]

    @property
    def exponent(self) -> int:
        return int(self.orders.max())

    @cached_property
    def is_abelian(self) -> bool:
        g = np.asarray(self.gens, dtype=np.int64)
        if len(g) < 2:
            return True
        mul = self.table.mul
        return bool(np.all(mul(g[:, None], g[None, :]) == mul(g[None, :], g[:, None])))

    @property
    def is_elementary_abelian(self) -> bool:
        return self.is_abelian and self.exponent <= self.table.p

    @property
    def log_order(self) -> int:
        """``log_p |H|``."""
        n, k = self.order, 0
        while n > 1:
            n //= self.table.p
            k += 1
        return k

    def to_dict(self) -> dict:
        t = self.table
        return {
            "ambient": {"family": t.family, "q": t.q, "modulus": list(t.params.modulus)},
            "generators": sorted(self.gens),
            "order": self.order,
            "recipe": self.tag,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


# construction ------------------------------------------------------------------

def _extend(table: GroupTable, mask: np.ndarray, elements: np.ndarray, gens: np.ndarray) -> np.ndarray:
    """Close ``elements`` (a subgroup) together with ``gens`` under multiplication."""
    frontier = elements
    while frontier.size:
        prod = np.unique(table.mul(frontier[:, None], gens[None, :]).ravel())
        new = prod[~mask[prod]]
        mask[new] = True
        frontier = new
    return np.flatnonzero(mask)


def _greedy_generators(table: GroupTable, elements: np.ndarray) -> tuple[int, ...]:
    """A generating set built by adding elements not yet reached, highest order first."""
    if len(elements) <= 1:
        return ()
    orders = table.all_orders()[elements]
    candidates = elements[np.argsort(-orders, kind="stable")]
    mask = np.zeros(table.order, dtype=bool)
    mask[0] = True
    current = np.array([0], dtype=np.int64)
    gens: list[int] = []
    for x in candidates:
        if mask[x]:
            continue
        gens.append(int(x))
        current = _extend(table, mask, current, np.asarray(gens, dtype=np.int64))
        if len(current) == len(elements):
            break
    return tuple(gens)


def closure(table: GroupTable, gens=(), tag: str | None = None) -> Subgroup:
    """Smallest subgroup containing ``gens``."""
    table.require_enumerable()
    gens = np.unique(np.asarray(list(gens), dtype=np.int64))
    gens = gens[gens != 0]
    mask = np.zeros(table.order, dtype=bool)
    mask[0] = True
    current = np.array([0], dtype=np.int64)
    kept: list[int] = []
    for g in gens:
        if mask[g]:
            continue
        kept.append(int(g))
        current = _extend(table, mask, current, np.asarray(kept, dtype=np.int64))
    return Subgroup(table, current, kept, tag)


def trivial(table: GroupTable) -> Subgroup:
    return Subgroup(table, [0], (), "1")


def whole(table: GroupTable) -> Subgroup:
    table.require_enumerable()
    return Subgroup(table, np.arange(table.order), _root_gens(table, range(table.nroots)), "S")


def _root_gens(table: GroupTable, roots) -> list[int]:
    gens = []
    for r in roots:
        r = table.datum.root_index(r)
        # additive basis of the root's parameter range
        step = table.place[r]
        radix = table.radix[r]
        k = 1
        while k < radix:
            gens.append(k * step)
            k *= table.p
    return gens


def root_product(table: GroupTable, roots, tag: str | None = None) -> Subgroup:
    """Subgroup generated by the given root subgroups."""
    return closure(table, _root_gens(table, roots), tag)


def from_elements(table: GroupTable, elements, tag: str | None = None) -> Subgroup:
    """Wrap an index set already known to be a subgroup."""
    return Subgroup(table, elements, None, tag)


def _ambient(H: Subgroup, within: Subgroup | None) -> Subgroup:
    return within if within is not None else whole(H.table)


# centralizers and normalizers -----------------------------------------------

def centralizer_of_element(table: GroupTable, x, within: Subgroup | None = None) -> Subgroup:
    W = within if within is not None else whole(table)
    w = W.elements
    keep = table.mul(int(x), w) == table.mul(w, int(x))
    return Subgroup(table, w[keep], None, None)


def centralizer(H: Subgroup, within: Subgroup | None = None) -> Subgroup:
    W = _ambient(H, within)
    t = H.table
    keep = np.ones(W.order, dtype=bool)
    w = W.elements
    for h in H.gens:
        keep &= t.mul(h, w) == t.mul(w, h)
    return Subgroup(t, w[keep])


def centralizer_mod(K: Subgroup, L: Subgroup, within: Subgroup | None = None) -> Subgroup:
    """``C_W(K/L)`` = elements ``g`` with ``[k, g] in L`` for all ``k`` in ``K``."""
    W = _ambient(K, within)
    t = K.table
    keep = np.ones(W.order, dtype=bool)
    w = W.elements
    for k in K.gens:
        keep &= L.mask[t.comm(k, w)]
    return Subgroup(t, w[keep])


def normalizer(H: Subgroup, within: Subgroup | None = None) -> Subgroup:
    W = _ambient(H, within)
    t = H.table
    keep = np.ones(W.order, dtype=bool)
    w = W.elements
    for h in H.gens:
        keep &= H.mask[t.conj(h, w)]
    return Subgroup(t, w[keep])


def center(H: Subgroup) -> Subgroup:
    return centralizer(H, within=H)


def intersection(A: Subgroup, B: Subgroup) -> Subgroup:
    return Subgroup(A.table, A.elements[B.mask[A.elements]])


def join(*subgroups: Subgroup, tag: str | None = None) -> Subgroup:
    gens = [g for H in subgroups for g in H.gens]
    return closure(subgroups[0].table, gens, tag)


def is_normal(H: Subgroup, G: Subgroup) -> bool:
    return normalizer(H, within=G).order == G.order


def conjugate_subgroup(H: Subgroup, g) -> Subgroup:
    t = H.table
    els = t.conj(H.elements, int(g))
    gens = t.conj(np.asarray(H.gens, dtype=np.int64), int(g)) if H.gens else ()
    return Subgroup(t, els, gens, H.tag)


def s_class(H: Subgroup, S: Subgroup | None = None) -> list[Subgroup]:
    """Conjugacy class of ``H`` under ``S``, one representative per transversal of ``N_S(H)``."""
    S = _ambient(H, S)
    N = normalizer(H, within=S)
    t = H.table
    seen = {H.key: H}
    covered = N.mask.copy()
    for g in S.elements:
        if covered[g]:
            continue
        # H^(ng) = H^g, so one conjugation per right coset Ng
        covered[t.mul(N.elements, int(g))] = True
        K = conjugate_subgroup(H, g)
        seen.setdefault(K.key, K)
    return [seen[k] for k in sorted(seen)]


# commutators and series ----------------------------------------------------------

def _normal_closure(K: Subgroup, by) -> Subgroup:
    t = K.table
    by = np.asarray(list(by), dtype=np.int64)
    while True:
        g = np.asarray(K.gens, dtype=np.int64)
        if not g.size or not by.size:
            return K
        conj = t.conj(g[:, None], by[None, :]).ravel()
        missing = conj[~K.mask[conj]]
        if not missing.size:
            return K
        K = closure(t, list(K.gens) + list(np.unique(missing)))


def commutator_subgroup(A: Subgroup, B: Subgroup, tag: str | None = None) -> Subgroup:
    """``[A, B]``: normal closure in ``<A, B>`` of the generator commutators."""
    t = A.table
    ga = np.asarray(A.gens, dtype=np.int64)
    gb = np.asarray(B.gens, dtype=np.int64)
    if not ga.size or not gb.size:
        return trivial(t).named(tag) if tag else trivial(t)
    comms = t.comm(ga[:, None], gb[None, :]).ravel()
    K = closure(t, comms)
    K = _normal_closure(K, list(ga) + list(gb))
    return K.named(tag) if tag else K


def derived(H: Subgroup) -> Subgroup:
    return commutator_subgroup(H, H)


def upper_central_series(H: Subgroup) -> list[Subgroup]:
    """``[Z_0, Z_1, ...]`` up to the first repeat (``Z_0 = 1``)."""
    series = [trivial(H.table)]
    while True:
        Z = centralizer_mod(H, series[-1], within=H)
        if Z.order == series[-1].order:
            return series
        series.append(Z)


def lower_central_series(H: Subgroup) -> list[Subgroup]:
    """``[gamma_1 = H, gamma_2 = H', ...]`` down to the first repeat."""
    series = [H]
    while True:
        nxt = commutator_subgroup(series[-1], H)
        if nxt.order == series[-1].order:
            return series
        series.append(nxt)


def derived_series(H: Subgroup) -> list[Subgroup]:
    series = [H]
    while series[-1].order > 1:
        nxt = derived(series[-1])
        if nxt.order == series[-1].order:
            break
        series.append(nxt)
    return series


def nilpotency_class(H: Subgroup) -> int:
    return len(upper_central_series(H)) - 1


def agemo(H: Subgroup) -> Subgroup:
    t = H.table
    return closure(t, np.unique(t.power(H.elements, t.p)))


def omega(H: Subgroup) -> Subgroup:
    """Subgroup generated by the elements of order dividing p."""
    return closure(H.table, H.elements[H.orders <= H.table.p])


def frattini(H: Subgroup) -> Subgroup:
    D = derived(H)
    P = agemo(H)
    return join(D, P) if D.order > 1 or P.order > 1 else trivial(H.table)


def frattini_rank(H: Subgroup) -> int:
    """``d`` with ``|H / Phi(H)| = p^d``."""
    return H.log_order - frattini(H).log_order


def minimal_generating_set(H: Subgroup) -> tuple[int, ...]:
    """Generators of ``H`` of size ``rank(H/Phi(H))`` (Burnside basis)."""
    t = H.table
    Phi = frattini(H)
    mask = Phi.mask.copy()
    current = Phi.elements
    gens = list(Phi.gens)
    chosen: list[int] = []
    orders = H.orders
    for x in H.elements[np.argsort(-orders, kind="stable")]:
        if mask[x]:
            continue
        chosen.append(int(x))
        gens.append(int(x))
        current = _extend(t, mask, current, np.asarray(gens, dtype=np.int64))
        if len(current) == H.order:
            break
    return tuple(chosen)


# elementary abelian subgroups ------------------------------------------------

def _bron_kerbosch(adj: list[int], n: int) -> list[int]:
    cliques: list[int] = []
    stack = [(0, (1 << n) - 1, 0)]
    while stack:
        R, P, X = stack.pop()
        if not P and not X:
            cliques.append(R)
            continue
        if not P:
            continue
        PX = P | X
        # pivot: vertex of P|X with most neighbours in P
        best, best_u = -1, 0
        v = PX
        while v:
            low = v & -v
            u = low.bit_length() - 1
            c = (adj[u] & P).bit_count()
            if c > best:
                best, best_u = c, u
            v ^= low
        cand = P & ~adj[best_u]
        while cand:
            low = cand & -cand
            u = low.bit_length() - 1
            stack.append((R | low, P & adj[u], X & adj[u]))
            P &= ~low
            X |= low
            cand ^= low
    return cliques


def maximal_elementary_abelians(H: Subgroup, node_cap: int = 2_000_000) -> list[Subgroup]:
    """All elementary abelian subgroups of ``H`` maximal under inclusion.

    Elements of order p are grouped into classes ``{x^k z}`` with ``z`` in
    ``Omega(Z(H))``; members of one class have the same centralizer, so the
    clique search runs on classes instead of elements.
    """
    t = H.table
    p = t.p
    elts = H.elements[H.orders == p]
    if not elts.size:
        return [trivial(t)]
    Zp = omega(center(H))
    zel = Zp.elements
    cls = -np.ones(t.order, dtype=np.int64)
    reps: list[int] = []
    members: list[np.ndarray] = []
    for x in elts:
        if cls[x] >= 0:
            continue
        powers = np.array([int(t.power(x, k)) for k in range(1, p)], dtype=np.int64)
        block = np.unique(t.mul(powers[:, None], zel[None, :]).ravel())
        block = block[block != 0]
        cls[block] = len(reps)
        reps.append(int(x))
        members.append(block)
    n = len(reps)
    if n > 20000:
        raise ResourceError(f"{n} classes of order-p elements exceed the clique search cap")
    adj = []
    w = H.elements
    for x in reps:
        # class membership of everything in C_H(x)
        c = w[t.mul(x, w) == t.mul(w, x)]
        c = c[cls[c] >= 0]
        bits = 0
        for j in np.unique(cls[c]):
            bits |= 1 << int(j)
        adj.append(bits & ~(1 << len(adj)))
    cliques = _bron_kerbosch(adj, n)
    if len(cliques) > node_cap:
        raise ResourceError("too many maximal elementary abelian subgroups")
    out = []
    for R in cliques:
        idx = [i for i in range(n) if R >> i & 1]
        els = np.concatenate([members[i] for i in idx] + [np.array([0])])
        out.append(Subgroup(t, els))
    out.sort(key=lambda A: (-A.order, A.key))
    return out


def max_rank_elementary_abelians(H: Subgroup) -> list[Subgroup]:
    """The set A(H): elementary abelian subgroups of maximal order."""
    maximal = maximal_elementary_abelians(H)
    top = max(A.order for A in maximal)
    return [A for A in maximal if A.order == top]


def p_rank(H: Subgroup) -> int:
    return max_rank_elementary_abelians(H)[0].log_order


def thompson(H: Subgroup) -> Subgroup:
    """``J(H)``, generated by the members of ``A(H)``."""
    return join(*max_rank_elementary_abelians(H), tag="J")


def maximal_subgroups(H: Subgroup) -> list[Subgroup]:
    """All index-p subgroups: preimages of hyperplanes of ``H/Phi(H)``."""
    t = H.table
    p = t.p
    Phi = frattini(H)
    basis = minimal_generating_set(H)
    d = len(basis)
    out = []
    # one functional per projective point; kernel spanned by explicit vectors
    for f in _projective_points(p, d):
        kernel = _kernel_basis(f, p)
        gens = list(Phi.gens)
        for v in kernel:
            g = 0
            for b, c in zip(basis, v):
                if c:
                    g = int(t.mul(g, t.power(b, int(c))))
            gens.append(g)
        out.append(closure(t, gens))
    out.sort(key=lambda M: M.key)
    return out


def _projective_points(p: int, d: int):
    for v in iproduct(range(p), repeat=d):
        nz = [c for c in v if c]
        if nz and nz[0] == 1:
            yield v


def _kernel_basis(f, p):
    """Basis of ``{v : f . v = 0 mod p}`` for a nonzero functional ``f``."""
    d = len(f)
    piv = next(i for i, c in enumerate(f) if c)
    inv = pow(f[piv], -1, p)
    basis = []
    for j in range(d):
        if j == piv:
            continue
        v = [0] * d
        v[j] = 1
        v[piv] = (-f[j] * inv) % p
        basis.append(v)
    return basis


# centric test and chain pruning ---------------------------------------------------

def is_s_centric(E: Subgroup, S: Subgroup | None = None) -> bool:
    """``C_S(E) <= E``, i.e. ``C_S(E) = Z(E)``."""
    return centralizer(E, within=_ambient(E, S)) <= E


def characteristic_subgroups(E: Subgroup, rounds: int = CHARACTERISTIC_ROUNDS,
                             with_thompson: bool = True) -> dict[str, Subgroup]:
    """Characteristic subgroups of ``E`` from a fixed recipe vocabulary.

    Every recipe is an automorphism-invariant construction applied to ``E``
    or to subgroups already in the list, so every entry is characteristic.
    Keys are recipe tags; duplicate subgroups keep their first tag.
    """
    found: dict[bytes, Subgroup] = {}

    def add(tag, H):
        if H.key not in found:
            found[H.key] = H.named(tag)

    t = E.table
    add("1", trivial(t))
    add("E", E)
    Z = center(E)
    add("Z(E)", Z)
    add("E'", derived(E))
    add("Phi(E)", frattini(E))
    add("Omega(E)", omega(E))
    add("Agemo(E)", agemo(E))
    add("Omega(Z(E))", omega(Z))
    for i, Zi in enumerate(upper_central_series(E)[2:], start=2):
        add(f"Z{i}(E)", Zi)
    for i, Gi in enumerate(lower_central_series(E)[2:], start=3):
        add(f"gamma{i}(E)", Gi)
    if with_thompson and E.order > 1:
        add("J(E)", thompson(E))
    for _ in range(rounds):
        items = list(found.values())
        for i, K in enumerate(items):
            add(f"C({K.tag})", centralizer(K, within=E))
            add(f"Omega(Z({K.tag}))", omega(center(K)))
            for L in items[:i]:
                add(f"({K.tag})^({L.tag})", intersection(K, L))
                add(f"({K.tag})({L.tag})", join(K, L))
                add(f"[{K.tag},{L.tag}]", commutator_subgroup(K, L))
                if L <= K:
                    add(f"C({K.tag}/{L.tag})", centralizer_mod(K, L, within=E))
                elif K <= L:
                    add(f"C({L.tag}/{K.tag})", centralizer_mod(L, K, within=E))
    return {H.tag: H for H in sorted(found.values(), key=lambda H: (H.order, H.key))}


@dataclass
class ChainWitness:
    """``g`` normalizes ``E``, lies outside ``E C_S(E)`` and centralizes every factor of ``chain``."""

    element: int
    chain: list[Subgroup] = dc_field(default_factory=list)

    def describe(self) -> str:
        parts = " < ".join(f"{H.tag}[{H.order}]" for H in self.chain)
        return f"g={self.element}: {parts}"


def chain_centralizer_prune(E: Subgroup, S: Subgroup | None = None,
                            lattice: dict[str, Subgroup] | None = None) -> ChainWitness | None:
    """Certificate that ``E`` is not S-radical, when one can be built from the vocabulary.

    For each candidate ``g`` the chain is grown bottom-up: the next term is the
    product of every listed subgroup ``K`` with ``[K, g]`` inside the previous
    term.  Products of characteristic subgroups are characteristic, so this
    finds a chain whenever one exists inside the lattice.
    """
    S = _ambient(E, S)
    t = E.table
    N = normalizer(E, within=S)
    C = centralizer(E, within=S)
    EC = join(E, C)
    if EC.order == N.order:
        return None
    if lattice is None:
        lattice = characteristic_subgroups(E)
    subs = list(lattice.values())
    tried = EC.mask.copy()
    for g in N.elements:
        if tried[g]:
            continue
        # skip the rest of the coset g*EC: same conjugation action modulo Inn(E)
        tried[t.mul(g, EC.elements)] = True
        chain = [lattice.get("1", trivial(t))]
        while chain[-1].order < E.order:
            prev = chain[-1]
            good = [K for K in subs if np.all(prev.mask[t.comm(K.elements, int(g))])]
            nxt = join(*good) if len(good) > 1 else good[0]
            if nxt.order == prev.order:
                break
            tag = max(good, key=lambda K: K.order).tag if any(K.order == nxt.order for K in good) else None
            chain.append(nxt.named(tag or "+".join(K.tag for K in good if K.order > 1)))
        if chain[-1].order == E.order:
            return ChainWitness(int(g), chain)
    return None


def subgroup_by_recipe(table: GroupTable, recipe: str) -> Subgroup:
    """Named subgroups of S used by the CLI ``dump`` command and the lemma checks."""
    S = whole(table)
    key = recipe.strip()
    if key == "S":
        return S
    if key in ("Z", "Z(S)"):
        return center(S).named("Z(S)")
    if key in ("S'", "derived"):
        return derived(S).named("S'")
    if key in ("Phi", "Phi(S)"):
        return frattini(S).named("Phi(S)")
    if key in ("J", "J(S)"):
        return thompson(S).named("J(S)")
    if key.startswith("Z") and key[1:].isdigit():
        i = int(key[1:])
        series = upper_central_series(S)
        if i >= len(series):
            return series[-1].named(key)
        return series[i].named(key)
    if key.startswith("roots:"):
        roots = [r for r in key[len("roots:"):].split(",") if r]
        return root_product(table, roots, tag=key)
    from .lemmas import named_subgroups  # local import: lemmas depends on this module
    named = named_subgroups(table)
    if key in named:
        return named[key]
    raise UsageError(f"unknown subgroup recipe {recipe!r}")
