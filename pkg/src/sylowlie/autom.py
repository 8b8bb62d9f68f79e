"""Automorphism groups of small subgroups, p-cores, and the S-radical decision.

Automorphisms are stored as permutations of local positions ``0..|E|-1``
(positions in ``E.elements``).  The composite ``a * b`` means "apply ``a``
then ``b``", i.e. the array ``b[a]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from . import grptool as gt
from .errors import ResourceError
from .grptool import Subgroup

MAX_AUT_ORDER = 1_000_000
MAX_SEARCH_NODES = 100_000_000
MAX_AUT_SUBGROUP = 729


def local_table(E: Subgroup) -> np.ndarray:
    """Multiplication table of ``E`` on local positions."""
    els = E.elements
    prod = E.table.mul(els[:, None], els[None, :])
    return np.searchsorted(els, prod).astype(np.int32)


@dataclass
class InvariantProfile:
    """Automorphism-invariant labels of the elements of ``E``.

    ``codes[i]`` is an integer class label for local position ``i``; equal
    codes are necessary for two elements to be swapped by an automorphism.
    """

    codes: np.ndarray
    order_histogram: dict
    series_orders: dict

    @classmethod
    def of(cls, E: Subgroup, table: np.ndarray | None = None) -> InvariantProfile:
        T = local_table(E) if table is None else table
        m = E.order
        p = E.table.p
        orders = E.orders
        # class size in E: |E| / |C_E(x)|
        commute = T == T.T
        class_size = m // commute.sum(axis=1)
        # number of p-th roots
        pw = np.arange(m)
        for _ in range(p - 1):
            pw = T[pw, np.arange(m)]
        roots = np.bincount(pw, minlength=m)
        subs = {
            "Z": gt.center(E),
            "D": gt.derived(E),
            "Phi": gt.frattini(E),
            "Agemo": gt.agemo(E),
            "Omega": gt.omega(E),
        }
        upper = gt.upper_central_series(E)
        if len(upper) > 2:
            subs["Z2"] = upper[2]
        flags = np.stack([H.mask[E.elements] for H in subs.values()], axis=1) if subs else np.zeros((m, 0), bool)
        cols = [orders, class_size, roots] + [flags[:, i].astype(np.int64) for i in range(flags.shape[1])]
        stacked = np.stack(cols, axis=1)
        _, codes = np.unique(stacked, axis=0, return_inverse=True)
        hist = {int(k): int(v) for k, v in zip(*np.unique(orders, return_counts=True))}
        return cls(codes.ravel(), hist, {k: H.order for k, H in subs.items()})


class AutGroup:
    """All automorphisms of ``E`` as an array of local permutations."""

    def __init__(self, E: Subgroup, perms: np.ndarray):
        self.subgroup = E
        self.perms = perms
        self.index = {row.tobytes(): i for i, row in enumerate(perms)}
        self.identity = self.index[np.arange(E.order, dtype=perms.dtype).tobytes()]

    @property
    def order(self) -> int:
        return len(self.perms)

    def __len__(self):
        return len(self.perms)

    def lookup(self, perm: np.ndarray) -> int:
        return self.index[np.asarray(perm, dtype=self.perms.dtype).tobytes()]

    def mul(self, i: int, j: int) -> int:
        return self.index[self.perms[j][self.perms[i]].tobytes()]

    def inv(self, i: int) -> int:
        out = np.empty_like(self.perms[i])
        out[self.perms[i]] = np.arange(len(out), dtype=out.dtype)
        return self.index[out.tobytes()]

    def conj(self, i: int, g: int) -> int:
        """``g^-1 i g``."""
        return self.mul(self.mul(self.inv(g), i), g)

    def power(self, i: int, k: int) -> int:
        r = self.identity
        for _ in range(k):
            r = self.mul(r, i)
        return r

    def element_order(self, i: int) -> int:
        k, r = 1, i
        while r != self.identity:
            r = self.mul(r, i)
            k += 1
        return k

    def close(self, gens) -> set[int]:
        """Subgroup generated by ``gens`` (as a set of indices)."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.mul(a, g)
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return seen

    @cached_property
    def generators(self) -> tuple[int, ...]:
        gens: list[int] = []
        H = {self.identity}
        for i in range(self.order):
            if i not in H:
                gens.append(i)
                H = self.close(gens)
                if len(H) == self.order:
                    break
        return tuple(gens)

    def is_closed(self) -> bool:
        """Every product of two generators with any element stays inside the set."""
        for g in self.generators:
            composed = self.perms[g][self.perms]
            for row in composed:
                if row.tobytes() not in self.index:
                    return False
        return True

    def verify_homomorphisms(self, table: np.ndarray | None = None) -> bool:
        T = local_table(self.subgroup) if table is None else table
        for phi in self.perms:
            if not np.array_equal(phi[T], T[phi[:, None], phi[None, :]]):
                return False
        return True

    def conjugation(self, g: int) -> int:
        """Index of the automorphism ``x -> g^-1 x g`` for ``g`` in ``N_S(E)``."""
        E = self.subgroup
        img = E.table.conj(E.elements, int(g))
        return self.lookup(np.searchsorted(E.elements, img))


@dataclass
class Undecided:
    reason: str

    def __bool__(self):
        raise TypeError("an undecided verdict has no truth value")


def aut_group(E: Subgroup, max_order: int = MAX_AUT_ORDER,
              max_nodes: int = MAX_SEARCH_NODES) -> AutGroup | Undecided:
    """Complete ``Aut(E)`` by backtracking over images of a minimal generating set.

    Partial assignments are extended to the subgroup they generate and
    rejected on the first inconsistency, non-injectivity or profile mismatch.
    Every leaf is therefore a full automorphism and every automorphism is
    reached exactly once, so no separate closure step is needed.
    """
    if E.order > MAX_AUT_SUBGROUP:
        return Undecided(f"|E| = {E.order} above the automorphism search limit {MAX_AUT_SUBGROUP}")
    m = E.order
    T = local_table(E)
    prof = InvariantProfile.of(E, T)
    codes = prof.codes
    pos = np.searchsorted(E.elements, np.asarray(gt.minimal_generating_set(E), dtype=np.int64))
    # rarest profile first
    counts = np.bincount(codes)
    gens = sorted((int(g) for g in pos), key=lambda g: (counts[codes[g]], g))
    dtype = np.int16 if m < 32768 else np.int32
    found: list[np.ndarray] = []
    nodes = 0

    def extend(assigned):
        phi = -np.ones(m, dtype=np.int64)
        psi = -np.ones(m, dtype=np.int64)
        phi[0] = psi[0] = 0
        frontier = np.array([0], dtype=np.int64)
        while frontier.size:
            src = np.concatenate([T[frontier, g] for g, _ in assigned])
            dst = np.concatenate([T[phi[frontier], y] for _, y in assigned])
            pairs = np.unique(src * m + dst)
            s, d = pairs // m, pairs % m
            if len(np.unique(s)) != len(s):
                return None
            old = phi[s] >= 0
            if np.any(phi[s[old]] != d[old]):
                return None
            s, d = s[~old], d[~old]
            if len(np.unique(d)) != len(d) or np.any(psi[d] >= 0):
                return None
            if np.any(codes[s] != codes[d]):
                return None
            phi[s] = d
            psi[d] = s
            frontier = s
        return phi

    def search(k, assigned):
        nonlocal nodes
        if k == len(gens):
            found.append(extend(assigned).astype(dtype))
            if len(found) > max_order:
                raise ResourceError("automorphism group exceeds cap")
            return
        g = gens[k]
        for y in np.flatnonzero(codes == codes[g]):
            nodes += 1
            if nodes > max_nodes:
                raise ResourceError("automorphism search exceeds node cap")
            trial = assigned + [(g, int(y))]
            phi = extend(trial)
            if phi is None:
                continue
            search(k + 1, trial)

    try:
        search(0, [])
    except ResourceError as exc:
        return Undecided(str(exc))
    perms = np.stack(found) if found else np.arange(m, dtype=dtype)[None, :]
    return AutGroup(E, perms)


def sylow_containing(A: AutGroup, start) -> set[int]:
    """A Sylow p-subgroup of ``A`` containing the p-subgroup generated by ``start``."""
    p = A.subgroup.table.p
    P = A.close(start)
    gens = list(start)
    while True:
        pg = _small_gens(A, P, gens)
        grown = False
        for a in range(A.order):
            if a in P:
                continue
            if A.power(a, p) not in P:
                continue
            if all(A.conj(x, a) in P for x in pg):
                gens = pg + [a]
                P = A.close(gens)
                grown = True
                break
        if not grown:
            return P


def _small_gens(A: AutGroup, P: set[int], hint) -> list[int]:
    gens: list[int] = []
    H = {A.identity}
    for x in list(hint) + sorted(P):
        if x not in H:
            gens.append(x)
            H = A.close(gens)
            if len(H) == len(P):
                break
    return gens


def p_core(A: AutGroup, sylow: set[int] | None = None) -> set[int]:
    """``O_p(A)``: the largest subset of a Sylow p-subgroup closed under conjugation by ``A``."""
    P = sylow if sylow is not None else sylow_containing(A, [])
    K = set(P)
    gens = A.generators
    while True:
        K2 = {x for x in K if all(A.conj(x, g) in K for g in gens)}
        if K2 == K:
            return K
        K = K2


@dataclass
class RadicalVerdict:
    radical: bool | None
    method: str
    detail: str = ""
    aut_order: int | None = None
    witness: gt.ChainWitness | None = dc_field(default=None, repr=False)

    @property
    def decided(self) -> bool:
        return self.radical is not None


def is_s_radical(E: Subgroup, S: Subgroup | None = None, use_fast_paths: bool = True,
                 max_order: int = MAX_AUT_ORDER) -> RadicalVerdict:
    """``O_p(Out(E)) ∩ Out_S(E) = 1``, decided from the definition.

    Because ``Inn(E)`` is a normal p-subgroup of ``Aut(E)``, the condition is
    ``Aut_S(E) ∩ O_p(Aut(E)) = Inn(E)``.
    """
    S = S if S is not None else gt.whole(E.table)
    N = gt.normalizer(E, within=S)
    if N.order == E.order:
        return RadicalVerdict(True, "self-normalizing", "Out_S(E) = 1")
    if use_fast_paths:
        if E.is_elementary_abelian:
            return RadicalVerdict(True, "elementary-abelian", "Aut(E) = GL_m(p) has trivial p-core")
        w = gt.chain_centralizer_prune(E, S)
        if w is not None:
            return RadicalVerdict(False, "chain", w.describe(), witness=w)
    C = gt.centralizer(E, within=S)
    if gt.join(E, C).order == N.order:
        return RadicalVerdict(True, "trivial-automizer", "N_S(E) = E C_S(E)")
    A = aut_group(E, max_order=max_order)
    if isinstance(A, Undecided):
        return RadicalVerdict(None, "undecided", A.reason)
    # coset representatives of N modulo E C_S(E) suffice for Aut_S(E)
    auts = {A.conjugation(g) for g in N.elements}
    inn = {A.conjugation(g) for g in E.elements}
    P = sylow_containing(A, sorted(auts))
    core = p_core(A, P)
    hit = auts & core
    radical = len(hit) == len(inn)
    detail = f"|Aut|={A.order} |Inn|={len(inn)} |Aut_S|={len(auts)} |O_p|={len(core)}"
    return RadicalVerdict(radical, "aut", detail, aut_order=A.order)
