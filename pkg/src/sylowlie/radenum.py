"""Subgroup catalogs of the small Sylow subgroups and their centric-radical members."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from . import autom
from . import grptool as gt
from .chevalley import GroupTable
from .errors import ConfigurationError
from .grptool import Subgroup

SCHEMA_VERSION = 1
DEFAULT_ORDER_LIMIT = 64


@dataclass
class SubgroupClass:
    members: list[Subgroup]
    centric: bool | None = None
    verdict: autom.RadicalVerdict | None = None
    labels: list[str] = dc_field(default_factory=list)

    @property
    def representative(self) -> Subgroup:
        return self.members[0]

    @property
    def order(self) -> int:
        return self.representative.order

    @property
    def class_size(self) -> int:
        return len(self.members)

    @property
    def radical(self) -> bool | None:
        return None if self.verdict is None else self.verdict.radical

    @property
    def label(self) -> str:
        return " / ".join(self.labels) if self.labels else ""

    def sort_key(self):
        return (self.order, self.label, min(self.representative.gens, default=0), self.representative.key)


@dataclass
class SubgroupCatalog:
    table: GroupTable
    classes: list[SubgroupClass]
    complete: bool = True

    @property
    def subgroup_count(self) -> int:
        return sum(c.class_size for c in self.classes)

    def all_subgroups(self):
        for c in self.classes:
            yield from c.members

    def find(self, H: Subgroup) -> SubgroupClass | None:
        for c in self.classes:
            if c.order == H.order and any(M == H for M in c.members):
                return c
        return None


def enumerate_subgroups(S: Subgroup, allow_large: bool = False,
                        max_subgroups: int = 200_000) -> SubgroupCatalog:
    """Every subgroup of ``S`` by cyclic extension, grouped into S-classes.

    Each nontrivial subgroup ``K`` of a p-group has a normal subgroup ``H``
    of index p, and ``K = <H, x>`` for any ``x`` in ``K`` outside ``H``; so
    extending every known ``H`` by every ``x`` in ``N_S(H)`` with
    ``x^p in H`` reaches all of them.
    """
    t = S.table
    if S.order > DEFAULT_ORDER_LIMIT and not allow_large:
        raise ConfigurationError(
            f"subgroup enumeration of a group of order {S.order} needs allow_large=True"
        )
    found: dict[bytes, Subgroup] = {}
    triv = gt.trivial(t)
    found[triv.key] = triv
    frontier = [triv]
    complete = True
    while frontier and complete:
        nxt = []
        for H in frontier:
            N = gt.normalizer(H, within=S)
            seen = H.mask.copy()
            for x in N.elements:
                if seen[x] or not H.mask[t.power(x, t.p)]:
                    continue
                # the whole coset Hx gives the same extension
                seen[t.mul(H.elements, x)] = True
                K = gt.closure(t, list(H.gens) + [int(x)])
                if K.key not in found:
                    found[K.key] = K
                    nxt.append(K)
                    if len(found) >= max_subgroups:
                        complete = False
                        break
            if not complete:
                break
        frontier = nxt
    classes: list[SubgroupClass] = []
    done: set[bytes] = set()
    for key in sorted(found, key=lambda k: (len(found[k]), k)):
        if key in done:
            continue
        members = gt.s_class(found[key], S)
        done.update(M.key for M in members)
        classes.append(SubgroupClass(members))
    return SubgroupCatalog(t, classes, complete)


# patterns -------------------------------------------------------------------

def patterns(table: GroupTable) -> dict[str, list[Subgroup]]:
    """Label -> subgroups that carry it, for the two order-64 ambients."""
    from .lemmas import named_subgroups

    named = named_subgroups(table)
    S = named["S"]
    out: dict[str, list[Subgroup]] = {"S": [S]}
    if table.family == "G2":
        # Z_i are the root-product subgroups; at q = 2 the upper central
        # series differs from them, see the notes in the README
        Z1, Z2, Z3 = named["Z(S)"], named["Z2(S)"], named["Z3(S)"]
        out["Q1 = C_S(Z3(S)/Z(S))"] = [gt.centralizer_mod(Z3, Z1, within=S)]
        out["Q2 = C_S(Z2(S))"] = [gt.centralizer(Z2, within=S)]
        for name in "TUVWX":
            out[f"maximal elementary abelian {name}"] = gt.s_class(named[name], S)
        mea = [A for A in gt.maximal_elementary_abelians(S) if A.order == table.q ** 3]
        out["maximal elementary abelian of order q^3"] = mea
    else:
        out["Q1"] = [named["Q1"]]
        out["Q2 = J(S)"] = [named["Q2"]]
        Sd, Z = named["S'"], named["Z(S)"]
        cents = {}
        for x in Sd.elements[~Z.mask[Sd.elements]]:
            C = gt.centralizer_of_element(table, x, within=S)
            cents[C.key] = C
        out["C_S(x), x in S'-Z(S)"] = [cents[k] for k in sorted(cents)]
        Q1, Q2 = named["Q1"], named["Q2"]
        out["A(Q1), not in Q2"] = [A for A in gt.max_rank_elementary_abelians(Q1) if not A <= Q2]
    return out


# labels that together make up the expected survivor list of each family
EXPECTED = {
    "G2": ("S", "Q1 = C_S(Z3(S)/Z(S))", "Q2 = C_S(Z2(S))", "maximal elementary abelian of order q^3"),
    "SU4": ("S", "Q1", "Q2 = J(S)", "C_S(x), x in S'-Z(S)", "A(Q1), not in Q2"),
}


@dataclass
class RCReport:
    catalog: SubgroupCatalog
    survivors: list[SubgroupClass]
    missing: list[str]
    unmatched: list[SubgroupClass]
    undecided: list[SubgroupClass]

    @property
    def matches(self) -> bool:
        return not self.missing and not self.unmatched and not self.undecided and self.catalog.complete

    def to_dict(self) -> dict:
        t = self.catalog.table

        def row(c: SubgroupClass):
            return {
                "order": c.order,
                "class_size": c.class_size,
                "centric": c.centric,
                "radical": c.radical,
                "label": c.label,
                "method": c.verdict.method if c.verdict else None,
                "generators": sorted(c.representative.gens),
            }

        classes = sorted(self.catalog.classes, key=SubgroupClass.sort_key)
        return {
            "schema_version": SCHEMA_VERSION,
            "family": t.family,
            "q": t.q,
            "complete": self.catalog.complete,
            "subgroup_count": self.catalog.subgroup_count,
            "class_count": len(self.catalog.classes),
            "classes": [row(c) for c in classes],
            "survivors": [row(c) for c in sorted(self.survivors, key=SubgroupClass.sort_key)],
            "missing_patterns": list(self.missing),
            "unmatched_survivors": [row(c) for c in self.unmatched],
            "undecided": [row(c) for c in self.undecided],
            "matches_expected": self.matches,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_markdown(self) -> str:
        t = self.catalog.table
        lines = [
            f"S-centric, S-radical subgroups of S, {t.family}, q = {t.q}",
            "",
            "| order | class size | label | decided by |",
            "|---:|---:|---|---|",
        ]
        for c in sorted(self.survivors, key=SubgroupClass.sort_key):
            lines.append(f"| {c.order} | {c.class_size} | {c.label or '(no pattern)'} | {c.verdict.method} |")
        lines.append("")
        lines.append(f"{self.catalog.subgroup_count} subgroups in {len(self.catalog.classes)} classes; "
                     f"{len(self.survivors)} surviving classes.")
        if self.missing:
            lines.append("Expected but not surviving: " + ", ".join(self.missing))
        if self.unmatched:
            lines.append(f"Survivors matching no pattern: {len(self.unmatched)}")
        if self.undecided:
            lines.append(f"Undecided: {len(self.undecided)}")
        return "\n".join(lines) + "\n"


def classify_rc(catalog: SubgroupCatalog, use_fast_paths: bool = True,
                max_aut_order: int = autom.MAX_AUT_ORDER) -> RCReport:
    """Filter centric, then radical; label survivors against the pattern constructors."""
    t = catalog.table
    S = gt.whole(t)
    for c in catalog.classes:
        H = c.representative
        c.centric = gt.is_s_centric(H, S)
        if c.centric:
            c.verdict = autom.is_s_radical(H, S, use_fast_paths=use_fast_paths, max_order=max_aut_order)
    pats = patterns(t)
    for label, subs in pats.items():
        for H in subs:
            c = catalog.find(H)
            if c is not None and label not in c.labels:
                c.labels.append(label)
    survivors = [c for c in catalog.classes if c.centric and c.radical]
    undecided = [c for c in catalog.classes if c.centric and c.verdict is not None and c.radical is None]
    expected = EXPECTED.get(t.family, ())
    expected_keys = set()
    missing = []
    surviving = {id(c) for c in survivors}
    for label in expected:
        subs = pats.get(label, [])
        expected_keys.update(H.key for H in subs)
        found = [catalog.find(H) for H in subs]
        if not subs or any(c is None or id(c) not in surviving for c in found):
            missing.append(label)
    unmatched = [c for c in survivors if not any(M.key in expected_keys for M in c.members)]
    return RCReport(catalog, survivors, missing, unmatched, undecided)


def enumerate_rc(table: GroupTable, allow_large: bool = False, **kw) -> RCReport:
    S = gt.whole(table)
    return classify_rc(enumerate_subgroups(S, allow_large=allow_large), **kw)


def maximal_subgroup_recount(S: Subgroup) -> int:
    """Subgroup count by descending through maximal subgroups (independent of cyclic extension)."""
    seen = {S.key: S}
    frontier = [S]
    while frontier:
        nxt = []
        for H in frontier:
            if H.order == 1:
                continue
            for M in gt.maximal_subgroups(H):
                if M.key not in seen:
                    seen[M.key] = M
                    nxt.append(M)
        frontier = nxt
    return len(seen)


def order_profile(catalog: SubgroupCatalog) -> dict[int, int]:
    counts: dict[int, int] = {}
    for c in catalog.classes:
        counts[c.order] = counts.get(c.order, 0) + c.class_size
    return dict(sorted(counts.items()))


def survivors_by_label(report: RCReport) -> dict[str, list[int]]:
    out: dict[str, list[int]] = {}
    for c in report.survivors:
        out.setdefault(c.label, []).append(c.order)
    return {k: sorted(v) for k, v in sorted(out.items())}


__all__ = [
    "SubgroupCatalog", "SubgroupClass", "RCReport", "enumerate_subgroups", "classify_rc",
    "enumerate_rc", "patterns", "maximal_subgroup_recount", "order_profile",
]
