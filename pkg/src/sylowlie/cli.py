"""Command-line surface: construct, verify, enumerate-rc, dump.

Every flag can also be set through an environment variable ``SYLOWLIE_<FLAG>``
(dashes become underscores, e.g. ``SYLOWLIE_Q=3``); an explicit flag wins.
Exit codes: 0 pass, 1 verification failure, 2 usage, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import chevalley as ch
from . import grptool as gt
from . import lemmas, radenum
from .autom import MAX_AUT_ORDER
from .errors import ResourceError, SylowLieError, UsageError

SCHEMA_VERSION = 1
ENV_PREFIX = "SYLOWLIE_"
ASSOC_SAMPLE = 2000

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    family: str
    q: int
    modulus: tuple[int, ...] | None = None
    threads: int = 1
    seed: int = 0
    max_aut_order: int = MAX_AUT_ORDER
    max_subgroups: int = 200_000
    cache_dir: str | None = None
    out: str = "json"
    allow_partial: bool = False
    convention: int = 1

    def __post_init__(self):
        for name in ("threads", "max_aut_order", "max_subgroups"):
            if getattr(self, name) <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.out not in ("json", "md"):
            raise UsageError("--out must be json or md")

    def header(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "family": ch._family_key(self.family),
            "q": self.q,
            "modulus": list(self.modulus) if self.modulus is not None else None,
            "convention": self.convention,
        }


def parse_modulus(text: str | None) -> tuple[int, ...] | None:
    """Coefficient list, low degree first: ``"1,1,0,1"``, ``"[1, 1, 0, 1]"`` or ``"1 1 0 1"``."""
    if text is None or str(text).strip() == "":
        return None
    body = str(text).strip().strip("[]()")
    parts = [s for s in body.replace(",", " ").split() if s]
    try:
        return tuple(int(s) for s in parts)
    except ValueError:
        raise UsageError(f"malformed modulus {text!r}") from None


# table construction and cache ----------------------------------------------

def load_group(cfg: RunConfig) -> tuple[ch.GroupTable, bool]:
    """Build the table; returns ``(table, cache_hit)``."""
    table = ch.build_group(cfg.family, cfg.q, modulus=cfg.modulus, convention=cfg.convention)
    hit = False
    if cfg.cache_dir is not None:
        hit = ch.load_table(table, cfg.cache_dir)
    return table, hit


def store_group(cfg: RunConfig, table: ch.GroupTable) -> str | None:
    if cfg.cache_dir is None:
        return None
    try:
        return str(ch.save_table(table, cfg.cache_dir))
    except OSError as exc:
        raise SylowLieError(f"cache write failed: {exc}") from exc


def _note(msg: str):
    print(msg, file=sys.stderr)


def prepared_group(cfg: RunConfig) -> ch.GroupTable:
    """Load or build the table, fill its shared caches and write them back."""
    table, hit = load_group(cfg)
    if table.enumerable:
        table.all_orders()
        if table.order <= ch.CAYLEY_CAP:
            table.build_cayley()
        path = store_group(cfg, table)
        if path is not None:
            _note(f"cache {'hit' if hit else 'written'}: {path}")
    return table


# commands ---------------------------------------------------------------------

def cmd_construct(cfg: RunConfig) -> tuple[dict, int]:
    table = prepared_group(cfg)
    table.require_enumerable()
    S = gt.whole(table)
    Z = gt.center(S)
    rng = np.random.default_rng(cfg.seed)
    a, b, c = rng.integers(0, table.order, size=(3, ASSOC_SAMPLE))
    assoc = bool(np.array_equal(table.mul(table.mul(a, b), c), table.mul(a, table.mul(b, c))))
    report = cfg.header() | {
        "command": "construct",
        "p": table.p,
        "order": table.order,
        "center_order": Z.order,
        "exponent": table.exponent(),
        "associativity_sample": {"seed": cfg.seed, "triples": ASSOC_SAMPLE, "ok": assoc},
    }
    return report, EXIT_OK if assoc else EXIT_FAIL


def cmd_verify(cfg: RunConfig, selector: str) -> tuple[dict, int]:
    ids = lemmas.lemma_ids(cfg.family) if selector == "all" else [selector]
    if selector != "all" and selector not in lemmas.REGISTRY:
        raise UsageError(f"unknown lemma id {selector!r}; known: {', '.join(lemmas.REGISTRY)}")
    # shared caches are filled before lemma checks run side by side
    table = prepared_group(cfg)

    def run(lemma_id):
        return lemmas.verify(lemma_id, cfg.family, cfg.q, modulus=cfg.modulus, table=table)

    if cfg.threads > 1 and len(ids) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            reports = list(pool.map(run, ids))
    else:
        reports = [run(i) for i in ids]
    for r in reports:
        _note(r.summary())
    counts = {v: sum(r.verdict == v for r in reports) for v in ("pass", "fail", "skipped")}
    report = cfg.header() | {
        "command": "verify",
        "selector": selector,
        "counts": counts,
        "lemmas": [r.to_dict(with_time=False) for r in reports],
        "verdict": "fail" if counts["fail"] else "pass",
    }
    return report, EXIT_FAIL if counts["fail"] else EXIT_OK


def cmd_enumerate_rc(cfg: RunConfig) -> tuple[dict, int]:
    table = prepared_group(cfg)
    table.require_enumerable()
    S = gt.whole(table)
    if S.order > radenum.DEFAULT_ORDER_LIMIT and not cfg.allow_partial:
        raise ResourceError(
            f"subgroup enumeration of |S| = {S.order} needs --allow-partial"
        )
    catalog = radenum.enumerate_subgroups(S, allow_large=cfg.allow_partial,
                                          max_subgroups=cfg.max_subgroups)
    if not catalog.complete and not cfg.allow_partial:
        raise ResourceError(f"subgroup enumeration stopped at {cfg.max_subgroups} subgroups")
    rc = radenum.classify_rc(catalog, max_aut_order=cfg.max_aut_order)
    report = cfg.header() | rc.to_dict() | {"command": "enumerate-rc"}
    # the proposition lists only exist for q = 2
    compared = table.q == 2
    report["compared_to_expected"] = compared
    if rc.undecided:
        code = EXIT_RESOURCE
    elif compared and not rc.matches:
        code = EXIT_FAIL
    else:
        code = EXIT_OK
    report["_markdown"] = rc.to_markdown()
    return report, code


def cmd_dump(cfg: RunConfig, recipe: str) -> tuple[dict, int]:
    table, _ = load_group(cfg)
    if recipe == "datum":
        report = cfg.header() | {"command": "dump", "recipe": "datum",
                                 "datum": json.loads(table.datum.to_json())}
        return report, EXIT_OK
    if recipe == "reduced":
        rows = [{"pair": list(k), "terms": [list(t) for t in v]}
                for k, v in sorted(ch.reduced_table(table).items())]
        return cfg.header() | {"command": "dump", "recipe": "reduced", "table": rows}, EXIT_OK
    H = gt.subgroup_by_recipe(table, recipe)
    body = H.to_dict()
    body["recipe"] = recipe
    body["exponent"] = H.exponent
    body["abelian"] = bool(H.is_abelian)
    return cfg.header() | {"command": "dump", "subgroup": body}, EXIT_OK


# rendering --------------------------------------------------------------------

def render(report: dict, fmt: str) -> str:
    md = report.pop("_markdown", None)
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True)
    if md is not None:
        return md.rstrip("\n")
    cmd = report.get("command")
    head = f"{cmd}: {report['family']}, q = {report['q']}"
    lines = [head, ""]
    if cmd == "verify":
        lines += ["| lemma | verdict | note |", "|---|---|---|"]
        for r in report["lemmas"]:
            note = r.get("reason") or ", ".join(c["name"] for c in r["checks"]
                                                if not c["ok"] and not c.get("informational"))
            lines.append(f"| {r['lemma']} | {r['verdict']} | {note} |")
        lines += ["", f"overall: {report['verdict']} {report['counts']}"]
    elif cmd == "construct":
        for k in ("order", "center_order", "exponent"):
            lines.append(f"- {k.replace('_', ' ')}: {report[k]}")
    else:
        lines.append("```json")
        lines.append(json.dumps({k: v for k, v in report.items() if k != "schema_version"},
                                indent=2, sort_keys=True))
        lines.append("```")
    return "\n".join(lines)


# argument parsing -------------------------------------------------------------

def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"), default)


def _env_int(name: str, default):
    raw = _env(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{ENV_PREFIX}{name.upper().replace('-', '_')} must be an integer") from None


def _env_bool(name: str) -> bool:
    return str(_env(name, "")).strip().lower() in ("1", "true", "yes", "on")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", default=_env("family"), help="g2 or su4")
    common.add_argument("--q", type=int, default=_env_int("q", None), help="field order")
    common.add_argument("--modulus", default=_env("modulus"),
                        help="defining polynomial of GF(q), coefficients low degree first")
    common.add_argument("--out", choices=("json", "md"), default=_env("out", "json"))
    common.add_argument("--cache-dir", default=_env("cache-dir"))
    common.add_argument("--threads", type=int, default=_env_int("threads", os.cpu_count() or 1))
    common.add_argument("--seed", type=int, default=_env_int("seed", 0))
    common.add_argument("--max-aut-order", type=int, default=_env_int("max-aut-order", MAX_AUT_ORDER))
    common.add_argument("--max-subgroups", type=int, default=_env_int("max-subgroups", 200_000))
    common.add_argument("--allow-partial", action="store_true", default=_env_bool("allow-partial"))
    common.add_argument("--convention", type=int, choices=(1, -1), default=_env_int("convention", 1),
                        help="G2 sign convention (1 or -1)")

    parser = argparse.ArgumentParser(prog="sylowlie", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("construct", parents=[common], help="build and cache the Sylow subgroup")
    v = sub.add_parser("verify", parents=[common], help="run lemma checks")
    v.add_argument("--lemma", default=_env("lemma"), help="registry id or 'all'")
    v.add_argument("--all", action="store_true", help="same as --lemma all")
    sub.add_parser("enumerate-rc", parents=[common], help="S-centric, S-radical classification")
    d = sub.add_parser("dump", parents=[common], help="subgroup or root datum as JSON")
    d.add_argument("recipe", help="S, Z, S', Phi, J, Z<i>, roots:a,b, a named subgroup, datum or reduced")
    return parser


def config_from_args(args) -> RunConfig:
    if not args.family:
        raise UsageError("--family is required (or set SYLOWLIE_FAMILY)")
    if args.q is None:
        raise UsageError("--q is required (or set SYLOWLIE_Q)")
    ch._family_key(args.family)
    return RunConfig(
        family=args.family, q=args.q, modulus=parse_modulus(args.modulus),
        threads=args.threads, seed=args.seed, max_aut_order=args.max_aut_order,
        max_subgroups=args.max_subgroups, cache_dir=args.cache_dir, out=args.out,
        allow_partial=args.allow_partial, convention=args.convention,
    )


def run(argv=None) -> tuple[str, int]:
    """Parse, dispatch and render; returns ``(text, exit_code)``."""
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    if args.command == "construct":
        report, code = cmd_construct(cfg)
    elif args.command == "verify":
        selector = "all" if args.all else args.lemma
        if not selector:
            raise UsageError("verify needs --lemma <id|all> or --all")
        report, code = cmd_verify(cfg, selector)
    elif args.command == "enumerate-rc":
        report, code = cmd_enumerate_rc(cfg)
    else:
        report, code = cmd_dump(cfg, args.recipe)
    return render(report, cfg.out), code


def main(argv=None) -> int:
    try:
        text, code = run(argv)
    except ResourceError as exc:
        _note(f"resource cap: {exc}")
        return EXIT_RESOURCE
    except UsageError as exc:
        _note(f"usage: {exc}")
        return EXIT_USAGE
    except SylowLieError as exc:
        _note(f"error: {exc}")
        return exc.exit_code
    print(text)
    return code


__all__ = ["RunConfig", "main", "run", "build_parser", "parse_modulus"]


if __name__ == "__main__":
    sys.exit(main())
