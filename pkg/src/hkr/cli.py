"""Command line interface over the computational modules.

Every subcommand is a thin wrapper around one library operation: parse
arguments, call the operation, serialize the result.  Output is
deterministic (canonical orderings, no timestamps) so identical
invocations produce byte-identical reports, which is what makes the
result cache safe: entries are keyed by the canonical parameter string
and validated for byte-identity by the self test.

Exit codes: 0 success, 1 computational failure (a cap was exceeded or a
computation reported failure), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import tempfile
import time
from contextlib import redirect_stdout
from dataclasses import dataclass
from pathlib import Path

from . import acceptance
from .charmap import (
    adams_psi,
    character_map,
    character_table,
    galois_fixed_dim,
    psi_level,
    total_power,
)
from .commuting import (
    DEFAULT_WORK_CAP,
    gl_action_orbits,
    hom_tuples,
    rank_prediction,
    subgroup_count,
    tuple_classes,
    zpn_set_count,
)
from .errors import CapExceeded, HkrError, ParseError
from .fgl import (
    DEFAULT_TRUNCATION,
    angle_series,
    coprimality_check,
    m_series,
    make_fgl,
    reduce_series_mod,
    weierstrass_degree,
)
from .groupcore import DEFAULT_ORDER_CAP, named_group
from .inertia import (
    fix_n,
    gset_from_json,
    iterate_fix_check,
    loops_pgroup_check,
    orbit_census,
    trivial_gset,
)
from .levelrings import cpk_ring, drinfeld_dk, localize_c0k, vandermonde_det

__all__ = ["Config", "CacheEntry", "run", "main", "GROUP_GRAMMAR", "SCHEMA_VERSION"]

SCHEMA_VERSION = "1"

GROUP_GRAMMAR = (
    "expr := atom ('*' atom)*; "
    "atom := Sym(m) | Cyc(m) | Dih(m) | Q8 | Perm(degree; gen, ...) | (expr); "
    "gen := cycle+; cycle := (i j ...) on points 0..degree-1"
)


@dataclass(frozen=True)
class Config:
    """Resolved per-invocation settings."""

    order_cap: int = DEFAULT_ORDER_CAP
    tuple_work_cap: int = DEFAULT_WORK_CAP
    truncation_default: int = DEFAULT_TRUNCATION
    cache_path: str | None = None
    output_format: str = "json"

    def __post_init__(self):
        if self.order_cap <= 0 or self.tuple_work_cap <= 0 or self.truncation_default <= 0:
            raise ValueError("caps must be positive")
        if self.output_format not in ("json", "csv", "plain"):
            raise ValueError(f"unknown output format {self.output_format!r}")


@dataclass(frozen=True)
class CacheEntry:
    """One cached report: canonical key, rendered payload, schema version."""

    key: str
    value: str
    version: str

    def to_json(self) -> dict:
        return {"key": self.key, "value": self.value, "version": self.version}

    @staticmethod
    def from_json(doc: dict) -> CacheEntry:
        return CacheEntry(doc["key"], doc["value"], doc["version"])


# ---------------------------------------------------------------------------
# cache


def _resolve_cache_path(args) -> str | None:
    if args.no_cache:
        return None
    if args.cache:
        return args.cache
    env = os.environ.get("HKR_CACHE")
    if env:
        return env
    xdg = os.environ.get("XDG_CACHE_HOME")
    base = Path(xdg) if xdg else Path.home() / ".cache"
    return str(base / "hkr")


def _cache_key(args) -> str:
    parts = [SCHEMA_VERSION, args.command]
    skip = {"command", "cache", "no_cache", "verbose"}
    for name in sorted(vars(args)):
        if name in skip:
            continue
        value = getattr(args, name)
        if name == "gset" and value:
            # key on content, not path, so edited files miss cleanly
            value = hashlib.sha256(Path(value).read_bytes()).hexdigest()
        parts.append(f"{name}={value}")
    return "|".join(parts)


def _cache_file(cache_path: str, key: str) -> Path:
    digest = hashlib.sha256(key.encode("utf-8")).hexdigest()
    return Path(cache_path) / f"{digest}.json"


def _cache_load(cache_path: str, key: str) -> str | None:
    path = _cache_file(cache_path, key)
    try:
        entry = CacheEntry.from_json(json.loads(path.read_text(encoding="utf-8")))
    except (OSError, ValueError, KeyError):
        return None
    if entry.key != key or entry.version != SCHEMA_VERSION:
        return None
    return entry.value


def _cache_store(cache_path: str, key: str, value: str):
    path = _cache_file(cache_path, key)
    path.parent.mkdir(parents=True, exist_ok=True)
    entry = CacheEntry(key, value, SCHEMA_VERSION)
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    tmp.write_text(json.dumps(entry.to_json(), sort_keys=True), encoding="utf-8")
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# serialization helpers


def _frac_list(coeffs) -> list[str]:
    return [str(c) for c in coeffs]


def _tuple_entry_strings(t) -> list[str]:
    return [g.cycle_string() for g in t.entries]


def _render_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _class_descriptors(classes) -> list[dict]:
    return [
        {"representative": c.representative.cycle_string(), "size": c.size}
        for c in classes
    ]


def _class_functions_payload(G, functions, classes) -> dict:
    return {
        "group": G.name,
        "classes": _class_descriptors(classes),
        "characters": [f.to_json() for f in functions],
    }


def _class_functions_plain(functions) -> str:
    lines = []
    for f in functions:
        values = "  ".join(v.to_text() for v in f.values)
        lines.append(f"{f.label or '?'}: {values}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (payload, plain text, csv rows or None)


def _cmd_rank(args):
    G = named_group(args.group)
    value = rank_prediction(G, args.p, args.n)
    payload = {"group": G.name, "p": args.p, "n": args.n, "rank": value}
    rows = [("group", "p", "n", "rank"), (G.name, args.p, args.n, value)]
    return payload, str(value), rows


def _cmd_tuples(args):
    G = named_group(args.group)
    homs = hom_tuples(G, args.p, args.n)
    classes = tuple_classes(G, args.p, args.n)
    payload = {
        "group": G.name,
        "p": args.p,
        "n": args.n,
        "tuple_count": len(homs),
        "class_count": len(classes),
        "classes": [
            {"entries": _tuple_entry_strings(c.representative), "size": c.size}
            for c in classes
        ],
    }
    plain = f"{len(homs)} commuting tuples in {len(classes)} classes"
    return payload, plain, None


def _cmd_gl_orbits(args):
    G = named_group(args.group)
    orbits = gl_action_orbits(G, args.p, args.n, args.k)
    payload = {
        "group": G.name,
        "p": args.p,
        "n": args.n,
        "k": args.k,
        "orbit_count": len(orbits),
        "orbits": [
            {
                "class_count": len(orbit),
                "classes": [_tuple_entry_strings(c.representative) for c in orbit],
            }
            for orbit in orbits
        ],
    }
    return payload, str(len(orbits)), None


def _cmd_zpn_sets(args):
    value = zpn_set_count(args.p, args.n, args.k)
    payload = {"p": args.p, "n": args.n, "k": args.k, "count": value}
    return payload, str(value), None


def _cmd_subgroups(args):
    value = subgroup_count(args.p, args.n, args.k)
    payload = {"p": args.p, "n": args.n, "k": args.k, "count": value}
    return payload, str(value), None


def _fgl_law(args):
    return make_fgl(args.name, D=args.D)


def _cmd_fgl(args):
    if args.action == "series":
        law = _fgl_law(args)
        series = m_series(law, args.m)
        payload = {
            "law": law.name,
            "D": law.degree,
            "m": args.m,
            "series": series.to_text(),
        }
        return payload, series.to_text(), None
    if args.action == "angle":
        law = _fgl_law(args)
        series = angle_series(law, args.p, args.k)
        payload = {
            "law": law.name,
            "D": law.degree,
            "p": args.p,
            "k": args.k,
            "series": series.to_text(),
        }
        return payload, series.to_text(), None
    if args.action == "wdeg":
        law = _fgl_law(args)
        reduced = reduce_series_mod(m_series(law, args.p**args.k), args.p, 1)
        degree = weierstrass_degree(reduced)
        shown = "inf" if degree == math.inf else degree
        payload = {
            "law": law.name,
            "D": law.degree,
            "p": args.p,
            "k": args.k,
            "degree": shown,
        }
        return payload, str(shown), None
    cert = coprimality_check(args.p, args.i, args.j)
    payload = {
        "p": cert.p,
        "i": cert.i,
        "j": cert.j,
        "coprime": cert.coprime,
        "gcd": _frac_list(cert.gcd),
        "cofactor_i": _frac_list(cert.cofactor_i),
        "cofactor_j": _frac_list(cert.cofactor_j),
    }
    return payload, "coprime" if cert.coprime else "not coprime", None


def _cmd_c0_demo(args):
    p, k = args.p, args.k
    if args.action == "ring":
        R = cpk_ring(p, k)
        payload = {
            "p": p,
            "k": k,
            "label": R.label,
            "dimension": R.dimension,
            "modulus": _frac_list(R.modulus),
            "factors": [_frac_list(f) for f in R.crt_factors],
        }
        return payload, f"{R.label}: dimension {R.dimension}", None
    if args.action == "vandermonde":
        det, report = vandermonde_det(p, k)
        payload = {
            "p": p,
            "k": k,
            "ok": report.ok,
            "determinant": det.to_text(),
            "components": [
                {
                    "factor": comp[0],
                    "status": comp[3],
                    "unit": None if comp[4] is None else _frac_list(comp[4]),
                }
                for comp in report.components
            ],
        }
        plain = "unit on every nontrivial component" if report.ok else "comparison failed"
        return payload, plain, None
    if args.action == "localize":
        desc = localize_c0k(p, k)
        payload = {
            "p": p,
            "k": k,
            "dimension": desc.dimension,
            "surviving_factor": _frac_list(desc.surviving_factor),
            "root_description": desc.root_description,
        }
        return payload, f"dimension {desc.dimension}; {desc.root_description}", None
    R = drinfeld_dk(p, k)
    payload = {
        "p": p,
        "k": k,
        "label": R.label,
        "dimension": R.dimension,
        "modulus": _frac_list(R.modulus),
    }
    return payload, f"{R.label}: dimension {R.dimension}", None


def _cmd_chartable(args):
    G = named_group(args.group)
    table = character_table(G)
    payload = table.to_json()
    lines = [f"{G.name}: {table.size} classes, conductor {table.conductor}"]
    for i in range(table.size):
        values = "  ".join(table.value(i, j).to_text() for j in range(table.size))
        lines.append(values)
    return payload, "\n".join(lines), None


def _cmd_charmap(args):
    G = named_group(args.group)
    table = character_table(G)
    images = [
        character_map(G, args.p, table.irreducible(i)) for i in range(table.size)
    ]
    payload = _class_functions_payload(G, images, images[0].classes)
    payload["p"] = args.p
    payload["conductor"] = images[0].conductor
    return payload, _class_functions_plain(images), None


def _cmd_adams(args):
    G = named_group(args.group)
    table = character_table(G)
    images = [adams_psi(args.k, table.irreducible(i)) for i in range(table.size)]
    payload = _class_functions_payload(G, images, table.classes)
    payload["k"] = args.k
    return payload, _class_functions_plain(images), None


def _cmd_power_op(args):
    G = named_group(args.group)
    table = character_table(G)
    images = [total_power(args.k, table.irreducible(i)) for i in range(table.size)]
    payload = {
        "group": G.name,
        "k": args.k,
        "classes": [
            {
                "sym": scls.representative.cycle_string(),
                "group": gcls.representative.cycle_string(),
            }
            for scls, gcls in images[0].classes
        ],
        "characters": [f.to_json() for f in images],
    }
    return payload, _class_functions_plain(images), None


def _cmd_psi_level(args):
    G = named_group(args.group)
    table = character_table(G)
    images = [
        psi_level(args.p, args.k, table.irreducible(i)) for i in range(table.size)
    ]
    payload = _class_functions_payload(G, images, table.classes)
    payload["p"] = args.p
    payload["k"] = args.k
    return payload, _class_functions_plain(images), None


def _cmd_galois_dim(args):
    G = named_group(args.group)
    value = galois_fixed_dim(G, args.p, args.k)
    payload = {"group": G.name, "p": args.p, "k": args.k, "dimension": value}
    return payload, str(value), None


def _fix_gset(args):
    if args.gset:
        doc = json.loads(Path(args.gset).read_text(encoding="utf-8"))
        return gset_from_json(doc)
    if not args.group:
        raise ValueError("fix requires --group or --gset")
    return trivial_gset(named_group(args.group))


def _cmd_fix(args):
    if args.action == "loops-check":
        if not args.group:
            raise ValueError("loops-check requires --group")
        G = named_group(args.group)
        result = loops_pgroup_check(G, args.n)
        payload = {
            "group": G.name,
            "n": args.n,
            "ok": result.ok,
            "hom_count": result.hom_count,
            "all_count": result.all_count,
            "hom_classes": result.hom_classes,
            "all_classes": result.all_classes,
        }
        return payload, "ok" if result.ok else "mismatch", None
    X = _fix_gset(args)
    if args.action == "points":
        F = fix_n(X, args.p, args.n)
        payload = {
            "p": args.p,
            "n": args.n,
            "source": X.to_json(),
            "fixed": F.to_json(),
            "count": len(F.points),
        }
        return payload, str(len(F.points)), None
    if args.action == "census":
        census = orbit_census(X, args.p, args.n)
        payload = {"group": X.group.name, "p": args.p, "n": args.n}
        payload.update(census.to_json())
        plain = (
            f"{census.count} orbits, {census.total_points} points, "
            f"predicted {census.predicted}, "
            + ("consistent" if census.consistent else "inconsistent")
        )
        return payload, plain, None
    result = iterate_fix_check(X, args.p, args.n)
    payload = {"group": X.group.name, "p": args.p, "n": args.n, "ok": result.ok}
    return payload, "ok" if result.ok else "mismatch", None


HANDLERS = {
    "rank": _cmd_rank,
    "tuples": _cmd_tuples,
    "gl-orbits": _cmd_gl_orbits,
    "zpn-sets": _cmd_zpn_sets,
    "subgroups": _cmd_subgroups,
    "fgl": _cmd_fgl,
    "c0-demo": _cmd_c0_demo,
    "chartable": _cmd_chartable,
    "charmap": _cmd_charmap,
    "adams": _cmd_adams,
    "power-op": _cmd_power_op,
    "psi-level": _cmd_psi_level,
    "galois-dim": _cmd_galois_dim,
    "fix": _cmd_fix,
}


# ---------------------------------------------------------------------------
# self test


def _selftest_cache_check() -> bool:
    """Cache transparency: a cold run, a warm run, and an uncached run of the
    same invocation must produce byte-identical reports."""
    samples = [
        ["rank", "--group", "Cyc(4)", "--p", "2", "--n", "2"],
        ["chartable", "--group", "Sym(3)"],
    ]
    with tempfile.TemporaryDirectory() as tmp:
        for argv in samples:
            outputs = []
            for extra in (["--cache", tmp], ["--cache", tmp], ["--no-cache"]):
                buf = io.StringIO()
                with redirect_stdout(buf):
                    code = run(argv + extra)
                if code != 0:
                    return False
                outputs.append(buf.getvalue())
            if outputs[0] != outputs[1] or outputs[1] != outputs[2]:
                return False
    return True


def _cmd_selftest(args) -> int:
    only = set(args.only) if args.only else None
    results = acceptance.run_all(only)
    ok = all(r.ok for r in results)
    if only is None:
        cache_ok = _selftest_cache_check()
        print(f"cache transparency: {'PASS' if cache_ok else 'FAIL'}", flush=True)
        ok = ok and cache_ok
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("json", "csv", "plain"), default="json",
        help="output format (csv is available for rank only)",
    )
    common.add_argument("--cache", metavar="PATH", help="cache directory")
    common.add_argument(
        "--no-cache", action="store_true", help="disable the result cache"
    )
    common.add_argument(
        "--verbose", action="store_true", help="progress notes on stderr"
    )

    parser = argparse.ArgumentParser(
        prog="hkr",
        description="Exact computations with commuting tuples, formal group "
        "laws, and height-1 character theory.",
        epilog=f"group grammar: {GROUP_GRAMMAR}",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, *, group=False, p=False, n=False, k=False, helptext=""):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        if group:
            sp.add_argument("--group", required=True, help="group expression")
        if p:
            sp.add_argument("--p", type=int, required=True, help="prime")
        if n:
            sp.add_argument("--n", type=int, required=True, help="tuple length")
        if k:
            sp.add_argument("--k", type=int, required=True, help="level exponent")
        return sp

    add("rank", group=True, p=True, n=True,
        helptext="predicted free rank over the level ring")
    add("tuples", group=True, p=True, n=True,
        helptext="commuting p-power tuples and their conjugation classes")
    add("gl-orbits", group=True, p=True, n=True, k=True,
        helptext="orbits of the level-k matrix action on tuple classes")
    add("zpn-sets", p=True, n=True, k=True,
        helptext="transitive-set count for rank n at level k")
    add("subgroups", p=True, n=True, k=True,
        helptext="open-subgroup count of index p^k in rank n")

    fgl = sub.add_parser("fgl", help="formal group law computations")
    fgl_sub = fgl.add_subparsers(dest="action", required=True)
    for action in ("series", "angle", "wdeg", "coprime"):
        sp = fgl_sub.add_parser(action, parents=[common])
        sp.set_defaults(command="fgl")
        if action != "coprime":
            sp.add_argument("name", help="additive | multiplicative | honda(p,n)")
            sp.add_argument("--D", type=int, default=DEFAULT_TRUNCATION,
                            help="truncation degree")
        if action == "series":
            sp.add_argument("m", type=int, help="multiplication index")
        if action in ("angle", "wdeg"):
            sp.add_argument("--p", type=int, required=True)
            sp.add_argument("--k", type=int, required=True)
        if action == "coprime":
            sp.add_argument("--p", type=int, required=True)
            sp.add_argument("i", type=int)
            sp.add_argument("j", type=int)

    c0 = sub.add_parser("c0-demo", help="level ring demonstrations")
    c0_sub = c0.add_subparsers(dest="action", required=True)
    for action in ("ring", "vandermonde", "localize", "drinfeld"):
        sp = c0_sub.add_parser(action, parents=[common])
        sp.set_defaults(command="c0-demo")
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--k", type=int, required=True)

    add("chartable", group=True, helptext="exact character table")
    add("charmap", group=True, p=True,
        helptext="image of each irreducible under the character map")
    add("adams", group=True, k=True, helptext="Adams operation on irreducibles")
    add("power-op", group=True, k=True,
        helptext="total power operation on irreducibles")
    add("psi-level", group=True, p=True, k=True,
        helptext="power operation restricted along the translation embedding")
    add("galois-dim", group=True, p=True, k=True,
        helptext="dimension of the Galois-fixed class functions")

    fix = sub.add_parser("fix", help="fixed-point groupoids")
    fix_sub = fix.add_subparsers(dest="action", required=True)
    for action in ("points", "census", "iterate-check", "loops-check"):
        sp = fix_sub.add_parser(action, parents=[common])
        sp.set_defaults(command="fix")
        sp.add_argument("--group", help="group expression (trivial action)")
        sp.add_argument("--gset", metavar="PATH", help="JSON description of the action")
        sp.add_argument("--p", type=int, required=(action != "loops-check"))
        sp.add_argument("--n", type=int, required=True)

    st = sub.add_parser("selftest", parents=[common],
                        help="run the acceptance criteria")
    st.add_argument("--only", type=int, nargs="+", metavar="N",
                    help="restrict to the given criterion numbers")
    return parser


def _render(args, payload, plain, rows) -> str:
    if args.format == "csv":
        if rows is None:
            raise ValueError("csv output is only provided for rank")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(rows)
        return buf.getvalue()
    if args.format == "plain":
        return plain + "\n"
    return _render_json(payload)


def run(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    if args.command == "selftest":
        return _cmd_selftest(args)

    config = Config(
        cache_path=_resolve_cache_path(args), output_format=args.format
    )
    start = time.perf_counter()
    try:
        key = _cache_key(args)
        if config.cache_path is not None:
            hit = _cache_load(config.cache_path, key)
            if hit is not None:
                if args.verbose:
                    print(f"# cache hit: {_cache_file(config.cache_path, key)}",
                          file=sys.stderr)
                sys.stdout.write(hit)
                return 0
        payload, plain, rows = HANDLERS[args.command](args)
        text = _render(args, payload, plain, rows)
        if config.cache_path is not None:
            try:
                _cache_store(config.cache_path, key, text)
            except OSError as exc:
                # a broken cache never fails the computation
                if args.verbose:
                    print(f"# cache write failed: {exc}", file=sys.stderr)
    except ParseError as exc:
        print(f"hkr: {exc}", file=sys.stderr)
        print(f"hkr: group grammar: {GROUP_GRAMMAR}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"hkr: {exc}", file=sys.stderr)
        return 1
    except (HkrError, ArithmeticError) as exc:
        print(f"hkr: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"hkr: {exc}", file=sys.stderr)
        return 2
    if args.verbose:
        print(f"# computed in {time.perf_counter() - start:.3f}s", file=sys.stderr)
    sys.stdout.write(text)
    return 0


def main():
    sys.exit(run())
