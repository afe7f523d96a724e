"""Command-line interface.

Every command prints one result document (json, csv or text) and exits 0 iff all checks pass.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from fractions import Fraction

from .arith import is_prime, valuation
from .cache import DiskStore, canonical_json, default_cache_dir
from .classical import classical_dims
from .decomposition import HECKE_WINDOW, verify_theorems
from .epsilon import dichotomy_check, twist_ratio, tunnell_multiplicity, wd_representations
from .local_division.classify import records_of_conductor
from .local_quadratic import LocalFieldDesc
from .quaternion.brandt import brandt_matrix, cusp_dimension, eisenstein_dimension
from .quaternion.orders import special_order


class UsageError(ValueError):
    pass


def _require_odd_prime(p: int) -> None:
    if p == 2:
        raise UsageError("p = 2 is not supported: the local analysis needs an odd residue characteristic")
    if not is_prime(p):
        raise UsageError(f"p = {p} is not prime")


def _level_exponent(p: int, n: int) -> int:
    if n < 1 or p ** valuation(n, p) != n:
        raise UsageError(f"level {n} is not a power of {p}")
    return valuation(n, p)


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _flatten(row: dict) -> dict:
    out = {}
    for k, v in row.items():
        if isinstance(v, dict):
            for k2, v2 in v.items():
                out[f"{k}.{k2}"] = v2
        elif isinstance(v, list):
            out[k] = json.dumps(_jsonable(v), sort_keys=True)
        else:
            out[k] = v
    return out


def emit(doc: dict, rows_key: str | None, fmt: str, out) -> None:
    doc = _jsonable(doc)
    if fmt == "json" or rows_key is None and fmt == "csv":
        out.write(canonical_json(doc) + "\n")
        return
    rows = [_flatten(r) for r in doc.get(rows_key, [])] if rows_key else []
    if fmt == "csv":
        buf = io.StringIO()
        fields = sorted({k for r in rows for k in r})
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        out.write(buf.getvalue())
        return
    for k in sorted(doc):
        if k != rows_key:
            out.write(f"{k}: {json.dumps(doc[k], sort_keys=True)}\n")
    for r in rows:
        out.write("  ".join(f"{k}={r[k]}" for k in sorted(r)) + "\n")


def cmd_local_table(args) -> tuple[dict, str, bool]:
    _require_odd_prime(args.p)
    rows = []
    for c in range(1, args.max_conductor + 1):
        for rec in records_of_conductor(args.p, c):
            if args.ext and rec.label not in (args.ext,):
                continue
            rows.append(rec.as_row())
    ok = all(r["match"] for r in rows)
    doc = {"command": "local-table", "p": args.p, "max_conductor": args.max_conductor,
           "mismatches": sum(not r["match"] for r in rows), "rows": rows, "pass": ok}
    return doc, "rows", ok


def cmd_dichotomy(args) -> tuple[dict, str, bool]:
    _require_odd_prime(args.p)
    rows = [r.as_dict() for r in dichotomy_check(args.p, args.conductor)]
    ok = bool(rows) and all(r["pass"] for r in rows)
    doc = {"command": "dichotomy", "p": args.p, "conductor": args.conductor, "rows": rows, "pass": ok}
    return doc, "rows", ok


def cmd_epsilon(args) -> tuple[dict, str, bool]:
    _require_odd_prime(args.p)
    base = LocalFieldDesc(args.p)
    rows = []
    labels = (args.ext,) if args.ext else ("K", "L")
    for label in labels:
        if label == "M":
            raise UsageError("the inducing extension must be ramified (K or L)")
        for idx, sigma in enumerate(wd_representations(base, label, args.kappa_conductor)):
            for twist in ("K", "L"):
                ratio = twist_ratio(sigma, base.ext(twist))
                rows.append({
                    "inducing": label,
                    "kappa": idx,
                    "kappa_conductor": sigma.kappa.conductor,
                    "artin_conductor": sigma.a,
                    "twist": twist,
                    "ratio": ratio,
                    "tunnell": {e: tunnell_multiplicity(sigma, base.ext(e)) for e in ("K", "L", "M")},
                })
    doc = {"command": "epsilon", "p": args.p, "kappa_conductor": args.kappa_conductor, "rows": rows,
           "pass": True}
    return doc, "rows", True


def _order_for(args):
    _require_odd_prime(args.p)
    n = args.N if args.N is not None else args.p
    r = _level_exponent(args.p, n)
    order = special_order(args.p, args.ext or "K", max(r, 1))
    if order.level != n:
        raise UsageError(f"O_{r}({args.ext}) has level {order.level}, not {n}")
    return order


def cmd_classset(args) -> tuple[dict, str, bool]:
    order = _order_for(args)
    store = DiskStore(args.cache_dir)
    cs = store.class_set(order)
    rows = [{"index": i, "nrd": str(n), "units": e} for i, (n, e) in enumerate(zip(cs.norms, cs.units))]
    doc = {"command": "classset", "p": args.p, "order": order.name(), "level": order.level, "h": cs.h,
           "mass": str(cs.mass), "neighbour_prime": cs.neighbour_prime,
           "dim_eis": eisenstein_dimension(cs), "dim_cusp": cusp_dimension(cs), "rows": rows, "pass": True}
    if order.label and order.label[1] == 1:
        doc["pass"] = cs.mass == Fraction(args.p - 1, 24)
    return doc, "rows", doc["pass"]


def cmd_brandt(args) -> tuple[dict, str, bool]:
    order = _order_for(args)
    store = DiskStore(args.cache_dir)
    cs = store.class_set(order)
    op = brandt_matrix(cs, args.n)
    sums = op.row_sums()
    ok = op.is_self_adjoint() and (not is_prime(args.n) or all(s == args.n + 1 for s in sums))
    rows = [{"row": i, "entries": [str(x) for x in r]} for i, r in enumerate(op.matrix)]
    doc = {"command": "brandt", "p": args.p, "order": order.name(), "n": args.n, "units": list(cs.units),
           "row_sums": [str(s) for s in sums], "self_adjoint": op.is_self_adjoint(), "rows": rows, "pass": ok}
    return doc, "rows", ok


def cmd_dims(args) -> tuple[dict, str, bool]:
    total, new = classical_dims(args.N, args.k)
    doc = {"command": "dims", "N": args.N, "k": args.k, "dim_cusp": total, "dim_new": new, "pass": True}
    return doc, None, True


def cmd_verify(args) -> tuple[dict, str, bool]:
    _require_odd_prime(args.p)
    r_max = _level_exponent(args.p, args.max_level)
    store = DiskStore(args.cache_dir, max(args.hecke_window, HECKE_WINDOW))
    report = verify_theorems(args.p, r_max, store, args.hecke_window, args.threads)
    return report, "checks", report["all_pass"]


COMMANDS = {
    "local-table": cmd_local_table,
    "dichotomy": cmd_dichotomy,
    "epsilon": cmd_epsilon,
    "classset": cmd_classset,
    "brandt": cmd_brandt,
    "dims": cmd_dims,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quatrestrict", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, p_required=True):
        if p_required:
            sp.add_argument("--p", type=int, required=True, help="odd prime")
        sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--cache-dir", default=None, help="overrides the cache directory environment variable")
        return sp

    sp = common(sub.add_parser("local-table", help="invariant dimensions of local representations"))
    sp.add_argument("--max-conductor", type=int, required=True)
    sp.add_argument("--ext", choices=("K", "L", "M"), default=None, help="only rows induced from this extension")
    sp = common(sub.add_parser("dichotomy", help="torus multiplicities on both sides of the correspondence"))
    sp.add_argument("--conductor", type=int, required=True)
    sp = common(sub.add_parser("epsilon", help="twisted epsilon-factor ratios of dihedral parameters"))
    sp.add_argument("--kappa-conductor", type=int, required=True)
    sp.add_argument("--ext", choices=("K", "L", "M"), default=None)
    for name, help_text in (("classset", "right ideal classes of a special order"),
                            ("brandt", "Brandt matrix of a special order")):
        sp = common(sub.add_parser(name, help=help_text))
        sp.add_argument("--ext", choices=("K", "L", "M"), default="K")
        sp.add_argument("--N", type=int, default=None, help="level p^r of the order (default p)")
        if name == "brandt":
            sp.add_argument("--n", type=int, required=True)
    sp = common(sub.add_parser("dims", help="dimensions of weight-k cusp forms on Gamma_0(N)"), p_required=False)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--k", type=int, default=2)
    sp = common(sub.add_parser("verify", help="old/new decomposition checks along the order ladder"))
    sp.add_argument("--max-level", type=int, required=True)
    sp.add_argument("--hecke-window", type=int, default=HECKE_WINDOW)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    if args.cache_dir is None:
        args.cache_dir = str(default_cache_dir())
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    start = time.perf_counter()
    try:
        doc, rows_key, ok = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    emit(doc, rows_key, args.format, sys.stdout)
    logging.getLogger(__name__).info("%s finished in %.2fs", args.command, time.perf_counter() - start)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
