"""Command-line front end.

    qconvbch coset --n 15 --q 2
    qconvbch construct quantum-euclid --n 31 --q 2 --delta 3
    qconvbch verify --n 31 --q 2 --delta 3
    qconvbch sweep --q 2 --n 7..63 --construction quantum-euclid --format csv

Exit codes: 0 success, 1 empty sweep, 2 parameters rejected, 3 certificate
or self-orthogonality failure, 64 malformed flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .convbch import RangeError, construct_conv_bch, verify_theorem1
from .cyclic import (
    all_cosets,
    bch_code,
    bch_dimension_formula,
    cyclotomic_coset,
    delta_max,
    hermitian_delta_bound,
    kappa_formula,
)
from .galois import FIELD_TABLE_ENV, FieldError, multiplicative_order, prime_power
from .matrix import BudgetExceeded, in_rowspan, min_distance_bruteforce
from .polymat import DEFAULT_MAX_STATES, DEFAULT_MAX_WORDS, encode
from .quantumcc import SelfOrthogonalityError, qcbch_euclidean, qcbch_hermitian, quantum_free_distance_oracle

EXIT_OK, EXIT_EMPTY, EXIT_RANGE, EXIT_CERT, EXIT_USAGE = 0, 1, 2, 3, 64
KINDS = ("conv", "quantum-euclid", "quantum-hermitian")
CSV_COLUMNS = [
    "n", "q", "delta", "construction", "status", "reason", "k", "kappa", "memory", "nu",
    "degenerate", "df_lower", "df_lower_source", "df_upper", "dual_df_lower", "purity_bound",
    "basic", "reduced", "dual_containing", "dual_df", "df", "quantum_df",
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_range(text: str) -> list[int]:
    """``7..63``, ``7,15,31`` or a single integer."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return out


def _common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=("json", "csv", "text"), default=d or "json")
    p.add_argument("--seed", type=int, default=d or 0)
    p.add_argument("--max-states", type=int, default=d or DEFAULT_MAX_STATES)
    p.add_argument("--max-words", type=int, default=d or DEFAULT_MAX_WORDS)
    p.add_argument("--weight-cap", type=int, default=d or 64)
    p.add_argument("--force", action="store_true", default=d or False)
    p.add_argument("--config", default=d, help="key = value file pinning field moduli")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="qconvbch", description="Convolutional BCH and quantum convolutional codes")
    _common(top, suppress=False)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("coset", help="cyclotomic cosets of Z_n under multiplication by q")
    _common(p, True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--x", type=int)

    p = sub.add_parser("bch", help="narrow-sense BCH code data")
    _common(p, True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--delta", type=int, required=True, help="designed distance")
    p.add_argument("--b", type=int, default=1)

    p = sub.add_parser("construct", help="build one code and print its JSON")
    _common(p, True)
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)

    p = sub.add_parser("verify", help="run every structural and distance check")
    _common(p, True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--construction", choices=KINDS, default="quantum-euclid")

    p = sub.add_parser("sweep", help="parameter table over ranges of n, q, delta")
    _common(p, True)
    p.add_argument("--n", type=parse_range, required=True)
    p.add_argument("--q", type=parse_range, required=True)
    p.add_argument("--delta", type=parse_range)
    p.add_argument("--construction", choices=KINDS, default="quantum-euclid")
    p.add_argument("--exact", action="store_true", help="also compute exact distances within budget")
    p.add_argument("--jobs", type=int, default=1)
    return top


# -- commands ------------------------------------------------------------------------


def _limit(kind: str, n: int, q: int) -> int:
    return hermitian_delta_bound(n, q) if kind == "quantum-hermitian" else delta_max(n, q)


def _build(kind: str, n: int, q: int, delta: int, force: bool, max_words: int):
    if kind == "conv":
        return construct_conv_bch(n, q, delta, force=force, max_words=max_words)
    if kind == "quantum-euclid":
        return qcbch_euclidean(n, q, delta, force=force, max_words=max_words)
    return qcbch_hermitian(n, q, delta, force=force, max_words=max_words)


def cmd_coset(args) -> tuple[object, int]:
    if args.x is not None:
        cs = [cyclotomic_coset(args.x, args.n, args.q)]
    else:
        cs = all_cosets(args.n, args.q)
    return {"n": args.n, "q": args.q, "cosets": [list(c.members) for c in cs]}, EXIT_OK


def cmd_bch(args) -> tuple[object, int]:
    B = bch_code(args.n, args.q, args.b, args.delta)
    out = B.to_json()
    out["parity_rows"] = B.parity.rows
    try:
        d = min_distance_bruteforce(B.parity, cap=args.weight_cap, max_words=args.max_words)
        out["min_distance"] = {"value": d.to_json(), "source": "bruteforce"}
    except BudgetExceeded:
        out["min_distance"] = {"value": None, "source": f"unavailable: designed distance {args.delta}"}
    return out, EXIT_OK


def cmd_construct(args) -> tuple[object, int]:
    code = _build(args.kind, args.n, args.q, args.delta, args.force, args.max_words)
    conv = code if args.kind == "conv" else code.source
    out = code.to_json()
    if args.kind != "conv":
        out["certificates"] = conv.certificate.to_json()
    status = EXIT_OK if (conv.certificate.ok and not conv.certificate.catastrophic) else EXIT_CERT
    return out, status


def _encode_check(split, seed: int) -> bool:
    rng = np.random.default_rng(seed)
    G = split.generator
    u = rng.integers(0, G.field.order, size=(6, G.rows))
    v = encode(G, u)
    return all(in_rowspan(split.H, frame) for frame in v.frames)


def cmd_verify(args) -> tuple[object, int]:
    kind = args.construction
    n, q, delta = args.n, args.q, args.delta
    herm = kind == "quantum-hermitian"
    Q = q * q if herm else q
    limit = _limit(kind, n, q)
    in_range = 2 <= 2 * delta < limit
    conv = construct_conv_bch(n, Q, delta, force=True, hermitian_subfield=q if herm else None, max_words=args.max_words)
    split = conv.split
    designed = conv.bounds.get("df_lower")
    rep = verify_theorem1(
        split,
        max_states=args.max_states,
        max_words=args.max_words,
        weight_cap=args.weight_cap,
        hermitian_subfield=q if herm else None,
        designed=designed.value if designed else None,
    )
    out = {"n": n, "q": q, "delta": delta, "construction": kind, "in_range": in_range, "range_limit": limit}
    out["degenerate"] = split.degenerate
    warnings = list(conv.warnings)
    checks = [c.to_json() for c in rep.checks]
    ok = rep.ok
    enc = _encode_check(split, args.seed)
    checks.append({"name": "encoded_frames_in_parent_rowspan", "status": "pass" if enc else "fail", "seed": args.seed})
    ok &= enc
    kap = kappa_formula(n, Q, delta)
    if in_range:
        good = kap == split.kappa
        checks.append({"name": "kappa_formula", "status": "pass" if good else "fail", "formula": kap, "rank": split.kappa})
        ok &= good
    else:
        checks.append({"name": "kappa_formula", "status": "skipped(out of range)", "formula": kap, "rank": split.kappa})
    dual_containing = rep.values["parent_dual_containing"]
    if kind != "conv":
        if dual_containing:
            S = _build(kind, n, q, delta, True, args.max_words)
            try:
                qd = quantum_free_distance_oracle(S, args.weight_cap, args.max_states, args.max_words)
                rep.values["quantum_df"] = qd.to_json()
                if designed is not None:
                    good = qd.value >= designed.value
                    checks.append({"name": "quantum_free_distance", "status": "pass" if good else "fail", "designed": designed.value, "value": str(qd)})
                    ok &= good
                else:
                    checks.append({"name": "quantum_free_distance", "status": "pass", "value": str(qd)})
            except (BudgetExceeded, ValueError) as exc:
                checks.append({"name": "quantum_free_distance", "status": f"skipped({'budget' if isinstance(exc, BudgetExceeded) else exc})"})
        else:
            checks.append({"name": "quantum_free_distance", "status": "skipped(parent code is not dual-containing)"})
    if split.degenerate:
        warnings.append("degenerate split: the code is a block code")
    out.update(ok=bool(ok), dual_containing=dual_containing, checks=checks, values=rep.values, warnings=warnings)
    return out, EXIT_OK if ok else EXIT_CERT


def _sweep_point(task) -> dict:
    kind, n, q, delta, opts = task
    row: dict = {"n": n, "q": q, "delta": delta, "construction": kind}
    if math.gcd(n, q) != 1:
        return {**row, "status": "skipped", "reason": f"gcd({n}, {q}) != 1"}
    limit = _limit(kind, n, q)
    if delta is None:
        return {**row, "status": "skipped", "reason": f"no delta with 2 <= 2*delta < {limit}"}
    if not 2 <= 2 * delta < limit:
        return {**row, "status": "skipped", "reason": f"2*delta = {2 * delta} outside [2, {limit})"}
    try:
        code = _build(kind, n, q, delta, False, opts["max_words"])
    except (RangeError, SelfOrthogonalityError, FieldError, ValueError) as exc:
        return {**row, "status": "skipped", "reason": str(exc)}
    conv = code if kind == "conv" else code.source
    herm = kind == "quantum-hermitian"
    Q = q * q if herm else q
    b = conv.bounds
    row.update(
        status="ok",
        reason="",
        k=code.k,
        kappa=conv.kappa,
        kappa_formula=kappa_formula(n, Q, delta),
        r=multiplicative_order(n, Q),
        memory=conv.memory,
        nu=conv.nu,
        degenerate=conv.degenerate,
        in_range=conv.in_range,
        bounds={name: bd.to_json() for name, bd in b.items()},
        certificate=conv.certificate.to_json(),
    )
    if kind != "quantum-hermitian":
        dim = bch_dimension_formula(n, q, delta)
        row["dimension"] = {"value": dim.value, "coset_count": dim.coset_value, "formula": dim.formula_value}
    if kind != "conv":
        row["purity_bound"] = code.purity_bound.to_json() if code.purity_bound else None
        row["parameters"] = code.parameters()
    if opts["exact"]:
        rep = verify_theorem1(
            conv.split,
            max_states=opts["max_states"],
            max_words=opts["max_words"],
            weight_cap=opts["weight_cap"],
            hermitian_subfield=q if herm else None,
            designed=b["df_lower"].value if "df_lower" in b else None,
        )
        row["dual_containing"] = rep.values["parent_dual_containing"]
        row["exact"] = dict(rep.values)
        row["checks"] = {c.name: c.status for c in rep.checks}
        if kind != "conv":
            try:
                qd = quantum_free_distance_oracle(code, opts["weight_cap"], opts["max_states"], opts["max_words"])
                row["exact"]["quantum_df"] = qd.to_json()
            except (BudgetExceeded, ValueError):
                row["exact"]["quantum_df"] = None
        row["exact"].pop("parent_dual_containing", None)
    return row


def sweep_tasks(kind: str, ns, qs, deltas, opts) -> list:
    tasks = []
    for n in ns:
        for q in qs:
            if deltas is not None:
                tasks.extend((kind, n, q, d, opts) for d in deltas)
                continue
            if math.gcd(n, q) != 1 or n < 2:
                tasks.append((kind, n, q, None, opts))
                continue
            limit = _limit(kind, n, q)
            ds = list(range(1, (limit - 1) // 2 + 1))
            if ds:
                tasks.extend((kind, n, q, d, opts) for d in ds)
            else:
                tasks.append((kind, n, q, None, opts))
    return tasks


def run_sweep(kind, ns, qs, deltas=None, exact=False, max_states=DEFAULT_MAX_STATES,
              max_words=DEFAULT_MAX_WORDS, weight_cap=64, jobs=1) -> list[dict]:
    opts = {"exact": exact, "max_states": max_states, "max_words": max_words, "weight_cap": weight_cap}
    tasks = sweep_tasks(kind, ns, qs, deltas, opts)
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            return list(ex.map(_sweep_point, tasks))
    return [_sweep_point(t) for t in tasks]


def cmd_sweep(args) -> tuple[object, int]:
    for q in args.q:
        try:
            prime_power(q)
        except FieldError as exc:
            raise UsageError(str(exc)) from None
    rows = run_sweep(
        args.construction, args.n, args.q, args.delta, args.exact,
        args.max_states, args.max_words, args.weight_cap, args.jobs,
    )
    status = EXIT_OK if any(r["status"] == "ok" for r in rows) else EXIT_EMPTY
    return {"construction": args.construction, "rows": rows}, status


# -- output ---------------------------------------------------------------------------


def _bval(row, name):
    b = row.get("bounds", {}).get(name)
    return None if b is None else b["value"]


def csv_row(row: dict) -> list:
    ex = row.get("exact", {})
    cert = row.get("certificate", {})
    pb = row.get("purity_bound")
    df_lower = row.get("bounds", {}).get("df_lower", {})

    def cell(v):
        if v is None:
            return ""
        if isinstance(v, dict):
            return f">={v['at_least']}"
        return v

    vals = {
        **{k: row.get(k) for k in ("n", "q", "delta", "construction", "status", "reason", "k", "kappa", "memory", "nu", "degenerate")},
        "df_lower": df_lower.get("value"),
        "df_lower_source": df_lower.get("source"),
        "df_upper": _bval(row, "df_upper"),
        "dual_df_lower": _bval(row, "dual_df_lower"),
        "purity_bound": pb["value"] if pb else None,
        "basic": cert.get("basic"),
        "reduced": cert.get("reduced"),
        "dual_containing": row.get("dual_containing"),
        "dual_df": ex.get("dual_df"),
        "df": ex.get("df"),
        "quantum_df": ex.get("quantum_df"),
    }
    return [cell(vals[c]) for c in CSV_COLUMNS]


def render(obj, fmt: str, command: str) -> str:
    if fmt == "json":
        return json.dumps(obj, indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if command == "sweep":
            w.writerow(CSV_COLUMNS)
            for row in obj["rows"]:
                w.writerow(csv_row(row))
        else:
            flat = {k: v for k, v in obj.items() if not isinstance(v, (dict, list))}
            w.writerow(list(flat))
            w.writerow(list(flat.values()))
        return buf.getvalue().rstrip("\n")
    return _render_text(obj, command)


def _render_text(obj, command: str) -> str:
    if command == "coset":
        return "\n".join("{" + ", ".join(map(str, c)) + "}" for c in obj["cosets"])
    if command == "sweep":
        lines = []
        for r in obj["rows"]:
            head = f"n={r['n']} q={r['q']} delta={r['delta']}"
            if r["status"] != "ok":
                lines.append(f"{head}: skipped ({r['reason']})")
            else:
                params = r.get("parameters", "k=%d" % r["k"])
                lines.append(f"{head}: {params} kappa={r['kappa']} df>={_bval(r, 'df_lower')}")
        return "\n".join(lines)
    if command == "verify":
        lines = [f"{c['name']}: {c['status']}" for c in obj["checks"]]
        lines.append("ok" if obj["ok"] else "FAILED")
        return "\n".join(lines)
    return "\n".join(f"{k}: {v}" for k, v in obj.items() if not isinstance(v, (dict, list)))


COMMANDS = {"coset": cmd_coset, "bch": cmd_bch, "construct": cmd_construct, "verify": cmd_verify, "sweep": cmd_sweep}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"qconvbch: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.config:
        os.environ[FIELD_TABLE_ENV] = args.config
    try:
        obj, status = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qconvbch: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RangeError, FieldError) as exc:
        print(f"qconvbch: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except SelfOrthogonalityError as exc:
        print(f"qconvbch: {exc}", file=sys.stderr)
        return EXIT_CERT
    except ValueError as exc:
        print(f"qconvbch: {exc}", file=sys.stderr)
        return EXIT_RANGE
    print(render(obj, args.format, args.command))
    if status == EXIT_EMPTY:
        print("qconvbch: no admissible sweep point", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
