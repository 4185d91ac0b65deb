"""Command-line interface: analyze | enumerate | cyclic-table | scan-theorem2 | hw."""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from typing import Optional, Sequence

from covertab import __version__
from covertab.classify import classify, cyclic_special_table, distinct_moduli, theorem2_scan
from covertab.cover import (
    CoverDatum,
    canonical_key,
    genus,
    group_structure,
    parse_datum,
)
from covertab.enumerate import DEFAULT_MAX_RAW, SearchSpec, enumerate_data, records_to_csv
from covertab.errors import CovertabError
from covertab.hasse_witt import (
    DEFAULT_TERM_LIMIT,
    choose_prime,
    hw_block_symbolic,
    hw_blocks,
    is_ordinary_at,
    ordinarity_scan,
    point_tuples,
    prime_context,
)
from covertab.spectrum import condition_star, dim_SG, spectrum_table


def _int_list(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _int_range(text: str) -> tuple[int, int]:
    vals = _int_list(text)
    return (min(vals), max(vals))


def _read_datum(text: str) -> CoverDatum:
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    return parse_datum(text)


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _meta_lines(args, extra: dict) -> list[str]:
    meta = {"generator": f"covertab {__version__}", **extra}
    if not args.no_meta:
        meta["created"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return [f"# {k}: {v}" for k, v in meta.items()]


# -- analyze ----------------------------------------------------------------------


def analysis(d: CoverDatum) -> dict:
    report = classify(d)
    table = spectrum_table(d)
    star, witness = condition_star(d)
    return {
        "datum": d.to_text(),
        "N": d.N,
        "m": d.m,
        "s": d.s,
        "genus": genus(d),
        "group": list(group_structure(d).invariant_factors),
        "rows_independent": d.rows_independent,
        "reducible_modulus": d.reducible_modulus,
        "key": canonical_key(d).hex(),
        "spectrum": [
            {"n": list(r.character.n), "alpha": list(r.alpha), "d": r.d, "d_dual": r.d_dual,
             "order2": r.order2}
            for r in table.records
        ],
        "dim_SG": dim_SG(d),
        "condition_star": {"holds": star, "witness": list(witness.alpha) if witness else None},
        "monodromy_bound": report.bound,
        "report": report.to_dict(),
    }


def _human(info: dict) -> str:
    lines = [
        f"datum      {info['datum']}",
        f"genus      {info['genus']}",
        "group      " + (" x ".join(f"Z/{f}" for f in info["group"]) or "trivial"),
        f"s - 3      {info['s'] - 3}",
        f"dim S(G)   {info['dim_SG']}",
        f"bound      {info['monodromy_bound']}",
        f"cond (*)   {info['condition_star']['holds']}",
        f"verdict    {info['report']['verdict']} ({info['report']['rule'] or '-'})",
        "",
        f"{'alpha':<{3 * info['s'] + 2}} d  d*  ord2",
    ]
    for r in info["spectrum"]:
        alpha = " ".join(f"{x:>2}" for x in r["alpha"])
        lines.append(f"{alpha:<{3 * info['s'] + 2}} {r['d']:<2} {r['d_dual']:<3} {int(r['order2'])}")
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    d = _read_datum(args.datum)
    info = analysis(d)
    if args.format in ("json", "both"):
        sys.stdout.write(json.dumps(info, sort_keys=True) + "\n")
    if args.format == "both":
        sys.stdout.write("\n")
    if args.format in ("table", "both"):
        sys.stdout.write(_human(info))
    return 0


# -- enumerate --------------------------------------------------------------------


def cmd_enumerate(args) -> int:
    spec = SearchSpec(
        N_values=tuple(args.N),
        m_range=args.m,
        s_range=args.s,
        shape=args.shape,
        genus_range=args.genus,
        rows_independent=None if args.independent is None else args.independent == "yes",
        verdict=args.verdict,
        column_perm=not args.no_column_perm,
        max_raw=args.max_raw,
    )
    records = list(enumerate_data(spec, workers=args.workers))
    _emit(records_to_csv(records), args.out)
    if args.manifest:
        manifest = {
            "generator": f"covertab {__version__}",
            "spec": spec.to_json(),
            "equivalence": {
                "row_span": True,
                "column_permutation": spec.column_perm,
                "modulus_reduction": True,
                "row_permutation": True,
            },
            "raw_size": spec.raw_size(),
            "classes": len(records),
        }
        if not args.no_meta:
            manifest["created"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        with open(args.manifest, "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


# -- cyclic-table -----------------------------------------------------------------


def cmd_cyclic_table(args) -> int:
    table = cyclic_special_table(args.nmax, args.smax, workers=args.workers,
                                 column_perm=not args.no_column_perm)
    Ns = distinct_moduli(table)
    lines = _meta_lines(args, {
        "bounds": f"N<={args.nmax} 4<=s<={args.smax}",
        "equivalence": f"row_span column_perm={int(not args.no_column_perm)}",
    })
    lines.append("N,s,ramification,genus,dim_SG,key")
    for d in table:
        lines.append(f"{d.N},{d.s},\"({','.join(map(str, d.A[0]))})\",{genus(d)},{dim_SG(d)},"
                     f"{canonical_key(d).hex()}")
    lines.append(f"# distinct_N: {len(Ns)} ({' '.join(map(str, Ns))})")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# -- scan-theorem2 ----------------------------------------------------------------


def cmd_scan_theorem2(args) -> int:
    scan = theorem2_scan(args.N, irreducible_only=not args.include_reducible, workers=args.workers)
    lines = _meta_lines(args, {
        "N": " ".join(map(str, sorted(set(args.N)))),
        "irreducible_only": int(not args.include_reducible),
    })
    lines.append("shape,key,matrix,verdict,rule,dim_SG,bound")
    for shape, hits in scan.items():
        for h in hits:
            r = h.report
            lines.append(f"{shape},{h.key.hex()},{h.datum.to_text()},{r.verdict.value},"
                         f"{r.rule or ''},{r.dim_SG},{r.bound}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


# -- hw ---------------------------------------------------------------------------


def cmd_hw(args) -> int:
    d = _read_datum(args.datum)
    ctx = prime_context(d.N, args.p) if args.p is not None else choose_prime(d.N, 3)
    out: list[str] = [f"# p={ctx.p} q={ctx.q}"]
    if args.symbolic:
        blocks = []
        for r in spectrum_table(d).records:
            b = hw_block_symbolic(d, r.character.n, ctx, term_limit=args.term_limit)
            blocks.append({"n": list(r.character.n), "alpha": list(r.alpha), "size": b.size,
                           "entries": b.to_json()})
        out.append(json.dumps(blocks))
    elif args.points is not None:
        z = _int_list(args.points)
        for b in hw_blocks(d, ctx, z):
            out.append(f"# n={list(b.n)} alpha={list(b.alpha)} size={b.size}")
            out.append(b.to_csv().rstrip("\n") if b.size else "(empty)")
        out.append(f"ordinary: {is_ordinary_at(d, ctx, z)}")
    else:
        scan = ordinarity_scan(d, ctx, samples=args.samples, seed=args.seed)
        out.append(f"tested: {scan.tested} ({'exhaustive' if scan.exhaustive else 'sampled'})")
        out.append(f"ordinary: {scan.ordinary}")
        out.append(f"density: {scan.density:.6f}")
        out.append(f"exists: {scan.exists}")
        if scan.example is not None:
            out.append(f"example: {','.join(map(str, scan.example))}")
        if d.N == 2 and d.s == 4 and d.m == 1:
            from covertab.elliptic import elliptic_trace_oracle

            agree = total = 0
            for z in point_tuples(ctx.p, 4, None if scan.exhaustive else scan.tested, args.seed):
                total += 1
                agree += is_ordinary_at(d, ctx, z) == (elliptic_trace_oracle(ctx, z) % ctx.p != 0)
            out.append(f"oracle_agreement: {agree}/{total}")
    sys.stdout.write("\n".join(out) + "\n")
    return 0


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="covertab", description=__doc__)
    ap.add_argument("--version", action="version", version=f"covertab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, workers=False):
        p.add_argument("--out", "-o", default=None, help="output file (default stdout)")
        p.add_argument("--no-meta", action="store_true", help="omit the timestamp from outputs")
        if workers:
            p.add_argument("--workers", type=int, default=None,
                           help="worker processes (capped by COVERTAB_THREADS)")

    p = sub.add_parser("analyze", help="genus, group, spectrum and verdict for one datum")
    p.add_argument("datum", help="'N:row/row', a JSON object, or @file")
    p.add_argument("--format", choices=["both", "json", "table"], default="both")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("enumerate", help="sweep a box of data, one row per isomorphism class")
    p.add_argument("--N", type=_int_list, required=True, help="moduli, e.g. 3 or 3,4 or 2-6")
    p.add_argument("--m", type=_int_range, default=(1, 1))
    p.add_argument("--s", type=_int_range, default=(4, 4))
    p.add_argument("--shape", choices=["I", "II", "III", "IV"], default=None)
    p.add_argument("--genus", type=_int_range, default=None)
    p.add_argument("--independent", choices=["yes", "no"], default=None)
    p.add_argument("--verdict", choices=["Special", "NotSpecial", "Undecided"], default=None)
    p.add_argument("--no-column-perm", action="store_true")
    p.add_argument("--max-raw", type=int, default=DEFAULT_MAX_RAW)
    p.add_argument("--manifest", default=None, help="write a JSON manifest here")
    common(p, workers=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("cyclic-table", help="single-row families with dim S(G) = s - 3")
    p.add_argument("--nmax", type=int, default=24)
    p.add_argument("--smax", type=int, default=8)
    p.add_argument("--no-column-perm", action="store_true")
    common(p, workers=True)
    p.set_defaults(func=cmd_cyclic_table)

    p = sub.add_parser("scan-theorem2", help="two-row five-point shapes I-IV")
    p.add_argument("--N", type=_int_list, default=[3, 4, 5, 6])
    p.add_argument("--include-reducible", action="store_true",
                   help="also scan data with a row killed by a nonzero scalar")
    common(p, workers=True)
    p.set_defaults(func=cmd_scan_theorem2)

    p = sub.add_parser("hw", help="Hasse-Witt blocks and ordinarity in characteristic p")
    p.add_argument("datum")
    p.add_argument("--p", type=int, default=None)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--points", default=None, help="comma-separated z_1..z_s")
    g.add_argument("--scan", action="store_true", help="ordinarity scan (the default)")
    g.add_argument("--symbolic", action="store_true")
    p.add_argument("--term-limit", type=int, default=DEFAULT_TERM_LIMIT)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_hw)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CovertabError as exc:
        sys.stderr.write(f"{exc.name}: {exc}\n")
        return exc.exit_code
    except ValueError as exc:
        sys.stderr.write(f"BadArguments: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
