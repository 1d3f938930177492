"""Command line entry point ``ffprim``.

Exit codes: 0 existence proven or verified, 2 genuine exception, 1 error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import criteria as cr
from . import verify
from .ffield import extension, format_elem

EXIT_OK, EXIT_ERROR, EXIT_EXCEPTION = 0, 1, 2


def parse_beta(q: int, text: str) -> int:
    """Base-field index of ``text``: a formatted element such as ``-i``, or an integer index."""
    base = extension(q, 1).base
    if q <= 1 << 16:
        for x in base.elements():
            if format_elem(x) == text:
                return base.index(x)
    try:
        value = int(text)
    except ValueError:
        raise ValueError(f"cannot parse {text!r} as an element of F_{q}") from None
    if base.k == 1:
        value %= q
    if not 0 <= value < q:
        raise ValueError(f"element index {value} outside [0, {q})")
    return value


def _fmt_num(x) -> str:
    if x is None:
        return "-"
    return f"{x:.6g}" if isinstance(x, float) else str(x)


def render_report(rep: dict, indent: int = 0) -> list[str]:
    pad = "  " * indent
    line = f"{pad}{rep['theorem']} [{rep['beta_class']}]: {rep['verdict']}"
    if rep["lhs"] is not None:
        line += f"  lhs={_fmt_num(rep['lhs'])} rhs={_fmt_num(rep['rhs'])}"
    cfg = rep.get("config")
    if cfg:
        line += f"  kernel={cfg['kernel']} sieving={cfg['sieving']} delta={cfg['delta']:.6f}"
    out = [line]
    for sub in rep.get("attempts", []):
        out += render_report(sub, indent + 1)
    return out


def _log(args, command: str, inputs: dict, verdict: str, report, t0: float) -> None:
    if args.no_report:
        return
    log = verify.ReportLog(Path(args.out_dir) / "reports" / f"{command}.jsonl")
    log.append(command, inputs, verdict, report, time.perf_counter() - t0)


def cmd_check(args) -> int:
    t0 = time.perf_counter()
    beta = None if args.beta is None else parse_beta(args.q, args.beta)
    v = cr.decide_pair(args.q, args.n, beta)
    ext = extension(args.q, 1)
    target = "every admissible trace" if beta is None else f"trace {format_elem(ext.base.element(beta))}"
    print(f"(q, n) = ({args.q}, {args.n}), {target}: {v.kind}")
    for note in v.notes:
        print(f"  note: {note}")
    for rep in v.reports:
        print("\n".join(render_report(rep.to_dict(), 1)))
    if v.trace_set is not None:
        print("  traces reached: " + ", ".join(format_elem(ext.base.element(b)) for b in v.trace_set))
    if v.missing:
        print("  traces missing: " + ", ".join(format_elem(ext.base.element(b)) for b in v.missing))
    _log(args, "check", {"q": args.q, "n": args.n, "beta": beta}, v.kind, v.to_dict(), t0)
    return EXIT_OK if v.exists else EXIT_EXCEPTION


def cmd_sweep(args) -> int:
    t0 = time.perf_counter()
    res = verify.sweep(args.n, args.qmax, args.beta_class, qmin=args.qmin, threads=args.threads)
    out = Path(args.out_dir) / "tables"
    out.mkdir(parents=True, exist_ok=True)
    stem = f"sweep_n{args.n}_q{res.qmin}-{res.qmax}_{args.beta_class}"
    (out / f"{stem}.json").write_text(json.dumps(res.to_dict(), indent=1, sort_keys=True))
    (out / f"{stem}.csv").write_text(res.to_csv())
    print(f"n={res.n} q in [{res.qmin}, {res.qmax}]: {len(res.rows)} prime powers")
    if res.plain_failures is not None:
        print(f"  failing the unsieved quadratic bound: {res.plain_failures}")
    for c, qs in res.survivors.items():
        print(f"  survivors ({c}, {len(qs)}): {' '.join(map(str, qs))}")
    print(f"  written to {out / stem}.{{json,csv}}")
    _log(args, "sweep", {"n": args.n, "qmin": res.qmin, "qmax": args.qmax, "beta_class": args.beta_class},
         "survivors" if res.survivor_list else "all-analytic", res.to_dict(), t0)
    return EXIT_OK


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    res = verify.verify_pair(args.q, args.n)
    print(f"(q, n) = ({args.q}, {args.n}): {res.status}, {len(res.trace_set)} traces")
    print("  traces: " + ", ".join(res.trace_set))
    if res.missing:
        print("  missing: " + ", ".join(res.missing))
    _log(args, "verify", {"q": args.q, "n": args.n}, res.status, res.to_dict(), t0)
    return EXIT_OK if res.passed else EXIT_EXCEPTION


def cmd_tables(args) -> int:
    t0 = time.perf_counter()
    res = verify.reproduce(args.reproduce, threads=args.threads, out_dir=args.out_dir)
    t1 = res["table1"]
    for s in t1["sweeps"]:
        extra = f", {s['plain_failures']} fail the unsieved bound" if s["plain_failures"] is not None else ""
        print(f"n={s['n']}: {s['candidates']} prime powers up to {s['qmax']}{extra}; "
              + ", ".join(f"{c}: {len(v)} survivors" for c, v in s["survivors"].items()))
    print(f"Table {args.reproduce}: {len(res['rows'])} rows, written to {res['csv']}")
    if res["match"]:
        print("matches the expected table exactly")
    else:
        print("MISMATCH against the expected table:")
        for line in res["diff"]:
            print("  " + line)
    _log(args, "tables", {"reproduce": args.reproduce}, "match" if res["match"] else "mismatch",
         {"rows": res["rows"], "diff": res["diff"]}, t0)
    return EXIT_OK if res["match"] else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ffprim", description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default=".", help="directory receiving reports/ and tables/")
    ap.add_argument("--no-report", action="store_true", help="do not append a JSON-lines record")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide existence for one pair")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", help="trace: integer, or a formatted element such as -i in F_9")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="analytic criteria over a range of q")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--qmin", type=int, default=3)
    p.add_argument("--beta-class", choices=["zero", "nonzero", "all"], default="all")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="exhaustive trace census")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tables", help="regenerate the exception tables")
    p.add_argument("--reproduce", type=int, choices=[1, 2], required=True)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_tables)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, cr.Unresolved, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
