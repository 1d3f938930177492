"""Sweep drivers, exhaustive verification and reproduction of the exception tables."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

from . import __version__
from . import criteria as cr
from .counts import two_primitive_census
from .ffield import extension, format_elem
from .zarith import is_prime, odd_prime_powers

SCHEMA_VERSION = 1


def thread_count() -> int:
    raw = os.environ.get("FFPRIM_THREADS")
    if raw is None or raw == "":
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"FFPRIM_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"FFPRIM_THREADS must be a positive integer, got {raw!r}")
    return n


def _pmap(fn, items, threads: int | None):
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# -- sweeps --------------------------------------------------------------------


def sweep_classes(n: int, beta_class: str) -> list[str]:
    if beta_class == "all":
        return [cr.NONZERO] if n == 2 else [cr.NONZERO, cr.ZERO]
    if beta_class not in cr.BETA_CLASSES:
        raise ValueError(f"unknown beta class {beta_class!r}")
    if n == 2 and beta_class == cr.ZERO:
        raise ValueError("n = 2 has no trace-zero criterion (trace 0 is never reached for q > 3)")
    return [beta_class]


@dataclass
class SweepResult:
    """Analytic verdicts for every odd prime power in ``[qmin, qmax]`` at fixed prime ``n``.

    ``rows`` has one entry per q with ``status`` ``odd-pair``, ``analytic`` or
    ``survivor``; ``survivors`` maps each beta class to the q it leaves open.
    """

    n: int
    qmin: int
    qmax: int
    beta_class: str
    rows: list[dict]
    survivors: dict[str, list[int]]
    plain_failures: int | None = None
    wall_time: float = 0.0
    threads: int = 1

    @property
    def survivor_list(self) -> list[int]:
        return sorted(set().union(*self.survivors.values())) if self.survivors else []

    def to_dict(self) -> dict:
        d = asdict(self)
        d["survivor_list"] = self.survivor_list
        return d

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "q", "status", "routes"])
        for row in self.rows:
            routes = ";".join(f"{c}:{t}" for c, t in row["classes"].items())
            w.writerow([self.n, row["q"], row["status"], routes])
        return buf.getvalue()


def _sweep_one(q: int, n: int, classes: list[str]) -> dict:
    if not cr.is_even_pair(q, n):
        return {"q": q, "status": "odd-pair", "classes": {c: "odd-pair" for c in classes}}
    routes = {}
    for c in classes:
        rep = cr.analytic_check(q, n, c)
        routes[c] = rep.theorem if rep.ok else "survivor"
    row = {"q": q, "status": "survivor" if "survivor" in routes.values() else "analytic", "classes": routes}
    if n == 2:
        row["plain"] = cr.check_n2_plain(q).ok
    return row


def sweep(n: int, qmax: int, beta_class: str = "all", qmin: int = 3, threads: int | None = None) -> SweepResult:
    if not is_prime(n):
        raise ValueError("sweeps are defined for prime n")
    classes = sweep_classes(n, beta_class)
    threads = thread_count() if threads is None else threads
    t0 = time.perf_counter()
    qs = odd_prime_powers(max(qmin, 3), qmax)
    rows = _pmap(lambda q: _sweep_one(q, n, classes), qs, threads)
    survivors = {c: [r["q"] for r in rows if r["classes"][c] == "survivor"] for c in classes}
    plain = sum(1 for r in rows if not r.get("plain", True)) if n == 2 else None
    return SweepResult(n, max(qmin, 3), qmax, beta_class, rows, survivors, plain,
                       time.perf_counter() - t0, threads)


# -- exhaustive verification ---------------------------------------------------


@dataclass
class VerifyResult:
    """Outcome of an exhaustive trace census over F_{q^n}.

    ``trace_set`` lists the formatted traces reached.  When every required
    trace appears the scan may stop early; the set is still exact because the
    only trace outside the requirement (0 for n = 2) is unreachable for q > 3.
    """

    q: int
    n: int
    passed: bool
    trace_set: list[str]
    trace_indices: list[int]
    missing: list[str]
    complete: bool
    scanned: int
    wall_time: float

    @property
    def status(self) -> str:
        return "verified" if self.passed else cr.GENUINE_EXCEPTION

    def to_dict(self) -> dict:
        d = asdict(self)
        d["status"] = self.status
        return d


def verify_pair(q: int, n: int) -> VerifyResult:
    t0 = time.perf_counter()
    cr.classify_pair(q, n)
    if q**n > cr.BRUTE_LIMIT:
        raise ValueError(f"F_{q}^{n} is too large to enumerate")
    ext = extension(q, n)
    need = cr.required_traces(q, n)
    census = two_primitive_census(ext, need)
    seen = sorted(census.support())
    missing = [b for b in need if b not in census.support()]

    def fmt(b):
        return format_elem(ext.base.element(b))

    return VerifyResult(q, n, not missing, [fmt(b) for b in seen], seen, [fmt(b) for b in missing],
                        census.complete, census.scanned, time.perf_counter() - t0)


# -- tables --------------------------------------------------------------------


def _data_rows(name: str) -> list[dict]:
    text = resources.files("ffprim").joinpath("data", name).read_text()
    return list(csv.DictReader(io.StringIO(text)))


def _rows_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({c: row[c] for c in columns})
    return buf.getvalue()


def _diff(expected: list[dict], computed: list[dict], columns: list[str]) -> list[str]:
    def key(r):
        return tuple(str(r[c]) for c in columns)

    exp = {key(r) for r in expected}
    got = {key(r) for r in computed}
    lines = [f"- {','.join(k)}" for k in sorted(exp - got, key=_sort_key)]
    lines += [f"+ {','.join(k)}" for k in sorted(got - exp, key=_sort_key)]
    return lines


def _sort_key(k):
    return tuple(int(x) if x.lstrip("-").isdigit() else 0 for x in k[:2])


def _sweep_limit(n: int, classes) -> int:
    return max(math.ceil(cr.final_threshold(n, c)) for c in classes)


def compute_table1(threads: int | None = None) -> dict:
    """Sweep every prime degree up to its analytic threshold and collect survivors."""
    t0 = time.perf_counter()
    sweeps = []
    rows = []
    s2 = sweep(2, _sweep_limit(2, [cr.NONZERO]), "all", threads=threads)
    sweeps.append(s2)
    n = 3
    while True:
        classes = [cr.NONZERO, cr.ZERO]
        limit = _sweep_limit(n, classes)
        if limit < 3:
            break
        sweeps.append(sweep(n, limit, "all", threads=threads))
        n = next(m for m in range(n + 1, 2 * n + 2) if is_prime(m))
    for s in sweeps:
        for q in s.survivor_list:
            rows.append({"n": s.n, "q": q, "status": "not-dealt-theoretically"})
    return {
        "rows": rows,
        "sweeps": [{"n": s.n, "qmax": s.qmax, "candidates": len(s.rows), "plain_failures": s.plain_failures,
                    "survivors": s.survivors} for s in sweeps],
        "reductions": {f"{m},{c}": [tuple(step) for step in cr.interval_reduction(m, c)]
                       for m, c in [(2, cr.NONZERO), (3, cr.NONZERO), (3, cr.ZERO)]},
        "wall_time": time.perf_counter() - t0,
    }


def compute_table2(table1_rows: list[dict], threads: int | None = None) -> dict:
    """Exhaustively verify each Table 1 pair; the failures with their trace sets form Table 2."""
    t0 = time.perf_counter()
    pairs = [(int(r["n"]), int(r["q"])) for r in table1_rows]
    results = _pmap(lambda nq: verify_pair(nq[1], nq[0]), pairs, threads)
    rows = [
        {"n": v.n, "q": v.q, "status": cr.GENUINE_EXCEPTION, "traces": ";".join(v.trace_set)}
        for v in results if not v.passed
    ]
    return {
        "rows": rows,
        "verified": [v.to_dict() for v in results],
        "wall_time": time.perf_counter() - t0,
    }


TABLE_COLUMNS = {1: ["n", "q", "status"], 2: ["n", "q", "status", "traces"]}


def reproduce(table: int, threads: int | None = None, out_dir: str | Path | None = None) -> dict:
    """Regenerate a table from scratch and diff it against the embedded expected data."""
    if table not in TABLE_COLUMNS:
        raise ValueError("table must be 1 or 2")
    cols = TABLE_COLUMNS[table]
    t1 = compute_table1(threads)
    result = {"table": table, "table1": t1}
    if table == 1:
        computed = t1["rows"]
    else:
        t2 = compute_table2(t1["rows"], threads)
        result["table2"] = t2
        computed = t2["rows"]
    expected = _data_rows(f"table{table}.csv")
    result["rows"] = computed
    result["diff"] = _diff(expected, computed, cols)
    result["match"] = not result["diff"] and _rows_csv(expected, cols) == _rows_csv(computed, cols)
    if out_dir is not None:
        path = Path(out_dir) / "tables" / f"table{table}.csv"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(_rows_csv(computed, cols))
        result["csv"] = str(path)
    return result


# -- report persistence --------------------------------------------------------


@dataclass
class ReportLog:
    """Append-only JSON-lines log, one record per run."""

    path: Path
    records: list[dict] = field(default_factory=list)

    def append(self, command: str, inputs: dict, verdict: str, report, wall_time: float) -> dict:
        record = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "inputs": inputs,
            "verdict": verdict,
            "report": report,
            "wall_time": wall_time,
            "library_version": __version__,
        }
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a") as fh:
            fh.write(json.dumps(record, sort_keys=True, default=_json_default) + "\n")
        self.records.append(record)
        return record

    @staticmethod
    def read(path: str | Path) -> list[dict]:
        with Path(path).open() as fh:
            return [json.loads(line) for line in fh if line.strip()]


def _json_default(obj):
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def strip_timing(record: dict) -> dict:
    """Copy of a record with every ``wall_time`` removed, for determinism checks."""
    if isinstance(record, dict):
        return {k: strip_timing(v) for k, v in record.items() if k != "wall_time"}
    if isinstance(record, list):
        return [strip_timing(v) for v in record]
    return record
