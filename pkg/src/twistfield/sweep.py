"""Rank sweeps over all order-ell twists of a curve with given conductor degree.

Rows are written in enumeration order, which is deterministic, so a partial
CSV doubles as a checkpoint: rerunning the same job skips the rows already
on disk and appends the rest.
"""

from __future__ import annotations

import csv
import io
import json
import multiprocessing as mp
import os
from collections import Counter
from dataclasses import asdict, dataclass, field as dc_field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .characters import OrderLCharacter, enumerate_characters
from .elliptic import CurveOverFqt, constant_curve_with_trace, legendre, second_curve
from .galois import FieldPoly, factor, field
from .lfunction import analytic_rank, twisted_lpoly

CACHE_ENV = "TWISTFIELD_CACHE"
COLUMNS = ("ell", "p", "d", "conductor", "exponents", "delta", "sign_re", "sign_im", "rank")
SIGN_DIGITS = 12


class SweepError(ValueError):
    """The job or an existing checkpoint file is inconsistent."""


def parse_curve(selector: str, p: int) -> CurveOverFqt:
    """legendre | e2 | constant:<trace> | custom:<a>/<b>/<c> (comma separated, low degree first)."""
    if selector == "legendre":
        return legendre(p)
    if selector == "e2":
        return second_curve(p)
    kind, _, arg = selector.partition(":")
    if kind == "constant" and arg:
        return constant_curve_with_trace(p, int(arg)).as_curve()
    if kind == "custom" and arg:
        parts = arg.split("/")
        if len(parts) != 3:
            raise SweepError("custom curves need three coefficient lists a/b/c")
        coeffs = [[int(c) % p for c in part.replace(",", " ").split()] or [0] for part in parts]
        return CurveOverFqt(p, *coeffs, name=selector)
    raise SweepError(f"unknown curve selector {selector!r}")


@dataclass(frozen=True)
class SweepJob:
    curve: str
    ell: int
    p: int
    d: int
    jobs: int = 1
    out: str | None = None
    fmt: str = "csv"
    cache_dir: str | None = None
    witnesses: int = 3

    def __post_init__(self):
        if self.p < 5:
            raise SweepError("curve sweeps need p >= 5")
        if self.d < 1:
            raise SweepError("conductor degree must be positive")
        if self.fmt not in ("csv", "json"):
            raise SweepError("format is csv or json")
        if self.jobs < 1:
            raise SweepError("jobs must be positive")

    def build_curve(self) -> CurveOverFqt:
        return parse_curve(self.curve, self.p)

    def resolved_cache_dir(self) -> str | None:
        return self.cache_dir or os.environ.get(CACHE_ENV) or None


@dataclass
class RankHistogram:
    counts: Counter = dc_field(default_factory=Counter)
    witnesses: dict = dc_field(default_factory=dict)
    keep: int = 3

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def add(self, rank: int, label: str) -> None:
        self.counts[rank] += 1
        bucket = self.witnesses.setdefault(rank, [])
        if len(bucket) < self.keep:
            bucket.append(label)

    def as_tuple(self, width: int | None = None) -> tuple[int, ...]:
        top = max(self.counts, default=-1) + 1
        width = max(width or 0, top)
        return tuple(self.counts.get(r, 0) for r in range(width))

    def to_dict(self) -> dict:
        return {
            "counts": {str(r): self.counts[r] for r in sorted(self.counts)},
            "total": self.total,
            "witnesses": {str(r): self.witnesses[r] for r in sorted(self.witnesses)},
        }


def max_table_degree(E: CurveOverFqt, d: int) -> int:
    """Degree of a_f table covering every character of conductor degree d."""
    worst = E.conductor.degree - E.conductor.infinity + 2 * d - 4 + 2
    return max(worst // 2 + 1, 1)


def _fmt(x: float) -> str:
    return f"{round(x, SIGN_DIGITS) + 0.0:.{SIGN_DIGITS}f}"


def _row_for(E: CurveOverFqt, chi: OrderLCharacter, a_table: np.ndarray) -> dict:
    L = twisted_lpoly(E, chi, a_table, allow_bad_infinity=True)
    w = L.sign_complex()
    return {
        "ell": chi.ell,
        "p": chi.p,
        "d": chi.conductor_degree,
        "conductor": " ".join(map(str, chi.conductor.coeffs)),
        "exponents": " ".join(map(str, chi.exponents)),
        "delta": chi.delta,
        "sign_re": _fmt(w.real),
        "sign_im": _fmt(w.imag),
        "rank": analytic_rank(L),
    }


def character_from_row(row: dict) -> OrderLCharacter:
    p, ell = int(row["p"]), int(row["ell"])
    F = FieldPoly(field(p), [int(c) for c in row["conductor"].split()])
    primes = tuple(P for P, _ in factor(F))
    exps = tuple(int(e) for e in row["exponents"].split())
    return OrderLCharacter(ell, p, primes, exps)


# worker state, set once per process
_WORKER: dict = {}


def _init_worker(selector: str, p: int, a_table: np.ndarray) -> None:
    _WORKER["E"] = parse_curve(selector, p)
    _WORKER["table"] = a_table


def _work(text: str) -> dict:
    return _row_for(_WORKER["E"], OrderLCharacter.parse(text), _WORKER["table"])


def _read_checkpoint(path: Path) -> list[dict]:
    """Complete rows of an earlier run; a torn last line is dropped."""
    if not path.exists():
        return []
    text = path.read_text()
    if not text:
        return []
    if not text.endswith("\n"):
        text = text[: text.rfind("\n") + 1]
    lines = text.splitlines()
    if not lines:
        return []
    if tuple(lines[0].split(",")) != COLUMNS:
        raise SweepError(f"{path} has an unexpected header")
    rows = list(csv.DictReader(io.StringIO(text)))
    path.write_text(text)
    return rows


def _checkpoint_path(job: SweepJob) -> Path | None:
    if job.out is None:
        return None
    out = Path(job.out)
    return out if job.fmt == "csv" else out.with_name(out.name + ".partial.csv")


def characters_for(job: SweepJob, E: CurveOverFqt) -> Iterator[OrderLCharacter]:
    return enumerate_characters(job.ell, job.p, job.d, avoid=E.bad_places())


def run_sweep(job: SweepJob, progress=None) -> tuple[RankHistogram, list[dict]]:
    """Histogram of analytic ranks plus one row per character."""
    E = job.build_curve()
    a_table = E.a_table(max_table_degree(E, job.d), cache_dir=job.resolved_cache_dir())
    chars = list(characters_for(job, E))
    ckpt = _checkpoint_path(job)
    done = _read_checkpoint(ckpt) if ckpt else []
    if len(done) > len(chars):
        raise SweepError("checkpoint has more rows than the job has characters")
    for row, chi in zip(done, chars):
        key = (" ".join(map(str, chi.conductor.coeffs)), " ".join(map(str, chi.exponents)))
        if (row["conductor"], row["exponents"]) != key or int(row["ell"]) != job.ell or int(row["p"]) != job.p:
            raise SweepError("checkpoint rows do not match this job")
    rows = [_normalize(r) for r in done]
    todo = chars[len(done):]

    sink = None
    if ckpt is not None:
        ckpt.parent.mkdir(parents=True, exist_ok=True)
        fresh = not done
        sink = open(ckpt, "a" if not fresh else "w", newline="")
        writer = csv.DictWriter(sink, fieldnames=COLUMNS, lineterminator="\n")
        if fresh:
            writer.writeheader()
            sink.flush()
    try:
        for row in _compute(job, E, a_table, todo):
            rows.append(row)
            if sink is not None:
                writer.writerow(row)
                sink.flush()
            if progress is not None:
                progress(len(rows), len(chars))
    finally:
        if sink is not None:
            sink.close()

    hist = RankHistogram(keep=job.witnesses)
    for row in rows:
        hist.add(int(row["rank"]), f"{row['conductor']}|{row['exponents']}")
    if job.out is not None and job.fmt == "json":
        Path(job.out).write_text(json.dumps(sweep_json(job, hist, rows), indent=1) + "\n")
        ckpt.unlink()
    return hist, rows


def _normalize(row: dict) -> dict:
    out = dict(row)
    for k in ("ell", "p", "d", "delta", "rank"):
        out[k] = int(out[k])
    return out


def _compute(job: SweepJob, E: CurveOverFqt, a_table: np.ndarray, todo: list[OrderLCharacter]) -> Iterable[dict]:
    if job.jobs == 1 or len(todo) < 2:
        for chi in todo:
            yield _row_for(E, chi, a_table)
        return
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    with ctx.Pool(job.jobs, initializer=_init_worker, initargs=(job.curve, job.p, a_table)) as pool:
        chunk = max(1, min(64, len(todo) // (4 * job.jobs)))
        yield from pool.imap(_work, [chi.serialize() for chi in todo], chunksize=chunk)


def sweep_json(job: SweepJob, hist: RankHistogram, rows: list[dict]) -> dict:
    meta = {k: v for k, v in asdict(job).items() if k in ("curve", "ell", "p", "d")}
    return {"job": meta, "histogram": hist.to_dict(), "columns": list(COLUMNS), "rows": rows}


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()
