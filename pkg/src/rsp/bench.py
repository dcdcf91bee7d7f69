"""Timing harness comparing the two consistency checkers."""

from __future__ import annotations

import os
import statistics
from dataclasses import asdict, dataclass

from .consistency import check_overlap, check_solvable
from .corpus import family
from .presentation import parse

METHODS = {"solv": check_solvable, "overlap": check_overlap}


@dataclass
class BenchRecord:
    input: str
    gens: int
    method: str
    verdict: str
    ms: float
    steps: int

    def to_dict(self):
        return asdict(self)


def load_input(spec):
    """A presentation from a file path or a family spec like ``ut(12,2)``."""
    if os.path.exists(spec):
        with open(spec) as fh:
            return parse(fh.read())
    return family(spec)


def run_bench(inputs, methods=("solv", "overlap"), reps=1, step_limit=None):
    records = []
    for spec in inputs:
        p = load_input(spec)
        for method in methods:
            check = METHODS[method]
            times, verdicts, steps = [], set(), None
            for _ in range(max(1, reps)):
                rep = check(p, step_limit=step_limit)
                times.append(rep.elapsed * 1000)
                verdicts.add(rep.verdict)
                steps = rep.steps
            verdict = verdicts.pop() if len(verdicts) == 1 else "unstable"
            records.append(BenchRecord(spec, p.m, method, verdict,
                                       round(statistics.median(times), 3), steps))
    return records


def format_table(records):
    """One row per input, with time and step columns per method."""
    methods = list(dict.fromkeys(r.method for r in records))
    rows = {}
    for r in records:
        rows.setdefault((r.input, r.gens), {})[r.method] = r
    header = ["input", "#gens"]
    for m in methods:
        header += [f"{m} ms", f"{m} steps", f"{m} verdict"]
    table = [header]
    for (name, gens), per in rows.items():
        row = [name, str(gens)]
        for m in methods:
            r = per.get(m)
            row += [f"{r.ms:.1f}", str(r.steps), r.verdict] if r else ["-", "-", "-"]
        table.append(row)
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    return "\n".join("  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in table)
