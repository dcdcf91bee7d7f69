"""Consistency checking for refined solvable presentations.

Two independent procedures are provided:

``check_solvable`` ("solv")
    For each ``z`` in ascending order, treat ``delta(z)`` as a candidate
    automorphism of ``H_{z-1}`` and test the four relation conditions by
    collection in ``H_{z-1}`` plus the determinant condition on every section
    of the blocks below ``z``'s block.

``check_overlap`` ("overlap")
    Classical local-confluence test: collect both sides of every overlap of
    the rewriting rules and compare.

Both stop at the smallest generator whose checks fail and report every
failing instance found there.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from . import linalg
from .collector import (Collector, InverseConjugateTable, derive_inverse_conjugates,
                        section_matrix)
from .errors import CollectionError, InverseDerivationError, RSPError
from .presentation import Section
from .words import letters_of

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"
ABORTED = "aborted"


@dataclass
class Failure:
    condition: str
    z: int | None
    pair: tuple | None = None
    left: tuple | None = None
    right: tuple | None = None
    section: Section | None = None
    det: int | None = None
    detail: str = ""

    def to_dict(self, p):
        names = p.names
        out = {
            "condition": self.condition,
            "z": names[self.z] if self.z is not None else None,
            "pair": [names[i] for i in self.pair] if self.pair else None,
            "left": p.word_text(self.left) if self.left is not None else None,
            "right": p.word_text(self.right) if self.right is not None else None,
        }
        if self.section is not None:
            out["section"] = {"block": self.section.block,
                              "prime": self.section.prime if self.section.prime else "inf"}
        if self.det is not None:
            out["det"] = self.det
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class ConsistencyReport:
    method: str
    verdict: str
    failures: list = field(default_factory=list)
    elapsed: float = 0.0
    steps: int = 0
    failing_z: int | None = None
    abort_reason: str | None = None
    table: InverseConjugateTable | None = field(default=None, repr=False, compare=False)

    @property
    def consistent(self):
        return self.verdict == CONSISTENT

    def to_dict(self, p):
        return {
            "method": self.method,
            "verdict": self.verdict,
            "failing_z": p.names[self.failing_z] if self.failing_z is not None else None,
            "failures": [f.to_dict(p) for f in self.failures],
            "abort_reason": self.abort_reason,
            "elapsed_ms": round(self.elapsed * 1000, 3),
            "steps": self.steps,
        }

    def to_json(self, p, **kw):
        return json.dumps(self.to_dict(p), **kw)

    def summary(self, p):
        lines = [f"method {self.method}: {self.verdict} "
                 f"({self.elapsed * 1000:.1f} ms, {self.steps} steps)"]
        if self.abort_reason:
            lines.append(f"  aborted: {self.abort_reason}")
        for f in self.failures:
            d = f.to_dict(p)
            parts = [f"condition {d['condition']}", f"z={d['z']}"]
            if d["pair"]:
                parts.append("pair=(" + ",".join(d["pair"]) + ")")
            if "section" in d:
                parts.append(f"section=({d['section']['block']},{d['section']['prime']})")
            if "det" in d:
                parts.append(f"det={d['det']}")
            if d["left"] is not None:
                parts.append(f"left={d['left']!r} right={d['right']!r}")
            if f.detail:
                parts.append(f.detail)
            lines.append("  " + " ".join(parts))
        return "\n".join(lines)


# ------------------------------------------------------------ linear parts


@dataclass(frozen=True)
class DeltaMap:
    """``x -> delta(x, z)`` on the generators below ``z``."""

    z: int
    images: tuple

    @classmethod
    def of(cls, p, z):
        return cls(z, tuple(p.delta(x, z) for x in range(z)))


def apply_delta(w, d, col):
    """Image of the normal word ``w`` under ``d``, collected with ``col``."""
    return col.evaluate(d.images, w)


@dataclass(frozen=True)
class InducedMatrix:
    section: Section
    entries: tuple

    @property
    def dim(self):
        return len(self.entries)


@dataclass(frozen=True)
class DetCheck:
    passed: bool
    value: int


def induced_matrix(p, z, section, images=None):
    """Matrix of ``delta(z)`` (or of an explicit map ``images``) on ``section``."""
    if images is None:
        images = [p.delta(x, z) for x in range(max(section.gens, default=-1) + 1)]
    return InducedMatrix(section, tuple(tuple(r) for r in section_matrix(images, section)))


def det_check(mat):
    """Infinite sections need det +-1; p-sections need det nonzero mod p."""
    rows = [list(r) for r in mat.entries]
    if mat.section.prime is None:
        d = linalg.bareiss_det(rows)
        return DetCheck(d in (1, -1), d)
    d = linalg.det_mod(rows, mat.section.prime)
    return DetCheck(d != 0, d)


# -------------------------------------------------- automorphism conditions


def block_condition_failures(p, images, k=None):
    """``x^phi`` must lie in ``G_i`` for ``x in X_i`` and in ``G_i(p)`` for
    ``x in X_i(p)``."""
    k = len(images) if k is None else k
    out = []
    for x in range(k):
        s = p.blocks[x]
        for i, e in enumerate(images[x]):
            if not e:
                continue
            ok = i < k and (p.blocks[i] < s or (
                p.blocks[i] == s and (p.orders[x] is None
                                      or (p.orders[i] is not None and p.primes[i] == p.primes[x]))))
            if not ok:
                out.append(Failure("block", None, (x,), images[x], None,
                                   detail=f"image leaves G_{s}" + ("" if p.orders[x] is None
                                                                   else f"({p.primes[x]})")))
                break
    return out


def _power_failures(p, col, images, k, label, z):
    out = []
    for x in range(k):
        n = p.orders[x]
        if n is None:
            continue
        left = col.evaluate(images, p.pi(x))
        right = col.power(images[x], n)
        if left != right:
            out.append(Failure(label, z, (x,), left, right))
    return out


def _conj_failures(p, col, images, k, label, z):
    out = []
    evaluate, collect_items = col.evaluate, col.collect_items
    lets = [letters_of(w) for w in images]
    for y in range(k):
        ly = lets[y]
        ly_inv = tuple((g, -e) for g, e in reversed(ly))
        for x in range(y):
            dxy = p.conjugates.get((x, y))
            left = images[x] if dxy is None else evaluate(images, dxy)
            right = collect_items([(ly_inv, 1), (lets[x], 1), (ly, 1)])
            if left != right:
                out.append(Failure(label, z, (x, y), left, right))
    return out


def _det_failures(p, images, sections, label, z):
    out = []
    for sec in sections:
        mat = induced_matrix(p, z, sec, images)
        res = det_check(mat)
        if not res.passed:
            out.append(Failure(label, z, None, section=sec, det=res.value,
                               detail="det not +-1" if sec.prime is None
                               else f"det = 0 mod {sec.prime}"))
    return out


def check_automorphism(p, images, k=None, table=None, step_limit=None):
    """Is ``x -> images[x]`` (extended to normal forms) an
    automorphism of the consistent group ``H_k``?

    Returns the list of failures; conditions are labelled ``block``,
    ``1`` (power relations), ``2`` (conjugacy relations) and ``3``
    (section determinants).
    """
    k = len(images) if k is None else k
    images = tuple(images[:k])
    out = block_condition_failures(p, images, k)
    if out:
        return out
    col = Collector(p, k, table, step_limit)
    out += _power_failures(p, col, images, k, "1", None)
    out += _conj_failures(p, col, images, k, "2", None)
    out += _det_failures(p, images, p.sections(limit=k), "3", None)
    return out


# ------------------------------------------------ determinant-based check


def _solv_conditions_at(p, z, col):
    """All failing condition instances for ``z``, evaluated in ``H_{z-1}``."""
    images = tuple(p.delta(x, z) for x in range(z))
    n = p.orders[z]
    out = _det_failures(p, images, p.sections(limit=z, max_block=p.blocks[z] - 1), "5", z)
    if n is not None:
        piz = p.pi(z)
        left = col.evaluate(images, piz)
        if left != piz:
            out.append(Failure("1", z, None, left, piz))
    out += _power_failures(p, col, images, z, "2", z)
    if n is not None:
        piz = p.pi(z)
        for x in range(z):
            w = images[x]
            for _ in range(n - 1):
                w = col.evaluate(images, w)
            right = col.conjugate(p.gen(x), piz)
            if w != right:
                out.append(Failure("3", z, (x,), w, right))
    out += _conj_failures(p, col, images, z, "4", z)
    out.sort(key=lambda f: f.condition)
    return out


def check_solvable(p, mode="incremental", order=None, step_limit=None):
    """Determinant-based consistency check.

    ``mode="incremental"`` walks ``z`` upwards and stops at the first failing
    generator. ``mode="per_z"`` first derives all inverse tables, then
    evaluates the generators in ``order`` (default: descending) and reports
    the smallest failing one.
    """
    if mode not in ("incremental", "per_z"):
        raise ValueError(f"unknown mode {mode!r}")
    start = time.perf_counter()
    report = ConsistencyReport("solv", CONSISTENT)
    if mode == "incremental":
        _solv_incremental(p, report, step_limit)
    else:
        _solv_per_z(p, report, order, step_limit)
    report.elapsed = time.perf_counter() - start
    return report


def _solv_incremental(p, report, step_limit):
    tbl = InverseConjugateTable()
    for z in range(p.m):
        col = Collector(p, z, tbl, step_limit)
        try:
            failures = _solv_conditions_at(p, z, col) if z else []
            if not failures and p.orders[z] is None:
                try:
                    tbl = derive_inverse_conjugates(p, z, tbl, step_limit=step_limit)
                except InverseDerivationError as exc:
                    failures = [Failure("mu", z, section=exc.section, det=exc.det,
                                        detail=str(exc))]
        except CollectionError as exc:
            report.steps += col.steps
            _abort(report, z, exc)
            return
        report.steps += col.steps
        if failures:
            report.verdict = INCONSISTENT
            report.failures = failures
            report.failing_z = z
            return
    report.table = tbl


def _solv_per_z(p, report, order, step_limit):
    tbl = InverseConjugateTable()
    per_z = {}
    aborts = {}
    for z in range(p.m):
        if p.orders[z] is None:
            try:
                tbl = derive_inverse_conjugates(p, z, tbl, step_limit=step_limit)
            except InverseDerivationError as exc:
                per_z.setdefault(z, []).append(
                    Failure("mu", z, section=exc.section, det=exc.det, detail=str(exc)))
            except RSPError as exc:
                aborts[z] = exc
    order = list(range(p.m - 1, 0, -1)) if order is None else list(order)
    for z in order:
        if not 1 <= z < p.m:
            continue
        col = Collector(p, z, tbl, step_limit)
        try:
            fails = _solv_conditions_at(p, z, col)
        except CollectionError as exc:
            aborts.setdefault(z, exc)
            fails = []
        report.steps += col.steps
        if fails:
            # a failed inverse derivation at z is a consequence of these
            per_z[z] = fails
    bad = sorted(set(per_z) | set(aborts))
    if not bad:
        report.table = tbl
        return
    z = bad[0]
    if z in per_z:
        report.verdict = INCONSISTENT
        report.failures = per_z[z]
        report.failing_z = z
    else:
        _abort(report, z, aborts[z])


def _abort(report, z, exc):
    report.verdict = ABORTED
    report.failing_z = z
    report.abort_reason = str(exc)


# ------------------------------------------------------------------ overlaps


def _overlaps_at(p, z, col):
    """Overlap families whose largest generator is ``z``, evaluated in ``H_z``.

    With normal forms written largest generator first, the rewriting rules
    are ``x y -> y delta(x,y)`` for ``x < y``; the critical words are
    ``x y z`` (a), ``x^n z`` (b), ``x z^n`` (c), ``z^{n+1}`` (d) and the
    inverse cancellations ``x z^-1 z``, ``x z z^-1`` (e).
    """
    out = []
    gen = p.gen
    nz = p.orders[z]
    collect, collect_items, multiply = col.collect, col.collect_items, col.multiply
    for y in range(z):
        yz = letters_of(collect(((y, 1), (z, 1))))
        for x in range(y):
            left = collect(((x, 1), (y, 1), (z, 1)))
            right = collect_items([(yz, 1)], start=gen(x))
            if left != right:
                out.append(Failure("a", z, (x, y), left, right))
    for x in range(z):
        n = p.orders[x]
        if n is None:
            continue
        left = multiply(p.pi(x), gen(z))
        right = collect_items([(letters_of(collect(((x, 1), (z, 1)))), 1)], start=gen(x, n - 1))
        if left != right:
            out.append(Failure("b", z, (x,), left, right))
    if nz is not None:
        piz = p.pi(z)
        for x in range(z):
            left = collect(((x, 1), (z, 1), (z, nz - 1)))
            right = multiply(gen(x), piz)
            if left != right:
                out.append(Failure("c", z, (x,), left, right))
        left = multiply(gen(z), piz)
        right = multiply(piz, gen(z))
        if left != right:
            out.append(Failure("d", z, None, left, right))
    else:
        for x in range(z):
            for word in (((x, 1), (z, -1), (z, 1)), ((x, 1), (z, 1), (z, -1))):
                got = collect(word)
                if got != gen(x):
                    out.append(Failure("e", z, (x,), got, gen(x)))
    return out


def check_overlap(p, step_limit=None):
    """Local-confluence consistency check ("usual" method)."""
    start = time.perf_counter()
    report = ConsistencyReport("overlap", CONSISTENT)
    tbl = InverseConjugateTable()
    for z in range(p.m):
        failures = []
        col = None
        try:
            if p.orders[z] is None:
                try:
                    tbl = derive_inverse_conjugates(p, z, tbl, step_limit=step_limit)
                except InverseDerivationError as exc:
                    failures = [Failure("mu", z, section=exc.section, det=exc.det,
                                        detail=str(exc))]
            if not failures:
                col = Collector(p, z + 1, tbl, step_limit)
                failures = _overlaps_at(p, z, col)
        except CollectionError as exc:
            report.steps += col.steps if col else 0
            _abort(report, z, exc)
            break
        report.steps += col.steps if col else 0
        if failures:
            report.verdict = INCONSISTENT
            report.failures = failures
            report.failing_z = z
            break
    else:
        report.table = tbl
    report.elapsed = time.perf_counter() - start
    return report


def compare_methods(p, step_limit=None):
    solv = check_solvable(p, step_limit=step_limit)
    over = check_overlap(p, step_limit=step_limit)
    return solv, over, solv.verdict == over.verdict
