"""Collection from the left, group arithmetic on normal words, and the
derivation of inverse conjugation relations ``x^{y^-1}``.

The collector keeps the already-collected prefix as a dense exponent vector
and a stack of pending subwords. Multiplying the prefix by a letter ``y^c``
moves ``y`` left over the collected tail of smaller generators, replacing the
tail ``T`` by ``T^{y}`` (from the stored conjugates) or ``T^{y^-1}`` (from the
inverse table). Finite-order exponents are reduced with the power relations.
Only generators of infinite order ever need inverse conjugates; a negative
power of a finite-order ``y`` is rewritten as ``y^{c mod n} pi(y)^{floor(c/n)}``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from types import MappingProxyType

from . import linalg
from .errors import InverseDerivationError, MissingInverse, StepLimitExceeded
from .presentation import RefinedPresentation
from .words import identity, inverse_letters, letters_of, support

DEFAULT_STEP_LIMIT = 10 ** 7


def default_step_limit():
    return int(os.environ.get("RSP_STEP_LIMIT", DEFAULT_STEP_LIMIT))


class InverseConjugateTable:
    """Derived relations ``mu(x, y) = x^{y^-1}`` keyed by ``(x, y)``, ``x < y``.

    Values are immutable from the outside; ``extended`` returns a new table.
    """

    __slots__ = ("_mu",)

    def __init__(self, mu=None):
        self._mu = dict(mu or {})

    @property
    def mu(self):
        return MappingProxyType(self._mu)

    def extended(self, entries):
        new = dict(self._mu)
        new.update(entries)
        return InverseConjugateTable(new)

    def get(self, pair, default=None):
        return self._mu.get(pair, default)

    def __getitem__(self, pair):
        return self._mu[pair]

    def __contains__(self, pair):
        return pair in self._mu

    def __len__(self):
        return len(self._mu)

    def __iter__(self):
        return iter(self._mu)

    def items(self):
        return self._mu.items()

    def covers(self, y):
        return all((x, y) in self._mu for x in range(y))

    def __eq__(self, other):
        return isinstance(other, InverseConjugateTable) and self._mu == other._mu

    def __repr__(self):
        return f"InverseConjugateTable({len(self._mu)} entries)"


@dataclass(frozen=True)
class SubPresentation:
    """The sub-presentation ``H_k`` on generators ``x_1..x_k`` of ``parent``."""

    parent: RefinedPresentation
    k: int

    def relations(self):
        """Visible relations as ``('pow', i)`` and ``('cnj', i, j)`` tuples."""
        p = self.parent
        out = [("pow", i) for i in range(self.k) if p.orders[i] is not None]
        out += [("cnj", i, j) for j in range(self.k) for i in range(j)]
        return out


def restrict(p, k):
    if not 0 <= k <= p.m:
        raise ValueError(f"k={k} out of range 0..{p.m}")
    return SubPresentation(p, k)


class Collector:
    """Normal-form arithmetic in ``H_k`` for a fixed presentation and table.

    ``steps`` accumulates the number of letters processed over the lifetime
    of the collector; ``step_limit`` bounds each single collection.
    """

    def __init__(self, p, k=None, table=None, step_limit=None):
        if isinstance(p, SubPresentation):
            p, k = p.parent, (p.k if k is None else k)
        self.p = p
        self.k = p.m if k is None else k
        self.m = p.m
        self.table = table if table is not None else InverseConjugateTable()
        self.step_limit = default_step_limit() if step_limit is None else step_limit
        self.steps = 0
        self._orders = p.orders
        self._powers, self._conj, self._acting = p.relation_letters
        self._inv_powers = [inverse_letters(w) for w in self._powers]
        self._conj_inv = {}
        self._mu = [None] * self.m
        self._mu_acting = [None] * self.m

    # ----------------------------------------------------------- internals

    def _mu_for(self, g):
        """Letters of ``mu(., g)`` as a dict, built lazily from the table."""
        mu = self._mu[g]
        if mu is None:
            mu = {}
            acting = []
            gen = self.p.gen
            for i in range(g):
                w = self.table.get((i, g))
                if w is None:
                    acting.append(i)  # unknown: forces a lookup, which raises
                elif w != gen(i):
                    mu[i] = letters_of(w)
                    acting.append(i)
            self._mu[g] = mu
            self._mu_acting[g] = tuple(acting)
        return mu

    def _run(self, exps, stack):
        orders = self._orders
        powers, inv_powers = self._powers, self._inv_powers
        conj, acting = self._conj, self._acting
        limit = self.steps + self.step_limit
        steps = self.steps
        push = stack.append
        try:
            while stack:
                top = stack[-1]
                letters, pos, reps = top
                g, c = letters[pos]
                pos += 1
                if pos == len(letters):
                    if reps == 1:
                        stack.pop()
                    else:
                        top[1] = 0
                        top[2] = reps - 1
                else:
                    top[1] = pos
                steps += 1
                if steps > limit:
                    raise StepLimitExceeded(self.step_limit)

                n = orders[g]
                if n is not None and not 0 < c < n:
                    q, c = divmod(c, n)
                    if q and powers[g]:
                        _push_power(push, powers[g], inv_powers[g], q)
                    if c:
                        push([((g, c),), 0, 1])
                    continue

                if c > 0:
                    acts = acting[g]
                else:
                    if self._mu_acting[g] is None:
                        self._mu_for(g)
                    acts = self._mu_acting[g]
                for i in acts:
                    if exps[i]:
                        break
                else:
                    # y commutes with the collected tail
                    r = exps[g] + c
                    if n is None or r < n:
                        exps[g] = r
                        continue
                    exps[g] = r - n
                    if powers[g]:
                        tail = _pull_tail(exps, g)
                        if tail:
                            push([tail, 0, 1])
                        push([powers[g], 0, 1])
                    continue

                unit = 1 if c > 0 else -1
                if c != unit:
                    push([((g, c - unit),), 0, 1])
                tail = _pull_tail(exps, g)
                if unit > 0:
                    images = conj[g]
                    for j, e in reversed(tail):
                        img = images.get(j)
                        if img is None:
                            push([((j, e),), 0, 1])
                        else:
                            self._push_conj(push, img, j, g, e)
                    r = exps[g] + 1
                    if n is not None and r == n:
                        exps[g] = 0
                        if powers[g]:
                            push([powers[g], 0, 1])
                    else:
                        exps[g] = r
                else:
                    images = self._mu_for(g)
                    for j, e in reversed(tail):
                        img = images.get(j)
                        if img is None:
                            if (j, g) not in self.table:
                                raise MissingInverse(j, g)
                            push([((j, e),), 0, 1])
                        else:
                            _push_power(push, img, inverse_letters(img), e)
                    exps[g] -= 1
        finally:
            self.steps = steps
        return exps

    def _push_conj(self, push, img, j, g, e):
        if not img:
            return
        if e > 0:
            if len(img) == 1:
                push([((img[0][0], img[0][1] * e),), 0, 1])
            else:
                push([img, 0, e])
        else:
            inv = self._conj_inv.get((j, g))
            if inv is None:
                inv = self._conj_inv[(j, g)] = inverse_letters(img)
            if len(inv) == 1:
                push([((inv[0][0], inv[0][1] * -e),), 0, 1])
            else:
                push([inv, 0, -e])

    def _check_letters(self, letters):
        k = self.k
        for g, _ in letters:
            if not 0 <= g < k:
                raise ValueError(f"generator index {g} outside H_{k}")

    # -------------------------------------------------------------- public

    def collect_items(self, items, start=None):
        """Normal form of ``start * w_1^{e_1} * w_2^{e_2} ...``.

        ``items`` is a sequence of ``(letters, exponent)`` pairs.
        """
        exps = list(start) if start is not None else [0] * self.m
        stack = []
        for letters, e in reversed(items):
            if letters and e:
                self._check_letters(letters)
                _push_power(stack.append, letters, inverse_letters(letters), e)
        return tuple(self._run(exps, stack))

    def collect(self, word):
        """Normal form of a free word given as ``(gen, exp)`` letters."""
        return self.collect_items([(tuple(word), 1)])

    def multiply(self, a, b):
        self._check_letters(letters_of(a))
        return self.collect_items([(letters_of(b), 1)], start=a)

    def invert(self, a):
        return self.collect_items([(inverse_letters(letters_of(a)), 1)])

    def power(self, a, e):
        if e < 0:
            a, e = self.invert(a), -e
        result = identity(self.m)
        base = a
        while e:
            if e & 1:
                result = self.multiply(result, base)
            e >>= 1
            if e:
                base = self.multiply(base, base)
        return result

    def conjugate(self, a, b):
        """Normal form of ``b^-1 a b``."""
        lb = letters_of(b)
        return self.collect_items([(inverse_letters(lb), 1), (letters_of(a), 1), (lb, 1)])

    def evaluate(self, images, w):
        """Normal form of ``(x_k^phi)^{r_k} ... (x_1^phi)^{r_1}`` for ``w`` in
        normal form and ``images[i] = x_i^phi``."""
        return self.collect_items([(letters_of(images[i]), e) for i, e in letters_of(w)])

    def is_normal(self, w):
        return (len(w) == self.m and all(e == 0 for e in w[self.k:])
                and all(self.p.in_domain(i, e) for i, e in enumerate(w)))


def _push_power(push, letters, inv, e):
    if not letters:
        return
    if e < 0:
        letters, e = inv, -e
    if len(letters) == 1:
        push([((letters[0][0], letters[0][1] * e),), 0, 1])
    else:
        push([letters, 0, e])


def _pull_tail(exps, g):
    tail = []
    for j in range(g - 1, -1, -1):
        e = exps[j]
        if e:
            tail.append((j, e))
            exps[j] = 0
    return tuple(tail)


# ------------------------------------------------- inverse conjugate relations


def section_matrix(images, section):
    """Column ``b`` holds the section exponents of the image of the ``b``-th
    section generator."""
    gens = section.gens
    return [[images[yb][ya] for yb in gens] for ya in gens]


def section_inverse(p, section, mat, z=None):
    """Inverse ``B`` of the induced section map ``A`` with ``A B = I`` on the
    section; verified before it is returned."""
    gens = section.gens
    if section.prime is None:
        try:
            inv = linalg.integer_inverse(mat)
        except linalg.SingularMatrixError as exc:
            raise InverseDerivationError(
                f"induced map on section {section.block} (inf) has det {exc.det}",
                z, section, exc.det) from None
        if linalg.matmul(mat, inv) != linalg.identity(len(gens)):
            raise InverseDerivationError("integer inverse check failed", z, section)
        return inv
    q = section.prime
    mods = [p.orders[y] for y in gens]
    try:
        inv = linalg.inverse_mod_prime_power(mat, q, max(mods))
    except linalg.SingularMatrixError as exc:
        raise InverseDerivationError(
            f"induced map on section {section.block} (p={q}) is singular mod {q}",
            z, section, exc.det) from None
    inv = [[x % mods[j] for x in row] for j, row in enumerate(inv)]
    prod = linalg.matmul(mat, inv)
    for a, row in enumerate(prod):
        for b, x in enumerate(row):
            if (x - (a == b)) % mods[a]:
                raise InverseDerivationError(
                    f"induced map on section {section.block} (p={q}) does not respect "
                    "generator orders", z, section)
    return inv


def derive_inverse_conjugates(ctx, z, tbl, section_inverses=None, step_limit=None):
    """Extend ``tbl`` with ``mu(x, z)`` for every ``x < z``.

    ``ctx`` is the presentation (or a sub-presentation of it); ``tbl`` must
    already cover every pair below ``z``. Sections are processed in ascending
    order so the tail ``u`` of each step only involves generators whose
    inverse images are known. ``section_inverses`` may supply precomputed
    ``B`` matrices keyed by section; they are verified like computed ones.
    """
    p = ctx.parent if isinstance(ctx, SubPresentation) else ctx
    if p.orders[z] is not None:
        raise ValueError("inverse conjugates are only needed for infinite-order generators")
    col = Collector(p, z, tbl, step_limit)
    images = [p.delta(x, z) for x in range(z)]
    mu = {}
    known = set()
    for sec in p.sections(limit=z):
        mat = section_matrix(images, sec)
        given = (section_inverses or {}).get(sec)
        if given is not None:
            _verify_given(p, sec, mat, given, z)
            bmat = given
        else:
            bmat = section_inverse(p, sec, mat, z)
        gens = sec.gens
        for i, y in enumerate(gens):
            coeffs = [(j, bmat[j][i]) for j in range(len(gens) - 1, -1, -1)]
            lhs = col.collect_items([(letters_of(images[gens[j]]), b) for j, b in coeffs])
            u = col.collect_items([(((y, -1),), 1), (letters_of(lhs), 1)])
            stray = [x for x in support(u) if x not in known]
            if stray:
                raise InverseDerivationError(
                    f"tail for {p.names[y]} leaves the lower sections", z, sec)
            u_inv_image = col.collect_items([(letters_of(mu[x]), e) for x, e in letters_of(u)])
            word = col.collect_items([(((gens[j], b),), 1) for j, b in coeffs if b]
                                     + [(inverse_letters(letters_of(u_inv_image)), 1)])
            mu[y] = word
        known.update(gens)
    for y, word in mu.items():
        if col.evaluate(images, word) != p.gen(y):
            raise InverseDerivationError(
                f"derived inverse image of {p.names[y]} does not map back", z)
    return tbl.extended({(y, z): w for y, w in mu.items()})


def _verify_given(p, sec, mat, bmat, z):
    prod = linalg.matmul(mat, bmat)
    for a, row in enumerate(prod):
        mod = p.orders[sec.gens[a]]
        for b, x in enumerate(row):
            diff = x - (a == b)
            if (diff if mod is None else diff % mod):
                raise InverseDerivationError("supplied section inverse is not an inverse", z, sec)


def derive_table(p, k=None, step_limit=None):
    """Inverse conjugate table for ``H_k``, assuming its presentation is consistent."""
    k = p.m if k is None else k
    tbl = InverseConjugateTable()
    for z in range(k):
        if p.orders[z] is None:
            tbl = derive_inverse_conjugates(p, z, tbl, step_limit=step_limit)
    return tbl
