"""Refined solvable presentations: data model, text format and validation.

Generators are indexed ``0..m-1`` internally in the total order
``x_1 < ... < x_m``; names only matter at the text boundary. Each generator
carries a block number (1-based), a relative order (``None`` for infinite) and,
for finite orders, the prime the order is a power of.

Right-hand sides are stored as normal words (exponent tuples). Only
non-default relations are kept: a missing power means the identity and a
missing conjugate ``x^y`` means ``x`` itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

from .errors import PresentationSyntaxError, PresentationValidationError
from .words import format_word, generator, identity, letters_of, parse_normal_word

HEADER = "rsp 1"


def prime_power(n):
    """Return ``(p, k)`` with ``n == p**k`` and ``k >= 1``, or ``None``."""
    if n < 2:
        return None
    p = next((d for d in range(2, int(n ** 0.5) + 1) if n % d == 0), n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


def is_prime(n):
    pk = prime_power(n)
    return pk is not None and pk[1] == 1


class Section(NamedTuple):
    """One abelian section: the generators of block ``block`` tagged ``prime``
    (``None`` for the torsion-free part), restricted to some prefix."""

    block: int
    prime: int | None
    gens: tuple[int, ...]


class Violation(NamedTuple):
    constraint: str
    generator: int | None
    pair: tuple[int, int] | None
    message: str

    def __str__(self):
        return f"[{self.constraint}] {self.message}"


@dataclass(frozen=True)
class RefinedPresentation:
    names: tuple[str, ...]
    blocks: tuple[int, ...]
    orders: tuple[int | None, ...]
    primes: tuple[int | None, ...]
    powers: dict = field(default_factory=dict)
    conjugates: dict = field(default_factory=dict)

    def __post_init__(self):
        m = len(self.names)
        for attr in ("names", "blocks", "orders", "primes"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        one = identity(m)
        powers = {int(i): tuple(w) for i, w in self.powers.items() if tuple(w) != one}
        conjugates = {}
        for (i, j), w in self.conjugates.items():
            w = tuple(w)
            if w != generator(m, i):
                conjugates[(int(i), int(j))] = w
        for w in (*powers.values(), *conjugates.values()):
            if len(w) != m:
                raise ValueError(f"word of length {len(w)} in a presentation on {m} generators")
        object.__setattr__(self, "powers", dict(sorted(powers.items())))
        object.__setattr__(self, "conjugates", dict(sorted(conjugates.items())))

    @property
    def m(self):
        return len(self.names)

    @property
    def r(self):
        return self.blocks[-1] if self.blocks else 0

    @cached_property
    def index(self):
        return {name: i for i, name in enumerate(self.names)}

    @cached_property
    def identity(self):
        return identity(self.m)

    def gen(self, i, e=1):
        return generator(self.m, i, e)

    def is_finite(self, i):
        return self.orders[i] is not None

    def pi(self, i):
        """Right-hand side of the power relation of a finite-order generator."""
        if self.orders[i] is None:
            raise KeyError(f"generator {self.names[i]} has infinite order")
        return self.powers.get(i, self.identity)

    def delta(self, i, j):
        """Normal word for ``x_i^{x_j}``, ``i < j``."""
        w = self.conjugates.get((i, j))
        return w if w is not None else self.gen(i)

    def in_domain(self, i, e):
        n = self.orders[i]
        return n is None or 0 <= e < n

    def block_gens(self, s, limit=None):
        limit = self.m if limit is None else limit
        return tuple(i for i in range(limit) if self.blocks[i] == s)

    def sections(self, limit=None, max_block=None):
        """Sections of the first ``limit`` generators, in ascending order.

        Within a block the p-parts come first (primes ascending) and the
        torsion-free part last, matching the series
        ``G_{s-1} <= G_s(p_1) <= ... <= tau(G_s) <= G_s``.
        """
        limit = self.m if limit is None else limit
        out = []
        top = self.r if max_block is None else max_block
        for s in range(1, top + 1):
            gens = self.block_gens(s, limit)
            if not gens:
                continue
            primes = sorted({self.primes[i] for i in gens if self.orders[i] is not None})
            for p in primes:
                out.append(Section(s, p, tuple(i for i in gens
                                                if self.orders[i] is not None
                                                and self.primes[i] == p)))
            inf = tuple(i for i in gens if self.orders[i] is None)
            if inf:
                out.append(Section(s, None, inf))
        return out

    @cached_property
    def relation_letters(self):
        """Sparse letter forms of the stored relations, used by the collector.

        Returns ``(powers, conjugates, acting)``: ``powers[i]`` and
        ``conjugates[j][i]`` are letter tuples of ``pi(x_i)`` and
        ``delta(x_i, x_j)``; ``acting[j]`` lists the ``i < j`` that ``x_j``
        does not commute with.
        """
        powers = [letters_of(self.powers[i]) if i in self.powers else () for i in range(self.m)]
        conjugates = [{} for _ in range(self.m)]
        for (i, j), w in self.conjugates.items():
            conjugates[j][i] = letters_of(w)
        acting = [tuple(sorted(c)) for c in conjugates]
        return powers, conjugates, acting

    def word_text(self, word):
        return format_word(word, self.names)

    def parse_word(self, text):
        """Parse a normal word in this presentation's generator names."""
        return parse_normal_word(text, self.index, self.m)

    def truncate(self, k):
        """The sub-presentation on ``x_1..x_k`` as a presentation in its own right."""
        if not 0 <= k <= self.m:
            raise ValueError(f"k={k} out of range 0..{self.m}")
        return RefinedPresentation(
            self.names[:k], self.blocks[:k], self.orders[:k], self.primes[:k],
            {i: w[:k] for i, w in self.powers.items() if i < k},
            {(i, j): w[:k] for (i, j), w in self.conjugates.items() if j < k},
        )

    def replace(self, powers=None, conjugates=None):
        return RefinedPresentation(
            self.names, self.blocks, self.orders, self.primes,
            self.powers if powers is None else powers,
            self.conjugates if conjugates is None else conjugates,
        )

    def __str__(self):
        return serialize(self)


# ---------------------------------------------------------------- validation


def _check_word(p, w, what, pair, gen, allowed, constraint, out):
    m = p.m
    for i in range(m):
        e = w[i]
        if e == 0:
            continue
        if not p.in_domain(i, e):
            out.append(Violation(
                "domain", gen, pair,
                f"{what}: exponent {e} on {p.names[i]} outside 0..{p.orders[i] - 1}"))
        if i not in allowed:
            out.append(Violation(
                constraint, gen, pair,
                f"{what}: exponent {e} on {p.names[i]} not permitted"))


def validate(p):
    """Return the list of structural violations of ``p`` (empty when valid)."""
    out = []
    m = p.m
    if not (len(p.blocks) == len(p.orders) == len(p.primes) == m):
        return [Violation("shape", None, None, "per-generator data of unequal lengths")]
    if len(set(p.names)) != m:
        out.append(Violation("names", None, None, "duplicate generator names"))
    if m:
        if p.blocks[0] != 1:
            out.append(Violation("blocks", 0, None, "first block must be 1"))
        for i in range(1, m):
            if p.blocks[i] not in (p.blocks[i - 1], p.blocks[i - 1] + 1):
                out.append(Violation(
                    "blocks", i, None,
                    f"{p.names[i]}: block {p.blocks[i]} after block {p.blocks[i - 1]}"))
    for i in range(m):
        n, q = p.orders[i], p.primes[i]
        if n is None:
            if q is not None:
                out.append(Violation("order", i, None, f"{p.names[i]}: infinite order with prime {q}"))
            continue
        pk = prime_power(n) if isinstance(n, int) else None
        if q is None or not is_prime(q) or pk is None or pk[0] != q:
            out.append(Violation(
                "order", i, None, f"{p.names[i]}: order {n} is not a nontrivial power of prime {q}"))
    if out:
        return out

    below = {}  # block s -> set of generators in X_1 .. X_{s-1}
    for s in range(1, p.r + 2):
        below[s] = {i for i in range(m) if p.blocks[i] < s}

    for i in p.powers:
        if not 0 <= i < m or p.orders[i] is None:
            out.append(Violation("pi-undefined", i, None,
                                 f"power relation given for infinite generator {p.names[i]}"))
            continue
        _check_word(p, p.powers[i], f"pi({p.names[i]})", None, i,
                    below[p.blocks[i]], "pi-support", out)

    for (i, j), w in p.conjugates.items():
        if not (0 <= i < j < m):
            out.append(Violation("pair", i, (i, j), f"conjugate relation on bad pair {(i, j)}"))
            continue
        s, t = p.blocks[i], p.blocks[j]
        what = f"delta({p.names[i]},{p.names[j]})"
        if s == t:
            if w[i] != 1:
                out.append(Violation("type1", i, (i, j),
                                     f"{what}: exponent on {p.names[i]} must be 1, got {w[i]}"))
            allowed = below[s] | {i}
            _check_word(p, w, what, (i, j), i, allowed, "type1", out)
        elif p.orders[i] is not None:
            allowed = below[s] | {k for k in range(m) if p.blocks[k] == s
                                  and p.orders[k] is not None and p.primes[k] == p.primes[i]}
            _check_word(p, w, what, (i, j), i, allowed, "type2", out)
        else:
            _check_word(p, w, what, (i, j), i, below[s + 1], "type3", out)
    return out


# ------------------------------------------------------------------ text I/O


def _strip_comment(line):
    k = line.find("#")
    return line if k < 0 else line[:k]


def parse(text):
    """Parse the line-oriented ``rsp 1`` format and validate the result."""
    names, blocks, orders, primes = [], [], [], []
    raw_pow, raw_cnj = {}, {}
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        toks = line.split()
        col = line.index(toks[0]) + 1
        if not seen_header:
            if toks != ["rsp", "1"]:
                raise PresentationSyntaxError("expected header 'rsp 1'", lineno, col)
            seen_header = True
            continue
        kw = toks[0]
        if kw == "gen":
            if raw_pow or raw_cnj:
                raise PresentationSyntaxError("gen after relations", lineno, col)
            _parse_gen(toks, line, lineno, names, blocks, orders, primes)
        elif kw in ("pow", "cnj"):
            if "=" not in line:
                raise PresentationSyntaxError("missing '='", lineno, col)
            lhs, rhs = line.split("=", 1)
            lhs_toks = lhs.split()[1:]
            need = 1 if kw == "pow" else 2
            if len(lhs_toks) != need:
                raise PresentationSyntaxError(f"{kw} takes {need} generator name(s)", lineno, col)
            index = {n: i for i, n in enumerate(names)}
            for t in lhs_toks:
                if t not in index:
                    raise PresentationSyntaxError(f"unknown generator {t!r}", lineno,
                                                  line.index(t) + 1)
            key = index[lhs_toks[0]] if kw == "pow" else tuple(index[t] for t in lhs_toks)
            rhs_col = len(lhs) + 2
            word = parse_normal_word(rhs, index, len(names), line=lineno, column=rhs_col)
            target = raw_pow if kw == "pow" else raw_cnj
            if kw == "cnj" and key[0] >= key[1]:
                raise PresentationSyntaxError("cnj needs the smaller generator first", lineno, col)
            if key in target:
                raise PresentationSyntaxError(f"duplicate {kw} relation", lineno, col)
            target[key] = word
        else:
            raise PresentationSyntaxError(f"unknown keyword {kw!r}", lineno, col)
    if not seen_header:
        raise PresentationSyntaxError("missing header 'rsp 1'", 1, 1)
    p = RefinedPresentation(names, blocks, orders, primes, raw_pow, raw_cnj)
    violations = validate(p)
    if violations:
        raise PresentationValidationError(violations)
    return p


def _parse_gen(toks, line, lineno, names, blocks, orders, primes):
    col = line.index("gen") + 1
    if len(toks) not in (6, 8) or toks[2] != "block" or toks[4] != "order":
        raise PresentationSyntaxError(
            "expected 'gen <name> block <s> order (<n>|inf) [prime <p>]'", lineno, col)
    name = toks[1]
    if name in names or name == "1":
        raise PresentationSyntaxError(f"bad or duplicate generator name {name!r}", lineno, col)
    try:
        block = int(toks[3])
        order = None if toks[5] == "inf" else int(toks[5])
        prime = None
        if len(toks) == 8:
            if toks[6] != "prime":
                raise ValueError
            prime = int(toks[7])
    except ValueError:
        raise PresentationSyntaxError("malformed gen declaration", lineno, col) from None
    if (order is None) != (prime is None):
        raise PresentationSyntaxError("'prime' is required exactly for finite orders", lineno, col)
    names.append(name)
    blocks.append(block)
    orders.append(order)
    primes.append(prime)


def serialize(p):
    lines = [HEADER]
    for i in range(p.m):
        if p.orders[i] is None:
            lines.append(f"gen {p.names[i]} block {p.blocks[i]} order inf")
        else:
            lines.append(f"gen {p.names[i]} block {p.blocks[i]} "
                         f"order {p.orders[i]} prime {p.primes[i]}")
    for i, w in p.powers.items():
        lines.append(f"pow {p.names[i]} = {p.word_text(w)}")
    for (i, j), w in p.conjugates.items():
        lines.append(f"cnj {p.names[i]} {p.names[j]} = {p.word_text(w)}")
    return "\n".join(lines) + "\n"
