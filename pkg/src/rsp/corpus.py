"""Presentations that are consistent by construction, and perturbations of them.

Extensions follow the two cyclic-extension constructions: a semidirect
product with an infinite cyclic group acting by an automorphism ``phi``, and
its quotient by a central cyclic subgroup ``<g^-1 x^e>`` when ``a^g = a^{phi^e}``
for all ``a`` and ``g^phi = g``. Every precondition is verified by collection
before the new presentation is returned.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from .collector import Collector
from .consistency import check_automorphism, check_solvable
from .errors import ExtensionError
from .presentation import RefinedPresentation, is_prime, prime_power, validate
from .words import letters_of

NEW_BLOCK = "new"
MERGE_TOP = "merge"


@dataclass(frozen=True)
class InfiniteCyclic:
    pass


@dataclass(frozen=True)
class FiniteCentral:
    e: int
    g: tuple


@dataclass(frozen=True)
class ExtensionSpec:
    base: RefinedPresentation
    phi: tuple
    kind: InfiniteCyclic | FiniteCentral = InfiniteCyclic()
    partition_choice: str = NEW_BLOCK
    name: str | None = None


def _fresh_name(p, name):
    if name is None:
        k = p.m + 1
        while f"x{k}" in p.index:
            k += 1
        name = f"x{k}"
    if name in p.index:
        raise ExtensionError(f"generator name {name!r} already in use")
    return name


def _verified_base(p):
    rep = check_solvable(p)
    if not rep.consistent:
        raise ExtensionError(f"base presentation is {rep.verdict}")
    return rep.table


def _check_phi(spec, table):
    base = spec.base
    m = base.m
    phi = tuple(tuple(w) for w in spec.phi)
    if len(phi) != m or any(len(w) != m for w in phi):
        raise ExtensionError("phi must give one normal word per base generator")
    col = Collector(base, m, table)
    for x, w in enumerate(phi):
        if not col.is_normal(w):
            raise ExtensionError(f"image of {base.names[x]} is not a normal word")
    failures = check_automorphism(base, phi, table=table)
    if failures:
        f = failures[0]
        raise ExtensionError(
            f"phi is not an automorphism: condition {f.condition} fails"
            + (f" at {tuple(base.names[i] for i in f.pair)}" if f.pair else "")
            + (f" (det {f.det})" if f.det is not None else ""))
    return phi, col


def _new_block(spec, col, extra=None):
    """Block number for the new generator, checking the merge condition."""
    base = spec.base
    r = base.r
    if spec.partition_choice == NEW_BLOCK:
        return r + 1
    if spec.partition_choice != MERGE_TOP:
        raise ExtensionError(f"unknown partition choice {spec.partition_choice!r}")
    if r == 0:
        raise ExtensionError("cannot merge into the top block of the trivial group")
    for x in base.block_gens(r):
        w = col.collect_items([(((x, -1),), 1), (letters_of(spec.phi[x]), 1)])
        if any(e and base.blocks[i] >= r for i, e in enumerate(w)):
            raise ExtensionError(
                f"merge needs x^-1 x^phi in G_{r - 1}; fails for {base.names[x]}")
    if extra is not None and any(e and base.blocks[i] >= r for i, e in enumerate(extra)):
        raise ExtensionError(f"merge needs the power word in G_{r - 1}")
    return r


def _assemble(base, name, block, order, prime, phi, g=None):
    m = base.m

    def ext(w):
        return tuple(w) + (0,)

    powers = {i: ext(w) for i, w in base.powers.items()}
    if g is not None:
        powers[m] = ext(g)
    conjugates = {pair: ext(w) for pair, w in base.conjugates.items()}
    for i in range(m):
        conjugates[(i, m)] = ext(phi[i])
    p = RefinedPresentation(base.names + (name,), base.blocks + (block,),
                            base.orders + (order,), base.primes + (prime,),
                            powers, conjugates)
    violations = validate(p)
    if violations:
        raise ExtensionError(f"extension violates {violations[0]}")
    return p


def extend_infinite(spec):
    """Semidirect product of the base with an infinite cyclic group acting by phi."""
    if not isinstance(spec.kind, InfiniteCyclic):
        raise ExtensionError("extend_infinite needs kind InfiniteCyclic")
    table = _verified_base(spec.base)
    phi, col = _check_phi(spec, table)
    block = _new_block(spec, col)
    name = _fresh_name(spec.base, spec.name)
    return _assemble(spec.base, name, block, None, None, phi)


def extend_finite_central(spec):
    """Cyclic extension of order ``e`` with ``x^e = g``, acting by phi."""
    kind = spec.kind
    if not isinstance(kind, FiniteCentral):
        raise ExtensionError("extend_finite_central needs kind FiniteCentral")
    pk = prime_power(kind.e)
    if pk is None:
        raise ExtensionError(f"e = {kind.e} is not a prime power >= 2")
    base = spec.base
    table = _verified_base(base)
    phi, col = _check_phi(spec, table)
    g = tuple(kind.g)
    if not col.is_normal(g):
        raise ExtensionError("g is not a normal word of the base")
    for a in range(base.m):
        w = base.gen(a)
        for _ in range(kind.e):
            w = col.evaluate(phi, w)
        rhs = col.conjugate(base.gen(a), g)
        if w != rhs:
            raise ExtensionError(
                f"condition a^g = a^(phi^e) fails for a = {base.names[a]}")
    if col.evaluate(phi, g) != g:
        raise ExtensionError("condition g^phi = g fails")
    block = _new_block(spec, col, extra=g)
    name = _fresh_name(base, spec.name)
    return _assemble(base, name, block, kind.e, pk[0], phi, g)


def extend(spec):
    if isinstance(spec.kind, FiniteCentral):
        return extend_finite_central(spec)
    return extend_infinite(spec)


# ------------------------------------------------------------------ families


def trivial():
    return RefinedPresentation((), (), (), ())


def _names(m):
    return tuple(f"x{i + 1}" for i in range(m))


def cyclic(n):
    """Cyclic group of order ``n``: one block, one generator per prime power."""
    if n < 1:
        raise ValueError("cyclic(n) needs n >= 1")
    parts = []
    q, d = n, 2
    while q > 1:
        if q % d == 0:
            pe = 1
            while q % d == 0:
                q //= d
                pe *= d
            parts.append((d, pe))
        d += 1
    m = len(parts)
    return RefinedPresentation(_names(m), (1,) * m, tuple(pe for _, pe in parts),
                               tuple(p for p, _ in parts))


def dihedral(order):
    """Dihedral group of order ``2^k`` (``k >= 2``): rotation ``x1``, reflection ``x2``."""
    pk = prime_power(order)
    if pk is None or pk[0] != 2 or order < 4:
        raise ValueError("dihedral(n) needs n = 2^k >= 4")
    half = order // 2
    return RefinedPresentation(
        ("x1", "x2"), (1, 2), (half, 2), (2, 2), {},
        {(0, 1): (half - 1, 0)})


def quaternion8():
    return RefinedPresentation(
        ("x1", "x2"), (1, 2), (4, 2), (2, 2), {1: (2, 0)}, {(0, 1): (3, 0)})


def heisenberg():
    """Integral Heisenberg group; ``x1`` is central, ``x2^{x3} = x2 x1``."""
    return RefinedPresentation(
        ("x1", "x2", "x3"), (1, 2, 2), (None,) * 3, (None,) * 3, {},
        {(1, 2): (1, 1, 0)})


def free_abelian(r):
    if r < 0:
        raise ValueError("free_abelian(r) needs r >= 0")
    return RefinedPresentation(_names(r), tuple(range(1, r + 1)), (None,) * r, (None,) * r)


def baumslag_solitar(n):
    """``<x1, x2 | x1^{x2} = x1^n>``; polycyclic only for ``n = +-1``."""
    return RefinedPresentation(("x1", "x2"), (1, 2), (None, None), (None, None), {},
                               {(0, 1): (n, 0)})


def ut_generators(n):
    """Matrix positions ``(i, j)`` (1-based, ``i < j``) of the generators of
    ``ut(n, p)``, in generator order; block ``s`` holds distance ``n - s``."""
    out = []
    for s in range(1, n):
        d = n - s
        out += [(i, i + d) for i in range(1, n - d + 1)]
    return out


def ut(n, p):
    """Unitriangular group UT(n, p) refining its lower central series."""
    if not 2 <= n <= 30:
        raise ValueError("ut(n, p) needs 2 <= n <= 30")
    if not is_prime(p) or p > 97:
        raise ValueError("ut(n, p) needs a prime p <= 97")
    pos = ut_generators(n)
    index = {ij: k for k, ij in enumerate(pos)}
    m = len(pos)
    conjugates = {}
    for b, (k, l) in enumerate(pos):
        for a in range(b):
            i, j = pos[a]
            if j == k:
                c, e = index[(i, l)], 1
            elif l == i:
                c, e = index[(k, j)], p - 1
            else:
                continue
            w = [0] * m
            w[a] = 1
            w[c] = e
            conjugates[(a, b)] = tuple(w)
    return RefinedPresentation(_names(m), tuple(n - (j - i) for i, j in pos),
                               (p,) * m, (p,) * m, {}, conjugates)


FAMILIES = {
    "cyclic": cyclic,
    "dihedral": dihedral,
    "quaternion8": quaternion8,
    "heisenberg": heisenberg,
    "free_abelian": free_abelian,
    "ut": ut,
    "bs": baumslag_solitar,
    "trivial": trivial,
}

_SPEC = re.compile(r"^\s*([a-z_0-9]+?)\s*(?:\((.*)\))?\s*$")


def family(spec):
    """Build a family member from a string such as ``"ut(16,2)"`` or
    ``"tower(7,5)"`` (seed, depth)."""
    mt = _SPEC.match(spec)
    if not mt:
        raise ValueError(f"cannot parse family spec {spec!r}")
    name, args = mt.group(1), mt.group(2)
    params = [int(a) for a in args.split(",")] if args and args.strip() else []
    if name == "tower":
        return random_tower(*params)
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}, tower")
    return FAMILIES[name](*params)


# -------------------------------------------------------------- random towers


def random_element(p, rng, density=0.4, inf_range=1):
    w = []
    for i in range(p.m):
        if rng.random() >= density:
            w.append(0)
        elif p.orders[i] is None:
            w.append(rng.randint(-inf_range, inf_range))
        else:
            w.append(rng.randrange(p.orders[i]))
    return tuple(w)


def inner_automorphism(p, c, col):
    return tuple(col.conjugate(p.gen(x), c) for x in range(p.m))


def _central_generators(p):
    out = []
    for x in range(p.m):
        if all(p.delta(w, x) == p.gen(w) for w in range(x)) and \
                all(p.delta(x, y) == p.gen(x) for y in range(x + 1, p.m)):
            out.append(x)
    return out


def _power_map(p, rng, table):
    """A candidate automorphism raising one generator to a unit power; checked
    with the automorphism conditions and returned only when it passes."""
    if not p.m:
        return None
    y = rng.randrange(p.m)
    n = p.orders[y]
    if n is None:
        a = -1
    else:
        units = [a for a in range(2, n) if a % p.primes[y]]
        if not units:
            return None
        a = rng.choice(units)
    col = Collector(p, p.m, table)
    images = [p.gen(x) for x in range(p.m)]
    images[y] = col.collect(((y, a),))
    images = tuple(images)
    if check_automorphism(p, images, table=table):
        return None
    return images


def _compose(col, first, second):
    """``x -> (x^first)^second``."""
    return tuple(col.evaluate(second, w) for w in first)


def random_extension(base, rng, infinite=None, allow_merge=True, max_e=5):
    """One random cyclic extension of a consistent base presentation."""
    rep = check_solvable(base)
    if not rep.consistent:
        raise ExtensionError("base must be consistent")
    table = rep.table
    col = Collector(base, base.m, table)
    if infinite is None:
        infinite = rng.random() < 0.4
    c = random_element(base, rng)
    inner = inner_automorphism(base, c, col)
    outer = _power_map(base, rng, table) if rng.random() < 0.5 else None
    partition = MERGE_TOP if allow_merge and base.m and rng.random() < 0.3 else NEW_BLOCK
    candidates = []
    if infinite:
        if outer is not None:
            candidates.append((_compose(col, outer, inner), InfiniteCyclic()))
        candidates.append((inner, InfiniteCyclic()))
    else:
        es = [e for e in range(2, max_e + 1) if prime_power(e)]
        e = rng.choice(es)
        centre = [x for x in _central_generators(base) if base.orders[x] is not None]
        z = base.identity
        if centre and rng.random() < 0.6:
            x = rng.choice(centre)
            z = base.gen(x, rng.randrange(base.orders[x]))
        if outer is not None:
            candidates.append((outer, FiniteCentral(e, z)))
        ce = col.power(c, e)
        candidates.append((inner, FiniteCentral(e, col.multiply(ce, z))))
        candidates.append((inner, FiniteCentral(e, ce)))
        candidates.append((tuple(base.gen(x) for x in range(base.m)), FiniteCentral(e, z)))
    last = None
    for phi, kind in candidates:
        for part in dict.fromkeys((partition, NEW_BLOCK)):
            try:
                return extend(ExtensionSpec(base, phi, kind, part))
            except ExtensionError as exc:
                last = exc
    raise last


def random_tower(seed, depth=None, finite_only=False, max_e=5):
    """Deterministic tower of random cyclic extensions.

    Starts from a small cyclic or free abelian group; ``depth`` defaults to a
    seed-dependent value in ``1..8``.
    """
    rng = random.Random(seed)
    if depth is None:
        depth = rng.randint(1, 8)
    start = rng.choice(["trivial", "cyclic", "cyclic", "free"] if not finite_only
                       else ["trivial", "cyclic"])
    if start == "cyclic":
        p = cyclic(rng.choice([2, 3, 4, 5, 6, 8, 9]))
    elif start == "free":
        p = free_abelian(1)
    else:
        p = trivial()
    for _ in range(depth):
        p = random_extension(p, rng, infinite=False if finite_only else None, max_e=max_e)
    return p


def group_order(p):
    """Product of the relative orders, or ``None`` when infinite."""
    out = 1
    for n in p.orders:
        if n is None:
            return None
        out *= n
    return out


# ----------------------------------------------------------------- mutation


@dataclass(frozen=True)
class Mutation:
    presentation: RefinedPresentation
    changed: bool
    description: str


def mutation_slots(p):
    """Every ``(relation, generator)`` exponent that may be changed while
    keeping the Type 1-3 support rules."""
    slots = []
    m = p.m
    for x in range(m):
        if p.orders[x] is not None:
            slots += [(("pow", x), i) for i in range(m) if p.blocks[i] < p.blocks[x]]
    for y in range(m):
        for x in range(y):
            s = p.blocks[x]
            if p.blocks[y] == s:
                allowed = [i for i in range(m) if p.blocks[i] < s]
            elif p.orders[x] is not None:
                allowed = [i for i in range(m) if p.blocks[i] < s or (
                    p.blocks[i] == s and p.orders[i] is not None and p.primes[i] == p.primes[x])]
            else:
                allowed = [i for i in range(m) if p.blocks[i] <= s]
            slots += [(("cnj", x, y), i) for i in allowed]
    return slots


def mutate(p, seed):
    """Change one exponent of one relation, chosen by ``seed``."""
    rng = random.Random(seed)
    slots = mutation_slots(p)
    if not slots:
        return Mutation(p, False, "no mutable exponent")
    rel, i = rng.choice(slots)
    word = list(p.pi(rel[1]) if rel[0] == "pow" else p.delta(rel[1], rel[2]))
    old = word[i]
    n = p.orders[i]
    new = rng.randrange(n) if n is not None else old + rng.choice([-2, -1, 1, 2])
    word[i] = new
    word = tuple(word)
    if rel[0] == "pow":
        q = p.replace(powers={**p.powers, rel[1]: word})
        what = f"pi({p.names[rel[1]]})"
    else:
        q = p.replace(conjugates={**p.conjugates, (rel[1], rel[2]): word})
        what = f"delta({p.names[rel[1]]},{p.names[rel[2]]})"
    return Mutation(q, new != old, f"{what}: exponent on {p.names[i]} {old} -> {new}")
