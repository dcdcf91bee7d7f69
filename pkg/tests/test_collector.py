import random

import pytest
from hypothesis import given, settings, strategies as st

from rsp import corpus
from rsp.collector import (Collector, InverseConjugateTable, derive_inverse_conjugates,
                           derive_table, restrict)
from rsp.errors import InverseDerivationError, MissingInverse, StepLimitExceeded
from rsp.words import free_word

from models import (dihedral_model, heisenberg_model, normal_forms, quaternion_model,
                    ut_model)


def col_for(p):
    return Collector(p, table=derive_table(p))


# ------------------------------------------------------------ examples


def test_non_polycyclic_collect_and_conjugate():
    p = corpus.baumslag_solitar(2)
    col = Collector(p)
    assert col.collect(((0, 1), (1, 1))) == (2, 1)
    assert col.conjugate((1, 0), (0, 1)) == (2, 0)


def test_free_cancellation():
    col = col_for(corpus.heisenberg())
    assert col.collect(()) == (0, 0, 0)
    assert col.collect(((0, 1), (0, -1))) == (0, 0, 0)


def test_q8_examples():
    col = col_for(corpus.quaternion8())
    assert col.collect(((0, 1), (1, 1), (0, 1), (1, 1))) == (2, 0)
    assert col.multiply((0, 1), (0, 1)) == (2, 0)
    assert col.invert((0, 1)) == (2, 1)
    assert col.invert((0, 0)) == (0, 0)


def test_infinite_cyclic_invert():
    col = col_for(corpus.free_abelian(1))
    assert col.invert((3,)) == (-3,)


def test_power_examples():
    d8 = corpus.dihedral(8)
    col = col_for(d8)
    assert col.power((1, 1), 2) == (0, 0)
    assert col.power((3, 1), 1) == (3, 1)
    assert col.power((3, 1), 0) == (0, 0)
    q8 = corpus.quaternion8()
    assert col_for(q8).power((0, 1), 2) == q8.pi(1)


def test_heisenberg_against_matrix_model():
    p = corpus.heisenberg()
    col = col_for(p)
    model = heisenberg_model()
    # expected values computed in the matrix model first
    expected = model.mul(model.gens[1], model.gens[2])
    assert model.eval((1, 1, 1)) == expected
    assert col.multiply((0, 1, 0), (0, 0, 1)) == (1, 1, 1)
    assert model.eval((1, 1, 0)) == model.conj(model.gens[1], model.gens[2])
    assert col.conjugate((0, 1, 0), (0, 0, 1)) == (1, 1, 0)


def test_conjugate_by_identity():
    col = col_for(corpus.quaternion8())
    assert col.conjugate((3, 1), (0, 0)) == (3, 1)


# ---------------------------------------------------- inverse conjugates


def test_trivial_action_gives_trivial_mu():
    p = corpus.free_abelian(3)
    tbl = derive_table(p)
    assert all(tbl[(x, y)] == p.gen(x) for y in range(3) for x in range(y))


def test_mu_for_inverting_action():
    p = corpus.baumslag_solitar(-1)
    tbl = derive_inverse_conjugates(p, 1, InverseConjugateTable())
    assert tbl[(0, 1)] == (-1, 0)
    assert Collector(p, table=tbl).conjugate(tbl[(0, 1)], p.gen(1)) == p.gen(0)


def test_mu_heisenberg_matrix_model():
    p = corpus.heisenberg()
    model = heisenberg_model()
    g = model.gens
    tbl = derive_table(p)
    # x^{z^-1} = z x z^-1 in the model
    for z in range(3):
        for x in range(z):
            want = model.mul(model.mul(g[z], g[x]), model.inv(g[z]))
            assert model.eval(tbl[(x, z)]) == want
    assert tbl[(1, 2)] == (-1, 1, 0)


def test_mu_derivation_rejects_singular_action():
    with pytest.raises(InverseDerivationError) as exc:
        derive_inverse_conjugates(corpus.baumslag_solitar(2), 1, InverseConjugateTable())
    assert exc.value.det == 2


def test_missing_inverse_is_reported():
    col = Collector(corpus.baumslag_solitar(-1))
    with pytest.raises(MissingInverse):
        col.collect(((0, 1), (1, -1)))


def test_inverse_derivation_supplied_matrix_checked():
    p = corpus.baumslag_solitar(-1)
    sec = p.sections(limit=1)[0]
    ok = derive_inverse_conjugates(p, 1, InverseConjugateTable(), {sec: [[-1]]})
    assert ok[(0, 1)] == (-1, 0)
    with pytest.raises(InverseDerivationError):
        derive_inverse_conjugates(p, 1, InverseConjugateTable(), {sec: [[1]]})


# ------------------------------------------------------------ restrict


def test_restrict():
    q8 = corpus.quaternion8()
    assert restrict(q8, 0).relations() == []
    assert restrict(q8, 1).relations() == [("pow", 0)]
    assert len(restrict(q8, 2).relations()) == 3
    with pytest.raises(ValueError):
        restrict(q8, 3)
    col = Collector(restrict(q8, 1))
    assert col.power((1, 0), 4) == (0, 0)


# ------------------------------------------------- model-based arithmetic


MODELS = [
    ("quaternion8", quaternion_model()),
    ("dihedral(8)", dihedral_model(8)),
    ("dihedral(32)", dihedral_model(32)),
    ("ut(3,2)", ut_model(3, 2)),
    ("ut(4,3)", ut_model(4, 3)),
]


@pytest.mark.parametrize("spec,model", MODELS, ids=[m[0] for m in MODELS])
def test_relations_hold_in_model(spec, model):
    p = corpus.family(spec)
    g = model.gens
    for x in range(p.m):
        if p.orders[x] is not None:
            assert model.power(g[x], p.orders[x]) == model.eval(p.pi(x))
        for y in range(x + 1, p.m):
            assert model.conj(g[x], g[y]) == model.eval(p.delta(x, y))


@pytest.mark.parametrize("spec,model", MODELS, ids=[m[0] for m in MODELS])
def test_multiplication_matches_model(spec, model):
    p = corpus.family(spec)
    col = col_for(p)
    rng = random.Random(spec)
    elems = normal_forms(p)
    for _ in range(300):
        a, b = rng.choice(elems), rng.choice(elems)
        assert model.eval(col.multiply(a, b)) == model.mul(model.eval(a), model.eval(b))
        assert model.eval(col.invert(a)) == model.inv(model.eval(a))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(-3, 3)), max_size=12))
def test_heisenberg_free_words_match_model(letters):
    p = corpus.heisenberg()
    col = col_for(p)
    model = heisenberg_model()
    want = model.one
    for g, e in letters:
        want = model.mul(want, model.power(model.gens[g], e))
    assert model.eval(col.collect(free_word(letters))) == want


# ------------------------------------------------------ group-law properties


PRESENTATIONS = ["heisenberg", "quaternion8", "ut(4,2)", "tower(3,6)", "tower(11,8)",
                 "tower(20,5)", "free_abelian(2)"]


def _elements(p, rng, count):
    return [corpus.random_element(p, rng, density=0.7, inf_range=3) for _ in range(count)]


@pytest.mark.parametrize("spec", PRESENTATIONS)
def test_group_laws(spec):
    p = corpus.family(spec)
    col = col_for(p)
    rng = random.Random(1)
    elems = _elements(p, rng, 12)
    e = p.identity
    for a in elems:
        assert col.multiply(a, e) == a == col.multiply(e, a)
        assert col.multiply(a, col.invert(a)) == e == col.multiply(col.invert(a), a)
        assert col.collect(tuple((i, x) for i, x in reversed(list(enumerate(a))) if x)) == a
        for b in elems[:4]:
            for c in elems[:3]:
                assert col.multiply(col.multiply(a, b), c) == col.multiply(a, col.multiply(b, c))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-6, 6))
def test_power_is_repeated_multiplication(seed, e):
    p = corpus.random_tower(seed % 50, depth=4)
    col = col_for(p)
    a = corpus.random_element(p, random.Random(seed), density=0.6, inf_range=2)
    want = p.identity
    step = a if e >= 0 else col.invert(a)
    for _ in range(abs(e)):
        want = col.multiply(want, step)
    assert col.power(a, e) == want


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_collect_is_idempotent(seed):
    p = corpus.random_tower(seed % 50, depth=5)
    col = col_for(p)
    rng = random.Random(seed)
    letters = [(rng.randrange(p.m), rng.randint(-3, 3)) for _ in range(8)] if p.m else []
    w = col.collect(free_word(letters))
    assert col.is_normal(w)
    assert col.multiply(w, p.identity) == w


def test_step_limit():
    p = corpus.ut(6, 2)
    col = Collector(p, table=derive_table(p), step_limit=5)
    a = tuple([1] * p.m)
    with pytest.raises(StepLimitExceeded):
        col.multiply(a, a)


def test_step_limit_from_environment(monkeypatch):
    monkeypatch.setenv("RSP_STEP_LIMIT", "3")
    p = corpus.ut(6, 2)
    col = Collector(p)
    assert col.step_limit == 3
    with pytest.raises(StepLimitExceeded):
        col.multiply(tuple([1] * p.m), tuple([1] * p.m))
