import pytest
from hypothesis import given, settings, strategies as st

from rsp import corpus
from rsp.errors import PresentationSyntaxError, PresentationValidationError
from rsp.presentation import RefinedPresentation, parse, prime_power, serialize, validate
from rsp.words import format_word, free_word, parse_normal_word, parse_word

from models import heisenberg_model

Q8_TEXT = """\
rsp 1
# quaternion group
gen x1 block 1 order 4 prime 2
gen x2 block 2 order 2 prime 2
pow x2 = x1^2
cnj x1 x2 = x1^3
"""

NON_POLYCYCLIC_TEXT = """\
rsp 1
gen x1 block 1 order inf
gen x2 block 2 order inf
cnj x1 x2 = x1^2
"""


def test_parse_non_polycyclic_example():
    p = parse(NON_POLYCYCLIC_TEXT)
    assert p.m == 2 and p.orders == (None, None)
    assert p.delta(0, 1) == (2, 0)


def test_parse_single_infinite_generator():
    p = parse("rsp 1\ngen a block 1 order inf\n")
    assert p.m == 1
    assert p.powers == {} and p.conjugates == {}


def test_parse_q8():
    p = parse(Q8_TEXT)
    assert p.pi(1) == (2, 0)
    assert p.delta(0, 1) == (3, 0)
    assert p == corpus.quaternion8()


def test_serialize_single_generator():
    assert serialize(corpus.free_abelian(1)) == "rsp 1\ngen x1 block 1 order inf\n"


def test_round_trip_byte_identical():
    assert serialize(parse(NON_POLYCYCLIC_TEXT)) == NON_POLYCYCLIC_TEXT
    text = serialize(parse(Q8_TEXT))
    assert serialize(parse(text)) == text


@pytest.mark.parametrize("spec", ["quaternion8", "heisenberg", "ut(5,3)", "cyclic(60)",
                                  "dihedral(16)", "free_abelian(3)", "bs(2)", "trivial",
                                  "tower(1,6)", "tower(2,8)", "tower(9,4)"])
def test_round_trip_families(spec):
    p = corpus.family(spec)
    assert parse(serialize(p)) == p


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_round_trip_random_towers(seed):
    p = corpus.random_tower(seed, depth=4)
    assert validate(p) == []
    assert parse(serialize(p)) == p


def test_heisenberg_valid_and_matches_matrix_model():
    p = corpus.heisenberg()
    assert validate(p) == []
    model = heisenberg_model()
    g = model.gens
    for y in range(3):
        for x in range(y):
            assert model.conj(g[x], g[y]) == model.eval(p.delta(x, y))


def test_type1_violation():
    h = corpus.heisenberg()
    bad = h.replace(conjugates={(1, 2): (1, 2, 0)})
    violations = validate(bad)
    assert len(violations) == 1
    assert violations[0].constraint == "type1"
    assert violations[0].pair == (1, 2)


def test_type2_violation():
    p = RefinedPresentation(("a", "b", "c"), (1, 1, 2), (2, 3, 2), (2, 3, 2), {},
                            {(0, 2): (1, 1, 0)})
    violations = validate(p)
    assert [v.constraint for v in violations] == ["type2"]
    assert violations[0].pair == (0, 2)


def test_type3_allows_own_block():
    p = RefinedPresentation(("a", "b", "c"), (1, 1, 2), (None, None, None), (None,) * 3, {},
                            {(0, 2): (1, 1, 0)})
    assert validate(p) == []
    q = p.replace(conjugates={(0, 2): (1, 0, 0), (0, 1): (1, 0, 0)})
    assert validate(q) == []


def test_pi_support_and_domain_violations():
    p = corpus.quaternion8()
    assert [v.constraint for v in validate(p.replace(powers={1: (0, 1)}))] == ["pi-support"]
    assert [v.constraint for v in validate(p.replace(powers={1: (5, 0)}))] == ["domain"]


def test_structural_violations():
    assert validate(RefinedPresentation(("a", "b"), (1, 3), (None, None), (None, None)))
    assert validate(RefinedPresentation(("a",), (1,), (6,), (2,)))
    assert validate(RefinedPresentation(("a",), (1,), (None,), (3,)))


@pytest.mark.parametrize("text", [
    "",
    "# nothing\n",
    "rsp 2\n",
    "rsp 1\ngen x1 block 1 order 4\n",
    "rsp 1\ngen x1 block 1 order inf prime 2\n",
    "rsp 1\ngen x1 block 1 order inf\ngen x1 block 1 order inf\n",
    "rsp 1\ngen x1 block 1 order inf\ngen x2 block 2 order inf\ncnj x2 x1 = x1\n",
    "rsp 1\ngen x1 block 1 order inf\ngen x2 block 2 order inf\ncnj x1 x2 x1\n",
    "rsp 1\ngen x1 block 1 order inf\ngen x2 block 2 order inf\ncnj x1 x3 = x1\n",
    "rsp 1\ngen x1 block 1 order inf\ngen x2 block 2 order inf\ncnj x1 x2 = x1 x1\n",
    "rsp 1\ngen x1 block 1 order inf\nfoo\n",
    "rsp 1\ngen x1 block 1 order 2 prime 2\npow x1 = 1\npow x1 = 1\n",
])
def test_syntax_errors(text):
    with pytest.raises(PresentationSyntaxError):
        parse(text)


def test_syntax_error_reports_position():
    with pytest.raises(PresentationSyntaxError) as exc:
        parse("rsp 1\ngen x1 block 1 order inf\n  bogus here\n")
    assert exc.value.line == 3 and exc.value.column == 3


def test_validation_error_from_parse():
    text = ("rsp 1\ngen x1 block 1 order inf\ngen x2 block 2 order inf\n"
            "gen x3 block 2 order inf\ncnj x2 x3 = x2^2\n")
    with pytest.raises(PresentationValidationError) as exc:
        parse(text)
    assert [v.constraint for v in exc.value.violations] == ["type1"]


def test_prime_power():
    assert prime_power(8) == (2, 3)
    assert prime_power(9) == (3, 2)
    assert prime_power(12) is None
    assert prime_power(1) is None


def test_word_grammar():
    index = {"a": 0, "b": 1, "c": 2}
    assert parse_word("a b^-2 a^3", index) == ((0, 1), (1, -2), (0, 3))
    assert parse_word("1", index) == ()
    assert parse_word("a a^-1", index) == ()
    assert parse_normal_word("c a^2", index, 3) == (2, 0, 1)
    with pytest.raises(PresentationSyntaxError):
        parse_normal_word("a c", index, 3)
    assert format_word((2, 0, 1), ("a", "b", "c")) == "c a^2"
    assert format_word((0, 0, 0), ("a", "b", "c")) == "1"
    assert free_word([(0, 1), (0, -1), (1, 2)]) == ((1, 2),)
