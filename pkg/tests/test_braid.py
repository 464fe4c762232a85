import random

import pytest

from src.core import braid
from src.core.braid import (
    DELTA,
    IDENTITY_ELEMENT,
    PHI_S,
    PHI_T,
    SHIFT_ONE,
    SIGMA,
    GenLetter,
    Symbol,
    compose,
    ell_mod5,
    format_word,
    inverse,
    is_sph,
    parse_word,
    power,
    reduce,
)
from src.core.errors import WordSyntaxError


def reduce_text(text):
    return reduce(parse_word(text))


def test_tilt_generators_k_matrices():
    assert DELTA.k_matrix.to_list() == [[0, -1], [1, 0]]
    assert SIGMA.k_matrix.to_list() == [[0, 1], [-1, 1]]


def test_sigma_cubed_equals_delta_squared_equals_shift():
    assert power(SIGMA, 3) == power(DELTA, 2) == SHIFT_ONE
    assert reduce_text("Sigma^3 Delta^-2").is_identity()


def test_braid_relation():
    assert reduce_text("S T S") == reduce_text("T S T")


def test_center_relation():
    assert reduce_text("S T S T S T [5]").is_identity()
    assert reduce_text("[5]") == power(compose(PHI_S, PHI_T), -3)


@pytest.mark.parametrize("word,expected", [("S", 0), ("T^-4", 0), ("[1]", 1), ("Sigma", 2), ("Delta", 3), ("[7]", 2)])
def test_ell_mod5(word, expected):
    assert ell_mod5(reduce_text(word)) == expected


def test_sph_membership():
    assert is_sph(PHI_S) and is_sph(PHI_T)
    assert is_sph(reduce_text("[5]"))
    assert not is_sph(SHIFT_ONE)


def test_inverse_and_identity():
    g = reduce_text("S T^2 [3] S^-1")
    assert compose(g, inverse(g)) == IDENTITY_ELEMENT
    assert compose(inverse(g), g) == IDENTITY_ELEMENT


def test_canonical_form_is_unique():
    # same element written two ways
    assert reduce_text("S T [1]") == reduce_text("[1] S T")
    assert reduce_text("S^2 S^-1") == PHI_S


LETTERS = [
    GenLetter(Symbol.PHI_S, 1), GenLetter(Symbol.PHI_S, -1),
    GenLetter(Symbol.PHI_T, 1), GenLetter(Symbol.PHI_T, -1),
    GenLetter(Symbol.SHIFT, 1), GenLetter(Symbol.SHIFT, -1),
    GenLetter(Symbol.SHIFT, 2), GenLetter(Symbol.SHIFT, -2),
]


def random_words(count, seed=7, max_length=12):
    rng = random.Random(seed)
    return [[rng.choice(LETTERS) for _ in range(rng.randint(0, max_length))] for _ in range(count)]


def test_reduce_is_a_homomorphism():
    words = random_words(60)
    for w1, w2 in zip(words[::2], words[1::2]):
        assert reduce(w1 + w2) == compose(reduce(w1), reduce(w2))


def test_equal_reductions_iff_quotient_is_trivial():
    words = random_words(40, seed=11)
    # braid relation inserted into a copy: same element, different word
    relation = parse_word("S T S T^-1 S^-1 T^-1")
    variants = [w[: len(w) // 2] + relation + w[len(w) // 2 :] for w in words[:10]]
    pairs = list(zip(words[:10], variants)) + list(zip(words[::2], words[1::2]))
    assert any(reduce(w1) == reduce(w2) for w1, w2 in pairs)
    assert any(reduce(w1) != reduce(w2) for w1, w2 in pairs)
    for w1, w2 in pairs:
        quotient = reduce(w1 + braid.invert_word(w2))
        assert (reduce(w1) == reduce(w2)) == quotient.is_identity()


@pytest.mark.parametrize(
    "text, expected",
    [
        ("S", [[1, 1], [0, 1]]),
        ("[1]", [[1, 0], [0, 1]]),
        ("S T S T S T", [[1, 0], [0, 1]]),
    ],
)
def test_psl2_image(text, expected):
    assert braid.psl2_image(reduce_text(text)).to_list() == expected


def test_shift_residue_range():
    for n in range(-12, 13):
        assert 0 <= reduce([GenLetter(Symbol.SHIFT, n)] if n else []).shift_res < 5


def test_parse_and_format():
    word = parse_word("S T^-2 [3]")
    assert word == [GenLetter(Symbol.PHI_S), GenLetter(Symbol.PHI_T, -2), GenLetter(Symbol.SHIFT, 3)]
    assert format_word(word) == "S T^-2 [3]"


def test_parse_expands_sigma_and_delta():
    assert format_word(parse_word("Sigma")) == "S T [2]"
    assert format_word(parse_word("Delta^-1")) == "[-3] T^-1 S^-1 T^-1"


@pytest.mark.parametrize("text", ["S Q", "[x]", "S^", "Sigma^^2"])
def test_parse_errors(text):
    with pytest.raises(WordSyntaxError):
        parse_word(text)


def test_letter_exponent_must_be_nonzero():
    with pytest.raises(ValueError):
        GenLetter(Symbol.PHI_S, 0)


def test_center_chain():
    chain_s, chain_t = braid.center_chain()
    assert len(chain_s) == len(chain_t) == 7
    assert braid.center_chain_matches()


def test_torus_normal_form():
    assert braid.torus_normal_form([("sigma", 3)]) == (1, ())
    assert braid.torus_normal_form([("delta", 2), ("sigma", -3)]) == (0, ())
    assert braid.torus_normal_form([("sigma", 1), ("delta", 1)]) == (0, (("sigma", 1), ("delta", 1)))
    assert braid.torus_is_trivial([("sigma", 2), ("sigma", 1), ("delta", -1), ("delta", -1)])
    assert not braid.torus_is_trivial([("sigma", 1), ("delta", 1)])


def test_to_dict_and_key():
    data = SIGMA.to_dict()
    assert data == {"k_matrix": [[0, 1], [-1, 1]], "twist_sum": 2, "shift_res": 2}
    assert SIGMA.key() == "[0,1;-1,1]|2|2"
