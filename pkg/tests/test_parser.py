"""Tests for the mixed-polynomial grammar and printer."""

import numpy as np
import pytest

from src.errors import DimensionMismatch, MixParseError, UsageError
from src.polynomials.mixed_poly import MixedPoly
from src.polynomials.parser import format_homogenization, format_poly, parse, parse_homogeneous
from tests.conftest import WORKED_EXAMPLE


def test_worked_example_canonical_form():
    f = parse(WORKED_EXAMPLE)
    assert f == MixedPoly({(3, 1): 1, (2, 2): -2, (0, 0): 1})
    assert format_poly(f) == "u^3*conj(u) - 2*u^2*conj(u)^2 + 1"


def test_juxtaposition_and_unary_signs():
    assert parse("2u") == parse("2*u")
    assert parse("-u^2") == MixedPoly({(2, 0): -1})
    assert parse("+u - -u") == parse("2*u")
    assert parse("(u)(conj(u))") == MixedPoly({(1, 1): 1})


def test_imaginary_unit_and_general_conj():
    assert parse("conj((1 + 2i)*u)") == MixedPoly({(0, 1): 1 - 2j})
    assert parse("i*i") == -1
    assert format_poly(parse("(1+2i)u - 3i*conj(u)")) == "(1 + 2*i)*u - 3*i*conj(u)"


def test_two_variable_family():
    f = parse("2z1 + z1*conj(z1) + z2*conj(z2)")
    assert f.nvars == 2
    assert dict(f.terms) == {(1, 0, 0, 0): 2, (1, 1, 0, 0): 1, (0, 0, 1, 1): 1}
    assert format_poly(f) == "z1*conj(z1) + z2*conj(z2) + 2*z1"


def test_constant_text_and_nvars_hint():
    assert parse("3").nvars == 1
    assert parse("3", nvars=2).nvars == 2
    assert parse("0").is_zero()
    with pytest.raises(DimensionMismatch):
        parse("u", nvars=2)


def test_parameters():
    f = parse("(u^2 - t)*conj(u)", params={"t": 0.25})
    assert f == MixedPoly({(2, 1): 1, (0, 1): -0.25})
    with pytest.raises(UsageError):
        parse("u", params={"conj": 1})


@pytest.mark.parametrize(
    "text, position, fragment",
    [
        ("u^-2", 2, "negative exponent"),
        ("u^1.5", 2, "non-negative integer"),
        ("u + x", 4, "unknown identifier"),
        ("u + z1", 4, "mixes variable families"),
        ("u $ 2", 2, "unexpected character"),
        ("(u + 1", 6, "expected ')'"),
        ("", 0, "empty expression"),
    ],
)
def test_parse_errors_carry_positions(text, position, fragment):
    with pytest.raises(MixParseError) as info:
        parse(text)
    assert info.value.position == position
    assert fragment in info.value.message


def test_error_pointer_places_caret():
    with pytest.raises(MixParseError) as info:
        parse("u + z1")
    assert info.value.pointer() == "u + z1\n    ^"


def test_homogeneous_family_is_separate():
    with pytest.raises(MixParseError):
        parse("Z0*Z1")
    terms, count = parse_homogeneous("Z0*conj(Z1) + Z1*conj(Z0)")
    assert count == 2
    assert terms == {(1, 0, 0, 1): 1, (0, 1, 1, 0): 1}
    assert format_homogenization(terms) == "Z0*conj(Z1) + conj(Z0)*Z1"
    _, count3 = parse_homogeneous("Z2*conj(Z0)")
    assert count3 == 3


def _random_poly(rng: np.random.Generator) -> MixedPoly:
    nvars = int(rng.integers(1, 3))
    terms = {}
    for _ in range(int(rng.integers(0, 6))):
        exp = tuple(int(e) for e in rng.integers(0, 4, size=2 * nvars))
        kind = rng.integers(0, 4)
        if kind == 0:
            c = complex(int(rng.integers(-9, 10)))
        elif kind == 1:
            c = complex(float(rng.normal()))
        elif kind == 2:
            c = complex(0, float(rng.normal()))
        else:
            c = complex(float(rng.normal()), float(rng.normal()))
        terms[exp] = c
    return MixedPoly(terms, nvars)


def test_printer_output_parses_back_to_the_same_polynomial():
    rng = np.random.default_rng(20240611)
    for _ in range(1000):
        f = _random_poly(rng)
        text = format_poly(f)
        assert parse(text, nvars=f.nvars) == f, text


@pytest.mark.parametrize(
    "juxtaposed, explicit",
    [
        ("uu", "u*u"),
        ("iu", "i*u"),
        ("2iu", "2*i*u"),
        ("uconj(u)", "u*conj(u)"),
        ("z1z2", "z1*z2"),
        ("z1conj(z2)z2", "z1*conj(z2)*z2"),
        ("Z0Z1", "Z0*Z1"),
    ],
)
def test_juxtaposed_names_multiply(juxtaposed, explicit):
    if juxtaposed.startswith("Z"):
        assert parse_homogeneous(juxtaposed) == parse_homogeneous(explicit)
    else:
        assert parse(juxtaposed) == parse(explicit)


def test_unsplittable_run_is_unknown():
    with pytest.raises(MixParseError) as info:
        parse("2 + uxu")
    assert info.value.position == 4
    assert "'uxu'" in info.value.message


def test_parameter_names_are_not_split():
    assert parse("tu", params={"tu": 2}) == 2
    assert parse("t u", params={"t": 2}) == parse("2u")


@pytest.mark.parametrize(
    "text",
    ["u u", "2 i u", "u conj(u) + 3", "z1 z2 - conj(z1) z2", "(1 + 2i) u - 3 i conj(u)"],
)
def test_whitespace_is_insignificant(text):
    assert parse(text.replace(" ", "")) == parse(text)


def test_printing_is_idempotent_and_whitespace_free_text_parses_alike():
    rng = np.random.default_rng(77)
    for _ in range(300):
        f = _random_poly(rng)
        text = format_poly(f)
        assert format_poly(parse(text, nvars=f.nvars)) == text
        assert parse(text.replace(" ", ""), nvars=f.nvars) == f, text
