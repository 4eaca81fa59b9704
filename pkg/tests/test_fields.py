"""Tests for the binary field arithmetic."""

import itertools

import numpy as np
import pytest

from enriqueslab.fields import (
    FieldElement,
    binary_field,
    can_embed,
    common_order,
    embed_residue,
    residue_inv,
    residue_mul,
)


@pytest.mark.parametrize("order", [2, 4, 16, 64])
def test_field_axioms(order: int):
    field = binary_field(order)
    elements = field.elements()
    assert len(elements) == order
    for a in elements:
        assert a + a == field.zero
        assert a * field.one == a
        if a:
            assert a * a.inverse() == field.one
    for a, b in itertools.product(elements[: min(order, 16)], repeat=2):
        assert a * b == b * a
        assert (a + b) ** 2 == a**2 + b**2


@pytest.mark.parametrize(("order", "expected"), [(4, 3), (16, 15), (64, 63)])
def test_generator_is_primitive(order: int, expected: int):
    g = binary_field(order).generator()
    assert g.multiplicative_order() == expected
    assert len({g**k for k in range(expected)}) == expected


def test_gf4_table():
    F4 = binary_field(4)
    w = F4.generator()
    assert w**2 == w + 1
    assert w**3 == F4.one
    assert [str(x) for x in F4.elements()] == ["0", "1", "w", "w^2"]


class TestEmbedding:
    @pytest.mark.parametrize("target", [16, 64])
    def test_embedding_is_a_homomorphism(self, target: int):
        for a, b in itertools.product(binary_field(4).elements(), repeat=2):
            assert (a * b).embed(target) == a.embed(target) * b.embed(target)
            assert (a + b).embed(target) == a.embed(target) + b.embed(target)

    def test_omega_has_order_three(self):
        for order in (4, 16, 64):
            w = binary_field(order).omega()
            assert w.multiplicative_order() == 3
            assert w**2 + w + 1 == binary_field(order).zero

    def test_no_embedding_between_gf16_and_gf64(self):
        assert can_embed(4, 64)
        assert not can_embed(16, 64)
        with pytest.raises(TypeError, match="does not embed"):
            embed_residue(0b10, 16, 64)
        with pytest.raises(TypeError, match="no common field"):
            common_order(16, 64)

    def test_mixed_arithmetic_lands_in_larger_field(self):
        w = binary_field(4).generator()
        g = binary_field(16).generator()
        assert (w + g).field_order == 16
        assert w * 1 == w
        assert w * 2 == binary_field(4).zero


class TestErrors:
    def test_inverse_of_zero(self):
        with pytest.raises(ZeroDivisionError, match="no inverse"):
            residue_inv(4, 0)
        with pytest.raises(ZeroDivisionError):
            binary_field(16).one / binary_field(16).zero

    def test_bad_order(self):
        with pytest.raises(ValueError, match="is not one of"):
            FieldElement(8, 1)

    def test_residue_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            FieldElement(4, 4)

    def test_zero_has_no_order(self):
        with pytest.raises(ValueError, match="not a unit"):
            binary_field(4).zero.multiplicative_order()


def test_random_elements_are_seeded(rng: np.random.Generator):
    field = binary_field(64)
    drawn = [field.random(rng, nonzero=True) for _ in range(50)]
    assert all(drawn)
    again = np.random.default_rng(seed=20241019)
    assert drawn == [field.random(again, nonzero=True) for _ in range(50)]


def test_residue_mul_matches_schoolbook():
    modulus, degree = 0b10011, 4
    for a, b in itertools.product(range(16), repeat=2):
        product = 0
        for bit in range(degree):
            if b >> bit & 1:
                product ^= a << bit
        for shift in range(2 * degree - 2, degree - 1, -1):
            if product >> shift & 1:
                product ^= modulus << (shift - degree)
        assert residue_mul(16, a, b) == product
