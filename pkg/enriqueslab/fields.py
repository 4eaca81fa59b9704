"""Arithmetic in the small binary fields GF(2), GF(4), GF(16) and GF(64).

Elements are stored as residues: the bit pattern of a polynomial over GF(2) reduced
modulo a fixed primitive polynomial. Multiplication goes through discrete log tables
built once per field, so a product is two lookups and an addition.

Example::

    F4 = binary_field(4)
    w = F4.generator()
    assert w**3 == F4.one and w + w**2 == F4.one

Notes:
    The moduli are w^2+w+1, x^4+x+1 and x^6+x+1. Each is primitive, so the class of
    x generates the multiplicative group. GF(4) embeds in GF(16) and GF(64) by sending
    w to the unique element of order 3 that is a power g^((q-1)/3) of the generator.
"""

import functools
import math
from dataclasses import dataclass
from typing import Final

import numpy as np

from enriqueslab.typing import FieldOrder


MODULI: Final[dict[int, int]] = {2: 0b10, 4: 0b111, 16: 0b10011, 64: 0b1000011}
DEGREES: Final[dict[int, int]] = {2: 1, 4: 2, 16: 4, 64: 6}


@functools.cache
def _tables(order: int) -> tuple[tuple[int, ...], dict[int, int]]:
    """Exponential and logarithm tables with respect to the class of x."""
    if order not in MODULI:
        raise ValueError(f"{order=} is not one of {sorted(MODULI)}")
    if order == 2:
        return (1,), {1: 0}
    modulus, degree = MODULI[order], DEGREES[order]
    exp, log = [], {}
    value = 1
    for k in range(order - 1):
        if value in log:
            raise ValueError(f"modulus {modulus:b} is not primitive for {order=}")
        exp.append(value)
        log[value] = k
        value <<= 1
        if value >> degree:
            value ^= modulus
    return tuple(exp), log


def residue_mul(order: int, a: int, b: int) -> int:
    """Multiply two residues of GF(order)."""
    if a == 0 or b == 0:
        return 0
    exp, log = _tables(order)
    return exp[(log[a] + log[b]) % (order - 1)]


def residue_inv(order: int, a: int) -> int:
    """Multiplicative inverse of a nonzero residue."""
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse in GF({order})")
    exp, log = _tables(order)
    return exp[-log[a] % (order - 1)]


def residue_pow(order: int, a: int, n: int) -> int:
    """Raise a residue to an integer power (negative powers invert)."""
    if a == 0:
        if n < 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({order})")
        return 1 if n == 0 else 0
    exp, log = _tables(order)
    return exp[(log[a] * n) % (order - 1)]


def can_embed(source: int, target: int) -> bool:
    """Whether GF(source) is a subfield of GF(target)."""
    return DEGREES[target] % DEGREES[source] == 0


def embed_residue(residue: int, source: int, target: int) -> int:
    """Image of a residue of GF(source) under the fixed embedding into GF(target)."""
    if source == target or residue in (0, 1):
        return residue
    if not can_embed(source, target):
        raise TypeError(f"GF({source}) does not embed in GF({target})")
    if source != 4:
        raise TypeError(f"no embedding fixed for GF({source}) -> GF({target})")
    # residue = low + high*w, with w sent to an element of order 3
    image_w = residue_pow(target, 0b10, (target - 1) // 3)
    low, high = residue & 1, residue >> 1
    return low ^ (image_w if high else 0)


@dataclass(frozen=True, order=True)
class FieldElement:
    """An element of GF(field_order).

    Attributes:
        field_order (int): One of 2, 4, 16, 64.
        residue (int): Bit pattern of the reduced polynomial, in [0, field_order).
    """

    field_order: int
    residue: int

    def __post_init__(self) -> None:
        if self.field_order not in MODULI:
            raise ValueError(f"{self.field_order=} is not one of {sorted(MODULI)}")
        if not 0 <= self.residue < self.field_order:
            raise ValueError(f"{self.residue=} out of range for GF({self.field_order})")

    def _coerce(self, other: "FieldElement | int") -> tuple[int, int, int]:
        if isinstance(other, int):
            return self.field_order, self.residue, other & 1
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")
        order = common_order(self.field_order, other.field_order)
        return (
            order,
            embed_residue(self.residue, self.field_order, order),
            embed_residue(other.residue, other.field_order, order),
        )

    def __add__(self, other: "FieldElement | int") -> "FieldElement":
        order, a, b = self._coerce(other)
        return FieldElement(order, a ^ b)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self) -> "FieldElement":
        return self

    def __mul__(self, other: "FieldElement | int") -> "FieldElement":
        order, a, b = self._coerce(other)
        return FieldElement(order, residue_mul(order, a, b))

    __rmul__ = __mul__

    def __truediv__(self, other: "FieldElement | int") -> "FieldElement":
        order, a, b = self._coerce(other)
        return FieldElement(order, residue_mul(order, a, residue_inv(order, b)))

    def __rtruediv__(self, other: int) -> "FieldElement":
        return FieldElement(self.field_order, other & 1) / self

    def __pow__(self, n: int) -> "FieldElement":
        residue = residue_pow(self.field_order, self.residue, n)
        return FieldElement(self.field_order, residue)

    def __bool__(self) -> bool:
        return self.residue != 0

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse."""
        return FieldElement(self.field_order, residue_inv(self.field_order, self.residue))

    def frobenius(self) -> "FieldElement":
        """The square x -> x^2, a field automorphism in characteristic 2."""
        return self * self

    def multiplicative_order(self) -> int:
        """Order of a nonzero element in the cyclic group of units."""
        if not self:
            raise ValueError("0 is not a unit")
        _, log = _tables(self.field_order)
        return (self.field_order - 1) // math.gcd(log[self.residue], self.field_order - 1)

    def embed(self, order: int) -> "FieldElement":
        """Image in GF(order) under the fixed embedding."""
        return FieldElement(order, embed_residue(self.residue, self.field_order, order))

    def __str__(self) -> str:
        if self.residue in (0, 1):
            return str(self.residue)
        _, log = _tables(self.field_order)
        k = log[self.residue]
        symbol = "w" if self.field_order == 4 else "g"
        return symbol if k == 1 else f"{symbol}^{k}"

    __repr__ = __str__


def common_order(a: int, b: int) -> int:
    """Smallest of the two fields that contains the other."""
    if can_embed(a, b):
        return b
    if can_embed(b, a):
        return a
    raise TypeError(f"GF({a}) and GF({b}) have no common field among {sorted(MODULI)}")


@dataclass(frozen=True)
class BinaryField:
    """The field GF(order) as a factory of its elements."""

    order: FieldOrder

    @property
    def zero(self) -> FieldElement:
        """Additive identity."""
        return FieldElement(self.order, 0)

    @property
    def one(self) -> FieldElement:
        """Multiplicative identity."""
        return FieldElement(self.order, 1)

    def __call__(self, residue: int) -> FieldElement:
        return FieldElement(self.order, residue)

    def generator(self) -> FieldElement:
        """The class of x, a generator of the unit group."""
        return FieldElement(self.order, _tables(self.order)[0][1 % (self.order - 1)])

    def omega(self) -> FieldElement:
        """A primitive cube root of unity, the image of w from GF(4)."""
        if (self.order - 1) % 3:
            raise ValueError(f"GF({self.order}) has no primitive cube root of unity")
        return FieldElement(4, 0b10).embed(self.order)

    def elements(self) -> tuple[FieldElement, ...]:
        """All elements in residue order, so for GF(4): 0, 1, w, w^2."""
        return tuple(FieldElement(self.order, r) for r in range(self.order))

    def units(self) -> tuple[FieldElement, ...]:
        """Nonzero elements."""
        return self.elements()[1:]

    def random(self, rng: np.random.Generator, *, nonzero: bool = False) -> FieldElement:
        """Draw a uniformly random element."""
        low = 1 if nonzero else 0
        return FieldElement(self.order, int(rng.integers(low, self.order)))


@functools.cache
def binary_field(order: FieldOrder) -> BinaryField:
    """Cached field factory."""
    _tables(order)
    return BinaryField(order)
