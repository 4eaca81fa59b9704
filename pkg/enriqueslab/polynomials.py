"""Sparse multivariate polynomials and rational functions over GF(2^k).

Polynomials keep a dictionary from exponent vectors to nonzero residues of a single
coefficient field. Two operands with different variable lists or fields are aligned
first: variables are merged in order of first appearance and coefficients are
embedded into the larger field.

Example::

    t, x = polynomial_ring("t", "x")
    p = (t * x + 1) ** 2
    assert p == t**2 * x**2 + 1  # Frobenius in characteristic 2

Notes:
    Monomials are ordered graded lexicographically with respect to the variable list,
    which fixes printing, leading terms and the division algorithm.
"""

# ruff: noqa: SLF001

from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from typing import TypeAlias

from enriqueslab.fields import (
    FieldElement,
    common_order,
    embed_residue,
    residue_inv,
    residue_mul,
    residue_pow,
)
from enriqueslab.typing import Exponent


Scalar: TypeAlias = FieldElement | int


def _grlex(exponent: Exponent) -> tuple[int, Exponent]:
    return sum(exponent), exponent


def _reindex(
    terms: dict[Exponent, int], source: tuple[str, ...], target: tuple[str, ...]
) -> dict[Exponent, int]:
    if source == target:
        return terms
    slots = [target.index(name) for name in source]
    out = {}
    for exponent, coeff in terms.items():
        moved = [0] * len(target)
        for i, k in enumerate(slots):
            moved[k] = exponent[i]
        out[tuple(moved)] = coeff
    return out


def _embed_terms(
    terms: dict[Exponent, int], source: int, target: int
) -> dict[Exponent, int]:
    if source == target:
        return terms
    return {e: embed_residue(c, source, target) for e, c in terms.items()}


class SparsePoly:
    """A polynomial with coefficients in GF(field_order).

    Instances are immutable. Arithmetic with ``int`` reduces the integer mod 2, so
    ``4 * p`` is zero and ``3 * p`` is ``p``, which is how the characteristic-free
    integer formulas specialise.

    Attributes:
        variables (tuple[str, ...]): Ordered variable names.
        field_order (int): Order of the coefficient field.
    """

    __slots__ = ("_terms", "field_order", "variables")

    def __init__(
        self,
        variables: Sequence[str],
        terms: Mapping[Exponent, Scalar] | None = None,
        *,
        field_order: int = 2,
    ) -> None:
        """Build a polynomial from exponent vectors and coefficients.

        Args:
            variables (Sequence[str]): Variable names, fixing the monomial order.
            terms (Mapping[Exponent, FieldElement | int] | None): Coefficients by
                exponent vector. Zero coefficients are dropped.
            field_order (int): Coefficient field. FieldElement coefficients from a
                subfield are embedded.

        Raises:
            ValueError: If an exponent vector has the wrong length or a negative entry.
        """
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables=}")
        residues: dict[Exponent, int] = {}
        for exponent, coeff in (terms or {}).items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != len(variables) or min(exponent, default=0) < 0:
                raise ValueError(f"bad {exponent=} for {variables=}")
            if isinstance(coeff, FieldElement):
                value = embed_residue(coeff.residue, coeff.field_order, field_order)
            else:
                value = int(coeff) & 1
            value ^= residues.get(exponent, 0)
            if value:
                residues[exponent] = value
            else:
                residues.pop(exponent, None)
        self.variables = variables
        self.field_order = field_order
        self._terms = residues

    @classmethod
    def _raw(
        cls, variables: tuple[str, ...], terms: dict[Exponent, int], field_order: int
    ) -> "SparsePoly":
        poly = object.__new__(cls)
        poly.variables = variables
        poly.field_order = field_order
        poly._terms = terms
        return poly

    @classmethod
    def constant(
        cls, value: Scalar, variables: Sequence[str] = (), *, field_order: int = 2
    ) -> "SparsePoly":
        """The constant polynomial ``value``."""
        if isinstance(value, FieldElement):
            field_order = common_order(value.field_order, field_order)
        return cls(variables, {(0,) * len(variables): value}, field_order=field_order)

    @classmethod
    def variable(
        cls, name: str, variables: Sequence[str] | None = None, *, field_order: int = 2
    ) -> "SparsePoly":
        """The polynomial consisting of the single variable ``name``."""
        variables = tuple(variables or (name,))
        exponent = tuple(int(v == name) for v in variables)
        if sum(exponent) != 1:
            raise ValueError(f"{name=} not in {variables=}")
        return cls(variables, {exponent: 1}, field_order=field_order)

    # -- inspection ---------------------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, FieldElement]:
        """Coefficients keyed by exponent, in descending graded lex order."""
        return {
            e: FieldElement(self.field_order, self._terms[e])
            for e in sorted(self._terms, key=_grlex, reverse=True)
        }

    def __iter__(self) -> Iterator[tuple[Exponent, FieldElement]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        """Whether the polynomial has no terms."""
        return not self._terms

    def coefficient(self, exponent: Exponent) -> FieldElement:
        """Coefficient of a monomial (zero if absent)."""
        return FieldElement(self.field_order, self._terms.get(tuple(exponent), 0))

    def occurring_variables(self) -> tuple[str, ...]:
        """Variables with a positive exponent in some term."""
        used = [any(e[i] for e in self._terms) for i in range(len(self.variables))]
        return tuple(v for v, flag in zip(self.variables, used, strict=True) if flag)

    def degree(self, name: str | None = None) -> int:
        """Degree in one variable, or total degree if ``name`` is None; -1 for zero."""
        if not self._terms:
            return -1
        if name is None:
            return max(sum(e) for e in self._terms)
        if name not in self.variables:
            return 0
        i = self.variables.index(name)
        return max(e[i] for e in self._terms)

    def leading_term(self) -> tuple[Exponent, FieldElement]:
        """Largest monomial in graded lex order with its coefficient."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exponent = max(self._terms, key=_grlex)
        return exponent, FieldElement(self.field_order, self._terms[exponent])

    def is_constant(self) -> bool:
        """Whether only the constant monomial occurs."""
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> FieldElement:
        """Value of a constant polynomial."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.coefficient((0,) * len(self.variables))

    # -- alignment ----------------------------------------------------------------

    def with_variables(self, variables: Sequence[str]) -> "SparsePoly":
        """Same polynomial over a variable list that contains every occurring variable."""
        variables = tuple(variables)
        missing = set(self.occurring_variables()) - set(variables)
        if missing:
            raise ValueError(f"cannot drop occurring variables {sorted(missing)}")
        terms = self._terms
        if self.variables != variables:
            keep = [
                self.variables.index(v) if v in self.variables else -1
                for v in variables
            ]
            terms = {
                tuple(e[k] if k >= 0 else 0 for k in keep): c for e, c in terms.items()
            }
        return SparsePoly._raw(variables, terms, self.field_order)

    def over(self, field_order: int) -> "SparsePoly":
        """Embed the coefficients into GF(field_order)."""
        terms = _embed_terms(self._terms, self.field_order, field_order)
        return SparsePoly._raw(self.variables, terms, field_order)

    def _lift(self, other: "SparsePoly | Scalar") -> "SparsePoly":
        if isinstance(other, SparsePoly):
            return other
        if isinstance(other, FieldElement | int):
            return SparsePoly.constant(
                other, self.variables, field_order=self.field_order
            )
        return NotImplemented

    def _align(
        self, other: "SparsePoly"
    ) -> tuple[tuple[str, ...], int, dict[Exponent, int], dict[Exponent, int]]:
        variables = self.variables + tuple(
            v for v in other.variables if v not in self.variables
        )
        order = common_order(self.field_order, other.field_order)
        mine = _embed_terms(
            _reindex(self._terms, self.variables, variables), self.field_order, order
        )
        theirs = _embed_terms(
            _reindex(other._terms, other.variables, variables), other.field_order, order
        )
        return variables, order, mine, theirs

    # -- ring operations ----------------------------------------------------------

    def __add__(self, other: "SparsePoly | Scalar") -> "SparsePoly":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        variables, order, mine, theirs = self._align(other)
        out = dict(mine)
        for e, c in theirs.items():
            value = out.get(e, 0) ^ c
            if value:
                out[e] = value
            else:
                out.pop(e, None)
        return SparsePoly._raw(variables, out, order)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self) -> "SparsePoly":
        return self

    def __mul__(self, other: "SparsePoly | Scalar") -> "SparsePoly":
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        variables, order, mine, theirs = self._align(other)
        out: dict[Exponent, int] = {}
        for e1, c1 in mine.items():
            for e2, c2 in theirs.items():
                e = tuple(a + b for a, b in zip(e1, e2, strict=True))
                value = out.get(e, 0) ^ residue_mul(order, c1, c2)
                if value:
                    out[e] = value
                else:
                    out.pop(e, None)
        return SparsePoly._raw(variables, out, order)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SparsePoly":
        if n < 0:
            raise ValueError(f"{n=} must be non-negative for a polynomial power")
        result = SparsePoly.constant(1, self.variables, field_order=self.field_order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base.frobenius_square()
        return result

    def frobenius_square(self) -> "SparsePoly":
        """The square computed as Frobenius on coefficients with doubled exponents."""
        terms = {
            tuple(2 * k for k in e): residue_mul(self.field_order, c, c)
            for e, c in self._terms.items()
        }
        return SparsePoly._raw(self.variables, terms, self.field_order)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement | int):
            other = self._lift(other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        try:
            _, _, mine, theirs = self._align(other)
        except TypeError:
            return False
        return mine == theirs

    def __hash__(self) -> int:
        return hash(
            frozenset(
                tuple((v, k) for v, k in zip(self.variables, e, strict=True) if k)
                for e in self._terms
            )
        )

    # -- calculus and evaluation --------------------------------------------------

    def derivative(self, name: str) -> "SparsePoly":
        """Formal partial derivative; only odd exponents survive in characteristic 2."""
        if name not in self.variables:
            return SparsePoly._raw(self.variables, {}, self.field_order)
        i = self.variables.index(name)
        terms = {}
        for e, c in self._terms.items():
            if e[i] % 2:
                terms[e[:i] + (e[i] - 1,) + e[i + 1 :]] = c
        return SparsePoly._raw(self.variables, terms, self.field_order)

    def specialize(self, values: Mapping[str, Scalar]) -> "SparsePoly":
        """Substitute field elements for some variables, keeping the variable list."""
        order = self.field_order
        for value in values.values():
            if isinstance(value, FieldElement):
                order = common_order(order, value.field_order)
        slots = {}
        for name, value in values.items():
            if name in self.variables:
                residue = (
                    embed_residue(value.residue, value.field_order, order)
                    if isinstance(value, FieldElement)
                    else int(value) & 1
                )
                slots[self.variables.index(name)] = residue
        out: dict[Exponent, int] = {}
        for e, c in _embed_terms(self._terms, self.field_order, order).items():
            coeff = c
            for i, residue in slots.items():
                coeff = residue_mul(order, coeff, residue_pow(order, residue, e[i]))
            if not coeff:
                continue
            kept = tuple(0 if i in slots else k for i, k in enumerate(e))
            value = out.get(kept, 0) ^ coeff
            if value:
                out[kept] = value
            else:
                out.pop(kept, None)
        return SparsePoly._raw(self.variables, out, order)

    def evaluate(self, point: Mapping[str, Scalar]) -> FieldElement:
        """Value at a point binding every occurring variable."""
        missing = set(self.occurring_variables()) - set(point)
        if missing:
            raise ValueError(f"no value given for {sorted(missing)}")
        return self.specialize(point).constant_value()

    # -- division -----------------------------------------------------------------

    def divmod(self, divisor: "SparsePoly") -> tuple["SparsePoly", "SparsePoly"]:
        """Multivariate division by a single divisor in graded lex order.

        The remainder is zero exactly when ``divisor`` divides ``self``.

        Raises:
            ZeroDivisionError: If the divisor is zero.
        """
        if divisor.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        variables, order, rest, dterms = self._align(divisor)
        lead = max(dterms, key=_grlex)
        lead_inv = residue_inv(order, dterms[lead])
        rest = dict(rest)
        quotient: dict[Exponent, int] = {}
        remainder: dict[Exponent, int] = {}
        while rest:
            e = max(rest, key=_grlex)
            c = rest[e]
            if any(a < b for a, b in zip(e, lead, strict=True)):
                remainder[e] = rest.pop(e)
                continue
            shift = tuple(a - b for a, b in zip(e, lead, strict=True))
            factor = residue_mul(order, c, lead_inv)
            quotient[shift] = quotient.get(shift, 0) ^ factor
            for de, dc in dterms.items():
                ne = tuple(a + b for a, b in zip(shift, de, strict=True))
                value = rest.get(ne, 0) ^ residue_mul(order, factor, dc)
                if value:
                    rest[ne] = value
                else:
                    rest.pop(ne, None)
        quotient = {e: c for e, c in quotient.items() if c}
        return (
            SparsePoly._raw(variables, quotient, order),
            SparsePoly._raw(variables, remainder, order),
        )

    def exact_div(self, divisor: "SparsePoly") -> "SparsePoly":
        """Quotient of an exact division.

        Raises:
            ValueError: If ``divisor`` does not divide ``self``.
        """
        quotient, remainder = self.divmod(divisor)
        if remainder:
            raise ValueError(f"{divisor} does not divide {self}")
        return quotient

    def coefficients_in(self, name: str) -> dict[int, "SparsePoly"]:
        """Coefficients of the powers of one variable, as polynomials in the others."""
        i = self.variables.index(name)
        buckets: dict[int, dict[Exponent, int]] = {}
        for e, c in self._terms.items():
            buckets.setdefault(e[i], {})[e[:i] + (0,) + e[i + 1 :]] = c
        return {
            k: SparsePoly._raw(self.variables, terms, self.field_order)
            for k, terms in sorted(buckets.items())
        }

    def monomial_content(self) -> Exponent:
        """Componentwise minimum exponent over all terms."""
        if not self._terms:
            return (0,) * len(self.variables)
        return tuple(min(col) for col in zip(*self._terms, strict=True))

    def shift_down(self, exponent: Exponent) -> "SparsePoly":
        """Divide by a monomial that divides every term."""
        terms = {
            tuple(a - b for a, b in zip(e, exponent, strict=True)): c
            for e, c in self._terms.items()
        }
        if any(min(e) < 0 for e in terms):
            raise ValueError(f"monomial {exponent} does not divide {self}")
        return SparsePoly._raw(self.variables, terms, self.field_order)

    def scale(self, factor: FieldElement) -> "SparsePoly":
        """Multiply by a field element."""
        return self * factor

    def monic(self) -> "SparsePoly":
        """Divide by the leading coefficient."""
        if self.is_zero:
            return self
        return self * self.leading_term()[1].inverse()

    # -- univariate helpers -------------------------------------------------------

    def univariate_gcd(self, other: "SparsePoly") -> "SparsePoly":
        """Monic gcd of two polynomials in at most one common variable."""
        names = set(self.occurring_variables()) | set(other.occurring_variables())
        if len(names) > 1:
            raise ValueError(f"univariate gcd needs one variable, got {sorted(names)}")
        a, b = self, other
        while b:
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def roots(self, field_order: int | None = None) -> list[tuple[FieldElement, int]]:
        """Roots with multiplicities among the elements of GF(field_order).

        Args:
            field_order (int | None): Field searched, defaults to the coefficient field.

        Returns:
            list[tuple[FieldElement, int]]: Roots in residue order.
        """
        names = self.occurring_variables()
        if len(names) > 1:
            raise ValueError(f"roots need a univariate polynomial, got {names}")
        if self.is_zero:
            raise ValueError("the zero polynomial vanishes everywhere")
        order = common_order(self.field_order, field_order or self.field_order)
        poly = self.over(order)
        if not names:
            return []
        name = names[0]
        var = SparsePoly.variable(name, poly.variables, field_order=order)
        found = []
        for residue in range(order):
            root = FieldElement(order, residue)
            multiplicity = 0
            while poly.degree(name) > 0 and not poly.evaluate({name: root}):
                poly = poly.exact_div(var + root)
                multiplicity += 1
            if multiplicity:
                found.append((root, multiplicity))
        return found

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            monomial = "*".join(
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(self.variables, e, strict=True)
                if k
            )
            coeff = str(c)
            if not monomial:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(monomial)
            else:
                parts.append(f"({coeff})*{monomial}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"SparsePoly({self}, GF({self.field_order}))"


def polynomial_ring(*names: str, field_order: int = 2) -> tuple[SparsePoly, ...]:
    """Generators of GF(field_order)[names], in the given variable order."""
    return tuple(
        SparsePoly.variable(name, names, field_order=field_order) for name in names
    )


def pseudo_divmod(
    poly: SparsePoly, divisor: SparsePoly, name: str
) -> tuple[SparsePoly, SparsePoly, int]:
    """Pseudo-division with respect to one variable.

    Args:
        poly (SparsePoly): Dividend.
        divisor (SparsePoly): Divisor of positive degree in ``name``.
        name (str): The main variable; the others are treated as coefficients.

    Returns:
        tuple[SparsePoly, SparsePoly, int]: ``(q, r, k)`` with
            ``lc(divisor)**k * poly == q * divisor + r`` and ``deg_name(r) <
            deg_name(divisor)``.
    """
    n = divisor.degree(name)
    if n <= 0:
        raise ValueError(f"{divisor} has no positive degree in {name!r}")
    lead = divisor.coefficients_in(name)[n]
    var = SparsePoly.variable(name, divisor.variables, field_order=divisor.field_order)
    quotient = SparsePoly.constant(0, divisor.variables, field_order=divisor.field_order)
    remainder, k = poly, 0
    while remainder and remainder.degree(name) >= n:
        m = remainder.degree(name)
        step = remainder.coefficients_in(name)[m] * var ** (m - n)
        quotient = lead * quotient + step
        remainder = lead * remainder - step * divisor
        k += 1
    return quotient, remainder, k


@dataclass(frozen=True, eq=False)
class RationalFunction:
    """A quotient of two polynomials over a common field.

    Build with :meth:`of`, which normalises: a gcd is cancelled when a single variable
    occurs, a common monomial and exact polynomial factors are cancelled otherwise, and
    the denominator is made monic. Equality is decided by cross-multiplication.

    Attributes:
        numerator (SparsePoly): Numerator.
        denominator (SparsePoly): Nonzero denominator.
    """

    numerator: SparsePoly
    denominator: SparsePoly

    def __post_init__(self) -> None:
        if self.denominator.is_zero:
            raise ZeroDivisionError(f"zero denominator under {self.numerator}")

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def of(
        cls, numerator: "SparsePoly | Scalar", denominator: "SparsePoly | Scalar" = 1
    ) -> "RationalFunction":
        """Normalised quotient ``numerator / denominator``."""
        if not isinstance(numerator, SparsePoly):
            numerator = SparsePoly.constant(numerator)
        if not isinstance(denominator, SparsePoly):
            denominator = numerator._lift(denominator)
        if denominator.is_zero:
            raise ZeroDivisionError(f"zero denominator under {numerator}")
        zero = numerator * 0 + denominator * 0
        variables, order = zero.variables, zero.field_order
        num = (numerator + zero).with_variables(variables).over(order)
        den = (denominator + zero).with_variables(variables).over(order)
        if num.is_zero:
            return cls(num, SparsePoly.constant(1, variables, field_order=order))
        names = set(num.occurring_variables()) | set(den.occurring_variables())
        if len(names) <= 1:
            g = num.univariate_gcd(den)
            num, den = num.exact_div(g), den.exact_div(g)
        else:
            content = tuple(
                min(a, b)
                for a, b in zip(
                    num.monomial_content(), den.monomial_content(), strict=True
                )
            )
            num, den = num.shift_down(content), den.shift_down(content)
            if len(den) > 1:
                quotient, remainder = num.divmod(den)
                if not remainder:
                    num = quotient
                    den = SparsePoly.constant(1, variables, field_order=order)
        lead = den.leading_term()[1].inverse()
        return cls(num * lead, den * lead)

    @classmethod
    def lift(cls, value: "RationalFunction | SparsePoly | Scalar") -> "RationalFunction":
        """View a polynomial or scalar as a rational function."""
        if isinstance(value, RationalFunction):
            return value
        return cls.of(value)

    @property
    def variables(self) -> tuple[str, ...]:
        """Variable list shared by numerator and denominator."""
        return self.numerator.variables

    @property
    def is_zero(self) -> bool:
        """Whether the numerator vanishes."""
        return self.numerator.is_zero

    def __bool__(self) -> bool:
        return not self.is_zero

    def __add__(
        self, other: "RationalFunction | SparsePoly | Scalar"
    ) -> "RationalFunction":
        other = RationalFunction.lift(other)
        d1, d2 = self.denominator, other.denominator
        if d1 == d2:
            return RationalFunction.of(self.numerator + other.numerator, d1)
        if len(d1) > 0 and len(d2) >= len(d1):
            cofactor, remainder = d2.divmod(d1)
            if not remainder:
                numerator = self.numerator * cofactor + other.numerator
                return RationalFunction.of(numerator, d2)
        cofactor, remainder = d1.divmod(d2)
        if not remainder:
            return RationalFunction.of(self.numerator + other.numerator * cofactor, d1)
        return RationalFunction.of(
            self.numerator * d2 + other.numerator * d1, d1 * d2
        )

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self) -> "RationalFunction":
        return self

    def __mul__(
        self, other: "RationalFunction | SparsePoly | Scalar"
    ) -> "RationalFunction":
        other = RationalFunction.lift(other)
        return RationalFunction.of(
            self.numerator * other.numerator, self.denominator * other.denominator
        )

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        """Multiplicative inverse."""
        if self.is_zero:
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunction.of(self.denominator, self.numerator)

    def __truediv__(
        self, other: "RationalFunction | SparsePoly | Scalar"
    ) -> "RationalFunction":
        return self * RationalFunction.lift(other).inverse()

    def __rtruediv__(self, other: "SparsePoly | Scalar") -> "RationalFunction":
        return RationalFunction.lift(other) * self.inverse()

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            return self.inverse() ** -n
        return RationalFunction(self.numerator**n, self.denominator**n)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SparsePoly | FieldElement | int):
            other = RationalFunction.lift(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (
            self.numerator * other.denominator == other.numerator * self.denominator
        )

    def derivative(self, name: str) -> "RationalFunction":
        """Quotient rule; signs are irrelevant in characteristic 2."""
        num, den = self.numerator, self.denominator
        return RationalFunction.of(
            num.derivative(name) * den + num * den.derivative(name), den * den
        )

    def specialize(self, values: Mapping[str, Scalar]) -> "RationalFunction":
        """Substitute field elements for some variables.

        Raises:
            ZeroDivisionError: If the denominator vanishes after specialisation.
        """
        den = self.denominator.specialize(values)
        if den.is_zero:
            raise ZeroDivisionError(
                f"denominator {self.denominator} vanishes at {values}"
            )
        return RationalFunction.of(self.numerator.specialize(values), den)

    def evaluate(self, point: Mapping[str, Scalar]) -> FieldElement:
        """Value at a point binding every occurring variable."""
        den = self.denominator.evaluate(point)
        if not den:
            raise ZeroDivisionError(f"denominator {self.denominator} vanishes at {point}")
        return self.numerator.evaluate(point) / den

    def substitute(
        self, bindings: Mapping[str, "RationalFunction | SparsePoly | Scalar"]
    ) -> "RationalFunction":
        """Image under the substitution homomorphism given by ``bindings``."""
        num = substitute(self.numerator, bindings)
        den = substitute(self.denominator, bindings)
        if den.is_zero:
            raise ZeroDivisionError(
                f"denominator {self.denominator} vanishes identically under substitution"
            )
        return num / den

    def __str__(self) -> str:
        if self.denominator.is_constant():
            return str(self.numerator)
        return f"({self.numerator}) / ({self.denominator})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def substitute(
    poly: SparsePoly, bindings: Mapping[str, RationalFunction | SparsePoly | Scalar]
) -> RationalFunction:
    """Apply the ring homomorphism sending each bound variable to its image.

    Unbound variables are kept. All images share one denominator: with
    ``x_i -> n_i / d_i`` and ``E_i`` the top exponent of ``x_i`` in ``poly``, the
    result is ``sum c * prod n_i^e_i d_i^(E_i - e_i)`` over ``prod d_i^E_i``.

    Args:
        poly (SparsePoly): Polynomial to transform.
        bindings (Mapping[str, RationalFunction | SparsePoly | FieldElement | int]):
            Images of the bound variables.

    Returns:
        RationalFunction: The normalised image.
    """
    images = {
        name: RationalFunction.lift(value)
        for name, value in bindings.items()
        if name in poly.variables
    }
    kept = tuple(v for v in poly.variables if v not in images)
    top = {name: max(poly.degree(name), 0) for name in images}
    zero = SparsePoly.constant(0, kept, field_order=poly.field_order)
    for image in images.values():
        zero = zero + image.numerator * 0 + image.denominator * 0
    powers: dict[tuple[str, int], SparsePoly] = {}

    def power(name: str, part: str, k: int) -> SparsePoly:
        key = (f"{name}:{part}", k)
        if key not in powers:
            image = images[name]
            base = image.numerator if part == "n" else image.denominator
            powers[key] = (base + zero) ** k
        return powers[key]

    total = zero
    slots = {name: poly.variables.index(name) for name in images}
    kept_slots = [poly.variables.index(v) for v in kept]
    for exponent, coeff in poly:
        term = zero + coeff
        kept_exponent = [0] * len(zero.variables)
        for name, slot in zip(kept, kept_slots, strict=True):
            kept_exponent[zero.variables.index(name)] = exponent[slot]
        if any(kept_exponent):
            term = term * SparsePoly._raw(
                zero.variables, {tuple(kept_exponent): 1}, zero.field_order
            )
        for name, slot in slots.items():
            e = exponent[slot]
            term = term * power(name, "n", e) * power(name, "d", top[name] - e)
        total = total + term
    common = zero + 1
    for name in images:
        common = common * power(name, "d", top[name])
    return RationalFunction.of(total, common)
