"""Characteristic-2 identities behind the vector field and the elliptic fibration.

The rational vector field

    D' = (t + 1)(t + a)(t + b) d/dt + (1 + t^2 x) d/dx,   with a + b = ab,

is 2-closed: D'^2 = t^2 D'. The constraint is eliminated by ``b = a / (1 + a)``, so
``a`` is either a field element or the symbol ``a`` of GF(2)(a). Every identity here
is checked exactly on rational functions and raises :class:`CertificateError` when
it fails.

Example::

    assert check_two_closed(binary_field(16).generator())
    assert discriminant(weierstrass_model()) == expected_discriminant()

Notes:
    The Weierstrass model is written in the parameter 1/t of the cubic pencil, which
    is why its discriminant vanishes at 0, 1, w, w^2 while the I6 fibres of the
    pencil sit over 1, w, w^2 and infinity.
"""

# ruff: noqa: RUF002

import warnings
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, replace
from typing import Any

import numpy as np
import sympy

from enriqueslab.fields import FieldElement, binary_field
from enriqueslab.lattice import ContractionConfig, NsY
from enriqueslab.polynomials import (
    RationalFunction,
    SparsePoly,
    polynomial_ring,
    pseudo_divmod,
)
from enriqueslab.typing import CertificateError


Scalar = FieldElement | int
Coefficient = RationalFunction | SparsePoly | Scalar
ParameterValue = FieldElement | None


def _rf(value: Coefficient) -> RationalFunction:
    return RationalFunction.lift(value)


@dataclass(frozen=True, eq=False)
class Derivation:
    """``sum coefficient_v d/dv`` on rational functions.

    Attributes:
        coefficients (tuple[tuple[str, RationalFunction], ...]): Variable names with
            their coefficients.
    """

    coefficients: tuple[tuple[str, RationalFunction], ...]

    @classmethod
    def of(cls, **coefficients: Coefficient) -> "Derivation":
        """Derivation from keyword coefficients, e.g. ``Derivation.of(t=..., x=...)``."""
        return cls(tuple((name, _rf(c)) for name, c in coefficients.items()))

    def coefficient(self, name: str) -> RationalFunction:
        """Coefficient of d/d``name``; zero when absent."""
        for var, c in self.coefficients:
            if var == name:
                return c
        return _rf(0)

    def __call__(self, f: Coefficient) -> RationalFunction:
        f = _rf(f)
        total = _rf(0)
        for name, c in self.coefficients:
            total = total + c * f.derivative(name)
        return total

    def scaled(self, h: Coefficient) -> "Derivation":
        """The derivation ``h D``."""
        h = _rf(h)
        return Derivation(tuple((name, h * c) for name, c in self.coefficients))

    def squared_on(self, f: Coefficient) -> RationalFunction:
        """``D(D(f))``."""
        return self(self(f))


def _parameters(a_value: ParameterValue) -> tuple[RationalFunction, RationalFunction]:
    """``(a, b)`` with ``b = a / (1 + a)``; None selects the symbolic parameter.

    Raises:
        ValueError: If ``a^3 = 1``.
    """
    if a_value is None:
        (a,) = polynomial_ring("a")
        a_rf = _rf(a)
        return a_rf, a_rf / (a_rf + 1)
    if a_value**3 == binary_field(a_value.field_order).one:
        raise ValueError(f"{a_value=} satisfies a^3 = 1")
    b_value = a_value / (a_value + 1)
    return _rf(a_value), _rf(b_value)


def d_prime(a_value: ParameterValue = None) -> Derivation:
    """``(t+1)(t+a)(t+b) d/dt + (1 + t^2 x) d/dx`` with ``b = a / (1 + a)``."""
    a, b = _parameters(a_value)
    t, x = polynomial_ring("t", "x")
    return Derivation.of(t=(_rf(t) + 1) * (_rf(t) + a) * (_rf(t) + b), x=t**2 * x + 1)


def d_reduced(a_value: ParameterValue = None) -> Derivation:
    """``D = D' / (t + 1)``."""
    (t,) = polynomial_ring("t")
    return d_prime(a_value).scaled(_rf(1) / (t + 1))


def closure_factor(
    D: Derivation, generators: Sequence[str] = ("t", "x")
) -> RationalFunction:
    """The rational function f with ``D^2 = f D`` on the generators.

    Raises:
        CertificateError: If no such f exists.
    """
    first, *rest = generators
    base = D(SparsePoly.variable(first))
    factor = D.squared_on(SparsePoly.variable(first)) / base
    for name in rest:
        var = SparsePoly.variable(name)
        if D.squared_on(var) != factor * D(var):
            raise CertificateError(f"D^2 is not {factor} D on {name}")
    return factor


def check_two_closed(a_value: ParameterValue = None) -> bool:
    """Whether ``D'(D'(g)) = t^2 D'(g)`` for ``g = t`` and ``g = x``.

    Args:
        a_value (FieldElement | None): The parameter a; None for symbolic a.

    Raises:
        ValueError: If ``a^3 = 1``.
    """
    D = d_prime(a_value)
    (t,) = polynomial_ring("t")
    return all(
        D.squared_on(SparsePoly.variable(name)) == t**2 * D(SparsePoly.variable(name))
        for name in ("t", "x")
    )


def random_polynomial(
    rng: np.random.Generator,
    variables: Sequence[str] = ("t", "x"),
    *,
    max_degree: int = 3,
    n_terms: int = 4,
    field_order: int = 4,
) -> SparsePoly:
    """A polynomial with ``n_terms`` random monomials and random coefficients."""
    field = binary_field(field_order)
    terms: dict[tuple[int, ...], FieldElement] = {}
    for _ in range(n_terms):
        exponent = tuple(int(e) for e in rng.integers(0, max_degree + 1, len(variables)))
        terms[exponent] = field.random(rng)
    return SparsePoly(variables, terms, field_order=field_order)


def leibniz_holds(D: Derivation, p: Coefficient, q: Coefficient) -> bool:
    """Whether ``D(pq) = p D(q) + q D(p)``."""
    p, q = _rf(p), _rf(q)
    return D(p * q) == p * D(q) + q * D(p)


def specialization_agrees(a_value: FieldElement) -> bool:
    """Whether specialising the symbolic check at ``a`` agrees with the direct check."""
    D = d_prime()
    (t,) = polynomial_ring("t")
    residuals = [
        D.squared_on(SparsePoly.variable(n)) + t**2 * D(SparsePoly.variable(n))
        for n in ("t", "x")
    ]
    symbolic = all(r.specialize({"a": a_value}).is_zero for r in residuals)
    return symbolic == check_two_closed(a_value)


def random_parameters(
    rng: np.random.Generator, n: int = 20, field_order: int = 64
) -> list[FieldElement]:
    """``n`` random field elements with ``a^3 != 1``."""
    field = binary_field(field_order)
    found = []
    while len(found) < n:
        a = field.random(rng)
        if not (a and a**3 == field.one):
            found.append(a)
    return found


def chart_derivation(a_value: ParameterValue = None) -> Derivation:
    """D' in the blow-up chart ``t = TU + 1, x = U + 1``.

    With ``U = x + 1`` and ``T = (t + 1) / U`` the chain rule gives
    ``D'(U) = c_x`` and ``D'(T) = c_t / U + T c_x / U``.
    """
    T, U = polynomial_ring("T", "U")
    bindings = {"t": T * U + 1, "x": U + 1}
    D = d_prime(a_value)
    c_t = D.coefficient("t").substitute(bindings)
    c_x = D.coefficient("x").substitute(bindings)
    return Derivation.of(T=c_t / U + c_x * T / U, U=c_x)


def expected_chart_derivation(a_value: ParameterValue = None) -> Derivation:
    """``U {(T^3 + (a+b) T^2) d/dT + (T^2 U^2 + T^2 U + 1) d/dU}``."""
    a, b = _parameters(a_value)
    T, U = polynomial_ring("T", "U")
    return Derivation.of(
        T=(_rf(T**3) + (a + b) * T**2) * U,
        U=(T**2 * U**2 + T**2 * U + 1) * U,
    )


def blowup_chart_check(a_value: ParameterValue = None) -> bool:
    """Reproduce D' in the blow-up chart.

    Raises:
        CertificateError: If a chart coefficient differs from the expected one.
    """
    computed, expected = chart_derivation(a_value), expected_chart_derivation(a_value)
    for name in ("T", "U"):
        if computed.coefficient(name) != expected.coefficient(name):
            raise CertificateError(
                f"d/d{name} coefficient {computed.coefficient(name)} "
                f"differs from {expected.coefficient(name)}"
            )
    return True


def affine_cubic() -> SparsePoly:
    """``F = y^2 + y + x^3 + t^2 x (y^2 + y + 1)``."""
    t, x, y = polynomial_ring("t", "x", "y")
    return y**2 + y + x**3 + t**2 * x * (y**2 + y + 1)


def weierstrass_polynomial() -> SparsePoly:
    """W in u, v over GF(2)[tau].

    ``v^2 + uv + tau^2(tau^4 + tau) v + u^3 + (tau^3 + 1) u^2 + tau^2(tau^4 + tau) u``.
    """
    u, v, tau = polynomial_ring("u", "v", "tau")
    a3 = tau**2 * (tau**4 + tau)
    return v**2 + u * v + a3 * v + u**3 + (tau**3 + 1) * u**2 + a3 * u


def coordinate_change() -> dict[str, RationalFunction]:
    """The change of coordinates that carries F to the Weierstrass form.

    With ``s = 1 + t^3`` and ``c = 1 + t^2 x``: ``tau = 1/t``,
    ``u = s (x + t) / (t^4 c)`` and ``v = s (s y + c) / (t^6 c)``.
    """
    t, x, y = polynomial_ring("t", "x", "y")
    s, c = t**3 + 1, t**2 * x + 1
    return {
        "tau": RationalFunction.of(1, t),
        "u": RationalFunction.of(s * (x + t), t**4 * c),
        "v": RationalFunction.of(s * (s * y + c), t**6 * c),
    }


def transcribed_coordinate_change() -> dict[str, RationalFunction]:
    """The change as usually printed.

    ``u = s x / t^4``, ``v = s (c y + t x) / t^6`` and ``tau = t``.
    """
    t, x, y = polynomial_ring("t", "x", "y")
    s, c = t**3 + 1, t**2 * x + 1
    return {
        "tau": _rf(t),
        "u": RationalFunction.of(s * x, t**4),
        "v": RationalFunction.of(s * (c * y + t * x), t**6),
    }


def expected_multiplier() -> RationalFunction:
    """``lambda = (1 + t^3)^4 / (t^12 (1 + t^2 x)^3)``."""
    t, x = polynomial_ring("t", "x")
    return RationalFunction.of((t**3 + 1) ** 4, t**12 * (t**2 * x + 1) ** 3)


@dataclass(frozen=True)
class DivisionWitness:
    """Result of dividing a transformed Weierstrass polynomial by F in y.

    Attributes:
        remainder (str): Pseudo-remainder; ``"0"`` on success.
        multiplier (str): ``lambda`` with ``W o phi = lambda F``, empty on failure.
        pseudo_steps (int): Power of the leading coefficient used.
        transcribed_remainder (str): Remainder left by the transcribed change, when
            it was evaluated.
    """

    remainder: str
    multiplier: str
    pseudo_steps: int
    transcribed_remainder: str = ""

    @property
    def exact(self) -> bool:
        """Whether the division left no remainder."""
        return self.remainder == "0"

    def __bool__(self) -> bool:
        return self.exact


def divide_by_cubic(
    change: Mapping[str, RationalFunction],
) -> tuple[DivisionWitness, RationalFunction | None]:
    """Substitute a change of coordinates into W and divide by F as polynomials in y."""
    image = RationalFunction.lift(weierstrass_polynomial()).substitute(change)
    F = affine_cubic()
    quotient, remainder, k = pseudo_divmod(image.numerator, F, "y")
    if remainder:
        return DivisionWitness(str(remainder), "", k), None
    lead = F.coefficients_in("y")[2]
    multiplier = RationalFunction.of(quotient, lead**k * image.denominator)
    return DivisionWitness("0", str(multiplier), k), multiplier


def weierstrass_transform_check() -> DivisionWitness:
    """Certify that the coordinate change carries F onto the Weierstrass model.

    The transcribed variant is evaluated as well; its nonzero remainder is warned
    about and does not fail the check.

    Returns:
        DivisionWitness: The witness of the verified change.

    Raises:
        CertificateError: If the division leaves a remainder or the multiplier is not
            ``(1 + t^3)^4 / (t^12 (1 + t^2 x)^3)``.
    """
    witness, multiplier = divide_by_cubic(coordinate_change())
    if multiplier is None:
        raise CertificateError(
            f"W o phi is not divisible by F: remainder {witness.remainder}"
        )
    if multiplier != expected_multiplier():
        raise CertificateError(f"unexpected multiplier {witness.multiplier}")
    transcribed, _ = divide_by_cubic(transcribed_coordinate_change())
    if not transcribed.exact:
        warnings.warn(
            "the transcribed change of coordinates leaves a nonzero remainder; "
            "the verified change reads the Weierstrass parameter as 1/t",
            stacklevel=2,
        )
    return replace(witness, transcribed_remainder=transcribed.remainder)


def degenerate_fibres() -> list[FieldElement]:
    """Roots of ``1 + t^3`` where the coordinate change collapses to ``u = v = 0``.

    Raises:
        CertificateError: If u or v survives at such a root.
    """
    change = coordinate_change()
    (t,) = polynomial_ring("t")
    roots = [r for r, _ in (t**3 + 1).roots(4)]
    for root in roots:
        for name in ("u", "v"):
            if not change[name].specialize({"t": root}).is_zero:
                raise CertificateError(f"{name} does not vanish at t = {root}")
    return roots


@dataclass(frozen=True)
class WeierstrassModel:
    """``y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`` over GF(2)[t]."""

    a1: SparsePoly
    a2: SparsePoly
    a3: SparsePoly
    a4: SparsePoly
    a6: SparsePoly

    def coefficients(self) -> tuple[SparsePoly, ...]:
        """``(a1, a2, a3, a4, a6)``."""
        return (self.a1, self.a2, self.a3, self.a4, self.a6)


def weierstrass_model() -> WeierstrassModel:
    """The model with a1 = 1, a2 = t^3 + 1, a3 = a4 = t^2 (t^4 + t), a6 = 0."""
    (t,) = polynomial_ring("t")
    one = SparsePoly.constant(1, ("t",))
    a3 = t**2 * (t**4 + t)
    return WeierstrassModel(one, t**3 + 1, a3, a3, one + one)


def b_invariants(
    a1: Any, a2: Any, a3: Any, a4: Any, a6: Any
) -> tuple[Any, Any, Any, Any]:
    """``(b2, b4, b6, b8)`` by the integral formulas.

    The arguments may live in any commutative ring where integers act, so the same
    code runs on sympy symbols and, reduced mod 2, on :class:`SparsePoly`.
    """
    b2 = a1**2 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3**2 + 4 * a6
    b8 = a1**2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3**2 - a4**2
    return b2, b4, b6, b8


def discriminant_from_b(b2: Any, b4: Any, b6: Any, b8: Any) -> Any:
    """``-b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6``."""
    return -(b2**2) * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6


def c4_from_b(b2: Any, b4: Any) -> Any:
    """``b2^2 - 24 b4``."""
    return b2**2 - 24 * b4


def universal_identity_holds() -> bool:
    """Whether ``4 b8 = b2 b6 - b4^2`` as integer polynomials in a1, ..., a6."""
    symbols = sympy.symbols("a1 a2 a3 a4 a6")
    b2, b4, b6, b8 = b_invariants(*symbols)
    return sympy.expand(4 * b8 - (b2 * b6 - b4**2)) == 0


def expected_discriminant() -> SparsePoly:
    """``t^6 (t^3 + 1)^6``."""
    (t,) = polynomial_ring("t")
    return t**6 * (t**3 + 1) ** 6


def discriminant(W: WeierstrassModel) -> SparsePoly:
    """Discriminant of the model, reduced mod 2."""
    return discriminant_from_b(*b_invariants(*W.coefficients()))


def check_discriminant(W: WeierstrassModel) -> SparsePoly:
    """The discriminant, required to be ``t^6 (t^3 + 1)^6``.

    Raises:
        CertificateError: On mismatch.
    """
    delta = discriminant(W)
    if delta != expected_discriminant():
        raise CertificateError(f"discriminant {delta} differs from t^6 (t^3 + 1)^6")
    return delta


@dataclass(frozen=True)
class FiberHint:
    """Advisory reduction data at a zero of the discriminant.

    Attributes:
        at (str): The point of the t-line.
        ord_delta (int): Order of vanishing of the discriminant.
        ord_c4 (int): Order of vanishing of c4.
        v_j (int): Valuation of ``j = c4^3 / Delta``.
        a1_nonzero (bool): Whether a1 does not vanish there.
        reduction (str): ``"I<n>"`` when the data fit multiplicative reduction.
    """

    at: str
    ord_delta: int
    ord_c4: int
    v_j: int
    a1_nonzero: bool
    reduction: str


def _order_at(poly: SparsePoly, root: FieldElement | None, degree_bound: int) -> int:
    if root is None:
        return degree_bound - poly.degree("t")
    return dict(poly.roots(root.field_order)).get(root, 0)


def fiber_multiplicity_hint(
    W: WeierstrassModel, degree_bound: int = 24
) -> list[FiberHint]:
    """Orders of Delta and c4 and the j-valuation at each zero of Delta.

    The point at infinity is reported when Delta has degree below ``degree_bound``.
    """
    b2, b4, _, _ = b_invariants(*W.coefficients())
    c4 = c4_from_b(b2, b4)
    delta = discriminant(W)
    points: list[FieldElement | None] = [r for r, _ in delta.roots(4)]
    if delta.degree("t") < degree_bound:
        points.append(None)
    hints = []
    for root in points:
        ord_delta = _order_at(delta, root, degree_bound)
        ord_c4 = _order_at(c4, root, degree_bound // 3)
        if root is None:
            a1_nonzero = W.a1.degree("t") == 2
        else:
            a1_nonzero = bool(W.a1.evaluate({"t": root}))
        multiplicative = a1_nonzero and ord_c4 == 0 and ord_delta > 0
        hints.append(
            FiberHint(
                "oo" if root is None else str(root),
                ord_delta,
                ord_c4,
                3 * ord_c4 - ord_delta,
                a1_nonzero,
                f"I{ord_delta}" if multiplicative else "unknown",
            )
        )
    return hints


def isolated_degree(c2: int, canonical_pairing: int, divisor_square: int) -> int:
    """Degree of the isolated part from ``c2 = deg<D> - <K, (D)> - (D)^2``."""
    return c2 + canonical_pairing + divisor_square


@dataclass(frozen=True)
class EulerCheck:
    """Euler-number arithmetic of the quotient map.

    Attributes:
        divisor_square (int): ``(D)^2``.
        canonical_pairing (int): ``<K_Y, (D)>``.
        isolated_degree (int): ``deg<D>`` forced by ``c2(Y) = 24``.
        contrast_degree (int): The same with only eleven contracted curves.
        c2_quotient (int): ``c2(X) = 2 + b2(X)`` with ``b2(X) = 22 - 12``.
    """

    divisor_square: int
    canonical_pairing: int
    isolated_degree: int
    contrast_degree: int
    c2_quotient: int

    def __bool__(self) -> bool:
        return (
            self.divisor_square == -24
            and self.isolated_degree == 0
            and self.contrast_degree == 2
            and self.c2_quotient == 12
        )


def euler_formula_check(ns: NsY, cfg: ContractionConfig, c2: int = 24) -> EulerCheck:
    """Evaluate ``c2(Y) = deg<D> - <K_Y, (D)> - (D)^2``.

    The divisor is ``(D) = -(E_1 + ... + E_12)``.

    Y is a K3 surface, so K_Y is numerically trivial. The contrast case drops the last
    contracted curve.

    Args:
        ns (NsY): The lattice the divisor lives in.
        cfg (ContractionConfig): The twelve contracted curves.
        c2 (int): Euler number of Y. Defaults to 24.
    """
    divisor = cfg.divisor()
    square = int(divisor @ ns.gram42.entries @ divisor)
    partial = divisor.clone()
    partial[cfg.curve_ids[-1]] = 0
    partial_square = int(partial @ ns.gram42.entries @ partial)
    canonical = 0
    return EulerCheck(
        divisor_square=square,
        canonical_pairing=canonical,
        isolated_degree=isolated_degree(c2, canonical, square),
        contrast_degree=isolated_degree(c2, canonical, partial_square),
        c2_quotient=2 + (22 - len(cfg.curve_ids)),
    )
