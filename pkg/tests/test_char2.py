import numpy as np
import pytest
import sympy

from enriqueslab import char2
from enriqueslab.fields import binary_field
from enriqueslab.lattice import ContractionConfig, NsY
from enriqueslab.polynomials import RationalFunction, SparsePoly, polynomial_ring
from enriqueslab.typing import CertificateError


GF16 = binary_field(16)


class TestTwoClosed:
    def test_symbolic(self):
        assert char2.check_two_closed()

    @pytest.mark.parametrize(
        "a_value", [binary_field(2).zero, GF16.generator(), GF16.generator() ** 4]
    )
    def test_specialised(self, a_value):
        assert char2.check_two_closed(a_value)

    @pytest.mark.parametrize(
        "a_value", [binary_field(4).one, binary_field(4).omega(), GF16.omega() ** 2]
    )
    def test_cube_roots_of_unity_are_rejected(self, a_value):
        with pytest.raises(ValueError, match="a\\^3 = 1"):
            char2.d_prime(a_value)

    def test_closure_factors(self):
        (t,) = polynomial_ring("t")
        assert char2.closure_factor(char2.d_prime()) == t**2
        (a,) = polynomial_ring("a")
        a_rf = RationalFunction.lift(a)
        assert char2.closure_factor(char2.d_reduced()) == a_rf + a_rf / (a_rf + 1)

    def test_closure_factor_may_not_exist(self):
        t, x = polynomial_ring("t", "x")
        with pytest.raises(CertificateError, match="D\\^2 is not"):
            char2.closure_factor(char2.Derivation.of(t=x, x=t))

    def test_specialisations_agree(self, rng: np.random.Generator):
        sample = char2.random_parameters(rng, 5)
        assert all(a**3 != binary_field(64).one for a in sample)
        assert all(char2.specialization_agrees(a) for a in sample)


class TestDerivation:
    def test_absent_coefficient_is_zero(self):
        (t,) = polynomial_ring("t")
        D = char2.Derivation.of(t=t**2)
        assert D.coefficient("x").is_zero
        assert D(SparsePoly.variable("x")).is_zero

    def test_squares_of_functions_are_constants(self):
        t, x = polynomial_ring("t", "x")
        D = char2.d_prime()
        assert D(t**2 * x**4 + 1).is_zero

    def test_leibniz(self, rng: np.random.Generator):
        D = char2.d_prime(GF16.generator())
        for _ in range(25):
            p = char2.random_polynomial(rng)
            q = char2.random_polynomial(rng)
            assert char2.leibniz_holds(D, p, q)

    def test_scaled(self):
        (t,) = polynomial_ring("t")
        D = char2.d_prime().scaled(t)
        x = SparsePoly.variable("x")
        assert D(x) == t * char2.d_prime()(x)


class TestBlowUpChart:
    def test_symbolic(self):
        assert char2.blowup_chart_check()

    def test_specialised(self):
        assert char2.blowup_chart_check(GF16.generator())

    def test_coefficients(self):
        T, U = polynomial_ring("T", "U")
        chart = char2.chart_derivation(binary_field(2).zero)
        assert chart.coefficient("T") == T**3 * U
        assert chart.coefficient("U") == (T**2 * U**2 + T**2 * U + 1) * U


class TestWeierstrass:
    def test_transform(self):
        with pytest.warns(UserWarning, match="transcribed change"):
            witness = char2.weierstrass_transform_check()
        assert witness.exact
        assert witness
        assert witness.transcribed_remainder not in ("", "0")

    def test_multiplier(self):
        witness, multiplier = char2.divide_by_cubic(char2.coordinate_change())
        assert witness.exact
        assert multiplier == char2.expected_multiplier()

    def test_transcribed_change_fails(self):
        witness, multiplier = char2.divide_by_cubic(char2.transcribed_coordinate_change())
        assert not witness
        assert multiplier is None
        assert witness.multiplier == ""

    def test_degenerate_fibres(self):
        assert char2.degenerate_fibres() == list(binary_field(4).units())

    def test_model_matches_polynomial(self):
        W = char2.weierstrass_model()
        assert W.a6.is_zero
        assert W.a1 == SparsePoly.constant(1, ("t",))
        assert W.a3 == W.a4


class TestDiscriminant:
    def test_universal_identity(self):
        assert char2.universal_identity_holds()

    def test_integral_formulas(self):
        b = char2.b_invariants(0, 0, 0, -1, 0)
        assert b == (0, -2, 0, -1)
        assert char2.discriminant_from_b(*b) == 64
        assert char2.c4_from_b(b[0], b[1]) == 48

    def test_formulas_agree_with_sympy(self):
        a1, a2, a3, a4, a6 = sympy.symbols("a1 a2 a3 a4 a6")
        b2, b4, b6, b8 = char2.b_invariants(a1, a2, a3, a4, a6)
        delta = char2.discriminant_from_b(b2, b4, b6, b8)
        c4, c6 = char2.c4_from_b(b2, b4), -(b2**3) + 36 * b2 * b4 - 216 * b6
        assert sympy.expand(1728 * delta - (c4**3 - c6**2)) == 0

    def test_discriminant(self):
        W = char2.weierstrass_model()
        assert char2.check_discriminant(W) == char2.expected_discriminant()

    def test_wrong_model_is_rejected(self):
        W = char2.weierstrass_model()
        (t,) = polynomial_ring("t")
        bad = char2.WeierstrassModel(W.a1, W.a2, W.a3 + t, W.a4, W.a6)
        with pytest.raises(CertificateError, match="differs from"):
            char2.check_discriminant(bad)

    def test_fibre_hints(self):
        hints = char2.fiber_multiplicity_hint(char2.weierstrass_model())
        assert sorted(h.at for h in hints) == ["0", "1", "w", "w^2"]
        for hint in hints:
            assert (hint.ord_delta, hint.ord_c4, hint.v_j) == (6, 0, -6)
            assert hint.a1_nonzero
            assert hint.reduction == "I6"


class TestEuler:
    def test_isolated_degree(self):
        assert char2.isolated_degree(24, 0, -24) == 0
        assert char2.isolated_degree(24, 0, -22) == 2

    def test_contraction(self, ns: NsY, cfg: ContractionConfig):
        result = char2.euler_formula_check(ns, cfg)
        assert result.divisor_square == -24
        assert result.isolated_degree == 0
        assert result.contrast_degree == 2
        assert result.c2_quotient == 12
        assert result
