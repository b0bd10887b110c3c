from fractions import Fraction

import numpy as np
import pytest

from gramspec import BinaryForm, Polynomial, complex_roots
from gramspec.errors import NvarsMismatch, RealRoot, RepeatedRoot, ScalarModeError
from gramspec.poly import monomial_key, positive_form_root_pairs

from conftest import REFERENCE_SEXTIC


def vars2(mode="rational"):
    return Polynomial.variable(0, 2, mode), Polynomial.variable(1, 2, mode)


class TestArithmetic:
    def test_mul_identity(self):
        x, y = vars2()
        f = x * x + y * y
        one = Polynomial.constant(1, 2)
        assert f * one == f

    def test_eval_direct(self):
        x, y = vars2()
        f = x ** 4 + x * y ** 3
        assert f.eval((1, 1)) == 2

    def test_rational_exactness(self):
        # (a + b) - b == a bit for bit
        rng = np.random.default_rng(0)
        for _ in range(20):
            terms_a = {(int(i), int(j)): Fraction(int(rng.integers(-9, 10)),
                                                  int(rng.integers(1, 7)))
                       for i, j in rng.integers(0, 4, size=(4, 2))}
            terms_b = {(int(i), int(j)): Fraction(int(rng.integers(-9, 10)),
                                                  int(rng.integers(1, 7)))
                       for i, j in rng.integers(0, 4, size=(4, 2))}
            a = Polynomial(terms_a, 2)
            b = Polynomial(terms_b, 2)
            assert (a + b) - b == a

    def test_mode_mixing_rejected(self):
        x, _ = vars2("rational")
        u, _ = vars2("float")
        with pytest.raises(ScalarModeError):
            _ = x + u
        with pytest.raises(ScalarModeError):
            _ = x * u

    def test_nvars_mismatch_rejected(self):
        x = Polynomial.variable(0, 2)
        w = Polynomial.variable(0, 3)
        with pytest.raises(NvarsMismatch):
            _ = x + w

    def test_no_zero_coefficients_stored(self):
        x, y = vars2()
        f = x * y - x * y + x
        assert (1, 1) not in f.terms
        assert f == x

    def test_monomial_order_graded_lex_descending(self):
        exps = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
        ordered = sorted(exps, key=monomial_key)
        assert ordered == [(2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)]


class TestConjugation:
    def test_hermitian_square_splits(self):
        # p = x + iy: p conj(p) = x^2 + y^2
        p = Polynomial({(1, 0): 1.0, (0, 1): 1j}, 2, "complex")
        prod = p * p.conjugate()
        x, y = vars2("float")
        assert (prod - (x * x + y * y).to_complex()).max_norm() < 1e-15

    def test_real_polynomial_fixed(self):
        x, y = vars2()
        f = x * x - y
        assert f.conjugate() == f

    def test_involution_and_reconstruction(self):
        rng = np.random.default_rng(3)
        terms = {(int(i), int(j)): complex(rng.normal(), rng.normal())
                 for i, j in rng.integers(0, 4, size=(6, 2))}
        p = Polynomial(terms, 2, "complex")
        assert p.conjugate().conjugate() == p
        re, im = p.real_part(), p.imag_part()
        recon = re.to_complex() + im.to_complex().scale(1j)
        assert (recon - p).max_norm() < 1e-14

    def test_re_im_square_identity(self):
        # Re(p)^2 + Im(p)^2 = p conj(p) for the cubic factor of the sextic
        f = BinaryForm(6, REFERENCE_SEXTIC)
        ups = positive_form_root_pairs(f)
        p = Polynomial.constant(1, 2, "complex")
        s = Polynomial.variable(0, 2, "complex")
        t = Polynomial.variable(1, 2, "complex")
        for u in ups:
            p = p * (s - t.scale(u))
        lhs = p.real_part() ** 2 + p.imag_part() ** 2
        res = (lhs.to_complex() - p * p.conjugate()).max_norm()
        assert res < 1e-8
        res_f = (lhs - f.to_polynomial("float")).max_norm()
        assert res_f < 1e-8


class TestRoots:
    def test_pure_imaginary_pair(self):
        rl = BinaryForm(2, [1, 0, 1]).roots()
        vals = sorted(rl.expanded(), key=lambda z: z.imag)
        assert abs(vals[0] + 1j) < 1e-12 and abs(vals[1] - 1j) < 1e-12
        assert rl.roots_at_infinity == 0

    def test_reference_sextic_conjugate_pairs_and_residual(self):
        f = BinaryForm(6, REFERENCE_SEXTIC)
        rl = f.roots()
        assert rl.total_multiplicity == 6
        vals = rl.expanded()
        assert sum(1 for u in vals if u.imag > 0) == 3
        for u in vals:
            assert abs(f.eval(u, 1.0)) < 1e-9
        # closed under conjugation
        for u in vals:
            assert any(abs(v - u.conjugate()) < 1e-9 for v in vals)

    def test_multiplicity_detection(self):
        # (s - t)^2 (s^2 + t^2)
        f = BinaryForm(4, [1, -2, 2, -2, 1])
        rl = f.roots()
        mults = sorted((round(u.real, 6), round(u.imag, 6), m) for u, m in rl.roots)
        assert (1.0, 0.0, 2) in [(a, b, m) for a, b, m in mults]
        assert rl.total_multiplicity == 4

    def test_roots_at_infinity(self):
        # t^2 (s^2 + t^2): coefficient of s^4 and s^3 t vanish
        f = BinaryForm(4, [1, 0, 1, 0, 0])
        rl = f.roots()
        assert rl.roots_at_infinity == 2
        assert rl.total_multiplicity == 4

    def test_reexpansion_matches_input(self):
        rng = np.random.default_rng(11)
        for d in (2, 4, 6):
            pairs = [complex(rng.uniform(-2, 2), rng.uniform(0.4, 2)) for _ in range(d)]
            f = BinaryForm.from_conjugate_root_pairs(pairs, lead=1.5)
            roots = f.roots().expanded()
            re = 1.5 * np.real(np.poly(np.array(roots)))[::-1]
            scale = max(abs(c) for c in f.coeffs)
            assert np.abs(re - np.array(f.coeffs, dtype=float)).max() < 1e-8 * scale

    def test_zero_form_rejected(self):
        with pytest.raises(ValueError):
            BinaryForm(2, [0, 0, 0]).roots()

    def test_companion_oracle_cubic(self):
        roots, drop = complex_roots([-1, -4, 0, 1])  # t^3 - 4t - 1
        assert drop == 0
        for r in roots:
            assert abs(r ** 3 - 4 * r - 1) < 1e-10


class TestPositivityGuards:
    def test_real_root_rejected(self):
        f = BinaryForm(4, [0, 0, 1, 0, 1])  # s^2 t^2 + s^4 vanishes at (0:1)
        with pytest.raises(RealRoot):
            positive_form_root_pairs(f)

    def test_repeated_root_rejected(self):
        pairs = [1 + 1j, 1 + 1j]
        f = BinaryForm.from_conjugate_root_pairs(pairs)
        with pytest.raises(RepeatedRoot):
            positive_form_root_pairs(f)

    def test_root_at_infinity_rejected(self):
        f = BinaryForm(4, [1, 0, 1, 0, 0])
        with pytest.raises(RealRoot):
            positive_form_root_pairs(f)


def test_reference_sextic_reconstruction_from_root_factors():
    """Expanding the conjugate-pair factors reproduces the sextic coefficients."""
    f = BinaryForm(6, REFERENCE_SEXTIC)
    roots = f.roots().expanded()
    s = Polynomial.variable(0, 2, "complex")
    t = Polynomial.variable(1, 2, "complex")
    prod = Polynomial.constant(1, 2, "complex")
    for u in roots:
        prod = prod * (s - t.scale(u))
    diff = prod - f.to_polynomial("float").to_complex()
    assert diff.max_norm() < 1e-9
