import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nsqpwd.errors import SingularB
from nsqpwd.kernel import chirp_eval, kernel_eval, kernel_prefactor, sub_coeffs
from nsqpwd.oracle import kernel_direct
from nsqpwd.params import ParamTuple, make_classical, make_gyrator, omega0

coef = st.lists(st.floats(-50, 50, allow_nan=False), min_size=5, max_size=5)
coord = st.floats(-20, 20, allow_nan=False)


class TestChirp:
    def test_origin(self):
        assert chirp_eval((3.0, -1.0, 2.0, 5.0, 7.0), (0.0, 0.0)) == 1

    def test_zero_coeffs(self):
        assert chirp_eval((0.0,) * 5, (1.7, -3.2)) == 1

    def test_known_value(self):
        z = chirp_eval((1, 0, 1, 4, 6), (1.0, 0.0))
        assert abs(z - cmath.exp(5j)) < 1e-15
        np.testing.assert_allclose([z.real, z.imag], [0.28366, -0.95892], atol=1e-5)

    def test_unit_modulus_bulk(self, rng):
        c = rng.uniform(-10, 10, size=5)
        p = rng.uniform(-30, 30, size=(2, 100_000))
        z = chirp_eval(c, (p[0], p[1]))
        np.testing.assert_allclose(np.abs(z), 1.0, atol=1e-15)

    @given(coef, coef, coord, coord)
    def test_additive(self, c, d, p1, p2):
        lhs = chirp_eval(c, (p1, p2)) * chirp_eval(d, (p1, p2))
        rhs = chirp_eval(tuple(a + b for a, b in zip(c, d)), (p1, p2))
        assert abs(lhs - rhs) < 1e-9

    def test_sub_coeffs(self):
        assert sub_coeffs((1, 2, 3, 4, 5), (1, 1, 1, 1, 1)) == (0, 1, 2, 3, 4)


class TestKernel:
    def test_origin_value(self):
        z = kernel_eval(omega0(), (0.0, 0.0), (0.0, 0.0))
        assert abs(z - 1j * math.sqrt(7) / (2 * math.pi)) < 1e-15
        assert abs(z.imag - 0.4210844) < 1e-7

    @given(coord, coord, coord, coord)
    def test_modulus(self, x1, x2, w1, w2):
        z = kernel_eval(omega0(), (x1, x2), (w1, w2))
        assert abs(abs(z) - math.sqrt(7) / (2 * math.pi)) < 1e-12

    def test_factorized_matches_direct(self):
        om = omega0()
        x, w = (0.3, -1.2), (0.7, 0.2)
        assert abs(kernel_eval(om, x, w) - kernel_direct(om, x, w)) < 1e-12

    def test_factorized_matches_direct_random(self, rng):
        from conftest import random_omega

        for _ in range(50):
            om = random_omega(rng)
            x = tuple(rng.uniform(-3, 3, 2))
            w = tuple(rng.uniform(-3, 3, 2))
            assert abs(kernel_eval(om, x, w) - kernel_direct(om, x, w)) < 1e-12

    def test_classical(self):
        x, w = (0.4, -1.1), (2.0, 0.3)
        expect = 1j / (2 * math.pi) * cmath.exp(1j * (x[0] * w[0] + x[1] * w[1]))
        assert abs(kernel_eval(make_classical(), x, w) - expect) < 1e-15

    def test_negative_det_prefactor(self):
        om = make_gyrator(math.pi / 2)
        lam = kernel_prefactor(om.B)
        assert abs(lam - 1j * 1j / (2 * math.pi)) < 1e-15

    def test_broadcasting(self):
        om = omega0()
        x1 = np.linspace(-1, 1, 5)
        z = kernel_eval(om, (x1, 0.5), (0.2, -0.3))
        expect = [kernel_eval(om, (a, 0.5), (0.2, -0.3)) for a in x1]
        np.testing.assert_allclose(z, expect, rtol=1e-14)

    def test_singular(self):
        z = np.zeros((2, 2))
        with pytest.raises(SingularB):
            kernel_eval(ParamTuple(z, np.ones((2, 2)), z, z, z), (0, 0), (0, 0))
