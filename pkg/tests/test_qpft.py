import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nsqpwd.errors import EmptyGrid, GridMismatch, OffGridCenter, SingularB
from nsqpwd.kernel import kernel_eval
from nsqpwd.oracle import oracle_forward
from nsqpwd.params import ParamTuple, make_classical, omega0
from nsqpwd.qpft import ComplexField, Grid2D, forward, gaussian, inner, inverse

from conftest import random_field_values, random_omega


def roundtrip_error(n: int, half_width: float, n_w: int) -> float:
    g = Grid2D.centered(n, half_width)
    f = gaussian(g)
    back = inverse(forward(f, omega0(), Grid2D.centered(n_w, 12.0)), omega0(), g)
    return float(np.max(np.abs(back.values - f.values)))


class TestGrid:
    def test_cell_centred(self):
        g = Grid2D.centered(4, 2.0)
        np.testing.assert_allclose(g.axis1(), [-1.5, -0.5, 0.5, 1.5])
        assert g.cell == 1.0
        assert g.is_symmetric()
        assert g.lower() == (-2.0, -2.0) and g.upper() == (2.0, 2.0)

    def test_empty(self):
        with pytest.raises(EmptyGrid):
            Grid2D(0, 3, 0.0, 0.0, 1.0, 1.0)
        with pytest.raises(EmptyGrid):
            Grid2D.from_intervals(0, 1, 0, 0, 1, 2)

    def test_half_index(self):
        g = Grid2D(5, 5, 0.0, 0.0, 1.0, 1.0)
        assert g.half_index((2.0, 3.5)) == (4, 7)
        assert g.index((2.0, 3.0)) == (2, 3)
        with pytest.raises(OffGridCenter):
            g.index((2.0, 3.5))
        with pytest.raises(OffGridCenter):
            g.half_index((0.3, 0.0))
        with pytest.raises(OffGridCenter):
            g.half_index((10.0, 0.0))

    def test_half_refined(self):
        h = Grid2D(3, 4, -1.0, 0.0, 1.0, 2.0).half_refined()
        assert h.shape == (5, 7)
        assert h.step1 == 0.5 and h.step2 == 1.0

    def test_mesh_indexing(self):
        g = Grid2D(2, 3, 0.0, 10.0, 1.0, 1.0)
        x1, x2 = g.mesh()
        assert x1.shape == (2, 3)
        assert g.node(1, 2) == (x1[1, 2], x2[1, 2])


class TestComplexField:
    def test_shape_check(self):
        with pytest.raises(ValueError):
            ComplexField(Grid2D(2, 2, 0, 0, 1, 1), np.zeros((3, 2)))

    def test_flat_input(self):
        f = ComplexField(Grid2D(2, 3, 0, 0, 1, 1), np.arange(6))
        assert f.values[1, 0] == 3

    def test_read_only(self):
        f = ComplexField.zeros(Grid2D(2, 2, 0, 0, 1, 1))
        with pytest.raises(ValueError):
            f.values[0, 0] = 1

    def test_gaussian_norm(self):
        f = gaussian(Grid2D.centered(64, 8.0))
        assert abs(f.norm() - 1.0) < 1e-12
        assert abs(f.analytic(0.0, 0.0) - 1 / math.sqrt(math.pi)) < 1e-15

    def test_inner_grid_mismatch(self):
        a = ComplexField.zeros(Grid2D(2, 2, 0, 0, 1, 1))
        b = ComplexField.zeros(Grid2D(2, 2, 0, 0, 1, 2))
        with pytest.raises(GridMismatch):
            inner(a, b)


class TestForward:
    def test_zero(self):
        g = Grid2D.centered(8, 2.0)
        F = forward(ComplexField.zeros(g), omega0(), g)
        assert np.all(F.values == 0)

    def test_single_sample(self):
        g = Grid2D.centered(6, 3.0)
        v = np.zeros(g.shape, dtype=complex)
        v[2, 4] = 1.5 - 0.5j
        wg = Grid2D.centered(5, 2.0)
        F = forward(ComplexField(g, v), omega0(), wg)
        w1, w2 = wg.mesh()
        expect = (1.5 - 0.5j) * g.cell * kernel_eval(omega0(), g.node(2, 4), (w1, w2))
        np.testing.assert_allclose(F.values, expect, rtol=1e-12)

    def test_matches_oracle(self, rng):
        g = Grid2D.centered(12, 3.0)
        f = ComplexField(g, random_field_values(rng, g.shape))
        for _ in range(3):
            om = random_omega(rng)
            w = tuple(rng.uniform(-2, 2, 2))
            got = forward(f, om, Grid2D(1, 1, w[0], w[1], 1.0, 1.0)).values[0, 0]
            ref = oracle_forward(f, om, w)
            assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))

    def test_gaussian_norm_against_oracle(self):
        f = gaussian(Grid2D.centered(128, 8.0))
        om = omega0()
        for w in [(0.0, 0.0), (-1.0, 0.5), (0.8, -1.3)]:
            got = forward(f, om, Grid2D(1, 1, w[0], w[1], 1.0, 1.0)).values[0, 0]
            ref = oracle_forward(f, om, w)
            assert abs(got - ref) <= 1e-10 * abs(ref)

    def test_classical_plain_sum(self, rng):
        g = Grid2D.centered(10, 2.5)
        f = ComplexField(g, random_field_values(rng, g.shape))
        wg = Grid2D.centered(7, 3.0)
        got = forward(f, make_classical(), wg).values
        x1, x2 = g.mesh()
        expect = np.empty(wg.shape, dtype=complex)
        for i, a in enumerate(wg.axis1()):
            for j, b in enumerate(wg.axis2()):
                expect[i, j] = 1j / (2 * math.pi) * np.sum(f.values * np.exp(1j * (a * x1 + b * x2))) * g.cell
        np.testing.assert_allclose(got, expect, rtol=1e-12, atol=1e-14)

    def test_singular(self):
        z = np.zeros((2, 2))
        g = Grid2D.centered(4, 1.0)
        with pytest.raises(SingularB):
            forward(ComplexField.zeros(g), ParamTuple(z, z, z, z, z), g)

    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
    def test_linearity(self, ar, ai, br, bi):
        rng = np.random.default_rng(5)
        g = Grid2D.centered(8, 2.0)
        f = ComplexField(g, random_field_values(rng, g.shape))
        h = ComplexField(g, random_field_values(rng, g.shape))
        a, b = complex(ar, ai), complex(br, bi)
        wg = Grid2D.centered(6, 2.0)
        lhs = forward(ComplexField(g, a * f.values + b * h.values), omega0(), wg).values
        rhs = a * forward(f, omega0(), wg).values + b * forward(h, omega0(), wg).values
        np.testing.assert_allclose(lhs, rhs, atol=1e-12 * (1 + abs(a) + abs(b)) * 10)

    def test_deterministic(self, rng):
        g = Grid2D.centered(40, 4.0)
        f = ComplexField(g, random_field_values(rng, g.shape))
        wg = Grid2D.centered(50, 3.0)
        a = forward(f, omega0(), wg).values
        b = forward(f, omega0(), wg).values
        assert np.array_equal(a, b)


class TestInverse:
    def test_zero(self):
        g = Grid2D.centered(8, 2.0)
        assert np.all(inverse(ComplexField.zeros(g), omega0(), g).values == 0)

    def test_linearity(self, rng):
        g = Grid2D.centered(8, 2.0)
        F = ComplexField(g, random_field_values(rng, g.shape))
        a = 2 + 3j
        lhs = inverse(ComplexField(g, a * F.values), omega0(), g).values
        np.testing.assert_allclose(lhs, a * inverse(F, omega0(), g).values, rtol=1e-13)

    def test_round_trip_gaussian(self):
        assert roundtrip_error(128, 6.0, 192) < 1e-3

    def test_round_trip_wide_domain(self):
        assert roundtrip_error(160, 8.0, 256) < 1e-3

    def test_wide_domain_coarse_grid_aliases(self):
        # periodic images of the transform enter the ω-box when h = 1/8
        assert roundtrip_error(128, 8.0, 256) > 1e-2

    def test_refinement_converges(self):
        errs = [roundtrip_error(n, 6.0, 192) for n in (64, 96, 128)]
        assert errs[0] > errs[1] > 100 * errs[2]

    def test_forward_unitary(self):
        f = gaussian(Grid2D.centered(128, 6.0))
        F = forward(f, omega0(), Grid2D.centered(192, 12.0))
        assert abs(F.norm() - 1.0) < 1e-9
