import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transient_response.bath import (BathSpec, Ohmic, Tabulated,
                                     bose_occupation, build_kernel_cache,
                                     energy_shift, sine_kernel,
                                     sine_kernel_quad, xi, xi_high_temperature,
                                     xi_ohmic)
from transient_response.errors import InvalidGrid, InvalidInput
from transient_response.grid import make_grid


def ohmic(s=1.0, wc=0.2, beta=0.1):
    return BathSpec(Ohmic(s, wc), beta)


class TestBoseOccupation:
    def test_ln2_gives_one(self):
        assert bose_occupation(np.log(2), 1.0) == pytest.approx(1.0, rel=1e-14)

    def test_zero_temperature_limit(self):
        assert bose_occupation(50.0, 100.0) == pytest.approx(0.0, abs=1e-300)
        assert bose_occupation(1.0, np.inf) == 0.0

    def test_classical_limit(self):
        assert bose_occupation(1e-8, 1.0) == pytest.approx(1e8 - 0.5, rel=1e-15)

    def test_series_switch_is_continuous(self):
        x = np.array([1e-6 * (1 - 1e-9), 1e-6 * (1 + 1e-9)])
        n = bose_occupation(x, 1.0)
        assert n[0] == pytest.approx(n[1], rel=1e-8)

    @pytest.mark.parametrize("w,beta", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0)])
    def test_invalid(self, w, beta):
        with pytest.raises(InvalidInput):
            bose_occupation(w, beta)


class TestSineKernel:
    def test_values(self):
        assert sine_kernel(ohmic(), 0.0) == 0.0
        assert sine_kernel(ohmic(), 5.0) == pytest.approx(np.pi / 4)
        assert sine_kernel(ohmic(s=2.0), 1e12) == pytest.approx(np.pi)

    def test_quadrature_matches_arctan(self):
        bath = ohmic()
        for t in np.linspace(0.0, 100.0, 41):
            assert sine_kernel_quad(bath, t) == pytest.approx(
                np.arctan(0.2 * t), abs=1e-8)


class TestXi:
    def test_zero_time(self):
        assert xi(ohmic(), 0.0) == 0.0
        assert xi_ohmic(ohmic(), 0.0) == 0.0

    def test_high_temperature_regime(self):
        bath = ohmic(beta=0.1)
        assert xi(bath, 5.0) == pytest.approx(xi_high_temperature(bath, 5.0), rel=0.01)

    def test_zero_temperature_log_form(self):
        bath = ohmic(beta=np.inf)
        for t in (0.5, 5.0, 40.0):
            assert xi(bath, t) == pytest.approx(0.5 * np.log1p((0.2 * t) ** 2),
                                                rel=1e-9)

    @pytest.mark.parametrize("beta", [0.1, 1.0, 5.0, 20.0, np.inf])
    @pytest.mark.parametrize("wc", [0.2, 0.02])
    def test_closed_form_matches_quadrature(self, beta, wc):
        bath = ohmic(wc=wc, beta=beta)
        t = np.array([0.3, 2.0, 17.0, 90.0])
        quad = np.array([xi(bath, x) for x in t])
        assert xi_ohmic(bath, t) == pytest.approx(quad, rel=1e-9)

    def test_closed_form_branches_agree(self):
        # Stirling branch (1 + b >= 15) against scipy's loggamma near the switch
        wc = 0.2
        lo = ohmic(wc=wc, beta=1 / (13.999 * wc))
        hi = ohmic(wc=wc, beta=1 / (14.001 * wc))
        t = np.linspace(0.1, 50, 7)
        assert xi_ohmic(lo, t) == pytest.approx(xi_ohmic(hi, t), rel=1e-3)
        assert xi_ohmic(hi, t) == pytest.approx([xi(hi, x) for x in t], rel=1e-9)

    def test_high_temperature_formula_against_quadrature(self):
        bath = ohmic(wc=0.02, beta=1e-4)
        quad = xi(bath, 10.0, high_temperature=True)
        assert xi_high_temperature(bath, 10.0) == pytest.approx(quad, rel=1e-6)

    def test_high_temperature_scales_with_s(self):
        t = np.linspace(0, 50, 11)
        assert np.array_equal(xi_high_temperature(ohmic(s=2.0), t),
                              2 * xi_high_temperature(ohmic(s=1.0), t))

    @settings(max_examples=40, deadline=None)
    @given(st.floats(1e-3, 2.0), st.floats(0.0, 500.0))
    def test_high_temperature_formula_nonnegative(self, beta_wc, t):
        bath = ohmic(wc=0.2, beta=beta_wc / 0.2)
        assert xi_high_temperature(bath, t) >= -1e-12

    def test_high_temperature_consistency_over_range(self):
        bath = ohmic(wc=0.02, beta=0.01 / 0.02 / 50)  # beta * wc = 2e-4
        for t in np.linspace(0.5, 100, 15):
            quad = xi(bath, t, high_temperature=True)
            assert abs(xi_high_temperature(bath, t) - quad) / quad <= 1e-6

    def test_temperature_monotonicity(self):
        betas = [0.05, 0.1, 0.5, 1.0, 5.0, 20.0, np.inf]
        for t in (0.5, 5.0, 50.0):
            vals = [xi(ohmic(beta=b), t) for b in betas]
            assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_linear_in_s(self):
        t = np.linspace(0, 30, 13)
        assert xi_ohmic(ohmic(s=3.0), t) == pytest.approx(3 * xi_ohmic(ohmic(s=1.0), t))
        assert xi(ohmic(s=3.0), 4.0) == pytest.approx(3 * xi(ohmic(s=1.0), 4.0))

    def test_non_ohmic_rejected(self):
        tab = BathSpec(Tabulated([0.0, 1.0], [0.0, 1.0]), 1.0)
        with pytest.raises(InvalidInput):
            xi_high_temperature(tab, 1.0)


class TestEnergyShift:
    @pytest.mark.parametrize("s,wc,expected", [(1.0, 0.2, 0.2), (0.0, 0.2, 0.0),
                                               (1.0, 0.02, 0.02)])
    def test_ohmic(self, s, wc, expected):
        assert energy_shift(ohmic(s=s, wc=wc)) == pytest.approx(expected)


@pytest.fixture(scope="module")
def tabulated_ohmic():
    w = np.linspace(0.0, 8.0, 801)
    return BathSpec(Tabulated(w, Ohmic(1.0, 0.2)(w)), 1.0)


def exact_shift_of_interpolant(w, h):
    # h/omega integrated segment by segment for the linear interpolant
    b = np.diff(h) / np.diff(w)
    a = h[1:] - b * w[1:]
    return b[0] * (w[1] - w[0]) + np.sum(a[1:] * np.log(w[2:] / w[1:-1])
                                         + b[1:] * np.diff(w[1:]))


class TestTabulated:
    def test_shift_matches_exact_interpolant_integral(self, tabulated_ohmic):
        d = tabulated_ohmic.density
        assert energy_shift(tabulated_ohmic) == pytest.approx(
            exact_shift_of_interpolant(d.omega, d.h), rel=1e-9)

    def test_close_to_ohmic(self, tabulated_ohmic):
        # interpolation error of a 0.01-spaced table is a few 1e-3
        ref = ohmic(beta=1.0)
        assert energy_shift(tabulated_ohmic) == pytest.approx(0.2, rel=5e-3)
        for t in (1.0, 10.0):
            assert sine_kernel(tabulated_ohmic, t) == pytest.approx(
                sine_kernel(ref, t), rel=5e-3)
            assert xi(tabulated_ohmic, t) == pytest.approx(xi_ohmic(ref, t), rel=5e-3)

    def test_cache_matches_pointwise(self, tabulated_ohmic):
        grid = make_grid(4.0, 0.5)
        c = build_kernel_cache(tabulated_ohmic, grid)
        assert c.xi == pytest.approx([xi(tabulated_ohmic, t) for t in grid],
                                     rel=1e-8, abs=1e-12)
        assert c.sine_kernel == pytest.approx(
            [sine_kernel(tabulated_ohmic, t) for t in grid], abs=1e-9)

    def test_validation(self):
        with pytest.raises(InvalidInput):
            Tabulated([0.0, 1.0], [1.0, 1.0])   # h(0) != 0
        with pytest.raises(InvalidInput):
            Tabulated([1.0, 0.5], [0.1, 0.2])
        with pytest.raises(InvalidInput):
            Tabulated([0.0, 1.0], [0.0, -1.0])

    def test_from_file(self, tmp_path):
        p = tmp_path / "h.txt"
        p.write_text("# omega h\n0 0\n1 0.5\n2 0.25\n")
        tab = Tabulated.from_file(p)
        assert tab(1.5) == pytest.approx(0.375)
        p.write_text("0.5,0.1\n1,0.2\n")
        tab = Tabulated.from_file(p)
        assert tab.low_frequency_slope == pytest.approx(0.2)
        assert tab(0.25) == pytest.approx(0.05)


class TestKernelCache:
    def test_single_point_grid(self):
        c = build_kernel_cache(ohmic(), [0.0])
        assert c.xi.tolist() == [0.0]
        assert c.sine_kernel.tolist() == [0.0]
        assert c.psi1.tolist() == [1.0]

    def test_zero_coupling(self):
        c = build_kernel_cache(ohmic(s=0.0), make_grid(10, 0.1))
        assert np.all(c.psi1 == 1.0)

    def test_invariants(self):
        c = build_kernel_cache(ohmic(beta=1.0), make_grid(50, 0.05))
        assert c.xi[0] == 0 and c.sine_kernel[0] == 0 and c.psi1[0] == 1
        assert np.all(c.xi >= 0)
        assert np.allclose(np.abs(c.psi1), np.exp(-c.xi), rtol=1e-14, atol=0)

    def test_modulus_decreasing(self):
        bath = ohmic(beta=0.1)
        grid = make_grid(6, 0.05)
        c = build_kernel_cache(bath, grid)
        direct = np.array([xi(bath, t) for t in grid])
        assert np.all(np.diff(direct) > 0)
        assert c.xi == pytest.approx(direct, rel=1e-9)
        assert np.all(np.diff(np.abs(c.psi1[1:])) < 0)

    def test_quadrature_method_matches_closed_form(self):
        bath = ohmic(beta=1.0)
        grid = make_grid(30, 0.5)
        fast = build_kernel_cache(bath, grid)
        slow = build_kernel_cache(bath, grid, method="quadrature")
        assert slow.xi == pytest.approx(fast.xi, rel=1e-8, abs=1e-12)
        assert slow.sine_kernel == pytest.approx(fast.sine_kernel, abs=1e-9)

    @pytest.mark.parametrize("grid", [[1.0, 2.0], [0.0, 0.1, 0.3], [0.0, -0.1]])
    def test_invalid_grid(self, grid):
        with pytest.raises(InvalidGrid):
            build_kernel_cache(ohmic(), grid)

    def test_support(self):
        c = build_kernel_cache(ohmic(beta=0.1), make_grid(20, 0.01))
        m = c.support(60.0)
        assert c.xi[m - 1] <= 60.0 < c.xi[m]
