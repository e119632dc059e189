import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.integrate
from hypothesis import given, settings
from hypothesis import strategies as st

from qfdisc import (
    FejerWindow,
    NumericalFailure,
    Symbol,
    ValidationError,
    cesaro_mean,
    cesaro_mean_grid,
    evaluate,
    fejer_bound_margin,
    fourier_coefficient,
    parse_angle,
)

TWO_PI = 2 * math.pi


def quadrature_coefficient(s, m):
    """Independent oracle: adaptive quadrature of (1/2pi) int e^{-imx} q(x) dx."""
    total = 0.0 + 0.0j
    for seg in s.segments:
        re, _ = scipy.integrate.quad(
            lambda x: seg.value * math.cos(m * x), seg.start, seg.end, limit=200
        )
        im, _ = scipy.integrate.quad(
            lambda x: -seg.value * math.sin(m * x), seg.start, seg.end, limit=200
        )
        total += (re + 1j * im) / TWO_PI
    return total


def segments_strategy():
    return st.lists(st.floats(0.0, 1.0), min_size=1, max_size=5).flatmap(
        lambda values: st.lists(
            st.floats(0.01, TWO_PI - 0.01),
            min_size=len(values) - 1,
            max_size=len(values) - 1,
            unique=True,
        ).map(
            lambda cuts: Symbol.from_segments(
                [
                    (edges[i], edges[i + 1], values[i])
                    for edges in [[0.0] + sorted(cuts) + [TWO_PI]]
                    for i in range(len(values))
                ]
            )
        )
    )


class TestParseAngle:
    def test_pi_fractions(self):
        assert parse_angle("pi/2") == (math.pi / 2, Fraction(1, 2))
        assert parse_angle("3pi/2") == (3 * math.pi / 2, Fraction(3, 2))
        assert parse_angle("2pi") == (2 * math.pi, Fraction(2))
        assert parse_angle("pi") == (math.pi, Fraction(1))
        assert parse_angle("0") == (0.0, Fraction(0))

    def test_plain_numbers(self):
        value, frac = parse_angle(1.25)
        assert value == 1.25 and frac is None
        value, frac = parse_angle("1.25")
        assert value == 1.25 and frac is None

    def test_rejects_junk(self):
        with pytest.raises(ValidationError):
            parse_angle("tau/2")


class TestSymbolConstruction:
    def test_partition_required(self):
        with pytest.raises(ValidationError):
            Symbol.from_segments([(0.0, math.pi, 0.5)])  # gap to 2pi
        with pytest.raises(ValidationError):
            Symbol.from_segments([(0.0, 4.0, 0.5), (3.5, TWO_PI, 0.5)])  # overlap

    def test_values_in_unit_interval(self):
        with pytest.raises(ValidationError):
            Symbol.from_segments([(0.0, TWO_PI, 1.5)])

    def test_complement(self, half_symbol):
        comp = half_symbol.complement()
        assert evaluate(comp, 1.0) == 0.0
        assert evaluate(comp, 4.0) == 1.0


class TestEvaluate:
    def test_constant(self):
        assert evaluate(Symbol.constant(0.5), 1.0) == 0.5

    def test_boundary_belongs_to_right_segment(self, half_symbol):
        assert evaluate(half_symbol, math.pi) == 0.0

    def test_half_open_convention(self):
        s = Symbol.from_segments([(0.0, math.pi / 2, 0.3), (math.pi / 2, TWO_PI, 0.7)])
        assert evaluate(s, math.pi / 2) == 0.7

    def test_out_of_range_rejected(self, half_symbol):
        with pytest.raises(ValidationError):
            evaluate(half_symbol, -0.1)
        with pytest.raises(ValidationError):
            evaluate(half_symbol, TWO_PI)


class TestFourierCoefficients:
    def test_constant_symbol(self):
        s = Symbol.constant(0.37)
        assert fourier_coefficient(s, 0) == pytest.approx(0.37, abs=1e-15)
        assert abs(fourier_coefficient(s, 3)) < 1e-15

    def test_half_symbol_mean(self, half_symbol):
        assert fourier_coefficient(half_symbol, 0) == pytest.approx(0.5, abs=1e-15)

    def test_half_symbol_first_mode(self, half_symbol):
        # frozen from the quadrature oracle below: -i/pi
        got = fourier_coefficient(half_symbol, 1)
        assert got == pytest.approx(-0.3183098861837907j, abs=1e-13)
        oracle = quadrature_coefficient(half_symbol, 1)
        assert got == pytest.approx(oracle, abs=1e-11)

    @pytest.mark.parametrize("m", [0, 1, 2, 5, -3])
    def test_quadrature_cross_check(self, canonical_q, m):
        got = fourier_coefficient(canonical_q, m)
        assert got == pytest.approx(quadrature_coefficient(canonical_q, m), abs=1e-11)

    @settings(max_examples=30, deadline=None)
    @given(s=segments_strategy(), m=st.integers(-40, 40))
    def test_hermitian_symmetry(self, s, m):
        a = fourier_coefficient(s, m)
        b = fourier_coefficient(s, -m)
        assert b == pytest.approx(a.conjugate(), abs=1e-14)

    @settings(max_examples=30, deadline=None)
    @given(s=segments_strategy())
    def test_mean_value_in_unit_interval(self, s):
        a0 = fourier_coefficient(s, 0)
        assert abs(a0.imag) < 1e-15
        assert -1e-12 <= a0.real <= 1 + 1e-12
        assert a0.real == pytest.approx(s.mean_value(), abs=1e-13)


class TestCesaroMean:
    def test_constant(self):
        s = Symbol.constant(0.4)
        for n in (1, 2, 17):
            assert cesaro_mean(s, n, 2.2) == pytest.approx(0.4, abs=1e-13)

    def test_first_order_is_mean_value(self, half_symbol):
        assert cesaro_mean(half_symbol, 1, 0.0) == pytest.approx(0.5, abs=1e-14)

    def test_plateau_value_bounded(self, canonical_q):
        # at x = pi, any margin delta <= pi/2 applies; use delta = pi/4
        gamma = 1.0 / math.sin(math.pi / 8) ** 2
        value = cesaro_mean(canonical_q, 64, math.pi)
        assert 0.0 <= value <= gamma / 64

    def test_residue_guard_raises(self, half_symbol, monkeypatch):
        # break Hermitian symmetry by zeroing the negative modes; the
        # imaginary-residue tripwire must fire
        import qfdisc.symbols as symbols_module

        original = symbols_module.fourier_coefficients

        def asymmetric(s, ms):
            out = original(s, ms)
            return np.where(np.asarray(ms) < 0, 0.0, out)

        monkeypatch.setattr(symbols_module, "fourier_coefficients", asymmetric)
        with pytest.raises(NumericalFailure):
            symbols_module.cesaro_mean(half_symbol, 8, 1.0)

    @settings(max_examples=25, deadline=None)
    @given(s=segments_strategy(), n=st.integers(1, 128), x=st.floats(0.0, TWO_PI))
    def test_range_preservation(self, s, n, x):
        value = cesaro_mean(s, n, x)
        assert -1e-12 <= value <= 1 + 1e-12


class TestFejerBoundMargin:
    def test_constant_symbol_zero_margin(self):
        s = Symbol.constant(0.8)
        w = FejerWindow.from_angles("pi/2", "3pi/2", "pi/8", plateau_value=0.8)
        margin, respected = fejer_bound_margin(s, w, 32, np.linspace(*w.shrunk_interval(), 11))
        assert margin < 1e-13
        assert respected

    @pytest.mark.parametrize("n", [16, 128])
    def test_canonical_plateau(self, canonical_q, n):
        w = FejerWindow.from_angles("pi/2", "3pi/2", "pi/4", plateau_value=0.0)
        grid = np.linspace(*w.shrunk_interval(), 101)
        margin, respected = fejer_bound_margin(canonical_q, w, n, grid)
        assert respected
        # gamma_{pi/4} = 1/sin^2(pi/8) = 6.828427...; bound at n=128 is 0.0533470869...
        assert w.gamma_delta == pytest.approx(6.82842712474619, abs=1e-12)
        assert margin <= w.gamma_delta / n

    def test_grid_outside_shrunk_interval_rejected(self, canonical_q):
        w = FejerWindow.from_angles("pi/2", "3pi/2", "pi/4", plateau_value=0.0)
        with pytest.raises(ValidationError):
            fejer_bound_margin(canonical_q, w, 16, [math.pi / 2 + 0.01])

    def test_plateau_precondition_enforced(self, canonical_q):
        w = FejerWindow.from_angles("pi/2", "3pi/2", "pi/4", plateau_value=0.25)
        with pytest.raises(ValidationError):
            fejer_bound_margin(canonical_q, w, 16, [math.pi])


class TestFejerWindow:
    def test_gamma_matches_definition(self):
        w = FejerWindow.from_angles("pi/2", "3pi/2", "pi/8")
        assert w.gamma_delta == pytest.approx(1 / math.sin(math.pi / 16) ** 2, rel=1e-15)

    def test_margin_validation(self):
        with pytest.raises(ValidationError):
            FejerWindow.from_angles("pi/2", "3pi/2", "pi/2")  # delta too large
        with pytest.raises(ValidationError):
            FejerWindow.from_angles("pi", "pi/2", "pi/8")  # reversed

    def test_exact_shrunk_interval(self):
        w = FejerWindow.from_angles("pi/2", "3pi/2", "pi/8")
        assert w.shrunk_interval_fracs() == (Fraction(5, 8), Fraction(11, 8))

    def test_float_window_has_no_fracs(self):
        w = FejerWindow.from_angles(1.0, 4.0, 0.5)
        assert w.shrunk_interval_fracs() is None


def test_grid_vectorization_matches_scalar(canonical_q):
    xs = np.linspace(0.0, TWO_PI - 1e-9, 7)
    grid = cesaro_mean_grid(canonical_q, 24, xs)
    scalars = [cesaro_mean(canonical_q, 24, float(x)) for x in xs]
    np.testing.assert_allclose(grid, scalars, atol=1e-14)
