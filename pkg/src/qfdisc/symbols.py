"""Piecewise-constant symbols on [0, 2*pi) and their Fourier analysis.

A symbol is a function q: [0, 2*pi) -> [0, 1] given by finitely many
half-open constant segments that partition the circle.  Its Fourier
coefficients

    a_m = (1/2pi) * integral_0^{2pi} e^{-i m x} q(x) dx

have an exact closed form per segment, so no quadrature enters the main
pipeline.  The order-n Cesaro mean of the Fourier partial sums is

    S_n q(x) = sum_{|m| <= n-1} ((n - |m|)/n) * a_m * e^{i m x},

which converges to q at rate gamma_delta / n on the interior of any
plateau, where gamma_delta = 1 / sin^2(delta/2) and delta is the distance
kept from the plateau ends.  Angles may be supplied as exact rational
multiples of pi (e.g. "3pi/2"), which later enables exact window-membership
decisions for the mode projections.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .errors import NumericalFailure, ValidationError

TWO_PI = 2.0 * math.pi

#: Largest imaginary residue tolerated when a Cesaro mean is reduced to a
#: real number.  A few orders above double accumulation error at n <= 1e4.
CESARO_IMAG_TOL = 1e-12

_GLUE_TOL = 1e-12

_PI_RE = re.compile(r"^\s*(\d+)?\s*\*?\s*pi\s*(?:/\s*(\d+))?\s*$", re.IGNORECASE)


def parse_angle(value) -> tuple[float, Fraction | None]:
    """Parse an angle given in radians or as a rational multiple of pi.

    Accepts plain numbers (radians), or strings like "0", "pi", "pi/2",
    "3pi/2", "2pi", "1.25".  Returns the float value in radians and, when
    the input was an exact pi-rational, the multiple of pi as a Fraction.
    """
    if isinstance(value, Fraction):
        return float(value) * math.pi, value
    if isinstance(value, (int, float)):
        return float(value), None
    if isinstance(value, str):
        text = value.strip()
        m = _PI_RE.match(text)
        if m:
            num = int(m.group(1)) if m.group(1) else 1
            den = int(m.group(2)) if m.group(2) else 1
            if den == 0:
                raise ValidationError(f"zero denominator in angle {value!r}")
            frac = Fraction(num, den)
            return float(frac) * math.pi, frac
        try:
            as_float = float(text)
        except ValueError:
            raise ValidationError(f"cannot parse angle {value!r}") from None
        if as_float == 0.0:
            return 0.0, Fraction(0)
        return as_float, None
    raise ValidationError(f"cannot parse angle {value!r}")


@dataclass(frozen=True)
class Segment:
    """Half-open constant piece [start, end) of a symbol."""

    start: float
    end: float
    value: float
    start_frac: Fraction | None = None
    end_frac: Fraction | None = None

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValidationError(f"segment value {self.value} outside [0, 1]")
        if not self.end > self.start:
            raise ValidationError(
                f"degenerate segment [{self.start}, {self.end})"
            )


@dataclass(frozen=True, eq=False)
class Symbol:
    """A piecewise-constant function [0, 2*pi) -> [0, 1].

    Segments are half-open [start, end), ordered, and must tile the full
    circle with no gaps or overlaps.  The right-segment convention at the
    breakpoints is fixed for determinism; it never affects an integral.
    """

    segments: tuple[Segment, ...]
    label: str = "symbol"

    def __post_init__(self):
        segs = self.segments
        if not segs:
            raise ValidationError("symbol needs at least one segment")
        if abs(segs[0].start) > _GLUE_TOL:
            raise ValidationError("segments must start at 0")
        for left, right in zip(segs, segs[1:]):
            if abs(right.start - left.end) > _GLUE_TOL:
                raise ValidationError(
                    f"gap or overlap between segments at {left.end} vs {right.start}"
                )
        if abs(segs[-1].end - TWO_PI) > _GLUE_TOL:
            raise ValidationError("segments must end at 2*pi")

    @classmethod
    def from_segments(cls, pieces, label: str = "symbol") -> "Symbol":
        """Build a symbol from (start, end, value) triples.

        Start and end accept anything :func:`parse_angle` accepts.  Pieces
        may be given in any order; they are sorted by start angle.
        """
        segs = []
        for start, end, value in pieces:
            s, sf = parse_angle(start)
            e, ef = parse_angle(end)
            segs.append(Segment(s, e, float(value), sf, ef))
        segs.sort(key=lambda g: g.start)
        return cls(tuple(segs), label=label)

    @classmethod
    def constant(cls, value: float, label: str | None = None) -> "Symbol":
        if label is None:
            label = f"const({value})"
        seg = Segment(0.0, TWO_PI, float(value), Fraction(0), Fraction(2))
        return cls((seg,), label=label)

    def complement(self) -> "Symbol":
        """The symbol 1 - q, segment for segment."""
        segs = tuple(replace(g, value=1.0 - g.value) for g in self.segments)
        return Symbol(segs, label=f"1-({self.label})")

    def mean_value(self) -> float:
        return sum(g.value * (g.end - g.start) for g in self.segments) / TWO_PI

    def is_constant_on(self, value: float, start: float, end: float) -> bool:
        """True if every segment overlapping (start, end) has the given value.

        Overlap is taken in the open sense, so boundary touching (measure
        zero) does not count.
        """
        for g in self.segments:
            if g.start < end - _GLUE_TOL and g.end > start + _GLUE_TOL:
                if g.value != value:
                    return False
        return True


def evaluate(s: Symbol, x: float) -> float:
    """Value of the symbol at angle x in [0, 2*pi)."""
    if not 0.0 <= x < TWO_PI:
        raise ValidationError(f"angle {x} outside [0, 2*pi)")
    for g in s.segments:
        if x < g.end:
            return g.value
    # only reachable when x sits in the float gap below the last end
    return s.segments[-1].value


def fourier_coefficients(s: Symbol, ms) -> np.ndarray:
    """Closed-form Fourier coefficients a_m for an array of integers m."""
    ms = np.asarray(ms)
    out = np.zeros(ms.shape, dtype=complex)
    zero = ms == 0
    safe = np.where(zero, 1, ms)
    for g in s.segments:
        if g.value == 0.0:
            continue
        const_part = g.value * (g.end - g.start) / TWO_PI
        osc = g.value * (
            np.exp(-1j * safe * g.start) - np.exp(-1j * safe * g.end)
        ) / (2j * math.pi * safe)
        out += np.where(zero, const_part, osc)
    return out


def fourier_coefficient(s: Symbol, m: int) -> complex:
    """Fourier coefficient a_m = (1/2pi) * int e^{-imx} q(x) dx."""
    return complex(fourier_coefficients(s, np.array([m]))[0])


def _weighted_coefficients(s: Symbol, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Modes m = -(n-1)..(n-1) with Cesaro weights (n-|m|)/n applied."""
    ms = np.arange(-(n - 1), n)
    weights = (n - np.abs(ms)) / n
    return ms, weights * fourier_coefficients(s, ms)


def _reduce_real(total: complex | np.ndarray) -> np.ndarray:
    imag = np.max(np.abs(np.imag(np.atleast_1d(total))))
    if imag > CESARO_IMAG_TOL:
        raise NumericalFailure(
            f"Cesaro mean has imaginary residue {imag:.3e} > {CESARO_IMAG_TOL:.0e}; "
            "Fourier coefficients have lost Hermitian symmetry"
        )
    return np.real(total)


def cesaro_mean(s: Symbol, n: int, x: float) -> float:
    """Order-n Cesaro (Fejer) mean of the Fourier series of s at angle x."""
    return float(cesaro_mean_grid(s, n, [x])[0])


def cesaro_mean_grid(s: Symbol, n: int, xs) -> np.ndarray:
    """Cesaro means at many angles, sharing one coefficient pass."""
    if n < 1:
        raise ValidationError(f"order n={n} must be >= 1")
    xs = np.asarray(xs, dtype=float)
    ms, wc = _weighted_coefficients(s, n)
    total = np.exp(1j * np.outer(xs, ms)) @ wc
    return _reduce_real(total)


@dataclass(frozen=True)
class FejerWindow:
    """An interval [alpha, omega] with an interior margin delta.

    gamma_delta = 1/sin^2(delta/2) is the constant of the plateau
    approximation rate gamma_delta / n.  plateau_value is the constant the
    symbol is expected to take on [alpha, omega].  Fractions of pi are kept
    when the angles were given exactly.
    """

    alpha: float
    omega: float
    delta: float
    plateau_value: float = 0.0
    alpha_frac: Fraction | None = None
    omega_frac: Fraction | None = None
    delta_frac: Fraction | None = None
    gamma_delta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.alpha < self.omega <= TWO_PI + _GLUE_TOL:
            raise ValidationError(
                f"window [{self.alpha}, {self.omega}] not inside [0, 2*pi]"
            )
        if not 0.0 < self.delta < (self.omega - self.alpha) / 2:
            raise ValidationError(
                f"margin delta={self.delta} must lie in (0, (omega-alpha)/2)"
            )
        if not 0.0 <= self.plateau_value <= 1.0:
            raise ValidationError("plateau value outside [0, 1]")
        object.__setattr__(
            self, "gamma_delta", 1.0 / math.sin(self.delta / 2.0) ** 2
        )

    @classmethod
    def from_angles(cls, alpha, omega, delta, plateau_value: float = 0.0) -> "FejerWindow":
        a, af = parse_angle(alpha)
        o, of = parse_angle(omega)
        d, df = parse_angle(delta)
        return cls(a, o, d, float(plateau_value), af, of, df)

    def with_plateau(self, value: float) -> "FejerWindow":
        return replace(self, plateau_value=float(value))

    def shrunk_interval(self) -> tuple[float, float]:
        """[alpha + delta, omega - delta] as floats."""
        return self.alpha + self.delta, self.omega - self.delta

    def shrunk_interval_fracs(self) -> tuple[Fraction, Fraction] | None:
        """Exact shrunk interval as fractions of pi, when available."""
        if None in (self.alpha_frac, self.omega_frac, self.delta_frac):
            return None
        return self.alpha_frac + self.delta_frac, self.omega_frac - self.delta_frac


def fejer_bound_margin(
    s: Symbol, w: FejerWindow, n: int, grid
) -> tuple[float, bool]:
    """Worst plateau deviation |S_n s(x) - c| over a grid, against gamma_delta/n.

    The symbol must equal w.plateau_value everywhere on [alpha, omega], and
    every grid point must lie in the shrunk interval [alpha+delta,
    omega-delta].  Returns (max deviation, deviation <= gamma_delta/n).
    """
    if not s.is_constant_on(w.plateau_value, w.alpha, w.omega):
        raise ValidationError(
            f"symbol {s.label!r} is not constant {w.plateau_value} on "
            f"[{w.alpha}, {w.omega}]"
        )
    lo, hi = w.shrunk_interval()
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValidationError("empty evaluation grid")
    if np.any(grid < lo - _GLUE_TOL) or np.any(grid > hi + _GLUE_TOL):
        raise ValidationError(
            f"grid point outside the shrunk interval [{lo}, {hi}]"
        )
    values = cesaro_mean_grid(s, n, grid)
    margin = float(np.max(np.abs(values - w.plateau_value)))
    return margin, margin <= w.gamma_delta / n
