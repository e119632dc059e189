"""Finite Toeplitz restrictions, window projections, and compressions.

The n x n restriction of a symbol q is the Hermitian Toeplitz matrix
Q_n[k, j] = a_{k-j} built from the symbol's Fourier coefficients.  The
window projection keeps the discrete Fourier modes u_k (components
e^{-2pi i k j / n} / sqrt(n)) whose frequencies 2*pi*k/n fall in the shrunk
window [alpha+delta, omega-delta]; compressing Q_n to that mode basis gives
a small Hermitian matrix whose diagonal entries are exactly the Cesaro
means of the symbol at the mode frequencies, and whose eigenvalues are the
mode occupations feeding the particle-number statistics.

Everything is materialized dense: at the target sizes (n up to a few
thousand) dense Hermitian eigensolving is cheap and keeps the code flat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
import scipy.linalg

from .errors import NumericalFailure, ValidationError, WindowTooNarrowError
from .symbols import TWO_PI, FejerWindow, Symbol, fourier_coefficients

_EPS = float(np.finfo(float).eps)
_MEMBERSHIP_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class ToeplitzRestriction:
    """First-column data of the n x n restriction of a symbol.

    Entry (k, j) of the full matrix is coefficients[k-j], with negative
    indices supplied by conjugation.
    """

    n: int
    coefficients: np.ndarray
    source: str = ""

    def matrix(self) -> np.ndarray:
        """Materialize the dense Hermitian Toeplitz matrix."""
        c = self.coefficients
        return scipy.linalg.toeplitz(c, c.conj())


def restrict(s: Symbol, n: int) -> ToeplitzRestriction:
    """Toeplitz restriction of the symbol to chain length n."""
    if n < 1:
        raise ValidationError(f"dimension n={n} must be >= 1")
    coeffs = fourier_coefficients(s, np.arange(n))
    return ToeplitzRestriction(n=n, coefficients=coeffs, source=s.label)


def dft_basis(n: int, mode_indices) -> np.ndarray:
    """Columns u_k with (u_k)_j = e^{-2 pi i k j / n} / sqrt(n).

    Phases are reduced mod n in integer arithmetic before the complex
    exponential, which keeps entries accurate for large k*j.
    """
    ks = np.asarray(mode_indices, dtype=np.int64)
    js = np.arange(n, dtype=np.int64)
    phase = (js[:, None] * ks[None, :]) % n
    return np.exp(-2j * math.pi * phase / n) / math.sqrt(n)


def dft_diagonal_entry(s: Symbol, n: int, k: int) -> float:
    """<u_k, Q_n u_k> computed from the materialized matrix.

    Agrees with cesaro_mean(s, n, 2*pi*k/n) to ~1e-10; the agreement is a
    cross-module identity exercised by the test suite.
    """
    if not 0 <= k < n:
        raise ValidationError(f"mode index k={k} outside 0..{n - 1}")
    q = restrict(s, n).matrix()
    u = dft_basis(n, [k])[:, 0]
    value = np.vdot(u, q @ u)
    return float(value.real)


def dft_diagonal_entries(t: ToeplitzRestriction, mode_indices) -> np.ndarray:
    """Diagonal entries <u_k, Q_n u_k> for many modes at once."""
    w = dft_basis(t.n, mode_indices)
    return np.einsum("jk,jk->k", w.conj(), t.matrix() @ w).real


@dataclass(frozen=True, eq=False)
class SpectralWindowProjection:
    """Projection onto the DFT modes inside a shrunk window."""

    n: int
    mode_indices: tuple[int, ...]
    window: FejerWindow

    @property
    def rank(self) -> int:
        return len(self.mode_indices)

    def basis(self) -> np.ndarray:
        """Orthonormal n x rank basis of the range (DFT columns)."""
        return dft_basis(self.n, self.mode_indices)

    def matrix(self) -> np.ndarray:
        """Dense n x n projection matrix."""
        w = self.basis()
        return w @ w.conj().T

    def rank_lower_bound(self) -> int:
        """floor((omega - alpha - 2*delta) * n / (2*pi)), exact when possible."""
        w = self.window
        fracs = w.shrunk_interval_fracs()
        if fracs is not None:
            lo, hi = fracs
            return math.floor(Fraction(self.n, 2) * (hi - lo))
        lo, hi = w.shrunk_interval()
        return math.floor((hi - lo) * self.n / TWO_PI - 1e-9)


def _window_modes(n: int, w: FejerWindow) -> list[int]:
    fracs = w.shrunk_interval_fracs()
    if fracs is not None:
        lo, hi = fracs
        return [k for k in range(n) if lo <= Fraction(2 * k, n) <= hi]
    lo, hi = w.shrunk_interval()
    return [
        k
        for k in range(n)
        if lo - _MEMBERSHIP_SLACK <= TWO_PI * k / n <= hi + _MEMBERSHIP_SLACK
    ]


def smallest_admissible_n(w: FejerWindow) -> int:
    """Smallest n for which some mode frequency enters the shrunk window."""
    lo, hi = w.shrunk_interval()
    limit = math.ceil(TWO_PI / (hi - lo)) + 2
    for n in range(1, limit + 1):
        if _window_modes(n, w):
            return n
    raise NumericalFailure("no admissible dimension found below the pigeonhole limit")


def window_projection(n: int, w: FejerWindow) -> SpectralWindowProjection:
    """Projection onto modes 2*pi*k/n inside [alpha+delta, omega-delta].

    Membership uses exact pi-rational comparison when the window was built
    from rational multiples of pi, otherwise floats with 1e-12 slack, so
    ranks are reproducible across platforms.
    """
    if n < 1:
        raise ValidationError(f"dimension n={n} must be >= 1")
    modes = _window_modes(n, w)
    if not modes:
        raise WindowTooNarrowError(n, smallest_admissible_n(w))
    return SpectralWindowProjection(n=n, mode_indices=tuple(modes), window=w)


@dataclass(frozen=True, eq=False)
class OccupationSpectrum:
    """Clamped ascending eigenvalues with below-floor markers."""

    values: np.ndarray
    below_floor: np.ndarray
    floor: float


def hermitian_occupations(matrix: np.ndarray) -> OccupationSpectrum:
    """Ascending eigenvalues of a Hermitian matrix, clamped to [0, 1].

    The matrix must be Hermitian to 1e-12 relative.  Eigenvalues may
    overshoot [0, 1] by at most floor_ev = d * eps * max(norm, 1) before
    clamping; larger excursions raise NumericalFailure.  Values at or below
    floor_ev are flagged: they are indistinguishable from zero at working
    precision and downstream consumers degrade confidence accordingly.
    """
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    d = m.shape[0]
    scale = max(float(np.max(np.abs(m))), 1.0) if m.size else 1.0
    herm_dev = float(np.max(np.abs(m - m.conj().T)))
    if herm_dev > 1e-12 * scale:
        raise ValidationError(
            f"matrix is not Hermitian: max |M - M*| = {herm_dev:.3e}"
        )
    ev = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    floor = d * _EPS * max(float(np.max(np.abs(ev))), 1.0)
    if np.any(ev < -floor) or np.any(ev > 1.0 + floor):
        worst = ev[np.argmax(np.maximum(-ev, ev - 1.0))]
        raise NumericalFailure(
            f"eigenvalue {worst!r} outside [-floor, 1+floor] with floor {floor:.3e}"
        )
    clamped = np.clip(ev, 0.0, 1.0)
    return OccupationSpectrum(
        values=clamped, below_floor=clamped <= floor, floor=floor
    )


@dataclass(frozen=True, eq=False)
class CompressedSymbol:
    """Compression of a Toeplitz restriction onto a window-mode basis."""

    d: int
    matrix: np.ndarray
    trace: float
    occupations: np.ndarray
    below_floor: np.ndarray
    floor: float


def compress(t: ToeplitzRestriction, e: SpectralWindowProjection) -> CompressedSymbol:
    """Compression M[k, k'] = <u_k, Q_n u_k'> over the window modes.

    The diagonal entries are the Cesaro means of the source symbol at the
    mode frequencies, so trace(M) inherits the plateau bound
    rank * gamma_delta / n when the symbol is flat zero on the window.
    """
    if t.n != e.n:
        raise ValidationError(
            f"dimension mismatch: restriction n={t.n}, projection n={e.n}"
        )
    w = e.basis()
    m = w.conj().T @ (t.matrix() @ w)
    m = (m + m.conj().T) / 2.0
    spectrum = hermitian_occupations(m)
    return CompressedSymbol(
        d=e.rank,
        matrix=m,
        trace=float(np.sum(np.diag(m).real)),
        occupations=spectrum.values,
        below_floor=spectrum.below_floor,
        floor=spectrum.floor,
    )


@dataclass(frozen=True)
class PositivityReport:
    """Smallest eigenvalue against the numerical floor of the precision used."""

    min_eigenvalue: float
    floor: float
    provably_positive: bool
    precision: str = "float64"


def min_eigenvalue_positivity(t: ToeplitzRestriction) -> PositivityReport:
    """Smallest eigenvalue of the restriction, with a positivity verdict.

    The verdict is affirmative only when the eigenvalue clears the floor
    n * eps * max(norm, 1); otherwise positivity is inconclusive at double
    precision (small Toeplitz eigenvalues can sink below any fixed floor).
    The complementary question (is 1 an eigenvalue) is the same call on the
    restriction of the complement symbol.
    """
    ev = np.linalg.eigvalsh(t.matrix())
    floor = t.n * _EPS * max(float(np.max(np.abs(ev))), 1.0)
    smallest = float(ev[0])
    return PositivityReport(
        min_eigenvalue=smallest,
        floor=floor,
        provably_positive=smallest > floor,
    )


def _mp_angle(value: float, frac: Fraction | None, pi) -> mpmath.mpf:
    if frac is None:
        return mpmath.mpf(value)
    return mpmath.mpf(frac.numerator) / frac.denominator * pi


def certified_min_eigenvalue(s: Symbol, n: int, dps: int = 60) -> PositivityReport:
    """Extended-precision positivity certificate for the restriction of s.

    Rebuilds the Fourier coefficients from the exact segment data with
    mpmath at the requested decimal precision and eigensolves there, so
    eigenvalues far below double precision (e.g. ~1e-48 at n = 64 for
    half-circle plateau symbols) are still resolved against the much
    smaller floor n * 2^(1-prec).  Intended for modest n; cost grows as n^3
    in software arithmetic.
    """
    if n < 1:
        raise ValidationError(f"dimension n={n} must be >= 1")
    with mpmath.workdps(dps):
        pi = +mpmath.pi
        coeffs = []
        for m in range(n):
            total = mpmath.mpc(0)
            for g in s.segments:
                u = _mp_angle(g.start, g.start_frac, pi)
                v = _mp_angle(g.end, g.end_frac, pi)
                c = mpmath.mpf(g.value)
                if m == 0:
                    total += c * (v - u) / (2 * pi)
                else:
                    total += c * (mpmath.exp(-1j * m * u) - mpmath.exp(-1j * m * v)) / (
                        2j * pi * m
                    )
            coeffs.append(total)
        a = mpmath.zeros(n, n)
        for i in range(n):
            for j in range(n):
                m = i - j
                a[i, j] = coeffs[m] if m >= 0 else mpmath.conj(coeffs[-m])
        ev = mpmath.eighe(a, eigvals_only=True)
        ev = [mpmath.re(x) for x in ev]
        smallest = min(ev)
        norm = max(abs(x) for x in ev)
        eps = mpmath.mpf(2) ** (1 - mpmath.mp.prec)
        floor = n * eps * max(norm, mpmath.mpf(1))
        return PositivityReport(
            min_eigenvalue=float(smallest),
            floor=float(floor),
            provably_positive=bool(smallest > floor),
            precision=f"mpmath dps={dps}",
        )


def dump_complex_matrix(matrix: np.ndarray, path) -> None:
    """Debug dump: row-major little-endian float64 (re, im) pairs."""
    m = np.ascontiguousarray(np.asarray(matrix, dtype=complex))
    m.astype("<c16").tofile(path)
