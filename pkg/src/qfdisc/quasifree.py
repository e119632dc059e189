"""Particle-number statistics of quasi-free states, in natural-log domain.

In the occupation eigenbasis a quasi-free state assigns independent
Bernoulli weights q_j to the modes, so the particle number follows a
Poisson-binomial law.  The number-threshold test accepts when at most
floor(d/2) particles are seen; its type I error is the upper tail of the
law under q, its type II error the lower tail under r.  Both decay like
e^{-n c log n} in the intended regime, far below float underflow, hence
every probability here lives as a natural log with -inf encoding exact
zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailure, ValidationError

NEG_INF = float("-inf")

_NORMALIZATION_TOL = 1e-10


def log_sum_exp(values) -> float:
    """log(sum(exp(values))) without overflow; -inf-safe."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return NEG_INF
    top = float(np.max(v))
    if top == NEG_INF:
        return NEG_INF
    return top + float(np.log(np.sum(np.exp(v - top))))


@dataclass(frozen=True, eq=False)
class ModeOccupations:
    """Occupation numbers q_1..q_d in [0, 1] with below-floor markers."""

    values: np.ndarray
    below_floor: np.ndarray | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 1:
            raise ValidationError("occupations must be a non-empty 1-d vector")
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise ValidationError("occupations must lie in [0, 1]")
        flags = self.below_floor
        if flags is None:
            flags = np.zeros(values.size, dtype=bool)
        flags = np.asarray(flags, dtype=bool)
        if flags.shape != values.shape:
            raise ValidationError("below_floor markers must match the values")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "below_floor", flags)

    @property
    def d(self) -> int:
        return int(self.values.size)


def _values(occ) -> np.ndarray:
    if isinstance(occ, ModeOccupations):
        return occ.values
    return ModeOccupations(np.asarray(occ, dtype=float)).values


@dataclass(frozen=True)
class NumberThresholdTest:
    """Accept when the particle count is at most floor(d/2)."""

    d: int

    @property
    def threshold(self) -> int:
        return self.d // 2


@dataclass(frozen=True, eq=False)
class PoissonBinomialDist:
    """log pmf of the particle count over 0..d."""

    d: int
    log_pmf: np.ndarray


def poisson_binomial(occ) -> PoissonBinomialDist:
    """Exact log pmf of a sum of independent Bernoulli(q_j) variables.

    One O(d^2) convolution pass; every fold is a two-term log-sum-exp, so
    exact zeros (q_j in {0, 1}) propagate as -inf without NaN.
    """
    q = _values(occ)
    with np.errstate(divide="ignore"):
        log_q = np.log(q)
        log_1mq = np.log1p(-q)
    pmf = np.zeros(1)
    for j in range(q.size):
        stay = np.append(pmf + log_1mq[j], NEG_INF)
        jump = np.append(NEG_INF, pmf + log_q[j])
        pmf = np.logaddexp(stay, jump)
    total = log_sum_exp(pmf)
    if abs(total) > _NORMALIZATION_TOL:
        raise NumericalFailure(
            f"Poisson-binomial pmf normalization off by {total:.3e} in log domain"
        )
    return PoissonBinomialDist(d=q.size, log_pmf=pmf)


def log_prob_greater(dist: PoissonBinomialDist, k: int) -> float:
    """log P(N > k)."""
    return log_sum_exp(dist.log_pmf[max(k + 1, 0):])


def log_prob_at_most(dist: PoissonBinomialDist, k: int) -> float:
    """log P(N <= k)."""
    return log_sum_exp(dist.log_pmf[: max(k + 1, 0)])


def type1_log_error(occ) -> float:
    """log P(N > floor(d/2)) under the occupations of the null state."""
    q = _values(occ)
    test = NumberThresholdTest(q.size)
    return log_prob_greater(poisson_binomial(q), test.threshold)


def type2_log_error(occ) -> float:
    """log P(N <= floor(d/2)) under the occupations of the alternative."""
    r = _values(occ)
    test = NumberThresholdTest(r.size)
    return log_prob_at_most(poisson_binomial(r), test.threshold)


def threshold_test_log_bound(trace: float, d: int) -> float:
    """Trace-only log bound (d/2) * log(8 * trace / d) on either tail error.

    Derived by the arithmetic-geometric mean inequality; may exceed 0
    (a vacuous bound) at small d and is returned verbatim in that case.
    A zero trace gives -inf, matching an exactly vanishing error.
    """
    if d < 1:
        raise ValidationError(f"mode count d={d} must be >= 1")
    if trace < 0.0:
        raise ValidationError(f"trace {trace} must be >= 0")
    if trace == 0.0:
        return NEG_INF
    return (d / 2.0) * float(np.log(8.0 * trace / d))
