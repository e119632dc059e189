"""Seeded verification suites: oracle equivalences and module invariants.

Each suite draws its instances from a deterministic generator, measures the
worst deviation against its tolerance, and reports one line.  The driver is
what `qfdisc verify` runs; the acceptance tests call the same functions
with their own sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import jw_oracle, quasifree, symbols, toeplitz

TWO_PI = symbols.TWO_PI


@dataclass
class SuiteResult:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return (
            f"{status} {self.name}: max deviation {self.max_deviation:.3e} "
            f"vs tolerance {self.tolerance:.1e}{extra}"
        )


def random_hermitian_unit_spectrum(rng, d: int) -> np.ndarray:
    """Random d x d Hermitian matrix with spectrum inside [0, 1]."""
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = (a + a.conj().T) / 2.0
    w, v = np.linalg.eigh(h)
    lam = rng.uniform(0.0, 1.0, size=d)
    lam.sort()
    return (v * lam) @ v.conj().T


def random_symbol(rng, max_segments: int = 6, label: str = "random") -> symbols.Symbol:
    """Random piecewise-constant symbol with float breakpoints."""
    count = int(rng.integers(1, max_segments + 1))
    cuts = np.sort(rng.uniform(0.05, TWO_PI - 0.05, size=count - 1))
    edges = np.concatenate([[0.0], cuts, [TWO_PI]])
    values = rng.uniform(0.0, 1.0, size=count)
    pieces = [(edges[i], edges[i + 1], values[i]) for i in range(count)]
    return symbols.Symbol.from_segments(pieces, label=label)


def random_plateau_setup(rng, plateau_value: float | None = None):
    """Random symbol flat on a pi-rational window, plus the window itself.

    The window angles are simple fractions of pi so that mode membership
    and rank bounds evaluate exactly.
    """
    den = int(rng.choice([4, 6, 8, 12, 16]))
    total = 2 * den
    width = int(rng.integers(max(2, den // 2), den + 1))  # >= pi/2 wide
    start = int(rng.integers(0, total - width))
    alpha_f = Fraction(start, den)
    omega_f = Fraction(start + width, den)
    delta_f = Fraction(width, den * int(rng.choice([5, 6, 8])))
    value = plateau_value
    if value is None:
        value = float(rng.uniform(0.0, 1.0))
    window = symbols.FejerWindow.from_angles(alpha_f, omega_f, delta_f, value)

    pieces = [(alpha_f, omega_f, value)]
    alpha, omega = window.alpha, window.omega

    def fill(lo, hi):
        if hi - lo < 1e-9:
            return
        cuts = np.sort(rng.uniform(lo, hi, size=int(rng.integers(0, 3))))
        edges = np.concatenate([[lo], cuts, [hi]])
        for i in range(len(edges) - 1):
            pieces.append((edges[i], edges[i + 1], float(rng.uniform(0.0, 1.0))))

    if alpha > 0.0:
        fill(0.0, alpha)
    if omega < TWO_PI:
        fill(omega, TWO_PI)
    pieces.sort(key=lambda p: symbols.parse_angle(p[0])[0])
    return symbols.Symbol.from_segments(pieces, label="plateau"), window


def suite_car_relations(max_d: int = 6) -> SuiteResult:
    """{a_i, a_j} = 0 and {a_i, a_j*} = delta_ij over all pairs."""
    worst = 0.0
    for d in range(1, max_d + 1):
        ops = jw_oracle.build_ops(d)
        dim = 2**d
        eye = np.eye(dim)
        for i, j in combinations(range(d), 2):
            ai = ops.creation_ops[i].conj().T
            aj = ops.creation_ops[j].conj().T
            worst = max(worst, float(np.linalg.norm(ai @ aj + aj @ ai, 2)))
        for i in range(d):
            ai = ops.creation_ops[i].conj().T
            for j in range(d):
                cj = ops.creation_ops[j]
                anti = ai @ cj + cj @ ai
                target = eye if i == j else 0.0
                worst = max(worst, float(np.linalg.norm(anti - target, 2)))
    return SuiteResult("car_relations", worst <= 1e-12, worst, 1e-12)


def suite_number_spectrum(max_d: int = 6) -> SuiteResult:
    """Dense number operator has eigenvalues k with multiplicity binom(d, k)."""
    worst = 0.0
    ok = True
    for d in range(1, max_d + 1):
        n = jw_oracle.number_operator(jw_oracle.build_ops(d))
        ev = np.sort(np.linalg.eigvalsh(n))
        expected = np.repeat(np.arange(d + 1), [math.comb(d, k) for k in range(d + 1)])
        dev = float(np.max(np.abs(ev - expected)))
        worst = max(worst, dev)
        ok = ok and dev <= 1e-12
    return SuiteResult("number_spectrum", ok, worst, 1e-12)


def suite_oracle_error_probs(
    rng, max_d: int = 8, instances: int = 100, perturb: float = 0.0
) -> SuiteResult:
    """Dense threshold-test errors vs Poisson-binomial log-domain tails."""
    worst = 0.0
    for d in range(1, max_d + 1):
        for _ in range(instances):
            mq = random_hermitian_unit_spectrum(rng, d)
            mr = random_hermitian_unit_spectrum(rng, d)
            sq = jw_oracle.dense_state(mq)
            sr = jw_oracle.dense_state(mr)
            alpha, beta = jw_oracle.dense_error_probs(sq, sr)
            alpha += perturb
            fast_alpha = math.exp(quasifree.type1_log_error(sq.occupations))
            fast_beta = math.exp(quasifree.type2_log_error(sr.occupations))
            worst = max(worst, abs(alpha - fast_alpha), abs(beta - fast_beta))
    return SuiteResult(
        "oracle_error_probs",
        worst <= 1e-10,
        worst,
        1e-10,
        detail=f"d<={max_d}, {instances} instances per d",
    )


def suite_wick_determinant(rng, max_d: int = 8, tuples_per_case: int = 2) -> SuiteResult:
    """Determinant formula vs dense traces for mixed ladder monomials."""
    worst = 0.0
    for d in range(2, max_d + 1):
        state = jw_oracle.dense_state(random_hermitian_unit_spectrum(rng, d))
        for n_create in range(0, 4):
            for n_annihilate in range(0, 4):
                if max(n_create, n_annihilate) > d:
                    continue
                for _ in range(tuples_per_case):
                    phis = [_unit_vector(rng, d) for _ in range(n_create)]
                    psis = [_unit_vector(rng, d) for _ in range(n_annihilate)]
                    worst = max(worst, jw_oracle.functional_check(state, phis, psis))
    return SuiteResult("wick_determinant", worst <= 1e-10, worst, 1e-10)


def _unit_vector(rng, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def suite_threshold_bound_domination(rng, cases: int = 500) -> SuiteResult:
    """exp(type I log error) <= (8 sum(q)/d)^(d/2) whenever the bound is < 1."""
    worst = -math.inf
    checked = 0
    for _ in range(cases):
        d = int(rng.integers(4, 65))
        q = rng.uniform(0.0, 1.0, size=d) * rng.uniform(0.0, 1.0)
        log_err = quasifree.type1_log_error(q)
        log_bound = quasifree.threshold_test_log_bound(float(np.sum(q)), d)
        if log_bound < 0.0:
            checked += 1
            worst = max(worst, log_err - log_bound)
    passed = checked > 0 and worst <= 0.0
    return SuiteResult(
        "threshold_bound_domination",
        passed,
        worst,
        0.0,
        detail=f"{checked} non-vacuous cases",
    )


def suite_fejer_margin(rng, cases: int = 50, n_values=(16, 64, 256, 1024)) -> SuiteResult:
    """Plateau deviation of the Cesaro mean stays below gamma_delta / n."""
    worst = 0.0  # measured as margin * n / gamma (<= 1 when respected)
    ok = True
    for _ in range(cases):
        s, w = random_plateau_setup(rng)
        lo, hi = w.shrunk_interval()
        grid = np.linspace(lo, hi, 101)
        for n in n_values:
            margin, respected = symbols.fejer_bound_margin(s, w, n, grid)
            ok = ok and respected
            worst = max(worst, margin * n / w.gamma_delta)
    return SuiteResult("fejer_margin", ok, worst, 1.0, detail="margin scaled by n/gamma")


def suite_dft_diagonal(rng, cases: int = 8, n_values=(1, 2, 3, 5, 8, 16, 64, 512)) -> SuiteResult:
    """Matrix-side diagonal entries equal Cesaro means at mode frequencies."""
    worst = 0.0
    for _ in range(cases):
        s = random_symbol(rng)
        for n in n_values:
            t = toeplitz.restrict(s, n)
            ks = np.arange(n)
            matrix_side = toeplitz.dft_diagonal_entries(t, ks)
            cesaro_side = symbols.cesaro_mean_grid(s, n, TWO_PI * ks / n)
            worst = max(worst, float(np.max(np.abs(matrix_side - cesaro_side))))
    return SuiteResult("dft_diagonal", worst <= 1e-10, worst, 1e-10)


def suite_window_rank_trace(rng, cases: int = 12, n_values=(32, 64, 128, 256)) -> SuiteResult:
    """Rank lower bound and the trace bound rank*gamma/n for flat-zero symbols."""
    worst = 0.0  # trace scaled by n / (rank * gamma)
    ok = True
    for _ in range(cases):
        s, w = random_plateau_setup(rng, plateau_value=0.0)
        for n in n_values:
            projection = toeplitz.window_projection(n, w)
            if projection.rank < projection.rank_lower_bound():
                ok = False
            comp = toeplitz.compress(toeplitz.restrict(s, n), projection)
            scaled = comp.trace * n / (projection.rank * w.gamma_delta)
            worst = max(worst, scaled)
            ok = ok and comp.trace <= projection.rank * w.gamma_delta / n
    return SuiteResult(
        "window_rank_trace", ok, worst, 1.0, detail="trace scaled by n/(rank*gamma)"
    )


def suite_cesaro_range(rng, cases: int = 25) -> SuiteResult:
    """Cesaro means of [0,1]-valued symbols stay in [-1e-12, 1+1e-12]."""
    worst = 0.0
    for _ in range(cases):
        s = random_symbol(rng)
        n = int(rng.integers(1, 257))
        xs = rng.uniform(0.0, TWO_PI, size=17)
        vals = symbols.cesaro_mean_grid(s, n, xs)
        worst = max(worst, float(np.max(np.maximum(-vals, vals - 1.0))))
    return SuiteResult("cesaro_range", worst <= 1e-12, worst, 1e-12)


def run_all(
    seed: int = 0,
    max_d: int = 8,
    instances: int = 100,
    perturb: bool = False,
) -> list[SuiteResult]:
    """Run every suite with a fresh deterministic generator each.

    `perturb` injects a deliberate 1e-8 offset into the dense type I error
    and must make the oracle suite fail; it exists to prove the harness can
    see a broken formula.
    """
    results = [
        suite_car_relations(max_d=min(max_d, 6)),
        suite_number_spectrum(max_d=min(max_d, 6)),
        suite_oracle_error_probs(
            np.random.default_rng(seed + 1),
            max_d=max_d,
            instances=instances,
            perturb=1e-8 if perturb else 0.0,
        ),
        suite_wick_determinant(np.random.default_rng(seed + 2), max_d=min(max_d, 8)),
        suite_threshold_bound_domination(np.random.default_rng(seed + 3)),
        suite_fejer_margin(np.random.default_rng(seed + 4)),
        suite_dft_diagonal(np.random.default_rng(seed + 5)),
        suite_window_rank_trace(np.random.default_rng(seed + 6)),
        suite_cesaro_range(np.random.default_rng(seed + 7)),
    ]
    return results
