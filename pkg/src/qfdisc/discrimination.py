"""End-to-end sweep: exact log errors, trace bounds, and exponent fits.

For a scenario (symbol q flat 0 and symbol r flat 1 on a common window)
each chain length n is processed as

    window modes -> compressions of Q_n and of I - R_n -> occupations
    -> Poisson-binomial tails -> exact log errors and error exponents,

with the trace-only bounds computed alongside from the compression
diagonals (never from eigenvalues).  The type II tail is evaluated through
the complement compression I - R_n: its small eigenvalues carry the
information that occupations of R_n near 1 lose to rounding, and
P_r(N <= t) = P_{1-r}(N >= d-t) exactly.

A sweep fits the slope of exponent vs log n over the largest half of the
n grid and reports, separately, a certified per-n envelope
min exponent/log n; the fit is a description, the envelope a guarantee.
"""

from __future__ import annotations

import concurrent.futures
import csv
import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from .errors import ValidationError
from .quasifree import (
    NEG_INF,
    log_prob_greater,
    poisson_binomial,
    threshold_test_log_bound,
)
from .symbols import FejerWindow, Symbol, evaluate, parse_angle
from .toeplitz import CompressedSymbol, compress, restrict, window_projection

#: Column order of the per-n CSV report (fixed interface).
CSV_COLUMNS = (
    "n",
    "rank",
    "trace_q",
    "trace_r_def",
    "log_alpha",
    "log_beta",
    "exact_exp_alpha",
    "exact_exp_beta",
    "bound_exp_alpha",
    "bound_exp_beta",
    "confidence",
)

_CONTRIBUTION_TOL = 1e-6
_PLATEAU_GRID = 257


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    """A discrimination scenario: two symbols, one window, a grid of n."""

    symbol_q: Symbol
    symbol_r: Symbol
    window: FejerWindow
    n_values: tuple[int, ...]
    label: str = "scenario"
    bound_only: bool = False


def validate_scenario(cfg: ScenarioConfig) -> None:
    """Check the scenario preconditions, naming the violated one."""
    w = cfg.window
    if not cfg.symbol_q.is_constant_on(0.0, w.alpha, w.omega):
        raise ValidationError(
            f"symbol_q ({cfg.symbol_q.label!r}) must be constant 0 on the "
            f"window [{w.alpha}, {w.omega}]"
        )
    if not cfg.symbol_r.is_constant_on(1.0, w.alpha, w.omega):
        raise ValidationError(
            f"symbol_r ({cfg.symbol_r.label!r}) must be constant 1 on the "
            f"window [{w.alpha}, {w.omega}]"
        )
    # dense-grid spot check of the same plateaus, guarding segment bookkeeping
    half_gap = (w.omega - w.alpha) / (2 * _PLATEAU_GRID)
    grid = np.linspace(w.alpha + half_gap, w.omega - half_gap, _PLATEAU_GRID)
    for x in grid:
        if evaluate(cfg.symbol_q, float(x)) != 0.0:
            raise ValidationError(f"symbol_q is not 0 at sampled angle {x}")
        if evaluate(cfg.symbol_r, float(x)) != 1.0:
            raise ValidationError(f"symbol_r is not 1 at sampled angle {x}")
    if not cfg.n_values:
        raise ValidationError("n_values must be non-empty")
    if list(cfg.n_values) != sorted(set(cfg.n_values)):
        raise ValidationError("n_values must be strictly increasing")
    for n in cfg.n_values:
        window_projection(n, w)  # raises WindowTooNarrowError with the fix


@dataclass
class PointReport:
    """Per-n record of exact errors, bounds, and confidence."""

    n: int
    rank: int
    trace_q: float
    trace_r_def: float
    log_alpha: float
    log_beta: float
    exact_exp_alpha: float
    exact_exp_beta: float
    bound_exp_alpha: float
    bound_exp_beta: float
    confidence: str
    floored_modes_q: int = 0
    floored_modes_r: int = 0
    vacuous_alpha: bool = False
    vacuous_beta: bool = False

    def csv_row(self) -> list:
        return [getattr(self, name) for name in CSV_COLUMNS]


def _tail_log_error(comp: CompressedSymbol, k_strictly_above: int) -> float:
    return log_prob_greater(poisson_binomial(comp.occupations), k_strictly_above)


def _floored_shift(comp: CompressedSymbol, k_strictly_above: int, baseline: float) -> bool:
    """True when the below-floor modes move the tail by more than the tolerance.

    The comparison point sets every flagged occupation to exact 0, the value
    it is numerically indistinguishable from.
    """
    if not np.any(comp.below_floor):
        return False
    idealized = np.where(comp.below_floor, 0.0, comp.occupations)
    shifted = log_prob_greater(poisson_binomial(idealized), k_strictly_above)
    if baseline == shifted:
        return False
    if math.isinf(baseline) or math.isinf(shifted):
        return True
    return abs(baseline - shifted) > _CONTRIBUTION_TOL


def run_point(cfg: ScenarioConfig, n: int) -> PointReport:
    """Full pipeline at a single chain length."""
    projection = window_projection(n, cfg.window)
    d = projection.rank
    threshold = d // 2
    comp_q = compress(restrict(cfg.symbol_q, n), projection)
    comp_def = compress(restrict(cfg.symbol_r.complement(), n), projection)
    trace_q = max(comp_q.trace, 0.0)
    trace_r_def = max(comp_def.trace, 0.0)

    bound_exp_alpha = -threshold_test_log_bound(trace_q, d) / n
    bound_exp_beta = -threshold_test_log_bound(trace_r_def, d) / n

    if cfg.bound_only:
        nan = float("nan")
        return PointReport(
            n=n,
            rank=d,
            trace_q=trace_q,
            trace_r_def=trace_r_def,
            log_alpha=nan,
            log_beta=nan,
            exact_exp_alpha=nan,
            exact_exp_beta=nan,
            bound_exp_alpha=bound_exp_alpha,
            bound_exp_beta=bound_exp_beta,
            confidence="bound_only",
            vacuous_alpha=bound_exp_alpha <= 0.0,
            vacuous_beta=bound_exp_beta <= 0.0,
        )

    log_alpha = _tail_log_error(comp_q, threshold)
    # type II via the complement: P_r(N <= t) = P_{1-r}(N >= d - t)
    log_beta = _tail_log_error(comp_def, d - threshold - 1)

    low_q = _floored_shift(comp_q, threshold, log_alpha)
    low_r = _floored_shift(comp_def, d - threshold - 1, log_beta)

    return PointReport(
        n=n,
        rank=d,
        trace_q=trace_q,
        trace_r_def=trace_r_def,
        log_alpha=log_alpha,
        log_beta=log_beta,
        exact_exp_alpha=-log_alpha / n if log_alpha != NEG_INF else math.inf,
        exact_exp_beta=-log_beta / n if log_beta != NEG_INF else math.inf,
        bound_exp_alpha=bound_exp_alpha,
        bound_exp_beta=bound_exp_beta,
        confidence="high" if not (low_q or low_r) else "low",
        floored_modes_q=int(np.sum(comp_q.below_floor)),
        floored_modes_r=int(np.sum(comp_def.below_floor)),
        vacuous_alpha=bound_exp_alpha <= 0.0,
        vacuous_beta=bound_exp_beta <= 0.0,
    )


@dataclass
class ExponentFit:
    """Fitted slope and certified envelope of one exponent sequence."""

    fitted_slope: float
    certified_envelope: float
    strictly_increasing: bool
    fit_n_values: tuple[int, ...]


@dataclass
class SweepResult:
    scenario: ScenarioConfig
    rows: list[PointReport]
    alpha_fit: ExponentFit
    beta_fit: ExponentFit
    superexponential_observed: bool


def _fit_exponents(ns, exponents) -> ExponentFit:
    ns = list(ns)
    exps = list(exponents)
    increasing = all(a < b for a, b in zip(exps, exps[1:]))
    envelope = min(e / math.log(n) for n, e in zip(ns, exps) if n > 1)
    finite = [(n, e) for n, e in zip(ns, exps) if math.isfinite(e)]
    if len(finite) >= 2:
        xs = np.log([n for n, _ in finite])
        ys = np.array([e for _, e in finite])
        slope = float(np.polyfit(xs, ys, 1)[0])
    else:
        slope = float("nan")
    return ExponentFit(
        fitted_slope=slope,
        certified_envelope=envelope,
        strictly_increasing=increasing,
        fit_n_values=tuple(ns),
    )


def run_sweep(cfg: ScenarioConfig, jobs: int = 1) -> SweepResult:
    """Run every n in the scenario and fit the exponent growth.

    Points are independent work items; with jobs > 1 they run in a process
    pool.  Assembly is ordered by n, so the result is identical for any
    scheduling.
    """
    validate_scenario(cfg)
    if len(cfg.n_values) < 3:
        raise ValidationError("exponent fitting needs at least 3 chain lengths")
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run_point, [cfg] * len(cfg.n_values), cfg.n_values))
    else:
        rows = [run_point(cfg, n) for n in cfg.n_values]
    rows.sort(key=lambda r: r.n)
    tail = rows[len(rows) // 2:]
    alpha_fit = _fit_exponents(
        [r.n for r in tail], [r.exact_exp_alpha for r in tail]
    )
    beta_fit = _fit_exponents(
        [r.n for r in tail], [r.exact_exp_beta for r in tail]
    )
    observed = (
        alpha_fit.strictly_increasing
        and beta_fit.strictly_increasing
        and alpha_fit.certified_envelope > 0.0
        and beta_fit.certified_envelope > 0.0
    )
    return SweepResult(
        scenario=cfg,
        rows=rows,
        alpha_fit=alpha_fit,
        beta_fit=beta_fit,
        superexponential_observed=observed,
    )


# --------------------------------------------------------------------------
# serialization: scenario dicts, CSV rows, JSON summaries
# --------------------------------------------------------------------------

def _angle_to_json(value: float, frac) -> str | float:
    if frac is None:
        return value
    if frac == 0:
        return "0"
    if frac.denominator == 1:
        return f"{frac.numerator}pi" if frac.numerator != 1 else "pi"
    num = "" if frac.numerator == 1 else str(frac.numerator)
    return f"{num}pi/{frac.denominator}"


def scenario_to_dict(cfg: ScenarioConfig) -> dict:
    def symbol_dict(s: Symbol) -> dict:
        return {
            "label": s.label,
            "segments": [
                {
                    "start": _angle_to_json(g.start, g.start_frac),
                    "end": _angle_to_json(g.end, g.end_frac),
                    "value": g.value,
                }
                for g in s.segments
            ],
        }

    w = cfg.window
    return {
        "label": cfg.label,
        "symbol_q": symbol_dict(cfg.symbol_q),
        "symbol_r": symbol_dict(cfg.symbol_r),
        "window": {
            "alpha": _angle_to_json(w.alpha, w.alpha_frac),
            "omega": _angle_to_json(w.omega, w.omega_frac),
            "delta": _angle_to_json(w.delta, w.delta_frac),
        },
        "n_values": list(cfg.n_values),
        "bound_only": cfg.bound_only,
    }


def scenario_from_dict(data: dict) -> ScenarioConfig:
    """Build a scenario from the documented config mapping.

    See configs/scenario.schema.json for the accepted shape.  Raises
    ValidationError naming the offending key.
    """
    if not isinstance(data, dict):
        raise ValidationError("config must be a JSON object")

    def need(key):
        if key not in data:
            raise ValidationError(f"config is missing required key {key!r}")
        return data[key]

    def parse_symbol(key) -> Symbol:
        raw = need(key)
        if not isinstance(raw, dict) or "segments" not in raw:
            raise ValidationError(f"{key} must be an object with a 'segments' list")
        pieces = []
        for i, seg in enumerate(raw["segments"]):
            try:
                pieces.append((seg["start"], seg["end"], float(seg["value"])))
            except (KeyError, TypeError, ValueError) as exc:
                raise ValidationError(f"{key}.segments[{i}] is malformed: {exc}") from None
        try:
            return Symbol.from_segments(pieces, label=str(raw.get("label", key)))
        except ValidationError as exc:
            raise ValidationError(f"{key}: {exc}") from None

    symbol_q = parse_symbol("symbol_q")
    symbol_r = parse_symbol("symbol_r")
    raw_w = need("window")
    if not isinstance(raw_w, dict):
        raise ValidationError("window must be an object")
    try:
        alpha = raw_w["alpha"]
        omega = raw_w["omega"]
    except KeyError as exc:
        raise ValidationError(f"window is missing {exc}") from None
    if "delta" in raw_w:
        delta = raw_w["delta"]
    else:
        # default margin: an eighth of the window width
        a, af = parse_angle(alpha)
        o, of = parse_angle(omega)
        if af is not None and of is not None:
            delta = (of - af) / 8
        else:
            delta = (o - a) / 8
    window = FejerWindow.from_angles(alpha, omega, delta, plateau_value=0.0)
    raw_ns = need("n_values")
    if not isinstance(raw_ns, list) or not all(
        isinstance(n, int) and n >= 1 for n in raw_ns
    ):
        raise ValidationError("n_values must be a list of positive integers")
    return ScenarioConfig(
        symbol_q=symbol_q,
        symbol_r=symbol_r,
        window=window,
        n_values=tuple(raw_ns),
        label=str(data.get("label", "scenario")),
        bound_only=bool(data.get("bound_only", False)),
    )


def json_safe(value):
    """Recursively replace non-finite floats with strings for strict JSON."""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if value == math.inf:
            return "inf"
        if value == -math.inf:
            return "-inf"
        return value
    if isinstance(value, dict):
        return {k: json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_safe(v) for v in value]
    return value


def write_csv(rows, path, meta: dict | None = None) -> None:
    """One row per n in the fixed column order, with a '#' metadata line."""
    with open(path, "w", newline="") as handle:
        if meta:
            pairs = " ".join(f"{k}={v}" for k, v in sorted(meta.items()))
            handle.write(f"# {pairs}\n")
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(row.csv_row())


def sweep_summary(result: SweepResult, meta: dict | None = None) -> dict:
    """JSON-ready summary: scenario echo, fits, envelopes, verdict, rows."""
    summary = {
        "scenario": scenario_to_dict(result.scenario),
        "alpha": asdict(result.alpha_fit),
        "beta": asdict(result.beta_fit),
        "superexponential_observed": result.superexponential_observed,
        "vacuous_rows": {
            "alpha": [r.n for r in result.rows if r.vacuous_alpha],
            "beta": [r.n for r in result.rows if r.vacuous_beta],
        },
        "rows": [asdict(r) for r in result.rows],
    }
    if meta:
        summary.update(meta)
    return json_safe(summary)


def write_json(summary: dict, path) -> None:
    with open(path, "w") as handle:
        json.dump(summary, handle, indent=2, sort_keys=True)
        handle.write("\n")
