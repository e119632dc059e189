"""Dense brute-force oracle for small mode counts (d <= 12).

Materializes fermionic ladder operators as 2^d x 2^d matrices through the
Jordan-Wigner encoding

    a_j^dag  =  sz (x) ... (x) sz (x) [[0,0],[1,0]] (x) I (x) ... (x) I
                '---- j-1 ----'

(qubit basis |0>, |1> per site, site 1 leftmost in the Kronecker product),
builds quasi-free density matrices explicitly from an occupation symbol,
and evaluates the number-threshold test by direct traces.  Nothing here is
meant to be fast in d; its purpose is to certify the analytic formulas the
fast path relies on, by independent dense arithmetic.

Conventions.  The map phi -> a(phi) is complex anti-linear, so for a
single-particle vector phi the annihilator is a(phi) = sum_i conj(phi_i) a_i
and its adjoint the creator c(phi) = sum_i phi_i a_i^dag.  With these
conventions the two-point function of the state with symbol Q satisfies
Tr rho a(phi)^dag a(psi) = <psi|Q phi>, which functional_check pins down
against the determinant (Wick) formula.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailure, ValidationError
from .toeplitz import hermitian_occupations

MAX_MODES = 12  # 2^12-dimensional dense matrices; beyond this the oracle has no purpose

_BLOCKED_MIN_D = 8  # below this the plain dense product chain is just as cheap

_ops_cache: dict[int, "DenseFermionOps"] = {}
_sector_cache: dict[int, list[np.ndarray]] = {}
_ann_block_cache: dict[int, list[list[np.ndarray]]] = {}
_number_diag_cache: dict[int, np.ndarray] = {}


@dataclass(frozen=True, eq=False)
class DenseFermionOps:
    """Jordan-Wigner creation operators for d modes, dense."""

    d: int
    creation_ops: tuple[np.ndarray, ...]


def build_ops(d: int) -> DenseFermionOps:
    """Dense ladder operators for d modes (cached per d)."""
    if not 1 <= d <= MAX_MODES:
        raise ValidationError(f"mode count d={d} outside 1..{MAX_MODES}")
    if d in _ops_cache:
        return _ops_cache[d]
    sz = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    raiser = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
    eye2 = np.eye(2, dtype=complex)
    ops = []
    for j in range(d):
        factors = [sz] * j + [raiser] + [eye2] * (d - j - 1)
        m = factors[0]
        for f in factors[1:]:
            m = np.kron(m, f)
        ops.append(m)
    result = DenseFermionOps(d=d, creation_ops=tuple(ops))
    _ops_cache[d] = result
    return result


def sector_indices(d: int) -> list[np.ndarray]:
    """Basis indices grouped by particle number 0..d."""
    if d not in _sector_cache:
        pop = np.array([int(x).bit_count() for x in range(2**d)])
        _sector_cache[d] = [np.nonzero(pop == k)[0] for k in range(d + 1)]
    return _sector_cache[d]


def number_operator(ops: DenseFermionOps) -> np.ndarray:
    """N = sum_j a_j^dag a_j as a dense matrix product."""
    d = ops.d
    dim = 2**d
    n = np.zeros((dim, dim), dtype=complex)
    for c in ops.creation_ops:
        n += c @ c.conj().T
    return n


def _number_diagonal(ops: DenseFermionOps) -> np.ndarray:
    """Integer diagonal of N, verified to be exactly diagonal."""
    d = ops.d
    if d in _number_diag_cache:
        return _number_diag_cache[d]
    n = number_operator(ops)
    off = n - np.diag(np.diag(n))
    if np.max(np.abs(off)) != 0.0:
        raise NumericalFailure("number operator is not diagonal in the qubit basis")
    diag = np.rint(np.diag(n).real).astype(int)
    _number_diag_cache[d] = diag
    return diag


def _annihilator_blocks(d: int) -> list[list[np.ndarray]]:
    """Per mode i, the sector-(k -> k-1) blocks of a_i for k = 1..d."""
    if d not in _ann_block_cache:
        ops = build_ops(d)
        idx = sector_indices(d)
        blocks = []
        for c in ops.creation_ops:
            a = c.conj().T
            blocks.append(
                [a[np.ix_(idx[k - 1], idx[k])] for k in range(1, d + 1)]
            )
        _ann_block_cache[d] = blocks
    return _ann_block_cache[d]


@dataclass(frozen=True, eq=False)
class DenseQuasifreeState:
    """Explicit density matrix of a quasi-free state on d modes."""

    d: int
    density: np.ndarray
    occupations: np.ndarray
    symbol_matrix: np.ndarray


def _state_plain(ops: DenseFermionOps, q: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    d = ops.d
    dim = 2**d
    rho = np.eye(dim, dtype=complex)
    for j in range(d):
        bdag = sum(vecs[i, j] * ops.creation_ops[i] for i in range(d))
        b = bdag.conj().T
        rho = rho @ (q[j] * (bdag @ b) + (1.0 - q[j]) * (b @ bdag))
    return rho


def _state_blocked(d: int, q: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    # Same left-to-right factor product as _state_plain, evaluated per
    # particle-number sector: each factor has exactly zero entries between
    # sectors (ladder blocks are exact), so the block evaluation is the
    # identical floating-point computation reorganized for BLAS.
    idx = sector_indices(d)
    ann = _annihilator_blocks(d)
    dim = 2**d
    rho = np.zeros((dim, dim), dtype=complex)
    for k in range(d + 1):
        rows = idx[k]
        x = np.eye(len(rows), dtype=complex)
        for j in range(d):
            if k == 0:
                x = x * float(np.prod(1.0 - q))
                break
            blk = sum(np.conj(vecs[i, j]) * ann[i][k - 1] for i in range(d))
            proj = (x @ blk.conj().T) @ blk
            x = (1.0 - q[j]) * x + (2.0 * q[j] - 1.0) * proj
        rho[np.ix_(rows, rows)] = x
    return rho


def dense_state(symbol_matrix: np.ndarray, method: str = "auto") -> DenseQuasifreeState:
    """Density matrix prod_j (q_j b_j^dag b_j + (1-q_j) b_j b_j^dag).

    symbol_matrix is a d x d Hermitian matrix with spectrum in [0, 1]; the
    rotated ladder operators b_j are built from its eigenbasis.  method
    selects the plain product chain or the sector-blocked evaluation
    ("auto" picks blocked once the chain would dominate the cost).
    """
    m = np.asarray(symbol_matrix, dtype=complex)
    if m.ndim != 2 or not 1 <= m.shape[0] <= MAX_MODES:
        raise ValidationError(f"symbol matrix must be d x d with d in 1..{MAX_MODES}")
    spectrum = hermitian_occupations(m)
    d = m.shape[0]
    _, vecs = np.linalg.eigh((m + m.conj().T) / 2.0)
    q = spectrum.values
    if method == "auto":
        method = "blocked" if d >= _BLOCKED_MIN_D else "plain"
    if method == "plain":
        rho = _state_plain(build_ops(d), q, vecs)
    elif method == "blocked":
        build_ops(d)  # validates d and warms the operator cache
        rho = _state_blocked(d, q, vecs)
    else:
        raise ValidationError(f"unknown construction method {method!r}")
    trace = float(np.trace(rho).real)
    if abs(trace - 1.0) > 1e-12:
        raise NumericalFailure(f"density trace {trace!r} is not 1")
    return DenseQuasifreeState(
        d=d, density=rho, occupations=q, symbol_matrix=m
    )


def functional_check(state: DenseQuasifreeState, phis, psis) -> float:
    """|Tr rho c(phi_1)..c(phi_n) a(psi_m)..a(psi_1) - delta_mn det(<psi_i|Q phi_j>)|.

    Mismatched list lengths must give zero on the determinant side, so this
    also exercises gauge invariance of the constructed density.
    """
    d = state.d
    phis = [np.asarray(p, dtype=complex) for p in phis]
    psis = [np.asarray(p, dtype=complex) for p in psis]
    if any(p.shape != (d,) for p in phis + psis):
        raise ValidationError("vectors must have length d")
    ops = build_ops(d)
    dim = 2**d
    op = np.eye(dim, dtype=complex)
    for phi in phis:
        creator = sum(phi[i] * ops.creation_ops[i] for i in range(d))
        op = op @ creator
    for psi in reversed(psis):
        annihilator = sum(
            np.conj(psi[i]) * ops.creation_ops[i].conj().T for i in range(d)
        )
        op = op @ annihilator
    lhs = complex(np.trace(state.density @ op))
    if len(phis) == len(psis) and phis:
        gram = np.array(
            [[np.vdot(psi, state.symbol_matrix @ phi) for phi in phis] for psi in psis]
        )
        rhs = complex(np.linalg.det(gram))
    elif not phis and not psis:
        rhs = 1.0 + 0.0j
    else:
        rhs = 0.0 + 0.0j
    return abs(lhs - rhs)


def dense_error_probs(
    q_state: DenseQuasifreeState, r_state: DenseQuasifreeState
) -> tuple[float, float]:
    """(type I, type II) errors of the number-threshold test, linear domain.

    The accept projection sums the spectral projections of the dense number
    operator up to floor(d/2); errors are direct traces against the two
    densities.
    """
    if q_state.d != r_state.d:
        raise ValidationError("states live on different mode counts")
    d = q_state.d
    counts = _number_diagonal(build_ops(d))
    accept = (counts <= d // 2).astype(float)
    alpha = float(np.real(np.sum(np.diag(q_state.density) * (1.0 - accept))))
    beta = float(np.real(np.sum(np.diag(r_state.density) * accept)))
    return alpha, beta
