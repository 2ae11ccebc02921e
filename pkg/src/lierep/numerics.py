"""Shared numerical kernels: matrix exponential, SVD nullspace extraction, Adam.

Matrices are plain complex128 numpy arrays throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericalError

# Taylor order to use once the scaled norm falls below each threshold.
_ORDER_TABLE = ((1e-9, 2), (1e-5, 4), (1e-2, 8), (0.5, 18))
_THETA = 0.5


def expm(m: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with a truncated Taylor series.

    Squaring count and series order are picked from the 1-norm of the input;
    accuracy is ~1e-12 relative for spectral norms up to ~50.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expm needs a square matrix, got shape {m.shape}")
    a = m.astype(np.complex128)
    n = a.shape[0]
    norm = float(np.linalg.norm(a, 1))
    if not np.isfinite(norm):
        raise NumericalError("expm input contains non-finite entries")

    squarings = 0 if norm <= _THETA else int(np.ceil(np.log2(norm / _THETA)))
    a = a / (2.0 ** squarings)
    scaled_norm = norm / (2.0 ** squarings)
    order = next(k for bound, k in _ORDER_TABLE if scaled_norm <= bound)

    # Horner form of I + A + A^2/2! + ... + A^order/order!
    eye = np.eye(n, dtype=np.complex128)
    result = eye.copy()
    for k in range(order, 0, -1):
        result = eye + (a @ result) / k
    for _ in range(squarings):
        result = result @ result
    if not np.all(np.isfinite(result)):
        raise NumericalError("expm overflowed; input norm too large")
    return result


def svd_values_and_nullspace(m: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Ascending singular values plus the k right-singular vectors of smallest ones.

    Returns ``(values, vectors)`` with ``vectors[i]`` the unit right-singular
    vector belonging to the i-th smallest singular value.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.size == 0:
        raise DomainError(f"need a nonempty 2-d matrix, got shape {m.shape}")
    if not 0 <= k <= m.shape[1]:
        raise DomainError(f"k={k} out of range for {m.shape[1]} columns")
    try:
        _, svals, vh = np.linalg.svd(m, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed to converge: {exc}") from exc
    # Right-singular vectors are the conjugated rows of vh (A v = s u needs
    # columns of V, and vh = V^H); rows beyond min(rows, cols) span an exact
    # nullspace.  Reversing puts the smallest-singular-value directions first.
    return svals[::-1].copy(), vh[::-1][:k].conj()


@dataclass
class AdamState:
    """Single-owner mutable Adam accumulator over a flat real parameter vector."""

    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step_count: int = 0
    m: np.ndarray | None = field(default=None, repr=False)
    v: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise DomainError("Adam betas must lie in [0, 1)")
        if self.lr <= 0.0:
            raise DomainError("learning rate must be positive")


def adam_step(state: AdamState, params: np.ndarray, grads: np.ndarray) -> np.ndarray:
    """One Adam update with bias correction; mutates state, returns new params."""
    params = np.asarray(params, dtype=float)
    grads = np.asarray(grads, dtype=float)
    if params.shape != grads.shape:
        raise DomainError(f"shape mismatch: params {params.shape} vs grads {grads.shape}")
    if state.m is None:
        state.m = np.zeros_like(params)
        state.v = np.zeros_like(params)
    state.step_count += 1
    t = state.step_count
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * grads
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * grads * grads
    m_hat = state.m / (1.0 - state.beta1 ** t)
    v_hat = state.v / (1.0 - state.beta2 ** t)
    return params - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
