"""Gradient-descent search for algebra representations from structure constants.

The objective is the L1 magnitude of bracket-relation violation across all
generator pairs, multiplied by a norm penalty that repels the all-zero
solution.  Optimization runs Adam with an exponentially decaying learning
rate on plateaus and random restarts until the loss drops below target.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import StructureConstants, validate
from .errors import DomainError
from .numerics import AdamState, adam_step
from .reps import AlgebraRep

PENALTY_CEILING = 1e12


@dataclass
class LearnRepConfig:
    algebra: StructureConstants
    rep_dim: int
    field: str = "real"
    initial_lr: float = 0.1
    loss_target: float = 1e-9
    restart_lr_loss_ratio: float = 1e-4
    max_restarts: int = 10
    max_iters: int = 50_000
    plateau_window: int = 200
    plateau_improvement: float = 0.01
    lr_decay: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.rep_dim < 1:
            raise DomainError("rep_dim must be >= 1")
        if self.loss_target <= 0:
            raise DomainError("loss_target must be positive")
        if self.field not in ("real", "complex"):
            raise DomainError(f"field must be 'real' or 'complex', got {self.field!r}")


@dataclass
class LearnRepRun:
    generators: np.ndarray  # (t, n, n) complex, best found
    converged: bool
    final_loss: float
    restarts: int
    trace: list[tuple[int, float, float]]  # (iteration, loss, penalty factor)
    rejected: int = 0  # converged attempts discarded by the acceptance callback
    wall_clock: float = 0.0

    def as_rep(self, config: LearnRepConfig) -> AlgebraRep:
        """Wrap the generators, with a closure tolerance implied by the loss bound.

        Penalty >= 1 means each pair's L1 residual is bounded by the total loss;
        1e-4 * sqrt(loss_target) is the documented (looser) certificate.
        """
        tol = max(1e-4 * np.sqrt(config.loss_target), self.final_loss * 1.01 + 1e-15)
        label = f"learned-{self.generators.shape[1]}d"
        return AlgebraRep(config.algebra, self.generators, field=config.field,
                          label=label, tol=tol)


def loss(generators: np.ndarray, sc: StructureConstants) -> tuple[float, float, float]:
    """Eq-style objective: (total, penalty factor, raw violation).

    violation = sum_{i<j} |[T_i, T_j] - sum_k A_ijk T_k|_1 with entrywise
    complex modulus; penalty = max(1, max_i |T_i|_F^-2) clamped at 1e12.
    """
    gens = np.asarray(generators, dtype=np.complex128)
    _check_shapes(gens, sc)
    resid = _residuals(gens, sc.a)
    iu = np.triu_indices(gens.shape[0], k=1)
    violation = float(np.abs(resid[iu]).sum())
    penalty = _penalty(gens)
    return penalty * violation, penalty, violation


def loss_grad(generators: np.ndarray, sc: StructureConstants) -> np.ndarray:
    """Subgradient of the objective w.r.t. each generator entry.

    Returned complex array G packs d/dRe + i d/dIm.  L1 terms use sign(0) = 0;
    the penalty clamp contributes only on its active branch.
    """
    gens = np.asarray(generators, dtype=np.complex128)
    _check_shapes(gens, sc)
    t = gens.shape[0]
    resid = _residuals(gens, sc.a)
    mags = np.abs(resid)
    iu = np.triu_indices(t, k=1)
    violation = float(mags[iu].sum())
    penalty = _penalty(gens)

    # Phase matrix of each upper-triangle residual; zero where the entry is zero.
    upper = np.zeros_like(resid)
    upper[iu] = resid[iu]
    upper_mags = np.zeros_like(mags)
    upper_mags[iu] = mags[iu]
    phase = np.divide(upper, upper_mags, out=np.zeros_like(upper), where=upper_mags > 0)
    h = phase.conj().transpose(0, 1, 3, 2)  # h[i, j] = phase_ij^dagger

    # d violation = Re tr(phase_ij^dagger dR_ij) summed over pairs; collect the
    # left-multiplier M_m of dT_m, then G_m = M_m^dagger.
    m = np.einsum("jab,ijbc->iac", gens, h)
    m -= np.einsum("ijab,jbc->iac", h, gens)
    m += np.einsum("ijab,ibc->jac", h, gens)
    m -= np.einsum("iab,ijbc->jac", gens, h)
    m -= np.einsum("ijk,ijab->kab", sc.a, h)
    grad_violation = m.conj().transpose(0, 2, 1)

    grad = penalty * grad_violation
    norms_sq = np.einsum("iab,iab->i", gens.conj(), gens).real
    w = int(np.argmin(norms_sq))
    if norms_sq[w] < 1.0 and 1.0 / max(norms_sq[w], 1.0 / PENALTY_CEILING) < PENALTY_CEILING:
        # Penalty branch 1/|T_w|_F^2 is active and unclamped: product rule.
        grad[w] += violation * (-2.0 / norms_sq[w] ** 2) * gens[w]
    return grad


def _check_shapes(gens: np.ndarray, sc: StructureConstants) -> None:
    if gens.ndim != 3 or gens.shape[1] != gens.shape[2]:
        raise DomainError(f"generators must be (t, n, n), got {gens.shape}")
    if gens.shape[0] != sc.dim:
        raise DomainError(f"{gens.shape[0]} generators for algebra of dimension {sc.dim}")


def _residuals(gens: np.ndarray, a: np.ndarray) -> np.ndarray:
    prod = np.einsum("iab,jbc->ijac", gens, gens)
    comm = prod - prod.transpose(1, 0, 2, 3)
    return comm - np.einsum("ijk,kab->ijab", a, gens)


def _penalty(gens: np.ndarray) -> float:
    norms_sq = np.einsum("iab,iab->i", gens.conj(), gens).real
    smallest = float(norms_sq.min())
    if smallest >= 1.0:
        return 1.0
    return float(min(1.0 / max(smallest, 1.0 / PENALTY_CEILING), PENALTY_CEILING))


def _pack(gens: np.ndarray, field: str) -> np.ndarray:
    if field == "real":
        return gens.real.ravel().copy()
    return np.concatenate([gens.real.ravel(), gens.imag.ravel()])


def _unpack(params: np.ndarray, t: int, n: int, field: str) -> np.ndarray:
    if field == "real":
        return params.reshape(t, n, n).astype(np.complex128)
    half = t * n * n
    return (params[:half] + 1j * params[half:]).reshape(t, n, n)


def _grad_pack(grad: np.ndarray, field: str) -> np.ndarray:
    if field == "real":
        return grad.real.ravel().copy()
    return np.concatenate([grad.real.ravel(), grad.imag.ravel()])


def run(config: LearnRepConfig,
        accept: Callable[[AlgebraRep], bool] | None = None) -> LearnRepRun:
    """Optimize until loss < loss_target, restarting on decayed-lr plateaus.

    Deterministic given the seed: restart r draws its init from seed + r.
    When `accept` is given, a converged attempt it rejects (e.g. the tensor
    structure reveals a reducible representation) also triggers a restart.
    Returns the best attempt with converged=False when the budget is exhausted.
    """
    report = validate(config.algebra)
    if report:
        raise DomainError(f"invalid structure constants: {[str(v) for v in report]}")
    started = time.perf_counter()
    t, n = config.algebra.dim, config.rep_dim

    rejected = 0
    best: LearnRepRun | None = None
    for restart in range(max(config.max_restarts, 0) + 1):
        rng = np.random.default_rng(config.seed + restart)
        if config.field == "real":
            params = rng.standard_normal(t * n * n)
        else:
            params = rng.standard_normal(2 * t * n * n)
        adam = AdamState(lr=config.initial_lr)
        lr = config.initial_lr
        trace: list[tuple[int, float, float]] = []
        window_ref = np.inf
        converged = False

        gens = _unpack(params, t, n, config.field)
        for it in range(config.max_iters):
            total, penalty, _ = loss(gens, config.algebra)
            trace.append((it, total, penalty))
            if total < config.loss_target:
                converged = True
                break
            if it > 0 and it % config.plateau_window == 0:
                if not np.isfinite(window_ref):
                    improvement = 1.0
                else:
                    improvement = (window_ref - total) / window_ref if window_ref > 0 else 0.0
                if improvement < config.plateau_improvement:
                    lr *= config.lr_decay
                    adam.lr = lr
                    if lr < total * config.restart_lr_loss_ratio:
                        break  # stuck: learning rate collapsed far below the loss
                window_ref = total
            grad = loss_grad(gens, config.algebra)
            params = adam_step(adam, params, _grad_pack(grad, config.field))
            gens = _unpack(params, t, n, config.field)

        final = trace[-1][1]
        attempt = LearnRepRun(gens, converged, final, restart, trace)
        if attempt.converged and accept is not None and not accept(attempt.as_rep(config)):
            rejected += 1
            attempt.converged = False
        if best is None or (attempt.converged and not best.converged) or (
            attempt.converged == best.converged and attempt.final_loss < best.final_loss
        ):
            best = attempt
        if best.converged:
            break
        restarts_done = restart

    if not best.converged:
        best.restarts = restarts_done
    best.rejected = rejected
    best.wall_clock = time.perf_counter() - started
    return best
