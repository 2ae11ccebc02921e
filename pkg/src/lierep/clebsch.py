"""Clebsch-Gordan constraint matrices, the singular-value diagnostic, and Schur tests.

For representations rho1, rho2, rho3 of one algebra, the intertwiners
C (rho1 x rho2)(alpha) = rho3(alpha) C over sampled group elements alpha form
the nullspace of a stacked constraint matrix.  The ratio of the two smallest
singular values separates one-dimensional nullspaces (divergent ratio) from
everything else; it is the workhorse for isomorphism and irreducibility checks.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra import StructureConstants
from .errors import DomainError, NumericalError
from .numerics import expm, svd_values_and_nullspace
from .reps import AlgebraRep, rep_so21, rep_so31, spin_rep_so3, trivial_rep

DEFAULT_COUNT = 8
DEFAULT_SCALE = 0.5
DIVERGENT_R = 1e4
NONDIVERGENT_R = 1e2
NULLSPACE_RTOL = 1e-4
HELDOUT_RTOL = 1e-6
MAX_RESAMPLES = 3


@dataclass
class GroupElement:
    """exp(sum_i b_i T_i) for one coefficient vector b."""

    coefficients: np.ndarray
    matrix: np.ndarray


@dataclass
class CGSolution:
    shape: tuple[int, int]
    singular_values: np.ndarray  # ascending
    ratio: float                 # SV_2 / SV_1
    nullspace: np.ndarray        # (d, n3, n1*n2) coefficient matrices
    count: int
    seed: int
    heldout_residual: float      # worst |C rho12 - rho3 C|_F / |C|_F over held-out elements

    @property
    def nullspace_dim(self) -> int:
        return self.nullspace.shape[0]


def sample_coefficients(dim: int, count: int, scale: float, seed) -> np.ndarray:
    """Shared coefficient draws: (count, dim) i.i.d. normal(0, scale^2)."""
    if scale <= 0:
        raise DomainError("scale must be positive")
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, scale, size=(count, dim))


def group_element(rep: AlgebraRep, coefficients: np.ndarray) -> GroupElement:
    b = np.asarray(coefficients, dtype=float)
    if b.shape != (rep.algebra.dim,):
        raise DomainError(f"need {rep.algebra.dim} coefficients, got shape {b.shape}")
    mat = expm(np.einsum("i,iab->ab", b, rep.generators))
    return GroupElement(b, mat)


def sample_group_elements(rep: AlgebraRep, count: int, scale: float = DEFAULT_SCALE,
                          seed=0) -> list[GroupElement]:
    bs = sample_coefficients(rep.algebra.dim, count, scale, seed)
    return [group_element(rep, b) for b in bs]


def build_cg_constraints(pair_elements: list[GroupElement],
                         rho3_elements: list[GroupElement]) -> np.ndarray:
    """Stack per-element blocks of vec(C rho12 - rho3 C) = M vec(C).

    vec runs row-major over (output row of C, tensor-product column index).
    Both element lists must have been built from identical coefficient draws.
    """
    if len(pair_elements) != len(rho3_elements):
        raise DomainError("mismatched element counts")
    blocks = []
    for left, right in zip(pair_elements, rho3_elements):
        if not np.array_equal(left.coefficients, right.coefficients):
            raise DomainError("element lists are not aligned on the same coefficients")
        p = left.matrix   # (n1*n2, n1*n2)
        q = right.matrix  # (n3, n3)
        n12 = p.shape[0]
        n3 = q.shape[0]
        blocks.append(np.kron(np.eye(n3), p.T) - np.kron(q, np.eye(n12)))
    return np.concatenate(blocks, axis=0)


def _paired_elements(rep1: AlgebraRep, rep2: AlgebraRep, rep3: AlgebraRep,
                     bs: np.ndarray) -> tuple[list[GroupElement], list[GroupElement]]:
    pair, third = [], []
    for b in bs:
        g1 = group_element(rep1, b)
        g2 = group_element(rep2, b)
        pair.append(GroupElement(b, np.kron(g1.matrix, g2.matrix)))
        third.append(group_element(rep3, b))
    return pair, third


def _ratio(svals: np.ndarray) -> float:
    atol = 1e-12 * max(1.0, float(svals[-1]) if len(svals) else 1.0)
    if len(svals) < 2:
        return np.inf if (len(svals) == 0 or svals[0] <= atol) else 1.0
    if svals[1] <= atol:
        return 1.0  # nullspace dimension >= 2: the ratio carries no signal
    if svals[0] <= 0.0:
        return np.inf
    return float(svals[1] / svals[0])


def cg_solve(rep1: AlgebraRep, rep2: AlgebraRep, rep3: AlgebraRep,
             count: int = DEFAULT_COUNT, scale: float = DEFAULT_SCALE,
             seed=0) -> CGSolution:
    """Solve the homogeneous intertwiner program for C: rho1 x rho2 -> rho3.

    Nullspace vectors are validated against three held-out group elements; a
    violation of the residual bound raises NumericalError.
    """
    if not (rep1.algebra == rep2.algebra == rep3.algebra):
        raise DomainError("all three representations must share one algebra")
    t = rep1.algebra.dim
    bs = sample_coefficients(t, count, scale, np.random.SeedSequence((_seed_entropy(seed), 0)))
    pair, third = _paired_elements(rep1, rep2, rep3, bs)
    constraints = build_cg_constraints(pair, third)

    svals, _ = svd_values_and_nullspace(constraints, 0)
    sv_max = float(svals[-1]) if len(svals) else 0.0
    null_tol = max(1e-12, NULLSPACE_RTOL * sv_max)
    dim = int(np.searchsorted(svals, null_tol, side="right"))
    dim += max(0, constraints.shape[1] - len(svals))  # exact nullspace when cols > rows
    _, vecs = svd_values_and_nullspace(constraints, dim)

    n3 = rep3.dim
    basis = vecs.reshape(dim, n3, rep1.dim * rep2.dim) if dim else np.zeros(
        (0, n3, rep1.dim * rep2.dim), dtype=np.complex128)

    heldout = 0.0
    if dim:
        held_bs = sample_coefficients(t, 3, scale, np.random.SeedSequence((_seed_entropy(seed), 1)))
        held_pair, held_third = _paired_elements(rep1, rep2, rep3, held_bs)
        for c in basis:
            c_norm = float(np.linalg.norm(c))
            for left, right in zip(held_pair, held_third):
                resid = float(np.linalg.norm(c @ left.matrix - right.matrix @ c))
                heldout = max(heldout, resid / c_norm)
        if heldout > HELDOUT_RTOL:
            raise NumericalError(
                f"nullspace vector fails held-out intertwiner check: {heldout:.3e} > {HELDOUT_RTOL:.0e}"
            )

    return CGSolution(constraints.shape, svals, _ratio(svals), basis, count,
                      _seed_entropy(seed), heldout)


def _seed_entropy(seed) -> int:
    if isinstance(seed, np.random.SeedSequence):
        return seed.generate_state(1)[0].item()
    return int(seed)


@dataclass
class RatioCell:
    """One diagnostic measurement, resampled while the ratio is inconclusive."""

    ratio: float
    nullspace_dim: int
    divergent: bool
    inconclusive: bool
    solution: CGSolution


def classify_ratio(rep1: AlgebraRep, rep2: AlgebraRep, rep3: AlgebraRep,
                   count: int = DEFAULT_COUNT, scale: float = DEFAULT_SCALE,
                   seed=0) -> RatioCell:
    sol = None
    for attempt in range(MAX_RESAMPLES):
        sol = cg_solve(rep1, rep2, rep3, count=count, scale=scale,
                       seed=np.random.SeedSequence((_seed_entropy(seed), attempt, 7)))
        if sol.ratio >= DIVERGENT_R or sol.ratio <= NONDIVERGENT_R:
            return RatioCell(sol.ratio, sol.nullspace_dim, sol.ratio >= DIVERGENT_R, False, sol)
    return RatioCell(sol.ratio, sol.nullspace_dim, sol.ratio >= DIVERGENT_R, True, sol)


@dataclass
class SchurCell:
    label: str
    ratio: float
    nullspace_dim: int
    inconclusive: bool


@dataclass
class SchurResult:
    """Outcome of matching a representation against candidates via Schur's Lemma."""

    match: str | None
    intertwiner: np.ndarray | None
    condition_number: float | None
    cells: list[SchurCell]
    multiplicity: bool

    def to_json(self) -> dict:
        return {
            "match": self.match,
            "condition_number": self.condition_number,
            "multiplicity": self.multiplicity,
            "cells": [
                {"label": c.label, "r": c.ratio, "nullspace_dim": c.nullspace_dim,
                 "inconclusive": c.inconclusive}
                for c in self.cells
            ],
        }


def schur_isomorphism_test(learned: AlgebraRep, candidates: list[AlgebraRep],
                           count: int = DEFAULT_COUNT, scale: float = DEFAULT_SCALE,
                           seed=0) -> SchurResult:
    """Identify the unique candidate isomorphic to `learned`, or report none.

    Divergence of the ratio for trivial x learned -> candidate certifies an
    isomorphism; zero or multiple divergences (or any nullspace of dimension
    >= 2, signalling multiplicity) yield match=None.
    """
    one = trivial_rep(learned.algebra)
    cells: list[SchurCell] = []
    hits: list[tuple[AlgebraRep, CGSolution]] = []
    for idx, cand in enumerate(candidates):
        cell = classify_ratio(one, learned, cand, count=count, scale=scale,
                              seed=np.random.SeedSequence((_seed_entropy(seed), idx)))
        cells.append(SchurCell(cand.label, cell.ratio, cell.nullspace_dim, cell.inconclusive))
        if cell.divergent and cell.nullspace_dim == 1:
            hits.append((cand, cell.solution))
    multiplicity = any(c.nullspace_dim >= 2 for c in cells)
    if len(hits) != 1:
        return SchurResult(None, None, None, cells, multiplicity)
    cand, sol = hits[0]
    c = sol.nullspace[0]  # (n_cand, n_learned) since the left factor is trivial
    cond = float(np.linalg.cond(c)) if c.shape[0] == c.shape[1] else np.inf
    return SchurResult(cand.label, c, cond, cells, multiplicity)


@dataclass
class TensorStructureReport:
    """Grid of diagnostic ratios for learned x rho1 -> rho2 cells plus expectations."""

    row_labels: list[str]
    col_labels: list[str]
    ratios: np.ndarray           # (rows, cols) float
    nullspace_dims: np.ndarray   # (rows, cols) int
    divergent: np.ndarray        # (rows, cols) bool
    expected_divergent: np.ndarray | None
    match: bool
    schur: SchurResult

    def to_json(self) -> dict:
        return {
            "rows": self.row_labels,
            "cols": self.col_labels,
            "r_values": self.ratios.tolist(),
            "nullspace_dims": self.nullspace_dims.tolist(),
            "divergent": self.divergent.tolist(),
            "expected_divergent": None if self.expected_divergent is None
            else self.expected_divergent.tolist(),
            "match": self.match,
            "schur": self.schur.to_json(),
        }


def _worker_count() -> int:
    raw = os.environ.get("LIEREP_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _ratio_grid(rep: AlgebraRep, rho1s: list[AlgebraRep], rho2s: list[AlgebraRep],
                count: int, scale: float, seed) -> tuple[np.ndarray, np.ndarray]:
    rows, cols = len(rho1s), len(rho2s)
    ratios = np.zeros((rows, cols))
    dims = np.zeros((rows, cols), dtype=int)
    tasks = [(i, j) for i in range(rows) for j in range(cols)]

    def solve(ij):
        i, j = ij
        return classify_ratio(rep, rho1s[i], rho2s[j], count=count, scale=scale,
                              seed=np.random.SeedSequence((_seed_entropy(seed), i, j)))

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve, tasks))
    else:
        results = [solve(ij) for ij in tasks]
    for (i, j), cell in zip(tasks, results):
        ratios[i, j] = cell.ratio
        dims[i, j] = cell.nullspace_dim
    return ratios, dims


def tensor_structure_report(learned: AlgebraRep, known_rho1s: list[AlgebraRep],
                            known_rho2s: list[AlgebraRep],
                            count: int = DEFAULT_COUNT, scale: float = DEFAULT_SCALE,
                            seed=0) -> TensorStructureReport:
    """Fill the diagnostic grid and compare with the analytically expected pattern.

    The expected grid is produced by swapping `learned` for the candidate the
    Schur row identifies; with no identification the report carries match=False.
    """
    schur = schur_isomorphism_test(learned, known_rho2s, count=count, scale=scale,
                                   seed=np.random.SeedSequence((_seed_entropy(seed), 101)))
    ratios, dims = _ratio_grid(learned, known_rho1s, known_rho2s, count, scale,
                               np.random.SeedSequence((_seed_entropy(seed), 202)))
    divergent = ratios >= DIVERGENT_R

    expected = None
    match = False
    if schur.match is not None:
        reference = next(c for c in known_rho2s if c.label == schur.match)
        exp_ratios, _ = _ratio_grid(reference, known_rho1s, known_rho2s, count, scale,
                                    np.random.SeedSequence((_seed_entropy(seed), 303)))
        expected = exp_ratios >= DIVERGENT_R
        match = bool(np.array_equal(divergent, expected))

    return TensorStructureReport(
        [r.label for r in known_rho1s],
        [r.label for r in known_rho2s],
        ratios, dims, divergent, expected, match, schur,
    )


def builtin_candidates(name: str) -> list[AlgebraRep]:
    """Analytic irreducibles used as Schur candidates for a built-in algebra."""
    if name == "so3":
        return [spin_rep_so3(j) for j in ("0", "1/2", "1", "3/2", "2")]
    if name == "so21":
        return [rep_so21(j) for j in ("0", "1/2", "1", "3/2", "2")]
    if name == "so31":
        spins = [("0", "0"), ("1/2", "0"), ("0", "1/2"), ("1/2", "1/2"),
                 ("1", "0"), ("0", "1"), ("1", "1/2"), ("1/2", "1"), ("1", "1")]
        return [rep_so31(j1, j2) for j1, j2 in spins]
    raise DomainError(f"no built-in candidate table for algebra {name!r}")


def builtin_grid(name: str) -> tuple[list[AlgebraRep], list[AlgebraRep]]:
    """Default (rho1 rows, rho2 columns) for the tensor-structure report."""
    cols = builtin_candidates(name)
    if name in ("so3", "so21"):
        rows = cols[:3]  # trivial, spin 1/2, spin 1
    else:
        rows = [cols[0], cols[1], cols[3]]  # trivial, (1/2,0), (1/2,1/2)
    return rows, cols


def make_irreducibility_accept(candidates: list[AlgebraRep],
                               count: int = DEFAULT_COUNT, scale: float = DEFAULT_SCALE,
                               seed=0):
    """Acceptance callback: a run passes iff Schur identifies a unique candidate."""

    def accept(rep: AlgebraRep) -> bool:
        result = schur_isomorphism_test(rep, candidates, count=count, scale=scale, seed=seed)
        return result.match is not None

    return accept
