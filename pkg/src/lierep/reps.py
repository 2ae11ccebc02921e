"""Explicit algebra representations: analytic families, direct sums, tensor products.

All generator matrices are stored complex128 even when the representation is
real-valued; ``field`` records which case applies.  Verification is always
convention-free (commutator residuals), never entrywise against a fixed basis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import (
    StructureConstants,
    algebra_by_name,
    so3_constants,
    so21_constants,
    so31_constants,
)
from .errors import DomainError, FormatError

ANALYTIC_TOL = 1e-12


@dataclass(frozen=True)
class RepLabel:
    """Spin labels for irreducible representations; primed labels mark learned ones."""

    spins: tuple[Fraction, ...]
    learned: bool = False

    def __post_init__(self):
        for s in self.spins:
            if s < 0 or (2 * s).denominator != 1:
                raise DomainError(f"spins must be nonnegative half-integers, got {s}")

    def __str__(self):
        prime = "'" if self.learned else ""
        if len(self.spins) == 1:
            return f"{self.spins[0]}{prime}"
        inner = ",".join(f"{s}{prime}" for s in self.spins)
        return f"({inner})"


@dataclass(eq=False)
class AlgebraRep:
    """An ordered list of generator matrices satisfying the algebra's bracket relations."""

    algebra: StructureConstants
    generators: np.ndarray  # (t, n, n) complex
    field: str = "complex"
    label: str = ""
    tol: float = ANALYTIC_TOL

    def __post_init__(self):
        gens = np.asarray(self.generators, dtype=np.complex128)
        if gens.ndim != 3 or gens.shape[1] != gens.shape[2]:
            raise DomainError(f"generators must be a (t, n, n) stack, got {gens.shape}")
        if gens.shape[0] != self.algebra.dim:
            raise DomainError(
                f"{gens.shape[0]} generators for a {self.algebra.dim}-dimensional algebra"
            )
        if self.field not in ("real", "complex"):
            raise DomainError(f"field must be 'real' or 'complex', got {self.field!r}")
        gens = gens.copy()
        gens.setflags(write=False)
        self.generators = gens
        resid = self.commutator_residual()
        if resid > self.tol:
            raise DomainError(
                f"generators violate the bracket relations: residual {resid:.3e} > tol {self.tol:.3e}"
            )

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    def commutator_residual(self) -> float:
        """Largest L1 norm of [T_i, T_j] - sum_k A_ijk T_k over generator pairs."""
        return commutator_residual(self.generators, self.algebra.a)

    def to_json(self) -> dict:
        gens = self.generators
        packed = np.stack([gens.real, gens.imag], axis=-1)
        algebra = self.algebra.name if self.algebra.name else self.algebra.to_json()
        return {
            "algebra": algebra,
            "field": self.field,
            "label": self.label,
            "tol": self.tol,
            "generators": packed.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AlgebraRep":
        try:
            algebra = StructureConstants.from_json(obj["algebra"])
            packed = np.asarray(obj["generators"], dtype=float)
            field = obj["field"]
            label = obj.get("label", "")
            tol = float(obj.get("tol", ANALYTIC_TOL))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad representation JSON: {exc}") from exc
        if packed.ndim != 4 or packed.shape[-1] != 2:
            raise FormatError(f"generators must nest gen->row->col->[re,im], got {packed.shape}")
        gens = packed[..., 0] + 1j * packed[..., 1]
        return cls(algebra, gens, field=field, label=label, tol=tol)


def commutator_residual(generators: np.ndarray, a: np.ndarray) -> float:
    gens = np.asarray(generators, dtype=np.complex128)
    prod = np.einsum("iab,jbc->ijac", gens, gens)
    comm = prod - prod.transpose(1, 0, 2, 3)
    target = np.einsum("ijk,kab->ijab", a, gens)
    per_pair = np.abs(comm - target).sum(axis=(2, 3))
    return float(per_pair.max())


def _as_half_integer(j) -> Fraction:
    try:
        jf = Fraction(j)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"spin must be a number, got {j!r}") from exc
    if jf < 0 or (2 * jf).denominator != 1:
        raise DomainError(f"spin must be a nonnegative half-integer, got {j}")
    return jf


def _ladder_generators(j: Fraction) -> np.ndarray:
    """Anti-Hermitian spin-j triple (Lx, Ly, Lz) with [L_i, L_j] = eps_ijk L_k.

    Built from the standard Hermitian ladder operators and rescaled by -i so
    the bracket relations hold without a factor of i.
    """
    n = int(2 * j) + 1
    m = float(j) - np.arange(n)  # j, j-1, ..., -j
    jz = np.diag(m).astype(np.complex128)
    jplus = np.zeros((n, n), dtype=np.complex128)
    for i in range(1, n):
        jplus[i - 1, i] = np.sqrt(float(j) * (float(j) + 1.0) - m[i] * (m[i] + 1.0))
    jminus = jplus.conj().T
    jx = (jplus + jminus) / 2.0
    jy = (jplus - jminus) / 2j
    return -1j * np.stack([jx, jy, jz])


def spin_rep_so3(j) -> AlgebraRep:
    """The (2j+1)-dimensional irreducible representation of so(3)."""
    jf = _as_half_integer(j)
    return AlgebraRep(so3_constants(), _ladder_generators(jf), label=f"spin-{jf}")


def rep_so21(j) -> AlgebraRep:
    """so(2,1) irreducible of dimension 2j+1 via Kx = -i Lx, Ky = -i Ly, Jz = Lz."""
    jf = _as_half_integer(j)
    lx, ly, lz = _ladder_generators(jf)
    gens = np.stack([-1j * lx, -1j * ly, lz])
    return AlgebraRep(so21_constants(), gens, label=f"so21-spin-{jf}")


def rep_so31(j1, j2) -> AlgebraRep:
    """so(3,1) irreducible (j1, j2) of dimension (2j1+1)(2j2+1).

    Uses commuting copies A_i (left factor) and B_i (right factor) of so(3)
    and inverts the A/B change of basis: J_i = A_i + B_i, K_i = -i(A_i - B_i).
    """
    f1, f2 = _as_half_integer(j1), _as_half_integer(j2)
    left = _ladder_generators(f1)
    right = _ladder_generators(f2)
    n1, n2 = left.shape[1], right.shape[1]
    eye1, eye2 = np.eye(n1), np.eye(n2)
    a = np.stack([np.kron(g, eye2) for g in left])
    b = np.stack([np.kron(eye1, g) for g in right])
    gens = np.concatenate([a + b, -1j * (a - b)])
    return AlgebraRep(so31_constants(), gens, label=f"({f1},{f2})")


def trivial_rep(algebra: StructureConstants) -> AlgebraRep:
    """The one-dimensional zero representation of any algebra."""
    gens = np.zeros((algebra.dim, 1, 1), dtype=np.complex128)
    return AlgebraRep(algebra, gens, field="real", label="trivial")


def vector_rep(name: str) -> AlgebraRep:
    """The defining (coordinate) representation, with real generator matrices.

    For so21/so31 these act on (t, x, ...) and exponentiate to the familiar
    real Lorentz matrices, so point coordinates embed without a basis change.
    """
    if name == "so3":
        gens = np.zeros((3, 3, 3))
        for i in range(3):
            for a in range(3):
                for b in range(3):
                    gens[i, a, b] = -_eps(i, a, b)
        return AlgebraRep(so3_constants(), gens, field="real", label="vector")
    if name == "so21":
        kx = np.array([[0.0, 1, 0], [1, 0, 0], [0, 0, 0]])
        ky = np.array([[0.0, 0, 1], [0, 0, 0], [1, 0, 0]])
        jz = np.array([[0.0, 0, 0], [0, 0, -1], [0, 1, 0]])
        return AlgebraRep(so21_constants(), np.stack([kx, ky, jz]), field="real", label="vector")
    if name == "so31":
        gens = np.zeros((6, 4, 4))
        for i in range(3):
            for a in range(3):
                for b in range(3):
                    gens[i, 1 + a, 1 + b] = -_eps(i, a, b)
            gens[3 + i, 0, 1 + i] = 1.0
            gens[3 + i, 1 + i, 0] = 1.0
        return AlgebraRep(so31_constants(), gens, field="real", label="vector")
    raise DomainError(f"no defining representation for algebra {name!r}")


def _eps(i: int, j: int, k: int) -> float:
    return float((i - j) * (j - k) * (k - i)) / 2.0


def direct_sum(r1: AlgebraRep, r2: AlgebraRep) -> AlgebraRep:
    """Block-diagonal sum; dimension n1 + n2."""
    if r1.algebra != r2.algebra:
        raise DomainError("direct sum requires representations of the same algebra")
    t = r1.algebra.dim
    n1, n2 = r1.dim, r2.dim
    gens = np.zeros((t, n1 + n2, n1 + n2), dtype=np.complex128)
    gens[:, :n1, :n1] = r1.generators
    gens[:, n1:, n1:] = r2.generators
    field = "real" if r1.field == "real" and r2.field == "real" else "complex"
    tol = max(r1.tol, r2.tol)
    return AlgebraRep(r1.algebra, gens, field=field, label=f"{r1.label}+{r2.label}", tol=tol)


def tensor_product(r1: AlgebraRep, r2: AlgebraRep) -> AlgebraRep:
    """Tensor product at the algebra level: T_i = T_i(1) x I + I x T_i(2).

    This is the derivative of the group-level product, so exponentials satisfy
    exp(b T_i) = exp(b T_i(1)) x exp(b T_i(2)).
    """
    if r1.algebra != r2.algebra:
        raise DomainError("tensor product requires representations of the same algebra")
    eye1, eye2 = np.eye(r1.dim), np.eye(r2.dim)
    gens = np.stack(
        [np.kron(g1, eye2) + np.kron(eye1, g2) for g1, g2 in zip(r1.generators, r2.generators)]
    )
    field = "real" if r1.field == "real" and r2.field == "real" else "complex"
    # |M x I|_1 = |M|_1 * n, so pairwise residuals add with the opposite factor dim.
    tol = r1.tol * r2.dim + r2.tol * r1.dim
    return AlgebraRep(r1.algebra, gens, field=field, label=f"{r1.label}*{r2.label}", tol=tol)


def load_rep(path: str) -> AlgebraRep:
    with open(path) as fh:
        return AlgebraRep.from_json(json.load(fh))


def save_rep(path: str, rep: AlgebraRep) -> None:
    with open(path, "w") as fh:
        json.dump(rep.to_json(), fh)
