"""Lie algebras given by structure constants, with built-ins so(3), so(2,1), so(3,1).

A t-dimensional algebra is encoded by the dense tensor ``a`` with
``[T_i, T_j] = sum_k a[i, j, k] T_k`` for any generator basis ``T_1..T_t``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, FormatError

DEFAULT_TOL = 1e-12

#: Generator orderings are frozen: so3 = (J1, J2, J3); so21 = (Kx, Ky, Jz);
#: so31 = (J1, J2, J3, K1, K2, K3).  The tensor indexing is order-sensitive.
BUILTIN_NAMES = ("so3", "so21", "so31")


class StructureError(DomainError):
    """A structure-constant tensor has the wrong shape or dtype."""


@dataclass
class ConstraintViolation:
    constraint: str
    residual: float

    def __str__(self):
        return f"{self.constraint}: residual {self.residual:.3e}"


@dataclass(eq=False)
class StructureConstants:
    """Dense rank-3 tensor of structure constants, immutable after construction."""

    a: np.ndarray
    name: str = ""
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if a.ndim != 3 or a.shape[0] != a.shape[1] or a.shape[0] != a.shape[2]:
            raise StructureError(f"structure constants must have shape t*t*t, got {a.shape}")
        a = a.copy()
        a.setflags(write=False)
        self.a = a

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, StructureConstants) and np.array_equal(self.a, other.a)

    def to_json(self) -> dict:
        return {"dim": self.dim, "structure_constants": self.a.tolist()}

    @classmethod
    def from_json(cls, obj: dict | str) -> "StructureConstants":
        if isinstance(obj, str):
            return algebra_by_name(obj)
        try:
            dim = int(obj["dim"])
            a = np.asarray(obj["structure_constants"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad algebra JSON: {exc}") from exc
        if a.shape != (dim, dim, dim):
            raise FormatError(f"declared dim {dim} does not match tensor shape {a.shape}")
        return cls(a)


def antisymmetry_residual(a: np.ndarray) -> float:
    """Largest |A_ijk + A_jik| over all index triples."""
    return float(np.abs(a + a.transpose(1, 0, 2)).max())


def jacobi_residual(a: np.ndarray) -> float:
    """Largest Jacobi-identity violation over all (i, j, k, l).

    Evaluates sum_m (A_ijm A_mkl + A_jkm A_mil + A_kim A_mjl) directly.
    """
    term1 = np.einsum("ijm,mkl->ijkl", a, a)
    term2 = np.einsum("jkm,mil->ijkl", a, a)
    term3 = np.einsum("kim,mjl->ijkl", a, a)
    return float(np.abs(term1 + term2 + term3).max())


def validate(sc: StructureConstants, tol: float | None = None) -> list[ConstraintViolation]:
    """Check antisymmetry and the Jacobi identity; empty list means both hold within tol."""
    tol = sc.tol if tol is None else tol
    report = []
    r_anti = antisymmetry_residual(sc.a)
    if r_anti > tol:
        report.append(ConstraintViolation("antisymmetry A_ijk = -A_jik", r_anti))
    r_jac = jacobi_residual(sc.a)
    if r_jac > tol:
        report.append(ConstraintViolation("Jacobi identity", r_jac))
    return report


def _levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k] = 1.0
        eps[j, i, k] = -1.0
    return eps


def so3_constants() -> StructureConstants:
    """Rotation algebra: [J_i, J_j] = eps_ijk J_k."""
    return StructureConstants(_levi_civita(), name="so3")


def so21_constants() -> StructureConstants:
    """2+1 Lorentz algebra in the (Kx, Ky, Jz) basis.

    [Jz, Kx] = Ky, [Jz, Ky] = -Kx, [Kx, Ky] = -Jz.
    """
    a = np.zeros((3, 3, 3))
    a[2, 0, 1] = 1.0   # [Jz, Kx] = Ky
    a[0, 2, 1] = -1.0
    a[2, 1, 0] = -1.0  # [Jz, Ky] = -Kx
    a[1, 2, 0] = 1.0
    a[0, 1, 2] = -1.0  # [Kx, Ky] = -Jz
    a[1, 0, 2] = 1.0
    return StructureConstants(a, name="so21")


def so31_constants() -> StructureConstants:
    """3+1 Lorentz algebra in the (J1, J2, J3, K1, K2, K3) basis.

    [J_i, J_j] = eps_ijk J_k, [J_i, K_j] = eps_ijk K_k, [K_i, K_j] = -eps_ijk J_k.
    """
    eps = _levi_civita()
    a = np.zeros((6, 6, 6))
    a[:3, :3, :3] = eps
    a[:3, 3:, 3:] = eps                     # [J_i, K_j] = eps_ijk K_k
    a[3:, :3, 3:] = -eps.transpose(1, 0, 2)  # [K_j, J_i] = -eps_ijk K_k
    a[3:, 3:, :3] = -eps
    return StructureConstants(a, name="so31")


def algebra_by_name(name: str) -> StructureConstants:
    builders = {"so3": so3_constants, "so21": so21_constants, "so31": so31_constants}
    try:
        return builders[name]()
    except KeyError:
        raise DomainError(f"unknown algebra {name!r}; built-ins are {BUILTIN_NAMES}") from None


def load_algebra(source: str) -> StructureConstants:
    """Resolve an algebra from a built-in name or a JSON file path."""
    if source in BUILTIN_NAMES:
        return algebra_by_name(source)
    with open(source) as fh:
        return StructureConstants.from_json(json.load(fh))
