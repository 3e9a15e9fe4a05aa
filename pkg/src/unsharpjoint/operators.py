"""Validated operator types and elementary matrix algebra.

Everything downstream (smearing, block decomposition, joint observables,
CHSH correlators) is built out of the types defined here.  All matrices are
dense complex arrays; the constructions in this package live on small
Hilbert spaces (d <= 64, doubled once by dilation), so no sparsity is
needed.

Tolerance policy is two-tier: affine identities and Hermiticity are checked
at 1e-10, positive-semidefiniteness at 1e-9.  Validation helpers report raw
residuals so callers can tighten if they need to.

Every type freezes its matrix (read-only array) after validation, so
instances are plain immutable values and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    NotHermitian,
    SpectrumOutOfRange,
    NotProjector,
    ValidationError,
)

HERMITIAN_TOL = 1e-10
AFFINE_TOL = 1e-10
PSD_TOL = 1e-9

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (PAULI_X, PAULI_Y, PAULI_Z)


def square_matrix(m) -> np.ndarray:
    """Coerce input to a finite square complex matrix.

    Raises ValidationError if the input is not square or has non-finite
    entries.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("square-matrix", detail=f"shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValidationError("finite-entries")
    return a


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def hermiticity_residual(m: np.ndarray) -> float:
    """Max-abs entrywise deviation of m from its conjugate transpose."""
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def require_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    a = square_matrix(m)
    res = hermiticity_residual(a)
    if res > tol:
        raise NotHermitian(res)
    return a


def min_eigenvalue(m) -> float:
    """Smallest eigenvalue of a Hermitian matrix.

    Deterministic for a fixed input (LAPACK Hermitian solver on the
    Hermitized matrix).  Raises NotHermitian beyond 1e-10 deviation.
    """
    a = require_hermitian(m)
    return float(np.linalg.eigvalsh((a + a.conj().T) / 2)[0])


def tensor(a, b) -> np.ndarray:
    """Kronecker product with row-major block convention.

    Entry ((i*db + k), (j*db + l)) equals a[i, j] * b[k, l], i.e. the left
    factor indexes blocks and the right factor indexes within blocks.
    """
    return np.kron(square_matrix(a), square_matrix(b))


@dataclass(frozen=True, eq=False)
class Effect:
    """Hermitian operator E with 0 <= E <= I.

    The atom of all measurements: outcome probabilities are Tr[rho E].
    Spectrum is checked with a Hermitian eigensolver at construction;
    the admissible window is [-tol, 1 + tol] with tol = 1e-9 by default.
    """

    matrix: np.ndarray
    tol: float = field(default=PSD_TOL, repr=False)

    def __post_init__(self):
        m = require_hermitian(self.matrix)
        eigs = np.linalg.eigvalsh((m + m.conj().T) / 2)
        lo, hi = -self.tol, 1.0 + self.tol
        if eigs[0] < lo:
            raise SpectrumOutOfRange(float(eigs[0]), lo, hi)
        if eigs[-1] > hi:
            raise SpectrumOutOfRange(float(eigs[-1]), lo, hi)
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def complement(self) -> "Effect":
        return Effect(identity(self.dim) - self.matrix, self.tol)

    def min_eigenvalue(self) -> float:
        return min_eigenvalue(self.matrix)


def validate_effect(m, tol: float = PSD_TOL) -> Effect:
    """Validate a matrix as an effect with an explicit spectral tolerance.

    Returns an Effect iff m is Hermitian (to 1e-10) and its spectrum lies
    in [-tol, 1 + tol].  The offending eigenvalue is reported otherwise.
    """
    return Effect(square_matrix(m), float(tol))


@dataclass(frozen=True, eq=False)
class DichotomicObservable:
    """Two-outcome measurement: a pair of effects summing to the identity."""

    yes_effect: Effect
    no_effect: Effect

    def __post_init__(self):
        if self.yes_effect.dim != self.no_effect.dim:
            raise DimensionMismatch(self.yes_effect.dim, self.no_effect.dim)
        res = float(
            np.max(
                np.abs(
                    self.yes_effect.matrix
                    + self.no_effect.matrix
                    - identity(self.yes_effect.dim)
                )
            )
        )
        if res > AFFINE_TOL:
            raise ValidationError("yes+no=identity", res)

    @property
    def dim(self) -> int:
        return self.yes_effect.dim

    @classmethod
    def from_yes_effect(cls, m) -> "DichotomicObservable":
        yes = m if isinstance(m, Effect) else Effect(square_matrix(m))
        return cls(yes, yes.complement())

    def difference(self) -> np.ndarray:
        """The contrast operator E_yes - E_no entering mean values."""
        return self.yes_effect.matrix - self.no_effect.matrix


@dataclass(frozen=True, eq=False)
class Projector:
    """Hermitian idempotent with integer rank equal to its trace."""

    matrix: np.ndarray
    rank: int

    def __post_init__(self):
        m = require_hermitian(self.matrix)
        res = float(np.max(np.abs(m @ m - m)))
        if res > HERMITIAN_TOL:
            raise NotProjector(res)
        tr = float(np.trace(m).real)
        if abs(tr - self.rank) > 1e-8:
            raise ValidationError("rank-equals-trace", abs(tr - self.rank))
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_matrix(cls, m) -> "Projector":
        a = square_matrix(m)
        return cls(a, rank=int(round(float(np.trace(a).real))))

    def as_effect(self) -> Effect:
        return Effect(self.matrix)

    def observable(self) -> DichotomicObservable:
        """The sharp dichotomic measurement {P, I - P}."""
        return DichotomicObservable.from_yes_effect(self.as_effect())


def projector_onto(vec) -> Projector:
    """Rank-1 projector onto the ray of a (nonzero) vector."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValidationError("nonzero-vector")
    v = v / n
    return Projector(np.outer(v, v.conj()), rank=1)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian positive-semidefinite operator of unit trace."""

    matrix: np.ndarray

    def __post_init__(self):
        m = require_hermitian(self.matrix)
        eigs = np.linalg.eigvalsh((m + m.conj().T) / 2)
        if eigs[0] < -PSD_TOL:
            raise ValidationError("psd", float(-eigs[0]))
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > AFFINE_TOL:
            raise ValidationError("unit-trace", abs(tr - 1.0))
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, vec) -> "DensityMatrix":
        v = np.asarray(vec, dtype=complex).reshape(-1)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValidationError("nonzero-vector")
        v = v / n
        return cls(np.outer(v, v.conj()))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(identity(dim) / dim)


def matrix_to_json(m: np.ndarray) -> dict:
    """Row-major JSON operator encoding {"dim", "re", "im"}."""
    a = square_matrix(m)
    return {
        "dim": int(a.shape[0]),
        "re": a.real.tolist(),
        "im": a.imag.tolist(),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    """Inverse of matrix_to_json; validates shape against the declared dim."""
    for key in ("dim", "re", "im"):
        if key not in obj:
            raise ValidationError("operator-json", detail=f"missing field {key!r}")
    dim = int(obj["dim"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValidationError(
            "operator-json",
            detail=f"re/im shapes {re.shape}/{im.shape} do not match dim {dim}",
        )
    return re + 1j * im
