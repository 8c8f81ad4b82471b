"""Spectral invariants of the frame operator and unitary equivalence of frames.

Frames with the same Gram matrix differ by a unitary on the left, and the
frame operator and Gram matrix share their nonzero spectrum. The flag type
records eigenvalue multiplicities; it determines the dimension of the unitary
orbit of the operator and of the reduced space of frames with that operator
up to symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import as_hermitian, cluster_by_gap, polar_unitary
from .core import as_frame_matrix, gram
from .errors import ClusteringError  # noqa: F401  (re-exported for callers)

__all__ = [
    "FlagType",
    "flag_type",
    "orbit_dimension",
    "reduced_dimension",
    "same_gram_class",
    "unitary_equivalent",
    "spectrum_correspondence_residual",
]


@dataclass(frozen=True)
class FlagType:
    """Distinct eigenvalues (descending) with their multiplicities."""

    eigenvalues: tuple
    multiplicities: tuple

    def __post_init__(self):
        if len(self.eigenvalues) != len(self.multiplicities):
            raise ValueError("eigenvalues and multiplicities must have equal length")
        if len(self.multiplicities) == 0 or any(int(m) < 1 for m in self.multiplicities):
            raise ValueError("multiplicities must be positive integers")
        vals = tuple(float(x) for x in self.eigenvalues)
        if any(a <= b for a, b in zip(vals, vals[1:])):
            raise ValueError("eigenvalues must be distinct and strictly descending")
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "multiplicities", tuple(int(m) for m in self.multiplicities))

    @property
    def dimension(self) -> int:
        return sum(self.multiplicities)


def flag_type(operator, cluster_tol: float = 1e-8) -> FlagType:
    """Cluster the spectrum of a Hermitian operator into a flag type.

    Eigenvalues are grouped when their relative gap is below cluster_tol; a
    gap inside the ambiguity band just above the tolerance raises
    ClusteringError rather than silently picking a side.
    """
    S = as_hermitian(operator, name="operator")
    w = np.linalg.eigvalsh(S)[::-1]
    clusters = cluster_by_gap(w, cluster_tol)
    reps = tuple(float(np.mean(w[cl])) for cl in clusters)
    mults = tuple(len(cl) for cl in clusters)
    return FlagType(eigenvalues=reps, multiplicities=mults)


def orbit_dimension(ft: FlagType) -> int:
    """Real dimension of the unitary orbit of an operator with this flag type.

    Equals k^2 - sum(m_i^2): the stabilizer of the spectral decomposition is
    the product of the block unitary groups.
    """
    k = ft.dimension
    return k * k - sum(m * m for m in ft.multiplicities)


def reduced_dimension(ft: FlagType, N: int) -> int:
    """Real dimension of the space of frames with this operator, up to symmetry.

    2 k (N - k) for the fixed-operator slice plus the orbit dimension.
    """
    k = ft.dimension
    if N < k:
        raise ValueError("need at least as many vectors as dimensions")
    return 2 * k * (N - k) + orbit_dimension(ft)


def same_gram_class(F1, F2, tol: float = 1e-8) -> bool:
    """Whether the two frames have the same Gram matrix within tolerance."""
    F1 = as_frame_matrix(F1, "F1")
    F2 = as_frame_matrix(F2, "F2")
    if F1.shape != F2.shape:
        raise ValueError(f"shape mismatch {F1.shape} vs {F2.shape}")
    G1, G2 = gram(F1), gram(F2)
    return bool(np.linalg.norm(G1 - G2) <= tol * max(1.0, np.linalg.norm(G1)))


def unitary_equivalent(F1, F2, tol: float = 1e-8):
    """Unitary U with U F1 = F2 when one exists, else None.

    Equal Gram matrices force such a U; it is recovered as the unitary polar
    factor of F2 F1*, and the candidate is verified against tol before being
    returned.
    """
    F1 = as_frame_matrix(F1, "F1")
    F2 = as_frame_matrix(F2, "F2")
    if F1.shape != F2.shape:
        raise ValueError(f"shape mismatch {F1.shape} vs {F2.shape}")
    U = polar_unitary(F2 @ F1.conj().T)
    resid = np.linalg.norm(U @ F1 - F2)
    if resid <= tol * max(1.0, np.linalg.norm(F1)):
        return U
    return None


def spectrum_correspondence_residual(F) -> float:
    """How far eig(F F*) is from the nonzero part of eig(F* F), relatively.

    Returns the largest deviation between the descending spectra (the Gram
    tail beyond rank k must vanish), divided by max(1, largest eigenvalue).
    """
    F = as_frame_matrix(F)
    k = F.shape[0]
    w_op = np.linalg.eigvalsh(F @ F.conj().T)[::-1]
    w_gram = np.linalg.eigvalsh(gram(F))[::-1]
    top = w_gram[:k]
    tail = w_gram[k:]
    dev = float(np.max(np.abs(w_op - top)))
    if tail.size:
        dev = max(dev, float(np.max(np.abs(tail))))
    return dev / max(1.0, float(np.abs(w_op[0])))
