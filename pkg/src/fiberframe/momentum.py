"""Symplectic structure on frame space and the momentum maps of its symmetries.

Frame space C^{k x N} carries the constant symplectic form
omega(X1, X2) = -Im trace(X1* X2). Left multiplication by U(k) and right
multiplication by diagonal torus phases both act by symplectomorphisms; their
momentum maps are F F* and the vector of -||f_j||^2 / 2 respectively. The
defining property ties the derivative of the momentum map to the symplectic
pairing against infinitesimal fields, and everything here is organized around
checking that identity numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import as_complex_matrix, as_real_vector, hermitize
from .core import as_frame_matrix, frame_operator, norms_squared
from .errors import NotAFrameError

__all__ = [
    "LieAlgebraElement",
    "MomentumValue",
    "RegularValueCheck",
    "symplectic_form",
    "infinitesimal_field",
    "momentum_torus",
    "momentum_unitary",
    "momentum",
    "momentum_derivative_unitary",
    "momentum_derivative_torus",
    "defining_property_residual",
    "invert_momentum_derivative",
    "left_kernel_vector",
    "is_regular_value",
]


def symplectic_form(X1, X2) -> float:
    """omega(X1, X2) = -Im trace(X1* X2) on C^{k x N}."""
    X1 = as_complex_matrix(X1, "X1")
    X2 = as_complex_matrix(X2, "X2")
    if X1.shape != X2.shape:
        raise ValueError(f"shape mismatch {X1.shape} vs {X2.shape}")
    return float(-np.imag(np.vdot(X1, X2)))


@dataclass(frozen=True, eq=False)
class LieAlgebraElement:
    """Element (B, t) of u(k) x R^N: B anti-Hermitian, t real torus rates."""

    skew: np.ndarray
    torus: np.ndarray

    def __post_init__(self):
        B = as_complex_matrix(self.skew, "skew")
        if B.shape[0] != B.shape[1]:
            raise ValueError(f"skew part must be square, got {B.shape}")
        dev = np.linalg.norm(B + B.conj().T)
        if dev > 1e-10 * max(1.0, np.linalg.norm(B)):
            raise ValueError("skew part is not anti-Hermitian within tolerance")
        t = as_real_vector(self.torus, "torus")
        object.__setattr__(self, "skew", B)
        object.__setattr__(self, "torus", t)

    @classmethod
    def zero(cls, k: int, N: int) -> "LieAlgebraElement":
        return cls(np.zeros((k, k), dtype=complex), np.zeros(N))


def infinitesimal_field(F, xi: LieAlgebraElement) -> np.ndarray:
    """Tangent field of the action at F: B F + F i diag(t)."""
    F = as_frame_matrix(F)
    k, N = F.shape
    if xi.skew.shape[0] != k or xi.torus.shape[0] != N:
        raise ValueError("algebra element does not match frame shape")
    return xi.skew @ F + F * (1j * xi.torus)[None, :]


def momentum_torus(F) -> np.ndarray:
    """Torus momentum (-||f_1||^2 / 2, ..., -||f_N||^2 / 2)."""
    return -0.5 * norms_squared(F)


def momentum_unitary(F) -> np.ndarray:
    """Unitary momentum F F* (Hermitian)."""
    return frame_operator(F)


@dataclass(frozen=True, eq=False)
class MomentumValue:
    """Joint momentum of a frame: the operator F F* and the torus vector."""

    operator: np.ndarray
    torus: np.ndarray

    def consistency_residual(self) -> float:
        """|trace(operator) + 2 sum(torus)|; zero because both count total energy."""
        return float(abs(np.trace(self.operator).real + 2.0 * np.sum(self.torus)))


def momentum(F) -> MomentumValue:
    F = as_frame_matrix(F)
    return MomentumValue(operator=momentum_unitary(F), torus=momentum_torus(F))


def momentum_derivative_unitary(F, X) -> np.ndarray:
    """Derivative of F -> F F* at F in direction X: F X* + X F* (Hermitian)."""
    F = as_frame_matrix(F)
    X = as_complex_matrix(X, "X")
    if X.shape != F.shape:
        raise ValueError(f"X has shape {X.shape}, expected {F.shape}")
    return hermitize(F @ X.conj().T + X @ F.conj().T)


def momentum_derivative_torus(F, X) -> np.ndarray:
    """Derivative of the torus momentum: -Re <f_j, x_j> per column."""
    F = as_frame_matrix(F)
    X = as_complex_matrix(X, "X")
    if X.shape != F.shape:
        raise ValueError(f"X has shape {X.shape}, expected {F.shape}")
    return -np.real(np.sum(np.conj(F) * X, axis=0))


def _pair_with_algebra(W: np.ndarray, w: np.ndarray, xi: LieAlgebraElement) -> float:
    # (i/2) trace(B W) is real for B anti-Hermitian and W Hermitian; the torus
    # factor pairs by the ordinary dot product.
    unit = 0.5j * np.trace(xi.skew @ W)
    return float(unit.real + np.dot(xi.torus, w))


def defining_property_residual(F, X, xi: LieAlgebraElement) -> float:
    """| <D momentum(X), xi> - omega(X, field(xi)) | at the frame F.

    Zero (to rounding) for every direction X and algebra element xi; this is
    the statement that F F* and the half-squared-norm vector generate the two
    group actions Hamiltonianly.
    """
    F = as_frame_matrix(F)
    lhs = _pair_with_algebra(
        momentum_derivative_unitary(F, X), momentum_derivative_torus(F, X), xi
    )
    rhs = symplectic_form(X, infinitesimal_field(F, xi))
    return abs(lhs - rhs)


def invert_momentum_derivative(F, W, rank_rtol: float = 1e-12) -> np.ndarray:
    """Direction X with F X* + X F* = W for Hermitian W, when F has full rank.

    Uses the explicit right inverse X = W (F F*)^{-1} F / 2. Raises
    NotAFrameError when F is rank deficient: then any v in the left kernel of
    F* gives v* (F X* + X F*) v = 0, so W with v* W v != 0 are unreachable.
    """
    F = as_frame_matrix(F)
    W = as_complex_matrix(W, "W")
    k = F.shape[0]
    if W.shape != (k, k):
        raise ValueError(f"W has shape {W.shape}, expected {(k, k)}")
    if np.linalg.norm(W - W.conj().T) > 1e-10 * max(1.0, np.linalg.norm(W)):
        raise ValueError("W must be Hermitian")
    s = np.linalg.svd(F, compute_uv=False)
    if F.shape[1] < k or s[0] == 0.0 or s[k - 1] < rank_rtol * s[0]:
        raise NotAFrameError("derivative is not surjective: frame is rank deficient")
    S = F @ F.conj().T
    return 0.5 * hermitize(W) @ np.linalg.solve(S, F)


def left_kernel_vector(F, rank_rtol: float = 1e-10) -> np.ndarray:
    """Unit vector v with F* v = 0, certifying non-surjectivity of the derivative.

    Raises NotAFrameError when F has full row rank (no such vector exists).
    """
    F = as_frame_matrix(F)
    k, N = F.shape
    U, s, _ = np.linalg.svd(F, full_matrices=True)
    smax = s[0] if s.size else 0.0
    if N >= k and s.size == k and smax > 0.0 and s[k - 1] >= rank_rtol * smax:
        raise NotAFrameError("frame has full rank; left kernel is trivial")
    return U[:, -1]


@dataclass(frozen=True)
class RegularValueCheck:
    """Outcome of a regular-value test with a human-readable reason on failure."""

    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_regular_value(S, torus, tol: float = 1e-12) -> RegularValueCheck:
    """Whether (S, torus) is a regular value of the joint momentum map.

    Requires S Hermitian positive definite and every torus entry strictly
    negative (each equals -||f_j||^2 / 2 on the fiber, and zero columns are
    the critical degeneration).
    """
    S = as_complex_matrix(S, "S")
    if S.shape[0] != S.shape[1]:
        return RegularValueCheck(False, "operator part is not square")
    if np.linalg.norm(S - S.conj().T) > 1e-10 * max(1.0, np.linalg.norm(S)):
        return RegularValueCheck(False, "operator part is not Hermitian")
    w = np.linalg.eigvalsh(hermitize(S))
    if w[0] <= tol * max(1.0, w[-1]):
        return RegularValueCheck(False, "operator part is not positive definite")
    t = as_real_vector(torus, "torus")
    if np.any(t >= -0.5 * tol):
        return RegularValueCheck(False, "torus part has a non-negative entry")
    return RegularValueCheck(True)
