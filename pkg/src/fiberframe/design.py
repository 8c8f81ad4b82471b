"""Existence test and construction of frames with prescribed spectrum and norms.

A frame with frame-operator spectrum lambda (k positive values) and squared
column norms r (N positive values) exists exactly when sum(r) = sum(lambda)
and, after sorting both descending, the partial sums of r never exceed those
of lambda. The constructive route builds an N x N Hermitian matrix with
spectrum (lambda, 0, ..., 0) and diagonal r by a chain of plane rotations,
then reads the frame off a truncated eigendecomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import as_hermitian, as_real_vector, cluster_by_gap, eigh_desc, haar_unitary
from .errors import ClusteringError, InadmissibleError
from .fiber import FiberTarget, as_spectrum
from .flows import FlowOptions, fiber_residual, project_to_fiber

__all__ = [
    "AdmissibilityCheck",
    "is_admissible",
    "hermitian_with_diagonal",
    "construct_frame",
    "construct_frame_with_operator",
    "random_admissible_norms",
    "random_frame_on_fiber",
]


@dataclass(frozen=True)
class AdmissibilityCheck:
    """Outcome of the existence test, with the first violated condition.

    kind is "" when admissible, otherwise one of "shape" (fewer vectors than
    dimensions), "total" (sum(r) != sum(lambda)) or "partial_sum" (the top-ell
    partial sum of sorted r exceeds that of lambda; ell in ``index``, 1-based).
    lhs/rhs hold the two sides of the violated (in)equality.
    """

    ok: bool
    kind: str = ""
    index: int | None = None
    lhs: float = 0.0
    rhs: float = 0.0

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "admissible"
        if self.kind == "shape":
            return f"only {int(self.lhs)} vectors for dimension {int(self.rhs)}"
        if self.kind == "total":
            return f"sum of norms {self.lhs:.12g} != sum of spectrum {self.rhs:.12g}"
        return (
            f"partial sum violated at ell={self.index}: "
            f"top norms add to {self.lhs:.12g} > spectrum {self.rhs:.12g}"
        )


def is_admissible(spectrum, norms_sq, tol: float = 1e-10) -> AdmissibilityCheck:
    """Existence test for a frame with the given spectrum and squared norms.

    Checks sum(r) = sum(lambda) and the descending partial-sum inequalities
    sum of the ell largest r <= sum of the ell largest lambda for ell = 1..k,
    all with absolute slack tol * max(1, sum(lambda)).
    """
    lam = as_spectrum(spectrum)
    r = as_real_vector(norms_sq, "norms_sq")
    if r.size == 0 or np.any(r <= 0.0):
        raise ValueError("norms_sq must be non-empty and strictly positive")
    k, N = lam.size, r.size
    slack = tol * max(1.0, float(np.sum(lam)))
    if N < k:
        return AdmissibilityCheck(False, kind="shape", lhs=float(N), rhs=float(k))
    total_r, total_lam = float(np.sum(r)), float(np.sum(lam))
    if abs(total_r - total_lam) > slack:
        return AdmissibilityCheck(False, kind="total", lhs=total_r, rhs=total_lam)
    rs = np.sort(r)[::-1]
    sums_r = np.cumsum(rs[:k])
    sums_lam = np.cumsum(lam)
    for ell in range(1, k + 1):
        if sums_r[ell - 1] > sums_lam[ell - 1] + slack:
            return AdmissibilityCheck(
                False,
                kind="partial_sum",
                index=ell,
                lhs=float(sums_r[ell - 1]),
                rhs=float(sums_lam[ell - 1]),
            )
    return AdmissibilityCheck(True)


def _rotate_sym(W: np.ndarray, i: int, j: int, c: float, s: float) -> None:
    # W <- R W R^T for the rotation acting on coordinates (i, j):
    # new_i = c old_i - s old_j, new_j = s old_i + c old_j.
    ri, rj = W[i].copy(), W[j].copy()
    W[i] = c * ri - s * rj
    W[j] = s * ri + c * rj
    ci, cj = W[:, i].copy(), W[:, j].copy()
    W[:, i] = c * ci - s * cj
    W[:, j] = s * ci + c * cj


def hermitian_with_diagonal(values, diagonal) -> np.ndarray:
    """Real symmetric matrix with the given spectrum and the given diagonal.

    Requires the diagonal to be majorized by the spectrum (equal sums, sorted
    partial-sum inequalities); raises ValueError otherwise. Targets are fixed
    largest first: one plane rotation of the two active values bracketing the
    target sets one diagonal entry exactly and leaves the remaining active
    block diagonal, so the recursion never strands.
    """
    vals = np.sort(as_real_vector(values, "values"))[::-1]
    d = as_real_vector(diagonal, "diagonal")
    n = d.size
    if vals.size != n:
        raise ValueError(f"need {n} spectrum values, got {vals.size}")
    scale = max(1.0, float(np.max(np.abs(vals))) * n)
    if abs(float(np.sum(vals)) - float(np.sum(d))) > 1e-8 * scale:
        raise ValueError("spectrum and diagonal sums differ")
    ds = np.sort(d)[::-1]
    if np.any(np.cumsum(ds) > np.cumsum(vals) + 1e-8 * scale):
        raise ValueError("diagonal is not majorized by the spectrum")

    order = np.argsort(-d, kind="stable")
    W = np.zeros((n, n))
    W[np.diag_indices(n)] = vals
    pos = list(range(n))
    val = vals.copy()
    dest = np.empty(n, dtype=int)

    for i, ui in enumerate(order):
        t = d[ui]
        m = len(pos)
        if m == 1:
            p = pos[0]
            W[p, p] = t
            dest[p] = ui
            break
        idx = int(np.searchsorted(-val, -t, side="left"))
        j = min(max(idx - 1, 0), m - 2)
        a, b = float(val[j]), float(val[j + 1])
        pj, pk = pos[j], pos[j + 1]
        denom = a - b
        vrest = a + b - t
        if denom <= 1e-14 * max(1.0, abs(a), abs(b)):
            c, s = 1.0, 0.0
        else:
            c2 = min(max((t - b) / denom, 0.0), 1.0)
            c, s = np.sqrt(c2), np.sqrt(1.0 - c2)
        if s != 0.0:
            _rotate_sym(W, pj, pk, c, s)
        W[pj, pj] = t
        W[pk, pk] = vrest
        dest[pj] = ui
        del pos[j]
        val = np.delete(val, j)
        val[j] = vrest

    G = np.zeros((n, n))
    G[np.ix_(dest, dest)] = W
    return G


def construct_frame(spectrum, norms_sq, rng: np.random.Generator | None = None) -> np.ndarray:
    """Frame whose frame operator is diag(sorted spectrum) and norms are norms_sq.

    Deterministic for rng=None; passing a Generator randomizes the Gram matrix
    by column phases, which moves the frame around the fiber without touching
    spectrum or norms. Raises InadmissibleError when no such frame exists.
    """
    lam = as_spectrum(spectrum)
    r = as_real_vector(norms_sq, "norms_sq")
    check = is_admissible(lam, r)
    if not check:
        raise InadmissibleError(check.describe(), check)
    k, N = lam.size, r.size
    vals = np.concatenate([lam, np.zeros(N - k)])
    G = hermitian_with_diagonal(vals, r).astype(complex)
    if rng is not None:
        phase = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, N))
        G = G * np.outer(phase, phase.conj())
    w, V = np.linalg.eigh(G)
    wk = np.clip(w[-k:][::-1], 0.0, None)
    Vk = V[:, -k:][:, ::-1]
    return np.sqrt(wk)[:, None] * Vk.conj().T


def construct_frame_with_operator(operator, norms_sq, rng: np.random.Generator | None = None):
    """Frame with the given (positive definite) frame operator and squared norms."""
    S = as_hermitian(operator, name="operator")
    w_desc, U = eigh_desc(S)
    lam = as_spectrum(w_desc)
    F0 = construct_frame(lam, norms_sq, rng=rng)
    return U @ F0


def random_admissible_norms(spectrum, N: int, rng: np.random.Generator) -> np.ndarray:
    """Random positive squared norms admissible for the spectrum, summing to it.

    Draws a Dirichlet split of the total energy and, when that violates the
    partial-sum conditions, blends toward the uniform split (always
    admissible); the admissible set is convex, so bisection along the blend
    finds the boundary and a small margin keeps the result strictly inside.
    """
    lam = as_spectrum(spectrum)
    if N < lam.size:
        raise ValueError("need at least as many vectors as dimensions")
    total = float(np.sum(lam))
    uniform = np.full(N, total / N)
    q = rng.dirichlet(np.ones(N)) * total

    def blend(t):
        return t * uniform + (1.0 - t) * q

    if is_admissible(lam, blend(0.0)):
        tstar = 0.0
    else:
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if is_admissible(lam, blend(mid)):
                hi = mid
            else:
                lo = mid
        tstar = hi
    t = max(0.02, tstar + 0.02 * (1.0 - tstar))
    r = blend(t)
    # exact total: rescale rounding drift so sum(r) == sum(lam) to 1 ulp
    r *= total / float(np.sum(r))
    return r


def random_frame_on_fiber(target: FiberTarget, seed: int) -> np.ndarray:
    """Seeded pseudo-random frame on the target fiber, residual below 1e-20.

    Distinct seeds give well-separated frames; the same seed always returns
    the identical matrix. Randomness enters through Gram phases, column
    phases, commutant rotations of the operator eigenspaces, and a right
    unitary scramble followed by re-projection onto the fiber.
    """
    rng = np.random.default_rng(seed)
    S, r = target.operator, target.norms_sq
    F = construct_frame_with_operator(S, r, rng=rng)
    N = target.N
    F = F * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, N))[None, :]

    w_desc, U = eigh_desc(S)
    try:
        clusters = cluster_by_gap(w_desc, 1e-8)
    except ClusteringError:
        clusters = None
    if clusters is not None:
        B = np.zeros((target.k, target.k), dtype=complex)
        for cl in clusters:
            m = len(cl)
            block = haar_unitary(m, rng) if m > 1 else np.exp(1j * rng.uniform(0, 2 * np.pi, 1))
            B[np.ix_(cl, cl)] = block if m > 1 else block.reshape(1, 1)
        F = (U @ B @ U.conj().T) @ F

    polish = FlowOptions(max_iters=4000, tol=1e-26, stall_iters=200)
    for _ in range(6):
        Q = haar_unitary(N, rng)
        Fc, _rep = project_to_fiber(F @ Q, target, polish)
        if fiber_residual(Fc, target) <= 1e-20:
            return Fc
    # the pre-scramble frame sits on the fiber exactly (up to rounding)
    return F
