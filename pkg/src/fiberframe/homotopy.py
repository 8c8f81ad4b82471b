"""Numerical paths between two frames on the same fiber.

Any two frames with equal frame operator S and equal squared norms can be
joined by a path that stays on that fiber (for regular targets). connect()
produces an explicit discrete witness: gauge-align the endpoints with a
unitary from the commutant of S, trace the straight chord while re-projecting
every sample onto the fiber (with adaptive bisection and seeded tangent kicks
where the projection struggles), then unwind the gauge along a one-parameter
unitary group, which moves on the fiber exactly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from ._linalg import (
    as_complex_matrix,
    cluster_by_gap,
    polar_unitary,
    eigh_desc,
    unitary_log_factors,
)
from .core import as_frame_matrix
from .errors import ClusteringError, ConnectError
from .fiber import FiberTarget
from .flows import FlowOptions, fiber_residual, project_to_fiber

__all__ = [
    "ConnectOptions",
    "FramePath",
    "PathCheck",
    "gauge_align",
    "connect",
    "validate_path",
]


@dataclass(frozen=True)
class ConnectOptions:
    """Tuning for connect().

    path_tol bounds the fiber deviation of every sample in norm units (the
    squared residual stays below path_tol^2). delta bounds consecutive-sample
    distance relative to the Frobenius norm of the first endpoint.
    max_refine_depth limits interval bisection, max_restarts the number of
    seeded tangent kicks per stubborn step.
    """

    path_tol: float = 1e-8
    delta: float = 0.05
    max_refine_depth: int = 12
    max_restarts: int = 5
    seed: int = 0
    kick_scale: float = 1e-4
    cluster_tol: float = 1e-8
    project_iters: int = 1000

    def __post_init__(self):
        if self.path_tol <= 0 or self.delta <= 0:
            raise ValueError("path_tol and delta must be positive")
        if self.max_refine_depth < 0 or self.max_restarts < 0:
            raise ValueError("max_refine_depth and max_restarts must be non-negative")


@dataclass(eq=False)
class FramePath:
    """Discrete path on a fiber: times in [0, 1] with one frame per time."""

    times: np.ndarray
    frames: np.ndarray
    target: FiberTarget

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        Fs = np.asarray(self.frames)
        if t.ndim != 1 or t.size < 2:
            raise ValueError("need at least two samples")
        if Fs.shape != (t.size, self.target.k, self.target.N):
            raise ValueError(
                f"frames shape {Fs.shape} does not match "
                f"({t.size}, {self.target.k}, {self.target.N})"
            )
        if abs(t[0]) > 1e-15 or abs(t[-1] - 1.0) > 1e-15:
            raise ValueError("times must start at 0 and end at 1")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        self.times = t
        self.frames = Fs.astype(np.complex128, copy=False)

    def __len__(self) -> int:
        return self.times.size

    def __iter__(self):
        return zip(self.times, self.frames)

    def residuals(self) -> np.ndarray:
        return np.array([fiber_residual(F, self.target) for F in self.frames])

    def step_norms(self) -> np.ndarray:
        d = np.diff(self.frames, axis=0)
        return np.sqrt(np.sum(np.abs(d) ** 2, axis=(1, 2)))


@dataclass(frozen=True)
class PathCheck:
    """Result of validate_path with the worst offenders recorded."""

    ok: bool
    max_residual: float
    max_step: float
    step_limit: float
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_path(path: FramePath, tol: float = 1e-8, delta: float = 0.05, endpoints=None):
    """Check that every sample sits on the fiber and steps stay small.

    tol is in norm units: a sample passes when its squared residual is at
    most tol^2. delta limits each consecutive step relative to the norm of
    the first sample. endpoints, when given as (F0, F1), must match the first
    and last sample to 1e-12 relative.
    """
    res = path.residuals()
    steps = path.step_norms()
    scale = float(np.linalg.norm(path.frames[0]))
    step_limit = delta * scale
    max_res = float(np.max(res))
    max_step = float(np.max(steps)) if steps.size else 0.0
    problems = []
    if max_res > tol * tol:
        problems.append(f"sample residual {max_res:.3e} exceeds tol^2 = {tol * tol:.3e}")
    if max_step > step_limit * (1.0 + 1e-9):
        problems.append(f"step {max_step:.3e} exceeds delta * ||F_0|| = {step_limit:.3e}")
    if endpoints is not None:
        F0, F1 = endpoints
        d0 = np.linalg.norm(path.frames[0] - as_frame_matrix(F0))
        d1 = np.linalg.norm(path.frames[-1] - as_frame_matrix(F1))
        if d0 > 1e-12 * max(1.0, scale) or d1 > 1e-12 * max(1.0, scale):
            problems.append("endpoints do not match the requested frames")
    return PathCheck(
        ok=not problems,
        max_residual=max_res,
        max_step=max_step,
        step_limit=step_limit,
        message="; ".join(problems),
    )


def _commutant_gauge(F0: np.ndarray, F1: np.ndarray, operator: np.ndarray, cluster_tol: float):
    """Unitary V commuting with the operator's spectral blocks minimizing ||F0 - V F1||.

    Falls back to the identity when the spectrum cannot be clustered safely.
    """
    k = F0.shape[0]
    w, U = eigh_desc(operator)
    try:
        clusters = cluster_by_gap(w, cluster_tol)
    except ClusteringError:
        return np.eye(k, dtype=complex)
    A = U.conj().T @ F0
    B = U.conj().T @ F1
    blocks = np.zeros((k, k), dtype=complex)
    for cl in clusters:
        M = A[cl] @ B[cl].conj().T
        blocks[np.ix_(cl, cl)] = polar_unitary(M)
    return U @ blocks @ U.conj().T


def gauge_align(F0, F1, operator, cluster_tol: float = 1e-8) -> np.ndarray:
    """Best commutant-unitary alignment V F1 of F1 toward F0.

    V commutes with the clustered spectral projections of the operator, so it
    preserves both fiber constraints (operator and column norms) up to the
    cluster widths; blockwise it is the orthogonal-Procrustes optimum.
    """
    F0 = as_frame_matrix(F0, "F0")
    F1 = as_frame_matrix(F1, "F1")
    if F0.shape != F1.shape:
        raise ValueError(f"shape mismatch {F0.shape} vs {F1.shape}")
    S = as_complex_matrix(operator, "operator")
    V = _commutant_gauge(F0, F1, S, cluster_tol)
    return V @ F1


def _tangent_kick(rng: np.random.Generator, F: np.ndarray, size: float) -> np.ndarray:
    """Random perturbation of norm `size`, projected onto the fiber tangent space at F.

    The normal space at F is spanned by {A F : A Hermitian} + {F diag(d) : d real};
    the component along it is removed by least squares over that basis.
    """
    k, N = F.shape
    G0 = rng.standard_normal((k, N)) + 1j * rng.standard_normal((k, N))
    cols = []
    for i in range(k):
        E = np.zeros((k, k), dtype=complex)
        E[i, i] = 1.0
        cols.append(E @ F)
    for i in range(k):
        for j in range(i + 1, k):
            E = np.zeros((k, k), dtype=complex)
            E[i, j] = 1.0
            E[j, i] = 1.0
            cols.append(E @ F)
            E = np.zeros((k, k), dtype=complex)
            E[i, j] = 1.0j
            E[j, i] = -1.0j
            cols.append(E @ F)
    for j in range(N):
        D = np.zeros((k, N), dtype=complex)
        D[:, j] = F[:, j]
        cols.append(D)

    def realify(M):
        return np.concatenate([M.real.ravel(), M.imag.ravel()])

    basis = np.stack([realify(c) for c in cols], axis=1)
    rhs = realify(G0)
    coef, *_ = np.linalg.lstsq(basis, rhs, rcond=None)
    normal = basis @ coef
    tang = rhs - normal
    nrm = np.linalg.norm(tang)
    if nrm == 0.0:
        return np.zeros_like(F)
    tang = tang / nrm
    half = tang.shape[0] // 2
    T = (tang[:half] + 1j * tang[half:]).reshape(k, N)
    return size * T


def connect(F0, F1, target: FiberTarget, options: ConnectOptions | None = None) -> FramePath:
    """Discrete on-fiber path from F0 to F1; both must lie on the target fiber.

    Raises ValueError when an endpoint is off the fiber (beyond path_tol) and
    ConnectError (with the offending interpolation parameter in .t) when
    tracing fails after bisection and kick retries. The result is validated
    before being returned and is deterministic for a fixed seed.
    """
    opts = options or ConnectOptions()
    F0 = as_frame_matrix(F0, "F0").copy()
    F1 = as_frame_matrix(F1, "F1").copy()
    if F0.shape != F1.shape:
        raise ValueError(f"shape mismatch {F0.shape} vs {F1.shape}")
    if F0.shape != (target.k, target.N):
        raise ValueError(f"frame shape {F0.shape} does not match target")
    ptol2 = opts.path_tol**2
    for name, F in (("F0", F0), ("F1", F1)):
        phi = fiber_residual(F, target)
        if phi > ptol2:
            raise ValueError(f"{name} is off the fiber: residual {phi:.3e} > {ptol2:.3e}")

    scale = float(np.linalg.norm(F0))
    delta_abs = opts.delta * scale
    rng = np.random.default_rng(opts.seed)
    k = target.k

    if np.linalg.norm(F1 - F0) <= 1e-14 * max(1.0, scale):
        return FramePath(np.array([0.0, 1.0]), np.stack([F0, F1]), target)

    V = _commutant_gauge(F0, F1, target.operator, opts.cluster_tol)
    unwind = np.linalg.norm(V - np.eye(k)) > 1e-12 * np.sqrt(k)
    F1a = V @ F1 if unwind else F1

    proj_opts = FlowOptions(max_iters=opts.project_iters, tol=min(1e-20, 0.01 * ptol2), stall_iters=100)
    accept_tol = 0.5 * ptol2

    def project(X, kick_base=None):
        G, _rep = project_to_fiber(X, target, proj_opts)
        if fiber_residual(G, target) <= accept_tol:
            return G
        if kick_base is not None:
            for _ in range(opts.max_restarts):
                Xk = X + _tangent_kick(rng, kick_base, opts.kick_scale * scale)
                G, _rep = project_to_fiber(Xk, target, proj_opts)
                if fiber_residual(G, target) <= accept_tol:
                    return G
        return None

    def bridge(Fa, Fb, depth, t_hint):
        # both ends on the fiber; subdivide their chord until steps fit delta
        if depth > opts.max_refine_depth:
            raise ConnectError("bridging between fiber points exceeded depth", t=t_hint)
        gap = float(np.linalg.norm(Fb - Fa))
        M = project(0.5 * (Fa + Fb), kick_base=Fa)
        if M is None:
            raise ConnectError("projection failed while bridging fiber points", t=t_hint)
        if max(np.linalg.norm(M - Fa), np.linalg.norm(Fb - M)) >= gap * (1.0 - 1e-12):
            raise ConnectError("bridging made no progress between fiber points", t=t_hint)
        left = [] if np.linalg.norm(M - Fa) <= delta_abs else bridge(Fa, M, depth + 1, t_hint)
        right = [] if np.linalg.norm(Fb - M) <= delta_abs else bridge(M, Fb, depth + 1, t_hint)
        return left + [M] + right

    chord_len = float(np.linalg.norm(F1a - F0))
    n0 = max(1, int(np.ceil(1.5 * chord_len / delta_abs))) if delta_abs > 0 else 1
    min_width = 1.0 / (n0 * 2.0**opts.max_refine_depth)

    def chord(t):
        return (1.0 - t) * F0 + t * F1a

    pending = deque((i + 1) / n0 for i in range(n0))
    frames = [F0]
    t_cur, F_cur = 0.0, F0

    while pending:
        t_next = pending[0]
        width = t_next - t_cur
        G = project(chord(t_next), kick_base=F_cur)
        if G is None:
            if width > min_width:
                pending.appendleft(t_cur + 0.5 * width)
                continue
            raise ConnectError(
                f"could not project the chord near t={t_next:.6g}", t=float(t_next)
            )
        pending.popleft()
        frames.append(G)
        t_cur, F_cur = t_next, G

    if unwind:
        Z, theta = unitary_log_factors(V)
        dist = float(np.linalg.norm(F1a - F1))
        nsteps = max(1, int(np.ceil(dist / (0.5 * delta_abs)))) if delta_abs > 0 else 1
        for s in np.linspace(0.0, 1.0, nsteps + 1)[1:]:
            Vs = (Z * np.exp(1j * (1.0 - s) * theta)) @ Z.conj().T
            Fs = Vs @ F1
            if fiber_residual(Fs, target) > accept_tol:
                Fs = project(Fs)
                if Fs is None:
                    raise ConnectError("gauge unwind sample left the fiber", t=1.0)
            frames.append(Fs)

    frames[-1] = F1

    bridged = [frames[0]]
    for i, G in enumerate(frames[1:]):
        if np.linalg.norm(G - bridged[-1]) > delta_abs:
            bridged.extend(bridge(bridged[-1], G, 0, t_hint=(i + 1) / len(frames)))
        bridged.append(G)
    frames = bridged

    kept = [frames[0]]
    thresh = 1e-13 * max(1.0, scale)
    for F in frames[1:]:
        if np.linalg.norm(F - kept[-1]) > thresh:
            kept.append(F)
    if len(kept) == 1:
        kept.append(F1)
    else:
        kept[-1] = F1
    while len(kept) > 2 and np.linalg.norm(kept[-1] - kept[-2]) <= thresh:
        del kept[-2]

    arr = np.stack(kept)
    seg = np.sqrt(np.sum(np.abs(np.diff(arr, axis=0)) ** 2, axis=(1, 2)))
    total = float(np.sum(seg))
    if total <= 0.0:
        times = np.linspace(0.0, 1.0, len(kept))
    else:
        times = np.concatenate([[0.0], np.cumsum(seg) / total])
        times[-1] = 1.0
    path = FramePath(times, arr, target)

    check = validate_path(path, tol=opts.path_tol, delta=opts.delta, endpoints=(F0, F1))
    if not check:
        raise ConnectError(f"traced path failed validation: {check.message}", t=None)
    return path
