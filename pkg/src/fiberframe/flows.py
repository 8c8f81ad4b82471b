"""Repair flows: drive a frame onto a prescribed fiber.

The distance to the fiber is measured by

    Phi(F) = ||F F* - S||_F^2 + w * sum_j (||f_j||^2 - r_j)^2

with weight w = 1 by default. Two routes are provided: Armijo-backtracking
gradient descent on Phi in the ambient matrix space, and alternation of the
two exact constraint projections (operator part, then column rescaling).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ._linalg import as_hermitian, frame_polar_isometry, psd_sqrt
from .core import as_frame_matrix, norms_squared
from .fiber import FiberTarget

__all__ = [
    "FlowOptions",
    "FlowReport",
    "fiber_residual",
    "fiber_residual_gradient",
    "flow_to_fiber",
    "project_frame_operator",
    "project_norms",
    "alternate_projections",
    "newton_refine",
    "project_to_fiber",
]


@dataclass(frozen=True)
class FlowOptions:
    """Knobs shared by the repair flows.

    tol bounds the objective Phi at which a run counts as converged.
    step_init, armijo_c and backtrack_factor control the line search;
    stall_iters is the window with no meaningful progress after which a run
    is declared stalled; rank_rtol is the relative singular-value threshold
    for declaring rank loss. norm_weight scales the norms term of Phi.
    """

    max_iters: int = 2000
    tol: float = 1e-10
    step_init: float = 0.1
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    stall_iters: int = 50
    norm_weight: float = 1.0
    rank_rtol: float = 1e-12


@dataclass
class FlowReport:
    """Outcome of one flow run; residual_trace[i] is Phi after i accepted steps."""

    method: str
    status: str
    iterations: int
    final_residual: float
    residual_trace: np.ndarray
    message: str = ""

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "status": self.status,
            "iterations": self.iterations,
            "final_residual": self.final_residual,
            "residual_trace": [float(x) for x in self.residual_trace],
            "message": self.message,
        }


def fiber_residual(F, target: FiberTarget, norm_weight: float = 1.0) -> float:
    """Squared momentum distance Phi(F) to the target fiber."""
    F = as_frame_matrix(F)
    if F.shape != (target.k, target.N):
        raise ValueError(f"frame shape {F.shape} does not match target ({target.k}, {target.N})")
    delta = F @ F.conj().T - target.operator
    gap = norms_squared(F) - target.norms_sq
    return float(np.vdot(delta, delta).real + norm_weight * np.dot(gap, gap))


def fiber_residual_gradient(F, target: FiberTarget, norm_weight: float = 1.0) -> np.ndarray:
    """Gradient of Phi for the real inner product Re trace(A* B).

    grad Phi = 4 (F F* - S) F + 4 w F diag(||f_j||^2 - r_j).
    """
    F = as_frame_matrix(F)
    if F.shape != (target.k, target.N):
        raise ValueError(f"frame shape {F.shape} does not match target ({target.k}, {target.N})")
    delta = F @ F.conj().T - target.operator
    gap = norms_squared(F) - target.norms_sq
    return 4.0 * (delta @ F) + (4.0 * norm_weight) * (F * gap[None, :])


def _rank_ok(F: np.ndarray, rtol: float) -> bool:
    s = np.linalg.svd(F, compute_uv=False)
    return bool(s[0] > 0.0 and s[min(F.shape) - 1] >= rtol * s[0]) and F.shape[1] >= F.shape[0]


def flow_to_fiber(F0, target: FiberTarget, options: FlowOptions | None = None):
    """Armijo gradient descent on Phi from F0; returns (frame, FlowReport).

    Statuses: "converged" (Phi <= tol), "stalled" (line search exhausted or no
    relative progress across stall_iters steps), "lost_rank" (an iterate came
    within rank_rtol of dropping rank), "max_iters".
    """
    opts = options or FlowOptions()
    F = as_frame_matrix(F0).copy()
    w = opts.norm_weight
    phi = fiber_residual(F, target, w)
    trace = [phi]

    def report(status, message=""):
        return F, FlowReport(
            method="gradient",
            status=status,
            iterations=len(trace) - 1,
            final_residual=trace[-1],
            residual_trace=np.asarray(trace),
            message=message,
        )

    if phi <= opts.tol:
        return report("converged")

    step = opts.step_init
    for _ in range(opts.max_iters):
        if not _rank_ok(F, opts.rank_rtol):
            return report("lost_rank", "iterate is numerically rank deficient")
        G = fiber_residual_gradient(F, target, w)
        gnorm2 = float(np.vdot(G, G).real)
        if gnorm2 == 0.0:
            return report("stalled", "gradient vanished away from the fiber")
        s = step
        accepted = False
        for _ in range(80):
            Fn = F - s * G
            phin = fiber_residual(Fn, target, w)
            if phin <= phi - opts.armijo_c * s * gnorm2:
                accepted = True
                break
            s *= opts.backtrack_factor
        if not accepted:
            return report("stalled", "line search hit the floating-point floor")
        F, phi = Fn, phin
        trace.append(phi)
        step = min(s * 2.0, 1e8)
        if phi <= opts.tol:
            return report("converged")
        win = opts.stall_iters
        if len(trace) > win and trace[-1 - win] - phi <= 1e-6 * trace[-1 - win]:
            return report("stalled", f"no relative progress over {win} steps")
    return report("max_iters")


def project_frame_operator(F, operator, operator_sqrt=None, rank_rtol: float = 1e-12):
    """Closest-in-spirit move onto {G : G G* = S}: F -> S^(1/2) (F F*)^(-1/2) F.

    Computed through the polar isometry of F for stability. Raises ValueError
    when F is rank deficient (the move is undefined there).
    """
    F = as_frame_matrix(F)
    if operator_sqrt is None:
        operator_sqrt = psd_sqrt(as_hermitian(operator, name="operator"))
    Q = frame_polar_isometry(F, rank_rtol)
    return operator_sqrt @ Q


def project_norms(F, norms_sq) -> np.ndarray:
    """Rescale each column to the prescribed squared norm.

    Raises ValueError when a column is numerically zero (no direction to keep).
    """
    F = as_frame_matrix(F)
    r = np.asarray(norms_sq, dtype=float)
    n = norms_squared(F)
    if np.any(n <= 1e-300):
        raise ValueError("zero column cannot be rescaled to a positive norm")
    return F * np.sqrt(r / n)[None, :]


def alternate_projections(F0, target: FiberTarget, options: FlowOptions | None = None):
    """Alternate the two exact projections until Phi <= tol; returns (frame, report).

    Keeps the best iterate seen; declares "stalled" when the best has not
    improved for stall_iters rounds.
    """
    opts = options or FlowOptions()
    F = as_frame_matrix(F0).copy()
    w = opts.norm_weight
    S_sqrt = psd_sqrt(target.operator)
    phi = fiber_residual(F, target, w)
    trace = [phi]
    best_F, best_phi, best_it = F, phi, 0

    def report(G, status, message=""):
        return G, FlowReport(
            method="alternating",
            status=status,
            iterations=len(trace) - 1,
            final_residual=fiber_residual(G, target, w),
            residual_trace=np.asarray(trace),
            message=message,
        )

    if phi <= opts.tol:
        return report(F, "converged")

    for it in range(1, opts.max_iters + 1):
        try:
            F = project_frame_operator(F, target.operator, S_sqrt, opts.rank_rtol)
            F = project_norms(F, target.norms_sq)
        except ValueError as exc:
            return report(best_F, "lost_rank", str(exc))
        phi = fiber_residual(F, target, w)
        trace.append(phi)
        if phi < best_phi:
            best_F, best_phi, best_it = F, phi, it
        if phi <= opts.tol:
            return report(F, "converged")
        if it - best_it >= opts.stall_iters:
            return report(best_F, "stalled", f"best residual stuck for {opts.stall_iters} rounds")
    return report(best_F, "max_iters")


def newton_refine(F0, target: FiberTarget, options: FlowOptions | None = None):
    """Damped Gauss-Newton on the constraint map; returns (frame, FlowReport).

    The constraints (F F* - S, norms^2 - r) are quadratic in F, so near the
    fiber the minimum-norm Newton step (least squares on the realified
    Jacobian, whose columns are exact directional derivatives) converges
    quadratically. Steps are halved until Phi decreases; a step that cannot
    decrease Phi ends the run as "stalled". The Jacobian is rank-deficient by
    one (trace of the operator part equals the norms total) and the residual
    satisfies the same relation, so least squares stays consistent.
    """
    opts = options or FlowOptions()
    F = as_frame_matrix(F0).copy()
    k, N = F.shape
    w = opts.norm_weight
    iu = np.triu_indices(k, 1)

    def encode(W, g):
        return np.concatenate([np.diag(W).real, g, W[iu].real, W[iu].imag])

    phi = fiber_residual(F, target, w)
    trace = [phi]

    def report(status, message=""):
        return F, FlowReport(
            method="newton",
            status=status,
            iterations=len(trace) - 1,
            final_residual=trace[-1],
            residual_trace=np.asarray(trace),
            message=message,
        )

    if phi <= opts.tol:
        return report("converged")

    for _ in range(min(opts.max_iters, 60)):
        delta = F @ F.conj().T - target.operator
        gap = norms_squared(F) - target.norms_sq
        rhs = -encode(delta, gap)
        cols = []
        for part in (1.0, 1.0j):
            for i in range(k):
                for j in range(N):
                    E = np.zeros((k, N), dtype=complex)
                    E[i, j] = part
                    W = F @ E.conj().T + E @ F.conj().T
                    g = 2.0 * np.real(np.sum(np.conj(F) * E, axis=0))
                    cols.append(encode(W, g))
        J = np.stack(cols, axis=1)
        sol, *_ = np.linalg.lstsq(J, rhs, rcond=None)
        half = k * N
        dF = sol[:half].reshape(k, N) + 1j * sol[half:].reshape(k, N)
        step = 1.0
        accepted = False
        for _ in range(25):
            Fn = F + step * dF
            phin = fiber_residual(Fn, target, w)
            if phin < phi:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            return report("stalled", "no damped step decreases the residual")
        F, phi = Fn, phin
        trace.append(phi)
        if phi <= opts.tol:
            return report("converged")
    return report("max_iters")


def project_to_fiber(F0, target: FiberTarget, options: FlowOptions | None = None):
    """Projection onto the fiber; returns (frame, report).

    A short alternating-projection phase contracts toward the fiber, a Newton
    polish finishes quadratically, and gradient descent plus a second polish
    serve as the fallback when the polish stalls outside its basin.
    """
    opts = options or FlowOptions()
    phases = []
    traces = []

    F, rep = alternate_projections(F0, target, replace(opts, max_iters=min(200, opts.max_iters)))
    phases.append("alternating")
    traces.append(rep.residual_trace)
    if not rep.converged:
        F, rep = newton_refine(F, target, opts)
        phases.append("newton")
        traces.append(rep.residual_trace[1:])
    if not rep.converged:
        F, rep = flow_to_fiber(F, target, opts)
        phases.append("gradient")
        traces.append(rep.residual_trace[1:])
        if not rep.converged:
            F, rep = newton_refine(F, target, opts)
            phases.append("newton")
            traces.append(rep.residual_trace[1:])
    trace = np.concatenate([t for t in traces if t.size])
    combined = FlowReport(
        method="+".join(phases),
        status=rep.status,
        iterations=len(trace) - 1,
        final_residual=rep.final_residual,
        residual_trace=trace,
        message=rep.message,
    )
    return F, combined
