"""Dense semidefinite feasibility and optimization over Gram spectrahedra.

The engine is a primal-dual path-following interior-point method with
Nesterov-Todd scaling, written for dense desk-scale problems (N up to a few
dozen).  Problems are parametrized directly by the affine section
X(x) = G0 + sum_i x_i B_i, so iterates stay on the Gram manifold exactly.

Feasibility runs a trace-penalized phase 1: maximize -t subject to
X(x) + t I >= 0.  A strictly negative optimum t gives an interior point; a
strictly positive optimum certifies infeasibility through the dual variable,
a PSD matrix orthogonal to every B_i with negative pairing against G0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .config import Config, DEFAULT
from .errors import Infeasible
from .gram import GramSpace, gram_apply
from .matrices import numerical_rank, sym

_TAU = 0.98  # fraction-to-boundary factor


@dataclass
class SdpProblem:
    space: GramSpace
    objective: np.ndarray | None = None  # length-m vector over kernel coordinates

    def __post_init__(self):
        if self.objective is not None and len(self.objective) != self.space.m:
            raise ValueError("objective length must equal the kernel dimension")


@dataclass
class SdpSolution:
    point: np.ndarray
    status: str                    # optimal | infeasible | max-iterations
    objective_value: float
    numerical_rank: int
    duality_gap: float
    x: np.ndarray
    certificate: np.ndarray | None = None
    iterations: int = 0
    gap_history: list[float] = field(default_factory=list)


def _max_step(S: np.ndarray, dS: np.ndarray) -> float:
    """Largest alpha with S + alpha dS still positive definite (S PD)."""
    L = np.linalg.cholesky(S)
    Linv = np.linalg.inv(L)
    w = np.linalg.eigvalsh(sym(Linv @ dS @ Linv.T))
    lo = float(w[0])
    if lo >= -1e-16:
        return np.inf
    return -1.0 / lo


def _ipm_maximize(G0: np.ndarray, basis: list[np.ndarray], c: np.ndarray,
                  x0: np.ndarray, config: Config):
    """Maximize c.x over {x : G0 + sum x_i B_i >= 0} from a strictly feasible x0.

    Returns (x, S, Z, status, gap, iterations, gap_history).
    """
    N = G0.shape[0]
    m = len(basis)
    opts = config.solver
    if m == 0:
        S = G0.copy()
        return np.zeros(0), S, np.zeros_like(G0), "optimal", 0.0, 0, []

    Bmat = np.stack(basis)                       # (m, N, N)
    x = np.asarray(x0, dtype=float).copy()
    S = sym(G0 + np.tensordot(x, Bmat, axes=1))
    Z = np.eye(N)
    history: list[float] = []
    status = "max-iterations"
    iters = 0

    for iters in range(1, opts.max_iter + 1):
        r_d = np.tensordot(Bmat, Z, axes=([1, 2], [0, 1])) + c
        mu = float(np.sum(Z * S)) / N
        obj = float(c @ x)
        scale = 1.0 + abs(obj) + float(np.abs(Z).max())
        gap = float(np.sum(Z * S))
        history.append(gap)
        if gap <= opts.gap_tol * scale and np.abs(r_d).max() <= 1e3 * opts.gap_tol * scale:
            status = "optimal"
            break

        # Nesterov-Todd scaling point W with W Z W = S
        ws, Vs = np.linalg.eigh(S)
        ws = np.clip(ws, 1e-300, None)
        sqS = (Vs * np.sqrt(ws)) @ Vs.T
        isS = (Vs / np.sqrt(ws)) @ Vs.T
        Sinv = (Vs / ws) @ Vs.T
        Mmid = sym(sqS @ Z @ sqS)
        wm, Vm = np.linalg.eigh(Mmid)
        wm = np.clip(wm, 1e-300, None)
        half = (Vm * np.sqrt(wm)) @ Vm.T
        Winv = sym(isS @ half @ isS)

        WBW = np.stack([sym(Winv @ B @ Winv) for B in basis])
        Schur = np.tensordot(Bmat, WBW, axes=([1, 2], [1, 2]))
        Schur = (Schur + Schur.T) / 2
        try:
            solve = lambda rhs: np.linalg.solve(Schur, rhs)
            solve(np.zeros(m))
        except np.linalg.LinAlgError:
            solve = lambda rhs: np.linalg.lstsq(Schur, rhs, rcond=None)[0]

        def direction(R):
            rhs = np.tensordot(Bmat, R, axes=([1, 2], [0, 1])) + r_d
            try:
                dx = solve(rhs)
            except np.linalg.LinAlgError:
                dx = np.linalg.lstsq(Schur, rhs, rcond=None)[0]
            dS = sym(np.tensordot(dx, Bmat, axes=1))
            dZ = sym(R - Winv @ dS @ Winv)
            return dx, dS, dZ

        # predictor
        dx_a, dS_a, dZ_a = direction(-Z)
        aS = min(1.0, _TAU * _max_step(S, dS_a))
        aZ = min(1.0, _TAU * _max_step(Z, dZ_a))
        mu_aff = float(np.sum((Z + aZ * dZ_a) * (S + aS * dS_a))) / N
        sigma = float(np.clip((max(mu_aff, 0.0) / mu) ** 3, 1e-10, 1.0))

        # combined centering step
        dx, dS, dZ = direction(sigma * mu * Sinv - Z)
        aS = min(1.0, _TAU * _max_step(S, dS))
        aZ = min(1.0, _TAU * _max_step(Z, dZ))
        if max(aS, aZ) < opts.step_tol:
            status = "optimal" if gap <= 1e2 * opts.gap_tol * scale else "max-iterations"
            break

        x_new = x + aS * dx
        S_new = sym(G0 + np.tensordot(x_new, Bmat, axes=1))
        shrink = 0
        while np.linalg.eigvalsh(S_new)[0] <= 0 and shrink < 40:
            aS *= 0.7
            x_new = x + aS * dx
            S_new = sym(G0 + np.tensordot(x_new, Bmat, axes=1))
            shrink += 1
        Z_new = sym(Z + aZ * dZ)
        shrink = 0
        while np.linalg.eigvalsh(Z_new)[0] <= 0 and shrink < 40:
            aZ *= 0.7
            Z_new = sym(Z + aZ * dZ)
            shrink += 1
        x, S, Z = x_new, S_new, Z_new

    gap = float(np.sum(Z * S))
    return x, S, Z, status, gap, iters, history


def _phase1(space_G0: np.ndarray, basis: list[np.ndarray], config: Config):
    """Maximize the spectral margin: returns (margin, x, Z_lift, status, history)."""
    N = space_G0.shape[0]
    lo = float(np.linalg.eigvalsh(space_G0)[0])
    t0 = max(1.0, -1.5 * lo + 0.5)
    lifted = list(basis) + [np.eye(N)]
    c = np.zeros(len(lifted))
    c[-1] = -1.0
    x0 = np.zeros(len(lifted))
    x0[-1] = t0
    x, S, Z, status, gap, iters, hist = _ipm_maximize(space_G0, lifted, c, x0, config)
    margin = -float(x[-1])
    return margin, x[:-1], Z, status, iters, hist


def solve_feasibility(space: GramSpace, config: Config = DEFAULT) -> SdpSolution:
    """Strictly feasible point of GS(f) when one exists, else a separation certificate.

    The returned point maximizes the smallest eigenvalue over the section.
    Status is "infeasible" when even the best point needs a diagonal shift
    above the feasibility tolerance.
    """
    G0 = space.G0
    scale = 1.0 + float(np.abs(G0).max())
    if space.m == 0:
        w, V = np.linalg.eigh(G0)
        lo = float(w[0])
        feasible = lo >= -config.solver.feas_tol * scale
        cert = None if feasible else np.outer(V[:, 0], V[:, 0])
        return SdpSolution(G0.copy(), "optimal" if feasible else "infeasible",
                           lo, numerical_rank(G0, config.tolerances.rank_tol),
                           0.0, np.zeros(0), certificate=cert)
    margin, x, Zl, status, iters, hist = _phase1(G0, space.kernel_basis, config)
    X = space.point(x)
    if status == "max-iterations" and abs(margin) <= 1e-5 * scale:
        status = "optimal"  # flat problems stall near the boundary; margin ~ 0
    if margin < -config.solver.feas_tol * scale:
        cert = sym(Zl / np.trace(Zl))
        return SdpSolution(X, "infeasible", margin,
                           numerical_rank(X, config.tolerances.rank_tol),
                           float(hist[-1]) if hist else 0.0, x,
                           certificate=cert, iterations=iters, gap_history=hist)
    return SdpSolution(X, status, margin,
                       numerical_rank(X, config.tolerances.rank_tol),
                       float(hist[-1]) if hist else 0.0, x,
                       iterations=iters, gap_history=hist)


def solve_affine(G0: np.ndarray, basis: list[np.ndarray], c: np.ndarray,
                 config: Config = DEFAULT) -> SdpSolution:
    """Maximize c.x over {x : G0 + sum x_i B_i >= 0} (raw affine interface).

    Runs phase 1 for an interior start; flat sections get a tiny fixed
    diagonal shift so the path stays well defined.  Raises Infeasible when
    phase 1 proves the section misses the PSD cone.
    """
    G0 = np.asarray(G0, dtype=float)
    scale = 1.0 + float(np.abs(G0).max())
    if len(basis) == 0:
        lo = float(np.linalg.eigvalsh(G0)[0])
        if lo < -config.solver.feas_tol * scale:
            raise Infeasible("fixed matrix is not PSD")
        return SdpSolution(G0.copy(), "optimal", 0.0,
                           numerical_rank(G0, config.tolerances.rank_tol),
                           0.0, np.zeros(0))
    margin, x0, Zl, p1status, p1iters, _ = _phase1(G0, basis, config)
    if margin < -config.solver.feas_tol * scale:
        raise Infeasible(f"section separated from the PSD cone (margin {margin:.2e})")
    shift = 0.0 if margin > 1e-6 * scale else max(0.0, -margin) + 10 * config.solver.gap_tol * scale
    G0s = G0 + shift * np.eye(G0.shape[0])
    x, S, Z, status, gap, iters, hist = _ipm_maximize(G0s, list(basis),
                                                      np.asarray(c, dtype=float),
                                                      x0, config)
    Bmat = np.stack(basis)
    X = sym(G0 + np.tensordot(x, Bmat, axes=1))
    return SdpSolution(X, status, float(np.asarray(c) @ x),
                       numerical_rank(X, config.tolerances.rank_tol),
                       gap, x, iterations=p1iters + iters, gap_history=hist)


def solve_linear(space: GramSpace, c, config: Config = DEFAULT) -> SdpSolution:
    """Maximize the linear functional c over kernel coordinates of GS(f)."""
    c = np.asarray(c, dtype=float)
    if c.shape != (space.m,):
        raise ValueError(f"objective must have length m={space.m}")
    return solve_affine(space.G0, space.kernel_basis, c, config)


def entry_functional(space: GramSpace, L: np.ndarray) -> np.ndarray:
    """Kernel coordinates of the functional X -> <L, X> (Frobenius pairing)."""
    return np.array([float(np.sum(L * B)) for B in space.kernel_basis])


# ---------------------------------------------------------------------------
# Rank minimization heuristic
# ---------------------------------------------------------------------------


def _low_rank_residual_system(space: GramSpace):
    """Target vector and pair bookkeeping for the factorized Gram fit."""
    groups = list(space.pair_groups.items())
    f = space.f
    target = np.array([float(f.coefficient(beta)) for beta, _ in groups])
    return groups, target


def low_rank_fit(space: GramSpace, r: int, rng: np.random.Generator,
                 restarts: int = 8, config: Config = DEFAULT,
                 init: np.ndarray | None = None) -> np.ndarray | None:
    """Search for C (r x N) with m_P^T C^T C m_P = f by Levenberg-Marquardt.

    Returns C on success (coefficient residual below residual_tol * |f|),
    None when every restart stalls.  X = C^T C is then a PSD Gram matrix of
    rank at most r.
    """
    groups, target = _low_rank_residual_system(space)
    N = space.N
    fscale = max(float(np.abs(target).max()), 1e-30)
    amp = np.sqrt(max(np.trace(space.G0) / max(N, 1), fscale ** (1 / 2), 1e-6))

    def resid(vec):
        C = vec.reshape(r, N)
        G = C.T @ C
        vals = np.empty(len(groups))
        for g, (beta, pairs) in enumerate(groups):
            acc = 0.0
            for (i, j) in pairs:
                acc += G[i, j] if i == j else 2.0 * G[i, j]
            vals[g] = acc
        return vals - target

    def jac(vec):
        C = vec.reshape(r, N)
        J = np.zeros((len(groups), r, N))
        for g, (_, pairs) in enumerate(groups):
            for (i, j) in pairs:
                J[g, :, i] += 2.0 * C[:, j]
                if i != j:
                    J[g, :, j] += 2.0 * C[:, i]
        return J.reshape(len(groups), r * N)

    tol = config.tolerances.residual_tol * fscale
    for attempt in range(restarts):
        if init is not None and attempt == 0:
            C0 = init
        else:
            C0 = rng.normal(scale=amp, size=(r, N))
        method = "lm" if len(groups) >= r * N else "trf"
        sol = least_squares(resid, C0.ravel(), jac=jac, method=method,
                            xtol=1e-14, ftol=1e-14, gtol=1e-14, max_nfev=400)
        if np.abs(sol.fun).max() < tol:
            return sol.x.reshape(r, N)
    return None


def minimize_rank(space: GramSpace, trials: int = 10,
                  config: Config = DEFAULT) -> SdpSolution:
    """Best-effort minimum-rank point of GS(f); an upper bound on the SOS length.

    Combines extreme points of random linear functionals, trace
    minimization, and factorized local fits at increasing target rank.
    The result is not a certificate of minimal length.
    """
    feas = solve_feasibility(space, config)
    if feas.status == "infeasible":
        raise Infeasible("Gram spectrahedron is empty")
    rng = np.random.default_rng(config.seed)
    rank_tol = config.tolerances.rank_tol
    best = feas
    best_rank = numerical_rank(feas.point, rank_tol)

    candidates: list[np.ndarray] = []
    trace_obj = -np.array([float(np.trace(B)) for B in space.kernel_basis])
    if space.m > 0:
        for c in [trace_obj] + [rng.normal(size=space.m) for _ in range(min(3, trials))]:
            norm = np.linalg.norm(c)
            if norm == 0:
                continue
            try:
                sol = solve_linear(space, c / norm, config)
                candidates.append(sol.point)
            except Infeasible:  # pragma: no cover - feasibility already checked
                raise
    for X in candidates:
        r = numerical_rank(X, rank_tol)
        if r < best_rank:
            best_rank = r
            best = SdpSolution(X, "optimal", 0.0, r, 0.0, space.coordinates(X))

    # factorized descent: accept the smallest rank that fits f
    for r in range(1, best_rank):
        seed_init = None
        if candidates:
            w, V = np.linalg.eigh(sym(candidates[0]))
            idx = np.argsort(w)[::-1][:r]
            seed_init = (V[:, idx] * np.sqrt(np.clip(w[idx], 0, None))).T
        C = low_rank_fit(space, r, rng, restarts=max(4, trials), config=config,
                         init=seed_init)
        if C is not None:
            X = sym(C.T @ C)
            rr = numerical_rank(X, rank_tol)
            best = SdpSolution(X, "optimal", 0.0, rr, 0.0, space.coordinates(X))
            best_rank = rr
            break

    residual = (gram_apply(space, best.point).to_float() - space.f.to_float()).max_norm()
    if residual > 1e-6 * max(space.f.max_norm(), 1.0):
        raise AssertionError("rank-minimized point drifted off the Gram space")
    return best
