"""Bootstrap composite multilevel solver.

A hierarchy is built by pairwise aggregation along a greedy max-weight
matching whose edge weights measure how well the current driving vector is
preserved, the coarse operators are Galerkin triple products, and the cycle
is a symmetric V-cycle (forward Gauss-Seidel down, backward up) with a
dense LU at the coarsest level. Hierarchies are composed multiplicatively:
each bootstrap step smooths a fresh random vector through the current
composite, estimates the convergence factor from the energy-norm decay,
and, until the target factor (or the component cap) is reached, spawns a
new hierarchy driven by the slow error the composite left behind.

The composite application order is fixed: x starts at zero and each
component corrects x <- x + B_r^{-1} (b - A x) in build order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from . import kernels
from .errors import (
    EmptyComposite,
    NotSpd,
    SingularCoarsest,
    ZeroDiagonal,
)
from .graph import _csr64
from .seeding import generator


@dataclass(frozen=True)
class SmootherConfig:
    """Relaxation settings for the V-cycle and stand-alone smoothing.

    kind is "gs" (Gauss-Seidel; forward pre-sweep, backward post-sweep)
    or "jacobi" (weighted, damping jacobi_omega in (0, 1], direction
    irrelevant). sweeps is the number of passes per smoothing call.
    """

    kind: str = "gs"
    sweeps: int = 1
    jacobi_omega: float = 2.0 / 3.0

    def __post_init__(self):
        if self.kind not in ("gs", "jacobi"):
            raise ValueError(f"unknown smoother kind {self.kind!r}")
        if self.sweeps < 1:
            raise ValueError("sweeps must be >= 1")
        if not 0.0 < self.jacobi_omega <= 1.0:
            raise ValueError("jacobi_omega must lie in (0, 1]")


def _checked_diagonal(A) -> np.ndarray:
    diag = A.diagonal()
    if (diag <= 0).any():
        bad = int(np.flatnonzero(diag <= 0)[0])
        raise ZeroDiagonal(f"nonpositive diagonal entry at row {bad}")
    return diag


def _gs_sweeps(A, diag, x, b, cfg: SmootherConfig, direction: str) -> None:
    n = A.shape[0]
    if direction == "forward":
        span = (0, n, 1)
    else:
        span = (n - 1, -1, -1)
    for _ in range(cfg.sweeps):
        kernels.gauss_seidel(A.indptr, A.indices, A.data, diag, x, b, *span)


def smoother_apply(A, x, b, cfg: SmootherConfig = SmootherConfig(),
                   direction: str = "forward") -> np.ndarray:
    """One smoothing call: cfg.sweeps relaxation passes starting from x.

    Gauss-Seidel honors `direction` ("forward" or "backward"); weighted
    Jacobi ignores it. Returns a new vector.

    Raises ZeroDiagonal when A has a nonpositive diagonal entry.
    """
    A = _csr64(A)
    if direction not in ("forward", "backward"):
        raise ValueError(f"unknown direction {direction!r}")
    diag = _checked_diagonal(A)
    y = np.array(x, dtype=np.float64, copy=True)
    b = np.asarray(b, dtype=np.float64)
    if y.shape != b.shape or y.shape[0] != A.shape[0]:
        raise ValueError("dimension mismatch between A, x, b")
    if cfg.kind == "gs":
        _gs_sweeps(A, diag, y, b, cfg, direction)
    else:
        for _ in range(cfg.sweeps):
            y = y + cfg.jacobi_omega * (b - A @ y) / diag
    return y


def smooth_vector(apply_inverse, A, t: int, start: np.ndarray) -> np.ndarray:
    """Run t error-propagation steps u <- (I - Op^{-1} A) u on a homogeneous system.

    `apply_inverse` realizes Op^{-1} (e.g. a composite or a single V-cycle).
    """
    if t < 1:
        raise ValueError("iteration count must be >= 1")
    u = np.array(start, dtype=np.float64, copy=True)
    for _ in range(t):
        u -= apply_inverse(A @ u)
    return u


@dataclass(frozen=True)
class _Level:
    A: sp.csr_matrix
    diag: np.ndarray
    P: sp.csr_matrix  # prolongator from the next-coarser level


@dataclass(frozen=True)
class AmgHierarchy:
    """One multilevel component.

    levels holds the fine-to-coarse chain (empty when the finest grid is
    already at or below the coarse-size cap, in which case the cycle is a
    bare LU solve). coarse_lu factors the coarsest operator densely.
    """

    levels: tuple
    coarse_n: int
    coarse_lu: tuple
    driving_vector: np.ndarray

    @property
    def depth(self) -> int:
        """Number of levels including the coarsest."""
        return len(self.levels) + 1

    @property
    def sizes(self) -> tuple:
        return tuple(lv.A.shape[0] for lv in self.levels) + (self.coarse_n,)


def _matching_prolongator(A, u):
    """Pairwise-aggregation prolongator driven by u.

    Edge weights score how much of the pair's energy the single coarse
    direction (u_i, u_j) keeps; pairs are formed greedily in decreasing
    weight, ties broken toward smaller (i, j). Pair columns are
    (u_i, u_j)/||.||, singleton columns sign(u_i) (1 when u_i = 0), so
    columns are orthonormal and P^T u reproduces u exactly.
    """
    n = A.shape[0]
    upper = sp.triu(A, k=1).tocoo()
    ei = upper.row.astype(np.int64)
    ej = upper.col.astype(np.int64)
    aij = upper.data
    diag = A.diagonal()
    match = np.full(n, -1, dtype=np.int64)
    if len(ei):
        denom = diag[ei] * u[ei] ** 2 + diag[ej] * u[ej] ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            score = 1.0 - 2.0 * aij * u[ei] * u[ej] / denom
        score[denom == 0] = 1.0
        order = np.lexsort((ej, ei, -score))
        kernels.greedy_match(order, ei, ej, match)
    rows = np.empty(n, dtype=np.int64)
    cols = np.empty(n, dtype=np.int64)
    vals = np.empty(n, dtype=np.float64)
    pos = 0
    nc = 0
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for i in range(n):
        j = int(match[i])
        if j != -1 and j < i:
            continue  # pair already emitted at its smaller endpoint
        if j == -1:
            rows[pos] = i
            cols[pos] = nc
            vals[pos] = 1.0 if u[i] == 0 else math.copysign(1.0, u[i])
            pos += 1
        else:
            nrm = math.hypot(u[i], u[j])
            if nrm == 0:
                wi = wj = inv_sqrt2
            else:
                wi, wj = u[i] / nrm, u[j] / nrm
            rows[pos] = i
            cols[pos] = nc
            vals[pos] = wi
            rows[pos + 1] = j
            cols[pos + 1] = nc
            vals[pos + 1] = wj
            pos += 2
        nc += 1
    P = sp.csr_matrix(
        (vals[:pos], (rows[:pos], cols[:pos])), shape=(n, nc)
    )
    P.sort_indices()
    return _csr64(P), P.T @ u


def _factor_coarse(A) -> tuple:
    dense = np.asarray(A.toarray(), dtype=np.float64)
    try:
        lu, piv = sla.lu_factor(dense, check_finite=False)
    except Exception as exc:  # LinAlgError on exact singularity
        raise SingularCoarsest(str(exc)) from None
    udiag = np.abs(np.diag(lu))
    scale = max(np.abs(dense).max(), 1.0)
    if udiag.size and udiag.min() <= 1e-13 * scale:
        raise SingularCoarsest(
            f"coarsest operator is numerically singular (pivot {udiag.min():.3e})"
        )
    return lu, piv


def build_hierarchy(A, u, max_levels: int = 20, max_coarse_size: int = 40) -> AmgHierarchy:
    """Coarsen A by matching aggregation until the size cap or level cap.

    Parameters
    ----------
    A : scipy CSR, SPD
    u : ndarray
        Driving vector; each prolongator reproduces its level's restriction
        of u exactly.
    max_levels : int
        Cap on total levels including the finest.
    max_coarse_size : int
        Coarsening stops once the operator is at most this large.

    Raises SingularCoarsest when the dense coarsest factorization breaks down.
    """
    A = _csr64(A.tocsr())
    u = np.asarray(u, dtype=np.float64)
    levels = []
    cur_A, cur_u = A, u
    while cur_A.shape[0] > max_coarse_size and len(levels) + 1 < max_levels:
        P, next_u = _matching_prolongator(cur_A, cur_u)
        if P.shape[1] >= cur_A.shape[0]:
            break  # nothing matched; coarsening stalled
        next_A = _csr64((P.T @ cur_A @ P).tocsr())
        next_A.sort_indices()
        levels.append(_Level(A=cur_A, diag=_checked_diagonal(cur_A), P=P))
        cur_A, cur_u = next_A, next_u
    return AmgHierarchy(
        levels=tuple(levels),
        coarse_n=cur_A.shape[0],
        coarse_lu=_factor_coarse(cur_A),
        driving_vector=u,
    )


def _vcycle(h: AmgHierarchy, lvl: int, b, cfg: SmootherConfig) -> np.ndarray:
    if lvl == len(h.levels):
        return sla.lu_solve(h.coarse_lu, b, check_finite=False)
    level = h.levels[lvl]
    A, diag, P = level.A, level.diag, level.P
    x = np.zeros_like(b)
    if cfg.kind == "gs":
        _gs_sweeps(A, diag, x, b, cfg, "forward")
    else:
        for _ in range(cfg.sweeps):
            x = x + cfg.jacobi_omega * (b - A @ x) / diag
    r = b - A @ x
    x = x + P @ _vcycle(h, lvl + 1, P.T @ r, cfg)
    if cfg.kind == "gs":
        _gs_sweeps(A, diag, x, b, cfg, "backward")
    else:
        for _ in range(cfg.sweeps):
            x = x + cfg.jacobi_omega * (b - A @ x) / diag
    return x


def vcycle_apply(h: AmgHierarchy, b, cfg: SmootherConfig = SmootherConfig()) -> np.ndarray:
    """Apply one symmetric V-cycle to the right-hand side b (zero start).

    Pre-smoothing runs forward, post-smoothing backward, so the cycle
    operator is symmetric positive definite. A hierarchy with no levels
    solves exactly by LU.
    """
    b = np.asarray(b, dtype=np.float64)
    return _vcycle(h, 0, b, cfg)


@dataclass
class CompositeSolver:
    """Multiplicative composition of V-cycle components on one matrix.

    rho_history[r] is the convergence-factor estimate measured with the
    first r+1 components active; it is recorded every bootstrap round, so
    the last entry describes the returned composite.
    """

    matrix: sp.csr_matrix
    components: list = field(default_factory=list)
    smoother: SmootherConfig = SmootherConfig()
    target_rho: float = 1e-8
    rho_mode: str = "total"
    per_step_target: float = 0.0
    rho_history: list = field(default_factory=list)
    stop_reason: str = ""

    @property
    def n_components(self) -> int:
        return len(self.components)


def _composite_apply(matrix, components, smoother, b) -> np.ndarray:
    x = np.zeros_like(b)
    for h in components:
        r = b - matrix @ x
        x = x + vcycle_apply(h, r, smoother)
    return x


def composite_apply(solver: CompositeSolver, b) -> np.ndarray:
    """Apply the composite inverse: x starts at 0 and every component
    corrects x <- x + B_r^{-1}(b - A x) in build order."""
    if not solver.components:
        raise EmptyComposite("composite has no components")
    b = np.asarray(b, dtype=np.float64)
    return _composite_apply(solver.matrix, solver.components, solver.smoother, b)


@dataclass(frozen=True)
class SmoothVectorSet:
    """Algebraically smooth vectors harvested by the bootstrap.

    Column r drove hierarchy r; column 0 is the all-ones direction, later
    columns the smoothed random vectors. Columns are stored with unit
    Euclidean norm: the raw iterates decay by the composite's factor each
    smoothing step, so after a few rounds their magnitudes span hundreds
    of orders and would swamp any relative SVD truncation. Scale carries
    no information here (matching weights and prolongator columns are
    invariant under scaling of the driving vector).
    """

    vectors: np.ndarray
    smoothing_iterations: int

    @property
    def count(self) -> int:
        return self.vectors.shape[1]


def _energy_norm(A, v) -> float:
    q = float(v @ (A @ v))
    if q < -1e-10 * float(v @ v):
        raise NotSpd(f"quadratic form went negative ({q:.3e}); matrix is not SPD")
    return math.sqrt(max(q, 0.0))


def bootstrap(L_S, target_rho: float = 1e-8, rho_mode: str = "total",
              max_components: int = 40, smooth_iters: int = 15,
              seed: int = 0, smoother: SmootherConfig = SmootherConfig(),
              max_levels: int = 20, max_coarse_size: int = 40
              ) -> tuple[CompositeSolver, SmoothVectorSet]:
    """Grow a composite solver until its estimated factor meets the target.

    The all-ones vector drives the first hierarchy and is stored as the
    first smooth vector. Each round draws a random start uniform on
    (-1, 1) orthogonalized against ones, smooths it through the current
    composite for `smooth_iters` homogeneous steps, and estimates
    rho_hat = (||u_t||_A / ||u_0||_A)^(1/t). With rho_mode "total" the
    stop target is target_rho**(1/t) per step; "per_step" compares
    directly. The smoothed vector that failed the test drives the next
    hierarchy and joins the vector set.

    Raises NotSpd when an energy norm goes negative or the composite
    expands error (both impossible for an SPD matrix).
    """
    if rho_mode not in ("total", "per_step"):
        raise ValueError(f"unknown rho_mode {rho_mode!r}")
    if target_rho < 0:
        raise ValueError("target_rho must be >= 0")
    if max_components < 1:
        raise ValueError("max_components must be >= 1")
    if smooth_iters < 1:
        raise ValueError("smooth_iters must be >= 1")
    L_S = _csr64(L_S.tocsr())
    n = L_S.shape[0]
    if rho_mode == "total":
        per_step = target_rho ** (1.0 / smooth_iters) if target_rho > 0 else 0.0
    else:
        per_step = target_rho
    ones = np.full(n, 1.0 / math.sqrt(n))
    components = [build_hierarchy(L_S, ones, max_levels, max_coarse_size)]
    stored = [ones]
    rng = generator(seed, "bootstrap")
    history: list = []
    stop_reason = ""
    while True:
        u0 = rng.uniform(-1.0, 1.0, n)
        u0 -= u0.mean()
        norm0 = _energy_norm(L_S, u0)
        ut = smooth_vector(
            lambda r: _composite_apply(L_S, components, smoother, r),
            L_S, smooth_iters, u0,
        )
        # Rescale before measuring: once the composite is strong, t smoothing
        # steps can shrink the iterate past the denormal floor, where the
        # quadratic form and the Euclidean norm underflow inconsistently.
        scale = float(np.max(np.abs(ut)))
        if not math.isfinite(scale):
            raise NotSpd(
                "composite iterate became non-finite; matrix is not SPD "
                "or the smoother diverges"
            )
        if scale == 0.0 or norm0 == 0.0:
            history.append(0.0)
            stop_reason = "target"
            break
        ut = ut / scale
        norm_t = _energy_norm(L_S, ut)
        if norm_t == 0.0:
            history.append(0.0)
            stop_reason = "target"
            break
        log_rho = (math.log(norm_t) + math.log(scale) - math.log(norm0)) / smooth_iters
        rho_hat = math.exp(log_rho)
        if rho_hat > 1.0 + 1e-8:
            raise NotSpd(
                f"composite expanded error (rho_hat = {rho_hat:.6f}); matrix is not SPD"
            )
        history.append(rho_hat)
        if rho_hat <= per_step:
            stop_reason = "target"
            break
        if len(components) >= max_components:
            stop_reason = "max_components"
            break
        ut = ut / np.linalg.norm(ut)
        components.append(build_hierarchy(L_S, ut, max_levels, max_coarse_size))
        stored.append(ut)
    solver = CompositeSolver(
        matrix=L_S,
        components=components,
        smoother=smoother,
        target_rho=target_rho,
        rho_mode=rho_mode,
        per_step_target=per_step,
        rho_history=history,
        stop_reason=stop_reason,
    )
    return solver, SmoothVectorSet(
        vectors=np.column_stack(stored), smoothing_iterations=smooth_iters
    )
