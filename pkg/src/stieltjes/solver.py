"""Initial value problems in which each component has its own derivator.

The system solved here is, component by component,

    d x_i / d g_i (t) = f_i(t, x(t)),    x(t0) = x0,

on a horizon ``[t0, t0 + sigma)``.  Every derivator may carry jumps, and a
jump of ``g_i`` at ``t`` forces the exact impulse update

    x_i(t+) = x_i(t) + f_i(t, x(t)) * jump_i(t),

with the pre-jump state on the right: that is the only update compatible
with left-continuity and the integral over ``[t0, t)``.  Between atoms the
dynamics follow the absolutely continuous parts of the derivators.

Two solvers share one grid (a uniform partition united with every jump
abscissa):

* ``solve_euler`` is the forward scheme: per step, impulse first with the
  pre-jump state, then the continuous sub-step using the post-jump state
  and the increment of the continuous part of each ``g_i``.  On pure-jump
  derivators the recursion *is* the solution, to machine precision.
* ``solve_picard`` iterates the integral-equation map
  ``x -> x0 + integral of f(s, x(s)) d g`` with piecewise-linear
  interpolation of the iterate between grid points (discontinuous across
  atoms: post-jump values start each segment).

``residual`` measures how well any trace satisfies the integral equation;
``apriori_bound`` and ``uniqueness_certificate`` implement the growth-bound
and uniqueness machinery built on Osgood moduli, and
``horizon_for_ball`` searches for a horizon on which the integral operator
provably maps the domain ball into itself.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .derivator import Derivator, sum_derivators
from .errors import (
    BoundInapplicableError,
    ConfigurationError,
    DomainExitError,
    IntegrandError,
    NoCertifiedHorizonError,
    NonConvergenceError,
    SolverError,
)
from .measure import QuadratureConfig, _gl_rule, integrate
from .moduli import OmegaTransform, OsgoodModulus, bihari_bound, osgood_check

__all__ = [
    "IVProblem",
    "SolutionTrace",
    "build_grid",
    "solve_euler",
    "solve_picard",
    "residual",
    "horizon_for_ball",
    "apriori_bound",
    "AprioriBound",
    "uniqueness_certificate",
    "UniquenessReport",
    "caratheodory_bound_check",
    "CaratheodoryReport",
]

_LIGHT_QUAD = QuadratureConfig(order=8, panels=8)


@dataclass(frozen=True)
class IVProblem:
    """Problem data: one derivator and one scalar rhs per component.

    ``rhs[i]`` is called as ``f_i(t, x)`` with the full state vector.  When
    ``ball_radius`` is set, the admissible states are the closed max-norm
    ball of that radius around ``x0`` and solvers fail loudly on exit.
    ``modulus``/``phi`` declare the modulus-of-continuity structure of the
    rhs used by certificates and bounds; ``phi = None`` means the weight is
    identically one.
    """

    t0: float
    horizon: float
    x0: np.ndarray
    derivators: tuple
    rhs: tuple
    ball_radius: float | None = None
    modulus: OsgoodModulus | None = None
    phi: object | None = None

    def __post_init__(self):
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "horizon", float(self.horizon))
        x0 = np.asarray(self.x0, dtype=float).reshape(-1)
        x0.flags.writeable = False
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "derivators", tuple(self.derivators))
        object.__setattr__(self, "rhs", tuple(self.rhs))
        if self.horizon <= 0:
            raise ConfigurationError("horizon must be positive")
        n = x0.size
        if n == 0:
            raise ConfigurationError("x0 must have at least one component")
        if len(self.derivators) != n or len(self.rhs) != n:
            raise ConfigurationError(
                f"need {n} derivators and rhs components, got "
                f"{len(self.derivators)} and {len(self.rhs)}"
            )
        end = self.t0 + self.horizon
        for i, g in enumerate(self.derivators):
            if not isinstance(g, Derivator):
                raise ConfigurationError(f"derivators[{i}] is not a Derivator")
            left, right = g.window
            if self.t0 < left or end > right:
                raise ConfigurationError(
                    f"derivators[{i}] window {g.window} does not contain "
                    f"[{self.t0}, {end}]"
                )
        if self.ball_radius is not None and self.ball_radius <= 0:
            raise ConfigurationError("ball_radius must be positive")

    @property
    def n(self):
        return self.x0.size

    def eval_rhs(self, t, x):
        out = np.empty(self.n)
        for i, f in enumerate(self.rhs):
            v = float(f(t, x))
            if not math.isfinite(v):
                raise SolverError(f"rhs component {i} returned {v} at t={t}")
            out[i] = v
        return out


@dataclass
class SolutionTrace:
    """Grid, states, and post-jump states of one computed solution.

    ``values[k]`` is the (left-continuous) state at ``grid[k]``;
    ``right_values[k]`` differs from it exactly at grid points where some
    component's derivator jumps, where it carries the post-impulse state.
    ``residual`` is per component: for Euler traces the integral-equation
    residual, for Picard traces the sup-norm change at acceptance.
    """

    grid: np.ndarray
    values: np.ndarray
    right_values: np.ndarray
    method: str
    residual: np.ndarray | None = None
    n_iterations: int | None = None

    @property
    def final(self):
        return self.values[-1]

    def sup_distance(self, other):
        """Max-norm distance to another trace on the same grid."""
        if self.grid.shape != other.grid.shape or not np.array_equal(self.grid, other.grid):
            raise ConfigurationError("traces live on different grids")
        return float(
            max(
                np.max(np.abs(self.values - other.values)),
                np.max(np.abs(self.right_values - other.right_values)),
            )
        )


def build_grid(problem, sigma=None, n_steps=256):
    """Uniform partition of [t0, t0+sigma] united with every jump abscissa.

    Jump points of every component in [t0, t0+sigma) enter the grid exactly
    (no snapping); duplicates collapse by exact comparison.
    """
    sigma = problem.horizon if sigma is None else float(sigma)
    if not 0 < sigma <= problem.horizon:
        raise ConfigurationError(f"sigma must be in (0, {problem.horizon}]")
    if n_steps < 1:
        raise ConfigurationError("n_steps must be >= 1")
    t0 = problem.t0
    end = t0 + sigma
    parts = [np.linspace(t0, end, n_steps + 1)]
    for g in problem.derivators:
        pts = g.jump_points
        parts.append(pts[(pts >= t0) & (pts < end)])
    return np.unique(np.concatenate(parts))


def _check_ball(problem, state, t):
    if problem.ball_radius is None:
        return
    if np.max(np.abs(state - problem.x0)) > problem.ball_radius:
        raise DomainExitError(
            f"state left the domain ball (radius {problem.ball_radius}) at t={t}; "
            "a smaller horizon may be certifiable via horizon_for_ball",
            time=t,
            state=np.array(state),
        )


class _GridData:
    """Per-grid pre-computation shared by both solvers and the residual map."""

    def __init__(self, problem, grid, quad_order=6):
        self.problem = problem
        self.grid = np.asarray(grid, dtype=float)
        if self.grid.ndim != 1 or self.grid.size < 2 or not np.all(np.diff(self.grid) > 0):
            raise ConfigurationError("grid must be strictly increasing with >= 2 points")
        n = problem.n
        N = self.grid.size - 1
        self.n_cells = N

        # jumps of each component at each grid point; the closing point gets
        # none (the solution on the closed interval is the left limit there)
        self.deltas = np.zeros((N + 1, n))
        for i, g in enumerate(problem.derivators):
            self.deltas[:-1, i] = g.jump(self.grid[:-1])

        # continuous-part increments per cell and component
        self.cont_inc = np.empty((N, n))
        for i, g in enumerate(problem.derivators):
            vals = g.continuous(self.grid)
            self.cont_inc[:, i] = np.diff(vals)

        # flattened Gauss-Legendre nodes for the continuous part of each
        # component: cells are intersected with the slope segments of g_i
        nodes, weights = _gl_rule(quad_order)
        self.quad = []
        for i, g in enumerate(problem.derivators):
            bp = g.breakpoints
            inner = bp[(bp > self.grid[0]) & (bp < self.grid[-1])]
            edges = np.unique(np.concatenate((self.grid, inner)))
            lo, hi = edges[:-1], edges[1:]
            seg = np.clip(np.searchsorted(bp, lo, side="right") - 1, 0, g.slopes.size - 1)
            slope = g.slopes[seg]
            keep = slope > 0.0
            lo, hi, slope = lo[keep], hi[keep], slope[keep]
            cell = np.clip(np.searchsorted(self.grid, lo, side="right") - 1, 0, N - 1)
            half = (hi - lo) / 2.0
            mid = (hi + lo) / 2.0
            ts = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
            ws = (slope[:, None] * half[:, None] * weights[None, :]).ravel()
            cells = np.repeat(cell, quad_order)
            self.quad.append((ts, ws, cells))

    def impulse_rights(self, values):
        """Post-jump states: right[k] = value[k] + f(t_k, value[k]) * delta_k."""
        rights = values.copy()
        jump_rows = np.flatnonzero(np.any(self.deltas > 0, axis=1))
        for k in jump_rows:
            fx = self.problem.eval_rhs(self.grid[k], values[k])
            rights[k] = values[k] + fx * self.deltas[k]
        return rights

    def integral_map(self, values, rights):
        """One application of x -> x0 + integral of f(s, x(s)) dg on the grid.

        The iterate is interpolated linearly inside each cell from the
        post-jump state at the left node to the value at the right node.
        """
        problem = self.problem
        N, n = self.n_cells, problem.n
        cells_total = np.zeros((N, n))

        # atomic contributions use the pre-jump state at the atom
        for k in np.flatnonzero(np.any(self.deltas[:-1] > 0, axis=1)):
            fx = problem.eval_rhs(self.grid[k], values[k])
            cells_total[k] += fx * self.deltas[k]

        widths = np.diff(self.grid)
        for i in range(n):
            ts, ws, cell_idx = self.quad[i]
            if ts.size == 0:
                continue
            frac = (ts - self.grid[cell_idx]) / widths[cell_idx]
            states = rights[cell_idx] + (values[cell_idx + 1] - rights[cell_idx]) * frac[:, None]
            f_i = problem.rhs[i]
            contrib = np.empty(ts.size)
            for q in range(ts.size):
                v = float(f_i(ts[q], states[q]))
                if not math.isfinite(v):
                    raise SolverError(
                        f"rhs component {i} returned {v} at t={ts[q]} during quadrature"
                    )
                contrib[q] = v
            np.add.at(cells_total[:, i], cell_idx, contrib * ws)

        out = np.empty((N + 1, n))
        out[0] = problem.x0
        np.cumsum(cells_total, axis=0, out=cells_total)
        out[1:] = problem.x0 + cells_total
        return out


def solve_euler(problem, grid, compute_residual=True, quad_order=6):
    """Forward Euler in the derivator increments, impulse-first.

    Per step ``t_k -> t_{k+1}``: all components apply their impulse with the
    shared pre-jump state, then the continuous sub-step uses the post-jump
    state and the increments of the continuous parts.  Pure-jump steps are
    exact by construction.
    """
    data = _GridData(problem, grid, quad_order=quad_order)
    grid = data.grid
    N, n = data.n_cells, problem.n

    values = np.empty((N + 1, n))
    rights = np.empty((N + 1, n))
    values[0] = problem.x0
    x = problem.x0.copy()
    for k in range(N):
        t = grid[k]
        fx = problem.eval_rhs(t, x)
        y = x + fx * data.deltas[k]  # impulse with the pre-jump state
        if np.any(data.deltas[k] > 0):
            _check_ball(problem, y, t)
            f_plus = problem.eval_rhs(t, y)
        else:
            f_plus = fx
        rights[k] = y
        x = y + f_plus * data.cont_inc[k]
        _check_ball(problem, x, grid[k + 1])
        values[k + 1] = x
    rights[N] = values[N]

    res = None
    if compute_residual:
        mapped = data.integral_map(values, rights)
        res = np.max(np.abs(values - mapped), axis=0)
    return SolutionTrace(
        grid=grid, values=values, right_values=rights, method="euler", residual=res
    )


def solve_picard(problem, grid, tol=1e-10, max_iter=100, quad_order=6, initial=None):
    """Fixed-point iteration of the integral-equation map on the grid.

    Starts from the constant initial iterate (or ``initial``: a trace or an
    ``(N+1, n)`` array of grid values, e.g. an Euler warm start) and stops
    when the sup-norm change of the grid values drops to ``tol``; the
    post-jump states of the returned trace satisfy the impulse relation
    exactly with the accepted values.
    """
    if tol <= 0:
        raise ConfigurationError("tol must be positive")
    data = _GridData(problem, grid, quad_order=quad_order)
    grid = data.grid
    N, n = data.n_cells, problem.n

    if initial is None:
        values = np.tile(problem.x0, (N + 1, 1))
    else:
        values = np.array(getattr(initial, "values", initial), dtype=float)
        if values.shape != (N + 1, n):
            raise ConfigurationError(
                f"initial iterate must have shape {(N + 1, n)}, got {values.shape}"
            )
    rights = data.impulse_rights(values)
    change = None
    iterations = 0
    for iterations in range(1, max_iter + 1):
        new_values = data.integral_map(values, rights)
        change = np.max(np.abs(new_values - values), axis=0)
        values = new_values
        rights = data.impulse_rights(values)
        if problem.ball_radius is not None:
            dev = np.maximum(
                np.max(np.abs(values - problem.x0), axis=1),
                np.max(np.abs(rights - problem.x0), axis=1),
            )
            bad = np.flatnonzero(dev > problem.ball_radius)
            if bad.size:
                _check_ball(problem, values[bad[0]], float(grid[bad[0]]))
                _check_ball(problem, rights[bad[0]], float(grid[bad[0]]))
        if float(np.max(change)) <= tol:
            break
    else:
        raise NonConvergenceError(
            f"Picard iteration did not meet tol={tol} within {max_iter} iterations "
            f"(last change {float(np.max(change))})",
            last_change=change,
            iterations=max_iter,
        )

    return SolutionTrace(
        grid=grid,
        values=values,
        right_values=rights,
        method="picard",
        residual=change,
        n_iterations=iterations,
    )


def residual(problem, trace, quad_order=6):
    """Per-component max deviation of a trace from the integral equation."""
    data = _GridData(problem, trace.grid, quad_order=quad_order)
    mapped = data.integral_map(trace.values, trace.right_values)
    return np.max(np.abs(trace.values - mapped), axis=0)


def _phi_or_one(problem):
    phi = problem.phi
    if phi is None:
        return lambda t: 1.0
    return phi


def _max_rhs_at_x0(problem):
    x0 = problem.x0

    def biggest(s):
        return max(abs(float(f(s, x0))) for f in problem.rhs)

    return biggest


def horizon_for_ball(problem, n_candidates=64):
    """Largest grid-searched sigma for which the ball-invariance inequality holds.

    The criterion is strict:  omega(R) * (phi-weighted measure of
    [t0, t0+sigma) under the sum derivator)  plus the accumulated size of
    the rhs at x0 must stay below the ball radius R.  Sufficient, not
    necessary; failure for every tested sigma raises.
    """
    if problem.ball_radius is None or problem.modulus is None:
        raise ConfigurationError("horizon_for_ball needs ball_radius and modulus")
    R = problem.ball_radius
    omega_R = float(problem.modulus(R))
    phi = _phi_or_one(problem)
    ghat = sum_derivators(problem.derivators)
    t0 = problem.t0

    for sigma in np.linspace(problem.horizon, problem.horizon / n_candidates, n_candidates):
        end = t0 + float(sigma)
        weighted = integrate(ghat, phi, t0, end, _LIGHT_QUAD)
        accumulated = sum(
            integrate(
                g, lambda s, f=f: abs(float(f(s, problem.x0))), t0, end, _LIGHT_QUAD
            )
            for g, f in zip(problem.derivators, problem.rhs)
        )
        if omega_R * weighted + accumulated < R:
            return float(sigma)
    raise NoCertifiedHorizonError(
        f"no sigma in (0, {problem.horizon}] satisfies the ball-invariance "
        f"inequality for radius {R}"
    )


def _weighted_derivator(weight, ghat, t0, t1, n_sub=200, order=8):
    """Pre-sample t -> integral of weight d ghat over [t0, t) as a derivator.

    The continuous part is resampled piecewise linearly on the union of the
    ghat breakpoints and a uniform refinement; the atoms are exact:
    weight(d) * jump(d).
    """
    bp = ghat.breakpoints
    inner = bp[(bp > t0) & (bp < t1)]
    edges = np.unique(np.concatenate((np.linspace(t0, t1, n_sub + 1), inner)))
    nodes, wts = _gl_rule(order)
    slopes = np.empty(edges.size - 1)
    for k in range(edges.size - 1):
        lo, hi = edges[k], edges[k + 1]
        seg = np.clip(np.searchsorted(bp, lo, side="right") - 1, 0, ghat.slopes.size - 1)
        slope = ghat.slopes[seg]
        if slope == 0.0:
            slopes[k] = 0.0
            continue
        half = (hi - lo) / 2.0
        mid = (hi + lo) / 2.0
        vals = np.array([float(weight(mid + half * u)) for u in nodes])
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise IntegrandError("weight must be finite and nonnegative")
        slopes[k] = slope * float(np.dot(wts, vals)) / 2.0
    jumps = []
    for d, delta in zip(ghat.jump_points, ghat.jump_sizes):
        if t0 < d < t1:
            w = float(weight(d)) * delta
            if w > 0:
                jumps.append((d, w))
    return Derivator((t0, t1), breakpoints=edges, slopes=slopes, jumps=jumps, anchor=0.0)


@dataclass
class AprioriBound:
    """Growth bound: every solution satisfies ||x(t) - x0|| <= bound(t) on [t0, t1].

    Built from the Bihari-type inequality; ``zero_kappa`` marks the
    degenerate case of a rhs vanishing along x0, where the bound collapses
    to zero.
    """

    t0: float
    t1: float
    kappa: float
    bound: object  # callable t -> float
    transform: OmegaTransform | None = None
    zero_kappa: bool = False

    def __call__(self, t):
        return self.bound(t)

    def check_trace(self, trace, tol=1e-6):
        """Max violation of the bound over the grid points inside [t0, t1]."""
        worst = -math.inf
        x0 = trace.values[0]
        for k, t in enumerate(trace.grid):
            if not self.t0 <= t <= self.t1:
                continue
            dev = float(np.max(np.abs(trace.values[k] - x0)))
            worst = max(worst, dev - self.bound(float(t)))
        return worst <= tol, worst


def apriori_bound(problem, u0=1.0, n_candidates=16, r_cap=1e120):
    """The nondecreasing bound dominating every solution near t0.

    Needs a declared Osgood modulus (the osgood check must say DIVERGENT)
    and works on the largest tested sub-horizon [t0, t1] on which the
    Bihari precondition holds: Omega(kappa(t1)) plus the weighted-measure
    growth must stay below the top of the transform table.
    """
    if problem.modulus is None:
        raise ConfigurationError("apriori_bound needs a declared modulus")
    verdict = osgood_check(problem.modulus, u0).verdict
    if verdict != "DIVERGENT":
        raise BoundInapplicableError(
            f"the declared modulus is not certified Osgood (osgood_check: {verdict})"
        )

    t0 = problem.t0
    end = t0 + problem.horizon
    phi = _phi_or_one(problem)
    ghat = sum_derivators(problem.derivators)
    gbar = _weighted_derivator(phi, ghat, t0, end)
    biggest = _max_rhs_at_x0(problem)

    for t1 in np.linspace(end, t0 + problem.horizon / n_candidates, n_candidates):
        t1 = float(t1)
        kappa = integrate(ghat, biggest, t0, t1, _LIGHT_QUAD)
        if kappa <= 0.0:
            return AprioriBound(
                t0=t0, t1=t1, kappa=0.0, bound=lambda t: 0.0, zero_kappa=True
            )
        growth = gbar.eval(t1) - gbar.eval(t0)
        r_max = max(u0, kappa) * 100.0
        transform = None
        while r_max <= r_cap:
            tr = OmegaTransform(
                problem.modulus, u0, r_min=min(kappa, u0) * 1e-6, r_max=r_max
            )
            if tr.omega_of(kappa) + growth < tr.upper:
                transform = tr
                break
            r_max *= 1e4
        if transform is None:
            continue  # precondition fails on [t0, t1]; try a shorter horizon
        inner = bihari_bound(kappa, gbar, t0, t1, transform)
        return AprioriBound(
            t0=t0, t1=t1, kappa=kappa, bound=inner, transform=transform
        )
    raise BoundInapplicableError(
        "the Bihari precondition failed on every tested sub-horizon"
    )


@dataclass
class UniquenessReport:
    """Sampled uniqueness certificate; evidence, not proof.

    ``verdict`` is OSGOOD-UNIQUE when the declared weight is identically
    one, MONTEL-TONELLI-UNIQUE when an integrable weight was declared, and
    UNVERIFIED when any sampled inequality fails or the osgood check is
    not DIVERGENT.
    """

    verdict: str
    sampled: bool = True
    n_samples: int = 0
    osgood_verdicts: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    phi_integrals: list = field(default_factory=list)

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "sampled": self.sampled,
            "n_samples": self.n_samples,
            "osgood_verdicts": dict(self.osgood_verdicts),
            "n_violations": len(self.violations),
            "violations": [
                {"t": t, "component": i, "lhs": lhs, "rhs": rhs}
                for (t, i, lhs, rhs) in self.violations[:10]
            ],
            "phi_integrals": list(self.phi_integrals),
        }


def uniqueness_certificate(problem, n_samples=10_000, seed=0, u0_values=(1.0, 0.01)):
    """Spot-check the modulus-of-continuity inequality behind uniqueness.

    Verifies (a) the declared modulus passes the osgood check at two
    anchors, (b) ``|f_i(t,x) - f_i(t,y)| <= phi(t) * omega(||x-y||)`` on a
    randomized sample of the domain, (c) the weight is integrable against
    every component derivator.  All three are sampled evidence; the report
    says so.
    """
    if problem.modulus is None:
        raise ConfigurationError("uniqueness_certificate needs a declared modulus")
    report = UniquenessReport(verdict="UNVERIFIED")
    for u0 in u0_values:
        report.osgood_verdicts[u0] = osgood_check(problem.modulus, u0).verdict

    phi = _phi_or_one(problem)
    t_end = problem.t0 + problem.horizon
    try:
        report.phi_integrals = [
            integrate(g, phi, problem.t0, t_end, _LIGHT_QUAD)
            for g in problem.derivators
        ]
    except IntegrandError:
        return report

    rng = np.random.default_rng(seed)
    r = problem.ball_radius if problem.ball_radius is not None else 1.0
    ts = rng.uniform(problem.t0, t_end, size=n_samples)
    xs = problem.x0 + rng.uniform(-r, r, size=(n_samples, problem.n))
    ys = problem.x0 + rng.uniform(-r, r, size=(n_samples, problem.n))
    report.n_samples = n_samples

    omega = problem.modulus
    for t, x, y in zip(ts, xs, ys):
        gap = float(np.max(np.abs(x - y)))
        allowance = float(phi(t)) * float(omega(gap))
        for i, f in enumerate(problem.rhs):
            lhs = abs(float(f(t, x)) - float(f(t, y)))
            if lhs > allowance + 1e-9 * (1.0 + allowance):
                report.violations.append((float(t), i, lhs, allowance))

    if report.violations or any(
        v != "DIVERGENT" for v in report.osgood_verdicts.values()
    ):
        report.verdict = "UNVERIFIED"
    elif problem.phi is None:
        report.verdict = "OSGOOD-UNIQUE"
    else:
        report.verdict = "MONTEL-TONELLI-UNIQUE"
    return report


@dataclass
class CaratheodoryReport:
    """Sampled check of the domination |f_i(t, x)| <= h_r_i(t) on a ball."""

    passed: bool
    r: float
    n_samples: int
    violations: list = field(default_factory=list)

    def to_dict(self):
        return {
            "passed": self.passed,
            "r": self.r,
            "n_samples": self.n_samples,
            "n_violations": len(self.violations),
            "violations": [
                {"t": t, "component": i, "lhs": lhs, "bound": b}
                for (t, i, lhs, b) in self.violations[:10]
            ],
        }


def caratheodory_bound_check(problem, r, h_r, n_samples=4000, seed=0):
    """Sample |f_i(t,x)| <= h_r_i(t) over the radius-r ball around x0.

    ``h_r`` may be a single callable (shared by all components) or one per
    component.  Violations carry witnesses; the check is sampled evidence.
    """
    if r <= 0:
        raise ConfigurationError("r must be positive")
    if callable(h_r):
        h_r = [h_r] * problem.n
    h_r = list(h_r)
    if len(h_r) != problem.n:
        raise ConfigurationError(f"need {problem.n} domination bounds, got {len(h_r)}")

    rng = np.random.default_rng(seed)
    ts = rng.uniform(problem.t0, problem.t0 + problem.horizon, size=n_samples)
    xs = problem.x0 + rng.uniform(-r, r, size=(n_samples, problem.n))
    report = CaratheodoryReport(passed=True, r=float(r), n_samples=n_samples)
    for t, x in zip(ts, xs):
        for i, f in enumerate(problem.rhs):
            lhs = abs(float(f(t, x)))
            bound = float(h_r[i](t))
            if lhs > bound + 1e-9 * (1.0 + abs(bound)):
                report.violations.append((float(t), i, lhs, bound))
    report.passed = not report.violations
    return report
