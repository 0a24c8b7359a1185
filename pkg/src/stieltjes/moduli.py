"""Osgood moduli, the iterated-logarithm family, and Bihari-type bounds.

A *modulus* is a nondecreasing continuous map ``omega`` on ``[0, inf)`` with
``omega(0) = 0`` and ``omega(s) > 0`` for ``s > 0``.  It satisfies the
Osgood condition when ``integral of 1/omega over (0, u0]`` diverges; under
that condition a modulus-of-continuity bound on the right-hand side forces
uniqueness of solutions.  The divergence of an improper integral is not
finitely decidable, so ``osgood_check`` classifies the trend of the partial
integrals over twelve decades and owns an INCONCLUSIVE verdict.

The family ``omega_k`` multiplies ``t`` by iterated logarithms of ``1/t``
and then plateaus; every member is non-Lipschitz at 0 (its derivative blows
up) but still Osgood, which is what makes it a useful stress test for
uniqueness machinery.  ``e_k`` denotes the k-fold iterated exponential of 1;
``e_4`` already overflows doubles, so k is effectively capped at 3.

``OmegaTransform`` tabulates ``Omega(r) = integral from u0 to r of
1/omega``, the strictly increasing transform behind the Bihari inequality:
any function satisfying the corresponding integral inequality is dominated
by ``Omega^{-1}(Omega(kappa) + h(t) - h(a))``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import BoundInapplicableError, IntegrandError, ModulusOverflowError
from .measure import _gl_rule

__all__ = [
    "OsgoodModulus",
    "exp_iter",
    "log_iter",
    "omega_k",
    "omega_k_modulus",
    "osgood_check",
    "OsgoodReport",
    "OmegaTransform",
    "bihari_bound",
    "BihariBound",
]

_EXP_ITER_MAX = 3  # exp_iter(4, 1) ~ exp(3.8e6): far beyond double range


def exp_iter(k, t):
    """The k-fold iterated exponential; exp_iter(0, t) = t."""
    if k < 0:
        raise ValueError("k must be >= 0")
    v = float(t)
    for i in range(k):
        try:
            v = math.exp(v)
        except OverflowError as exc:
            raise ModulusOverflowError(
                f"exp_iter({k}, {t}) overflows double precision at stage {i + 1}"
            ) from exc
        if not math.isfinite(v):
            raise ModulusOverflowError(
                f"exp_iter({k}, {t}) overflows double precision at stage {i + 1}"
            )
    return v


def log_iter(k, t):
    """The k-fold iterated logarithm; requires t > exp_iter(k-1, 0)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    t = float(t)
    if t <= exp_iter(k - 1, 0.0):
        raise ValueError(
            f"log_iter({k}, t) needs t > {exp_iter(k - 1, 0.0)}, got t={t}"
        )
    v = t
    for _ in range(k):
        v = math.log(v)
    return v


def _e_k(k):
    return exp_iter(k, 1.0)


def _omega_k_plateau(k):
    ek = _e_k(k)
    prod = 1.0
    for j in range(1, k + 1):
        prod *= _e_k(j)
    return prod / (ek * ek)


def omega_k(k, t):
    """The k-th iterated-logarithm modulus; accepts scalars and arrays.

    Piecewise: 0 at 0, ``t * prod_j log_iter(j, 1/t)`` for ``0 < t < 1/e_k``
    and the constant plateau value from ``t = 1/e_k`` on.  Continuous at the
    branch point by construction.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    ek = _e_k(k)  # raises ModulusOverflowError for k >= 4
    plateau = _omega_k_plateau(k)

    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or not np.all(np.isfinite(t_arr)):
        raise ValueError("omega_k is defined for finite t >= 0")

    out = np.full(t_arr.shape, plateau)
    out[t_arr == 0.0] = 0.0
    branch = (t_arr > 0.0) & (t_arr < 1.0 / ek)
    if np.any(branch):
        tb = t_arr[branch]
        acc = np.array(tb)
        inner = 1.0 / tb
        for _ in range(k):
            inner = np.log(inner)
            acc *= inner
        out[branch] = acc
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class OsgoodModulus:
    """A modulus with a name and an optional prior about its Osgood status."""

    evaluator: object
    name: str = "modulus"
    known_osgood: bool | None = None

    def __call__(self, s):
        return self.evaluator(s)

    def validate(self, u0=1.0, n=200):
        """Sampled sanity check: omega(0)=0, positive and nondecreasing."""
        if abs(float(self.evaluator(0.0))) > 1e-15:
            raise ValueError(f"{self.name}: omega(0) must be 0")
        grid = np.geomspace(1e-12, max(u0, 1e-12), n)
        vals = np.array([float(self.evaluator(s)) for s in grid])
        if np.any(vals <= 0):
            raise ValueError(f"{self.name}: omega must be positive for s > 0")
        if np.any(np.diff(vals) < -1e-12 * np.maximum(vals[:-1], 1.0)):
            raise ValueError(f"{self.name}: omega must be nondecreasing")
        return self


def omega_k_modulus(k):
    return OsgoodModulus(
        evaluator=lambda s, k=k: omega_k(k, s),
        name=f"omega_k({k})",
        known_osgood=True,
    )


def _as_modulus(omega):
    return omega if isinstance(omega, OsgoodModulus) else OsgoodModulus(evaluator=omega)


def _reciprocal_integral(omega, lo, hi, panels=16, order=16):
    """integral of 1/omega(s) ds over [lo, hi], via the log substitution.

    With s = e^u the integrand becomes e^u / omega(e^u), which is smooth for
    every modulus that behaves like s times slowly varying factors.
    """
    if hi <= lo:
        return 0.0
    nodes, weights = _gl_rule(order)
    edges = np.linspace(math.log(lo), math.log(hi), panels + 1)
    half = np.diff(edges) / 2.0
    mids = (edges[:-1] + edges[1:]) / 2.0
    us = (mids[:, None] + half[:, None] * nodes[None, :]).ravel()
    ss = np.exp(us)
    vals = np.empty(ss.size)
    for i, s in enumerate(ss):
        w = float(omega(s))
        if not (math.isfinite(w) and w > 0.0):
            raise IntegrandError(f"modulus returned {w} at s={s}", point=s)
        vals[i] = ss[i] / w
    if not np.all(np.isfinite(vals)):
        raise IntegrandError("non-finite reciprocal-modulus sample")
    vals = vals.reshape(len(half), order)
    return float(np.sum(half * (vals @ weights)))


@dataclass
class OsgoodReport:
    """Verdict plus the partial-integral trace it was read from."""

    verdict: str  # DIVERGENT | CONVERGENT | INCONCLUSIVE
    u0: float
    epsilons: list[float] = field(default_factory=list)
    partial_integrals: list[float] = field(default_factory=list)  # I(eps_m)
    increments: list[float] = field(default_factory=list)  # I(eps_{m+1}) - I(eps_m)

    def trace_rows(self):
        return list(zip(self.epsilons, self.partial_integrals))


# Decision constants: a divergent tail keeps contributing at least this much
# per decade over the inspection window, a convergent one shrinks by at
# least half per decade, sustained.
_DIV_FLOOR = 1e-3
_CONV_RATIO = 0.5
_N_DECADES = 12
_WINDOW = 6


def osgood_check(omega, u0):
    """Classify the divergence of the reciprocal integral near zero.

    Computes ``I(eps_m)`` for ``eps_m = 10^-m``, ``m = 1..12``, and reads the
    trend of the per-decade increments: DIVERGENT when the last six stay
    above an absolute floor, CONVERGENT when they shrink geometrically
    (sustained ratio below 0.5), INCONCLUSIVE otherwise.  A heuristic by
    necessity; the verdict is evidence, not proof.
    """
    omega = _as_modulus(omega)
    if u0 <= 0:
        raise ValueError("u0 must be positive")

    eps = [10.0 ** -(m + 1) for m in range(_N_DECADES)]
    increments = [
        _reciprocal_integral(omega, eps[m + 1], eps[m]) for m in range(_N_DECADES - 1)
    ]
    first = _reciprocal_integral(omega, min(eps[0], u0), max(eps[0], u0))
    if eps[0] > u0:
        first = -first
    partial = [first]
    for j in increments:
        partial.append(partial[-1] + j)

    window = increments[-_WINDOW:]
    ratios = [b / a if a > 0 else math.inf for a, b in zip(window, window[1:])]
    if all(r < _CONV_RATIO for r in ratios):
        verdict = "CONVERGENT"
    elif min(window) >= _DIV_FLOOR:
        verdict = "DIVERGENT"
    else:
        verdict = "INCONCLUSIVE"

    return OsgoodReport(
        verdict=verdict,
        u0=float(u0),
        epsilons=eps,
        partial_integrals=partial,
        increments=increments,
    )


class OmegaTransform:
    """Tabulated ``Omega(r) = integral from u0 to r of 1/omega(s) ds``.

    Built on a logarithmic grid with per-segment Gauss-Legendre in the log
    variable, interpolated by a monotone piecewise cubic, and inverted by
    bracketed root finding, so ``Omega`` and ``Omega^{-1}`` are both strictly
    monotone on the covered range.
    """

    def __init__(self, modulus, u0, r_min=None, r_max=None, points_per_decade=24):
        self.modulus = _as_modulus(modulus)
        self.u0 = float(u0)
        if self.u0 <= 0:
            raise ValueError("u0 must be positive")
        r_min = float(r_min) if r_min is not None else self.u0 * 1e-8
        r_max = float(r_max) if r_max is not None else self.u0 * 1e8
        if not 0 < r_min < self.u0 < r_max:
            raise ValueError("need 0 < r_min < u0 < r_max")

        n = max(int(round(points_per_decade * math.log10(r_max / r_min))), 8)
        grid = np.geomspace(r_min, r_max, n)
        grid = np.unique(np.concatenate((grid, [self.u0])))
        values = np.empty(grid.size)
        anchor = int(np.searchsorted(grid, self.u0))
        values[anchor] = 0.0
        for k in range(anchor, grid.size - 1):
            values[k + 1] = values[k] + _reciprocal_integral(
                self.modulus, grid[k], grid[k + 1], panels=4
            )
        for k in range(anchor, 0, -1):
            values[k - 1] = values[k] - _reciprocal_integral(
                self.modulus, grid[k - 1], grid[k], panels=4
            )

        self.r_grid = grid
        self.values = values
        self._x = np.log(grid)
        self._forward = PchipInterpolator(self._x, values, extrapolate=False)

    @property
    def lower(self):
        """Omega at the bottom of the table (an estimate of the alpha limit)."""
        return float(self.values[0])

    @property
    def upper(self):
        """Omega at the top of the table (the usable estimate of beta)."""
        return float(self.values[-1])

    def omega_of(self, r):
        r = float(r)
        if not self.r_grid[0] <= r <= self.r_grid[-1]:
            raise ValueError(
                f"r={r} outside the tabulated range [{self.r_grid[0]}, {self.r_grid[-1]}]"
            )
        return float(self._forward(math.log(r)))

    __call__ = omega_of

    def inverse(self, y):
        y = float(y)
        if not self.values[0] <= y <= self.values[-1]:
            raise ValueError(
                f"Omega^-1 target {y} outside the tabulated range "
                f"[{self.values[0]}, {self.values[-1]}]"
            )
        k = int(np.searchsorted(self.values, y))
        if k < self.values.size and self.values[k] == y:
            return float(self.r_grid[k])
        lo, hi = self._x[k - 1], self._x[k]
        x = brentq(lambda u: float(self._forward(u)) - y, lo, hi, xtol=1e-15, rtol=1e-15)
        return float(math.exp(x))


@dataclass
class BihariBound:
    """The nondecreasing bound ``t -> Omega^{-1}(Omega(kappa) + h(t) - h(a))``."""

    kappa: float
    h: object  # Derivator
    a: float
    b: float
    transform: OmegaTransform
    omega_kappa: float

    def __call__(self, t):
        t = float(t)
        if not self.a <= t <= self.b:
            raise ValueError(f"bound evaluated outside [{self.a}, {self.b}]")
        return self.transform.inverse(
            self.omega_kappa + self.h.eval(t) - self.h.eval(self.a)
        )


def bihari_bound(kappa, h, a, b, transform):
    """Build the Bihari-type bound, checking the growth precondition.

    Requires ``Omega(kappa) + h(b) - h(a)`` to stay below the top of the
    transform table (the computable estimate of the upper limit of Omega);
    otherwise the bound is not applicable and an error carries both numbers.
    """
    kappa = float(kappa)
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    omega_kappa = transform.omega_of(kappa)
    required = omega_kappa + h.eval(b) - h.eval(a)
    if required >= transform.upper:
        raise BoundInapplicableError(
            f"Omega(kappa) + h(b) - h(a) = {required} reaches the estimated "
            f"upper limit {transform.upper} of the transform",
            required=required,
            available=transform.upper,
        )
    return BihariBound(
        kappa=kappa, h=h, a=float(a), b=float(b),
        transform=transform, omega_kappa=omega_kappa,
    )
