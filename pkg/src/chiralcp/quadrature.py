"""Integration over (0, inf) with node-doubling convergence control.

``integrate_semiinfinite`` maps the half line onto (0, 1) and applies
Gauss-Legendre rules of growing size until two successive estimates agree.
``integrate_kz_tail`` handles the exponentially damped wavevector integral
with Gauss-Laguerre rules in the damping variable.

Integrands are called with numpy arrays and must be vectorised. They may
return arrays with extra leading axes (a batch of integrals); convergence is
then judged on the worst member.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.special import roots_laguerre, roots_legendre

from chiralcp.core import ConvergenceError

# Gauss-Laguerre weights overflow in scipy beyond this order.
MAX_LAGUERRE_NODES = 256


class Mapping(enum.Enum):
    RATIONAL = "rational"  # xi = s * t / (1 - t)
    EXPONENTIAL = "exponential"  # xi = -s * log(1 - t)


@dataclass(frozen=True)
class QuadratureSpec:
    mapping: Mapping = Mapping.RATIONAL
    scale: float | None = None  # None: caller supplies a natural scale
    base_nodes: int = 64
    rel_tol: float = 1e-8
    max_doublings: int = 8

    def __post_init__(self):
        if self.base_nodes < 8:
            raise ValueError(f"base_nodes must be >= 8, got {self.base_nodes}")
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be > 0, got {self.rel_tol}")
        if self.max_doublings < 0:
            raise ValueError("max_doublings must be >= 0")
        if self.scale is not None and not self.scale > 0:
            raise ValueError(f"scale must be > 0, got {self.scale}")

    def with_defaults(self, scale: float) -> "QuadratureSpec":
        return self if self.scale is not None else replace(self, scale=scale)


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class IntegralResult:
    value: float | np.ndarray
    est_error: float | np.ndarray
    nodes_used: int


# Largest single Gauss-Legendre rule; bigger budgets are split into equal
# panels of this size so node generation stays O(n).
MAX_PANEL_NODES = 512


@lru_cache(maxsize=32)
def _legendre01(n: int):
    if n <= MAX_PANEL_NODES:
        x, w = roots_legendre(n)
        return 0.5 * (x + 1.0), 0.5 * w
    panels = -(-n // MAX_PANEL_NODES)
    t, w = _legendre01(MAX_PANEL_NODES)
    left = np.arange(panels)[:, None] / panels
    return (left + t / panels).ravel(), np.tile(w / panels, panels)


@lru_cache(maxsize=16)
def _laguerre(n: int):
    x, w = roots_laguerre(n)
    return x, w


def _mapped_nodes(n: int, mapping: Mapping, scale: float):
    t, w = _legendre01(n)
    if mapping is Mapping.RATIONAL:
        x = scale * t / (1.0 - t)
        jac = scale / (1.0 - t) ** 2
    else:
        x = -scale * np.log1p(-t)
        jac = scale / (1.0 - t)
    return x, w * jac


def _converged(new, old, rel_tol):
    diff = np.abs(new - old)
    return bool(np.all(diff <= rel_tol * np.abs(new))), diff


def _check_finite(values, where):
    if not np.all(np.isfinite(values)):
        raise ConvergenceError(f"non-finite integrand sample in {where}", module="quadrature",
                               parameter="integrand")


def integrate_semiinfinite(f, spec: QuadratureSpec = DEFAULT_SPEC, scale: float | None = None):
    """Integrate ``f(xi)`` over (0, inf).

    Parameters
    ----------
    f : callable
        Vectorised integrand. The last axis of its output must match the
        node axis.
    spec : QuadratureSpec
        Mapping, tolerance and node budget.
    scale : float, optional
        Mapping scale used when ``spec.scale`` is None.

    Returns
    -------
    IntegralResult
        ``est_error`` is the difference between the last two estimates.
    """
    s = spec.scale if spec.scale is not None else scale
    if s is None or not s > 0:
        raise ValueError("a positive mapping scale is required")
    n = spec.base_nodes
    x, w = _mapped_nodes(n, spec.mapping, s)
    vals = np.asarray(f(x))
    _check_finite(vals, "integrate_semiinfinite")
    prev = vals @ w
    for _ in range(spec.max_doublings):
        n *= 2
        x, w = _mapped_nodes(n, spec.mapping, s)
        vals = np.asarray(f(x))
        _check_finite(vals, "integrate_semiinfinite")
        cur = vals @ w
        ok, diff = _converged(cur, prev, spec.rel_tol)
        if ok:
            return IntegralResult(cur, diff, n)
        prev = cur
    raise ConvergenceError(
        f"no convergence to rel_tol={spec.rel_tol} with {n} nodes",
        module="quadrature",
        parameter="max_doublings",
    )


def integrate_kz_tail(g, lower, z: float, spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """Integrate ``g(k) * exp(-2 k z)`` over ``k`` in (lower, inf).

    With ``k = lower + u / (2z)`` the damping becomes ``exp(-u)`` and a
    Gauss-Laguerre rule applies; it is exact for polynomial ``g`` of degree
    below twice the node count. ``lower`` may be an array; ``g`` then receives
    an array of shape ``lower.shape + (n,)``.
    """
    if not z > 0:
        raise ValueError(f"z must be > 0, got {z}")
    lower = np.asarray(lower, dtype=float)
    if np.any(lower < 0):
        raise ValueError("lower limit must be >= 0")
    pref = np.exp(-2.0 * lower * z) / (2.0 * z)

    def estimate(n):
        u, w = _laguerre(n)
        vals = np.asarray(g(lower[..., None] + u / (2.0 * z)))
        _check_finite(vals, "integrate_kz_tail")
        return pref * (vals @ w)

    n = min(spec.base_nodes, MAX_LAGUERRE_NODES)
    prev = estimate(n)
    for _ in range(spec.max_doublings):
        if n * 2 > MAX_LAGUERRE_NODES:
            break
        n *= 2
        cur = estimate(n)
        ok, diff = _converged(cur, prev, spec.rel_tol)
        if ok:
            return IntegralResult(cur, diff, n)
        prev = cur
    raise ConvergenceError(
        f"wavevector tail did not converge to rel_tol={spec.rel_tol} with {n} nodes",
        module="quadrature",
        parameter="max_doublings",
    )
