"""
Closed-form two-branch equilibrium density and its CCDF.

The density is

    c'  exp(-(m0/T)  arctan(m/m0)) / [1 + (m/m0)^2]^((alpha+1)/2)    m <  m1
    c'' exp(-(m0/T1) arctan(m/m0)) / [1 + (m/m0)^2]^((alpha1+1)/2)   m >= m1

with c'' fixed by continuity at m1 and c' by normalisation.

`EyTable` tabulates the exceedance probability once per parameter set: a
composite Gauss-Legendre rule over log-spaced panels (m1 is always a panel
edge) up to the cut M = TAIL_CUT * m1, the analytic Pareto remainder beyond
M, and a cubic Hermite interpolant in log-income whose node slopes are the
exact density. Queries are then vectorised and cheap, which the fitter relies
on.
"""

import math
import sys
from functools import lru_cache
from typing import Optional, Tuple, Union

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike
from scipy.interpolate import CubicHermiteSpline

from config.env import NUMERICS
from incomeflow.errors import ParameterError
from incomeflow.model.params import EyParams, EyShape, LangevinParams, effective_shape
from incomeflow.model.quadrature import integrate

logger = logger.bind(component="model")

FloatOrArray = Union[float, np.ndarray]

# panels start this far below m0; below it the density is flat to O(m/m0)
HEAD_FRACTION = 1e-6
NEWTON_STEPS = 6
LOG_FLOAT_MAX = math.log(sys.float_info.max)


def _as_incomes(m: ArrayLike) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(m, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ParameterError("incomes must be non-negative numbers")
    return arr, arr.ndim == 0


def _restore(values: np.ndarray, scalar: bool) -> FloatOrArray:
    return float(values) if scalar else values


def log_kernel(
    m: np.ndarray, m0: float, temperature: float, exponent: float
) -> np.ndarray:
    """Logarithm of one unnormalised branch of the density."""
    x = m / m0
    return -(m0 / temperature) * np.arctan(x) - 0.5 * (exponent + 1.0) * np.log1p(
        x * x
    )


def _branch_offset(p: EyShape) -> float:
    """log(c''/c') from continuity of the density at m1."""
    m1 = np.asarray(p.m1)
    return float(
        log_kernel(m1, p.m0, p.T, p.alpha) - log_kernel(m1, p.m0, p.T1, p.alpha1)
    )


def _log_density(m: np.ndarray, p: EyShape, log_c_prime: float) -> np.ndarray:
    low = m < p.m1
    out = np.empty_like(m, dtype=float)
    out[low] = log_c_prime + log_kernel(m[low], p.m0, p.T, p.alpha)
    out[~low] = (
        log_c_prime
        + _branch_offset(p)
        + log_kernel(m[~low], p.m0, p.T1, p.alpha1)
    )
    return out


class EyTable:
    """Tabulated CCDF of one parameter set (normalisation included).

    Attributes:
        shape: the structural parameters
        c_prime, c_double_prime: the branch normalisation constants
        cut: the income M beyond which the analytic tail is used
    """

    def __init__(self, shape: EyShape):
        self.shape = shape
        order = NUMERICS.GAUSS_ORDER
        self._gl_x, self._gl_w = np.polynomial.legendre.leggauss(order)
        self._offset = _branch_offset(shape)

        self.head = shape.m0 * HEAD_FRACTION
        self.cut = NUMERICS.TAIL_CUT * shape.m1
        npd = NUMERICS.NODES_PER_DECADE
        n_low = max(8, math.ceil(math.log10(shape.m1 / self.head) * npd))
        n_high = max(8, math.ceil(math.log10(self.cut / shape.m1) * npd))
        u_low = np.linspace(math.log(self.head), math.log(shape.m1), n_low + 1)
        u_high = np.linspace(math.log(shape.m1), math.log(self.cut), n_high + 1)
        self._u = np.concatenate([u_low, u_high[1:]])
        # the first n_low panels are low branch, the rest high branch
        panels = np.concatenate(
            [
                self._panel_integrals(u_low, high=False),
                self._panel_integrals(u_high, high=True),
            ]
        )

        head_mass = self._head_integral(np.asarray([self.head]))[0]
        tail_mass = self._tail_unnormalised(np.asarray([self.cut]))[0]
        total = head_mass + panels.sum() + tail_mass
        if not np.isfinite(total) or total <= 0:
            raise ParameterError(f"cannot normalise {shape!r}: total mass {total}")

        self._log_c_prime = -math.log(total)
        log_c_double_prime = self._log_c_prime + self._offset
        if max(self._log_c_prime, log_c_double_prime) > LOG_FLOAT_MAX:
            raise ParameterError(
                f"cannot normalise {shape!r}: log c''={log_c_double_prime:.6g} "
                "overflows a float"
            )
        self.c_prime = 1.0 / total
        self.c_double_prime = math.exp(log_c_double_prime)

        # exceedance at each node: tail beyond the node, normalised
        upper = np.concatenate([np.cumsum(panels[::-1])[::-1], [0.0]]) + tail_mass
        self._ccdf_nodes = upper * self.c_prime
        m_nodes = np.exp(self._u)
        slopes = -self.pdf(m_nodes) * m_nodes
        self._spline = CubicHermiteSpline(self._u, self._ccdf_nodes, slopes)
        logger.debug(
            f"Tabulated CCDF with {self._u.size} nodes, "
            f"c'={self.c_prime:.6e}, tail mass={tail_mass * self.c_prime:.3e}"
        )

    def _unnormalised(self, m: np.ndarray, high: bool) -> np.ndarray:
        p = self.shape
        if high:
            return np.exp(self._offset + log_kernel(m, p.m0, p.T1, p.alpha1))
        return np.exp(log_kernel(m, p.m0, p.T, p.alpha))

    def _panel_integrals(self, u_edges: np.ndarray, high: bool) -> np.ndarray:
        half = 0.5 * np.diff(u_edges)
        mid = 0.5 * (u_edges[1:] + u_edges[:-1])
        u = mid[:, None] + half[:, None] * self._gl_x[None, :]
        m = np.exp(u)
        values = self._unnormalised(m, high) * m
        return half * (values @ self._gl_w)

    def _head_integral(self, upper: np.ndarray) -> np.ndarray:
        """Unnormalised mass on [0, upper] for upper below the first node."""
        half = 0.5 * upper
        m = half[:, None] * (self._gl_x[None, :] + 1.0)
        return half * (self._unnormalised(m, high=False) @ self._gl_w)

    def _tail_unnormalised(self, m: np.ndarray) -> np.ndarray:
        """Pareto-asymptote mass beyond m (m >= cut)."""
        return self._unnormalised(m, high=True) * m / self.shape.alpha1

    def pdf(self, m: np.ndarray) -> np.ndarray:
        return np.exp(_log_density(m, self.shape, self._log_c_prime))

    def ccdf(self, m: np.ndarray) -> np.ndarray:
        out = np.empty_like(m, dtype=float)
        head = m < self.head
        tail = m > self.cut
        body = ~(head | tail)
        if np.any(head):
            out[head] = 1.0 - self.c_prime * self._head_integral(m[head])
        if np.any(body):
            out[body] = self._spline(np.log(m[body]))
        if np.any(tail):
            out[tail] = self.c_prime * self._tail_unnormalised(m[tail])
        return np.clip(out, 0.0, 1.0)

    def isf(self, q: np.ndarray) -> np.ndarray:
        """Income whose exceedance probability is q (0 < q < 1)."""
        # start from the inverse of the node table, linear in log-income
        u = np.interp(-q, -self._ccdf_nodes, self._u)
        above = q > self._ccdf_nodes[0]
        u[above] = np.log(np.maximum((1.0 - q[above]) / self.c_prime, 1e-300))
        below = q < self._ccdf_nodes[-1]
        u[below] = math.log(self.cut) - np.log(q[below] / self._ccdf_nodes[-1]) / (
            self.shape.alpha1
        )
        for _ in range(NEWTON_STEPS):
            m = np.exp(u)
            step = (self.ccdf(m) - q) / (self.pdf(m) * m)
            u = u + np.clip(step, -2.0, 2.0)
        return np.exp(u)


@lru_cache(maxsize=128)
def tabulate(shape: EyShape) -> EyTable:
    """Cached CCDF table for a structural parameter set."""
    return EyTable(shape)


def normalize(p: EyShape) -> EyParams:
    """Attach the normalisation constants to structural parameters.

    c'' follows from continuity of the density at m1, then c' makes the
    total mass one; the mass beyond TAIL_CUT * m1 comes from the Pareto
    asymptote m^-(alpha1+1).

    Raises:
        ParameterError: if alpha1 <= 0 (divergent tail) or the parameters
            violate the structural invariants
    """
    if p.alpha1 <= 0:
        raise ParameterError(f"alpha1={p.alpha1} gives a divergent tail")
    shape = p.shape()
    table = tabulate(shape)
    return EyParams(
        **shape.model_dump(),
        c_prime=table.c_prime,
        c_double_prime=table.c_double_prime,
    )


def pdf_eq(m: ArrayLike, p: EyParams) -> FloatOrArray:
    """Equilibrium density at income m (1/(EUR/year)).

    Raises:
        ParameterError: for negative incomes
    """
    arr, scalar = _as_incomes(m)
    flat = np.atleast_1d(arr)
    values = np.exp(_log_density(flat, p, math.log(p.c_prime)))
    return _restore(values.reshape(arr.shape), scalar)


def ccdf_eq(m: ArrayLike, p: EyShape) -> FloatOrArray:
    """Probability that income exceeds m.

    Raises:
        ParameterError: for negative incomes
    """
    arr, scalar = _as_incomes(m)
    flat = np.atleast_1d(arr)
    values = tabulate(p.shape()).ccdf(flat)
    return _restore(values.reshape(arr.shape), scalar)


def cdf_eq(m: ArrayLike, p: EyShape) -> FloatOrArray:
    """Probability that income does not exceed m."""
    arr, scalar = _as_incomes(m)
    flat = np.atleast_1d(arr)
    values = 1.0 - tabulate(p.shape()).ccdf(flat)
    return _restore(values.reshape(arr.shape), scalar)


def isf(q: ArrayLike, p: EyShape) -> FloatOrArray:
    """Inverse of ccdf_eq: the income exceeded with probability q.

    Raises:
        ParameterError: unless 0 < q < 1
    """
    arr = np.asarray(q, dtype=float)
    if np.any(arr <= 0) or np.any(arr >= 1):
        raise ParameterError("exceedance probabilities must lie in (0, 1)")
    values = tabulate(p.shape()).isf(np.atleast_1d(arr).ravel())
    return _restore(values.reshape(arr.shape), arr.ndim == 0)


def from_langevin(lp: LangevinParams) -> EyParams:
    """Equilibrium-law parameters of the Langevin coefficients `lp`.

    alpha = 1 + a/b, alpha1 = 1 + a'/b, T = B0/A0, T1 = B0/A0', m0 = sqrt(B0/b),
    m1 copied; the constants come from `normalize`.

    Raises:
        ParameterError: if the ratios give alpha1 <= 0 or m0 >= m1
    """
    return normalize(effective_shape(lp))


def _integration_scale(p: EyShape) -> float:
    return min(p.T, p.m0) / 100.0


def mean_income(p: EyParams, upper: Optional[float] = None) -> float:
    """Mean income by quadrature, optionally of the law truncated at `upper`.

    Raises:
        ParameterError: for an untruncated law with alpha1 <= 1 (infinite mean)
            or a non-positive `upper`
    """
    if upper is None and p.alpha1 <= 1:
        raise ParameterError(f"alpha1={p.alpha1} <= 1: the mean income is infinite")
    if upper is not None and upper <= 0:
        raise ParameterError(f"upper={upper} must be positive")

    def first_moment(m: float) -> float:
        return m * float(pdf_eq(m, p))

    if upper is None:
        return integrate(
            first_moment,
            0.0,
            math.inf,
            ref=_integration_scale(p),
            breaks=(p.m0, p.m1),
            cap=NUMERICS.TAIL_CUT * p.m1,
            what="mean income",
        )
    mass = 1.0 - float(ccdf_eq(upper, p))
    moment = integrate(
        first_moment,
        0.0,
        upper,
        ref=_integration_scale(p),
        breaks=(p.m0, p.m1),
        what="truncated mean income",
    )
    return moment / mass
