"""Checked adaptive quadrature over income ranges spanning many decades."""

import math
from typing import Callable, Iterable, List

from loguru import logger
from scipy.integrate import quad

from config.env import NUMERICS
from incomeflow.errors import QuadratureError

logger = logger.bind(component="model")

Integrand = Callable[[float], float]


def quad_checked(
    func: Integrand, lo: float, hi: float, what: str = "integral"
) -> float:
    """scipy.integrate.quad with the configured tolerances.

    QUADPACK also flags harmless round-off on integrands that have underflowed
    to zero, so a flagged result is only rejected when its error estimate
    misses the requested tolerance by more than a factor of ten.

    Raises:
        QuadratureError: with the achieved absolute error
    """
    options = NUMERICS.quad_options()
    result = quad(func, lo, hi, full_output=1, **options)
    value, abserr = result[0], result[1]
    if len(result) > 3:
        target = max(options["epsabs"], options["epsrel"] * abs(value))
        if not math.isfinite(value) or abserr > 10.0 * target:
            raise QuadratureError(
                f"{what} on [{lo:.6g}, {hi:.6g}] did not converge: {result[3]}", abserr
            )
        logger.debug(f"{what} on [{lo:.6g}, {hi:.6g}] flagged: {result[3]}")
    return float(value)


def decade_edges(
    lo: float, hi: float, ref: float, breaks: Iterable[float] = ()
) -> List[float]:
    """Edges splitting [lo, hi] at `ref`, every decade above it and at `breaks`."""
    edges = {lo, hi}
    if lo < ref < hi:
        edges.add(ref)
    start = max(lo, ref)
    if start > 0:
        k = math.floor(math.log10(start)) + 1
        while 10.0**k < hi:
            edges.add(10.0**k)
            k += 1
    edges.update(b for b in breaks if lo < b < hi)
    return sorted(edges)


def integrate(
    func: Integrand,
    lo: float,
    hi: float,
    ref: float,
    breaks: Iterable[float] = (),
    cap: float = math.inf,
    what: str = "integral",
) -> float:
    """Integrate `func` over [lo, hi] piecewise.

    The piece below `ref` is integrated in the income itself, every piece
    above it in log-income, one decade at a time. An infinite `hi` needs a
    finite `cap`; [cap, inf) is then the analytic remainder of a power law
    through func(cap) and func(2 cap).

    Args:
        func: scalar integrand
        lo, hi: integration limits (hi may be inf)
        ref: income below which the integrand varies on a linear scale
        breaks: incomes where the integrand has a kink
        cap: last finite edge when hi is infinite
        what: label used in error messages
    """
    finite_hi = hi if math.isfinite(hi) else cap
    if not math.isfinite(finite_hi):
        raise ValueError("an infinite upper limit needs a finite cap")

    def in_log(u: float) -> float:
        m = math.exp(u)
        return func(m) * m

    total = 0.0
    edges = decade_edges(lo, finite_hi, ref, breaks) if lo < finite_hi else []
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= ref or a <= 0:
            total += quad_checked(func, a, b, what)
        else:
            total += quad_checked(in_log, math.log(a), math.log(b), what)
    if not math.isfinite(hi):
        total += power_law_remainder(func, max(lo, finite_hi), what)
    return total


def power_law_remainder(func: Integrand, cap: float, what: str = "integral") -> float:
    """Integral of `func` over [cap, inf) for an integrand decaying as a power.

    Raises:
        QuadratureError: if the local exponent does not exceed one
    """
    f1, f2 = func(cap), func(2.0 * cap)
    if f1 <= 0 or f2 <= 0:
        return 0.0
    decay = math.log(f1 / f2) / math.log(2.0)
    if decay <= 1.0:
        raise QuadratureError(
            f"{what} beyond {cap:.6g} diverges (local exponent {decay:.3g})", math.inf
        )
    return f1 * cap / (decay - 1.0)
