"""Shared numerical primitives: normal densities, bisection, golden section,
adaptive Simpson quadrature.

All routines are deterministic and allocation-light; they are the only places
in the package where iteration caps live.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtr

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


class NumericalError(RuntimeError):
    """An iterative numerical routine failed to converge within its cap."""


def log_normal_pdf(x, mean=0.0, sd=1.0):
    """Log density of Normal(mean, sd^2); works on scalars and arrays."""
    z = (np.asarray(x, dtype=float) - mean) / sd
    return -0.5 * z * z - LOG_SQRT_2PI - np.log(sd)


def normal_cdf(x):
    """Standard normal cdf; handles +/-inf."""
    return ndtr(x)


def bisect_root(f, lo, hi, xtol=1e-12, max_iter=200, flo=None, fhi=None):
    """Find a sign change of f on [lo, hi] by bisection.

    Returns the interval midpoint once the bracket width is <= xtol.
    f(lo) and f(hi) must have opposite (nonzero) signs.
    """
    flo = f(lo) if flo is None else flo
    fhi = f(hi) if fhi is None else fhi
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol:
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    raise NumericalError(f"bisection did not reach xtol={xtol} in {max_iter} iterations")


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_min(f, a, b, xtol=1e-10, max_iter=400):
    """Minimize a unimodal f on [a, b]; returns the bracket midpoint."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= xtol:
            return 0.5 * (a + b)
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    raise NumericalError(f"golden section did not reach xtol={xtol} in {max_iter} iterations")


def _simpson(f, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adaptive_step(f, a, fa, b, fb, m, fm, whole, eps, depth, max_depth):
    lm, flm, left = _simpson(f, a, fa, m, fm)
    rm, frm, right = _simpson(f, m, fm, b, fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * eps:
        return left + right + delta / 15.0
    if depth >= max_depth:
        raise NumericalError(f"adaptive Simpson exceeded depth {max_depth}")
    return (_adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth + 1, max_depth)
            + _adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth + 1, max_depth))


def adaptive_simpson(f, a, b, rel_tol=1e-9, max_depth=60, initial_panels=16):
    """Integrate f over [a, b] with adaptive Simpson refinement.

    The absolute tolerance is rel_tol times a coarse magnitude estimate of the
    integral, floored to stay meaningful when the integral is ~0. The initial
    panel split guards against narrow features being missed by the first
    Simpson estimate.
    """
    if not b > a:
        raise ValueError("need b > a")
    edges = np.linspace(a, b, initial_panels + 1)
    fvals = [f(x) for x in edges]
    coarse = sum(abs(0.5 * (f0 + f1)) * (x1 - x0)
                 for f0, f1, x0, x1 in zip(fvals[:-1], fvals[1:], edges[:-1], edges[1:]))
    eps_total = rel_tol * max(coarse, 1e-300)
    eps_panel = eps_total / initial_panels
    total = 0.0
    for i in range(initial_panels):
        a_i, b_i = edges[i], edges[i + 1]
        fa, fb = fvals[i], fvals[i + 1]
        m, fm, whole = _simpson(f, a_i, fa, b_i, fb)
        total += _adaptive_step(f, a_i, fa, b_i, fb, m, fm, whole, eps_panel, 0, max_depth)
    return total
