"""Statistical special functions used by the SER engines.

Everything here works on scalars or numpy arrays (broadcasting) and returns
floats/arrays of the broadcast shape.  The chi-square functions are for
2 degrees of freedom only, i.e. the squared modulus of a unit-variance
(per component) complex Gaussian, optionally with a deterministic offset.

The semi-analytic SER needs ``1 - prod(CDF)`` where the product is very
close to one, so most helpers also come in a ``log`` flavour that keeps the
precision of the tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "GaussHermiteRule",
    "chi2_cdf_2dof",
    "log_chi2_cdf_2dof",
    "marcum_q1",
    "marcum_q1_pair",
    "noncentral_chi2_cdf_2dof",
    "log_noncentral_chi2_cdf_2dof",
    "rician_cdf",
    "normal_cdf",
    "log_normal_cdf",
    "gauss_hermite",
]

# exp(-(a-b)^2/2) below this underflows the whole series: result is 0 or 1.
_NEGLIGIBLE_EXPONENT = 745.0


def _as_float_array(x, name):
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)):
        raise ValueError(f"{name} contains NaN")
    return arr


def _scalar_or_array(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def chi2_cdf_2dof(x):
    """CDF of a central chi-square variable with 2 degrees of freedom."""
    x = _as_float_array(x, "x")
    if np.any(x < 0):
        raise ValueError("chi-square argument must be >= 0")
    return _scalar_or_array(-np.expm1(-0.5 * x))


def log_chi2_cdf_2dof(x):
    """``log(1 - exp(-x/2))``, accurate both near x=0 and for large x."""
    x = _as_float_array(x, "x")
    if np.any(x < 0):
        raise ValueError("chi-square argument must be >= 0")
    with np.errstate(divide="ignore"):
        h = 0.5 * x
        # log(-expm1(-h)) for small h, log1p(-exp(-h)) for large h
        out = np.where(
            h < math.log(2.0),
            np.log(-np.expm1(-np.minimum(h, math.log(2.0)))),
            np.log1p(-np.exp(-np.maximum(h, math.log(2.0)))),
        )
    return _scalar_or_array(out)


def _series_length(x):
    # I_k(x)/I_0(x) ~ exp(-k^2 / 2x): below 1e-17 past k ~ sqrt(78 x); the
    # extra margin is the starting offset for the backward recurrence.
    return int(math.ceil(math.sqrt(100.0 * float(np.max(x)) + 1.0))) + 40


def _bessel_series(ratio, x, pref, start):
    """``pref * sum_{k>=start} ratio**k * ive(k, x)`` with ``0 <= ratio <= 1``.

    Miller's algorithm: the recurrence I_{k-1} = I_{k+1} + (2k/x) I_k is run
    downward from an order past the point where terms are negligible, the
    series is accumulated Horner-style on the way, and the result is
    normalised with a single ``ive(0, x)`` call.
    """
    total = np.zeros_like(x)
    tiny = (pref > 0) & (x < 1e-3)
    if np.any(tiny):
        # (x/2)^k / k! is below 1e-17 of the leading term by k = 8
        ks = np.arange(start, 10, dtype=float)[:, None]
        terms = ratio[tiny][None, :] ** ks * special.ive(ks, x[tiny][None, :])
        total[tiny] = pref[tiny] * terms.sum(axis=0)
    live = (pref > 0) & ~tiny
    if not np.any(live):
        return total
    xs, rs, ps = x[live], ratio[live], pref[live]
    top = _series_length(xs)
    f_next = np.zeros_like(xs)
    f_cur = np.full_like(xs, 1e-280)
    acc = np.zeros_like(xs)  # sum_{j} ratio**(j) f_{k+j}, Horner form
    two_over_x = 2.0 / xs
    for k in range(top, 0, -1):
        if k >= start:
            acc = acc * rs + f_cur
        f_prev = f_next + k * two_over_x * f_cur
        f_next, f_cur = f_cur, f_prev
        big = f_cur > 1e250
        if np.any(big):
            f_cur = np.where(big, f_cur * 1e-250, f_cur)
            f_next = np.where(big, f_next * 1e-250, f_next)
            acc = np.where(big, acc * 1e-250, acc)
    if start == 0:
        acc = acc * rs + f_cur
        scale_pow = 1.0
    else:
        scale_pow = rs ** (start - 1) * rs
    # acc / f_cur is O(1); form it first so tiny prefactors cannot underflow early
    total[live] = ps * (special.ive(0, xs) * (acc / f_cur) * scale_pow)
    return total


def marcum_q1_pair(a, b):
    """Return ``(Q1(a, b), 1 - Q1(a, b))``, each with full relative precision.

    Uses the Bessel series

        Q1(a,b)     = exp(-(a^2+b^2)/2) sum_{k>=0} (a/b)^k I_k(ab)   (a <= b)
        1 - Q1(a,b) = exp(-(a^2+b^2)/2) sum_{k>=1} (b/a)^k I_k(ab)   (a > b)

    evaluated with exponentially scaled Bessel functions, so there is no
    overflow for large ``a*b``; the small side is summed directly and the
    other side is its complement.
    """
    a = _as_float_array(a, "a")
    b = _as_float_array(b, "b")
    if np.any(a < 0) or np.any(b < 0):
        raise ValueError("Marcum Q arguments must be >= 0")
    a, b = np.broadcast_arrays(a, b)
    shape = a.shape
    a = a.ravel().astype(float)
    b = b.ravel().astype(float)

    q = np.empty_like(a)
    p = np.empty_like(a)

    zero_b = b == 0
    zero_a = (a == 0) & ~zero_b
    q[zero_b], p[zero_b] = 1.0, 0.0
    q[zero_a] = np.exp(-0.5 * b[zero_a] ** 2)
    p[zero_a] = -np.expm1(-0.5 * b[zero_a] ** 2)

    rest = ~(zero_a | zero_b)
    x = a * b
    gap = 0.5 * (a - b) ** 2
    with np.errstate(under="ignore"):
        pref = np.where(rest & (gap < _NEGLIGIBLE_EXPONENT), np.exp(-gap), 0.0)

    upper = rest & (a <= b)
    if np.any(upper):
        sub = np.nonzero(upper)[0]
        s = _bessel_series(a[sub] / b[sub], x[sub], pref[sub], 0)
        q[sub] = np.minimum(s, 1.0)
        p[sub] = np.maximum(1.0 - s, 0.0)
    lower = rest & (a > b)
    if np.any(lower):
        sub = np.nonzero(lower)[0]
        s = _bessel_series(b[sub] / a[sub], x[sub], pref[sub], 1)
        p[sub] = np.minimum(s, 1.0)
        q[sub] = np.maximum(1.0 - s, 0.0)
    return _scalar_or_array(q.reshape(shape)), _scalar_or_array(p.reshape(shape))


def marcum_q1(a, b):
    """First-order Marcum Q function ``Q1(a, b)``."""
    return marcum_q1_pair(a, b)[0]


def noncentral_chi2_cdf_2dof(x, lam):
    """CDF of a non-central chi-square (2 dof) with non-centrality ``lam``."""
    x = _as_float_array(x, "x")
    lam = _as_float_array(lam, "lambda")
    if np.any(x < 0) or np.any(lam < 0):
        raise ValueError("chi-square argument and non-centrality must be >= 0")
    return marcum_q1_pair(np.sqrt(lam), np.sqrt(x))[1]


def log_noncentral_chi2_cdf_2dof(x, lam):
    x = _as_float_array(x, "x")
    lam = _as_float_array(lam, "lambda")
    if np.any(x < 0) or np.any(lam < 0):
        raise ValueError("chi-square argument and non-centrality must be >= 0")
    q, p = marcum_q1_pair(np.sqrt(lam), np.sqrt(x))
    q = np.asarray(q)
    p = np.asarray(p)
    with np.errstate(divide="ignore"):
        out = np.where(q < 0.5, np.log1p(-q), np.log(p))
    return _scalar_or_array(out)


def rician_cdf(x, v, sigma):
    """CDF of a Rice distribution with non-centrality ``v`` and scale ``sigma``.

    ``v = 0`` gives the Rayleigh CDF.
    """
    if np.any(np.asarray(sigma) <= 0):
        raise ValueError("sigma must be > 0")
    x = _as_float_array(x, "x")
    v = _as_float_array(v, "v")
    if np.any(x < 0) or np.any(v < 0):
        raise ValueError("Rice CDF arguments must be >= 0")
    return marcum_q1_pair(v / sigma, x / sigma)[1]


def log_rician_cdf(x, v, sigma):
    if np.any(np.asarray(sigma) <= 0):
        raise ValueError("sigma must be > 0")
    q, p = marcum_q1_pair(np.asarray(v, float) / sigma, np.asarray(x, float) / sigma)
    q = np.asarray(q)
    p = np.asarray(p)
    with np.errstate(divide="ignore"):
        out = np.where(q < 0.5, np.log1p(-q), np.log(p))
    return _scalar_or_array(out)


def normal_cdf(x, mu=0.0, sigma=1.0):
    """Gaussian CDF ``Phi((x - mu) / sigma)`` via ``erfc``."""
    if np.any(np.asarray(sigma) <= 0):
        raise ValueError("sigma must be > 0")
    z = (np.asarray(x, dtype=float) - mu) / sigma
    return _scalar_or_array(0.5 * special.erfc(-z / math.sqrt(2.0)))


def log_normal_cdf(x, mu=0.0, sigma=1.0):
    if np.any(np.asarray(sigma) <= 0):
        raise ValueError("sigma must be > 0")
    z = (np.asarray(x, dtype=float) - mu) / sigma
    return _scalar_or_array(special.log_ndtr(z))


@dataclass(frozen=True)
class GaussHermiteRule:
    """N-point Gauss-Hermite rule for the weight ``exp(-x^2)`` on the real line."""

    n: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)


def _orthonormal_hermite(n, x):
    """Values p_0..p_{n} of Hermite polynomials orthonormal for exp(-x^2)/sqrt(pi)."""
    p = np.zeros((n + 1,) + np.shape(x))
    p[0] = 1.0
    if n >= 1:
        p[1] = math.sqrt(2.0) * x
    for k in range(1, n):
        p[k + 1] = (math.sqrt(2.0) * x * p[k] - math.sqrt(k) * p[k - 1]) / math.sqrt(k + 1)
    return p


def gauss_hermite(n: int) -> GaussHermiteRule:
    """Physicists' Gauss-Hermite rule, Golub-Welsch plus Newton polishing."""
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= 64:
        raise ValueError("Gauss-Hermite point count must be an integer in [1, 64]")
    n = int(n)
    # Jacobi matrix of the orthonormal recurrence: off-diagonal sqrt(k/2).
    off = np.sqrt(np.arange(1, n) / 2.0)
    jac = np.diag(off, 1) + np.diag(off, -1)
    x = np.linalg.eigvalsh(jac)
    for _ in range(3):
        p = _orthonormal_hermite(n, x)
        # p_n' = sqrt(2n) p_{n-1}
        step = p[n] / (math.sqrt(2.0 * n) * p[n - 1])
        x = x - step
    x = 0.5 * (x - x[::-1])  # exact symmetry
    p = _orthonormal_hermite(n - 1, x)
    w = math.sqrt(math.pi) / np.sum(p**2, axis=0)
    w = 0.5 * (w + w[::-1])
    return GaussHermiteRule(n=n, nodes=x, weights=w)
