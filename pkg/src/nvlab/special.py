"""Special functions used throughout: Laguerre functions l_n(x) = L_n(x)e^{-x/2},
the reduced Bessel function J_a(s) normalized to 1 at the origin, orthonormal
Hermite functions, the real Beta function, and the Gamma function on vertical
lines with its Stirling-type ratio scan.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.special as _sp

MAX_BESSEL_DERIV = 8
MAX_HERMITE_DEGREE = 60


# ----------------------------------------------------------------------
# Laguerre functions
# ----------------------------------------------------------------------

def laguerre_poly_derivs(n, x, nderiv=0):
    """Values L_n^(d)(x), d = 0..nderiv, of the Laguerre polynomial of type 0.

    Runs the three-term recurrence
        (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}
    jointly for the polynomial and its derivatives (differentiating the
    recurrence d times adds a -d L_k^(d-1) term).  Stable for the degrees
    and arguments the package needs.  Returns shape (nderiv+1,) + x.shape.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros((nderiv + 1,) + x.shape)
    out[0] = 1.0
    if n == 0:
        return out
    prev = out.copy()                      # L_0 and derivatives
    cur = np.zeros_like(prev)
    cur[0] = 1.0 - x
    if nderiv >= 1:
        cur[1] = -1.0
    for k in range(1, n):
        nxt = np.empty_like(cur)
        for d in range(nderiv + 1):
            t = (2 * k + 1 - x) * cur[d] - k * prev[d]
            if d >= 1:
                t -= d * cur[d - 1]
            nxt[d] = t / (k + 1)
        prev, cur = cur, nxt
    return cur


def laguerre_fn(n, x, deriv=0):
    """l_n^(deriv)(x) where l_n(x) = L_n(x) e^{-x/2}; |l_n| <= 1 on [0, inf)."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("argument must be nonnegative")
    polys = laguerre_poly_derivs(n, x, deriv)
    # d^m/dx^m [e^{-x/2} L] = e^{-x/2} sum_i binom(m,i) (-1/2)^{m-i} L^(i)
    acc = np.zeros_like(x)
    for i in range(deriv + 1):
        acc = acc + math.comb(deriv, i) * (-0.5) ** (deriv - i) * polys[i]
    res = np.exp(-0.5 * x) * acc
    return res if res.shape else float(res)


def laguerre_product_derivs(coeffs, ls, u, nderiv):
    """Derivatives in u, up to nderiv, of prod_j l_{ls[j]}(coeffs[j] * u).

    `coeffs` broadcasts against `u`; returns shape (nderiv+1,) + broadcast
    shape.  Generic Leibniz over the factors.
    """
    u = np.asarray(u, dtype=float)
    factors = []
    for c, l in zip(coeffs, ls):
        c = np.asarray(c, dtype=float)
        arg = c * u
        ders = [laguerre_fn(l, arg, deriv=d) * c**d for d in range(nderiv + 1)]
        factors.append(ders)
    prod = [np.ones(np.broadcast(u, *(np.asarray(c) for c in coeffs)).shape)]
    prod = prod + [np.zeros_like(prod[0]) for _ in range(nderiv)]
    for ders in factors:
        new = [np.zeros_like(prod[0]) for _ in range(nderiv + 1)]
        for d in range(nderiv + 1):
            for i in range(d + 1):
                new[d] = new[d] + math.comb(d, i) * prod[d - i] * ders[i]
        prod = new
    return np.stack(prod)


# ----------------------------------------------------------------------
# Reduced Bessel function
# ----------------------------------------------------------------------

def _reduced_bessel_base(alpha, s):
    """J_alpha(s) = Gamma(a+1) (s/2)^{-a} J_a(s), an entire even function with
    value 1 at s = 0.  Power series for small arguments, library Bessel
    evaluation beyond the switchover max(10, 2 alpha)."""
    if alpha < -0.5:
        raise ValueError("order must be >= -1/2")
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("argument must be nonnegative")
    if alpha == -0.5:
        return np.cos(s)
    out = np.empty_like(s)
    cut = max(10.0, 2.0 * alpha)
    small = s <= cut
    if small.any():
        ss = s[small]
        q = -0.25 * ss * ss
        term = np.ones_like(ss)
        acc = np.ones_like(ss)
        k = 0
        while True:
            k += 1
            term = term * q / (k * (alpha + k))
            acc = acc + term
            if k > 4 + cut and np.all(np.abs(term) <= 1e-18 * (1.0 + np.abs(acc))):
                break
        out[small] = acc
    big = ~small
    if big.any():
        sb = s[big]
        out[big] = _sp.gamma(alpha + 1.0) * (sb / 2.0) ** (-alpha) * _sp.jv(alpha, sb)
    return out


def _deriv_expansion(alpha, nderiv):
    """Represent d^n/ds^n J_alpha(s) as sum c * s^p * J_{alpha+m}(s).

    Uses J_a'(s) = -s/(2(a+1)) J_{a+1}(s) repeatedly; returns a dict
    {(p, m): c}.
    """
    terms = {(0, 0): 1.0}
    for _ in range(nderiv):
        new = {}
        for (p, m), c in terms.items():
            if p > 0:
                key = (p - 1, m)
                new[key] = new.get(key, 0.0) + c * p
            key = (p + 1, m + 1)
            new[key] = new.get(key, 0.0) - c / (2.0 * (alpha + m + 1.0))
        terms = new
    return terms


def reduced_bessel(alpha, s, deriv=0):
    """d^deriv/ds^deriv of the reduced Bessel function of order alpha.

    Derivatives (up to order 8) are assembled from the order-raising
    identity, so one series/backend evaluator covers every order.
    """
    if deriv < 0 or deriv > MAX_BESSEL_DERIV:
        raise ValueError(f"derivative order {deriv} outside supported 0..{MAX_BESSEL_DERIV}")
    s = np.asarray(s, dtype=float)
    if deriv == 0:
        res = _reduced_bessel_base(alpha, s)
        return res if res.shape else float(res)
    acc = np.zeros_like(s)
    for (p, m), c in _deriv_expansion(alpha, deriv).items():
        acc = acc + c * s**p * _reduced_bessel_base(alpha + m, s)
    return acc if acc.shape else float(acc)


def sphere_plane_wave(n, xnorm):
    """Integral of e^{i<x, y>} over the unit sphere of R^n (probability
    surface measure); equals the reduced Bessel function of order (n-2)/2
    at |x|.  Real by symmetry."""
    if n < 2:
        raise ValueError("ambient dimension must be at least 2")
    return reduced_bessel((n - 2) / 2.0, xnorm)


# ----------------------------------------------------------------------
# Hermite functions
# ----------------------------------------------------------------------

def hermite_weber(l, x):
    """Orthonormal Hermite function h_l, via the stable recurrence
    h_{l+1} = x sqrt(2/(l+1)) h_l - sqrt(l/(l+1)) h_{l-1}."""
    if l < 0:
        raise ValueError("index must be nonnegative")
    if l > MAX_HERMITE_DEGREE:
        raise ValueError(f"index {l} too large for stable evaluation (max {MAX_HERMITE_DEGREE})")
    x = np.asarray(x, dtype=float)
    h0 = np.pi ** (-0.25) * np.exp(-0.5 * x * x)
    if l == 0:
        return h0 if h0.shape else float(h0)
    prev, cur = h0, x * np.sqrt(2.0) * h0
    for k in range(1, l):
        prev, cur = cur, x * np.sqrt(2.0 / (k + 1)) * cur - np.sqrt(k / (k + 1.0)) * prev
    return cur if cur.shape else float(cur)


# ----------------------------------------------------------------------
# Gamma and Beta
# ----------------------------------------------------------------------

# Lanczos approximation, g = 7, accurate to ~1e-13 relative on Re z >= 0.5.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def complex_gamma(x, y=0.0):
    """Gamma(x + iy) by the Lanczos approximation, with the reflection
    formula for Re z < 0.5.  Raises at the poles."""
    z = complex(x, y)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise ValueError(f"Gamma pole at {z}")
    if z.real < 0.5:
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        s = np.sin(np.pi * z)
        if s == 0:
            raise ValueError(f"Gamma pole at {z}")
        return np.pi / (s * complex_gamma(1.0 - z.real, -z.imag))
    z = z - 1.0
    acc = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        acc = acc + c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return np.sqrt(2.0 * np.pi) * t ** (z + 0.5) * np.exp(-t) * acc


def gamma_abs(x, y):
    return abs(complex_gamma(x, y))


def beta_fn(p, q):
    """B(p, q) = Gamma(p) Gamma(q) / Gamma(p+q) for positive arguments."""
    if p <= 0 or q <= 0:
        raise ValueError("Beta arguments must be positive")
    return math.exp(math.lgamma(p) + math.lgamma(q) - math.lgamma(p + q))


@dataclass
class GammaRatioReport:
    """Observed band of e^{-pi|y|/2} |y|^{x-1/2} / |Gamma(x+iy)| over a grid,
    together with the band for the signed-exponent variant e^{-pi y/2}."""

    x_range: tuple
    y_max: float
    cmin: float
    cmax: float
    cmin_signed: float
    cmax_signed: float
    limit: float = 1.0 / math.sqrt(2.0 * math.pi)

    def to_dict(self):
        return {
            "x_range": list(self.x_range),
            "y_max": self.y_max,
            "cmin": self.cmin,
            "cmax": self.cmax,
            "cmin_signed": self.cmin_signed,
            "cmax_signed": self.cmax_signed,
            "large_y_limit": self.limit,
        }


def gamma_ratio_estimate_check(x_range, y_max, nx=13, ny=60):
    """Scan the Stirling-type ratio over x in [a, b], 1 <= |y| <= y_max
    (both signs of y).  The |y| variant stays in a finite positive band;
    the signed variant blows up for y < 0 and is reported for comparison."""
    a, b = x_range
    if not (0 < a <= b):
        raise ValueError("x range must satisfy 0 < a <= b")
    if y_max <= 1:
        raise ValueError("y_max must exceed 1")
    if nx < 1 or ny < 2:
        raise ValueError("degenerate grid")
    xs = np.linspace(a, b, nx)
    ys = np.geomspace(1.0, y_max, ny)
    ys = np.concatenate([-ys[::-1], ys])
    lo, hi = np.inf, -np.inf
    lo_s, hi_s = np.inf, -np.inf
    for x in xs:
        for y in ys:
            g = gamma_abs(x, y)
            r = math.exp(-0.5 * math.pi * abs(y)) * abs(y) ** (x - 0.5) / g
            rs = math.exp(-0.5 * math.pi * y) * abs(y) ** (x - 0.5) / g
            lo, hi = min(lo, r), max(hi, r)
            lo_s, hi_s = min(lo_s, rs), max(hi_s, rs)
    return GammaRatioReport((a, b), y_max, lo, hi, lo_s, hi_s)
