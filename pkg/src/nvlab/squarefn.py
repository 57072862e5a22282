"""Scalar square functions of a spherical function: the quantity

    Shat^j(phi)^2 = int_0^inf |d^j/ds^j <mu_s, phi>|^2 s^{2j-1} ds,

its parameter-space scans, the integrand building blocks b^{g,j} with their
generator-sphere factors, and weighted Bessel moment integrals.
"""

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature, special, spherical
from .group import Dimensions

# chain-rule coefficients for g(s) = f(s^2), shared with the pairing module
_CHAIN = spherical._CHAIN


def _chain_half(h):
    """ceil(h/2): the base derivative order of the s^2 chain rule at order h."""
    return (h + 1) // 2


def derivative_decomposition(h):
    """Terms (htilde, h1, h2, j1, j2, coeff) with
    d^h/ds^h <mu_s, phi> = sum coeff * b^{(h1,h2),(j1,j2)}(s), htilde = h-h1-h2.

    The coefficient collects the trinomial Leibniz factor over the three
    s-dependent factors of the pairing integrand, the chain-rule constants of
    each f(s^2) derivative, and the overall factor 2 of the radial
    decomposition of the sphere measure.
    """
    terms = []
    for ht in range(h + 1):
        for h1 in range(h - ht + 1):
            h2 = h - ht - h1
            mult = math.factorial(h) / (
                math.factorial(ht) * math.factorial(h1) * math.factorial(h2))
            for c1, _, k1 in _CHAIN[h1]:
                j1 = k1 - _chain_half(h1)
                for c2, _, k2 in _CHAIN[h2]:
                    j2 = k2 - _chain_half(h2)
                    terms.append((ht, h1, h2, j1, j2, 2.0 * mult * c1 * c2))
    return terms


def eval_check_b(param, t, s, htilde, nderiv, xsphere=None):
    """Generator-sphere factor: the integral over the generator sphere of
    (i r t x_v)^htilde e^{i t s r x_v} times the nderiv-th derivative (in the
    squared-radius variable, evaluated at s^2) of the Laguerre product with
    per-plane coefficients lambda_j t^2 rho_j / 2.
    """
    if htilde > 0 and param.v % 2 == 0:
        raise ValueError("htilde > 0 requires odd v (the oscillation needs r > 0)")
    xn = xsphere if isinstance(xsphere, spherical.XProjectionNodes) else (
        spherical.x_projection_nodes(param.v) if xsphere is None
        else spherical.nodes_from_sphere_rule(xsphere))
    t = float(t)
    s = float(s)
    coeffs = [0.5 * lam * t * t * xn.rho[:, j] for j, lam in enumerate(param.lam)]
    ders = special.laguerre_product_derivs(coeffs, param.l, np.full(len(xn.weights), s * s),
                                           nderiv)[nderiv]
    osc = np.exp(1j * t * s * param.r * xn.xv)
    if htilde:
        osc = osc * (1j * param.r * t * xn.xv) ** htilde
    return complex(np.dot(xn.weights, osc * ders))


def check_b_majorant(param, t, s, htilde, nderiv):
    """Reference envelope |A| := |Lambda|: (|A| t^2)^n s^{-htilde}
    sum_{i<=htilde} (|A| s^2 t^2)^i."""
    an = param.lam_norm
    base = (an * t * t) ** nderiv * s ** (-htilde)
    return base * sum((an * s * s * t * t) ** i for i in range(htilde + 1))


def eval_b_gj(param, s, g, j, h, t_rule=None, xsphere=None):
    """One building block b^{g,j}(s) of the h-th pairing derivative.

    With g = (h1, h2), j = (j1, j2), htilde = h - h1 - h2, this is
    s^{d1+d2} times the radial integral of the generator-sphere factor of
    order (htilde, h1'+j1) against the (h2'+j2)-th reduced-Bessel derivative
    at s^2 sqrt(1-t^4) |Lambda| times (sqrt(1-t^4) |Lambda|)^{h2'+j2}, under
    the radial density.  No overall factor 2 (the reconstruction
    coefficients carry it).
    """
    h1, h2 = g
    j1, j2 = j
    ht = h - h1 - h2
    if ht < 0:
        raise ValueError("need h1 + h2 <= h")
    if ht > 0 and param.v % 2 == 0:
        raise ValueError("htilde > 0 requires odd v")
    if not (0 <= j1 <= h1 // 2 and 0 <= j2 <= h2 // 2):
        raise ValueError("need 0 <= j_i <= h_i/2")
    t_rule, xn = spherical._resolve_rules(param, t_rule, xsphere)
    dims = param.dims
    alpha = (dims.z - 2) / 2.0
    s = float(s)
    d1 = 2 * j1 + (h1 % 2)
    d2 = 2 * j2 + (h2 % 2)
    n1 = _chain_half(h1) + j1
    n2 = _chain_half(h2) + j2

    t = t_rule.nodes
    kap = np.sqrt(np.maximum(0.0, 1.0 - t**4)) * param.lam_norm
    cb = np.array([eval_check_b(param, ti, s, ht, n1, xn) for ti in t])
    bess = special.reduced_bessel(alpha, s * s * kap, deriv=n2) * kap**n2
    return complex(s ** (d1 + d2) * np.dot(t_rule.weights, cb * bess))


def reconstruct_derivative(param, s, h, t_rule=None, xsphere=None):
    """Sum of coefficient-weighted b^{g,j}; equals the h-th s-derivative of
    the pairing (cross-checked against the direct analytic path)."""
    acc = 0j
    for ht, h1, h2, j1, j2, c in derivative_decomposition(h):
        if ht > 0 and param.r == 0.0:
            continue
        acc += c * eval_b_gj(param, s, (h1, h2), (j1, j2), h, t_rule, xsphere)
    return complex(acc)


# ----------------------------------------------------------------------
# Shat
# ----------------------------------------------------------------------

@dataclass
class ShatResult:
    param: spherical.SphericalParam
    j: int
    value: float
    s_window: tuple
    tail_bound: float
    tails_ok: bool
    n_points: int
    lo_exponent: float
    hi_exponent: float

    def to_dict(self):
        return {
            "param": json.loads(self.param.to_json()),
            "j": self.j,
            "value": self.value,
            "s_window": list(self.s_window),
            "tail_bound": self.tail_bound,
            "tails_ok": self.tails_ok,
            "n_points": self.n_points,
            "lo_exponent": self.lo_exponent,
            "hi_exponent": self.hi_exponent,
        }


def _fit_exponent(s, y):
    """Least-squares slope of log y vs log s (y > 0)."""
    mask = y > 0
    if mask.sum() < 2:
        return 0.0
    ls, ly = np.log(s[mask]), np.log(y[mask])
    return float(np.polyfit(ls, ly, 1)[0])


def shat(param, j, s_rule=None, t_rule=None, xsphere=None,
         window=(1e-3, 32.0), points_per_decade=48, tail_tol=0.01,
         max_window_growth=8.0):
    """Square-function value for one spherical parameter.

    Integrates |d^j <mu_s, phi>|^2 s^{2j-1} on a log grid over a window
    centered on the parameter's natural scale 1/sqrt(|Lambda| + r^2) (so the
    computation is exactly covariant under (r, Lambda) -> (c r, c^2 Lambda)).
    Both window tails are bounded by locally fitted power laws; the upper
    window grows until the top decade contributes under 0.5%, or the result
    is flagged as not tail-controlled.
    """
    if j < 1 or j > spherical.MAX_S_DERIV:
        raise ValueError(f"order {j} outside supported 1..{spherical.MAX_S_DERIV}")
    t_rule, xn = spherical._resolve_rules(param, t_rule, xsphere)
    scale = 1.0 / math.sqrt(param.lam_norm + param.r**2)
    lo = window[0] * scale
    hi = window[1] * scale
    hi_cap = hi * max_window_growth

    while True:
        npts = max(16, int(round(points_per_decade * math.log10(hi / lo))))
        if s_rule is not None:
            s = np.asarray(s_rule, dtype=float)
            npts = len(s)
        else:
            s = np.geomspace(lo, hi, npts)
        der = spherical.pairing_derivative_batch(param, s, j, t_rule, xn)
        integrand = np.abs(der) ** 2 * s ** (2 * j - 1)
        # trapezoid in log s of integrand * s
        ls = np.log(s)
        total = float(np.trapezoid(integrand * s, ls))
        ndec = max(4, npts // max(1, int(round(math.log10(hi / lo)))))
        top = float(np.trapezoid((integrand * s)[-ndec:], ls[-ndec:]))
        q_lo = _fit_exponent(s[:ndec], integrand[:ndec])
        q_hi = _fit_exponent(s[-ndec:], integrand[-ndec:])
        tail_lo = integrand[0] * s[0] / (q_lo + 1.0) if q_lo > -1.0 else math.inf
        tail_hi = integrand[-1] * s[-1] / (-q_hi - 1.0) if q_hi < -1.0 else math.inf
        converged = (math.isfinite(tail_hi) and total > 0
                     and top <= 0.005 * total and tail_hi <= tail_tol * total)
        if converged or s_rule is not None or hi >= hi_cap:
            break
        hi *= 2.0

    tail = tail_lo + tail_hi
    ok = math.isfinite(tail) and total > 0 and tail <= tail_tol * total
    value = math.sqrt(total + (tail if math.isfinite(tail) else 0.0))
    return ShatResult(param, j, value, (float(s[0]), float(s[-1])),
                      float(tail / total) if total > 0 and math.isfinite(tail) else math.inf,
                      ok, len(s), q_lo, q_hi)


# ----------------------------------------------------------------------
# Parameter scans
# ----------------------------------------------------------------------

@dataclass
class ScanGrid:
    """Cartesian scan of the parameter set: geometric ladder of leading
    lambda values, shape vectors (decreasing, normalized to lead 1),
    Laguerre index tuples per rung, and for odd v relative r values
    (r = r_rel * sqrt(lambda_max))."""

    v: int
    lambda_ladder: tuple = (1.0, 4.0, 16.0, 64.0, 256.0, 1024.0)
    shapes: tuple = ((1.0, 0.5),)
    l_choices: tuple = ((0, 0), (1, 0), (5, 1), (20, 5))
    r_rel: tuple = (1.0,)

    def points(self):
        dims = Dimensions(self.v)
        pts = []
        for lmax in self.lambda_ladder:
            for shape in self.shapes:
                if len(shape) != dims.vprime:
                    raise ValueError("shape length must be v'")
                lam = tuple(lmax * x for x in shape)
                for l in self.l_choices:
                    if len(l) != dims.vprime:
                        raise ValueError("l length must be v'")
                    if dims.odd:
                        for rr in self.r_rel:
                            pts.append(spherical.SphericalParam(
                                self.v, rr * math.sqrt(lmax), lam, l))
                    else:
                        pts.append(spherical.SphericalParam(self.v, 0.0, lam, l))
        return pts

    @staticmethod
    def from_json(text):
        d = json.loads(text)
        kw = {}
        for key in ("lambda_ladder", "r_rel"):
            if key in d:
                kw[key] = tuple(d[key])
        for key in ("shapes", "l_choices"):
            if key in d:
                kw[key] = tuple(tuple(x) for x in d[key])
        if not d.get("v"):
            raise ValueError("grid spec must give v")
        return ScanGrid(v=d["v"], **kw)


@dataclass
class ScanReport:
    v: int
    j: int
    sup: float
    rung_sups: list
    rung_ratios: list
    l_ladder_sups: list
    l_ladder_ratios: list
    stable: bool
    failures: list
    results: list = field(repr=False, default_factory=list)

    def to_dict(self):
        return {
            "v": self.v, "j": self.j, "sup": self.sup,
            "rung_sups": self.rung_sups, "rung_ratios": self.rung_ratios,
            "l_ladder_sups": self.l_ladder_sups,
            "l_ladder_ratios": self.l_ladder_ratios,
            "stable": self.stable,
            "failures": [json.loads(p.to_json()) for p in self.failures],
        }

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["v", "j", "r", "lambda", "l", "value", "tail_bound",
                        "tails_ok", "s_lo", "s_hi"])
            for res in self.results:
                p = res.param
                w.writerow([p.v, res.j, p.r, " ".join(map(str, p.lam)),
                            " ".join(map(str, p.l)), res.value, res.tail_bound,
                            res.tails_ok, res.s_window[0], res.s_window[1]])


def _sup_ratios(sups):
    return [b / a if a > 0 else math.inf for a, b in zip(sups, sups[1:])]


def scan_shat(grid, j, stable_band=(0.95, 1.05), workers=1, **shat_kw):
    """Evaluate shat on every grid point and report ladder stabilization.

    The scale ladder (lambda_max at fixed shape and l) should show ratios
    near 1 by exact scale invariance; the verdict `stable` additionally
    requires the Laguerre-index ladder sups to stabilize into `stable_band`
    on the outermost rungs, which is the operative uniform-boundedness
    signal.  Any tail failure is collected and fails the verdict.
    """
    pts = grid.points()
    if not pts:
        raise ValueError("empty grid")
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda p: shat(p, j, **shat_kw), pts))
    else:
        results = [shat(p, j, **shat_kw) for p in pts]

    by_rung = {}
    by_l = {}
    for res in results:
        lmax = max(res.param.lam)
        by_rung.setdefault(round(math.log2(lmax), 6), []).append(res.value)
        by_l.setdefault(max(res.param.l), []).append(res.value)
    rung_keys = sorted(by_rung)
    rung_sups = [max(by_rung[k]) for k in rung_keys]
    l_keys = sorted(by_l)
    l_sups = [max(by_l[k]) for k in l_keys]
    failures = [r.param for r in results if not r.tails_ok]
    rung_ratios = _sup_ratios(rung_sups)
    l_ratios = _sup_ratios(l_sups)
    ok_rung = all(stable_band[0] <= x <= stable_band[1] for x in rung_ratios[-2:])
    ok_l = all(stable_band[0] <= x <= stable_band[1] for x in l_ratios[-1:])
    stable = ok_rung and ok_l and not failures
    return ScanReport(grid.v, j, max(r.value for r in results), rung_sups,
                      rung_ratios, l_sups, l_ratios, stable, failures, results)


# ----------------------------------------------------------------------
# Bessel moments
# ----------------------------------------------------------------------

def bessel_moment(alpha, nderiv, beta, T, panel=1.5, panel_pts=8):
    """int_0^T |d^n J_alpha(s)|^2 s^beta ds by composite Gauss panels sized
    to resolve the Bessel oscillation."""
    if alpha <= 0:
        raise ValueError("order must be positive")
    if beta <= -1:
        raise ValueError("beta must exceed -1")
    if T < 0:
        raise ValueError("T must be nonnegative")
    if T == 0:
        return 0.0
    x, w = np.polynomial.legendre.leggauss(panel_pts)
    n_panels = max(1, int(math.ceil(T / panel)))
    edges = np.linspace(0.0, T, n_panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    s = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    ww = (half[:, None] * w[None, :]).ravel()
    vals = np.abs(special.reduced_bessel(alpha, s, deriv=nderiv)) ** 2 * s**beta
    return float(np.dot(ww, vals))
