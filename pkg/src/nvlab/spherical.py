"""Bounded spherical functions of the pair (N_v, O(v)).

A parameter (r, Lambda, l) indexes the elementary function Theta, a product
of an oscillation in the last generator coordinate, an oscillation against
the block-diagonal center form D_2(Lambda), and Laguerre functions of the
squared 2-plane projections of X.  The spherical function phi is the Haar
average of Theta over O(v); pairings of phi against the dilated sphere
measures mu_s reduce to a 1-D radial integral whose center-sphere factor is
a reduced Bessel function.
"""

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import group, quadrature, special
from .group import Dimensions


# chain-rule table for g(s) = f(s^2): entry (c, d, k) contributes
# c * s^d * f^(k)(s^2) to g^(m)(s)
_CHAIN = {
    0: ((1.0, 0, 0),),
    1: ((2.0, 1, 1),),
    2: ((2.0, 0, 1), (4.0, 2, 2)),
    3: ((12.0, 1, 2), (8.0, 3, 3)),
}
MAX_S_DERIV = 3


@dataclass(frozen=True)
class SphericalParam:
    """Parameter (r, Lambda, l): r = 0 exactly when v is even, r > 0 when v
    is odd; Lambda strictly decreasing positive of length v//2; l a tuple of
    nonnegative integers of the same length."""

    v: int
    r: float
    lam: tuple
    l: tuple

    def __post_init__(self):
        dims = Dimensions(self.v)
        object.__setattr__(self, "lam", tuple(float(x) for x in self.lam))
        object.__setattr__(self, "l", tuple(int(x) for x in self.l))
        if len(self.lam) != dims.vprime or len(self.l) != dims.vprime:
            raise ValueError(f"lambda and l must have length v' = {dims.vprime}")
        if any(x <= 0 for x in self.lam):
            raise ValueError("lambda entries must be positive")
        if any(x < 0 for x in self.l):
            raise ValueError("l entries must be nonnegative")
        if dims.odd:
            if self.r <= 0:
                raise ValueError("r must be positive for odd v")
        elif self.r != 0:
            raise ValueError("r must be zero for even v")
        if not self.in_parameter_set:
            warnings.warn("lambda not strictly decreasing: parameter lies outside "
                          "the spherical parameter set; formulas evaluate anyway",
                          stacklevel=2)

    @property
    def dims(self):
        return Dimensions(self.v)

    @property
    def in_parameter_set(self):
        return all(a > b for a, b in zip(self.lam, self.lam[1:]))

    @property
    def lam_norm(self):
        """Coordinate Euclidean norm of D_2(Lambda): sqrt(sum lambda_j^2)."""
        return math.sqrt(sum(x * x for x in self.lam))

    def scaled(self, c):
        """The parameter (c r, c^2 Lambda, l)."""
        return SphericalParam(self.v, c * self.r, tuple(c * c * x for x in self.lam), self.l)

    def to_json(self):
        return json.dumps({"v": self.v, "r": self.r, "lambda": list(self.lam),
                           "l": list(self.l)})

    @staticmethod
    def from_json(text):
        d = json.loads(text)
        return SphericalParam(d["v"], d["r"], tuple(d["lambda"]), tuple(d["l"]))


def d2_center_coords(param):
    """Center coordinate vector of D_2(Lambda): lambda_j at the slot of the
    pair (2j-1, 2j) (1-based), zero elsewhere."""
    dims = param.dims
    a = np.zeros(dims.z)
    for j, lam in enumerate(param.lam):
        a[group.pair_index(2 * j, 2 * j + 1, param.v)] = lam
    return a


def d2_matrix(param):
    return group.skew_matrix(d2_center_coords(param), param.dims)


def proj_pair(x, j, v=None):
    """Orthogonal projection of X onto the 2-plane of generators 2j-1, 2j
    (j is 1-based); works on batched coordinate arrays."""
    x = np.asarray(x, dtype=float)
    v = x.shape[-1] if v is None else v
    if not 1 <= j <= v // 2:
        raise ValueError(f"pair index {j} out of range for v={v}")
    return x[..., 2 * j - 2:2 * j]


def _proj_sq(x, vprime):
    """Squared norms of the pair projections, shape (..., vprime)."""
    x = np.asarray(x, dtype=float)
    sq = x[..., : 2 * vprime] ** 2
    return sq[..., 0::2] + sq[..., 1::2]


def theta_eval(param, n):
    """The elementary positive-type function Theta at a group element."""
    if n.dims.v != param.v:
        raise ValueError("dimension mismatch")
    dims = param.dims
    rho = _proj_sq(n.x[None, :], dims.vprime)[0]
    phase = param.r * n.x[-1] + float(np.dot(d2_center_coords(param), n.a))
    val = complex(np.cos(phase), np.sin(phase))
    for lam, l, p in zip(param.lam, param.l, rho):
        val *= special.laguerre_fn(l, 0.5 * lam * p)
    return val


@dataclass(frozen=True)
class PhiEstimate:
    value: complex
    std_error: float
    n_samples: int


def phi_eval(param, n, n_haar=2000, seed=0):
    """Monte-Carlo Haar average of Theta(k.n) over O(v), with standard error."""
    if n_haar < 100:
        raise ValueError("need at least 100 Haar samples")
    rng = np.random.default_rng(seed)
    vals = np.empty(n_haar, dtype=complex)
    for i in range(n_haar):
        k = group.haar_orthogonal_sample(param.v, rng)
        vals[i] = theta_eval(param, group.orthogonal_act(k, n))
    mean = vals.mean()
    var = np.sum(np.abs(vals - mean) ** 2) / (n_haar * (n_haar - 1))
    return PhiEstimate(complex(mean), float(math.sqrt(var)), n_haar)


# ----------------------------------------------------------------------
# Projection nodes for the generator-sphere integral
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class XProjectionNodes:
    """Quadrature for functions of (|pr_1 X|^2, ..., |pr_v' X|^2, x_v) on the
    generator sphere: the squared projections follow a Dirichlet law on the
    simplex and the last coordinate a (1-w^2)^{(v-3)/2} profile, so low
    dimensional Gauss rules integrate these functions to machine precision."""

    v: int
    rho: np.ndarray       # (N, vprime) squared projections
    xv: np.ndarray        # (N,) last coordinate (zero when v is even)
    weights: np.ndarray   # (N,) summing to 1


def x_projection_nodes(v, n_u=48, n_w=48):
    if v == 2:
        return XProjectionNodes(2, np.array([[1.0]]), np.zeros(1), np.ones(1))
    if v == 3:
        g = quadrature.gauss_legendre(n_w, -1.0, 1.0)
        return XProjectionNodes(3, (1.0 - g.nodes**2)[:, None], g.nodes, g.weights / 2.0)
    if v == 4:
        g = quadrature.gauss_legendre(n_u, 0.0, 1.0)
        rho = np.column_stack([g.nodes, 1.0 - g.nodes])
        return XProjectionNodes(4, rho, np.zeros(n_u), g.weights)
    if v == 5:
        import scipy.special as _sp
        xw, ww = _sp.roots_jacobi(n_w, 1.0, 1.0)
        ww = ww / np.sum(ww)
        g = quadrature.gauss_legendre(n_u, 0.0, 1.0)
        W, U = np.meshgrid(xw, g.nodes, indexing="ij")
        s2 = 1.0 - W**2
        rho = np.stack([s2 * U, s2 * (1.0 - U)], axis=-1).reshape(-1, 2)
        weights = (ww[:, None] * g.weights[None, :]).reshape(-1)
        return XProjectionNodes(5, rho, W.reshape(-1), weights)
    raise ValueError("exact projection nodes implemented for v <= 5; "
                     "pass an explicit sphere rule for larger v")


def nodes_from_sphere_rule(rule):
    """Projection data extracted from explicit sphere-rule points."""
    vprime = rule.n // 2
    rho = _proj_sq(rule.points, vprime)
    xv = rule.points[:, -1] if rule.n % 2 else np.zeros(len(rule.weights))
    return XProjectionNodes(rule.n, rho, xv, rule.weights)


def _resolve_rules(param, t_rule, xsphere):
    if t_rule is None:
        t_rule = quadrature.radial_t_rule(param.v, 48)
    if isinstance(t_rule, quadrature.Rule1D):
        dims = param.dims
        w = (t_rule.weights * t_rule.nodes ** (param.v - 1)
             * (1.0 - t_rule.nodes**4) ** ((dims.z - 2) / 2.0))
        t_rule = quadrature.RadialTRule(param.v, t_rule.nodes, w)
    if xsphere is None:
        xn = x_projection_nodes(param.v)
    elif isinstance(xsphere, XProjectionNodes):
        xn = xsphere
    else:
        xn = nodes_from_sphere_rule(xsphere)
    return t_rule, xn


# ----------------------------------------------------------------------
# <mu_s, phi> and its s-derivatives
# ----------------------------------------------------------------------

def pairing_mu_s_phi(param, s, t_rule=None, xsphere=None):
    """Pairing of the dilated sphere measure mu_s with the spherical function.

    Radial reduction: the center-sphere integral of the D_2 oscillation is a
    reduced Bessel function of order (z-2)/2 at s^2 sqrt(1-t^4) |Lambda|,
    leaving a generator-sphere integral of the oscillation-times-Laguerre
    product and a 1-D radial integral.  Raw (unnormalized) measure.
    """
    return complex(pairing_derivative_batch(param, np.atleast_1d(float(s)), 0,
                                            t_rule, xsphere)[0])


def pairing_derivative_batch(param, s_values, order, t_rule=None, xsphere=None):
    """d^order/ds^order of <mu_s, phi> on a batch of s values (analytic path)."""
    if order < 0 or order > MAX_S_DERIV:
        raise ValueError(f"derivative order {order} outside supported 0..{MAX_S_DERIV}")
    t_rule, xn = _resolve_rules(param, t_rule, xsphere)
    dims = param.dims
    alpha = (dims.z - 2) / 2.0
    s = np.asarray(s_values, dtype=float)[:, None]          # (ns, 1)
    u = s * s
    t = t_rule.nodes[None, :]                               # (1, nt)
    tw = t_rule.weights
    kappa = np.sqrt(np.maximum(0.0, 1.0 - t_rule.nodes**4)) * param.lam_norm  # (nt,)

    # Bessel factor derivatives in u, per chain order k
    bessel_u = {}
    for k in range(order + 1):
        arg = u * kappa[None, :]
        bessel_u[k] = special.reduced_bessel(alpha, arg, deriv=k) * kappa[None, :] ** k

    # Laguerre-product derivatives in u on the (ns, nt, nX) tensor
    coeffs = [0.5 * lam * t_rule.nodes[:, None] ** 2 * xn.rho[None, :, j]
              for j, lam in enumerate(param.lam)]           # each (nt, nX)
    prod = special.laguerre_product_derivs(coeffs, param.l, u[:, :, None], order)

    # oscillation in the last generator coordinate
    b = t_rule.nodes[:, None] * param.r * xn.xv[None, :]    # (nt, nX)
    osc = np.exp(1j * s[:, :, None] * b[None, :, :])

    out = np.zeros(len(s_values), dtype=complex)
    h = order
    for ht in range(h + 1):
        for h1 in range(h - ht + 1):
            h2 = h - ht - h1
            mult = math.factorial(h) / (
                math.factorial(ht) * math.factorial(h1) * math.factorial(h2))
            if ht > 0 and param.r == 0.0:
                continue
            osc_part = osc * (1j * b[None, :, :]) ** ht if ht else osc
            for c1, d1, k1 in _CHAIN[h1]:
                xfac = osc_part * prod[k1]
                xint = np.einsum("x,stx->st", xn.weights, xfac)   # (ns, nt)
                for c2, d2, k2 in _CHAIN[h2]:
                    term = (mult * c1 * c2) * s ** (d1 + d2) * xint * bessel_u[k2]
                    out = out + 2.0 * (term @ tw)
    return out


def pairing_derivative(param, s, j, method="analytic", t_rule=None, xsphere=None,
                       fd_step=None):
    """j-th s-derivative of <mu_s, phi>, j <= 3.

    The analytic path differentiates under the integral with the s^2 chain
    rule; the finite-difference path applies 5-point central stencils to the
    order-0 pairing.
    """
    if j < 0 or j > MAX_S_DERIV:
        raise ValueError(f"derivative order {j} outside supported 0..{MAX_S_DERIV}")
    if method == "analytic":
        return complex(pairing_derivative_batch(param, np.atleast_1d(float(s)), j,
                                                t_rule, xsphere)[0])
    if method != "finite-diff":
        raise ValueError(f"unknown method {method!r}")
    if fd_step is not None:
        h = fd_step
    else:
        # local frequency in s is about 2 s (|Lambda| + r); the third-order
        # stencil is O(h^2), so scale the step to the oscillation.
        omega = 1.0 + 2.0 * float(s) * (param.lam_norm + param.r)
        h = 3e-3 / omega
    h = min(h, 0.45 * float(s))  # keep the stencil on s > 0
    pts = np.array([s - 2 * h, s - h, s, s + h, s + 2 * h])
    f = pairing_derivative_batch(param, pts, 0, t_rule, xsphere)
    if j == 0:
        return complex(f[2])
    if j == 1:
        return complex((f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h))
    if j == 2:
        return complex((-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h))
    return complex((-f[0] + 2 * f[1] - 2 * f[3] + f[4]) / (2 * h**3))
