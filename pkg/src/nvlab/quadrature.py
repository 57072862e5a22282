"""Quadrature: 1-D Gauss rules, probability rules on Euclidean spheres, the
measure on the Koranyi unit sphere, and polar-coordinate integration over N_v.

Field functions are vectorized callables f(x, a) taking blocks of generator
coordinates x (N, v) and center coordinates a (N, z) and returning (N,)
values (real or complex).
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.special as _sp

from . import special
from .group import Dimensions


# ----------------------------------------------------------------------
# 1-D rules
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Rule1D:
    nodes: np.ndarray
    weights: np.ndarray
    lo: float
    hi: float

    def integrate(self, f):
        return float(np.dot(self.weights, f(self.nodes)))

    def to_json(self):
        return json.dumps({
            "kind": "gauss-legendre",
            "n": len(self.nodes),
            "nodes": self.nodes.tolist(),
            "weights": self.weights.tolist(),
            "seed": None,
            "interval": [self.lo, self.hi],
        })


def rule1d_from_json(text):
    d = json.loads(text)
    lo, hi = d.get("interval", [0.0, 1.0])
    return Rule1D(np.asarray(d["nodes"]), np.asarray(d["weights"]), lo, hi)


def gauss_legendre(npts, lo=0.0, hi=1.0):
    """Gauss-Legendre rule mapped to [lo, hi]; exact on degree 2 npts - 1."""
    if npts < 1:
        raise ValueError("need at least one node")
    x, w = np.polynomial.legendre.leggauss(npts)
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return Rule1D(mid + half * x, half * w, lo, hi)


def gauss_jacobi01(npts, a, b):
    """Nodes/weights for int_0^1 f(w) (1-w)^a w^b dw."""
    x, w = _sp.roots_jacobi(npts, a, b)
    nodes = 0.5 * (x + 1.0)
    weights = w * 0.5 ** (a + b + 1)
    return nodes, weights


# ----------------------------------------------------------------------
# Euclidean sphere rules
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SphereRule:
    """Probability rule on the unit sphere of R^n: weights sum to 1."""

    n: int
    points: np.ndarray          # (N, n) unit vectors
    weights: np.ndarray         # (N,)
    kind: str                   # "product-angle" | "monte-carlo" | "two-point"
    mc_std_error: float | None = None
    seed: int | None = None

    def integrate(self, f):
        vals = np.asarray(f(self.points))
        res = np.dot(self.weights, vals)
        return complex(res) if np.iscomplexobj(vals) else float(res)

    def integrate_with_error(self, f):
        """Value and, for Monte-Carlo rules, the statistical standard error."""
        vals = np.asarray(f(self.points))
        val = np.dot(self.weights, vals)
        if self.kind != "monte-carlo":
            return complex(val), 0.0
        m = len(self.weights)
        var = np.sum(np.abs(vals - val) ** 2) / (m * (m - 1))
        return complex(val), float(np.sqrt(var))

    def to_json(self):
        return json.dumps({
            "kind": self.kind,
            "n": self.n,
            "nodes": self.points.tolist(),
            "weights": self.weights.tolist(),
            "seed": self.seed,
        })


def sphere_rule_from_json(text):
    d = json.loads(text)
    return SphereRule(d["n"], np.asarray(d["nodes"]), np.asarray(d["weights"]),
                      d["kind"], seed=d.get("seed"))


def _circle_rule(m):
    ang = 2.0 * np.pi * np.arange(m) / m
    pts = np.column_stack([np.cos(ang), np.sin(ang)])
    return pts, np.full(m, 1.0 / m)


def _product_rule_points(n, counts):
    """Recursive product rule on the sphere of R^n.

    counts[0] nodes resolve the first coordinate, counts[1] the second given
    the first, ..., counts[-1] is the size of the innermost circle rule.
    Writing A = (w, sqrt(1-w^2) B) with B on the sphere of R^{n-1}, the
    marginal of w has density proportional to (1-w^2)^{(n-3)/2}, handled by
    Gauss-Jacobi.
    """
    if n == 2:
        return _circle_rule(counts[-1])
    m = counts[0]
    x, w = _sp.roots_jacobi(m, (n - 3) / 2.0, (n - 3) / 2.0)
    w = w / np.sum(w)
    sub_pts, sub_w = _product_rule_points(n - 1, counts[1:])
    s = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    pts = np.empty((m * len(sub_w), n))
    pts[:, 0] = np.repeat(x, len(sub_w))
    pts[:, 1:] = np.repeat(s, len(sub_w))[:, None] * np.tile(sub_pts, (m, 1))
    weights = np.repeat(w, len(sub_w)) * np.tile(sub_w, m)
    return pts, weights


def two_point_rule():
    """The 0-sphere {-1, +1} in R^1 with equal mass; used for the center
    sphere of N_2 where z = 1."""
    return SphereRule(1, np.array([[1.0], [-1.0]]), np.array([0.5, 0.5]), "two-point")


def sphere_rule(n, target_points=2048, kind="auto", seed=None, axis_counts=None,
                axis_order=None):
    """Probability quadrature rule on the unit sphere of R^n.

    kind "auto" picks the trapezoid rule for n = 2, a recursive
    product-angle rule for 3 <= n <= 6 and seeded Monte-Carlo beyond.
    `axis_counts` overrides the per-angle node counts of a product rule
    (length n-1, innermost entry is the circle count) and `axis_order`
    permutes coordinates so that finely resolved angles land on chosen
    coordinate slots.
    """
    if n < 2:
        raise ValueError("ambient dimension must be at least 2")
    if kind == "auto":
        kind = "product-angle" if n <= 6 or axis_counts is not None else "monte-carlo"
    if kind == "monte-carlo":
        rng = np.random.default_rng(seed)
        g = rng.standard_normal((target_points, n))
        pts = g / np.linalg.norm(g, axis=1, keepdims=True)
        w = np.full(target_points, 1.0 / target_points)
        return SphereRule(n, pts, w, "monte-carlo",
                          mc_std_error=1.0 / math.sqrt(target_points), seed=seed)
    if kind != "product-angle":
        raise ValueError(f"unknown rule kind {kind!r}")
    if axis_counts is None:
        if n == 2:
            axis_counts = [max(4, target_points)]
        else:
            m = max(4, int(round(target_points ** (1.0 / (n - 1)))))
            axis_counts = [m] * (n - 2) + [2 * m]
    if len(axis_counts) != n - 1:
        raise ValueError("axis_counts must have length n-1")
    pts, w = _product_rule_points(n, list(axis_counts))
    if axis_order is not None:
        perm = list(axis_order)
        if sorted(perm) != list(range(n)):
            raise ValueError("axis_order must be a permutation of 0..n-1")
        pts = pts[:, _inverse_perm(perm)]
    return SphereRule(n, pts, w, "product-angle")


def _inverse_perm(perm):
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def ridge_product_rule(n, slots, m=48):
    """Product rule on the sphere of R^n resolving only the coordinates in
    `slots` (all other angles get single-node rules).  Integrates functions
    of the listed coordinates to Gauss precision at m^len(slots) points;
    exact on constants otherwise."""
    counts = [1] * (n - 1)
    for k in range(min(len(slots), n - 1)):
        counts[k] = m
    if len(slots) >= n - 1:
        counts[-1] = max(counts[-1], 2 * m)
    order = list(slots) + [i for i in range(n) if i not in slots]
    return sphere_rule(n, kind="product-angle", axis_counts=counts, axis_order=order)


# ----------------------------------------------------------------------
# Koranyi sphere measure
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class RadialTRule:
    """Nodes t_i in (0, 1) and weights absorbing the radial density
    t^{v-1} (1 - t^4)^{(z-2)/2}, so sum w_i g(t_i) ~ int_0^1 g t^{v-1}
    (1-t^4)^{(z-2)/2} dt for smooth g."""

    v: int
    nodes: np.ndarray
    weights: np.ndarray


def radial_t_rule(v, npts=64, split=0.75):
    """Quadrature for the radial factor of the sphere measure.

    For odd z the density has a half-integer power of (1 - t^4); the piece
    near t = 1 is regularized by the substitution u = sqrt(1 - t^4), i.e.
    t = (1 - u^2)^{1/4}, which maps the integrand to u^{z-1} t^{v-4} / 2.
    """
    dims = Dimensions(v)
    z = dims.z
    expo = (z - 2) / 2.0
    if z % 2 == 0:
        r = gauss_legendre(npts, 0.0, 1.0)
        w = r.weights * r.nodes ** (v - 1) * (1.0 - r.nodes**4) ** expo
        return RadialTRule(v, r.nodes, w)
    n_half = max(8, npts // 2)
    ra = gauss_legendre(n_half, 0.0, split)
    wa = ra.weights * ra.nodes ** (v - 1) * (1.0 - ra.nodes**4) ** expo
    u0 = math.sqrt(1.0 - split**4)
    rb = gauss_legendre(n_half, 0.0, u0)
    tb = (1.0 - rb.nodes**2) ** 0.25
    wb = rb.weights * rb.nodes ** (z - 1) * tb ** (v - 4) / 2.0
    return RadialTRule(v, np.concatenate([ra.nodes, tb]), np.concatenate([wa, wb]))


def mu_total_mass(v):
    """Analytic mass of the Koranyi unit-sphere measure, B(v/4, z/2) / 2."""
    dims = Dimensions(v)
    return 0.5 * special.beta_fn(v / 4.0, dims.z / 2.0)


@dataclass(frozen=True)
class KoranyiSphereRule:
    """Tensor rule for the measure on the Koranyi unit sphere: radial nodes
    with the density absorbed, a rule on the generator sphere and a rule on
    the center sphere.  total_mass approximates B(v/4, z/2)/2."""

    dims: Dimensions
    t_rule: RadialTRule
    x_rule: SphereRule
    z_rule: SphereRule
    total_mass: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "total_mass", 2.0 * float(np.sum(self.t_rule.weights)))

    def nodes(self):
        """Flattened nodes (x_block, a_block, weights) of the raw measure.
        Materializes the full tensor; use only for compact rules."""
        t = self.t_rule.nodes
        xs = self.x_rule.points
        zs = self.z_rule.points
        c = np.sqrt(np.maximum(0.0, 1.0 - t**4))
        nt, nx, nz = len(t), len(xs), len(zs)
        x_block = (t[:, None, None] * xs[None, :, :]).reshape(nt * nx, -1)
        x_block = np.repeat(x_block, nz, axis=0)
        a_block = (c[:, None, None] * zs[None, :, :])
        a_block = np.tile(a_block.reshape(nt, 1, nz, -1), (1, nx, 1, 1)).reshape(nt * nx * nz, -1)
        w = 2.0 * (self.t_rule.weights[:, None, None]
                   * self.x_rule.weights[None, :, None]
                   * self.z_rule.weights[None, None, :]).reshape(-1)
        return x_block, a_block, w


def koranyi_sphere_rule(v, t_pts=64, x_points=512, z_points=512, seed=None,
                        x_rule=None, z_rule=None):
    dims = Dimensions(v)
    t = radial_t_rule(v, t_pts)
    if x_rule is None:
        x_rule = sphere_rule(v, x_points, seed=seed)
    if z_rule is None:
        z_rule = two_point_rule() if dims.z == 1 else sphere_rule(
            dims.z, z_points, seed=None if seed is None else seed + 1)
    return KoranyiSphereRule(dims, t, x_rule, z_rule)


def _sphere_slice_sum(f, tx, ta, xw, zw, scale_x=1.0, scale_a=1.0, block=1 << 18):
    """sum over (x, z) node pairs of xw_i zw_j f(scale_x tx_i, scale_a ta_j),
    evaluated in memory-capped chunks."""
    nx, nz = len(xw), len(zw)
    chunk = max(1, block // nz)
    acc = 0.0
    for i0 in range(0, nx, chunk):
        i1 = min(nx, i0 + chunk)
        xb = np.repeat(scale_x * tx[i0:i1], nz, axis=0)
        ab = np.tile(scale_a * ta, (i1 - i0, 1))
        vals = np.asarray(f(xb, ab))
        if not np.all(np.isfinite(np.abs(vals))):
            raise ValueError("integrand produced non-finite values")
        w = (xw[i0:i1, None] * zw[None, :]).reshape(-1)
        acc = acc + np.dot(w, vals)
    return acc


def koranyi_sphere_integrate(rule, f, normalized=False):
    """Integral of f over the Koranyi unit sphere.

    Uses the decomposition of the sphere measure through points
    exp(t X + sqrt(1-t^4) Z) with X, Z on the Euclidean unit spheres of the
    two layers.  `normalized=True` divides by the total mass.
    """
    t = rule.t_rule.nodes
    c = np.sqrt(np.maximum(0.0, 1.0 - t**4))
    acc = 0.0
    for it in range(len(t)):
        s = _sphere_slice_sum(f, t[it] * rule.x_rule.points, c[it] * rule.z_rule.points,
                              rule.x_rule.weights, rule.z_rule.weights)
        acc = acc + 2.0 * rule.t_rule.weights[it] * s
    if normalized:
        acc = acc / rule.total_mass
    return complex(acc) if isinstance(acc, complex) else float(acc)


def polar_integrate(f, r_rule, sphere):
    """Integral of f over N_v via polar coordinates:
    int_0^R int_{S_1} f(r.n) dmu(n) r^{Q-1} dr."""
    Q = sphere.dims.Q
    t = sphere.t_rule.nodes
    c = np.sqrt(np.maximum(0.0, 1.0 - t**4))
    total = 0.0
    for r, wr in zip(r_rule.nodes, r_rule.weights):
        acc = 0.0
        for it in range(len(t)):
            s = _sphere_slice_sum(f, t[it] * sphere.x_rule.points,
                                  c[it] * sphere.z_rule.points,
                                  sphere.x_rule.weights, sphere.z_rule.weights,
                                  scale_x=r, scale_a=r * r)
            acc = acc + 2.0 * sphere.t_rule.weights[it] * s
        total = total + wr * r ** (Q - 1) * acc
    return complex(total) if isinstance(total, complex) else float(total)
