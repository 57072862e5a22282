"""Grid-discretized convolution and maximal operators on N_2, and the Stein
analytic family A^alpha / B^alpha_{h,j} with its continuation identity.

Fields live on a regular box grid in exponential coordinates (x1, x2, a)
with cell-centered samples.  Group translation n . m^{-1} shifts the two
generator coordinates uniformly and the center coordinate by an amount
linear in (x1, x2) (the bracket twist); sampling off-grid points uses
trilinear interpolation with zero extension outside the box.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import quadrature, special
from ._gridkernel import accumulate_group_shifts
from .group import Dimensions


@dataclass
class GridField:
    """Scalar field sampled on the centered box [-L, L]^3 with n cells per
    axis; spacing 2L/n, cell-centered nodes."""

    L: float
    n: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape != (self.n, self.n, self.n):
            raise ValueError("values must be an (n, n, n) array")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite field values")

    @property
    def h(self):
        return 2.0 * self.L / self.n

    @property
    def axis(self):
        return -self.L + (np.arange(self.n) + 0.5) * self.h

    def like(self, values):
        return GridField(self.L, self.n, values)

    def interior_mask(self, margin_x, margin_a):
        ax = self.axis
        mx = np.abs(ax) <= self.L - margin_x
        ma = np.abs(ax) <= self.L - margin_a
        return mx[:, None, None] & mx[None, :, None] & ma[None, None, :]

    def save(self, path):
        """Flat binary payload (row-major float64) plus a JSON sidecar."""
        self.values.astype(np.float64).tofile(path)
        with open(str(path) + ".json", "w") as fh:
            json.dump({"v": 2, "L": self.L, "n": self.n, "dtype": "float64",
                       "order": "C", "payload": str(path)}, fh)

    @staticmethod
    def load(path):
        with open(str(path) + ".json") as fh:
            meta = json.load(fh)
        vals = np.fromfile(path, dtype=np.float64).reshape(meta["n"], meta["n"], meta["n"])
        return GridField(meta["L"], meta["n"], vals)


def grid_from_function(fn, L, n):
    g = GridField(L, n, np.zeros((n, n, n)))
    x1, x2, a = np.meshgrid(g.axis, g.axis, g.axis, indexing="ij")
    return GridField(L, n, np.asarray(fn(x1, x2, a), dtype=float))


def random_bump_field(L, n, n_bumps=5, seed=0, width=(0.3, 0.7), center=1.0,
                      amplitude=(0.5, 1.0)):
    """Sum of random Gaussian bumps concentrated near the box center."""
    rng = np.random.default_rng(seed)
    cs = rng.uniform(-center, center, size=(n_bumps, 3))
    ws = rng.uniform(*width, size=n_bumps)
    amps = rng.uniform(*amplitude, size=n_bumps)

    def fn(x1, x2, a):
        out = np.zeros_like(x1)
        for (c1, c2, c3), w, amp in zip(cs, ws, amps):
            out += amp * np.exp(-((x1 - c1) ** 2 + (x2 - c2) ** 2 + (a - c3) ** 2)
                                / (2 * w * w))
        return out
    return grid_from_function(fn, L, n)


@dataclass(frozen=True)
class RadiiLadder:
    r0: float
    ratio: float
    count: int

    def __post_init__(self):
        if self.r0 <= 0 or self.ratio <= 1:
            raise ValueError("need r0 > 0 and ratio > 1")

    @property
    def radii(self):
        return self.r0 * self.ratio ** np.arange(self.count)


def geometric_ladder(r_min, r_max, count):
    if not (0 < r_min < r_max) or count < 2:
        raise ValueError("need 0 < r_min < r_max and count >= 2")
    return RadiiLadder(r_min, (r_max / r_min) ** (1.0 / (count - 1)), count)


# ----------------------------------------------------------------------
# Interpolating group-shift sampler
# ----------------------------------------------------------------------

def _shift_axis(values, d, axis):
    """Linear interpolation of a scalar shift: sample index i - d along one
    axis, zero extension."""
    k = math.floor(d)
    w = d - k
    out = _roll_zero(values, k, axis)
    if w:
        out = (1.0 - w) * out + w * _roll_zero(values, k + 1, axis)
    return out


def _roll_zero(values, k, axis):
    """values[i + k] along axis with zero padding (integer k)."""
    if k == 0:
        return values.copy()
    n = values.shape[axis]
    out = np.zeros_like(values)
    src = [slice(None)] * values.ndim
    dst = [slice(None)] * values.ndim
    if k > 0:
        if k >= n:
            return out
        src[axis] = slice(k, n)
        dst[axis] = slice(0, n - k)
    else:
        if -k >= n:
            return out
        src[axis] = slice(0, n + k)
        dst[axis] = slice(-k, n)
    out[tuple(dst)] = values[tuple(src)]
    return out


def shifted_sample(f, x0, a0):
    """Field of values f(n . m^{-1}) on the grid, for the fixed group element
    m = (x0, a0): the generator target is x - x0, the center target is
    a - a0 - (x1 x0_2 - x2 x0_1)/2."""
    h = f.h
    g = _shift_axis(f.values, x0[0] / h, 0)
    g = _shift_axis(g, x0[1] / h, 1)
    ax = f.axis
    shift = (a0 + 0.5 * (ax[:, None] * x0[1] - ax[None, :] * x0[0])) / h
    k = np.floor(shift).astype(int)
    w = (shift - k)[:, :, None]
    base = np.arange(f.n)[None, None, :]
    idx0 = base + k[:, :, None]
    idx1 = idx0 + 1
    ok0 = (idx0 >= 0) & (idx0 < f.n)
    ok1 = (idx1 >= 0) & (idx1 < f.n)
    g0 = np.take_along_axis(g, np.clip(idx0, 0, f.n - 1), axis=2)
    g1 = np.take_along_axis(g, np.clip(idx1, 0, f.n - 1), axis=2)
    return (1.0 - w) * np.where(ok0, g0, 0.0) + w * np.where(ok1, g1, 0.0)


def trilinear_sample(f, x1, x2, a):
    """Interpolated field values at arbitrary coordinate arrays (zero outside)."""
    pts = np.broadcast_arrays(np.asarray(x1, float), np.asarray(x2, float),
                              np.asarray(a, float))
    shape = pts[0].shape
    idx = [(p.ravel() + f.L) / f.h - 0.5 for p in pts]
    out = np.zeros(pts[0].size)
    base = [np.floor(i).astype(int) for i in idx]
    frac = [i - b for i, b in zip(idx, base)]
    for d1 in (0, 1):
        for d2 in (0, 1):
            for d3 in (0, 1):
                i = base[0] + d1
                j = base[1] + d2
                k = base[2] + d3
                ok = (i >= 0) & (i < f.n) & (j >= 0) & (j < f.n) & (k >= 0) & (k < f.n)
                w = ((frac[0] if d1 else 1 - frac[0])
                     * (frac[1] if d2 else 1 - frac[1])
                     * (frac[2] if d3 else 1 - frac[2]))
                vals = np.zeros_like(out)
                vals[ok] = f.values[i[ok], j[ok], k[ok]]
                out += w * vals
    return out.reshape(shape)


def dilate_field(f, rho):
    """Samples of f(rho . n) on the same grid."""
    x1, x2, a = np.meshgrid(f.axis, f.axis, f.axis, indexing="ij")
    return f.like(trilinear_sample(f, rho * x1, rho * x2, rho * rho * a))


# ----------------------------------------------------------------------
# Sphere nodes and averages
# ----------------------------------------------------------------------

def default_mu_rule_n2(t_pts=8, angles=12):
    """Compact rule for the N_2 sphere measure, suited to grid convolution."""
    return quadrature.koranyi_sphere_rule(2, t_pts=t_pts,
                                          x_rule=quadrature.sphere_rule(2, angles))


def _mu_nodes_n2(mu_rule, t):
    """Offsets (x0 (N,2), a0 (N,), w (N,)) of the t-dilated sphere measure;
    weights carry the raw mass (sum w = mu(S_1))."""
    if mu_rule.dims.v != 2:
        raise ValueError("grid operators are fixed to v = 2")
    x_block, a_block, w = mu_rule.nodes()
    return t * x_block, t * t * a_block[:, 0], w


def margin_requirement(mu_rule, t, L_interior_x):
    """Reach of the t-dilated sphere offsets in the two layers: `x` reach t,
    center reach t^2 + t * L_interior_x (bracket twist at generator size
    L_interior_x)."""
    return t, t * t + 0.5 * t * (2.0 ** 0.5) * L_interior_x * 2.0 ** 0.5


def spherical_average(f, t, mu_rule, normalized=False, cubic=False):
    """(f * mu_t)(n) = integral of f(n . (t.m)^{-1}) over the unit sphere,
    raw measure by default.  `cubic` switches the center-axis interpolation
    to Catmull-Rom (used where quadrature in the scale needs a C^1 sampler).
    """
    if t <= 0:
        raise ValueError("scale must be positive")
    x0s, a0s, w = _mu_nodes_n2(mu_rule, t)
    out = accumulate_group_shifts(f.values, f.axis, f.h, x0s, a0s, w, cubic=cubic)
    if normalized:
        out /= mu_rule.total_mass
    return f.like(out)


def conv_radial_kernel(f, kernel, support, t, u_pts=16, mu_rule=None):
    """(f * kernel_t)(n) for a radial profile kernel(|m|) with compact
    support [0, support]; kernel_t is the mass-preserving dilation.  Reduces
    to a radial integral of sphere averages:
    int_0^support kernel(u) (f * mu_{t u}) u^{Q-1} du."""
    if t <= 0:
        raise ValueError("scale must be positive")
    mu_rule = mu_rule or default_mu_rule_n2()
    Q = 4
    g = quadrature.gauss_legendre(u_pts, 0.0, support)
    out = np.zeros_like(f.values, dtype=float)
    for u, wu in zip(g.nodes, g.weights):
        out += wu * kernel(u) * u ** (Q - 1) * spherical_average(f, t * u, mu_rule).values
    return f.like(out)


def kernel_l1_norm(kernel, support, u_pts=64):
    """L^1 norm of the radial profile: mu(S_1) int kernel(u) u^{Q-1} du."""
    g = quadrature.gauss_legendre(u_pts, 0.0, support)
    return quadrature.mu_total_mass(2) * float(
        np.dot(g.weights, kernel(g.nodes) * g.nodes**3))


# ----------------------------------------------------------------------
# Maximal operators
# ----------------------------------------------------------------------

def _ball_stencil(r, h, max_points=400):
    """Grid-aligned cubature of the homogeneous ball of radius r: offsets
    (k1, k2, k3) with |(k1 h, k2 h, k3 h)| <= r, strided down to at most
    max_points with weights scaled accordingly; returns (offsets, mean_count).
    """
    kx = int(math.floor(r / h))
    ka = int(math.floor(r * r / h))
    stride = 1
    while True:
        xs = np.arange(-kx, kx + 1, stride) * h
        as_ = np.arange(-ka, ka + 1, stride) * h
        X1, X2, A = np.meshgrid(xs, xs, as_, indexing="ij")
        norm = ((X1**2 + X2**2) ** 2 + A**2) ** 0.25
        mask = norm <= r
        if mask.sum() <= max_points or stride > 16:
            break
        stride *= 2
    return np.column_stack([X1[mask], X2[mask], A[mask]])


def standard_maximal(f, ladder, max_stencil=400):
    """Hardy-Littlewood type maximal field: max over ladder radii of the
    mean of |f| over the homogeneous ball (grid cubature, self-normalized)."""
    absv = np.abs(f.values)
    out = np.zeros_like(f.values)
    for r in ladder.radii:
        pts = _ball_stencil(r, f.h, max_stencil)
        w = np.full(len(pts), 1.0 / len(pts))
        acc = accumulate_group_shifts(absv, f.axis, f.h, pts[:, :2], pts[:, 2], w)
        np.maximum(out, acc, out=out)
    return f.like(out)


def spherical_maximal(f, ladder, mu_rule):
    """Spherical maximal field: max over ladder scales of |f| * mu_t with
    the normalized sphere measure."""
    absf = f.like(np.abs(f.values))
    out = np.zeros_like(f.values)
    for t in ladder.radii:
        np.maximum(out, np.abs(spherical_average(absf, t, mu_rule, normalized=True).values),
                   out=out)
    return f.like(out)


def raw_spherical_sup(f, ladder, mu_rule):
    """max over ladder of |(f * mu_t)(n)| with the raw measure (signed f)."""
    out = np.zeros_like(f.values)
    for t in ladder.radii:
        np.maximum(out, np.abs(spherical_average(f, t, mu_rule).values), out=out)
    return f.like(out)


def grid_square_function_s1(f, s_grid, mu_rule):
    """Scale square function at order 1: sqrt(sum |d_s (f * mu_s)|^2 s ds)
    with central differences on the (sorted) s grid and trapezoid weights."""
    s = np.sort(np.asarray(s_grid, dtype=float))
    if s[0] <= 0:
        raise ValueError("s grid must be positive")
    fields = np.stack([spherical_average(f, si, mu_rule).values for si in s])
    der = np.gradient(fields, s, axis=0)
    ds = np.gradient(s)
    acc = np.einsum("s,sijk->ijk", s * ds, der**2)
    return f.like(np.sqrt(acc))


@dataclass
class PointwiseBoundReport:
    fraction_ok: float
    worst_margin: float
    eps: float
    n_interior: int

    def to_dict(self):
        return {"fraction_ok": self.fraction_ok, "worst_margin": self.worst_margin,
                "eps": self.eps, "n_interior": self.n_interior}


def pointwise_bound_check(f, ladder, s_grid, mu_rule, eps=0.05,
                          interior=(1.5, 1.2), max_stencil=400):
    """Check sup_t |f * mu_t| <= Q |B_1| M f + (2Q)^{-1/2} S^1 f pointwise
    (raw sphere measure), with multiplicative slack 1 + eps, on the interior
    subgrid.  Reports the satisfied fraction and the worst relative margin.
    """
    Q = 4
    mass = quadrature.mu_total_mass(2)     # = Q |B_1|
    lhs = raw_spherical_sup(f, ladder, mu_rule).values
    mf = standard_maximal(f, ladder, max_stencil).values
    s1 = grid_square_function_s1(f, s_grid, mu_rule).values
    rhs = mass * mf + s1 / math.sqrt(2.0 * Q)
    mask = f.interior_mask(f.L - interior[0], f.L - interior[1])
    ok = lhs[mask] <= (1.0 + eps) * rhs[mask] + 1e-12
    denom = np.maximum(rhs[mask], 1e-300)
    margin = np.max(lhs[mask] / denom) - 1.0
    return PointwiseBoundReport(float(np.mean(ok)), float(margin), eps,
                                int(mask.sum()))


# ----------------------------------------------------------------------
# Stein analytic family
# ----------------------------------------------------------------------

def m_alpha(r, alpha, return_pole_flag=False):
    """Kernel profile 2 (1 - r^2)_+^{alpha-1} / Gamma(alpha).  At the
    nonpositive-integer poles of Gamma the reciprocal vanishes and the
    profile is identically zero (the analytic-continuation limit); the
    optional flag reports that case."""
    alpha = complex(alpha)
    at_pole = (alpha.imag == 0.0 and alpha.real <= 0.0
               and alpha.real == int(alpha.real))
    r = np.asarray(r, dtype=float)
    base = np.where(r < 1.0, np.maximum(0.0, 1.0 - r**2), 0.0)
    if at_pole:
        out = np.zeros_like(r, dtype=complex)
    else:
        with np.errstate(divide="ignore"):
            powed = np.where(base > 0, base ** (alpha - 1.0), 0.0)
        out = 2.0 * powed / special.complex_gamma(alpha.real, alpha.imag)
    if alpha.imag == 0.0:
        out = out.real
    out = out if out.shape else (complex(out) if np.iscomplexobj(out) else float(out))
    return (out, at_pole) if return_pole_flag else out


def _jacobi_r_nodes(alpha_exp, beta_exp, npts):
    """Nodes/weights for int_0^1 g(r) (1-r^2)^alpha_exp r^{beta_exp} dr via
    w = r^2 and Gauss-Jacobi."""
    nodes, weights = quadrature.gauss_jacobi01(npts, alpha_exp, (beta_exp - 1) / 2.0)
    return np.sqrt(nodes), 0.5 * weights


def a_alpha_values(f, alpha, mu_rule, r_pts=20, cubic=True):
    """Complex field values of A^alpha f = int_0^1 m^alpha(r) (f * mu_r)
    r^{Q-1} dr, Re alpha > 0.  The (1-r^2)^{alpha-1} endpoint weight is
    absorbed into a Gauss-Jacobi rule, so small Re alpha stays accurate."""
    alpha = complex(alpha)
    if alpha.real <= 0:
        raise ValueError("direct form needs Re alpha > 0")
    Q = 4
    r, w = _jacobi_r_nodes(alpha.real - 1.0, Q - 1, r_pts)
    gam = special.complex_gamma(alpha.real, alpha.imag)
    out = np.zeros_like(f.values, dtype=complex)
    for ri, wi in zip(r, w):
        phase = (1.0 - ri * ri) ** (1j * alpha.imag)
        out += wi * 2.0 * phase / gam * spherical_average(f, ri, mu_rule,
                                                          cubic=cubic).values
    return out


def a_alpha_apply(f, alpha, mu_rule, r_pts=20):
    """A^alpha f as a grid field for real alpha > 0."""
    alpha = complex(alpha)
    if alpha.imag != 0.0:
        raise ValueError("complex exponents: use a_alpha_values")
    return f.like(a_alpha_values(f, alpha, mu_rule, r_pts).real)


def b_hj_apply(f, alpha, h, j, mu_rule, r_pts=20, fd_step=4e-3, cubic=True):
    """B^alpha_{h,j} f = int_0^1 m^{alpha+h}(r) r^{Q-1-2h+j} d^j/dr^j (f*mu_r) dr,
    with the r-derivative by 5-point central differences of sphere averages.
    Needs Re(alpha) + h > 0 and h < (Q-2)/2."""
    alpha = complex(alpha)
    Q = 4
    if alpha.real + h <= 0:
        raise ValueError("need Re(alpha) + h > 0")
    if h >= Q / 2.0:
        raise ValueError("need h < Q/2 for the kernel to be integrable at 0")
    if j < 0 or j > h:
        raise ValueError("need 0 <= j <= h")
    r, w = _jacobi_r_nodes(alpha.real + h - 1.0, Q - 1 - 2 * h + j, r_pts)
    gam = special.complex_gamma(alpha.real + h, alpha.imag)
    out = np.zeros_like(f.values, dtype=complex)
    stencils = {0: ((0.0, 1.0),),
                1: ((-2.0, 1 / 12), (-1.0, -8 / 12), (1.0, 8 / 12), (2.0, -1 / 12)),
                2: ((-2.0, -1 / 12), (-1.0, 16 / 12), (0.0, -30 / 12),
                    (1.0, 16 / 12), (2.0, -1 / 12))}
    if j not in stencils:
        raise ValueError("r-derivative implemented for j <= 2")
    for ri, wi in zip(r, w):
        step = fd_step * max(ri, 0.05)
        acc = np.zeros_like(f.values)
        for off, c in stencils[j]:
            acc += c * spherical_average(f, ri + off * step, mu_rule,
                                         cubic=cubic).values
        if j:
            acc /= step**j
        phase = (1.0 - ri * ri) ** (1j * alpha.imag)
        out += wi * 2.0 * phase / gam * acc
    return out


def b_combination_values(f, alpha, mu_rule, r_pts=20, fd_step=4e-3, cubic=True):
    """The h = 1 continuation combination (Q-2)/2 B_{1,0} + 1/2 B_{1,1};
    equals A^alpha f for Re alpha > 0 and continues it across alpha = 0,
    where it reproduces f * mu."""
    Q = 4
    b10 = b_hj_apply(f, alpha, 1, 0, mu_rule, r_pts, fd_step, cubic)
    b11 = b_hj_apply(f, alpha, 1, 1, mu_rule, r_pts, fd_step, cubic)
    return 0.5 * b11 + 0.5 * (Q - 2) * b10


@dataclass
class AnalyticFamilyReport:
    alpha: complex
    identity_rel_err: float
    limit_rel_err: float

    def to_dict(self):
        return {"alpha": [self.alpha.real, self.alpha.imag],
                "identity_rel_err": self.identity_rel_err,
                "limit_rel_err": self.limit_rel_err}


def analytic_family_check(f, mu_rule, alpha=1.0, interior=(1.5, 1.2),
                          r_pts=48, fd_step=2e-3):
    """Two facts about the continuation: at `alpha` the direct operator
    equals the B-combination (relative sup error on the interior), and at
    alpha = 0 the combination reproduces f * mu."""
    mask = f.interior_mask(f.L - interior[0], f.L - interior[1])
    direct = a_alpha_values(f, alpha, mu_rule, r_pts)
    comb = b_combination_values(f, alpha, mu_rule, r_pts, fd_step)
    scale = np.max(np.abs(direct[mask]))
    ident = float(np.max(np.abs((direct - comb)[mask])) / scale)
    comb0 = b_combination_values(f, 0.0, mu_rule, r_pts, fd_step)
    fmu = spherical_average(f, 1.0, mu_rule, cubic=True).values
    scale0 = np.max(np.abs(fmu[mask]))
    lim = float(np.max(np.abs((comb0.real - fmu)[mask])) / scale0)
    return AnalyticFamilyReport(complex(alpha), ident, lim)


@dataclass
class DominationReport:
    x: float
    y: float
    gamma_ratio: float
    exp_bound_constant: float
    fraction_ok: float

    def to_dict(self):
        return {"x": self.x, "y": self.y, "gamma_ratio": self.gamma_ratio,
                "exp_bound_constant": self.exp_bound_constant,
                "fraction_ok": self.fraction_ok}


def kernel_domination_check(f, x, y, mu_rule, interior=(1.5, 1.2), r_pts=20,
                            slack=1e-9):
    """Check |A^{x+iy} f| <= |Gamma(x)/Gamma(x+iy)| A^x |f| pointwise (an
    exact kernel-modulus identity) and that the Gamma factor is below
    C e^{2|y|}."""
    if x < 1:
        raise ValueError("need x >= 1")
    mask = f.interior_mask(f.L - interior[0], f.L - interior[1])
    lhs = np.abs(a_alpha_values(f, complex(x, y), mu_rule, r_pts))
    absf = f.like(np.abs(f.values))
    rhs = a_alpha_values(absf, complex(x, 0.0), mu_rule, r_pts).real
    ratio = abs(special.complex_gamma(x, 0.0)) / special.gamma_abs(x, y)
    okmask = lhs[mask] <= ratio * rhs[mask] * (1.0 + 1e-9) + slack
    c = ratio / math.exp(2.0 * abs(y))
    return DominationReport(x, y, ratio, c, float(np.mean(okmask)))


@dataclass
class DecreasingKernelReport:
    l1_norm: float
    fraction_ok: float
    worst_margin: float

    def to_dict(self):
        return {"l1_norm": self.l1_norm, "fraction_ok": self.fraction_ok,
                "worst_margin": self.worst_margin}


def decreasing_kernel_maximal_check(f, kernel, support, ladder, mu_rule,
                                    eps=0.05, interior=(1.5, 1.2),
                                    u_pts=16, max_stencil=400):
    """For a nonincreasing radial profile, sup over the ladder of
    |f * kernel_t| is dominated by |kernel|_{L^1} M f (layer-cake bound);
    checked pointwise with slack 1 + eps.  Non-monotone profiles are
    rejected."""
    probe = np.linspace(0.0, support, 256)
    vals = kernel(probe)
    if np.any(np.diff(vals) > 1e-12 * max(1.0, np.max(np.abs(vals)))):
        raise ValueError("kernel profile is not nonincreasing")
    sup = np.zeros_like(f.values)
    for t in ladder.radii:
        conv = conv_radial_kernel(f, kernel, support, t, u_pts, mu_rule).values
        np.maximum(sup, np.abs(conv), out=sup)
    l1 = kernel_l1_norm(kernel, support)
    # the layer-cake bound compares against ball averages at every radius
    # u * t the convolution touches, so the maximal field uses a fine ladder
    # covering that range
    radii = ladder.radii
    fine = geometric_ladder(min(0.05, 0.3 * radii[0] * support),
                            radii[-1] * support, 56)
    mf = standard_maximal(f, fine, max_stencil).values
    mask = f.interior_mask(f.L - interior[0], f.L - interior[1])
    rhs = l1 * mf[mask]
    ok = sup[mask] <= (1.0 + eps) * rhs + 1e-12
    margin = float(np.max(sup[mask] / np.maximum(rhs, 1e-300)) - 1.0)
    return DecreasingKernelReport(l1, float(np.mean(ok)), margin)
