"""Arithmetic for the free two-step nilpotent Lie algebra and group N_v.

Elements are stored in exponential coordinates: a point of the group is
exp(X + A) with X in the span of the generators X_1..X_v and A in the
center, whose canonical basis is X_{ij} = [X_i, X_j] for i < j in
lexicographic order.  Dilations act by r.(X, A) = (rX, r^2 A) and the
homogeneous (Koranyi) norm is (|X|^4 + |A|^2)^(1/4).
"""

from dataclasses import dataclass, field

import numpy as np

ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class Dimensions:
    """Derived dimensional data for N_v."""

    v: int
    vprime: int = field(init=False)
    z: int = field(init=False)
    Q: int = field(init=False)
    topdim: int = field(init=False)

    def __post_init__(self):
        if self.v < 2:
            raise ValueError(f"need at least 2 generators, got v={self.v}")
        object.__setattr__(self, "vprime", self.v // 2)
        object.__setattr__(self, "z", self.v * (self.v - 1) // 2)
        object.__setattr__(self, "Q", self.v * self.v)
        object.__setattr__(self, "topdim", self.v + self.z)

    @property
    def odd(self):
        return self.v % 2 == 1


def pair_slots(v):
    """Index pairs (i, j), i < j, in lexicographic order; row k of the
    returned (z, 2) array holds the pair for center coordinate k."""
    ii, jj = np.triu_indices(v, k=1)
    return np.column_stack([ii, jj])


def pair_index(i, j, v):
    """Center coordinate slot of the basis vector [X_i, X_j], 0-based, i < j."""
    if not 0 <= i < j < v:
        raise ValueError(f"need 0 <= i < j < v, got ({i}, {j}) for v={v}")
    # slot = number of pairs preceding (i, j) in lex order
    return i * v - i * (i + 1) // 2 + (j - i - 1)


class AlgebraElement:
    """A point X + A of the Lie algebra in canonical coordinates."""

    __slots__ = ("dims", "x", "a")

    def __init__(self, dims, x, a):
        x = np.asarray(x, dtype=float)
        a = np.asarray(a, dtype=float)
        if x.shape != (dims.v,) or a.shape != (dims.z,):
            raise ValueError(
                f"coordinate lengths ({x.shape}, {a.shape}) do not match v={dims.v}, z={dims.z}"
            )
        if not (np.isfinite(x).all() and np.isfinite(a).all()):
            raise ValueError("non-finite coordinates")
        self.dims = dims
        self.x = x
        self.a = a

    def exp(self):
        return GroupElement(self.dims, self.x, self.a)

    def __repr__(self):
        return f"AlgebraElement(v={self.dims.v}, x={self.x}, a={self.a})"


class GroupElement(AlgebraElement):
    """exp(X + A), same coordinate payload as the algebra element."""

    def log(self):
        return AlgebraElement(self.dims, self.x, self.a)

    def __repr__(self):
        return f"GroupElement(v={self.dims.v}, x={self.x}, a={self.a})"


def identity(dims):
    return GroupElement(dims, np.zeros(dims.v), np.zeros(dims.z))


def bracket(x, xp, dims):
    """[X, X'] in center coordinates: slot (i,j) carries x_i x'_j - x_j x'_i."""
    x = np.asarray(x, dtype=float)
    xp = np.asarray(xp, dtype=float)
    if x.shape != (dims.v,) or xp.shape != (dims.v,):
        raise ValueError("generator coordinates must have length v")
    m = np.outer(x, xp) - np.outer(xp, x)
    ii, jj = np.triu_indices(dims.v, k=1)
    return m[ii, jj]


def multiply(n, m):
    """Group product exp(X+A) exp(X'+A') = exp(X+X' + A+A' + [X,X']/2)."""
    if n.dims.v != m.dims.v:
        raise ValueError("dimension mismatch")
    half = 0.5 * bracket(n.x, m.x, n.dims)
    return GroupElement(n.dims, n.x + m.x, n.a + m.a + half)


def inverse(n):
    return GroupElement(n.dims, -n.x, -n.a)


def dilate(r, n):
    """Automorphic dilation r.n = exp(rX + r^2 A), r > 0."""
    if r <= 0:
        raise ValueError(f"dilation parameter must be positive, got {r}")
    return GroupElement(n.dims, r * n.x, r * r * n.a)


def koranyi_norm(n):
    return koranyi_norm_coords(n.x, n.a)


def koranyi_norm_coords(x, a):
    """(|x|_2^4 + |a|_2^2)^(1/4) on coordinate arrays; broadcasts over rows."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    x2 = np.sum(x * x, axis=-1)
    a2 = np.sum(a * a, axis=-1)
    return (x2 * x2 + a2) ** 0.25


def skew_matrix(a, dims):
    """Identify the center coordinate vector with a skew-symmetric matrix,
    M_ij = a_(i,j) and M_ji = -a_(i,j) for i < j."""
    a = np.asarray(a, dtype=float)
    if a.shape != (dims.z,):
        raise ValueError("center coordinates must have length z")
    m = np.zeros((dims.v, dims.v))
    ii, jj = np.triu_indices(dims.v, k=1)
    m[ii, jj] = a
    m[jj, ii] = -a
    return m


def skew_coords(m, dims):
    """Inverse of skew_matrix; rejects non-skew input."""
    m = np.asarray(m, dtype=float)
    if m.shape != (dims.v, dims.v):
        raise ValueError("matrix shape mismatch")
    if np.max(np.abs(m + m.T)) > 1e-12 * max(1.0, np.max(np.abs(m))):
        raise ValueError("matrix is not skew-symmetric")
    ii, jj = np.triu_indices(dims.v, k=1)
    return m[ii, jj]


def _check_orthogonal(k, v):
    k = np.asarray(k, dtype=float)
    if k.shape != (v, v):
        raise ValueError("acting matrix shape mismatch")
    if np.max(np.abs(k.T @ k - np.eye(v))) > ORTHO_TOL:
        raise ValueError("acting matrix is not orthogonal within 1e-10")
    return k


def orthogonal_act(k, n):
    """O(v) action: X -> kX on generators, M -> k M k^T on the center
    (in the skew-matrix identification). Preserves the Koranyi norm."""
    k = _check_orthogonal(k, n.dims.v)
    m = skew_matrix(n.a, n.dims)
    return GroupElement(n.dims, k @ n.x, skew_coords(k @ m @ k.T, n.dims))


def orthogonal_act_center(k, a, dims):
    """Action on center coordinates only."""
    k = _check_orthogonal(k, dims.v)
    return skew_coords(k @ skew_matrix(a, dims) @ k.T, dims)


def haar_orthogonal_sample(v, rng):
    """Haar-distributed O(v) matrix: QR of a Gaussian matrix with the R
    diagonal sign folded in.  `rng` is a numpy Generator or an integer seed."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    g = rng.standard_normal((v, v))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * np.where(d < 0, -1.0, 1.0)
