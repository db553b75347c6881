"""Model Riemannian manifolds and their orthonormal-frame data.

Every backend exposes the same small surface:

* ``dim`` - intrinsic dimension n, ``coord_dim`` - number of evaluation
  coordinates m (chart coordinates, or ambient coordinates for embedded
  spheres and products involving them);
* ``frame(x)`` - m x n column list of orthonormal frame vectors, written
  generically so it can be evaluated on dual numbers;
* ``metric_matrix(x)`` - the m x m coordinate/ambient metric, generic;
* ``sample_point(rng)`` - seedable domain sampler;
* ``geodesic_rhs(x, v)`` - right-hand side of the geodesic equation.

The frame connection coefficients g(nabla_{e_a} e_b, e_c) are computed
once for all backends from the Koszul formula with orthonormal arguments,
which only needs frame derivatives (exact, via forward-mode duals) and the
metric.  Curvature is then assembled from those coefficients and their
first derivatives in :mod:`symkt.curvature`.

Sign conventions are pinned by the unit sphere: the curvature operator on
2-forms is minus the identity there, i.e. R(X,Y,Z,V) = g(X,V)g(Y,Z) -
g(X,Z)g(Y,V).
"""

import numpy as np

from .dual import d_exp, jacobian, value_of
from .errors import ConfigError

__all__ = [
    "Chart",
    "EmbeddedSphere",
    "ProductManifold",
    "ConformalRescale",
    "euclidean_chart",
    "stereographic_sphere_chart",
    "poincare_ball_chart",
    "flat_torus_chart",
    "conformal_rescale",
    "manifold_from_key",
    "frame_at",
    "gamma_frame",
    "christoffel",
    "bump_function",
]


# ---------------------------------------------------------------------------
# generic linear algebra on scalar lists (floats or Duals)


def _cholesky(G):
    n = len(G)
    L = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            s = G[i][j]
            for k in range(j):
                s = s - L[i][k] * L[j][k]
            if i == j:
                from .dual import d_sqrt

                L[i][j] = d_sqrt(s)
            else:
                L[i][j] = s / L[j][j]
    return L


def _frame_from_metric(G):
    """Columns of the inverse transpose of the Cholesky factor.

    Solves L^T E = I column by column; column a of E is frame vector e_a,
    and E^T G E = I by construction.
    """
    n = len(G)
    L = _cholesky(G)
    cols = []
    for a in range(n):
        col = [0.0] * n
        for i in range(n - 1, -1, -1):
            s = 1.0 if i == a else 0.0
            for k in range(i + 1, n):
                s = s - L[k][i] * col[k]
            col[i] = s / L[i][i]
        cols.append(col)
    return cols


# ---------------------------------------------------------------------------
# chart backend


class Chart:
    """Coordinate patch with a smooth metric.

    Parameters
    ----------
    dim : int
        Dimension n >= 2.
    metric_fn : callable
        x (length-n sequence of generic scalars) -> n x n nested list,
        symmetric positive definite on the domain.
    radius : float
        Sampling ball radius around the origin.
    key : str
        Catalog key used in reports.
    box : tuple or None
        If given, sample uniformly from the box [0, box_i) instead of the
        ball (used by the flat torus chart).
    """

    is_chart = True

    def __init__(self, dim, metric_fn, radius=1.0, key="chart", box=None):
        self.dim = dim
        self.coord_dim = dim
        self._metric_fn = metric_fn
        self.radius = radius
        self.key = key
        self.box = box

    def metric_matrix(self, x):
        return self._metric_fn(x)

    def frame(self, x):
        return _frame_from_metric(self._metric_fn(x))

    def metric(self, x):
        """Metric matrix as a plain float array."""
        G = self._metric_fn(list(x))
        return np.array([[value_of(v) for v in row] for row in G])

    def dmetric(self, x):
        """d g_ij / d x_k as array [k][i][j] (exact, forward-mode)."""
        n = self.dim
        _, jac = jacobian(lambda X: [v for row in self._metric_fn(X) for v in row], list(x))
        out = np.empty((n, n, n))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    out[k, i, j] = value_of(jac[i * n + j][k])
        return out

    def d2metric(self, x):
        """Second coordinate derivatives of the metric, [l][k][i][j]."""
        n = self.dim

        def dm_flat(X):
            _, jac = jacobian(lambda Y: [v for row in self._metric_fn(Y) for v in row], X)
            return [g for row in jac for g in row]

        _, jac2 = jacobian(dm_flat, list(x))
        out = np.empty((n, n, n, n))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        out[l, k, i, j] = value_of(jac2[(i * n + j) * n + k][l])
        return out

    def sample_point(self, rng):
        if self.box is not None:
            return np.array([rng.uniform(0.0, b) for b in self.box])
        v = rng.standard_normal(self.dim)
        r = self.radius * rng.uniform(0.05, 0.95) ** (1.0 / self.dim)
        return v / np.linalg.norm(v) * r

    def contains(self, x):
        if self.box is not None:
            return True
        return float(np.linalg.norm(x)) <= self.radius * 1.05

    def geodesic_rhs(self, x, v):
        G = christoffel(self, x)
        acc = -np.einsum("kij,i,j->k", G, v, v)
        return v, acc

    def frame_components(self, x, vec):
        """Coefficients of a coordinate vector in the orthonormal frame."""
        G = self.metric(np.asarray(x, dtype=float))
        F = np.array(
            [[value_of(c) for c in col] for col in self.frame(list(x))]
        ).T  # columns e_a
        return F.T @ (G @ np.asarray(vec, dtype=float))


def christoffel(chart, x):
    """Coordinate Christoffel symbols Gamma^k_ij of a chart, shape (k,i,j)."""
    if not getattr(chart, "is_chart", False):
        raise ConfigError("christoffel symbols are only defined for chart backends")
    G = chart.metric(np.asarray(x, dtype=float))
    dG = chart.dmetric(x)
    Ginv = np.linalg.inv(G)
    n = chart.dim
    out = np.empty((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                s = 0.0
                for l in range(n):
                    s += Ginv[k, l] * (dG[i, j, l] + dG[j, i, l] - dG[l, i, j])
                out[k, i, j] = 0.5 * s
    return out


# ---------------------------------------------------------------------------
# embedded sphere backend


class EmbeddedSphere:
    """Round sphere S^n of given radius, handled in ambient coordinates.

    Points are ambient vectors of length ``radius``; the orthonormal
    tangent frame comes from the Householder reflection taking the last
    ambient basis vector to the unit normal, which is deterministic and
    smooth away from a single antipodal point.
    """

    is_chart = False

    def __init__(self, dim, radius=1.0):
        self.dim = dim
        self.coord_dim = dim + 1
        self.radius = radius
        self.key = f"sphere:{dim}"

    def metric_matrix(self, x):
        N = self.coord_dim
        return [[1.0 if i == j else 0.0 for j in range(N)] for i in range(N)]

    def frame(self, x):
        from .dual import d_sqrt

        N = self.coord_dim
        r2 = x[0] * x[0]
        for xi in x[1:]:
            r2 = r2 + xi * xi
        inv_r = 1.0 / d_sqrt(r2)
        u = [xi * inv_r for xi in x]
        s = 1.0 if value_of(u[-1]) >= 0.0 else -1.0
        w = list(u)
        w[-1] = w[-1] + s
        wsq = w[0] * w[0]
        for wi in w[1:]:
            wsq = wsq + wi * wi
        cols = []
        for a in range(N - 1):
            col = [(1.0 if i == a else 0.0) - 2.0 * w[a] * w[i] / wsq for i in range(N)]
            cols.append(col)
        return cols

    def sample_point(self, rng):
        v = rng.standard_normal(self.coord_dim)
        return v / np.linalg.norm(v) * self.radius

    def contains(self, x):
        return abs(float(np.linalg.norm(x)) - self.radius) <= 1e-9 * self.radius

    def geodesic_rhs(self, x, v):
        speed2 = float(np.dot(v, v)) / self.radius**2
        return v, -speed2 * np.asarray(x, dtype=float)

    def frame_components(self, x, vec):
        F = np.array([[value_of(c) for c in col] for col in self.frame(list(x))])
        return F @ np.asarray(vec, dtype=float)

    def tangent_projection(self, x, vec):
        x = np.asarray(x, dtype=float)
        return np.asarray(vec, dtype=float) - x * (np.dot(x, vec) / np.dot(x, x))


# ---------------------------------------------------------------------------
# product backend


class ProductManifold:
    """Riemannian product of two backends (coordinates concatenated)."""

    def __init__(self, first, second):
        self.first = first
        self.second = second
        self.dim = first.dim + second.dim
        self.coord_dim = first.coord_dim + second.coord_dim
        self.key = f"product:{first.key},{second.key}"
        self.is_chart = getattr(first, "is_chart", False) and getattr(
            second, "is_chart", False
        )

    def _split(self, x):
        m1 = self.first.coord_dim
        return list(x[:m1]), list(x[m1:])

    def metric_matrix(self, x):
        x1, x2 = self._split(x)
        G1 = self.first.metric_matrix(x1)
        G2 = self.second.metric_matrix(x2)
        m1, m2 = self.first.coord_dim, self.second.coord_dim
        m = m1 + m2
        G = [[0.0] * m for _ in range(m)]
        for i in range(m1):
            for j in range(m1):
                G[i][j] = G1[i][j]
        for i in range(m2):
            for j in range(m2):
                G[m1 + i][m1 + j] = G2[i][j]
        return G

    def frame(self, x):
        x1, x2 = self._split(x)
        F1 = self.first.frame(x1)
        F2 = self.second.frame(x2)
        m1, m2 = self.first.coord_dim, self.second.coord_dim
        cols = []
        for col in F1:
            cols.append(list(col) + [0.0] * m2)
        for col in F2:
            cols.append([0.0] * m1 + list(col))
        return cols

    def sample_point(self, rng):
        return np.concatenate(
            [self.first.sample_point(rng), self.second.sample_point(rng)]
        )

    def contains(self, x):
        x1, x2 = self._split(x)
        return self.first.contains(np.asarray(x1)) and self.second.contains(
            np.asarray(x2)
        )

    def geodesic_rhs(self, x, v):
        m1 = self.first.coord_dim
        dx1, dv1 = self.first.geodesic_rhs(x[:m1], v[:m1])
        dx2, dv2 = self.second.geodesic_rhs(x[m1:], v[m1:])
        return np.concatenate([dx1, dx2]), np.concatenate([dv1, dv2])

    def frame_components(self, x, vec):
        m1 = self.first.coord_dim
        return np.concatenate(
            [
                self.first.frame_components(x[:m1], vec[:m1]),
                self.second.frame_components(x[m1:], vec[m1:]),
            ]
        )


# ---------------------------------------------------------------------------
# conformal rescaling wrapper


class ConformalRescale:
    """Backend for the metric exp(2 f) g on top of any base backend.

    The orthonormal frame is exp(-f) times the base frame; all connection
    and curvature data then flow through the generic Koszul path.  Fields
    are transported with :func:`symkt.fields.wrap_conformal_field`.
    """

    def __init__(self, base, f_fn, key=None):
        self.base = base
        self.f_fn = f_fn
        self.dim = base.dim
        self.coord_dim = base.coord_dim
        self.key = key or f"conformal:{base.key}"
        self.is_chart = False

    def metric_matrix(self, x):
        factor = d_exp(2.0 * self.f_fn(x))
        G = self.base.metric_matrix(x)
        return [[factor * v for v in row] for row in G]

    def frame(self, x):
        factor = d_exp(-1.0 * self.f_fn(x))
        return [[factor * c for c in col] for col in self.base.frame(x)]

    def sample_point(self, rng):
        return self.base.sample_point(rng)

    def contains(self, x):
        return self.base.contains(x)

    def geodesic_rhs(self, x, v):
        raise ConfigError("geodesic flow not provided for conformal wrappers")

    def frame_components(self, x, vec):
        f = value_of(self.f_fn(list(x)))
        return np.exp(f) * self.base.frame_components(x, vec)


# ---------------------------------------------------------------------------
# frame connection (shared by all backends)


def frame_at(base, x):
    """Frame columns at a float point, as a float array (m, n)."""
    cols = base.frame(list(x))
    return np.array([[value_of(c) for c in col] for col in cols]).T


def gamma_frame(base, x):
    """Connection coefficients gamma[a][b][c] = g(nabla_{e_a} e_b, e_c).

    Computed from the Koszul formula with orthonormal arguments, where
    only the Lie bracket terms survive:

        2 g(nabla_{e_a} e_b, e_c) =
            g([e_a,e_b], e_c) - g([e_a,e_c], e_b) - g([e_b,e_c], e_a).

    Brackets use the flat coordinate/ambient bracket of the frame fields,
    with frame derivatives taken by forward-mode duals; works at any dual
    level of ``x``.
    """
    n = base.dim
    m = base.coord_dim

    def flat_frame(y):
        return [c for col in base.frame(y) for c in col]

    vals, jac = jacobian(flat_frame, list(x))
    F = [[vals[a * m + i] for i in range(m)] for a in range(n)]  # F[a][i]
    dF = [[jac[a * m + i] for i in range(m)] for a in range(n)]  # dF[a][i][k]
    G = base.metric_matrix(list(x))

    # bracket[a][b] = [e_a, e_b] in coordinates
    def bracket(a, b):
        out = []
        for k in range(m):
            s = 0.0
            for i in range(m):
                s = s + F[a][i] * dF[b][k][i] - F[b][i] * dF[a][k][i]
            out.append(s)
        return out

    def pair(u, col):
        s = 0.0
        for k in range(m):
            t = 0.0
            for l in range(m):
                t = t + G[k][l] * col[l]
            s = s + u[k] * t
        return s

    br = [[bracket(a, b) if a < b else None for b in range(n)] for a in range(n)]

    def get_br(a, b):
        if a == b:
            return [0.0] * m
        if a < b:
            return br[a][b]
        return [-(v) for v in br[b][a]]

    gam = [[[0.0] * n for _ in range(n)] for _ in range(n)]
    gbr = [[pair(get_br(a, b), F[c]) for c in range(n)] for a in range(n) for b in range(n)]
    # reshape helper
    def gb(a, b, c):
        return gbr[a * n + b][c]

    for a in range(n):
        for b in range(n):
            for c in range(n):
                gam[a][b][c] = 0.5 * (gb(a, b, c) - gb(a, c, b) - gb(b, c, a))
    return gam


# ---------------------------------------------------------------------------
# catalog


def euclidean_chart(n, radius=2.0):
    def metric(x):
        return [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]

    return Chart(n, metric, radius=radius, key=f"euclidean:{n}")


def stereographic_sphere_chart(n, radius=0.8):
    """Unit sphere in stereographic coordinates, g = 4/(1+|x|^2)^2 delta."""

    def metric(x):
        r2 = x[0] * x[0]
        for xi in x[1:]:
            r2 = r2 + xi * xi
        c = 4.0 / ((1.0 + r2) * (1.0 + r2))
        return [[c if i == j else 0.0 for j in range(n)] for i in range(n)]

    return Chart(n, metric, radius=radius, key=f"stereographic:{n}")


def poincare_ball_chart(n, radius=0.7):
    """Hyperbolic space of curvature -1, g = 4/(1-|x|^2)^2 delta."""

    def metric(x):
        r2 = x[0] * x[0]
        for xi in x[1:]:
            r2 = r2 + xi * xi
        c = 4.0 / ((1.0 - r2) * (1.0 - r2))
        return [[c if i == j else 0.0 for j in range(n)] for i in range(n)]

    return Chart(n, metric, radius=radius, key=f"hyperbolic:{n}")


def flat_torus_chart(n):
    def metric(x):
        return [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]

    return Chart(n, metric, key=f"torus:{n}", box=(2 * np.pi,) * n)


def bump_function(m, scale=0.1):
    """Fixed low-degree polynomial used as the conformal factor exponent."""

    def f(x):
        s = 0.3 * x[0]
        if m > 1:
            s = s + 0.2 * x[0] * x[1]
        s = s - 0.15 * x[-1] * x[-1]
        return scale * s

    return f


def conformal_rescale(base, f_fn=None, key=None):
    if f_fn is None:
        f_fn = bump_function(base.coord_dim)
    return ConformalRescale(base, f_fn, key=key)


def _split_product_arg(body):
    depth = 0
    for k, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            first, second = body[:k], body[k + 1:]
            # a bare "product:a:2,b:2" has no parentheses; split at the
            # first comma that leaves both sides parseable
            return first, second
    raise ConfigError(f"cannot split product spec {body!r}")


def manifold_from_key(key):
    """Build a catalog manifold from its string key.

    Keys: ``euclidean:n``, ``sphere:n`` (embedded), ``stereographic:n``,
    ``hyperbolic:n``, ``torus:n``, ``product:KEY1,KEY2`` and
    ``conformal:bump:KEY``.
    """
    key = key.strip()
    if key.startswith("product:"):
        first, second = _split_product_arg(key[len("product:"):])
        return ProductManifold(manifold_from_key(first), manifold_from_key(second))
    if key.startswith("conformal:bump:"):
        base = manifold_from_key(key[len("conformal:bump:"):])
        return conformal_rescale(base, key=key)
    parts = key.split(":")
    if len(parts) != 2:
        raise ConfigError(f"unknown manifold key {key!r}")
    name, dim_s = parts
    try:
        n = int(dim_s)
    except ValueError as exc:
        raise ConfigError(f"bad dimension in manifold key {key!r}") from exc
    if n < 2:
        raise ConfigError(f"manifolds need dimension >= 2, got {key!r}")
    if name == "euclidean":
        return euclidean_chart(n)
    if name == "sphere":
        return EmbeddedSphere(n)
    if name == "stereographic":
        return stereographic_sphere_chart(n)
    if name == "hyperbolic":
        return poincare_ball_chart(n)
    if name == "torus":
        return flat_torus_chart(n)
    raise ConfigError(f"unknown manifold key {key!r}")
