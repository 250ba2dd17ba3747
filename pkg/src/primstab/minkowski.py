"""Hyperbolic d-space in the hyperboloid model.

Points are vectors x in R^(d+1) with <x, x> = -1 and x[-1] > 0, where
<x, y> = x_1 y_1 + ... + x_d y_d - x_(d+1) y_(d+1). Ideal points are null
vectors scaled to last coordinate 1, with their spatial part renormalized to
the unit sphere so that pairings between them can be computed without
cancellation: <p, q> = -|p_s - q_s|^2 / 2.

Geodesics are stored by their ideal endpoints and carry a fixed
parametrization

    gamma(t) = (e^t T + e^-t S) / sqrt(-2 <S, T>)

from the source S to the target T. Feet of perpendiculars and the signed
lengths used elsewhere are differences of this parameter, which keeps them
accurate even when the lines sit far from the origin.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import mpmath
import numpy as np

TOL_FORM = 1e-9
TOL_CLASS = 1e-9
TOL_ANGLE = 1e-8

_EPS = np.finfo(float).eps


class DomainError(ValueError):
    pass


class DegenerateError(DomainError):
    pass


class IntersectingError(DegenerateError):
    """Two lines meet, so there is no unique common perpendicular."""

    def __init__(self, msg, point=None):
        super().__init__(msg)
        self.point = point


def form_matrix(n: int) -> np.ndarray:
    J = np.eye(n)
    J[-1, -1] = -1.0
    return J


def inner(x, y):
    x = np.asarray(x)
    y = np.asarray(y)
    return np.sum(x[..., :-1] * y[..., :-1], axis=-1) - x[..., -1] * y[..., -1]


def origin(d: int) -> np.ndarray:
    o = np.zeros(d + 1)
    o[-1] = 1.0
    return o


# Isometries -----------------------------------------------------------------

def form_defect(m: np.ndarray):
    """Largest entry of |m^T J m - J|, relative to |m|^2, and where it occurs."""
    J = form_matrix(m.shape[0])
    E = m.T @ J @ m - J
    scale = max(1.0, float(np.max(np.abs(m))) ** 2)
    rel = np.abs(E) / scale
    i, j = np.unravel_index(int(np.argmax(rel)), rel.shape)
    return float(rel[i, j]), (int(i), int(j)), float(E[i, j])


def check_isometry(m, tol: float = TOL_FORM, name: str = "matrix") -> np.ndarray:
    """Validate a Lorentzian matrix; errors name the offending entry."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"{name}: expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 3:
        raise DomainError(f"{name}: dimension d = {m.shape[0] - 1} < 2")
    if not np.all(np.isfinite(m)):
        i, j = np.argwhere(~np.isfinite(m))[0]
        raise DomainError(f"{name}: entry ({i},{j}) is not finite")
    rel, (i, j), val = form_defect(m)
    if rel > tol:
        raise DomainError(
            f"{name}: does not preserve diag(1,...,1,-1); (M^T J M - J)[{i},{j}] = {val:.3e} "
            f"exceeds tol_form = {tol:g}"
        )
    if m[-1, -1] <= 0:
        raise DomainError(f"{name}: entry ({m.shape[0] - 1},{m.shape[0] - 1}) = {m[-1, -1]:.6g} "
                          f"is not positive, so the upper sheet is not preserved")
    return m


def lorentz_inverse(m: np.ndarray) -> np.ndarray:
    J = form_matrix(m.shape[0])
    return J @ m.T @ J


class Kind(str, enum.Enum):
    LOXODROMIC = "loxodromic"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    INCONCLUSIVE = "inconclusive"


def _top_eig(m: np.ndarray):
    """(log of spectral radius, real eigenvector) for the dominant eigenvalue."""
    s = float(np.max(np.abs(m)))
    w, V = np.linalg.eig(m / s)
    i = int(np.argmax(np.abs(w)))
    return float(np.log(np.abs(w[i])) + np.log(s)), np.real(V[:, i]), w[i]


def class_margin(m: np.ndarray, tol_class: float = TOL_CLASS) -> float:
    """How far above 1 the spectral radius must be to call m loxodromic.

    A unipotent Jordan block of size 3 splits under rounding by roughly
    (eps |m|^2)^(1/3); inside that band the eigenvalues cannot tell a
    parabolic from a short loxodromic.
    """
    s = float(np.max(np.abs(m)))
    log_n2 = np.log(float(np.linalg.norm(m / s, 2))) + np.log(s)
    return max(tol_class, 10.0 * float(np.exp((np.log(_EPS) + 2.0 * log_n2) / 3.0)))


def classify(g, tol_class: float = TOL_CLASS) -> Kind:
    """Loxodromic, parabolic or elliptic, or inconclusive near the parabolic locus."""
    m = np.asarray(g, dtype=float)
    log_rho, _, _ = _top_eig(m)
    if np.expm1(log_rho) > class_margin(m, tol_class):
        return Kind.LOXODROMIC
    n = m.shape[0]
    K = m - np.eye(n)
    _, sv, Vt = np.linalg.svd(K)
    tol_ker = 1e-8 * max(1.0, float(np.max(np.abs(m))))
    ker = Vt[sv < tol_ker]
    if len(ker) == 0:
        return Kind.INCONCLUSIVE
    G = ker @ form_matrix(n) @ ker.T
    lo = float(np.min(np.linalg.eigvalsh(G)))
    if lo < -1e-6:
        return Kind.ELLIPTIC
    if lo < 1e-6:
        # a fixed null direction
        return Kind.PARABOLIC
    return Kind.INCONCLUSIVE


def translation_length(g, tol_class: float = TOL_CLASS) -> float:
    """log of the top eigenvalue if g is loxodromic, else 0."""
    m = np.asarray(g, dtype=float)
    log_rho, _, _ = _top_eig(m)
    if np.expm1(log_rho) > class_margin(m, tol_class):
        return log_rho
    return 0.0


def translation_length_mp(m, dps: int = 60) -> float:
    """Translation length of an mpmath (or float) matrix in extended precision."""
    with mpmath.workdps(dps):
        M = mpmath.matrix(m.tolist()) if isinstance(m, np.ndarray) else m
        ev = mpmath.eig(M, left=False, right=False)
        r = max(abs(e) for e in ev)
        return float(max(mpmath.log(r), 0))


def ideal(v) -> np.ndarray:
    """Normalize a nonzero null vector: last coordinate 1, unit spatial part."""
    v = np.asarray(v, dtype=float)
    if v[-1] < 0:
        v = -v
    s = v[:-1]
    n = np.linalg.norm(s)
    if n == 0:
        raise DomainError("not a null vector")
    out = np.empty_like(v)
    out[:-1] = s / n
    out[-1] = 1.0
    return out


def null_pair(p, q) -> float:
    """<p, q> for normalized ideal points, without cancellation."""
    diff = p[:-1] - q[:-1]
    return -0.5 * float(diff @ diff)


def normalize_point(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    n = np.sqrt(-inner(x, x))
    x = x / n
    return x if x[-1] > 0 else -x


@dataclass(frozen=True)
class Geodesic:
    source: np.ndarray
    target: np.ndarray

    def __post_init__(self):
        if self.c <= 0:
            raise DegenerateError("geodesic endpoints coincide")

    @property
    def c(self) -> float:
        return -null_pair(self.source, self.target)

    @property
    def k(self) -> float:
        return float(np.sqrt(2.0 * self.c))

    def point(self, t: float) -> np.ndarray:
        return (np.exp(t) * self.target + np.exp(-t) * self.source) / self.k

    def tangent(self, t: float) -> np.ndarray:
        return (np.exp(t) * self.target - np.exp(-t) * self.source) / self.k

    def param(self, x) -> float:
        """Parameter of the orthogonal projection of x onto the line."""
        return 0.5 * float(np.log(inner(x, self.source) / inner(x, self.target)))

    def reversed(self) -> "Geodesic":
        return Geodesic(self.target, self.source)

    def moved(self, g) -> "Geodesic":
        g = np.asarray(g)
        return Geodesic(ideal(g @ self.source), ideal(g @ self.target))

    def dist_to(self, x) -> float:
        return dist_point_geodesic(x, self)

    def contains(self, x, tol: float = 1e-7) -> bool:
        return self.dist_to(x) < tol


def geodesic_through(x, y) -> Geodesic:
    """The geodesic through two distinct points, oriented from x to y."""
    w = y + inner(x, y) * x
    nw = inner(w, w)
    if nw <= 0:
        raise DegenerateError("points coincide")
    w = w / np.sqrt(nw)
    return Geodesic(ideal(x - w), ideal(x + w))


def geodesic_from(x, direction) -> Geodesic:
    """The geodesic through x with the given (spacelike, orthogonal) direction."""
    w = direction + inner(direction, x) * x
    w = w / np.sqrt(inner(w, w))
    return Geodesic(ideal(x - w), ideal(x + w))


def axis(g) -> Geodesic:
    """Axis of a loxodromic, from the repelling to the attracting fixed point."""
    m = np.asarray(g, dtype=float)
    if classify(m) is not Kind.LOXODROMIC:
        raise DomainError("axis requested for a non-loxodromic isometry")
    _, vp, _ = _top_eig(m)
    _, vm, _ = _top_eig(lorentz_inverse(m))
    return Geodesic(ideal(vm / vm[-1]), ideal(vp / vp[-1]))


def fixed_points(g):
    """(repelling, attracting) ideal points of a loxodromic."""
    ax = axis(g)
    return ax.source, ax.target


# Distances -----------------------------------------------------------------

def dist_points(x, y) -> float:
    diff = np.asarray(x) - np.asarray(y)
    q = max(float(inner(diff, diff)), 0.0)
    return float(2.0 * np.arcsinh(np.sqrt(q) / 2.0))


def dist_point_hyperplane(x, H: "Hyperplane") -> float:
    return float(np.arcsinh(abs(inner(x, H.normal))))


def dist_hyperplanes(H1: "Hyperplane", H2: "Hyperplane") -> float:
    c = abs(float(inner(H1.normal, H2.normal)))
    return float(np.arccosh(c)) if c > 1 else 0.0


def dist_point_geodesic(x, ell: Geodesic) -> float:
    a = inner(x, ell.source)
    b = inner(x, ell.target)
    ch2 = 2.0 * a * b / ell.c
    if ch2 < 4.0:
        # near the line the closed form cancels; measure to the foot instead
        return dist_points(x, ell.point(ell.param(x)))
    return float(np.arccosh(np.sqrt(ch2)))


def closest_params(l1: Geodesic, l2: Geodesic, pairings=None, log_pairings=None):
    """Parameters (s, t) of the closest points of two lines, and cosh of their distance.

    Minimizes -<gamma1(s), gamma2(t)>, a sum of four exponentials whose
    critical point has a closed form. The four values -<T1,T2>, -<T1,S2>,
    -<S1,T2>, -<S1,S2> may be supplied directly (``pairings``) or as their
    logarithms (``log_pairings``) when they are known more accurately than
    the endpoint coordinates allow, or are too small for a float.
    """
    if log_pairings is None:
        if pairings is None:
            pairings = (-null_pair(l1.target, l2.target), -null_pair(l1.target, l2.source),
                        -null_pair(l1.source, l2.target), -null_pair(l1.source, l2.source))
        if min(pairings) <= 0.0:
            raise DegenerateError("the lines share an ideal endpoint")
        log_pairings = np.log(pairings)
    la, lb, lg, ld = (float(v) for v in log_pairings)
    if not np.all(np.isfinite([la, lb, lg, ld])):
        raise DegenerateError("the lines share an ideal endpoint")
    s = 0.25 * (ld + lg - la - lb)
    t = 0.25 * (ld + lb - la - lg)
    ch = 2.0 * (np.exp(0.5 * (la + ld)) + np.exp(0.5 * (lb + lg))) / (l1.k * l2.k)
    return float(s), float(t), float(ch)


def dist_geodesics(l1: Geodesic, l2: Geodesic) -> float:
    s, t, ch = closest_params(l1, l2)
    if ch > 1.5:
        return float(np.arccosh(ch))
    return dist_points(l1.point(s), l2.point(t))


def dist(a, b) -> float:
    """Distance between points, hyperplanes and geodesics (any pair of points/hyperplanes, or two lines)."""
    if isinstance(a, Hyperplane) and isinstance(b, Hyperplane):
        return dist_hyperplanes(a, b)
    if isinstance(a, Geodesic) and isinstance(b, Geodesic):
        return dist_geodesics(a, b)
    if isinstance(a, Hyperplane):
        a, b = b, a
    if isinstance(b, Hyperplane):
        return dist_point_hyperplane(a, b)
    if isinstance(b, Geodesic):
        return dist_point_geodesic(a, b)
    if isinstance(a, Geodesic):
        return dist_point_geodesic(b, a)
    return dist_points(a, b)


# Perpendiculars and angles -------------------------------------------------

def perp(l1: Geodesic, l2: Geodesic, tol: float = 1e-12) -> Geodesic:
    """Common perpendicular oriented from l1 to l2."""
    s, t, ch = closest_params(l1, l2)
    x1, x2 = l1.point(s), l2.point(t)
    if ch - 1.0 <= tol and dist_points(x1, x2) <= np.sqrt(tol):
        raise IntersectingError("the lines intersect", point=x1)
    return geodesic_through(x1, x2)


def choose_perp_at(l1: Geodesic, l2: Geodesic, x, params=None) -> Geodesic:
    """A deterministic common perpendicular through the intersection point x.

    ``params`` are the parameters of x on l1 and l2 when already known;
    recovering them from x is ill-conditioned far from the origin.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if n - 1 < 3:
        raise DomainError("no common perpendicular through a crossing point in dimension 2")
    s1, s2 = params if params is not None else (l1.param(x), l2.param(x))
    t1 = l1.tangent(s1)
    t2 = l2.tangent(s2)
    if not (np.all(np.isfinite(t1)) and np.all(np.isfinite(t2))):
        raise DegenerateError("tangent directions are not finite")
    basis = [(x, -1.0)]
    for v in (t1, t2):
        for b, sgn in basis:
            v = v - sgn * inner(v, b) * b
        nv = inner(v, v)
        if nv < 1e-14:
            raise DegenerateError("the two lines coincide")
        basis.append((v / np.sqrt(nv), 1.0))
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        v = e.copy()
        for b, sgn in basis:
            v = v - sgn * inner(e, b) * b
        nv = inner(v, v)
        if nv > 1e-6:
            v = v / np.sqrt(nv)
            j = int(np.argmax(np.abs(v) > 1e-12))
            if v[j] < 0:
                v = -v
            return geodesic_from(x, v)
    raise DegenerateError("no perpendicular direction found")


def _meet(delta: Geodesic, ell: Geodesic, tol: float):
    s, t, _ = closest_params(delta, ell)
    x = delta.point(s)
    if dist_points(x, ell.point(t)) > tol:
        raise DomainError("the perpendicular does not meet the line")
    u = ell.tangent(t)
    dv = delta.tangent(s)
    if abs(inner(u, dv)) > tol:
        raise DomainError("the perpendicular is not orthogonal to the line")
    return x, dv, u


def angle_along(delta: Geodesic, l1: Geodesic, l2: Geodesic, tol: float = 1e-6) -> float:
    """Angle between l1 and l2 after parallel transport along delta.

    Transport along delta fixes every vector orthogonal to its plane, so the
    direction of l1 at its foot is compared directly with that of l2. In
    dimension 3 the angle is signed by the orientation of
    (x, delta', l1', l2'); otherwise it lies in [0, pi].
    """
    x1, dv, u1 = _meet(delta, l1, tol)
    _, _, u2 = _meet(delta, l2, tol)
    c = float(np.clip(inner(u1, u2), -1.0, 1.0))
    ang = float(np.arccos(c))
    if x1.shape[0] == 4 and 1e-12 < ang < np.pi - 1e-12:
        if np.linalg.det(np.column_stack([x1, dv, u1, u2])) < 0:
            ang = -ang
    return ang


# Hyperplanes ---------------------------------------------------------------

@dataclass(frozen=True)
class Hyperplane:
    """{x : <x, n> = 0}; the positive side is {<x, n> > 0}."""

    normal: np.ndarray

    def side(self, x) -> float:
        return float(inner(x, self.normal))

    def flipped(self) -> "Hyperplane":
        return Hyperplane(-self.normal)

    def moved(self, g) -> "Hyperplane":
        return Hyperplane(np.asarray(g) @ self.normal)

    def base_point(self) -> np.ndarray:
        """The point of the hyperplane closest to the origin of the model."""
        n = self.normal
        o = origin(n.shape[0] - 1)
        return normalize_point(o - inner(o, n) * n)


def ortho_hyperplane(ell: Geodesic, x, tol: float = 1e-7) -> Hyperplane:
    """Hyperplane through x orthogonal to ell, positive towards ell's target."""
    t = ell.param(x)
    if dist_points(x, ell.point(t)) > tol * max(1.0, abs(float(x[-1]))):
        raise DomainError("point is not on the line")
    return Hyperplane(ell.tangent(t))


def ortho_hyperplane_at(ell: Geodesic, t: float) -> Hyperplane:
    return Hyperplane(ell.tangent(t))


def hyperplanes_disjoint(H1: Hyperplane, H2: Hyperplane, tol: float = 1e-9) -> bool:
    return abs(float(inner(H1.normal, H2.normal))) > 1.0 + tol


def separation(H: Hyperplane, H1: Hyperplane, H2: Hyperplane, tol: float = 1e-9):
    """(separates, diagnostic) for H against H1 and H2."""
    for a, b, name in ((H, H1, "H,H1"), (H, H2, "H,H2"), (H1, H2, "H1,H2")):
        if not hyperplanes_disjoint(a, b, tol):
            return False, f"intersecting {name}"
    s1 = H.side(H1.base_point())
    s2 = H.side(H2.base_point())
    if s1 * s2 < 0:
        return True, "ok"
    return False, "same side"


def separates(H: Hyperplane, H1: Hyperplane, H2: Hyperplane, tol: float = 1e-9) -> bool:
    return separation(H, H1, H2, tol)[0]


def halfspaces_disjoint(H1: Hyperplane, H2: Hyperplane, tol: float = 1e-9) -> bool:
    """Whether the closed positive sides of H1 and H2 are disjoint."""
    if not hyperplanes_disjoint(H1, H2, tol):
        return False
    return H1.side(H2.base_point()) < 0 and H2.side(H1.base_point()) < 0


# Thresholds and asymptotics --------------------------------------------------

def r_threshold(mu: float) -> float:
    """R with 4 e^-R + 2 e^-2R = tanh(mu), from the quadratic in z = e^-R."""
    if not mu > 0:
        raise DomainError("mu must be positive")
    th = np.tanh(mu)
    # z = (-4 + sqrt(16 + 8 th)) / 4, written to avoid cancellation
    z = 2.0 * th / (4.0 + np.sqrt(16.0 + 8.0 * th))
    return float(-np.log(z))


@dataclass
class Offset:
    offset: float
    degenerate: bool
    offsets: list
    trans_last: float
    endpoint_gap: float


def asymptotic_offset(g, h, n_max: int = 40, tol_degenerate: float = 1e-6) -> Offset:
    """Tail estimate of t_n = trans(g^n h) - n trans(g).

    The pair is degenerate when h moves the attracting point of g onto its
    repelling point; then trans(g^n h) tends to 0. Products whose double
    precision eigenvalues are unreliable are redone in extended precision.
    """
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    ell = translation_length(g)
    if ell <= 0:
        raise DomainError("g must be loxodromic")
    ax = axis(g)
    gap = float(np.sqrt(-2.0 * null_pair(ideal(h @ ax.target), ax.source)))
    dps = 30 + int(2 * n_max * ell / np.log(10))
    exact = gap <= tol_degenerate
    M = h.copy()
    P = None
    offsets = []
    trans = 0.0
    for n in range(1, n_max + 1):
        M = g @ M
        if not exact and classify(M) is not Kind.LOXODROMIC:
            exact = True
        if exact:
            with mpmath.workdps(dps):
                G = mpmath.matrix(g.tolist())
                if P is None:
                    P = mpmath.matrix(h.tolist())
                    for _ in range(n):
                        P = G * P
                else:
                    P = G * P
            trans = translation_length_mp(P, dps)
        else:
            trans = translation_length(M)
        offsets.append(trans - n * ell)
    degenerate = gap <= tol_degenerate or trans < 1e-2
    return Offset(offsets[-1], bool(degenerate), offsets, trans, gap)
