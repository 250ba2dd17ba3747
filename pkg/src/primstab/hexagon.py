"""Right-angled hexagons attached to a pair of loxodromics.

For loxodromics U, V with UV loxodromic, the axes of U, V and UV together
with their three common perpendiculars

    sigma_U = Perp(Ax U, Ax UV), sigma_V = Perp(Ax V, Ax UV), sigma_L = Perp(Ax U, Ax V)

bound a right-angled hexagon. The sides are ordered sigma_V < sigma_L < sigma_U.
The signed geometric length along an axis is the parameter difference of the
two feet on it, taken in that order:

    geom(U)  = t_U(sigma_U)  - t_U(sigma_L)
    geom(V)  = t_V(sigma_L)  - t_V(sigma_V)
    geom(UV) = t_UV(sigma_U) - t_UV(sigma_V)

For A = I_x I_y and B = I_y I_z with involutions in pairwise ultraparallel
subspaces each of these is exactly half the translation length.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .farey import FareyEdge
from .freegroup import cyclic_reduce, inverse, reduce
from .minkowski import (
    TOL_FORM,
    DegenerateError,
    DomainError,
    Geodesic,
    Kind,
    _top_eig,
    axis,
    check_isometry,
    choose_perp_at,
    classify,
    closest_params,
    geodesic_through,
    ideal,
    inner,
    null_pair,
    translation_length,
)
from .rep import RepF2

SIDES = ("U", "V", "L")
# which axes each side meets: side -> (axis name, axis name)
SIDE_AXES = {"U": ("U", "UV"), "V": ("V", "UV"), "L": ("U", "V")}


@dataclass
class Hexagon:
    U: np.ndarray
    V: np.ndarray
    axes: dict            # "U", "V", "UV" -> Geodesic
    trans: dict           # "U", "V", "UV" -> translation length
    feet: dict            # (side, axis) -> parameter on that axis
    sides: dict           # "U", "V", "L" -> Geodesic, or None when too thin to draw
    degenerate: dict      # side -> bool
    log_pairings: dict = None   # (axis, axis) -> logs of -<T,T'>, -<T,S'>, -<S,T'>, -<S,S'>

    @property
    def is_degenerate(self) -> bool:
        return any(self.degenerate.values())

    # Inner products evaluated from the endpoint pairings. Each returns
    # (sign, log of the absolute value), so nothing overflows or loses the
    # digits that far-away points lose in coordinates.

    def _lp(self, a: str, b: str):
        if (a, b) in self.log_pairings:
            return self.log_pairings[(a, b)]
        la, lb, lg, ld = self.log_pairings[(b, a)]
        return la, lg, lb, ld

    def _k(self, a: str) -> float:
        return float(np.log(self.axes[a].k))

    def tangent_inner(self, a: str, s: float, b: str, t: float):
        """<gamma_a'(s), gamma_b'(t)> for two different axes."""
        la, lb, lg, ld = self._lp(a, b)
        terms = [(-1, s + t + la), (1, s - t + lb), (1, -s + t + lg), (-1, -s - t + ld)]
        sg, lv = signed_logsumexp(terms)
        return sg, lv - self._k(a) - self._k(b)

    def point_tangent_inner(self, a: str, s: float, b: str, t: float):
        """<gamma_a'(s), gamma_b(t)>: side of a point of Ax b for the hyperplane orthogonal to Ax a at s."""
        la, lb, lg, ld = self._lp(a, b)
        terms = [(-1, s + t + la), (-1, s - t + lb), (1, -s + t + lg), (1, -s - t + ld)]
        sg, lv = signed_logsumexp(terms)
        return sg, lv - self._k(a) - self._k(b)

    def end_tangent_inner(self, a: str, s: float, b: str, end: int):
        """<gamma_a'(s), E> with E the attracting (end=1) or repelling endpoint of Ax b."""
        la, lb, lg, ld = self._lp(a, b)
        if end > 0:
            terms = [(-1, s + la), (1, -s + lg)]
        else:
            terms = [(-1, s + lb), (1, -s + ld)]
        sg, lv = signed_logsumexp(terms)
        return sg, lv - self._k(a)

    def foot(self, side: str, ax: str) -> np.ndarray:
        return self.axes[ax].point(self.feet[(side, ax)])

    def sides_on(self, ax: str):
        """The two sides perpendicular to an axis, in hexagon order."""
        return {"U": ("L", "U"), "V": ("V", "L"), "UV": ("V", "U")}[ax]


# Endpoints closer than this in the unit-sphere chart count as shared.
SHARED_TOL = 1e-12
# Beyond this time coordinate (distance about 14 from the origin) a crossing
# point is too far out to orthonormalize tangent vectors reliably.
FAR = 1e6


def signed_logsumexp(terms):
    """(sign, log|sum|) of sum sign_i exp(log_i); (0, -inf) for an exact zero."""
    logs = [lv for _, lv in terms if np.isfinite(lv)]
    if not logs:
        return 0, -np.inf
    top = max(logs)
    v = sum(sg * np.exp(lv - top) for sg, lv in terms if np.isfinite(lv))
    if v == 0:
        return 0, -np.inf
    return (1 if v > 0 else -1), float(np.log(abs(v)) + top)


class EndpointOracle:
    """Ideal endpoints of word images and their pairings.

    Two endpoints whose infinite words u^oo and v^oo agree on a prefix w are
    pushed together by rho(w) and lose relative precision in the sphere chart.
    Since rho(w) preserves the form, <u+, v+> is computed as <p, q> rescaled by
    the last coordinates of rho(w)p and rho(w)q, where p and q are the
    attracting points of the cyclic rotations of u and v past w.
    """

    def __init__(self, rep: RepF2):
        self.rep = rep
        self._attr = {}
        self._img = {}

    def image(self, w: str) -> np.ndarray:
        if w not in self._img:
            self._img[w] = self.rep.image(w)
        return self._img[w]

    def attracting(self, w: str) -> np.ndarray:
        """Attracting point of a cyclically reduced word."""
        if w not in self._attr:
            _, v, _ = _top_eig(self.image(w))
            self._attr[w] = ideal(v)
        return self._attr[w]

    def endpoint(self, w: str, sign: int) -> np.ndarray:
        core, conj = cyclic_reduce(w)
        p = self.attracting(core if sign > 0 else inverse(core))
        return p if not conj else ideal(self.image(conj) @ p)

    def pair(self, u: str, su: int, v: str, sv: int):
        """(log -<e_u, e_v>, raw) for the su-endpoint of u and sv-endpoint of v.

        raw is the pairing in the best-conditioned chart; it is what a
        shared-endpoint test should look at. The log form survives pairings
        far below the smallest float.
        """
        cu, gu = cyclic_reduce(u)
        cv, gv = cyclic_reduce(v)
        U = cu if su > 0 else inverse(cu)
        V = cv if sv > 0 else inverse(cv)
        if gu != gv:
            val = null_pair(self.endpoint(u, su), self.endpoint(v, sv))
            return _log_neg(val), val
        m, n = len(U), len(V)
        k = 0
        while k < m + n and U[k % m] == V[k % n]:
            k += 1
        if k == m + n:
            return -np.inf, 0.0
        p = self.attracting(U[k % m:] + U[:k % m])
        q = self.attracting(V[k % n:] + V[:k % n])
        raw = null_pair(p, q)
        w = reduce(gu + (U * (k // m + 1))[:k])
        if not w:
            return _log_neg(raw), raw
        W = self.image(w)
        scale = float(np.max(np.abs(W)))
        lw = np.log(float(W[-1] @ p) / scale) + np.log(float(W[-1] @ q) / scale) + 2.0 * np.log(scale)
        return _log_neg(raw) - lw, raw


def _log_neg(v: float) -> float:
    return float(np.log(-v)) if v < 0 else -np.inf


def _side(axes, s: str, d: int, pairings=None):
    """Feet of a side and the side itself.

    When the two axes come closer than float resolution the side is marked
    degenerate; it is then any perpendicular at the foot, or None when even
    the directions cannot be told apart. The feet stay accurate either way.
    """
    a1, a2 = SIDE_AXES[s]
    l1, l2 = axes[a1], axes[a2]
    p, q, ch = closest_params(l1, l2, log_pairings=pairings)
    x1, x2 = l1.point(p), l2.point(q)
    with np.errstate(all="ignore"):
        if 2.0 * np.arcsinh(np.sqrt(max(ch - 1.0, 0.0) / 2.0)) > 1e-9:
            try:
                side = geodesic_through(x1, x2)
                if np.all(np.isfinite(side.source)) and np.all(np.isfinite(side.target)):
                    return p, q, side, False
            except DomainError:
                pass
        if d < 3 and ch < 1.0 - 1e-12:
            raise DegenerateError(f"axes of {a1} and {a2} intersect in dimension 2")
        if x1[-1] > FAR:
            return p, q, None, True
        try:
            side = choose_perp_at(l1, l2, x1, (p, q))
            if np.all(np.isfinite(side.source)) and np.all(np.isfinite(side.target)):
                return p, q, side, True
        except DomainError:
            pass
    return p, q, None, True


def _assemble(mats, axes, pair) -> Hexagon:
    """pair(name1, sign1, name2, sign2) -> (log of minus the pairing, raw pairing)."""
    tol = -0.5 * SHARED_TOL ** 2
    names = list(axes)
    pairings = {}
    for i in range(3):
        for j in range(i + 1, 3):
            a, b = names[i], names[j]
            vals = []
            for sa, sb in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                val, raw = pair(a, sa, b, sb)
                if raw > tol:
                    raise DegenerateError(
                        f"axes of {a} and {b} share an ideal endpoint (reducible-like degeneracy)")
                vals.append(val)
            pairings[(a, b)] = tuple(vals)
    trans = {k: translation_length(m) for k, m in mats.items()}
    feet, sides, degenerate = {}, {}, {}
    d = mats["U"].shape[0] - 1
    for s in SIDES:
        a1, a2 = SIDE_AXES[s]
        p, q, side, deg = _side(axes, s, d, pairings[(a1, a2)])
        feet[(s, a1)] = p
        feet[(s, a2)] = q
        sides[s] = side
        degenerate[s] = deg
    return Hexagon(mats["U"], mats["V"], axes, trans, feet, sides, degenerate, pairings)


def _check_loxodromic(mats):
    for k, m in mats.items():
        if classify(m) is not Kind.LOXODROMIC:
            raise DomainError(f"{k} is not loxodromic")


def build_hexagon(U, V) -> Hexagon:
    """Hexagon of two matrices, with endpoint pairings taken in the sphere chart."""
    U = np.asarray(U, dtype=float)
    V = np.asarray(V, dtype=float)
    mats = {"U": U, "V": V, "UV": U @ V}
    _check_loxodromic(mats)
    axes = {k: axis(m) for k, m in mats.items()}

    def pair(a, sa, b, sb):
        p = axes[a].target if sa > 0 else axes[a].source
        q = axes[b].target if sb > 0 else axes[b].source
        val = null_pair(p, q)
        return _log_neg(val), val

    return _assemble(mats, axes, pair)


def build_hexagon_words(rep: RepF2, x: str, y: str, oracle: EndpointOracle | None = None) -> Hexagon:
    """Hexagon of the images of two words, with prefix-aware endpoint pairings."""
    oracle = oracle or EndpointOracle(rep)
    words = {"U": reduce(x), "V": reduce(y), "UV": reduce(x + y)}
    mats = {k: oracle.image(w) for k, w in words.items()}
    _check_loxodromic(mats)
    axes = {k: Geodesic(oracle.endpoint(w, -1), oracle.endpoint(w, 1)) for k, w in words.items()}

    def pair(a, sa, b, sb):
        return oracle.pair(words[a], sa, words[b], sb)

    return _assemble(mats, axes, pair)


def geom_length(hexagon: Hexagon, which: str, orientation: int = 1) -> float:
    """Signed distance between the two sides orthogonal to the axis of `which`.

    orientation = -1 reverses the cyclic order of the sides.
    """
    first, second = hexagon.sides_on(which)
    t1 = hexagon.feet[(first, which)]
    t2 = hexagon.feet[(second, which)]
    return orientation * (t2 - t1)


def transhex(hexagon: Hexagon) -> float:
    return min(hexagon.trans["U"], hexagon.trans["V"])


def right_angle_defects(hexagon: Hexagon) -> list:
    """|cos| of the six incidence angles; all zero for a right-angled hexagon."""
    out = []
    for s, side in hexagon.sides.items():
        if side is None:
            continue
        for ax in SIDE_AXES[s]:
            line = hexagon.axes[ax]
            x = hexagon.foot(s, ax)
            u = line.tangent(hexagon.feet[(s, ax)])
            v = side.tangent(side.param(x))
            out.append(abs(float(inner(u, v))))
    return out


@dataclass
class HalfLength:
    passed: bool
    margin: float
    bound: float
    deviations: dict
    geom: dict
    trans: dict
    diagnostic: str = ""


def edge_images(rep: RepF2, edge: FareyEdge):
    x, y = edge.basis
    return rep.image(x), rep.image(y)


def half_length(hexagon: Hexagon, epsilon: float) -> HalfLength:
    bound = max(transhex(hexagon) / 6.0 - epsilon, 0.0)
    geom = {k: geom_length(hexagon, k) for k in ("U", "V", "UV")}
    dev = {k: abs(0.5 * hexagon.trans[k] - geom[k]) for k in geom}
    worst = max(dev.values())
    return HalfLength(worst <= bound, bound - worst, bound, dev, geom, dict(hexagon.trans))


def check_half_length(rep: RepF2, edge: FareyEdge, epsilon: float,
                      oracle: EndpointOracle | None = None) -> HalfLength:
    """Half-length test |trans/2 - geom| <= max(transhex/6 - epsilon, 0) on one edge."""
    try:
        hexagon = build_hexagon_words(rep, *edge.basis, oracle)
    except DomainError as e:
        return HalfLength(False, float("nan"), float("nan"), {}, {}, {}, f"inconclusive: {e}")
    out = half_length(hexagon, epsilon)
    if hexagon.is_degenerate:
        out.diagnostic = "degenerate hexagon"
    return out


@dataclass
class CoxeterCheck:
    verified: bool
    failed: str | None
    fixed_dims: tuple


def fixed_dimension(I: np.ndarray, tol: float = 1e-8) -> int:
    """Dimension of the fixed set of an involution in H^d (-1 if it fixes no point)."""
    n = I.shape[0]
    _, sv, Vt = np.linalg.svd(I - np.eye(n))
    ker = Vt[sv < tol * max(1.0, float(np.max(np.abs(I))))]
    if len(ker) == 0:
        return -1
    G = ker @ np.diag([1.0] * (n - 1) + [-1.0]) @ ker.T
    if np.min(np.linalg.eigvalsh(G)) >= -1e-9:
        return -1
    return len(ker) - 1


def verify_coxeter(rep: RepF2, tol: float = 1e-8) -> CoxeterCheck:
    if rep.coxeter is None:
        raise DomainError("representation has no Coxeter triple")
    triple = rep.coxeter
    n = rep.d + 1
    dims = tuple(fixed_dimension(I) for I in triple)
    for k, I in zip("xyz", triple):
        try:
            check_isometry(I, TOL_FORM, f"I_{k}")
        except DomainError:
            return CoxeterCheck(False, f"form preservation of I_{k}", dims)
        if np.max(np.abs(I @ I - np.eye(n))) > tol * max(1.0, float(np.max(np.abs(I))) ** 2):
            return CoxeterCheck(False, f"involutivity of I_{k}", dims)
    x, y, z = triple
    scale = max(1.0, float(np.max(np.abs(rep.A))), float(np.max(np.abs(rep.B))))
    if np.max(np.abs(x @ y - rep.A)) > tol * scale:
        return CoxeterCheck(False, "A = I_x I_y", dims)
    if np.max(np.abs(y @ z - rep.B)) > tol * scale:
        return CoxeterCheck(False, "B = I_y I_z", dims)
    for name, m in (("A", rep.A), ("B", rep.B), ("AB", rep.A @ rep.B)):
        if classify(m) is not Kind.LOXODROMIC:
            return CoxeterCheck(False, f"products not loxodromic ({name})", dims)
    return CoxeterCheck(True, None, dims)
