"""Q-condition scans and certificates of primitive stability.

The certificate follows the usual assembly. Every Farey edge f = (x, y)
with property O carries a hyperplane H whose translates along the axis of
any word positive in {x, y} are ordered, so the orbit of a point of H moves
at least m_f per basis letter. Edges of the tree are examined breadth first;
once an edge of level >= N passes property O, narrowness and disjointness
of Hem_X^X and Hem_Y^Y, its subtree is closed. Words below the closing level
get their own constants from their axes. All constants are rewritten for
the word metric in (a, b) and a common base point o before the global
(m, c) is taken.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bip import base_points
from .constructions import boost_along
from .farey import FareyEdge, edge_from_gallery, edges_at_level, enumerate_edges, vertices
from .freegroup import axis_window
from .hexagon import SIDE_AXES, EndpointOracle, Hexagon, build_hexagon_words
from .minkowski import (
    TOL_ANGLE,
    TOL_CLASS,
    DomainError,
    Geodesic,
    Hyperplane,
    Kind,
    _top_eig,
    angle_along,
    classify,
    dist_hyperplanes,
    dist_points,
    fixed_points,
    inner,
    lorentz_inverse,
    ortho_hyperplane_at,
    r_threshold,
)
from .rep import RepF2

_EPS = np.finfo(float).eps

# hexagon names -> names relative to the edge (X, Y)
_SIDE = {"U": "X", "V": "Y", "L": "L"}
_AXIS = {"U": "X", "V": "Y", "UV": "XY"}
_AXIS_BACK = {v: k for k, v in _AXIS.items()}


# Scanning -------------------------------------------------------------------

@dataclass
class ScanRow:
    level: int
    fraction: str
    word: str
    word_length: int
    trans: float
    kind: str
    error: float       # bound on the rounding error of trans


@dataclass
class ScanReport:
    lam: float
    max_level: int
    rows: list
    count_below_lambda: int
    primsys_upper: float
    primsys_lower: float
    non_loxodromic: list
    monotone_violations: list
    decreasing_chain: list


def _trans_with_error(g: np.ndarray, tol_class: float):
    """(kind, trans, error). trans is log of the top eigenvalue modulus."""
    kind = classify(g, tol_class)
    if kind is not Kind.LOXODROMIC:
        return kind, 0.0, 0.0
    log_mu, _, _ = _top_eig(g)
    s = float(np.max(np.abs(g)))
    log_n2 = np.log(float(np.linalg.norm(g / s, 2))) + np.log(s)
    err = 10.0 * _EPS * float(np.exp(log_n2 - log_mu))
    return kind, log_mu, err


def decreasing_chain(rep: RepF2, max_level: int, tol_class: float = TOL_CLASS) -> list:
    """Greedy walk keeping the shorter basis element, as in the Euclidean algorithm.

    Returns [(word, trans)] with strictly decreasing trans; a non-loxodromic
    word ends the chain with trans 0.
    """
    best = {}
    for sign in (1, -1):
        e = edge_from_gallery("", sign)
        x, y = e.basis
        tx = _trans_with_error(rep.image(x), tol_class)[1]
        ty = _trans_with_error(rep.image(y), tol_class)[1]
        chain = sorted([(x, tx), (y, ty)], key=lambda t: -t[1])
        for _ in range(max_level + 1):
            w = e.new_word()
            kind, tw, _ = _trans_with_error(rep.image(w), tol_class)
            if kind is not Kind.LOXODROMIC:
                chain.append((w, 0.0))
                break
            if tw < chain[-1][1]:
                chain.append((w, tw))
            e = e.child("R" if ty <= tx else "L")
            x, y = e.basis
            tx = _trans_with_error(rep.image(x), tol_class)[1]
            ty = _trans_with_error(rep.image(y), tol_class)[1]
        if len(chain) > len(best.get("c", [])):
            best["c"] = chain
    return best["c"]


def scan_q(rep: RepF2, lam: float, max_level: int, tol_class: float = TOL_CLASS) -> ScanReport:
    """Translation lengths of the Christoffel words of level <= max_level."""
    rows = []
    trans_of = {}
    for lv, r, w in vertices(max_level):
        kind, t, err = _trans_with_error(rep.image(w), tol_class)
        rows.append(ScanRow(lv, str(r), w, len(w), t, kind.value, err))
        trans_of[w] = (kind, t)
    lox = [r for r in rows if r.kind == Kind.LOXODROMIC.value]
    non = [r.word for r in rows if r.kind != Kind.LOXODROMIC.value]
    count = sum(1 for r in rows if r.trans <= lam)
    upper = min((r.trans for r in lox), default=0.0)
    lower = 0.0 if non else max(0.0, min((r.trans - r.error for r in lox), default=0.0))
    viol = []
    for e in enumerate_edges(max_level - 1) if max_level > 0 else ():
        x, y = e.basis
        w = e.new_word()
        kx, tx = trans_of.get(x, (None, 0.0))
        ky, ty = trans_of.get(y, (None, 0.0))
        kw, tw = trans_of[w]
        if tw < min(tx, ty) - 1e-9:
            viol.append({"edge": e.address, "word": w, "trans": tw, "basis_trans": [tx, ty]})
    chain = decreasing_chain(rep, max_level, tol_class)
    return ScanReport(lam, max_level, rows, count, upper, lower, non, viol, chain)


# Irreducibility -------------------------------------------------------------

@dataclass
class Irreducibility:
    status: str        # "irreducible", "reducible", "inconclusive"
    gap: float         # smallest chord between a fixed point of A and one of B
    pair: str
    diagnostic: str = ""


def check_irreducible(rep: RepF2, tol: float = 1e-9, band: float = 1e-6) -> Irreducibility:
    """Compare the ideal fixed points of A and B.

    A chord below tol in the unit-sphere chart counts as shared (reducible),
    a chord in [tol, band) is inconclusive, anything larger is irreducible.
    """
    for name, g in (("A", rep.A), ("B", rep.B)):
        if classify(g) is not Kind.LOXODROMIC:
            return Irreducibility("inconclusive", float("nan"), "", f"{name} is not loxodromic")
    fa = dict(zip("-+", fixed_points(rep.A)))
    fb = dict(zip("-+", fixed_points(rep.B)))
    best = (np.inf, "")
    for sa, p in fa.items():
        for sb, q in fb.items():
            gap = float(np.linalg.norm(p[:-1] - q[:-1]))
            if gap < best[0]:
                best = (gap, f"A{sa}=B{sb}")
    gap, pair = best
    if gap < tol:
        return Irreducibility("reducible", gap, pair, f"shared fixed ideal point {pair}")
    if gap < band:
        return Irreducibility("inconclusive", gap, pair, "fixed points within the tolerance band")
    return Irreducibility("irreducible", gap, pair)


# Edge geometry --------------------------------------------------------------

@dataclass
class EdgeGeometry:
    edge: FareyEdge
    hexagon: Hexagon
    hyp: dict               # (side, axis) -> Hyperplane whose positive side is Hem
    narrow: bool
    narrow_endpoint: float  # <X+, normal of Hem_L^Y>, positive when X+ lies in it
    narrow_angle: float     # angle along sigma_L from Ax X to Ax Y (nan if unavailable)
    hems_disjoint: bool
    degenerate: bool

    def foot_param(self, side: str, ax: str) -> float:
        inv_side = {v: k for k, v in _SIDE.items()}
        return self.hexagon.feet[(inv_side[side], _AXIS_BACK[ax])]

    def axis(self, ax: str):
        return self.hexagon.axes[_AXIS_BACK[ax]]


def _hems(hexagon: Hexagon):
    """Hyp_u^v with Hem_u^v as positive side, and the orientation signs used."""
    out, signs = {}, {}
    for s, (a1, a2) in SIDE_AXES.items():
        for ax in (a1, a2):
            line = hexagon.axes[ax]
            t = hexagon.feet[(s, ax)]
            first, second = hexagon.sides_on(ax)
            other = second if s == first else first
            t_other = hexagon.feet[(other, ax)]
            if t != t_other:
                sign = 1 if t > t_other else -1
            else:
                sign = 1 if s == second else -1
            key = (_SIDE[s], _AXIS[ax])
            out[key] = Hyperplane(sign * line.tangent(t))
            signs[key] = sign
    return out, signs


def edge_geometry(rep: RepF2, edge: FareyEdge, oracle: EndpointOracle | None = None,
                  tol_angle: float = TOL_ANGLE) -> EdgeGeometry:
    """Hexagon of the edge basis, its six Hyp/Hem and the narrowness flags.

    Narrow means X+ lies in the open half-space Hem_L^Y. It is claimed only
    when the angle along sigma_L is also below pi/2 - tol_angle, or, when
    sigma_L is too thin to measure an angle, when X+ is clearly inside.
    Side tests use inner products computed from the endpoint pairings.
    """
    x, y = edge.basis
    hexagon = build_hexagon_words(rep, x, y, oracle)
    hyp, signs = _hems(hexagon)
    f = hexagon.feet
    sg, lv = hexagon.end_tangent_inner("V", f[("L", "V")], "U", 1)
    sg *= signs[("L", "Y")]
    val = sg * float(np.exp(min(lv, 700.0)))
    ang = float("nan")
    side_l = hexagon.sides["L"]
    if side_l is not None and not hexagon.degenerate["L"]:
        try:
            ang = angle_along(side_l, hexagon.axes["U"], hexagon.axes["V"])
        except DomainError:
            ang = float("nan")
    if np.isnan(ang):
        narrow = sg > 0 and lv > np.log(1e-12)
    else:
        narrow = sg > 0 and abs(ang) < np.pi / 2 - tol_angle
    return EdgeGeometry(edge, hexagon, hyp, bool(narrow), val, ang,
                        _hems_disjoint(hexagon, signs), hexagon.is_degenerate)


def _hems_disjoint(hexagon: Hexagon, signs: dict, tol: float = 1e-9) -> bool:
    """Hem_X^X and Hem_Y^Y are disjoint: the hyperplanes are ultraparallel and
    each lies on the negative side of the other."""
    s = hexagon.feet[("U", "U")]
    t = hexagon.feet[("V", "V")]
    sx, sy = signs[("X", "X")], signs[("Y", "Y")]
    _, lv = hexagon.tangent_inner("U", s, "V", t)
    if not lv > np.log1p(tol):
        return False
    a, _ = hexagon.point_tangent_inner("U", s, "V", t)
    b, _ = hexagon.point_tangent_inner("V", t, "U", s)
    return sx * a < 0 and sy * b < 0


# Property O -----------------------------------------------------------------

@dataclass
class PropertyO:
    passed: bool
    witness: Hyperplane | None
    point: np.ndarray | None     # o_f, a point of the witness on the axis it is orthogonal to
    candidate: str
    margin: float                # min over the checks of |<n, n'>| - 1
    failed: str = ""


def _candidates(geom: EdgeGeometry):
    for ax in ("X", "Y"):
        side = "X" if ax == "X" else "Y"
        t = 0.5 * (geom.foot_param("L", ax) + geom.foot_param(side, ax))
        yield f"mid_{ax}", geom.axis(ax), t
    for ax in ("X", "Y"):
        yield f"hyp_L^{ax}", geom.axis(ax), geom.foot_param("L", ax)


def verify_property_O(H: Hyperplane, point: np.ndarray, X: np.ndarray, Y: np.ndarray, tol: float = 1e-9):
    """(passed, margin, failed pair) for rho(u)^-1 H, H, rho(v) H with u, v in {x, y}.

    ``point`` lies on H. Disjointness uses |<n, g n>| > 1 with g the single
    product relating two of the hyperplanes; separation compares the sides
    of the translated points.
    """
    n = H.normal
    mats = {"x": X, "y": Y}
    inv = {k: lorentz_inverse(m) for k, m in mats.items()}
    margin = np.inf
    for u in "xy":
        for v in "xy":
            pairs = (("H", mats[u]), ("H'", mats[v]), ("u^-1 H, v H", mats[u] @ mats[v]))
            for name, g in pairs:
                c = abs(float(inner(n, g @ n))) - 1.0
                margin = min(margin, c)
                if not c > tol:
                    return False, margin, f"({u}, {v}): intersecting {name}"
            s1 = float(inner(n, inv[u] @ point))
            s2 = float(inner(n, mats[v] @ point))
            if not s1 * s2 < 0:
                return False, margin, f"({u}, {v}): same side"
    return True, margin, ""


def check_property_O(geom: EdgeGeometry, tol: float = 1e-9) -> PropertyO:
    """First candidate hyperplane that orders the translates, or the last failure.

    Candidates: the hyperplanes orthogonal to Ax X and Ax Y at the middle of
    their sides, then Hyp_L^X and Hyp_L^Y.
    """
    X, Y = geom.hexagon.U, geom.hexagon.V
    last = PropertyO(False, None, None, "", -np.inf, "no candidate")
    for name, line, t in _candidates(geom):
        H = ortho_hyperplane_at(line, t)
        pt = line.point(t)
        ok, margin, failed = verify_property_O(H, pt, X, Y, tol)
        if ok:
            return PropertyO(True, H, pt, name, margin)
        last = PropertyO(False, None, None, name, margin, failed)
    return last


# Constants ------------------------------------------------------------------

@dataclass
class QuasiConstants:
    m_raw: float      # min over basis letters of d(H, rho(u) H), per letter of the edge basis
    D: int            # longest basis word, in letters a, A, b, B
    P: float          # max displacement of o_f by a proper prefix of a basis word
    m: float          # m_raw / D
    c: float          # m_raw (D - 1) / D + 2 P


def _prefix_displacement(rep: RepF2, words, o: np.ndarray) -> float:
    L = rep.letters()
    best = 0.0
    for w in words:
        g = np.eye(o.shape[0])
        for letter in w[:-1]:
            g = g @ L[letter]
            best = max(best, dist_points(o, g @ o))
    return best


def quasi_constants(geom: EdgeGeometry, H: Hyperplane, o_f: np.ndarray, rep: RepF2) -> QuasiConstants:
    """Constants for words positive in the edge basis, in the word metric of (a, b).

    With H ordered, d(rho(u) o_f, rho(v) o_f) >= m_raw d_f(u, v). A point of
    the e-axis sits inside a basis block of at most D letters, so
    d_f >= (d_e - (D - 1)) / D, and moving to the block start costs at most
    P on each side.
    """
    X, Y = geom.hexagon.U, geom.hexagon.V
    m_raw = min(dist_hyperplanes(H, H.moved(X)), dist_hyperplanes(H, H.moved(Y)))
    words = geom.edge.basis
    D = max(len(w) for w in words)
    P = _prefix_displacement(rep, words, o_f)
    return QuasiConstants(m_raw, D, P, m_raw / D, m_raw * (D - 1) / D + 2.0 * P)


@dataclass
class WordConstants:
    word: str
    level: int
    trans: float
    m: float
    c: float


def word_constants(rep: RepF2, w: str, o: np.ndarray, level: int = -1,
                   oracle: EndpointOracle | None = None) -> WordConstants:
    """m_w = trans / |w| and c_w = spread of the axis offsets of the orbit.

    The orbit points x_n = rho(w_1 .. w_n) o project to Ax rho(w) at
    parameters n trans / |w| + s_n with s periodic; projection is
    1-Lipschitz, so d(x_n, x_k) >= m_w |n - k| - (max s - min s).
    """
    oracle = oracle or EndpointOracle(rep)
    line = Geodesic(oracle.endpoint(w, -1), oracle.endpoint(w, 1))
    kind, t, _ = _trans_with_error(oracle.image(w), TOL_CLASS)
    if kind is not Kind.LOXODROMIC:
        raise DomainError(f"{w} is not loxodromic")
    n = len(w)
    L = rep.letters()
    g = np.eye(o.shape[0])
    s = []
    for k in range(n):
        s.append(line.param(g @ o) - k * t / n)
        g = g @ L[w[k]]
    return WordConstants(w, level, t, t / n, float(max(s) - min(s)))


# Certification --------------------------------------------------------------

@dataclass
class Closure:
    address: str
    level: int
    candidate: str
    normal: np.ndarray
    point: np.ndarray
    constants: QuasiConstants
    r: float          # d(o, o_f)
    margin: float


@dataclass
class FrontierEntry:
    address: str
    closed_by: str
    m: float
    c: float          # c_f + 2 r_f in the e-metric at the base point o


@dataclass
class Certificate:
    level: int
    threshold_level: int
    threshold_rule: dict
    frontier: list
    closures: list
    low_words: list
    base: np.ndarray
    m: float
    c: float
    lambda_used: float
    primsys_lower: float
    spot_checks: list = field(default_factory=list)


@dataclass
class Inconclusive:
    reason: str
    frontier: list                 # addresses still open
    details: dict = field(default_factory=dict)


def threshold_level(scan: ScanReport, lam: float, geom_min: dict):
    """Operational N and the quantities it was derived from.

    mu = PrimSys_lower / 6 and R = r_threshold(mu); lambda_eff is the larger
    of lam and 6R. N is past every scanned word with trans <= lambda_eff and
    past every level whose smallest hexagon length is <= R.
    """
    if scan.primsys_lower <= 0:
        return None, {"reason": "no positive lower bound on primitive translation lengths"}
    mu = scan.primsys_lower / 6.0
    R = r_threshold(mu)
    lam_eff = max(lam, 6.0 * R)
    short = [r.level for r in scan.rows if r.trans <= lam_eff]
    n_lambda = 1 + max(short) if short else 0
    n_geom = 0
    for lv in sorted(geom_min):
        if not geom_min[lv] > R:
            n_geom = lv + 1
    rule = {"mu": mu, "R": R, "lambda_eff": lam_eff, "N_lambda": n_lambda, "N_geom": n_geom}
    return max(n_lambda, n_geom), rule


def _geom_min(rep, oracle, max_level: int) -> dict:
    out = {}
    for e in enumerate_edges(max_level):
        try:
            h = build_hexagon_words(rep, *e.basis, oracle)
        except DomainError:
            out[e.level] = -np.inf
            continue
        g = min(h.feet[(s2, ax)] - h.feet[(s1, ax)] for ax in ("U", "V", "UV")
                for s1, s2 in [h.sides_on(ax)])
        out[e.level] = min(out.get(e.level, np.inf), g)
    return out


def _examine(rep, oracle, edge):
    try:
        geom = edge_geometry(rep, edge, oracle)
    except DomainError as e:
        return edge, None, None, str(e)
    po = check_property_O(geom)
    return edge, geom, po, ""


def certify_primitive_stability(rep: RepF2, max_level: int, lam: float, epsilon: float = 0.0,
                                seed: int = 0, jobs: int = 1, scan_level: int | None = None):
    """Certificate or Inconclusive, explored breadth first with L before R."""
    scan_level = max_level + 1 if scan_level is None else scan_level
    scan = scan_q(rep, lam, scan_level)
    irr = check_irreducible(rep)
    if irr.status != "irreducible":
        chain = ", ".join(f"{w}:{t:.6g}" for w, t in scan.decreasing_chain)
        return Inconclusive(f"representation is {irr.status} ({irr.diagnostic}); "
                            f"decreasing translation lengths {chain}", [],
                            {"decreasing_chain": scan.decreasing_chain})
    if scan.non_loxodromic:
        w = scan.non_loxodromic[0]
        return Inconclusive(f"Q-condition (1) fails at word {w}", [],
                            {"decreasing_chain": scan.decreasing_chain})
    oracle = EndpointOracle(rep)
    N, rule = threshold_level(scan, lam, _geom_min(rep, oracle, max_level))
    if N is None:
        return Inconclusive(rule["reason"], [], {})
    if N > max_level:
        return Inconclusive(f"threshold level {N} exceeds max_level {max_level}",
                            [e.address for e in edges_at_level(max_level)], {"threshold_rule": rule})
    if rule["N_lambda"] > scan_level:
        return Inconclusive("words below lambda_eff reach the scan depth", [], {"threshold_rule": rule})
    o = base_points(rep)["L"]

    closures, open_edges = [], []
    layer = list(enumerate_edges(0))
    for lv in range(max_level + 1):
        if lv < N:
            layer = [c for e in layer for c in e.children()]
            continue
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as ex:
                results = list(ex.map(lambda e: _examine(rep, oracle, e), layer))
        else:
            results = [_examine(rep, oracle, e) for e in layer]
        nxt = []
        for edge, geom, po, err in results:
            if geom is not None and po.passed and geom.narrow and geom.hems_disjoint:
                qc = quasi_constants(geom, po.witness, po.point, rep)
                closures.append(Closure(edge.address, edge.level, po.candidate, po.witness.normal,
                                        po.point, qc, dist_points(o, po.point), po.margin))
            elif lv < max_level:
                nxt.extend(edge.children())
            else:
                open_edges.append(edge)
        layer = nxt
        if not layer:
            break
    if open_edges:
        return Inconclusive("property O or heredity conditions not met by max_level",
                            [e.address for e in open_edges], {"threshold_rule": rule})

    level = max(cl.level for cl in closures)
    by_addr = {cl.address: cl for cl in closures}
    frontier = []
    for e in enumerate_edges(level):
        if e.level != level:
            continue
        a = e.address
        anc = next(a[:k] for k in range(len(a), 0, -1) if a[:k] in by_addr)
        cl = by_addr[anc]
        frontier.append(FrontierEntry(a, anc, cl.constants.m, cl.constants.c + 2.0 * cl.r))
    low = [word_constants(rep, w, o, lv, oracle) for lv, _, w in vertices(level - 1)] if level > 0 else []
    m = min([w.m for w in low] + [f.m for f in frontier])
    c = max([w.c for w in low] + [f.c for f in frontier])
    spots = spot_check(rep, closures, seed, oracle)
    return Certificate(level, N, rule, frontier, closures, low, o, m, c, rule["lambda_eff"],
                       scan.primsys_lower, spots)


def spot_check(rep: RepF2, closures, seed: int, oracle=None, count: int = 3, depth: int = 3) -> list:
    """Narrowness of random descendants of each closed edge."""
    rng = np.random.default_rng(seed)
    out = []
    for cl in closures:
        sign = 1 if cl.address[0] == "+" else -1
        for _ in range(count):
            path = "".join(rng.choice(["L", "R"], size=depth))
            e = edge_from_gallery(cl.address[1:] + path, sign)
            try:
                narrow = edge_geometry(rep, e, oracle).narrow
            except DomainError:
                narrow = False
            out.append({"closed": cl.address, "descendant": e.address, "narrow": bool(narrow)})
    return out


# Validation -----------------------------------------------------------------

def _segment_distances(letters, period: list, max_len: int) -> np.ndarray:
    """d(o, rho(w_r .. w_(r+l-1)) o) for every start r in the period and length 1..max_len.

    Products are rescaled as they grow and the log of the scale is carried,
    so long segments do not overflow.
    """
    n = len(period)
    mats = np.stack([letters[ch] for ch in period])
    dim = mats.shape[1]
    P = np.broadcast_to(np.eye(dim), (n, dim, dim)).copy()
    logs = np.zeros(n)
    out = np.empty((n, max_len))
    idx = np.arange(n)
    for ell in range(1, max_len + 1):
        P = P @ mats[(idx + ell - 1) % n]
        s = np.max(np.abs(P), axis=(1, 2))
        P /= s[:, None, None]
        logs += np.log(s)
        top = P[:, -1, -1]
        big = logs + np.log(top) > 20.0
        with np.errstate(over="ignore"):
            ch = np.where(big, 1.0, top * np.exp(np.minimum(logs, 700.0)))
        out[:, ell - 1] = np.where(big, logs + np.log(2.0 * top), np.arccosh(np.maximum(ch, 1.0)))
    return out


@dataclass
class ValidationReport:
    n_words: int
    n_checks: int
    violations: list
    worst_margin: float


def random_primitive_words(n_words: int, max_word_length: int, seed: int) -> list:
    """Christoffel words from random galleries, with cyclic length <= max_word_length."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n_words:
        sign = 1 if rng.random() < 0.5 else -1
        depth = int(rng.integers(0, max_word_length))
        e = edge_from_gallery("", sign)
        word = None
        for _ in range(depth + 1):
            w = e.new_word()
            if len(w) > max_word_length:
                break
            word = w
            e = e.child("L" if rng.random() < 0.5 else "R")
        if word is None:
            word = e.basis[int(rng.integers(0, 2))]
        out.append(word)
    return out


def validate_certificate(cert: Certificate, rep: RepF2, n_words: int = 1000,
                         max_word_length: int = 40, seed: int = 0) -> ValidationReport:
    """Check m d_e(u, v) - c <= d(rho(u) o, rho(v) o) on axis windows of sampled words.

    The window has radius |w|, so every pair of points within two periods is
    tested; trans(rho(w)) >= m |w| - c is checked as well.
    """
    words = random_primitive_words(n_words, max_word_length, seed)
    o = np.asarray(cert.base, dtype=float)
    # rho(u) o versus rho(v) o only depends on the letters between u and v, and
    # distances from o are what the segment table stores.
    base = rep.letters()
    h = _to_origin(o)
    hi = lorentz_inverse(h)
    letters = {k: hi @ v @ h for k, v in base.items()}
    violations, checks, worst = [], 0, np.inf
    for w in words:
        win = axis_window(w, len(w))
        core = win.center
        n = len(core)
        dist = _segment_distances(letters, list(core), 2 * n)
        ell = np.arange(1, 2 * n + 1)
        slack = dist - (cert.m * ell - cert.c)[None, :]
        checks += slack.size
        k = np.unravel_index(int(np.argmin(slack)), slack.shape)
        worst = min(worst, float(slack[k]))
        if slack[k] < 0:
            violations.append({"word": w, "start": int(k[0]), "length": int(k[1] + 1),
                               "distance": float(dist[k]), "bound": float(cert.m * (k[1] + 1) - cert.c)})
        _, t, _ = _trans_with_error(rep.image(core), TOL_CLASS)
        checks += 1
        if t < cert.m * n - cert.c:
            violations.append({"word": w, "trans": t, "bound": cert.m * n - cert.c})
        worst = min(worst, t - (cert.m * n - cert.c))
    return ValidationReport(len(words), checks, violations, worst)


def _to_origin(o: np.ndarray) -> np.ndarray:
    """An isometry sending the model origin to o."""
    d = o.shape[0] - 1
    sp = o[:-1]
    r = float(np.arccosh(max(float(o[-1]), 1.0)))
    if r == 0.0:
        return np.eye(d + 1)
    return boost_along(sp, r)


# Displacement probe ---------------------------------------------------------

@dataclass
class DisplacementFit:
    K_hat: float
    c_hat: float
    table: list     # (word, cyclic length, trans)


def primitive_displacement_probe(rep: RepF2, max_level: int) -> DisplacementFit:
    """Line K n - c under every point (|w|, trans) of the Christoffel words.

    The slope is the least-squares slope through the per-length minima; c
    is then the smallest shift putting the line under all points. A
    diagnostic, not a bound.
    """
    table = []
    for lv, _, w in vertices(max_level):
        kind, t, _ = _trans_with_error(rep.image(w), TOL_CLASS)
        table.append((w, len(w), t))
    mins = {}
    for _, n, t in table:
        mins[n] = min(mins.get(n, np.inf), t)
    xs = np.array(sorted(mins), dtype=float)
    ys = np.array([mins[k] for k in sorted(mins)])
    if len(xs) == 1:
        K = float(ys[0] / xs[0])
    else:
        K = float(np.polyfit(xs, ys, 1)[0])
    K = max(K, 0.0)
    c = max(0.0, float(np.max(K * np.array([n for _, n, _ in table]) - np.array([t for _, _, t in table]))))
    return DisplacementFit(K, c, table)
