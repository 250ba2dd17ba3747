"""Explicit isometries: boosts, rotations, reflections, null rotations and
random elements of SO+(d, 1), plus the representations used as fixtures."""

from __future__ import annotations

import numpy as np

from .minkowski import form_matrix, inner, lorentz_inverse


def boost(d: int, t: float, i: int | None = None) -> np.ndarray:
    """Translation by t along the coordinate geodesic of axis i (default the last spatial one).

    Attracting fixed point +e_i, repelling -e_i.
    """
    i = d - 1 if i is None else i
    m = np.eye(d + 1)
    c, s = np.cosh(t), np.sinh(t)
    m[i, i] = m[d, d] = c
    m[i, d] = m[d, i] = s
    return m


def boost_along(u, t: float) -> np.ndarray:
    """Translation by t through the origin in the unit spatial direction u."""
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    d = u.shape[0]
    m = np.eye(d + 1)
    m[:d, :d] += (np.cosh(t) - 1.0) * np.outer(u, u)
    m[:d, d] = np.sinh(t) * u
    m[d, :d] = np.sinh(t) * u
    m[d, d] = np.cosh(t)
    return m


def rotation(d: int, theta: float, i: int = 0, j: int = 1) -> np.ndarray:
    m = np.eye(d + 1)
    c, s = np.cos(theta), np.sin(theta)
    m[i, i] = m[j, j] = c
    m[i, j], m[j, i] = -s, s
    return m


def reflection(n) -> np.ndarray:
    """Reflection in the hyperplane with unit spacelike normal n."""
    n = np.asarray(n, dtype=float)
    return np.eye(n.shape[0]) - 2.0 * np.outer(n, n) @ form_matrix(n.shape[0])


def hyperplane_normal(u, r: float) -> np.ndarray:
    """Normal of the hyperplane orthogonal to direction u at distance r from the origin.

    The positive side is the far side.
    """
    u = np.asarray(u, dtype=float)
    u = u / np.linalg.norm(u)
    return np.append(np.cosh(r) * u, np.sinh(r))


def null_rotation(d: int, s: float = 1.0) -> np.ndarray:
    """Unipotent parabolic fixing the ideal point e_(d-1) + e_d."""
    n = d + 1
    p = np.zeros(n)
    p[d - 1] = p[d] = 1.0
    v = np.zeros(n)
    v[0] = 1.0
    J = form_matrix(n)
    N = s * (np.outer(v, J @ p) - np.outer(p, J @ v))
    return np.eye(n) + N + 0.5 * N @ N


def random_rotation(rng, d: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    m = np.eye(d + 1)
    m[:d, :d] = q
    return m


def random_isometry(rng, d: int, scale: float = 1.0) -> np.ndarray:
    """Random element of SO+(d,1): rotation, boost of length up to scale, rotation."""
    u = rng.standard_normal(d)
    t = scale * rng.random()
    return random_rotation(rng, d) @ boost_along(u, t) @ random_rotation(rng, d)


def random_loxodromic(rng, d: int, ell_range=(0.5, 3.0), scale: float = 1.0) -> np.ndarray:
    """A conjugate of a boost composed with a rotation about its axis."""
    ell = rng.uniform(*ell_range)
    m = boost(d, ell)
    if d >= 3:
        m = m @ rotation(d, rng.uniform(-np.pi, np.pi), 0, 1)
    P = random_isometry(rng, d, scale)
    return P @ m @ lorentz_inverse(P)


def half_turn(d: int, i: int = 0) -> np.ndarray:
    """Rotation by pi in the plane of spatial coordinates i and d-1.

    It fixes the geodesic-orthogonal directions and swaps +-e_(d-1), so it
    sends the attracting point of boost(d, t) to the repelling one.
    """
    return rotation(d, np.pi, i, d - 1)


# Coxeter triples -----------------------------------------------------------

def random_coxeter_normals(rng, d: int, r_range=(0.8, 1.4), min_gap: float = 1.2, tries: int = 1000):
    """Three hyperplanes with pairwise disjoint outer half-spaces.

    Each is orthogonal to a random direction u_k at distance r_k from the
    origin; the outer sides (away from the origin) are pairwise disjoint with
    <n_i, n_j> < -min_gap.
    """
    for _ in range(tries):
        us = rng.standard_normal((3, d))
        rs = rng.uniform(*r_range, size=3)
        ns = [hyperplane_normal(u, r) for u, r in zip(us, rs)]
        if all(inner(ns[i], ns[j]) < -min_gap for i in range(3) for j in range(i + 1, 3)):
            return ns
    raise RuntimeError("could not place three ultraparallel hyperplanes")


def coxeter_triple(normals, conj=None):
    ref = [reflection(n) for n in normals]
    if conj is not None:
        ref = [conj @ r @ lorentz_inverse(conj) for r in ref]
    return tuple(ref)


def random_coxeter_triple(rng, d: int, scale: float = 0.5):
    return coxeter_triple(random_coxeter_normals(rng, d), random_isometry(rng, d, scale))


# Fixtures ------------------------------------------------------------------

def fuchsian_coxeter_normals(trans: float = 6.0, gap: float = 3.0, d: int = 3):
    """Normals of three planes orthogonal to the slice {x_1 = ... = x_(d-2) = 0}.

    In that H^2 the line delta along x_0 is the mirror F_y. Two lines meet
    delta orthogonally at the points +-gap/2; F_x crosses the first at
    distance trans/2 on the +x_(d-1) side of delta, F_z crosses the second
    at the same distance on the other side. Then A = I_x I_y and B = I_y I_z
    translate by trans along those two lines, in the same direction, and
    delta is their common perpendicular.
    """
    n = d + 1
    ey = np.zeros(n)
    ey[d - 1] = 1.0
    e0 = np.zeros(d)
    e0[0] = 1.0
    up = np.zeros(d)
    up[d - 1] = 1.0
    nx = boost_along(e0, -gap / 2.0) @ hyperplane_normal(up, trans / 2.0)
    nz = boost_along(e0, gap / 2.0) @ hyperplane_normal(-up, trans / 2.0)
    return nx, ey, nz


def fuchsian_coxeter(trans: float = 6.0, gap: float = 3.0, d: int = 3):
    """Coxeter triple of reflections for the Fuchsian Schottky fixture."""
    return coxeter_triple(fuchsian_coxeter_normals(trans, gap, d))


def reducible_pair(trans_a: float = 5.0, trans_b: float = 3.0, d: int = 3, s: float = 1.0):
    """Loxodromics with A+ = B- and distinct other endpoints.

    A is the coordinate boost towards +e_(d-1); B is a null-rotation
    conjugate of the opposite boost, so both fix the ideal point +e_(d-1).
    """
    A = boost(d, trans_a)
    N = null_rotation(d, s)
    B = N @ boost(d, -trans_b) @ lorentz_inverse(N)
    return A, B
