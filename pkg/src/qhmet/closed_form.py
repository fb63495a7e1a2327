"""Closed-form metric values and named bound functions.

Exact formulas: the distance ratio metric j for any domain with a delta
oracle, the quasihyperbolic metric k of punctured space and along ball
radii/diameters, the hyperbolic metric of the unit ball, the enclosing
ball radius from the dimension-dependent diameter bound, the angular
bound function h, Euclidean lower bounds for k and j on bounded domains,
and the matching moduli of continuity.
"""

from __future__ import annotations

import math

import numpy as np

from .domains import Ball, Domain, as_point
from .errors import AlignmentError, DomainMembershipError

# Collinearity slack for the radial/diametral ball formulas; callers are
# expected to pass analytically aligned points.
ALIGNMENT_TOL = 1e-10


def j_metric(domain: Domain, x, y) -> float:
    """Distance ratio metric: log(1 + |x-y| / min(delta(x), delta(y)))."""
    xp = domain.require_interior(x)
    yp = domain.require_interior(y)
    d = float(np.linalg.norm(xp - yp))
    if d == 0.0:
        return 0.0
    return math.log1p(d / min(domain.delta(xp), domain.delta(yp)))


def angle_at(vertex, a, b) -> float:
    """Angle at ``vertex`` between rays to a and b, in [0, pi].

    Uses the half-chord form 2*atan2(|u^ - v^|, |u^ + v^|), which stays
    accurate near both 0 and pi.
    """
    v = as_point(vertex)
    u1 = as_point(a) - v
    u2 = as_point(b) - v
    n1 = np.linalg.norm(u1)
    n2 = np.linalg.norm(u2)
    if n1 == 0.0 or n2 == 0.0:
        raise ValueError("angle undefined: a ray endpoint coincides with the vertex")
    u1 = u1 / n1
    u2 = u2 / n2
    return 2.0 * math.atan2(float(np.linalg.norm(u1 - u2)), float(np.linalg.norm(u1 + u2)))


def k_punctured(x, y, puncture=(0.0, 0.0)) -> float:
    """Quasihyperbolic distance in space punctured at one point.

    sqrt(alpha^2 + log^2(|x-p| / |y-p|)) with alpha the angle at the
    puncture p.
    """
    xp = as_point(x)
    yp = as_point(y)
    p0 = as_point(puncture)
    rx = float(np.linalg.norm(xp - p0))
    ry = float(np.linalg.norm(yp - p0))
    if rx == 0.0 or ry == 0.0:
        raise DomainMembershipError("point coincides with the puncture")
    alpha = angle_at(p0, xp, yp)
    return math.hypot(alpha, math.log(rx / ry))


def _radial_positions(ball: Ball, u, v) -> tuple[np.ndarray, np.ndarray]:
    up = ball.require_interior(u)
    vp = ball.require_interior(v)
    w = up - ball.c
    z = vp - ball.c
    nw = float(np.linalg.norm(w))
    nz = float(np.linalg.norm(z))
    if nw > 0.0 and nz > 0.0:
        cross = np.linalg.norm(np.outer(w, z) - np.outer(z, w)) / math.sqrt(2.0)
        if cross > ALIGNMENT_TOL * nw * nz:
            raise AlignmentError("points are not collinear with the ball center")
    return w, z


def k_ball_radial(ball: Ball, u, v) -> float:
    """k (= j) for two points on one radius of a ball: |log(delta(u)/delta(v))|.

    Requires u, v and the center to be collinear with u, v on the same side
    (or one of them at the center).
    """
    w, z = _radial_positions(ball, u, v)
    if float(np.dot(w, z)) < -ALIGNMENT_TOL * ball.radius**2:
        raise AlignmentError("points lie on opposite sides of the center")
    du = ball.radius - float(np.linalg.norm(w))
    dv = ball.radius - float(np.linalg.norm(z))
    return abs(math.log(du / dv))


def k_ball_diameter(ball: Ball, u, v) -> float:
    """k for two points on a common diameter with the center between them.

    Quasihyperbolic distance is additive through the center:
    k(u, v) = k(u, center) + k(center, v).
    """
    w, z = _radial_positions(ball, u, v)
    if float(np.dot(w, z)) > ALIGNMENT_TOL * ball.radius**2:
        raise AlignmentError("center does not lie between the points")
    r = ball.radius
    return math.log(r / (r - float(np.linalg.norm(w)))) + math.log(
        r / (r - float(np.linalg.norm(z)))
    )


def ball_chord_t(x, y) -> tuple[float, float]:
    """(|x-y|, t) with t = sqrt((1-|x|^2)(1-|y|^2)) for unit-ball points."""
    xp = as_point(x)
    yp = as_point(y)
    nx = float(np.linalg.norm(xp))
    ny = float(np.linalg.norm(yp))
    if nx >= 1.0 or ny >= 1.0:
        raise DomainMembershipError("hyperbolic metric needs points inside the unit ball")
    chord = float(np.linalg.norm(xp - yp))
    t = math.sqrt((1.0 - nx * nx) * (1.0 - ny * ny))
    return chord, t


def rho_ball(x, y) -> float:
    """Hyperbolic metric of the unit ball: 2 arsinh(|x-y| / t)."""
    chord, t = ball_chord_t(x, y)
    return 2.0 * math.asinh(chord / t)


def rho_tanh_sq(x, y) -> float:
    """tanh^2(rho/2) in closed form: |x-y|^2 / (|x-y|^2 + t^2)."""
    chord, t = ball_chord_t(x, y)
    return chord * chord / (chord * chord + t * t)


def rho_chord_bound(x, y) -> float:
    """2 tanh(rho/4) = 2|x-y| / (sqrt(|x-y|^2 + t^2) + t); an upper bound
    for |x-y| with equality at x = -y."""
    chord, t = ball_chord_t(x, y)
    return 2.0 * chord / (math.hypot(chord, t) + t)


def jung_radius(diameter: float, n: int) -> float:
    """Radius sqrt(n / (2n+2)) * diameter of a ball enclosing any bounded
    set with the given diameter in dimension n."""
    if not (diameter > 0):
        raise ValueError("diameter must be positive")
    if n < 1:
        raise ValueError("dimension must be >= 1")
    return math.sqrt(n / (2.0 * n + 2.0)) * diameter


def h_alpha(alpha: float) -> float:
    """Angular bound factor alpha / log(1 + 2 sin(alpha/2)) on (0, pi].

    The 0/0 form at alpha -> 0+ evaluates to 1; below 1e-6 a 3-term series
    1 + a/2 - a^2/24 is used.
    """
    a = float(alpha)
    if not (0.0 < a <= math.pi):
        raise ValueError(f"alpha must lie in (0, pi], got {alpha}")
    if a < 1e-6:
        return 1.0 + a / 2.0 - a * a / 24.0
    return a / math.log1p(2.0 * math.sin(a / 2.0))


def k_euclid_lower_bound(dist: float, r: float) -> float:
    """2 log(2 / (2 - dist/r)): lower bound for k given an enclosing radius r."""
    t = dist / r
    if not (0.0 <= t < 2.0):
        raise ValueError("need 0 <= |x-y| < 2r")
    return 2.0 * math.log(2.0 / (2.0 - t))


def j_euclid_lower_bound(dist: float, r: float) -> float:
    """log((2+t)/(2-t)) = 2 artanh(t/2) with t = dist/r: lower bound for j."""
    t = dist / r
    if not (0.0 <= t < 2.0):
        raise ValueError("need 0 <= |x-y| < 2r")
    return 2.0 * math.atanh(t / 2.0)


def _enclosing_radius(domain: Domain) -> float:
    d = domain.diameter()
    if not math.isfinite(d):
        raise ValueError("lower bounds need a bounded domain")
    n = domain.dim if domain.dim is not None else 2
    return jung_radius(d, n)


def k_lower_bound_jung(domain: Domain, x, y, radius: float | None = None) -> float:
    """Euclidean lower bound for k on a bounded domain.

    ``radius`` overrides the enclosing radius (pass the ball's own radius
    when the domain is a ball, which is sharp); by default the
    dimension-dependent bound from the diameter is used.
    """
    xp = domain.require_interior(x)
    yp = domain.require_interior(y)
    r = radius if radius is not None else _enclosing_radius(domain)
    return k_euclid_lower_bound(float(np.linalg.norm(xp - yp)), r)


def j_lower_bound_jung(domain: Domain, x, y, radius: float | None = None) -> float:
    """Euclidean lower bound for j on a bounded domain (see k variant)."""
    xp = domain.require_interior(x)
    yp = domain.require_interior(y)
    r = radius if radius is not None else _enclosing_radius(domain)
    return j_euclid_lower_bound(float(np.linalg.norm(xp - yp)), r)


def modulus_k(t: float, r: float = 1.0) -> float:
    """Sharp modulus of continuity 2r(1 - e^(-t/2)): inverse of the k bound."""
    if t < 0 or r <= 0:
        raise ValueError("need t >= 0 and r > 0")
    return 2.0 * r * -math.expm1(-t / 2.0)


def modulus_j(t: float, r: float = 1.0) -> float:
    """Sharp modulus of continuity 2r tanh(t/2): inverse of the j bound."""
    if t < 0 or r <= 0:
        raise ValueError("need t >= 0 and r > 0")
    return 2.0 * r * math.tanh(t / 2.0)
