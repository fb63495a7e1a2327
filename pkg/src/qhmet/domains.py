"""Domain catalog with exact or projected boundary-distance oracles.

Supported domains: balls in R^n, punctured space, the planar diamond
|x| + |y| < 1, planar superellipses |x|^s + |y|^s < 1 with 0 < s <= 1,
and a punctured variant of any base domain.  Every domain exposes the
Euclidean distance to its own boundary (``delta``), which is the only
geometric quantity the hyperbolic-type metrics need.

Scalar ``delta`` is exact (closed form) everywhere except superellipses
with s < 1, where the nearest boundary point is found by projection
(coarse parameter scan, golden-section, Newton polish; absolute error
<= 1e-10).  ``delta_batch`` serves the numeric solver and level-set
tracer with vectorised evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
import numpy as np

from .errors import DomainMembershipError, UnsupportedPairError

SQRT2 = math.sqrt(2.0)

# Strict-interiority slack: points closer than this to the boundary are
# treated as non-interior so downstream 1/delta integrands stay finite.
INTERIOR_TOL = 1e-12


def as_point(p) -> np.ndarray:
    """Coerce to a finite 1-D float vector of dimension >= 2."""
    q = np.asarray(p, dtype=float)
    if q.ndim != 1 or q.size < 2:
        raise ValueError(f"point must be a vector of dimension >= 2, got {p!r}")
    if not np.all(np.isfinite(q)):
        raise ValueError(f"point has non-finite entries: {p!r}")
    return q


@dataclass(frozen=True)
class DistanceToBoundary:
    """Boundary distance plus provenance of the value.

    ``value`` is 0.0 whenever the query point is not interior; ``exactness``
    is ``"closed-form"`` or ``"projected"``.
    """

    value: float
    exactness: str
    interior: bool


class Domain:
    """A proper subdomain of R^n with a boundary-distance oracle."""

    convex = False
    bounded = True
    exactness = "closed-form"

    @property
    def dim(self) -> int | None:
        """Ambient dimension, or None when any dimension >= 2 works."""
        return 2

    def contains(self, p) -> bool:
        raise NotImplementedError

    def delta(self, p) -> float:
        """Distance from p to the boundary; 0.0 when p is not interior."""
        raise NotImplementedError

    def delta_batch(self, pts: np.ndarray) -> np.ndarray:
        """Vectorised delta for an (N, d) array; 0.0 on non-interior rows."""
        raise NotImplementedError

    def contains_batch(self, pts: np.ndarray) -> np.ndarray:
        """Vectorised interiority; cheap (no projection) for every domain."""
        return self.delta_batch(pts) > 0.0

    def delta_batch_fast(self, pts: np.ndarray) -> np.ndarray:
        """Possibly approximate vectorised delta for move decisions inside
        the numeric solver; exact for every domain with a closed form."""
        return self.delta_batch(pts)

    def diameter(self) -> float:
        raise NotImplementedError

    def spec_string(self) -> str:
        """Compact text form understood by :func:`parse_domain`."""
        raise NotImplementedError

    def _check_dim(self, p: np.ndarray) -> np.ndarray:
        if self.dim is not None and p.shape[-1] != self.dim:
            raise ValueError(
                f"{type(self).__name__} is {self.dim}-dimensional, "
                f"got a point of dimension {p.shape[-1]}"
            )
        return p

    def require_interior(self, p) -> np.ndarray:
        q = self._check_dim(as_point(p))
        if not self.contains(q):
            raise DomainMembershipError(f"point {q.tolist()} is not interior to {self}")
        return q

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return self.spec_string()


def _fmt(x: float) -> str:
    return format(float(x), "g")


@dataclass(frozen=True, repr=False)
class Ball(Domain):
    """Open Euclidean ball B(center, radius), any dimension >= 2."""

    center: tuple[float, ...] = (0.0, 0.0)
    radius: float = 1.0

    convex = True

    def __post_init__(self):
        c = tuple(float(v) for v in self.center)
        if len(c) < 2:
            raise ValueError("ball center must have dimension >= 2")
        if not (self.radius > 0):
            raise ValueError("ball radius must be positive")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def c(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float)

    def contains(self, p) -> bool:
        q = self._check_dim(as_point(p))
        return self.radius - np.linalg.norm(q - self.c) > INTERIOR_TOL

    def delta(self, p) -> float:
        q = self._check_dim(as_point(p))
        d = self.radius - float(np.linalg.norm(q - self.c))
        return d if d > INTERIOR_TOL else 0.0

    def delta_batch(self, pts: np.ndarray) -> np.ndarray:
        d = self.radius - np.linalg.norm(pts - self.c, axis=-1)
        return np.where(d > INTERIOR_TOL, d, 0.0)

    def diameter(self) -> float:
        return 2.0 * self.radius

    def spec_string(self) -> str:
        coords = ",".join(_fmt(v) for v in self.center)
        return f"ball:{coords},{_fmt(self.radius)}"


@dataclass(frozen=True, repr=False)
class PuncturedSpace(Domain):
    """All of R^n minus one point; delta is the distance to the puncture."""

    puncture: tuple[float, ...] = (0.0, 0.0)

    convex = False
    bounded = False

    def __post_init__(self):
        c = tuple(float(v) for v in self.puncture)
        if len(c) < 2:
            raise ValueError("puncture must have dimension >= 2")
        object.__setattr__(self, "puncture", c)

    @property
    def dim(self) -> int:
        return len(self.puncture)

    @property
    def p0(self) -> np.ndarray:
        return np.asarray(self.puncture, dtype=float)

    def contains(self, p) -> bool:
        q = self._check_dim(as_point(p))
        return float(np.linalg.norm(q - self.p0)) > INTERIOR_TOL

    def delta(self, p) -> float:
        q = self._check_dim(as_point(p))
        d = float(np.linalg.norm(q - self.p0))
        return d if d > INTERIOR_TOL else 0.0

    def delta_batch(self, pts: np.ndarray) -> np.ndarray:
        d = np.linalg.norm(pts - self.p0, axis=-1)
        return np.where(d > INTERIOR_TOL, d, 0.0)

    def diameter(self) -> float:
        return math.inf

    def spec_string(self) -> str:
        if all(v == 0.0 for v in self.puncture):
            return "punctured"
        return "punctured:" + ",".join(_fmt(v) for v in self.puncture)


@dataclass(frozen=True, repr=False)
class Diamond(Domain):
    """Planar diamond |x| + |y| < 1 (the superellipse exponent-1 case)."""

    convex = True

    def contains(self, p) -> bool:
        q = self._check_dim(as_point(p))
        return 1.0 - abs(q[0]) - abs(q[1]) > INTERIOR_TOL

    def delta(self, p) -> float:
        q = self._check_dim(as_point(p))
        m = 1.0 - abs(q[0]) - abs(q[1])
        return m / SQRT2 if m > INTERIOR_TOL else 0.0

    def delta_batch(self, pts: np.ndarray) -> np.ndarray:
        m = 1.0 - np.abs(pts[..., 0]) - np.abs(pts[..., 1])
        return np.where(m > INTERIOR_TOL, m / SQRT2, 0.0)

    def diameter(self) -> float:
        return 2.0

    def spec_string(self) -> str:
        return "diamond"


@dataclass(frozen=True, repr=False)
class Superellipse(Domain):
    """Planar region |x|^s + |y|^s < 1 for 0 < s <= 1.

    s = 1 is the diamond (delta agrees with :class:`Diamond` exactly);
    for s < 1 the region is star-shaped but not convex and delta is
    computed by projecting onto the boundary curve.
    """

    s: float = 1.0

    def __post_init__(self):
        s = float(self.s)
        if not (0.0 < s <= 1.0):
            raise ValueError(f"superellipse exponent must lie in (0, 1], got {s}")
        object.__setattr__(self, "s", s)

    @property
    def convex(self) -> bool:  # type: ignore[override]
        return self.s == 1.0

    @property
    def exactness(self) -> str:  # type: ignore[override]
        return "closed-form" if self.s == 1.0 else "projected"

    def _level(self, pts: np.ndarray) -> np.ndarray:
        a = np.abs(pts)
        return a[..., 0] ** self.s + a[..., 1] ** self.s

    def contains(self, p) -> bool:
        q = self._check_dim(as_point(p))
        return 1.0 - float(self._level(q)) > INTERIOR_TOL

    def delta(self, p) -> float:
        q = self._check_dim(as_point(p))
        if not self.contains(q):
            return 0.0
        if self.s == 1.0:
            return (1.0 - abs(q[0]) - abs(q[1])) / SQRT2
        _, dist = project_to_superellipse(self.s, q)
        return dist

    def contains_batch(self, pts: np.ndarray) -> np.ndarray:
        return 1.0 - self._level(pts) > INTERIOR_TOL

    def delta_batch(self, pts: np.ndarray) -> np.ndarray:
        inside = 1.0 - self._level(pts) > INTERIOR_TOL
        if self.s == 1.0:
            m = 1.0 - np.abs(pts[..., 0]) - np.abs(pts[..., 1])
            return np.where(inside, m / SQRT2, 0.0)
        d = _se_batch_distance(self.s, np.atleast_2d(pts))
        d = d.reshape(np.shape(inside))
        return np.where(inside, d, 0.0)

    def delta_batch_fast(self, pts: np.ndarray) -> np.ndarray:
        if self.s == 1.0:
            return self.delta_batch(pts)
        inside = 1.0 - self._level(pts) > INTERIOR_TOL
        d = _se_fast_distance(self.s, np.atleast_2d(pts))
        d = d.reshape(np.shape(inside))
        return np.where(inside, d, 0.0)

    def diameter(self) -> float:
        # Extreme points are the axis vertices +-e1, +-e2 for every s.
        return 2.0

    def spec_string(self) -> str:
        return f"superellipse:{_fmt(self.s)}"


@dataclass(frozen=True, repr=False)
class Punctured(Domain):
    """A base domain minus one interior point."""

    base: Domain = None  # type: ignore[assignment]
    point: tuple[float, ...] = (0.0, 0.0)

    convex = False

    def __post_init__(self):
        pt = tuple(float(v) for v in self.point)
        object.__setattr__(self, "point", pt)
        if self.base is None or not isinstance(self.base, Domain):
            raise ValueError("punctured domain needs a base Domain")
        if not self.base.contains(pt):
            raise ValueError(f"puncture {pt} is not interior to base {self.base}")

    @property
    def dim(self) -> int | None:
        return self.base.dim

    @property
    def bounded(self) -> bool:  # type: ignore[override]
        return self.base.bounded

    @property
    def exactness(self) -> str:  # type: ignore[override]
        return self.base.exactness

    @property
    def pt(self) -> np.ndarray:
        return np.asarray(self.point, dtype=float)

    def contains(self, p) -> bool:
        q = as_point(p)
        return (
            self.base.contains(q)
            and float(np.linalg.norm(q - self.pt)) > INTERIOR_TOL
        )

    def delta(self, p) -> float:
        q = as_point(p)
        if not self.contains(q):
            return 0.0
        return min(self.base.delta(q), float(np.linalg.norm(q - self.pt)))

    def delta_batch(self, pts: np.ndarray) -> np.ndarray:
        db = self.base.delta_batch(pts)
        dp = np.linalg.norm(pts - self.pt, axis=-1)
        d = np.minimum(db, dp)
        return np.where((db > 0.0) & (dp > INTERIOR_TOL), d, 0.0)

    def contains_batch(self, pts: np.ndarray) -> np.ndarray:
        dp = np.linalg.norm(pts - self.pt, axis=-1)
        return self.base.contains_batch(pts) & (dp > INTERIOR_TOL)

    def delta_batch_fast(self, pts: np.ndarray) -> np.ndarray:
        db = self.base.delta_batch_fast(pts)
        dp = np.linalg.norm(pts - self.pt, axis=-1)
        d = np.minimum(db, dp)
        return np.where((db > 0.0) & (dp > INTERIOR_TOL), d, 0.0)

    def diameter(self) -> float:
        return self.base.diameter()

    def spec_string(self) -> str:
        if isinstance(self.base, Ball):
            coords = ",".join(_fmt(v) for v in self.base.center)
            pts = ",".join(_fmt(v) for v in self.point)
            return f"punctured-ball:{coords},{_fmt(self.base.radius)},{pts}"
        return f"punctured[{self.base.spec_string()}]:" + ",".join(
            _fmt(v) for v in self.point
        )


# ---------------------------------------------------------------------------
# Superellipse boundary projection
# ---------------------------------------------------------------------------

def superellipse_boundary(s: float, thetas: np.ndarray) -> np.ndarray:
    """First-quadrant boundary points (cos t)^(2/s), (sin t)^(2/s)."""
    e = 2.0 / s
    c = np.clip(np.cos(thetas), 0.0, 1.0)
    sn = np.clip(np.sin(thetas), 0.0, 1.0)
    return np.stack([c**e, sn**e], axis=-1)


def project_to_superellipse(s: float, p) -> tuple[np.ndarray, float]:
    """Nearest point q on |x|^s + |y|^s = 1 to p, and the distance |p - q|.

    Reduces to the first quadrant by symmetry, scans the parameterisation
    q(t) = (cos^(2/s) t, sin^(2/s) t) coarsely, refines the bracket by
    golden-section, then polishes the stationarity condition with Newton
    steps (skipped near the axis cusps where the parameterisation stalls).
    """
    s = float(s)
    if not (0.0 < s <= 1.0):
        raise ValueError(f"superellipse exponent must lie in (0, 1], got {s}")
    q = as_point(p)
    if q.size != 2:
        raise ValueError("superellipse projection is planar")
    signs = np.where(q >= 0, 1.0, -1.0)
    a = np.abs(q)

    thetas = np.linspace(0.0, math.pi / 2, 129)
    pts = superellipse_boundary(s, thetas)
    d2 = ((pts - a) ** 2).sum(axis=1)
    i = int(np.argmin(d2))
    lo = thetas[max(i - 1, 0)]
    hi = thetas[min(i + 1, len(thetas) - 1)]

    f = lambda t: float(((superellipse_boundary(s, np.array([t]))[0] - a) ** 2).sum())
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(70):
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = f(x2)
        if hi - lo < 1e-14:
            break
    t = 0.5 * (lo + hi)

    # Newton polish of g(t) = (q(t)-a) . q'(t) = 0, using a central-difference
    # derivative of g; the cusps at t = 0, pi/2 have q' -> 0, skip there.
    if 1e-3 < t < math.pi / 2 - 1e-3:
        e = 2.0 / s
        for _ in range(4):
            ct, st = math.cos(t), math.sin(t)
            qx, qy = ct**e, st**e
            dqx = -e * ct ** (e - 1.0) * st
            dqy = e * st ** (e - 1.0) * ct
            g = (qx - a[0]) * dqx + (qy - a[1]) * dqy
            h = 1e-7
            gp = _se_station(s, t + h, a) - _se_station(s, t - h, a)
            if gp == 0.0:
                break
            step = g / (gp / (2 * h))
            if not math.isfinite(step) or abs(step) > 1e-2:
                break
            t -= step
            t = min(max(t, 0.0), math.pi / 2)

    qb = superellipse_boundary(s, np.array([t]))[0]
    dist = float(np.hypot(qb[0] - a[0], qb[1] - a[1]))
    # Guard: the coarse scan minimum can only be beaten marginally; keep the
    # better of the two in case the polish wandered.
    if d2[i] < dist * dist:
        qb = pts[i]
        dist = math.sqrt(float(d2[i]))
    return signs * qb, dist


def _se_station(s: float, t: float, a: np.ndarray) -> float:
    e = 2.0 / s
    ct, st = math.cos(t), math.sin(t)
    ct = max(ct, 0.0)
    st = max(st, 0.0)
    qx, qy = ct**e, st**e
    dqx = -e * ct ** (e - 1.0) * st if ct > 0 else 0.0
    dqy = e * st ** (e - 1.0) * ct if st > 0 else 0.0
    return (qx - a[0]) * dqx + (qy - a[1]) * dqy


_SE_FIELD_N = 768
_SE_FIELDS: dict[float, np.ndarray] = {}


def _se_field(s: float) -> np.ndarray:
    """Cached first-quadrant boundary-distance samples on a uniform grid."""
    f = _SE_FIELDS.get(s)
    if f is None:
        g = np.linspace(0.0, 1.0, _SE_FIELD_N + 1)
        X, Y = np.meshgrid(g, g, indexing="ij")
        P = np.stack([X.ravel(), Y.ravel()], axis=1)
        f = _se_batch_distance(s, P).reshape(_SE_FIELD_N + 1, _SE_FIELD_N + 1)
        _SE_FIELDS[s] = f
    return f


def _se_fast_distance(s: float, pts: np.ndarray) -> np.ndarray:
    """Hybrid boundary distance: bilinear field lookup away from the
    boundary (~1e-6 absolute there), exact projection inside the thin
    layer where interpolation straddles the distance function's kinks.

    Good enough for move decisions and graph seeding inside the numeric
    solver (positional noise enters path lengths at second order); exact
    values always come from :func:`_se_batch_distance`.
    """
    f = _se_field(s)
    a = np.clip(np.abs(pts), 0.0, 1.0) * _SE_FIELD_N
    i = np.minimum(a[:, 0].astype(np.intp), _SE_FIELD_N - 1)
    j = np.minimum(a[:, 1].astype(np.intp), _SE_FIELD_N - 1)
    u = a[:, 0] - i
    v = a[:, 1] - j
    out = (
        f[i, j] * (1 - u) * (1 - v)
        + f[i + 1, j] * u * (1 - v)
        + f[i, j + 1] * (1 - u) * v
        + f[i + 1, j + 1] * u * v
    )
    near = out < 0.01
    if np.any(near):
        out[near] = _se_batch_distance(s, pts[near])
    return out


def _se_batch_distance(s: float, pts: np.ndarray) -> np.ndarray:
    """Vectorised distance from (N,2) points to the superellipse boundary.

    Coarse parameter scan plus golden-section on |p - q(theta)|^2, all in
    lockstep across the batch; the squared objective is unimodal, so this
    is the same scheme as the scalar projector at slightly lower depth.
    """
    e = 2.0 / s
    a = np.abs(pts)

    def f(theta):
        c = np.cos(theta)
        sn = np.sin(theta)
        return (np.clip(c, 0, 1) ** e - a[:, 0]) ** 2 + (
            np.clip(sn, 0, 1) ** e - a[:, 1]
        ) ** 2

    grid = np.linspace(0.0, math.pi / 2, 17)
    vals = np.stack([f(np.full(len(a), t)) for t in grid])
    i = np.argmin(vals, axis=0)
    lo = grid[np.maximum(i - 1, 0)]
    hi = grid[np.minimum(i + 1, len(grid) - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1 = f(x1)
    f2 = f(x2)
    for _ in range(26):
        left = f1 < f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        x1n = np.where(left, hi - invphi * (hi - lo), x2)
        x2n = np.where(left, x1, lo + invphi * (hi - lo))
        fx = f(np.where(left, x1n, x2n))
        f1, f2 = np.where(left, fx, f2), np.where(left, f1, fx)
        x1, x2 = x1n, x2n
    return np.sqrt(np.minimum(f1, f2))


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------

def delta(domain: Domain, p) -> DistanceToBoundary:
    """Boundary-distance oracle with exactness and interiority flags."""
    q = domain._check_dim(as_point(p))
    interior = domain.contains(q)
    value = domain.delta(q) if interior else 0.0
    return DistanceToBoundary(value=value, exactness=domain.exactness, interior=interior)


def diam(domain: Domain) -> float:
    """Euclidean diameter of the domain (+inf when unbounded)."""
    return domain.diameter()


def boundary_points(domain: Domain, n: int = 10_000) -> np.ndarray:
    """n points tracing the boundary of a planar domain (corners included)."""
    if isinstance(domain, Ball):
        if domain.dim != 2:
            raise ValueError("boundary sampling is planar")
        t = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
        return domain.c + domain.radius * np.stack([np.cos(t), np.sin(t)], axis=1)
    if isinstance(domain, Diamond):
        domain = Superellipse(1.0)
    if isinstance(domain, Superellipse):
        m = max(n // 4, 2)
        t = np.linspace(0.0, math.pi / 2, m)
        q = superellipse_boundary(domain.s, t)
        quads = [q, q[::-1] * (-1, 1), q * (-1, -1), q[::-1] * (1, -1)]
        return np.concatenate(quads, axis=0)
    raise UnsupportedPairError(f"no boundary sampler for {domain}")


def dist_to_outer_boundary(inner: Domain, outer: Domain) -> tuple[float, str]:
    """inf |x - y| over x in closure(inner), y on the outer boundary.

    Closed form for ball-in-ball and ball-in-anything (delta at the center
    minus the radius); diamond-in-ball and superellipse-in-diamond fall back
    to a dense boundary discretisation, flagged as ``"discretized"``.
    """
    if isinstance(inner, Ball) and isinstance(outer, Ball):
        off = float(np.linalg.norm(inner.c - outer.c))
        return max(0.0, outer.radius - inner.radius - off), "closed-form"
    if isinstance(inner, Ball) and isinstance(outer, Diamond):
        return max(0.0, outer.delta(inner.c) - inner.radius), "closed-form"
    if isinstance(inner, Diamond) and isinstance(outer, Ball):
        bp = boundary_points(inner, 10_000)
        gaps = outer.radius - np.linalg.norm(bp - outer.c, axis=1)
        return max(0.0, float(gaps.min())), "discretized"
    if isinstance(inner, Superellipse) and isinstance(outer, Diamond):
        bp = boundary_points(inner, 10_000)
        gaps = (1.0 - np.abs(bp[:, 0]) - np.abs(bp[:, 1])) / SQRT2
        return max(0.0, float(gaps.min())), "discretized"
    raise UnsupportedPairError(
        f"unsupported inner/outer pair: {type(inner).__name__} in {type(outer).__name__}"
    )


# ---------------------------------------------------------------------------
# Text round-trip used by the CLI
# ---------------------------------------------------------------------------

def parse_domain(text: str) -> Domain:
    """Parse the compact text form, e.g. ``ball:0,0,1`` or ``superellipse:0.5``."""
    body = text.strip()
    name, _, args = body.partition(":")
    name = name.lower()
    try:
        vals = [float(v) for v in args.split(",")] if args else []
        if name == "ball":
            if len(vals) < 3:
                raise ValueError("ball needs cx,cy,...,r")
            return Ball(center=tuple(vals[:-1]), radius=vals[-1])
        if name == "punctured":
            if not vals:
                return PuncturedSpace((0.0, 0.0))
            if len(vals) < 2:
                raise ValueError("punctured needs px,py")
            return PuncturedSpace(tuple(vals))
        if name == "diamond":
            if vals:
                raise ValueError("diamond takes no parameters")
            return Diamond()
        if name == "superellipse":
            if len(vals) != 1:
                raise ValueError("superellipse needs a single exponent")
            return Superellipse(vals[0])
        if name == "punctured-ball":
            if len(vals) < 5:
                raise ValueError("punctured-ball needs cx,cy,r,px,py")
            dim = (len(vals) - 1) // 2
            center, r, pt = vals[:dim], vals[dim], vals[dim + 1 :]
            if len(pt) != dim:
                raise ValueError("punctured-ball center/puncture dimension mismatch")
            return Punctured(base=Ball(tuple(center), r), point=tuple(pt))
    except UnsupportedPairError:
        raise
    except ValueError as exc:
        raise ValueError(f"bad domain spec {text!r}: {exc}") from exc
    raise ValueError(f"unknown domain spec {text!r}")


def format_domain(domain: Domain) -> str:
    return domain.spec_string()
