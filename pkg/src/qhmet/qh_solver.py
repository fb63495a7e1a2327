"""Numeric quasihyperbolic distances and geodesics for planar domains.

Pipeline: build a delta-adaptive node set over the domain (local spacing
proportional to h * delta), connect nearest neighbours into a weighted
graph (edge weight = quasihyperbolic segment length), run Dijkstra from
query to query, then relax the discrete path continuously (midpoint
subdivision plus per-vertex golden-section moves along the plane axes)
until successive refinement levels agree to relax_tol.

Graph paths always over-estimate the true distance, so the value
decreases monotonically across refinement levels; the error estimate is
the gap between the last two levels.

Meshes are cached per canonical domain (balls are rescaled to the unit
ball, punctures translated to the origin), so batch verification reuses
one graph per domain.  Punctured space gets a log-polar node set, which
is exactly uniform in the metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.spatial import cKDTree

from .domains import (
    Ball,
    Diamond,
    Domain,
    Punctured,
    PuncturedSpace,
    Superellipse,
    as_point,
    boundary_points,
)
from .errors import ConnectivityError, ContainmentError
from .quadrature import gauss_rule, polyline_length, segments_adaptive, segments_gauss

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MeshParams:
    """Resolution and tolerance knobs of the numeric solver.

    h: target ratio grid-spacing / delta (dimensionless, in (0, 1)).
    min_clearance: nodes with delta below this fraction of the domain
        scale are excluded; queries closer to the boundary are still fine,
        they connect by direct certified segments.
    neighbor_degree: 8 or 16 nearest-neighbour connectivity.
    quad_tol: absolute quadrature tolerance per edge.
    relax_tol: relative improvement threshold that stops path relaxation.
    max_subdivisions: cap on relaxation refinement levels.
    """

    h: float = 0.15
    min_clearance: float = 0.08
    neighbor_degree: int = 16
    quad_tol: float = 1e-8
    relax_tol: float = 1e-5
    max_subdivisions: int = 40

    def __post_init__(self):
        if not (0.0 < self.h < 1.0):
            raise ValueError("h must lie in (0, 1)")
        if self.neighbor_degree not in (8, 16):
            raise ValueError("neighbor_degree must be 8 or 16")
        if self.quad_tol <= 0 or self.relax_tol <= 0 or self.min_clearance <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_MESH_PARAMS = MeshParams()

# Relaxation constants: each level subdivides against a cap of half the
# current worst segment (down to _SEG_FLOOR), so every level genuinely
# refines and the level-to-level difference tracks the remaining error.
# Vertex moves bracket at _BRACKET x local clearance (Lipschitz-safe).
_SEG_FLOOR = 0.06
_BRACKET = 0.42
_GOLDEN_ITERS = 8
_MAX_VERTICES = 1300
_CONNECT_K = 24


@dataclass
class GeodesicResult:
    """Numeric quasihyperbolic distance with its geodesic polyline."""

    value: float
    path: np.ndarray
    error_estimate: float
    refinement_levels: int


# ---------------------------------------------------------------------------
# Canonicalisation and mesh cache
# ---------------------------------------------------------------------------

def _canonical(domain: Domain) -> tuple[Domain, np.ndarray, float]:
    """Map to a cached canonical frame: returns (domain', offset, scale)
    with p' = (p - offset) / scale.  The metric is similarity invariant."""
    if isinstance(domain, Ball):
        return Ball((0.0, 0.0), 1.0), domain.c, domain.radius
    if isinstance(domain, PuncturedSpace):
        return PuncturedSpace((0.0, 0.0)), domain.p0, 1.0
    if isinstance(domain, Punctured) and isinstance(domain.base, Ball):
        b = domain.base
        pt = (domain.pt - b.c) / b.radius
        return Punctured(Ball((0.0, 0.0), 1.0), tuple(pt)), b.c, b.radius
    return domain, np.zeros(2), 1.0


class DomainMesh:
    """Weighted neighbour graph over a delta-adaptive node set."""

    def __init__(self, domain: Domain, params: MeshParams, nodes: np.ndarray):
        self.domain = domain
        self.params = params
        order = np.lexsort((nodes[:, 1], nodes[:, 0]))
        self.nodes = nodes[order]
        self.tree = cKDTree(self.nodes)
        self.rows, self.cols, self.weights = _build_edges(domain, self.nodes, params)
        n = len(self.nodes)
        self.graph = csr_matrix((self.weights, (self.rows, self.cols)), shape=(n, n))


_MESH_CACHE: dict[tuple, DomainMesh] = {}


def clear_mesh_cache() -> None:
    _MESH_CACHE.clear()


def mesh_for(domain: Domain, params: MeshParams | None = None) -> DomainMesh:
    """Build (or fetch) the cached mesh for a bounded canonical domain."""
    params = params or DEFAULT_MESH_PARAMS
    key = (domain, params)
    mesh = _MESH_CACHE.get(key)
    if mesh is None:
        nodes = _graded_nodes(domain, params)
        mesh = DomainMesh(domain, params, nodes)
        _MESH_CACHE[key] = mesh
    return mesh


def _domain_scale(domain: Domain) -> float:
    if isinstance(domain, Ball):
        return domain.radius
    if isinstance(domain, Diamond):
        return 1.0 / math.sqrt(2.0)
    if isinstance(domain, Superellipse):
        return 2.0 ** (0.5 - 1.0 / domain.s)
    # probe coarsely (punctured bases etc.)
    g = np.linspace(-1.0, 1.0, 65)
    P = np.stack(np.meshgrid(g, g), axis=-1).reshape(-1, 2)
    return float(domain.delta_batch(P).max())


def _graded_nodes(domain: Domain, params: MeshParams) -> np.ndarray:
    """Node set with local spacing ~ h * delta, graded dyadically.

    Coarse levels enumerate a full lattice over the bounding box; fine
    levels (which would be huge lattices) enumerate only a tube around the
    boundary where their delta band lives.
    """
    scale = _domain_scale(domain)
    clear = params.min_clearance * scale
    d0 = params.h * scale
    n_levels = max(1, math.ceil(math.log2(1.0 / params.min_clearance))) + 1

    anchors = _tube_anchors(domain)
    kept = []
    for lev in range(n_levels + 1):
        spacing = d0 / 2.0**lev
        band_hi = 2.0 * spacing / params.h  # delta upper bound for this level
        if anchors is None or band_hi > 0.4 * scale:
            pts = _bbox_lattice(spacing)
        else:
            pts = _tube_lattice(anchors, spacing, band_hi + spacing)
        if len(pts) == 0:
            continue
        pts = pts[domain.contains_batch(pts)]
        if len(pts) == 0:
            continue
        dd = domain.delta_batch_fast(pts)
        target = params.h * dd
        if lev == 0:
            band = target >= spacing
        elif lev == n_levels:
            band = (target < 2.0 * spacing) & (dd >= clear)
        else:
            band = (target >= spacing) & (target < 2.0 * spacing)
        band &= dd >= clear
        kept.append(pts[band])
    nodes = np.concatenate([k for k in kept if len(k)], axis=0)
    if len(nodes) < 4:
        raise ConnectivityError(
            f"mesh for {domain} degenerated to {len(nodes)} nodes; decrease min_clearance"
        )
    return nodes


def _bbox_lattice(spacing: float) -> np.ndarray:
    lo = math.floor(-1.0 / spacing)
    hi = math.ceil(1.0 / spacing)
    if (hi - lo) > 4000:  # guard: fine levels must go through the tube path
        return np.empty((0, 2))
    g = np.arange(lo, hi + 1) * spacing
    return np.stack(np.meshgrid(g, g), axis=-1).reshape(-1, 2)


def _tube_anchors(domain: Domain) -> np.ndarray | None:
    """Points tracing every delta-relevant boundary feature."""
    base = domain.base if isinstance(domain, Punctured) else domain
    try:
        pts = boundary_points(base, 4096)
    except Exception:
        return None
    if isinstance(domain, Punctured):
        pts = np.concatenate([pts, domain.pt[None, :]], axis=0)
    return pts


def _tube_lattice(anchors: np.ndarray, spacing: float, width: float) -> np.ndarray:
    """Lattice points within ``width`` of the anchor polyline (superset)."""
    w = int(math.ceil(width / spacing)) + 2
    # subsample anchors so patches of radius w*spacing still cover the tube
    step_len = max(1.0, w / 3.0) * spacing
    keep = [0]
    acc = 0.0
    for i in range(1, len(anchors)):
        acc += float(np.linalg.norm(anchors[i] - anchors[i - 1]))
        if acc >= step_len:
            keep.append(i)
            acc = 0.0
    A = anchors[keep]
    base_ix = np.floor(A / spacing).astype(np.int64)
    offs = np.arange(-w, w + 1, dtype=np.int64)
    OX, OY = np.meshgrid(offs, offs)
    ox = OX.ravel()
    oy = OY.ravel()
    ix = (base_ix[:, 0][:, None] + ox[None, :]).ravel()
    iy = (base_ix[:, 1][:, None] + oy[None, :]).ravel()
    key = (ix + (1 << 30)) << 32 | (iy + (1 << 30))
    key = np.unique(key)
    ix = (key >> 32) - (1 << 30)
    iy = (key & ((1 << 32) - 1)) - (1 << 30)
    return np.stack([ix, iy], axis=1).astype(float) * spacing


def _build_edges(domain: Domain, nodes: np.ndarray, params: MeshParams):
    tree = cKDTree(nodes)
    k = min(params.neighbor_degree + 1, len(nodes))
    _, idx = tree.query(nodes, k=k)
    a = np.repeat(np.arange(len(nodes)), k - 1)
    b = idx[:, 1:].ravel()
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    key = np.unique(lo.astype(np.int64) * len(nodes) + hi)
    lo = key // len(nodes)
    hi = key % len(nodes)
    A, B = nodes[lo], nodes[hi]
    ok = _certify_batch(domain, A, B)
    lo, hi, A, B = lo[ok], hi[ok], A[ok], B[ok]
    w = segments_gauss(domain.delta_batch_fast, A, B, order=4)
    good = np.isfinite(w)
    lo, hi, w = lo[good], hi[good], w[good]
    rows = np.concatenate([lo, hi])
    cols = np.concatenate([hi, lo])
    weights = np.concatenate([w, w])
    return rows, cols, weights


def _certify_batch(domain: Domain, A: np.ndarray, B: np.ndarray, depth: int = 5) -> np.ndarray:
    """Interior certification of segments via the 1-Lipschitz property of
    delta: delta(mid) > |b-a|/2 guarantees containment; recurse otherwise.

    Segments still unresolved at the depth cap are rejected (fine for mesh
    edges, which are plentiful)."""
    if domain.convex:
        return np.ones(len(A), dtype=bool)
    bad = np.zeros(len(A), dtype=bool)
    ids = np.arange(len(A))
    A_, B_ = A, B
    for _ in range(depth):
        if len(ids) == 0:
            break
        m = 0.5 * (A_ + B_)
        dm = domain.delta_batch_fast(m)
        half = 0.5 * np.linalg.norm(B_ - A_, axis=1)
        dead = dm <= 0.0
        bad[ids[dead]] = True
        rem = ~dead & (dm <= half) & ~bad[ids]
        A_ = np.concatenate([A_[rem], m[rem]])
        B_ = np.concatenate([m[rem], B_[rem]])
        ids = np.concatenate([ids[rem], ids[rem]])
    if len(ids):
        bad[ids] = True
    return ~bad


def _certified_segment(domain: Domain, a: np.ndarray, b: np.ndarray) -> bool:
    """Scalar certification for query edges, with a dense fallback check."""
    if domain.convex:
        return True
    A = a[None, :]
    B = b[None, :]
    for _ in range(12):
        m = 0.5 * (A + B)
        dm = domain.delta_batch(m)
        if np.any(dm <= 0.0):
            return False
        half = 0.5 * np.linalg.norm(B - A, axis=1)
        rem = dm <= half
        if not np.any(rem):
            return True
        A = np.concatenate([A[rem], m[rem]])
        B = np.concatenate([m[rem], B[rem]])
        if len(A) > 512:
            break
    # unresolved slivers: dense sample
    t = np.linspace(0.0, 1.0, 129)[:, None]
    P = a[None, :] * (1 - t) + b[None, :] * t
    return bool(np.all(domain.delta_batch(P) > 0.0))


# ---------------------------------------------------------------------------
# Punctured space: log-polar node set (uniform in the metric)
# ---------------------------------------------------------------------------

def _log_polar_mesh(params: MeshParams, r_lo: float, r_hi: float) -> DomainMesh:
    pad = 0.75
    u0 = math.log(r_lo) - pad
    u1 = math.log(r_hi) + pad
    nu = max(int(math.ceil((u1 - u0) / params.h)) + 1, 4)
    nth = max(int(math.ceil(2.0 * math.pi / params.h)), 8)
    us = np.linspace(u0, u1, nu)
    ths = np.arange(nth) * (2.0 * math.pi / nth)
    U, T = np.meshgrid(us, ths)
    nodes = np.exp(U.ravel())[:, None] * np.stack(
        [np.cos(T.ravel()), np.sin(T.ravel())], axis=1
    )
    return DomainMesh(PuncturedSpace((0.0, 0.0)), params, nodes)


# ---------------------------------------------------------------------------
# Query: graph shortest path
# ---------------------------------------------------------------------------

def _connect_query(mesh: DomainMesh, p: np.ndarray):
    k = min(_CONNECT_K, len(mesh.nodes))
    _, idx = mesh.tree.query(p, k=k)
    idx = np.atleast_1d(idx)
    keep = []
    for i in idx:
        if _certified_segment(mesh.domain, p, mesh.nodes[i]):
            keep.append(i)
    if not keep:
        raise ConnectivityError("query point could not be linked to the mesh")
    keep = np.asarray(keep)
    w = segments_adaptive(
        mesh.domain.delta_batch,
        np.broadcast_to(p, (len(keep), 2)),
        mesh.nodes[keep],
        tol=mesh.params.quad_tol,
    )
    return keep, w


def graph_shortest_path(
    mesh: DomainMesh, x: np.ndarray, y: np.ndarray
) -> tuple[float, np.ndarray]:
    """Discrete shortest path x -> mesh -> y; value over-estimates true k."""
    n = len(mesh.nodes)
    xi, xw = _connect_query(mesh, x)
    yi, yw = _connect_query(mesh, y)
    rows = [mesh.rows, np.full(len(xi), n), xi, np.full(len(yi), n + 1), yi]
    cols = [mesh.cols, xi, np.full(len(xi), n), yi, np.full(len(yi), n + 1)]
    wts = [mesh.weights, xw, xw, yw, yw]
    if _certified_segment(mesh.domain, x, y):
        wxy = float(
            segments_adaptive(
                mesh.domain.delta_batch, x[None, :], y[None, :], tol=mesh.params.quad_tol
            )[0]
        )
        rows.append(np.array([n, n + 1]))
        cols.append(np.array([n + 1, n]))
        wts.append(np.array([wxy, wxy]))
    graph = csr_matrix(
        (np.concatenate(wts), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n + 2, n + 2),
    )
    dist, pred = dijkstra(graph, directed=True, indices=n, return_predecessors=True)
    if not np.isfinite(dist[n + 1]):
        raise ConnectivityError("query points lie in different mesh components")
    chain = [n + 1]
    while chain[-1] != n:
        chain.append(int(pred[chain[-1]]))
    chain.reverse()
    coords = [x] + [mesh.nodes[i] for i in chain[1:-1]] + [y]
    return float(dist[n + 1]), np.asarray(coords)


# ---------------------------------------------------------------------------
# Continuous path relaxation
# ---------------------------------------------------------------------------

def _pair_lengths(delta_batch, Pm, P, Pp, order: int = 4) -> np.ndarray:
    t, w = gauss_rule(order)
    n = len(P)
    A = np.concatenate([Pm, P])
    diff = np.concatenate([P, Pp]) - A
    nodes = A[:, None, :] + t[None, :, None] * diff[:, None, :]
    d = delta_batch(nodes.reshape(-1, 2)).reshape(2 * n, order)
    L = np.sqrt(diff[:, 0] ** 2 + diff[:, 1] ** 2)
    bad = (d <= 0.0).any(axis=1)
    vals = L * (w / np.where(d > 0.0, d, 1.0)).sum(axis=1)
    vals[bad] = np.inf
    return vals[:n] + vals[n:]


def _subdivide(delta_batch, path: np.ndarray, floor: float) -> np.ndarray:
    lens = segments_gauss(delta_batch, path[:-1], path[1:], order=8)
    lens = np.where(np.isfinite(lens), lens, 8.0 * floor)
    cap = max(float(lens.max()) / 2.0, floor)
    pieces = np.clip(np.ceil(lens / cap).astype(int), 1, 16)
    total = int(pieces.sum())
    if total + 1 > _MAX_VERTICES:
        # keep the longest segments subdividing first within budget
        budget = _MAX_VERTICES - 1 - len(lens)
        extra = pieces - 1
        order = np.argsort(-lens)
        take = np.zeros_like(extra)
        for i in order:
            give = min(extra[i], budget)
            take[i] = give
            budget -= give
            if budget <= 0:
                break
        pieces = 1 + take
    out = [path[:1]]
    for i, m in enumerate(pieces):
        if m == 1:
            out.append(path[i + 1 : i + 2])
        else:
            t = np.linspace(0.0, 1.0, m + 1)[1:]
            out.append(path[i] + t[:, None] * (path[i + 1] - path[i]))
    return np.concatenate(out, axis=0)


def _axis_sweep(delta_batch, path: np.ndarray, axis: int, parity: int):
    m = len(path)
    if m < 3:
        return path, 0.0
    ids = np.arange(1, m - 1)
    ids = ids[ids % 2 == parity]
    if len(ids) == 0:
        return path, 0.0
    P = path[ids]
    Pm = path[ids - 1]
    Pp = path[ids + 1]
    # bracket by delta alone: |t| <= 0.42 delta keeps the vertex interior
    # (1-Lipschitz), and tangling moves only lengthen the path, so the
    # strict-improvement acceptance rejects them.
    br = _BRACKET * delta_batch(P)
    lo = -br
    hi = br.copy()

    e = np.zeros(2)
    e[axis] = 1.0

    def f(t):
        return _pair_lengths(delta_batch, Pm, P + t[:, None] * e, Pp)

    f0 = f(np.zeros(len(ids)))
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = f(x1)
    f2 = f(x2)
    for _ in range(_GOLDEN_ITERS):
        left = f1 < f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        x1n = np.where(left, hi - _INVPHI * (hi - lo), x2)
        x2n = np.where(left, x1, lo + _INVPHI * (hi - lo))
        fx = f(np.where(left, x1n, x2n))
        f1, f2 = np.where(left, fx, f2), np.where(left, f1, fx)
        x1, x2 = x1n, x2n
    tb = np.where(f1 < f2, x1, x2)
    fb = np.minimum(f1, f2)
    improve = fb < f0 - 1e-15
    gain = float(np.sum((f0 - fb)[improve])) if np.any(improve) else 0.0
    path = path.copy()
    path[ids[improve], axis] += tb[improve]
    return path, gain


def relax_path(domain: Domain, path, params: MeshParams | None = None) -> np.ndarray:
    """Continuously shorten a polyline; endpoints stay fixed, the
    quasihyperbolic length never increases."""
    params = params or DEFAULT_MESH_PARAMS
    canon, offset, scale = _canonical(domain)
    pts = (np.asarray(path, dtype=float) - offset) / scale
    out, _vals, _q, _t = _relax(canon, pts, params)
    return out * scale + offset


def _relax(domain: Domain, path: np.ndarray, params: MeshParams):
    delta_batch = domain.delta_batch_fast
    delta_exact = domain.delta_batch
    tol_final = min(params.quad_tol, 1e-9)
    v0, q0 = polyline_length(delta_exact, path, tol=tol_final)
    values = [v0]
    qerr = q0
    for level in range(params.max_subdivisions):
        n_before = len(path)
        path = _subdivide(delta_batch, path, _SEG_FLOOR)
        gain_eps = 0.1 * params.relax_tol * max(values[-1], 1e-12)
        for _cycle in range(2):
            path, gain = _vcycle(delta_batch, path, gain_eps)
            if gain < 3.0 * gain_eps:
                break
        v, q = polyline_length(delta_exact, path, tol=tol_final)
        qerr = max(qerr, q)
        values.append(v)
        if len(values) >= 3 and values[-2] - values[-1] < params.relax_tol * max(
            values[-1], 1e-12
        ):
            break
        if len(path) == n_before and level >= 2:
            break  # ladder exhausted; the polish below finishes the job
    # final polish at fixed resolution; a geometric tail of any progress
    # still being made when the cap hits goes into the error estimate
    gain_eps = 0.1 * params.relax_tol * max(values[-1], 1e-12)
    before = _fast_length(delta_batch, path)
    drop = 0.0
    stalled = False
    for _cycle in range(4):
        path, _g = _vcycle(delta_batch, path, gain_eps)
        after = _fast_length(delta_batch, path)
        drop = before - after
        before = after
        if drop < 5.0 * gain_eps:
            stalled = True
            break
    tail = 0.0 if stalled else 10.0 * drop
    v, q = polyline_length(delta_exact, path, tol=tol_final)
    qerr = max(qerr, q)
    values.append(v)
    return path, values, qerr, tail


def _sweep_once(delta_batch, path: np.ndarray):
    gain = 0.0
    for parity in (1, 0):
        for axis in (0, 1):
            path, g = _axis_sweep(delta_batch, path, axis, parity)
            gain += g
    return path, gain


def _vcycle(delta_batch, path: np.ndarray, gain_eps: float, depth: int = 0):
    """Multigrid cycle: per-vertex sweeps kill short-wavelength zigzag,
    while the recursively relaxed coarse copy contributes long-wavelength
    shape corrections (accepted only when they shorten the path).

    Recursion and the post-smoothing sweep are skipped once sweep gains
    drop below gain_eps, so converged paths cost almost nothing."""
    path, gain = _sweep_once(delta_batch, path)
    if gain < gain_eps and depth > 0:
        return path, gain
    if len(path) >= 24 and depth < 9:
        idx = np.arange(0, len(path), 2)
        if idx[-1] != len(path) - 1:
            idx = np.append(idx, len(path) - 1)
        coarse = path[idx]
        crs, _ = _vcycle(delta_batch, coarse, gain_eps, depth + 1)
        corr = crs - coarse
        if np.any(corr):
            corrf = np.empty_like(path)
            t = np.arange(len(path), dtype=float)
            corrf[:, 0] = np.interp(t, idx.astype(float), corr[:, 0])
            corrf[:, 1] = np.interp(t, idx.astype(float), corr[:, 1])
            # Lipschitz clamp keeps every shifted vertex interior
            d = delta_batch(path)
            nrm = np.linalg.norm(corrf, axis=1)
            fac = np.minimum(1.0, _BRACKET * d / np.maximum(nrm, 1e-300))
            cand = path + corrf * fac[:, None]
            before = _fast_length(delta_batch, path)
            after = _fast_length(delta_batch, cand)
            if after < before:
                path = cand
                gain += before - after
    if depth == 0:
        path, g2 = _sweep_once(delta_batch, path)
        gain += g2
    return path, gain


def _fast_length(delta_batch, path: np.ndarray) -> float:
    vals = segments_gauss(delta_batch, path[:-1], path[1:], order=8)
    if not np.all(np.isfinite(vals)):
        return math.inf
    return float(vals.sum())


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def qh_segment_length(domain: Domain, a, b, tol: float = 1e-10) -> float:
    """Quasihyperbolic length of the straight segment [a, b].

    The segment must stay inside the domain (certified via the Lipschitz
    property of delta, with a dense fallback check)."""
    ap = domain.require_interior(a)
    bp = domain.require_interior(b)
    if np.array_equal(ap, bp):
        return 0.0
    if not _certified_segment(domain, ap, bp):
        raise ContainmentError("segment [a, b] leaves the domain")
    val, _ = polyline_length(domain.delta_batch, np.stack([ap, bp]), tol=tol)
    return val


def k_numeric(
    domain: Domain, x, y, params: MeshParams | None = None
) -> GeodesicResult:
    """Numeric quasihyperbolic distance between interior points of a
    planar domain, with the geodesic polyline and an error estimate."""
    params = params or DEFAULT_MESH_PARAMS
    xp = domain.require_interior(x)
    yp = domain.require_interior(y)
    if xp.size != 2:
        raise ValueError("the numeric solver is planar")
    if np.array_equal(xp, yp):
        return GeodesicResult(0.0, np.asarray([xp]), 0.0, 0)

    canon, offset, scale = _canonical(domain)
    xc = (xp - offset) / scale
    yc = (yp - offset) / scale
    if isinstance(canon, PuncturedSpace):
        radii = (float(np.linalg.norm(xc)), float(np.linalg.norm(yc)))
        mesh = _log_polar_mesh(params, min(radii), max(radii))
    else:
        if not canon.bounded:
            raise ValueError(f"numeric solver needs a bounded domain, got {domain}")
        mesh = mesh_for(canon, params)
    _, path0 = graph_shortest_path(mesh, xc, yc)
    path, values, qerr, tail = _relax(canon, path0, params)
    # level difference tracks the remaining refinement error; the value
    # floor covers the residual bias of segments at the subdivision floor
    # (curvature concentrates on the bounded mid-domain arc, so it
    # saturates rather than growing with the distance); the tail accounts
    # for relaxation cycles that hit their cap before stalling.
    err = max(
        1.5 * (values[-2] - values[-1]) if len(values) >= 2 else 0.0,
        2e-4 * min(values[-1], 4.0),
        tail,
        3.0 * qerr,
        1e-7,
    )
    return GeodesicResult(
        value=values[-1],
        path=path * scale + offset,
        error_estimate=err,
        refinement_levels=len(values) - 1,
    )


# ---------------------------------------------------------------------------
# Equal-k circles around a point of punctured space
# ---------------------------------------------------------------------------

def _k_circle_frame_point(r: float, beta: float) -> np.ndarray:
    s = math.sqrt(max(r * r - beta * beta, 0.0))
    return math.exp(s) * np.array([math.cos(beta), math.sin(beta)])


def _k_circle_angle(r: float, beta: float) -> float:
    x = _k_circle_frame_point(r, beta)
    v1 = x - np.array([1.0, 0.0])
    n1 = float(np.linalg.norm(v1))
    u1 = v1 / n1
    u2 = np.array([-1.0, 0.0])
    return 2.0 * math.atan2(
        float(np.linalg.norm(u1 - u2)), float(np.linalg.norm(u1 + u2))
    )


def k_circle_angle_range(r: float) -> tuple[float, float]:
    """Realisable angles (at the base point, toward the puncture) on the
    outer half of the circle {x : k(x, z) = r, |x| >= |z|}."""
    if not (r > 0.0):
        raise ValueError("radius must be positive")
    return _k_circle_angle(r, min(r, math.pi)), math.pi


def k_circle_point(z, r: float, angle: float, puncture=(0.0, 0.0)) -> np.ndarray:
    """Point x with k(x, z) = r, |x - p| >= |z - p| and prescribed angle
    (x, z, p) at the vertex z, in space punctured at p.

    Built from the spiral parameterisation x(beta) =
    exp(sqrt(r^2 - beta^2)) (cos beta, sin beta) in the frame where the
    puncture sits at the origin and z at e1; the angle is strictly
    monotone along it, so a bisection recovers beta.
    """
    if not (r > 0.0):
        raise ValueError("radius must be positive")
    zp = as_point(z)
    p0 = as_point(puncture)
    if zp.size != 2:
        raise ValueError("k-circle construction is planar")
    zf = complex(zp[0] - p0[0], zp[1] - p0[1])
    if zf == 0:
        raise ValueError("base point coincides with the puncture")
    a_min, a_max = k_circle_angle_range(r)
    if not (a_min - 1e-12 <= angle <= a_max + 1e-12):
        raise ValueError(
            f"angle {angle} not realisable on the k-circle; "
            f"range is [{a_min}, {a_max}]"
        )
    lo, hi = 0.0, min(r, math.pi)  # angle decreases from pi at beta=0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if _k_circle_angle(r, mid) > angle:
            lo = mid
        else:
            hi = mid
    beta = 0.5 * (lo + hi)
    xf = _k_circle_frame_point(r, beta)
    w = complex(xf[0], xf[1]) * zf
    return np.array([w.real + p0[0], w.imag + p0[1]])
