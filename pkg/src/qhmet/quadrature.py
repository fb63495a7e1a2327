"""Quadrature for line integrals of 1/delta along segments and polylines."""

from __future__ import annotations

import numpy as np

from .errors import ContainmentError

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [0, 1]."""
    rule = _GL_CACHE.get(order)
    if rule is None:
        x, w = np.polynomial.legendre.leggauss(order)
        rule = (0.5 * (x + 1.0), 0.5 * w)
        _GL_CACHE[order] = rule
    return rule


def segments_gauss(delta_batch, A: np.ndarray, B: np.ndarray, order: int = 8) -> np.ndarray:
    """Fixed-order estimate of int |dz|/delta over each segment A[i] -> B[i].

    Returns +inf for segments that touch non-interior points (delta <= 0),
    which is how the path relaxation rejects candidate moves.
    """
    t, w = gauss_rule(order)
    diff = B - A
    P = A[:, None, :] + t[None, :, None] * diff[:, None, :]
    d = delta_batch(P.reshape(-1, P.shape[-1])).reshape(len(A), order)
    L = np.linalg.norm(diff, axis=-1)
    bad = np.any(d <= 0.0, axis=1)
    vals = L * np.sum(w / np.where(d > 0.0, d, 1.0), axis=1)
    vals[bad] = np.inf
    return vals


def segments_adaptive(
    delta_batch,
    A: np.ndarray,
    B: np.ndarray,
    tol: float = 1e-10,
    max_doublings: int = 11,
) -> np.ndarray:
    """Adaptive Simpson length of independent segments A[i] -> B[i]."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    nseg = len(A)
    L = np.linalg.norm(B - A, axis=1)
    live = L > 0.0
    tol_seg = max(tol, 1e-16)

    n = 4
    t = np.linspace(0.0, 1.0, n + 1)
    F = _integrand(delta_batch, A, B, L, t)
    S_prev = _simpson(F, L, n)

    total = np.zeros(nseg)
    active = live.copy()
    for _ in range(max_doublings):
        if not np.any(active):
            break
        n2 = 2 * n
        tm = (np.arange(n) + 0.5) / n
        Fm = np.full((nseg, n), np.nan)
        Fm[active] = _integrand(delta_batch, A[active], B[active], L[active], tm)
        Fnew = np.empty((nseg, n2 + 1))
        Fnew[:, ::2] = F
        Fnew[:, 1::2] = Fm
        S = _simpson(Fnew, L, n2)
        e = np.abs(S - S_prev) / 15.0
        done = active & (e <= tol_seg)
        total[done] = S[done]
        active &= ~done
        F, S_prev, n = Fnew, S, n2
    total[active] = S_prev[active]
    total[~live] = 0.0
    return total


def polyline_length(
    delta_batch,
    pts: np.ndarray,
    tol: float = 1e-10,
    max_doublings: int = 11,
) -> tuple[float, float]:
    """Adaptive composite-Simpson length of a polyline under 1/delta.

    Each segment is refined by interval doubling until the Simpson error
    estimate |S_2n - S_n| / 15 falls below its share of ``tol``.  Returns
    (value, error_bound).  Raises :class:`ContainmentError` if any sample
    leaves the domain.
    """
    pts = np.asarray(pts, dtype=float)
    nseg = len(pts) - 1
    if nseg <= 0:
        return 0.0, 0.0
    A, B = pts[:-1], pts[1:]
    L = np.linalg.norm(B - A, axis=1)
    live = L > 0.0
    tol_seg = max(tol / max(np.count_nonzero(live), 1), 1e-16)

    n = 4
    t = np.linspace(0.0, 1.0, n + 1)
    F = _integrand(delta_batch, A, B, L, t)
    S_prev = _simpson(F, L, n)

    total = np.zeros(nseg)
    err = np.zeros(nseg)
    active = live.copy()
    for _ in range(max_doublings):
        if not np.any(active):
            break
        n2 = 2 * n
        tm = (np.arange(n) + 0.5) / n
        Fm = np.full((nseg, n), np.nan)
        Fm[active] = _integrand(delta_batch, A[active], B[active], L[active], tm)
        Fnew = np.empty((nseg, n2 + 1))
        Fnew[:, ::2] = F
        Fnew[:, 1::2] = Fm
        S = _simpson(Fnew, L, n2)
        e = np.abs(S - S_prev) / 15.0
        done = active & (e <= tol_seg)
        total[done] = S[done]
        err[done] = e[done]
        active &= ~done
        F, S_prev, n = Fnew, S, n2
    if np.any(active):
        total[active] = S_prev[active]
        err[active] = np.abs(S_prev - _simpson(F[:, ::2], L, n // 2))[active] / 15.0
    return float(np.sum(total[live])), float(np.sum(err[live]))


def _integrand(delta_batch, A, B, L, t) -> np.ndarray:
    P = A[:, None, :] + np.asarray(t)[None, :, None] * (B - A)[:, None, :]
    d = delta_batch(P.reshape(-1, P.shape[-1])).reshape(len(A), len(t))
    if np.any((d <= 0.0) & (L[:, None] > 0.0)):
        raise ContainmentError("polyline leaves the domain")
    return np.where(d > 0.0, 1.0 / np.where(d > 0.0, d, 1.0), 0.0)


def _simpson(F: np.ndarray, L: np.ndarray, n: int) -> np.ndarray:
    h = L / n
    acc = F[:, 0] + F[:, -1] + 4.0 * F[:, 1:-1:2].sum(axis=1)
    if n > 2:
        acc = acc + 2.0 * F[:, 2:-1:2].sum(axis=1)
    return h / 3.0 * acc
