"""Deterministic adaptive quadrature on intervals and boxes.

The engine keeps a worst-first heap of panels; each refinement step splits
exactly one panel, so the evaluation sequence (and therefore the result,
bit for bit) depends only on the integrand and the tolerance settings,
never on thread timing.  Panel values use an embedded Gauss-Legendre pair: the high-order
rule supplies the value, |high - low| the error estimate.
"""

import heapq
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NonFiniteSampleError, QuadratureConvergenceError


@lru_cache(maxsize=64)
def gl_rule(n):
    """Gauss-Legendre nodes/weights on [-1, 1], cached."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


@dataclass
class QuadResult:
    value: complex
    est_error: float
    nodes_used: int


# High/low embedded orders per dimension of the integration domain.
_ORDERS = {1: (15, 7), 2: (10, 6), 3: (7, 4), 4: (7, 4)}


def _check_finite(vals):
    if not np.all(np.isfinite(vals.view(float))):
        raise NonFiniteSampleError("integrand returned a non-finite value")


def adaptive_1d(f, edges, abs_tol, rel_tol, max_nodes):
    """Integrate f over [edges[0], edges[-1]] starting from the given knots.

    f maps a 1-D float array to a complex array of the same length.  Returns
    a QuadResult; raises QuadratureConvergenceError when max_nodes is hit
    before sum(panel errors) <= max(abs_tol, rel_tol * |integral|).
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or len(edges) < 2 or not np.all(np.diff(edges) > 0):
        raise ValueError("edges must be strictly increasing with at least two entries")
    n_hi, n_lo = _ORDERS[1]
    x_hi, w_hi = gl_rule(n_hi)
    x_lo, w_lo = gl_rule(n_lo)
    per_panel = n_hi + n_lo

    def eval_panels(a_arr, b_arr):
        # One integrand call for every node of every panel in the batch.
        half = 0.5 * (b_arr - a_arr)
        mid = 0.5 * (a_arr + b_arr)
        pts_hi = (mid[:, None] + half[:, None] * x_hi[None, :]).ravel()
        pts_lo = (mid[:, None] + half[:, None] * x_lo[None, :]).ravel()
        vals = np.asarray(f(np.concatenate([pts_hi, pts_lo])), dtype=complex)
        _check_finite(vals)
        nh = len(a_arr) * n_hi
        v_hi = (vals[:nh].reshape(len(a_arr), n_hi) @ w_hi) * half
        v_lo = (vals[nh:].reshape(len(a_arr), n_lo) @ w_lo) * half
        return v_hi, np.abs(v_hi - v_lo)

    a0 = edges[:-1]
    b0 = edges[1:]
    v0, e0 = eval_panels(a0, b0)
    nodes = len(a0) * per_panel

    heap = []
    counter = 0
    total_v = complex(0.0)
    total_e = 0.0
    for a, b, v, e in zip(a0, b0, v0, e0):
        heapq.heappush(heap, (-e, counter, a, b, v, e))
        counter += 1
        total_v += v
        total_e += e

    while total_e > max(abs_tol, rel_tol * abs(total_v)):
        if nodes + 2 * per_panel > max_nodes:
            raise QuadratureConvergenceError(
                f"node budget {max_nodes} exhausted at estimated error {total_e:.3e}",
                total_v, total_e, nodes)
        _, _, a, b, v, e = heapq.heappop(heap)
        m = 0.5 * (a + b)
        vs, es = eval_panels(np.array([a, m]), np.array([m, b]))
        nodes += 2 * per_panel
        total_v += vs[0] + vs[1] - v
        total_e += es[0] + es[1] - e
        for aa, bb, vv, ee in ((a, m, vs[0], es[0]), (m, b, vs[1], es[1])):
            heapq.heappush(heap, (-ee, counter, aa, bb, vv, ee))
            counter += 1
        # Guard the running error sum against cancellation drift.
        if counter % 512 == 0:
            total_e = sum(item[5] for item in heap)
            total_v = sum(item[4] for item in heap)

    return QuadResult(total_v, total_e, nodes)


def adaptive_nd(f, lo, hi, abs_tol, rel_tol, max_nodes, initial_splits=None):
    """Adaptive tensor-product quadrature over the box [lo, hi].

    f maps an (N, ndim) array to complex (N,).  Panels are sub-boxes; the
    worst panel is split along its widest axis (relative to the original box
    extent).  Suitable for the smooth, decaying integrands used here; the
    per-panel rule is a full tensor Gauss-Legendre product, so cost grows
    quickly with ndim (ndim <= 4 supported).
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    ndim = len(lo)
    if ndim == 1:
        splits = initial_splits[0] if hasattr(initial_splits, "__len__") else initial_splits
        return adaptive_1d(lambda x: f(x[:, None]), _edges_1d(lo[0], hi[0], splits),
                           abs_tol, rel_tol, max_nodes)
    if ndim not in _ORDERS:
        raise ValueError(f"unsupported dimension {ndim}")
    if not np.all(hi > lo):
        raise ValueError("box must have positive extent on every axis")
    n_hi, n_lo = _ORDERS[ndim]
    x_hi, w_hi = gl_rule(n_hi)
    x_lo, w_lo = gl_rule(n_lo)
    pts_hi = _tensor_points(x_hi, ndim)
    pts_lo = _tensor_points(x_lo, ndim)
    wts_hi = _tensor_weights(w_hi, ndim)
    wts_lo = _tensor_weights(w_lo, ndim)
    per_panel = len(pts_hi) + len(pts_lo)
    scale0 = hi - lo

    def eval_box(blo, bhi):
        half = 0.5 * (bhi - blo)
        mid = 0.5 * (bhi + blo)
        vol = float(np.prod(half))
        sam_hi = mid[None, :] + pts_hi * half[None, :]
        sam_lo = mid[None, :] + pts_lo * half[None, :]
        vals = np.asarray(f(np.vstack([sam_hi, sam_lo])), dtype=complex)
        _check_finite(vals)
        v_hi = (vals[: len(pts_hi)] @ wts_hi) * vol
        v_lo = (vals[len(pts_hi):] @ wts_lo) * vol
        return v_hi, abs(v_hi - v_lo)

    # Initial partition: split each axis into the requested number of slabs.
    splits = initial_splits if initial_splits is not None else [2] * ndim
    edges = [np.linspace(lo[i], hi[i], splits[i] + 1) for i in range(ndim)]
    boxes = [(np.array(c_lo), np.array(c_hi))
             for c_lo, c_hi in _box_cells(edges)]

    heap = []
    counter = 0
    total_v = complex(0.0)
    total_e = 0.0
    nodes = 0
    for blo, bhi in boxes:
        v, e = eval_box(blo, bhi)
        nodes += per_panel
        heapq.heappush(heap, (-e, counter, blo.tobytes(), bhi.tobytes(), v, e))
        counter += 1
        total_v += v
        total_e += e

    while total_e > max(abs_tol, rel_tol * abs(total_v)):
        if nodes + 2 * per_panel > max_nodes:
            raise QuadratureConvergenceError(
                f"node budget {max_nodes} exhausted at estimated error {total_e:.3e}",
                total_v, total_e, nodes)
        _, _, blo_b, bhi_b, v, e = heapq.heappop(heap)
        blo = np.frombuffer(blo_b)
        bhi = np.frombuffer(bhi_b)
        axis = int(np.argmax((bhi - blo) / scale0))
        m = 0.5 * (blo[axis] + bhi[axis])
        child_hi = bhi.copy()
        child_hi[axis] = m
        child_lo = blo.copy()
        child_lo[axis] = m
        total_v -= v
        total_e -= e
        for c_lo, c_hi in ((blo, child_hi), (child_lo, bhi)):
            vv, ee = eval_box(c_lo, c_hi)
            nodes += per_panel
            heapq.heappush(heap, (-ee, counter, c_lo.tobytes(), c_hi.tobytes(), vv, ee))
            counter += 1
            total_v += vv
            total_e += ee

    return QuadResult(total_v, total_e, nodes)


def fixed_panels_1d(f, edges, order):
    """Composite Gauss-Legendre on fixed panels; one vectorized call."""
    edges = np.asarray(edges, dtype=float)
    x, w = gl_rule(order)
    a = edges[:-1]
    b = edges[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    pts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    vals = np.asarray(f(pts), dtype=complex)
    _check_finite(vals)
    return complex(np.sum((vals.reshape(len(a), len(x)) @ w) * half)), len(pts)


def _edges_1d(a, b, n_panels):
    n = 2 if n_panels is None else max(int(n_panels), 2)
    return np.linspace(a, b, n + 1)


def _tensor_points(x, ndim):
    grids = np.meshgrid(*([x] * ndim), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


def _tensor_weights(w, ndim):
    out = w
    for _ in range(ndim - 1):
        out = np.multiply.outer(out, w)
    return out.ravel()


def _box_cells(edges):
    def rec(i, lo_acc, hi_acc):
        if i == len(edges):
            yield list(lo_acc), list(hi_acc)
            return
        e = edges[i]
        for a, b in zip(e[:-1], e[1:]):
            yield from rec(i + 1, lo_acc + [a], hi_acc + [b])
    yield from rec(0, [], [])
