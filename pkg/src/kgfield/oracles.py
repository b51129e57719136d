"""Independent cross-checks used by the test and verification suites.

Everything here deliberately avoids the production code paths it is meant
to check:

* wick_moment enumerates perfect pairings and multiplies two-point values
  read straight off the kernel table, never calling the normal-ordering
  recursion;
* bump_ft_tensor_oracle integrates the full (d+1)-dimensional Fourier
  integral on a tensor grid without using the separability of the bump
  profile;
* offshell_ft_trapezoid_oracle brute-forces the Fourier transform from
  position-space samples.

Slow is fine here; these run on small inputs.
"""

import numpy as np

from ._quad import gl_rule


# ---------------------------------------------------------------------------
# Gaussian-moment oracle: sum over perfect matchings

def perfect_matchings(n):
    """All partitions of range(n) into ordered pairs (i, j), i < j."""
    if n % 2:
        return []
    return _matchings_of(tuple(range(n)))


def _matchings_of(items):
    if not items:
        return [()]
    first = items[0]
    out = []
    for pos in range(1, len(items)):
        j = items[pos]
        others = items[1:pos] + items[pos + 1:]
        for sub in _matchings_of(others):
            out.append(((first, j),) + sub)
    return out


def _linear_parts(elem):
    """Split a strictly linear element into (annihilator, creator) coefficient lists."""
    anns = []
    cres = []
    for mono, coeff in elem.terms():
        if mono.degree() != 1:
            raise ValueError("pairing oracle needs strictly linear elements "
                             "(no scalar part, no higher-degree monomials)")
        if mono.annihilators:
            anns.append((mono.annihilators[0], coeff))
        else:
            cres.append((mono.creators[0], coeff))
    return anns, cres


def two_point(model, left, right):
    """(vev(left * right), propagated quadrature error) from the kernel table.

    Only the annihilator part of `left` against the creator part of `right`
    contributes to the vacuum expectation of the product.
    """
    anns, _ = _linear_parts(left)
    _, cres = _linear_parts(right)
    total = 0j
    err = 0.0
    for x, cx in anns:
        for y, cy in cres:
            kind = model.kernel_kind(x.family, y.family)
            if kind == "zero":
                continue
            kv = model.kernel_value(kind, x.label, y.label)
            total += cx * cy * kv.value
            err += abs(cx * cy) * kv.est_error
    return total, err


def wick_moment(model, factors):
    """Vacuum moment of a product of linear elements by pairing enumeration.

    Returns (value, propagated_error).  Odd-length products return exactly
    (0, 0).  The error estimate propagates each pair's kernel error through
    the product rule: sum_p sum_i err_i * prod_{j != i} |val_j|.
    """
    n = len(factors)
    if n % 2:
        return 0j, 0.0
    if n == 0:
        return 1.0 + 0j, 0.0
    total = 0j
    err = 0.0
    for matching in perfect_matchings(n):
        vals = []
        errs = []
        for i, j in matching:
            v, e = two_point(model, factors[i], factors[j])
            vals.append(v)
            errs.append(e)
        prod = complex(np.prod(vals))
        total += prod
        mags = [abs(v) for v in vals]
        for i in range(len(vals)):
            contrib = errs[i]
            for j in range(len(vals)):
                if j != i:
                    contrib *= mags[j]
            err += contrib
    return total, err


# ---------------------------------------------------------------------------
# Fourier-transform oracles

def _bump_profile(u):
    out = np.zeros_like(u, dtype=float)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = np.exp(-1.0 / (1.0 - ui * ui))
    return out


def bump_ft_tensor_oracle(coeff, center, radii, kpoints, n=160):
    """Fourier transform of a bump term by joint tensor quadrature.

    kpoints: (N, d+1) array of (k0, kvec) rows.  The integral runs over the
    full support box on a tensor Gauss-Legendre grid of n nodes per axis,
    treating the integrand as one (d+1)-dimensional function.  Convention:
    phase exp(i (k0 t - kvec . x)).
    """
    center = np.asarray(center, dtype=float)
    radii = np.asarray(radii, dtype=float)
    kpoints = np.atleast_2d(np.asarray(kpoints, dtype=float))
    naxes = center.size
    x, w = gl_rule(n)
    axes_nodes = []
    axes_weights = []
    for j in range(naxes):
        lo = center[j] - radii[j]
        hi = center[j] + radii[j]
        axes_nodes.append(0.5 * (hi - lo) * x + 0.5 * (hi + lo))
        axes_weights.append(0.5 * (hi - lo) * w)
    grids = np.meshgrid(*axes_nodes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    wgrids = np.meshgrid(*axes_weights, indexing="ij")
    wts = np.ones(pts.shape[0])
    for wg in wgrids:
        wts = wts * wg.ravel()
    prof = np.ones(pts.shape[0])
    for j in range(naxes):
        prof *= _bump_profile((pts[:, j] - center[j]) / radii[j])
    # phase sign: +k0 on the time axis, -kvec on the spatial axes
    signs = np.ones(naxes)
    signs[1:] = -1.0
    phase = np.exp(1j * (pts * signs) @ kpoints.T)
    vals = complex(coeff) * (wts * prof) @ phase
    return vals


def offshell_ft_trapezoid_oracle(f, kpoints, extent=12.0, n=481):
    """Position-space brute force of the Fourier transform of f.

    Trapezoid rule on a uniform grid over [-extent, extent]^(d+1) shifted by
    nothing (callers pick extent large enough for the support).  Slow and
    memory-hungry; intended for d = 1 and small n only.
    """
    from . import testfn

    kpoints = np.atleast_2d(np.asarray(kpoints, dtype=float))
    naxes = f.dim + 1
    axis = np.linspace(-extent, extent, n)
    step = axis[1] - axis[0]
    grids = np.meshgrid(*([axis] * naxes), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    vals = testfn.evaluate(f, pts)
    wts = np.full(pts.shape[0], step ** naxes)
    # trapezoid end-point halving per axis
    for j in range(naxes):
        edge = (pts[:, j] == axis[0]) | (pts[:, j] == axis[-1])
        wts[edge] *= 0.5
    signs = np.ones(naxes)
    signs[1:] = -1.0
    phase = np.exp(1j * (pts * signs) @ kpoints.T)
    return (wts * vals) @ phase


def simpson_kernel_oracle(f, g, params, sheet="pos", kmax=12.0, n=8001):
    """Composite-Simpson sheet kernel on a fixed uniform momentum grid.

    Deliberately shares nothing with the adaptive panel machinery: uniform
    grid, classic 1-4-2-...-4-1 weights.  d = 1 only; n must be odd.
    """
    from . import testfn

    if params.dim != 1:
        raise ValueError("simpson_kernel_oracle is 1-D only")
    if n % 2 == 0:
        raise ValueError("n must be odd for Simpson weights")
    if sheet not in ("pos", "neg", "full"):
        raise ValueError(f"sheet must be pos, neg or full, got {sheet!r}")
    k = np.linspace(-kmax, kmax, n)
    h = k[1] - k[0]
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= h / 3.0
    measure = w / (2.0 * params.omega(k))

    total = 0.0 + 0.0j
    branches = ("pos", "neg") if sheet == "full" else (sheet,)
    for branch in branches:
        af = testfn.sheet_amplitude(f, branch, k, params)
        ag = testfn.sheet_amplitude(g, branch, k, params)
        total += np.sum(measure * np.conj(af) * ag)
    return complex(params.hbar * total / (2.0 * np.pi))
