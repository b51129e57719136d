"""Mass-shell inner-product kernels.

The Lorentz-invariant pairing of two test functions is

    full(f, g) = hbar * integral conj(ft_f(k)) ft_g(k) *
                 2*pi*delta(k0^2 - |kvec|^2 - mass^2) d^{d+1}k / (2*pi)^{d+1}

which, after the delta is resolved on the two frequency sheets, reduces to

    pos(f, g) = hbar * integral conj(p_f(kvec)) p_g(kvec) / (2*omega)
                d^dk / (2*pi)^d
    neg(f, g) = same with the negative-sheet amplitudes n_f, n_g,

where p/n are the sheet amplitudes of testfn.sheet_amplitude and
omega = sqrt(|kvec|^2 + mass^2).  ``full`` integrates the two-sheet sum in
a single quadrature, so pos + neg == full is a genuine consistency check
between independent runs.  delta_reduction_check validates the reduction
itself against a mollified-delta computation that never uses the
1/(2*omega) Jacobian.

All evaluation is deterministic: fixed panel seeding, worst-first
refinement, no randomness, no thread-order dependence.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import testfn
from ._quad import adaptive_1d, adaptive_nd, fixed_panels_1d, gl_rule
from .errors import UnsupportedQueryError
from .params import ADAPTIVE_RULE, GAUSS_HERMITE_RULE

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class KernelValue:
    value: complex
    est_error: float
    nodes_used: int


_ZERO = KernelValue(0j, 0.0, 0)


# ---------------------------------------------------------------------------
# cutoff selection

def _gaussian_terms_only(f):
    for comp in f.components:
        if not isinstance(comp.term, testfn.GaussianTerm):
            return False
        for op in comp.wrappers:
            if op[0] == "boost":
                return False
    return True


def _gaussian_axis_cutoff(f, g, axis, log_eps):
    """Pointwise-envelope cutoff along one spatial axis for Gaussian pairs.

    The product of any f-term and g-term envelope along axis j is bounded by
    exp(-(k+wf)^2 sf^2/2 - (k+wg)^2 sg^2/2); solve for the |k| where it drops
    below exp(-log_eps) relative to its peak.  Wavevector signs of both
    orientations are covered so conjugated components need no special case.
    """
    out = 0.0
    terms_f = [c.term for c in f.components]
    terms_g = [c.term for c in g.components]
    for tf in terms_f:
        for tg in terms_g:
            sf = tf.widths[axis + 1]
            sg = tg.widths[axis + 1]
            s2 = 0.5 * (sf * sf + sg * sg)
            mu = max(abs(tf.wavevector[axis + 1]), abs(tg.wavevector[axis + 1]))
            out = max(out, mu + math.sqrt(log_eps / s2) * 1.05)
    return out


def _measured_axis_cutoff(f, g, axis, params, rel_eps=1e-6, safety=4.0):
    """Measured-decay cutoff: probe |amp_f * amp_g| along +-axis until it
    falls below rel_eps of its observed peak, then multiply by safety."""
    probes = np.geomspace(0.5, 4096.0, 120)
    K = np.zeros((2 * len(probes), params.dim))
    K[: len(probes), axis] = probes
    K[len(probes):, axis] = -probes
    mag = np.zeros(2 * len(probes))
    for branch in (testfn.POS, testfn.NEG):
        af = np.abs(testfn.sheet_amplitude(f.base(), branch, K, params))
        ag = np.abs(testfn.sheet_amplitude(g.base(), branch, K, params))
        mag = np.maximum(mag, af * ag)
    peak = float(mag.max())
    if peak == 0.0:
        return 2.0
    both = np.maximum(mag[: len(probes)], mag[len(probes):])
    below = both < rel_eps * peak
    hit = None
    for idx in range(len(probes)):
        if below[idx] and np.all(below[idx:]):
            hit = probes[idx]
            break
    if hit is None:
        raise UnsupportedQueryError("could not locate amplitude decay within probe range")
    return float(safety * hit)


def choose_kmax(f, g, params):
    """Per-axis momentum cutoffs for the pair (f, g) as an array of length dim."""
    if params.quad.kmax > 0.0:
        return np.full(params.dim, params.quad.kmax)
    if _gaussian_terms_only(f) and _gaussian_terms_only(g):
        log_eps = math.log(1e14)
        return np.array([max(2.0, _gaussian_axis_cutoff(f, g, j, log_eps))
                         for j in range(params.dim)])
    return np.array([_measured_axis_cutoff(f, g, j, params) for j in range(params.dim)])


def _oscillation_scale(f, g, n_sigma=8.0):
    """Largest |coordinate| over both support hints; bounds the phase rate
    of conj(amp_f)*amp_g in k."""
    rho = 1.0
    for h in (f, g):
        box = testfn.support_box(h, n_sigma)
        if box is not None:
            rho += float(np.max(np.abs(np.concatenate(box))))
    return rho


def _initial_edges(kmax, rho, panel_scale=1.0):
    n = int(np.clip(math.ceil(panel_scale * 2.0 * kmax * rho / 4.0),
                    int(16 * panel_scale), 24000))
    return np.linspace(-kmax, kmax, n + 1)


# ---------------------------------------------------------------------------
# kernel evaluation

def _branch_pairs(which):
    if which == "pos":
        return ((testfn.POS, testfn.POS),)
    if which == "neg":
        return ((testfn.NEG, testfn.NEG),)
    if which == "full":
        return ((testfn.POS, testfn.POS), (testfn.NEG, testfn.NEG))
    raise ValueError(f"unknown kernel selector {which!r}")


def _kernel_quadrature(f, g, which, params):
    pairs = _branch_pairs(which)
    pref = params.hbar / TWO_PI ** params.dim

    if params.dim == 1:
        def integrand(k):
            K = k[:, None] if k.ndim == 1 else k
            w = params.omega(K)
            acc = np.zeros(len(K), dtype=complex)
            for bf, bg in pairs:
                af = testfn.sheet_amplitude(f, bf, K, params)
                ag = testfn.sheet_amplitude(g, bg, K, params)
                acc += np.conj(af) * ag
            return acc / (2.0 * w)

        kmax = float(choose_kmax(f, g, params)[0])
        rho = _oscillation_scale(f, g)
        edges = _initial_edges(kmax, rho, params.quad.panel_scale)
        res = adaptive_1d(integrand, edges,
                          params.quad.abs_tol / abs(pref),
                          params.quad.rel_tol, params.quad.max_nodes)
    else:
        def integrand(K):
            w = params.omega(K)
            acc = np.zeros(len(K), dtype=complex)
            for bf, bg in pairs:
                af = testfn.sheet_amplitude(f, bf, K, params)
                ag = testfn.sheet_amplitude(g, bg, K, params)
                acc += np.conj(af) * ag
            return acc / (2.0 * w)

        kmax = choose_kmax(f, g, params)
        rho = _oscillation_scale(f, g)
        splits = [int(np.clip(math.ceil(params.quad.panel_scale * 2.0 * km * rho / 12.0),
                               int(4 * params.quad.panel_scale), 96)) for km in kmax]
        res = adaptive_nd(integrand, -kmax, kmax,
                          params.quad.abs_tol / abs(pref),
                          params.quad.rel_tol, params.quad.max_nodes,
                          initial_splits=splits)
    return KernelValue(pref * res.value, abs(pref) * res.est_error, res.nodes_used)


def _gauss_hermite_kernel(f, g, which, params, n_nodes=None):
    """Mapped Gauss-Hermite evaluation for pure-Gaussian pairs, dim == 1.

    The combined spatial envelope exp(-S (k - mu)^2) of the amplitude
    product fixes the affine map k = mu + sigma t with sigma = 1/sqrt(2 S);
    the leftover factor then decays at least like exp(-t^2 / 2), which
    Gauss-Hermite integrates accurately.  Error estimate: |I_n - I_{n/2}|.
    """
    pairs = _branch_pairs(which)
    pref = params.hbar / TWO_PI ** params.dim
    if n_nodes is None:
        n_nodes = int(160 * params.quad.panel_scale)

    # Envelope moments from the widest components of each factor.
    s2 = 0.0
    mu_acc = 0.0
    wsum = 0.0
    for h in (f, g):
        for comp in h.components:
            t = comp.term
            sj = t.widths[1]
            s2 += 0.5 * sj * sj / max(len(h.components), 1)
            mu_acc += -t.wavevector[1] * sj * sj
            wsum += sj * sj
    mu = mu_acc / wsum
    sigma = 1.0 / math.sqrt(2.0 * s2)

    def h_of_k(k):
        K = k[:, None]
        w = params.omega(K)
        acc = np.zeros(len(K), dtype=complex)
        for bf, bg in pairs:
            af = testfn.sheet_amplitude(f, bf, K, params)
            ag = testfn.sheet_amplitude(g, bg, K, params)
            acc += np.conj(af) * ag
        return acc / (2.0 * w)

    def gh_value(n):
        t, w = np.polynomial.hermite.hermgauss(n)
        # w_i * exp(t_i^2) computed in log space to avoid overflow
        we = np.exp(np.log(w) + t * t)
        k = mu + sigma * t
        return sigma * np.sum(we * h_of_k(k))

    v_full = gh_value(n_nodes)
    v_half = gh_value(n_nodes // 2)
    err = abs(v_full - v_half)
    return KernelValue(pref * v_full, abs(pref) * err, n_nodes + n_nodes // 2)


def _dispatch(f, g, which, params):
    if f.dim != params.dim or g.dim != params.dim:
        raise ValueError("function dimension does not match params.dim")
    if f.is_zero() or g.is_zero():
        return _ZERO
    if (params.quad.rule == GAUSS_HERMITE_RULE and params.dim == 1
            and _gaussian_terms_only(f) and _gaussian_terms_only(g)
            and not _has_bullet(f) and not _has_bullet(g)):
        return _gauss_hermite_kernel(f, g, which, params)
    return _kernel_quadrature(f, g, which, params)


def _has_bullet(f):
    return any(op[0] == "bullet" for comp in f.components for op in comp.wrappers)


def ip_pos(f, g, params):
    """Positive-frequency kernel (f, g)_+ as a KernelValue."""
    return _dispatch(f, g, "pos", params)


def ip_neg(f, g, params):
    """Negative-frequency kernel (f, g)_-."""
    return _dispatch(f, g, "neg", params)


def ip_full(f, g, params):
    """Two-sheet kernel (f, g) = (f, g)_+ + (f, g)_-, integrated jointly."""
    return _dispatch(f, g, "full", params)


def ip_bullet(f, g, params):
    """Kernel of the bullet images: (f_bullet, g_bullet) over both sheets."""
    return ip_full(testfn.bullet(f), testfn.bullet(g), params)


# ---------------------------------------------------------------------------
# mollified-delta cross-check

def _ridge_k0_grid(omega_line, eps, k0max, sign):
    """Per-column k0 panels hugging the on-shell ridge; returns nodes and
    weights with shape (n_cols, n_k0_nodes).

    The ridge of delta_eps(k0^2 - omega^2) sits at k0 = omega with width
    ~ eps/(2*omega); panels are placed to resolve +-10 widths, plus coarse
    panels covering the rest of [0, k0max].  All of it is plain quadrature
    in k0: no sheet Jacobian enters.
    """
    x, w = gl_rule(15)
    cols = []
    wts = []
    for om in omega_line:
        half_width = 10.0 * eps / (2.0 * om) + 0.05 * eps
        a = max(0.0, om - half_width)
        b = min(k0max, om + half_width)
        edges = np.concatenate([
            np.linspace(0.0, a, 5)[:-1],
            np.linspace(a, b, 17)[:-1],
            np.linspace(b, k0max, 5),
        ])
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * np.diff(edges)
        nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        weights = (half[:, None] * w[None, :]).ravel()
        cols.append(sign * nodes)
        wts.append(weights)
    return np.array(cols), np.array(wts)


def _mollified_sheet_integral(F, params, eps, kmax, k0max, sheet, n_outer):
    """integral F(k) 2*pi*delta_eps(k^2 - m^2) theta(sheet k0) d^{d+1}k/(2*pi)^{d+1}
    for dim == 1, via iterated plain quadrature."""
    sign = 1.0 if sheet == "pos" else -1.0
    x, w = gl_rule(15)
    edges = np.linspace(-kmax, kmax, n_outer + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    k_line = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    k_wts = (half[:, None] * w[None, :]).ravel()
    om = params.omega(k_line)
    k0n, k0w = _ridge_k0_grid(om, eps, k0max, sign)

    pts = np.stack([k0n.ravel(), np.repeat(k_line, k0n.shape[1])], axis=-1)
    vals = np.asarray(F(pts), dtype=complex).reshape(k0n.shape)
    s = k0n * k0n - (k_line * k_line + params.mass * params.mass)[:, None]
    delta = np.exp(-0.5 * (s / eps) ** 2) / (eps * math.sqrt(TWO_PI))
    inner = np.sum(vals * delta * k0w, axis=1)
    return complex(np.sum(inner * k_wts) * TWO_PI / TWO_PI ** 2)


def delta_reduction_check(F, params, box=None, sheet="pos", eps0=0.2, levels=5, n_outer=None):
    """Compare the sheet-reduced evaluation of a delta-constrained integral
    with a mollified-delta computation extrapolated to eps -> 0.

    F maps an (N, dim+1) array of 4-momenta to complex values.  ``box`` is
    (kmax, k0max); when None it is probed from the decay of F along the
    axes.  Returns a dict with both values, the residual, and node counts.
    Only dim == 1 is supported (the acceptance surface).
    """
    if params.dim != 1:
        raise UnsupportedQueryError("delta_reduction_check is defined for dim == 1")
    if sheet not in ("pos", "neg"):
        raise ValueError("sheet must be 'pos' or 'neg'")
    if box is None:
        kmax, k0max = _probe_offshell_box(F, params)
    else:
        kmax, k0max = box
    # The ridge k0 = omega(k) must sit inside the k0 range with room for the
    # widest mollifier.
    k0max = max(k0max, math.hypot(kmax, params.mass) + 8.0 * eps0 * params.mass + 1.0)

    sign = 1.0 if sheet == "pos" else -1.0

    def reduced_integrand(k):
        w = params.omega(k)
        pts = np.stack([sign * w, k], axis=-1)
        return np.asarray(F(pts), dtype=complex) / (2.0 * w)

    edges = np.linspace(-kmax, kmax, 64 + 1)
    quad = params.quad
    reduced = adaptive_1d(reduced_integrand, edges, quad.abs_tol, max(quad.rel_tol, 1e-10),
                          quad.max_nodes)
    reduced_value = reduced.value / TWO_PI

    eps0 = eps0 * params.mass
    n_out = n_outer or max(48, int(math.ceil(kmax * 6)))
    values = [
        _mollified_sheet_integral(F, params, eps0 / 2.0 ** i, kmax, k0max, sheet, n_out)
        for i in range(levels)
    ]
    # Richardson table in powers of eps^2 (Gaussian mollifier: even series).
    row = list(values)
    prev_top = row[0]
    for lev in range(1, levels):
        fac = 4.0 ** lev
        prev_top = row[0]
        row = [(fac * row[i + 1] - row[i]) / (fac - 1.0) for i in range(len(row) - 1)]
    mollified = row[0]
    # extrapolation error: change contributed by the deepest table level
    extrap_err = abs(mollified - prev_top)

    residual = abs(mollified - reduced_value)
    scale = max(abs(reduced_value), abs(mollified), 1e-300)
    return {
        "sheet": sheet,
        "reduced": reduced_value,
        "mollified": mollified,
        "residual": residual,
        "relative_residual": residual / scale,
        "est_quadrature_error": reduced.est_error / TWO_PI + extrap_err,
        "nodes_used": reduced.nodes_used,
    }


def _probe_offshell_box(F, params, rel_eps=1e-7):
    """Decay radii of |F| along the k0 and k axes, with margin."""
    radii = np.geomspace(0.25, 2048.0, 100)
    out = []
    for axis in (0, 1):
        pts = np.zeros((2 * len(radii), 2))
        pts[: len(radii), axis] = radii
        pts[len(radii):, axis] = -radii
        mag = np.abs(np.asarray(F(pts), dtype=complex))
        mag = np.maximum(mag[: len(radii)], mag[len(radii):])
        peak = float(mag.max())
        if peak == 0.0:
            out.append(2.0)
            continue
        hit = None
        for i in range(len(radii)):
            if mag[i] < rel_eps * peak and np.all(mag[i:] < rel_eps * peak):
                hit = radii[i]
                break
        if hit is None:
            raise UnsupportedQueryError("integrand decay not found within probe range")
        out.append(float(1.5 * hit))
    k0max, kmax = out[0], out[1]
    k0max = max(k0max, math.hypot(kmax, params.mass) + 2.0)
    return kmax, k0max


def fourier_presentation_crosscheck(f, g, params):
    """Evaluate the pairing of f and g straight from its 4-momentum
    presentation (off-shell Fourier data + mollified mass-shell delta) and
    compare with ip_full.

    Requires off-shell Fourier values, hence no bullet wrappers.  dim == 1.
    """
    if params.dim != 1:
        raise UnsupportedQueryError("fourier_presentation_crosscheck is defined for dim == 1")

    def F(pts):
        return params.hbar * np.conj(testfn.offshell_ft(f, pts)) * testfn.offshell_ft(g, pts)

    kmax, k0max = _probe_offshell_box(F, params)
    pos = delta_reduction_check(F, params, box=(kmax, k0max), sheet="pos")
    neg = delta_reduction_check(F, params, box=(kmax, k0max), sheet="neg")
    mollified_total = pos["mollified"] + neg["mollified"]
    direct = ip_full(f, g, params)
    residual = abs(mollified_total - direct.value)
    scale = max(abs(direct.value), 1e-300)
    return {
        "mollified": mollified_total,
        "direct": direct.value,
        "residual": residual,
        "relative_residual": residual / scale,
        "est_quadrature_error": direct.est_error + pos["est_quadrature_error"]
        + neg["est_quadrature_error"],
        "nodes_used": direct.nodes_used + pos["nodes_used"] + neg["nodes_used"],
    }


# ---------------------------------------------------------------------------
# independent fixed-grid oracle (kept here for reuse by tests and the CLI
# node-doubling hygiene check; algorithmically unrelated to the adaptive path)

def simpson_kernel_oracle(f, g, which, params, n_nodes=32769, kmax=None):
    """Composite-Simpson evaluation of a kernel on a fixed symmetric grid.

    n_nodes must be odd.  Used as the independent cross-check for the
    adaptive path; shares only the integrand definition.
    """
    if params.dim != 1:
        raise UnsupportedQueryError("the Simpson oracle is defined for dim == 1")
    if n_nodes % 2 == 0:
        raise ValueError("n_nodes must be odd for Simpson's rule")
    pairs = _branch_pairs(which)
    if kmax is None:
        kmax = float(choose_kmax(f, g, params)[0])
    k = np.linspace(-kmax, kmax, n_nodes)
    w = params.omega(k[:, None])
    acc = np.zeros(n_nodes, dtype=complex)
    for bf, bg in pairs:
        af = testfn.sheet_amplitude(f, bf, k[:, None], params)
        ag = testfn.sheet_amplitude(g, bg, k[:, None], params)
        acc += np.conj(af) * ag
    vals = acc / (2.0 * w)
    h = k[1] - k[0]
    weights = np.ones(n_nodes)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    integral = h / 3.0 * np.sum(weights * vals)
    return params.hbar / TWO_PI * integral
