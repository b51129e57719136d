"""Smearing test functions on (1+d)-dimensional Minkowski space.

Two primitive families are supported:

* Gaussian wavepackets  c * exp(i(w0*t - wvec.x)) * prod_mu exp(-(x_mu-c_mu)^2/(2 s_mu^2))
* compactly supported bumps  c * prod_mu beta((x_mu-c_mu)/r_mu),
  beta(u) = exp(-1/(1-u^2)) on |u|<1, zero outside.

A TestFunction is a finite sum of wrapped primitives together with one
complex prefactor.  ``scale`` touches only the prefactor, which keeps the
component tuple structurally shared; the algebra layer relies on that to
factor scalars out of generator labels exactly.  Wrappers record transforms
that have no closed form inside the family:

    ("conjugate",)        complex conjugation (pushed into primitives when
                          nothing blocks it)
    ("bullet",)           keep the positive-frequency sheet, conjugate the
                          negative-frequency sheet
    ("scale", c)          scalar multiple absorbed under a bullet
    ("translate", dp)     spacetime translation (pushed into centers when
                          nothing blocks it)
    ("boost", eta)        1+1 dimensional Lorentz boost by rapidity eta

Wrapper tuples are ordered outermost first.  Everything here is immutable
and hashable, so functions can serve as dictionary keys / algebra labels.

Sheet amplitudes: for the "pos" branch the amplitude at spatial momentum
kvec is ft(+omega(kvec), kvec); for "neg" it is ft(-omega(kvec), kvec),
where ft is the Fourier transform with the e^{+i(k0 t - kvec.x)} kernel.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._quad import gl_rule
from .errors import UnsupportedQueryError

POS = "pos"
NEG = "neg"
_BRANCH_SIGN = {POS: 1.0, NEG: -1.0}

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SpacetimePoint:
    """A point (t, x1..xd); thin wrapper used at API boundaries."""
    t: float
    x: tuple

    def as_tuple(self):
        return (self.t,) + tuple(self.x)


@dataclass(frozen=True)
class FourMomentum:
    """A momentum (k0, k1..kd)."""
    k0: float
    kvec: tuple

    def as_tuple(self):
        return (self.k0,) + tuple(self.kvec)


def _coerce_vector(v, name):
    if isinstance(v, SpacetimePoint) or isinstance(v, FourMomentum):
        v = v.as_tuple()
    out = tuple(float(c) for c in v)
    if len(out) < 2 or len(out) > 4:
        raise ValueError(f"{name} must have 2..4 components (t first), got {len(out)}")
    if not all(math.isfinite(c) for c in out):
        raise ValueError(f"{name} has non-finite components")
    return out


@dataclass(frozen=True)
class GaussianTerm:
    coeff: complex
    center: tuple
    widths: tuple
    wavevector: tuple


@dataclass(frozen=True)
class BumpTerm:
    coeff: complex
    center: tuple
    radii: tuple


@dataclass(frozen=True)
class Component:
    """One primitive term with its stack of wrappers, outermost first."""
    wrappers: tuple
    term: object


@dataclass(frozen=True)
class TestFunction:
    dim: int
    prefactor: complex
    components: tuple

    def is_zero(self):
        return self.prefactor == 0 or not self.components

    def base(self):
        """The same function with prefactor 1 (shared component tuple)."""
        if self.prefactor == 1.0 + 0.0j:
            return self
        return TestFunction(self.dim, 1.0 + 0.0j, self.components)


# ---------------------------------------------------------------------------
# constructors

def gaussian(coeff, center, widths, wavevector):
    """Gaussian wavepacket; center/widths/wavevector are (t, x...) tuples."""
    center = _coerce_vector(center, "center")
    widths = _coerce_vector(widths, "widths")
    wavevector = _coerce_vector(wavevector, "wavevector")
    if not (len(center) == len(widths) == len(wavevector)):
        raise ValueError("center, widths and wavevector must have equal length")
    if not all(w > 0 for w in widths):
        raise ValueError("widths must be positive")
    coeff = complex(coeff)
    if not (math.isfinite(coeff.real) and math.isfinite(coeff.imag)):
        raise ValueError("coeff must be finite")
    if coeff == 0:
        return zero(len(center) - 1)
    term = GaussianTerm(coeff, center, widths, wavevector)
    return TestFunction(len(center) - 1, 1.0 + 0.0j, (Component((), term),))


def bump(coeff, center, radii):
    """Compactly supported bump; support is the closed box center +- radii."""
    center = _coerce_vector(center, "center")
    radii = _coerce_vector(radii, "radii")
    if len(center) != len(radii):
        raise ValueError("center and radii must have equal length")
    if not all(r > 0 for r in radii):
        raise ValueError("radii must be positive")
    coeff = complex(coeff)
    if not (math.isfinite(coeff.real) and math.isfinite(coeff.imag)):
        raise ValueError("coeff must be finite")
    if coeff == 0:
        return zero(len(center) - 1)
    term = BumpTerm(coeff, center, radii)
    return TestFunction(len(center) - 1, 1.0 + 0.0j, (Component((), term),))


def zero(dim):
    if dim not in (1, 2, 3):
        raise ValueError("dim must be 1, 2 or 3")
    return TestFunction(dim, 1.0 + 0.0j, ())


# ---------------------------------------------------------------------------
# linear structure

def _scaled_components(f):
    """Components of f with the prefactor pushed inside (exact scalar mult)."""
    if f.prefactor == 1.0 + 0.0j:
        return f.components
    return tuple(_scale_component(c, f.prefactor) for c in f.components)


def _scale_component(comp, s):
    # Scalar multiplication is always the outermost operation, so it either
    # merges with a leading scale wrapper, folds into a bare term, or is
    # prepended.
    if not comp.wrappers:
        return Component((), _scale_term(comp.term, s))
    head = comp.wrappers[0]
    if head[0] == "scale":
        return Component((("scale", head[1] * s),) + comp.wrappers[1:], comp.term)
    return Component((("scale", s),) + comp.wrappers, comp.term)


def _scale_term(term, s):
    if isinstance(term, GaussianTerm):
        return GaussianTerm(term.coeff * s, term.center, term.widths, term.wavevector)
    return BumpTerm(term.coeff * s, term.center, term.radii)


def add(f, g):
    if f.dim != g.dim:
        raise ValueError("cannot add functions of different spatial dimension")
    return TestFunction(f.dim, 1.0 + 0.0j, _scaled_components(f) + _scaled_components(g))


def scale(c, f):
    c = complex(c)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise ValueError("scale factor must be finite")
    return TestFunction(f.dim, c * f.prefactor, f.components)


def multiply_by_i(f):
    return scale(1j, f)


# ---------------------------------------------------------------------------
# conjugation / bullet / translation / boost

def conjugate(f):
    return TestFunction(f.dim, f.prefactor.conjugate(),
                        tuple(_conj_component(c.wrappers, c.term) for c in f.components))


def _conj_component(wrappers, term):
    if not wrappers:
        return Component((), _conj_term(term))
    op = wrappers[0]
    rest = wrappers[1:]
    if op[0] == "conjugate":
        return Component(rest, term)
    if op[0] == "scale":
        inner = _conj_component(rest, term)
        return _scale_component(inner, op[1].conjugate())
    if op[0] in ("translate", "boost"):
        # Conjugation commutes with real point transforms.
        inner = _conj_component(rest, term)
        return Component((op,) + inner.wrappers, inner.term)
    # bullet blocks the pushdown
    return Component((("conjugate",),) + wrappers, term)


def _conj_term(term):
    if isinstance(term, GaussianTerm):
        wv = tuple(-w for w in term.wavevector)
        return GaussianTerm(term.coeff.conjugate(), term.center, term.widths, wv)
    return BumpTerm(term.coeff.conjugate(), term.center, term.radii)


def bullet(f):
    """Keep the positive-frequency sheet, conjugate the negative one.

    Additive, involutive, commutes with real scaling only; a complex
    prefactor is absorbed into the components before wrapping.
    """
    if f.prefactor.imag == 0.0:
        pref = f.prefactor
        comps = f.components
    else:
        pref = 1.0 + 0.0j
        comps = _scaled_components(f)
    out = []
    for comp in comps:
        if comp.wrappers and comp.wrappers[0] == ("bullet",):
            out.append(Component(comp.wrappers[1:], comp.term))
        else:
            out.append(Component((("bullet",),) + comp.wrappers, comp.term))
    return TestFunction(f.dim, pref, tuple(out))


def translate(f, displacement):
    """Shift the function by a spacetime displacement (t first)."""
    dp = _coerce_vector(displacement, "displacement")
    if len(dp) != f.dim + 1:
        raise ValueError("displacement dimension mismatch")
    return TestFunction(f.dim, f.prefactor,
                        tuple(_translate_component(c.wrappers, c.term, dp) for c in f.components))


def _translate_component(wrappers, term, dp):
    if not wrappers:
        return Component((), _translate_term(term, dp))
    op = wrappers[0]
    rest = wrappers[1:]
    if op[0] in ("scale", "conjugate"):
        inner = _translate_component(rest, term, dp)
        return Component((op,) + inner.wrappers, inner.term)
    if op[0] == "translate":
        merged = tuple(a + b for a, b in zip(op[1], dp))
        if all(c == 0.0 for c in merged):
            return Component(rest, term)
        return Component((("translate", merged),) + rest, term)
    if op[0] == "boost":
        # T_a (f o L^-1) = (T_{L^-1 a} f) o L^-1 with L = boost(eta).
        eta = op[1]
        dt, dx = dp
        inner_dp = (dt * math.cosh(eta) - dx * math.sinh(eta),
                    -dt * math.sinh(eta) + dx * math.cosh(eta))
        inner = _translate_component(rest, term, inner_dp)
        return Component((op,) + inner.wrappers, inner.term)
    # bullet blocks the pushdown
    return Component((("translate", dp),) + wrappers, term)


def _translate_term(term, dp):
    center = tuple(c + d for c, d in zip(term.center, dp))
    if isinstance(term, GaussianTerm):
        # the plane wave is anchored at the origin, so shifting the envelope
        # also rotates the coefficient by the wave's phase at -displacement
        wv = term.wavevector
        pairing = wv[0] * dp[0] - sum(w * d for w, d in zip(wv[1:], dp[1:]))
        coeff = term.coeff * complex(math.cos(pairing), -math.sin(pairing))
        return GaussianTerm(coeff, center, term.widths, term.wavevector)
    return BumpTerm(term.coeff, center, term.radii)


def boost(f, rapidity):
    """Active Lorentz boost by the given rapidity.  1+1 dimensions only."""
    if f.dim != 1:
        raise UnsupportedQueryError("boost is implemented for spatial dimension 1 only")
    eta = float(rapidity)
    if not math.isfinite(eta):
        raise ValueError("rapidity must be finite")
    if eta == 0.0:
        return f
    out = []
    for comp in f.components:
        if comp.wrappers and comp.wrappers[0][0] == "boost":
            merged = comp.wrappers[0][1] + eta
            if merged == 0.0:
                out.append(Component(comp.wrappers[1:], comp.term))
            else:
                out.append(Component((("boost", merged),) + comp.wrappers[1:], comp.term))
        else:
            out.append(Component((("boost", eta),) + comp.wrappers, comp.term))
    return TestFunction(f.dim, f.prefactor, tuple(out))


# ---------------------------------------------------------------------------
# position-space evaluation

def evaluate(f, points):
    """Evaluate f at spacetime points, shape (N, dim+1) or a single point.

    Raises UnsupportedQueryError if any component carries a bullet wrapper:
    the bullet image is defined through its sheet amplitudes only.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != f.dim + 1:
        raise ValueError(f"points must have {f.dim + 1} columns")
    acc = np.zeros(len(pts), dtype=complex)
    for comp in f.components:
        acc += _eval_component(comp.wrappers, comp.term, pts)
    acc *= f.prefactor
    if np.ndim(points) == 1:
        return complex(acc[0])
    return acc


def _eval_component(wrappers, term, pts):
    if not wrappers:
        return _eval_term(term, pts)
    op = wrappers[0]
    rest = wrappers[1:]
    if op[0] == "scale":
        return op[1] * _eval_component(rest, term, pts)
    if op[0] == "conjugate":
        return np.conj(_eval_component(rest, term, pts))
    if op[0] == "translate":
        return _eval_component(rest, term, pts - np.asarray(op[1]))
    if op[0] == "boost":
        eta = op[1]
        ch, sh = math.cosh(eta), math.sinh(eta)
        mapped = np.empty_like(pts)
        mapped[:, 0] = ch * pts[:, 0] - sh * pts[:, 1]
        mapped[:, 1] = -sh * pts[:, 0] + ch * pts[:, 1]
        return _eval_component(rest, term, mapped)
    raise UnsupportedQueryError(
        "position-space evaluation is undefined for bullet-transformed functions")


def _eval_term(term, pts):
    center = np.asarray(term.center)
    if isinstance(term, GaussianTerm):
        widths = np.asarray(term.widths)
        wv = np.asarray(term.wavevector)
        # signed pairing w0*t - wvec.x
        phase = wv[0] * pts[:, 0] - pts[:, 1:] @ wv[1:]
        quad = np.sum(((pts - center) / widths) ** 2, axis=1)
        return term.coeff * np.exp(1j * phase - 0.5 * quad)
    radii = np.asarray(term.radii)
    u = (pts - center) / radii
    inside = np.all(np.abs(u) < 1.0, axis=1)
    out = np.zeros(len(pts), dtype=complex)
    if np.any(inside):
        ui = u[inside]
        out[inside] = term.coeff * np.exp(-np.sum(1.0 / (1.0 - ui * ui), axis=1))
    return out


# ---------------------------------------------------------------------------
# bump profile Fourier factor

def bump_profile_ft(q):
    """B(q) = integral_{-1}^{1} exp(-1/(1-u^2)) e^{iqu} du (real, even).

    Composite Gauss-Legendre on [0, 1] with the panel count driven by the
    largest |q| requested, vectorized over q.
    """
    q = np.abs(np.asarray(q, dtype=float))
    qmax = float(q.max()) if q.size else 0.0
    panels = max(8, int(math.ceil(qmax / 3.0)) + 2)
    x, w = gl_rule(16)
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    u = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    beta = np.exp(-1.0 / (1.0 - u * u))
    base = wt * beta
    if q.size * u.size <= 8_000_000:
        return 2.0 * (np.cos(np.multiply.outer(q, u)) @ base)
    # Chunk very large batches to bound the outer-product workspace.
    out = np.empty(q.shape)
    flat_q = q.ravel()
    flat_out = out.ravel()
    step = max(1, 8_000_000 // u.size)
    for i in range(0, flat_q.size, step):
        blk = flat_q[i:i + step]
        flat_out[i:i + step] = 2.0 * (np.cos(np.multiply.outer(blk, u)) @ base)
    return out


# ---------------------------------------------------------------------------
# momentum-space evaluation

def sheet_amplitude(f, branch, kvecs, params):
    """Mass-shell Fourier amplitude on one frequency sheet.

    kvecs: (N, dim) array (a 1-D array is accepted when dim == 1).
    Returns complex (N,).
    """
    if branch not in _BRANCH_SIGN:
        raise ValueError(f"branch must be 'pos' or 'neg', got {branch!r}")
    if f.dim != params.dim:
        raise ValueError("function dimension does not match params.dim")
    K = np.asarray(kvecs, dtype=float)
    if K.ndim == 1:
        if params.dim != 1:
            raise ValueError("1-D momentum array requires dim == 1")
        K = K[:, None]
    if K.shape[1] != params.dim:
        raise ValueError(f"momenta must have {params.dim} columns")
    acc = np.zeros(len(K), dtype=complex)
    for comp in f.components:
        acc += _amp_component(comp.wrappers, comp.term, branch, K, params)
    return f.prefactor * acc


def _amp_component(wrappers, term, branch, K, params):
    if not wrappers:
        return _amp_term(term, branch, K, params)
    op = wrappers[0]
    rest = wrappers[1:]
    if op[0] == "scale":
        return op[1] * _amp_component(rest, term, branch, K, params)
    if op[0] == "conjugate":
        other = NEG if branch == POS else POS
        return np.conj(_amp_component(rest, term, other, -K, params))
    if op[0] == "bullet":
        if branch == POS:
            return _amp_component(rest, term, POS, K, params)
        return np.conj(_amp_component(rest, term, NEG, K, params))
    if op[0] == "translate":
        sign = _BRANCH_SIGN[branch]
        dp = np.asarray(op[1])
        w = params.omega(K)
        phase = np.exp(1j * (sign * w * dp[0] - K @ dp[1:]))
        return phase * _amp_component(rest, term, branch, K, params)
    if op[0] == "boost":
        eta = op[1]
        sign = _BRANCH_SIGN[branch]
        w = params.omega(K)
        mapped = math.cosh(eta) * K - sign * math.sinh(eta) * w[:, None]
        return _amp_component(rest, term, branch, mapped, params)
    raise UnsupportedQueryError(f"unknown wrapper {op!r}")


def _amp_term(term, branch, K, params):
    sign = _BRANCH_SIGN[branch]
    w = params.omega(K)
    k0 = sign * w
    center = np.asarray(term.center)
    if isinstance(term, GaussianTerm):
        widths = np.asarray(term.widths)
        wv = np.asarray(term.wavevector)
        q0 = k0 + wv[0]
        qs = K + wv[1:]
        norm = term.coeff * TWO_PI ** (0.5 * (params.dim + 1)) * np.prod(widths)
        phase = q0 * center[0] - qs @ center[1:]
        decay = 0.5 * (q0 * widths[0]) ** 2 + 0.5 * np.sum((qs * widths[1:]) ** 2, axis=1)
        return norm * np.exp(1j * phase - decay)
    radii = np.asarray(term.radii)
    norm = term.coeff * np.prod(radii)
    phase = k0 * center[0] - K @ center[1:]
    prof = bump_profile_ft(k0 * radii[0])
    for j in range(params.dim):
        prof = prof * bump_profile_ft(K[:, j] * radii[j + 1])
    return norm * np.exp(1j * phase) * prof


def offshell_ft(f, kpoints):
    """Fourier transform at arbitrary (k0, kvec) points, shape (N, dim+1).

    Undefined (raises) when a bullet wrapper is present: the bullet image
    only has sheet values.
    """
    kp = np.atleast_2d(np.asarray(kpoints, dtype=float))
    if kp.shape[1] != f.dim + 1:
        raise ValueError(f"momenta must have {f.dim + 1} columns")
    acc = np.zeros(len(kp), dtype=complex)
    for comp in f.components:
        acc += _offshell_component(comp.wrappers, comp.term, kp)
    acc *= f.prefactor
    if np.ndim(kpoints) == 1:
        return complex(acc[0])
    return acc


def _offshell_component(wrappers, term, kp):
    if not wrappers:
        return _offshell_term(term, kp)
    op = wrappers[0]
    rest = wrappers[1:]
    if op[0] == "scale":
        return op[1] * _offshell_component(rest, term, kp)
    if op[0] == "conjugate":
        return np.conj(_offshell_component(rest, term, -kp))
    if op[0] == "translate":
        dp = np.asarray(op[1])
        phase = np.exp(1j * (kp[:, 0] * dp[0] - kp[:, 1:] @ dp[1:]))
        return phase * _offshell_component(rest, term, kp)
    if op[0] == "boost":
        eta = op[1]
        ch, sh = math.cosh(eta), math.sinh(eta)
        mapped = np.empty_like(kp)
        mapped[:, 0] = ch * kp[:, 0] - sh * kp[:, 1]
        mapped[:, 1] = -sh * kp[:, 0] + ch * kp[:, 1]
        return _offshell_component(rest, term, mapped)
    raise UnsupportedQueryError(
        "off-shell Fourier values are undefined for bullet-transformed functions")


def _offshell_term(term, kp):
    center = np.asarray(term.center)
    if isinstance(term, GaussianTerm):
        widths = np.asarray(term.widths)
        wv = np.asarray(term.wavevector)
        q = kp + wv  # q0 = k0 + w0, qs = kvec + wvec
        sgn = np.ones(kp.shape[1])
        sgn[1:] = -1.0
        phase = (q * sgn) @ center
        decay = 0.5 * np.sum((q * widths) ** 2, axis=1)
        dim1 = kp.shape[1]
        return term.coeff * TWO_PI ** (0.5 * dim1) * np.prod(widths) * np.exp(1j * phase - decay)
    radii = np.asarray(term.radii)
    sgn = np.ones(kp.shape[1])
    sgn[1:] = -1.0
    phase = (kp * sgn) @ center
    prof = np.ones(len(kp))
    for mu in range(kp.shape[1]):
        prof = prof * bump_profile_ft(kp[:, mu] * radii[mu])
    return term.coeff * np.prod(radii) * np.exp(1j * phase) * prof


# ---------------------------------------------------------------------------
# support geometry

def support_box(f, n_sigma=8.0):
    """Axis-aligned support hint: exact for bumps, center +- n_sigma*widths
    for Gaussians, conservative bounding box after a boost.

    Returns (lo, hi) arrays of length dim+1, or None for the zero function.
    """
    if f.is_zero():
        return None
    boxes = [_component_box(c.wrappers, c.term, n_sigma) for c in f.components]
    lo = np.min([b[0] for b in boxes], axis=0)
    hi = np.max([b[1] for b in boxes], axis=0)
    return lo, hi


def _component_box(wrappers, term, n_sigma):
    if not wrappers:
        center = np.asarray(term.center)
        if isinstance(term, GaussianTerm):
            r = n_sigma * np.asarray(term.widths)
        else:
            r = np.asarray(term.radii)
        return center - r, center + r
    op = wrappers[0]
    lo, hi = _component_box(wrappers[1:], term, n_sigma)
    if op[0] in ("scale", "conjugate", "bullet"):
        return lo, hi
    if op[0] == "translate":
        dp = np.asarray(op[1])
        return lo + dp, hi + dp
    if op[0] == "boost":
        eta = op[1]
        ch, sh = math.cosh(eta), math.sinh(eta)
        corners = np.array([[t, x] for t in (lo[0], hi[0]) for x in (lo[1], hi[1])])
        mapped = np.stack([ch * corners[:, 0] + sh * corners[:, 1],
                           sh * corners[:, 0] + ch * corners[:, 1]], axis=1)
        return mapped.min(axis=0), mapped.max(axis=0)
    raise UnsupportedQueryError(f"unknown wrapper {op!r}")


def spacelike_separated(f, g, n_sigma=8.0):
    """Strict spacelike separation of the two support hints.

    Corner extremization on axis-aligned boxes: separated iff the largest
    possible |dt| is strictly smaller than the smallest possible |dx|.
    The zero function has no support hint, so the query is undefined for it.
    """
    bf = support_box(f, n_sigma)
    bg = support_box(g, n_sigma)
    if bf is None or bg is None:
        raise UnsupportedQueryError(
            "spacelike separation needs support boxes; the zero function has none")
    return classify_interval(bf, bg) == "spacelike"


def classify_interval(box_f, box_g):
    """Classify the separation of two support boxes.

    "spacelike": every pair of points is spacelike separated;
    "timelike":  every pair is timelike separated;
    "lightlike-adjacent": anything in between (overlaps, light cones
    touching, mixed cases).
    """
    (lo_f, hi_f), (lo_g, hi_g) = box_f, box_g
    max_dt = max(hi_f[0] - lo_g[0], hi_g[0] - lo_f[0])
    min_dt = max(0.0, lo_f[0] - hi_g[0], lo_g[0] - hi_f[0])
    gaps = np.maximum(0.0, np.maximum(lo_f[1:] - hi_g[1:], lo_g[1:] - hi_f[1:]))
    min_dx_sq = float(np.sum(gaps * gaps))
    spans = np.maximum(hi_f[1:] - lo_g[1:], hi_g[1:] - lo_f[1:])
    max_dx_sq = float(np.sum(spans * spans))
    if max_dt * max_dt < min_dx_sq:
        return "spacelike"
    if min_dt * min_dt > max_dx_sq:
        return "timelike"
    return "lightlike-adjacent"


# ---------------------------------------------------------------------------
# serialization

def describe(f):
    """Stable JSON-able description of a test function."""
    comps = []
    for comp in f.components:
        term = comp.term
        if isinstance(term, GaussianTerm):
            td = {"kind": "gaussian", "coeff": [term.coeff.real, term.coeff.imag],
                  "center": list(term.center), "widths": list(term.widths),
                  "wavevector": list(term.wavevector)}
        else:
            td = {"kind": "bump", "coeff": [term.coeff.real, term.coeff.imag],
                  "center": list(term.center), "radii": list(term.radii)}
        wraps = []
        for op in comp.wrappers:
            if op[0] == "scale":
                wraps.append(["scale", op[1].real, op[1].imag])
            elif op[0] == "translate":
                wraps.append(["translate", list(op[1])])
            elif op[0] == "boost":
                wraps.append(["boost", op[1]])
            else:
                wraps.append([op[0]])
        comps.append({"wrappers": wraps, "term": td})
    return {"dim": f.dim, "prefactor": [f.prefactor.real, f.prefactor.imag],
            "components": comps}
