"""Normal-ordered creation/annihilation algebra over test-function labels.

An AlgebraElement is a finite complex combination of normal monomials

    c(h_1) ... c(h_m) a(k_1) ... a(k_n)

where every generator carries a *family* tag and a *label* (a registered
test function).  Distinct families never contract against each other unless
the model's kernel table says so; two annihilators always commute, two
creators always commute, and moving an annihilator a(f) of family F1 past a
creator c(g) of family F2 produces the scalar

    kernel_table[(F1, F2)] evaluated at (f, g)

on top of the reordered word (Wick contraction).  The kernel kinds are
"full", "pos", "neg" (mass-shell pairings of shell.py) and "zero".

Model instances bundle the family set, the kernel table, the numeric
parameters, the label registry and the kernel memo cache.  Three factory
functions build the models used throughout:

* random_field_model:  one family "ring_a", self-kernel "full";
* split_field_model:   families "a"/"b" with "pos"/"neg" self-kernels and
  zero cross kernels (the random-field algebra presented by frequency
  split);
* quantum_field_model: families "qa"/"qb", both self-kernels "pos", zero
  cross kernels (particle/antiparticle modes of the complex field).

Labels are atomic: add(f, g) registers a new label, and no symbolic
linearity expansion happens inside monomials.  The single exception is the
scalar prefactor of a TestFunction, which creator()/annihilator() factor
out exactly (linearly resp. antilinearly), so identities that rely on
scalar relabeling hold coefficient-wise.
"""

import math
import threading
from dataclasses import dataclass

import numpy as np

from . import shell
from .errors import TermBudgetError, UnknownFamilyError
from .shell import KernelValue

PRUNE_EPS = 1e-14
TERM_BUDGET = 1_000_000

KERNEL_KINDS = ("full", "pos", "neg", "zero")


@dataclass(frozen=True)
class Generator:
    family: str
    dagger: bool
    label: int

    def sort_key(self):
        return (self.family, self.label)


@dataclass(frozen=True)
class NormalMonomial:
    creators: tuple
    annihilators: tuple

    def degree(self):
        return len(self.creators) + len(self.annihilators)

    def sort_key(self):
        return (self.degree(),
                tuple(g.sort_key() for g in self.creators),
                tuple(g.sort_key() for g in self.annihilators))


EMPTY_MONOMIAL = NormalMonomial((), ())


def _sorted_gens(gens):
    return tuple(sorted(gens, key=Generator.sort_key))


class Model:
    """Family set + kernel table + label registry + kernel cache."""

    def __init__(self, name, families, kernel_table, params, kernel_override=None):
        for (fa, fc), kind in kernel_table.items():
            if fa not in families or fc not in families:
                raise UnknownFamilyError(f"kernel table references unknown family ({fa}, {fc})")
            if kind not in KERNEL_KINDS:
                raise ValueError(f"unknown kernel kind {kind!r}")
        for fa in families:
            for fc in families:
                if (fa, fc) not in kernel_table:
                    raise ValueError(f"kernel table is missing the pair ({fa}, {fc})")
        self.name = name
        self.families = tuple(families)
        self.kernel_table = dict(kernel_table)
        self.params = params
        self._labels = []
        self._label_index = {}
        self._kernel_cache = {}
        self._kernel_override = kernel_override
        self._lock = threading.Lock()

    # -- label registry -----------------------------------------------------

    def register(self, f):
        """Register a prefactor-1 test function; returns its label id."""
        key = f.base()
        with self._lock:
            idx = self._label_index.get(key)
            if idx is None:
                idx = len(self._labels)
                self._labels.append(key)
                self._label_index[key] = idx
            return idx

    def label_function(self, idx):
        return self._labels[idx]

    # -- element constructors -----------------------------------------------

    def zero(self):
        return AlgebraElement(self, {})

    def one(self):
        return AlgebraElement(self, {EMPTY_MONOMIAL: 1.0 + 0.0j})

    def scalar(self, c):
        c = complex(c)
        return AlgebraElement(self, {EMPTY_MONOMIAL: c} if c != 0 else {})

    def creator(self, family, f):
        """c(f) with the scalar prefactor factored out complex-linearly."""
        self._check_family(family)
        self._check_dim(f)
        if f.is_zero():
            return self.zero()
        idx = self.register(f)
        mono = NormalMonomial((Generator(family, True, idx),), ())
        return AlgebraElement(self, {mono: f.prefactor})

    def annihilator(self, family, f):
        """a(f) with the scalar prefactor factored out antilinearly."""
        self._check_family(family)
        self._check_dim(f)
        if f.is_zero():
            return self.zero()
        idx = self.register(f)
        mono = NormalMonomial((), (Generator(family, False, idx),))
        return AlgebraElement(self, {mono: f.prefactor.conjugate()})

    def _check_family(self, family):
        if family not in self.families:
            raise UnknownFamilyError(
                f"family {family!r} is not part of model {self.name!r} {self.families}")

    def _check_dim(self, f):
        if f.dim != self.params.dim:
            raise ValueError("test function dimension does not match model params")

    # -- kernels --------------------------------------------------------------

    def kernel_kind(self, ann_family, cre_family):
        return self.kernel_table[(ann_family, cre_family)]

    def kernel_value(self, kind, i, j):
        """Memoized KernelValue for (kind, label i, label j)."""
        if kind == "zero":
            return KernelValue(0j, 0.0, 0)
        key = (kind, i, j)
        with self._lock:
            hit = self._kernel_cache.get(key)
        if hit is not None:
            return hit
        f = self._labels[i]
        g = self._labels[j]
        if self._kernel_override is not None:
            val = KernelValue(complex(self._kernel_override(kind, f, g)), 0.0, 0)
        elif kind == "pos":
            val = shell.ip_pos(f, g, self.params)
        elif kind == "neg":
            val = shell.ip_neg(f, g, self.params)
        else:
            val = shell.ip_full(f, g, self.params)
        with self._lock:
            # Idempotent: concurrent fills compute the same deterministic value.
            self._kernel_cache.setdefault(key, val)
        return val

    def contraction(self, ann, cre):
        """Scalar [a(f), c(g)] for generators, or None when identically zero."""
        kind = self.kernel_kind(ann.family, cre.family)
        if kind == "zero":
            return None
        return self.kernel_value(kind, ann.label, cre.label).value


class AlgebraElement:
    """Immutable-by-convention dict of NormalMonomial -> complex."""

    __slots__ = ("model", "_terms")

    def __init__(self, model, terms):
        self.model = model
        self._terms = {m: c for m, c in terms.items() if abs(c) > PRUNE_EPS}

    def terms(self):
        """Monomial/coefficient pairs in canonical order."""
        return sorted(self._terms.items(), key=lambda mc: mc[0].sort_key())

    def coefficient(self, mono):
        return self._terms.get(mono, 0j)

    def is_zero(self):
        return not self._terms

    def degree(self):
        return max((m.degree() for m in self._terms), default=0)

    def scalar_part(self):
        return self._terms.get(EMPTY_MONOMIAL, 0j)

    def max_abs_coeff(self):
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def nonscalar_mass(self):
        """Sum of |coeff| over all non-scalar monomials."""
        return sum(abs(c) for m, c in self._terms.items() if m != EMPTY_MONOMIAL)

    def coefficient_distance(self, other):
        """max |c_self - c_other| over the union of monomials."""
        self._check_same_model(other)
        keys = set(self._terms) | set(other._terms)
        return max((abs(self._terms.get(k, 0j) - other._terms.get(k, 0j)) for k in keys),
                   default=0.0)

    def _check_same_model(self, other):
        if self.model is not other.model:
            raise ValueError("elements belong to different models")

    # -- ring structure ------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check_same_model(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0j) + c
        return AlgebraElement(self.model, out)

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check_same_model(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0j) - c
        return AlgebraElement(self.model, out)

    def __neg__(self):
        return AlgebraElement(self.model, {m: -c for m, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        return AlgebraElement(self.model,
                              {m: c * complex(other) for m, c in self._terms.items()})

    def __rmul__(self, other):
        return AlgebraElement(self.model,
                              {m: complex(other) * c for m, c in self._terms.items()})

    def adjoint(self):
        return adjoint(self)

    def vev(self):
        return vacuum_expectation(self)


# ---------------------------------------------------------------------------
# operations

def mul(a, b):
    """Normal-ordered product via Wick reduction."""
    a._check_same_model(b)
    model = a.model
    out = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            cc = ca * cb
            for (cres_rem, anns_rem), k_coeff in _reduce(model, ma.annihilators,
                                                         mb.creators).items():
                mono = NormalMonomial(_sorted_gens(ma.creators + cres_rem),
                                      _sorted_gens(anns_rem + mb.annihilators))
                out[mono] = out.get(mono, 0j) + cc * k_coeff
                if len(out) > TERM_BUDGET:
                    raise TermBudgetError(
                        f"normal-ordered product exceeded {TERM_BUDGET} monomials")
    return AlgebraElement(model, out)


def _reduce(model, anns, cres):
    """Normal-order a(anns) * c(cres); returns {(cres_left, anns_right): coeff}.

    Recursion: the annihilator adjacent to the creator block either
    contracts with one of the creators (scalar kernel factor) or commutes
    through to the right.
    """
    if not anns or not cres:
        return {(cres, anns): 1.0 + 0.0j}
    x = anns[-1]
    rest = anns[:-1]
    out = {}
    for (c2, a2), co in _reduce(model, rest, cres).items():
        key = (c2, a2 + (x,))
        out[key] = out.get(key, 0j) + co
    for j, y in enumerate(cres):
        kv = model.contraction(x, y)
        if kv is None:
            continue
        for (c2, a2), co in _reduce(model, rest, cres[:j] + cres[j + 1:]).items():
            key = (c2, a2)
            out[key] = out.get(key, 0j) + co * kv
    return out


def adjoint(a):
    """Star operation: reverses words, swaps daggers, conjugates scalars."""
    out = {}
    for m, c in a._terms.items():
        mono = NormalMonomial(
            _sorted_gens(Generator(g.family, True, g.label) for g in m.annihilators),
            _sorted_gens(Generator(g.family, False, g.label) for g in m.creators))
        out[mono] = out.get(mono, 0j) + c.conjugate()
    return AlgebraElement(a.model, out)


def commutator(a, b):
    return mul(a, b) - mul(b, a)


def vacuum_expectation(a):
    """<vacuum| a |vacuum>: the coefficient of the empty monomial."""
    return a.scalar_part()


def gns_vector(a):
    """a applied to the vacuum: drop every monomial with annihilators."""
    return AlgebraElement(a.model, {m: c for m, c in a._terms.items()
                                    if not m.annihilators})


def gns_inner(u, v):
    """<u vacuum, v vacuum> = vev(adjoint(u) v)."""
    return vacuum_expectation(mul(adjoint(u), v))


def gram_matrix(elements):
    """Hermitian Gram matrix of GNS vectors, as a complex ndarray."""
    n = len(elements)
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            val = gns_inner(elements[i], elements[j])
            out[i, j] = val
            if j != i:
                out[j, i] = val.conjugate()
    return out


def element_records(a):
    """JSON-able representation: one record per monomial, canonical order."""
    recs = []
    for m, c in a.terms():
        recs.append({
            "coeff": [c.real, c.imag],
            "creators": [[g.family, True, g.label] for g in m.creators],
            "annihilators": [[g.family, False, g.label] for g in m.annihilators],
        })
    return recs


# ---------------------------------------------------------------------------
# model factories

def random_field_model(params, kernel_override=None):
    return Model("random", ("ring_a",), {("ring_a", "ring_a"): "full"},
                 params, kernel_override)


def split_field_model(params, kernel_override=None):
    table = {("a", "a"): "pos", ("b", "b"): "neg",
             ("a", "b"): "zero", ("b", "a"): "zero"}
    return Model("split", ("a", "b"), table, params, kernel_override)


def quantum_field_model(params, kernel_override=None):
    table = {("qa", "qa"): "pos", ("qb", "qb"): "pos",
             ("qa", "qb"): "zero", ("qb", "qa"): "zero"}
    return Model("quantum", ("qa", "qb"), table, params, kernel_override)
