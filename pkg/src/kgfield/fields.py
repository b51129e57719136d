"""Smeared field elements over the three kernel models.

Random model (single family "ring_a", self-kernel "full"):

* phi(f)                 complex field, linear in f:  a(f*) + c(f)
* random_observable(f)   hermitian part  (phi(f) + phi(f)*) / 2
* plain_observable(f)    a(f) + c(f), no frequency reflection
* quantum_observable_in_random(f)
                         a(bullet f) + c(bullet f); the image of the
                         quantum observable under the moment-preserving map
                         into the random model

Split model (families "a" pos / "b" neg, zero cross kernels):

* split_phi(f), split_observable(f)
                         the same random field presented by frequency
                         split; all vacuum moments match the random model

Quantum model (families "qa"/"qb", both "pos", zero cross kernels):

* psi(f)                 charged field:  a_qa(f*) + c_qb(f)
* combined_annihilator(f)  a_qa(f*) + a_qb(f); kills the vacuum, and
                         the observable is it plus its adjoint
* quantum_observable(f)  psi(f) + psi(f)*
* random_observable_in_quantum(f)
                         O(bullet(f + f*)) / 2; the image of the random
                         observable inside the quantum model

The recovery identities hold coefficient-wise, not just numerically:

    phi(f) == random_observable(f) - i random_observable(i f)
    psi(f) == (quantum_observable(f) - i quantum_observable(i f)) / 2

because creator() extracts scalar prefactors linearly and annihilator()
extracts them antilinearly.
"""

from . import testfn, wick


def _expect(model, name):
    if model.name != name:
        raise ValueError(f"builder needs the {name!r} model, got {model.name!r}")


# ---------------------------------------------------------------------------
# random model

def phi(model, f):
    _expect(model, "random")
    return model.annihilator("ring_a", testfn.conjugate(f)) + model.creator("ring_a", f)


def random_observable(model, f):
    p = phi(model, f)
    return 0.5 * (p + wick.adjoint(p))


def plain_observable(model, f):
    """a(f) + c(f): hermitian for real f, no bullet dressing."""
    _expect(model, "random")
    return model.annihilator("ring_a", f) + model.creator("ring_a", f)


def quantum_observable_in_random(model, f):
    _expect(model, "random")
    bf = testfn.bullet(f)
    return model.annihilator("ring_a", bf) + model.creator("ring_a", bf)


# ---------------------------------------------------------------------------
# split model

def split_phi(model, f):
    _expect(model, "split")
    fc = testfn.conjugate(f)
    return (model.annihilator("a", fc) + model.annihilator("b", fc)
            + model.creator("a", f) + model.creator("b", f))


def split_observable(model, f):
    s = split_phi(model, f)
    return 0.5 * (s + wick.adjoint(s))


# ---------------------------------------------------------------------------
# quantum model

def psi(model, f):
    _expect(model, "quantum")
    return model.annihilator("qa", testfn.conjugate(f)) + model.creator("qb", f)


def combined_annihilator(model, f):
    _expect(model, "quantum")
    return model.annihilator("qa", testfn.conjugate(f)) + model.annihilator("qb", f)


def quantum_observable(model, f):
    th = combined_annihilator(model, f)
    return th + wick.adjoint(th)


def random_observable_in_quantum(model, f):
    _expect(model, "quantum")
    h = testfn.bullet(testfn.add(f, testfn.conjugate(f)))
    return 0.5 * quantum_observable(model, h)


def product(elements):
    """Left-to-right normal-ordered product of a non-empty word."""
    it = iter(elements)
    out = next(it)
    for e in it:
        out = wick.mul(out, e)
    return out
