"""Rational linear combinations of hashable monomials.

Monomial objects only need a .key() returning a hashable canonical form
and an .is_zero() predicate.  Chains are kept normalized: no zero
coefficients, no zero monomials.
"""

from __future__ import annotations

from fractions import Fraction


class Chain:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        # key -> (coefficient, monomial)
        self.terms = {}
        if terms:
            for coeff, mono in terms:
                self.add_term(coeff, mono)

    @staticmethod
    def of(mono, coeff=1):
        c = Chain()
        c.add_term(coeff, mono)
        return c

    def add_term(self, coeff, mono):
        coeff = Fraction(coeff)
        if not coeff or mono.is_zero():
            return
        k = mono.key()
        if k in self.terms:
            s = self.terms[k][0] + coeff
            if s:
                self.terms[k] = (s, self.terms[k][1])
            else:
                del self.terms[k]
        else:
            self.terms[k] = (coeff, mono)

    def __iter__(self):
        """Deterministic iteration over (coeff, monomial) pairs."""
        for k in sorted(self.terms):
            yield self.terms[k]

    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = Chain()
        out.terms = dict(self.terms)
        for coeff, mono in other:
            out.add_term(coeff, mono)
        return out

    def scale(self, c):
        c = Fraction(c)
        out = Chain()
        if c:
            out.terms = {k: (v * c, m) for k, (v, m) in self.terms.items()}
        return out

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return {k: v for k, (v, _) in self.terms.items()} == {
            k: v for k, (v, _) in other.terms.items()
        }

    def __repr__(self):
        if not self.terms:
            return "Chain(0)"
        bits = [f"{coeff}*{mono!r}" for coeff, mono in self]
        return "Chain(" + " + ".join(bits) + ")"


def apply_linear(op, chain):
    """Extend a monomial -> Chain map linearly."""
    out = Chain()
    for coeff, mono in chain:
        piece = op(mono)
        for c2, m2 in piece:
            out.add_term(coeff * c2, m2)
    return out
