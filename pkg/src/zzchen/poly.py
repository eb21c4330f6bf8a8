"""Exact multivariate polynomials over arbitrary-precision rationals.

A Poly is a sparse map from exponent tuples to Fraction coefficients.
Everything downstream (forms, differentials, shuffle identities) relies on
this arithmetic being exact, so no floats enter here except through the
dedicated evaluation helpers.
"""

from __future__ import annotations

import re
from fractions import Fraction

import numpy as np


class Poly:
    """Polynomial in `nvars` variables with Fraction coefficients.

    Invariant: no zero coefficients are stored, exponent tuples all have
    length `nvars`.
    """

    __slots__ = ("nvars", "terms", "_key")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for exp, c in terms.items():
                c = Fraction(c)
                if c:
                    if len(exp) != nvars:
                        raise ValueError("exponent arity mismatch")
                    self.terms[tuple(exp)] = c
        self._key = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars):
        return Poly(nvars)

    @staticmethod
    def const(nvars, c):
        return Poly(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def var(nvars, i, power=1):
        """The monomial x_i^power with 0-based index i."""
        exp = [0] * nvars
        exp[i] = power
        return Poly(nvars, {tuple(exp): Fraction(1)})

    # -- basic predicates ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def key(self):
        if self._key is None:
            self._key = tuple(sorted(self.terms.items()))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, self.key()))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nvars, other)
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, Fraction(0)) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        p = Poly(self.nvars)
        p.terms = out
        return p

    def __neg__(self):
        p = Poly(self.nvars)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly(self.nvars)
            p = Poly(self.nvars)
            p.terms = {e: c * other for e, c in self.terms.items()}
            return p
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        p = Poly(self.nvars)
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- calculus -----------------------------------------------------------

    def partial(self, i):
        """d/dx_i, 0-based index."""
        out = {}
        for exp, c in self.terms.items():
            if exp[i]:
                e = list(exp)
                e[i] -= 1
                out[tuple(e)] = c * exp[i]
        p = Poly(self.nvars)
        p.terms = out
        return p

    def antiderivative(self, i):
        """Indefinite integral in x_i (constant 0)."""
        out = {}
        for exp, c in self.terms.items():
            e = list(exp)
            e[i] += 1
            out[tuple(e)] = c / e[i]
        p = Poly(self.nvars)
        p.terms = out
        return p

    def substitute(self, polys):
        """Substitute x_i := polys[i]; all polys share a new variable set."""
        if len(polys) != self.nvars:
            raise ValueError("need one substitution per variable")
        if not polys:
            raise ValueError("cannot substitute into 0-variable polynomial")
        nv = polys[0].nvars
        out = Poly.zero(nv)
        pcache = {}
        for exp, c in self.terms.items():
            term = Poly.const(nv, c)
            for i, e in enumerate(exp):
                if e:
                    if (i, e) not in pcache:
                        pcache[(i, e)] = polys[i] ** e
                    term = term * pcache[(i, e)]
            out = out + term
        return out

    def eval_exact(self, point):
        """Value at a point of Fractions."""
        total = Fraction(0)
        for exp, c in self.terms.items():
            v = c
            for x, e in zip(point, exp):
                if e:
                    v *= Fraction(x) ** e
            total += v
        return total

    def eval_float(self, point):
        total = 0.0
        for exp, c in self.terms.items():
            v = float(c)
            for x, e in zip(point, exp):
                if e:
                    v *= x ** e
            total += v
        return total

    def float_evaluator(self):
        """Closure for hot quadrature loops; avoids numpy for small polys."""
        if not self.terms:
            return lambda point: 0.0
        items = [(exp, float(c)) for exp, c in sorted(self.terms.items())]
        if len(items) <= 6:
            def ev(point):
                total = 0.0
                for exp, c in items:
                    v = c
                    for x, e in zip(point, exp):
                        if e == 1:
                            v *= x
                        elif e:
                            v *= x ** e
                    total += v
                return total

            return ev
        exps = np.array([e for e, _ in items], dtype=np.int64)
        coeffs = np.array([c for _, c in items])

        def ev(point):
            point = np.asarray(point, dtype=float)
            return float(coeffs @ np.prod(point ** exps, axis=1))

        return ev

    def max_degree(self, i):
        return max((e[i] for e in self.terms), default=0)

    # -- text form ----------------------------------------------------------

    def format(self, names):
        """Canonical string, e.g. "3/2 x1^2 x2 - x2"."""
        if not self.terms:
            return "0"
        pieces = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            mono = " ".join(
                names[i] + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(exp)
                if e
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag} {mono}"
            if not pieces:
                pieces.append(body if c > 0 else "-" + body)
            else:
                pieces.append(("+ " if c > 0 else "- ") + body)
        return " ".join(pieces)

    def __repr__(self):
        return f"Poly({self.format([f'x{i+1}' for i in range(self.nvars)])})"


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z]\w*)|(?P<op>\^|\*\*|\*|\+|-|\(|\)))")


def parse_poly(text, names):
    """Parse a polynomial string over the given variable names.

    Accepts rational coefficients ("3/2"), juxtaposition or "*" for
    products, and "^" or "**" for powers, e.g. "3/2 x1^2 x2 - x2".
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ValueError(f"cannot tokenize {text[pos:]!r}")
            break
        pos = m.end()
        if m.group("num"):
            tokens.append(("num", Fraction(m.group("num"))))
        elif m.group("name"):
            tokens.append(("var", m.group("name")))
        else:
            op = m.group("op")
            tokens.append(("pow" if op in ("^", "**") else op, op))
    index = {n: i for i, n in enumerate(names)}
    nvars = len(names)

    def parse_sum(i):
        total = Poly.zero(nvars)
        sign = 1
        expect_term = True
        while i < len(tokens):
            kind, val = tokens[i]
            if kind in ("+", "-"):
                if expect_term and kind == "-":
                    sign = -sign
                elif expect_term:
                    pass
                else:
                    sign = 1 if kind == "+" else -1
                    expect_term = True
                i += 1
                continue
            if kind == ")":
                break
            term, i = parse_product(i)
            total = total + term * sign
            sign = 1
            expect_term = False
        return total, i

    def parse_product(i):
        result = Poly.const(nvars, 1)
        while i < len(tokens):
            kind, val = tokens[i]
            if kind in ("+", "-", ")"):
                break
            if kind == "*":
                i += 1
                continue
            factor, i = parse_factor(i)
            result = result * factor
        return result, i

    def parse_factor(i):
        kind, val = tokens[i]
        if kind == "num":
            base = Poly.const(nvars, val)
            i += 1
        elif kind == "var":
            if val not in index:
                raise ValueError(f"unknown variable {val!r}")
            base = Poly.var(nvars, index[val])
            i += 1
        elif kind == "(":
            base, i = parse_sum(i + 1)
            if i >= len(tokens) or tokens[i][0] != ")":
                raise ValueError("unbalanced parentheses")
            i += 1
        else:
            raise ValueError(f"unexpected token {val!r}")
        if i < len(tokens) and tokens[i][0] == "pow":
            ekind, eval_ = tokens[i + 1]
            if ekind != "num" or eval_.denominator != 1:
                raise ValueError("exponent must be a nonnegative integer")
            base = base ** int(eval_)
            i += 2
        return base, i

    poly, i = parse_sum(0)
    if i != len(tokens):
        raise ValueError("trailing tokens in polynomial")
    return poly
