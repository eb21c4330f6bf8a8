"""Finite-parameter polynomial path and bigon families.

PathFamily: (u, t) in [0,1]^r x [0,1] -> R^d, each component a Poly in
(u_1..u_r, t).  BigonFamily: (u, t, s) -> R^d.  Derivatives are exact
polynomials, so forms on path/bigon space are realized through these
families and the de Rham differential on the parameter box is checkable
by finite differences.

Also provides the exact closed-form line/surface integral oracles used
against transport and 2-holonomy.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .poly import Poly, parse_poly


class PathFamily:
    """Polynomial family of paths; variables (u_1..u_r, t)."""

    def __init__(self, r, dim, components):
        if len(components) != dim:
            raise ValueError("need one component per target dimension")
        nv = r + 1
        if any(c.nvars != nv for c in components):
            raise ValueError("components must use variables (u_1..u_r, t)")
        self.r = r
        self.dim = dim
        self.components = tuple(components)
        self._dt = tuple(c.partial(r) for c in components)
        self._du = tuple(
            tuple(c.partial(a) for c in components) for a in range(r)
        )
        self._ev = [c.float_evaluator() for c in components]
        self._ev_dt = [c.float_evaluator() for c in self._dt]
        self._ev_du = [[c.float_evaluator() for c in row] for row in self._du]

    def point(self, u, t):
        args = tuple(u) + (t,)
        return np.array([ev(args) for ev in self._ev])

    def velocity(self, u, t):
        args = tuple(u) + (t,)
        return np.array([ev(args) for ev in self._ev_dt])

    def du(self, u, t, direction):
        """Directional derivative in parameter space."""
        args = tuple(u) + (t,)
        out = np.zeros(self.dim)
        for a, w in enumerate(direction):
            if w:
                out += w * np.array([ev(args) for ev in self._ev_du[a]])
        return out

    def restrict_exact(self, u):
        """Components as exact polynomials of t alone at rational u."""
        subs = [Poly.const(1, Fraction(x)) for x in u] + [Poly.var(1, 0)]
        return [c.substitute(subs) for c in self.components]

    def reparametrize(self, phi):
        """gamma(u, phi(t)) for a 1-variable polynomial phi."""
        subs = [Poly.var(self.r + 1, a) for a in range(self.r)]
        subs.append(phi.substitute([Poly.var(self.r + 1, self.r)]))
        return PathFamily(self.r, self.dim, [c.substitute(subs) for c in self.components])

    def to_literal(self):
        names = [f"u{i+1}" for i in range(self.r)] + ["t"]
        return {
            "kind": "path",
            "r": self.r,
            "dim": self.dim,
            "components": [c.format(names) for c in self.components],
        }


class BigonFamily:
    """Polynomial family of squares; variables (u_1..u_r, t, s).

    endpoint_constant reports whether the two vertical edges t=0, t=1 are
    s-independent (a true bigon), checked symbolically.
    """

    def __init__(self, r, dim, components):
        nv = r + 2
        if len(components) != dim or any(c.nvars != nv for c in components):
            raise ValueError("components must use variables (u_1..u_r, t, s)")
        self.r = r
        self.dim = dim
        self.components = tuple(components)
        self._dt = tuple(c.partial(r) for c in components)
        self._ds = tuple(c.partial(r + 1) for c in components)
        self._du = tuple(tuple(c.partial(a) for c in components) for a in range(r))
        self._ev = [c.float_evaluator() for c in components]
        self._ev_dt = [c.float_evaluator() for c in self._dt]
        self._ev_ds = [c.float_evaluator() for c in self._ds]
        self._ev_du = [[c.float_evaluator() for c in row] for row in self._du]

    def point(self, u, t, s):
        args = tuple(u) + (t, s)
        return np.array([ev(args) for ev in self._ev])

    def dt(self, u, t, s):
        args = tuple(u) + (t, s)
        return np.array([ev(args) for ev in self._ev_dt])

    def ds(self, u, t, s):
        args = tuple(u) + (t, s)
        return np.array([ev(args) for ev in self._ev_ds])

    def du(self, u, t, s, direction):
        args = tuple(u) + (t, s)
        out = np.zeros(self.dim)
        for a, w in enumerate(direction):
            if w:
                out += w * np.array([ev(args) for ev in self._ev_du[a]])
        return out

    @property
    def endpoint_constant(self):
        for edge_value in (Fraction(0), Fraction(1)):
            for c in self._ds:
                nv = self.r + 2
                subs = [Poly.var(nv - 1, a) for a in range(self.r)]
                subs.append(Poly.const(nv - 1, edge_value))  # t := edge
                subs.append(Poly.var(nv - 1, self.r))        # s stays
                if not c.substitute(subs).is_zero():
                    return False
        return True

    def horizontal_path(self, s_fixed_varname_slot=None):
        """The family (u, s) x t -> M of horizontal slices gamma_s(t)."""
        # treat s as one extra parameter: r' = r + 1, order (u_1..u_r, s, t)
        nv = self.r + 2
        perm = [Poly.var(nv, a) for a in range(self.r)] + [
            Poly.var(nv, self.r + 1),  # t comes last in PathFamily order
            Poly.var(nv, self.r),      # s is the extra parameter
        ]
        comps = [c.substitute(perm) for c in self.components]
        return PathFamily(self.r + 1, self.dim, comps)

    def left_edge_path(self):
        """gamma^0(s) = Sigma(0, s) as a PathFamily in s."""
        nv = self.r + 1
        subs = [Poly.var(nv, a) for a in range(self.r)]
        subs.append(Poly.const(nv, 0))       # t := 0
        subs.append(Poly.var(nv, self.r))    # s is the path parameter
        comps = [c.substitute(subs) for c in self.components]
        return PathFamily(self.r, self.dim, comps)

    def to_literal(self):
        names = [f"u{i+1}" for i in range(self.r)] + ["t", "s"]
        return {
            "kind": "bigon",
            "r": self.r,
            "dim": self.dim,
            "components": [c.format(names) for c in self.components],
        }


def path_from_literal(lit):
    r = int(lit["r"])
    dim = int(lit["dim"])
    names = [f"u{i+1}" for i in range(r)] + ["t"]
    comps = [parse_poly(s, names) for s in lit["components"]]
    return PathFamily(r, dim, comps)


def bigon_from_literal(lit):
    r = int(lit["r"])
    dim = int(lit["dim"])
    names = [f"u{i+1}" for i in range(r)] + ["t", "s"]
    comps = [parse_poly(s, names) for s in lit["components"]]
    return BigonFamily(r, dim, comps)


def family_from_literal(lit):
    if lit.get("kind") == "bigon":
        return bigon_from_literal(lit)
    return path_from_literal(lit)


# -- exact oracles ---------------------------------------------------------------


def pullback_1form_exact(A, fam, u):
    """A(gamma'(t)) along gamma_u as an exact matrix of t-polynomials."""
    comps = fam.restrict_exact(u)
    vels = [c.partial(0) for c in comps]
    m = A.msize
    out = [[Poly.zero(1) for _ in range(m)] for _ in range(m)]
    for idx, mat in A.terms.items():
        if len(idx) != 1:
            continue
        mu = idx[0] - 1
        for i in range(m):
            for j in range(m):
                p = mat[i][j]
                if not p.is_zero():
                    out[i][j] = out[i][j] + p.substitute(comps) * vels[mu]
    return out


def line_integral_exact(A, fam, u, t0=Fraction(0), t1=Fraction(1)):
    """Exact integral of the pulled-back connection along gamma_u|[t0,t1]."""
    pulled = pullback_1form_exact(A, fam, u)
    return tuple(
        tuple(
            p.antiderivative(0).eval_exact((t1,)) - p.antiderivative(0).eval_exact((t0,))
            for p in row
        )
        for row in pulled
    )


def surface_integral_exact(B, fam, u):
    """Exact integral over [0,1]^2 of B(d_t Sigma, d_s Sigma) for a bigon family."""
    nv = fam.r + 2
    subs = [Poly.const(2, Fraction(x)) for x in u]
    subs.append(Poly.var(2, 0))  # t
    subs.append(Poly.var(2, 1))  # s
    comps = [c.substitute(subs) for c in fam.components]
    dts = [c.partial(0) for c in comps]
    dss = [c.partial(1) for c in comps]
    m = B.msize
    out = [[Poly.zero(2) for _ in range(m)] for _ in range(m)]
    for idx, mat in B.terms.items():
        if len(idx) != 2:
            continue
        a, b = idx[0] - 1, idx[1] - 1
        det = dts[a] * dss[b] - dts[b] * dss[a]
        for i in range(m):
            for j in range(m):
                p = mat[i][j]
                if not p.is_zero():
                    out[i][j] = out[i][j] + p.substitute(comps) * det
    total = []
    for row in out:
        vals = []
        for p in row:
            q = p.antiderivative(0).antiderivative(1)
            vals.append(
                q.eval_exact((Fraction(1), Fraction(1)))
                - q.eval_exact((Fraction(0), Fraction(1)))
                - q.eval_exact((Fraction(1), Fraction(0)))
                + q.eval_exact((Fraction(0), Fraction(0)))
            )
        total.append(tuple(vals))
    return tuple(total)
