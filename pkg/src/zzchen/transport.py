"""Parallel transport and the curved (A-resummed) iterated integral.

Transport along a path uses the ordering where earlier path times
multiply on the left (matching zigzag traversal order), so

    P(t0, t2) = P(t0, t1) . P(t1, t2),      dP(t0, t)/dt = P . a(t)

with a(t) the connection paired with the velocity.  A zag segment
(traversed against the parametrization) contributes the inverse of the
forward transport over the same interval; in series form this is the
anti-ordered expansion with a sign per inserted copy of A, the
orientation convention guarded by the curved chain-map and nilpotent
agreement tests.

The curved iterated integral multiplies one gap factor between every
pair of adjacent marked points: "resummed" mode takes the factor from
the transport ODE, "series" mode truncates each gap at `truncation`
insertions and integrates the ordered insertion times by iterated
Gauss-Legendre rules.
"""

from __future__ import annotations

import numpy as np

from .forms import PolyMatrixForm
from .itint import pullback_values, wedge_values, _check_chain_degree, _zz_slots
from .quadrature import QuadratureSpec, segment_simplex_nodes, simplex_nodes
from .zigzag import zigzag_chain


def connection_on_path(A, point_fn, velocity_fn):
    """a(t) = A(gamma'(t)) as an m x m matrix-valued callable."""
    from .itint import evaluate_compiled

    def a(t):
        return evaluate_compiled(A, point_fn(t), [velocity_fn(t)])

    return a


def connection_along_family(A, fam, u0):
    u0 = tuple(u0)
    return connection_on_path(A, lambda t: fam.point(u0, t), lambda t: fam.velocity(u0, t))


def _rk4_step(P, a, t, h):
    k1 = P @ a(t)
    k2 = (P + 0.5 * h * k1) @ a(t + 0.5 * h)
    k3 = (P + 0.5 * h * k2) @ a(t + 0.5 * h)
    k4 = (P + h * k3) @ a(t + h)
    return P + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def transport_ode(a, msize, t0, t1, steps):
    """P(t0, t1) by classical 4th-order steps; exact identity at t0 = t1."""
    P = np.eye(msize)
    if t1 == t0:
        return P
    h = (t1 - t0) / steps
    t = t0
    for _ in range(steps):
        P = _rk4_step(P, a, t, h)
        t += h
    return P


def transport_series(a, msize, t0, t1, order, points, reverse=False):
    """Ordered-integral expansion of the transport over [t0, t1].

    With reverse=True this is the gap factor for traversal against the
    parametrization: anti-ordered products of -a, i.e. the inverse
    transport up to the truncation tail.
    """
    total = np.eye(msize)
    sgn = -1.0 if reverse else 1.0
    for q in range(1, order + 1):
        acc = np.zeros((msize, msize))
        for taus, w in segment_simplex_nodes(q, t0, t1, points):
            seq = tuple(reversed(taus)) if reverse else taus
            prod = sgn * a(seq[0])
            for tau in seq[1:]:
                prod = prod @ (sgn * a(tau))
            acc += w * prod
        total = total + acc
    return total


class TransportLine:
    """Cumulative transports P(0, t) along one path on a uniform grid.

    seg(a, b) returns P(a, b) for arbitrary 0 <= a, b <= 1 (the inverse
    transport when b < a) by refining from the nearest grid point.
    """

    def __init__(self, a, msize, steps):
        self.a = a
        self.msize = msize
        self.steps = steps
        h = self.h = 1.0 / steps
        # cache connection samples at grid and half-grid points
        avals = [a(0.5 * i * h) for i in range(2 * steps + 1)]
        grid = [np.eye(msize)]
        P = grid[0]
        for i in range(steps):
            a0, am, a1 = avals[2 * i], avals[2 * i + 1], avals[2 * i + 2]
            k1 = P @ a0
            k2 = (P + 0.5 * h * k1) @ am
            k3 = (P + 0.5 * h * k2) @ am
            k4 = (P + h * k3) @ a1
            P = P + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            grid.append(P)
        self.grid = grid

    def at(self, t):
        """P(0, t)."""
        if t <= 0.0:
            return np.eye(self.msize)
        if t >= 1.0:
            return self.grid[-1]
        i = int(t * self.steps)
        base = self.grid[i]
        rem = t - i * self.h
        if rem <= 1e-15:
            return base
        return _rk4_step(base, self.a, i * self.h, rem)

    def seg(self, t0, t1):
        if t1 >= t0:
            return np.linalg.solve(self.at(t0), self.at(t1))
        return np.linalg.inv(self.seg(t1, t0))


def parallel_transport(A, fam, u0, t0, t1, mode="ode", spec=None, steps=None, order=None):
    """Transport of the connection A along gamma_{u0} from t0 to t1."""
    spec = spec or QuadratureSpec()
    if t0 > t1:
        raise ValueError("t0 must not exceed t1")
    a = connection_along_family(A, fam, u0)
    if mode == "ode":
        return transport_ode(a, A.msize, t0, t1, steps or spec.ode_steps)
    if mode == "series":
        return transport_series(a, A.msize, t0, t1, order or spec.truncation,
                                spec.points_per_axis)
    raise ValueError(f"unknown transport mode {mode!r}")


# -- the holonomy words and their partial sums --------------------------------------


def transport_word(A, n):
    """The n-column word 1 (x) (A ... A 1) (x) (1 ... 1 1); its iterated
    integral is the n-th ordered term of the path-ordered exponential."""
    unit = PolyMatrixForm.unit(A.dim, A.msize)
    if n == 0:
        return zigzag_chain(unit)
    rows = [((A,) * n, unit), ((unit,) * n, unit)]
    return zigzag_chain(unit, rows)


def ordered_exponential_terms(a, msize, nmax, grid=800):
    """F_q(1) for F_q(t) = int_0^t F_{q-1} a, by cumulative Simpson.

    Evaluates the same ordered simplex integrals as it_zz on the
    transport words, with a recursive one-dimensional rule so that large
    q stays tractable; agreement with it_zz at small q is tested.
    """
    if grid % 2:
        grid += 1
    xs = np.linspace(0.0, 1.0, grid + 1)
    avals = [a(t) for t in xs]
    F = [np.eye(msize) for _ in xs]
    out = [np.eye(msize)]
    h = 1.0 / grid
    for _ in range(nmax):
        integrand = [F[i] @ avals[i] for i in range(len(xs))]
        G = [np.zeros((msize, msize))]
        for k in range(0, grid, 2):
            G.append(
                G[k]
                + (h / 12.0)
                * (5.0 * integrand[k] + 8.0 * integrand[k + 1] - integrand[k + 2])
            )
            G.append(
                G[k]
                + (h / 3.0) * (integrand[k] + 4.0 * integrand[k + 1] + integrand[k + 2])
            )
        F = G
        out.append(F[-1])
    return out


def holonomy1(A, fam, u0, N, grid=800):
    """Partial sum over n <= N of the transport-word iterated integrals."""
    a = connection_along_family(A, fam, u0)
    terms = ordered_exponential_terms(a, A.msize, N, grid)
    total = np.zeros((A.msize, A.msize))
    for T in terms:
        total = total + T
    return total


# -- curved iterated integral ---------------------------------------------------------


def _col_time(col, n, ts):
    if col == 0:
        return 0.0
    if col == n + 1:
        return 1.0
    return ts[col - 1]


def it_curved(ctx, chain, fam, spec, u0, dirs, mode="resummed"):
    """The A-twisted iterated integral on zigzag chains."""
    u0 = tuple(u0)
    dirs = [tuple(d) for d in dirs]
    _check_chain_degree(chain, len(dirs), "it_curved")
    msize = ctx.A.msize
    a = None if ctx.A.is_zero() else connection_along_family(ctx.A, fam, u0)
    if a is None:
        gap_factory = None
    elif mode == "resummed":
        line = TransportLine(a, msize, spec.ode_steps)
        gap_factory = lambda ts: line.seg
    elif mode == "series":
        def gap_factory(ts):
            def factor(lo, hi):
                if hi >= lo:
                    return transport_series(a, msize, lo, hi, spec.truncation,
                                            spec.points_per_axis)
                return transport_series(a, msize, hi, lo, spec.truncation,
                                        spec.points_per_axis, reverse=True)

            return factor
    else:
        raise ValueError(f"unknown curved mode {mode!r}")

    total = None
    for coeff, mono in chain:
        val = _traversal_integral(mono, fam, spec, u0, dirs, gap_factory)
        total = float(coeff) * val if total is None else total + float(coeff) * val
    return np.zeros((msize, msize)) if total is None else total


def _traversal_integral(mono, fam, spec, u0, dirs, gap_factory):
    """Common quadrature loop: entry pullbacks with gap factors between them."""
    n = mono.n
    p = len(dirs)
    slots = _zz_slots(mono)
    msize = mono.xL.msize
    full = tuple(range(n + p))
    acc = np.zeros((msize, msize))
    for ts, weight in simplex_nodes(n, spec.points_per_axis):
        gap = gap_factory(ts) if gap_factory is not None else None
        value = None
        prev_t = None
        for entry, col in slots:
            t = _col_time(col, n, ts)
            if prev_t is not None and gap is not None and prev_t != t:
                value = wedge_values(value, {(): gap(prev_t, t)})
            prev_t = t
            rows = []
            if 1 <= col <= n:
                rows.append((col - 1, fam.velocity(u0, t)))
            rows.extend((n + ai, fam.du(u0, t, dirs[ai])) for ai in range(p))
            pv = pullback_values(entry.form(), fam.point(u0, t), rows)
            value = pv if value is None else wedge_values(value, pv)
            if not value:
                break
        if value:
            term = value.get(full)
            if term is not None:
                acc = acc + weight * term
    return acc


def curved_chain_map_residual(ctx, chain, fam, spec, samples, mode="resummed"):
    """max over samples of || d_param(It^A(c)) - It^A(curved_D(c)) ||_inf."""
    from .curved import curved_D
    from .itint import d_param

    Dc = curved_D(ctx, chain)
    worst = 0.0
    for u0, dirs in samples:
        lhs = d_param(
            lambda u, sub: it_curved(ctx, chain, fam, spec, u, sub, mode),
            u0,
            dirs,
            spec.fd_step,
        )
        rhs = it_curved(ctx, Dc, fam, spec, u0, dirs, mode)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
