"""Gauss-Legendre rules and iterated (ordered-simplex) quadrature.

Simplex integration uses the nested form t_1 in [0,1], t_2 in [t_1, 1],
..., as an iterated 1-d rule; this extends directly to the ordered
polytopes of the curved iterated integral, where insertion times are
ordered within the interval between their bounding column times.
Quadrature nodes are enumerated in a fixed lexicographic order, so sums
are bit-identical across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class QuadratureSpec:
    """Settings bundle for the numeric layer."""

    points_per_axis: int = 12
    truncation: int = 4
    fd_step: float = 1e-4
    ode_steps: int = 200

    def __post_init__(self):
        if self.points_per_axis <= 0 or self.truncation < 0 or self.ode_steps <= 0:
            raise ValueError("quadrature settings must be positive")
        if not (0 < self.fd_step <= 1e-2):
            raise ValueError("fd_step must lie in (0, 1e-2]")

    def with_points(self, g):
        return QuadratureSpec(g, self.truncation, self.fd_step, self.ode_steps)


_GL_CACHE = {}


def gauss_legendre_01(g):
    """Nodes and weights on [0, 1]."""
    if g not in _GL_CACHE:
        x, w = np.polynomial.legendre.leggauss(g)
        _GL_CACHE[g] = ((x + 1.0) / 2.0, w / 2.0)
    return _GL_CACHE[g]


def simplex_nodes(n, g):
    """Nodes/weights for the ordered simplex 0 <= t_1 <= ... <= t_n <= 1.

    Iterated rule: t_i runs over a scaled Gauss-Legendre grid on
    [t_{i-1}, 1].  Yields (t tuple, weight) in lexicographic node order.
    """
    if n == 0:
        yield (), 1.0
        return
    x, w = gauss_legendre_01(g)

    def rec(prefix, lower, weight):
        depth = len(prefix)
        span = 1.0 - lower
        for i in range(g):
            t = lower + span * x[i]
            wt = weight * span * w[i]
            if depth + 1 == n:
                yield prefix + (t,), wt
            else:
                yield from rec(prefix + (t,), t, wt)

    yield from rec((), 0.0, 1.0)


def segment_simplex_nodes(q, a, b, g):
    """Ordered q-tuples a <= tau_1 <= ... <= tau_q <= b with weights."""
    if q == 0:
        yield (), 1.0
        return
    x, w = gauss_legendre_01(g)

    def rec(prefix, lower, weight):
        depth = len(prefix)
        span = b - lower
        for i in range(g):
            t = lower + span * x[i]
            wt = weight * span * w[i]
            if depth + 1 == q:
                yield prefix + (t,), wt
            else:
                yield from rec(prefix + (t,), t, wt)

    yield from rec((), a, 1.0)


def product_nodes(*generators_factories):
    """Lexicographic product of node generators (factories re-invoked)."""
    if not generators_factories:
        yield (), 1.0
        return
    head, tail = generators_factories[0], generators_factories[1:]
    for nodes, w in head():
        for rest, w2 in product_nodes(*tail):
            yield (nodes,) + rest, w * w2


def compositions_up_to(slots, total):
    """All q-vectors with `slots` nonnegative entries summing to <= total."""
    if slots == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in compositions_up_to(slots - 1, total - first):
            yield (first,) + rest
