"""Fibonacci vector sequences, reflection closures, depth, and properly
situated pairs of roots.

The two-sided Fibonacci sequence {ab}^xi_n has seeds a (n=0), b (n=1) and
recurrence x_{n-1} + x_{n+1} = 2 xi x_n.  With xi = (a|b) and unit seeds it
satisfies (x_n|x_n) = 1, (x_n|x_{n+1}) = (a|b), and enumerates the
reflection closure of {a, b} up to sign: x_{n+1} = -r_{x_n}(x_{n-1}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from . import coxeter
from .coxeter import CoxeterSystem, Element, MixedSigns


class BoundExceeded(RuntimeError):
    """A bounded search ran out of budget before finding its witness."""


class Proportional(ValueError):
    """Raised when an operation needs non-proportional roots."""


class NumericFailure(RuntimeError):
    """Raised when an angle fails to match a rational multiple of pi."""


DEFAULT_BOUND = 64


def fibonacci(alpha, beta, xi: float, n: int) -> np.ndarray:
    """Value {ab}^xi_n computed by the three-term recurrence."""
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(beta, dtype=float)
    if n == 0:
        return a.copy()
    if n == 1:
        return b.copy()
    if n > 1:
        prev, cur = a, b
        for _ in range(n - 1):
            prev, cur = cur, 2.0 * xi * cur - prev
        return cur
    # backward: x_{n-1} = 2 xi x_n - x_{n+1}
    nxt, cur = b, a
    for _ in range(-n):
        nxt, cur = cur, 2.0 * xi * cur - nxt
    return cur


def fibonacci_closed(alpha, beta, xi: float, n: int) -> np.ndarray:
    """Closed form of {ab}^xi_n for |xi| >= 1.

    For |xi| > 1:  {ab}_n = <ab>_+ / xi_+^{n+1} + <ab>_- / xi_-^{n+1}
    with xi_pm = xi +- sqrt(xi^2-1) and
    <ab>_pm = (xi*xi_pm - 1)(xi_pm a - b) / (2(xi^2-1)).
    For xi = +-1:  {ab}_n = xi^n (1-n) a + xi^{n-1} n b.
    """
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(beta, dtype=float)
    if abs(abs(xi) - 1.0) < 1e-12:
        s = 1.0 if xi > 0 else -1.0
        return (s ** n) * (1 - n) * a + (s ** (n - 1)) * n * b
    if abs(xi) < 1.0:
        raise ValueError("closed form requires |xi| >= 1")
    s = math.sqrt(xi * xi - 1.0)
    xp, xm = xi + s, xi - s
    cp = (xi * xp - 1.0) * (xp * a - b) / (2.0 * (xi * xi - 1.0))
    cm = (xi * xm - 1.0) * (xm * a - b) / (2.0 * (xi * xi - 1.0))
    return cp / xp ** (n + 1) + cm / xm ** (n + 1)


@dataclass
class FibonacciSeq:
    """A cached window of a Fibonacci vector sequence."""

    alpha: np.ndarray
    beta: np.ndarray
    xi: float
    lo: int
    hi: int

    def __post_init__(self):
        self.window = {n: fibonacci(self.alpha, self.beta, self.xi, n)
                       for n in range(self.lo, self.hi + 1)}

    def __getitem__(self, n: int) -> np.ndarray:
        return self.window[n]


@dataclass
class ReflectionClosure:
    """Positive representatives of the reflection closure of two roots."""

    generators: Tuple[np.ndarray, np.ndarray]
    roots: List[np.ndarray]
    finite: bool


def reflection_closure(system: CoxeterSystem, alpha, beta,
                       depth_bound: int = DEFAULT_BOUND) -> ReflectionClosure:
    """Rcl(a,b): positive representatives of {+-{ab}_n}, xi = (a|b)."""
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(beta, dtype=float)
    xi = system.inner(a, b)
    seen = set()
    order = []

    def visit(vec) -> bool:
        rid = abs(system.root_id(vec))
        if rid in seen:
            return False
        seen.add(rid)
        order.append(system.root_vec(rid))
        return True

    visit(a)
    if abs(system.root_id(a)) == abs(system.root_id(b)):
        return ReflectionClosure((a, b), order, True)
    visit(b)

    finite = True
    fa, fb = a, b            # forward pair (x_n, x_{n+1})
    ba, bb = b, a            # backward pair (x_{n+1}, x_n)
    stale = 0
    for _ in range(depth_bound):
        fa, fb = fb, 2.0 * xi * fb - fa
        ba, bb = bb, 2.0 * xi * bb - ba
        new = visit(fb)
        new = visit(bb) or new
        stale = 0 if new else stale + 1
        if stale >= 2:
            break
    else:
        finite = False
    return ReflectionClosure((a, b), order, finite)


def depth(system: CoxeterSystem, alpha, bound: int = DEFAULT_BOUND) -> int:
    """Minimal word length k such that some length-k element negates alpha."""
    a = np.asarray(alpha, dtype=float)
    if coxeter.root_sign_vec(a) < 0:
        raise ValueError("depth is defined for positive roots")
    frontier = {abs(system.root_id(a))}
    visited = set(frontier)
    for k in range(1, bound + 1):
        nxt = set()
        for rid in frontier:
            v = system.root_vec(rid)
            for g in range(system.rank):
                srid = system.root_id(system.gen_matrices[g] @ v)
                if srid < 0:
                    return k
                if srid not in visited:
                    visited.add(srid)
                    nxt.add(srid)
        frontier = nxt
    raise BoundExceeded(f"no negating element of length <= {bound}")


def find_negative_index(system: CoxeterSystem, alpha, beta,
                        bound: int = DEFAULT_BOUND) -> int:
    """Some index n, |n| <= bound, with {ab}_n negative (xi = (a|b) >= 1)."""
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(beta, dtype=float)
    if abs(system.root_id(a)) == abs(system.root_id(b)):
        raise Proportional("roots must be non-proportional")
    if system.inner(a, b) < 1.0 - coxeter.EPS:
        raise ValueError("expected (a|b) >= 1")
    xi = system.inner(a, b)
    for n in range(0, bound + 1):
        for m in ((n, -n) if n else (0,)):
            v = fibonacci(a, b, xi, m)
            try:
                if coxeter.root_sign_vec(v) < 0:
                    return m
            except MixedSigns:
                pass
    raise BoundExceeded(f"no negative value within |n| <= {bound}")


@dataclass
class ProperPair:
    """A properly situated positive pair generating a reflection closure.

    position is "elliptic" ((a|b) = -cos(pi/order)), "degenerate"
    ((a|b) = -1) or "hyperbolic" ((a|b) < -1); xi = -(a|b).
    """

    alpha: np.ndarray
    beta: np.ndarray
    position: str
    order: object            # int for elliptic, math.inf otherwise
    xi: float


def _reflection_order_of_roots(system, a, b, max_order=DEFAULT_BOUND):
    ta = Element(system, system.reflection_matrix(a))
    tb = Element(system, system.reflection_matrix(b))
    return coxeter.reflection_order(ta, tb, max_order)


def _make_pair(system, a, b) -> ProperPair:
    a, b = _sorted_pair(a, b)
    c = system.inner(a, b)
    if c <= -1.0 - coxeter.EPS:
        return ProperPair(a, b, "hyperbolic", math.inf, -c)
    if abs(c + 1.0) < coxeter.EPS:
        return ProperPair(a, b, "degenerate", math.inf, -c)
    n = _reflection_order_of_roots(system, a, b)
    if n == math.inf:
        raise NumericFailure("angle is not a recognizable rational multiple of pi")
    if abs(c + math.cos(math.pi / n)) > coxeter.EPS:
        raise NumericFailure(f"pair is not properly situated: (a|b)={c}, order={n}")
    return ProperPair(a, b, "elliptic", n, -c)


def properly_situated_pair(system: CoxeterSystem, lam, mu) -> ProperPair:
    """The properly situated positive pair (a,b) with Rcl(lam,mu) = Rcl(a,b).

    Elliptic case: enumerate the (finite) closure and pick the unique pair
    with (a|b) = -cos(pi/n) whose nonnegative span contains every positive
    closure root.  If (lam|mu) <= -1 there is nothing to do; if
    (lam|mu) >= 1 the Fibonacci sequence of the pair contains a sign change
    and flipping the negative side of the nearest change yields the pair.
    """
    l = np.asarray(lam, dtype=float)
    m = np.asarray(mu, dtype=float)
    l = system.root_vec(abs(system.root_id(l)))
    m = system.root_vec(abs(system.root_id(m)))
    if abs(system.root_id(l)) == abs(system.root_id(m)):
        raise Proportional("roots must be non-proportional")
    c = system.inner(l, m)

    if c <= -1.0 + coxeter.EPS:
        return _make_pair(system, l, m)

    if c >= 1.0 - coxeter.EPS:
        xi = c
        find_negative_index(system, l, m)      # guarantees a sign change exists
        vals = {0: l, 1: m}
        signs = {0: 1, 1: 1}
        for n in range(2, DEFAULT_BOUND + 2):
            for mm in (n, 1 - n):
                v = fibonacci(l, m, xi, mm)
                vals[mm] = v
                signs[mm] = coxeter.root_sign_vec(v)
            for nn in sorted(vals, key=abs):
                if nn + 1 in vals and signs[nn] != signs[nn + 1]:
                    pos = vals[nn] if signs[nn] > 0 else vals[nn + 1]
                    neg = vals[nn + 1] if signs[nn] > 0 else vals[nn]
                    return _make_pair(system, pos, -neg)
        raise BoundExceeded("no sign change found")

    # elliptic: |c| < 1
    n = _reflection_order_of_roots(system, l, m)
    if n == math.inf:
        raise NumericFailure("angle is not a recognizable rational multiple of pi")
    closure = reflection_closure(system, l, m)
    roots_ = closure.roots
    target = -math.cos(math.pi / n)
    for i in range(len(roots_)):
        for j in range(len(roots_)):
            if i == j:
                continue
            a, b = roots_[i], roots_[j]
            if abs(system.inner(a, b) - target) > coxeter.EPS:
                continue
            if all(_nonneg_combination(a, b, r) for r in roots_):
                return _make_pair(system, a, b)
    raise NumericFailure("no properly situated pair found in the closure")


def _nonneg_combination(a, b, r) -> bool:
    """Is r a nonnegative linear combination of a and b (within tolerance)?"""
    mat = np.stack([a, b], axis=1)
    sol, *_ = np.linalg.lstsq(mat, r, rcond=None)
    if np.linalg.norm(mat @ sol - r) > 1e-7:
        return False
    return bool(np.all(sol >= -1e-7))


def _sorted_pair(a, b):
    """Deterministic ordering of an unordered pair of roots."""
    ka = tuple(np.round(a, 9))
    kb = tuple(np.round(b, 9))
    return (a, b) if ka <= kb else (b, a)
