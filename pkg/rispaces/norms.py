# Copyright 2026 The rispaces Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Orlicz, Lorentz, Orlicz-Lorentz and Montgomery-Smith norms of step
functions on [0, 1].
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import optimize

from rispaces.phi import OrliczFunction, PhiFunction, Tilde, as_phi_function
from rispaces.step_fn import StepFunction, rationalize, rearrange

logger = logging.getLogger(__name__)

NORM_TOL = 1e-11
MAX_ITERS = 200


class ConvergenceError(RuntimeError):
    pass


class LorentzWeight(object):
    """nonincreasing weight w on (0, 1) with closed-form W(t) = int_0^t w."""

    def w(self, x):
        raise NotImplementedError

    def W(self, t):
        raise NotImplementedError

    def W_inverse(self, y):
        raise NotImplementedError

    @property
    def total(self):
        return float(self.W(1.0))

    def increments(self, lefts, rights):
        lefts = np.asarray(lefts, dtype=np.float64)
        rights = np.asarray(rights, dtype=np.float64)
        return self.W(rights) - self.W(lefts)

    def to_dict(self):
        raise NotImplementedError

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(repr(self.to_dict()))

    def __repr__(self):
        return "{}({})".format(type(self).__name__, self.to_dict())


class Constant(LorentzWeight):
    def __init__(self, c=1.0):
        c = float(c)
        if not c > 0:
            raise ValueError("constant weight must be positive, got {}".format(c))
        self.c = c

    def w(self, x):
        return np.full_like(np.asarray(x, dtype=np.float64), self.c)

    def W(self, t):
        return self.c * np.asarray(t, dtype=np.float64)

    def W_inverse(self, y):
        return np.asarray(y, dtype=np.float64) / self.c

    def to_dict(self):
        return {"family": "constant", "c": self.c}


class Affine(LorentzWeight):
    """w(x) = alpha - beta * x."""

    def __init__(self, alpha, beta):
        alpha = float(alpha)
        beta = float(beta)
        if beta < 0:
            raise ValueError("affine weight must be nonincreasing, got beta={}".format(beta))
        if not alpha > 0 or alpha - beta < 0:
            raise ValueError("affine weight must be positive on (0, 1)")
        self.alpha = alpha
        self.beta = beta

    def w(self, x):
        return self.alpha - self.beta * np.asarray(x, dtype=np.float64)

    def W(self, t):
        t = np.asarray(t, dtype=np.float64)
        return self.alpha * t - 0.5 * self.beta * t * t

    def W_inverse(self, y):
        y = np.asarray(y, dtype=np.float64)
        # (alpha - sqrt(alpha^2 - 2 beta y)) / beta without the cancellation
        disc = np.sqrt(np.maximum(self.alpha ** 2 - 2.0 * self.beta * y, 0.0))
        return 2.0 * y / (self.alpha + disc)

    def to_dict(self):
        return {"family": "affine", "alpha": self.alpha, "beta": self.beta}


class PiecewiseConstantNonincreasing(LorentzWeight):
    """w = values[i] between consecutive cut points of [0, *breaks, 1]."""

    def __init__(self, breaks, values):
        cuts = [Fraction(0)] + [rationalize(b) for b in breaks] + [Fraction(1)]
        values = [float(v) for v in values]
        if len(values) != len(cuts) - 1:
            raise ValueError("need len(breaks) + 1 values")
        if any(b <= a for a, b in zip(cuts[:-1], cuts[1:])):
            raise ValueError("breaks must increase inside (0, 1)")
        if any(v < 0 for v in values) or values[0] <= 0:
            raise ValueError("weight values must be nonnegative and not all zero")
        if any(b > a for a, b in zip(values[:-1], values[1:])):
            raise ValueError("weight values must be nonincreasing")
        self.breaks = cuts[1:-1]
        self.values = values
        self._cuts = np.array([float(c) for c in cuts])
        self._vals = np.array(values)
        self._cum = np.concatenate([[0.0], np.cumsum(self._vals * np.diff(self._cuts))])

    def w(self, x):
        idx = np.clip(np.searchsorted(self._cuts, x, side="right") - 1, 0, len(self._vals) - 1)
        return self._vals[idx]

    def W(self, t):
        t = np.asarray(t, dtype=np.float64)
        return np.interp(t, self._cuts, self._cum)

    def W_inverse(self, y):
        y = np.asarray(y, dtype=np.float64)
        # the zero tail of w is flat in W, take the left end
        keep = np.concatenate([[True], np.diff(self._cum) > 0])
        return np.interp(y, self._cum[keep], self._cuts[keep])

    def to_dict(self):
        return {"family": "piecewise", "breaks": ["{}/{}".format(b.numerator, b.denominator)
                                                  for b in self.breaks],
                "values": self.values}


@dataclass(frozen=True)
class Orlicz:
    phi: OrliczFunction
    kind = "orlicz"

    def to_dict(self):
        return {"kind": self.kind, "phi": self.phi.to_dict()}


@dataclass(frozen=True)
class Lorentz:
    w: LorentzWeight
    q: float = 1.0
    kind = "lorentz"

    def __post_init__(self):
        if not self.q >= 1:
            raise ValueError("Lorentz exponent q must be >= 1, got {}".format(self.q))

    def to_dict(self):
        return {"kind": self.kind, "w": self.w.to_dict(), "q": self.q}


@dataclass(frozen=True)
class OrliczLorentz:
    w: LorentzWeight
    phi: OrliczFunction
    kind = "orlicz_lorentz"

    def to_dict(self):
        return {"kind": self.kind, "w": self.w.to_dict(), "phi": self.phi.to_dict()}


@dataclass(frozen=True)
class MS:
    F: OrliczFunction
    G: OrliczFunction
    kind = "ms"

    def to_dict(self):
        return {"kind": self.kind, "F": self.F.to_dict(), "G": self.G.to_dict()}


def modular(phi, f, c):
    """sum_i phi(|v_i| / c) * len(piece_i)."""
    if not c > 0:
        raise ValueError("modular needs c > 0, got {}".format(c))
    lengths = np.array([float(m) for m in f.measures()])
    return float(np.sum(phi(np.abs(f.values) / c) * lengths))


def weighted_modular(phi, w, f, c):
    """sum_i phi(f*_i / c) * (W(right_i) - W(left_i))."""
    if not c > 0:
        raise ValueError("modular needs c > 0, got {}".format(c))
    values, weights = _rearranged_weights(f, w)
    return float(np.sum(phi(values / c) * weights))


def _rearranged_weights(f, w):
    star = rearrange(f)
    lefts = [float(p[0]) for p in star.pieces]
    rights = [float(p[1]) for p in star.pieces]
    return star.values, w.increments(lefts, rights)


def _bisect_norm(phi, values, weights, tol=NORM_TOL):
    """inf{c : sum phi(values / c) * weights <= 1}, computed on values
    normalized by their sup so ``tol`` is relative.
    """
    values = np.abs(np.asarray(values, dtype=np.float64))
    weights = np.asarray(weights, dtype=np.float64)
    support = (values > 0) & (weights > 0)
    if not np.any(support):
        return 0.0
    values = values[support]
    weights = weights[support]
    scale = float(np.max(values))
    u = values / scale

    def fits(c):
        return float(np.sum(phi(u / c) * weights)) <= 1.0

    hi = 1.0
    steps = 0
    while not fits(hi):
        hi *= 2.0
        steps += 1
        if steps > MAX_ITERS:
            raise ConvergenceError("modular stays above 1 up to c={:g}".format(hi))
    lo = hi
    steps = 0
    while fits(lo):
        lo *= 0.5
        steps += 1
        if steps > MAX_ITERS:
            raise ConvergenceError("modular stays below 1 down to c={:g}".format(lo))
    steps = 0
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if fits(mid):
            hi = mid
        else:
            lo = mid
        steps += 1
        if steps > MAX_ITERS:
            raise ConvergenceError("bisection did not reach tol={:g}".format(tol))
    return hi * scale


def luxemburg_norm(phi, f, tol=NORM_TOL):
    lengths = [float(m) for m in f.measures()]
    return _bisect_norm(phi, f.values, lengths, tol)


def lorentz_norm(w, q, f):
    """(int w (f*)^q)^(1/q) with W in closed form on each piece of f*."""
    q = float(q)
    if not q >= 1:
        raise ValueError("Lorentz exponent q must be >= 1, got {}".format(q))
    values, weights = _rearranged_weights(f, w)
    total = float(np.sum(np.power(values, q) * weights))
    return total ** (1.0 / q)


def orlicz_lorentz_norm(w, phi, f, tol=NORM_TOL):
    values, weights = _rearranged_weights(f, w)
    return _bisect_norm(phi, values, weights, tol)


def ms_breakpoint(F, G, m):
    """G~(F~^-1(m)) = 1 / G(F^-1(1/m)), the image of a breakpoint of f*."""
    m = float(m)
    if m <= 0:
        return 0.0
    if m >= 1:
        return 1.0
    return 1.0 / G(F.inverse(1.0 / m))


def ms_profile(F, G, f):
    """the step function f* o F~ o G~^-1 on [0, 1]."""
    star = rearrange(f)
    pieces = []
    left = Fraction(0)
    for i, (_, right, value) in enumerate(star.pieces):
        if i + 1 == len(star.pieces):
            x = Fraction(1)
        else:
            x = min(rationalize(ms_breakpoint(F, G, right)), Fraction(1))
        # pieces squeezed to nothing by rounding are dropped
        if x > left:
            pieces.append((left, x, value))
            left = x
    return StepFunction(pieces)


def ms_norm(F, G, f, tol=NORM_TOL):
    """||f*  o F~ o G~^-1||_G."""
    F = as_phi_function(F)
    G = as_phi_function(G)
    if f.is_zero():
        return 0.0
    return luxemburg_norm(G, ms_profile(F, G, f), tol)


class WeightPhi(PhiFunction):
    """the phi-function W~^-1 o G, so that L_{F,G} carries the Orlicz-Lorentz
    norm of (w, G). Defined for t with G(t) >= 1 / W(1), in particular on
    [1, inf) which is all the Montgomery-Smith norm on [0, 1] uses.
    """

    def __init__(self, w, G):
        self.w = w
        self.G = as_phi_function(G)
        self.base = self

    def _eval(self, t):
        g = self.G._eval(t)
        y = 1.0 / g
        inside = (g > 0) & (y <= self.w.total * (1 + 1e-15))
        x = self.w.W_inverse(np.where(inside, y, 0.0))
        return np.where(inside, 1.0 / x, np.nan)

    def inverse(self, y):
        y = float(y)
        if y < 1.0 - 1e-15:
            raise ValueError("W~^-1 o G is only invertible on [1, inf), got {}".format(y))
        return self.G.inverse(1.0 / float(self.w.W(min(1.0 / y, 1.0))))

    def tilde(self):
        return PhiFunction(Tilde(self), check=False)

    def to_dict(self):
        return {"family": "weight_phi", "w": self.w.to_dict(), "G": self.G.to_dict()}


def weight_to_F(w, G):
    return WeightPhi(w, G)


def norm(X, f, tol=NORM_TOL):
    """N_X(f) for a space descriptor."""
    if isinstance(X, Orlicz):
        return luxemburg_norm(X.phi, f, tol)
    if isinstance(X, Lorentz):
        return lorentz_norm(X.w, X.q, f)
    if isinstance(X, OrliczLorentz):
        return orlicz_lorentz_norm(X.w, X.phi, f, tol)
    if isinstance(X, MS):
        return ms_norm(X.F, X.G, f, tol)
    raise NotImplementedError("unknown space descriptor {!r}".format(X))


def _cells(partition, g):
    cuts = sorted({Fraction(0), Fraction(1)} | {rationalize(x) for x in partition})
    if any(c < 0 or c > 1 for c in cuts):
        raise ValueError("partition must lie in [0, 1]")
    missing = set(g.breakpoints) - set(cuts)
    if missing:
        raise ValueError("partition does not refine g, missing {}".format(
            sorted(float(m) for m in missing)))
    return cuts


def dual_norm_lower_bound(X, g, partition, iters=10):
    """best int f|g| / N_X(f) found by coordinate ascent over step functions
    f >= 0 on ``partition``; a lower bound for the Kothe dual norm of g.
    """
    cuts = _cells(partition, g)
    lefts, rights = cuts[:-1], cuts[1:]
    lengths = np.array([float(r - l) for l, r in zip(lefts, rights)])
    gv = np.abs(np.array([g(l + (r - l) / 2) for l, r in zip(lefts, rights)]))
    if not np.any(gv > 0):
        return 0.0

    def ratio(x):
        if not np.any(x > 0):
            return 0.0
        f = StepFunction(zip(lefts, rights, x))
        return float(np.sum(x * gv * lengths)) / norm(X, f)

    x = gv / np.max(gv)
    best = ratio(x)
    active = np.nonzero(gv > 0)[0]
    for sweep in range(iters):
        start = best
        for i in active:
            hi = 2.0 * max(np.max(x), 1.0)

            def neg(v, i=i):
                trial = x.copy()
                trial[i] = v
                return -ratio(trial)

            sol = optimize.minimize_scalar(neg, bounds=(0.0, hi), method="bounded",
                                           options={"xatol": 1e-10 * hi})
            for v, r in ((float(sol.x), -float(sol.fun)), (0.0, -neg(0.0))):
                if r > best:
                    x[i] = v
                    best = r
            x = x / np.max(x) if np.any(x > 0) else x
        logger.debug("dual ascent sweep %d: %.12g", sweep, best)
        if best - start <= 1e-13 * max(best, 1.0):
            break
    return best
