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
"""Orlicz functions, phi-functions and their multiplier groups."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from rispaces.expr import parse_expression

logger = logging.getLogger(__name__)

MAX_DOUBLINGS = 200
VALIDATION_GRID = np.logspace(-6, 6, 512)
CONVEXITY_TOL = 1e-9
MULTIPLIER_GRID = np.logspace(-3, 3, 241)
MULTIPLIER_TOL = 1e-8
MULTIPLIER_C_MAX = 1e6
MULTIPLIER_SCAN = 2000
MULTIPLIER_RANDOM = 50


class BracketError(RuntimeError):
    pass


class OrliczFunction(object):
    """evaluable nonnegative function on [0, inf).

    Subclasses implement ``_eval`` on float arrays; ``__call__`` accepts
    scalars and arrays alike.
    """

    def _eval(self, t):
        raise NotImplementedError

    def __call__(self, t):
        arr = np.asarray(t, dtype=np.float64)
        with np.errstate(all="ignore"):
            out = self._eval(arr)
        if arr.ndim == 0:
            return float(out)
        return np.asarray(out, dtype=np.float64)

    def tilde(self):
        return Tilde(self)

    def inverse(self, y):
        return bracket_inverse(self, y)

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


def bracket_inverse(func, y):
    """x with func(x) = y for increasing func, bracket grown geometrically."""
    y = float(y)
    if y < 0:
        raise ValueError("inverse needs y >= 0, got {}".format(y))
    if y == 0:
        return 0.0
    lo = hi = 1.0
    steps = 0
    while func(hi) < y:
        lo, hi = hi, hi * 2.0
        steps += 1
        if steps > MAX_DOUBLINGS:
            raise BracketError("no upper bracket for y={!r} after {} doublings".format(
                y, MAX_DOUBLINGS))
    steps = 0
    while func(lo) > y:
        hi, lo = lo, lo * 0.5
        steps += 1
        if steps > MAX_DOUBLINGS:
            raise BracketError("no lower bracket for y={!r} after {} halvings".format(
                y, MAX_DOUBLINGS))
    f_lo = func(lo) - y
    f_hi = func(hi) - y
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if not np.isfinite(f_lo) or not np.isfinite(f_hi):
        raise BracketError("non-finite values on bracket [{}, {}]".format(lo, hi))
    return optimize.brentq(lambda x: func(x) - y, lo, hi,
                           xtol=np.finfo(np.float64).tiny,
                           rtol=4 * np.finfo(np.float64).eps)


class Power(OrliczFunction):
    """t^p."""

    def __init__(self, p):
        p = float(p)
        if not p >= 1:
            raise ValueError("power needs p >= 1, got {}".format(p))
        self.p = p

    def _eval(self, t):
        return np.power(t, self.p)

    def inverse(self, y):
        if y < 0:
            raise ValueError("inverse needs y >= 0, got {}".format(y))
        return float(y) ** (1.0 / self.p)

    def tilde(self):
        return self

    def to_dict(self):
        return {"family": "power", "p": self.p}


class LogPeriodic(OrliczFunction):
    """t^p * exp(eps * sin(omega * ln t)), 0 at t = 0."""

    def __init__(self, p, eps, omega, check=True):
        self.p = float(p)
        self.eps = float(eps)
        self.omega = float(omega)
        self.checked = bool(check)
        if check and not self.p > self.eps * self.omega:
            raise ValueError("log-periodic family needs p > eps * omega, "
                             "got p={} eps*omega={}".format(self.p, self.eps * self.omega))
        if self.p < 1:
            raise ValueError("log-periodic family needs p >= 1, got {}".format(self.p))

    def _eval(self, t):
        pos = t > 0
        safe = np.where(pos, t, 1.0)
        val = np.power(safe, self.p) * np.exp(self.eps * np.sin(self.omega * np.log(safe)))
        return np.where(pos, val, 0.0)

    @property
    def period(self):
        """fundamental multiplier e^(2 pi / omega)."""
        return float(np.exp(2 * np.pi / self.omega))

    def to_dict(self):
        out = {"family": "logperiodic", "p": self.p, "eps": self.eps, "omega": self.omega}
        if not self.checked:
            out["check"] = False
        return out


class Scaled(OrliczFunction):
    """(1/b) * base(b^(1/p) * t)."""

    def __init__(self, base, b, p):
        b = float(b)
        p = float(p)
        if not b > 0:
            raise ValueError("scale b must be positive, got {}".format(b))
        if not p >= 1:
            raise ValueError("scale exponent p must be >= 1, got {}".format(p))
        self.base = base
        self.b = b
        self.p = p
        self._factor = b ** (1.0 / p)

    def _eval(self, t):
        return self.base._eval(self._factor * t) / self.b

    def inverse(self, y):
        return self.base.inverse(self.b * float(y)) / self._factor

    def to_dict(self):
        return {"family": "scaled", "b": self.b, "p": self.p, "base": self.base.to_dict()}


class PiecewiseAffineConvex(OrliczFunction):
    """linear interpolation of knots (t_i, phi_i), last slope extrapolated."""

    def __init__(self, knots):
        knots = [(float(t), float(v)) for t, v in knots]
        if len(knots) < 2:
            raise ValueError("need at least two knots")
        ts = np.array([k[0] for k in knots])
        vs = np.array([k[1] for k in knots])
        if ts[0] != 0.0 or vs[0] != 0.0:
            raise ValueError("first knot must be (0, 0)")
        if np.any(np.diff(ts) <= 0):
            raise ValueError("knot abscissae must increase")
        if not np.all(np.isfinite(vs)):
            raise ValueError("knot values must be finite")
        slopes = np.diff(vs) / np.diff(ts)
        if np.any(slopes < 0) or np.any(np.diff(slopes) < 0):
            raise ValueError("knots must describe a nondecreasing convex function")
        if slopes[-1] <= 0:
            raise ValueError("last slope must be positive")
        self.knots = knots
        self._ts = ts
        self._vs = vs
        self._last_slope = slopes[-1]

    def _eval(self, t):
        inside = np.interp(t, self._ts, self._vs)
        tail = self._vs[-1] + self._last_slope * (t - self._ts[-1])
        return np.where(t > self._ts[-1], tail, inside)

    def to_dict(self):
        return {"family": "pwaffine", "knots": [list(k) for k in self.knots]}


class Expression(OrliczFunction):
    """function given by an expression in ``t``; its value at 0 is taken
    to be 0 whenever the expression itself is undefined there.
    """

    def __init__(self, src):
        self.src = src
        self.tree = parse_expression(src)
        probe = self(np.logspace(-3, 2, 51))
        if not np.all(np.isfinite(probe)):
            raise ValueError("expression {!r} takes non-finite values".format(src))

    def _eval(self, t):
        val = np.asarray(self.tree.evaluate(t), dtype=np.float64)
        at_zero = (t == 0) & ~np.isfinite(val)
        return np.where(at_zero, 0.0, val)

    def to_dict(self):
        return {"family": "expr", "src": self.src}


class Tilde(OrliczFunction):
    """t -> 1/F(1/t), 0 at t = 0."""

    def __init__(self, base):
        self.base = base

    def _eval(self, t):
        pos = t > 0
        safe = np.where(pos, t, 1.0)
        val = 1.0 / self.base._eval(1.0 / safe)
        return np.where(pos, val, 0.0)

    def tilde(self):
        return self.base

    def inverse(self, u):
        u = float(u)
        if u == 0.0:
            return 0.0
        return 1.0 / self.base.inverse(1.0 / u)

    def to_dict(self):
        return {"family": "tilde", "base": self.base.to_dict()}


class PhiFunction(OrliczFunction):
    """continuous strictly increasing F with F(0) = 0 and F(1) = 1.

    Args:
        base: the wrapped OrliczFunction.
        check: run the grid checks and raise ValueError on violations.
    """

    def __init__(self, base, check=True):
        if isinstance(base, PhiFunction):
            base = base.base
        self.base = base
        if check:
            violations = validate(self)
            if violations:
                raise ValueError("not a phi-function: {}".format("; ".join(violations)))

    @classmethod
    def identity(cls):
        return cls(Power(1), check=False)

    def _eval(self, t):
        return self.base._eval(t)

    def inverse(self, y):
        return self.base.inverse(y)

    def tilde(self):
        return PhiFunction(self.base.tilde(), check=False)

    def to_dict(self):
        return self.base.to_dict()


def as_phi_function(func):
    if isinstance(func, PhiFunction):
        return func
    return PhiFunction(func)


def tilde(func):
    return func.tilde()


def inverse(func, y):
    return func.inverse(y)


def validate(func, grid=None, at_zero=True, convex=True):
    """grid checks of the Orlicz (and for PhiFunction the phi-function)
    axioms. returns a list of human readable violations, empty when valid.

    at_zero=False skips the value at 0 and convex=False the convexity check,
    for functions that are only read on part of the half line.
    """
    t = VALIDATION_GRID if grid is None else np.asarray(grid, dtype=np.float64)
    violations = []
    v = func(t)
    if not np.all(np.isfinite(v)):
        bad = t[~np.isfinite(v)][0]
        violations.append("non-finite value at t={:.6g}".format(bad))
        return violations
    if at_zero:
        value = func(0.0)
        if value != 0.0:
            violations.append("value at 0 is {!r}, expected 0".format(value))
    if np.any(v < 0):
        violations.append("negative value at t={:.6g}".format(t[np.argmax(v < 0)]))
    dv = np.diff(v)
    scale = np.maximum(np.abs(v[1:]), np.abs(v[:-1]))
    decreasing = dv < -CONVEXITY_TOL * scale
    if np.any(decreasing):
        violations.append("not nondecreasing near t={:.6g}".format(
            t[1:][np.argmax(decreasing)]))
    slopes = dv / np.diff(t)
    ds = np.diff(slopes)
    slope_scale = np.maximum(np.abs(slopes[1:]), np.abs(slopes[:-1]))
    concave = ds < -CONVEXITY_TOL * slope_scale
    if convex and np.any(concave):
        violations.append("not convex near t={:.6g}".format(t[1:-1][np.argmax(concave)]))
    if isinstance(func, PhiFunction):
        flat = dv <= 0
        if np.any(flat):
            violations.append("not strictly increasing near t={:.6g}".format(
                t[1:][np.argmax(flat)]))
        at_one = func(1.0)
        if abs(at_one - 1.0) > 1e-12:
            violations.append("value at 1 is {!r}, expected 1".format(at_one))
    return violations


def multiplier_residual(func, c, grid=None):
    """sup_t |phi(ct) phi(1) - phi(c) phi(t)| / max(1, phi(ct) phi(1)).

    ``c`` may be an array, the residual is then computed per entry.
    """
    t = MULTIPLIER_GRID if grid is None else np.asarray(grid, dtype=np.float64)
    c_arr = np.asarray(c, dtype=np.float64)
    cs = np.atleast_1d(c_arr)
    if np.any(cs <= 0):
        raise ValueError("multipliers must be positive")
    one = func(1.0)
    with np.errstate(all="ignore"):
        lhs = func(np.outer(cs, t)) * one
        rhs = func(cs)[:, None] * func(t)[None, :]
        res = np.max(np.abs(lhs - rhs) / np.maximum(1.0, lhs), axis=1)
    res = np.where(np.isfinite(res), res, np.inf)
    if c_arr.ndim == 0:
        return float(res[0])
    return res


@dataclass(frozen=True)
class MultiplierGroupResult:
    """kind is one of 'full', 'cyclic', 'trivial'."""
    kind: str
    generator: float = None
    residual: float = None
    c_max: float = None

    @property
    def cutoff_bound(self):
        return self.kind == "trivial"

    def to_dict(self):
        out = {"kind": self.kind}
        if self.generator is not None:
            out["generator"] = self.generator
        if self.residual is not None:
            out["residual"] = self.residual
        if self.c_max is not None:
            out["c_max"] = self.c_max
        return out


def multiplier_group(func, tol=MULTIPLIER_TOL, c_max=MULTIPLIER_C_MAX, seed=0):
    """classify {c > 0: c is a multiplier of func} as all of (0, inf),
    cyclic with the smallest generator above 1, or trivial below c_max.
    """
    rng = np.random.RandomState(seed)
    cs = np.exp(rng.uniform(-5.0, 5.0, size=MULTIPLIER_RANDOM))
    random_res = multiplier_residual(func, cs)
    if np.all(random_res < tol):
        return MultiplierGroupResult("full", residual=float(np.max(random_res)))

    log_c = np.linspace(0.0, np.log(c_max), MULTIPLIER_SCAN + 1)[1:]
    res = multiplier_residual(func, np.exp(log_c))
    res_of = lambda x: multiplier_residual(func, float(np.exp(x)))
    for i in range(1, len(log_c) - 1):
        if not (res[i] < res[i - 1] and res[i] < res[i + 1]):
            continue
        x, r = _refine_minimum(res_of, log_c[i - 1], log_c[i], log_c[i + 1], res[i])
        logger.debug("multiplier candidate c=%.12g residual=%.3e", np.exp(x), r)
        if r < tol:
            return MultiplierGroupResult("cyclic", generator=float(np.exp(x)), residual=r)
    logger.info("no multiplier found below c_max=%g", c_max)
    return MultiplierGroupResult("trivial", c_max=float(c_max))


def _refine_minimum(fun, lo, mid, hi, f_mid):
    """local minimum of fun inside (lo, hi) bracketing mid."""
    try:
        sol = optimize.minimize_scalar(fun, bracket=(lo, mid, hi), method="golden",
                                       tol=1e-14)
        x, r = float(sol.x), float(sol.fun)
    except (ValueError, RuntimeError):
        sol = optimize.minimize_scalar(fun, bounds=(lo, hi), method="bounded",
                                       options={"xatol": 1e-12})
        x, r = float(sol.x), float(sol.fun)
    if not r <= f_mid:
        return float(mid), float(f_mid)
    return x, r


def growth_exponent(func, a_bar):
    """p with phi(a) = a^p phi(1), i.e. ln(phi(a)/phi(1)) / ln a."""
    a_bar = float(a_bar)
    if not a_bar > 1:
        raise ValueError("growth exponent needs a multiplier > 1, got {}".format(a_bar))
    return float(np.log(func(a_bar) / func(1.0)) / np.log(a_bar))
