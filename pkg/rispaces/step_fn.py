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
"""Step functions and piecewise-linear automorphisms of [0, 1].

Breakpoints are exact ``Fraction`` values, function values and slopes are
floats. Both classes are immutable once constructed.
"""

import bisect
import logging
from fractions import Fraction

import numpy as np

logger = logging.getLogger(__name__)

TILING_TOL = 1e-12
MAX_DENOMINATOR = 10**15

_ZERO = Fraction(0)
_ONE = Fraction(1)


class MapError(ValueError):
    """raised when a map fails to tile [0, 1] or a preimage leaves [0, 1]."""


def rationalize(x):
    """exact rational close to x. dyadic floats and small-denominator
    rationals are recovered exactly.
    """
    if isinstance(x, Fraction):
        if x.denominator <= MAX_DENOMINATOR:
            return x
        return x.limit_denominator(MAX_DENOMINATOR)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(float(x)).limit_denominator(MAX_DENOMINATOR)


def _fmt_rational(q):
    return "{}/{}".format(q.numerator, q.denominator)


class StepFunction(object):
    """finitely-piecewise-constant function on [0, 1].

    Args:
        pieces: iterable of (left, right, value). left/right are anything
            ``rationalize`` accepts, pieces must partition [0, 1] in order.
    """

    def __init__(self, pieces):
        raw = []
        for left, right, value in pieces:
            left = rationalize(left)
            right = rationalize(right)
            if not left < right:
                raise ValueError(
                    "empty or reversed piece [{}, {}]".format(left, right))
            raw.append((left, right, float(value)))
        if not raw:
            raise ValueError("step function needs at least one piece")
        if raw[0][0] != _ZERO or raw[-1][1] != _ONE:
            raise ValueError("pieces must cover [0, 1]")
        for (_, r0, _), (l1, _, _) in zip(raw[:-1], raw[1:]):
            if r0 != l1:
                raise ValueError(
                    "pieces must be contiguous, gap at {} / {}".format(r0, l1))
        merged = [raw[0]]
        for left, right, value in raw[1:]:
            if value == merged[-1][2]:
                merged[-1] = (merged[-1][0], right, value)
            else:
                merged.append((left, right, value))
        self._pieces = tuple(merged)
        self._lefts_q = [p[0] for p in self._pieces]
        self._lefts = [float(q) for q in self._lefts_q]

    @classmethod
    def constant(cls, value):
        return cls([(0, 1, value)])

    @classmethod
    def indicator(cls, left, right, value=1.0):
        """value * chi_[left, right], zero elsewhere."""
        left = rationalize(left)
        right = rationalize(right)
        pieces = []
        if left > 0:
            pieces.append((0, left, 0.0))
        pieces.append((left, right, value))
        if right < 1:
            pieces.append((right, 1, 0.0))
        return cls(pieces)

    @classmethod
    def from_breakpoints(cls, breakpoints, values):
        """breakpoints are the interior cut points, len(values) pieces."""
        cuts = [_ZERO] + [rationalize(b) for b in breakpoints] + [_ONE]
        if len(cuts) - 1 != len(values):
            raise ValueError("need len(breakpoints) + 1 values")
        return cls(zip(cuts[:-1], cuts[1:], values))

    @property
    def pieces(self):
        return self._pieces

    @property
    def values(self):
        return np.array([p[2] for p in self._pieces], dtype=np.float64)

    def measures(self):
        return [p[1] - p[0] for p in self._pieces]

    @property
    def breakpoints(self):
        """all cut points including 0 and 1."""
        return [p[0] for p in self._pieces] + [_ONE]

    def __len__(self):
        return len(self._pieces)

    def __call__(self, x):
        if isinstance(x, Fraction):
            idx = bisect.bisect_right(self._lefts_q, x) - 1
        else:
            idx = bisect.bisect_right(self._lefts, float(x)) - 1
        idx = min(max(idx, 0), len(self._pieces) - 1)
        return self._pieces[idx][2]

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self._pieces == other._pieces

    def __hash__(self):
        return hash(self._pieces)

    def __repr__(self):
        body = ", ".join("[{}, {}]:{!r}".format(l, r, v)
                         for l, r, v in self._pieces)
        return "StepFunction({})".format(body)

    def map_values(self, func):
        return StepFunction((l, r, func(v)) for l, r, v in self._pieces)

    def abs(self):
        return self.map_values(abs)

    def __neg__(self):
        return self.map_values(lambda v: -v)

    def scale(self, factor):
        factor = float(factor)
        return self.map_values(lambda v: factor * v)

    def refine(self, breakpoints):
        """raw (non-merged) pieces on the common refinement with breakpoints."""
        cuts = sorted(set(self.breakpoints) | {rationalize(b) for b in breakpoints})
        return [(l, r, self(l + (r - l) / 2)) for l, r in zip(cuts[:-1], cuts[1:])]

    def _combine(self, other, op):
        return StepFunction([(l, r, op(v, other(l + (r - l) / 2)))
                             for l, r, v in self.refine(other.breakpoints)])

    def __add__(self, other):
        if isinstance(other, StepFunction):
            return self._combine(other, lambda a, b: a + b)
        return self.map_values(lambda v: v + float(other))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, StepFunction):
            return self._combine(other, lambda a, b: a * b)
        return self.scale(other)

    __rmul__ = __mul__

    def sup_norm(self):
        return float(np.max(np.abs(self.values)))

    def is_zero(self):
        return all(p[2] == 0.0 for p in self._pieces)

    def to_list(self):
        return [[_fmt_rational(l), _fmt_rational(r), repr(v)]
                for l, r, v in self._pieces]


def rearrange(f):
    """non-increasing rearrangement f*, exact in the breakpoints."""
    order = sorted(f.pieces, key=lambda p: -abs(p[2]))
    pieces = []
    pos = _ZERO
    for left, right, value in order:
        nxt = pos + (right - left)
        pieces.append((pos, nxt, abs(value)))
        pos = nxt
    return StepFunction(pieces)


def distribution(f, t):
    """exact measure of {|f| >= t}."""
    if t < 0:
        raise ValueError("t must be nonnegative, got {}".format(t))
    total = _ZERO
    for left, right, value in f.pieces:
        if abs(value) >= t:
            total += right - left
    return total


class PiecewiseLinearMap(object):
    """increasing-on-pieces invertible map of [0, 1].

    Each piece is (domain_left, domain_right, slope, image_left); the piece
    sends [domain_left, domain_right] onto
    [image_left, image_left + slope * (domain_right - domain_left)].
    Images have to tile [0, 1] up to ``TILING_TOL``.
    """

    def __init__(self, pieces, tol=TILING_TOL):
        raw = []
        for piece in pieces:
            if len(piece) == 3:
                left, right, slope = piece
                image_left = None
            else:
                left, right, slope, image_left = piece
            left = rationalize(left)
            right = rationalize(right)
            slope = float(slope)
            if not left < right:
                raise MapError("empty or reversed piece [{}, {}]".format(left, right))
            if not slope > 0:
                raise MapError("slopes must be positive, got {}".format(slope))
            raw.append([left, right, slope, image_left])
        if not raw:
            raise MapError("map needs at least one piece")
        if raw[0][0] != _ZERO or raw[-1][1] != _ONE:
            raise MapError("domain pieces must cover [0, 1]")
        for p0, p1 in zip(raw[:-1], raw[1:]):
            if p0[1] != p1[0]:
                raise MapError("domain pieces must be contiguous")
        if any(p[3] is None for p in raw):
            # images laid out in domain order
            pos = 0.0
            for p in raw:
                p[3] = pos
                pos += p[2] * float(p[1] - p[0])
        self._pieces = tuple((p[0], p[1], p[2], float(p[3])) for p in raw)
        self._lefts = [float(p[0]) for p in self._pieces]
        self._check_tiling(tol)

    def _check_tiling(self, tol):
        spans = sorted((il, il + s * float(r - l)) for l, r, s, il in self._pieces)
        if abs(spans[0][0]) > tol or abs(spans[-1][1] - 1.0) > tol:
            raise MapError("images do not cover [0, 1]: {} .. {}".format(
                spans[0][0], spans[-1][1]))
        for (_, e0), (s1, _) in zip(spans[:-1], spans[1:]):
            if abs(e0 - s1) > tol:
                raise MapError("image gap/overlap of {:.3e}".format(s1 - e0))

    @classmethod
    def identity(cls):
        return cls([(0, 1, 1.0, 0.0)])

    @classmethod
    def interval_exchange(cls, lengths, order):
        """slope-1 map permuting consecutive blocks.

        Block i of the domain (length lengths[i]) lands at image position
        order.index(i), i.e. ``order`` lists the blocks as they appear in the
        image.
        """
        lengths = [rationalize(x) for x in lengths]
        if sum(lengths) != _ONE:
            raise MapError("block lengths must sum to 1")
        if sorted(order) != list(range(len(lengths))):
            raise MapError("order must be a permutation of the blocks")
        image_left = {}
        pos = _ZERO
        for i in order:
            image_left[i] = pos
            pos += lengths[i]
        pieces = []
        pos = _ZERO
        for i, length in enumerate(lengths):
            pieces.append((pos, pos + length, 1.0, float(image_left[i])))
            pos += length
        return cls(pieces)

    @property
    def pieces(self):
        return self._pieces

    @property
    def slopes(self):
        return np.array([p[2] for p in self._pieces], dtype=np.float64)

    @property
    def domain_breakpoints(self):
        return [p[0] for p in self._pieces] + [_ONE]

    def slope_multiset(self):
        """slope -> exact total domain measure carrying it."""
        out = {}
        for l, r, s, _ in self._pieces:
            out[s] = out.get(s, _ZERO) + (r - l)
        return out

    def _piece_index(self, x):
        idx = bisect.bisect_right(self._lefts, float(x)) - 1
        return min(max(idx, 0), len(self._pieces) - 1)

    def __call__(self, x):
        if np.ndim(x):
            return np.array([self(v) for v in np.asarray(x, dtype=np.float64)])
        l, _, s, il = self._pieces[self._piece_index(x)]
        return il + s * (float(x) - float(l))

    def __len__(self):
        return len(self._pieces)

    def __repr__(self):
        return "PiecewiseLinearMap({})".format(", ".join(
            "[{}, {}]x{!r}->{!r}".format(l, r, s, il) for l, r, s, il in self._pieces))

    def __eq__(self, other):
        if not isinstance(other, PiecewiseLinearMap):
            return NotImplemented
        return self._pieces == other._pieces

    def __hash__(self):
        return hash(self._pieces)

    def preimages(self, points, tol=TILING_TOL):
        """domain cut points where this map crosses the given image points.

        Points closer than ``tol`` to an image endpoint of a piece are
        skipped, the piece boundary already covers them.
        """
        cuts = set()
        for l, r, s, il in self._pieces:
            ir = il + s * float(r - l)
            il_q = rationalize(il)
            s_q = rationalize(s)
            for y in points:
                yf = float(y)
                if yf <= il + tol or yf >= ir - tol:
                    continue
                x = rationalize(l + (rationalize(y) - il_q) / s_q)
                if x <= l or x >= r:
                    if x < l - Fraction(tol) or x > r + Fraction(tol):
                        raise MapError(
                            "preimage {} of {} outside its piece".format(float(x), yf))
                    continue
                cuts.add(x)
        return cuts

    def to_list(self):
        return [[_fmt_rational(l), _fmt_rational(r), repr(s), repr(il)]
                for l, r, s, il in self._pieces]


def compose(f, sigma):
    """f o sigma."""
    cuts = sorted(set(sigma.domain_breakpoints) | sigma.preimages(f.breakpoints[1:-1]))
    pieces = []
    for l, r in zip(cuts[:-1], cuts[1:]):
        mid = l + (r - l) / 2
        pieces.append((l, r, f(sigma(mid))))
    return StepFunction(pieces)


def map_compose(sigma, tau):
    """sigma o tau, i.e. x -> sigma(tau(x))."""
    cuts = sorted(set(tau.domain_breakpoints) | tau.preimages(sigma.domain_breakpoints[1:-1]))
    pieces = []
    for l, r in zip(cuts[:-1], cuts[1:]):
        mid = l + (r - l) / 2
        t_piece = tau.pieces[tau._piece_index(mid)]
        inner = tau(mid)
        s_piece = sigma.pieces[sigma._piece_index(inner)]
        slope = s_piece[2] * t_piece[2]
        # image of l through the pieces selected at the midpoint
        inner_l = t_piece[3] + t_piece[2] * float(l - t_piece[0])
        image_left = s_piece[3] + s_piece[2] * (inner_l - float(s_piece[0]))
        pieces.append((l, r, slope, image_left))
    logger.debug("composed maps with %d and %d pieces into %d",
                 len(sigma), len(tau), len(pieces))
    return PiecewiseLinearMap(_merge_collinear(pieces))


def map_invert(sigma):
    """sigma^-1; slopes invert, image cut points become domain cut points."""
    order = sorted(sigma.pieces, key=lambda p: p[3])
    cuts = [_ZERO]
    for _, _, _, il in order[1:]:
        cuts.append(rationalize(il))
    cuts.append(_ONE)
    pieces = []
    for (l, r, s, il), dl, dr in zip(order, cuts[:-1], cuts[1:]):
        if not dl < dr:
            raise MapError("inverse piece collapsed at {}".format(float(dl)))
        pieces.append((dl, dr, 1.0 / s, float(l)))
    return PiecewiseLinearMap(_merge_collinear(pieces))


def _merge_collinear(pieces):
    """join neighbours that form a single affine piece, slopes compared to a
    relative ``TILING_TOL``.
    """
    merged = [list(pieces[0])]
    for l, r, s, il in pieces[1:]:
        pl, pr, ps, pil = merged[-1]
        end = pil + ps * float(pr - pl)
        if abs(s - ps) <= TILING_TOL * abs(ps) and abs(end - il) <= TILING_TOL * 1e-3:
            merged[-1][1] = r
        else:
            merged.append([l, r, s, il])
    return [tuple(p) for p in merged]


def apply_op(op, f):
    """h * (f o sigma) on the common refinement."""
    return op.h * compose(f, op.sigma)
