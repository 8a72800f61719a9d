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

from fractions import Fraction

import numpy as np

from rispaces.groups import Discrete, MeasurePreserving, ScaleInvariant
from rispaces.step_fn import PiecewiseLinearMap, StepFunction, rationalize


def dyadic_partition(level):
    """interior cut points k / 2^level."""
    n = 2 ** level
    return [Fraction(k, n) for k in range(1, n)]


def _random_cuts(rng, count, level):
    n = 2 ** level
    picks = rng.choice(np.arange(1, n), size=count, replace=False)
    return [Fraction(int(k), n) for k in np.sort(picks)]


class SuiteGenerator:
    """random step functions with dyadic breakpoints.

    Args:
        max_pieces: piece counts are drawn from 1..max_pieces.
        value_range: |values| are log-uniform on this range.
        level: breakpoints are multiples of 2^-level.
        signed: draw random signs as well.
        seed: seed of the private RandomState.
    """

    def __init__(self,
                 max_pieces=8,
                 value_range=(1e-2, 1e2),
                 level=8,
                 signed=False,
                 seed=0):
        assert max_pieces >= 1
        assert 0 < value_range[0] <= value_range[1]
        assert 2 ** level >= max_pieces
        self._max_pieces = max_pieces
        self._value_range = (float(value_range[0]), float(value_range[1]))
        self._level = level
        self._signed = signed
        self._seed = seed
        self._rng = np.random.RandomState(seed)

    def sample(self):
        rng = self._rng
        count = rng.randint(1, self._max_pieces + 1)
        cuts = _random_cuts(rng, count - 1, self._level)
        lo, hi = np.log(self._value_range[0]), np.log(self._value_range[1])
        values = np.exp(rng.uniform(lo, hi, size=count))
        if self._signed:
            values *= rng.choice([-1.0, 1.0], size=count)
        return StepFunction.from_breakpoints(cuts, values.tolist())

    def generate(self, num):
        return [self.sample() for _ in range(num)]

    @property
    def max_pieces(self):
        return self._max_pieces

    @property
    def value_range(self):
        return self._value_range

    @property
    def level(self):
        return self._level

    @property
    def seed(self):
        return self._seed


class MapGenerator:
    """random piecewise-linear maps inside a slope class.

    The domain is cut into dyadic blocks. A block is either moved rigidly
    or split in two parts with slopes s_hi > 1 > s_lo, the split point
    chosen so the block keeps its length. Blocks land in a random order.

    Args:
        group: MeasurePreserving, ScaleInvariant(a) or Discrete(a, d).
        max_blocks: block counts are drawn from 1..max_blocks.
        level: block lengths are multiples of 2^-level.
        seed: seed of the private RandomState.
    """

    def __init__(self, group, max_blocks=3, level=4, seed=0):
        if not isinstance(group, (MeasurePreserving, ScaleInvariant, Discrete)):
            raise NotImplementedError("no generator for {!r}".format(group))
        assert 2 ** level >= max_blocks
        self._group = group
        self._max_blocks = max_blocks
        self._level = level
        self._rng = np.random.RandomState(seed)

    def _slope_pair(self, shift):
        """slopes (s_hi, s_lo) for the current map's coset."""
        rng = self._rng
        group = self._group
        if isinstance(group, ScaleInvariant):
            b, a = shift, group.a
            k_hi = rng.choice([0, 1]) if b > 1 else 1
            k_lo = rng.choice([-1, -2])
            return b * a ** k_hi, b * a ** k_lo
        a, d = group.a, group.d
        k_hi = shift if shift > 0 else shift + d
        k_hi += d * rng.randint(0, 2)
        k_lo = shift - d * rng.randint(1, 3)
        return a ** k_hi, a ** k_lo

    def sample(self):
        rng = self._rng
        group = self._group
        count = rng.randint(1, self._max_blocks + 1)
        cuts = [Fraction(0)] + _random_cuts(rng, count - 1, self._level) + [Fraction(1)]
        lengths = [r - l for l, r in zip(cuts[:-1], cuts[1:])]
        if isinstance(group, MeasurePreserving):
            return PiecewiseLinearMap.interval_exchange(lengths, list(rng.permutation(count)))

        if isinstance(group, ScaleInvariant):
            shift = float(rng.uniform(1.0, group.a))
            rigid = False
        else:
            shift = int(rng.randint(0, group.d))
            rigid = shift == 0
        image_order = list(rng.permutation(count))
        image_left = {}
        pos = Fraction(0)
        for i in image_order:
            image_left[i] = pos
            pos += lengths[i]

        pieces = []
        for i, (left, length) in enumerate(zip(cuts[:-1], lengths)):
            start = float(image_left[i])
            if rigid and rng.rand() < 0.3:
                pieces.append((left, left + length, 1.0, start))
                continue
            s_hi, s_lo = self._slope_pair(shift)
            split = rationalize((1.0 - s_lo) / (s_hi - s_lo)) * length
            pieces.append((left, left + split, s_hi, start))
            pieces.append((left + split, left + length, s_lo, start + s_hi * float(split)))
        return PiecewiseLinearMap(pieces)

    def generate(self, num):
        return [self.sample() for _ in range(num)]

    @property
    def group(self):
        return self._group

    @property
    def max_blocks(self):
        return self._max_blocks
