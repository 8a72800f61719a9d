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

import unittest
from fractions import Fraction

import numpy as np

from rispaces.groups import MeasurePreserving, WeightedCompositionOp
from rispaces.step_fn import (MapError, PiecewiseLinearMap, StepFunction, apply_op,
                              compose, distribution, map_compose, map_invert,
                              rearrange)
from rispaces.test_utils import TestCase, generate_step_data, params_grid
from rispaces.utils import MapGenerator
from rispaces.verify import DESK_CONFIG

Q = Fraction


def two_piece_map():
    """slope 2 on [0,1/4], 2/3 on [1/4,1]."""
    return PiecewiseLinearMap([(0, Q(1, 4), 2.0), (Q(1, 4), 1, 2.0 / 3.0)])


class TestStepFunction(TestCase):
    def testCanonicalMerge(self):
        f = StepFunction([(0, Q(1, 4), 1.0), (Q(1, 4), Q(1, 2), 1.0), (Q(1, 2), 1, 2.0)])
        self.assertEqual(len(f), 2)
        self.assertEqual(f.breakpoints, [Q(0), Q(1, 2), Q(1)])
        self.assertEqual(sum(f.measures()), 1)

    def testRejectsBadPieces(self):
        with self.assertRaises(ValueError):
            StepFunction([(0, Q(1, 4), 1.0), (Q(1, 2), 1, 2.0)])
        with self.assertRaises(ValueError):
            StepFunction([(0, Q(1, 2), 1.0)])
        with self.assertRaises(ValueError):
            StepFunction([(0, 0, 1.0), (0, 1, 2.0)])

    def testArithmetic(self):
        f = StepFunction([(0, Q(1, 4), 2.0), (Q(1, 4), 1, 1.0)])
        g = StepFunction.indicator(Q(1, 8), Q(1, 2), 3.0)
        s = f + g
        self.assertEqual(s(Q(1, 16)), 2.0)
        self.assertEqual(s(Q(3, 16)), 5.0)
        self.assertEqual(s(Q(3, 8)), 4.0)
        self.assertEqual(s(Q(3, 4)), 1.0)
        self.assertTrue((f - f).is_zero())
        self.assertEqual((f * g)(Q(3, 8)), 3.0)
        self.assertEqual((-f).sup_norm(), 2.0)
        self.assertEqual(StepFunction.constant(3.0), 3.0 * StepFunction.constant(1.0))

    def testRefine(self):
        f = StepFunction([(0, Q(1, 4), 2.0), (Q(1, 4), 1, 1.0)])
        pieces = f.refine([Q(1, 8), Q(1, 4), 0.5])
        self.assertEqual(pieces, [(0, Q(1, 8), 2.0), (Q(1, 8), Q(1, 4), 2.0),
                                  (Q(1, 4), Q(1, 2), 1.0), (Q(1, 2), 1, 1.0)])
        self.assertEqual(StepFunction(pieces), f)
        self.assertEqual(len(f.refine([])), 2)

    def testToList(self):
        f = StepFunction.indicator(0, Q(1, 4), 2.0)
        self.assertEqual(f.to_list(), [["0/1", "1/4", "2.0"], ["1/4", "1/1", "0.0"]])


class TestRearrange(TestCase):
    def testExamples(self):
        f = StepFunction([(0, Q(1, 2), 1.0), (Q(1, 2), Q(3, 4), 3.0), (Q(3, 4), 1, 2.0)])
        expected = StepFunction([(0, Q(1, 4), 3.0), (Q(1, 4), Q(1, 2), 2.0), (Q(1, 2), 1, 1.0)])
        self.assertEqual(rearrange(f), expected)

        c = StepFunction.constant(4.5)
        self.assertEqual(rearrange(c), c)

        f = StepFunction([(0, Q(1, 4), -2.0), (Q(1, 4), 1, 1.0)])
        expected = StepFunction([(0, Q(1, 4), 2.0), (Q(1, 4), 1, 1.0)])
        self.assertEqual(rearrange(f), expected)
        for t in np.linspace(0.0, 2.5, 26):
            self.assertEqual(distribution(rearrange(f), t), distribution(f, t))

    def testDistribution(self):
        f = StepFunction([(0, Q(1, 4), 2.0), (Q(1, 4), 1, 1.0)])
        self.assertEqual(distribution(f, 1.5), Q(1, 4))
        self.assertEqual(distribution(f, 0), 1)
        g = StepFunction([(0, Q(1, 4), 3.0), (Q(1, 4), Q(1, 2), 2.0), (Q(1, 2), 1, 1.0)])
        self.assertEqual(distribution(g, 2), Q(1, 2))
        with self.assertRaises(ValueError):
            distribution(f, -1.0)

    def testEquimeasurable(self):
        np.random.seed(484)
        for num_pieces, signed in params_grid([1, 2, 5, 12], [False, True]):
            f = generate_step_data(num_pieces, signed=signed)
            f_star = rearrange(f)
            self.assertEqual(rearrange(f_star), f_star)
            self.assertTrue(np.all(np.diff(f_star.values) < 0))
            ts = np.concatenate([np.abs(f.values), np.linspace(0.0, 100.0, 11)])
            for t in ts:
                self.assertEqual(distribution(f_star, t), distribution(f, t))

    def testInvariantUnderMeasurePreservingMaps(self):
        np.random.seed(484)
        gen = MapGenerator(MeasurePreserving(), max_blocks=4, seed=7)
        for pi in gen.generate(10):
            f = generate_step_data(6, signed=True)
            self.assertEqual(rearrange(compose(f, pi)), rearrange(f))


class TestCompose(TestCase):
    def testIdentity(self):
        np.random.seed(484)
        f = generate_step_data(5)
        self.assertEqual(compose(f, PiecewiseLinearMap.identity()), f)

    def testIntervalSwap(self):
        swap = PiecewiseLinearMap.interval_exchange([Q(1, 2), Q(1, 2)], [1, 0])
        f = StepFunction.indicator(0, Q(1, 2))
        self.assertEqual(compose(f, swap), StepFunction.indicator(Q(1, 2), 1))

    def testPreimageBreakpoint(self):
        # slope 3/2 on [0,1/3] sends [0,1/6] onto [0,1/4]
        sigma = PiecewiseLinearMap([(0, Q(1, 3), 1.5), (Q(1, 3), 1, 0.75)])
        self.assertEqual(compose(StepFunction.indicator(0, Q(1, 2)), sigma),
                         StepFunction.indicator(0, Q(1, 3)))
        self.assertEqual(compose(StepFunction.indicator(0, Q(1, 4)), sigma),
                         StepFunction.indicator(0, Q(1, 6)))

    def testApplyOp(self):
        np.random.seed(484)
        f = generate_step_data(4)
        ident = PiecewiseLinearMap.identity()
        self.assertEqual(apply_op(WeightedCompositionOp(StepFunction.constant(1.0), ident), f), f)
        self.assertEqual(apply_op(WeightedCompositionOp(StepFunction.constant(-1.0), ident), f), -f)

        sigma = two_piece_map()
        h = StepFunction([(0, Q(1, 4), 2.0 ** 0.5), (Q(1, 4), 1, (2.0 / 3.0) ** 0.5)])
        out = apply_op(WeightedCompositionOp(h, sigma), StepFunction.constant(1.0))
        self.assertEqual(out, h)

        sigma = DESK_CONFIG.sigma()
        h = StepFunction([(0, Q(1, 2), DESK_CONFIG.b ** 0.2),
                          (Q(1, 2), 1, (DESK_CONFIG.b * DESK_CONFIG.ratio) ** 0.2)])
        out = apply_op(WeightedCompositionOp(h, sigma), StepFunction.indicator(0, Q(1, 2)))
        cut = map_invert(sigma)(0.5)
        self.assertEqual(out.breakpoints[:2], [Q(0), Q(1, 2)])
        self.assertAllClose(float(out.breakpoints[2]), cut, rtol=0, atol=1e-12)
        self.assertStepEqual(out, StepFunction([(0, Q(1, 2), h.values[0]),
                                                (Q(1, 2), out.breakpoints[2], h.values[1]),
                                                (out.breakpoints[2], 1, 0.0)]), atol=1e-15)


class TestPiecewiseLinearMap(TestCase):
    def testTiling(self):
        with self.assertRaises(MapError):
            PiecewiseLinearMap([(0, Q(1, 2), 1.0), (Q(1, 2), 1, 1.5)])
        with self.assertRaises(MapError):
            PiecewiseLinearMap([(0, Q(1, 2), 1.0, 0.0), (Q(1, 2), 1, 1.0, 0.25)])
        with self.assertRaises(MapError):
            PiecewiseLinearMap([(0, 1, -1.0, 1.0)])

    def testSelfComposition(self):
        sigma = two_piece_map()
        sq = map_compose(sigma, sigma)
        multiset = sq.slope_multiset()
        slopes = sorted(multiset)
        self.assertAllClose(slopes, [4.0 / 9.0, 4.0 / 3.0, 4.0], rtol=1e-15, atol=0)
        self.assertEqual([multiset[s] for s in slopes], [Q(3, 4), Q(1, 8), Q(1, 8)])

    def testInverseLaw(self):
        grid = np.linspace(0.0, 1.0, 1000)
        sigma = two_piece_map()
        ident = map_compose(sigma, map_invert(sigma))
        self.assertAllClose(ident(grid), grid, rtol=0, atol=1e-12)
        ident = map_compose(map_invert(sigma), sigma)
        self.assertAllClose(ident(grid), grid, rtol=0, atol=1e-12)

        inv = map_invert(PiecewiseLinearMap.identity())
        self.assertEqual(inv, PiecewiseLinearMap.identity())
        self.assertAllClose(map_invert(sigma).slopes, [0.5, 1.5], rtol=1e-15, atol=0)

    def testInverseLawMergesRoundedSlopes(self):
        # b * (1 / b) is only 1 up to rounding
        sigma = DESK_CONFIG.sigma()
        for ident in [map_compose(sigma, map_invert(sigma)), map_compose(map_invert(sigma), sigma)]:
            self.assertEqual(len(ident), 1)
            self.assertAllClose(ident.slopes, [1.0], rtol=1e-14, atol=0)
        grid = np.linspace(0.0, 1.0, 101)
        self.assertAllClose(ident(grid), grid, rtol=0, atol=1e-12)
        distinct = PiecewiseLinearMap([(0, Q(1, 2), 1.0 - 1e-9), (Q(1, 2), 1, 1.0 + 1e-9)])
        self.assertEqual(len(map_compose(distinct, PiecewiseLinearMap.identity())), 2)

    def testInvolutionAndAssociativity(self):
        grid = np.linspace(0.0, 1.0, 257)
        gen = MapGenerator(MeasurePreserving(), max_blocks=3, seed=3)
        sigma = two_piece_map()
        tau = gen.sample()
        rho = PiecewiseLinearMap([(0, Q(1, 2), 0.5), (Q(1, 2), 1, 1.5)])
        self.assertAllClose(map_invert(map_invert(sigma))(grid), sigma(grid), rtol=0, atol=1e-12)
        left = map_compose(map_compose(sigma, tau), rho)
        right = map_compose(sigma, map_compose(tau, rho))
        self.assertAllClose(left(grid), right(grid), rtol=0, atol=1e-12)
        self.assertLessEqual(len(map_compose(sigma, tau)), len(sigma) + len(tau))


if __name__ == '__main__':
    unittest.main()
