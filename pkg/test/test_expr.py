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

import numpy as np

from rispaces.expr import (Binary, ExpressionError, Number, Unary, Variable,
                           parse_expression)
from rispaces.phi import Expression, LogPeriodic
from rispaces.test_utils import TestCase


class TestParseExpression(TestCase):
    def testExampleMatchesLogPeriodic(self):
        t = np.logspace(-2, 2, 100)
        func = Expression("t^5 * exp(sin(ln(t)))")
        self.assertAllClose(func(t), LogPeriodic(5, 1, 1)(t), rtol=1e-12, atol=0)

    def testIdentity(self):
        self.assertEqual(parse_expression("t"), Variable())
        t = np.linspace(0.0, 3.0, 7)
        self.assertAllEqual(parse_expression("t").evaluate(t), t)

    def testPrecedence(self):
        self.assertEqual(parse_expression("1 + 2 * t"),
                         Binary("+", Number(1.0), Binary("*", Number(2.0), Variable())))
        # right associative
        self.assertEqual(parse_expression("2^3^2").evaluate(1.0), 512.0)
        # ^ binds tighter than unary minus
        self.assertEqual(parse_expression("-t^2").evaluate(3.0), -9.0)
        self.assertEqual(parse_expression("2^-1").evaluate(1.0), 0.5)
        self.assertEqual(parse_expression("8 / 4 / 2").evaluate(1.0), 1.0)
        self.assertEqual(parse_expression("1 - 2 - 3").evaluate(1.0), -4.0)
        self.assertEqual(parse_expression("cos(pi) + 0*e"), Binary(
            "+", Unary("cos", Number(np.pi)), Binary("*", Number(0.0), Number(np.e))))

    def testSourceRoundTrip(self):
        for src in ["t", "t^5 * exp(sin(ln(t)))", "-t^2 + 3.5e-3 * t", "((t))",
                    "2^-t^2", "t / (1 + t) - cos(pi * t)", "1e+16 * t"]:
            tree = parse_expression(src)
            self.assertEqual(parse_expression(tree.to_source()), tree)

    def testSyntaxErrorColumn(self):
        with self.assertRaises(ExpressionError) as ctx:
            parse_expression("t^^2")
        self.assertEqual(ctx.exception.line, 1)
        self.assertEqual(ctx.exception.column, 3)

        with self.assertRaises(ExpressionError) as ctx:
            parse_expression("t +\n  foo(t)")
        self.assertEqual(ctx.exception.line, 2)
        self.assertEqual(ctx.exception.column, 3)
        self.assertIn("unknown identifier", ctx.exception.message)

    def testTotality(self):
        bad = ["", "(", "t)", "exp", "exp t", "sin(", "t $ 2", "t t", "* t",
               "3..2", "ln()", "(" * 5000 + "t" + ")" * 5000, None]
        for src in bad:
            with self.assertRaises(ExpressionError):
                parse_expression(src)

    def testExpressionRejectsNonFinite(self):
        with self.assertRaises(ValueError):
            Expression("ln(t - 1)")
        self.assertEqual(Expression("t * ln(1 + t)")(0.0), 0.0)
        self.assertEqual(Expression("t^2 * exp(sin(ln(t)))")(0.0), 0.0)


if __name__ == '__main__':
    unittest.main()
