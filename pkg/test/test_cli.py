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

import contextlib
import io
import json
import math
import os
import shutil
import tempfile
import unittest
from unittest import mock

from rispaces import cli, expr, norms
from rispaces.test_utils import TestCase

POWER2 = {"kind": "orlicz", "phi": {"family": "power", "p": 2}}
POWER3 = {"kind": "orlicz", "phi": {"family": "power", "p": 3}}
SAMPLE_F = [["0", "1/4", 2.0], ["1/4", "1", 1.0]]


class TestMain(TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def write_config(self, name, data):
        path = os.path.join(self.tmp, name)
        with open(path, "w") as f:
            f.write(data if isinstance(data, str) else json.dumps(data))
        return path

    def call(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = cli.main(list(argv))
        return code, out.getvalue(), err.getvalue()

    def testNorm(self):
        path = self.write_config("norm.json", {"command": "norm", "space": POWER2, "f": SAMPLE_F})
        code, out, _ = self.call("--config", path)
        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(out, "1.3228757\n")
        code, out, _ = self.call("--config", path, "--raw")
        self.assertAllClose(float(out), 1.75 ** 0.5, rtol=1e-10, atol=0)

    def testCommandFlag(self):
        path = self.write_config("pair.json", {"phi": {"family": "power", "p": 5},
                                               "psi": {"family": "power", "p": 5}})
        code, out, _ = self.call("classify-pair", "--config", path)
        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(out, "Equal\n")

    def testRearrange(self):
        f = [["0", "1/2", 1.0], ["1/2", "3/4", 3.0], ["3/4", "1", 2.0]]
        path = self.write_config("r.json", {"command": "rearrange", "f": f})
        code, out, _ = self.call("--config", path)
        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(json.loads(out), [["0/1", "1/4", "3.0"], ["1/4", "1/2", "2.0"],
                                           ["1/2", "1/1", "1.0"]])

    def testCheckGP(self):
        path = self.write_config("gp.json", {"command": "check-gp", "space": POWER3})
        code, out, _ = self.call("--config", path)
        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(out, "holds at n=1\n")

    def testInputErrors(self):
        cases = [
            "{not json",
            "[1, 2]",
            {"command": "norm", "space": POWER2},
            {"command": "norm", "space": {"kind": "banach"}, "f": SAMPLE_F},
            {"command": "norm", "space": POWER2, "f": [["0", "1/2", 1.0]]},
            {"command": "norm", "space": POWER2, "f": SAMPLE_F, "seed": "x"},
            {"command": "classify-pair", "phi": {"family": "expr", "src": "t^^2"},
             "psi": {"family": "power", "p": 2}},
            {"command": "discriminate", "mode": "lor", "w1": {"family": "constant"}},
            {"command": "verify", "mode": "sideways", "X": POWER2, "Y": POWER2},
        ]
        for i, data in enumerate(cases):
            path = self.write_config("bad%d.json" % i, data)
            code, out, err = self.call("--config", path)
            self.assertEqual(code, cli.EXIT_INPUT, msg=str(data))
            self.assertEqual(out, "")
            self.assertTrue(err.startswith("input error:"), msg=err)
        code, _, err = self.call()
        self.assertEqual(code, cli.EXIT_INPUT)
        self.assertIn("no command", err)

    def testNonConvexExpressionRejected(self):
        path = self.write_config("sqrt.json", {"command": "multipliers",
                                               "phi": {"family": "expr", "src": "t^0.5"}})
        code, _, err = self.call("--config", path)
        self.assertEqual(code, cli.EXIT_INPUT)
        self.assertIn("convex", err)

    def testInvalidPhiRejectedForEveryFamily(self):
        weight_phi = {"family": "weight_phi", "w": {"family": "affine", "alpha": 2, "beta": 2},
                      "G": {"family": "power", "p": 2}}
        wobbly_scaled = {"family": "scaled", "b": 2.0, "p": 1.0,
                       "base": {"family": "logperiodic", "p": 1, "eps": 1, "omega": 2,
                                "check": False}}
        for phi in [weight_phi, wobbly_scaled]:
            path = self.write_config("bad.json", {"command": "norm", "f": SAMPLE_F,
                                                  "space": {"kind": "orlicz", "phi": phi}})
            code, out, err = self.call("--config", path)
            self.assertEqual(code, cli.EXIT_INPUT, msg=phi["family"])
            self.assertEqual(out, "")
            self.assertTrue(err.startswith("input error: {} function".format(phi["family"])),
                            msg=err)
        # the same function is a valid F on [1, inf)
        ms = {"kind": "ms", "F": weight_phi, "G": {"family": "power", "p": 2}}
        path = self.write_config("ms.json", {"command": "norm", "space": ms, "f": SAMPLE_F})
        code, out, _ = self.call("--config", path, "--raw")
        self.assertEqual(code, cli.EXIT_OK)
        self.assertAllClose(float(out), math.sqrt(4 * 0.4375 + 0.5625), rtol=1e-7, atol=0)

    def testUncheckedLogPeriodicAccepted(self):
        lp = {"family": "logperiodic", "p": 5, "eps": 1, "omega": 5.5, "check": False}
        path = self.write_config("lp.json", {"command": "norm", "f": SAMPLE_F,
                                             "space": {"kind": "orlicz", "phi": lp}})
        code, out, err = self.call("--config", path)
        self.assertEqual(code, cli.EXIT_OK, msg=err)
        self.assertGreater(float(out), 0.0)

    def testNumericalErrorExitCode(self):
        path = self.write_config("norm.json", {"command": "norm", "space": POWER2, "f": SAMPLE_F})
        with mock.patch.object(cli, "run", side_effect=norms.ConvergenceError("no bracket")):
            code, out, err = self.call("--config", path)
        self.assertEqual(code, cli.EXIT_INPUT)
        self.assertEqual(out, "")
        self.assertEqual(err, "numerical error: ConvergenceError: no bracket\n")

    def testVerifyFailureExitCode(self):
        path = self.write_config("v.json", {"command": "verify", "mode": "identity",
                                            "X": POWER2, "Y": POWER3, "suite_size": 10})
        code, out, _ = self.call("--config", path)
        self.assertEqual(code, cli.EXIT_FAILED)
        self.assertTrue(out.startswith("max residual"))

    def testDeterministicReport(self):
        path = self.write_config("v.json", {"command": "verify", "mode": "identity",
                                            "X": POWER2, "Y": POWER2, "suite_size": 5})
        texts = []
        for name in ("a.json", "b.json"):
            out = os.path.join(self.tmp, name)
            code, _, _ = self.call("--config", path, "--seed", "5", "--no-timestamp", "--out", out)
            self.assertEqual(code, cli.EXIT_OK)
            with open(out) as f:
                texts.append(f.read())
        self.assertEqual(texts[0], texts[1])
        doc = json.loads(texts[0])
        self.assertEqual(doc["seed"], 5)
        self.assertNotIn("timestamp", doc)
        self.assertEqual(doc["summary"]["total"], 5)

        out = os.path.join(self.tmp, "c.json")
        self.call("--config", path, "--out", out)
        with open(out) as f:
            self.assertIn("timestamp", json.load(f))

        out = os.path.join(self.tmp, "d.csv")
        self.call("--config", path, "--format", "csv", "--out", out)
        with open(out) as f:
            lines = f.read().splitlines()
        self.assertEqual(lines[0], "report,case_id,residual,passed")
        self.assertEqual(len(lines), 6)

    def testOperatorVerify(self):
        sigma = [["0", "1/4", 2.0], ["1/4", "1", 2.0 / 3.0]]
        path = self.write_config("op.json", {"command": "verify", "mode": "operator",
                                             "X": POWER2, "Y": POWER2, "sigma": sigma,
                                             "p": 2, "suite_size": 5})
        code, out, _ = self.call("--config", path)
        self.assertEqual(code, cli.EXIT_OK)
        self.assertIn("passed 5/5", out)

    def testReExports(self):
        self.assertIs(cli.parse_expression, expr.parse_expression)
        self.assertIs(cli.ExpressionError, expr.ExpressionError)


class TestRunConfig(TestCase):
    def testValidate(self):
        cli.RunConfig("norm", {"space": POWER2, "f": SAMPLE_F}).validate()
        with self.assertRaises(cli.ConfigError):
            cli.RunConfig("integrate").validate()
        with self.assertRaises(cli.ConfigError):
            cli.RunConfig("reproduce-example", format="xml").validate()
        with self.assertRaises(cli.ConfigError):
            cli.RunConfig("reproduce-example", tol=0.0).validate()
        with self.assertRaises(cli.ConfigError):
            cli.RunConfig("reproduce-example", seed=True).validate()

    def testRun(self):
        cfg = cli.RunConfig("norm", {"space": POWER2, "f": SAMPLE_F}, timestamp=False)
        code, outcome = cli.run(cfg)
        self.assertEqual(code, cli.EXIT_OK)
        self.assertEqual(outcome.document["command"], "norm")
        self.assertAllClose(outcome.document["norms"], [1.75 ** 0.5], rtol=1e-10, atol=0)
        text = cli.render(outcome, "csv")
        self.assertTrue(text.startswith("key,value\n"))


if __name__ == '__main__':
    unittest.main()
