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
"""Command line front end.

Every run is described by a JSON config; flags override the seed,
tolerance and output settings. Exit codes: 0 all cases pass, 1 a
verification failed, 2 the input was rejected.
"""

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from rispaces import codec, groups, norms, verify
from rispaces import phi as phi_lib
from rispaces.expr import ExpressionError, parse_expression  # noqa: F401
from rispaces.step_fn import rearrange

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

# required keys per command
SCHEMA = {
    "norm": ("space", "f"),
    "rearrange": ("f",),
    "classify-map": ("sigma",),
    "multipliers": ("phi",),
    "check-gp": ("space",),
    "discriminate": ("mode",),
    "verify": ("mode", "X", "Y"),
    "classify-pair": ("phi", "psi"),
    "reproduce-example": (),
}
COMMANDS = tuple(SCHEMA)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    tol: float = None
    out: str = None
    format: str = "json"
    timestamp: bool = True
    raw: bool = False

    def validate(self):
        if self.command not in SCHEMA:
            raise ConfigError("unknown command {!r}, expected one of {}".format(
                self.command, ", ".join(COMMANDS)))
        missing = [k for k in SCHEMA[self.command] if k not in self.params]
        if missing:
            raise ConfigError("{} config is missing {}".format(self.command, ", ".join(missing)))
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv, got {!r}".format(self.format))
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigError("seed must be an integer, got {!r}".format(self.seed))
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tol must be positive, got {!r}".format(self.tol))
        return self


@dataclass
class Outcome:
    document: dict
    passed: bool = True
    lines: list = field(default_factory=list)
    reports: list = field(default_factory=list)


def _fmt(x, raw):
    if raw:
        return repr(float(x))
    return "%.8g" % x


# Montgomery-Smith F and G are only read on [1, inf)
MS_GRID = phi_lib.VALIDATION_GRID[phi_lib.VALIDATION_GRID >= 1.0]


def _checked_phi(d, on_ms=False):
    func = codec.phi_from_dict(d)
    if on_ms:
        violations = phi_lib.validate(func, MS_GRID, at_zero=False, convex=False)
    else:
        violations = phi_lib.validate(func)
    if isinstance(func, phi_lib.LogPeriodic) and not func.checked:
        # check=False waives the shape conditions, not finiteness
        violations = [v for v in violations if v.startswith("non-finite")]
    if not violations:
        return func
    if isinstance(func, phi_lib.Expression):
        raise ConfigError("expression {!r} is not an Orlicz function: {}".format(
            func.src, "; ".join(violations)))
    raise ConfigError("{} function is not {}: {}".format(
        d.get("family"), "a phi-function on [1, inf)" if on_ms else "an Orlicz function",
        "; ".join(violations)))


def _space(d):
    space = codec.space_from_dict(d)
    for part in ("phi", "F", "G"):
        sub = d.get(part)
        if isinstance(sub, dict):
            _checked_phi(sub, on_ms=part != "phi")
    return space


def _functions(params, cfg, key="f"):
    if key in params:
        data = params[key]
        if data and isinstance(data[0], list) and data[0] and isinstance(data[0][0], list):
            return [codec.step_function_from_list(x) for x in data]
        return [codec.step_function_from_list(data)]
    return verify.default_suite(cfg.seed, int(params.get("suite_size", verify.SUITE_SIZE)))


def _cmd_norm(cfg):
    X = _space(cfg.params["space"])
    fs = _functions(cfg.params, cfg)
    values = [norms.norm(X, f) for f in fs]
    doc = {"space": X.to_dict(), "norms": values}
    return Outcome(doc, lines=[_fmt(v, cfg.raw) for v in values])


def _cmd_rearrange(cfg):
    fs = _functions(cfg.params, cfg)
    out = [rearrange(f).to_list() for f in fs]
    return Outcome({"rearranged": out}, lines=[json.dumps(x) for x in out])


def _cmd_classify_map(cfg):
    sigma = codec.map_from_list(cfg.params["sigma"])
    a = cfg.params.get("a")
    result = groups.classify_map(sigma, a=None if a is None else float(a),
                                 d=int(cfg.params.get("d", 1)),
                                 tol=cfg.tol or groups.LOG_TOL)
    doc = result.to_dict()
    return Outcome(doc, lines=[json.dumps(doc["finest"])])


def _cmd_multipliers(cfg):
    func = _checked_phi(cfg.params["phi"])
    group = phi_lib.multiplier_group(func, tol=cfg.tol or phi_lib.MULTIPLIER_TOL,
                                     seed=cfg.seed)
    doc = {"phi": func.to_dict(), "group": group.to_dict()}
    lines = [group.kind]
    if group.kind == "cyclic":
        p = phi_lib.growth_exponent(func, group.generator)
        doc["growth_exponent"] = p
        lines.append("generator " + _fmt(group.generator, cfg.raw))
        lines.append("exponent " + _fmt(p, cfg.raw))
    elif group.kind == "full":
        p = phi_lib.growth_exponent(func, 2.0)
        doc["growth_exponent"] = p
        lines.append("exponent " + _fmt(p, cfg.raw))
    else:
        lines.append("c_max {} bound the scan".format(_fmt(group.c_max, cfg.raw)))
    return Outcome(doc, lines=lines)


def _cmd_check_gp(cfg):
    X = _space(cfg.params["space"])
    grid = cfg.params.get("t_grid")
    result = verify.check_gp(X, n_max=int(cfg.params.get("n_max", 8)),
                             t_grid=None if grid is None else np.array(grid, dtype=np.float64),
                             margin=cfg.tol or verify.GP_MARGIN)
    doc = result.to_dict()
    line = "holds at n={}".format(result.holds_at) if result.holds_at else "not found"
    if result.caveat:
        line += " ({})".format(result.caveat)
    return Outcome(doc, lines=[line])


def _cmd_discriminate(cfg):
    mode = cfg.params["mode"]
    if mode == "lo":
        G = phi_lib.as_phi_function(_checked_phi(cfg.params.get("G", {"family": "power", "p": 1})))
        value = verify.lo_discriminator(G)
        return Outcome({"G": G.to_dict(), "sup_residual": value}, lines=[_fmt(value, cfg.raw)])
    if mode == "lor":
        try:
            w1 = codec.weight_from_dict(cfg.params["w1"])
            w2 = codec.weight_from_dict(cfg.params["w2"])
            p1, p2 = float(cfg.params["p1"]), float(cfg.params["p2"])
        except KeyError as e:
            raise ConfigError("lor discriminator config is missing {}".format(e)) from None
        report = verify.lor_discriminators(w1, p1, w2, p2, cfg.params.get("s_grid"))
        return Outcome(report.to_dict(), passed=report.all_passed,
                       lines=[_fmt(report.max_residual, cfg.raw)], reports=[report])
    raise ConfigError("discriminate mode must be 'lo' or 'lor', got {!r}".format(mode))


def _cmd_verify(cfg):
    X = _space(cfg.params["X"])
    Y = _space(cfg.params["Y"])
    suite = _functions(cfg.params, cfg, key="suite")
    mode = cfg.params["mode"]
    params = {"seed": cfg.seed}
    if mode == "identity":
        report = verify.verify_identity_isometry(X, Y, suite, tol=cfg.tol or verify.IDENTITY_TOL,
                                                 parameters=params)
    elif mode == "operator":
        if "sigma" not in cfg.params or "p" not in cfg.params:
            raise ConfigError("operator verification needs sigma and p")
        sigma = codec.map_from_list(cfg.params["sigma"])
        T = groups.build_isometry_candidate(sigma, float(cfg.params["p"]),
                                            signs=cfg.params.get("signs"))
        report = verify.verify_operator_isometry(T, X, Y, suite,
                                                 tol=cfg.tol or verify.OPERATOR_TOL,
                                                 parameters=params)
    else:
        raise ConfigError("verify mode must be 'identity' or 'operator', got {!r}".format(mode))
    lines = ["max residual " + _fmt(report.max_residual, cfg.raw),
             "passed {}/{}".format(report.pass_count, len(report.cases))]
    return Outcome(report.to_dict(), passed=report.all_passed, lines=lines, reports=[report])


def _cmd_classify_pair(cfg):
    phi = _checked_phi(cfg.params["phi"])
    psi = _checked_phi(cfg.params["psi"])
    result = verify.orlicz_pair_classify(phi, psi, tol=cfg.tol or verify.PAIR_TOL)
    line = result.kind.capitalize()
    if result.kind == "scaled":
        line += " b={} p={}".format(_fmt(result.b, cfg.raw), _fmt(result.p, cfg.raw))
    return Outcome(result.to_dict(), lines=[line])


def _cmd_reproduce_example(cfg):
    result = verify.reproduce_example(seed=cfg.seed,
                                      suite_size=int(cfg.params.get("suite_size", verify.SUITE_SIZE)),
                                      exact=bool(cfg.params.get("exact", True)))
    lines = ["{} max residual {}".format(name, _fmt(r.max_residual, cfg.raw))
             for name, r in result.reports.items()]
    lines.append("identity refuted: {}".format(result.identity_refuted))
    return Outcome(result.to_dict(), passed=result.passed, lines=lines,
                   reports=list(result.reports.values()))


HANDLERS = {
    "norm": _cmd_norm,
    "rearrange": _cmd_rearrange,
    "classify-map": _cmd_classify_map,
    "multipliers": _cmd_multipliers,
    "check-gp": _cmd_check_gp,
    "discriminate": _cmd_discriminate,
    "verify": _cmd_verify,
    "classify-pair": _cmd_classify_pair,
    "reproduce-example": _cmd_reproduce_example,
}


def run(cfg):
    """execute a validated config; returns (exit code, Outcome)."""
    cfg.validate()
    logger.info("running %s (seed=%d, tol=%s)", cfg.command, cfg.seed, cfg.tol)
    outcome = HANDLERS[cfg.command](cfg)
    outcome.document = dict(outcome.document, command=cfg.command, seed=cfg.seed,
                            passed=outcome.passed)
    if cfg.timestamp:
        outcome.document["timestamp"] = datetime.now(timezone.utc).isoformat()
    return (EXIT_OK if outcome.passed else EXIT_FAILED), outcome


def render(outcome, fmt):
    if fmt == "json":
        return json.dumps(outcome.document, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if outcome.reports:
        writer.writerow(["report", "case_id", "residual", "passed"])
        for report in outcome.reports:
            writer.writerows(report.csv_rows())
    else:
        writer.writerow(["key", "value"])
        for key in sorted(outcome.document):
            writer.writerow([key, json.dumps(outcome.document[key], sort_keys=True)])
    return buf.getvalue()


def load_config(args):
    data = {}
    if args.config:
        try:
            with open(args.config) as f:
                data = json.load(f)
        except OSError as e:
            raise ConfigError("cannot read config: {}".format(e)) from None
        except json.JSONDecodeError as e:
            raise ConfigError("config is not valid JSON: {}".format(e)) from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    command = args.command or data.get("command")
    if command is None:
        raise ConfigError("no command given")
    params = {k: v for k, v in data.items()
              if k not in ("command", "seed", "tol", "out", "format")}
    cfg = RunConfig(command=command, params=params,
                    seed=data.get("seed", 0), tol=data.get("tol"),
                    out=data.get("out"), format=data.get("format", "json"))
    if args.seed is not None:
        cfg.seed = args.seed
    if args.tol is not None:
        cfg.tol = args.tol
    if args.out is not None:
        cfg.out = args.out
    if args.format is not None:
        cfg.format = args.format
    cfg.timestamp = not args.no_timestamp
    cfg.raw = args.raw
    return cfg.validate()


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rispaces",
        description="Norms, isometries and classification checks for "
                    "rearrangement-invariant spaces on [0, 1].")
    parser.add_argument("command", nargs="?", choices=COMMANDS,
                        help="command to run (default: the config's 'command')")
    parser.add_argument("--config", help="JSON run config")
    parser.add_argument("--out", help="write the report to this file")
    parser.add_argument("--format", choices=("json", "csv"), help="report format (default: json)")
    parser.add_argument("--seed", type=int, help="seed of the random suites")
    parser.add_argument("--tol", type=float, help="override the command's tolerance")
    parser.add_argument("--no-timestamp", action="store_true", help="omit the report timestamp")
    parser.add_argument("--raw", action="store_true", help="print full precision")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args)
        code, outcome = run(cfg)
    except ValueError as e:
        print("input error: {}".format(e), file=sys.stderr)
        return EXIT_INPUT
    except RuntimeError as e:
        # bracketing and norm searches only fail on inputs outside their domain
        print("numerical error: {}: {}".format(type(e).__name__, e), file=sys.stderr)
        return EXIT_INPUT
    for line in outcome.lines:
        print(line)
    text = render(outcome, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as f:
            f.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
