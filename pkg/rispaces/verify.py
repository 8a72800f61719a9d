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
"""Verification harness: isometry suites, (GP) checks, discriminators for
Lorentz-type spaces, the Orlicz pair classifier and the log-periodic
example with its scaled twin.
"""

import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import optimize

from rispaces import norms
from rispaces import phi as phi_lib
from rispaces.groups import build_isometry_candidate
from rispaces.step_fn import PiecewiseLinearMap, StepFunction, apply_op
from rispaces.utils import SuiteGenerator, dyadic_partition

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-9
OPERATOR_TOL = 1e-6
GP_MARGIN = 1e-10
GP_GRID = np.logspace(-1, 2, 31)
LOR1_TOL = 1e-9
LOR2_TOL = 1e-4
LOR2_STEP = 1e-6
PAIR_TOL = 1e-7
PAIR_GRID = np.logspace(-3, 3, 241)
PAIR_SCAN = 2048
SUITE_SIZE = 100


def num_threads():
    env = os.environ.get("RISPACES_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            logger.warning("ignoring RISPACES_THREADS=%r", env)
    return os.cpu_count() or 1


def _finite_or_text(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    return x


@dataclass
class CaseResult:
    case_id: str
    values: dict
    residual: float
    tolerance: float
    error: str = None

    @property
    def passed(self):
        return self.error is None and self.residual is not None and self.residual <= self.tolerance

    def to_dict(self):
        return {
            "case_id": self.case_id,
            "values": {k: _finite_or_text(v) for k, v in self.values.items()},
            "residual": _finite_or_text(self.residual),
            "tolerance": self.tolerance,
            "passed": self.passed,
            "error": self.error,
        }


@dataclass
class VerificationReport:
    name: str
    cases: list = field(default_factory=list)
    parameters: dict = field(default_factory=dict)

    @property
    def max_residual(self):
        residuals = [c.residual for c in self.cases if c.residual is not None]
        if len(residuals) < len(self.cases):
            return float("inf")
        return max(residuals) if residuals else 0.0

    @property
    def pass_count(self):
        return sum(1 for c in self.cases if c.passed)

    @property
    def all_passed(self):
        return self.pass_count == len(self.cases)

    def summary(self):
        return {
            "max_residual": _finite_or_text(self.max_residual),
            "pass_count": self.pass_count,
            "total": len(self.cases),
            "all_passed": self.all_passed,
        }

    def to_dict(self):
        return {
            "name": self.name,
            "parameters": self.parameters,
            "summary": self.summary(),
            "cases": [c.to_dict() for c in self.cases],
        }

    def to_json(self, **extra):
        doc = self.to_dict()
        doc.update(extra)
        return json.dumps(doc, indent=2, sort_keys=True)

    def csv_rows(self):
        return [(self.name, c.case_id, repr(c.residual), c.passed) for c in self.cases]

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["report", "case_id", "residual", "passed"])
        writer.writerows(self.csv_rows())
        return buf.getvalue()


def run_cases(fn, items):
    """fn over items on a thread pool, results in input order."""
    items = list(items)
    workers = min(num_threads(), max(len(items), 1))
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def default_suite(seed=0, size=SUITE_SIZE):
    return SuiteGenerator(seed=seed).generate(size)


def _relative_gap(nx, ny):
    return abs(nx - ny) / max(1.0, nx)


def verify_identity_isometry(X, Y, suite, tol=IDENTITY_TOL, parameters=None):
    """compare N_X(f) and N_Y(f) on every f of the suite."""
    if not suite:
        raise ValueError("suite must not be empty")

    def case(item):
        i, f = item
        try:
            nx = norms.norm(X, f)
            ny = norms.norm(Y, f)
        except (ValueError, RuntimeError) as e:
            return CaseResult(str(i), {}, None, tol, error="{}: {}".format(type(e).__name__, e))
        return CaseResult(str(i), {"N_X": nx, "N_Y": ny}, _relative_gap(nx, ny), tol)

    cases = run_cases(case, enumerate(suite))
    params = {"X": X.to_dict(), "Y": Y.to_dict(), "suite_size": len(suite)}
    params.update(parameters or {})
    return VerificationReport("identity_isometry", cases, params)


def verify_operator_isometry(T, X, Y, suite, tol=OPERATOR_TOL, parameters=None):
    """compare N_Y(T f) with N_X(f) on every f of the suite."""
    if not suite:
        raise ValueError("suite must not be empty")

    def case(item):
        i, f = item
        try:
            nx = norms.norm(X, f)
            ny = norms.norm(Y, apply_op(T, f))
        except (ValueError, RuntimeError) as e:
            return CaseResult(str(i), {}, None, tol, error="{}: {}".format(type(e).__name__, e))
        return CaseResult(str(i), {"N_X": nx, "N_Y_Tf": ny}, _relative_gap(nx, ny), tol)

    cases = run_cases(case, enumerate(suite))
    params = {"X": X.to_dict(), "Y": Y.to_dict(), "suite_size": len(suite),
              "sigma": T.sigma.to_list(), "h": T.h.to_list()}
    params.update(parameters or {})
    return VerificationReport("operator_isometry", cases, params)


@dataclass
class GPResult:
    holds_at: int
    details: list
    caveat: str = None

    def to_dict(self):
        out = {"holds_at": self.holds_at, "details": self.details,
               "status": "numerically supported" if self.holds_at else "not found"}
        if self.caveat:
            out["caveat"] = self.caveat
        return out


def gp_margins(X, n, t_grid=None):
    """N(chi[0,2^-n] + t chi[2^-n,1]) - N(chi[0,2^-n]) over the grid."""
    t_grid = GP_GRID if t_grid is None else np.asarray(t_grid, dtype=np.float64)
    cut = Fraction(1, 2 ** n)
    base = norms.norm(X, StepFunction.indicator(0, cut))
    margins = np.array([
        norms.norm(X, StepFunction([(0, cut, 1.0), (cut, 1, float(t))])) - base
        for t in t_grid])
    return base, margins


def check_gp(X, n_max=8, t_grid=None, margin=GP_MARGIN):
    """smallest n <= n_max at which adding any grid tail strictly increases
    the norm of chi[0,2^-n]; holds_at is None if there is none.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    t_grid = GP_GRID if t_grid is None else np.asarray(t_grid, dtype=np.float64)
    if np.any(t_grid <= 0):
        raise ValueError("t grid must be positive")
    details = []
    for n in range(1, n_max + 1):
        base, margins = gp_margins(X, n, t_grid)
        worst = int(np.argmin(margins))
        details.append({"n": n, "base_norm": base, "min_margin": float(margins[worst]),
                        "worst_t": float(t_grid[worst])})
        if margins[worst] > margin:
            return GPResult(n, details, _gp_caveat(n, t_grid))
    return GPResult(None, details)


def _gp_caveat(n, t_grid):
    # phi vanishing on [0, 1/2] leaves chi[0,2^-n] flat under tails below 1 / (2^n + 1)
    smallest = float(np.min(t_grid))
    if smallest <= 1.0 / (2 ** n + 1):
        return None
    caveat = "smallest tail {:.6g} is above 1/(2^{}+1), flat tails can be missed".format(
        smallest, n)
    logger.warning("(GP) at n=%d: %s", n, caveat)
    return caveat


def gp_dichotomy_probe(X, eta=0.1, level=3, iters=10):
    """pair (GP) at n = 1 with the dual lower bound of chi[0,1/2] + eta chi[1/2,1].

    Without (GP) at n = 1 the two norms coincide for small eta and the dual
    bound is pushed to (1 + eta^2) / 2, the contradiction that forces (GP')
    on the dual.
    """
    half = Fraction(1, 2)
    g = StepFunction([(0, half, 1.0), (half, 1, float(eta))])
    gp = check_gp(X, n_max=1)
    base = norms.norm(X, StepFunction.indicator(0, half))
    dual = norms.dual_norm_lower_bound(X, g, dyadic_partition(level), iters=iters)
    product = base * dual
    target = (1 + eta * eta) / 2
    return {
        "gp_at_1": gp.holds_at == 1,
        "base_norm": base,
        "dual_lower_bound": dual,
        "product": product,
        "target": target,
        "certified": product >= target - 1e-3,
    }


def lo1_residual(G, s, a):
    """|G~(s) G((1 - a + a s) / s) + (1 - G~(s)) G(a) - 1| with G~(s) = 1/G(1/s)."""
    if not 0 < s < 1:
        raise ValueError("s must lie in (0, 1), got {}".format(s))
    if not 0 < a <= 1:
        raise ValueError("a must lie in (0, 1], got {}".format(a))
    gs = 1.0 / G(1.0 / s)
    lhs = gs * G((1.0 - a + a * s) / s) + (1.0 - gs) * G(a)
    return abs(lhs - 1.0)


def lo_discriminator(G, s_grid=None, a_grid=None):
    s_grid = np.linspace(0.01, 0.99, 50) if s_grid is None else s_grid
    a_grid = np.linspace(0.02, 1.0, 50) if a_grid is None else a_grid
    if len(s_grid) == 0 or len(a_grid) == 0:
        raise ValueError("grid must not be empty")
    return max(lo1_residual(G, float(s), float(a)) for s in s_grid for a in a_grid)


def lorentz_profile(w, p, s, a):
    """||chi[0,s] + a chi[s,1]||_{w,p} = (W(s) + a^p (W(1) - W(s)))^(1/p)."""
    ws = float(w.W(s))
    return (ws + a ** p * (w.total - ws)) ** (1.0 / p)


def lorentz_profile_slope(w, p, s, step=LOR2_STEP):
    """d/da of the profile at a = 1."""
    central = (lorentz_profile(w, p, s, 1.0 + step)
               - lorentz_profile(w, p, s, 1.0 - step)) / (2 * step)
    if math.isfinite(central):
        return central
    return (lorentz_profile(w, p, s, 1.0) - lorentz_profile(w, p, s, 1.0 - step)) / step


def lor_discriminators(w1, p1, w2, p2, s_grid=None):
    s_grid = np.linspace(0.05, 0.95, 19) if s_grid is None else s_grid
    cases = []
    for s in s_grid:
        s = float(s)
        v1, v2 = lorentz_profile(w1, p1, s, 0.0), lorentz_profile(w2, p2, s, 0.0)
        cases.append(CaseResult("lor1@{:.6g}".format(s), {"first": v1, "second": v2},
                                abs(v1 - v2), LOR1_TOL))
        d1, d2 = lorentz_profile_slope(w1, p1, s), lorentz_profile_slope(w2, p2, s)
        cases.append(CaseResult("lor2@{:.6g}".format(s), {"first": d1, "second": d2},
                                abs(d1 - d2), LOR2_TOL))
    params = {"w1": w1.to_dict(), "p1": p1, "w2": w2.to_dict(), "p2": p2}
    return VerificationReport("lorentz_discriminators", cases, params)


@dataclass
class PairClassification:
    """kind is 'equal', 'scaled' or 'distinct'."""
    kind: str
    b: float = None
    p: float = None
    residual: float = None
    reason: str = None

    def to_dict(self):
        return {"kind": self.kind, "b": self.b, "p": self.p,
                "residual": _finite_or_text(self.residual), "reason": self.reason}


def _relative_sup(u, v):
    with np.errstate(all="ignore"):
        scale = np.maximum(np.abs(u), np.abs(v))
        diff = np.where(scale > 0, np.abs(u - v) / np.where(scale > 0, scale, 1.0), 0.0)
    out = float(np.max(diff))
    return out if math.isfinite(out) else float("inf")


def orlicz_pair_classify(phi, psi, tol=PAIR_TOL):
    """decide whether psi(t) = (1/b) phi(b^(1/p) t) for some b, p.

    Equal when the two agree on the grid. Otherwise both multiplier groups
    have to be cyclic with the same generator; b is then searched in
    [1, a^p) where a is the generator.
    """
    t = PAIR_GRID
    phi_t = phi(t)
    equal_gap = _relative_sup(phi_t, psi(t))
    if equal_gap < tol:
        return PairClassification("equal", residual=equal_gap)

    g_phi = phi_lib.multiplier_group(phi)
    g_psi = phi_lib.multiplier_group(psi)
    if g_phi.kind != "cyclic" or g_psi.kind != "cyclic":
        return PairClassification("distinct", residual=equal_gap,
                                  reason="multiplier groups {} / {}".format(g_phi.kind, g_psi.kind))
    a_bar = g_psi.generator
    if abs(g_phi.generator / a_bar - 1.0) > 1e-6:
        return PairClassification("distinct", residual=equal_gap,
                                  reason="generators {:.9g} / {:.9g}".format(g_phi.generator, a_bar))
    p = phi_lib.growth_exponent(psi, a_bar)
    log_period = p * math.log(a_bar)
    psi_t = psi(t)

    def gap(log_b):
        b = math.exp(log_b)
        return _relative_sup(psi_t, phi(b ** (1.0 / p) * t) / b)

    scan = np.linspace(0.0, log_period, PAIR_SCAN, endpoint=False)
    b_scale = np.exp(scan)
    with np.errstate(all="ignore"):
        lifted = phi(np.outer(b_scale ** (1.0 / p), t)) / b_scale[:, None]
        scale = np.maximum(lifted, psi_t[None, :])
        gaps = np.max(np.abs(lifted - psi_t[None, :]) / np.where(scale > 0, scale, 1.0), axis=1)
    gaps = np.where(np.isfinite(gaps), gaps, np.inf)

    best_x, best_r = None, np.inf
    padded = np.concatenate([[gaps[-1]], gaps, [gaps[0]]])
    step = scan[1] - scan[0]
    minima = [i for i in range(len(scan)) if padded[i + 1] < padded[i] and padded[i + 1] <= padded[i + 2]]
    for i in sorted(minima, key=lambda j: gaps[j])[:5]:
        sol = optimize.minimize_scalar(gap, bounds=(scan[i] - step, scan[i] + step),
                                       method="bounded", options={"xatol": 1e-13})
        x, r = (float(sol.x), float(sol.fun)) if sol.fun < gaps[i] else (scan[i], gaps[i])
        if r < best_r:
            best_x, best_r = x, r
    logger.debug("pair scan best log b=%.12g gap=%.3e", best_x, best_r)
    if best_r < tol:
        b = math.exp(float(np.mod(best_x, log_period)))
        return PairClassification("scaled", b=b, p=p, residual=best_r)
    return PairClassification("distinct", residual=best_r, reason="no scale b found")


@dataclass(frozen=True)
class ExampleConfig:
    """two-piece map with slopes {b, b a^p}, a = exp(2 pi / omega), b = 2 / (1 + a^p)."""
    p: float = 5.0
    eps: float = 0.1
    omega: float = 2 * math.pi
    tol: float = OPERATOR_TOL

    @property
    def multiplier(self):
        return math.exp(2 * math.pi / self.omega)

    @property
    def ratio(self):
        return self.multiplier ** self.p

    @property
    def b(self):
        return 2.0 / (1.0 + self.ratio)

    def sigma(self):
        b = self.b
        half = Fraction(1, 2)
        return PiecewiseLinearMap([(0, half, b, 0.0), (half, 1, b * self.ratio, b / 2)])

    def spaces(self, k=0):
        psi = phi_lib.LogPeriodic(self.p, self.eps, self.omega)
        phi_sigma = phi_lib.Scaled(psi, self.b * self.ratio ** k, self.p)
        return norms.Orlicz(phi_sigma), norms.Orlicz(psi)

    def to_dict(self):
        return {"p": self.p, "eps": self.eps, "omega": self.omega, "b": self.b,
                "tol": self.tol}


DESK_CONFIG = ExampleConfig()
EXACT_CONFIG = ExampleConfig(eps=1.0, omega=1.0, tol=1e-4)


def identity_probes(levels=range(1, 11), etas=(0.0, 0.1), amplitude=100.0):
    """amplitude * (chi[0,2^-k] + eta chi[2^-k,1])."""
    probes = []
    for k in levels:
        cut = Fraction(1, 2 ** k)
        for eta in etas:
            if eta:
                probes.append(StepFunction([(0, cut, amplitude), (cut, 1, amplitude * eta)]))
            else:
                probes.append(StepFunction.indicator(0, cut, amplitude))
    return probes


@dataclass
class ExampleResult:
    reports: dict
    identity_refuted: bool
    refutation_threshold: float = 0.01

    @property
    def passed(self):
        ok = all(r.all_passed for k, r in self.reports.items() if k != "identity")
        return ok and self.identity_refuted

    def to_dict(self):
        return {
            "passed": self.passed,
            "identity_refuted": self.identity_refuted,
            "refutation_threshold": self.refutation_threshold,
            "reports": {k: r.to_dict() for k, r in self.reports.items()},
        }


def reproduce_example(seed=0, suite_size=SUITE_SIZE, exact=True, soundness_k=(1,)):
    """the log-periodic example end to end.

    The operator T = (sigma')^(1/p) (f o sigma) is checked to be an isometry
    from L_{phi_sigma} onto L_psi, the identity between the same spaces is
    refuted, and b is shifted by whole periods to show the scale ambiguity.
    """
    suite = default_suite(seed, suite_size)
    params = {"seed": seed, "suite_size": suite_size}
    reports = {}

    configs = [("desk", DESK_CONFIG)]
    if exact:
        configs.append(("exact", EXACT_CONFIG))
    for name, config in configs:
        X, Y = config.spaces()
        T = build_isometry_candidate(config.sigma(), config.p)
        report = verify_operator_isometry(T, X, Y, suite, tol=config.tol,
                                          parameters=dict(params, config=config.to_dict()))
        report.name = "operator_isometry_" + name
        reports[name] = report
        logger.info("%s configuration: max residual %.3e", name, report.max_residual)

    X, Y = DESK_CONFIG.spaces()
    identity = verify_identity_isometry(X, Y, suite + identity_probes(),
                                        parameters=dict(params, config=DESK_CONFIG.to_dict()))
    reports["identity"] = identity
    refuted = identity.max_residual > 0.01

    T = build_isometry_candidate(DESK_CONFIG.sigma(), DESK_CONFIG.p)
    for k in soundness_k:
        X_k, Y_k = DESK_CONFIG.spaces(k)
        report = verify_operator_isometry(T, X_k, Y_k, suite, tol=DESK_CONFIG.tol,
                                          parameters=dict(params, period_shift=k))
        report.name = "soundness_k{}".format(k)
        reports[report.name] = report
    return ExampleResult(reports, refuted)
