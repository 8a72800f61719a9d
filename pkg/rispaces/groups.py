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
"""Slope classes of piecewise-linear automorphisms and weighted
composition operators Tf = h * (f o sigma).

The classes, finest first:

    MeasurePreserving   every slope is 1
    Discrete(a, d)      slopes a^(s + k d) for one s and integers k
    ScaleInvariant(a)   slopes b a^k for one b > 0 and integers k
    FullNS              anything
"""

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from rispaces import phi as phi_lib
from rispaces.step_fn import (PiecewiseLinearMap, StepFunction, apply_op,
                              map_compose, map_invert)

logger = logging.getLogger(__name__)

SLOPE_TOL = 1e-12
LOG_TOL = 1e-9
MAX_LATTICE_INDEX = 1000


@dataclass(frozen=True)
class FullNS:
    def to_dict(self):
        return {"group": "NS"}


@dataclass(frozen=True)
class ScaleInvariant:
    a: float

    def __post_init__(self):
        if not self.a > 1:
            raise ValueError("scale class needs a > 1, got {}".format(self.a))

    def to_dict(self):
        return {"group": "NS_scale", "a": self.a}


@dataclass(frozen=True)
class Discrete:
    a: float
    d: int = 1

    def __post_init__(self):
        if not self.a > 1:
            raise ValueError("discrete class needs a > 1, got {}".format(self.a))
        if int(self.d) != self.d or self.d < 1:
            raise ValueError("discrete class needs an integer d >= 1, got {}".format(self.d))

    def to_dict(self):
        return {"group": "NS_discrete", "a": self.a, "d": int(self.d)}


@dataclass(frozen=True)
class MeasurePreserving:
    def to_dict(self):
        return {"group": "U"}


@dataclass(frozen=True)
class WeightedCompositionOp:
    """Tf = h * (f o sigma); h is nonzero and constant on each piece of sigma."""
    h: StepFunction
    sigma: PiecewiseLinearMap

    def __post_init__(self):
        if any(v == 0.0 for v in self.h.values):
            raise ValueError("weight h must not vanish")
        cuts = set(self.sigma.domain_breakpoints)
        if not set(self.h.breakpoints) <= cuts:
            raise ValueError("h must be constant on every piece of sigma")

    def __call__(self, f):
        return apply_op(self, f)


def _log_slopes(sigma):
    return np.log(sigma.slopes)


def is_measure_preserving(sigma, tol=SLOPE_TOL):
    return bool(np.all(np.abs(sigma.slopes - 1.0) <= tol))


def scale_class_witness(sigma, a, tol=LOG_TOL):
    """b in [1, a) with every slope equal to b a^k, or None."""
    a = float(a)
    if not a > 1:
        raise ValueError("scale class needs a > 1, got {}".format(a))
    la = math.log(a)
    logs = _log_slopes(sigma)
    beta = float(np.mod(logs[0], la))
    if la - beta < tol:
        beta -= la
    off = logs - beta
    k = np.round(off / la)
    if np.any(np.abs(off - k * la) >= tol):
        return None
    if abs(beta) < tol:
        return 1.0
    return float(math.exp(beta))


def discrete_class_witness(sigma, a, d=1, tol=LOG_TOL):
    """s in [0, d) with every slope equal to a^(s + k d), or None."""
    a = float(a)
    if not a > 1:
        raise ValueError("discrete class needs a > 1, got {}".format(a))
    if int(d) != d or d < 1:
        raise ValueError("discrete class needs an integer d >= 1, got {}".format(d))
    d = int(d)
    la = math.log(a)
    logs = _log_slopes(sigma)
    k = np.round(logs / la)
    if np.any(np.abs(logs - k * la) >= tol):
        return None
    residues = {int(x) % d for x in k}
    if len(residues) != 1:
        return None
    return residues.pop()


def _real_gcd(x, y, tol):
    x, y = max(x, y), min(x, y)
    while y > tol:
        r = math.fmod(x, y)
        if y - r <= tol:
            r = 0.0
        x, y = y, r
    return x


def infer_slope_lattice(sigma, tol=LOG_TOL):
    """finest a > 1 with all slope ratios integer powers of a, or None."""
    logs = np.sort(_log_slopes(sigma))
    distinct = [logs[0]]
    for x in logs[1:]:
        if x - distinct[-1] > tol:
            distinct.append(x)
    if len(distinct) < 2:
        return None
    deltas = np.array(distinct[1:]) - distinct[0]
    g = float(deltas[0])
    for x in deltas[1:]:
        g = _real_gcd(g, float(x), tol)
    if g <= tol:
        return None
    k = np.round(deltas / g)
    if np.any(np.abs(k) > MAX_LATTICE_INDEX):
        return None
    g = float(np.sum(k * deltas) / np.sum(k * k))
    if np.any(np.abs(deltas - k * g) >= tol):
        logger.debug("slope logs incommensurable to tol=%g", tol)
        return None
    return float(math.exp(g))


def build_isometry_candidate(sigma, p, signs=None):
    """T with |h|^p = sigma' piece by piece."""
    p = float(p)
    if not p >= 1:
        raise ValueError("isometry candidate needs p >= 1, got {}".format(p))
    if signs is None:
        signs = [1] * len(sigma)
    if len(signs) != len(sigma):
        raise ValueError("need one sign per piece of sigma")
    pieces = []
    for (l, r, s, _), sign in zip(sigma.pieces, signs):
        if sign not in (1, -1):
            raise ValueError("signs must be +1 or -1, got {}".format(sign))
        pieces.append((l, r, sign * s ** (1.0 / p)))
    return WeightedCompositionOp(StepFunction(pieces), sigma)


def conjugate(tau, sigma):
    """tau o sigma o tau^-1."""
    return map_compose(tau, map_compose(sigma, map_invert(tau)))


def is_member(sigma, group, tol=LOG_TOL):
    if isinstance(group, FullNS):
        return True
    if isinstance(group, MeasurePreserving):
        return is_measure_preserving(sigma)
    if isinstance(group, ScaleInvariant):
        return scale_class_witness(sigma, group.a, tol) is not None
    if isinstance(group, Discrete):
        return discrete_class_witness(sigma, group.a, group.d, tol) is not None
    raise NotImplementedError("unknown group descriptor {!r}".format(group))


@dataclass
class MapClassification:
    passing: list = field(default_factory=list)
    finest: object = None
    lattice: float = None
    scale_witness: float = None
    discrete_witness: int = None

    def to_dict(self):
        return {
            "passing": [g.to_dict() for g in self.passing],
            "finest": self.finest.to_dict(),
            "lattice": self.lattice,
            "scale_witness": self.scale_witness,
            "discrete_witness": self.discrete_witness,
        }


def classify_map(sigma, a=None, d=1, tol=LOG_TOL):
    """run every membership test; ``a`` defaults to the inferred lattice."""
    result = MapClassification(lattice=infer_slope_lattice(sigma, tol))
    if a is None:
        a = result.lattice
    result.passing.append(FullNS())
    result.finest = result.passing[-1]
    if a is not None:
        d = int(d)
        result.scale_witness = scale_class_witness(sigma, a ** d, tol)
        if result.scale_witness is not None:
            result.passing.append(ScaleInvariant(a ** d))
            result.finest = result.passing[-1]
        result.discrete_witness = discrete_class_witness(sigma, a, d, tol)
        if result.discrete_witness is not None:
            result.passing.append(Discrete(a, d))
            result.finest = result.passing[-1]
    if is_measure_preserving(sigma):
        result.passing.append(MeasurePreserving())
        result.finest = result.passing[-1]
    return result


def iso_group_of_orlicz(func, tol=phi_lib.MULTIPLIER_TOL):
    """slope class of the isometries of L_phi read off the multiplier group."""
    group = phi_lib.multiplier_group(func, tol=tol)
    if group.kind == "full":
        p = phi_lib.growth_exponent(func, 2.0)
        if abs(p - 2.0) < 1e-9:
            warnings.warn("phi is a multiple of t^2: L_2 has isometries outside "
                          "the weighted composition operators", stacklevel=2)
        return FullNS()
    if group.kind == "cyclic":
        p = phi_lib.growth_exponent(func, group.generator)
        return Discrete(group.generator ** p, 1)
    logger.info("trivial multiplier group below c_max=%g", group.c_max)
    return MeasurePreserving()
