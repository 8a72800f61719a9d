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
"""JSON wire format of step functions, maps, Orlicz functions, weights,
space descriptors and group descriptors.

Rationals travel as "num/den" strings (plain numbers are accepted too),
reals as JSON numbers or decimal strings.
"""

from fractions import Fraction

from rispaces import groups, norms
from rispaces import phi as phi_lib
from rispaces.step_fn import PiecewiseLinearMap, StepFunction


class DecodeError(ValueError):
    pass


def _rational(x):
    if isinstance(x, bool):
        raise DecodeError("expected a rational, got {!r}".format(x))
    try:
        if isinstance(x, str):
            return Fraction(x.strip())
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, float):
            return Fraction(x).limit_denominator(10**15)
    except (ValueError, ZeroDivisionError) as e:
        raise DecodeError("bad rational {!r}: {}".format(x, e)) from None
    raise DecodeError("expected a rational, got {!r}".format(x))


def _real(x):
    if isinstance(x, bool):
        raise DecodeError("expected a number, got {!r}".format(x))
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, str):
        try:
            return float(Fraction(x.strip())) if "/" in x else float(x)
        except (ValueError, ZeroDivisionError):
            pass
    raise DecodeError("expected a number, got {!r}".format(x))


def _field(d, key, kind):
    if not isinstance(d, dict):
        raise DecodeError("{} must be an object, got {!r}".format(kind, d))
    if key not in d:
        raise DecodeError("{} is missing {!r}".format(kind, key))
    return d[key]


def step_function_from_list(data):
    if not isinstance(data, list) or not data:
        raise DecodeError("step function must be a nonempty list of [left, right, value]")
    pieces = []
    for item in data:
        if not isinstance(item, list) or len(item) != 3:
            raise DecodeError("bad step function piece {!r}".format(item))
        pieces.append((_rational(item[0]), _rational(item[1]), _real(item[2])))
    try:
        return StepFunction(pieces)
    except ValueError as e:
        raise DecodeError(str(e)) from None


def map_from_list(data):
    if not isinstance(data, list) or not data:
        raise DecodeError("map must be a nonempty list of [left, right, slope(, image_left)]")
    pieces = []
    for item in data:
        if not isinstance(item, list) or len(item) not in (3, 4):
            raise DecodeError("bad map piece {!r}".format(item))
        piece = [_rational(item[0]), _rational(item[1]), _real(item[2])]
        if len(item) == 4:
            piece.append(_real(item[3]))
        pieces.append(tuple(piece))
    try:
        return PiecewiseLinearMap(pieces)
    except ValueError as e:
        raise DecodeError(str(e)) from None


def phi_from_dict(d):
    family = _field(d, "family", "Orlicz function")
    try:
        if family == "power":
            return phi_lib.Power(_real(_field(d, "p", "power")))
        if family == "logperiodic":
            return phi_lib.LogPeriodic(_real(_field(d, "p", family)),
                                       _real(_field(d, "eps", family)),
                                       _real(_field(d, "omega", family)),
                                       check=d.get("check", True))
        if family == "scaled":
            return phi_lib.Scaled(phi_from_dict(_field(d, "base", family)),
                                  _real(_field(d, "b", family)),
                                  _real(_field(d, "p", family)))
        if family == "pwaffine":
            knots = _field(d, "knots", family)
            return phi_lib.PiecewiseAffineConvex([(_real(t), _real(v)) for t, v in knots])
        if family == "expr":
            return phi_lib.Expression(_field(d, "src", family))
        if family == "tilde":
            return phi_lib.Tilde(phi_from_dict(_field(d, "base", family)))
        if family == "weight_phi":
            return norms.WeightPhi(weight_from_dict(_field(d, "w", family)),
                                   phi_from_dict(_field(d, "G", family)))
    except DecodeError:
        raise
    except (TypeError, ValueError) as e:
        raise DecodeError("invalid {} function: {}".format(family, e)) from e
    raise DecodeError("unknown Orlicz family {!r}".format(family))


def weight_from_dict(d):
    family = _field(d, "family", "Lorentz weight")
    try:
        if family == "constant":
            return norms.Constant(_real(d.get("c", 1.0)))
        if family == "affine":
            return norms.Affine(_real(_field(d, "alpha", family)), _real(_field(d, "beta", family)))
        if family == "piecewise":
            return norms.PiecewiseConstantNonincreasing(
                [_rational(b) for b in _field(d, "breaks", family)],
                [_real(v) for v in _field(d, "values", family)])
    except DecodeError:
        raise
    except (TypeError, ValueError) as e:
        raise DecodeError("invalid {} weight: {}".format(family, e)) from None
    raise DecodeError("unknown weight family {!r}".format(family))


def space_from_dict(d):
    kind = _field(d, "kind", "space descriptor")
    try:
        if kind == "orlicz":
            return norms.Orlicz(phi_from_dict(_field(d, "phi", kind)))
        if kind == "lorentz":
            return norms.Lorentz(weight_from_dict(_field(d, "w", kind)), _real(d.get("q", 1.0)))
        if kind == "orlicz_lorentz":
            return norms.OrliczLorentz(weight_from_dict(_field(d, "w", kind)),
                                       phi_from_dict(_field(d, "phi", kind)))
        if kind == "ms":
            return norms.MS(phi_from_dict(_field(d, "F", kind)), phi_from_dict(_field(d, "G", kind)))
    except DecodeError:
        raise
    except ValueError as e:
        raise DecodeError("invalid {} space: {}".format(kind, e)) from None
    raise DecodeError("unknown space kind {!r}".format(kind))


def group_from_dict(d):
    group = _field(d, "group", "group descriptor")
    try:
        if group == "NS":
            return groups.FullNS()
        if group == "NS_scale":
            return groups.ScaleInvariant(_real(_field(d, "a", group)))
        if group == "NS_discrete":
            return groups.Discrete(_real(_field(d, "a", group)), int(d.get("d", 1)))
        if group == "U":
            return groups.MeasurePreserving()
    except ValueError as e:
        raise DecodeError("invalid {} group: {}".format(group, e)) from None
    raise DecodeError("unknown group {!r}".format(group))
