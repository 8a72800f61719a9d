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

from rispaces import codec, groups, norms, utils, verify
from rispaces.expr import ExpressionError, parse_expression
from rispaces.groups import (Discrete, FullNS, MeasurePreserving, ScaleInvariant,
                             WeightedCompositionOp, build_isometry_candidate,
                             classify_map, iso_group_of_orlicz)
from rispaces.norms import (MS, Lorentz, Orlicz, OrliczLorentz, luxemburg_norm,
                            lorentz_norm, ms_norm, norm, orlicz_lorentz_norm)
from rispaces.phi import (Expression, LogPeriodic, PhiFunction, PiecewiseAffineConvex,
                          Power, Scaled, Tilde, multiplier_group)
from rispaces.step_fn import (PiecewiseLinearMap, StepFunction, compose, map_compose,
                              map_invert, rearrange)
from rispaces.verify import check_gp, orlicz_pair_classify, reproduce_example

__version__ = "0.1.0"
