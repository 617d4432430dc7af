"""Wave/particle duality metrics: visibility, predictability, trace
distinguishability, Shannon path information, and the D^2+V^2 check.

Which-path knowledge has two inequivalent readings for the grid-and-lens
experiment: an operational one (how separable the two single-pinhole
detection profiles are) and a state-based one (how biased the two-path
distribution of the superposition is).  Both are computed and reported
side by side; neither is hard-coded as "the" D.
"""

import math
from dataclasses import dataclass, asdict

import numpy as np

from .errors import GridMismatch, InvalidIntensities, OutOfRange, WrongArity


@dataclass(frozen=True)
class PathDistribution:
    """Probabilities of the possible paths; must sum to one."""
    probabilities: tuple

    def __post_init__(self):
        ps = tuple(float(p) for p in self.probabilities)
        object.__setattr__(self, "probabilities", ps)
        if any(p < 0 for p in ps):
            raise ValueError("path probabilities must be nonnegative")
        if abs(sum(ps) - 1.0) > 1e-12:
            raise ValueError(f"path probabilities sum to {sum(ps)!r}, not 1")


def visibility(i_max: float, i_min: float) -> float:
    """Fringe contrast (I_max - I_min)/(I_max + I_min)."""
    if not (i_max >= i_min >= 0) or i_max <= 0:
        raise InvalidIntensities(f"need i_max >= i_min >= 0 and i_max > 0, "
                                 f"got ({i_max!r}, {i_min!r})")
    return (i_max - i_min) / (i_max + i_min)


def predictability(path: PathDistribution) -> float:
    """|p1 - p2| for a two-path distribution."""
    if len(path.probabilities) != 2:
        raise WrongArity("predictability is defined for exactly two paths")
    p1, p2 = path.probabilities
    return abs(p1 - p2)


def wz_information(path: PathDistribution, units: str = "nats") -> float:
    """Shannon measure H = -sum p_i ln p_i of missing path knowledge.

    0*ln 0 counts as 0; `units` may be "nats" (natural log) or "bits".
    """
    h = -sum(p * math.log(p) for p in path.probabilities if p > 0)
    if units == "nats":
        return h
    if units == "bits":
        return h / math.log(2)
    raise ValueError(f"unknown units {units!r}")


def distinguishability_trace(rho1, rho2, dx: float) -> float:
    """Trace distance (1/2)*integral |rho1 - rho2| between unit-integral
    detection profiles on a common grid."""
    r1 = np.asarray(rho1, dtype=float)
    r2 = np.asarray(rho2, dtype=float)
    if r1.shape != r2.shape:
        raise GridMismatch(f"profiles have shapes {r1.shape} and {r2.shape}")
    return float(0.5 * np.sum(np.abs(r1 - r2)) * dx)


@dataclass(frozen=True)
class DualityCheck:
    total: float          # d^2 + v^2
    satisfied: bool       # total <= 1 + 1e-9
    slack: float          # 1 - total (negative when violated)


def duality_check(d: float, v: float) -> DualityCheck:
    """Evaluate d^2 + v^2 against the bound 1."""
    for name, val in (("d", d), ("v", v)):
        if not 0.0 <= val <= 1.0:
            raise OutOfRange(f"{name} = {val!r} outside [0, 1]")
    total = d * d + v * v
    return DualityCheck(total=total, satisfied=total <= 1.0 + 1e-9, slack=1.0 - total)


@dataclass(frozen=True)
class DualityReport:
    """All duality quantities for one experiment run.

    d_trace is the operational image-separability reading; p is the
    superposition path-distribution reading.  Both sums are reported so a
    run can exhibit trace-sum ~ 2 and predictability-sum <= 1 at once.
    """
    v: float
    p: float
    d_trace: float
    h_nats: float
    duality_sum_pred: float
    duality_sum_trace: float
    slack_pred: float
    slack_trace: float
    pred_violation: bool
    trace_violation: bool

    @classmethod
    def build(cls, v: float, path: PathDistribution, d_trace: float) -> "DualityReport":
        p = predictability(path)
        pred = duality_check(p, v)
        trace = duality_check(d_trace, v)
        return cls(
            v=v, p=p, d_trace=d_trace,
            h_nats=wz_information(path),
            duality_sum_pred=pred.total,
            duality_sum_trace=trace.total,
            slack_pred=pred.slack,
            slack_trace=trace.slack,
            pred_violation=not pred.satisfied,
            trace_violation=not trace.satisfied,
        )

    def to_json(self) -> dict:
        return asdict(self)
