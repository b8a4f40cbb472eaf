"""Bell-type inequality evaluation and the quantum CHSH maximum.

A :class:`BellExpression` is a single absolute-value group of correlator
terms plus optional affine terms, which is exactly enough structure for
the two inequalities handled here:

* three settings with a shared observable:  |E(AB) - E(AC)| - 1 - E(BC) <= 0
* CHSH:  |E(AB) + E(AB') + E(A'B) - E(A'B')| <= 2

Evaluation is pure.  The multi-start optimizer runs its starts
independently and merges by max, and is deterministic given the seed that
generates the starts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InputError, InternalConsistencyError
from .quantum import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    TwoQubitState,
    UnitVector3,
    X_AXIS,
    Z_AXIS,
    correlator,
)

#: Margins above this count as genuine violation rather than rounding.
VIOLATION_TOL = 1e-9
#: Table entries may overshoot [-1, 1] by at most this much.
TABLE_TOL = 1e-12

TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)
CHSH_CLASSICAL_BOUND = 2.0


@dataclass(frozen=True)
class CorrelatorTable:
    """Correlators E(i, j) keyed by (first-party, second-party) setting index."""

    values: dict[tuple[int, int], float]

    def __post_init__(self) -> None:
        copied = {}
        for key, raw in self.values.items():
            i, j = key
            if i < 0 or j < 0:
                raise InputError(f"negative setting index in {key}")
            value = float(raw)
            if abs(value) > 1.0 + TABLE_TOL:
                raise InputError(f"correlator E{key} = {value} outside [-1, 1]")
            copied[(int(i), int(j))] = value
        object.__setattr__(self, "values", copied)

    def value(self, i: int, j: int) -> float:
        try:
            return self.values[(i, j)]
        except KeyError:
            raise InputError(f"no correlator stored for setting pair ({i}, {j})") from None

    def pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(self.values.keys())


def table_from_state(
    state: TwoQubitState,
    alice_directions: tuple[UnitVector3, ...],
    bob_directions: tuple[UnitVector3, ...],
) -> CorrelatorTable:
    """Born-rule correlator table for every pair of the given directions."""
    values = {
        (i, j): correlator(state, a, b)
        for i, a in enumerate(alice_directions)
        for j, b in enumerate(bob_directions)
    }
    return CorrelatorTable(values)


@dataclass(frozen=True)
class BellExpression:
    """|sum of abs_terms| + sum of linear_terms + constant, bounded by ``bound``.

    Each term is (first-party setting, second-party setting, coefficient).
    """

    name: str
    abs_terms: tuple[tuple[int, int, float], ...]
    linear_terms: tuple[tuple[int, int, float], ...] = ()
    constant: float = 0.0
    bound: float = 0.0

    def __post_init__(self) -> None:
        for i, j, _ in self.abs_terms + self.linear_terms:
            if i < 0 or j < 0:
                raise InputError(f"negative setting index in expression {self.name!r}")

    def setting_pairs(self) -> tuple[tuple[int, int], ...]:
        seen = []
        for i, j, _ in self.abs_terms + self.linear_terms:
            if (i, j) not in seen:
                seen.append((i, j))
        return tuple(seen)


def chsh_expression() -> BellExpression:
    """|E(0,0) + E(0,1) + E(1,0) - E(1,1)| <= 2."""
    return BellExpression(
        name="chsh",
        abs_terms=((0, 0, 1.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, -1.0)),
        bound=2.0,
    )


def bell1964_expression() -> BellExpression:
    """|E(0,0) - E(0,1)| - 1 - E(1,1) <= 0 on the shared-setting scenario.

    Setting 0/1 on the first side measure A/B, setting 0/1 on the second
    side measure B/C, so E(0,0) = <AB>, E(0,1) = <AC>, E(1,1) = <BC>.
    """
    return BellExpression(
        name="bell1964",
        abs_terms=((0, 0, 1.0), (0, 1, -1.0)),
        linear_terms=((1, 1, -1.0),),
        constant=-1.0,
        bound=0.0,
    )


def expression_value(expression: BellExpression, table: CorrelatorTable) -> float:
    """Evaluate the expression on a correlator table."""
    inner = sum(c * table.value(i, j) for i, j, c in expression.abs_terms)
    affine = sum(c * table.value(i, j) for i, j, c in expression.linear_terms)
    return abs(inner) + affine + expression.constant


@dataclass(frozen=True)
class ViolationReport:
    """Outcome of checking one expression against its bound."""

    value: float
    bound: float
    margin: float
    violated: bool

    def __post_init__(self) -> None:
        if abs(self.margin - (self.value - self.bound)) > 1e-12:
            raise InternalConsistencyError("margin does not equal value - bound")
        if self.violated != (self.margin > VIOLATION_TOL):
            raise InternalConsistencyError("violated flag inconsistent with margin")


def evaluate(expression: BellExpression, table: CorrelatorTable) -> ViolationReport:
    """Evaluate an expression and compare against its bound."""
    value = expression_value(expression, table)
    margin = value - expression.bound
    return ViolationReport(
        value=value,
        bound=expression.bound,
        margin=margin,
        violated=margin > VIOLATION_TOL,
    )


def _require_in_range(**named: float) -> None:
    for name, value in named.items():
        if abs(value) > 1.0 + TABLE_TOL:
            raise InputError(f"{name} = {value} outside [-1, 1]")


def bell1964_margin(e_ab: float, e_ac: float, e_bc: float) -> float:
    """Slack (1 + E(BC)) - |E(AB) - E(AC)|; nonnegative iff the inequality holds."""
    _require_in_range(e_ab=e_ab, e_ac=e_ac, e_bc=e_bc)
    return (1.0 + e_bc) - abs(e_ab - e_ac)


def chsh_value(e_ab: float, e_ab2: float, e_a2b: float, e_a2b2: float) -> float:
    """|E(AB) + E(AB') + E(A'B) - E(A'B')|."""
    _require_in_range(e_ab=e_ab, e_ab2=e_ab2, e_a2b=e_a2b, e_a2b2=e_a2b2)
    return abs(e_ab + e_ab2 + e_a2b - e_a2b2)


def chsh_optimal_settings() -> tuple[UnitVector3, UnitVector3, UnitVector3, UnitVector3]:
    """Coplanar directions (a, a', b, b') reaching 2*sqrt(2) on the singlet.

    a = z and a' = x; b and b' bisect them at +/- 45 degrees from z, giving
    singlet correlators (-r, -r, -r, +r) with r = sqrt(2)/2.
    """
    r = 1.0 / math.sqrt(2.0)
    return (Z_AXIS, X_AXIS, UnitVector3(r, 0.0, r), UnitVector3(-r, 0.0, r))


# ---------------------------------------------------------------------------
# Quantum CHSH maximum via multi-start coordinate ascent.
#
# The search space is the 8 spherical angles (theta, phi) of the four
# directions.  Each coordinate update scans a coarse grid of the angle's
# full range and then refines the best cell with golden-section search.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for :func:`chsh_quantum_max`; defaults suit the 8-angle landscape."""

    starts: int = 32
    seed: int = 0
    scan_points: int = 20
    refine_tol: float = 1e-8
    max_sweeps: int = 60
    sweep_tol: float = 1e-11

    def __post_init__(self) -> None:
        if self.starts < 1:
            raise InputError("starts must be >= 1")
        if self.scan_points < 3:
            raise InputError("scan_points must be >= 3")
        if self.refine_tol <= 0.0 or self.sweep_tol <= 0.0:
            raise InputError("tolerances must be positive")


class ChshOptimum(NamedTuple):
    """Best CHSH value found, with the four maximizing directions."""

    value: float
    a: UnitVector3
    a_prime: UnitVector3
    b: UnitVector3
    b_prime: UnitVector3

    def settings(self) -> tuple[UnitVector3, UnitVector3, UnitVector3, UnitVector3]:
        return (self.a, self.a_prime, self.b, self.b_prime)


#: (theta, phi) domains for each of the four directions, flattened.
_ANGLE_DOMAINS = ((0.0, math.pi), (0.0, 2.0 * math.pi)) * 4

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _correlation_matrix(state: TwoQubitState) -> tuple[float, ...]:
    """The 3x3 matrix T with T[k][l] = <psi| sigma_k x sigma_l |psi>, row-major.

    The general correlator factorizes as E(a, b) = a . T b, which lets the
    optimizer's inner loop avoid rebuilding 4x4 operators.
    """
    psi = state.vector
    entries = []
    for sk in (SIGMA_X, SIGMA_Y, SIGMA_Z):
        for sl in (SIGMA_X, SIGMA_Y, SIGMA_Z):
            value = complex(np.vdot(psi, np.kron(sk, sl) @ psi))
            if abs(value.imag) > 1e-12:
                raise InternalConsistencyError(f"complex correlation entry {value}")
            entries.append(value.real)
    return tuple(entries)


def _make_chsh_objective(state: TwoQubitState):
    t00, t01, t02, t10, t11, t12, t20, t21, t22 = _correlation_matrix(state)
    sin = math.sin
    cos = math.cos

    def objective(ang: list[float]) -> float:
        sa = sin(ang[0])
        ax, ay, az = sa * cos(ang[1]), sa * sin(ang[1]), cos(ang[0])
        sp = sin(ang[2])
        px, py, pz = sp * cos(ang[3]), sp * sin(ang[3]), cos(ang[2])
        sb = sin(ang[4])
        bx, by, bz = sb * cos(ang[5]), sb * sin(ang[5]), cos(ang[4])
        sq = sin(ang[6])
        qx, qy, qz = sq * cos(ang[7]), sq * sin(ang[7]), cos(ang[6])
        # Rows of T applied to each first-party direction.
        a0 = ax * t00 + ay * t10 + az * t20
        a1 = ax * t01 + ay * t11 + az * t21
        a2 = ax * t02 + ay * t12 + az * t22
        p0 = px * t00 + py * t10 + pz * t20
        p1 = px * t01 + py * t11 + pz * t21
        p2 = px * t02 + py * t12 + pz * t22
        e_ab = a0 * bx + a1 * by + a2 * bz
        e_ab2 = a0 * qx + a1 * qy + a2 * qz
        e_a2b = p0 * bx + p1 * by + p2 * bz
        e_a2b2 = p0 * qx + p1 * qy + p2 * qz
        return abs(e_ab + e_ab2 + e_a2b - e_a2b2)

    return objective


def _golden_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section maximization of a unimodal-enough f on [lo, hi]."""
    a, b = lo, hi
    h = b - a
    if h <= tol:
        mid = 0.5 * (a + b)
        return mid, f(mid)
    c = b - _GOLDEN * h
    d = a + _GOLDEN * h
    fc, fd = f(c), f(d)
    while h > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            h = b - a
            c = b - _GOLDEN * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _GOLDEN * h
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _best_on_axis(f, lo: float, hi: float, cfg: OptimizerConfig) -> tuple[float, float]:
    """Coarse scan of [lo, hi] followed by golden-section refinement."""
    n = cfg.scan_points
    step = (hi - lo) / (n - 1)
    best_k, best_v = 0, -math.inf
    for k in range(n):
        v = f(lo + k * step)
        if v > best_v:
            best_k, best_v = k, v
    left = lo + max(best_k - 1, 0) * step
    right = lo + min(best_k + 1, n - 1) * step
    x, v = _golden_max(f, left, right, cfg.refine_tol)
    if best_v > v:
        return lo + best_k * step, best_v
    return x, v


def _ascend(objective, angles: list[float], cfg: OptimizerConfig) -> tuple[list[float], float]:
    best = objective(angles)
    for _ in range(cfg.max_sweeps):
        before = best
        for k in range(8):
            lo, hi = _ANGLE_DOMAINS[k]

            def along(x: float, k: int = k) -> float:
                saved = angles[k]
                angles[k] = x
                value = objective(angles)
                angles[k] = saved
                return value

            x, v = _best_on_axis(along, lo, hi, cfg)
            if v > best:
                angles[k] = x
                best = v
        if best - before < cfg.sweep_tol:
            break
    return angles, best


def chsh_quantum_max(
    state: TwoQubitState, config: OptimizerConfig | None = None
) -> ChshOptimum:
    """Maximize the CHSH value of ``state`` over all four measurement directions.

    Multi-start coordinate ascent; reports the best value found and the
    directions attaining it.  Reproducible for a fixed ``config.seed``.
    """
    cfg = config or OptimizerConfig()
    objective = _make_chsh_objective(state)
    rng = np.random.default_rng(cfg.seed)

    best_value = -math.inf
    best_angles: list[float] = []
    for _ in range(cfg.starts):
        start = [
            float(rng.uniform(lo, hi)) for lo, hi in _ANGLE_DOMAINS
        ]
        angles, value = _ascend(objective, start, cfg)
        if value > best_value:
            best_value = value
            best_angles = list(angles)

    directions = tuple(
        UnitVector3.from_spherical(best_angles[2 * k], best_angles[2 * k + 1])
        for k in range(4)
    )
    if best_value > TSIRELSON_BOUND + 1e-9:
        raise InternalConsistencyError(
            f"CHSH value {best_value} above the quantum maximum"
        )
    return ChshOptimum(best_value, *directions)
