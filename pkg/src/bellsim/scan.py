"""The violation landscape of the three-setting inequality on the singlet.

Directions are parametrized as a = z, b at polar angle theta in the x-z
plane, and c at polar angle theta_prime with azimuth phi.  The margin at a
point is the inequality's slack: (1 - sin(theta) sin(theta') cos(phi)
- cos(theta) cos(theta')) - |cos(theta) - cos(theta')|, nonnegative where
the inequality holds and negative where the singlet violates it.  At
phi = 0 this reduces to (1 - cos(theta - theta')) - |cos(theta)
- cos(theta')|.

Angles are restricted to theta, theta_prime in [0, pi/2] and phi in
[0, pi); inputs outside that box are rejected, never clamped.  Grid
evaluation is pure and row-major (theta outer, theta_prime inner), so any
parallel execution must reassemble rows in that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError
from .inequalities import bell1964_margin
from .quantum import UnitVector3, Z_AXIS, correlator, singlet

HALF_PI = 0.5 * math.pi

#: Extreme values the margin expression can reach on the allowed box.
MARGIN_RANGE = (-2.0, 2.0)


def _check_domain(theta: float, theta_prime: float, phi: float) -> None:
    if not 0.0 <= theta <= HALF_PI:
        raise InputError(f"theta = {theta} outside [0, pi/2]")
    if not 0.0 <= theta_prime <= HALF_PI:
        raise InputError(f"theta_prime = {theta_prime} outside [0, pi/2]")
    if not 0.0 <= phi < math.pi:
        raise InputError(f"phi = {phi} outside [0, pi)")


def directions_from_angles(
    theta: float, theta_prime: float, phi: float
) -> tuple[UnitVector3, UnitVector3, UnitVector3]:
    """The (a, b, c) measurement triad for one landscape point."""
    _check_domain(theta, theta_prime, phi)
    b = UnitVector3(math.sin(theta), 0.0, math.cos(theta))
    c = UnitVector3(
        math.sin(theta_prime) * math.cos(phi),
        math.sin(theta_prime) * math.sin(phi),
        math.cos(theta_prime),
    )
    return Z_AXIS, b, c


def parametrized_margin(theta: float, theta_prime: float, phi: float) -> float:
    """Inequality slack at one point, by direct trigonometry."""
    _check_domain(theta, theta_prime, phi)
    lhs = (
        1.0
        - math.sin(theta) * math.sin(theta_prime) * math.cos(phi)
        - math.cos(theta) * math.cos(theta_prime)
    )
    return lhs - abs(math.cos(theta) - math.cos(theta_prime))


def cross_check_margin(theta: float, theta_prime: float, phi: float) -> float:
    """The same slack rebuilt through the full quantum pipeline.

    Directions -> Born-rule singlet correlators -> inequality margin.
    Agrees with :func:`parametrized_margin` to within 1e-10; keeping both
    routes makes each one a check on the other.
    """
    a, b, c = directions_from_angles(theta, theta_prime, phi)
    psi = singlet()
    e_ab = correlator(psi, a, b)
    e_ac = correlator(psi, a, c)
    e_bc = correlator(psi, b, c)
    return bell1964_margin(e_ab, e_ac, e_bc)


@dataclass(frozen=True)
class GridSpec:
    """A rectangular grid over (theta, theta_prime) at one fixed phi.

    Both endpoints of each axis are always grid nodes; interior nodes sit
    at multiples of the step.  Sub-ranges of the allowed box are fine,
    ranges outside it are rejected.
    """

    theta_step: float
    theta_prime_step: float
    phi: float = 0.0
    theta_min: float = 0.0
    theta_max: float = HALF_PI
    theta_prime_min: float = 0.0
    theta_prime_max: float = HALF_PI

    def __post_init__(self) -> None:
        if self.theta_step <= 0.0 or self.theta_prime_step <= 0.0:
            raise InputError("grid steps must be positive")
        for lo, hi in (
            (self.theta_min, self.theta_max),
            (self.theta_prime_min, self.theta_prime_max),
        ):
            if not 0.0 <= lo <= hi <= HALF_PI:
                raise InputError(f"axis range [{lo}, {hi}] outside [0, pi/2]")
        if not 0.0 <= self.phi < math.pi:
            raise InputError(f"phi = {self.phi} outside [0, pi)")

    def theta_values(self) -> tuple[float, ...]:
        return _axis_nodes(self.theta_min, self.theta_max, self.theta_step)

    def theta_prime_values(self) -> tuple[float, ...]:
        return _axis_nodes(self.theta_prime_min, self.theta_prime_max, self.theta_prime_step)


def _axis_nodes(lo: float, hi: float, step: float) -> tuple[float, ...]:
    """Nodes lo, lo+step, ... with hi always included as the final node."""
    if hi == lo:
        return (lo,)
    count = int(math.floor((hi - lo) / step + 1e-9))
    nodes = [lo + k * step for k in range(count + 1)]
    if abs(nodes[-1] - hi) <= step * 1e-9:
        nodes[-1] = hi
    elif nodes[-1] < hi:
        nodes.append(hi)
    return tuple(nodes)


@dataclass(frozen=True)
class LandscapePoint:
    """One grid node and the margin there."""

    theta: float
    theta_prime: float
    margin: float

    def __post_init__(self) -> None:
        if not MARGIN_RANGE[0] - 1e-9 <= self.margin <= MARGIN_RANGE[1] + 1e-9:
            raise InputError(f"margin {self.margin} outside {MARGIN_RANGE}")


def scan_landscape(grid: GridSpec) -> list[LandscapePoint]:
    """Margins at every grid node, row-major (theta outer, theta_prime inner)."""
    return [
        LandscapePoint(t, tp, parametrized_margin(t, tp, grid.phi))
        for t in grid.theta_values()
        for tp in grid.theta_prime_values()
    ]


def find_min_margin(grid: GridSpec) -> LandscapePoint:
    """The grid point of smallest margin; ties keep the first in row-major order."""
    points = scan_landscape(grid)
    best = points[0]
    for point in points[1:]:
        if point.margin < best.margin:
            best = point
    return best
