"""Two-qubit pure states, spin observables, and exact Born-rule correlators.

Conventions used throughout: amplitudes are ordered in the product basis
(up-up, up-down, down-up, down-down) with "up" meaning spin-up along z;
measurement outcomes are the real numbers +1/-1 (the hbar/2 factor of a
spin component is dropped); angles are radians.

All types are immutable values after construction and every function here
is pure, so everything can be shared freely across threads.  Sampling
takes a caller-owned ``numpy.random.Generator``; the module keeps no
global random state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, InternalConsistencyError

#: Tolerance on squared norms at construction time.
NORM_TOL = 1e-12
#: Correlators may stick out of [-1, 1] by at most this much (rounding);
#: anything beyond is treated as a bug, not noise.
CLAMP_TOL = 1e-9

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

_INV_SQRT2 = math.sqrt(0.5)


@dataclass(frozen=True)
class UnitVector3:
    """A measurement direction: a real 3-vector of unit length.

    Construction rejects non-unit input instead of silently repairing it;
    use :meth:`normalized` when rescaling is actually wanted.
    """

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        norm_sq = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise InputError(
                f"not a unit vector: ({self.x}, {self.y}, {self.z}), |v|^2 = {norm_sq}"
            )

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "UnitVector3":
        """Rescale (x, y, z) to unit length; rejects near-zero vectors."""
        norm = math.sqrt(x * x + y * y + z * z)
        if norm < 1e-12:
            raise InputError("cannot normalize a near-zero vector")
        return cls(x / norm, y / norm, z / norm)

    @classmethod
    def from_spherical(cls, theta: float, phi: float = 0.0) -> "UnitVector3":
        """Direction at polar angle theta from +z and azimuth phi from +x."""
        s = math.sin(theta)
        return cls(s * math.cos(phi), s * math.sin(phi), math.cos(theta))

    def dot(self, other: "UnitVector3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def __neg__(self) -> "UnitVector3":
        return UnitVector3(-self.x, -self.y, -self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


X_AXIS = UnitVector3(1.0, 0.0, 0.0)
Y_AXIS = UnitVector3(0.0, 1.0, 0.0)
Z_AXIS = UnitVector3(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class TwoQubitState:
    """A normalized pure state of two spin-1/2 systems.

    ``amplitudes`` is the 4-tuple of complex coefficients in the ordered
    product basis (up-up, up-down, down-up, down-down).
    """

    amplitudes: tuple[complex, complex, complex, complex]

    def __post_init__(self) -> None:
        amps = tuple(complex(a) for a in self.amplitudes)
        if len(amps) != 4:
            raise InputError(f"expected 4 amplitudes, got {len(amps)}")
        object.__setattr__(self, "amplitudes", amps)
        norm_sq = sum(abs(a) ** 2 for a in amps)
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise InputError(f"state is not normalized: |psi|^2 = {norm_sq}")

    @classmethod
    def normalized(cls, amplitudes) -> "TwoQubitState":
        """Build a state from arbitrary non-zero amplitudes, rescaling them."""
        amps = [complex(a) for a in amplitudes]
        if len(amps) != 4:
            raise InputError(f"expected 4 amplitudes, got {len(amps)}")
        norm = math.sqrt(sum(abs(a) ** 2 for a in amps))
        if norm < 1e-12:
            raise InputError("cannot normalize a near-zero state vector")
        return cls(tuple(a / norm for a in amps))

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)


def singlet() -> TwoQubitState:
    """The two-qubit singlet (|up down> - |down up>) / sqrt(2)."""
    return TwoQubitState((0.0, _INV_SQRT2, -_INV_SQRT2, 0.0))


def product_up_up() -> TwoQubitState:
    """The uncorrelated state |up up> (both spins up along z)."""
    return TwoQubitState((1.0, 0.0, 0.0, 0.0))


@dataclass(frozen=True, eq=False)
class SpinObservable:
    """A dichotomic spin observable sigma . n with eigenvalues +1/-1."""

    direction: UnitVector3
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        if m.shape != (2, 2):
            raise InputError(f"observable matrix must be 2x2, got {m.shape}")
        if not np.allclose(m, m.conj().T, rtol=0.0, atol=NORM_TOL):
            raise InputError("observable matrix must be Hermitian")
        if not np.allclose(m @ m, IDENTITY_2, rtol=0.0, atol=NORM_TOL):
            raise InputError("observable must square to the identity")


def spin_observable(n: UnitVector3) -> SpinObservable:
    """Spin component along n: n_x sigma_x + n_y sigma_y + n_z sigma_z."""
    matrix = n.x * SIGMA_X + n.y * SIGMA_Y + n.z * SIGMA_Z
    return SpinObservable(direction=n, matrix=matrix)


def _clamp_correlator(value: float) -> float:
    """Snap rounding spill outside [-1, 1] back to the boundary.

    Overshoot beyond CLAMP_TOL indicates a logic error and raises.
    """
    if value > 1.0:
        if value > 1.0 + CLAMP_TOL:
            raise InternalConsistencyError(f"correlator {value} outside [-1, 1]")
        return 1.0
    if value < -1.0:
        if value < -1.0 - CLAMP_TOL:
            raise InternalConsistencyError(f"correlator {value} outside [-1, 1]")
        return -1.0
    return value


def correlator(state: TwoQubitState, a: UnitVector3, b: UnitVector3) -> float:
    """Expectation <psi| (sigma.a) x (sigma.b) |psi> of the outcome product."""
    op = np.kron(spin_observable(a).matrix, spin_observable(b).matrix)
    psi = state.vector
    value = complex(np.vdot(psi, op @ psi))
    if abs(value.imag) > NORM_TOL:
        raise InternalConsistencyError(
            f"correlator of a Hermitian product came out complex: {value}"
        )
    return _clamp_correlator(value.real)


def singlet_correlator_closed_form(a: UnitVector3, b: UnitVector3) -> float:
    """Singlet correlator -(a . b), without touching the state vector."""
    return _clamp_correlator(-a.dot(b))


@dataclass(frozen=True)
class JointDistribution:
    """Probabilities of the four +1/-1 outcome pairs of one measurement round.

    Field order matches the outcome order (+,+), (+,-), (-,+), (-,-).
    """

    pp: float
    pm: float
    mp: float
    mm: float

    def __post_init__(self) -> None:
        probs = (self.pp, self.pm, self.mp, self.mm)
        if any(p < 0.0 for p in probs):
            raise InputError(f"negative probability in {probs}")
        total = sum(probs)
        if abs(total - 1.0) > NORM_TOL:
            raise InputError(f"probabilities sum to {total}, not 1")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.pp, self.pm, self.mp, self.mm)

    def product_expectation(self) -> float:
        """Expectation of the product of the two outcomes."""
        return self.pp - self.pm - self.mp + self.mm

    def marginal_first_plus(self) -> float:
        """Probability that the first party's outcome is +1."""
        return self.pp + self.pm

    def marginal_second_plus(self) -> float:
        """Probability that the second party's outcome is +1."""
        return self.pp + self.mp


def _projector(n: UnitVector3, outcome: int) -> np.ndarray:
    return 0.5 * (IDENTITY_2 + outcome * spin_observable(n).matrix)


def joint_distribution(
    state: TwoQubitState, a: UnitVector3, b: UnitVector3
) -> JointDistribution:
    """Born-rule probabilities of the four projective outcome pairs."""
    psi = state.vector
    probs = []
    for oa in (+1, -1):
        pa = _projector(a, oa)
        for ob in (+1, -1):
            op = np.kron(pa, _projector(b, ob))
            p = complex(np.vdot(psi, op @ psi))
            if abs(p.imag) > NORM_TOL:
                raise InternalConsistencyError(f"complex probability {p}")
            real = p.real
            if real < 0.0:
                if real < -NORM_TOL:
                    raise InternalConsistencyError(f"negative probability {real}")
                real = 0.0
            probs.append(real)
    return JointDistribution(*probs)


#: Outcome pairs in the order the sampler consumes probability mass.
OUTCOME_ORDER = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def sample_outcomes(
    dist: JointDistribution, rng: np.random.Generator
) -> tuple[int, int]:
    """Draw one outcome pair from ``dist``.

    Consumes exactly one uniform variate from ``rng``, so a fixed seed and
    call sequence reproduce the same outcomes.
    """
    u = rng.random()
    acc = 0.0
    for outcome, p in zip(OUTCOME_ORDER, dist.as_tuple()):
        acc += p
        if u < acc:
            return outcome
    return OUTCOME_ORDER[-1]
