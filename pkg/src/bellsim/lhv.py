"""Local-hidden-variable models as finite mixtures of deterministic strategies.

A deterministic strategy fixes one +1/-1 outcome per local setting per
party; a hidden-variable distribution is a finite mixture of strategies.
Because every Bell expression handled here is convex in the correlators,
its maximum over all mixtures is attained at a strategy, so enumerating
strategies gives classical bounds exactly.  Continuous hidden-variable
averages are recovered stochastically by :func:`monte_carlo_correlator`.

Everything is an immutable value; enumeration and bound computation are
read-only and thread-safe.  Monte Carlo takes one caller-owned generator;
for parallel sampling give each worker its own stream, e.g.
``np.random.default_rng([seed, worker_index])``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import InputError, ScenarioTooLargeError
from .inequalities import BellExpression, CorrelatorTable, expression_value
from .quantum import UnitVector3

#: Hard cap on settings_a + settings_b (2^20 strategies being about the
#: largest enumeration that stays interactive).
MAX_TOTAL_SETTINGS = 20

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class Scenario:
    """Measurement-choice structure of a two-party experiment.

    ``shared_settings`` lists (first-party index, second-party index)
    pairs that label the same physical observable on both sides, which is
    what an anticorrelation constraint acts on.
    """

    settings_a: int
    settings_b: int
    shared_settings: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.settings_a < 1 or self.settings_b < 1:
            raise InputError("each party needs at least one setting")
        pairs = tuple((int(i), int(j)) for i, j in self.shared_settings)
        object.__setattr__(self, "shared_settings", pairs)
        for i, j in pairs:
            if not (0 <= i < self.settings_a and 0 <= j < self.settings_b):
                raise InputError(f"shared setting pair ({i}, {j}) out of range")
        if len(set(pairs)) != len(pairs):
            raise InputError("duplicate shared setting pair")

    @property
    def total_settings(self) -> int:
        return self.settings_a + self.settings_b


def chsh_scenario() -> Scenario:
    """Two settings per party, nothing shared."""
    return Scenario(2, 2)


def bell1964_scenario() -> Scenario:
    """Three observables A, B, C: one party measures A or B, the other B or C.

    The first party's setting 1 and the second party's setting 0 are the
    same observable B, recorded as a shared pair.
    """
    return Scenario(2, 2, shared_settings=((1, 0),))


@dataclass(frozen=True)
class DeterministicStrategy:
    """One +1/-1 outcome per setting per party (a hidden variable pinned down)."""

    alice_outcomes: tuple[int, ...]
    bob_outcomes: tuple[int, ...]

    def __post_init__(self) -> None:
        for side in (self.alice_outcomes, self.bob_outcomes):
            if any(o not in (1, -1) for o in side):
                raise InputError(f"outcomes must be +1 or -1, got {side}")
        object.__setattr__(self, "alice_outcomes", tuple(int(o) for o in self.alice_outcomes))
        object.__setattr__(self, "bob_outcomes", tuple(int(o) for o in self.bob_outcomes))


def enumerate_strategies(scenario: Scenario) -> list[DeterministicStrategy]:
    """All 2^(settings_a + settings_b) strategies in canonical order.

    Canonical order is binary counting: the first party's settings occupy
    the high bits (setting 0 most significant), outcome +1 is bit 1.  The
    all-(-1) strategy therefore comes first and all-(+1) last.
    """
    total = scenario.total_settings
    if total > MAX_TOTAL_SETTINGS:
        raise ScenarioTooLargeError(
            f"{total} settings would enumerate 2^{total} strategies"
            f" (limit {MAX_TOTAL_SETTINGS})"
        )
    na = scenario.settings_a
    strategies = []
    for code in range(1 << total):
        bits = [(code >> (total - 1 - k)) & 1 for k in range(total)]
        outcomes = [1 if b else -1 for b in bits]
        strategies.append(
            DeterministicStrategy(
                alice_outcomes=tuple(outcomes[:na]),
                bob_outcomes=tuple(outcomes[na:]),
            )
        )
    return strategies


def filter_anticorrelated(
    strategies: Sequence[DeterministicStrategy], scenario: Scenario
) -> list[DeterministicStrategy]:
    """Keep strategies whose shared-observable outcomes are opposite.

    For every shared pair (i, j) the second party's outcome at j must be
    the negation of the first party's outcome at i.  With no shared
    settings the constraint is empty and the input passes through.
    """
    return [
        st
        for st in strategies
        if all(
            st.bob_outcomes[j] == -st.alice_outcomes[i]
            for i, j in scenario.shared_settings
        )
    ]


def strategy_correlator(st: DeterministicStrategy, i: int, j: int) -> int:
    """Product of the two fixed outcomes at setting pair (i, j)."""
    if not (0 <= i < len(st.alice_outcomes)):
        raise InputError(f"first-party setting {i} out of range")
    if not (0 <= j < len(st.bob_outcomes)):
        raise InputError(f"second-party setting {j} out of range")
    return st.alice_outcomes[i] * st.bob_outcomes[j]


def strategy_table(st: DeterministicStrategy) -> CorrelatorTable:
    """Correlator table of a single strategy (every entry +1 or -1)."""
    values = {
        (i, j): float(st.alice_outcomes[i] * st.bob_outcomes[j])
        for i in range(len(st.alice_outcomes))
        for j in range(len(st.bob_outcomes))
    }
    return CorrelatorTable(values)


@dataclass(frozen=True)
class LhvMixture:
    """A finite probability distribution over deterministic strategies."""

    entries: tuple[tuple[DeterministicStrategy, float], ...]

    def __post_init__(self) -> None:
        entries = tuple((st, float(w)) for st, w in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise InputError("mixture needs at least one strategy")
        if any(w < 0.0 for _, w in entries):
            raise InputError("mixture weights must be nonnegative")
        total = sum(w for _, w in entries)
        if abs(total - 1.0) > WEIGHT_TOL:
            raise InputError(f"mixture weights sum to {total}, not 1")

    @classmethod
    def point(cls, st: DeterministicStrategy) -> "LhvMixture":
        return cls(((st, 1.0),))

    @classmethod
    def uniform(cls, strategies: Sequence[DeterministicStrategy]) -> "LhvMixture":
        if not strategies:
            raise InputError("cannot build a uniform mixture over nothing")
        w = 1.0 / len(strategies)
        return cls(tuple((st, w) for st in strategies))

    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.entries])

    def strategies(self) -> tuple[DeterministicStrategy, ...]:
        return tuple(st for st, _ in self.entries)


def mixture_correlator(mixture: LhvMixture, i: int, j: int) -> float:
    """Weighted average of the strategy correlators at (i, j)."""
    return sum(w * strategy_correlator(st, i, j) for st, w in mixture.entries)


def mixture_table(mixture: LhvMixture) -> CorrelatorTable:
    """Correlator table of a mixture over every setting pair it defines."""
    first = mixture.entries[0][0]
    values = {
        (i, j): mixture_correlator(mixture, i, j)
        for i in range(len(first.alice_outcomes))
        for j in range(len(first.bob_outcomes))
    }
    return CorrelatorTable(values)


StrategyFilter = Callable[[Sequence[DeterministicStrategy], Scenario], list[DeterministicStrategy]]


def classical_bound_witness(
    expression: BellExpression,
    scenario: Scenario,
    constraint: StrategyFilter | None = None,
) -> tuple[float, DeterministicStrategy]:
    """Exact classical maximum of an expression, with a maximizing strategy.

    Mixtures cannot beat strategies here: the expression is convex in the
    correlators and correlators are linear in the weights, so the maximum
    over all mixtures is attained at a vertex.  Enumerating (optionally
    constrained) strategies is therefore exact, not approximate.  Ties go
    to the earliest strategy in canonical order.
    """
    strategies = enumerate_strategies(scenario)
    if constraint is not None:
        strategies = constraint(strategies, scenario)
    if not strategies:
        raise InputError("no strategies survive the constraint")
    for i, j in expression.setting_pairs():
        if not (i < scenario.settings_a and j < scenario.settings_b):
            raise InputError(
                f"expression uses setting pair ({i}, {j}) outside the scenario"
            )
    best_value = -math.inf
    best_strategy = strategies[0]
    for st in strategies:
        value = expression_value(expression, strategy_table(st))
        if value > best_value:
            best_value = value
            best_strategy = st
    return best_value, best_strategy


def classical_bound(
    expression: BellExpression,
    scenario: Scenario,
    constraint: StrategyFilter | None = None,
) -> float:
    """Exact classical maximum of an expression over all LHV models."""
    value, _ = classical_bound_witness(expression, scenario, constraint)
    return value


@dataclass(frozen=True)
class EstimatedCorrelator:
    """Finite-sample correlator estimate with its standard error."""

    mean: float
    standard_error: float
    sample_count: int

    def __post_init__(self) -> None:
        if self.sample_count < 1:
            raise InputError("sample_count must be >= 1")
        if abs(self.mean) > 1.0:
            raise InputError(f"mean {self.mean} outside [-1, 1]")
        if self.standard_error < 0.0:
            raise InputError("standard error must be nonnegative")
        if self.standard_error > 1.0 / math.sqrt(self.sample_count) + 1e-12:
            raise InputError("standard error too large for +1/-1 samples")


def estimate_from_products(products: np.ndarray) -> EstimatedCorrelator:
    """Mean and standard error of an array of +1/-1 outcome products.

    The standard error is the population standard deviation over sqrt(n),
    which for +1/-1 data never exceeds 1/sqrt(n).
    """
    n = len(products)
    mean = float(products.mean())
    se = float(products.std(ddof=0)) / math.sqrt(n)
    return EstimatedCorrelator(mean=mean, standard_error=se, sample_count=n)


def monte_carlo_correlator(
    mixture: LhvMixture,
    i: int,
    j: int,
    n: int,
    rng: np.random.Generator,
) -> EstimatedCorrelator:
    """Estimate the mixture correlator by sampling n hidden variables i.i.d."""
    if n < 1:
        raise InputError("need at least one sample")
    products = np.array(
        [strategy_correlator(st, i, j) for st, _ in mixture.entries], dtype=float
    )
    draws = rng.choice(len(products), size=n, p=mixture.weights())
    return estimate_from_products(products[draws])


# ---------------------------------------------------------------------------
# Hidden-variable model for a single spin-1/2.
# ---------------------------------------------------------------------------


def single_spin_lhv(
    polarization: UnitVector3, measurement: UnitVector3, lam: float
) -> int:
    """Deterministic +1/-1 outcome of a single-spin hidden-variable model.

    The hidden variable ``lam`` lives on [0, 1); the outcome is +1 exactly
    when lam < cos^2(angle/2) with cos(angle) = polarization . measurement.
    Averaged over uniform lam this reproduces the quantum expectation
    polarization . measurement.
    """
    if not 0.0 <= lam < 1.0:
        raise InputError(f"hidden variable {lam} outside [0, 1)")
    threshold = 0.5 * (1.0 + polarization.dot(measurement))
    return 1 if lam < threshold else -1


def single_spin_outcomes(
    polarization: UnitVector3, measurement: UnitVector3, lams: np.ndarray
) -> np.ndarray:
    """Vectorized :func:`single_spin_lhv` over an array of hidden variables."""
    lams = np.asarray(lams, dtype=float)
    if lams.size and (lams.min() < 0.0 or lams.max() >= 1.0):
        raise InputError("hidden variables must lie in [0, 1)")
    threshold = 0.5 * (1.0 + polarization.dot(measurement))
    return np.where(lams < threshold, 1, -1)
