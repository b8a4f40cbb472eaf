"""Command-line front end: scans, exact bounds, optimization, simulation.

Subcommands::

    scan        margins of the three-setting inequality on a (theta, theta') grid
    chsh        quantum CHSH maximum of a state, with the best settings found
    bound       exact classical bound of an expression by strategy enumeration
    simulate    per-round Monte Carlo correlator estimates
    spin-model  single-spin hidden-variable model vs the quantum expectation

Output is CSV (``#``-prefixed metadata comments, then a header row) or a
JSON object with ``meta`` and ``data`` keys.  Floats are written with 17
significant digits so they round-trip exactly.  Every run is reproducible:
seeds default to 0 and never come from the clock, and payloads carry no
timestamps.  Exit codes: 0 success, 1 internal consistency failure,
2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .errors import InputError, InternalConsistencyError, MixtureFileError
from .inequalities import (
    CHSH_CLASSICAL_BOUND,
    TSIRELSON_BOUND,
    OptimizerConfig,
    bell1964_expression,
    chsh_expression,
    chsh_optimal_settings,
    chsh_quantum_max,
)
from .lhv import (
    DeterministicStrategy,
    LhvMixture,
    Scenario,
    bell1964_scenario,
    chsh_scenario,
    classical_bound_witness,
    estimate_from_products,
    filter_anticorrelated,
    monte_carlo_correlator,
    single_spin_outcomes,
)
from .quantum import (
    UnitVector3,
    Z_AXIS,
    joint_distribution,
    product_up_up,
    sample_outcomes,
    singlet,
)
from .scan import GridSpec, scan_landscape

DEFAULT_SCAN_STEP = math.pi / 200.0
DEFAULT_SPIN_STEP = math.pi / 50.0
DEFAULT_SAMPLES = 100_000

_STATES = {"singlet": singlet, "product-up-up": product_up_up}


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of one CLI invocation (angles already in radians)."""

    command: str
    seed: int = 0
    out: str | None = None
    fmt: str = "csv"
    phi: float = 0.0
    step: float = DEFAULT_SCAN_STEP
    n: int = DEFAULT_SAMPLES
    starts: int = 32
    expr: str = "chsh"
    state: str = "singlet"
    source: str = "singlet"
    settings: str = "chsh"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InputError("sample count must be >= 1")
        if self.step <= 0.0:
            raise InputError("step must be positive")
        if self.starts < 1:
            raise InputError("starts must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must fit in 64 unsigned bits")
        if self.fmt not in ("csv", "json"):
            raise InputError(f"unknown format {self.fmt!r}")


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _csv_text(meta: dict, header: list[str], rows: list[tuple]) -> str:
    lines = [f"# {key} = {_fmt(value)}" for key, value in meta.items()]
    lines.append(",".join(header))
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_text(meta: dict, data) -> str:
    return json.dumps({"meta": meta, "data": data}, indent=2) + "\n"


def _table_text(config: RunConfig, meta: dict, header: list[str], rows: list[tuple]) -> str:
    if config.fmt == "json":
        data = [dict(zip(header, row)) for row in rows]
        return _json_text(meta, data)
    return _csv_text(meta, header, rows)


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _base_meta(config: RunConfig) -> dict:
    return {"tool": "bellsim", "version": __version__, "command": config.command,
            "seed": config.seed}


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------


def cmd_scan(config: RunConfig) -> int:
    grid = GridSpec(theta_step=config.step, theta_prime_step=config.step, phi=config.phi)
    points = scan_landscape(grid)
    meta = _base_meta(config)
    meta.update(phi=config.phi, step=config.step)
    rows = [(p.theta, p.theta_prime, p.margin) for p in points]
    _write_output(_table_text(config, meta, ["theta", "theta_prime", "margin"], rows), config.out)
    return 0


def cmd_chsh(config: RunConfig) -> int:
    state = _STATES[config.state]()
    optimum = chsh_quantum_max(state, OptimizerConfig(starts=config.starts, seed=config.seed))
    meta = _base_meta(config)
    meta.update(state=config.state, starts=config.starts)
    report = {
        "value": optimum.value,
        "settings": {
            "a": optimum.a.as_tuple(),
            "a_prime": optimum.a_prime.as_tuple(),
            "b": optimum.b.as_tuple(),
            "b_prime": optimum.b_prime.as_tuple(),
        },
        "classical_bound": CHSH_CLASSICAL_BOUND,
        "tsirelson_bound": TSIRELSON_BOUND,
        "violated": optimum.value > CHSH_CLASSICAL_BOUND + 1e-9,
    }
    _write_output(_json_text(meta, report), config.out)
    return 0


def cmd_bound(config: RunConfig) -> int:
    if config.expr == "chsh":
        expression, scenario, constraint = chsh_expression(), chsh_scenario(), None
    elif config.expr == "bell1964":
        expression, scenario, constraint = (
            bell1964_expression(),
            bell1964_scenario(),
            filter_anticorrelated,
        )
    else:
        raise InputError(f"unknown expression {config.expr!r}")
    bound, witness = classical_bound_witness(expression, scenario, constraint)
    meta = _base_meta(config)
    meta.update(expr=config.expr)
    report = {
        "expression": config.expr,
        "bound": bound,
        "witness": {
            "alice_outcomes": list(witness.alice_outcomes),
            "bob_outcomes": list(witness.bob_outcomes),
        },
        "constrained": constraint is not None,
    }
    _write_output(_json_text(meta, report), config.out)
    return 0


def _simulate_singlet_rows(config: RunConfig) -> list[tuple]:
    state = singlet()
    if config.settings == "chsh":
        a, a2, b, b2 = chsh_optimal_settings()
        pairs = [("00", a, b), ("01", a, b2), ("10", a2, b), ("11", a2, b2)]
    elif config.settings == "parallel":
        pairs = [("00", Z_AXIS, Z_AXIS)]
    else:
        raise InputError(f"unknown settings choice {config.settings!r}")
    rng = np.random.default_rng(config.seed)
    rows = []
    for label, da, db in pairs:
        dist = joint_distribution(state, da, db)
        products = np.empty(config.n)
        for k in range(config.n):
            oa, ob = sample_outcomes(dist, rng)
            products[k] = oa * ob
        est = estimate_from_products(products)
        rows.append((label, est.mean, est.standard_error, est.sample_count))
    return rows


def _simulate_mixture_rows(config: RunConfig, mixture: LhvMixture) -> list[tuple]:
    rng = np.random.default_rng(config.seed)
    rows = []
    first = mixture.entries[0][0]
    for i in range(len(first.alice_outcomes)):
        for j in range(len(first.bob_outcomes)):
            est = monte_carlo_correlator(mixture, i, j, config.n, rng)
            rows.append((f"{i}{j}", est.mean, est.standard_error, est.sample_count))
    return rows


def cmd_simulate(config: RunConfig) -> int:
    if config.source == "singlet":
        rows = _simulate_singlet_rows(config)
    else:
        mixture = load_mixture_file(config.source)
        rows = _simulate_mixture_rows(config, mixture)
    meta = _base_meta(config)
    meta.update(source=config.source, settings=config.settings, n=config.n)
    _write_output(_table_text(config, meta, ["pair", "mean", "stderr", "n"], rows), config.out)
    return 0


def cmd_spin_model(config: RunConfig) -> int:
    thetas = _spin_grid(config.step)
    rng = np.random.default_rng(config.seed)
    rows = []
    for theta in thetas:
        measurement = UnitVector3.from_spherical(theta)
        lams = rng.random(config.n)
        outcomes = single_spin_outcomes(Z_AXIS, measurement, lams)
        empirical = float(outcomes.mean())
        expected = math.cos(theta)
        rows.append((theta, empirical, expected, abs(empirical - expected)))
    meta = _base_meta(config)
    meta.update(step=config.step, n=config.n)
    header = ["theta", "empirical_mean", "quantum_expectation", "abs_error"]
    _write_output(_table_text(config, meta, header, rows), config.out)
    return 0


def _spin_grid(step: float) -> list[float]:
    count = int(math.floor(math.pi / step + 1e-9))
    thetas = [k * step for k in range(count + 1)]
    if abs(thetas[-1] - math.pi) <= step * 1e-9:
        thetas[-1] = math.pi
    elif thetas[-1] < math.pi:
        thetas.append(math.pi)
    return thetas


# ---------------------------------------------------------------------------
# Mixture files: one strategy per line, +1/-1 outcomes for the two settings
# of each party (first party first), then a weight.  '#' starts a comment.
# ---------------------------------------------------------------------------

MIXTURE_SETTINGS = Scenario(2, 2)
WEIGHT_SUM_TOL = 1e-6


def load_mixture_file(path: str) -> LhvMixture:
    """Parse a hand-writable mixture description for the (2, 2) scenario."""
    try:
        with open(path) as fh:
            raw_lines = fh.readlines()
    except OSError as exc:
        raise MixtureFileError(f"{path}: cannot read mixture file: {exc}") from exc

    entries: list[tuple[DeterministicStrategy, float]] = []
    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 5:
            raise MixtureFileError(
                f"{path}:{lineno}: expected 4 outcomes and a weight, got {len(tokens)} fields"
            )
        outcomes = []
        for tok in tokens[:4]:
            try:
                value = int(tok)
            except ValueError:
                raise MixtureFileError(f"{path}:{lineno}: bad outcome {tok!r}") from None
            if value not in (1, -1):
                raise MixtureFileError(f"{path}:{lineno}: outcome {value} is not +1 or -1")
            outcomes.append(value)
        try:
            weight = float(tokens[4])
        except ValueError:
            raise MixtureFileError(f"{path}:{lineno}: bad weight {tokens[4]!r}") from None
        if weight < 0.0:
            raise MixtureFileError(f"{path}:{lineno}: negative weight {weight}")
        strategy = DeterministicStrategy(tuple(outcomes[:2]), tuple(outcomes[2:]))
        entries.append((strategy, weight))

    if not entries:
        raise MixtureFileError(f"{path}: no strategies found")
    total = sum(w for _, w in entries)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise MixtureFileError(
            f"{path}: weights sum to {total}, more than {WEIGHT_SUM_TOL} away from 1"
        )
    return LhvMixture(tuple((st, w / total) for st, w in entries))


# ---------------------------------------------------------------------------
# Argument parsing and dispatch.
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellsim",
        description="Bell/CHSH inequalities: exact bounds, quantum correlators, scans.",
    )
    parser.add_argument("--version", action="version", version=f"bellsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, formats: bool = True) -> None:
        p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        if formats:
            p.add_argument("--format", choices=("csv", "json"), default="csv",
                           dest="fmt", help="output format (default csv)")

    p = sub.add_parser("scan", help="grid scan of the violation landscape")
    p.add_argument("--phi", type=float, default=0.0, help="azimuth of the third direction")
    p.add_argument("--step", type=float, default=DEFAULT_SCAN_STEP,
                   help="grid step for both angles (default pi/200)")
    p.add_argument("--degrees", action="store_true", help="interpret --phi/--step in degrees")
    add_common(p)

    p = sub.add_parser("chsh", help="quantum CHSH maximum of a state")
    p.add_argument("--state", choices=sorted(_STATES), default="singlet")
    p.add_argument("--starts", type=int, default=32, help="optimizer multi-starts (default 32)")
    add_common(p, formats=False)

    p = sub.add_parser("bound", help="exact classical bound by enumeration")
    p.add_argument("--expr", choices=("bell1964", "chsh"), required=True)
    add_common(p, formats=False)

    p = sub.add_parser("simulate", help="Monte Carlo correlator estimates")
    p.add_argument("--source", default="singlet",
                   help="'singlet' or a path to a mixture file (default singlet)")
    p.add_argument("--settings", choices=("chsh", "parallel"), default="chsh",
                   help="measurement pairs for the singlet source")
    p.add_argument("--n", type=int, default=DEFAULT_SAMPLES,
                   help="rounds per setting pair (default 100000)")
    add_common(p)

    p = sub.add_parser("spin-model", help="single-spin hidden-variable model check")
    p.add_argument("--step", type=float, default=DEFAULT_SPIN_STEP,
                   help="angle grid step over [0, pi] (default pi/50)")
    p.add_argument("--n", type=int, default=DEFAULT_SAMPLES,
                   help="hidden-variable draws per angle (default 100000)")
    p.add_argument("--degrees", action="store_true", help="interpret --step in degrees")
    add_common(p)

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {"command": args.command, "seed": args.seed, "out": args.out}
    if hasattr(args, "fmt"):
        fields["fmt"] = args.fmt
    scale = math.pi / 180.0 if getattr(args, "degrees", False) else 1.0
    if hasattr(args, "phi"):
        fields["phi"] = args.phi * scale
    if hasattr(args, "step"):
        fields["step"] = args.step * scale
    for name in ("n", "starts", "expr", "state", "source", "settings"):
        if hasattr(args, name):
            fields[name] = getattr(args, name)
    return RunConfig(**fields)


_COMMANDS = {
    "scan": cmd_scan,
    "chsh": cmd_chsh,
    "bound": cmd_bound,
    "simulate": cmd_simulate,
    "spin-model": cmd_spin_model,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        config = _config_from_args(args)
        return _COMMANDS[args.command](config)
    except InternalConsistencyError as exc:
        print(f"bellsim: consistency failure: {exc}", file=sys.stderr)
        return 1
    except (InputError, OSError) as exc:
        print(f"bellsim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
