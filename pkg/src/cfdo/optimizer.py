"""Fitness Dependent Optimizer and its chaotic variant.

The search engine is a single code path.  The baseline optimizer (FDO) and
the chaotic one (CFDO) differ only in where the randomness comes from:

* ``random_source="levy"`` draws the random variable ``r`` from a clamped
  Mantegna Levy step; a chaotic map name draws it from that map instead;
* ``init_source="uniform"`` places the initial scouts with a uniform RNG; a
  map name places them with that map's (0, 1) stream.

Each scout moves by a *pace*.  The pace depends on the fitness weight

    fw = |best fitness| / |scout fitness| - wf

If the scout's fitness is zero or ``fw`` lies outside the open interval
(0, 1), the pace is the scout position scaled coordinate-wise by random
values in [-1, 1].  Otherwise a single ``r`` in [-1, 1] is drawn and the
pace is ``(best - position) * r`` for negative ``r`` and
``(best - position) * fw`` otherwise.  A candidate that does not improve the
scout is retried once with the scout's last accepted movement.
"""

import dataclasses
import enum
import math
from typing import List, Optional

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .chaos import ChaoticGenerator, MapKind
from .objectives import BoundedDomain, ObjectiveSpec
from .validation import check_positive_int, check_unit_interval

__all__ = [
    "FdoConfig",
    "ScoutBee",
    "SwarmState",
    "RunRecord",
    "Route",
    "LevySource",
    "ChaoticSource",
    "UniformSource",
    "make_streams",
    "levy",
    "mantegna_sigma",
    "mantegna_step",
    "fitness_weight",
    "select_route",
    "compute_pace",
    "amend",
    "init_population",
    "step",
    "optimize",
    "FitnessDependentOptimizer",
    "ChaoticFitnessDependentOptimizer",
]

LEVY = "levy"
UNIFORM = "uniform"
REDRAW = "redraw"
CLAMP = "clamp"

# Chaotic orbits are advanced by a seed-dependent number of steps so that
# runs with different seeds follow different stretches of the same orbit.
CHAOS_OFFSET_SPAN = 1 << 12


@dataclasses.dataclass(frozen=True)
class FdoConfig:
    """Settings for one optimization run.

    ``random_source`` is ``"levy"`` or a chaotic map name; ``init_source`` is
    ``"uniform"`` or a chaotic map name; ``boundary`` is ``"redraw"`` or
    ``"clamp"``.
    """

    population: int = 30
    iterations: int = 50
    wf: float = 0.0
    random_source: str = LEVY
    init_source: str = UNIFORM
    boundary: str = REDRAW
    seed: int = 0
    levy_beta: float = 1.5

    def __post_init__(self):
        check_positive_int(self.population, "population")
        check_positive_int(self.iterations, "iterations")
        object.__setattr__(self, "wf", check_unit_interval(self.wf, "wf"))
        object.__setattr__(self, "random_source", _normalize_source(self.random_source, LEVY))
        object.__setattr__(self, "init_source", _normalize_source(self.init_source, UNIFORM))
        if self.boundary not in (REDRAW, CLAMP):
            raise ValueError(f"boundary must be 'redraw' or 'clamp', got {self.boundary!r}")
        if not 0.0 < self.levy_beta <= 2.0:
            raise ValueError(f"levy_beta must lie in (0, 2], got {self.levy_beta}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)):
            raise TypeError(f"seed must be an integer, got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))

    @classmethod
    def fdo(cls, **kwargs):
        return cls(random_source=LEVY, init_source=UNIFORM, **kwargs)

    @classmethod
    def cfdo(cls, chaotic_map="singer", **kwargs):
        name = MapKind.from_name(chaotic_map).value
        return cls(random_source=name, init_source=name, **kwargs)

    @property
    def label(self):
        """``FDO`` for the baseline, ``CFDO<k>`` for a single-map chaotic run."""
        if self.random_source == LEVY and self.init_source == UNIFORM:
            return "FDO"
        if self.random_source == self.init_source:
            return f"CFDO{MapKind(self.random_source).index}"
        return f"FDO[{self.random_source}/{self.init_source}]"


def _normalize_source(value, plain):
    if isinstance(value, MapKind):
        return value.value
    if str(value).lower() == plain:
        return plain
    return MapKind.from_name(value).value


@dataclasses.dataclass
class ScoutBee:
    position: np.ndarray
    fitness: float
    pace: np.ndarray


@dataclasses.dataclass
class SwarmState:
    bees: List[ScoutBee]
    best_position: np.ndarray
    best_fitness: float
    iteration: int = 0
    evaluations: int = 0


@dataclasses.dataclass
class RunRecord:
    trace: np.ndarray
    best_position: np.ndarray
    best_fitness: float
    evaluations: int
    seed: int


# ---------------------------------------------------------------------------
# randomness


def mantegna_sigma(beta):
    num = math.gamma(1.0 + beta) * math.sin(math.pi * beta / 2.0)
    den = math.gamma((1.0 + beta) / 2.0) * beta * 2.0 ** ((beta - 1.0) / 2.0)
    return (num / den) ** (1.0 / beta)


def mantegna_step(u, v, beta):
    """Levy step from a N(0, sigma^2) draw ``u`` and a N(0, 1) draw ``v``."""
    return u / np.abs(v) ** (1.0 / beta)


def levy(beta, rng, size=None):
    """Mantegna Levy step clamped into [-1, 1]."""
    sigma = mantegna_sigma(beta)
    u = rng.normal(0.0, sigma, size)
    v = rng.normal(0.0, 1.0, size)
    return np.clip(mantegna_step(u, v, beta), -1.0, 1.0)


class UniformSource:
    """Uniform (0, 1) draws from a numpy Generator."""

    def __init__(self, rng):
        self.rng = rng

    def unit(self):
        return self.rng.random()

    def unit_at(self, d):
        return self.rng.random()

    def units(self, n):
        return self.rng.random(n)


class LevySource(UniformSource):
    """Levy-distributed ``r`` plus uniform draws for boundary redraws."""

    def __init__(self, rng, beta=1.5):
        super().__init__(rng)
        self.beta = beta
        self._sigma = mantegna_sigma(beta)

    def signed(self):
        u = self.rng.normal(0.0, self._sigma)
        v = self.rng.normal()
        return min(1.0, max(-1.0, u / abs(v) ** (1.0 / self.beta)))

    def signeds(self, n):
        u = self.rng.normal(0.0, self._sigma, n)
        v = self.rng.normal(0.0, 1.0, n)
        return np.clip(mantegna_step(u, v, self.beta), -1.0, 1.0)


class ChaoticSource:
    """Chaotic randomness with one orbit per coordinate.

    Successive iterates of a single orbit are strongly dependent (for the
    Singer map the lag-1 correlation is about -0.5), so per-coordinate draws
    come from separate orbits of the same map: coordinate ``d`` always reads
    ``coordinates[d]``.  Scalar draws read ``scalar``.  Every orbit starts at
    the map's initial value and is advanced by its entry in ``offsets``
    (scalar orbit first).

    Parameters
    ----------
    kind : MapKind or str
    dimension : int
    offsets : sequence of int, optional
        ``dimension + 1`` skip counts; all zero when omitted.
    """

    def __init__(self, kind, dimension, offsets=None):
        if offsets is None:
            offsets = [0] * (dimension + 1)
        if len(offsets) != dimension + 1:
            raise ValueError(f"expected {dimension + 1} offsets, got {len(offsets)}")
        self.kind = MapKind.from_name(kind)
        self.dimension = dimension
        gens = [ChaoticGenerator(self.kind).skip(k) for k in offsets]
        self.scalar = gens[0]
        self.coordinates = gens[1:]

    def unit(self):
        return self.scalar.unit()

    def signed(self):
        return self.scalar.signed()

    def unit_at(self, d):
        return self.coordinates[d].unit()

    def units(self, n):
        """``n`` draws in row-major order over the coordinates (``n % dimension == 0``)."""
        gens = self.coordinates
        dim = self.dimension
        return np.array([gens[k % dim].unit() for k in range(n)])

    def signeds(self, n):
        return np.array([g.signed() for g in self.coordinates[:n]])


def make_streams(config, dimension):
    """Build the (init stream, random stream) pair for a run.

    Both streams are the same object when they name the same chaotic map.
    """
    rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    sources = {}

    def chaotic(name):
        if name not in sources:
            kind = MapKind(name)
            state = np.random.SeedSequence([config.seed, kind.index]).generate_state(dimension + 1)
            offsets = [int(s) % CHAOS_OFFSET_SPAN for s in state]
            sources[name] = ChaoticSource(kind, dimension, offsets)
        return sources[name]

    if config.random_source == LEVY:
        random_stream = LevySource(rng, config.levy_beta)
    else:
        random_stream = chaotic(config.random_source)
    if config.init_source == UNIFORM:
        init_stream = UniformSource(rng)
    else:
        init_stream = chaotic(config.init_source)
    return init_stream, random_stream


# ---------------------------------------------------------------------------
# pace


class Route(enum.Enum):
    SCALED_POSITION = "scaled_position"
    RANDOM_TOWARD_BEST = "random_toward_best"
    WEIGHTED_TOWARD_BEST = "weighted_toward_best"


def fitness_weight(best_fitness, current_fitness, wf):
    """``|best| / |current| - wf``.  Callers route zero fitness elsewhere."""
    return abs(best_fitness) / abs(current_fitness) - wf


def _toward_best(fw, fitness):
    return fitness != 0 and 0.0 < fw < 1.0


def select_route(fw, fitness, r=None):
    """Which pace rule fires.  ``r`` is only consulted inside (0, 1)."""
    if not _toward_best(fw, fitness):
        return Route.SCALED_POSITION
    if r is None:
        raise ValueError("r is required when 0 < fw < 1")
    return Route.RANDOM_TOWARD_BEST if r < 0 else Route.WEIGHTED_TOWARD_BEST


def compute_pace(position, fitness, best_position, fw, source):
    """Return ``(pace, route)`` for one scout."""
    if not _toward_best(fw, fitness):
        return position * source.signeds(position.shape[0]), Route.SCALED_POSITION
    r = source.signed()
    distance = best_position - position
    if r < 0:
        return distance * r, Route.RANDOM_TOWARD_BEST
    return distance * fw, Route.WEIGHTED_TOWARD_BEST


def amend(position, domain, source, policy=REDRAW):
    """Bring a position back inside ``domain``.

    ``"redraw"`` replaces each violating coordinate ``d`` by a fresh point
    drawn from ``source.unit_at(d)``; ``"clamp"`` projects it onto the
    violated bound.
    """
    lower, upper = domain.lower, domain.upper
    outside = (position < lower) | (position > upper)
    if not outside.any():
        return position
    position = position.copy()
    if policy == CLAMP:
        np.clip(position, lower, upper, out=position)
        return position
    for d in np.flatnonzero(outside):
        position[d] = lower[d] + source.unit_at(d) * (upper[d] - lower[d])
    # guards against rounding past the upper bound
    np.clip(position, lower, upper, out=position)
    return position


# ---------------------------------------------------------------------------
# search loop


def init_population(objective, population, init_stream):
    """Place and evaluate ``population`` scouts inside the objective's domain."""
    domain = objective.domain
    dim = domain.dimension
    u = np.asarray(init_stream.units(population * dim), dtype=float).reshape(population, dim)
    positions = domain.lower + u * domain.width
    np.clip(positions, domain.lower, domain.upper, out=positions)
    bees = []
    for row in positions:
        bees.append(ScoutBee(row.copy(), objective(row), np.zeros(dim)))
    best = min(bees, key=lambda b: b.fitness)
    return SwarmState(
        bees=bees,
        best_position=best.position.copy(),
        best_fitness=best.fitness,
        iteration=0,
        evaluations=population,
    )


def step(state, config, objective, random_stream):
    """Advance every scout once, in order, updating the global best as it goes."""
    domain = objective.domain
    wf = config.wf
    policy = config.boundary
    for bee in state.bees:
        fitness = bee.fitness
        fw = 0.0 if fitness == 0 else fitness_weight(state.best_fitness, fitness, wf)
        pace, _ = compute_pace(bee.position, fitness, state.best_position, fw, random_stream)
        candidate = amend(bee.position + pace, domain, random_stream, policy)
        value = objective(candidate)
        state.evaluations += 1
        if not value < fitness and bee.pace.any():
            candidate = amend(bee.position + bee.pace, domain, random_stream, policy)
            value = objective(candidate)
            state.evaluations += 1
        if value < fitness:
            bee.pace = candidate - bee.position
            bee.position = candidate
            bee.fitness = value
            if value < state.best_fitness:
                state.best_fitness = value
                state.best_position = candidate.copy()
    state.iteration += 1
    return state


def optimize(config, objective, callback=None):
    """Run one optimization and return its :class:`RunRecord`.

    ``callback(state)`` is called after every iteration.
    """
    init_stream, random_stream = make_streams(config, objective.dimension)
    state = init_population(objective, config.population, init_stream)
    trace = np.empty(config.iterations)
    for t in range(config.iterations):
        step(state, config, objective, random_stream)
        trace[t] = state.best_fitness
        if callback is not None:
            callback(state)
    return RunRecord(
        trace=trace,
        best_position=state.best_position.copy(),
        best_fitness=state.best_fitness,
        evaluations=state.evaluations,
        seed=config.seed,
    )


# ---------------------------------------------------------------------------
# estimator interface


def _as_objective(objective, bounds):
    if isinstance(objective, ObjectiveSpec):
        if bounds is not None:
            raise ValueError("bounds must not be given together with an ObjectiveSpec")
        return objective
    if not callable(objective):
        raise TypeError("objective must be an ObjectiveSpec or a callable")
    if bounds is None:
        raise ValueError("bounds=(lower, upper) is required for a plain callable")
    lower, upper = bounds
    domain = BoundedDomain(np.atleast_1d(lower), np.atleast_1d(upper))
    return ObjectiveSpec(
        name=getattr(objective, "__name__", "objective"),
        function=lambda x: objective(x),
        domain=domain,
    )


class FitnessDependentOptimizer(BaseEstimator):
    """Fitness Dependent Optimizer with pluggable randomness.

    Parameters
    ----------
    population : int, default 30
        Number of scout bees.
    iterations : int, default 50
        Number of sweeps over the swarm.
    wf : float, default 0.0
        Weight factor subtracted from the fitness ratio, in [0, 1].
    random_source : str, default "levy"
        ``"levy"`` or a chaotic map name.
    init_source : str, default "uniform"
        ``"uniform"`` or a chaotic map name.
    boundary : {"redraw", "clamp"}, default "redraw"
        How out-of-box candidates are repaired.
    levy_beta : float, default 1.5
    random_state : int, default 0

    Attributes
    ----------
    best_position_ : ndarray
    best_fitness_ : float
    trace_ : ndarray
        Best-so-far fitness after each iteration.
    n_evaluations_ : int
    record_ : RunRecord

    Examples
    --------
    >>> from cfdo import FitnessDependentOptimizer, get_objective
    >>> opt = FitnessDependentOptimizer(iterations=100).fit(get_objective("sphere", 2))
    >>> opt.best_fitness_ < 1e-3
    True
    """

    def __init__(
        self,
        population=30,
        iterations=50,
        wf=0.0,
        random_source=LEVY,
        init_source=UNIFORM,
        boundary=REDRAW,
        levy_beta=1.5,
        random_state=0,
    ):
        self.population = population
        self.iterations = iterations
        self.wf = wf
        self.random_source = random_source
        self.init_source = init_source
        self.boundary = boundary
        self.levy_beta = levy_beta
        self.random_state = random_state

    def _config(self):
        return FdoConfig(
            population=self.population,
            iterations=self.iterations,
            wf=self.wf,
            random_source=self.random_source,
            init_source=self.init_source,
            boundary=self.boundary,
            seed=self.random_state,
            levy_beta=self.levy_beta,
        )

    def fit(self, objective, bounds=None, callback=None):
        """Minimize ``objective``.

        ``objective`` is an :class:`ObjectiveSpec`, or any callable on a 1-D
        array together with ``bounds=(lower, upper)``.
        """
        spec = _as_objective(objective, bounds)
        record = optimize(self._config(), spec, callback=callback)
        self.record_ = record
        self.best_position_ = record.best_position
        self.best_fitness_ = record.best_fitness
        self.trace_ = record.trace
        self.n_evaluations_ = record.evaluations
        return self

    def score(self, objective=None, bounds=None):
        """Negated best fitness, so that larger is better."""
        check_is_fitted(self, "best_fitness_")
        return -self.best_fitness_


class ChaoticFitnessDependentOptimizer(FitnessDependentOptimizer):
    """FDO with one chaotic map driving both initialization and ``r``."""

    def __init__(
        self,
        chaotic_map="singer",
        population=30,
        iterations=50,
        wf=0.0,
        boundary=REDRAW,
        random_state=0,
    ):
        self.chaotic_map = chaotic_map
        self.population = population
        self.iterations = iterations
        self.wf = wf
        self.boundary = boundary
        self.random_state = random_state

    def _config(self):
        return FdoConfig.cfdo(
            self.chaotic_map,
            population=self.population,
            iterations=self.iterations,
            wf=self.wf,
            boundary=self.boundary,
            seed=self.random_state,
        )
