"""Constrained application problems.

Pressure-vessel design
    Minimize material cost over (Ts, Th, R, L) under four inequality
    constraints, handled with a static quadratic penalty.

Task assignment
    Assign n tasks to n employees one-to-one at minimum total cost.  A
    continuous optimizer drives it through random-key decoding: the rank of
    each task's key is the employee it gets.
"""

import dataclasses
import itertools
import math
from typing import Tuple

import numpy as np

from .exceptions import DimensionError, EncodingError, ParseError, SizeError
from .objectives import BoundedDomain, ObjectiveSpec

__all__ = [
    "PressureVesselSolution",
    "PenaltyConfig",
    "VESSEL_DOMAIN",
    "vessel_cost",
    "vessel_constraints",
    "vessel_penalized",
    "is_feasible",
    "pressure_vessel_objective",
    "FeasibleRecorder",
    "AssignmentInstance",
    "load_assignment",
    "table14_instance",
    "decode_assignment",
    "assignment_cost",
    "brute_force_assignment",
    "assignment_objective",
    "BRUTE_FORCE_MAX_N",
]

VESSEL_DOMAIN = BoundedDomain(np.array([0.0, 0.0, 10.0, 10.0]), np.array([99.0, 99.0, 200.0, 200.0]))
DEFAULT_PENALTY = 1e6
FEASIBILITY_TOL = 1e-6
BRUTE_FORCE_MAX_N = 10


@dataclasses.dataclass(frozen=True)
class PressureVesselSolution:
    """Shell thickness, head thickness, inner radius and cylinder length."""

    ts: float
    th: float
    r: float
    l: float

    def as_array(self):
        return np.array([self.ts, self.th, self.r, self.l])

    @classmethod
    def from_array(cls, x):
        ts, th, r, l = (float(v) for v in x)
        return cls(ts, th, r, l)


@dataclasses.dataclass(frozen=True)
class PenaltyConfig:
    lam: float = DEFAULT_PENALTY
    # evaluates the head-thickness constraint as -R + 0.00954 R, which never binds
    printed_g2: bool = False

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"penalty coefficient must be positive, got {self.lam}")


def _unpack(x):
    if isinstance(x, PressureVesselSolution):
        return x.ts, x.th, x.r, x.l
    values = x.tolist() if isinstance(x, np.ndarray) else list(x)
    if len(values) != 4:
        raise DimensionError(f"a pressure-vessel design has 4 variables, got {len(values)}")
    return values


def vessel_cost(x):
    x1, x2, x3, x4 = _unpack(x)
    return 0.6224 * x1 * x3 * x4 + 1.7781 * x2 * x3 * x3 + 3.1661 * x1 * x1 * x4 + 19.84 * x1 * x1 * x3


def _constraints(x1, x2, x3, x4, printed_g2):
    g1 = -x1 + 0.0193 * x3
    g2 = (-x3 if printed_g2 else -x2) + 0.00954 * x3
    g3 = -math.pi * x3 * x3 * x4 - (4.0 / 3.0) * math.pi * x3 ** 3 + 1296000.0
    g4 = x4 - 240.0
    return g1, g2, g3, g4


def vessel_constraints(x, printed_g2=False):
    """Constraint values g1..g4; the design is feasible where all are <= 0."""
    return np.array(_constraints(*_unpack(x), printed_g2))


def vessel_penalized(x, penalty=None):
    """Cost plus ``lam * sum(max(0, g_k)^2)``."""
    if penalty is None:
        penalty = PenaltyConfig()
    elif not isinstance(penalty, PenaltyConfig):
        penalty = PenaltyConfig(float(penalty))
    x1, x2, x3, x4 = _unpack(x)
    violation = 0.0
    for g in _constraints(x1, x2, x3, x4, penalty.printed_g2):
        if g > 0.0:
            violation += g * g
    cost = 0.6224 * x1 * x3 * x4 + 1.7781 * x2 * x3 * x3 + 3.1661 * x1 * x1 * x4 + 19.84 * x1 * x1 * x3
    return cost + penalty.lam * violation


def is_feasible(x, tol=FEASIBILITY_TOL, printed_g2=False):
    return bool(np.all(vessel_constraints(x, printed_g2) <= tol))


class FeasibleRecorder:
    """Penalized vessel objective that remembers the cheapest feasible design it saw.

    A finite penalty puts the penalized minimizer slightly outside the
    feasible set, so campaign reports use this record instead of the
    optimizer's best point.
    """

    def __init__(self, penalty=None, tol=FEASIBILITY_TOL):
        if penalty is None:
            penalty = PenaltyConfig()
        elif not isinstance(penalty, PenaltyConfig):
            penalty = PenaltyConfig(float(penalty))
        self.penalty = penalty
        self.tol = tol
        self.best_cost = math.inf
        self.best_position = None

    def __call__(self, x):
        x1, x2, x3, x4 = _unpack(x)
        violation = 0.0
        feasible = True
        for g in _constraints(x1, x2, x3, x4, self.penalty.printed_g2):
            if g > 0.0:
                violation += g * g
            if g > self.tol:
                feasible = False
        cost = 0.6224 * x1 * x3 * x4 + 1.7781 * x2 * x3 * x3 + 3.1661 * x1 * x1 * x4 + 19.84 * x1 * x1 * x3
        if feasible and cost < self.best_cost:
            self.best_cost = cost
            self.best_position = np.array([x1, x2, x3, x4])
        return cost + self.penalty.lam * violation


def pressure_vessel_objective(penalty=None, track_feasible=False):
    """Penalized pressure-vessel objective over its box.

    With ``track_feasible=True`` the objective's ``function`` is a
    :class:`FeasibleRecorder`; read ``spec.function.best_position`` after a run.
    """
    if track_feasible:
        function = FeasibleRecorder(penalty)
    else:
        if penalty is None:
            penalty = PenaltyConfig()
        elif not isinstance(penalty, PenaltyConfig):
            penalty = PenaltyConfig(float(penalty))
        function = lambda x: vessel_penalized(x, penalty)  # noqa: E731
    return ObjectiveSpec(
        name="pressure_vessel",
        function=function,
        domain=VESSEL_DOMAIN,
        description="pressure-vessel design, static quadratic penalty",
    )


# ---------------------------------------------------------------------------
# task assignment


@dataclasses.dataclass(frozen=True, eq=False)
class AssignmentInstance:
    """Square cost matrix; ``costs[i, j]`` is the cost of task i on employee j."""

    costs: np.ndarray

    def __post_init__(self):
        costs = np.asarray(self.costs, dtype=float)
        if costs.ndim != 2 or costs.shape[0] != costs.shape[1] or costs.shape[0] == 0:
            raise DimensionError(f"cost matrix must be square and non-empty, got shape {costs.shape}")
        if np.any(costs < 0) or not np.all(np.isfinite(costs)):
            raise ValueError("costs must be finite and non-negative")
        costs.setflags(write=False)
        object.__setattr__(self, "costs", costs)

    @property
    def n(self):
        return self.costs.shape[0]


def load_assignment(path):
    """Read an instance: first line ``n``, then ``n`` rows of ``n`` costs."""
    with open(path) as fh:
        lines = [(i, line.split()) for i, line in enumerate(fh, start=1)]
    lines = [(i, toks) for i, toks in lines if toks]
    if not lines:
        raise ParseError("empty assignment file", path)
    lineno, head = lines[0]
    if len(head) != 1:
        raise ParseError("first line must hold the single integer n", path, lineno)
    try:
        n = int(head[0])
    except ValueError:
        raise ParseError(f"n is not an integer: {head[0]!r}", path, lineno) from None
    if n < 1:
        raise ParseError(f"n must be positive, got {n}", path, lineno)
    rows = lines[1:]
    if len(rows) != n:
        raise ParseError(f"expected {n} cost rows, found {len(rows)}", path)
    matrix = []
    for lineno, toks in rows:
        if len(toks) != n:
            raise ParseError(f"expected {n} costs, found {len(toks)}", path, lineno)
        try:
            matrix.append([float(t) for t in toks])
        except ValueError:
            raise ParseError("costs must be numbers", path, lineno) from None
    return AssignmentInstance(np.array(matrix))


def table14_instance():
    """The bundled five-task, five-employee instance."""
    from importlib import resources

    with resources.as_file(resources.files("cfdo") / "data" / "table14.txt") as path:
        return load_assignment(path)


def decode_assignment(position):
    """Random-key decoding: task i gets employee ``rank(position[i])`` (1-based).

    Ties go to the lower task index first, so the result is always a bijection.
    """
    keys = np.asarray(position, dtype=float)
    order = np.argsort(keys, kind="stable")
    ranks = np.empty(keys.shape[0], dtype=int)
    ranks[order] = np.arange(1, keys.shape[0] + 1)
    return tuple(int(r) for r in ranks)


def _check_perm(perm, n):
    perm = tuple(int(p) for p in perm)
    if len(perm) != n or sorted(perm) != list(range(1, n + 1)):
        raise EncodingError(f"{perm} is not a permutation of 1..{n}")
    return perm


def assignment_cost(perm, instance):
    perm = _check_perm(perm, instance.n)
    costs = instance.costs
    return float(sum(costs[i, p - 1] for i, p in enumerate(perm)))


def brute_force_assignment(instance) -> Tuple[Tuple[int, ...], float]:
    """Exact optimum by enumeration; the lexicographically smallest on ties."""
    n = instance.n
    if n > BRUTE_FORCE_MAX_N:
        raise SizeError(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {n}")
    costs = instance.costs.tolist()
    best_perm, best_cost = None, math.inf
    for perm in itertools.permutations(range(n)):
        cost = sum(costs[i][j] for i, j in enumerate(perm))
        if cost < best_cost:
            best_perm, best_cost = perm, cost
    return tuple(j + 1 for j in best_perm), float(best_cost)


def assignment_objective(instance):
    costs = instance.costs

    def decoded_cost(x):
        perm = decode_assignment(x)
        return float(sum(costs[i, p - 1] for i, p in enumerate(perm)))

    return ObjectiveSpec(
        name="task_assignment",
        function=decoded_cost,
        domain=BoundedDomain.box(0.0, 1.0, instance.n),
        description="task assignment through random-key decoding",
    )
