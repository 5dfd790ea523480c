"""Box-bounded benchmark functions.

Two families live in the registry:

* ``F1`` .. ``F10``: the ten-function CEC2019 "100-digit" suite, with the
  dimensions and search ranges of that suite and an optimum value of 1.
  F4..F10 are evaluated without shift or rotation unless a transform file is
  attached with :func:`load_transform`; the CEC input rescaling of each base
  function is kept so the landscape over [-100, 100] matches the suite.
* classic unconstrained functions (``sphere``, ``rastrigin``, ...) in their
  textbook form, with no bias, used for sanity testing.
"""

import dataclasses
import math
from typing import Callable, Optional

import numpy as np

from .exceptions import DimensionError, ParseError, UnknownObjectiveError
from .validation import check_bounds, check_vector

__all__ = [
    "BoundedDomain",
    "TransformData",
    "ObjectiveSpec",
    "load_transform",
    "get_objective",
    "registry_names",
    "LJ_OFFSET",
]

# Energy of the optimal 6-atom cluster with the opposite sign; added so the
# CEC2019 cluster problem has a raw minimum of 0.
LJ_OFFSET = 12.7120622568


@dataclasses.dataclass(frozen=True, eq=False)
class BoundedDomain:
    """Axis-aligned search box."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower, upper = check_bounds(self.lower, self.upper)
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def box(cls, low, high, dimension):
        return cls(np.full(dimension, float(low)), np.full(dimension, float(high)))

    @property
    def dimension(self):
        return self.lower.shape[0]

    @property
    def width(self):
        return self.upper - self.lower

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def clip(self, x):
        return np.clip(x, self.lower, self.upper)


@dataclasses.dataclass(frozen=True, eq=False)
class TransformData:
    """Shift vector and rotation matrix applied as ``R @ (x - shift)``."""

    shift: np.ndarray
    rotation: np.ndarray

    def __post_init__(self):
        shift = check_vector(self.shift, name="shift")
        rotation = np.asarray(self.rotation, dtype=float)
        if rotation.shape != (shift.shape[0], shift.shape[0]):
            raise DimensionError(
                f"rotation has shape {rotation.shape}, expected {(shift.shape[0],) * 2}"
            )
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "rotation", rotation)

    @property
    def dimension(self):
        return self.shift.shape[0]

    @classmethod
    def identity(cls, dimension):
        return cls(np.zeros(dimension), np.eye(dimension))

    def apply(self, x):
        return self.rotation @ (x - self.shift)


@dataclasses.dataclass(frozen=True, eq=False)
class ObjectiveSpec:
    """A named, bounded objective.  Calling it evaluates the function.

    Attributes
    ----------
    name : str
    function : callable
        Raw function of a 1-D float array.
    domain : BoundedDomain
    bias : float
        Constant added to the raw value.
    transform : TransformData, optional
        Applied before the input scale.
    input_scale : float
        Multiplier applied to the (transformed) input before ``function``.
    known_best : float, optional
        Global minimum of the biased function, where known analytically.
    """

    name: str
    function: Callable
    domain: BoundedDomain
    bias: float = 0.0
    transform: Optional[TransformData] = None
    input_scale: float = 1.0
    known_best: Optional[float] = None
    description: str = ""

    @property
    def dimension(self):
        return self.domain.dimension

    def with_transform(self, transform):
        if transform is not None and transform.dimension != self.dimension:
            raise DimensionError(
                f"transform dimension {transform.dimension} != objective dimension {self.dimension}"
            )
        return dataclasses.replace(self, transform=transform)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise DimensionError(f"{self.name} expects a vector of length {self.dimension}, got shape {x.shape}")
        z = x
        if self.transform is not None:
            z = self.transform.apply(z)
        if self.input_scale != 1.0:
            z = z * self.input_scale
        return self.bias + float(self.function(z))

    __call__ = evaluate


# ---------------------------------------------------------------------------
# raw functions


def sphere(x):
    return float(np.dot(x, x))


def rosenbrock(x):
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def rastrigin(x):
    return float(np.sum(x * x - 10.0 * np.cos(2.0 * math.pi * x) + 10.0))


def griewank(x):
    i = np.arange(1, x.shape[0] + 1)
    return float(np.sum(x * x) / 4000.0 - np.prod(np.cos(x / np.sqrt(i))) + 1.0)


def ackley(x):
    d = x.shape[0]
    a = math.exp(-0.2 * math.sqrt(float(np.dot(x, x)) / d))
    b = math.exp(float(np.sum(np.cos(2.0 * math.pi * x))) / d)
    # grouped so that the origin gives exactly 0
    return (20.0 - 20.0 * a) + (math.e - b)


_WEIERSTRASS_K = np.arange(21)
_WEIERSTRASS_AK = 0.5 ** _WEIERSTRASS_K
_WEIERSTRASS_BK = 3.0 ** _WEIERSTRASS_K


def weierstrass(x):
    d = x.shape[0]
    terms = _WEIERSTRASS_AK * np.cos(2.0 * math.pi * np.outer(x + 0.5, _WEIERSTRASS_BK))
    offset = d * float(np.sum(_WEIERSTRASS_AK * np.cos(math.pi * _WEIERSTRASS_BK)))
    return float(np.sum(terms)) - offset


_SCHWEFEL_SHIFT = 4.209687462275036e2
_SCHWEFEL_CONST = 4.189828872724338e2


def modified_schwefel(x):
    d = x.shape[0]
    z = x + _SCHWEFEL_SHIFT
    total = 0.0
    for zi in z:
        if zi > 500.0:
            m = 500.0 - math.fmod(zi, 500.0)
            total -= m * math.sin(math.sqrt(m))
            total += ((zi - 500.0) / 100.0) ** 2 / d
        elif zi < -500.0:
            m = 500.0 - math.fmod(abs(zi), 500.0)
            total -= (-500.0 + math.fmod(abs(zi), 500.0)) * math.sin(math.sqrt(m))
            total += ((zi + 500.0) / 100.0) ** 2 / d
        else:
            total -= zi * math.sin(math.sqrt(abs(zi)))
    return total + _SCHWEFEL_CONST * d


def expanded_schaffer_f6(x):
    y = np.roll(x, -1)
    s = x * x + y * y
    return float(np.sum(0.5 + (np.sin(np.sqrt(s)) ** 2 - 0.5) / (1.0 + 0.001 * s) ** 2))


def happy_cat(x):
    d = x.shape[0]
    r2 = float(np.dot(x, x))
    return abs(r2 - d) ** 0.25 + (0.5 * r2 + float(np.sum(x))) / d + 0.5


def _happy_cat_centered(x):
    # the suite moves the optimum from -1 to the origin
    return happy_cat(x - 1.0)


def storn_chebyshev(x):
    """Storn's polynomial fitting problem; ``x`` holds coefficients, highest degree first."""
    d = x.shape[0]
    prev, target = 1.0, 1.2
    for _ in range(d - 2):
        prev, target = target, 2.4 * target - prev
    m = 32 * d
    grid = -1.0 + 2.0 * np.arange(m + 1) / m
    values = np.abs(np.polyval(x, grid))
    excess = values[values > 1.0] - 1.0
    total = float(np.dot(excess, excess))
    for end in (1.2, -1.2):
        v = float(np.polyval(x, end))
        if v < target:
            total += (v - target) ** 2
    return total


def inverse_hilbert(x):
    n = math.isqrt(x.shape[0])
    idx = np.arange(n)
    hilbert = 1.0 / (idx[:, None] + idx[None, :] + 1.0)
    w = hilbert @ x.reshape(n, n) - np.eye(n)
    return float(np.sum(np.abs(w)))


def lennard_jones(x):
    atoms = x.reshape(-1, 3)
    i, j = np.triu_indices(atoms.shape[0], k=1)
    r2 = np.sum((atoms[i] - atoms[j]) ** 2, axis=1)
    r6 = r2 ** 3
    close = r6 <= 1e-10
    r6 = np.where(close, 1.0, r6)
    energy = np.where(close, 1e20, (1.0 / r6 - 2.0) / r6)
    return float(np.sum(energy)) + LJ_OFFSET


def lennard_jones_energy(x):
    """Plain pair-potential energy (well depth 1 at unit distance), no offset."""
    return lennard_jones(np.asarray(x, dtype=float)) - LJ_OFFSET


# ---------------------------------------------------------------------------
# registry

_SUITE = {
    # name: (function, dimension, half range, input scale, description)
    "F1": (storn_chebyshev, 9, 8192.0, 1.0, "Storn's Chebyshev polynomial fitting"),
    "F2": (inverse_hilbert, 16, 16384.0, 1.0, "inverse Hilbert matrix"),
    "F3": (lennard_jones, 18, 4.0, 1.0, "Lennard-Jones minimum energy cluster"),
    "F4": (rastrigin, 10, 100.0, 5.12 / 100.0, "Rastrigin"),
    "F5": (griewank, 10, 100.0, 600.0 / 100.0, "Griewank"),
    "F6": (weierstrass, 10, 100.0, 0.5 / 100.0, "Weierstrass"),
    "F7": (modified_schwefel, 10, 100.0, 1000.0 / 100.0, "modified Schwefel"),
    "F8": (expanded_schaffer_f6, 10, 100.0, 1.0, "expanded Schaffer F6"),
    "F9": (_happy_cat_centered, 10, 100.0, 5.0 / 100.0, "happy cat"),
    "F10": (ackley, 10, 100.0, 1.0, "Ackley"),
}
SUITE_BIAS = 1.0

_CLASSIC = {
    # name: (function, half range, known raw minimum)
    "sphere": (sphere, 100.0, 0.0),
    "rosenbrock": (rosenbrock, 30.0, 0.0),
    "rastrigin": (rastrigin, 5.12, 0.0),
    "griewank": (griewank, 600.0, 0.0),
    "ackley": (ackley, 32.768, 0.0),
    "weierstrass": (weierstrass, 0.5, 0.0),
    "modified_schwefel": (modified_schwefel, 500.0, None),
    "expanded_schaffer_f6": (expanded_schaffer_f6, 100.0, 0.0),
    "happy_cat": (happy_cat, 2.0, 0.0),
}
CLASSIC_DEFAULT_DIMENSION = 10


def registry_names():
    return list(_SUITE) + list(_CLASSIC)


def _canonical_name(name):
    key = str(name).strip()
    if key.upper() in _SUITE:
        return key.upper()
    if key.lower() in _CLASSIC:
        return key.lower()
    raise UnknownObjectiveError(name, registry_names())


def get_objective(name, dimension=None, transform=None):
    """Look up a registered objective.

    Parameters
    ----------
    name : str
        ``"F1"`` .. ``"F10"`` (case-insensitive) or a classic function name.
    dimension : int, optional
        Only meaningful for the classic set; suite functions have a fixed
        dimension and reject any other value.
    transform : TransformData, optional
        Shift and rotation applied before evaluation.

    Raises
    ------
    UnknownObjectiveError
        If the name is not registered.
    DimensionError
        If the dimension or transform shape does not fit.
    """
    key = _canonical_name(name)
    if key in _SUITE:
        func, dim, half, scale, description = _SUITE[key]
        if dimension is not None and dimension != dim:
            raise DimensionError(f"{key} has fixed dimension {dim}, got {dimension}")
        # the cluster offset is a 10-digit constant, so F3's floor is only approximate
        known = None if key == "F3" else SUITE_BIAS
        spec = ObjectiveSpec(
            name=key,
            function=func,
            domain=BoundedDomain.box(-half, half, dim),
            bias=SUITE_BIAS,
            input_scale=scale,
            known_best=known,
            description=description,
        )
    else:
        func, half, raw_min = _CLASSIC[key]
        dim = CLASSIC_DEFAULT_DIMENSION if dimension is None else int(dimension)
        if dim < 1 or (key == "rosenbrock" and dim < 2):
            raise DimensionError(f"invalid dimension {dim} for {key}")
        spec = ObjectiveSpec(
            name=key,
            function=func,
            domain=BoundedDomain.box(-half, half, dim),
            bias=0.0,
            known_best=raw_min,
            description=key.replace("_", " "),
        )
    if transform is not None:
        spec = spec.with_transform(transform)
    return spec


def load_transform(path, dimension):
    """Read a shift vector and rotation matrix from a whitespace-separated file.

    The first non-blank line holds ``dimension`` shift values; the next
    ``dimension`` non-blank lines are the rotation rows.  Blank lines are
    ignored everywhere; any other extra line is an error.
    """
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            tokens = line.split()
            if not tokens:
                continue
            try:
                rows.append((lineno, [float(t) for t in tokens]))
            except ValueError:
                bad = next(t for t in tokens if not _is_float(t))
                raise ParseError(f"not a number: {bad!r}", path, lineno) from None
    if not rows:
        raise ParseError("empty transform file", path)
    lineno, shift = rows[0]
    if len(shift) != dimension:
        raise DimensionError(f"{path}:{lineno}: shift has {len(shift)} values, expected {dimension}")
    matrix = rows[1:]
    if len(matrix) != dimension:
        raise DimensionError(f"{path}: rotation has {len(matrix)} rows, expected {dimension}")
    for lineno, row in matrix:
        if len(row) != dimension:
            raise DimensionError(f"{path}:{lineno}: rotation row has {len(row)} values, expected {dimension}")
    return TransformData(np.array(shift), np.array([row for _, row in matrix]))


def _is_float(token):
    try:
        float(token)
    except ValueError:
        return False
    return True
