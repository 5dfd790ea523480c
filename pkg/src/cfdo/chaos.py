"""Chaotic map generators used as deterministic randomness sources.

Each map is iterated from the initial value 0.7.  Maps whose native range is
(-1, 1) and maps whose native range is (0, 1) are both available through two
adapters: :meth:`ChaoticGenerator.unit` always yields a value in (0, 1) and
:meth:`ChaoticGenerator.signed` always yields a value in [-1, 1].

Degenerate updates (a value within epsilon of an endpoint of the native
range, a NaN, a division by zero or an exact repeat of the input) are
replaced by the previous value plus a small epsilon, wrapped back into the
native range.  This keeps every map total and stops absorption at fixed
points.
"""

import enum
import math

__all__ = ["MapKind", "ChaoticGenerator", "chaotic_sequence", "DEFAULT_SEED"]

DEFAULT_SEED = 0.7
DEFAULT_EPSILON = 1e-6

_TWO_PI = 2.0 * math.pi

# Map constants.
CIRCLE_A = 0.5
CIRCLE_B = 0.2
ITERATIVE_A = 0.7
LOGISTIC_A = 4.0
PIECEWISE_P = 0.4
SINE_A = 4.0
SINGER_MU = 1.07
SINUSOIDAL_A = 2.3
TENT_BREAK = 0.7


class MapKind(enum.Enum):
    """The ten supported maps, in their canonical order (index 1..10)."""

    CHEBYSHEV = "chebyshev"
    CIRCLE = "circle"
    GAUSS_MOUSE = "gauss_mouse"
    ITERATIVE = "iterative"
    LOGISTIC = "logistic"
    PIECEWISE = "piecewise"
    SINE = "sine"
    SINGER = "singer"
    SINUSOIDAL = "sinusoidal"
    TENT = "tent"

    @property
    def index(self):
        """1-based position in the canonical order (CFDO1..CFDO10 labels)."""
        return list(MapKind).index(self) + 1

    @property
    def signed_native(self):
        return self in (MapKind.CHEBYSHEV, MapKind.ITERATIVE)

    @property
    def native_range(self):
        return (-1.0, 1.0) if self.signed_native else (0.0, 1.0)

    @classmethod
    def from_name(cls, name):
        """Look a map up by name, case-insensitively.

        Accepts the enum value (``"gauss_mouse"``), a few spelling variants
        (``"gauss"``, ``"gauss/mouse"``, ``"gaussmouse"``) and the 1-based
        index as a string or int.
        """
        if isinstance(name, cls):
            return name
        if isinstance(name, int) or (isinstance(name, str) and name.isdigit()):
            idx = int(name)
            if 1 <= idx <= len(cls):
                return list(cls)[idx - 1]
            raise ValueError(f"map index must be in 1..{len(cls)}, got {idx}")
        key = str(name).strip().lower().replace("-", "_").replace("/", "_").replace(" ", "_")
        aliases = {"gauss": "gauss_mouse", "gaussmouse": "gauss_mouse", "mouse": "gauss_mouse"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown chaotic map {name!r}; valid maps: {valid}") from None


def _chebyshev(x, i):
    return math.cos(i * math.acos(x))


def _circle(x, i):
    return (x + CIRCLE_B - (CIRCLE_A / _TWO_PI) * math.sin(_TWO_PI * x)) % 1.0


def _gauss_mouse(x, i):
    if x == 0.0:
        return 1.0
    return (1.0 / x) % 1.0


def _iterative(x, i):
    return math.sin(ITERATIVE_A * math.pi / x)


def _logistic(x, i):
    return LOGISTIC_A * x * (1.0 - x)


def _piecewise(x, i):
    p = PIECEWISE_P
    if x < p:
        return x / p
    if x < 0.5:
        return (x - p) / (0.5 - p)
    if x < 1.0 - p:
        return (1.0 - p - x) / (0.5 - p)
    return (1.0 - x) / p


def _sine(x, i):
    return (SINE_A / 4.0) * math.sin(math.pi * x)


def _singer(x, i):
    x2 = x * x
    return SINGER_MU * (7.86 * x - 23.31 * x2 + 28.75 * x2 * x - 13.302875 * x2 * x2)


def _sinusoidal(x, i):
    return SINUSOIDAL_A * x * x * math.sin(math.pi * x)


def _tent(x, i):
    if x < TENT_BREAK:
        return x / TENT_BREAK
    return (10.0 / 3.0) * (1.0 - x)


_RECURRENCES = {
    MapKind.CHEBYSHEV: _chebyshev,
    MapKind.CIRCLE: _circle,
    MapKind.GAUSS_MOUSE: _gauss_mouse,
    MapKind.ITERATIVE: _iterative,
    MapKind.LOGISTIC: _logistic,
    MapKind.PIECEWISE: _piecewise,
    MapKind.SINE: _sine,
    MapKind.SINGER: _singer,
    MapKind.SINUSOIDAL: _sinusoidal,
    MapKind.TENT: _tent,
}


def _bulk(recurrence):
    """Generic bulk loop; maps without an inlined loop fall back to this."""

    def run(x, i, n, low, high, fix):
        out = [0.0] * n
        for k in range(n):
            try:
                v = recurrence(x, i)
            except (ZeroDivisionError, ValueError, OverflowError):
                v = math.nan
            if not low < v < high or v == x:
                v = fix(x)
            out[k] = x = v
            i += 1
        return out, x, i

    return run


def _bulk_logistic(x, i, n, low, high, fix):
    out = [0.0] * n
    for k in range(n):
        v = LOGISTIC_A * x * (1.0 - x)
        if not low < v < high or v == x:
            v = fix(x)
        out[k] = x = v
    return out, x, i + n


def _bulk_singer(x, i, n, low, high, fix):
    out = [0.0] * n
    for k in range(n):
        x2 = x * x
        v = SINGER_MU * (7.86 * x - 23.31 * x2 + 28.75 * x2 * x - 13.302875 * x2 * x2)
        if not low < v < high or v == x:
            v = fix(x)
        out[k] = x = v
    return out, x, i + n


def _bulk_sine(x, i, n, low, high, fix):
    sin, pi = math.sin, math.pi
    out = [0.0] * n
    for k in range(n):
        v = (SINE_A / 4.0) * sin(pi * x)
        if not low < v < high or v == x:
            v = fix(x)
        out[k] = x = v
    return out, x, i + n


def _bulk_sinusoidal(x, i, n, low, high, fix):
    sin, pi = math.sin, math.pi
    out = [0.0] * n
    for k in range(n):
        v = SINUSOIDAL_A * x * x * sin(pi * x)
        if not low < v < high or v == x:
            v = fix(x)
        out[k] = x = v
    return out, x, i + n


def _bulk_tent(x, i, n, low, high, fix):
    out = [0.0] * n
    for k in range(n):
        v = x / TENT_BREAK if x < TENT_BREAK else (10.0 / 3.0) * (1.0 - x)
        if not low < v < high or v == x:
            v = fix(x)
        out[k] = x = v
    return out, x, i + n


def _bulk_gauss_mouse(x, i, n, low, high, fix):
    # x stays inside (epsilon, 1 - epsilon), so 1 / x is always defined
    out = [0.0] * n
    for k in range(n):
        v = (1.0 / x) % 1.0
        if not low < v < high or v == x:
            v = fix(x)
        out[k] = x = v
    return out, x, i + n


def _bulk_circle(x, i, n, low, high, fix):
    sin = math.sin
    c = CIRCLE_A / _TWO_PI
    out = [0.0] * n
    for k in range(n):
        v = (x + CIRCLE_B - c * sin(_TWO_PI * x)) % 1.0
        if not low < v < high or v == x:
            v = fix(x)
        out[k] = x = v
    return out, x, i + n


def _bulk_chebyshev(x, i, n, low, high, fix):
    cos, acos = math.cos, math.acos
    out = [0.0] * n
    for k in range(n):
        v = cos(i * acos(x))
        if not low < v < high or v == x:
            v = fix(x)
        out[k] = x = v
        i += 1
    return out, x, i


_BULK = {
    MapKind.CHEBYSHEV: _bulk_chebyshev,
    MapKind.CIRCLE: _bulk_circle,
    MapKind.GAUSS_MOUSE: _bulk_gauss_mouse,
    MapKind.ITERATIVE: _bulk(_iterative),
    MapKind.LOGISTIC: _bulk_logistic,
    MapKind.PIECEWISE: _bulk(_piecewise),
    MapKind.SINE: _bulk_sine,
    MapKind.SINGER: _bulk_singer,
    MapKind.SINUSOIDAL: _bulk_sinusoidal,
    MapKind.TENT: _bulk_tent,
}


class ChaoticGenerator:
    """Stateful iterator over one chaotic map.

    Parameters
    ----------
    kind : MapKind or str
        Which map to iterate.
    x0 : float, default 0.7
        Initial value, inside the map's native range.
    epsilon : float, default 1e-6
        Perturbation used to escape degenerate states.

    Examples
    --------
    >>> gen = ChaoticGenerator("logistic")
    >>> round(gen.next(), 12), round(gen.next(), 12)
    (0.84, 0.5376)
    """

    def __init__(self, kind, x0=DEFAULT_SEED, epsilon=DEFAULT_EPSILON):
        self.kind = MapKind.from_name(kind)
        low, high = self.kind.native_range
        if not low < x0 < high:
            raise ValueError(f"x0={x0} outside the native range ({low}, {high}) of {self.kind.value}")
        self.x = float(x0)
        # starts at 1: a zero multiplier pins the Chebyshev map at cos(0) = 1
        self.step_index = 1
        self.epsilon = float(epsilon)
        self._low = low
        self._high = high
        self._recurrence = _RECURRENCES[self.kind]
        self._bulk = _BULK[self.kind]

    def __repr__(self):
        return f"ChaoticGenerator({self.kind.value!r}, x={self.x!r}, step_index={self.step_index})"

    def __iter__(self):
        return self

    def __next__(self):
        return self.next()

    def _perturbed(self, x):
        low, high = self._low, self._high
        width = high - low
        eps = self.epsilon
        value = x + eps
        while not low + eps < value < high - eps:
            if value >= high - eps:
                value -= width
            value += eps
        return value

    def next(self):
        """Advance the map one step and return the new value in the native range."""
        x = self.x
        try:
            value = self._recurrence(x, self.step_index)
        except (ZeroDivisionError, ValueError, OverflowError):
            value = math.nan
        eps = self.epsilon
        if not (self._low + eps < value < self._high - eps) or value == x:
            # NaN fails the range comparison as well; values within epsilon of
            # an endpoint carry no information (e.g. 1/x of a float near 1/k)
            value = self._perturbed(x)
        self.step_index += 1
        self.x = value
        return value

    def take(self, count):
        """Advance ``count`` steps and return the native-range values as a list."""
        eps = self.epsilon
        out, self.x, self.step_index = self._bulk(
            self.x, self.step_index, int(count), self._low + eps, self._high - eps, self._perturbed
        )
        return out

    def unit(self):
        """Next value mapped into (0, 1)."""
        value = self.next()
        if self._low < 0.0:
            return (value + 1.0) / 2.0
        return value

    def signed(self):
        """Next value mapped into [-1, 1]."""
        value = self.next()
        if self._low < 0.0:
            return value
        return 2.0 * value - 1.0

    def skip(self, count):
        """Discard ``count`` values."""
        self.take(count)
        return self


def chaotic_sequence(kind, count, x0=DEFAULT_SEED):
    """Return the first ``count`` native-range iterates of a map started at ``x0``."""
    return ChaoticGenerator(kind, x0=x0).take(count)
