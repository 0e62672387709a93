"""Groups, windows, alphabets, patterns and finitely presented configurations.

Everything here is immutable except the value caches of
:class:`GeneratedConfig`, which are guarded by a lock and only ever
memoize deterministic values.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Sequence

from .errors import DomainError, RangeError

# --------------------------------------------------------------------------
# Groups and windows
# --------------------------------------------------------------------------


class Window:
    """A finite subset of the group, with a deterministic element order."""

    def elements(self) -> tuple:
        raise NotImplementedError

    def __iter__(self):
        return iter(self.elements())

    def __len__(self):
        return len(self.elements())

    def __contains__(self, g):
        raise NotImplementedError

    def translate(self, g) -> "Window":
        raise NotImplementedError

    def issubset(self, other: "Window") -> bool:
        return all(g in other for g in self)


@dataclass(frozen=True, order=True)
class Interval(Window):
    """The integer interval ``[lo, hi]``, the only window shape used over Z."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.hi < self.lo:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")

    def elements(self):
        return tuple(range(self.lo, self.hi + 1))

    def __iter__(self):
        return iter(range(self.lo, self.hi + 1))

    def __len__(self):
        return self.hi - self.lo + 1

    @property
    def width(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, g):
        return isinstance(g, int) and self.lo <= g <= self.hi

    def translate(self, g: int) -> "Interval":
        return Interval(self.lo + g, self.hi + g)

    def issubset(self, other: Window) -> bool:
        if isinstance(other, Interval):
            return other.lo <= self.lo and self.hi <= other.hi
        return super().issubset(other)

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"


@dataclass(frozen=True)
class Box(Window):
    """A product of intervals in Z^d, ordered lexicographically."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise DomainError("box corners have different dimensions")
        if any(h < l for l, h in zip(self.lo, self.hi)):
            raise DomainError(f"empty box {self.lo}..{self.hi}")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def elements(self):
        ranges = [range(l, h + 1) for l, h in zip(self.lo, self.hi)]
        return tuple(itertools.product(*ranges))

    def __len__(self):
        return math.prod(h - l + 1 for l, h in zip(self.lo, self.hi))

    def __contains__(self, g):
        return (
            isinstance(g, tuple)
            and len(g) == self.dim
            and all(l <= x <= h for l, x, h in zip(self.lo, g, self.hi))
        )

    def translate(self, g: tuple) -> "Box":
        return Box(
            tuple(l + x for l, x in zip(self.lo, g)),
            tuple(h + x for h, x in zip(self.hi, g)),
        )

    def issubset(self, other: Window) -> bool:
        if isinstance(other, Box):
            return all(
                ol <= l and h <= oh
                for l, h, ol, oh in zip(self.lo, self.hi, other.lo, other.hi)
            )
        return super().issubset(other)


@dataclass(frozen=True)
class BallGroup:
    """Z or Z^d together with a symmetric generating set containing 0.

    Only cube-shaped generating sets ``{-r..r}^d`` are supported; with them
    every ball ``M^n`` is again an interval (or box), which keeps all index
    arithmetic exact.
    """

    dim: int = 1
    radius: int = 1

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError("dimension must be positive")
        if self.radius < 1:
            raise DomainError("generating radius must be positive")

    @classmethod
    def Z(cls, radius: int = 1) -> "BallGroup":
        return cls(1, radius)

    @classmethod
    def Zd(cls, d: int, radius: int = 1) -> "BallGroup":
        return cls(d, radius)

    @property
    def identity(self):
        return 0 if self.dim == 1 else (0,) * self.dim

    @property
    def generators(self) -> tuple:
        return ball(self, 1).elements()

    def inverse(self, g):
        return -g if self.dim == 1 else tuple(-x for x in g)


def ball(group: BallGroup, n: int) -> Window:
    """Return the ball ``M^n``; ``ball(group, 0)`` is the identity alone."""
    if n < 0:
        raise DomainError("ball radius must be nonnegative")
    r = n * group.radius
    if group.dim == 1:
        return Interval(-r, r)
    return Box((-r,) * group.dim, (r,) * group.dim)


# --------------------------------------------------------------------------
# Alphabets and patterns
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteAlphabet:
    """Ordered symbol names; symbol ``k`` is the name at position ``k``."""

    symbols: tuple

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(str(s) for s in self.symbols))
        if not self.symbols:
            raise DomainError("an alphabet needs at least one symbol")
        if len(set(self.symbols)) != len(self.symbols):
            raise DomainError(f"duplicate symbol names in {self.symbols}")
        for s in self.symbols:
            if not s or any(c.isspace() for c in s) or s in ("->",):
                raise DomainError(f"invalid symbol name {s!r}")

    @classmethod
    def of_size(cls, n: int) -> "FiniteAlphabet":
        return cls(tuple(str(k) for k in range(n)))

    def __len__(self):
        return len(self.symbols)

    @property
    def ids(self) -> range:
        return range(len(self.symbols))

    def index(self, name) -> int:
        try:
            return self.symbols.index(str(name))
        except ValueError:
            raise DomainError(f"unknown symbol {name!r}") from None

    def name(self, k: int) -> str:
        return self.symbols[k]

    def encode(self, names: Sequence) -> tuple:
        return tuple(self.index(s) for s in names)

    def decode(self, word: Sequence[int]) -> tuple:
        return tuple(self.symbols[k] for k in word)


BINARY = FiniteAlphabet(("0", "1"))


@dataclass(frozen=True)
class Pattern:
    """A total assignment of values to the elements of a window."""

    window: Window
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != len(self.window):
            raise DomainError(
                f"pattern has {len(self.values)} values for a window of "
                f"size {len(self.window)}"
            )

    @classmethod
    def word(cls, values: Sequence, start: int = 0) -> "Pattern":
        return cls(Interval(start, start + len(values) - 1), tuple(values))

    def __getitem__(self, g):
        w = self.window
        if isinstance(w, Interval):
            if g not in w:
                raise DomainError(f"{g} is outside {w}")
            return self.values[g - w.lo]
        try:
            return self.values[w.elements().index(g)]
        except ValueError:
            raise DomainError(f"{g} is outside the window") from None

    def items(self) -> Iterator:
        return zip(self.window.elements(), self.values)


def restrict(pattern: Pattern, sub: Window) -> Pattern:
    """Restrict ``pattern`` to ``sub``, which must lie inside its window."""
    if not sub.issubset(pattern.window):
        raise DomainError(f"{sub} is not contained in {pattern.window}")
    w = pattern.window
    if isinstance(w, Interval) and isinstance(sub, Interval):
        return Pattern(sub, pattern.values[sub.lo - w.lo : sub.hi - w.lo + 1])
    lookup = dict(pattern.items())
    return Pattern(sub, tuple(lookup[g] for g in sub.elements()))


def translate(g, pattern: Pattern) -> Pattern:
    """Translate by ``g``: the result takes value ``pattern(h - g)`` at ``h``."""
    return Pattern(pattern.window.translate(g), pattern.values)


# --------------------------------------------------------------------------
# Configurations
# --------------------------------------------------------------------------


def _minimal_period(values: tuple) -> int:
    p = len(values)
    for d in range(1, p + 1):
        if p % d == 0 and values == values[:d] * (p // d):
            return d
    return p


@dataclass(frozen=True)
class PeriodicConfig:
    """A configuration of Z fixed by translation by ``period``.

    ``values`` is stored at its minimal period, so equal configurations
    compare and hash equal regardless of how they were written down.
    """

    values: tuple

    def __post_init__(self):
        vals = tuple(self.values)
        if not vals:
            raise DomainError("a periodic configuration needs a nonempty period")
        object.__setattr__(self, "values", vals[: _minimal_period(vals)])

    @property
    def period(self) -> int:
        return len(self.values)

    def __call__(self, n: int):
        return self.values[n % len(self.values)]

    def evaluate(self, n: int):
        return self(n)

    def shift(self, g: int = 1) -> "PeriodicConfig":
        """The translate ``g x``, i.e. ``n -> x(n - g)``."""
        p = len(self.values)
        return PeriodicConfig(tuple(self.values[(n - g) % p] for n in range(p)))

    def orbit(self) -> frozenset:
        return frozenset(self.shift(g) for g in range(self.period))

    def block(self, lo: int, hi: int) -> tuple:
        return tuple(self(n) for n in range(lo, hi + 1))

    def is_constant(self) -> bool:
        return len(self.values) == 1


# Tail descriptors for GeneratedConfig.  Each tail answers for the indices
# strictly left of, or strictly right of, the explicit base block.


@dataclass(frozen=True)
class ConstantTail:
    value: Any


@dataclass(frozen=True)
class PeriodicTail:
    """``x(n) = values[n mod len(values)]`` on the tail."""

    values: tuple


@dataclass(frozen=True)
class ShiftedTail:
    """``x(n) = source(n + offset)`` on the tail."""

    source: Any
    offset: int = 0


@dataclass(frozen=True)
class RecurrenceTail:
    """Right tail defined by a finite-lookback recurrence.

    ``step(n, prev, inputs)`` returns ``x(n)`` from ``prev = (x(n-k), ...,
    x(n-1))`` and the tuple of exogenous configurations ``inputs``.
    """

    lookback: int
    step: Callable
    inputs: tuple = ()


def _fresh(obj, memo):
    if isinstance(obj, GeneratedConfig):
        return obj.fresh(memo)
    return obj


def _fresh_tail(tail, memo):
    if isinstance(tail, ShiftedTail):
        return ShiftedTail(_fresh(tail.source, memo), tail.offset)
    if isinstance(tail, RecurrenceTail):
        return RecurrenceTail(
            tail.lookback, tail.step, tuple(_fresh(c, memo) for c in tail.inputs)
        )
    return tail


class GeneratedConfig:
    """A configuration of Z given by a base block and two tail rules.

    Values at indices ``start .. start + len(values) - 1`` are explicit; the
    left tail covers smaller indices and the right tail larger ones.  A
    recurrence is only allowed on the right.  Values produced by a recurrence
    are memoized under a lock, so concurrent evaluation is safe and every
    index always yields the same value.
    """

    def __init__(self, start: int, values: Sequence, left, right, valid=(None, None), name=""):
        if isinstance(left, RecurrenceTail):
            raise DomainError("recurrences are only supported on the right tail")
        self.start = start
        self.values = tuple(values)
        self.left = left
        self.right = right
        self.valid = valid
        self.name = name
        self._cache: dict[int, Any] = {}
        self._lock = threading.Lock()

    @property
    def end(self) -> int:
        """Last index of the explicit block (``start - 1`` when it is empty)."""
        return self.start + len(self.values) - 1

    @classmethod
    def constant(cls, value, name="") -> "GeneratedConfig":
        return cls(0, (), ConstantTail(value), ConstantTail(value), name=name)

    @classmethod
    def from_pattern(cls, pattern: Pattern, outside=0, name="") -> "GeneratedConfig":
        w = pattern.window
        if not isinstance(w, Interval):
            raise DomainError("generated configurations live on Z")
        return cls(w.lo, pattern.values, ConstantTail(outside), ConstantTail(outside), name=name)

    def fresh(self, memo=None) -> "GeneratedConfig":
        """An equivalent configuration sharing no cached values with this one."""
        memo = {} if memo is None else memo
        if id(self) in memo:
            return memo[id(self)]
        clone = GeneratedConfig.__new__(GeneratedConfig)
        memo[id(self)] = clone
        clone.__init__(
            self.start,
            self.values,
            _fresh_tail(self.left, memo),
            _fresh_tail(self.right, memo),
            self.valid,
            self.name,
        )
        return clone

    def _check_range(self, n):
        lo, hi = self.valid
        if (lo is not None and n < lo) or (hi is not None and n > hi):
            raise RangeError(f"index {n} outside the validity range {self.valid} of {self.name or 'configuration'}")

    def __call__(self, n: int):
        self._check_range(n)
        return self._value(n)

    evaluate = __call__

    def block(self, lo: int, hi: int) -> tuple:
        return tuple(self(n) for n in range(lo, hi + 1))

    def _value(self, n: int):
        if self.start <= n <= self.end:
            return self.values[n - self.start]
        tail = self.left if n < self.start else self.right
        if isinstance(tail, ConstantTail):
            return tail.value
        if isinstance(tail, PeriodicTail):
            return tail.values[n % len(tail.values)]
        if isinstance(tail, ShiftedTail):
            return tail.source(n + tail.offset)
        if isinstance(tail, RecurrenceTail):
            return self._recur(n, tail)
        raise DomainError(f"unknown tail descriptor {tail!r}")

    def _recur(self, n: int, tail: RecurrenceTail):
        cached = self._cache.get(n)
        if cached is not None or n in self._cache:
            return cached
        with self._lock:
            first = self.end + 1
            k = first
            while k in self._cache and k < n:
                k += 1
            # values below ``first`` come from the base block or the left tail
            window = [self._value(j) if j < first else self._cache[j] for j in range(k - tail.lookback, k)]
            while k <= n:
                v = tail.step(k, tuple(window), tail.inputs)
                self._cache[k] = v
                window.append(v)
                del window[0]
                k += 1
            return self._cache[n]

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<GeneratedConfig{label} base=[{self.start},{self.end}]>"


def evaluate(config, n: int):
    """Value of a periodic or generated configuration at index ``n``."""
    return config(n)
