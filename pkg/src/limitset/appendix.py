"""Self-maps of the natural numbers with unusual limit-set behaviour,
promoted to one-cell cellular automata over an infinite alphabet.

Every map is given in closed form on arbitrary-precision integers.  Limit
sets of such maps cannot be computed, so each fixture offers a bounded
probe: ``bigcap_{1 <= n <= N} f^n([0, R])`` restricted to ``[0, K]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .core import PeriodicConfig
from .errors import DomainError

KINDS = ("empty_limit", "singleton_not_pointwise", "strict_invariance", "surjective_pointwise_nilpotent")


def cantor_pair(n: int, x: int) -> int:
    return (n + x) * (n + x + 1) // 2 + x


def cantor_unpair(z: int) -> tuple:
    w = (math.isqrt(8 * z + 1) - 1) // 2
    x = z - w * (w + 1) // 2
    return w - x, x


def triangle_code(n: int, k: int) -> int:
    """Code of the element ``k`` (``2 <= k <= n``) of the ``n``-th chain."""
    if not 2 <= k <= n:
        raise DomainError(f"no element ({n}, {k})")
    m = n - 2
    return 2 + m * (m + 1) // 2 + (k - 2)


def triangle_decode(code: int) -> tuple:
    if code < 2:
        raise DomainError(f"{code} is one of the two shared points")
    z = code - 2
    m = (math.isqrt(8 * z + 1) - 1) // 2
    return m + 2, z - m * (m + 1) // 2 + 2


def _successor(n: int) -> int:
    return n + 1


def _singleton(n: int) -> int:
    return 1 if n <= 1 else n + 1


def _strict(code: int) -> int:
    # y0 = 0 and y1 = 1 are the shared bottom points of all chains
    if code <= 1:
        return 0
    n, k = triangle_decode(code)
    return triangle_code(n, k - 1) if k >= 3 else 1


def _xi(n: int, x: int) -> int:
    return cantor_pair(n, x) + 1


def _surjective(m: int) -> int:
    if m == 0:
        return 0
    n, x = cantor_unpair(m - 1)
    return _xi(n - 1, x) if n >= 1 else 0


@dataclass(frozen=True)
class UnaryFixtureMap:
    """A closed-form self-map of the natural numbers."""

    kind: str
    f: Callable

    def __call__(self, n: int) -> int:
        if n < 0:
            raise DomainError("the alphabet is the natural numbers")
        return self.f(n)

    def iterate(self, n: int, k: int) -> int:
        for _ in range(k):
            n = self.f(n)
        return n

    def probe(self, N: int, R: int, K: int) -> frozenset:
        """``bigcap_{1 <= n <= N} f^n([0, R])`` restricted to ``[0, K]``."""
        current = set(range(R + 1))
        result = None
        for _ in range(N):
            current = {self.f(v) for v in current}
            inside = {v for v in current if v <= K}
            result = inside if result is None else result & inside
        return frozenset(result if result is not None else range(min(R, K) + 1))

    def apply(self, x: PeriodicConfig) -> PeriodicConfig:
        """The one-cell automaton ``tau = prod_g f`` on a periodic configuration."""
        return PeriodicConfig(tuple(self.f(v) for v in x.values))

    def preimage(self, m: int):
        """An explicit preimage of ``m`` (only for the surjective fixture)."""
        if self.kind != "surjective_pointwise_nilpotent":
            raise DomainError("explicit preimages are only provided for the surjective fixture")
        if m == 0:
            return 0
        n, x = cantor_unpair(m - 1)
        return _xi(n + 1, x)

    def steps_to(self, n: int, terminal: int, limit: int) -> int | None:
        """Number of steps for the orbit of ``n`` to reach ``terminal``."""
        for k in range(limit + 1):
            if n == terminal:
                return k
            n = self.f(n)
        return None


_MAPS = {
    "empty_limit": _successor,
    "singleton_not_pointwise": _singleton,
    "strict_invariance": _strict,
    "surjective_pointwise_nilpotent": _surjective,
}


def appendix_fixture(kind: str) -> UnaryFixtureMap:
    """One of the four fixtures listed in :data:`KINDS`.

    Examples
    --------
    >>> f = appendix_fixture("singleton_not_pointwise")
    >>> sorted(f.probe(N=102, R=200, K=100))
    [1]
    """
    if kind not in _MAPS:
        raise DomainError(f"unknown fixture {kind!r}; expected one of {', '.join(KINDS)}")
    return UnaryFixtureMap(kind, _MAPS[kind])
