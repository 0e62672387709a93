"""The space-time inverse system of a subshift and a cellular automaton.

Grid cell ``(i, j)`` is the window language of the subshift on the ball of
radius ``r (i + j)``.  The horizontal maps ``p`` restrict to a smaller ball
and the vertical maps ``q`` apply the automaton once, which shrinks the
ball by one step because the memory lies in the ball of radius ``r``.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Sequence

from .automata import CellularAutomaton, _apply_word, apply_to_periodic, iterate_word
from .core import BallGroup, Interval, Pattern, PeriodicConfig, ball
from .errors import DomainError, ResourceError
from .shifts import (
    PATTERN_CAP,
    SoficPresentation,
    Sft,
    WindowLanguage,
    _indexed,
    accepts,
    contains_periodic,
    local_words,
    periodic_points,
    presentation,
    window_language,
)


def _radius_for(ca: CellularAutomaton, sigma) -> int:
    r = max(1, -ca.memory[0], ca.memory[-1])
    if isinstance(sigma, Sft):
        # translate D so that it sits as centrally as possible in [-r, r]
        w = sigma.window.width
        r = max(r, w // 2)
    return r


class SpaceTimeSystem:
    """Lazily computed grid ``Sigma_ij`` with the maps ``p`` and ``q``."""

    def __init__(self, sigma, ca: CellularAutomaton, radius: int | None = None, cap: int = PATTERN_CAP):
        pres = presentation(sigma)
        if pres.alphabet != ca.source or ca.source != ca.target:
            raise DomainError("the automaton must act on the alphabet of the subshift")
        need = _radius_for(ca, sigma)
        if radius is None:
            radius = need
        elif radius < need:
            raise DomainError(f"radius {radius} cannot hold the memory and the defining window (need {need})")
        self.sigma = sigma
        self.presentation = pres
        self.ca = ca
        self.radius = radius
        self.group = BallGroup.Z(radius)
        self.cap = cap
        self._cells: dict[int, WindowLanguage] = {}
        self._lock = threading.Lock()

    def window(self, i: int, j: int) -> Interval:
        if i < 0 or j < 0:
            raise DomainError("grid indices are nonnegative")
        return ball(self.group, i + j)

    def cell(self, i: int, j: int) -> WindowLanguage:
        """``Sigma_ij``; cached by ``i + j`` since it depends on nothing else."""
        s = i + j
        w = self.window(i, j)
        got = self._cells.get(s)
        if got is None:
            got = WindowLanguage(w, frozenset(_cap_words(self.sigma, w.width, self.cap)))
            with self._lock:
                got = self._cells.setdefault(s, got)
        return got

    def p(self, i: int, j: int, sigma: Sequence[int]) -> tuple:
        """Restriction from the ball of ``(i+1, j)`` to that of ``(i, j)``."""
        return self.p_many(i + 1, i, j, sigma)

    def p_many(self, k: int, i: int, j: int, sigma: Sequence[int]) -> tuple:
        """Restriction from the ball of ``(k, j)`` to that of ``(i, j)``."""
        if k < i:
            raise DomainError("p_ijk needs k >= i")
        cut = self.radius * (k - i)
        return tuple(sigma[cut : len(sigma) - cut])

    def q(self, i: int, j: int, sigma: Sequence[int]) -> tuple:
        """Apply the automaton to a pattern on the ball of ``(i, j+1)`` and
        restrict the result to the ball of ``(i, j)``."""
        out = _apply_word(self.ca, sigma)
        # output window is [-R - lo, R - hi] with R the input radius
        R = self.radius * (i + j + 1)
        target = self.radius * (i + j)
        start = -R - self.ca.memory[0]
        return tuple(out[-target - start : target - start + 1])

    def q_power(self, i: int, j: int, sigma: Sequence[int]) -> tuple:
        """``q_i0 o ... o q_{i,j-1}`` applied to a pattern of cell ``(i, j)``."""
        for jj in range(j - 1, -1, -1):
            sigma = self.q(i, jj, sigma)
        return sigma


def _cap_words(sigma, length: int, cap: int) -> list:
    from .shifts import language_words

    return language_words(sigma, length, cap)


def build(sigma, ca: CellularAutomaton, radius: int | None = None, cap: int = PATTERN_CAP) -> SpaceTimeSystem:
    """Space-time system of ``(sigma, ca)``; cells are computed on demand."""
    return SpaceTimeSystem(sigma, ca, radius, cap)


@dataclass(frozen=True)
class CommutationResult:
    """``q_ij o p_{i,j+1} = p_ij o q_{i+1,j}`` checked on ``Sigma_{i+1,j+1}``.

    ``invariant`` records whether ``q`` maps every checked pattern into
    the grid (it can fail when the automaton does not preserve the
    subshift; the commutation itself is an identity of pattern maps).
    """

    ok: bool
    checked: int
    invariant: bool
    counterexample: tuple | None = None

    def __bool__(self):
        return self.ok


def check_commutation(sys: SpaceTimeSystem, i: int, j: int) -> CommutationResult:
    top = sys.cell(i + 1, j + 1)
    target = sys.cell(i + 1, j)
    invariant = True
    for sigma in top.words:
        left = sys.q(i, j, sys.p(i, j + 1, sigma))
        down = sys.q(i + 1, j, sigma)
        right = sys.p(i, j, down)
        if down not in target.words:
            invariant = False
        if left != right:
            return CommutationResult(False, len(top), invariant, sigma)
    return CommutationResult(True, len(top), invariant)


@dataclass(frozen=True)
class OuterIntersection:
    """``bigcap_{i <= k <= K} p_ijk(A_kj)`` with the sizes seen along the way."""

    language: WindowLanguage
    sizes: tuple
    stabilized_at: int | None

    def __len__(self):
        return len(self.language)


def outer_intersection(sys: SpaceTimeSystem, i: int, j: int, K: int) -> OuterIntersection:
    """Intersect the projections of the locally admissible sets up to ``K``.

    ``stabilized_at`` is the first ``k`` from which the intersection no
    longer changed within the computed range.
    """
    if not isinstance(sys.sigma, Sft):
        raise DomainError("outer approximations need a subshift of finite type")
    if K < i:
        raise DomainError("depth budget K must be at least i")
    window = sys.window(i, j)
    current = None
    sizes = []
    stable_from = None
    for k in range(i, K + 1):
        big = sys.window(k, j)
        proj = {sys.p_many(k, i, j, w) for w in local_words(sys.sigma, big.width, sys.cap)}
        new = proj if current is None else current & proj
        if current is None or new != current:
            stable_from = k
        current = new
        sizes.append(len(current))
    return OuterIntersection(WindowLanguage(window, frozenset(current)), tuple(sizes), stable_from)


# --------------------------------------------------------------------------
# Backward orbits
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BackwardOrbit:
    """``x_0, ..., x_n`` with ``tau(x_{k+1}) = x_k``.

    Entries are periodic configurations, or patterns whose windows widen
    by the memory hull at every step.
    """

    configurations: tuple

    @property
    def depth(self) -> int:
        return len(self.configurations) - 1

    def replay(self, ca: CellularAutomaton, sigma=None) -> bool:
        xs = self.configurations
        for a, b in zip(xs, xs[1:]):
            if isinstance(a, PeriodicConfig):
                if apply_to_periodic(ca, b) != a:
                    return False
                if sigma is not None and not contains_periodic(sigma, b):
                    return False
            else:
                if _apply_word(ca, b.values) != a.values:
                    return False
                if sigma is not None and not accepts(sigma, b.values):
                    return False
        return True


@dataclass(frozen=True)
class NotFound:
    """No backward orbit of the requested depth exists at all.

    Certificate: every pattern of ``sigma`` on the widened window
    ``window`` maps under ``tau^level`` to something other than the target
    block; since any true backward orbit restricts to such a pattern, none
    exists.
    """

    target: tuple
    window: Interval
    level: int
    checked: int

    def replay(self, ca: CellularAutomaton, sigma) -> bool:
        words = _cap_words(sigma, self.window.width, PATTERN_CAP)
        return all(iterate_word(ca, w, self.level) != self.target for w in words)


@dataclass(frozen=True)
class Exhausted:
    """The budgets were used up without a decision."""

    reason: str
    budgets: dict = field(default_factory=dict)


def _periodic_target(target):
    return isinstance(target, PeriodicConfig)


def _periodic_search(sys: SpaceTimeSystem, target: PeriodicConfig, n: int, budget: int):
    ca = sys.ca
    for q in range(target.period, budget + 1, target.period):
        points = periodic_points(sys.sigma, q, sys.cap)
        image = {x: apply_to_periodic(ca, x) for x in points}
        preimages: dict = {}
        for x, y in image.items():
            preimages.setdefault(y, []).append(x)
        # depth-first search for a chain of length n ending at the target
        stack = [(target,)]
        while stack:
            chain = stack.pop()
            if len(chain) == n + 1:
                return BackwardOrbit(chain)
            for y in reversed(preimages.get(chain[-1], [])):
                stack.append(chain + (y,))
    return None


def _preimage_words(ca: CellularAutomaton, graph, alive: int, word: Sequence[int], cap: int):
    """Words ``u`` of the subshift with ``tau(u) = word``, via backtracking
    over the rule and the set of reachable presentation vertices."""
    w = ca.width
    k = len(ca.source)
    out = []
    stack = [((), alive)]
    L = len(word) + w - 1
    while stack:
        u, mask = stack.pop()
        if len(u) == L:
            out.append(u)
            if len(out) > cap:
                raise ResourceError(f"more than {cap} preimage patterns")
            continue
        for a in range(k - 1, -1, -1):
            nu = u + (a,)
            if len(nu) >= w and ca.local_on_hull(nu[-w:]) != word[len(nu) - w]:
                continue
            nmask = graph.step(mask, a)
            if not nmask:
                continue
            stack.append((nu, nmask))
    return out


def _pattern_ladder(sys: SpaceTimeSystem, target: Pattern, n: int, cap: int):
    ca = sys.ca
    pres = sys.presentation
    graph = _indexed(pres)
    alive = graph.essential_mask()
    levels = [{target.values: None}]
    lo = target.window.lo
    for level in range(1, n + 1):
        nxt = {}
        for v in levels[-1]:
            for u in _preimage_words(ca, graph, alive, v, cap):
                nxt.setdefault(u, v)
            if len(nxt) > cap:
                raise ResourceError(f"pattern ladder exceeds {cap} entries at level {level}")
        if not nxt:
            window = Interval(lo + level * ca.memory[0], target.window.hi + level * ca.memory[-1])
            return NotFound(target.values, window, level, len(levels[-1]))
        levels.append(nxt)
    # read one ladder back from the deepest level
    u = min(levels[-1])
    chain = [u]
    for level in range(n, 0, -1):
        u = levels[level][u]
        chain.append(u)
    chain.reverse()
    patterns = tuple(
        Pattern(Interval(lo + k * ca.memory[0], lo + k * ca.memory[0] + len(word) - 1), word) for k, word in enumerate(chain)
    )
    return BackwardOrbit(patterns)


def backward_orbit_search(sys: SpaceTimeSystem, target, n: int, budget: int, cap: int = 1 << 16, cancel=None):
    """Search for ``x_0 = target`` together with ``n`` successive preimages.

    Spatially periodic candidates of period at most ``budget`` are tried
    first and give genuine backward orbits.  Failing that, pattern ladders
    on widening windows are explored: if none exists, no backward orbit of
    depth ``n`` exists at all and :class:`NotFound` carries that
    certificate; if one exists, the answer is :class:`Exhausted`.
    """
    if n < 0:
        raise DomainError("depth must be nonnegative")
    if _periodic_target(target):
        if not contains_periodic(sys.sigma, target):
            raise DomainError("the target configuration is not in the subshift")
        if cancel is not None and cancel.is_set():
            return Exhausted("cancelled")
        found = _periodic_search(sys, target, n, budget)
        if found is not None:
            return found
        # longer blocks of the target can expose obstructions that a
        # single period cannot
        p = target.period
        longest = max(budget, 2 * sys.ca.width + 1, p)
        patterns = [Pattern.word(target.block(0, L - 1)) for L in range(p, longest + p, p)]
    else:
        patterns = [target]
        if not accepts(sys.sigma, target.values):
            raise DomainError("the target pattern is not in the window language of the subshift")
    ladder = None
    for pattern in patterns:
        if cancel is not None and cancel.is_set():
            return Exhausted("cancelled")
        try:
            ladder = _pattern_ladder(sys, pattern, n, cap)
        except ResourceError as exc:
            return Exhausted(str(exc), {"period": budget, "cap": cap})
        if isinstance(ladder, NotFound):
            return ladder
    if not _periodic_target(target):
        return ladder
    return Exhausted(
        f"pattern ladders exist but no periodic preimage chain of period <= {budget}",
        {"period": budget, "cap": cap},
    )


# --------------------------------------------------------------------------
# Starred grid
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class StarredGrid:
    """Sizes of ``Sigma*_ij`` for ``i <= i_max``, ``j <= j_max``.

    ``first_empty`` is the empty cell with the smallest ``j`` (then ``i``)
    with ``j >= 1``; its existence certifies ``tau^j`` is constant equal to
    ``terminal`` on the subshift.
    """

    terminal: int
    sizes: dict
    first_empty: tuple | None

    def is_empty(self, i: int, j: int) -> bool:
        return self.sizes[(i, j)] == 0


def starred_cell(sys: SpaceTimeSystem, t: int, i: int, j: int) -> WindowLanguage:
    """``{sigma in Sigma_ij : (q o ... o q)(sigma)(0) != t}``."""
    cell = sys.cell(i, j)
    r = sys.radius * i
    keep = frozenset(s for s in cell.words if sys.q_power(i, j, s)[r] != t)
    return WindowLanguage(cell.window, keep)


def starred_grid(sys: SpaceTimeSystem, t: int, i_max: int, j_max: int) -> StarredGrid:
    if not 0 <= t < len(sys.ca.source):
        raise DomainError(f"terminal symbol {t} is not in the alphabet")
    sizes = {}
    first = None
    for j in range(j_max + 1):
        for i in range(i_max + 1):
            n = len(starred_cell(sys, t, i, j))
            sizes[(i, j)] = n
            if n == 0 and j >= 1 and first is None:
                first = (i, j)
    return StarredGrid(t, sizes, first)
