"""Image chains, limit sets, periodic and chain-recurrent points, and the
three-valued nilpotency engine."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from .automata import CellularAutomaton, apply_to_periodic, compose, image_presentation, iterate_word
from .core import Interval, PeriodicConfig
from .errors import DomainError, ResourceError
from .shifts import (
    PATTERN_CAP,
    Sft,
    STATE_CAP,
    MixingResult,
    SoficPresentation,
    accepts,
    canonical_presentation,
    check_mixing,
    contains_periodic,
    equal_subshifts,
    is_empty,
    is_subshift,
    language_words,
    periodic_points,
    presentation,
    window_language,
)

# --------------------------------------------------------------------------
# Image chains and limit sets
# --------------------------------------------------------------------------


@dataclass
class ImageChain:
    """Canonical presentations of ``tau^n(X)`` for ``n = 0 .. len - 1``.

    ``stabilized_at`` is the first ``n0`` with ``tau^{n0+1}(X) =
    tau^{n0}(X)``, or ``None`` when the budget ran out first.
    """

    presentations: list
    stabilized_at: int | None

    @property
    def limit(self) -> SoficPresentation | None:
        if self.stabilized_at is None:
            return None
        return self.presentations[self.stabilized_at]


def _check_invariant(X, ca: CellularAutomaton):
    pres = presentation(X)
    if pres.alphabet != ca.source or ca.source != ca.target:
        raise DomainError("the automaton must act on the alphabet of the subshift")
    return pres


def is_invariant(X, ca: CellularAutomaton) -> bool:
    """Whether ``tau(X)`` is contained in ``X``."""
    pres = _check_invariant(X, ca)
    if isinstance(X, Sft) and len(X.allowed) == len(X.alphabet) ** len(X.window):
        return True
    return is_subshift(image_presentation(ca, pres), pres)


def _require_invariant(X, ca):
    if not is_invariant(X, ca):
        raise DomainError("the automaton does not map the subshift into itself")


def image_chain_steps(X, ca: CellularAutomaton, N: int, state_cap: int = STATE_CAP):
    """Generator form of :func:`image_chain`: yields the chain after every
    step so that callers can interleave it with other work."""
    pres = _check_invariant(X, ca)
    chain = ImageChain([canonical_presentation(pres, state_cap)], None)
    for n in range(1, N + 1):
        prev = chain.presentations[-1]
        try:
            img = canonical_presentation(image_presentation(ca, prev), state_cap)
        except ResourceError as exc:
            raise ResourceError(f"image chain step {n}: {exc}") from None
        if img == prev:
            chain.stabilized_at = n - 1
            yield chain
            return
        if not is_subshift(img, prev, state_cap):
            if n == 1:
                raise DomainError("the automaton does not map the subshift into itself")
            raise ResourceError(f"image chain failed to descend at step {n}")  # impossible for invariant X
        chain.presentations.append(img)
        yield chain


def image_chain(X, ca: CellularAutomaton, N: int, state_cap: int = STATE_CAP) -> ImageChain:
    """Iterated images ``X, tau(X), tau^2(X), ...`` up to ``N`` steps,
    stopping as soon as two consecutive images coincide."""
    chain = ImageChain([canonical_presentation(_check_invariant(X, ca), state_cap)], None)
    for chain in image_chain_steps(X, ca, N, state_cap):
        pass
    return chain


@dataclass(frozen=True)
class Finiteness:
    """Structural finiteness decision for a right-resolving essential graph.

    ``orbits`` lists one periodic configuration per cycle when finite.
    """

    finite: bool
    reason: str
    orbits: tuple = ()

    def members(self) -> frozenset:
        out = set()
        for x in self.orbits:
            out |= x.orbit()
        return frozenset(out)


def finiteness(X) -> Finiteness:
    """The subshift is finite iff its canonical presentation is a disjoint
    union of simple cycles."""
    canon = canonical_presentation(X)
    if not canon.vertices:
        return Finiteness(True, "empty")
    g = canon.to_networkx()
    comps = list(nx.strongly_connected_components(g))
    where = {v: i for i, c in enumerate(comps) for v in c}
    orbits = []
    for comp in comps:
        inner = [(u, v, a) for u, v, a in canon.edges if u in comp and v in comp]
        if len(inner) != len(comp):
            return Finiteness(False, "branching component")
    for u, v, _ in canon.edges:
        if where[u] != where[v]:
            return Finiteness(False, "path between distinct cycles")
    for comp in sorted(comps, key=min):
        succ = {u: (v, a) for u, v, a in canon.edges if u in comp}
        start = min(comp)
        word, u = [], start
        while True:
            v, a = succ[u]
            word.append(a)
            u = v
            if u == start:
                break
        orbits.append(PeriodicConfig(tuple(word)))
    return Finiteness(True, "disjoint cycles", tuple(orbits))


@dataclass
class LimitSetReport:
    """Result of :func:`limit_set`.

    ``status`` is ``"stabilized"`` (``omega`` is the limit set and
    ``invariant`` records the check ``tau(omega) = omega``) or
    ``"truncated"`` (``languages`` holds the window languages of
    ``tau^N(X)``, an outer approximation).
    """

    status: str
    steps: int
    omega: SoficPresentation | None = None
    invariant: bool | None = None
    values: tuple | None = None
    finite: bool | None = None
    periodic: bool | None = None
    members: tuple | None = None
    finiteness_reason: str | None = None
    languages: dict = field(default_factory=dict)

    @property
    def singleton(self) -> bool | None:
        if self.members is None:
            return None if self.finite is None else False
        return len(self.members) == 1


def limit_set(X, ca: CellularAutomaton, N: int, window: int = 4, state_cap: int = STATE_CAP) -> LimitSetReport:
    chain = image_chain(X, ca, N, state_cap)
    if chain.stabilized_at is None:
        last = chain.presentations[-1]
        langs = {L: window_language(last, L) for L in range(1, window + 1)}
        return LimitSetReport("truncated", len(chain.presentations) - 1, languages=langs)
    omega = chain.limit
    invariant = equal_subshifts(image_presentation(ca, omega), omega, state_cap)
    values = tuple(sorted({a for _, _, a in omega.edges}))
    fin = finiteness(omega)
    members = None
    if fin.finite:
        members = tuple(sorted(fin.members(), key=lambda x: (x.period, x.values)))
    return LimitSetReport(
        "stabilized",
        chain.stabilized_at,
        omega=omega,
        invariant=invariant,
        values=values,
        finite=fin.finite,
        periodic=fin.finite,
        members=members,
        finiteness_reason=fin.reason,
    )


# --------------------------------------------------------------------------
# Periodic points and chain recurrence
# --------------------------------------------------------------------------


def eventual_cycles(points, f) -> dict:
    """Map each periodic point of the finite self-map ``f`` on ``points`` to
    its least period."""
    image = {x: f(x) for x in points}
    cycles = {}
    done = set()
    for x in points:
        path = {}
        y = x
        while y not in path and y not in done:
            path[y] = len(path)
            y = image[y]
        if y in path and y not in done:
            cycle = []
            z = y
            while True:
                cycle.append(z)
                z = image[z]
                if z == y:
                    break
            for z in cycle:
                cycles[z] = len(cycle)
        done.update(path)
    return cycles


def omega_in_fixed_points(X, ca: CellularAutomaton, p: int) -> frozenset:
    """Limit set of ``tau`` restricted to ``X`` intersected with ``Fix(pZ)``:
    the union of the eventual cycles of that finite map."""
    if p < 1:
        raise DomainError("period must be positive")
    _require_invariant(X, ca)
    points = periodic_points(X, p)
    return frozenset(eventual_cycles(points, lambda x: apply_to_periodic(ca, x)))


@dataclass(frozen=True)
class Chain:
    """A closed chain ``x = u_0, u_1, ..., u_k = x`` with ``tau(u_i)`` agreeing
    with ``u_{i+1}`` on ``window``."""

    configurations: tuple
    window: Interval

    @property
    def length(self) -> int:
        return len(self.configurations) - 1

    def replay(self, ca: CellularAutomaton) -> bool:
        xs = self.configurations
        if len(xs) < 2 or xs[0] != xs[-1]:
            return False
        lo, hi = self.window.lo, self.window.hi
        return all(apply_to_periodic(ca, u).block(lo, hi) == v.block(lo, hi) for u, v in zip(xs, xs[1:]))


@dataclass(frozen=True)
class ChainExhausted:
    reason: str
    budget: int


def chain_recurrence_certificate(ca: CellularAutomaton, x: PeriodicConfig, F: Interval, budget: int, X=None):
    """Look for an ``F``-chain from ``x`` back to ``x`` among spatially
    periodic configurations of period at most ``budget``."""
    if X is not None and not contains_periodic(X, x):
        raise DomainError("the configuration is not in the subshift")
    if X is None:
        X = Sft.full(ca.source)
    lo, hi = F.lo, F.hi
    for q in range(x.period, budget + 1, x.period):
        nodes = periodic_points(X, q)
        by_block = {}
        for v in nodes:
            by_block.setdefault(v.block(lo, hi), []).append(v)
        parent = {x: None}
        queue = deque([x])
        while queue:
            u = queue.popleft()
            for v in by_block.get(apply_to_periodic(ca, u).block(lo, hi), []):
                if v == x:
                    path = [u]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return Chain(tuple(reversed(path)) + (x,), F)
                if v not in parent:
                    parent[v] = u
                    queue.append(v)
    return ChainExhausted(f"no chain through the configuration among periods <= {budget}", budget)


# --------------------------------------------------------------------------
# Nilpotency
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NilpotencyBudget:
    max_power: int = 8
    chain_length: int = 8
    max_period: int = 6
    state_cap: int = STATE_CAP
    pattern_cap: int = 1 << 20


@dataclass(frozen=True)
class ConstantCertificate:
    """``tau^power`` takes the value ``terminal`` on every word of the
    subshift on the window of ``mu_power``."""

    power: int
    terminal: int
    window: Interval
    words: int

    def replay(self, X, ca: CellularAutomaton) -> bool:
        for w in language_words(X, self.window.width):
            if iterate_word(ca, w, self.power) != (self.terminal,):
                return False
        return True


@dataclass(frozen=True)
class PeriodicWitness:
    """Two distinct configurations of ``X`` with ``tau^k(x) = x``."""

    points: tuple  # ((config, k), (config, k))

    def replay(self, X, ca: CellularAutomaton) -> bool:
        (x, kx), (y, ky) = self.points
        if x == y:
            return False
        for z, k in self.points:
            if k < 1 or not contains_periodic(X, z):
                return False
            w = z
            for _ in range(k):
                w = apply_to_periodic(ca, w)
            if w != z:
                return False
        return True


@dataclass(frozen=True)
class LimitWitness:
    """A subshift ``P`` of ``X`` with ``tau(P) = P`` and two distinct words,
    so ``P`` has at least two points and no power of ``tau`` is constant."""

    omega: SoficPresentation
    words: tuple

    def replay(self, X, ca: CellularAutomaton) -> bool:
        u, v = self.words
        if u == v or len(u) != len(v):
            return False
        if not (accepts(self.omega, u) and accepts(self.omega, v)):
            return False
        if not is_subshift(self.omega, presentation(X)):
            return False
        return equal_subshifts(image_presentation(ca, self.omega), self.omega)


@dataclass(frozen=True)
class Nilpotent:
    power: int
    terminal: int
    certificate: ConstantCertificate
    mixing: MixingResult | None = None
    notes: tuple = ()

    kind = "Nilpotent"

    def replay(self, X, ca) -> bool:
        return self.certificate.replay(X, ca)


@dataclass(frozen=True)
class NonNilpotent:
    witness: object
    mixing: MixingResult | None = None
    notes: tuple = ()

    kind = "NonNilpotent"

    def replay(self, X, ca) -> bool:
        return self.witness.replay(X, ca)


@dataclass(frozen=True)
class Unknown:
    budgets: dict
    mixing: MixingResult | None = None
    notes: tuple = ()

    kind = "Unknown"

    def replay(self, X, ca) -> bool:
        return False


def _constant_prover(X, ca, budget: NilpotencyBudget, used: dict):
    for n in range(1, budget.max_power + 1):
        used["power"] = n
        rule = compose(ca, n, lazy=True)
        window = rule.window
        try:
            words = language_words(X, window.width, budget.pattern_cap)
        except ResourceError:
            return
        values = set()
        for w in words:
            values.add(rule.on_block(w))
            if len(values) > 1:
                break
        if len(values) == 1:
            (t,) = values
            yield ConstantCertificate(n, t, window, len(words))
            return
        yield None


def _chain_prover(X, ca, budget: NilpotencyBudget, used: dict, info: dict):
    try:
        for chain in image_chain_steps(X, ca, budget.chain_length, budget.state_cap):
            used["chain"] = len(chain.presentations) - 1
            if chain.stabilized_at is None:
                yield None
                continue
            omega = chain.limit
            fin = finiteness(omega)
            info["omega_finite"] = fin.finite
            info["omega_size"] = len(fin.members()) if fin.finite else None
            for L in range(1, 2 * len(omega.vertices) + 3):
                words = language_words(omega, L)
                if len(words) >= 2:
                    yield LimitWitness(omega, (words[0], words[1]))
                    return
            return
    except ResourceError:
        return


def _witness_prover(X, ca, budget: NilpotencyBudget, used: dict):
    found = {}
    for p in range(1, budget.max_period + 1):
        used["period"] = p
        try:
            points = periodic_points(X, p, budget.pattern_cap)
        except ResourceError:
            return
        for z, k in eventual_cycles(points, lambda x: apply_to_periodic(ca, x)).items():
            found.setdefault(z, k)
        if len(found) >= 2:
            chosen = sorted(found.items(), key=lambda item: (item[0].period, item[0].values))[:2]
            yield PeriodicWitness(tuple(chosen))
            return
        yield None


def nilpotency(X, ca: CellularAutomaton, budget: NilpotencyBudget | None = None):
    """Three-valued nilpotency verdict with a replayable certificate.

    A constant-power prover, a periodic-witness prover and a limit-set
    prover advance one step each in turn; the first certificate found is
    returned.  The mixing hypothesis is recorded on the verdict; for
    non-mixing subshifts a note says the verdict lies outside the setting
    where nilpotency is equivalent to a one-point limit set.
    """
    budget = budget or NilpotencyBudget()
    _check_invariant(X, ca)
    if is_empty(X).empty:
        raise DomainError("nilpotency is vacuous on the empty subshift")
    _require_invariant(X, ca)
    mixing = check_mixing(X)
    notes = () if mixing.mixing else ("outside the mixing hypothesis",)
    used: dict = {}
    info: dict = {}
    provers = [
        _constant_prover(X, ca, budget, used),
        _witness_prover(X, ca, budget, used),
        _chain_prover(X, ca, budget, used, info),
    ]
    result = None
    while provers and result is None:
        for g in list(provers):
            try:
                step = next(g)
            except StopIteration:
                provers.remove(g)
                continue
            if step is not None:
                result = step
                break
    for g in provers:
        g.close()
    if isinstance(result, ConstantCertificate):
        return Nilpotent(result.power, result.terminal, result, mixing, notes)
    if result is not None:
        extra = notes
        if not mixing.mixing and info.get("omega_size") == 1:
            extra = notes + ("one-point limit set without nilpotency",)
        return NonNilpotent(result, mixing, extra)
    return Unknown(dict(used), mixing, notes)
