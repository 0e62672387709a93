"""Cellular automata over Z as sliding block codes."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .core import FiniteAlphabet, Interval, Pattern, PeriodicConfig
from .errors import DomainError, ResourceError
from .polynomial import Polynomial
from .shifts import PATTERN_CAP, SoficPresentation, Sft, _indexed, presentation

TABLE_CAP = 1 << 22


def _index(word: Sequence[int], k: int) -> int:
    i = 0
    for a in word:
        i = i * k + a
    return i


class CellularAutomaton:
    """``tau(x)(n) = mu(x(n + m_0), ..., x(n + m_r))`` for the memory
    offsets ``m_0 < ... < m_r``.

    The local rule is stored as a flat table indexed by the input word read
    in memory order, most significant symbol first.
    """

    def __init__(self, source: FiniteAlphabet, memory: Sequence[int], table: Sequence[int], target: FiniteAlphabet | None = None):
        memory = tuple(memory)
        if not memory:
            raise DomainError("the memory set must be nonempty")
        if list(memory) != sorted(set(memory)):
            raise DomainError(f"memory offsets must be distinct and increasing: {memory}")
        self.source = source
        self.target = source if target is None else target
        self.memory = memory
        k = len(source)
        size = k ** len(memory)
        table = tuple(table)
        if len(table) != size:
            raise DomainError(f"rule table has {len(table)} entries, expected {size}")
        m = len(self.target)
        for v in table:
            if not (isinstance(v, int) and 0 <= v < m):
                raise DomainError(f"rule output {v!r} is outside the target alphabet")
        self.table = table

    @classmethod
    def from_function(cls, source, memory, fn: Callable, target=None) -> "CellularAutomaton":
        memory = tuple(memory)
        size = len(source) ** len(memory)
        if size > TABLE_CAP:
            raise ResourceError(f"rule table of {size} entries exceeds the cap {TABLE_CAP}")
        table = [fn(w) for w in itertools.product(range(len(source)), repeat=len(memory))]
        return cls(source, memory, table, target)

    @classmethod
    def from_mapping(cls, source, memory, mapping: Mapping, target=None) -> "CellularAutomaton":
        memory = tuple(memory)
        words = list(itertools.product(range(len(source)), repeat=len(memory)))
        missing = [w for w in words if w not in mapping]
        if missing:
            raise DomainError(f"rule table is incomplete, e.g. no entry for {missing[0]}")
        return cls(source, memory, [mapping[w] for w in words], target)

    # basic structure ------------------------------------------------------

    @property
    def hull(self) -> Interval:
        return Interval(self.memory[0], self.memory[-1])

    @property
    def width(self) -> int:
        return self.hull.width

    def __eq__(self, other):
        return (
            isinstance(other, CellularAutomaton)
            and self.source == other.source
            and self.target == other.target
            and self.memory == other.memory
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.memory, self.table))

    def __repr__(self):
        return f"CellularAutomaton(memory={self.memory}, |A|={len(self.source)})"

    def local(self, word: Sequence[int]) -> int:
        """``mu`` applied to the values at the memory offsets."""
        return self.table[_index(word, len(self.source))]

    def local_on_hull(self, block: Sequence[int]) -> int:
        """``mu`` applied to a block covering the whole hull."""
        lo = self.memory[0]
        return self.table[_index([block[m - lo] for m in self.memory], len(self.source))]

    def is_constant(self) -> bool:
        return len(set(self.table)) == 1

    def sensitive_offsets(self) -> tuple:
        """Memory offsets on which the local rule actually depends."""
        k = len(self.source)
        used = []
        for pos, m in enumerate(self.memory):
            for w in itertools.product(range(k), repeat=len(self.memory)):
                base = self.local(w)
                if any(self.local(w[:pos] + (b,) + w[pos + 1 :]) != base for b in range(k)):
                    used.append(m)
                    break
        return tuple(used)

    def normalized(self) -> "CellularAutomaton":
        """Equivalent automaton whose memory keeps only the offsets the rule
        depends on (offset 0 alone for a constant rule)."""
        used = self.sensitive_offsets() or (0,)
        if used == self.memory:
            return self
        positions = [self.memory.index(m) if m in self.memory else None for m in used]

        def fn(w):
            full = [0] * len(self.memory)
            for p, v in zip(positions, w):
                if p is not None:
                    full[p] = v
            return self.local(full)

        return CellularAutomaton.from_function(self.source, used, fn, self.target)


# --------------------------------------------------------------------------
# Application
# --------------------------------------------------------------------------


def _apply_word(ca: CellularAutomaton, word: Sequence[int]) -> tuple:
    """Apply to a word read on an interval; the output is shorter by
    ``width - 1`` symbols and starts at ``start - hull.lo``."""
    w = ca.width
    lo = ca.memory[0]
    rel = [m - lo for m in ca.memory]
    k = len(ca.source)
    table = ca.table
    out = []
    for n in range(len(word) - w + 1):
        i = 0
        for r in rel:
            i = i * k + word[n + r]
        out.append(table[i])
    return tuple(out)


def apply_to_pattern(ca: CellularAutomaton, p: Pattern) -> Pattern:
    """``tau(x)`` on ``{n : n + M subset of [a, b]}`` for any extension ``x``.

    Examples
    --------
    >>> from limitset.library import xor_rule
    >>> apply_to_pattern(xor_rule(), Pattern.word((0, 1, 1, 0))).values
    (1, 0, 1)
    """
    w = p.window
    if not isinstance(w, Interval):
        raise DomainError("patterns over Z live on intervals")
    out_lo, out_hi = w.lo - ca.hull.lo, w.hi - ca.hull.hi
    if out_hi < out_lo:
        raise DomainError(f"input window {w} is too short: the rule needs width at least {ca.width}")
    return Pattern(Interval(out_lo, out_hi), _apply_word(ca, p.values))


def apply_to_periodic(ca: CellularAutomaton, x: PeriodicConfig) -> PeriodicConfig:
    p = x.period
    return PeriodicConfig(tuple(ca.local([x(n + m) for m in ca.memory]) for n in range(p)))


def iterate_word(ca: CellularAutomaton, word: Sequence[int], n: int) -> tuple:
    for _ in range(n):
        word = _apply_word(ca, word)
    return tuple(word)


# --------------------------------------------------------------------------
# Composition
# --------------------------------------------------------------------------


def _sumset(memory: tuple, n: int) -> tuple:
    s = {0}
    for _ in range(n):
        s = {a + m for a in s for m in memory}
    return tuple(sorted(s))


class ComposedRule:
    """Local rule of ``tau^n`` on the ``n``-fold sumset of the memory.

    In table mode the full table is built (subject to ``cap``); in lazy mode
    values are computed on demand by direct iteration.
    """

    def __init__(self, ca: CellularAutomaton, n: int, lazy: bool = False, cap: int = TABLE_CAP):
        if n < 1:
            raise DomainError("composition power must be positive")
        self.ca = ca
        self.n = n
        self.memory = _sumset(ca.memory, n)
        self.window = Interval(n * ca.memory[0], n * ca.memory[-1])
        self.lazy = lazy
        self._table = None
        if not lazy:
            size = len(ca.source) ** len(self.memory)
            if size > cap:
                raise ResourceError(f"table of tau^{n} needs {size} entries, above the cap {cap}")
            self._table = tuple(self._direct(w) for w in itertools.product(range(len(ca.source)), repeat=len(self.memory)))

    def _direct(self, word: Sequence[int]) -> int:
        lo = self.window.lo
        block = [0] * self.window.width
        for m, v in zip(self.memory, word):
            block[m - lo] = v
        return iterate_word(self.ca, block, self.n)[0]

    def __call__(self, word: Sequence[int]) -> int:
        """``mu_n`` on the values at the offsets of ``self.memory``."""
        if self._table is not None:
            return self._table[_index(word, len(self.ca.source))]
        return self._direct(word)

    def on_block(self, block: Sequence[int]) -> int:
        """``mu_n`` on a block covering the whole window."""
        return iterate_word(self.ca, block, self.n)[0]

    def as_automaton(self) -> CellularAutomaton:
        if self._table is None:
            return CellularAutomaton.from_function(self.ca.source, self.memory, self, self.ca.target)
        return CellularAutomaton(self.ca.source, self.memory, self._table, self.ca.target)


def compose(ca: CellularAutomaton, n: int, lazy: bool = False, cap: int = TABLE_CAP) -> ComposedRule:
    if ca.source != ca.target:
        raise DomainError("only automata from an alphabet to itself can be iterated")
    return ComposedRule(ca, n, lazy, cap)


# --------------------------------------------------------------------------
# Images
# --------------------------------------------------------------------------


def image_presentation(ca: CellularAutomaton, source, path_cap: int = PATTERN_CAP) -> SoficPresentation:
    """Presentation of ``tau(X)`` by the higher-block construction.

    Vertices are paths of ``width - 1`` edges of the trimmed source graph,
    edges are paths of ``width`` edges, and each edge is labelled by ``mu``
    of the labels it reads.
    """
    src = presentation(source)
    if src.alphabet != ca.source:
        raise DomainError("the automaton and the subshift use different alphabets")
    g = _indexed(src)
    alive = g.essential_mask()
    edges = [e for e in g.edges if alive >> e[0] & 1 and alive >> e[1] & 1]
    w = ca.width
    if w == 1:
        out = [(u, v, ca.local_on_hull((a,))) for u, v, a in edges]
        return SoficPresentation.indexed(ca.target, g.n, out)
    by_source = {}
    for i, (u, v, a) in enumerate(edges):
        by_source.setdefault(u, []).append(i)
    paths = [(i,) for i in range(len(edges))]
    for _ in range(w - 2):
        paths = [p + (j,) for p in paths for j in by_source.get(edges[p[-1]][1], ())]
        if len(paths) > path_cap:
            raise ResourceError(f"higher-block graph exceeds {path_cap} vertices")
    index = {p: i for i, p in enumerate(paths)}
    out = []
    for p in paths:
        for j in by_source.get(edges[p[-1]][1], ()):
            full = p + (j,)
            label = ca.local_on_hull([edges[e][2] for e in full])
            out.append((index[p], index[full[1:]], label))
    return SoficPresentation.indexed(ca.target, len(paths), out)


# --------------------------------------------------------------------------
# Subgroup restriction
# --------------------------------------------------------------------------


def restrict_to_subgroup(ca: CellularAutomaton, h: int) -> CellularAutomaton:
    """The automaton induced on ``hZ``, re-indexed as an automaton over Z
    with memory ``M / h``."""
    if h < 1:
        raise DomainError("subgroup index must be positive")
    for m in ca.memory:
        if m % h:
            raise DomainError(f"memory offset {m} is not in {h}Z")
    return CellularAutomaton(ca.source, tuple(m // h for m in ca.memory), ca.table, ca.target)


def coset_component(x: PeriodicConfig, h: int, c: int) -> PeriodicConfig:
    """The conjugation ``phi_c``: the configuration ``k -> x(c + h k)``."""
    period = x.period // math.gcd(x.period, h)
    return PeriodicConfig(tuple(x(c + h * k) for k in range(period)))


def coset_interleave(components: Sequence[PeriodicConfig]) -> PeriodicConfig:
    """Inverse of splitting into the ``h`` coset components."""
    h = len(components)
    period = h * math.lcm(*(c.period for c in components))
    return PeriodicConfig(tuple(components[n % h](n // h) for n in range(period)))


def coset_split_word(word: Sequence[int], h: int, start: int = 0) -> dict:
    """Split a word read on ``[start, start + len - 1]`` by residue mod ``h``."""
    out = {}
    for i, a in enumerate(word):
        out.setdefault((start + i) % h, []).append(a)
    return {c: tuple(v) for c, v in out.items()}


# --------------------------------------------------------------------------
# Polynomial interpolation
# --------------------------------------------------------------------------


def _embedding(values, k: int) -> tuple:
    if values is None:
        values = range(k)
    if isinstance(values, Mapping):
        values = [values[i] for i in range(k)]
    values = tuple(Fraction(v) for v in values)
    if len(values) != k:
        raise DomainError(f"embedding gives {len(values)} values for {k} symbols")
    if len(set(values)) != k:
        raise DomainError("the embedding of the alphabet into the rationals is not injective")
    return values


def lagrange_lift(ca: CellularAutomaton, embedding=None, target_embedding=None) -> Polynomial:
    """Polynomial in ``t_0 .. t_r`` (one variable per memory offset, in
    order) that reproduces ``mu`` on the embedded symbols.

    Examples
    --------
    >>> from limitset.library import xor_rule
    >>> lagrange_lift(xor_rule()).to_string()
    '1*t0 + 1*t1 + -2*t0*t1'
    """
    k = len(ca.source)
    src = _embedding(embedding, k)
    if target_embedding is None and ca.target == ca.source:
        tgt = src
    else:
        tgt = _embedding(target_embedding, len(ca.target))
    r = len(ca.memory)
    basis = []
    for i in range(r):
        t = Polynomial.variable(i, r)
        row = []
        for a in range(k):
            poly = Polynomial.constant(1, r)
            for b in range(k):
                if b != a:
                    poly = poly * (t - src[b]) * (1 / (src[a] - src[b]))
            row.append(poly)
        basis.append(row)
    total = Polynomial(r)
    for word in itertools.product(range(k), repeat=r):
        value = tgt[ca.local(word)]
        if not value:
            continue
        term = Polynomial.constant(value, r)
        for i, a in enumerate(word):
            term = term * basis[i][a]
        total = total + term
    return total
