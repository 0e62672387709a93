"""Subshifts of finite type, window languages and sofic presentations over Z.

Vertex sets are handled as Python integer bitmasks throughout; graphs in
this module are small (desk scale) but are traversed very often by the
image-chain and nilpotency code.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import networkx as nx

from .core import FiniteAlphabet, Interval, Pattern, PeriodicConfig
from .errors import DomainError, LimitSetError, ResourceError

PATTERN_CAP = 1 << 22
STATE_CAP = 1 << 16


# --------------------------------------------------------------------------
# Data types
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Sft:
    """The subshift of finite type ``Sigma(D, P)``.

    ``allowed`` holds the words of ``P`` as tuples of symbol ids read along
    the interval ``window`` from left to right.
    """

    alphabet: FiniteAlphabet
    window: Interval
    allowed: frozenset

    def __post_init__(self):
        object.__setattr__(self, "allowed", frozenset(tuple(w) for w in self.allowed))
        w = self.window.width
        k = len(self.alphabet)
        for word in self.allowed:
            if len(word) != w:
                raise DomainError(f"allowed pattern {word} does not fit the window {self.window}")
            if any(not (isinstance(s, int) and 0 <= s < k) for s in word):
                raise DomainError(f"allowed pattern {word} uses symbols outside the alphabet")

    @classmethod
    def full(cls, alphabet: FiniteAlphabet) -> "Sft":
        return cls(alphabet, Interval(0, 0), frozenset((a,) for a in alphabet.ids))

    @classmethod
    def from_names(cls, alphabet: FiniteAlphabet, window: Interval, words: Iterable[Sequence[str]]) -> "Sft":
        return cls(alphabet, window, frozenset(alphabet.encode(w) for w in words))

    @property
    def patterns(self) -> frozenset:
        return frozenset(Pattern(self.window, w) for w in self.allowed)

    def contains_periodic(self, x: PeriodicConfig) -> bool:
        w = self.window.width
        p = x.period
        return all(x.block(n, n + w - 1) in self.allowed for n in range(p))


@dataclass(frozen=True)
class WindowLanguage:
    """A duplicate-free set of words, all on the same interval window."""

    window: Interval
    words: frozenset

    def __post_init__(self):
        object.__setattr__(self, "words", frozenset(tuple(w) for w in self.words))
        for w in self.words:
            if len(w) != self.window.width:
                raise DomainError(f"word {w} does not fit the window {self.window}")

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(sorted(self.words))

    def __contains__(self, item):
        if isinstance(item, Pattern):
            return item.window == self.window and item.values in self.words
        return tuple(item) in self.words

    def patterns(self) -> list:
        return [Pattern(self.window, w) for w in sorted(self.words)]

    def is_empty(self) -> bool:
        return not self.words


@dataclass(frozen=True)
class SoficPresentation:
    """A finite labelled graph; it presents the label sequences of its
    bi-infinite paths.  Edges are ``(source, target, label)`` triples with
    vertex names from ``vertices`` and labels given as symbol ids."""

    alphabet: FiniteAlphabet
    vertices: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        names = set(self.vertices)
        if len(names) != len(self.vertices):
            raise DomainError("duplicate vertex names")
        k = len(self.alphabet)
        for u, v, a in self.edges:
            if u not in names or v not in names:
                raise DomainError(f"edge {(u, v, a)} uses an unknown vertex")
            if not (isinstance(a, int) and 0 <= a < k):
                raise DomainError(f"edge label {a!r} is outside the alphabet")

    @classmethod
    def indexed(cls, alphabet, n: int, edges) -> "SoficPresentation":
        return cls(alphabet, tuple(range(n)), tuple(sorted(set(map(tuple, edges)))))

    def is_right_resolving(self) -> bool:
        seen = set()
        for u, _, a in self.edges:
            if (u, a) in seen:
                return False
            seen.add((u, a))
        return True

    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.vertices)
        for u, v, a in self.edges:
            g.add_edge(u, v, label=a)
        return g


@dataclass(frozen=True)
class FiniteSubshift:
    """A finite shift-invariant set of periodic configurations."""

    configurations: frozenset

    def __post_init__(self):
        configs = frozenset(self.configurations)
        object.__setattr__(self, "configurations", configs)
        for x in configs:
            if x.shift(1) not in configs:
                raise DomainError(f"not shift-closed: the translate of {x.values} is missing")

    @classmethod
    def orbit(cls, *words) -> "FiniteSubshift":
        """Union of the orbits of the periodic configurations ``w^Z``."""
        configs = set()
        for w in words:
            configs |= PeriodicConfig(tuple(w)).orbit()
        return cls(frozenset(configs))

    def __len__(self):
        return len(self.configurations)

    def __iter__(self):
        return iter(sorted(self.configurations, key=lambda x: (x.period, x.values)))

    def orbits(self) -> list:
        seen, out = set(), []
        for x in self:
            if x not in seen:
                orb = x.orbit()
                seen |= orb
                out.append(x)
        return out

    def symbols(self) -> set:
        return {s for x in self.configurations for s in x.values}


# --------------------------------------------------------------------------
# Internal indexed graphs
# --------------------------------------------------------------------------


class _Graph:
    """Indexed view of a presentation with bitmask successor tables."""

    def __init__(self, n: int, edges, k: int):
        self.n = n
        self.k = k
        self.edges = list(edges)
        self.succ = [[0] * n for _ in range(k)]
        for u, v, a in self.edges:
            self.succ[a][u] |= 1 << v

    def step(self, mask: int, a: int) -> int:
        out = 0
        row = self.succ[a]
        while mask:
            low = mask & -mask
            out |= row[low.bit_length() - 1]
            mask ^= low
        return out

    def essential_mask(self) -> int:
        n = self.n
        alive = (1 << n) - 1
        outs = [set() for _ in range(n)]
        ins = [set() for _ in range(n)]
        for u, v, _ in self.edges:
            outs[u].add(v)
            ins[v].add(u)
        outdeg = [len(s) for s in outs]
        indeg = [len(s) for s in ins]
        queue = deque(u for u in range(n) if outdeg[u] == 0 or indeg[u] == 0)
        removed = set()
        while queue:
            u = queue.popleft()
            if u in removed:
                continue
            removed.add(u)
            alive &= ~(1 << u)
            for v in outs[u]:
                if v not in removed:
                    indeg[v] -= 1
                    if indeg[v] == 0:
                        queue.append(v)
            for v in ins[u]:
                if v not in removed:
                    outdeg[v] -= 1
                    if outdeg[v] == 0:
                        queue.append(v)
        return alive


def _members(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _indexed(p: SoficPresentation) -> _Graph:
    index = {v: i for i, v in enumerate(p.vertices)}
    return _Graph(len(p.vertices), ((index[u], index[v], a) for u, v, a in p.edges), len(p.alphabet))


def _restrict(p: SoficPresentation, keep_mask: int) -> SoficPresentation:
    keep = [v for i, v in enumerate(p.vertices) if keep_mask >> i & 1]
    names = set(keep)
    edges = tuple(e for e in p.edges if e[0] in names and e[1] in names)
    return SoficPresentation(p.alphabet, tuple(keep), edges)


# --------------------------------------------------------------------------
# Conversions
# --------------------------------------------------------------------------


def sft_presentation(sft: Sft) -> SoficPresentation:
    """Edge-graph presentation: vertices are the words of length ``|D|-1``
    occurring in ``P``, and each allowed word is an edge labelled by its
    first symbol."""
    w = sft.window.width
    if w == 1:
        return SoficPresentation.indexed(sft.alphabet, 1, [(0, 0, word[0]) for word in sft.allowed])
    states = sorted({word[:-1] for word in sft.allowed} | {word[1:] for word in sft.allowed})
    index = {s: i for i, s in enumerate(states)}
    edges = [(index[word[:-1]], index[word[1:]], word[0]) for word in sft.allowed]
    return SoficPresentation.indexed(sft.alphabet, len(states), edges)


def finite_presentation(fs: FiniteSubshift, alphabet: FiniteAlphabet) -> SoficPresentation:
    """Disjoint union of one labelled cycle per orbit."""
    edges = []
    n = 0
    for x in fs.orbits():
        p = x.period
        for i in range(p):
            if not 0 <= x.values[i] < len(alphabet):
                raise DomainError(f"symbol {x.values[i]} is outside the alphabet")
            edges.append((n + i, n + (i + 1) % p, x.values[i]))
        n += p
    return SoficPresentation.indexed(alphabet, n, edges)


def presentation(x, alphabet: FiniteAlphabet | None = None) -> SoficPresentation:
    """Any supported subshift description as a labelled graph."""
    if isinstance(x, SoficPresentation):
        return x
    if isinstance(x, Sft):
        return sft_presentation(x)
    if isinstance(x, FiniteSubshift):
        if alphabet is None:
            alphabet = FiniteAlphabet.of_size(max(x.symbols(), default=0) + 1)
        return finite_presentation(x, alphabet)
    raise DomainError(f"cannot present {type(x).__name__} as a sofic shift")


def alphabet_of(x) -> FiniteAlphabet:
    if isinstance(x, (Sft, SoficPresentation)):
        return x.alphabet
    raise DomainError(f"{type(x).__name__} does not carry an alphabet")


def trim(p: SoficPresentation) -> SoficPresentation:
    """Keep only the vertices lying on a bi-infinite path."""
    p = presentation(p)
    return _restrict(p, _indexed(p).essential_mask())


def disjoint_union(p1, p2) -> SoficPresentation:
    p1, p2 = presentation(p1), presentation(p2)
    if p1.alphabet != p2.alphabet:
        raise DomainError("presentations use different alphabets")
    n1 = len(p1.vertices)
    i1 = {v: i for i, v in enumerate(p1.vertices)}
    i2 = {v: n1 + i for i, v in enumerate(p2.vertices)}
    edges = [(i1[u], i1[v], a) for u, v, a in p1.edges] + [(i2[u], i2[v], a) for u, v, a in p2.edges]
    return SoficPresentation.indexed(p1.alphabet, n1 + len(p2.vertices), edges)


# --------------------------------------------------------------------------
# Languages
# --------------------------------------------------------------------------


def _as_window(E) -> Interval:
    if isinstance(E, int):
        if E < 1:
            raise DomainError("window length must be positive")
        return Interval(0, E - 1)
    if isinstance(E, Interval):
        return E
    raise DomainError("windows over Z are intervals or positive lengths")


def language_words(x, length: int, cap: int = PATTERN_CAP) -> list:
    """Sorted list of the words of ``length`` occurring in the subshift."""
    p = presentation(x)
    g = _indexed(p)
    start = g.essential_mask()
    if not start:
        return []
    out = []
    stack = [((), start)]
    k = g.k
    while stack:
        word, mask = stack.pop()
        if len(word) == length:
            out.append(word)
            if len(out) > cap:
                raise ResourceError(f"more than {cap} words of length {length}")
            continue
        for a in reversed(range(k)):
            nxt = g.step(mask, a)
            if nxt:
                stack.append((word + (a,), nxt))
    return out


def window_language(x, E) -> WindowLanguage:
    """The set ``{x|_E : x in X}`` of globally extendable patterns on ``E``.

    Examples
    --------
    >>> from limitset.library import golden_mean
    >>> len(window_language(golden_mean(), Interval(0, 2)))
    5
    """
    w = _as_window(E)
    return WindowLanguage(w, frozenset(language_words(x, w.width)))


def accepts(x, word: Sequence[int]) -> bool:
    """Whether ``word`` occurs in some configuration of the subshift."""
    p = presentation(x)
    g = _indexed(p)
    mask = g.essential_mask()
    for a in word:
        if not mask:
            return False
        mask = g.step(mask, a)
    return bool(mask)


def local_words(sft: Sft, length: int, cap: int = PATTERN_CAP) -> list:
    """Words of ``length`` all of whose ``|D|``-factors lie in ``P``."""
    k = len(sft.alphabet)
    w = sft.window.width
    if length < w:
        if k ** length > cap:
            raise ResourceError(f"{k}^{length} patterns exceed the cap {cap}")
        return list(itertools.product(range(k), repeat=length))
    allowed = sft.allowed
    out = []
    stack = [()]
    while stack:
        word = stack.pop()
        if len(word) == length:
            out.append(word)
            if len(out) > cap:
                raise ResourceError(f"more than {cap} locally admissible words")
            continue
        for a in reversed(range(k)):
            nw = word + (a,)
            if len(nw) >= w and nw[-w:] not in allowed:
                continue
            stack.append(nw)
    out.sort()
    return out


def local_window_set(sft: Sft, i: int, j: int, radius: int = 1) -> WindowLanguage:
    """Locally admissible patterns on the ball of radius ``radius*(i+j)``."""
    if i < 0 or j < 0:
        raise DomainError("grid indices are nonnegative")
    r = radius * (i + j)
    window = Interval(-r, r)
    return WindowLanguage(window, frozenset(local_words(sft, window.width)))


@dataclass(frozen=True)
class Emptiness:
    empty: bool
    witness: PeriodicConfig | None = None

    def __bool__(self):
        return self.empty


def is_empty(x) -> Emptiness:
    """Emptiness test; a nonempty answer carries a periodic witness."""
    p = presentation(x)
    g = _indexed(p)
    alive = g.essential_mask()
    if not alive:
        return Emptiness(True)
    out = {}
    for u, v, a in g.edges:
        if alive >> u & 1 and alive >> v & 1:
            out.setdefault(u, []).append((v, a))
    for u in out:
        out[u].sort(key=lambda e: (e[1], e[0]))
    u = min(_members(alive))
    seen = {}
    path = []
    while u not in seen:
        seen[u] = len(path)
        v, a = out[u][0]
        path.append(a)
        u = v
    return Emptiness(False, PeriodicConfig(tuple(path[seen[u]:])))


# --------------------------------------------------------------------------
# Canonical forms
# --------------------------------------------------------------------------


def _minimal_dfa(p: SoficPresentation, state_cap: int = STATE_CAP):
    """Minimal deterministic automaton of the factor language.

    Returns a transition table (tuple of rows, ``-1`` for a missing
    transition) numbered by breadth-first search from the initial state,
    which is state 0.  Returns ``None`` for the empty subshift.
    """
    g = _indexed(p)
    k = g.k
    start = g.essential_mask()
    if not start:
        return None
    index = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        s = order[i]
        row = []
        for a in range(k):
            t = g.step(s, a)
            if not t:
                row.append(-1)
                continue
            j = index.get(t)
            if j is None:
                j = len(order)
                if j >= state_cap:
                    raise ResourceError(f"subset construction exceeded {state_cap} states")
                index[t] = j
                order.append(t)
            row.append(j)
        rows.append(row)
        i += 1
    block = _moore(rows)
    nb = max(block) + 1
    quotient = [None] * nb
    for s, row in enumerate(rows):
        if quotient[block[s]] is None:
            quotient[block[s]] = [block[t] if t >= 0 else -1 for t in row]
    return _bfs_number(quotient, block[0])


def _moore(rows) -> list:
    """Coarsest partition of a partial DFA (all states accepting)."""
    n = len(rows)
    block = [0] * n
    count = 1
    while True:
        sigs = {}
        new = []
        for s in range(n):
            sig = (block[s], tuple(block[t] if t >= 0 else -1 for t in rows[s]))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == count:
            return new
        block, count = new, len(sigs)


def _bfs_number(rows, start: int) -> tuple:
    index = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        for t in rows[order[i]]:
            if t >= 0 and t not in index:
                index[t] = len(order)
                order.append(t)
        i += 1
    return tuple(tuple(index[t] if t >= 0 else -1 for t in rows[s]) for s in order)


def _table_presentation(alphabet, table) -> SoficPresentation:
    edges = [(s, t, a) for s, row in enumerate(table) for a, t in enumerate(row) if t >= 0]
    full = SoficPresentation.indexed(alphabet, len(table), edges)
    g = _indexed(full)
    alive = g.essential_mask()
    renumber = {old: new for new, old in enumerate(_members(alive))}
    kept = [(renumber[u], renumber[v], a) for u, v, a in edges if u in renumber and v in renumber]
    return SoficPresentation.indexed(alphabet, len(renumber), kept)


def _cache_path(p: SoficPresentation):
    root = os.environ.get("LIMITSET_CACHE_DIR")
    if not root:
        return None
    index = {v: i for i, v in enumerate(p.vertices)}
    payload = json.dumps(
        [list(p.alphabet.symbols), len(p.vertices), sorted([index[u], index[v], a] for u, v, a in p.edges)]
    )
    digest = hashlib.sha256(payload.encode()).hexdigest()
    return os.path.join(root, f"canon-{digest}.json")


def canonical_presentation(p, state_cap: int = STATE_CAP) -> SoficPresentation:
    """Trimmed, right-resolving, follower-separated presentation.

    The result depends only on the presented subshift: it is the essential
    part of the minimal deterministic automaton of the factor language,
    numbered by breadth-first search.  Two subshifts are equal exactly when
    their canonical presentations are equal as data.

    Examples
    --------
    >>> from limitset.library import golden_mean
    >>> len(canonical_presentation(golden_mean()).vertices)
    2
    """
    p = presentation(p)
    path = _cache_path(p)
    if path and os.path.exists(path):
        with open(path) as fh:
            data = json.load(fh)
        return SoficPresentation.indexed(p.alphabet, data["n"], [tuple(e) for e in data["edges"]])
    table = _minimal_dfa(p, state_cap)
    if table is None:
        result = SoficPresentation(p.alphabet, (), ())
    else:
        result = _table_presentation(p.alphabet, table)
    if path:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        tmp = f"{path}.{os.getpid()}.tmp"
        with open(tmp, "w") as fh:
            json.dump({"n": len(result.vertices), "edges": [list(e) for e in result.edges]}, fh)
        os.replace(tmp, path)
    return result


def _check_alphabets(p1, p2):
    if p1.alphabet != p2.alphabet:
        raise DomainError(f"alphabet mismatch: {p1.alphabet.symbols} vs {p2.alphabet.symbols}")


def equal_subshifts(p1, p2, state_cap: int = STATE_CAP) -> bool:
    """Whether two presentations (or SFTs) describe the same subshift."""
    p1, p2 = presentation(p1), presentation(p2)
    _check_alphabets(p1, p2)
    return canonical_presentation(p1, state_cap) == canonical_presentation(p2, state_cap)


def is_subshift(p1, p2, state_cap: int = STATE_CAP) -> bool:
    """Whether the first subshift is contained in the second."""
    p1, p2 = presentation(p1), presentation(p2)
    _check_alphabets(p1, p2)
    return equal_subshifts(disjoint_union(p1, p2), p2, state_cap)


# --------------------------------------------------------------------------
# Mixing
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MixingResult:
    """Outcome of the mixing test with the reason that decided it.

    ``reason`` is one of ``"aperiodic"``, ``"periodic"`` or ``"reducible"``;
    ``period`` is the period of the minimal irreducible right-resolving
    presentation when the subshift is irreducible.
    """

    mixing: bool
    reason: str
    period: int | None = None

    def __bool__(self):
        return self.mixing


def _graph_period(n: int, edges) -> int:
    adj = [[] for _ in range(n)]
    for u, v, _ in edges:
        adj[u].append(v)
    level = {0: 0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in level:
                level[v] = level[u] + 1
                queue.append(v)
    g = 0
    for u, v, _ in edges:
        g = math.gcd(g, level[u] + 1 - level[v])
    return g


def _follower_quotient(p: SoficPresentation) -> SoficPresentation:
    """Merge vertices of a right-resolving graph with equal follower sets."""
    index = {v: i for i, v in enumerate(p.vertices)}
    k = len(p.alphabet)
    rows = [[-1] * k for _ in p.vertices]
    for u, v, a in p.edges:
        rows[index[u]][a] = index[v]
    block = _moore(rows)
    edges = {(block[index[u]], block[index[v]], a) for u, v, a in p.edges}
    return SoficPresentation.indexed(p.alphabet, max(block) + 1, edges)


def check_mixing(x) -> MixingResult:
    """Decide topological mixing of a nonempty sofic shift over Z.

    The subshift is mixing iff it is irreducible and its minimal
    right-resolving irreducible presentation is aperiodic.  Irreducibility
    is decided by testing whether some strongly connected component of the
    canonical presentation already presents the whole subshift.
    """
    canon = canonical_presentation(x)
    if not canon.vertices:
        raise DomainError("mixing is undefined for the empty subshift")
    g = canon.to_networkx()
    for comp in sorted(nx.strongly_connected_components(g), key=min):
        sub = _restrict(canon, sum(1 << v for v in comp))
        if not sub.edges:
            continue
        if canonical_presentation(sub) != canon:
            continue
        cover = _follower_quotient(sub)
        period = _graph_period(len(cover.vertices), cover.edges)
        if period == 1:
            return MixingResult(True, "aperiodic", 1)
        return MixingResult(False, "periodic", period)
    return MixingResult(False, "reducible")


def is_mixing(x) -> bool:
    return check_mixing(x).mixing


# --------------------------------------------------------------------------
# Periodic points
# --------------------------------------------------------------------------


def _has_cycle(succ_masks: list) -> bool:
    alive = {u for u, m in enumerate(succ_masks) if m}
    changed = True
    while changed:
        changed = False
        for u in list(alive):
            if not any(v in alive for v in _members(succ_masks[u])):
                alive.discard(u)
                changed = True
    return bool(alive)


def contains_periodic(x, config: PeriodicConfig) -> bool:
    """Whether the periodic configuration belongs to the subshift."""
    if isinstance(x, Sft):
        return x.contains_periodic(config)
    p = presentation(x)
    g = _indexed(p)
    alive = g.essential_mask()
    k = len(p.alphabet)
    if any(not 0 <= s < k for s in config.values):
        return False
    masks = []
    for u in range(g.n):
        m = (1 << u) & alive
        for a in config.values:
            m = g.step(m, a) & alive
        masks.append(m)
    return _has_cycle(masks)


def periodic_points(x, p: int, cap: int = PATTERN_CAP) -> list:
    """The configurations of ``X`` fixed by translation by ``p``, sorted."""
    if p < 1:
        raise DomainError("period must be positive")
    found = set()
    for w in language_words(x, p, cap):
        c = PeriodicConfig(w)
        if c not in found and contains_periodic(x, c):
            found.add(c)
    return sorted(found, key=lambda c: (c.period, c.values))


# --------------------------------------------------------------------------
# Finite subshifts
# --------------------------------------------------------------------------


def separating_window(fs: FiniteSubshift) -> Interval:
    """Smallest ``[0, k]`` on which the members of ``fs`` pairwise differ."""
    configs = list(fs)
    if not configs:
        raise DomainError("the finite subshift is empty")
    limit = math.lcm(*(x.period for x in configs))
    for k in range(limit + 1):
        blocks = {x.block(0, k) for x in configs}
        if len(blocks) == len(configs):
            return Interval(0, k)
    raise LimitSetError("no separating window found")  # unreachable for distinct periodic points


def finite_to_sft(fs: FiniteSubshift, alphabet: FiniteAlphabet | None = None) -> Sft:
    """Finite-type description ``Sigma(D, P)`` of a finite subshift.

    ``D`` is the separating window ``[0, k]`` thickened by the generating
    set ``{-1, 0, 1}`` and ``P`` collects the restrictions of the members
    to ``D``.  The equality ``Sigma(D, P) = fs`` is checked before
    returning.

    Examples
    --------
    >>> sft = finite_to_sft(FiniteSubshift.orbit((0, 1)))
    >>> sft.window, sorted(sft.allowed)
    (Interval(-1, 1), [(0, 1, 0), (1, 0, 1)])
    """
    if alphabet is None:
        alphabet = FiniteAlphabet.of_size(max(fs.symbols(), default=0) + 1)
    d0 = separating_window(fs)
    D = Interval(d0.lo - 1, d0.hi + 1)
    P = frozenset(x.block(D.lo, D.hi) for x in fs)
    sft = Sft(alphabet, D, P)
    if not equal_subshifts(sft, finite_presentation(fs, alphabet)):
        raise LimitSetError("finite-type description does not reproduce the subshift")
    return sft


@dataclass(frozen=True)
class SubFiniteTypePresentation:
    """An SFT over the auxiliary alphabet ``B = members`` and a one-cell
    automaton mapping it onto the finite subshift."""

    members: tuple
    sft: Sft
    automaton: object

    def encode(self, x: PeriodicConfig) -> PeriodicConfig:
        """The configuration ``g -> (-g) x`` of ``Sigma'`` lying over ``x``."""
        index = {m: i for i, m in enumerate(self.members)}
        return PeriodicConfig(tuple(index[x.shift(-g)] for g in range(x.period)))


def sub_finite_type_presentation(fs: FiniteSubshift, alphabet: FiniteAlphabet | None = None) -> SubFiniteTypePresentation:
    """Realise a finite subshift as the image of an SFT under a one-cell
    automaton, with the members themselves as auxiliary symbols."""
    from .automata import CellularAutomaton, image_presentation

    if alphabet is None:
        alphabet = FiniteAlphabet.of_size(max(fs.symbols(), default=0) + 1)
    members = tuple(fs)
    if not members:
        raise DomainError("the finite subshift is empty")
    index = {m: i for i, m in enumerate(members)}
    B = FiniteAlphabet(tuple(f"x{i}" for i in range(len(members))))
    # y(g) must equal the translate g^{-1} y(0), i.e. n -> y(0)(n + g)
    P = frozenset((index[m.shift(1)], index[m], index[m.shift(-1)]) for m in members)
    sft = Sft(B, Interval(-1, 1), P)
    tau = CellularAutomaton.from_function(B, (0,), lambda w: members[w[0]](0), target=alphabet)
    if not equal_subshifts(image_presentation(tau, sft), finite_presentation(fs, alphabet)):
        raise LimitSetError("the auxiliary presentation does not map onto the subshift")
    return SubFiniteTypePresentation(members, sft, tau)
