"""Line-oriented text formats for SFTs, labelled graphs, rule tables and
polynomial rules.

Every format is ``key: value`` lines; blank lines and lines starting with
``#`` are ignored.  Parsers raise :class:`FormatError` carrying the source
name and line number.  ``serialize_*`` followed by ``parse_*`` is the
identity, and ``parse_*`` followed by ``serialize_*`` reproduces a file
written in the canonical layout byte for byte.
"""

from __future__ import annotations

import itertools
from pathlib import Path

from .automata import CellularAutomaton
from .core import FiniteAlphabet, Interval
from .errors import DomainError, FormatError
from .polynomial import parse_polynomial
from .shifts import Sft, SoficPresentation


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            yield no, line, None
        else:
            yield no, key.strip(), value.strip()


def _ints(value: str, source, no) -> tuple:
    try:
        return tuple(int(v) for v in value.split())
    except ValueError:
        raise FormatError(f"expected integers, got {value!r}", source, no) from None


def _alphabet(value: str, source, no) -> FiniteAlphabet:
    names = tuple(value.split())
    try:
        return FiniteAlphabet(names)
    except (DomainError, ValueError) as exc:
        raise FormatError(str(exc), source, no) from None


def _symbols(alphabet: FiniteAlphabet, names, source, no) -> tuple:
    try:
        return alphabet.encode(names)
    except (DomainError, KeyError, ValueError):
        bad = [n for n in names if n not in alphabet.symbols]
        raise FormatError(f"unknown symbol {bad[0] if bad else names!r}", source, no) from None


def _unknown(key, source, no):
    return FormatError(f"unexpected line {key!r}", source, no)


def _require(alphabet, what, source, no):
    if alphabet is None:
        raise FormatError(f"{what} before the alphabet line", source, no)


def read_text(path) -> tuple:
    p = Path(path)
    try:
        return p.read_text(encoding="utf-8"), str(p)
    except OSError as exc:
        raise FormatError(f"cannot read file: {exc.strerror}", str(p)) from None


# --------------------------------------------------------------------------
# SFT
# --------------------------------------------------------------------------


def parse_sft(text: str, source: str = "<string>") -> Sft:
    """Parse ``alphabet:``, ``window: lo hi`` and repeated ``allow:`` lines.

    Examples
    --------
    >>> s = parse_sft("alphabet: 0 1\\nwindow: 0 1\\nallow: 0 0\\nallow: 0 1\\nallow: 1 0\\n")
    >>> len(s.allowed)
    3
    """
    alphabet = window = None
    allowed = set()
    for no, key, value in _lines(text):
        if key == "alphabet":
            alphabet = _alphabet(value, source, no)
        elif key == "window":
            lo_hi = _ints(value, source, no)
            if len(lo_hi) != 2 or lo_hi[0] > lo_hi[1]:
                raise FormatError("window needs two integers lo <= hi", source, no)
            window = Interval(*lo_hi)
        elif key == "allow":
            _require(alphabet, "allow", source, no)
            if window is None:
                raise FormatError("allow before the window line", source, no)
            word = _symbols(alphabet, value.split(), source, no)
            if len(word) != len(window):
                raise FormatError(f"allowed word has length {len(word)}, window needs {len(window)}", source, no)
            if word in allowed:
                raise FormatError("duplicate allowed word", source, no)
            allowed.add(word)
        else:
            raise _unknown(key, source, no)
    if alphabet is None or window is None:
        raise FormatError("missing alphabet or window line", source)
    return Sft(alphabet, window, frozenset(allowed))


def serialize_sft(sft: Sft) -> str:
    lines = [f"alphabet: {' '.join(sft.alphabet.symbols)}", f"window: {sft.window.lo} {sft.window.hi}"]
    for word in sorted(sft.allowed):
        lines.append(f"allow: {' '.join(sft.alphabet.decode(word))}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Labelled graphs
# --------------------------------------------------------------------------


def parse_graph(text: str, source: str = "<string>", alphabet: FiniteAlphabet | None = None) -> SoficPresentation:
    """Parse ``vertex:`` lines and ``edge: from to label`` lines.

    An optional leading ``alphabet:`` line fixes the symbol order; without
    it the alphabet is the set of edge labels in order of appearance.
    """
    vertices, edges, raw_edges = [], [], []
    for no, key, value in _lines(text):
        if key == "alphabet":
            if vertices or raw_edges:
                raise FormatError("the alphabet line must come first", source, no)
            alphabet = _alphabet(value, source, no)
        elif key == "vertex":
            name = value
            if not name or len(name.split()) != 1:
                raise FormatError("vertex needs exactly one name", source, no)
            if name in vertices:
                raise FormatError(f"duplicate vertex {name!r}", source, no)
            vertices.append(name)
        elif key == "edge":
            parts = value.split()
            if len(parts) != 3:
                raise FormatError("edge needs: from to label", source, no)
            for v in parts[:2]:
                if v not in vertices:
                    raise FormatError(f"unknown vertex {v!r}", source, no)
            raw_edges.append((no, parts))
        else:
            raise _unknown(key, source, no)
    if alphabet is None:
        labels = []
        for _, (_, _, a) in raw_edges:
            if a not in labels:
                labels.append(a)
        alphabet = FiniteAlphabet(tuple(labels))
    for no, (u, v, a) in raw_edges:
        (label,) = _symbols(alphabet, [a], source, no)
        edges.append((u, v, label))
    return SoficPresentation(alphabet, tuple(vertices), tuple(edges))


def serialize_graph(p: SoficPresentation) -> str:
    lines = [f"alphabet: {' '.join(p.alphabet.symbols)}"]
    lines += [f"vertex: {v}" for v in p.vertices]
    lines += [f"edge: {u} {v} {p.alphabet.name(a)}" for u, v, a in p.edges]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Rule tables
# --------------------------------------------------------------------------


def parse_rule(text: str, source: str = "<string>") -> CellularAutomaton:
    """Parse ``alphabet:``, optional ``target:``, ``memory:`` and one
    ``rule: <inputs> -> <output>`` line per input word.  Incomplete or
    duplicate tables are rejected with the offending line."""
    alphabet = target = memory = None
    mapping, lines = {}, {}
    for no, key, value in _lines(text):
        if key == "alphabet":
            alphabet = _alphabet(value, source, no)
        elif key == "target":
            target = _alphabet(value, source, no)
        elif key == "memory":
            memory = _ints(value, source, no)
            if not memory or list(memory) != sorted(set(memory)):
                raise FormatError("memory offsets must be distinct and increasing", source, no)
        elif key == "rule":
            _require(alphabet, "rule", source, no)
            if memory is None:
                raise FormatError("rule before the memory line", source, no)
            lhs, arrow, rhs = value.partition("->")
            if not arrow or len(rhs.split()) != 1:
                raise FormatError("rule needs: <input symbols> -> <output symbol>", source, no)
            word = _symbols(alphabet, lhs.split(), source, no)
            if len(word) != len(memory):
                raise FormatError(f"rule input has {len(word)} symbols, memory has {len(memory)}", source, no)
            if word in mapping:
                raise FormatError(f"duplicate rule entry (first given on line {lines[word]})", source, no)
            (out,) = _symbols(target or alphabet, rhs.split(), source, no)
            mapping[word] = out
            lines[word] = no
        else:
            raise _unknown(key, source, no)
    if alphabet is None or memory is None:
        raise FormatError("missing alphabet or memory line", source)
    for word in itertools.product(range(len(alphabet)), repeat=len(memory)):
        if word not in mapping:
            names = " ".join(alphabet.decode(word))
            raise FormatError(f"rule table is incomplete: no entry for {names!r}", source)
    return CellularAutomaton.from_mapping(alphabet, memory, mapping, target)


def serialize_rule(ca: CellularAutomaton) -> str:
    lines = [f"alphabet: {' '.join(ca.source.symbols)}"]
    if ca.target != ca.source:
        lines.append(f"target: {' '.join(ca.target.symbols)}")
    lines.append(f"memory: {' '.join(map(str, ca.memory))}")
    for word in itertools.product(range(len(ca.source)), repeat=len(ca.memory)):
        out = ca.target.name(ca.local(word))
        lines.append(f"rule: {' '.join(ca.source.decode(word))} -> {out}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Polynomial rules
# --------------------------------------------------------------------------


def parse_poly_rule(text: str, source: str = "<string>"):
    """Parse ``memory: <ints>`` and ``poly: <terms>`` where ``t<i>`` is the
    cell at the ``i``-th memory offset, plus an optional
    ``projective: <F> ; <G>`` line in the variables ``x, y``."""
    from .polyca import PolyRule

    memory = poly = homogeneous = None
    for no, key, value in _lines(text):
        if key == "memory":
            memory = _ints(value, source, no)
        elif key == "poly":
            if memory is None:
                raise FormatError("poly before the memory line", source, no)
            poly = parse_polynomial(value, [f"t{i}" for i in range(len(memory))], source, no)
        elif key == "projective":
            F, sep, G = value.partition(";")
            if not sep:
                raise FormatError("projective needs: <F> ; <G>", source, no)
            homogeneous = (parse_polynomial(F, ["x", "y"], source, no), parse_polynomial(G, ["x", "y"], source, no))
        else:
            raise _unknown(key, source, no)
    if memory is None or poly is None:
        raise FormatError("missing memory or poly line", source)
    try:
        return PolyRule(memory, poly, homogeneous)
    except DomainError as exc:
        raise FormatError(str(exc), source) from None


def serialize_poly_rule(rule) -> str:
    lines = [
        f"memory: {' '.join(map(str, rule.memory))}",
        f"poly: {rule.poly.to_string([f't{i}' for i in range(len(rule.memory))])}",
    ]
    if rule.homogeneous is not None:
        F, G = rule.homogeneous
        lines.append(f"projective: {F.to_string(['x', 'y'])} ; {G.to_string(['x', 'y'])}")
    return "\n".join(lines) + "\n"


def load(path, kind: str):
    """Read and parse a file of the given kind (``sft``, ``graph``, ``rule``
    or ``poly``)."""
    text, source = read_text(path)
    parsers = {"sft": parse_sft, "graph": parse_graph, "rule": parse_rule, "poly": parse_poly_rule}
    if kind not in parsers:
        raise DomainError(f"unknown file kind {kind!r}")
    return parsers[kind](text, source)
