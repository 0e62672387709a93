"""Standard subshifts and automata used in examples, tests and the CLI."""

from __future__ import annotations

from .automata import CellularAutomaton
from .core import BINARY, FiniteAlphabet, Interval
from .shifts import FiniteSubshift, Sft


def full_shift(alphabet: FiniteAlphabet = BINARY) -> Sft:
    return Sft.full(alphabet)


def golden_mean() -> Sft:
    """Binary sequences without two consecutive ones."""
    return Sft(BINARY, Interval(0, 1), frozenset({(0, 0), (0, 1), (1, 0)}))


def path_sft() -> Sft:
    """Alphabet ``a, b, c`` with allowed pairs ``ab`` and ``bc``; it is empty."""
    abc = FiniteAlphabet(("a", "b", "c"))
    return Sft(abc, Interval(0, 1), frozenset({(0, 1), (1, 2)}))


def periodic_orbit(*words) -> FiniteSubshift:
    return FiniteSubshift.orbit(*words)


def identity_rule(alphabet: FiniteAlphabet = BINARY) -> CellularAutomaton:
    return CellularAutomaton.from_function(alphabet, (0,), lambda w: w[0])


def constant_rule(value: int = 0, alphabet: FiniteAlphabet = BINARY, memory=(0,)) -> CellularAutomaton:
    return CellularAutomaton.from_function(alphabet, memory, lambda w: value)


def shift_rule(alphabet: FiniteAlphabet = BINARY) -> CellularAutomaton:
    """``tau(x)(n) = x(n + 1)``."""
    return CellularAutomaton.from_function(alphabet, (1,), lambda w: w[0])


def xor_rule() -> CellularAutomaton:
    """``mu(a, b) = a xor b`` on the memory ``{0, 1}``."""
    return CellularAutomaton.from_function(BINARY, (0, 1), lambda w: w[0] ^ w[1])


def and_rule() -> CellularAutomaton:
    """``mu(a, b) = a b`` on the memory ``{0, 1}``."""
    return CellularAutomaton.from_function(BINARY, (0, 1), lambda w: w[0] & w[1])


def binary_rule(number: int, memory=(0, 1)) -> CellularAutomaton:
    """Binary automaton numbered like the elementary rules: the output on
    the input word ``w`` is bit ``int(w, 2)`` of ``number``."""
    memory = tuple(memory)
    size = 2 ** len(memory)
    if not 0 <= number < 2 ** size:
        raise ValueError(f"rule number must lie in [0, {2 ** size})")

    def fn(w):
        i = 0
        for a in w:
            i = 2 * i + a
        return number >> i & 1

    return CellularAutomaton.from_function(BINARY, memory, fn)


def elementary_rule(number: int) -> CellularAutomaton:
    """Elementary automaton with memory ``{-1, 0, 1}``."""
    return binary_rule(number, (-1, 0, 1))
