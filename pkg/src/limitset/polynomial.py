"""Sparse multivariate polynomials with exact rational coefficients.

Monomials are packed into a single Python integer, ``FIELD`` bits per
variable, so that multiplying monomials is integer addition and renaming
``t_i -> t_{i+k}`` is a left shift.  Coefficients are ``int`` whenever they
are integral and :class:`fractions.Fraction` otherwise.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, FormatError

FIELD = 24
_MASK = (1 << FIELD) - 1


def _norm(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    raise DomainError(f"coefficient {c!r} is not an exact rational")


def pack(exponents: Sequence[int]) -> int:
    key = 0
    for i, e in enumerate(exponents):
        if e < 0 or e > _MASK:
            raise DomainError(f"exponent {e} out of range")
        key |= e << (FIELD * i)
    return key


def unpack(key: int, nvars: int) -> tuple:
    return tuple((key >> (FIELD * i)) & _MASK for i in range(nvars))


class Polynomial:
    """Polynomial in the variables ``t_0 .. t_{nvars-1}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[int, object] | None = None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for k, c in terms.items():
                c = _norm(c)
                if c:
                    self.terms[k] = c

    # construction -------------------------------------------------------

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def constant(cls, c, nvars: int = 0) -> "Polynomial":
        return cls(nvars, {0: c})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise DomainError(f"variable t{i} outside 0..{nvars - 1}")
        return cls._raw(nvars, {1 << (FIELD * i): 1})

    @classmethod
    def from_dict(cls, nvars: int, terms: Mapping[tuple, object]) -> "Polynomial":
        out = {}
        for exps, c in terms.items():
            if len(exps) != nvars:
                raise DomainError("exponent tuple has the wrong length")
            k = pack(exps)
            out[k] = out.get(k, 0) + c
        return cls(nvars, out)

    def with_nvars(self, nvars: int) -> "Polynomial":
        """Reinterpret in more (or, if unused, fewer) variables."""
        if nvars < self.nvars and any(k >> (FIELD * nvars) for k in self.terms):
            raise DomainError("polynomial uses variables beyond the new range")
        return Polynomial._raw(nvars, dict(self.terms))

    def shift(self, k: int, nvars: int | None = None) -> "Polynomial":
        """Rename ``t_i`` to ``t_{i+k}`` (``k >= 0``)."""
        if k < 0:
            raise DomainError("only nonnegative variable shifts are supported")
        nv = self.nvars + k if nvars is None else nvars
        s = FIELD * k
        return Polynomial._raw(nv, {key << s: c for key, c in self.terms.items()})

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = _norm(v)
            else:
                out.pop(k, None)
        return Polynomial._raw(max(self.nvars, other.nvars), out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        get = out.get
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = k1 + k2
                out[k] = get(k, 0) + c1 * c2
        return Polynomial(max(self.nvars, other.nvars), out)

    __rmul__ = __mul__

    def square(self) -> "Polynomial":
        """Square using the symmetric half of the product table."""
        items = list(self.terms.items())
        out: dict = {}
        get = out.get
        for i, (k1, c1) in enumerate(items):
            k = k1 + k1
            out[k] = get(k, 0) + c1 * c1
            d = 2 * c1
            for k2, c2 in items[i + 1 :]:
                k = k1 + k2
                out[k] = get(k, 0) + d * c2
        return Polynomial(self.nvars, out)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise DomainError("only nonnegative integer powers are supported")
        result = Polynomial.constant(1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base.square()
        return result

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, Polynomial) else other
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    @property
    def nterms(self) -> int:
        return len(self.terms)

    def items(self) -> Iterable:
        """``(exponent tuple, coefficient)`` pairs in a deterministic order."""
        for k in sorted(self.terms):
            yield unpack(k, self.nvars), self.terms[k]

    def as_dict(self) -> dict:
        return dict(self.items())

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.items()), default=-1)

    def constant_term(self):
        return self.terms.get(0, 0)

    def used_variables(self) -> set:
        used = set()
        for e, _ in self.items():
            used.update(i for i, x in enumerate(e) if x)
        return used

    # evaluation ---------------------------------------------------------

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        return self.evaluate(point)

    def evaluate(self, point: Sequence):
        """Exact value at ``point`` (ints or Fractions)."""
        if len(point) < self.nvars and any(k >> (FIELD * len(point)) for k in self.terms):
            raise DomainError(f"need {self.nvars} values, got {len(point)}")
        # scale every term to one common denominator and sum integers
        nums, dens = [], []
        for v in point:
            f = Fraction(v)
            nums.append(f.numerator)
            dens.append(f.denominator)
        n = len(point)
        top = [0] * n
        coef_den = 1
        for key, c in self.terms.items():
            if isinstance(c, Fraction):
                coef_den = math.lcm(coef_den, c.denominator)
            i = 0
            while key:
                e = key & _MASK
                if e > top[i]:
                    top[i] = e
                key >>= FIELD
                i += 1
        denominator = coef_den
        for i in range(n):
            if dens[i] != 1 and top[i]:
                denominator *= dens[i] ** top[i]
        scaled: list[dict] = [dict() for _ in point]
        total = 0
        for key, c in self.terms.items():
            term = c * coef_den
            term = term.numerator if isinstance(term, Fraction) else term
            for i in range(n):
                e = key & _MASK
                key >>= FIELD
                if not top[i]:
                    continue
                cache = scaled[i]
                v = cache.get(e)
                if v is None:
                    v = nums[i] ** e * dens[i] ** (top[i] - e) if dens[i] != 1 else nums[i] ** e
                    cache[e] = v
                term *= v
            total += term
        if denominator == 1:
            return total
        value = Fraction(total, denominator)
        return value.numerator if value.denominator == 1 else value

    # text form ----------------------------------------------------------

    def to_string(self, names: Sequence[str] | None = None) -> str:
        """Sparse monomial list such as ``1*t1 + -1*t0^2``; ``0`` if zero."""
        if names is None:
            names = [f"t{i}" for i in range(self.nvars)]
        parts = []
        for exps, c in self.items():
            coef = f"{c.numerator}/{c.denominator}" if isinstance(c, Fraction) else str(c)
            factors = [coef]
            for i, e in enumerate(exps):
                if e == 1:
                    factors.append(names[i])
                elif e:
                    factors.append(f"{names[i]}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"Polynomial({self.to_string()})"


_COEF = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(text: str):
    text = text.strip()
    if not _COEF.match(text):
        raise DomainError(f"not a rational number: {text!r}")
    value = Fraction(text)
    return value.numerator if value.denominator == 1 else value


def parse_polynomial(text: str, names: Sequence[str], source="<string>", line=None) -> Polynomial:
    """Inverse of :meth:`Polynomial.to_string` for the given variable names."""
    index = {n: i for i, n in enumerate(names)}
    nvars = len(names)
    text = text.strip()
    if text == "0":
        return Polynomial(nvars)
    terms: dict = {}
    for raw in text.split(" + "):
        factors = raw.strip().split("*")
        if not factors or not factors[0]:
            raise FormatError(f"empty monomial in {text!r}", source, line)
        try:
            coef = parse_rational(factors[0])
        except DomainError as exc:
            raise FormatError(str(exc), source, line) from None
        exps = [0] * nvars
        for f in factors[1:]:
            name, _, power = f.partition("^")
            if name not in index:
                raise FormatError(f"unknown variable {name!r}", source, line)
            try:
                e = int(power) if power else 1
            except ValueError:
                raise FormatError(f"bad exponent in {f!r}", source, line) from None
            if e < 1:
                raise FormatError(f"bad exponent in {f!r}", source, line)
            exps[index[name]] += e
        key = pack(exps)
        terms[key] = terms.get(key, 0) + coef
    return Polynomial(nvars, terms)
