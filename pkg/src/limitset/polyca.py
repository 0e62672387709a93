"""Polynomial cellular automata over the rationals and the projective
rational line, with exact witnesses and replayable proof objects.

The running example is the automaton ``tau(c)(n) = c(n+1) - c(n)^2``.
Its ``n``-th power has local rule ``mu_n(t_0..t_n) = t_n +
nu_n(t_0..t_{n-1})`` where ``nu_1 = -t_0^2`` and
``nu_{n+1}(t_0..t_n) = nu_n(t_1..t_n) - mu_n(t_0..t_n)^2``.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .automata import CellularAutomaton, lagrange_lift
from .core import (
    ConstantTail,
    GeneratedConfig,
    Interval,
    Pattern,
    RecurrenceTail,
    ShiftedTail,
)
from .errors import DomainError, LimitSetError, ResourceError
from .polynomial import Polynomial, parse_polynomial, parse_rational

# --------------------------------------------------------------------------
# Scalars
# --------------------------------------------------------------------------


class _Infinity:
    """The point at infinity of the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def scalar(x):
    """Normalise to an exact scalar: ``int``, ``Fraction`` or ``INF``."""
    if x is INF:
        return INF
    if isinstance(x, str):
        if x.strip() in ("inf", "INF"):
            return INF
        return parse_rational(x)
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    raise DomainError(f"{x!r} is not an exact scalar")


def format_scalar(x) -> str:
    x = scalar(x)
    if x is INF:
        return "inf"
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def bits(x) -> int:
    if isinstance(x, Fraction):
        return x.numerator.bit_length() + x.denominator.bit_length()
    if isinstance(x, int):
        return x.bit_length()
    return 0


# --------------------------------------------------------------------------
# Rules
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PolyRule:
    """Local rule ``mu`` given by a polynomial in ``t_0 .. t_r``, variable
    ``t_i`` standing for the cell at offset ``memory[i]``.

    A projective rule additionally carries a homogeneous pair ``(F, G)`` in
    the variables ``(x, y)``; the value at ``(x : y)`` is ``(F : G)``.  Only
    unary projective rules are supported.
    """

    memory: tuple
    poly: Polynomial
    homogeneous: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "memory", tuple(self.memory))
        if list(self.memory) != sorted(set(self.memory)) or not self.memory:
            raise DomainError("memory offsets must be distinct, increasing and nonempty")
        if self.poly.nvars > len(self.memory) and self.poly.used_variables() - set(range(len(self.memory))):
            raise DomainError("the polynomial uses more variables than the memory provides")
        if self.homogeneous is not None:
            if len(self.memory) != 1:
                raise DomainError("projective rules must be unary")
            F, G = self.homogeneous
            if _homogeneous_degree(F) != _homogeneous_degree(G):
                raise DomainError("the projective pair must be homogeneous of one degree")

    @property
    def projective(self) -> bool:
        return self.homogeneous is not None

    @property
    def hull(self) -> Interval:
        return Interval(self.memory[0], self.memory[-1])

    def local(self, values: Sequence):
        """``mu`` at the values of the memory cells, in memory order."""
        if len(values) != len(self.memory):
            raise DomainError(f"need {len(self.memory)} values, got {len(values)}")
        if self.homogeneous is None:
            if any(v is INF for v in values):
                raise DomainError("infinity is not a value of an affine rule")
            return scalar(self.poly.evaluate(values))
        (a,) = values
        F, G = self.homogeneous
        point = (1, 0) if a is INF else (a, 1)
        num, den = F.evaluate(point), G.evaluate(point)
        if den:
            return scalar(Fraction(num) / Fraction(den))
        if num:
            return INF
        raise DomainError(f"the projective rule is undefined at {format_scalar(a)}")


def _homogeneous_degree(p: Polynomial) -> int:
    degrees = {sum(e) for e, _ in p.items()}
    if len(degrees) != 1:
        raise DomainError("polynomial is not homogeneous")
    return degrees.pop()


def riccati_rule() -> PolyRule:
    """``mu(p) = p(1) - p(0)^2`` on the memory ``{0, 1}``."""
    t0, t1 = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    return PolyRule((0, 1), t1 - t0 * t0)


def square_plus_one(projective: bool = False) -> PolyRule:
    """``a -> a^2 + 1``; projectively ``(x : y) -> (x^2 + y^2 : y^2)``."""
    t = Polynomial.variable(0, 1)
    poly = t * t + 1
    if not projective:
        return PolyRule((0,), poly)
    x, y = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    return PolyRule((0,), poly, (x * x + y * y, y * y))


def eval_rule(rule: PolyRule, p) -> object:
    """Evaluate the local rule on a pattern covering the memory (or on a
    sequence of values aligned with the memory)."""
    if isinstance(p, Pattern):
        values = [scalar(p[m]) for m in rule.memory]
    else:
        values = [scalar(v) for v in p]
    return rule.local(values)


def forward(rule: PolyRule, config, k: int, lo: int, hi: int, budget=None) -> tuple:
    """``tau^k(config)`` on ``[lo, hi]`` by direct iteration of the rule."""
    a, b = rule.memory[0], rule.memory[-1]
    start = lo + k * a
    values = [config(n) for n in range(start, hi + k * b + 1)]
    rel = [m - a for m in rule.memory]
    for step in range(k):
        values = [rule.local([values[n + r] for r in rel]) for n in range(len(values) - (b - a))]
        if budget is not None:
            budget.check(max(values, key=bits), f" in forward step {step + 1}")
    return tuple(values)


def forward_word(rule: PolyRule, word: Sequence, k: int) -> tuple:
    a, b = rule.memory[0], rule.memory[-1]
    rel = [m - a for m in rule.memory]
    values = list(word)
    for _ in range(k):
        values = [rule.local([values[n + r] for r in rel]) for n in range(len(values) - (b - a))]
    return tuple(values)


# --------------------------------------------------------------------------
# The nu family
# --------------------------------------------------------------------------


def nu_value(n: int, values: Sequence, budget=None) -> object:
    """``nu_n`` at ``values`` (length ``n``) from the defining recursion.

    Keeps one row ``N(j, s) = nu_j(values[s .. s+j-1])`` at a time, so the
    cost is ``n^2 / 2`` squarings.
    """
    if len(values) != n or n < 1:
        raise DomainError(f"nu_{n} needs exactly {n} values")
    row = [-(v * v) for v in values]
    for j in range(2, n + 1):
        row = [row[s + 1] - (values[s + j - 1] + row[s]) ** 2 for s in range(n - j + 1)]
        if budget is not None:
            budget.check(max(row, key=bits), f" in nu_{n}")
    return scalar(row[0])


def mu_value(n: int, values: Sequence) -> object:
    return scalar(values[n] + nu_value(n, values[:n]))


@dataclass
class NuFamily:
    """``nu_k`` and ``mu_k`` for ``k <= n``.

    Polynomials are held explicitly for ``k <= explicit_upto``; above that
    the family is available in evaluation form through the recursion,
    bottoming out at the explicit polynomials.
    """

    n: int
    explicit_upto: int
    nus: list = field(repr=False)
    mus: list = field(repr=False)

    def nu(self, k: int) -> Polynomial:
        self._check(k)
        if k > self.explicit_upto:
            raise ResourceError(f"nu_{k} is only available in evaluation form")
        return self.nus[k]

    def mu(self, k: int) -> Polynomial:
        self._check(k)
        if k > self.explicit_upto:
            raise ResourceError(f"mu_{k} is only available in evaluation form")
        return self.mus[k]

    def _check(self, k):
        if not 1 <= k <= self.n:
            raise DomainError(f"index {k} outside 1..{self.n}")

    def eval_nu(self, k: int, values: Sequence):
        self._check(k)
        if len(values) != k:
            raise DomainError(f"nu_{k} needs exactly {k} values")
        if k <= self.explicit_upto:
            return scalar(self.nus[k].evaluate(values))
        base = self.explicit_upto
        if base == 0:
            return nu_value(k, values)
        row = [self.nus[base].evaluate(values[s : s + base]) for s in range(k - base + 1)]
        for j in range(base + 1, k + 1):
            row = [row[s + 1] - (values[s + j - 1] + row[s]) ** 2 for s in range(k - j + 1)]
        return scalar(row[0])

    def eval_mu(self, k: int, values: Sequence):
        if len(values) != k + 1:
            raise DomainError(f"mu_{k} needs exactly {k + 1} values")
        return scalar(values[k] + self.eval_nu(k, values[:k]))


def _next_level(nu: Polynomial, mu: Polynomial) -> tuple:
    k = nu.nvars
    nxt = nu.shift(1, k + 1) - mu.square()
    mu_next = Polynomial.variable(k + 1, k + 2) + nxt.with_nvars(k + 2)
    return nxt, mu_next


@lru_cache(maxsize=None)
def _explicit_levels(limit: int, term_budget: int, work_budget: int) -> tuple:
    t0 = Polynomial.variable(0, 1)
    nu1 = -(t0 * t0)
    mu1 = Polynomial.variable(1, 2) + nu1.with_nvars(2)
    nus, mus = [None, nu1], [None, mu1]
    reason = None
    while len(nus) - 1 < limit:
        mu = mus[-1]
        pairs = len(mu) * (len(mu) + 1) // 2
        if pairs > work_budget:
            reason = f"squaring mu_{len(nus) - 1} needs {pairs} products (budget {work_budget})"
            break
        nu_next, mu_next = _next_level(nus[-1], mu)
        if len(mu_next) > term_budget:
            reason = f"mu_{len(nus)} has {len(mu_next)} terms (budget {term_budget})"
            break
        nus.append(nu_next)
        mus.append(mu_next)
    return tuple(nus), tuple(mus), reason


def nu_family(n: int, term_budget: int = 30000, work_budget: int = 2_000_000, lazy: bool = False) -> NuFamily:
    """The polynomials ``nu_k``, ``mu_k`` for ``k <= n``.

    Examples
    --------
    >>> nu_family(2).nu(2).to_string()
    '-1*t0^4 + 2*t0^2*t1 + -2*t1^2'

    When a level exceeds the term or work budget a :class:`ResourceError`
    is raised, unless ``lazy`` is set, in which case the remaining levels
    are served in evaluation form.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    nus, mus, reason = _explicit_levels(n, term_budget, work_budget)
    upto = len(nus) - 1
    if upto < n and not lazy:
        raise ResourceError(reason)
    return NuFamily(n, upto, list(nus), list(mus))


# --------------------------------------------------------------------------
# Budgets
# --------------------------------------------------------------------------


class ComputeBudget:
    """Bit-size and wall-clock limits for exact computations."""

    def __init__(self, max_bits: int | None = None, deadline: float | None = None):
        self.max_bits = max_bits
        self.deadline = None if deadline is None else time.monotonic() + deadline
        self.seconds = deadline

    def check(self, value=None, where: str = ""):
        if self.max_bits is not None and value is not None and bits(value) > self.max_bits:
            raise ResourceError(f"value of {bits(value)} bits exceeds the bit budget {self.max_bits}{where}")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceError(f"time budget of {self.seconds:.1f} s exceeded{where}")


_NO_BUDGET = ComputeBudget()


# --------------------------------------------------------------------------
# Witness constructions
# --------------------------------------------------------------------------


def from_pattern(values: Sequence, start: int = 0, outside=0, name: str = "") -> GeneratedConfig:
    """Configuration equal to ``values`` on ``[start, ...]`` and ``outside``
    elsewhere."""
    vals = tuple(scalar(v) for v in values)
    return GeneratedConfig(start, vals, ConstantTail(outside), ConstantTail(outside), name=name)


def _density_step(n, prev, inputs):
    (lower,) = inputs
    return scalar(lower(n - 1) + prev[0] * prev[0])


@dataclass
class DensityWitness:
    """``d`` (equal to ``c`` on ``[m, oo)`` and zero below) together with
    ``d_0 = d, d_1, ..., d_K`` satisfying ``tau(d_{k+1}) = d_k``."""

    target: GeneratedConfig
    ladder: tuple
    m: int

    def verify(self, lo: int, hi: int, rule: PolyRule | None = None) -> bool:
        """Check ``tau^k(d_k) = d`` on ``[lo, hi]`` for every ``k`` by direct
        iteration on fresh copies (no cache shared with the construction)."""
        if lo < self.m:
            raise DomainError(f"the window must lie in [{self.m}, oo)")
        rule = rule or riccati_rule()
        d = self.target.fresh()
        want = d.block(lo, hi)
        return all(forward(rule, dk.fresh(), k, lo, hi) == want for k, dk in enumerate(self.ladder))


def omega_density_witness(c, m: int, K: int) -> DensityWitness:
    """Exact elements of ``tau^k(Q^Z)`` for ``k <= K`` agreeing with ``c``
    on ``[m, oo)``.

    ``d_{k+1}`` vanishes on ``(-oo, m]`` and satisfies ``d_{k+1}(n+1) =
    d_k(n) + d_{k+1}(n)^2`` for ``n >= m``.
    """
    if K < 0:
        raise DomainError("K must be nonnegative")
    d = GeneratedConfig(m, (), ConstantTail(0), ShiftedTail(c, 0), name="d")
    ladder = [d]
    for k in range(K):
        nxt = GeneratedConfig(m + 1, (), ConstantTail(0), RecurrenceTail(1, _density_step, (ladder[-1],)), name=f"d{k + 1}")
        ladder.append(nxt)
    return DensityWitness(d, tuple(ladder), m)


def _make_preimage_step(n: int, budget: ComputeBudget, nus: NuFamily | None):
    def step(k, prev, inputs):
        (src,) = inputs
        nu = nus.eval_nu(n, prev) if nus is not None else nu_value(n, prev)
        value = scalar(src(k - n) - nu)
        budget.check(value, f" at index {k}")
        return value

    return step


def shifted_preimage(c, n: int, budget: ComputeBudget | None = None) -> GeneratedConfig:
    """``d`` with ``d(k) = c(k)`` for ``k <= 0`` and
    ``d(k) = c(k - n) - nu_n(d(k - n), ..., d(k - 1))`` for ``k >= 1``, so
    that ``tau^n(d)(k) = c(k)`` for all ``k >= 1 - n``."""
    if n < 1:
        raise DomainError("n must be at least 1")
    budget = budget or _NO_BUDGET
    return GeneratedConfig(1, (), ShiftedTail(c, 0), RecurrenceTail(n, _make_preimage_step(n, budget, None), (c,)), name=f"shifted{n}")


def verify_shifted_preimage(c, d, n: int, lo: int, hi: int) -> bool:
    """``tau^n(d) = c`` on ``[lo, hi]`` (needs ``lo >= 1 - n``) and ``d = c``
    on ``[lo, 0]``, by iteration on fresh copies."""
    if lo < 1 - n:
        raise DomainError(f"the identity only holds from index {1 - n}")
    c2 = c.fresh() if isinstance(c, GeneratedConfig) else c
    d2 = d.fresh() if isinstance(d, GeneratedConfig) else d
    if forward(riccati_rule(), d2, n, lo, hi) != tuple(c2(k) for k in range(lo, hi + 1)):
        return False
    return all(d2(k) == c2(k) for k in range(lo, 1))


@dataclass
class RecurrentWitness:
    """``d`` agreeing with ``c`` on ``(-oo, 2 * 3^n0]`` with
    ``tau^(3^(n+1))(d) = d`` on ``[1 - 3^n, 3^n]`` for ``n0 <= n <= N``."""

    source: object
    config: GeneratedConfig
    stages: tuple
    n0: int
    N: int
    budget: ComputeBudget = field(default_factory=ComputeBudget, repr=False)

    def checks(self) -> list:
        return [(3 ** (n + 1), Interval(1 - 3**n, 3**n)) for n in range(self.n0, self.N + 1)]

    def verify(self) -> list:
        """Replay every return check on a fresh copy; returns one
        ``(power, window, passed)`` triple per check.  The construction
        budget applies to the replay as well."""
        rule = riccati_rule()
        out = []
        for power, w in self.checks():
            d = self.config.fresh()
            got = forward(rule, d, power, w.lo, w.hi, self.budget)
            out.append((power, w, got == d.block(w.lo, w.hi)))
        return out


def recurrent_witness(c, n0: int, N: int, max_bits: int | None = None, deadline: float | None = None) -> RecurrentWitness:
    """Stagewise construction: ``d_{n0} = c`` and, with ``P = 3^(n+1)``,
    ``d_{n+1}(k) = d_n(k)`` for ``k <= 2 * 3^n`` and
    ``d_{n+1}(k) = d_n(k - P) - nu_P(d_{n+1}(k - P), ..., d_{n+1}(k - 1))``
    above.  The result is ``d_{N+1}``; values are produced lazily and the
    budget is enforced whenever one is computed."""
    if not 1 <= n0 <= N:
        raise DomainError("need 1 <= n0 <= N")
    budget = ComputeBudget(max_bits, deadline)
    stages = [c]
    for n in range(n0, N + 1):
        P = 3 ** (n + 1)
        s = 2 * 3**n
        prev = stages[-1]
        stage = GeneratedConfig(
            s + 1, (), ShiftedTail(prev, 0), RecurrenceTail(P, _make_stage_step(P, budget), (prev,)), name=f"d{n + 1}"
        )
        stages.append(stage)
    return RecurrentWitness(c, stages[-1], tuple(stages), n0, N, budget)


def _make_stage_step(P: int, budget: ComputeBudget):
    def step(k, prev, inputs):
        (lower,) = inputs
        budget.check(None, f" at index {k}")
        value = scalar(lower(k - P) - nu_value(P, prev, budget))
        budget.check(value, f" at index {k}")
        return value

    return step


# --------------------------------------------------------------------------
# Proof objects
# --------------------------------------------------------------------------


def _frac(x) -> Fraction:
    return Fraction(x)


def _b() -> Polynomial:
    return Polynomial.variable(0, 1)


def _replay_discriminant(data) -> bool:
    a, b, c = (_frac(v) for v in data["coefficients"])
    disc = b * b - 4 * a * c
    return disc == _frac(data["discriminant"]) and disc < 0 and a != 0


def _replay_completion(data) -> bool:
    # (1 + b^2) - b == (b - center)^2 + offset, with offset > 0
    b = _b()
    center, offset = _frac(data["center"]), _frac(data["offset"])
    lhs = (b * b + 1) - b
    rhs = (b - center) * (b - center) + offset
    return (lhs - rhs).is_zero() and offset > 0


def _replay_lower_bound(data) -> bool:
    # (1 + b^2) - bound == b^2, a square, so every chain value is >= bound
    b = _b()
    bound = _frac(data["bound"])
    return ((b * b + 1) - bound - b * b).is_zero()


def _replay_combination(data, steps) -> bool:
    drift, bound = _frac(data["drift"]), _frac(data["bound"])
    completion = next(s for s in steps if s.kind == "completion")
    lower = next(s for s in steps if s.kind == "lower_bound")
    if drift != _frac(completion.data["offset"]) or bound != _frac(lower.data["bound"]):
        return False
    if not (drift > 0):
        return False
    for b0 in data["samples"]:
        b0 = _frac(b0)
        L = math.ceil((b0 - bound) / drift) + 1
        # going back L steps lowers the value by at least L * drift
        if not (b0 - drift * L < bound):
            return False
    return True


@dataclass(frozen=True)
class ProofStep:
    kind: str
    claim: str
    data: dict


@dataclass
class ProofObject:
    """Ordered exact-arithmetic facts and the conclusion they support."""

    steps: list
    conclusion: str
    remarks: tuple = ()

    def replay(self) -> list:
        """Per-step results of independent re-checking."""
        out = []
        for step in self.steps:
            if step.kind == "discriminant":
                ok = _replay_discriminant(step.data)
            elif step.kind == "completion":
                ok = _replay_completion(step.data)
            elif step.kind == "lower_bound":
                ok = _replay_lower_bound(step.data)
            elif step.kind == "combination":
                ok = _replay_combination(step.data, self.steps)
            else:
                ok = False
            out.append(ok)
        return out

    def valid(self) -> bool:
        return all(self.replay())

    def to_text(self) -> str:
        lines = [f"{i}. {s.kind} {json.dumps(s.data, sort_keys=True)} # {s.claim}" for i, s in enumerate(self.steps, 1)]
        lines.append(f"conclusion: {self.conclusion}")
        for r in self.remarks:
            lines.append(f"remark: {r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ProofObject":
        steps, conclusion, remarks = [], "", []
        for line in text.splitlines():
            if line.startswith("conclusion: "):
                conclusion = line[len("conclusion: ") :]
            elif line.startswith("remark: "):
                remarks.append(line[len("remark: ") :])
            elif line.strip():
                head, _, claim = line.partition(" # ")
                _, kind, payload = head.split(" ", 2)
                steps.append(ProofStep(kind, claim, json.loads(payload)))
        return cls(steps, conclusion, tuple(remarks))


def not_in_image_certificate() -> ProofObject:
    """Certificate that the configuration equal to ``1`` on all ``k <= 0``
    has no preimage under ``tau(c)(n) = c(n+1) - c(n)^2``.

    A preimage ``b`` would satisfy ``b(k+1) = 1 + b(k)^2`` for ``k <= -1``.
    """
    steps = [
        ProofStep(
            "discriminant",
            "t^2 - t + 1 has discriminant -3 < 0, so b = 1 + b^2 has no rational or real solution",
            {"coefficients": ["1", "-1", "1"], "discriminant": "-3"},
        ),
        ProofStep(
            "completion",
            "(1 + b^2) - b = (b - 1/2)^2 + 3/4, so each backward step lowers a chain value by at least 3/4",
            {"center": "1/2", "offset": "3/4"},
        ),
        ProofStep(
            "lower_bound",
            "(1 + b^2) - 1 = b^2, so every chain value is at least 1",
            {"bound": "1"},
        ),
        ProofStep(
            "combination",
            "a chain of length ceil(4 (b(0) - 1) / 3) + 1 would reach a value below 1",
            {"drift": "3/4", "bound": "1", "samples": ["1", "2", "5/2", "26", "458330", "1000001/3"]},
        ),
    ]
    return ProofObject(
        steps,
        "the configuration with value 1 on every k <= 0 is not in the image of tau, hence not in its limit set",
        ("surjectivity over the complex numbers needs square roots and is not mechanized",),
    )


def witness_outside_image(cert: ProofObject, witness: RecurrentWitness, depth: int = 20) -> bool:
    """Combine the certificate with a recurrent witness whose source is
    ``1`` on ``k <= 0``: the witness is recurrent on the tested relation yet
    lies outside the limit set."""
    if not cert.valid():
        return False
    c = witness.source
    if not (isinstance(c, GeneratedConfig) and isinstance(c.left, ConstantTail) and c.left.value == 1):
        return False
    d = witness.config.fresh()
    if any(d(k) != 1 for k in range(-depth, 1)):
        return False
    return all(ok for _, _, ok in witness.verify())


# --------------------------------------------------------------------------
# Interval iteration
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IntervalEnclosure:
    """``[lower, upper]`` with ``None`` for an infinite end; ``infinity``
    records whether the projective point is included."""

    lower: object
    upper: object
    infinity: bool = False

    def __post_init__(self):
        if self.lower is not None and self.upper is not None and self.lower > self.upper:
            raise DomainError("empty enclosure")

    def contains(self, x) -> bool:
        if x is INF:
            return self.infinity
        return (self.lower is None or self.lower <= x) and (self.upper is None or x <= self.upper)


def _ipow(lo, hi, e):
    if e == 0:
        return 1, 1
    lo_e = None if lo is None else lo**e
    hi_e = None if hi is None else hi**e
    if e % 2:
        return lo_e, hi_e
    if (lo is None or lo <= 0) and (hi is None or hi >= 0):
        top = None if lo is None or hi is None else max(lo_e, hi_e)
        return 0, top
    if hi is not None and hi < 0:
        return hi_e, lo_e
    return lo_e, hi_e


def _iscale(lo, hi, c):
    if c >= 0:
        return (None if lo is None else c * lo), (None if hi is None else c * hi)
    return (None if hi is None else c * hi), (None if lo is None else c * lo)


def image_enclosure(poly: Polynomial, enc: IntervalEnclosure) -> IntervalEnclosure:
    """Enclosure of ``poly`` over ``enc`` (finite part), term by term."""
    lo_sum, hi_sum = 0, 0
    for (e,), c in poly.items():
        lo, hi = _ipow(enc.lower, enc.upper, e)
        lo, hi = _iscale(lo, hi, c)
        lo_sum = None if lo_sum is None or lo is None else lo_sum + lo
        hi_sum = None if hi_sum is None or hi is None else hi_sum + hi
    return IntervalEnclosure(scalar(lo_sum) if lo_sum is not None else None, scalar(hi_sum) if hi_sum is not None else None)


@dataclass
class IntervalIteration:
    """Enclosures ``I_1, I_2, ...`` of ``f^n`` of the whole domain.

    ``certified_at`` is the first ``n`` with ``I_n`` disjoint from
    ``[-B, B]``, which shows that no configuration with all values in
    ``[-B, B]`` lies in the limit set.  In projective mode ``omega`` is the
    certified limit set and ``certificate`` shows that the map is not
    nilpotent.
    """

    enclosures: list
    bound: object
    certified_at: int | None
    verdict: str
    omega: tuple | None = None
    certificate: dict | None = None

    @property
    def lowers(self) -> list:
        return [e.lower for e in self.enclosures]


def interval_iteration(rule: PolyRule, n: int | None = None, B=None, max_steps: int = 64) -> IntervalIteration:
    """Iterate enclosures of the image of a unary polynomial rule.

    Examples
    --------
    >>> it = interval_iteration(square_plus_one(), n=4)
    >>> it.lowers
    [1, 2, 5, 26]
    """
    if len(rule.memory) != 1:
        raise DomainError("interval iteration needs a unary rule")
    poly = rule.poly
    enc = IntervalEnclosure(None, None, rule.projective)
    enclosures = []
    certified = None
    steps = n if n is not None else max_steps
    for k in range(1, steps + 1):
        finite = image_enclosure(poly, enc)
        inf_in = False
        if rule.projective and enc.infinity:
            inf_in = rule.local([INF]) is INF
        enc = IntervalEnclosure(finite.lower, finite.upper, inf_in)
        enclosures.append(enc)
        if B is not None and certified is None and _disjoint(enc, B):
            certified = k
            if n is None:
                break
    if rule.projective:
        return _projective_verdict(rule, enclosures, B, certified)
    if B is None:
        verdict = "enclosures computed"
    elif certified is None:
        verdict = f"not certified within {steps} steps"
    else:
        verdict = f"no configuration with values in [-{B}, {B}] lies in the limit set"
    return IntervalIteration(enclosures, B, certified, verdict)


def _disjoint(enc: IntervalEnclosure, B) -> bool:
    return (enc.lower is not None and enc.lower > B) or (enc.upper is not None and enc.upper < -B)


def _projective_verdict(rule, enclosures, B, certified):
    cert = projective_certificate(rule, len(enclosures))
    ok = replay_projective_certificate(rule, cert)
    verdict = "limit set is the constant configuration inf; not nilpotent" if ok else "not certified"
    return IntervalIteration(enclosures, B, certified, verdict, (INF,) if ok else None, cert)


def projective_certificate(rule: PolyRule, steps: int = 6) -> dict:
    """Data showing ``Omega = {inf^Z}`` and non-nilpotency for a projective
    rule whose finite part is ``a -> a^2 + c`` with ``c > 1/4``."""
    orbit = [0]
    for _ in range(steps):
        orbit.append(rule.local([orbit[-1]]))
    return {
        "infinity_fixed": True,
        "finite_denominator": rule.homogeneous[1].to_string(["x", "y"]),
        "orbit_of_zero": [format_scalar(v) for v in orbit],
        "drift_center": "1/2",
        "drift_offset": "3/4",
    }


def replay_projective_certificate(rule: PolyRule, cert: dict) -> bool:
    """Replay: ``inf`` is fixed; finite points stay finite (the denominator
    is ``y^2``, nonzero at ``y = 1``); ``f(a) - a = (a - 1/2)^2 + 3/4`` so
    every finite orbit drifts to infinity and the enclosures leave every
    bounded set; the orbit of ``0`` is finite and strictly increasing, so no
    power of the automaton is constant."""
    if rule.local([INF]) is not INF:
        return False
    y = Polynomial.variable(1, 2)
    F, G = rule.homogeneous
    if G != y * y:
        return False
    a = Polynomial.variable(0, 1)
    # F(a, 1) as a univariate polynomial
    fa = Polynomial(1)
    for (ex, ey), c in F.items():
        fa = fa + c * a**ex
    center, offset = Fraction(cert["drift_center"]), Fraction(cert["drift_offset"])
    if not ((fa - a) - ((a - center) * (a - center) + offset)).is_zero() or offset <= 0:
        return False
    orbit = [scalar(v) for v in cert["orbit_of_zero"]]
    if orbit[0] != 0 or any(v is INF for v in orbit):
        return False
    for u, v in zip(orbit, orbit[1:]):
        if rule.local([u]) != v or not v > u:
            return False
    return True


# --------------------------------------------------------------------------
# Lifting finite automata
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LiftCheck:
    rule: PolyRule
    checked: int
    agreed: int

    @property
    def ok(self) -> bool:
        return self.checked == self.agreed


def lift_check(ca: CellularAutomaton, embedding=None) -> LiftCheck:
    """Interpolating polynomial rule and its exhaustive agreement with the
    table on the embedded alphabet."""
    import itertools

    k = len(ca.source)
    if embedding is None:
        embedding = list(range(k))
    if isinstance(embedding, dict):
        embedding = [embedding[i] for i in range(k)]
    emb = [scalar(Fraction(v)) for v in embedding]
    tgt = emb if ca.target == ca.source else list(range(len(ca.target)))
    poly = lagrange_lift(ca, emb, tgt)
    rule = PolyRule(ca.memory, poly.with_nvars(len(ca.memory)))
    agreed = checked = 0
    for word in itertools.product(range(k), repeat=len(ca.memory)):
        checked += 1
        if rule.local([emb[a] for a in word]) == tgt[ca.local(word)]:
            agreed += 1
    return LiftCheck(rule, checked, agreed)
