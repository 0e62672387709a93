import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from limitset.core import ConstantTail, GeneratedConfig
from limitset.errors import DomainError, ResourceError
from limitset.library import constant_rule, xor_rule
from limitset.automata import CellularAutomaton, iterate_word
from limitset.core import FiniteAlphabet
from limitset.polyca import (
    INF,
    IntervalEnclosure,
    PolyRule,
    ProofObject,
    eval_rule,
    forward,
    forward_word,
    from_pattern,
    interval_iteration,
    lift_check,
    not_in_image_certificate,
    nu_family,
    nu_value,
    omega_density_witness,
    recurrent_witness,
    replay_projective_certificate,
    riccati_rule,
    scalar,
    shifted_preimage,
    square_plus_one,
    verify_shifted_preimage,
    witness_outside_image,
)
from limitset.polynomial import Polynomial

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def composed_mu(n):
    """mu_n by n-fold symbolic application of the rule."""
    t = sympy.symbols(f"t0:{n + 1}")
    vals = list(t)
    for _ in range(n):
        vals = [vals[i + 1] - vals[i] ** 2 for i in range(len(vals) - 1)]
    return sympy.expand(vals[0]), t


def as_sympy(p, syms):
    out = sympy.Integer(0)
    for exps, c in p.items():
        term = sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
        for s, e in zip(syms, exps):
            term *= s**e
        out += term
    return out


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_mu_matches_symbolic_composition(n):
    fam = nu_family(n)
    want, syms = composed_mu(n)
    assert sympy.expand(as_sympy(fam.mu(n), syms) - want) == 0
    # mu_n = t_n + nu_n(t_0 .. t_{n-1})
    diff = fam.mu(n) - Polynomial.variable(n, n + 1) - fam.nu(n).with_nvars(n + 1)
    assert diff.is_zero()


def test_nu_two_closed_form():
    t0, t1 = Polynomial.variable(0, 2), Polynomial.variable(1, 2)
    assert nu_family(2).nu(2) == -(t1 * t1) - (t1 - t0 * t0).square()


@pytest.mark.parametrize("n", range(1, 6))
def test_nu_vanishes_at_zero(n):
    assert nu_family(n).nu(n).evaluate([0] * n) == 0


def test_explicit_budget_and_lazy_mode():
    with pytest.raises(ResourceError):
        nu_family(8)
    fam = nu_family(8, lazy=True)
    assert fam.explicit_upto == 7 and len(fam.mu(7)) == 27338
    with pytest.raises(ResourceError):
        fam.mu(8)
    rng = random.Random(7)
    for _ in range(50):
        v = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(9)]
        assert fam.eval_mu(8, v) == forward_word(riccati_rule(), v, 8)[0]


@given(st.integers(1, 6), st.lists(rationals, min_size=7, max_size=7))
def test_nu_recursion_agrees_with_forward_iteration(n, v):
    v = v[: n + 1]
    assert scalar(v[n] + nu_value(n, v[:n])) == forward_word(riccati_rule(), v, n)[0]


def test_shifted_preimage_examples():
    zero = GeneratedConfig.constant(0)
    assert shifted_preimage(zero, 2).block(-3, 6) == (0,) * 10
    one = GeneratedConfig.constant(1)
    d = shifted_preimage(one, 1)
    assert d(0) == 1 and d(1) == 2
    assert forward(riccati_rule(), d, 1, 0, 0) == (1,)


@given(st.lists(rationals, min_size=7, max_size=7), st.integers(1, 4))
def test_shifted_preimage_random(values, n):
    c = from_pattern(values, -3)
    d = shifted_preimage(c, n)
    assert verify_shifted_preimage(c, d, n, 1 - n, 3)


def test_shifted_preimage_uses_fresh_evaluation():
    c = from_pattern([1, 2, 3], 0)
    d = shifted_preimage(c, 2)
    d.block(1, 6)
    assert d._cache and d.fresh()._cache == {}


def test_density_witness_examples():
    w = omega_density_witness(GeneratedConfig.constant(1), 0, 2)
    assert w.target.block(-2, 2) == (0, 0, 1, 1, 1) and w.verify(0, 2)
    z = omega_density_witness(GeneratedConfig.constant(0), 3, 2)
    assert all(dk.block(-3, 6) == (0,) * 10 for dk in z.ladder)
    w = omega_density_witness(from_pattern([1, 2, 3], 0), 0, 3)
    assert w.verify(0, 2)
    with pytest.raises(DomainError):
        w.verify(-1, 2)


def test_density_ladder_recursion():
    w = omega_density_witness(from_pattern([Fraction(1, 2), -1, 3], 0), 0, 3)
    for lower, upper in zip(w.ladder, w.ladder[1:]):
        assert all(upper(n) == 0 for n in range(-4, 1))
        assert all(upper(n + 1) == lower(n) + upper(n) ** 2 for n in range(0, 6))


def test_recurrent_witness_power_nine():
    c = GeneratedConfig.constant(1)
    w = recurrent_witness(c, 1, 1)
    assert w.verify() == [(9, w.checks()[0][1], True)]
    assert all(w.config(k) == c(k) for k in range(-5, 7))
    zero = recurrent_witness(GeneratedConfig.constant(0), 1, 2)
    assert all(ok for _, _, ok in zero.verify())


def test_recurrent_witness_budget():
    w = recurrent_witness(GeneratedConfig.constant(1), 1, 2, max_bits=10_000)
    with pytest.raises(ResourceError):
        w.verify()


def test_certificate_replay_and_negative_control():
    cert = not_in_image_certificate()
    assert len(cert.steps) == 4 and cert.replay() == [True] * 4
    text = cert.to_text()
    assert ProofObject.from_text(text).to_text() == text
    bad = ProofObject.from_text(text.replace('"offset": "3/4"', '"offset": "1/2"'))
    assert not bad.replay()[1] and not bad.valid()
    disc = ProofObject.from_text(text.replace('"discriminant": "-3"', '"discriminant": "-2"'))
    assert not disc.valid()


def test_certificate_consistency_with_recurrent_witness():
    cert = not_in_image_certificate()
    assert witness_outside_image(cert, recurrent_witness(GeneratedConfig.constant(1), 1, 1))
    assert not witness_outside_image(cert, recurrent_witness(GeneratedConfig.constant(0), 1, 1))


def test_drift_identity():
    b = Polynomial.variable(0, 1)
    half = Fraction(1, 2)
    assert ((b * b + 1) - b - ((b - half) * (b - half) + Fraction(3, 4))).is_zero()


def test_interval_iteration_affine():
    it = interval_iteration(square_plus_one(), n=4)
    assert it.lowers == [1, 2, 5, 26]
    it = interval_iteration(square_plus_one(), B=10**6)
    assert it.lowers[4:] == [677, 458330, 210066388901] and it.certified_at == 7
    with pytest.raises(DomainError):
        interval_iteration(riccati_rule())


@given(rationals, st.integers(1, 10))
def test_enclosure_soundness(x, n):
    rule = square_plus_one()
    it = interval_iteration(rule, n=n)
    y = x
    for k in range(n):
        y = rule.local([y])
        assert it.enclosures[k].contains(y)


def test_projective_mode():
    rule = square_plus_one(projective=True)
    assert rule.local([INF]) is INF and rule.local([2]) == 5
    it = interval_iteration(rule, n=5)
    assert it.omega == (INF,) and "not nilpotent" in it.verdict
    assert replay_projective_certificate(rule, it.certificate)
    forged = dict(it.certificate, orbit_of_zero=["0", "1", "3"])
    assert not replay_projective_certificate(rule, forged)
    with pytest.raises(DomainError):
        square_plus_one().local([INF])


def test_enclosure_rejects_empty():
    with pytest.raises(DomainError):
        IntervalEnclosure(2, 1)


def test_lift_check_examples():
    x = lift_check(xor_rule())
    assert x.ok and x.checked == 4 and x.rule.local([1, 1]) == 0
    c = lift_check(constant_rule(0, memory=(0, 1)))
    assert c.ok and c.rule.poly.is_zero()
    three = FiniteAlphabet.of_size(3)
    ca = CellularAutomaton.from_function(three, (0, 1), lambda w: 0 if w[0] and w[1] else max(w))
    g = lift_check(ca, [0, 1, 5])
    assert g.ok and g.checked == 9


@given(st.lists(st.integers(0, 1), min_size=4, max_size=9), st.integers(1, 3))
def test_lifted_rule_reproduces_the_automaton(word, n):
    rule = lift_check(xor_rule()).rule
    if len(word) <= n:
        return
    assert forward_word(rule, word, n) == iterate_word(xor_rule(), word, n)


def test_eval_rule_and_validation():
    assert eval_rule(riccati_rule(), [2, 3]) == -1
    with pytest.raises(DomainError):
        PolyRule((1, 0), Polynomial.variable(0, 2))
    with pytest.raises(DomainError):
        riccati_rule().local([1])
    assert scalar("3/6") == Fraction(1, 2) and scalar("inf") is INF
