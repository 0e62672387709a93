import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from limitset.automata import apply_to_pattern, apply_to_periodic
from limitset.core import Interval, Pattern, PeriodicConfig
from limitset.dynamics import (
    Chain,
    ChainExhausted,
    LimitWitness,
    NilpotencyBudget,
    PeriodicWitness,
    chain_recurrence_certificate,
    eventual_cycles,
    finiteness,
    image_chain,
    limit_set,
    nilpotency,
    omega_in_fixed_points,
)
from limitset.errors import DomainError
from limitset.library import (
    and_rule,
    binary_rule,
    constant_rule,
    elementary_rule,
    full_shift,
    golden_mean,
    identity_rule,
    path_sft,
    periodic_orbit,
    shift_rule,
    xor_rule,
)


def test_image_chains():
    assert image_chain(full_shift(), constant_rule(0), 4).stabilized_at == 1
    assert image_chain(full_shift(), xor_rule(), 4).stabilized_at == 0
    c = image_chain(full_shift(), and_rule(), 6)
    assert c.stabilized_at is None and len(c.presentations) == 7


def test_image_chain_needs_invariance():
    # mu(a, b) = a or b sends (10)^Z to 1^Z, which leaves the golden mean
    ca = binary_rule(0b1110)
    with pytest.raises(DomainError):
        image_chain(golden_mean(), ca, 2)


def test_limit_set_reports():
    rep = limit_set(full_shift(), constant_rule(1), 4)
    assert rep.status == "stabilized" and rep.singleton and rep.invariant
    rep = limit_set(periodic_orbit((0, 1)), shift_rule(), 4)
    assert rep.finite and len(rep.members) == 2 and not rep.singleton
    rep = limit_set(full_shift(), and_rule(), 3)
    assert rep.status == "truncated" and set(rep.languages) == {1, 2, 3, 4}


def test_finiteness():
    assert finiteness(periodic_orbit((0, 0, 1))).finite
    assert not finiteness(golden_mean()).finite


@given(st.dictionaries(st.integers(0, 9), st.integers(0, 9), min_size=10, max_size=10))
def test_eventual_cycles_brute_force(f):
    cycles = eventual_cycles(range(10), f.__getitem__)
    for x in range(10):
        orbit = [x]
        for _ in range(10):
            orbit.append(f[orbit[-1]])
        periodic = x in orbit[1:]
        assert periodic == (x in cycles)
        if periodic:
            assert cycles[x] == orbit[1:].index(x) + 1


def test_omega_in_fixed_points():
    assert omega_in_fixed_points(full_shift(), constant_rule(0), 3) == {PeriodicConfig((0,))}
    assert len(omega_in_fixed_points(full_shift(), identity_rule(), 2)) == 4


def test_chain_recurrence():
    c = chain_recurrence_certificate(xor_rule(), PeriodicConfig((0, 1)), Interval(0, 1), 6)
    assert isinstance(c, Chain) and c.replay(xor_rule())
    out = chain_recurrence_certificate(constant_rule(0), PeriodicConfig((1,)), Interval(0, 0), 4)
    assert isinstance(out, ChainExhausted)
    with pytest.raises(DomainError):
        chain_recurrence_certificate(xor_rule(), PeriodicConfig((1,)), Interval(0, 0), 4, golden_mean())


def _constant_after(ca, k):
    """Brute force: tau^k maps every word of the right length to one value."""
    width = k * ca.width - (k - 1)
    values = set()
    for w in itertools.product(range(2), repeat=width):
        p = Pattern.word(w)
        for _ in range(k):
            p = apply_to_pattern(ca, p)
        values |= set(p.values)
    return len(values) == 1


def test_width_two_corpus():
    for n in range(16):
        ca = binary_rule(n)
        v = nilpotency(full_shift(), ca)
        assert v.kind == ("Nilpotent" if n in (0, 15) else "NonNilpotent")
        assert v.replay(full_shift(), ca)


def test_nilpotent_elementary_rules_by_brute_force():
    budget = NilpotencyBudget(chain_length=0)
    nilpotent = [n for n in range(256) if nilpotency(full_shift(), elementary_rule(n), budget).kind == "Nilpotent"]
    assert nilpotent == [0, 8, 64, 239, 253, 255]
    for n in nilpotent:
        assert _constant_after(elementary_rule(n), 2)
    assert not any(_constant_after(elementary_rule(n), 3) for n in (1, 30, 32, 110, 128))


def test_certificates_replay_and_reject_tampering():
    v = nilpotency(full_shift(), and_rule())
    assert isinstance(v.witness, PeriodicWitness) and v.replay(full_shift(), and_rule())
    (x, kx), _ = v.witness.points
    bad = PeriodicWitness(((x, kx), (x, kx)))
    assert not bad.replay(full_shift(), and_rule())


def test_limit_witness_from_chain_prover():
    budget = NilpotencyBudget(max_power=1, max_period=1, chain_length=4)
    v = nilpotency(full_shift(), xor_rule(), budget)
    assert isinstance(v.witness, LimitWitness) and v.replay(full_shift(), xor_rule())


def test_unknown_when_budgets_are_tiny():
    budget = NilpotencyBudget(max_power=1, max_period=1, chain_length=1)
    v = nilpotency(full_shift(), elementary_rule(8), budget)
    assert v.kind == "Unknown" and not v.replay(full_shift(), elementary_rule(8))


def test_nilpotency_hypotheses_and_errors():
    v = nilpotency(periodic_orbit((0, 1)), shift_rule())
    assert v.kind == "NonNilpotent" and not v.mixing.mixing and v.notes
    with pytest.raises(DomainError):
        nilpotency(path_sft(), identity_rule(path_sft().alphabet))


def test_identity_witness_is_the_two_constants():
    v = nilpotency(full_shift(), identity_rule())
    assert [x for x, _ in v.witness.points] == [PeriodicConfig((0,)), PeriodicConfig((1,))]
    assert apply_to_periodic(identity_rule(), PeriodicConfig((1,))) == PeriodicConfig((1,))


def test_non_invariant_subshift_rejected():
    with pytest.raises(DomainError):
        omega_in_fixed_points(golden_mean(), xor_rule(), 2)
    with pytest.raises(DomainError):
        nilpotency(golden_mean(), xor_rule())
