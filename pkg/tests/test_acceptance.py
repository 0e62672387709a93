"""Acceptance criteria 1-16, one test each.

Every test records a single ``criterion N: PASS|FAIL (...)`` line (shown in
the terminal summary) and then asserts.  Comparisons are exact; the only
tolerances are the wall-clock limits pinned below.
"""

import itertools
import random
import time
from fractions import Fraction

import sympy

from limitset.appendix import appendix_fixture
from limitset.automata import image_presentation
from limitset.core import FiniteAlphabet, GeneratedConfig, Interval, PeriodicConfig
from limitset.dynamics import (
    NilpotencyBudget,
    PeriodicWitness,
    image_chain,
    limit_set,
    nilpotency,
    omega_in_fixed_points,
)
from limitset.errors import ResourceError
from limitset.library import (
    and_rule,
    binary_rule,
    elementary_rule,
    full_shift,
    golden_mean,
    identity_rule,
    path_sft,
    periodic_orbit,
    xor_rule,
)
from limitset.polyca import (
    INF,
    forward,
    forward_word,
    from_pattern,
    interval_iteration,
    not_in_image_certificate,
    nu_family,
    omega_density_witness,
    recurrent_witness,
    replay_projective_certificate,
    riccati_rule,
    shifted_preimage,
    square_plus_one,
    verify_shifted_preimage,
)
from limitset.shifts import (
    FiniteSubshift,
    Sft,
    check_mixing,
    equal_subshifts,
    finite_to_sft,
    presentation,
    window_language,
)
from limitset.spacetime import build, check_commutation, outer_intersection

# wall-clock limits in seconds
LIMIT_WIDTH_TWO = 5.0
LIMIT_ELEMENTARY = 60.0
LIMIT_COMMUTATION = 10.0
LIMIT_ROUND_TRIP = 10.0
LIMIT_RECURRENT = 60.0
LIMIT_INTERVAL = 1.0
LIMIT_MIXING = 1.0

SEED = 20240604
CHAIN_BUDGET = 8
ECA_STATE_CAP = 1 << 10


def conclude(report_line, n, ok, detail):
    report_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


def random_rational(rng):
    return Fraction(rng.randint(-9, 9), rng.randint(1, 5))


# --------------------------------------------------------------------------


def test_criterion_01_width_two_corpus(report_line):
    start = time.perf_counter()
    X = full_shift()
    nilpotent, unknown, bad_replay, equivalence_failures, stabilized = [], [], [], [], 0
    for n in range(16):
        ca = binary_rule(n)
        v = nilpotency(X, ca)
        if v.kind == "Nilpotent":
            nilpotent.append(n)
        elif v.kind == "Unknown":
            unknown.append(n)
        if v.kind != "Unknown" and not v.replay(X, ca):
            bad_replay.append(n)
        rep = limit_set(X, ca, CHAIN_BUDGET)
        if rep.status == "stabilized":
            stabilized += 1
            singleton = bool(rep.singleton)
            if not ((v.kind == "Nilpotent") == singleton == bool(rep.finite)):
                equivalence_failures.append(n)
    elapsed = time.perf_counter() - start
    ok = nilpotent == [0, 15] and not unknown and not bad_replay and not equivalence_failures and elapsed < LIMIT_WIDTH_TWO
    detail = (
        f"nilpotent={nilpotent}, unknown={unknown}, replay failures={bad_replay}, "
        f"{stabilized} stabilized chains, equivalence failures={equivalence_failures}, {elapsed:.2f}s"
    )
    conclude(report_line, 1, ok, detail)


def test_criterion_02_elementary_corpus(report_line):
    start = time.perf_counter()
    X = full_shift()
    budget = NilpotencyBudget(chain_length=0, max_period=6)
    nilpotent, unknown, other, bad_replay = [], [], [], []
    for n in range(256):
        ca = elementary_rule(n)
        v = nilpotency(X, ca, budget)
        if v.kind == "Nilpotent":
            nilpotent.append(n)
        elif v.kind == "Unknown":
            unknown.append(n)
        elif not isinstance(v.witness, PeriodicWitness) or max(x.period for x, _ in v.witness.points) > 6:
            other.append(n)
        if v.kind != "Unknown" and not v.replay(X, ca):
            bad_replay.append(n)
    elapsed = time.perf_counter() - start
    extra = [n for n in nilpotent if n not in (0, 255)]
    ok = nilpotent == [0, 255] and not unknown and not other and not bad_replay and elapsed < LIMIT_ELEMENTARY
    detail = (
        f"nilpotent={nilpotent} (beyond the constant rules: {extra}), unknown={unknown}, "
        f"non-periodic witnesses={other}, replay failures={bad_replay}, {elapsed:.2f}s"
    )
    conclude(report_line, 2, ok, detail)


def test_criterion_03_spacetime_commutation(report_line):
    start = time.perf_counter()
    failures, checked = [], 0
    for shift_name, shift in (("full", full_shift), ("golden", golden_mean)):
        for rule_name, rule in (("identity", identity_rule), ("xor", xor_rule), ("and", and_rule)):
            sys = build(shift(), rule())
            for i, j in itertools.product(range(3), repeat=2):
                r = check_commutation(sys, i, j)
                checked += r.checked
                if not r.ok:
                    failures.append((shift_name, rule_name, i, j))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < LIMIT_COMMUTATION
    conclude(report_line, 3, ok, f"{checked} patterns checked, failures={failures}, {elapsed:.2f}s")


def _random_sfts(rng, count):
    out = []
    while len(out) < count:
        k, w = rng.randint(2, 3), rng.randint(2, 3)
        words = list(itertools.product(range(k), repeat=w))
        allowed = frozenset(x for x in words if rng.random() < 0.6)
        out.append(Sft(FiniteAlphabet.of_size(k), Interval(0, w - 1), allowed))
    return out


def test_criterion_04_outer_intersection(report_line):
    problems = []
    golden = build(golden_mean(), identity_rule())
    for K in range(0, 6):
        oi = outer_intersection(golden, 0, 0, K)
        if oi.language.words != window_language(golden_mean(), golden.window(0, 0)).words:
            problems.append(("golden", K))
    path = build(path_sft(), identity_rule(path_sft().alphabet))
    path_oi = outer_intersection(path, 0, 0, 2)
    if len(path_oi) or len(window_language(path_sft(), path.window(0, 0))):
        problems.append(("path", 2))
    rng = random.Random(SEED)
    for idx, sft in enumerate(_random_sfts(rng, 10)):
        sys = build(sft, identity_rule(sft.alphabet))
        for i, j in ((0, 0), (1, 0), (0, 1)):
            oi = outer_intersection(sys, i, j, 5)
            if oi.language.words != window_language(sft, sys.window(i, j)).words:
                problems.append(("random", idx, i, j))
    ok = not problems
    conclude(report_line, 4, ok, f"golden equal from K=0, path empty by K=2, 10 random SFTs; mismatches={problems}")


def _stabilized_limits():
    """Limits of the chains that stabilize within the budget in criteria 1-2."""
    X = full_shift()
    out = []
    for n in range(16):
        ca = binary_rule(n)
        chain = image_chain(X, ca, CHAIN_BUDGET)
        if chain.stabilized_at is not None:
            out.append((f"w2:{n}", ca, chain.limit))
    for n in range(256):
        ca = elementary_rule(n)
        try:
            chain = image_chain(X, ca, CHAIN_BUDGET, ECA_STATE_CAP)
        except ResourceError:
            continue
        if chain.stabilized_at is not None:
            out.append((f"eca:{n}", ca, chain.limit))
    return out


def test_criterion_05_limit_invariance(report_line):
    limits = _stabilized_limits()
    failures = [name for name, ca, omega in limits if not equal_subshifts(image_presentation(ca, omega), omega)]
    ok = bool(limits) and not failures
    conclude(report_line, 5, ok, f"{len(limits)} stabilized chains, tau(omega) != omega for {failures}")


def test_criterion_06_periodic_limit_points(report_line):
    X = full_shift()
    problems = []
    for n in range(16):
        ca = binary_rule(n)
        deep = image_chain(X, ca, 6).presentations[-1]
        languages = {L: window_language(deep, L).words for L in range(1, 7)}
        for p in (1, 2, 3):
            points = omega_in_fixed_points(X, ca, p)
            if not points:
                problems.append((n, p, "empty"))
            for x in points:
                if any(x.block(0, L - 1) not in languages[L] for L in languages):
                    problems.append((n, p, x.values))
    ok = not problems
    conclude(report_line, 6, ok, f"16 rules x p in {{1,2,3}}; problems={problems}")


def _necklaces(k, p):
    seen, out = set(), []
    for values in itertools.product(range(k), repeat=p):
        x = PeriodicConfig(values)
        if x.period != p or x in seen:
            continue
        seen |= x.orbit()
        out.append(values)
    return out


def test_criterion_07_finite_round_trip(report_line):
    start = time.perf_counter()
    failures, count = [], 0
    for k in (1, 2, 3):
        alphabet = FiniteAlphabet.of_size(k)
        for p in range(1, 6):
            for word in _necklaces(k, p):
                fs = FiniteSubshift.orbit(word)
                count += 1
                if not equal_subshifts(finite_to_sft(fs, alphabet), presentation(fs, alphabet)):
                    failures.append((k, word))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < LIMIT_ROUND_TRIP
    conclude(report_line, 7, ok, f"{count} orbits, failures={failures}, {elapsed:.2f}s")


def test_criterion_08_density_witness(report_line):
    rng = random.Random(SEED + 8)
    failures = []
    for t in range(20):
        values = [random_rational(rng) for _ in range(11)]
        c = from_pattern(values, -5)
        w = omega_density_witness(c, -5, 10)
        if w.target.block(-5, 5) != tuple(values) or not w.verify(-5, 5):
            failures.append(t)
    conclude(report_line, 8, not failures, f"20 targets on [-5,5], k <= 10, failures={failures}")


def test_criterion_09_shifted_preimages(report_line):
    rng = random.Random(SEED + 9)
    failures = []
    for t in range(20):
        c = from_pattern([random_rational(rng) for _ in range(13)], -6)
        for n in range(1, 5):
            d = shifted_preimage(c, n)
            if not verify_shifted_preimage(c, d, n, 1 - n, 6):
                failures.append((t, n))
    conclude(report_line, 9, not failures, f"20 configurations, n <= 4, failures={failures}")


def test_criterion_10_recurrent_witness(report_line):
    start = time.perf_counter()
    rng = random.Random(SEED + 10)
    sources = [GeneratedConfig.constant(1)] + [
        from_pattern([random_rational(rng) for _ in range(19)], -9) for _ in range(5)
    ]
    rule = riccati_rule()
    # one witness per source carries both return checks; the whole run shares
    # the wall-clock limit and a bit-size cap on every intermediate value
    witnesses = []
    for c in sources:
        remaining = max(LIMIT_RECURRENT - (time.perf_counter() - start), 0.0)
        witnesses.append(recurrent_witness(c, 1, 2, max_bits=1 << 26, deadline=remaining))
    passed = {9: 0, 27: 0}
    reason = ""
    for power in (9, 27):
        for w in witnesses:
            (window,) = [win for pw, win in w.checks() if pw == power]
            d = w.config.fresh()
            try:
                got = forward(rule, d, power, window.lo, window.hi, w.budget)
            except ResourceError as exc:
                reason = str(exc)
                break
            passed[power] += got == d.block(window.lo, window.hi)
        if reason:
            break
    elapsed = time.perf_counter() - start
    ok = passed == {9: len(sources), 27: len(sources)} and elapsed < LIMIT_RECURRENT
    detail = f"power 9 passed {passed[9]}/{len(sources)}, power 27 passed {passed[27]}/{len(sources)}"
    if reason:
        detail += f", stopped: {reason}"
    conclude(report_line, 10, ok, f"{detail}, {elapsed:.1f}s")


def test_criterion_11_not_in_image(report_line):
    cert = not_in_image_certificate()
    steps = cert.replay()
    corrupted = type(cert).from_text(cert.to_text().replace('"offset": "3/4"', '"offset": "1/2"'))
    disc = cert.steps[0].data["discriminant"]
    drift = cert.steps[1].data["offset"]
    ok = steps == [True] * 4 and disc == "-3" and drift == "3/4" and not corrupted.valid()
    conclude(report_line, 11, ok, f"replay={steps}, discriminant={disc}, drift={drift}, corrupted replay={corrupted.replay()}")


def test_criterion_12_square_plus_one(report_line):
    start = time.perf_counter()
    B = 10**6
    first = interval_iteration(square_plus_one(), n=4).lowers
    it = interval_iteration(square_plus_one(), B=B)
    # independent exact iteration of a -> a^2 + 1 from 1
    a, n = 1, 1
    while a <= B:
        a, n = a * a + 1, n + 1
    elapsed = time.perf_counter() - start
    ok = first == [1, 2, 5, 26] and it.certified_at == n and it.lowers[n - 1] > B >= it.lowers[n - 2] and elapsed < LIMIT_INTERVAL
    conclude(report_line, 12, ok, f"a1..a4={first}, certified at n={it.certified_at} (a_n={it.lowers[-1]}), {elapsed:.3f}s")


def test_criterion_13_projective(report_line):
    rule = square_plus_one(projective=True)
    it = interval_iteration(rule, n=6)
    replayed = replay_projective_certificate(rule, it.certificate)
    ok = it.omega == (INF,) and replayed and "not nilpotent" in it.verdict
    conclude(report_line, 13, ok, f"omega={it.omega}, certificate replayed={replayed}")


def test_criterion_14_nu_recursion(report_line):
    fam = nu_family(8, lazy=True)
    symbolic = []
    for n in range(1, 5):
        t = sympy.symbols(f"t0:{n + 1}")
        vals = list(t)
        for _ in range(n):
            vals = [vals[i + 1] - vals[i] ** 2 for i in range(len(vals) - 1)]
        ours = sum(
            (sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * sympy.prod([s**e for s, e in zip(t, ex)]) for ex, c in fam.mu(n).items()),
            sympy.Integer(0),
        )
        symbolic.append(sympy.expand(ours - vals[0]) == 0)
    rng = random.Random(SEED + 14)
    numeric = []
    for n in range(1, 9):
        agree = 0
        for _ in range(50):
            v = [random_rational(rng) for _ in range(n + 1)]
            agree += fam.eval_mu(n, v) == forward_word(riccati_rule(), v, n)[0]
        numeric.append(agree)
    ok = all(symbolic) and numeric == [50] * 8
    conclude(report_line, 14, ok, f"symbolic n<=4 {symbolic}, random agreement n=1..8 {numeric}, explicit up to n={fam.explicit_upto}")


def test_criterion_15_appendix_fixtures(report_line):
    N = 50
    empty = appendix_fixture("empty_limit")
    probe = empty.probe(N, 3 * N, 3 * N)
    empty_ok = not any(v < N for v in probe)
    single = appendix_fixture("singleton_not_pointwise")
    single_ok = single.probe(102, 200, 100) == {1} and all(single.iterate(2, k) == k + 2 for k in range(200))
    surj = appendix_fixture("surjective_pointwise_nilpotent")
    M = 10**4
    onto = all(surj(surj.preimage(m)) == m for m in range(M))
    pointwise = all(surj.steps_to(m, 0, M) is not None for m in range(M))
    ok = empty_ok and single_ok and onto and pointwise
    conclude(report_line, 15, ok, f"empty_limit={empty_ok}, singleton={single_ok}, surjective={onto}, pointwise nilpotent={pointwise}")


def test_criterion_16_mixing(report_line):
    start = time.perf_counter()
    full = check_mixing(full_shift()).mixing
    golden = check_mixing(golden_mean()).mixing
    orbit = check_mixing(periodic_orbit((0, 1)))
    elapsed = time.perf_counter() - start
    ok = full and golden and not orbit.mixing and elapsed < LIMIT_MIXING
    conclude(report_line, 16, ok, f"full={full}, golden={golden}, period-2 orbit={orbit.mixing} ({orbit.reason}), {elapsed:.3f}s")
