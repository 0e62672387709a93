import pytest

from limitset.core import PeriodicConfig
from limitset.errors import DomainError
from limitset.library import and_rule, constant_rule, full_shift, golden_mean, identity_rule, path_sft, xor_rule
from limitset.shifts import window_language
from limitset.spacetime import (
    BackwardOrbit,
    NotFound,
    backward_orbit_search,
    build,
    check_commutation,
    outer_intersection,
    starred_grid,
)


@pytest.mark.parametrize("shift", [full_shift, golden_mean])
@pytest.mark.parametrize("rule", [identity_rule, xor_rule, and_rule])
def test_commutation_small_grid(shift, rule):
    sys = build(shift(), rule())
    for i in range(2):
        for j in range(2):
            assert check_commutation(sys, i, j).ok


def test_golden_cells_and_invariance_flag():
    sys = build(golden_mean(), xor_rule())
    assert len(sys.cell(0, 0)) == 2 and len(sys.cell(1, 0)) == 5
    r = check_commutation(sys, 1, 1)
    assert r.ok and not r.invariant


def test_cells_are_window_languages():
    sys = build(golden_mean(), identity_rule())
    assert sys.cell(1, 1).words == window_language(golden_mean(), sys.window(1, 1)).words


def test_outer_intersection_path_and_golden():
    sys = build(path_sft(), identity_rule(path_sft().alphabet))
    sizes = [len(outer_intersection(sys, 0, 0, K)) for K in range(3)]
    assert sizes == [3, 1, 0]
    assert outer_intersection(build(golden_mean(), identity_rule()), 0, 0, 4).stabilized_at == 0
    # the intersection starts at k = i and never shrinks afterwards
    g = outer_intersection(build(golden_mean(), identity_rule()), 1, 0, 4)
    assert g.stabilized_at == 1 and len(set(g.sizes)) == 1
    assert g.language.words == window_language(golden_mean(), build(golden_mean(), identity_rule()).window(1, 0)).words


def test_backward_orbits():
    sys = build(full_shift(), xor_rule())
    orbit = backward_orbit_search(sys, PeriodicConfig((0,)), 3, budget=6)
    assert isinstance(orbit, BackwardOrbit) and orbit.replay(xor_rule(), full_shift())
    c0 = constant_rule(0)
    none = backward_orbit_search(build(full_shift(), c0), PeriodicConfig((1,)), 2, budget=4)
    assert isinstance(none, NotFound) and none.replay(c0, full_shift())


def test_starred_grid():
    assert starred_grid(build(full_shift(), constant_rule(0)), 0, 2, 2).first_empty == (0, 1)
    assert starred_grid(build(full_shift(), xor_rule()), 0, 2, 2).first_empty is None


def test_radius_too_small():
    with pytest.raises(DomainError):
        build(full_shift(), constant_rule(0, memory=(-2, 0)), radius=1)
