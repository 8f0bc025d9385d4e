import math

import numpy as np
import pytest

from coarsegeo.circle import (
    FixedPointError,
    FuchsianGenus2Spec,
    MonotoneTable,
    PingPongError,
    PLMap,
    SchottkySpec,
    action_distance,
    arc_contains,
    attracting_fixed_point,
    build_semiconjugacy,
    circle_dist,
    cover_length,
    covers_nest_strictly,
    minimal_set,
    perturb,
    reduced_words,
    standard_action,
    su11_rotation,
    su11_translation,
    verify_semiconjugacy,
)


@pytest.fixture(scope="module")
def schottky():
    return standard_action(SchottkySpec())


@pytest.fixture(scope="module")
def fuchsian():
    return standard_action(FuchsianGenus2Spec())


def test_su11_rotation_acts_by_rotation():
    rot = su11_rotation(0.25)
    t = np.linspace(0, 1, 9, endpoint=False)
    assert np.allclose(circle_dist(rot(t), t + 0.25), 0, atol=1e-12)


def test_identity_word_is_identity(schottky):
    t = np.linspace(0, 1, 33, endpoint=False)
    out = schottky.apply(("a", "A"), t)
    assert np.max(circle_dist(out, t)) < 1e-12


def test_schottky_ping_pong_containment(schottky):
    spec = schottky.spec
    pads = spec.pads()
    gen = schottky.maps["a"]
    lo, hi = pads["A"]
    for x in np.linspace(hi, 1 + lo, 64) % 1.0:  # complement of I_{A}
        assert arc_contains(pads["a"], float(gen(np.array([x]))[0]))


def test_trace_fixed_point_consistency(schottky):
    m = schottky.matrices["a"]
    assert abs(m.trace) > 2
    eig_fp = m.fixed_points()[0]
    iter_fp = attracting_fixed_point(m)
    assert circle_dist(eig_fp, iter_fp) < 1e-9


def test_fuchsian_relation_holds(fuchsian):
    rel = fuchsian.relator
    assert rel is not None
    m = fuchsian.word_matrix(rel).m
    assert min(np.max(np.abs(m - np.eye(2))), np.max(np.abs(m + np.eye(2)))) < 1e-8


def test_perturb_eps_zero_identical(schottky):
    pert = perturb(schottky, "free", 0.0, seed=3)
    assert action_distance(schottky, pert) == 0.0


def test_perturb_free_distance_is_eps(schottky):
    pert = perturb(schottky, "free", 0.005, seed=3)
    d = action_distance(schottky, pert)
    assert 0.004 <= d <= 0.005 + 1e-9


def test_perturb_free_reverifies_ping_pong(schottky):
    with pytest.raises((PingPongError, ValueError)):
        perturb(schottky, "free", 0.05, seed=2)


def test_perturb_free_rejected_for_surface_spec(fuchsian):
    with pytest.raises(ValueError):
        perturb(fuchsian, "free", 0.001, seed=1)


def test_perturb_conjugation_moves_generators_boundedly(fuchsian):
    eps = 0.01
    pert = perturb(fuchsian, "conjugation", eps, seed=5)
    phi, _ = pert.conjugator
    assert abs(phi.sup_distance_to_identity() - eps) < 1e-6
    lip = max(
        float(np.max(fuchsian.matrices[n].deriv(np.linspace(0, 1, 512, endpoint=False))))
        for n in fuchsian.generator_names()
    )
    assert action_distance(fuchsian, pert) <= eps * (lip + 1)


def test_perturb_conjugation_preserves_relation(fuchsian):
    pert = perturb(fuchsian, "conjugation", 0.01, seed=5)
    t = np.linspace(0, 1, 257, endpoint=False)
    out = pert.apply(fuchsian.relator, t)
    assert np.max(circle_dist(out, t)) < 1e-9


def test_attracting_fixed_point_identity_errors():
    with pytest.raises(FixedPointError):
        attracting_fixed_point(PLMap.identity())


def test_attracting_fixed_point_rotation_errors():
    with pytest.raises(FixedPointError):
        attracting_fixed_point(su11_rotation(0.3))


def test_attracting_fixed_point_strong_expansion_not_fooled():
    # near the repelling point the displacement wraps; the lift bisection
    # must not report it as attracting
    m = su11_translation(5 + 4 * math.sqrt(2), attracting=0.37)
    big = m.compose(m).compose(m)
    x = attracting_fixed_point(big)
    assert circle_dist(x, 0.37) < 1e-9


def test_conjugated_fixed_point_moves_by_phi(fuchsian):
    pert = perturb(fuchsian, "conjugation", 0.01, seed=5)
    phi, _ = pert.conjugator
    y = fuchsian.matrices["b"].fixed_points()[0]
    x = attracting_fixed_point(pert.word_map(("b",)))
    assert circle_dist(x, float(phi(np.array([y]))[0])) < 1e-9


def test_semiconjugacy_identity_action(schottky):
    sc = build_semiconjugacy(schottky, schottky, 3)
    assert sc.defect < 1e-9
    assert sc.distance_to_identity < 1e-9
    assert sc.table.monotone_degree_one()
    xs = np.array([x for _, x, _ in sc.matched])
    assert np.max(circle_dist(sc.table(xs), xs)) < 1e-10


def test_semiconjugacy_conjugation_ground_truth(fuchsian):
    pert = perturb(fuchsian, "conjugation", 0.01, seed=5)
    phi, phi_inv = pert.conjugator
    sc = build_semiconjugacy(fuchsian, pert, 3)
    for _, x, y in sc.matched[::25]:
        assert circle_dist(float(phi(np.array([y]))[0]), x) < 1e-8
    # h approximates phi^-1
    t = np.linspace(0, 1, 512, endpoint=False)
    assert np.max(circle_dist(sc.table(t), phi_inv(t))) < 1e-3


def test_semiconjugacy_monotone_table_wraparound():
    xs = np.array([0.9, 0.1, 0.4])
    ys = np.array([0.95, 0.15, 0.45])
    table = MonotoneTable(xs, ys)
    assert table.monotone_degree_one()
    assert abs(float(table(np.array([0.0]))[0]) - 0.05) < 0.03


def test_verify_defect_monotone_in_word_set(schottky):
    pert = perturb(schottky, "free", 0.004, seed=9)
    sc = build_semiconjugacy(schottky, pert, 6)
    gens = [(n,) for n in schottky.generator_names()]
    more = list(reduced_words(schottky.generator_names(), 2))
    small = verify_semiconjugacy(sc.table, schottky, pert, gens, grid=1024)
    large = verify_semiconjugacy(sc.table, schottky, pert, more, grid=1024)
    assert large.defect >= small.defect


def test_minimal_set_depth1_is_pads(schottky):
    covers = minimal_set(schottky, 1)
    pads = sorted(schottky.spec.pads().values())
    assert sorted(covers[0]) == pads


def test_minimal_set_nesting_and_contraction(schottky):
    covers = minimal_set(schottky, 6)
    for d in range(1, 6):
        assert covers_nest_strictly(covers[d - 1], covers[d])
    lengths = [cover_length(c) for c in covers]
    for a, b in zip(lengths, lengths[1:]):
        assert b < a


def test_minimal_set_requires_schottky(fuchsian):
    with pytest.raises(ValueError):
        minimal_set(fuchsian, 3)


def test_composed_map_inverse_roundtrip(schottky):
    pert = perturb(schottky, "free", 0.003, seed=21)
    fwd = pert.word_map(("a", "b", "A"))
    back = fwd.inverse()
    t = np.linspace(0, 1, 65, endpoint=False)
    assert np.max(circle_dist(back(fwd(t)), t)) < 1e-7
