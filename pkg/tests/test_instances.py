"""Deterministic instance generation."""

import numpy as np

import projcalc as pc
from projcalc.instances import gen_instance


def test_boundary_ball_is_exact():
    sp, set_, x = gen_instance("ball", "boundary", 7)
    assert abs(pc.norm_primal(x) - set_.r) <= 1e-14 * set_.r


def test_exterior_cylinder_has_margin():
    sp, set_, x = gen_instance("cylinder", "exterior", 7)
    assert pc.norm_primal(pc.mask_restrict(x, set_.mask)) > set_.r + 0.1


def test_cone_boundary_has_zero_and_positive_coordinates():
    sp, set_, f = gen_instance("cone", "boundary", 7)
    assert np.any(f.coords == 0.0)
    assert np.any(f.coords > 0.0)


def test_cone_regimes():
    _, _, interior = gen_instance("cone", "interior", 3)
    assert np.all(interior.coords > 0.0)
    _, _, exterior = gen_instance("cone", "exterior", 3)
    assert np.any(exterior.coords < 0.0)


def test_reproducible_across_calls():
    a = gen_instance("cylinder", "boundary", 41, n=12, p=3.0, weights_mode="random")
    b = gen_instance("cylinder", "boundary", 41, n=12, p=3.0, weights_mode="random")
    assert np.array_equal(a[2].coords, b[2].coords)
    assert a[1].mask == b[1].mask
    assert np.array_equal(a[0].weights, b[0].weights)
    c = gen_instance("cylinder", "boundary", 42, n=12, p=3.0, weights_mode="random")
    assert not np.array_equal(a[2].coords, c[2].coords)


def test_subspace_regimes():
    _, sub, inside = gen_instance("subspace", "interior", 5)
    assert pc.set_contains(sub, inside)
    _, sub, outside = gen_instance("subspace", "exterior", 5)
    assert not pc.set_contains(sub, outside)
