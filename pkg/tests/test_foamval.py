import random
from itertools import product

from sl3braid.braid import parse_braid
from sl3braid.coeff import from_roots, generic_potential, rationals, sphere_value, theta_value
from sl3braid.foamval import (
    ClosedPreFoam,
    Region,
    cached_web_basis,
    close_up,
    compose,
    evaluate_closed,
    invert_unimodular,
    reverse,
    theta_foam,
)
from sl3braid.web import closure_diagram, kuperberg_bracket, resolve


def test_sphere_and_torus():
    w = generic_potential()
    for d in range(4):
        assert evaluate_closed(ClosedPreFoam((Region(0, d, ()),), ()), w) == sphere_value(w, d)
    assert evaluate_closed(ClosedPreFoam((Region(1, 0, ()),), ()), w) == 3


def test_theta_foam_matches_algebra():
    w = generic_potential()
    for d in product(range(3), repeat=3):
        assert evaluate_closed(theta_foam(d), w) == theta_value(*d, w)
        assert evaluate_closed(theta_foam(d, reverse_orientation=True), w) == -theta_value(*d, w)


def test_gram_matrices_are_unimodular():
    w = generic_potential()
    D = closure_diagram(parse_braid("b=3; 1,2,1"))
    for bits in product((0, 1), repeat=3):
        basis = cached_web_basis(resolve(D, bits).web)
        assert len(basis) == kuperberg_bracket(basis.web).at_one()
        inv = invert_unimodular(basis.gram(w), w.ring)
        assert inv == basis.gram_inverse(w)


def test_random_contraction_order():
    w = from_roots(rationals(), (0, 1, -1))
    D = closure_diagram(parse_braid("b=2; 1,1"))
    basis = cached_web_basis(resolve(D, (0, 0)).web)
    rng = random.Random(11)
    for b in basis.elements[:4]:
        for c in basis.elements[-4:]:
            pf = close_up(compose(b, reverse(c)))
            ref = evaluate_closed(pf, w)
            for _ in range(5):
                assert evaluate_closed(pf, w, rng) == ref
