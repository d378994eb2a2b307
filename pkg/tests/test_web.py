import random

import pytest

from sl3braid.braid import parse_braid
from sl3braid.laurent import QUANTUM_2, QUANTUM_3, LaurentPoly
from sl3braid.web import (
    Edge,
    MalformedWeb,
    Vertex,
    Web,
    closure_diagram,
    kuperberg_bracket,
    oriented_resolution,
    reduce_web,
    resolve,
)


def test_circle_and_theta():
    circle = Web({}, {0: Edge(None, None)})
    assert kuperberg_bracket(circle) == QUANTUM_3
    D = closure_diagram(parse_braid("b=2; 1"))
    theta = resolve(D, (0,)).web
    assert len(theta.vertices) == 2
    assert kuperberg_bracket(theta) == QUANTUM_2 * QUANTUM_3


def test_oriented_resolution_is_circles():
    D = closure_diagram(parse_braid("b=3; 1,-2,1"))
    res = oriented_resolution(D)
    assert not res.web.vertices
    assert len(res.web.loops()) == 3


def test_bad_web():
    with pytest.raises(MalformedWeb):
        Web({0: Vertex("sink", (0, 1, 2))}, {0: Edge(None, None)})


def test_square_reduction():
    # closure of s1 s2^-1 s1 s2^-1 with all crossings thick has square faces
    D = closure_diagram(parse_braid("b=3; 1,-2,1,-2"))
    web = resolve(D, (0, 1, 0, 1)).web
    tree = reduce_web(web)
    assert tree.graded_rank() == kuperberg_bracket(web)


def test_random_orders_agree():
    rng = random.Random(3)
    D = closure_diagram(parse_braid("b=3; 1,2,1,2"))
    for bits in [(0, 0, 0, 0), (0, 1, 0, 0), (1, 0, 0, 1)]:
        web = resolve(D, bits).web
        ref = kuperberg_bracket(web)
        for _ in range(10):
            assert kuperberg_bracket(web, rng) == ref
            assert reduce_web(web, rng).graded_rank() == ref


def test_faces_of_theta():
    D = closure_diagram(parse_braid("b=2; 1"))
    theta = resolve(D, (0,)).web
    assert sorted(len(f) for f in theta.faces()) == [2, 2, 2]


def test_laurent():
    assert (QUANTUM_2 * QUANTUM_2).coeffs == {-2: 1, 0: 2, 2: 1}
    assert QUANTUM_3.at_one() == 3
    assert LaurentPoly({1: 2}).shift(-1) == 2
