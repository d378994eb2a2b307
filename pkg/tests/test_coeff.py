from itertools import product

import pytest

from sl3braid.coeff import (
    CircleAlgebra,
    NotARoot,
    UnsupportedRing,
    from_roots,
    generic_potential,
    potential,
    prime_field,
    rationals,
    ring_from_tag,
    root_multiplicity,
    sphere_value,
    split_root,
    theta_monomial,
    theta_value,
)


def test_rings():
    assert ring_from_tag("q").is_field
    assert ring_from_tag("f5").dom.mod == 5
    assert not ring_from_tag("qu").is_field
    with pytest.raises(UnsupportedRing):
        prime_field(17)
    with pytest.raises(UnsupportedRing):
        ring_from_tag("z")


def test_sphere_values():
    w = generic_potential()
    a2, a1, _ = w.coeffs
    assert [sphere_value(w, d) for d in range(5)] == [0, 0, -1, a2, a1 - a2**2]


def test_theta_table():
    w = from_roots(rationals(), (0, 0, 0))
    table = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}
    for d in product(range(3), repeat=3):
        assert theta_value(*d, w) == table.get(d, 0)


def test_theta_relation():
    # A^2 B^2 reduces to a1 AB + a0 A + a0 B
    w = generic_potential()
    a2, a1, a0 = w.coeffs
    assert theta_monomial(2, 2, 0, w) == {(1, 1): a1, (1, 0): a0, (0, 1): a0}


def test_split_root():
    Q = rationals()
    w = potential(Q, 0, -1, 0)
    assert split_root(w, 1) == (1, 0)
    assert split_root(w, 0) == (0, -1)
    with pytest.raises(NotARoot):
        split_root(w, 2)


def test_root_multiplicity():
    Q = rationals()
    assert root_multiplicity(from_roots(Q, (0, 1, -1)), Q(0)) == 1
    assert root_multiplicity(from_roots(Q, (1, 1, 0)), Q(1)) == 2
    assert root_multiplicity(from_roots(Q, (2, 2, 2)), Q(2)) == 3


def test_counit_and_copairing():
    w = generic_potential()
    A = CircleAlgebra(w)
    # (id (x) counit) of the copairing is the unit
    acc = [w.ring.zero] * 3
    for (i, j), c in A.copairing().items():
        e = A.counit(A.x_power(j))
        for k, v in enumerate(A.x_power(i)):
            acc[k] += c * e * v
    assert tuple(acc) == A.x_power(0)
    # torus: counit of the handle is 3
    assert A.counit(A.handle()) == 3
