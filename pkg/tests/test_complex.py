from sl3braid.braid import parse_braid
from sl3braid.coeff import from_roots, potential, prime_field, rationals
from sl3braid.complex import (
    bracket_euler_characteristic,
    build_complex,
    differential_respects_grading,
    filtration_levels,
    graded_euler_characteristic,
    homology_over_FU,
    homology_over_field,
    j_invariants,
    s_invariant,
    verify_d_squared,
)
from sl3braid.transverse import u_potential
from sl3braid.web import closure_diagram

Q = rationals()


def D(text):
    return closure_diagram(parse_braid(text))


def test_unknot_homology():
    H = homology_over_field(build_complex(D("b=1;"), potential(Q, 0, 0, 0)))
    assert H.poincare() == {(0, -2): 1, (0, 0): 1, (0, 2): 1}


def test_trefoil_homology_graded():
    C = build_complex(D("b=2; 1,1,1"), potential(Q, 0, 0, 0))
    assert verify_d_squared(C)
    assert differential_respects_grading(C, graded=True)
    H = homology_over_field(C)
    assert H.total_rank() == 7
    assert {q for (h, q) in H.poincare() if h == 0} == {2, 4, 6}


def test_mirror_trefoil_homology():
    H = homology_over_field(build_complex(D("b=2; -1,-1,-1"), potential(Q, 0, 0, 0)))
    assert {q for (h, q) in H.poincare() if h == 0} == {-6, -4, -2}


def test_hopf_homology():
    H = homology_over_field(build_complex(D("b=2; 1,1"), potential(prime_field(2), 0, 0, 0)))
    assert H.rank_at(0) == 3 and H.rank_at(-2) == 6


def test_filtered_case():
    C = build_complex(D("b=2; 1,1,1"), from_roots(Q, (0, 1, -1)))
    assert verify_d_squared(C)
    assert differential_respects_grading(C, graded=False)
    H = homology_over_field(C)
    assert H.total_rank() == 3 and H.rank_at(0) == 3


def test_euler_matches_bracket():
    for text in ("b=2; 1,-1,1", "b=3; 1,-2,1"):
        d = D(text)
        assert graded_euler_characteristic(build_complex(d, potential(Q, 0, 0, 0))) == bracket_euler_characteristic(d)


def test_j_invariants():
    w = from_roots(Q, (0, 1, -1))
    assert j_invariants(build_complex(D("b=1;"), w)) == (-2, 0, 2)
    js = j_invariants(build_complex(D("b=2; 1,1,1"), w))
    assert js == (2, 4, 6)
    assert s_invariant(js) == 1
    assert filtration_levels(build_complex(D("b=2; -1,-1,-1"), w)) == [-6, -4, -2]


def test_homology_over_FU():
    C = build_complex(D("b=2; 1,1,1"), u_potential((0, 1, -1)))
    assert verify_d_squared(C)
    H = homology_over_FU(C)
    assert H.rank_at(0) == 3
    assert H.total_rank() == 3
    assert all(e.q is None for e in H.entries)
    assert any(e.torsion for e in H.entries)
