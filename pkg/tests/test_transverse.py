import pytest

from sl3braid.braid import MarkovMove, MoveNotApplicable, parse_braid, random_transverse_sequence, self_linking
from sl3braid.coeff import (
    CircleAlgebra,
    NotARoot,
    TensorElement,
    beta_tensor,
    from_roots,
    generic_potential,
    prime_field,
    rationals,
    split_potential,
    split_root,
    tensor_reduce,
)
from sl3braid.complex import NotAKnot, RootsNotDistinct
from sl3braid.transverse import (
    RootsNotInField,
    beta_chain,
    bennequin_check,
    c_invariant,
    class_vanishes,
    dbetavanish_identity,
    independent_root_classes,
    move_equivariance_check,
    phi1,
    psi1,
    shifted_triple_root_verdicts,
    techlemma_identity,
    u_potential,
    verify_cycle,
)

Q = rationals()


def test_unknot_chain_is_x_squared():
    beta = beta_chain(parse_braid("b=1;"), from_roots(Q, (0, 0, 0)), 0)
    assert beta.tensor.terms == {(2,): 1}
    assert len(beta.vector) == 1
    assert beta.degree == 2


def test_sigma1_chain_on_two_circles():
    w, x1 = split_potential()
    beta = beta_chain(parse_braid("b=2; 1"), w, x1)
    b1, b0 = split_root(w, x1)
    assert beta.tensor.n == 2
    assert beta.tensor.terms[(1, 1)] == b1 * b1
    assert beta.h == 0
    assert verify_cycle(beta)


def test_degree_is_minus_twice_sl():
    w = from_roots(prime_field(5), (0, 1, 4))
    for text in ("b=2; 1,1,1", "b=2; -1", "b=3; 1,-2", "b=3;"):
        B = parse_braid(text)
        assert beta_chain(B, w, 1).degree == -2 * self_linking(B)


def test_cycle_over_f5():
    w = from_roots(prime_field(5), (0, 1, 4))
    assert verify_cycle(beta_chain(parse_braid("b=2; 1,1,1"), w, 1))


def test_not_a_root():
    with pytest.raises(NotARoot):
        beta_chain(parse_braid("b=1;"), from_roots(Q, (0, 1, -1)), 2)


def test_symbolic_identities():
    assert dbetavanish_identity() == {}
    assert techlemma_identity().is_zero()


def test_r1_maps():
    w, x1 = split_potential()
    A = CircleAlgebra(w)
    P = beta_tensor(1, w, x1)
    PP = tensor_reduce(beta_tensor(2, w, x1), A)
    assert phi1(P, w, 0) == PP
    assert tensor_reduce(psi1(PP, w), A) == tensor_reduce(P, A)
    u = TensorElement(2, {(0, 1): w.ring.one, (2, 2): w.a2})
    assert psi1(tensor_reduce(TensorElement(3, {k + (2,): v for k, v in u.terms.items()}), A), w) == tensor_reduce(u, A)
    # Psi o Phi is the identity on any chain
    g = generic_potential()
    v = TensorElement(1, {(1,): g.ring.one, (2,): g.a1})
    assert psi1(phi1(v, g, 0), g) == tensor_reduce(v, CircleAlgebra(g))


def test_move_equivariance():
    w = from_roots(Q, (0, 1, -1))
    B = parse_braid("b=2; 1,1,1")
    assert move_equivariance_check(B, [MarkovMove("conjugate", 1), MarkovMove("rotate")], w, 0)
    assert move_equivariance_check(B, [MarkovMove("stabilize")], w, 1, check_cycles=True)
    B2 = parse_braid("b=2; 1,1")
    assert move_equivariance_check(B2, random_transverse_sequence(B2, 100, seed=5), w, -1)
    with pytest.raises(MoveNotApplicable):
        move_equivariance_check(B2, [MarkovMove("stabilize", generator=-1)], w, 0)


def test_vanishing():
    w = from_roots(Q, (0, 1, -1))
    assert not class_vanishes(parse_braid("b=2; -1"), w, 0)
    assert class_vanishes(parse_braid("b=2; -1"), from_roots(Q, (0, 0, 0)), 0)
    assert not class_vanishes(parse_braid("b=2; 1,1,1"), from_roots(Q, (0, 0, 0)), 0)
    with pytest.raises(RootsNotInField):
        class_vanishes(parse_braid("b=1;"), u_potential((0, 1, -1)), 0)


def test_independence():
    w = from_roots(Q, (0, 1, -1))
    assert independent_root_classes(parse_braid("b=3; 1,-2"), w) == 3
    with pytest.raises(RootsNotDistinct):
        independent_root_classes(parse_braid("b=1;"), from_roots(Q, (1, 1, 0)))


def test_triple_root_shift():
    for text in ("b=2; 1,1", "b=2; -1,1,-1", "b=3; -1,2"):
        v1, v0, mapped = shifted_triple_root_verdicts(parse_braid(text), Q, 3)
        assert v1 == v0 and mapped


def test_c_invariant():
    w = u_potential((0, 1, -1))
    assert c_invariant(parse_braid("b=1;"), w, 0) == 0
    assert c_invariant(parse_braid("b=2; 1,1,1"), w, 2) == 0
    assert c_invariant(parse_braid("b=2; -1"), w, 0) > 0
    with pytest.raises(RootsNotDistinct):
        u_potential((1, 1, 0))


def test_bennequin_unknot():
    r = bennequin_check(parse_braid("b=1;"), u_potential((0, 1, -1)), 0)
    assert r.sl == -1 and r.c == 0 and r.js[0] == -2
    assert r.inequalities[0].lhs == -2 and r.inequalities[0].ok
    with pytest.raises(NotAKnot):
        bennequin_check(parse_braid("b=2; 1,1"), u_potential((0, 1, -1)), 0)
