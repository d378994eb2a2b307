"""Beta chains of braids and the invariants derived from them.

All chains live on the closure of the mirror of the braid, in the oriented
resolution, which is a disjoint union of one circle per strand.  There the
state space is ``A^{(x) b}`` and the chain is ``prod_gamma P(x_gamma)`` with
``omega(x) = (x - x1) P(x)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Optional, Sequence

from .braid import (
    BraidWord,
    MarkovMove,
    MoveNotApplicable,
    apply_move,
    is_knot,
    mirror,
    self_linking,
)
from .coeff import (
    CircleAlgebra,
    Potential,
    TensorElement,
    _add,
    beta_tensor,
    from_roots,
    rational_polys_in_U,
    rationals,
    split_potential,
    split_root,
    tensor_reduce,
    theta_mul,
    theta_poly_in,
)
from .complex import (
    CubeComplex,
    NotAKnot,
    RootsNotDistinct,
    apply_differential,
    build_complex,
    classes_rank,
    fu_homology,
    in_image,
    j_invariants,
    s_invariant,
)
from .linalg import valuation
from .web import LinkDiagram, closure_diagram, oriented_bits, oriented_resolution


class RootsNotInField(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BetaChain:
    """``prod P(x_gamma)`` as a tensor and as a vector of ``C^0``."""

    braid: BraidWord
    omega: Potential
    root: Any
    diagram: LinkDiagram
    tensor: TensorElement
    vector: dict = field(repr=False)  # generator index in C^0 -> coefficient
    degree: int
    h: int = 0


def _field_check(omega: Potential, x1) -> Any:
    if isinstance(x1, (int, str)):
        x1 = omega.ring(x1)
    return x1


def beta_chain(B: BraidWord, omega: Potential, x1) -> BetaChain:
    """The beta chain of ``B`` for the root ``x1`` of ``omega``."""
    x1 = _field_check(omega, x1)
    b1, b0 = split_root(omega, x1)
    D = closure_diagram(mirror(B))
    C = build_complex(D, omega)
    bits = oriented_bits(D)
    loops = sorted(oriented_resolution(D).web.loops())
    pos = {e: i for i, e in enumerate(loops)}
    p = (b0, b1, omega.ring.one)
    basis = C.bases[bits]
    offset = C.offsets[bits]
    vector: dict = {}
    degree = None
    for i, el in enumerate(basis.elements):
        exps = [0] * len(loops)
        for _, e, count in el.dots:
            exps[pos[e]] += count
        c = omega.ring.one
        for k in exps:
            c = c * p[k]
        if c:
            vector[offset + i] = c
            q = C.qdeg[0][offset + i]
            degree = q if degree is None else max(degree, q)
    tensor = beta_tensor(len(loops), omega, x1)
    return BetaChain(B, omega, x1, D, tensor, vector, degree)


def verify_cycle(beta: BetaChain, C: Optional[CubeComplex] = None) -> bool:
    if C is None:
        C = build_complex(beta.diagram, beta.omega)
    return not apply_differential(C, 0, beta.vector)


# ---------------------------------------------------------------------------
# symbolic identities


def dbetavanish_identity() -> dict:
    """``P(A) P(B)`` in the theta algebra over ``Z[a1', a0', x1]`` (zero when the identity holds)."""
    omega, x1 = split_potential()
    b1, b0 = split_root(omega, x1)
    one = omega.ring.one
    pa = theta_poly_in(0, (b0, b1, one), omega)
    pb = theta_poly_in(1, (b0, b1, one), omega)
    return theta_mul(pa, pb, omega)


def techlemma_identity() -> TensorElement:
    """The five-term combination in ``A (x) A`` over ``Z[a1', a0', x1]``, reduced."""
    omega, x1 = split_potential()
    b1, b0 = split_root(omega, x1)
    a2 = omega.a2
    P = {0: b0, 1: b1, 2: omega.ring.one}
    terms: dict = {}
    for k, c in P.items():
        _add(terms, (k + 2, 0), c)
        _add(terms, (k + 1, 1), c)
        _add(terms, (k + 1, 0), a2 * c)
        _add(terms, (k, 1), -x1 * c)
        _add(terms, (k, 0), -x1 * b1 * c)
    return tensor_reduce(TensorElement(2, terms), CircleAlgebra(omega))


# ---------------------------------------------------------------------------
# first Reidemeister maps on the oriented summand


def psi1(t: TensorElement, omega: Potential, new: int = -1) -> TensorElement:
    """Cap off the circle at factor ``new``: ``q' (x) u -> -eps(q') u``."""
    alg = CircleAlgebra(omega)
    t = tensor_reduce(t, alg)
    new = new % t.n
    out: dict = {}
    for key, c in t.terms.items():
        v = -alg.counit(alg.x_power(key[new])) * c
        _add(out, key[:new] + key[new + 1:], v)
    return TensorElement(t.n - 1, out)


def phi1(t: TensorElement, omega: Potential, a: int) -> TensorElement:
    """Split a new circle, appended last, off the circle at factor ``a``.

    ``q -> sum_i x^{2-i} q (x) y^i + a2 sum_i x^{1-i} q (x) y^i + a1 q (x) 1``.
    """
    alg = CircleAlgebra(omega)
    out: dict = {}
    for key, c in t.terms.items():
        e = key[a]
        for (i, j), d in alg.copairing().items():
            nk = list(key)
            nk[a] = e + i
            _add(out, tuple(nk) + (j,), -d * c)
    return tensor_reduce(TensorElement(t.n + 1, out), alg)


def r1_negative_maps(direction: str, t: TensorElement, omega: Potential, a: int = -1) -> TensorElement:
    """``direction`` is ``"phi"`` (add a circle) or ``"psi"`` (remove the last one)."""
    if direction == "phi":
        return phi1(t, omega, a % t.n)
    if direction == "psi":
        return psi1(t, omega)
    raise ValueError(f"unknown direction {direction!r}")


def transport(B: BraidWord, t: TensorElement, move: MarkovMove, omega: Potential) -> tuple:
    """Image of an oriented-summand chain of ``B`` under the map induced by ``move``."""
    if move.kind == "stabilize" and move.generator < 0:
        raise MoveNotApplicable("negative stabilization is not transverse")
    nxt = apply_move(B, move)
    if move.kind == "stabilize":
        return nxt, phi1(t, omega, B.strands - 1)
    if move.kind == "destabilize":
        return nxt, psi1(t, omega)
    # circles of the oriented resolution are the strands; they are relabeled identically
    return nxt, t


def move_equivariance_check(
    B: BraidWord, moves: Iterable[MarkovMove], omega: Potential, x1, check_cycles: bool = False
) -> bool:
    x1 = _field_check(omega, x1)
    alg = CircleAlgebra(omega)
    t = beta_tensor(B.strands, omega, x1)
    cur = B
    for m in moves:
        cur, t = transport(cur, t, m, omega)
        if tensor_reduce(t, alg) != tensor_reduce(beta_tensor(cur.strands, omega, x1), alg):
            return False
        if check_cycles and not verify_cycle(beta_chain(cur, omega, x1)):
            return False
    return True


def dot_shift(t: TensorElement, omega: Potential, s) -> TensorElement:
    """Substitute ``x -> x + s`` in every factor and reduce modulo ``omega``."""
    from math import comb

    out: dict = {}
    for key, c in t.terms.items():
        parts = [{}]
        for e in key:
            nxt = []
            for part in parts:
                for k in range(e + 1):
                    d = dict(part)
                    d[len(d)] = (k, comb(e, k) * s ** (e - k))
                    nxt.append(d)
            parts = nxt
        for part in parts:
            coeff = c
            exps = []
            for i in range(len(key)):
                k, w = part[i]
                coeff = coeff * w
                exps.append(k)
            _add(out, tuple(exps), coeff)
    return tensor_reduce(TensorElement(t.n, out), CircleAlgebra(omega))


# ---------------------------------------------------------------------------
# vanishing and c


def class_vanishes(B: BraidWord, omega: Potential, x1) -> bool:
    if not omega.ring.is_field:
        raise RootsNotInField(f"{omega.ring.tag} is not a field")
    x1 = _field_check(omega, x1)
    beta = beta_chain(B, omega, x1)
    C = build_complex(beta.diagram, omega)
    return in_image(C, 0, beta.vector)


def independent_root_classes(B: BraidWord, omega: Potential) -> int:
    """Rank of the span of the classes of the beta chains of the three roots."""
    if omega.roots is None or len(set(omega.roots)) != 3:
        raise RootsNotDistinct("need three distinct roots")
    chains = [beta_chain(B, omega, r) for r in omega.roots]
    C = build_complex(chains[0].diagram, omega)
    return classes_rank(C, 0, [b.vector for b in chains])


def shifted_triple_root_verdicts(B: BraidWord, ring, x1) -> tuple[bool, bool, bool]:
    """Verdicts for ``((x - x1)^3, x1)`` and ``(x^3, 0)`` and whether the shift maps one chain to the other."""
    x1 = ring(x1)
    omega = from_roots(ring, (x1, x1, x1))
    cube = from_roots(ring, (0, 0, 0))
    v1 = class_vanishes(B, omega, x1)
    v0 = class_vanishes(B, cube, 0)
    shifted = dot_shift(beta_tensor(B.strands, omega, x1), cube, x1)
    target = tensor_reduce(beta_tensor(B.strands, cube, ring(0)), CircleAlgebra(cube))
    return v1, v0, shifted == target


def u_potential(roots: Sequence) -> Potential:
    """``(x - U r1)(x - U r2)(x - U r3)`` over ``Q[U]``."""
    R = rational_polys_in_U()
    U = R.gens[0]
    rs = [Fraction(str(r)) if isinstance(r, str) else r for r in roots]
    if len(set(rs)) != 3:
        raise RootsNotDistinct(f"roots {roots} are not distinct")
    return from_roots(R, [U * R.dom.convert(r) for r in rs])


@lru_cache(maxsize=256)
def _fu_h0(D, omega: Potential):
    return fu_homology(build_complex(D, omega), 0)


def c_invariant(B: BraidWord, omega: Potential, i: int) -> float:
    """Largest ``k`` with ``[beta]`` divisible by ``U^k`` modulo torsion (``inf`` if none)."""
    if omega.roots is None or len(set(omega.roots)) != 3:
        raise RootsNotDistinct("need three distinct roots")
    beta = beta_chain(B, omega, omega.roots[i])
    H = _fu_h0(beta.diagram, omega)
    y = H.coords(beta.vector)
    free = y[len(H.diag):]
    v = min((valuation(c) for c in free), default=float("inf"))
    return v if v == float("inf") else int(v)


def at_U_equals_one(omega: Potential) -> Potential:
    """The potential over ``Q`` with roots ``r_i`` for ``omega`` with roots ``U r_i``."""
    Q = rationals()
    R = omega.ring
    U = R.dom.to_sympy(R.gens[0])
    return from_roots(Q, [Q.dom.from_sympy(R.dom.to_sympy(r).subs(U, 1)) for r in omega.roots])


@dataclass(frozen=True)
class Inequality:
    name: str
    lhs: Any
    rhs: Any
    ok: bool

    def to_json(self) -> dict:
        def enc(x):
            if x == float("inf"):
                return "inf"
            if isinstance(x, Fraction):
                return str(x) if x.denominator != 1 else x.numerator
            return x

        return {"name": self.name, "lhs": enc(self.lhs), "rhs": enc(self.rhs), "pass": self.ok}


@dataclass(frozen=True)
class BennequinReport:
    sl: int
    c: float
    js: tuple
    s: Fraction
    inequalities: tuple

    @property
    def ok(self) -> bool:
        return all(q.ok for q in self.inequalities)


def bennequin_check(B: BraidWord, omega: Potential, i: int = 0) -> BennequinReport:
    if not is_knot(B):
        raise NotAKnot(f"closure of {B} is not a knot")
    c = c_invariant(B, omega, i)
    C1 = build_complex(closure_diagram(B), at_U_equals_one(omega))
    js = j_invariants(C1)
    s = s_invariant(js)
    sl = self_linking(B)
    lhs = 2 * (sl + c)
    ineqs = (
        Inequality("sl+c<=j1", lhs, js[0], lhs <= js[0]),
        Inequality("sl+c<=s", lhs, s, lhs <= s),
    )
    return BennequinReport(sl, c, js, s, ineqs)
