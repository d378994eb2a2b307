"""Coefficient rings, potentials and the small algebras attached to them.

Rings are thin wrappers around sympy domains.  The circle algebra is
``R[x]/omega`` with elements stored as coefficient triples ``(c0, c1, c2)``.
The theta algebra ``R[A,B,C]`` modulo the elementary symmetric relations is
stored as dicts ``{(r, s): coeff}`` on the normal basis ``A^r B^s``,
``r <= 2``, ``s <= 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Any, Iterable, Optional, Sequence

from sympy import GF, QQ, ZZ, symbols


class NotARoot(ValueError):
    pass


class UnsupportedRing(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Ring:
    """A commutative coefficient ring backed by a sympy domain."""

    tag: str
    dom: Any = field(repr=False)
    is_field: bool = False
    gens: tuple = field(default=(), repr=False)

    @property
    def zero(self):
        return self.dom.zero

    @property
    def one(self):
        return self.dom.one

    def __call__(self, value):
        if isinstance(value, str):
            value = value.strip()
            if self.gens:
                from sympy import sympify
                return self.dom.from_sympy(sympify(value))
            if "/" in value:
                num, den = value.split("/")
                return self.dom.convert(int(num)) / self.dom.convert(int(den))
            return self.dom.convert(int(value))
        return self.dom.convert(value)

    def is_unit(self, value) -> bool:
        if not value:
            return False
        if self.is_field:
            return True
        if self.gens:
            if not value.is_ground:
                return False
            c = value.LC
            return self.dom.domain.is_unit(self.dom.domain.convert(c))
        return self.dom.is_unit(value)


@lru_cache(maxsize=None)
def rationals() -> Ring:
    return Ring("q", QQ, True)


@lru_cache(maxsize=None)
def prime_field(p: int) -> Ring:
    if p not in (2, 3, 5, 7, 11, 13):
        raise UnsupportedRing(f"unsupported prime {p}")
    return Ring(f"f{p}", GF(p), True)


@lru_cache(maxsize=None)
def rational_polys_in_U() -> Ring:
    U = symbols("U")
    dom = QQ[U]
    return Ring("qu", dom, False, tuple(dom.gens))


@lru_cache(maxsize=None)
def generic_ring() -> Ring:
    """``Z[a2, a1, a0]``: the universal ring for cubic monic potentials."""
    a2, a1, a0 = symbols("a2 a1 a0")
    dom = ZZ[a2, a1, a0]
    return Ring("generic", dom, False, tuple(dom.gens))


@lru_cache(maxsize=None)
def split_ring() -> Ring:
    """``Z[a1', a0', x1]``: the universal ring for a potential with a chosen root."""
    b1, b0, x1 = symbols("a1p a0p x1")
    dom = ZZ[b1, b0, x1]
    return Ring("split", dom, False, tuple(dom.gens))


def ring_from_tag(tag: str) -> Ring:
    tag = tag.lower()
    if tag == "q":
        return rationals()
    if tag == "qu":
        return rational_polys_in_U()
    if tag.startswith("f") and tag[1:].isdigit():
        return prime_field(int(tag[1:]))
    raise UnsupportedRing(f"unknown ring {tag!r}")


@dataclass(frozen=True, eq=False)
class Potential:
    """The monic cubic ``x^3 + a2 x^2 + a1 x + a0`` over ``ring``."""

    ring: Ring
    a2: Any
    a1: Any
    a0: Any
    roots: Optional[tuple] = None

    @property
    def coeffs(self) -> tuple:
        return (self.a2, self.a1, self.a0)

    def __call__(self, x):
        return ((x + self.a2) * x + self.a1) * x + self.a0

    def derivative(self, x):
        return (3 * x + 2 * self.a2) * x + self.a1

    def is_homogeneous(self) -> bool:
        """True when the potential is ``x^3`` (the graded case)."""
        return not (self.a2 or self.a1 or self.a0)

    def __repr__(self) -> str:
        return f"Potential[{self.ring.tag}](a2={self.a2}, a1={self.a1}, a0={self.a0})"


def potential(ring: Ring, a2, a1, a0) -> Potential:
    return Potential(ring, ring(a2), ring(a1), ring(a0))


def from_roots(ring: Ring, roots: Sequence) -> Potential:
    r1, r2, r3 = (ring(r) for r in roots)
    return Potential(
        ring, -(r1 + r2 + r3), r1 * r2 + r1 * r3 + r2 * r3, -(r1 * r2 * r3), (r1, r2, r3)
    )


@lru_cache(maxsize=None)
def generic_potential() -> Potential:
    R = generic_ring()
    return Potential(R, *R.gens)


def split_root(omega: Potential, x1) -> tuple:
    """Return ``(a1', a0')`` with ``omega = (x - x1)(x^2 + a1' x + a0')``."""
    if isinstance(x1, (int, str)):
        x1 = omega.ring(x1)
    b1 = omega.a2 + x1
    b0 = omega.a1 + x1 * b1
    if omega.a0 + x1 * b0:
        raise NotARoot(f"{x1} is not a root of {omega}")
    return b1, b0


def root_multiplicity(omega: Potential, x1) -> int:
    if omega(x1):
        return 0
    if omega.derivative(x1):
        return 1
    if 6 * x1 + 2 * omega.a2:
        return 2
    return 3


def split_potential() -> tuple[Potential, Any]:
    """The potential over ``Z[a1', a0', x1]`` whose chosen root is ``x1``."""
    R = split_ring()
    b1, b0, x1 = R.gens
    return Potential(R, b1 - x1, b0 - x1 * b1, -x1 * b0), x1


def specialize(value, values: Sequence, target: Ring):
    """Substitute the generators of a polynomial ring element by ``values``."""
    if not value:
        return target.zero
    out = target.zero
    for monom, c in value.terms():
        term = target.dom.convert(int(c))
        for v, e in zip(values, monom):
            if e:
                term = term * v ** e
        out = out + term
    return out


# ---------------------------------------------------------------------------
# circle algebra R[x]/omega


class CircleAlgebra:
    """The Frobenius algebra ``R[x]/omega`` with counit ``-coeff(x^2)``."""

    def __init__(self, omega: Potential):
        self.omega = omega
        self.ring = omega.ring
        z, o = self.ring.zero, self.ring.one
        self._powers = [(o, z, z), (z, o, z), (z, z, o)]

    def element(self, coeffs: Iterable) -> tuple:
        c = [self.ring(v) for v in coeffs]
        while len(c) > 3:
            top = c.pop()
            d = len(c) - 3
            c[d + 2] -= top * self.omega.a2
            c[d + 1] -= top * self.omega.a1
            c[d] -= top * self.omega.a0
        while len(c) < 3:
            c.append(self.ring.zero)
        return tuple(c)

    def x_power(self, k: int) -> tuple:
        while len(self._powers) <= k:
            self._powers.append(self.mul_x(self._powers[-1]))
        return self._powers[k]

    def mul_x(self, u: tuple) -> tuple:
        c0, c1, c2 = u
        w = self.omega
        return (-c2 * w.a0, c0 - c2 * w.a1, c1 - c2 * w.a2)

    def mul(self, u: tuple, v: tuple) -> tuple:
        out = (self.ring.zero,) * 3
        acc = v
        for c in u:
            if c:
                out = tuple(o + c * a for o, a in zip(out, acc))
            acc = self.mul_x(acc)
        return out

    def add(self, u: tuple, v: tuple) -> tuple:
        return tuple(a + b for a, b in zip(u, v))

    def scale(self, c, u: tuple) -> tuple:
        return tuple(c * a for a in u)

    def counit(self, u: tuple):
        return -u[2]

    def handle(self) -> tuple:
        """The genus-reducing element ``-omega'(x)``."""
        w = self.omega
        return (-w.a1, -2 * w.a2, -3 * self.ring.one)

    def copairing(self) -> dict:
        """``Delta(1)`` as ``{(i, j): coeff}`` on ``x^i (x) x^j``."""
        w = self.omega
        one = self.ring.one
        out: dict = {}
        for i in range(3):
            out[(i, 2 - i)] = -one
        for i in range(2):
            out[(i, 1 - i)] = out.get((i, 1 - i), self.ring.zero) - w.a2
        out[(0, 0)] = out.get((0, 0), self.ring.zero) - w.a1
        return out

    def comultiply(self, u: tuple, n: int) -> dict:
        """Iterated coproduct of ``u`` into ``n`` tensor factors (``n >= 1``)."""
        cur = {(i,): c for i, c in enumerate(u) if c}
        cop = self.copairing()
        for _ in range(n - 1):
            nxt: dict = {}
            for key, c in cur.items():
                head = self.x_power(key[0])
                for (i, j), d in cop.items():
                    left = self.mul(head, self.x_power(i))
                    for k, e in enumerate(left):
                        if e:
                            kk = (k, j) + key[1:]
                            nxt[kk] = nxt.get(kk, self.ring.zero) + c * d * e
            cur = {k: v for k, v in nxt.items() if v}
        return cur

    def sphere(self, dots: int):
        return self.counit(self.x_power(dots))


def sphere_value(omega: Potential, dots: int):
    """Value of a sphere with ``dots`` dots."""
    return CircleAlgebra(omega).sphere(dots)


# ---------------------------------------------------------------------------
# theta algebra R[A,B,C]/(e1 = -a2, e2 = a1, e3 = -a0)

THETA_BASIS = ((0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1))


def _add(d: dict, k, v):
    if v:
        s = d.get(k)
        s = v if s is None else s + v
        if s:
            d[k] = s
        else:
            d.pop(k, None)


def theta_normal_form(poly: dict, omega: Potential) -> dict:
    """Reduce ``{(p, q, r): coeff}`` (monomials ``A^p B^q C^r``) to the normal basis."""
    a2, a1, a0 = omega.a2, omega.a1, omega.a0
    # substitute C = -a2 - A - B
    work: dict = {}
    for (p, q, r), c in poly.items():
        terms = {(p, q): c}
        for _ in range(r):
            nxt: dict = {}
            for (i, j), v in terms.items():
                _add(nxt, (i, j), -a2 * v)
                _add(nxt, (i + 1, j), -v)
                _add(nxt, (i, j + 1), -v)
            terms = nxt
        for k, v in terms.items():
            _add(work, k, v)
    # rewrite B^2 and A^3 until normal
    out: dict = {}
    stack = list(work.items())
    while stack:
        (i, j), v = stack.pop()
        if not v:
            continue
        if j >= 2:
            # B^2 = -AB - A^2 - a2 A - a2 B - a1
            jj = j - 2
            stack.extend(
                [
                    ((i + 1, jj + 1), -v),
                    ((i + 2, jj), -v),
                    ((i + 1, jj), -a2 * v),
                    ((i, jj + 1), -a2 * v),
                    ((i, jj), -a1 * v),
                ]
            )
        elif i >= 3:
            ii = i - 3
            stack.extend([((ii + 2, j), -a2 * v), ((ii + 1, j), -a1 * v), ((ii, j), -a0 * v)])
        else:
            _add(out, (i, j), v)
    return out


def theta_monomial(p: int, q: int, r: int, omega: Potential) -> dict:
    return theta_normal_form({(p, q, r): omega.ring.one}, omega)


def theta_functional(nf: dict, omega: Potential):
    """Closed theta foam value of a normal-form element: minus its ``A^2 B`` coefficient."""
    return -nf.get((2, 1), omega.ring.zero)


def theta_value(p: int, q: int, r: int, omega: Potential):
    """Value of the theta foam with ``p, q, r`` dots on its three facets."""
    return theta_functional(theta_monomial(p, q, r, omega), omega)


def theta_split(nf: dict, omega: Potential) -> tuple[tuple, tuple]:
    """The isomorphism onto ``A (+) A``: ``A^k -> (x^k, 0)``, ``A^k B -> (0, y^k)``."""
    z = omega.ring.zero
    first = tuple(nf.get((k, 0), z) for k in range(3))
    second = tuple(nf.get((k, 1), z) for k in range(3))
    return first, second


def zip_two_circles(r: int, s: int, omega: Potential) -> dict:
    """Image of ``x^r (x) y^s`` under the zip onto the theta web: ``A^r B^s``."""
    return theta_normal_form({(r, s, 0): omega.ring.one}, omega)


def theta_mul(f: dict, g: dict, omega: Potential) -> dict:
    prod_: dict = {}
    for (i, j), u in f.items():
        for (k, l), v in g.items():
            _add(prod_, (i + k, j + l, 0), u * v)
    return theta_normal_form(prod_, omega)


def theta_poly_in(var: int, coeffs: Sequence, omega: Potential) -> dict:
    """``sum_k coeffs[k] * V^k`` for ``V`` in ``(A, B, C)`` indexed by ``var``."""
    poly: dict = {}
    for k, c in enumerate(coeffs):
        key = [0, 0, 0]
        key[var] = k
        _add(poly, tuple(key), c)
    return theta_normal_form(poly, omega)


# ---------------------------------------------------------------------------
# tensor elements of A^{(x) n}


@dataclass
class TensorElement:
    """An element of ``A^{(x) n}`` as ``{exponent tuple: coeff}``."""

    n: int
    terms: dict

    def is_zero(self) -> bool:
        return not any(self.terms.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement) or self.n != other.n:
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(self.terms.get(k, 0) == other.terms.get(k, 0) for k in keys)


def beta_tensor(n: int, omega: Potential, x1) -> TensorElement:
    """``P(x_1) ... P(x_n)`` with ``P = x^2 + a1' x + a0'``."""
    b1, b0 = split_root(omega, x1)
    one = omega.ring.one
    p = {2: one, 1: b1, 0: b0}
    terms: dict = {(): one}
    for _ in range(n):
        nxt: dict = {}
        for key, c in terms.items():
            for e, d in p.items():
                _add(nxt, key + (e,), c * d)
        terms = nxt
    return TensorElement(n, terms)


def tensor_reduce(t: TensorElement, alg: CircleAlgebra) -> TensorElement:
    """Rewrite every exponent into ``{0, 1, 2}`` using ``omega(x) = 0``."""
    out: dict = {}
    for key, c in t.terms.items():
        parts = [alg.x_power(e) for e in key]
        for idx in product(range(3), repeat=len(key)):
            v = c
            for part, i in zip(parts, idx):
                v = v * part[i]
                if not v:
                    break
            _add(out, idx, v)
    return TensorElement(t.n, out)
