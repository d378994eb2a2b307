"""Laurent polynomials in one variable ``q`` with integer coefficients."""
from __future__ import annotations

from typing import Iterable, Mapping


class LaurentPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self.coeffs = {int(k): int(v) for k, v in (coeffs or {}).items() if v}

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> "LaurentPoly":
        out: dict[int, int] = {}
        for e in exps:
            out[e] = out.get(e, 0) + 1
        return cls(out)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly({k: v * other for k, v in self.coeffs.items()})
        out: dict[int, int] = {}
        for a, u in self.coeffs.items():
            for b, v in other.coeffs.items():
                out[a + b] = out.get(a + b, 0) + u * v
        return LaurentPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: v for e, v in self.coeffs.items()})

    def at_one(self) -> int:
        return sum(self.coeffs.values())

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.coeffs.items())))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            c = self.coeffs[e]
            parts.append(f"{c}" if e == 0 else f"{c}*q^{e}")
        return " + ".join(parts)


ONE = LaurentPoly({0: 1})
QUANTUM_2 = LaurentPoly({-1: 1, 1: 1})
QUANTUM_3 = LaurentPoly({-2: 1, 0: 1, 2: 1})
