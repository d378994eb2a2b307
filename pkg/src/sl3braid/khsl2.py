"""Khovanov homology over a field and the Plamenevskaya class.

An independent engine over ``F[X]/(X^2)`` used to cross-check vanishing
verdicts.  Circles of a resolution are computed directly from the segments
of the closure diagram.  Conventions: the oriented resolution sits in
homological degree 0, a generator labelled ``1`` has degree ``+1`` and ``X``
has degree ``-1``, ``h = |v| - n_-`` and ``q = deg + |v| + n_+ - 2 n_-``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .braid import BraidWord
from .coeff import Ring
from .complex import HomologyEntry, HomologySummary
from .laurent import LaurentPoly
from .linalg import column_rank, matrix_columns, rank
from .web import LinkDiagram, closure_diagram


def _oriented_at(sign: int, bit: int) -> bool:
    return bit == (0 if sign > 0 else 1)


def circles(D: LinkDiagram, bits) -> list[frozenset]:
    """Circles of the smoothing ``bits`` as sets of segments, sorted by min segment."""
    parent = list(range(D.n_segments))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for c, bit in zip(D.crossings, bits):
        if _oriented_at(c.sign, bit):
            union(c.in_left, c.out_left)
            union(c.in_right, c.out_right)
        else:
            union(c.in_left, c.in_right)
            union(c.out_left, c.out_right)
    groups: dict = {}
    for s in range(D.n_segments):
        groups.setdefault(find(s), set()).add(s)
    return sorted((frozenset(g) for g in groups.values()), key=min)


@dataclass(eq=False)
class Sl2Complex:
    diagram: LinkDiagram
    ring: Ring
    gens: dict  # h -> [(bits, labels)]
    qdeg: dict
    index: dict  # (bits, labels) -> position in gens[h]
    diff: dict  # h -> {(row, col): value}

    def dim(self, h: int) -> int:
        return len(self.gens.get(h, ()))

    def matrix(self, h: int) -> dict:
        return self.diff.get(h, {})


def _circle_of(circs: list, seg: int) -> int:
    for i, c in enumerate(circs):
        if seg in c:
            return i
    raise KeyError(seg)


def _edge_map(src: list, dst: list, k_seg: tuple, labels: tuple) -> list:
    """Merge or split at a crossing whose two source arcs contain ``k_seg``.

    Returns ``[(labels, coeff)]``.
    """
    a, b = (_circle_of(src, s) for s in k_seg)
    # circles away from the crossing carry over unchanged
    moved = {i for i in (a, b)}
    keep = {}
    for i, c in enumerate(src):
        if i not in moved:
            keep[dst.index(c)] = labels[i]
    new = [j for j in range(len(dst)) if j not in keep]
    out = []
    if a != b:  # merge: 1*1 = 1, 1*X = X, X*X = 0
        s = labels[a] + labels[b]
        if s <= 1:
            lab = dict(keep)
            lab[new[0]] = s
            out.append((tuple(lab[j] for j in range(len(dst))), 1))
    else:  # split: 1 -> 1X + X1, X -> XX
        j1, j2 = new
        pairs = [(0, 1), (1, 0)] if labels[a] == 0 else [(1, 1)]
        for u, v in pairs:
            lab = dict(keep)
            lab[j1], lab[j2] = u, v
            out.append((tuple(lab[j] for j in range(len(dst))), 1))
    return out


def build_sl2_complex(D: LinkDiagram, ring: Ring) -> Sl2Complex:
    n = len(D.crossings)
    n_minus = D.n_minus
    n_plus = D.n_plus
    circ = {bits: circles(D, bits) for bits in product((0, 1), repeat=n)}
    gens: dict = {}
    qdeg: dict = {}
    index: dict = {}
    for bits, cs in circ.items():
        h = sum(bits) - n_minus
        for labels in product((0, 1), repeat=len(cs)):
            lst = gens.setdefault(h, [])
            index[(bits, labels)] = len(lst)
            lst.append((bits, labels))
            deg = sum(1 - 2 * x for x in labels)
            qdeg.setdefault(h, []).append(deg + sum(bits) + n_plus - 2 * n_minus)
    diff: dict = {}
    for bits, cs in circ.items():
        h = sum(bits) - n_minus
        for k in range(n):
            if bits[k]:
                continue
            target = bits[:k] + (1,) + bits[k + 1:]
            sign = -1 if sum(bits[:k]) % 2 else 1
            c = D.crossings[k]
            if _oriented_at(c.sign, 0):
                segs = (c.in_left, c.in_right)
            else:
                segs = (c.in_left, c.out_left)
            block = diff.setdefault(h, {})
            for labels in product((0, 1), repeat=len(cs)):
                col = index[(bits, labels)]
                for lab, v in _edge_map(cs, circ[target], segs, labels):
                    key = (index[(target, lab)], col)
                    block[key] = block.get(key, ring.zero) + ring(sign * v)
    for h in diff:
        diff[h] = {k: v for k, v in diff[h].items() if v}
    return Sl2Complex(D, ring, gens, qdeg, index, diff)


@lru_cache(maxsize=512)
def _cached(D: LinkDiagram, tag: str, ring: Ring) -> Sl2Complex:
    return build_sl2_complex(D, ring)


def sl2_complex(D: LinkDiagram, ring: Ring) -> Sl2Complex:
    return _cached(D, ring.tag, ring)


def d_squared_zero(C: Sl2Complex) -> bool:
    from .complex import _compose

    for h in C.diff:
        if h + 1 in C.diff and _compose(C.diff[h + 1], C.diff[h], C.ring.zero):
            return False
    return True


def euler_characteristic(C: Sl2Complex) -> LaurentPoly:
    out: dict = {}
    for h, qs in C.qdeg.items():
        for q in qs:
            out[q] = out.get(q, 0) + (-1 if h % 2 else 1)
    return LaurentPoly(out)


def _sub_rank(C: Sl2Complex, h: int, q: int) -> int:
    block = C.matrix(h)
    if not block:
        return 0
    rows = [i for i, x in enumerate(C.qdeg[h + 1]) if x == q]
    cols = [j for j, x in enumerate(C.qdeg[h]) if x == q]
    rpos = {i: a for a, i in enumerate(rows)}
    cpos = {j: a for a, j in enumerate(cols)}
    sub = {(rpos[i], cpos[j]): v for (i, j), v in block.items() if i in rpos and j in cpos}
    return rank(sub, (len(rows), len(cols)), C.ring.dom)


def kh_homology(D: LinkDiagram, ring: Ring) -> HomologySummary:
    if not ring.is_field:
        raise ValueError("Khovanov homology is computed over fields only")
    C = sl2_complex(D, ring)
    entries = []
    for h in sorted(C.gens):
        for q in sorted(set(C.qdeg[h])):
            n = sum(1 for x in C.qdeg[h] if x == q)
            dim = n - _sub_rank(C, h, q) - _sub_rank(C, h - 1, q)
            if dim:
                entries.append(HomologyEntry(h, q, dim))
    return HomologySummary(tuple(entries))


@dataclass(frozen=True)
class PsiClass:
    braid: BraidWord
    vector: dict  # generator index in C^0 -> 1
    qdeg: int
    is_cycle: bool
    vanishes: bool


def psi_class(B: BraidWord, ring: Ring) -> PsiClass:
    """The all-``X`` generator of the oriented resolution of the closure of ``B``."""
    D = closure_diagram(B)
    C = sl2_complex(D, ring)
    bits = tuple(0 if c.sign > 0 else 1 for c in D.crossings)
    labels = (1,) * len(circles(D, bits))
    idx = C.index[(bits, labels)]
    vec = {idx: ring.one}
    image = {}
    for (i, j), v in C.matrix(0).items():
        if j == idx:
            image[i] = v
    cols = matrix_columns(C.matrix(-1), C.dim(-1))
    r = column_rank(cols, C.dim(0), ring.dom)
    vanishes = column_rank(cols + [vec], C.dim(0), ring.dom) == r
    return PsiClass(B, vec, C.qdeg[0][idx], not image, vanishes)


def psi_vanishes(B: BraidWord, ring: Ring) -> bool:
    return psi_class(B, ring).vanishes
