"""Foams as movies of webs, closed-foam evaluation and the pairing.

A ``FoamWord`` is a sequence of elementary pieces (cup, cap, zip, unzip)
between webs, with dots placed on facets ``(slice, edge)``.  Closing a word
produces the abstract pre-foam: regular regions with genus, dots and
boundary circles, and singular circles with the cyclic order of the three
regions meeting there.  Each region is cut into disks by neck cutting in
``A = R[x]/omega``, and every singular circle then carries a theta foam
evaluated by the (Theta) table.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .coeff import CircleAlgebra, Potential
from .web import (
    Cup,
    Edge,
    ReductionTree,
    Vertex,
    Web,
    ZipData,
    reduce_web,
    remove_loop,
    unzip_web,
)


class IrreducibleConfiguration(RuntimeError):
    pass


class SingularGram(RuntimeError):
    pass


class BoundaryMismatch(ValueError):
    pass


_FLIP = {"cup": "cap", "cap": "cup", "zip": "unzip", "unzip": "zip"}


def _ends(kind: str, data) -> tuple[Web, Web]:
    if kind in ("cup", "zip"):
        return data.small, data.big
    return data.big, data.small


@dataclass(frozen=True, eq=False)
class FoamWord:
    """A foam from ``start`` built from ``pieces``; ``dots`` holds ``(slice, edge, count)``."""

    start: Web
    pieces: tuple = ()
    dots: tuple = ()

    def webs(self) -> list[Web]:
        out = [self.start]
        for kind, data in self.pieces:
            out.append(_ends(kind, data)[1])
        return out

    @property
    def domain(self) -> Web:
        return self.start

    @property
    def codomain(self) -> Web:
        if not self.pieces:
            return self.start
        kind, data = self.pieces[-1]
        return _ends(kind, data)[1]

    def shape(self) -> tuple:
        return tuple(id(d) for _, d in self.pieces) + tuple(k for k, _ in self.pieces)

    def with_dots(self, dots: Sequence) -> "FoamWord":
        return FoamWord(self.start, self.pieces, tuple(dots))


def identity(web: Web) -> FoamWord:
    return FoamWord(web)


def piece(kind: str, data) -> FoamWord:
    return FoamWord(_ends(kind, data)[0], ((kind, data),))


def cup(data: Cup, dots: int = 0) -> FoamWord:
    return FoamWord(data.small, (("cup", data),), ((1, data.loop, dots),) if dots else ())


def _same_web(a: Web, b: Web) -> bool:
    return a is b or (a.edges == b.edges and a.vertices == b.vertices)


def compose(f: FoamWord, g: FoamWord) -> FoamWord:
    """``g`` after ``f``."""
    if not _same_web(f.codomain, g.domain):
        raise BoundaryMismatch("codomain of the first foam differs from domain of the second")
    n = len(f.pieces)
    dots = f.dots + tuple((k + n, e, c) for k, e, c in g.dots)
    return FoamWord(f.start, f.pieces + g.pieces, dots)


def reverse(f: FoamWord) -> FoamWord:
    n = len(f.pieces)
    pieces = tuple((_FLIP[k], d) for k, d in reversed(f.pieces))
    return FoamWord(f.codomain, pieces, tuple((n - k, e, c) for k, e, c in f.dots))


# ---------------------------------------------------------------------------
# closing up


class _UF:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        p = self.parent
        if x not in p:
            p[x] = x
            return x
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


@dataclass(frozen=True)
class Region:
    genus: int
    dots: int
    boundary: tuple  # boundary circle ids


@dataclass(frozen=True)
class ClosedTopology:
    """Dot-free data of a closed pre-foam."""

    regions: tuple  # of (genus, boundary circle ids)
    singular: tuple  # triples of boundary circle ids in oriented cyclic order
    facet_region: dict = field(repr=False)


@dataclass(frozen=True)
class ClosedPreFoam:
    regions: tuple  # of Region
    singular: tuple


def _cyclic_equal(a: tuple, b: tuple) -> bool:
    return any(a == b[i:] + b[:i] for i in range(len(b)))


def close_topology(word: FoamWord) -> ClosedTopology:
    webs = word.webs()
    if not webs[0].is_empty or not webs[-1].is_empty:
        raise BoundaryMismatch("foam is not closed")
    facets = _UF()
    sides = _UF()
    verts = _UF()
    chi: list = []
    for k in range(1, len(webs) - 1):
        for e, d in webs[k].edges.items():
            facets.find((k, e))
            chi.append(((k, e), -1 if d.tail is not None else 0))
    for k, (kind, data) in enumerate(word.pieces):
        lo = k if kind in ("cup", "zip") else k + 1  # slice of the small web
        hi = 2 * k + 1 - lo
        small = data.small
        if kind in ("cup", "cap"):
            for e, d in small.edges.items():
                facets.union((lo, e), (hi, e))
                chi.append(((lo, e), 1 if d.tail is not None else 0))
            chi.append(((hi, data.loop), 1))
            for v, vd in small.vertices.items():
                verts.union((lo, v), (hi, v))
                for e in vd.rot:
                    sides.union((lo, v, e), (hi, v, e))
            continue
        chains = data.chains
        for e, chain in chains.items():
            for c in chain:
                facets.union((lo, e), (hi, c))
            chi.append(((lo, e), 1 if small.edges[e].tail is not None else 0))
        chi.append(((hi, data.t), 1))
        for v, vd in small.vertices.items():
            verts.union((lo, v), (hi, v))
            pick = 0 if vd.kind == "source" else -1
            for e in vd.rot:
                sides.union((lo, v, e), (hi, v, chains[e][pick]))
        z, s = data.z, data.s
        verts.union((hi, z), (hi, s))
        for x, y in data.pairs:
            sides.union((hi, z, x), (hi, s, y))
        sides.union((hi, z, data.t), (hi, s, data.t))

    # boundary circles, their regions and the singular circles
    bc_index: dict = {}
    bc_region: list = []
    sing_occ: dict = {}
    for k, w in enumerate(webs):
        for v, vd in w.vertices.items():
            sing_occ.setdefault(verts.find((k, v)), []).append((k, v, vd))
            for e in vd.rot:
                root = sides.find((k, v, e))
                reg = facets.find((k, e))
                if root not in bc_index:
                    bc_index[root] = len(bc_region)
                    bc_region.append(reg)
                elif bc_region[bc_index[root]] != reg:
                    raise IrreducibleConfiguration("boundary circle meets two regions")
    singular = []
    for occs in sing_occ.values():
        ref = None
        for k, v, vd in occs:
            order = tuple(bc_index[sides.find((k, v, e))] for e in vd.rot)
            if vd.kind == "source":
                order = order[::-1]
            if ref is None:
                ref = order
                if len(set(order)) != 3:
                    raise IrreducibleConfiguration("singular circle with fewer than three sheets")
            elif not _cyclic_equal(order, ref):
                raise IrreducibleConfiguration("inconsistent sheet order along a singular circle")
        singular.append(ref)
    if sum(1 for _ in singular) * 3 != len(bc_region):
        raise IrreducibleConfiguration("boundary circles not attached to singular circles")

    region_ids: dict = {}
    region_chi: list = []
    facet_region: dict = {}
    for key, val in chi:
        root = facets.find(key)
        if root not in region_ids:
            region_ids[root] = len(region_chi)
            region_chi.append(0)
        region_chi[region_ids[root]] += val
    for key in list(facets.parent):
        facet_region[key] = region_ids[facets.find(key)]
    boundaries: list = [[] for _ in region_chi]
    for i, reg in enumerate(bc_region):
        boundaries[region_ids[reg]].append(i)
    regions = []
    for c, bd in zip(region_chi, boundaries):
        twice_g = 2 - c - len(bd)
        if twice_g < 0 or twice_g % 2:
            raise IrreducibleConfiguration(f"region with chi={c} and {len(bd)} boundary circles")
        regions.append((twice_g // 2, tuple(bd)))
    return ClosedTopology(tuple(regions), tuple(singular), facet_region)


def attach_dots(top: ClosedTopology, dots: Sequence) -> ClosedPreFoam:
    counts = [0] * len(top.regions)
    for k, e, c in dots:
        counts[top.facet_region[(k, e)]] += c
    return ClosedPreFoam(
        tuple(Region(g, d, bd) for (g, bd), d in zip(top.regions, counts)), top.singular
    )


def close_up(word: FoamWord) -> ClosedPreFoam:
    return attach_dots(close_topology(word), word.dots)


# ---------------------------------------------------------------------------
# evaluation

_THETA = {
    (0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1,
    (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1,
}


def _region_element(alg: CircleAlgebra, genus: int, dots: int) -> tuple:
    u = alg.x_power(dots)
    h = alg.handle()
    for _ in range(genus):
        u = alg.mul(u, h)
    return u


def _multiply(f1, f2, zero):
    v1, t1 = f1
    v2, t2 = f2
    shared = [v for v in v1 if v in v2]
    i1 = [v1.index(v) for v in shared]
    i2 = [v2.index(v) for v in shared]
    extra = [i for i, v in enumerate(v2) if v not in v1]
    out_vars = v1 + tuple(v2[i] for i in extra)
    index: dict = {}
    for a2, c2 in t2.items():
        index.setdefault(tuple(a2[i] for i in i2), []).append((tuple(a2[i] for i in extra), c2))
    out: dict = {}
    for a1, c1 in t1.items():
        for rest, c2 in index.get(tuple(a1[i] for i in i1), ()):
            key = a1 + rest
            val = c1 * c2
            prev = out.get(key)
            out[key] = val if prev is None else prev + val
    return out_vars, {k: v for k, v in out.items() if v}


def _sum_out(f, var):
    vs, t = f
    i = vs.index(var)
    out: dict = {}
    for a, c in t.items():
        key = a[:i] + a[i + 1:]
        prev = out.get(key)
        out[key] = c if prev is None else prev + c
    return vs[:i] + vs[i + 1:], {k: v for k, v in out.items() if v}


_ALGEBRAS: dict = {}


def _region_tables(omega: Potential):
    hit = _ALGEBRAS.get(id(omega))
    if hit is None or hit[0] is not omega:
        hit = (omega, CircleAlgebra(omega), {})
        _ALGEBRAS[id(omega)] = hit
    return hit[1], hit[2]


def _region_tensor(omega: Potential, genus: int, dots: int, nb: int):
    """Counit (``nb = 0``) or iterated coproduct of ``x^dots h^genus``."""
    alg, cache = _region_tables(omega)
    key = (genus, dots, nb)
    if key not in cache:
        u = _region_element(alg, genus, dots)
        cache[key] = alg.counit(u) if nb == 0 else alg.comultiply(u, nb)
    return cache[key]


def evaluate_closed(pf: ClosedPreFoam, omega: Potential, rng: Optional[random.Random] = None):
    """Evaluate a closed pre-foam; ``rng`` randomizes the contraction order."""
    ring = omega.ring
    scalar = ring.one
    factors = []
    for reg in pf.regions:
        t = _region_tensor(omega, reg.genus, reg.dots, len(reg.boundary))
        if not reg.boundary:
            scalar = scalar * t
        else:
            factors.append((tuple(reg.boundary), t))
    if not scalar:
        return ring.zero
    theta = _THETA
    for sc in pf.singular:
        factors.append((tuple(sc), theta))
    if rng is not None:
        rng.shuffle(factors)
    while factors:
        if any(not t for _, t in factors):
            return ring.zero
        live = {v for vs, _ in factors for v in vs}
        if not live:
            for _, t in factors:
                scalar = scalar * t[()]
            break
        if rng is not None:
            var = rng.choice(sorted(live))
        else:
            var = min(live, key=lambda v: _cost(factors, v))
        touching = [f for f in factors if var in f[0]]
        rest = [f for f in factors if var not in f[0]]
        acc = touching[0]
        for f in touching[1:]:
            acc = _multiply(acc, f, ring.zero)
        acc = _sum_out(acc, var)
        factors = rest + [acc]
    return scalar


def _cost(factors, var) -> int:
    vs = set()
    for f in factors:
        if var in f[0]:
            vs.update(f[0])
    return len(vs)


# ---------------------------------------------------------------------------
# pairing, bases and expansion

_TOPOLOGY_CACHE: dict = {}
_VALUE_CACHE: dict = {}


def _closed_topology_cached(f: FoamWord, g: FoamWord):
    key = (f.shape(), g.shape())
    hit = _TOPOLOGY_CACHE.get(key)
    if hit is None:
        closed = compose(FoamWord(f.start, f.pieces), reverse(FoamWord(g.start, g.pieces)))
        hit = (close_topology(closed), f.pieces, g.pieces)
        _TOPOLOGY_CACHE[key] = hit
    return hit[0], len(f.pieces) + len(g.pieces)


def clear_caches() -> None:
    _TOPOLOGY_CACHE.clear()
    _VALUE_CACHE.clear()
    _BASIS_CACHE.clear()
    _MATRIX_CACHE.clear()


def closed_degree(top: ClosedTopology, counts: Sequence[int]) -> int:
    """Foam degree ``-2 chi + 2 dots``; closed foams of negative degree evaluate to zero."""
    chi = sum(2 - 2 * g - len(bd) for g, bd in top.regions)
    return -2 * chi + 2 * sum(counts)


def pair(f: FoamWord, g: FoamWord, omega: Potential):
    """Evaluate ``f`` (from the empty web to W) against ``g`` (the same kind), glued along W."""
    if not _same_web(f.codomain, g.codomain):
        raise BoundaryMismatch("foams end on different webs")
    top, n = _closed_topology_cached(f, g)
    dots = list(f.dots) + [(n - k, e, c) for k, e, c in g.dots]
    counts = [0] * len(top.regions)
    for k, e, c in dots:
        counts[top.facet_region[(k, e)]] += c
    if closed_degree(top, counts) < 0:
        return omega.ring.zero
    key = (id(top), id(omega), tuple(counts))
    val = _VALUE_CACHE.get(key)
    if val is None:
        pf = ClosedPreFoam(
            tuple(Region(g_, d, bd) for (g_, bd), d in zip(top.regions, counts)), top.singular
        )
        val = evaluate_closed(pf, omega)
        _VALUE_CACHE[key] = (val, top, omega)
        return val
    return val[0]


@dataclass(eq=False)
class WebBasis:
    """Basis of the state space of a web read off its reduction tree."""

    web: Web
    tree: ReductionTree
    elements: list  # FoamWord from the empty web
    degrees: list  # foam degrees
    _inverse: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    def gram(self, omega: Potential) -> list:
        return [[pair(b, c, omega) for c in self.elements] for b in self.elements]

    def gram_inverse(self, omega: Potential) -> list:
        key = id(omega)
        if key not in self._inverse:
            self._inverse[key] = (invert_unimodular(self.gram(omega), omega.ring), omega)
        return self._inverse[key][0]


def web_basis(web: Web, rng: Optional[random.Random] = None) -> WebBasis:
    tree = reduce_web(web, rng)
    elements, degrees = [], []
    for pieces, dots, shift in tree.leaves():
        start = pieces[0].small if pieces else web
        elements.append(FoamWord(start, tuple(_as_kind(p) for p in pieces), dots))
        degrees.append(shift)
    return WebBasis(web, tree, elements, degrees)


def _as_kind(p) -> tuple:
    return ("cup", p) if isinstance(p, Cup) else ("zip", p)


def invert_unimodular(matrix: list, ring) -> list:
    """Gauss-Jordan inverse using unit pivots only."""
    n = len(matrix)
    a = [list(row) + [ring.one if i == j else ring.zero for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if ring.is_unit(a[r][col]):
                piv = r
                break
        if piv is None:
            raise SingularGram(f"no unit pivot in column {col}")
        a[col], a[piv] = a[piv], a[col]
        inv = ring.one / a[col][col] if ring.is_field else _unit_inverse(a[col][col], ring)
        a[col] = [inv * x for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y if y else x for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _unit_inverse(u, ring):
    if u == ring.one:
        return ring.one
    if u == -ring.one:
        return -ring.one
    return ring.dom.exquo(ring.one, u)


def expand_in_basis(F: FoamWord, basis: WebBasis, omega: Potential) -> list:
    """Coordinates of ``F`` (from the empty web to ``basis.web``) in ``basis``."""
    inv = basis.gram_inverse(omega)
    y = [pair(F, c, omega) for c in basis.elements]
    n = len(y)
    zero = omega.ring.zero
    out = []
    for j in range(n):
        acc = zero
        for k in range(n):
            if y[k] and inv[k][j]:
                acc = acc + y[k] * inv[k][j]
        out.append(acc)
    return out


_BASIS_CACHE: dict = {}
_MATRIX_CACHE: dict = {}


def cached_web_basis(web: Web) -> WebBasis:
    """Basis shared by all webs with the same labelled structure."""
    key = web.signature()
    hit = _BASIS_CACHE.get(key)
    if hit is None:
        hit = _BASIS_CACHE[key] = web_basis(web)
    return hit


def cached_piece_matrix(kind: str, data: ZipData, omega: Potential) -> list:
    """``piece_matrix`` between the cached bases of the two ends of a zip."""
    key = (kind, data.small.signature(), data.big.signature(), data.t, id(omega))
    hit = _MATRIX_CACHE.get(key)
    if hit is None:
        src, dst = (data.small, data.big) if kind == "zip" else (data.big, data.small)
        mat = piece_matrix(kind, data, cached_web_basis(src), cached_web_basis(dst), omega)
        hit = _MATRIX_CACHE[key] = (mat, omega)
    return hit[0]


def piece_matrix(kind: str, data, source: WebBasis, target: WebBasis, omega: Potential) -> list:
    """Matrix (rows: target basis, columns: source basis) of an elementary piece."""
    step = piece(kind, data)
    cols = [expand_in_basis(compose(b, step), target, omega) for b in source.elements]
    return [[cols[i][j] for i in range(len(cols))] for j in range(len(target))]


# ---------------------------------------------------------------------------
# the theta foam


def theta_web() -> Web:
    """Two thin edges ``0, 1`` and the thick edge ``2`` between a source and a sink."""
    edges = {0: Edge(1, 0), 1: Edge(1, 0), 2: Edge(1, 0, True)}
    vertices = {0: Vertex("sink", (2, 0, 1)), 1: Vertex("source", (1, 0, 2))}
    return Web(vertices, edges)


def theta_foam(dots: Sequence[int], reverse_orientation: bool = False) -> ClosedPreFoam:
    """The closed theta foam with ``dots[i]`` dots on the facets met in order around its singular circle.

    Facets are listed counterclockwise at the sink; ``reverse_orientation``
    lists them the other way.
    """
    web = theta_web()
    z = unzip_web(web, 2)
    l1, l2 = sorted(z.small.edges)
    c2 = remove_loop(z.small, l2)
    c1 = remove_loop(c2.small, l1)
    half = FoamWord(c1.small, (("cup", c1), ("cup", c2), ("zip", z)))
    order = web.vertices[0].rot
    if reverse_orientation:
        order = order[::-1]
    closed = compose(half, reverse(half))
    return close_up(closed.with_dots([(3, e, n) for e, n in zip(order, dots) if n]))
