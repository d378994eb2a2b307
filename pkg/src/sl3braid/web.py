"""Closed sl3 webs, cube resolutions of braid closures and face reduction.

A web is stored as a rotation system.  Every vertex is a sink (three
incoming edges) or a source (three outgoing edges) and lists its incident
edges in counterclockwise order.  An edge runs from a source to a sink;
loops have neither.  Braid strands run upwards and the closing arcs pass
to the right of the braid, so the planar picture is the annular closure.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .braid import BraidWord, MalformedBraid
from .laurent import ONE, QUANTUM_2, QUANTUM_3, LaurentPoly


class MalformedWeb(ValueError):
    pass


@dataclass(frozen=True)
class Vertex:
    kind: str  # "sink" or "source"
    rot: tuple  # incident edges, counterclockwise


@dataclass(frozen=True)
class Edge:
    tail: Optional[int]
    head: Optional[int]
    thick: bool = False

    @property
    def is_loop(self) -> bool:
        return self.tail is None


class Web:
    """An immutable closed web."""

    __slots__ = ("vertices", "edges", "_faces")

    def __init__(self, vertices: dict, edges: dict, check: bool = True):
        self.vertices = dict(vertices)
        self.edges = dict(edges)
        self._faces = None
        if check:
            self.validate()

    def validate(self) -> None:
        for vid, v in self.vertices.items():
            if v.kind not in ("sink", "source") or len(v.rot) != 3 or len(set(v.rot)) != 3:
                raise MalformedWeb(f"bad vertex {vid}: {v}")
            for e in v.rot:
                edge = self.edges.get(e)
                if edge is None:
                    raise MalformedWeb(f"vertex {vid} lists unknown edge {e}")
                end = edge.head if v.kind == "sink" else edge.tail
                if end != vid:
                    raise MalformedWeb(f"edge {e} is not attached to {vid} as expected")
        for eid, e in self.edges.items():
            if (e.tail is None) != (e.head is None):
                raise MalformedWeb(f"edge {eid} has exactly one endpoint")
            if e.tail is not None:
                if self.vertices[e.tail].kind != "source" or self.vertices[e.head].kind != "sink":
                    raise MalformedWeb(f"edge {eid} does not run from a source to a sink")
                if eid not in self.vertices[e.tail].rot or eid not in self.vertices[e.head].rot:
                    raise MalformedWeb(f"edge {eid} missing from a rotation")

    @property
    def is_empty(self) -> bool:
        return not self.edges

    def loops(self) -> list[int]:
        return sorted(e for e, d in self.edges.items() if d.is_loop)

    def is_arc(self, e: int) -> bool:
        return self.edges[e].tail is not None

    def faces(self) -> list[tuple]:
        """Faces as cyclic tuples of darts ``(edge, +1 | -1)`` from face tracing."""
        if self._faces is None:
            self._faces = _trace_faces(self)
        return self._faces

    def signature(self) -> tuple:
        return (
            tuple(sorted(self.vertices.items())),
            tuple(sorted(self.edges.items())),
        )

    def dump(self) -> str:
        lines = []
        for vid in sorted(self.vertices):
            v = self.vertices[vid]
            lines.append(f"v{vid} {v.kind} ccw=" + ",".join(f"e{e}" for e in v.rot))
        for eid in sorted(self.edges):
            e = self.edges[eid]
            tag = "thick" if e.thick else "thin"
            if e.is_loop:
                lines.append(f"e{eid} loop {tag}")
            else:
                lines.append(f"e{eid} v{e.tail}->v{e.head} {tag}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"Web({len(self.vertices)} vertices, {len(self.edges)} edges)"


EMPTY_WEB = Web({}, {})


def _trace_faces(web: Web) -> list[tuple]:
    seen = set()
    faces = []
    for eid in sorted(web.edges):
        edge = web.edges[eid]
        if edge.is_loop:
            continue
        for d in (1, -1):
            if (eid, d) in seen:
                continue
            face = []
            cur = (eid, d)
            while cur not in seen:
                seen.add(cur)
                face.append(cur)
                e, direction = cur
                ed = web.edges[e]
                v = ed.head if direction == 1 else ed.tail
                rot = web.vertices[v].rot
                nxt = rot[(rot.index(e) + 1) % 3]
                ned = web.edges[nxt]
                cur = (nxt, 1 if ned.tail == v else -1)
            faces.append(tuple(face))
    _check_euler(web, faces)
    return faces


def _check_euler(web: Web, faces: list) -> None:
    parent = {v: v for v in web.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in web.edges.values():
        if not e.is_loop:
            parent[find(e.tail)] = find(e.head)
    comps: dict = {}
    for v in web.vertices:
        comps.setdefault(find(v), [0, 0, 0])[0] += 1
    for e in web.edges.values():
        if not e.is_loop:
            comps[find(e.tail)][1] += 1
    for face in faces:
        e, d = face[0]
        comps[find(web.edges[e].tail)][2] += 1
    for v, e, f in comps.values():
        if v - e + f != 2:
            raise MalformedWeb("rotation system is not planar")


# ---------------------------------------------------------------------------
# splicing out a thick edge


@dataclass(frozen=True, eq=False)
class ZipData:
    """A zip from ``small`` to ``big`` (or an unzip read backwards).

    ``big`` has a sink ``z`` and a source ``s`` joined by the edge ``t``
    (from ``s`` to ``z``); ``small`` is ``big`` with ``z``, ``s`` and ``t``
    removed and the remaining ends at ``z`` and ``s`` joined according to
    ``pairs`` (edge into ``z``, edge out of ``s``).  ``chains`` sends each edge
    of ``small`` to its consecutive pieces in ``big``.
    """

    small: Web
    big: Web
    z: int
    s: int
    t: int
    pairs: tuple
    chains: dict = field(repr=False)


@dataclass(frozen=True, eq=False)
class Cup:
    """Birth of the loop ``loop``: ``big`` is ``small`` plus that loop."""

    small: Web
    big: Web
    loop: int


def planar_pairs(web: Web, t: int) -> tuple:
    """Ends joined when the thick edge ``t`` is removed planarly."""
    edge = web.edges[t]
    z, s = edge.head, edge.tail
    rz, rs = web.vertices[z].rot, web.vertices[s].rot
    iz, is_ = rz.index(t), rs.index(t)
    return ((rz[(iz + 1) % 3], rs[(is_ - 1) % 3]), (rz[(iz + 2) % 3], rs[(is_ - 2) % 3]))


def unzip_web(web: Web, t: int) -> ZipData:
    """Remove the edge ``t`` and its endpoints, joining the free ends planarly."""
    edge = web.edges[t]
    if edge.is_loop:
        raise MalformedWeb(f"edge {t} is a loop")
    z, s = edge.head, edge.tail
    pairs = planar_pairs(web, t)
    succ = {x: y for x, y in pairs}
    pred = {y: x for x, y in pairs}
    used = set()
    chains: dict = {}
    new_edges: dict = {}
    ends: dict = {}  # (big edge, "tail" | "head") -> small edge
    for eid in sorted(web.edges):
        if eid == t or eid in used:
            continue
        if eid in pred:  # not the start of a chain, unless on a cycle
            continue
        chain = [eid]
        while chain[-1] in succ:
            chain.append(succ[chain[-1]])
        used.update(chain)
        first, last = web.edges[chain[0]], web.edges[chain[-1]]
        new_edges[eid] = Edge(first.tail, last.head, first.thick if len(chain) == 1 else False)
        chains[eid] = tuple(chain)
        ends[(chain[0], "tail")] = eid
        ends[(chain[-1], "head")] = eid
    for eid in sorted(web.edges):
        if eid == t or eid in used:
            continue
        chain = [eid]
        while succ[chain[-1]] != eid:
            chain.append(succ[chain[-1]])
        used.update(chain)
        new_edges[eid] = Edge(None, None)
        chains[eid] = tuple(chain)
    vertices = {}
    for vid, v in web.vertices.items():
        if vid in (z, s):
            continue
        end = "head" if v.kind == "sink" else "tail"
        vertices[vid] = Vertex(v.kind, tuple(ends.get((e, end), e) for e in v.rot))
    small = Web(vertices, new_edges)
    return ZipData(small, web, z, s, t, pairs, chains)


def remove_loop(web: Web, loop: int) -> Cup:
    if not web.edges[loop].is_loop:
        raise MalformedWeb(f"edge {loop} is not a loop")
    edges = {e: d for e, d in web.edges.items() if e != loop}
    return Cup(Web(web.vertices, edges, check=False), web, loop)


# ---------------------------------------------------------------------------
# closures of braids and their cube of resolutions


@dataclass(frozen=True)
class Crossing:
    sign: int
    position: int  # left strand position, 0-based
    in_left: int
    in_right: int
    out_left: int
    out_right: int


@dataclass(frozen=True)
class LinkDiagram:
    """The annular closure of a braid, cut into segments between crossings."""

    strands: int
    crossings: tuple
    n_segments: int

    @property
    def n_plus(self) -> int:
        return sum(1 for c in self.crossings if c.sign > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for c in self.crossings if c.sign < 0)

    @property
    def writhe(self) -> int:
        return self.n_plus - self.n_minus

    def __len__(self) -> int:
        return len(self.crossings)


def closure_diagram(beta: BraidWord) -> LinkDiagram:
    b = beta.strands
    cur = list(range(b))
    nxt = b
    raw = []
    for k in beta.letters:
        i = abs(k) - 1
        raw.append([1 if k > 0 else -1, i, cur[i], cur[i + 1], nxt, nxt + 1])
        cur[i], cur[i + 1] = nxt, nxt + 1
        nxt += 2
    rename = {cur[p]: p for p in range(b)}

    def r(s):
        return rename.get(s, s)

    inner = sorted({r(s) for row in raw for s in row[2:]} - set(range(b)))
    compact = {s: b + i for i, s in enumerate(inner)}
    compact.update({p: p for p in range(b)})
    crossings = tuple(Crossing(row[0], row[1], *(compact[r(s)] for s in row[2:])) for row in raw)
    n_seg = b + len(inner)
    return LinkDiagram(b, crossings, n_seg)


@dataclass(frozen=True, eq=False)
class WebResolution:
    diagram: LinkDiagram
    bits: tuple
    web: Web
    seg_edge: dict = field(repr=False)  # segment -> edge containing it

    @property
    def weight(self) -> int:
        return sum(self.bits)


def is_thick(crossing: Crossing, bit: int) -> bool:
    """Positive crossings are thick at bit 0, negative crossings at bit 1."""
    return (bit == 0) if crossing.sign > 0 else (bit == 1)


def resolve(D: LinkDiagram, bits: Sequence[int]) -> WebResolution:
    bits = tuple(int(x) for x in bits)
    if len(bits) != len(D.crossings):
        raise MalformedBraid(f"need {len(D.crossings)} bits, got {len(bits)}")
    n = D.n_segments
    seg_start: dict = {}
    seg_end: dict = {}
    for k, c in enumerate(D.crossings):
        seg_end[c.in_left] = (k, 0)
        seg_end[c.in_right] = (k, 1)
        seg_start[c.out_left] = (k, 0)
        seg_start[c.out_right] = (k, 1)
    thick = [is_thick(c, b) for c, b in zip(D.crossings, bits)]
    succ = {}
    for k, c in enumerate(D.crossings):
        if not thick[k]:
            succ[c.in_left] = c.out_left
            succ[c.in_right] = c.out_right
    seg_edge: dict = {}
    edges: dict = {}
    chains = {}
    for s in range(n):
        st = seg_start.get(s)
        if st is None or not thick[st[0]]:
            continue
        chain = [s]
        while chain[-1] in succ:
            chain.append(succ[chain[-1]])
        k0 = st[0]
        k1 = seg_end[chain[-1]][0]
        edges[s] = Edge(2 * k0 + 1, 2 * k1, False)
        chains[s] = chain
        for x in chain:
            seg_edge[x] = s
    for s in range(n):
        if s in seg_edge:
            continue
        chain = [s]
        while succ.get(chain[-1], s) != s:
            chain.append(succ[chain[-1]])
        eid = min(chain)
        edges[eid] = Edge(None, None)
        for x in chain:
            seg_edge[x] = eid
    vertices = {}
    for k, c in enumerate(D.crossings):
        if not thick[k]:
            continue
        t = n + k
        edges[t] = Edge(2 * k + 1, 2 * k, True)
        vertices[2 * k] = Vertex("sink", (t, seg_edge[c.in_left], seg_edge[c.in_right]))
        vertices[2 * k + 1] = Vertex("source", (seg_edge[c.out_right], seg_edge[c.out_left], t))
    return WebResolution(D, bits, Web(vertices, edges), seg_edge)


def oriented_bits(D: LinkDiagram) -> tuple:
    return tuple(1 if c.sign > 0 else 0 for c in D.crossings)


def oriented_resolution(D: LinkDiagram) -> WebResolution:
    return resolve(D, oriented_bits(D))


def crossing_zip(D: LinkDiagram, bits: Sequence[int], k: int) -> ZipData:
    """The zip at crossing ``k`` from its smoothing to its thick resolution."""
    bits = list(bits)
    c = D.crossings[k]
    bits[k] = 1 if c.sign > 0 else 0
    smooth = resolve(D, bits)
    bits[k] = 0 if c.sign > 0 else 1
    thick = resolve(D, bits)
    data = unzip_web(thick.web, D.n_segments + k)
    # identify the spliced web with the smoothing, which carries the same ids
    rename = {}
    for e, chain in data.chains.items():
        if chain[0] >= D.n_segments:  # thick edge of another crossing
            rename[e] = e
        else:
            rename[e] = smooth.seg_edge[_first_segment(thick, chain[0])]
    small = data.small
    vertices = {v: Vertex(d.kind, tuple(rename[e] for e in d.rot)) for v, d in small.vertices.items()}
    edges = {rename[e]: d for e, d in small.edges.items()}
    if edges != smooth.web.edges or vertices != smooth.web.vertices:
        raise MalformedWeb("zip does not match the smoothing")
    chains = {rename[e]: ch for e, ch in data.chains.items()}
    return ZipData(smooth.web, thick.web, data.z, data.s, data.t, data.pairs, chains)


def _first_segment(res: WebResolution, eid: int) -> int:
    return min(s for s, e in res.seg_edge.items() if e == eid)


# ---------------------------------------------------------------------------
# reducible faces and the reduction tree


@dataclass(frozen=True)
class Face:
    kind: str  # "circle", "digon" or "square"
    edges: tuple
    vertices: tuple = ()


def reducible_faces(web: Web) -> list[Face]:
    out = [Face("circle", (e,)) for e in web.loops()]
    for face in web.faces():
        verts = []
        for e, d in face:
            ed = web.edges[e]
            verts.append(ed.head if d == 1 else ed.tail)
        if len(face) == 2:
            out.append(Face("digon", tuple(sorted(e for e, _ in face)), tuple(verts)))
        elif len(face) == 4 and len(set(verts)) == 4:
            out.append(Face("square", tuple(sorted(e for e, _ in face)), tuple(verts)))
    return out


_RANK = {"circle": 0, "digon": 1, "square": 2}


def find_reducible_face(web: Web) -> Face:
    """Smallest reducible face: circles first, then digons, then squares."""
    faces = reducible_faces(web)
    if not faces:
        raise MalformedWeb("closed web without a circle, digon or square face")
    return min(faces, key=lambda f: (_RANK[f.kind], f.edges))


@dataclass(frozen=True, eq=False)
class Branch:
    """One way of rebuilding the parent web from ``child``.

    ``creation`` lists the pieces from ``child`` up to the parent; the first
    piece is always a ``Cup`` and ``options`` lists ``(shift, dots)`` with the
    dots placed on the newborn loop.
    """

    child: "ReductionTree"
    creation: tuple
    options: tuple


@dataclass(frozen=True, eq=False)
class ReductionTree:
    web: Web
    face: Optional[Face] = None
    branches: tuple = ()

    def leaves(self):
        """Yield ``(pieces, dots, shift)`` for each basis element, pieces from the empty web up."""
        if self.face is None:
            yield (), (), 0
            return
        for br in self.branches:
            for pieces, dots, shift in br.child.leaves():
                base = len(pieces)
                for sh, nd in br.options:
                    extra = ((base + 1, br.creation[0].loop, nd),) if nd else ()
                    yield pieces + br.creation, dots + extra, shift + sh

    def graded_rank(self) -> LaurentPoly:
        return LaurentPoly.from_exponents(shift for _, _, shift in self.leaves())


def _digon_branch(web: Web, face: Face) -> list:
    d1, d2 = face.edges
    data = unzip_web(web, d1)
    if data.chains.get(d2) != (d2,) or not data.small.edges[d2].is_loop:
        raise MalformedWeb("digon splice did not produce a loop")
    cup = remove_loop(data.small, d2)
    return [(cup.small, (cup, data), ((-1, 0), (1, 1)))]


def _square_branches(web: Web, face: Face) -> list:
    verts = list(face.vertices)
    sinks = [i for i, v in enumerate(verts) if web.vertices[v].kind == "sink"]
    start = min(sinks, key=lambda i: verts[i])
    p1, q1, p2, q2 = (verts[(start + j) % 4] for j in range(4))

    def between(q, p):
        es = [e for e in face.edges if web.edges[e].tail == q and web.edges[e].head == p]
        if len(es) != 1:
            raise MalformedWeb("square face is not a simple 4-cycle")
        return es[0]

    out = []
    for qa, qb in ((q1, q2), (q2, q1)):
        stage1 = unzip_web(web, between(qb, p2))
        c1 = between(qa, p2)
        if stage1.chains.get(c1) != (c1, between(qb, p1)):
            raise MalformedWeb("square splice paired the wrong ends")
        mid = stage1.small
        t2 = between(qa, p1)
        stage2 = unzip_web(mid, t2)
        if stage2.chains.get(c1) != (c1,) or not stage2.small.edges[c1].is_loop:
            raise MalformedWeb("square splice did not produce a loop")
        cup = remove_loop(stage2.small, c1)
        out.append((cup.small, (cup, stage2, stage1), ((0, 0),)))
    return out


def simplify(web: Web, face: Face) -> list:
    """``(child web, creation pieces, options)`` for each branch of ``face``."""
    if face.kind == "circle":
        cup = remove_loop(web, face.edges[0])
        return [(cup.small, (cup,), ((-2, 0), (0, 1), (2, 2)))]
    if face.kind == "digon":
        return _digon_branch(web, face)
    return _square_branches(web, face)


def reduce_web(web: Web, rng: Optional[random.Random] = None) -> ReductionTree:
    """Reduction tree using the canonical face, or random faces when ``rng`` is given."""
    if web.is_empty:
        return ReductionTree(web)
    if rng is None:
        face = find_reducible_face(web)
    else:
        faces = reducible_faces(web)
        if not faces:
            raise MalformedWeb("closed web without a circle, digon or square face")
        face = rng.choice(faces)
    branches = tuple(
        Branch(reduce_web(child, rng), creation, options)
        for child, creation, options in simplify(web, face)
    )
    return ReductionTree(web, face, branches)


def kuperberg_bracket(web: Web, rng: Optional[random.Random] = None) -> LaurentPoly:
    if web.is_empty:
        return ONE
    if rng is None:
        face = find_reducible_face(web)
    else:
        face = rng.choice(reducible_faces(web))
    if face.kind == "circle":
        return QUANTUM_3 * kuperberg_bracket(remove_loop(web, face.edges[0]).small, rng)
    if face.kind == "digon":
        return QUANTUM_2 * kuperberg_bracket(_digon_branch(web, face)[0][0], rng)
    total = LaurentPoly()
    for child, _, _ in _square_branches(web, face):
        total = total + kuperberg_bracket(child, rng)
    return total
