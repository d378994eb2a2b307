"""Braid words, self-linking numbers and transverse Markov moves.

A braid word on ``b`` strands is a tuple of nonzero integers; the letter
``k`` stands for the Artin generator sigma_|k| raised to the sign of ``k``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class MalformedBraid(ValueError):
    """Raised for letters outside the admissible range or bad text input."""


class MoveNotApplicable(ValueError):
    """Raised when a Markov move does not apply to the given word."""


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(k) for k in self.letters))
        if self.strands < 1:
            raise MalformedBraid(f"need at least one strand, got {self.strands}")
        for k in self.letters:
            if k == 0 or abs(k) >= self.strands:
                raise MalformedBraid(f"letter {k} invalid on {self.strands} strands")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_braid(self)


def parse_braid(text: str) -> BraidWord:
    """Parse ``"b=3; 1,-2,1"``. An empty letter list is the trivial braid."""
    parts = text.split(";")
    if len(parts) != 2:
        raise MalformedBraid(f"expected 'b=<n>; <letters>', got {text!r}")
    head, body = parts[0].strip(), parts[1].strip()
    if not head.startswith("b="):
        raise MalformedBraid(f"missing strand count in {text!r}")
    try:
        strands = int(head[2:])
        letters = [int(tok) for tok in body.split(",") if tok.strip()]
    except ValueError as exc:
        raise MalformedBraid(str(exc)) from None
    return BraidWord(strands, tuple(letters))


def format_braid(beta: BraidWord) -> str:
    return f"b={beta.strands}; " + ",".join(str(k) for k in beta.letters)


def writhe(beta: BraidWord) -> int:
    return sum(1 if k > 0 else -1 for k in beta.letters)


def self_linking(beta: BraidWord) -> int:
    """Self-linking number of the transverse closure: writhe minus strands."""
    return writhe(beta) - beta.strands


def mirror(beta: BraidWord) -> BraidWord:
    return BraidWord(beta.strands, tuple(-k for k in beta.letters))


def permutation(beta: BraidWord) -> list[int]:
    """Image of each bottom position at the top of the braid."""
    pos = list(range(beta.strands))
    where = list(range(beta.strands))  # where[strand] = current position
    at = list(range(beta.strands))  # at[position] = strand
    for k in beta.letters:
        i = abs(k) - 1
        a, b = at[i], at[i + 1]
        at[i], at[i + 1] = b, a
        where[a], where[b] = i + 1, i
    return [where[s] for s in pos]


def component_count(beta: BraidWord) -> int:
    perm = permutation(beta)
    seen = [False] * len(perm)
    count = 0
    for s in range(len(perm)):
        if not seen[s]:
            count += 1
            while not seen[s]:
                seen[s] = True
                s = perm[s]
    return count


def is_knot(beta: BraidWord) -> bool:
    return component_count(beta) == 1


@dataclass(frozen=True)
class MarkovMove:
    """A transverse Markov move.

    ``kind`` is one of ``conjugate`` (by ``generator``, a signed letter),
    ``rotate`` (cyclic shift moving the last letter to the front),
    ``relation`` (a braid group relation applied at ``position``),
    ``stabilize`` (append the positive letter on a new strand) and
    ``destabilize`` (the inverse of ``stabilize``).
    """

    kind: str
    generator: int = 0
    position: int = 0


def _relation_at(letters: tuple[int, ...], p: int) -> Optional[tuple[int, ...]]:
    """Rewrite the word at ``p`` by one group relation, or return None."""
    n = len(letters)
    if p + 1 < n:
        a, b = letters[p], letters[p + 1]
        if a == -b:
            return letters[:p] + letters[p + 2:]
        if abs(abs(a) - abs(b)) >= 2:
            return letters[:p] + (b, a) + letters[p + 2:]
    if p + 2 < n:
        a, b, c = letters[p:p + 3]
        if abs(a) == abs(c) and abs(abs(a) - abs(b)) == 1:
            i, j = abs(a), abs(b)
            sa, sb, sc = (1 if a > 0 else -1), (1 if b > 0 else -1), (1 if c > 0 else -1)
            new = None
            if sa == sb == sc:
                new = (sa * j, sa * i, sa * j)
            elif (sa, sb, sc) == (1, 1, -1):
                new = (-j, i, j)
            elif (sa, sb, sc) == (-1, 1, 1):
                new = (j, i, -j)
            elif (sa, sb, sc) == (1, -1, -1):
                new = (-j, -i, j)
            elif (sa, sb, sc) == (-1, -1, 1):
                new = (j, -i, -j)
            if new is not None:
                return letters[:p] + new + letters[p + 3:]
    return None


def apply_move(beta: BraidWord, move: MarkovMove) -> BraidWord:
    b, w = beta.strands, beta.letters
    if move.kind == "conjugate":
        g = move.generator
        if g == 0 or abs(g) >= b:
            raise MoveNotApplicable(f"cannot conjugate by {g} on {b} strands")
        return BraidWord(b, (-g,) + w + (g,))
    if move.kind == "rotate":
        if not w:
            raise MoveNotApplicable("empty word")
        return BraidWord(b, (w[-1],) + w[:-1])
    if move.kind == "relation":
        new = _relation_at(w, move.position)
        if new is None:
            raise MoveNotApplicable(f"no relation applies at {move.position}")
        return BraidWord(b, new)
    if move.kind == "stabilize":
        return BraidWord(b + 1, w + (b,))
    if move.kind == "destabilize":
        if not w or w[-1] != b - 1 or sum(1 for k in w if abs(k) == b - 1) != 1:
            raise MoveNotApplicable("last letter is not a lone positive top generator")
        return BraidWord(b - 1, w[:-1])
    raise MoveNotApplicable(f"unknown move kind {move.kind!r}")


def apply_moves(beta: BraidWord, moves: Iterable[MarkovMove]) -> BraidWord:
    for m in moves:
        beta = apply_move(beta, m)
    return beta


def _candidate_moves(beta: BraidWord, rng: random.Random) -> MarkovMove:
    kind = rng.choice(["conjugate", "rotate", "relation", "relation", "stabilize", "destabilize"])
    if kind == "conjugate":
        g = rng.randint(1, max(1, beta.strands - 1)) * rng.choice((1, -1))
        return MarkovMove("conjugate", generator=g)
    if kind == "relation":
        return MarkovMove("relation", position=rng.randrange(max(1, len(beta))))
    return MarkovMove(kind)


def random_transverse_sequence(
    beta: BraidWord,
    length: int,
    seed: int,
    max_strands: int = 4,
    max_letters: int = 8,
) -> list[MarkovMove]:
    """Seeded random sequence of applicable transverse Markov moves.

    Inapplicable proposals, and proposals that would exceed the size bounds,
    are rejected and re-sampled.
    """
    rng = random.Random(seed)
    moves: list[MarkovMove] = []
    current = beta
    attempts = 0
    while len(moves) < length:
        attempts += 1
        if attempts > 1000 * (length + 1):
            raise RuntimeError("could not generate enough applicable moves")
        move = _candidate_moves(current, rng)
        try:
            nxt = apply_move(current, move)
        except (MoveNotApplicable, MalformedBraid):
            continue
        if nxt.strands > max_strands or len(nxt) > max_letters:
            continue
        moves.append(move)
        current = nxt
    return moves


def corpus(max_len_b2: int = 4, max_len_b3: int = 3) -> list[BraidWord]:
    """All words in B2 and B3 up to the given lengths (empty words included)."""
    out: list[BraidWord] = []
    for b, max_len in ((2, max_len_b2), (3, max_len_b3)):
        alphabet: Sequence[int] = [k * s for k in range(1, b) for s in (1, -1)]
        words: list[tuple[int, ...]] = [()]
        frontier: list[tuple[int, ...]] = [()]
        for _ in range(max_len):
            frontier = [w + (k,) for w in frontier for k in alphabet]
            words.extend(frontier)
        out.extend(BraidWord(b, w) for w in words)
    return out
