import pytest

from sl3braid.braid import (
    BraidWord,
    MalformedBraid,
    MarkovMove,
    MoveNotApplicable,
    apply_move,
    apply_moves,
    component_count,
    corpus,
    format_braid,
    is_knot,
    mirror,
    parse_braid,
    random_transverse_sequence,
    self_linking,
    writhe,
)


def test_parse_and_format_round_trip():
    B = parse_braid("b=3; 1,-2,1")
    assert B == BraidWord(3, (1, -2, 1))
    assert parse_braid(format_braid(B)) == B
    assert parse_braid("b=1;") == BraidWord(1, ())


@pytest.mark.parametrize("text", ["b=2; 2", "b=2; 0", "2; 1", "b=2; 1,x", "b=0;", "b=2 1"])
def test_malformed(text):
    with pytest.raises(MalformedBraid):
        parse_braid(text)


def test_self_linking():
    assert self_linking(parse_braid("b=1;")) == -1
    assert self_linking(parse_braid("b=2; 1,1,1")) == 1
    assert self_linking(parse_braid("b=2; -1,-1,-1")) == -5
    assert writhe(mirror(parse_braid("b=3; 1,-2,1"))) == -1


def test_components():
    assert is_knot(parse_braid("b=2; 1,1,1"))
    assert component_count(parse_braid("b=2; 1,1")) == 2
    assert component_count(parse_braid("b=3;")) == 3
    assert is_knot(parse_braid("b=3; 1,2,1,2"))


def test_moves_preserve_self_linking():
    B = parse_braid("b=2; 1,1")
    for m in (MarkovMove("conjugate", 1), MarkovMove("rotate"), MarkovMove("stabilize")):
        assert self_linking(apply_move(B, m)) == self_linking(B)
    assert apply_move(B, MarkovMove("stabilize")) == BraidWord(3, (1, 1, 2))
    assert apply_moves(B, [MarkovMove("stabilize"), MarkovMove("destabilize")]) == B


def test_relations():
    assert apply_move(BraidWord(3, (1, 2, 1)), MarkovMove("relation", position=0)).letters == (2, 1, 2)
    assert apply_move(BraidWord(2, (1, -1)), MarkovMove("relation", position=0)).letters == ()
    assert apply_move(BraidWord(4, (1, 3)), MarkovMove("relation", position=0)).letters == (3, 1)
    with pytest.raises(MoveNotApplicable):
        apply_move(BraidWord(2, (1, 1)), MarkovMove("relation", position=0))


def test_destabilize_needs_lone_top_letter():
    with pytest.raises(MoveNotApplicable):
        apply_move(BraidWord(2, (1, 1)), MarkovMove("destabilize"))
    with pytest.raises(MoveNotApplicable):
        apply_move(BraidWord(2, (-1,)), MarkovMove("destabilize"))


def test_random_sequences_are_seeded_and_transverse():
    B = parse_braid("b=2; 1,1")
    s1 = random_transverse_sequence(B, 50, seed=7)
    assert s1 == random_transverse_sequence(B, 50, seed=7)
    cur = B
    for m in s1:
        cur = apply_move(cur, m)
        assert self_linking(cur) == self_linking(B)


def test_corpus_size():
    words = corpus()
    assert len(words) == (1 + 2 + 4 + 8 + 16) + (1 + 4 + 16 + 64)
    assert len(set(words)) == len(words)
