import random

import pytest

from tcd import diagram as d
from tcd.diagram import Braid, BraidInv, Cap, Cup, Gen, Id, compose, tensor
from tcd.errors import BudgetExceeded, HasComponents, NotClosed
from tcd.groups import make_group
from tcd.knotgroup import (
    Presentation, _canonical_cyclic, compose_cospans, cyclic_reduce, eval_cospan,
    eval_presentation, free_reduce, hom_count, identity_cospan, inverse, is_free_of_rank,
    parse_presentation, parse_word, presentation_from_json, structure_cospan, tietze_simplify,
)
from tcd.spans import eval_colorings, random_tangle

from conftest import example_program

KNOTS = ["trefoil", "unknot", "two_unknots"]
LISTED = parse_presentation(
    "⟨ a, b, c, d, e, f, g, h, j, k | ab = 1, b = f, be = cf, c = h, cg = dh, ad = 1,"
    " ej = 1, j = g, fj = gk, hk = 1 ⟩"
)


def main(name):
    return example_program(name).diagram("main")


def test_words():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert cyclic_reduce((-1, 2, 3, 1)) == (2, 3)
    assert inverse((1, -2)) == (2, -1)
    assert _canonical_cyclic((1, 2, -1)) == _canonical_cyclic((-2,))
    assert parse_word("a e A", ("a", "e")) == (1, 2, -1)
    assert parse_word("aeA", ("a", "e")) == (1, 2, -1)


def test_presentation_text_round_trip():
    p = parse_presentation("⟨ x, y | x y X Y, x x x ⟩")
    assert p.rank == 2
    assert parse_presentation(str(p)) == p
    assert presentation_from_json(p.to_json()) == p
    assert str(Presentation(("x",), ())) == "⟨ x | ⟩"


def test_structure_cospans():
    cup = structure_cospan("cup")
    assert cup.relators == ((1, 2),) and cup.left == () and cup.right == ((1,), (2,))
    b = structure_cospan("braid+")
    assert b.right[1] == b.left[0]
    assert b.right[0] == (1, 2, -1)
    n = structure_cospan("braid-")
    assert n.right == ((2,), (-2, 1, 2))


def test_identity_composites_simplify_to_identity():
    c = compose_cospans(structure_cospan("id"), structure_cospan("id"))
    p = tietze_simplify(c.presentation())
    assert p.rank == 1 and not p.relators
    assert identity_cospan(3).ngens == 3


def test_trefoil_presentation_simplifies_to_one_relator():
    raw = eval_presentation(main("trefoil"))
    p = tietze_simplify(raw)
    assert p.rank == 2 and len(p.relators) == 1
    (r,) = p.relators
    # x y x (y x y)^-1 up to rotation, inversion and renaming
    shapes = set()
    for x, y in ((1, 2), (2, 1)):
        for sx in (1, -1):
            for sy in (1, -1):
                a, b = sx * x, sy * y
                shapes.add(_canonical_cyclic((a, b, a, -b, -a, -b)))
    assert _canonical_cyclic(r) in shapes


def test_trefoil_matches_listing_up_to_tietze():
    raw = eval_presentation(main("trefoil"))
    listed = tietze_simplify(LISTED)
    assert listed.rank == 2 and len(listed.relators) == 1
    for gname in ("C2", "C3", "S3", "S4", "D4"):
        g = make_group(gname)
        assert hom_count(tietze_simplify(raw), g) == hom_count(listed, g)
    assert hom_count(LISTED, make_group("S3")) == 12


def test_hom_counts_examples(S3):
    raw = eval_presentation(main("trefoil"))
    assert hom_count(raw, S3) == 12
    assert hom_count(tietze_simplify(raw), S3) == 12
    assert hom_count(tietze_simplify(raw), make_group("C2")) == 2
    assert hom_count(Presentation(("x",), ()), S3) == 6


def test_unknot_and_unlink():
    p = tietze_simplify(eval_presentation(main("unknot")))
    assert is_free_of_rank(p, 1)
    assert hom_count(p, make_group("S3")) == 6
    p = tietze_simplify(eval_presentation(main("two_unknots")))
    assert is_free_of_rank(p, 2)


def test_tietze_examples():
    p = tietze_simplify(parse_presentation("⟨ x, y | x y ⟩"))
    assert p == Presentation(("x",), ())
    q = Presentation(("x",), ())
    assert tietze_simplify(q) == q


@pytest.mark.parametrize("name", KNOTS)
def test_simplification_preserves_hom_counts(name):
    raw = eval_presentation(main(name))
    simple = tietze_simplify(raw)
    for gname in ("C2", "C3", "S3"):
        g = make_group(gname)
        assert hom_count(raw, g) == hom_count(simple, g)


@pytest.mark.parametrize("name", KNOTS)
@pytest.mark.parametrize("gname", ["C2", "S3"])
def test_hom_count_equals_colorings(name, gname):
    g = make_group(gname)
    assert hom_count(eval_presentation(main(name)), g) == eval_colorings(main(name), g)


@pytest.mark.parametrize("n", range(2, 7))
def test_knots_have_n_homs_into_cyclic_groups(n):
    g = make_group(f"C{n}")
    for name in ("trefoil", "unknot"):
        assert hom_count(tietze_simplify(eval_presentation(main(name))), g) == n


def test_random_tangles_agree_with_colorings(S3):
    rng = random.Random(4)
    for _ in range(20):
        t = random_tangle(rng, 6, 2)
        p = tietze_simplify(eval_presentation(t))
        assert hom_count(p, S3) == eval_colorings(t, S3)


def test_twist_pair_insertion_keeps_hom_counts(S3):
    one, t, ti = Id("X"), Braid("X", "X"), BraidInv("X", "X")
    base = main("trefoil")
    # put two crossing pairs right after the cups of the trefoil
    parts = []

    def flat(x):
        if isinstance(x, d.Compose):
            flat(x.first)
            flat(x.second)
        else:
            parts.append(x)

    flat(base)
    longer = compose(parts[0], tensor(one, t, one), tensor(one, ti, one),
                     tensor(one, one, t), tensor(one, one, ti), *parts[1:])
    for gname in ("S3", "C3"):
        g = make_group(gname)
        assert hom_count(eval_presentation(longer), g) == hom_count(eval_presentation(base), g)


def test_errors(S3):
    with pytest.raises(NotClosed):
        eval_presentation(Cup("X"))
    with pytest.raises(HasComponents):
        eval_cospan(Gen("R"))
    big = Presentation(tuple("abcdefgh"), ())
    with pytest.raises(BudgetExceeded):
        hom_count(big, S3, budget=1000)
