import itertools
import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from tcd import diagram as d
from tcd.diagram import Braid, BraidInv, Cap, Cup, Gen, Id, Multigraph, compose, tensor
from tcd.errors import (
    GroupMismatch, InterfaceMismatch, InvalidBinding, NotScalar, UnboundComponent,
)
from tcd.groups import make_group
from tcd.trel import (
    GRelation, braid_relation, compose_relations, eval_closed, eval_trel, identity_relation,
    is_valid, plain, random_valid_relation, relation, relation_from_json, relation_to_json,
    render_relation, scalar_of, structure_relation, tensor_relations, validate_relation,
)

from conftest import example_bindings, example_program
from strategies import random_term

X = "X"


def w(k):
    return (X,) * k


def mg_with(**comps):
    return Multigraph.build([X], {k: (w(a), w(b)) for k, (a, b) in comps.items()})


def els(g, *names):
    return tuple(g.element(n) for n in names)


# -- structure maps ------------------------------------------------------------


def test_structure_examples(S3):
    mul = structure_relation("mul", S3)
    assert els(S3, "(1 2)", "(1 3)", "(1 3 2)") in mul.tuples
    assert len(mul) == 36
    assert structure_relation("unit", S3).tuples == {(0,)}
    cup = structure_relation("cup", S3)
    assert len(cup) == 6
    assert all(S3.mul(a, b) == 0 for a, b in cup.tuples)
    assert structure_relation("cap", S3).tuples == cup.tuples
    assert structure_relation("comul", S3).tuples == {t[2:] + t[:2] for t in mul.tuples}


def test_braid_examples(S3):
    t = braid_relation(S3, 1, 1)
    img = {tt[:2]: tt[2:] for tt in t.tuples}
    assert img[els(S3, "(1 2)", "(1 3)")] == els(S3, "(2 3)", "(1 2)")
    for m in range(3):
        assert braid_relation(S3, m, 0) == identity_relation(S3, plain(m))
        assert braid_relation(S3, 0, m) == identity_relation(S3, plain(m))
    c4 = make_group("C4")
    swap = braid_relation(c4, 1, 1)
    assert swap.tuples == {(x, y, y, x) for x in range(4) for y in range(4)}


def test_braid_inverse_is_inverse(D4):
    for m, n in [(1, 1), (1, 2), (2, 1), (2, 2)]:
        fwd = braid_relation(D4, m, n)
        back = braid_relation(D4, n, m, -1)
        assert compose_relations(fwd, back) == identity_relation(D4, plain(m + n))
        assert compose_relations(back, fwd) == identity_relation(D4, plain(m + n))


def test_negative_crossing_on_one_strand(S3):
    # (x, y) -> (y, y^-1 x y)
    neg = braid_relation(S3, 1, 1, -1)
    expect = {(x, y, y, S3.mul(S3.mul(S3.inv[y], x), y)) for x in range(6) for y in range(6)}
    assert neg.tuples == expect


def test_decorated_braid_moves_data_untouched(S3):
    ab = ("a", "b")
    t = braid_relation(S3, 1, 1, 1, (ab,), (ab,))
    n = S3.order
    for row in t.tuples:
        x, y, y2, x2 = row
        assert x2 == x
        assert y2 // n == y // n
        assert y2 % n == S3.conj(y % n, x % n)
    assert len(t) == (2 * n) ** 2


# -- composition and tensor ------------------------------------------------------


def naive_compose(r, s):
    j = r.in_width
    out = set()
    for a in r.tuples:
        for b in s.tuples:
            if a[j:] == b[: s.in_width]:
                out.add(a[:j] + b[s.in_width:])
    return out


def test_compose_example(S3):
    r = compose_relations(structure_relation("mul", S3), structure_relation("comul", S3))
    assert els(S3, "(1 2)", "(1 3)", "(1 3)", "(2 3)") in r.tuples


def test_compose_units_and_empties(S3, rng):
    r = random_valid_relation(S3, 2, 1, rng)
    assert compose_relations(r, identity_relation(S3, plain(1))) == r
    assert compose_relations(identity_relation(S3, plain(2)), r) == r
    empty = relation(S3, [], 1, 2)
    assert not compose_relations(empty, r).tuples
    assert not tensor_relations(empty, r).tuples
    with pytest.raises(InterfaceMismatch):
        compose_relations(r, r)
    with pytest.raises(GroupMismatch):
        compose_relations(identity_relation(make_group("C3"), plain(1)), r)


def test_tensor_examples(S3):
    one = identity_relation(S3, plain(1))
    assert tensor_relations(one, one) == identity_relation(S3, plain(2))
    cup = structure_relation("cup", S3)
    assert len(tensor_relations(cup, cup)) == 36


@pytest.mark.parametrize("seed", range(20))
def test_compose_matches_naive_join(seed, S3):
    rng = random.Random(seed)
    a, b, c = (rng.randint(0, 2) for _ in range(3))
    r = random_valid_relation(S3, a, b, rng)
    s = random_valid_relation(S3, b, c, rng)
    assert compose_relations(r, s).tuples == naive_compose(r, s)


@pytest.mark.parametrize("seed", range(20))
def test_closure_under_compose_and_tensor(seed, D4):
    rng = random.Random(seed)
    a, b, c = (rng.randint(0, 2) for _ in range(3))
    r = random_valid_relation(D4, a, b, rng)
    s = random_valid_relation(D4, b, c, rng)
    for q in (compose_relations(r, s), tensor_relations(r, s), r, s):
        assert validate_relation(GRelation(q.group, q.dom, q.cod, q.tuples)) is None


# -- validity ---------------------------------------------------------------------


def test_validate_examples(S3):
    assert validate_relation(structure_relation("cup", S3)) is None
    t12 = S3.element("(1 2)")
    v = validate_relation(relation(S3, [(t12, t12)], 0, 2))
    assert v.condition == 1
    # any conjugator moving the pair out of the set is a valid witness; (1 3) is one
    moved = S3.conj(t12, v.conjugator)
    assert moved != t12
    assert S3.conj(t12, S3.element("(1 3)")) == S3.element("(2 3)")
    v = validate_relation(relation(S3, [(t12, 0)], 0, 2))
    assert v.condition == 2 and v.product == t12
    assert "not central" in str(v)


def test_validate_abelian_groups_always_pass():
    g = make_group("C6")
    assert is_valid(relation(g, [(1, 2, 3), (0, 5, 5)], 2, 1))


# -- evaluation ---------------------------------------------------------------------


def _eval_example(name, bind, diagram="main"):
    prog = example_program(name)
    b = example_bindings("trel", bind, prog)
    return scalar_of(eval_trel(prog.diagram(diagram), prog.multigraph, b))


def test_eval_examples():
    assert _eval_example("ex321_straight", "ex321") == "point"
    assert _eval_example("ex321_braided", "ex321") == "empty"
    assert _eval_example("ex322_untangled", "ex322") == "point"
    assert _eval_example("ex322_tangled", "ex322") == "empty"


def test_twist_sends_seed_into_other_orbit(S3):
    # tau twice on the first two wires of (12, 13, 23, 13)
    seed = els(S3, "(1 2)", "(1 3)", "(2 3)", "(1 3)")
    term = compose(Braid(X, X) @ Id(w(2)), Braid(X, X) @ Id(w(2)))
    r = eval_trel(term, Multigraph((X,)), group=S3)
    (img,) = [t[4:] for t in r.tuples if t[:4] == seed]
    assert img == els(S3, "(1 3)", "(2 3)", "(2 3)", "(1 3)")


def test_scalars(S3):
    assert scalar_of(eval_closed(Id(()), S3)) == "point"
    assert scalar_of(eval_closed(compose(Cup(X), Cap(X)), S3)) == "point"
    with pytest.raises(NotScalar):
        scalar_of(eval_closed(Cup(X), S3))


def test_unbound_and_invalid(S3):
    mg = mg_with(R=(0, 2))
    with pytest.raises(UnboundComponent):
        eval_trel(Gen("R"), mg, group=S3)
    bad = relation(S3, [(S3.element("(1 2)"), 0)], 0, 2)
    with pytest.raises(InvalidBinding) as exc:
        eval_trel(Gen("R"), mg, relations={"R": bad})
    assert exc.value.violation.condition == 2


def test_invalid_binding_file(S3):
    from tcd import dsl
    prog = dsl.parse_program("wire X\ncomp R : I -> X, X\ndiagram main = R ; cap(X)")
    b = dsl.parse_bindings("trel", '{"components":{"R":{"explicit":[["(1 2)","(1 2)"]]}}}', prog)
    with pytest.raises(InvalidBinding) as exc:
        eval_trel(prog.diagram("main"), prog.multigraph, b)
    assert "condition 1" in str(exc.value)


@pytest.mark.parametrize(
    "prog_name,bind,diagram",
    [
        ("ex321_straight", "ex321", "main"), ("ex321_braided", "ex321", "main"),
        ("ex322_tangled", "ex322", "main"), ("ex322_untangled", "ex322", "main"),
        ("ex323_pair", "ex323", "first"), ("ex323_pair", "ex323", "second"),
        ("ex326_first", "ex326", "main"), ("ex326_second", "ex326", "main"),
        ("belt_pi", "belt", "main"), ("belt_2pi", "belt", "main"),
    ],
)
def test_push_and_compose_strategies_agree(prog_name, bind, diagram):
    # the eight-wire pair is left out: materializing 6^8 tuples per layer takes about a minute
    prog = example_program(prog_name)
    b = example_bindings("trel", bind, prog)
    term = prog.diagram(diagram)
    push = eval_trel(term, prog.multigraph, b)
    comp = eval_trel(term, prog.multigraph, b, strategy="compose")
    assert push == comp


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_strategies_agree_on_random_terms(r):
    term, _ = random_term(r, max_width=3)
    g = make_group("S3")
    mg = Multigraph((X,))
    assert eval_trel(term, mg, group=g) == eval_trel(term, mg, group=g, strategy="compose")


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_desugared_terms_evaluate_the_same(r):
    term, _ = random_term(r, max_width=3)
    g = make_group("S3")
    mg = Multigraph((X,))
    assert eval_trel(term, mg, group=g) == eval_trel(d.desugar(term), mg, group=g)


# -- properties quantified over random validated relations -------------------------


@pytest.mark.parametrize("gname", ["S3", "D4"])
def test_naturality_of_the_twist(gname):
    g = make_group(gname)
    rng = random.Random(7)
    for _ in range(200):
        a, b, c = rng.randint(0, 2), rng.randint(0, 2), rng.randint(1, 2)
        if a + b + c > 5:
            continue
        r = random_valid_relation(g, a, b, rng)
        mg = mg_with(R=(a, b))
        R = Gen("R")
        rels = {"R": r}
        lhs = compose(Braid(w(a), w(c)), Id(w(c)) @ R)
        rhs = compose(R @ Id(w(c)), Braid(w(b), w(c)))
        assert eval_trel(lhs, mg, relations=rels) == eval_trel(rhs, mg, relations=rels)
        lhs = compose(Braid(w(c), w(a)), R @ Id(w(c)))
        rhs = compose(Id(w(c)) @ R, Braid(w(c), w(b)))
        assert eval_trel(lhs, mg, relations=rels) == eval_trel(rhs, mg, relations=rels)


def test_single_twist(S3):
    rng = random.Random(11)
    mg = mg_with(R=(2, 0))
    for _ in range(100):
        rels = {"R": random_valid_relation(S3, 2, 0, rng)}
        a = eval_trel(compose(Braid(X, X), Gen("R")), mg, relations=rels)
        b = eval_trel(compose(BraidInv(X, X), Gen("R")), mg, relations=rels)
        assert a == b


def _twists(k):
    return compose(*[Braid(X, X)] * k) if k else Id(w(2))


def test_even_twists(S3):
    rng = random.Random(12)
    mg = mg_with(R=(0, 2), S=(2, 0))
    for _ in range(100):
        rels = {"R": random_valid_relation(S3, 0, 2, rng), "S": random_valid_relation(S3, 2, 0, rng)}
        base = eval_trel(compose(Gen("R"), Gen("S")), mg, relations=rels)
        for n in (1, 2, 3):
            t = eval_trel(compose(Gen("R"), _twists(2 * n), Gen("S")), mg, relations=rels)
            assert t == base


def test_single_half_twist_is_visible(S3):
    # three strands: one half twist (s1 s2 s1) changes the composite, two do not
    mg = mg_with(R=(0, 3), S=(3, 0))
    rels = {
        "R": closure(S3, ["(1 2)", "(1 3)", "(1 2 3)"], 0, 3),
        "S": closure(S3, ["(1 2 3)", "(2 3)", "(1 2)"], 3, 0),
    }
    half = braid_word_term([(0, 1), (1, 1), (0, 1)])
    straight = eval_trel(compose(Gen("R"), Gen("S")), mg, relations=rels)
    once = eval_trel(compose(Gen("R"), half, Gen("S")), mg, relations=rels)
    twice = eval_trel(compose(Gen("R"), half, half, Gen("S")), mg, relations=rels)
    assert scalar_of(straight) == "empty"
    assert scalar_of(once) == "point"
    assert twice == straight


def closure(g, names, a, b):
    from tcd.trel import closure_relation
    return closure_relation(g, [els(g, *names)], a, b)


def test_flash(S3):
    rng = random.Random(14)
    mg = mg_with(R=(0, 2), S=(2, 0))
    one, inv = Id(X), BraidInv(X, X)
    flash = compose(
        Gen("R"),
        tensor(one, one, Cup(X), Cup(X)),
        tensor(one, inv, inv, one),
        tensor(Cap(X), Cap(X), one, one),
        Gen("S"),
    )
    for _ in range(100):
        rels = {"R": random_valid_relation(S3, 0, 2, rng), "S": random_valid_relation(S3, 2, 0, rng)}
        a = eval_trel(flash, mg, relations=rels)
        b = eval_trel(compose(Gen("R"), _twists(2), Gen("S")), mg, relations=rels)
        assert a == b


def random_braid_word(rng, strands=3, length=6):
    return [(rng.randrange(strands - 1), rng.choice((1, -1))) for _ in range(rng.randint(0, length))]


def braid_word_term(word, strands=3):
    layers = [Id(w(strands))]
    for i, s in word:
        cross = Braid(X, X) if s > 0 else BraidInv(X, X)
        parts = ([Id(w(i))] if i else []) + [cross]
        if strands - i - 2:
            parts.append(Id(w(strands - i - 2)))
        layers.append(tensor(*parts))
    return compose(*layers)


def word_permutation(word, strands=3):
    pos = list(range(strands))
    for i, _ in word:
        pos[i], pos[i + 1] = pos[i + 1], pos[i]
    return tuple(pos)


def braid_pairs(rng, count, strands=3):
    """Pairs of distinct random braid words with the same underlying permutation."""
    pairs = []
    while len(pairs) < count:
        u = random_braid_word(rng, strands)
        v = random_braid_word(rng, strands)
        if u != v and word_permutation(u, strands) == word_permutation(v, strands):
            pairs.append((u, v))
    return pairs


def test_three_wire_permutation_invariance(S3):
    rng = random.Random(15)
    mg = mg_with(R=(0, 3), S=(3, 0))
    pairs = braid_pairs(rng, 10)
    for _ in range(30):
        rels = {"R": random_valid_relation(S3, 0, 3, rng), "S": random_valid_relation(S3, 3, 0, rng)}
        for u, v in pairs:
            a = eval_trel(compose(Gen("R"), braid_word_term(u), Gen("S")), mg, relations=rels)
            b = eval_trel(compose(Gen("R"), braid_word_term(v), Gen("S")), mg, relations=rels)
            assert a == b


def test_braid_words_with_equal_permutation_differ_as_relations(S3):
    # the open braids themselves are different relations; only the closed composite agrees
    u, v = [(0, 1), (0, 1)], []
    assert word_permutation(u) == word_permutation(v)
    a = eval_trel(braid_word_term(u), Multigraph((X,)), group=S3)
    b = eval_trel(braid_word_term(v), Multigraph((X,)), group=S3)
    assert a != b


# -- decorated mode ---------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(10))
def test_singleton_data_agrees_with_plain(seed, S3):
    rng = random.Random(seed)
    term, _ = random_term(rng, max_width=3)
    mg = Multigraph((X,))
    p = eval_trel(term, mg, group=S3)
    q = eval_trel(term, mg, group=S3, data={X: ("a",)})
    assert p.tuples == q.tuples
    assert all(a == ("a",) for a in q.dom + q.cod)


def test_decorated_structure_maps_keep_data_apart(S3):
    ab = ("a", "b")
    mul = structure_relation("mul", S3, ab)
    n = S3.order
    assert len(mul) == 2 * 36
    assert all(len({c // n for c in t}) == 1 for t in mul.tuples)
    unit = structure_relation("unit", S3, ab)
    assert unit.tuples == {(0,), (n,)}


def test_decorated_evaluation_from_bindings():
    from tcd import dsl
    prog = dsl.parse_program(
        "wire X\ncomp R : I -> X, X\ndiagram main = R ; braid(X; X) ; cap(X)"
    )
    b = dsl.parse_bindings("trel", """{"group":{"builtin":"S3"},"data":{"X":["a","b"]},
        "components":{"R":{"conj_closure":[[["a","(1 2)"],["a","(1 2)"]]]}}}""", prog)
    assert scalar_of(eval_trel(prog.diagram("main"), prog.multigraph, b)) == "point"
    b = dsl.parse_bindings("trel", """{"group":{"builtin":"S3"},"data":{"X":["a","b"]},
        "components":{"R":{"conj_closure":[[["a","(1 2)"],["b","(1 2)"]]]}}}""", prog)
    # the cap only joins equal data symbols
    assert scalar_of(eval_trel(prog.diagram("main"), prog.multigraph, b)) == "empty"


# -- rendering ------------------------------------------------------------------------------


def test_render_and_json_round_trip(S3, rng):
    r = random_valid_relation(S3, 1, 2, rng)
    text = render_relation(r)
    assert len(text.splitlines()) == len(r)
    assert all("→" in line for line in text.splitlines())
    doc = json.loads(json.dumps(relation_to_json(r)))
    assert relation_from_json(doc, S3) == r
    ab = ("a", "b")
    dec = braid_relation(S3, 1, 1, 1, (ab,), (ab,))
    doc = json.loads(json.dumps(relation_to_json(dec)))
    assert doc["in_data"] == [["a", "b"], ["a", "b"]]
    assert relation_from_json(doc, S3) == dec


def test_render_scalar(S3):
    pt = eval_closed(Id(()), S3)
    assert render_relation(pt) == "* → *"
    assert relation_to_json(pt)["scalar"] == "point"
