"""Relations between powers of a finite group, closed under diagonal conjugation.

A coordinate is a pair (data symbol, group element).  It is stored as a
single integer ``code = d * |G| + g`` where ``d`` indexes the wire's data
alphabet.  Plain mode uses the one-symbol alphabet ``("*",)``, so its codes
are just the group elements.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass, field

from . import diagram as d
from .dsl import PLAIN, TrelBindings
from .errors import (
    GroupMismatch,
    InterfaceMismatch,
    InvalidBinding,
    NotScalar,
    TcdError,
    UnboundComponent,
    WidthMismatch,
)
from .groups import FiniteGroup, conjugacy_closure


@dataclass(frozen=True, eq=False)
class GRelation:
    group: FiniteGroup
    dom: tuple  # one data alphabet per input coordinate
    cod: tuple
    tuples: frozenset  # of code tuples, inputs then outputs
    validated: bool = False

    @property
    def in_width(self):
        return len(self.dom)

    @property
    def out_width(self):
        return len(self.cod)

    def sorted_tuples(self):
        return sorted(self.tuples)

    def split(self, t):
        return t[: self.in_width], t[self.in_width:]

    def __len__(self):
        return len(self.tuples)

    def __eq__(self, other):
        if not isinstance(other, GRelation):
            return NotImplemented
        return (
            same_group(self.group, other.group)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.tuples == other.tuples
        )

    def __hash__(self):
        return hash((self.dom, self.cod, self.tuples))

    def __str__(self):
        return render_relation(self)


def same_group(g, h):
    return g is h or g.mult == h.mult


def plain(width):
    return (PLAIN,) * width


def _make(group, dom, cod, tuples, validated=False):
    return GRelation(group, tuple(dom), tuple(cod), frozenset(tuples), validated)


def coord_space(group, alphabets):
    """All code tuples over the given alphabets."""
    n = group.order
    return itertools.product(*(range(len(a) * n) for a in alphabets))


def _split_codes(n, codes):
    data = [c // n for c in codes]
    elems = [c % n for c in codes]
    return data, elems


# -- structure maps -----------------------------------------------------------


def identity_relation(group, alphabets):
    alphabets = tuple(alphabets)
    return _make(group, alphabets, alphabets, (t + t for t in coord_space(group, alphabets)), True)


def structure_relation(kind, group, data=PLAIN):
    n, m, inv = group.order, group.mult, group.inv
    x, xx = (data,), (data, data)
    rows = []
    for s in range(len(data)):
        base = s * n
        if kind in ("mul", "comul"):
            for g in range(n):
                for h in range(n):
                    t = (base + g, base + h, base + m[g][h])
                    rows.append(t if kind == "mul" else t[2:] + t[:2])
        elif kind in ("unit", "counit"):
            rows.append((base,))
        elif kind in ("cup", "cap"):
            rows.extend((base + g, base + inv[g]) for g in range(n))
        else:
            raise TcdError(f"unknown structure map {kind!r}")
    shape = {
        "mul": (xx, x), "comul": (x, xx), "unit": ((), x),
        "counit": (x, ()), "cup": ((), xx), "cap": (xx, ()),
    }[kind]
    return _make(group, shape[0], shape[1], rows, True)


def braid_image(group, a_alph, codes):
    """The twist on one input: ``(x, y) -> (y^xbar, x)``, ``x`` the first ``len(a_alph)`` codes."""
    n = group.order
    m = len(a_alph)
    x, y = codes[:m], codes[m:]
    xbar = group.product(c % n for c in x)
    row = group.conj_table[xbar]
    return tuple(c - c % n + row[c % n] for c in y) + tuple(x)


def braid_preimage(group, b_alph, codes):
    """Preimage under the twist ``tau_{B,A}`` of ``(x', y)`` with ``y`` the last ``len(b_alph)`` codes.

    ``tau_{B,A}(y, x) = (x^ybar, y)``; solving for ``x`` undoes the conjugation.
    """
    n = group.order
    k = len(codes) - len(b_alph)
    xc, y = codes[:k], codes[k:]
    ybar = group.product(c % n for c in y)
    row = group.conj_table[group.inv[ybar]]
    x = tuple(c - c % n + row[c % n] for c in xc)
    return tuple(y) + x


def braid_relation(group, m, n, sign=1, a_data=None, b_data=None):
    """``tau_{m,n}`` (sign +1) or the inverse of ``tau_{n,m}`` (sign -1), interface A.B -> B.A."""
    a_alph = tuple(a_data) if a_data is not None else plain(m)
    b_alph = tuple(b_data) if b_data is not None else plain(n)
    if sign > 0:
        rows = (c + braid_image(group, a_alph, c) for c in coord_space(group, a_alph + b_alph))
        return _make(group, a_alph + b_alph, b_alph + a_alph, rows, True)
    # converse of the graph of tau_{B,A}
    fwd = braid_relation(group, n, m, 1, b_alph, a_alph)
    return converse(fwd)


def converse(r: GRelation) -> GRelation:
    k = r.in_width
    return _make(r.group, r.cod, r.dom, (t[k:] + t[:k] for t in r.tuples), r.validated)


# -- composition ----------------------------------------------------------------


def compose_relations(r: GRelation, s: GRelation) -> GRelation:
    """Diagram order: ``r`` then ``s``."""
    if not same_group(r.group, s.group):
        raise GroupMismatch(f"{r.group!r} vs {s.group!r}")
    if r.cod != s.dom:
        raise InterfaceMismatch(_shape(r.cod), _shape(s.dom))
    k = s.in_width
    index = defaultdict(list)
    for t in s.tuples:
        index[t[:k]].append(t[k:])
    j = r.in_width
    out = set()
    for t in r.tuples:
        zs = index.get(t[j:])
        if zs:
            x = t[:j]
            out.update(x + z for z in zs)
    return _make(r.group, r.dom, s.cod, out, r.validated and s.validated)


def tensor_relations(r: GRelation, s: GRelation) -> GRelation:
    if not same_group(r.group, s.group):
        raise GroupMismatch(f"{r.group!r} vs {s.group!r}")
    j, k = r.in_width, s.in_width
    out = {
        a[:j] + b[:k] + a[j:] + b[k:] for a in r.tuples for b in s.tuples
    }
    return _make(r.group, r.dom + s.dom, r.cod + s.cod, out, r.validated and s.validated)


def _shape(alphabets):
    return tuple("X" if a == PLAIN else "{" + ",".join(a) + "}" for a in alphabets)


# -- validity -----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    condition: int  # 1 = conjugation closure, 2 = products modulo the center
    witness: tuple
    conjugator: int = None
    product: int = None
    text: str = ""

    def __str__(self):
        return self.text


def validate_relation(r: GRelation):
    """``None`` when both conditions hold, else the first Violation found.

    The cheap per-tuple product test (condition 2) runs first, then closure
    under diagonal conjugation (condition 1).
    """
    g = r.group
    n = g.order
    zs = g.center
    for t in r.sorted_tuples():
        x, y = r.split(t)
        p = g.mul(g.product(c % n for c in x), g.inv[g.product(c % n for c in y)])
        if p not in zs:
            return Violation(
                2, t, product=p,
                text=f"condition 2: at {format_tuple(r, t)} the product {g.name(p)}"
                " is not central",
            )
    for t in r.sorted_tuples():
        for h in range(n):
            row = g.conj_table[h]
            c = tuple(x - x % n + row[x % n] for x in t)
            if c not in r.tuples:
                return Violation(
                    1, t, conjugator=h,
                    text=f"condition 1: conjugating {format_tuple(r, t)} by {g.name(h)}"
                    f" gives {format_tuple(r, c)}, which is missing",
                )
    return None


def is_valid(r):
    return validate_relation(r) is None


# -- bindings -----------------------------------------------------------------


def bound_relations(mg: d.Multigraph, bindings: TrelBindings):
    """Materialize and validate one relation per bound component."""
    g = bindings.group
    n = g.order
    out = {}
    for name, (mode, rows) in bindings.components.items():
        c = mg.component(name)
        alph = tuple(bindings.alphabet(w) for w in c.dom + c.cod)
        tuples = []
        for row in rows:
            if len(row) != len(alph):
                raise WidthMismatch(
                    f"component {name!r}: tuple of width {len(row)}, interface needs {len(alph)}"
                )
            codes = []
            for (sym, e), a in zip(row, alph):
                if sym is None:
                    if len(a) != 1:
                        raise TcdError(f"component {name!r}: coordinate needs a data symbol from {a}")
                    sym = a[0]
                if sym not in a:
                    raise TcdError(f"component {name!r}: data symbol {sym!r} not in {a}")
                codes.append(a.index(sym) * n + e)
            tuples.append(tuple(codes))
        if mode == "conj_closure":
            tuples = _closure_codes(g, tuples)
        k = len(c.dom)
        r = _make(g, alph[:k], alph[k:], tuples)
        v = validate_relation(r)
        if v is not None:
            raise InvalidBinding(name, v)
        out[name] = GRelation(r.group, r.dom, r.cod, r.tuples, True)
    return out


def _closure_codes(g, tuples):
    n = g.order
    out = set()
    for t in tuples:
        for h in range(n):
            row = g.conj_table[h]
            out.add(tuple(x - x % n + row[x % n] for x in t))
    return out


def closure_relation(group, seeds, in_width, out_width):
    """Plain-mode relation from the conjugacy closure of element tuples."""
    return _make(group, plain(in_width), plain(out_width), conjugacy_closure(group, seeds))


# -- evaluation ---------------------------------------------------------------


class _Evaluator:
    """Compiles a term into a forward-image function on input tuples.

    Subterms that are functions (identities, crossings, multiplication and
    composites of these) compile to plain tuple maps; the others return sets of
    output tuples and are memoized per input.
    """

    def __init__(self, mg, group, alphabet, relations):
        self.mg = mg
        self.g = group
        self.alphabet = alphabet
        self.rel = relations
        self.types = {}
        self.index = {}

    def alph(self, word):
        return tuple(self.alphabet(w) for w in word)

    def shape(self, term):
        return d._infer(term, self.mg, self.types)

    def compile(self, term):
        """``(True, f)`` with ``f(x) -> y``, or ``(False, f)`` with ``f(x) -> frozenset``."""
        g = self.g
        n = g.order
        m, inv, conj = g.mult, g.inv, g.conj_table
        if isinstance(term, (d.Compose, d.Tensor)):
            a, b = (term.first, term.second) if isinstance(term, d.Compose) else (term.left, term.right)
            fa, f = self.compile(a)
            fb, h = self.compile(b)
            if isinstance(term, d.Tensor):
                k = len(self.shape(a)[0])
                if fa and fb:
                    return True, lambda x: f(x[:k]) + h(x[k:])
                f, h = _as_rel(fa, f), _as_rel(fb, h)

                def tens(x):
                    left = f(x[:k])
                    if not left:
                        return frozenset()
                    right = h(x[k:])
                    return frozenset(p + q for p in left for q in right)

                return False, _memo(tens)
            if fa and fb:
                return True, lambda x: h(f(x))
            if fa:
                return False, _memo(lambda x: h(f(x)))
            h = _as_rel(fb, h)

            def comp(x):
                out = set()
                for y in f(x):
                    out |= h(y)
                return frozenset(out)

            return False, _memo(comp)
        if isinstance(term, d.Id):
            return True, lambda x: x
        if isinstance(term, d.Gen):
            return False, self._gen_index(term.name)
        if isinstance(term, d.Braid):
            k = len(term.a)
            if not term.a or not term.b:
                return True, lambda x: x

            plain_mode = all(a == PLAIN for a in self.alph(term.a + term.b))
            if plain_mode and k == 1 and len(term.b) == 1:
                return True, lambda x: (conj[x[0]][x[1]], x[0])
            if plain_mode:
                def tau(x):
                    p = 0
                    for c in x[:k]:
                        p = m[p][c]
                    row = conj[p]
                    return tuple([row[c] for c in x[k:]]) + x[:k]
            else:
                def tau(x):
                    p = 0
                    for c in x[:k]:
                        p = m[p][c % n]
                    row = conj[p]
                    return tuple([c - c % n + row[c % n] for c in x[k:]]) + x[:k]

            return True, tau
        if isinstance(term, d.BraidInv):
            bw = term.b
            return True, lambda x: braid_preimage(g, bw, x)
        if isinstance(term, d.Mul):
            empty = frozenset()

            def mul(x):
                a, b = x
                if a // n != b // n:
                    return empty
                return frozenset((((a - a % n) + m[a % n][b % n],),))

            return False, mul
        if isinstance(term, d.Comul):
            return False, _memo(
                lambda x: frozenset(
                    (x[0] - x[0] % n + h1, x[0] - x[0] % n + m[inv[h1]][x[0] % n])
                    for h1 in range(n)
                )
            )
        if isinstance(term, d.Unit):
            units = frozenset((s * n,) for s in range(len(self.alphabet(term.wire))))
            return False, lambda x: units
        if isinstance(term, d.Counit):
            point, empty = frozenset(((),)), frozenset()
            return False, lambda x: point if x[0] % n == 0 else empty
        if isinstance(term, d.Cup):
            k = len(self.alphabet(term.wire))
            pairs = frozenset((s * n + h, s * n + inv[h]) for s in range(k) for h in range(n))
            return False, lambda x: pairs
        if isinstance(term, d.Cap):
            point, empty = frozenset(((),)), frozenset()

            def cap(x):
                a, b = x
                return point if a // n == b // n and m[a % n][b % n] == 0 else empty

            return False, cap
        raise TypeError(f"not a diagram term: {term!r}")

    def _gen_index(self, name):
        idx = self.index.get(name)
        if idx is None:
            if name not in self.rel:
                raise UnboundComponent(name)
            r = self.rel[name]
            idx = defaultdict(set)
            for t in r.tuples:
                idx[t[: r.in_width]].add(t[r.in_width:])
            idx = {k: frozenset(v) for k, v in idx.items()}
            self.index[name] = idx
        empty = frozenset()
        return lambda x: idx.get(x, empty)


def _as_rel(functional, f):
    if functional:
        return lambda x: frozenset((f(x),))
    return f


def _memo(f):
    cache = {}

    def g(x):
        hit = cache.get(x)
        if hit is None:
            hit = cache[x] = f(x)
        return hit

    return g


def _resolve(term, relations, group, data):
    """Group, wire alphabet function and component relations for one evaluation."""
    rels = {}
    alphabet = lambda w: PLAIN  # noqa: E731
    if relations:
        rels.update(relations)
        if group is None:
            group = next(iter(relations.values())).group
    if data is not None:
        alphabet = lambda w: data.get(w, PLAIN)  # noqa: E731
    if group is None:
        raise TcdError("eval_trel needs bindings, relations or group=")
    for name in d.generator_census(term):
        if name not in rels:
            raise UnboundComponent(name)
    for name, r in rels.items():
        if not same_group(r.group, group):
            raise GroupMismatch(f"binding {name!r} uses another group")
        if not r.validated:
            v = validate_relation(r)
            if v is not None:
                raise InvalidBinding(name, v)
    return group, alphabet, rels


def eval_trel(term, mg, bindings=None, relations=None, group=None, strategy="push",
              data=None):
    """Evaluate ``term`` to a GRelation.

    Components come from ``bindings`` (a TrelBindings) and/or ``relations``
    (name -> GRelation); component-free terms only need ``group=``.  ``data``
    maps wire types to data alphabets when no bindings are given.
    ``strategy="push"`` maps each input tuple forward; ``"compose"``
    materializes every subterm and joins with compose/tensor of relations.
    """
    if bindings is not None:
        rels0 = bound_relations(mg, bindings)
        relations = {**rels0, **(relations or {})}
        group = group or bindings.group
        if data is None:
            data = dict(bindings.data)
    group, alph, rels = _resolve(term, relations, group, data)
    dom, cod = d._infer(term, mg, {})
    ev = _Evaluator(mg, group, alph, rels)
    if strategy == "compose":
        return _materialize(ev, term)
    if strategy != "push":
        raise TcdError(f"unknown strategy {strategy!r}")
    dom_a = ev.alph(dom)
    functional, f = ev.compile(term)
    if functional:
        rows = [x + f(x) for x in coord_space(group, dom_a)]
    else:
        rows = [x + y for x in coord_space(group, dom_a) for y in f(x)]
    return _make(group, dom_a, ev.alph(cod), rows, True)


def _materialize(ev, term):
    g = ev.g
    if isinstance(term, d.Compose):
        return compose_relations(_materialize(ev, term.first), _materialize(ev, term.second))
    if isinstance(term, d.Tensor):
        return tensor_relations(_materialize(ev, term.left), _materialize(ev, term.right))
    if isinstance(term, d.Gen):
        return ev.rel[term.name]
    if isinstance(term, d.Id):
        return identity_relation(g, ev.alph(term.word))
    if isinstance(term, d.Braid):
        return braid_relation(g, len(term.a), len(term.b), 1, ev.alph(term.a), ev.alph(term.b))
    if isinstance(term, d.BraidInv):
        return braid_relation(g, len(term.a), len(term.b), -1, ev.alph(term.a), ev.alph(term.b))
    kind = type(term).__name__.lower()
    return structure_relation(kind, g, ev.alphabet(term.wire))


def eval_closed(term, group):
    """Evaluate a component-free term over ``group`` in plain mode."""
    iface = d.interface_of(term)
    mg = d.Multigraph(tuple(sorted(set(iface.dom + iface.cod) | _wires(term))))
    return eval_trel(term, mg, group=group)


def _wires(term):
    acc = set()
    d._collect_wires(term, acc)
    return acc


def scalar_of(r: GRelation) -> str:
    if r.in_width or r.out_width:
        raise NotScalar(f"relation has widths {r.in_width} -> {r.out_width}, expected I -> I")
    return "point" if r.tuples else "empty"


# -- rendering ------------------------------------------------------------------


def _coord(r, alph, code):
    n = r.group.order
    s, e = divmod(code, n)
    name = r.group.name(e)
    return name if len(alph) == 1 and alph == PLAIN else f"{alph[s]}:{name}"


def format_tuple(r, t):
    alphs = r.dom + r.cod
    return "(" + ", ".join(_coord(r, a, c) for a, c in zip(alphs, t)) + ")"


def render_relation(r: GRelation) -> str:
    """One tuple per line: inputs, an arrow, outputs; ``*`` for an empty side."""
    lines = []
    k = r.in_width
    for t in r.sorted_tuples():
        xs = [_coord(r, a, c) for a, c in zip(r.dom, t[:k])]
        ys = [_coord(r, a, c) for a, c in zip(r.cod, t[k:])]
        lines.append(f"{', '.join(xs) or '*'} → {', '.join(ys) or '*'}")
    return "\n".join(lines)


def _json_coord(r, alph, code):
    s, e = divmod(code, r.group.order)
    name = r.group.name(e)
    return name if alph == PLAIN else [alph[s], name]


def relation_to_json(r: GRelation) -> dict:
    k = r.in_width
    doc = {
        "group": r.group.label,
        "in_width": r.in_width,
        "out_width": r.out_width,
        "tuples": [
            {
                "in": [_json_coord(r, a, c) for a, c in zip(r.dom, t[:k])],
                "out": [_json_coord(r, a, c) for a, c in zip(r.cod, t[k:])],
            }
            for t in r.sorted_tuples()
        ],
    }
    if any(a != PLAIN for a in r.dom + r.cod):
        doc["in_data"] = [list(a) for a in r.dom]
        doc["out_data"] = [list(a) for a in r.cod]
    if k == 0 and r.out_width == 0:
        doc["scalar"] = scalar_of(r)
    return doc


def relation_from_json(doc, group: FiniteGroup) -> GRelation:
    dom = tuple(tuple(a) for a in doc.get("in_data", [PLAIN] * doc["in_width"]))
    cod = tuple(tuple(a) for a in doc.get("out_data", [PLAIN] * doc["out_width"]))
    n = group.order

    def code(alph, c):
        if isinstance(c, list):
            return alph.index(c[0]) * n + group.element(c[1])
        return group.element(c)

    rows = []
    for t in doc["tuples"]:
        rows.append(
            tuple(code(a, c) for a, c in zip(dom, t["in"]))
            + tuple(code(a, c) for a, c in zip(cod, t["out"]))
        )
    return _make(group, dom, cod, rows)


# -- random relations for property tests ----------------------------------------


def random_valid_relation(group, in_width, out_width, rng: random.Random, seeds=3,
                          dom=None, cod=None, max_tries=1000):
    """Conjugacy closure of at most ``seeds`` random tuples whose products agree mod Z(G)."""
    dom = tuple(dom) if dom is not None else plain(in_width)
    cod = tuple(cod) if cod is not None else plain(out_width)
    n = group.order
    zs = group.center
    count = rng.randint(1, seeds)
    picked = []
    tries = 0
    while len(picked) < count and tries < max_tries:
        tries += 1
        t = tuple(rng.randrange(len(a)) * n + rng.randrange(n) for a in dom + cod)
        x = group.product(c % n for c in t[:in_width])
        y = group.product(c % n for c in t[in_width:])
        if group.mul(x, group.inv[y]) in zs:
            picked.append(t)
    r = _make(group, dom, cod, _closure_codes(group, picked))
    return GRelation(r.group, r.dom, r.cod, r.tuples, True)


def relation(group, rows, in_width, out_width):
    """Plain-mode relation from element-index tuples (not validated)."""
    return _make(group, plain(in_width), plain(out_width), (tuple(t) for t in rows))
