"""Spans of finite sets over a group and coloring counts of tangles.

A span ``G^l <- S -> G^r`` is kept up to isomorphism as the multiset of leg
pairs: ``counts[(left, right)]`` is the number of apex elements over that
pair.  Pullback composition multiplies these multiplicities, so the apex of a
closed tangle has exactly one element per coloring.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass

from . import diagram as d
from .errors import HasComponents, NotClosed, TcdError
from .groups import FiniteGroup

X = "X"


@dataclass(frozen=True)
class FiniteSpan:
    left_width: int
    right_width: int
    counts: dict  # (left tuple, right tuple) -> apex elements over it

    @property
    def apex_size(self):
        return sum(self.counts.values())

    def legs(self):
        """Enumerate the apex as ``(index, left, right)`` triples."""
        i = 0
        for (a, b), k in sorted(self.counts.items()):
            for _ in range(k):
                yield i, a, b
                i += 1


def _check_structure_only(term):
    for leaf in d.iter_leaves(term):
        if isinstance(leaf, d.Gen):
            raise HasComponents(f"component {leaf.name!r} in a structure-only evaluation")


def _shape(term):
    _check_structure_only(term)
    iface = d.interface_of(term)
    wires = set(iface.dom + iface.cod)
    acc = set()
    d._collect_wires(term, acc)
    if len(acc | wires) > 1:
        raise TcdError("colorings need a single wire type")
    return iface


class _SpanEvaluator:
    def __init__(self, group: FiniteGroup):
        self.g = group
        self.memo = {}
        self.types = {}

    def image(self, term, x):
        """Right legs over the left leg ``x``, with multiplicities."""
        key = (id(term), x)
        hit = self.memo.get(key)
        if hit is None:
            hit = self._image(term, x)
            self.memo[key] = (term, hit)
            return hit
        return hit[1]

    def _image(self, term, x):
        g = self.g
        n, m, inv = g.order, g.mult, g.inv
        if isinstance(term, d.Compose):
            out = defaultdict(int)
            for y, k in self.image(term.first, x).items():
                for z, j in self.image(term.second, y).items():
                    out[z] += k * j
            return dict(out)
        if isinstance(term, d.Tensor):
            w = len(d._infer(term.left, _MG, self.types)[0])
            left = self.image(term.left, x[:w])
            if not left:
                return {}
            right = self.image(term.right, x[w:])
            return {a + b: k * j for a, k in left.items() for b, j in right.items()}
        if isinstance(term, d.Id):
            return {x: 1}
        if isinstance(term, d.Braid):
            k = len(term.a)
            xbar = g.product(x[:k])
            row = g.conj_table[xbar]
            return {tuple(row[c] for c in x[k:]) + x[:k]: 1}
        if isinstance(term, d.BraidInv):
            k = len(x) - len(term.b)
            ybar = g.product(x[k:])
            row = g.conj_table[inv[ybar]]
            return {x[k:] + tuple(row[c] for c in x[:k]): 1}
        if isinstance(term, d.Mul):
            return {(m[x[0]][x[1]],): 1}
        if isinstance(term, d.Comul):
            return {(h, m[inv[h]][x[0]]): 1 for h in range(n)}
        if isinstance(term, d.Unit):
            return {(0,): 1}
        if isinstance(term, d.Counit):
            return {(): 1} if x[0] == 0 else {}
        if isinstance(term, d.Cup):
            return {(h, inv[h]): 1 for h in range(n)}
        if isinstance(term, d.Cap):
            return {(): 1} if m[x[0]][x[1]] == 0 else {}
        raise TypeError(f"not a structure term: {term!r}")


_MG = d.Multigraph((X,))


def _relabel(term):
    """The evaluators work over one wire named X; rename whatever single wire is used."""
    acc = set()
    d._collect_wires(term, acc)
    if acc <= {X}:
        return term
    (w,) = acc
    return _rename(term, w)


def _rename(term, w):
    if isinstance(term, d.Compose):
        return d.Compose(_rename(term.first, w), _rename(term.second, w))
    if isinstance(term, d.Tensor):
        return d.Tensor(_rename(term.left, w), _rename(term.right, w))
    if isinstance(term, d.Id):
        return d.Id(tuple(X for _ in term.word))
    if isinstance(term, (d.Braid, d.BraidInv)):
        return type(term)(tuple(X for _ in term.a), tuple(X for _ in term.b))
    return type(term)(X)


def eval_span(term, group: FiniteGroup) -> FiniteSpan:
    """Evaluate a structure-only term to its span over ``group``."""
    iface = _shape(term)
    term = _relabel(term)
    ev = _SpanEvaluator(group)
    counts = {}
    for x in _space(group.order, len(iface.dom)):
        for y, k in ev.image(term, x).items():
            counts[(x, y)] = k
    return FiniteSpan(len(iface.dom), len(iface.cod), counts)


def _space(n, width):
    if width == 0:
        yield ()
        return
    for head in range(n):
        for rest in _space(n, width - 1):
            yield (head,) + rest


def compose_spans(s: FiniteSpan, t: FiniteSpan) -> FiniteSpan:
    """Pullback composite: ``s`` then ``t``."""
    if s.right_width != t.left_width:
        raise NotClosed(f"cannot compose spans of widths {s.right_width} and {t.left_width}")
    by_left = defaultdict(list)
    for (b, c), k in t.counts.items():
        by_left[b].append((c, k))
    out = defaultdict(int)
    for (a, b), k in s.counts.items():
        for c, j in by_left.get(b, ()):
            out[(a, c)] += k * j
    return FiniteSpan(s.left_width, t.right_width, dict(out))


def tensor_spans(s: FiniteSpan, t: FiniteSpan) -> FiniteSpan:
    out = {}
    for (a, b), k in s.counts.items():
        for (c, e), j in t.counts.items():
            out[(a + c, b + e)] = k * j
    return FiniteSpan(s.left_width + t.left_width, s.right_width + t.right_width, out)


def eval_colorings(term, group: FiniteGroup) -> int:
    """Number of colorings of a closed tangle: the apex size of its I -> I span."""
    iface = _shape(term)
    if iface.dom or iface.cod:
        raise NotClosed(f"colorings need a closed diagram I -> I, got {iface}")
    ev = _SpanEvaluator(group)
    return ev.image(_relabel(term), ()).get((), 0)


def validate_span(s: FiniteSpan, group: FiniteGroup):
    """Check a user-supplied span like a relation in Tr_G, counting multiplicities.

    Condition 2: every leg pair has input and output products equal modulo the
    center.  Condition 1: conjugating both legs diagonally preserves the
    number of apex elements over each pair.  Returns ``None`` or a Violation.
    """
    from .trel import Violation

    zs = group.center
    for (a, b), k in sorted(s.counts.items()):
        if not k:
            continue
        p = group.mul(group.product(a), group.inv[group.product(b)])
        if p not in zs:
            return Violation(2, a + b, product=p,
                             text=f"condition 2: product {group.name(p)} is not central")
    for (a, b), k in sorted(s.counts.items()):
        for h in range(group.order):
            row = group.conj_table[h]
            key = (tuple(row[x] for x in a), tuple(row[x] for x in b))
            if s.counts.get(key, 0) != k:
                return Violation(1, a + b, conjugator=h,
                                 text=f"condition 1: conjugating by {group.name(h)}"
                                 " changes the multiplicity")
    return None


# -- brute force oracle -------------------------------------------------------


@dataclass
class Netlist:
    """One variable per wire segment plus the equations each leaf imposes.

    Constraints are ``(kind, vars)``; variables are numbered in creation
    order, left to right through the term.
    """

    nvars: int
    constraints: list


def netlist(term) -> Netlist:
    _shape(term)
    cons = []
    counter = [0]

    def fresh(k):
        out = tuple(range(counter[0], counter[0] + k))
        counter[0] += k
        return out

    def walk(t, ins):
        if isinstance(t, d.Compose):
            return walk(t.second, walk(t.first, ins))
        if isinstance(t, d.Tensor):
            w = len(d.interface_of(t.left).dom)
            return walk(t.left, ins[:w]) + walk(t.right, ins[w:])
        if isinstance(t, d.Id):
            return ins
        if isinstance(t, (d.Braid, d.BraidInv)):
            outs = fresh(len(ins))
            cons.append(("braid" if isinstance(t, d.Braid) else "unbraid", (len(t.a),) + ins + outs))
            return outs
        if isinstance(t, (d.Cup, d.Unit, d.Comul, d.Mul)):
            k = {d.Cup: 2, d.Unit: 1, d.Comul: 2, d.Mul: 1}[type(t)]
            outs = fresh(k)
            cons.append((type(t).__name__.lower(), ins + outs))
            return outs
        if isinstance(t, (d.Cap, d.Counit)):
            cons.append((type(t).__name__.lower(), ins))
            return ()
        raise TypeError(f"not a structure term: {t!r}")

    iface = d.interface_of(term)
    ins = fresh(len(iface.dom))
    walk(term, ins)
    return Netlist(counter[0], cons)


def _holds(g, kind, vs, val):
    m, inv = g.mult, g.inv
    if kind in ("cup", "cap"):
        return m[val[vs[0]]][val[vs[1]]] == 0
    if kind == "mul":
        return m[val[vs[0]]][val[vs[1]]] == val[vs[2]]
    if kind == "comul":
        return m[val[vs[1]]][val[vs[2]]] == val[vs[0]]
    if kind == "unit" or kind == "counit":
        return val[vs[0]] == 0
    k, rest = vs[0], vs[1:]
    half = len(rest) // 2
    ins = [val[v] for v in rest[:half]]
    outs = [val[v] for v in rest[half:]]
    if kind == "braid":
        xbar = g.product(ins[:k])
        want = [g.conj(c, xbar) for c in ins[k:]] + ins[:k]
    else:
        # preimage of ins under the positive twist with the roles swapped
        ybar = g.product(ins[k:])
        want = ins[k:] + [g.conj(c, inv[ybar]) for c in ins[:k]]
    return outs == want


def coloring_solutions(term, group: FiniteGroup):
    """All satisfying assignments, as tuples indexed by netlist variable."""
    net = netlist(term)
    watch = defaultdict(list)  # last variable of a constraint -> constraints to check
    for kind, vs in net.constraints:
        real = vs[1:] if kind in ("braid", "unbraid") else vs
        if real:
            watch[max(real)].append((kind, vs))
    val = [0] * net.nvars
    out = []

    def search(i):
        if i == net.nvars:
            out.append(tuple(val))
            return
        for e in range(group.order):
            val[i] = e
            if all(_holds(group, k, vs, val) for k, vs in watch.get(i, ())):
                search(i + 1)

    search(0)
    return out


def brute_force_colorings(term, group: FiniteGroup) -> int:
    iface = _shape(term)
    if iface.dom or iface.cod:
        raise NotClosed(f"colorings need a closed diagram I -> I, got {iface}")
    return len(coloring_solutions(term, group))


# -- random tangles -----------------------------------------------------------


def random_tangle(rng: random.Random, max_crossings=8, max_loops=3):
    """A random closed tangle: cups, random crossings between adjacent strands, caps."""
    k = rng.randint(1, max_loops)
    width = 2 * k
    layers = [d.tensor(*[d.Cup(X)] * k)]
    for _ in range(rng.randint(0, max_crossings)):
        i = rng.randrange(width - 1)
        cross = d.Braid((X,), (X,)) if rng.random() < 0.5 else d.BraidInv((X,), (X,))
        parts = ([d.Id((X,) * i)] if i else []) + [cross]
        if width - i - 2:
            parts.append(d.Id((X,) * (width - i - 2)))
        layers.append(d.tensor(*parts))
    layers.append(d.tensor(*[d.Cap(X)] * k))
    return d.compose(*layers)
