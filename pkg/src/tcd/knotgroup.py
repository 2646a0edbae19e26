"""Tangles as cospans of group presentations; knot groups and homomorphism counts.

Words are tuples of nonzero ints: ``i + 1`` is generator ``i`` and
``-(i + 1)`` its inverse.  In text, generators are lowercase names and a
capitalized name is the inverse (``a e A`` is ``a e a^-1``).
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, field

from . import diagram as d
from .errors import BudgetExceeded, HasComponents, NotClosed, TcdError, TcdSyntaxError
from .groups import FiniteGroup


def gen_name(i):
    letters = string.ascii_lowercase
    return letters[i % 26] + (str(i // 26) if i >= 26 else "")


# -- words ---------------------------------------------------------------------


def free_reduce(w):
    out = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w):
    w = free_reduce(w)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def inverse(w):
    return tuple(-x for x in reversed(w))


def _canonical_cyclic(w):
    """A representative of ``w`` up to rotation and inversion (for deduplication)."""
    w = cyclic_reduce(w)
    if not w:
        return w
    cands = []
    for v in (w, inverse(w)):
        cands.extend(v[i:] + v[:i] for i in range(len(v)))
    return min(cands)


@dataclass(frozen=True)
class Presentation:
    generators: tuple  # names
    relators: tuple  # words

    def __post_init__(self):
        n = len(self.generators)
        for r in self.relators:
            for x in r:
                if not 1 <= abs(x) <= n:
                    raise TcdError(f"relator mentions undeclared generator index {abs(x) - 1}")

    @property
    def rank(self):
        return len(self.generators)

    def word_text(self, w):
        names = self.generators
        return " ".join(names[x - 1] if x > 0 else names[-x - 1].upper() for x in w) or "1"

    def __str__(self):
        rels = ", ".join(self.word_text(r) for r in self.relators)
        return f"⟨ {', '.join(self.generators)} | {rels} ⟩".replace("|  ⟩", "| ⟩")

    def to_json(self):
        return {
            "generators": list(self.generators),
            "relators": [self.word_text(r) for r in self.relators],
        }


def parse_word(text, generators):
    """Parse ``"a e A"`` or ``"aeA"``; ``"1"`` is the empty word."""
    index = {g: i for i, g in enumerate(generators)}
    out = []
    for tok in text.split():
        if tok == "1":
            continue
        pieces = [tok] if (tok.lower() in index) else list(tok)
        for p in pieces:
            if p in index:
                out.append(index[p] + 1)
            elif p.lower() in index and p != p.lower():
                out.append(-(index[p.lower()] + 1))
            else:
                raise TcdSyntaxError(f"unknown generator {p!r} in word {text!r}")
    return tuple(out)


def parse_presentation(text):
    """Read ``⟨ a, b | a b A B, ... ⟩``; a relator may be an equation ``u = v``."""
    m = re.fullmatch(r"\s*[⟨<]\s*(.*?)\s*\|\s*(.*?)\s*[⟩>]\s*", text, re.S)
    if not m:
        raise TcdSyntaxError(f"not a presentation: {text!r}")
    gens = tuple(g.strip() for g in m.group(1).split(",") if g.strip())
    rels = []
    for part in m.group(2).split(","):
        part = part.strip()
        if not part:
            continue
        if "=" in part:
            lhs, rhs = part.split("=", 1)
            rels.append(free_reduce(parse_word(lhs, gens) + inverse(parse_word(rhs, gens))))
        else:
            rels.append(free_reduce(parse_word(part, gens)))
    return Presentation(gens, tuple(rels))


def presentation_from_json(doc):
    gens = tuple(doc["generators"])
    return Presentation(gens, tuple(parse_word(r, gens) for r in doc["relators"]))


# -- cospans --------------------------------------------------------------------


@dataclass(frozen=True)
class PresentationCospan:
    ngens: int
    relators: tuple
    left: tuple  # boundary words, one per left wire
    right: tuple

    def presentation(self):
        return Presentation(tuple(gen_name(i) for i in range(self.ngens)), self.relators)


def _shift(w, k):
    return tuple(x + k if x > 0 else x - k for x in w)


def structure_cospan(kind) -> PresentationCospan:
    x, y = (1,), (2,)
    X, Y = (-1,), (-2,)
    table = {
        "id": (1, (), (x,), (x,)),
        "cup": (2, (x + y,), (), (x, y)),
        "cap": (2, (x + y,), (x, y), ()),
        "braid+": (2, (), (x, y), (x + y + X, x)),
        "braid-": (2, (), (x, y), (y, Y + x + y)),
        "mul": (2, (), (x, y), (x + y,)),
        "comul": (2, (), (x + y,), (x, y)),
        "unit": (0, (), (), ((),)),
        "counit": (1, (x,), (x,), ()),
    }
    if kind == "braid−":
        kind = "braid-"
    if kind not in table:
        raise TcdError(f"unknown structure cospan {kind!r}")
    return PresentationCospan(*table[kind])


def compose_cospans(c1: PresentationCospan, c2: PresentationCospan) -> PresentationCospan:
    """Pushout: disjoint union, plus one relator equating each matched boundary pair."""
    if len(c1.right) != len(c2.left):
        raise TcdError("cospan boundaries do not match")
    k = c1.ngens
    glue = tuple(
        free_reduce(u + inverse(_shift(v, k))) for u, v in zip(c1.right, c2.left)
    )
    rels = c1.relators + tuple(_shift(r, k) for r in c2.relators) + glue
    return PresentationCospan(
        c1.ngens + c2.ngens, rels, c1.left, tuple(_shift(w, k) for w in c2.right)
    )


def tensor_cospans(c1, c2):
    k = c1.ngens
    return PresentationCospan(
        c1.ngens + c2.ngens,
        c1.relators + tuple(_shift(r, k) for r in c2.relators),
        c1.left + tuple(_shift(w, k) for w in c2.left),
        c1.right + tuple(_shift(w, k) for w in c2.right),
    )


def identity_cospan(width):
    out = PresentationCospan(0, (), (), ())
    for _ in range(width):
        out = tensor_cospans(out, structure_cospan("id"))
    return out


def eval_cospan(term) -> PresentationCospan:
    for leaf in d.iter_leaves(term):
        if isinstance(leaf, d.Gen):
            raise HasComponents(f"component {leaf.name!r} in a knot diagram")
    return _eval(d.desugar(term))


def _eval(t):
    if isinstance(t, d.Compose):
        return compose_cospans(_eval(t.first), _eval(t.second))
    if isinstance(t, d.Tensor):
        return tensor_cospans(_eval(t.left), _eval(t.right))
    if isinstance(t, d.Id):
        return identity_cospan(len(t.word))
    if isinstance(t, d.Braid):
        return structure_cospan("braid+")
    if isinstance(t, d.BraidInv):
        return structure_cospan("braid-")
    return structure_cospan(type(t).__name__.lower())


def eval_presentation(term) -> Presentation:
    """Knot (or link) group presentation of a closed diagram, unsimplified."""
    iface = d.interface_of(term)
    if iface.dom or iface.cod:
        raise NotClosed(f"knot groups need a closed diagram I -> I, got {iface}")
    c = eval_cospan(term)
    return c.presentation()


# -- Tietze moves ---------------------------------------------------------------


def _substitute(w, g, repl):
    out = []
    inv = inverse(repl)
    for x in w:
        if x == g:
            out.extend(repl)
        elif x == -g:
            out.extend(inv)
        else:
            out.append(x)
    return free_reduce(out)


def _tidy(rels):
    seen = set()
    out = []
    for r in rels:
        r = cyclic_reduce(r)
        if not r:
            continue
        key = _canonical_cyclic(r)
        if key in seen:
            continue
        seen.add(key)
        out.append(r)
    return out


def tietze_simplify(p: Presentation, max_passes=1000) -> Presentation:
    """Drop trivial and repeated relators and eliminate defined generators.

    A generator occurring exactly once in some relator is solved for and
    substituted away.  The highest-index such generator goes first, so the
    survivors are the earliest wire segments (``<x, y | x y>`` becomes ``<x | >``).
    """
    gens = list(range(1, p.rank + 1))
    rels = _tidy(p.relators)
    for _ in range(max_passes):
        found = None
        for g in reversed(gens):
            for ri, r in enumerate(rels):
                if sum(1 for x in r if abs(x) == g) == 1:
                    found = (g, ri)
                    break
            if found:
                break
        if not found:
            break
        g, ri = found
        r = rels[ri]
        i = next(j for j, x in enumerate(r) if abs(x) == g)
        rot = r[i:] + r[:i]  # g^e w = 1
        w = rot[1:]
        repl = inverse(w) if rot[0] > 0 else w
        rels = _tidy(_substitute(x, g, repl) for k, x in enumerate(rels) if k != ri)
        gens.remove(g)
    # renumber survivors
    pos = {g: i + 1 for i, g in enumerate(gens)}
    names = tuple(p.generators[g - 1] for g in gens)
    new = tuple(tuple(pos[x] if x > 0 else -pos[-x] for x in r) for r in rels)
    return Presentation(names, new)


# -- homomorphism counting --------------------------------------------------------


def hom_count(p: Presentation, group: FiniteGroup, budget=2_000_000) -> int:
    """Number of homomorphisms to ``group``: backtracking with relator propagation."""
    m, inv = group.mult, group.inv
    n = p.rank
    rels = [r for r in p.relators if r]
    by_gen = [[] for _ in range(n + 1)]
    for ri, r in enumerate(rels):
        for g in {abs(x) for x in r}:
            by_gen[g].append(ri)
    val = [None] * (n + 1)
    steps = [0]

    def value(x):
        v = val[abs(x)]
        return v if x > 0 else inv[v]

    def word_value(w):
        out = 0
        for x in w:
            out = m[out][value(x)]
        return out

    def propagate(start):
        """Assign forced generators; return the assigned list or None on conflict."""
        assigned = []
        queue = list(start)
        while queue:
            g = queue.pop()
            for ri in by_gen[g]:
                r = rels[ri]
                free = [x for x in r if val[abs(x)] is None]
                if not free:
                    if word_value(r) != 0:
                        return _undo(assigned)
                    continue
                if len(free) == 1:
                    x = free[0]
                    i = r.index(x)
                    # r = u x v = 1  =>  x = u^-1 v^-1
                    u = word_value(r[:i])
                    v = word_value(r[i + 1:])
                    xv = m[inv[u]][inv[v]]
                    val[abs(x)] = xv if x > 0 else inv[xv]
                    assigned.append(abs(x))
                    queue.append(abs(x))
        return assigned

    def _undo(assigned):
        for g in assigned:
            val[g] = None
        return None

    def search():
        steps[0] += 1
        if steps[0] > budget:
            raise BudgetExceeded(f"hom_count explored more than {budget} nodes")
        g = next((i for i in range(1, n + 1) if val[i] is None), None)
        if g is None:
            return 1
        total = 0
        for e in range(group.order):
            val[g] = e
            forced = propagate([g])
            if forced is not None:
                total += search()
                _undo(forced)
            val[g] = None
        return total

    return search()


def is_free_of_rank(p: Presentation, k):
    return p.rank == k and not p.relators
