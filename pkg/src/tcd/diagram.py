"""Multigraphs, diagram terms, typing and desugaring.

Composition is stored in diagram order: ``Compose(f, g)`` means "f, then g",
which is how the wire pictures are read (left to right).  Algebraic notation
writes the same arrow applicatively as ``g f``.

Terms can be built with operators::

    >>> X = ("X",)
    >>> t = Cup("X") >> (Id(X) @ Braid(X, X) @ Id(X)) >> Cap("X") @ Cap("X")
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import InterfaceMismatch, TcdError, UnknownName

Word = tuple  # tuple[str, ...]; the empty tuple is the unit object I


def as_word(w) -> tuple:
    if isinstance(w, str):
        return (w,)
    return tuple(w)


@dataclass(frozen=True)
class Component:
    name: str
    dom: tuple
    cod: tuple


@dataclass(frozen=True)
class Multigraph:
    """Wire types plus components whose domain and codomain are words of wires."""

    wires: tuple = ()
    components: tuple = ()  # tuple[Component, ...]
    _by_name: dict = field(default_factory=dict, init=False, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if len(set(self.wires)) != len(self.wires):
            raise TcdError(f"duplicate wire type in {self.wires}")
        index = {}
        for c in self.components:
            if c.name in index:
                raise TcdError(f"duplicate component {c.name!r}")
            for w in c.dom + c.cod:
                if w not in self.wires:
                    raise UnknownName(w, "wire type")
            index[c.name] = c
        object.__setattr__(self, "_by_name", index)

    @classmethod
    def build(cls, wires, components=None):
        comps = tuple(
            Component(name, as_word(dom), as_word(cod))
            for name, (dom, cod) in (components or {}).items()
        )
        return cls(tuple(wires), comps)

    def component(self, name) -> Component:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownName(name, "component") from None

    def check_word(self, word):
        for w in word:
            if w not in self.wires:
                raise UnknownName(w, "wire type")


@dataclass(frozen=True)
class Interface:
    dom: tuple
    cod: tuple

    def __str__(self):
        return f"{_show(self.dom)} -> {_show(self.cod)}"


def _show(word):
    return ",".join(word) if word else "I"


class Term:
    """Base class of the diagram AST."""

    __slots__ = ()

    def __rshift__(self, other):
        return Compose(self, other)

    def __matmul__(self, other):
        return Tensor(self, other)


@dataclass(frozen=True)
class Gen(Term):
    name: str


@dataclass(frozen=True)
class Id(Term):
    word: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "word", as_word(self.word))


@dataclass(frozen=True)
class Compose(Term):
    first: Term
    second: Term


@dataclass(frozen=True)
class Tensor(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Braid(Term):
    """Positive crossing: the ``a`` strands pass over the ``b`` strands, a.b -> b.a."""

    a: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", as_word(self.a))
        object.__setattr__(self, "b", as_word(self.b))


@dataclass(frozen=True)
class BraidInv(Term):
    """Negative crossing with the same interface as ``Braid(a, b)``.

    It is the inverse of ``Braid(b, a)``.
    """

    a: tuple
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", as_word(self.a))
        object.__setattr__(self, "b", as_word(self.b))


@dataclass(frozen=True)
class Mul(Term):
    wire: str


@dataclass(frozen=True)
class Comul(Term):
    wire: str


@dataclass(frozen=True)
class Unit(Term):
    wire: str


@dataclass(frozen=True)
class Counit(Term):
    wire: str


@dataclass(frozen=True)
class Cup(Term):
    wire: str


@dataclass(frozen=True)
class Cap(Term):
    wire: str


STRUCTURE = (Mul, Comul, Unit, Counit, Cup, Cap)


def compose(*terms):
    """Left-nested composite of one or more terms, in diagram order."""
    if not terms:
        raise ValueError("compose() needs at least one term")
    out = terms[0]
    for t in terms[1:]:
        out = Compose(out, t)
    return out


def tensor(*terms):
    if not terms:
        return Id(())
    out = terms[0]
    for t in terms[1:]:
        out = Tensor(out, t)
    return out


def structure_interface(term):
    x = (term.wire,)
    return {
        Mul: (x + x, x),
        Comul: (x, x + x),
        Unit: ((), x),
        Counit: (x, ()),
        Cup: ((), x + x),
        Cap: (x + x, ()),
    }[type(term)]


def typecheck(term: Term, mg: Multigraph) -> Interface:
    """Infer the interface of ``term``; raises on unknown names or bad composites."""
    dom, cod = _infer(term, mg, {})
    return Interface(dom, cod)


def _infer(term, mg, memo):
    key = id(term)
    hit = memo.get(key)
    if hit is not None and hit[0] is term:
        return hit[1]
    if isinstance(term, Gen):
        c = mg.component(term.name)
        result = (c.dom, c.cod)
    elif isinstance(term, Id):
        mg.check_word(term.word)
        result = (term.word, term.word)
    elif isinstance(term, Compose):
        d1, c1 = _infer(term.first, mg, memo)
        d2, c2 = _infer(term.second, mg, memo)
        if c1 != d2:
            raise InterfaceMismatch(c1, d2)
        result = (d1, c2)
    elif isinstance(term, Tensor):
        d1, c1 = _infer(term.left, mg, memo)
        d2, c2 = _infer(term.right, mg, memo)
        result = (d1 + d2, c1 + c2)
    elif isinstance(term, (Braid, BraidInv)):
        mg.check_word(term.a)
        mg.check_word(term.b)
        result = (term.a + term.b, term.b + term.a)
    elif isinstance(term, STRUCTURE):
        mg.check_word((term.wire,))
        result = structure_interface(term)
    else:
        raise TypeError(f"not a diagram term: {term!r}")
    memo[key] = (term, result)
    return result


def interface_of(term: Term) -> Interface:
    """Interface of a term that mentions no components (no multigraph needed)."""
    wires = set()
    _collect_wires(term, wires)
    if any(isinstance(t, Gen) for t in iter_leaves(term)):
        raise TcdError("interface_of() needs a multigraph for terms with components")
    return typecheck(term, Multigraph(tuple(sorted(wires))))


def _collect_wires(term, acc):
    if isinstance(term, Id):
        acc.update(term.word)
    elif isinstance(term, (Braid, BraidInv)):
        acc.update(term.a)
        acc.update(term.b)
    elif isinstance(term, STRUCTURE):
        acc.add(term.wire)
    elif isinstance(term, Compose):
        _collect_wires(term.first, acc)
        _collect_wires(term.second, acc)
    elif isinstance(term, Tensor):
        _collect_wires(term.left, acc)
        _collect_wires(term.right, acc)


def iter_leaves(term):
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Compose):
            stack.append(t.second)
            stack.append(t.first)
        elif isinstance(t, Tensor):
            stack.append(t.right)
            stack.append(t.left)
        else:
            yield t


def generator_census(term: Term) -> dict:
    """Occurrence count of each component name."""
    return dict(Counter(t.name for t in iter_leaves(term) if isinstance(t, Gen)))


# -- desugaring ---------------------------------------------------------------


def desugar(term: Term) -> Term:
    """Eliminate cups, caps and multi-wire braids.

    ``Cup(X)`` becomes ``Unit(X) ; Comul(X)`` and ``Cap(X)`` becomes
    ``Mul(X) ; Counit(X)``.  Braids of words are expanded into single-strand
    crossings with the two hexagon identities; a braid with an empty side is
    an identity.
    """
    if isinstance(term, Compose):
        return Compose(desugar(term.first), desugar(term.second))
    if isinstance(term, Tensor):
        return Tensor(desugar(term.left), desugar(term.right))
    if isinstance(term, Cup):
        return Compose(Unit(term.wire), Comul(term.wire))
    if isinstance(term, Cap):
        return Compose(Mul(term.wire), Counit(term.wire))
    if isinstance(term, Braid):
        return _expand_braid(term.a, term.b)
    if isinstance(term, BraidInv):
        return _invert(_expand_braid(term.b, term.a))
    return term


def _expand_braid(a, b):
    if not a or not b:
        return Id(a + b)
    if len(a) == 1 and len(b) == 1:
        return Braid(a, b)
    if len(b) > 1:
        # tau_{A, y.C} = (tau_{A,y} (x) 1_C) ; (1_y (x) tau_{A,C})
        y, rest = b[:1], b[1:]
        return Compose(
            Tensor(_expand_braid(a, y), Id(rest)),
            Tensor(Id(y), _expand_braid(a, rest)),
        )
    # tau_{x.A', C} = (1_x (x) tau_{A',C}) ; (tau_{x,C} (x) 1_{A'})
    x, rest = a[:1], a[1:]
    return Compose(
        Tensor(Id(x), _expand_braid(rest, b)),
        Tensor(_expand_braid(x, b), Id(rest)),
    )


def _invert(term):
    """Inverse of a term built only from identities and single crossings."""
    if isinstance(term, Compose):
        return Compose(_invert(term.second), _invert(term.first))
    if isinstance(term, Tensor):
        return Tensor(_invert(term.left), _invert(term.right))
    if isinstance(term, Id):
        return term
    if isinstance(term, Braid):
        return BraidInv(term.b, term.a)
    if isinstance(term, BraidInv):
        return Braid(term.b, term.a)
    raise TypeError(f"cannot invert {term!r}")


# -- normalization ------------------------------------------------------------


def normalize(term: Term) -> Term:
    """Flatten associativity and strict units so equal-by-axiom terms compare equal.

    Composites and tensors are re-nested to the right, ``Id(I)`` tensor factors
    are dropped, adjacent identities in a tensor are merged and identities in
    a composite with other factors are removed.
    """
    if isinstance(term, Compose):
        parts = [normalize(p) for p in _flatten(term, Compose)]
        flat = []
        for p in parts:
            flat.extend(_flatten(p, Compose))
        kept = [p for p in flat if not isinstance(p, Id)]
        if not kept:
            return flat[0]
        return _nest(kept, Compose)
    if isinstance(term, Tensor):
        parts = [normalize(p) for p in _flatten(term, Tensor)]
        flat = []
        for p in parts:
            for q in _flatten(p, Tensor):
                if isinstance(q, Id) and not q.word:
                    continue
                if isinstance(q, Id) and flat and isinstance(flat[-1], Id):
                    flat[-1] = Id(flat[-1].word + q.word)
                else:
                    flat.append(q)
        if not flat:
            return Id(())
        return _nest(flat, Tensor)
    return term


def _flatten(term, kind):
    if not isinstance(term, kind):
        return [term]
    a, b = (term.first, term.second) if kind is Compose else (term.left, term.right)
    return _flatten(a, kind) + _flatten(b, kind)


def _nest(parts, kind):
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = kind(p, out)
    return out
