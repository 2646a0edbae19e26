"""Finite groups as multiplication tables.

Permutations are stored 0-based as image tuples ``p[i] = image of i``.  The
product ``p * q`` applies ``q`` first, then ``p``; with this convention
``(1 2)(1 3) = (1 3 2)``.  Conjugation is ``g^h = h g h^-1`` everywhere.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from .errors import BadPermutation, ClosureTooLarge, NotAGroup, TcdError

DEFAULT_CLOSURE_CAP = 10080


# -- permutations -------------------------------------------------------------


def perm_mul(p, q):
    """Apply ``q`` first, then ``p``."""
    return tuple(p[i] for i in q)


def perm_identity(n):
    return tuple(range(n))


def perm_from_cycles(cycles, n):
    img = list(range(n))
    seen = set()
    for cyc in cycles:
        for pt in cyc:
            if not 1 <= pt <= n:
                raise BadPermutation(f"point {pt} out of range 1..{n}")
            if pt in seen:
                raise BadPermutation(f"point {pt} repeated")
            seen.add(pt)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a - 1] = b - 1
    return tuple(img)


def cycle_notation(p):
    """Cycle notation with 1-based points; the identity is ``()``."""
    seen = set()
    parts = []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        j = p[start]
        while j != start:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        parts.append("(" + " ".join(str(k + 1) for k in cyc) + ")")
    return "".join(parts) or "()"


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text, degree, compact=False):
    """Parse ``e``, ``()``, ``(1 2)``, ``(1 2 3)(4 5)`` into an image tuple.

    With ``compact=True`` the shorthand ``12`` / ``(12)`` for the single
    transposition of two one-digit points is accepted as well.
    """
    s = text.strip()
    if s in ("e", "()", "1", ""):
        if s == "":
            raise BadPermutation("empty permutation literal")
        return perm_identity(degree)
    if compact:
        m = re.fullmatch(r"\(?(\d)(\d)\)?", s)
        if m:
            return perm_from_cycles([[int(m.group(1)), int(m.group(2))]], degree)
    pos = 0
    cycles = []
    for m in _CYCLE.finditer(s):
        if s[pos:m.start()].strip():
            raise BadPermutation(f"cannot parse permutation {text!r}")
        body = m.group(1).replace(",", " ").split()
        if not body:
            raise BadPermutation(f"empty cycle inside {text!r}")
        try:
            cycles.append([int(b) for b in body])
        except ValueError:
            raise BadPermutation(f"cannot parse permutation {text!r}") from None
        pos = m.end()
    if not cycles or s[pos:].strip():
        raise BadPermutation(f"cannot parse permutation {text!r}")
    return perm_from_cycles(cycles, degree)


# -- groups -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A group given by its multiplication table; element 0 is the identity."""

    names: tuple
    mult: tuple  # mult[a][b] = a*b
    perms: tuple = None  # permutation images when built from permutations
    degree: int = 0
    label: str = ""
    _index: dict = field(default=None, init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @property
    def order(self):
        return len(self.names)

    @property
    def identity(self):
        return 0

    @cached_property
    def inv(self):
        inv = [0] * self.order
        for a, row in enumerate(self.mult):
            inv[a] = row.index(0)
        return tuple(inv)

    @cached_property
    def center(self):
        return center(self)

    @cached_property
    def conj_table(self):
        """``conj_table[h][g] = h g h^-1``."""
        m, inv = self.mult, self.inv
        return tuple(
            tuple(m[m[h][g]][inv[h]] for g in range(self.order)) for h in range(self.order)
        )

    def mul(self, a, b):
        return self.mult[a][b]

    def product(self, elems):
        out = 0
        m = self.mult
        for e in elems:
            out = m[out][e]
        return out

    def conj(self, g, h):
        """``g^h = h g h^-1``."""
        return self.conj_table[h][g]

    def name(self, a):
        return self.names[a]

    def element(self, literal, compact=False):
        """Look up an element from a permutation literal or an element name."""
        if self.perms is not None:
            p = parse_permutation(literal, self.degree, compact=compact)
            try:
                return self.perms.index(p)
            except ValueError:
                raise BadPermutation(
                    f"{literal!r} is not an element of {self.label or 'the group'}"
                ) from None
        try:
            return self._index[literal]
        except KeyError:
            raise BadPermutation(f"unknown element {literal!r}") from None

    def __repr__(self):
        return f"FiniteGroup({self.label or 'order ' + str(self.order)})"


def check_group_laws(mult):
    """Raise NotAGroup with a witness if ``mult`` (identity at 0) is not a group table."""
    n = len(mult)
    if n == 0:
        raise NotAGroup("nonempty", ())
    for a, row in enumerate(mult):
        if len(row) != n:
            raise NotAGroup("square table", (a,))
        for b, c in enumerate(row):
            if not (isinstance(c, int) and 0 <= c < n):
                raise NotAGroup("closure", (a, b, c))
    for a in range(n):
        if mult[0][a] != a or mult[a][0] != a:
            raise NotAGroup("identity", (0, a))
        if 0 not in mult[a]:
            raise NotAGroup("inverse", (a,))
        b = mult[a].index(0)
        if mult[b][a] != 0:
            raise NotAGroup("inverse", (a, b))
    for a in range(n):
        ra = mult[a]
        for b in range(n):
            ab = ra[b]
            rab, rb = mult[ab], mult[b]
            for c in range(n):
                if rab[c] != ra[rb[c]]:
                    raise NotAGroup("associativity", (a, b, c))


def group_from_table(table, names=None, label=""):
    """Validate an explicit table; elements are relabelled so the identity is 0."""
    n = len(table)
    rows = [tuple(r) for r in table]
    ident = None
    for e in range(n):
        if all(len(rows[e]) == n and rows[e][a] == a and rows[a][e] == a for a in range(n)):
            ident = e
            break
    if ident is None:
        raise NotAGroup("identity", ())
    order = [ident] + [a for a in range(n) if a != ident]
    pos = {a: i for i, a in enumerate(order)}
    mult = tuple(tuple(pos[rows[a][b]] for b in order) for a in order)
    check_group_laws(mult)
    if names is None:
        names = [str(a) for a in range(n)]
    return FiniteGroup(tuple(names[a] for a in order), mult, label=label)


def group_from_permutations(degree, generators, cap=DEFAULT_CLOSURE_CAP, label=""):
    """Close permutation generators under products (breadth first)."""
    ident = perm_identity(degree)
    gens = [tuple(g) for g in generators]
    for g in gens:
        if len(g) != degree or sorted(g) != list(ident):
            raise BadPermutation(f"not a permutation of degree {degree}: {g}")
    seen = {ident}
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        for g in gens:
            q = perm_mul(g, p)
            if q not in seen:
                seen.add(q)
                if len(seen) > cap:
                    raise ClosureTooLarge(f"closure exceeds {cap} elements")
                queue.append(q)
    # lexicographic order of image tuples puts the identity first
    perms = tuple(sorted(seen))
    index = {p: i for i, p in enumerate(perms)}
    mult = tuple(tuple(index[perm_mul(p, q)] for q in perms) for p in perms)
    return FiniteGroup(
        tuple(cycle_notation(p) for p in perms), mult, perms, degree, label=label
    )


def _cycle(n):
    return tuple((i + 1) % n for i in range(n))


def _transposition(n, a=0, b=1):
    img = list(range(n))
    img[a], img[b] = b, a
    return tuple(img)


def builtin_names():
    return [f"C{n}" for n in range(2, 13)] + ["S2", "S3", "S4", "S5", "D3", "D4"]


def builtin_group(name):
    if name.startswith("C") and name[1:].isdigit() and 2 <= int(name[1:]) <= 12:
        n = int(name[1:])
        return group_from_permutations(n, [_cycle(n)], label=name)
    if name in ("S2", "S3", "S4", "S5"):
        n = int(name[1:])
        gens = [_transposition(n)] + ([_cycle(n)] if n > 2 else [])
        return group_from_permutations(n, gens, label=name)
    if name == "D3":
        # same table as S3
        g = builtin_group("S3")
        return FiniteGroup(g.names, g.mult, g.perms, g.degree, label="D3")
    if name == "D4":
        return group_from_permutations(
            4, [_cycle(4), perm_from_cycles([[1, 3]], 4)], label="D4"
        )
    raise TcdError(f"unknown builtin group {name!r}; expected one of {builtin_names()}")


def make_group(spec, generators=None, cap=DEFAULT_CLOSURE_CAP, compact=False):
    """Build a group from a builtin name, ``(degree, generators)`` or a table.

    ``make_group("S3")``, ``make_group(3, ["(1 2)", "(1 3)"])`` and
    ``make_group([[0, 1], [1, 0]])`` are all accepted.
    """
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        return builtin_group(spec)
    if isinstance(spec, int):
        gens = [
            g if isinstance(g, tuple) else parse_permutation(g, spec, compact=compact)
            for g in (generators or [])
        ]
        return group_from_permutations(spec, gens, cap=cap, label=f"<degree {spec}>")
    return group_from_table(spec)


def center(g: FiniteGroup):
    m = g.mult
    n = g.order
    return frozenset(z for z in range(n) if all(m[z][a] == m[a][z] for a in range(n)))


def conjugate_tuple(g: FiniteGroup, t, h):
    row = g.conj_table[h]
    return tuple(row[x] for x in t)


def conjugacy_closure(g: FiniteGroup, seeds):
    """Smallest superset of ``seeds`` closed under diagonal conjugation."""
    seeds = [tuple(s) for s in seeds]
    if len({len(s) for s in seeds}) > 1:
        raise TcdError("seed tuples must share one width")
    out = set()
    for s in seeds:
        if s in out:
            continue
        out.update(conjugate_tuple(g, s, h) for h in range(g.order))
    return out


def orbits(g: FiniteGroup, tuples):
    """Partition a conjugation-closed set into diagonal conjugation orbits."""
    remaining = set(tuples)
    result = []
    while remaining:
        t = min(remaining)
        orb = {conjugate_tuple(g, t, h) for h in range(g.order)}
        result.append(frozenset(orb))
        remaining -= orb
    return result
