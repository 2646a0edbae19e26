"""Textual diagram language and the JSON binding files.

Program grammar::

    program := decl*
    decl    := "wire" IDENT
             | "comp" IDENT ":" word "->" word
             | "diagram" IDENT "=" expr
    word    := "I" | IDENT ("," IDENT)*
    expr    := term (";" term)*          -- composition, diagram order
    term    := factor ("*" factor)*      -- tensor
    factor  := IDENT | builtin | "(" expr ")"
    builtin := "id(" word ")" | "braid(" word ";" word ")" | "unbraid(" word ";" word ")"
             | ("mul"|"comul"|"unit"|"counit"|"cup"|"cap") "(" IDENT ")"

``a ; b`` means "a, then b" (the wire pictures read left to right); in the
applicative notation of algebra the same arrow is written ``b a``.  Comments
run from ``--`` to the end of the line.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import diagram as d
from .errors import (
    BadParam,
    InterfaceMismatch,
    TcdError,
    TcdSyntaxError,
    UnknownName,
    WidthMismatch,
)
from .groups import FiniteGroup, make_group

KEYWORDS = {"wire", "comp", "diagram"}
BUILTINS = {"id", "braid", "unbraid", "mul", "comul", "unit", "counit", "cup", "cap"}
_STRUCT = {
    "mul": d.Mul,
    "comul": d.Comul,
    "unit": d.Unit,
    "counit": d.Counit,
    "cup": d.Cup,
    "cap": d.Cap,
}

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>--[^\n]*)"
    r"|(?P<arrow>->)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>[:;*(),=])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "sym", "eof"
    text: str
    line: int
    col: int


def tokenize(text, source=None):
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise TcdSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source
            )
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            tokens.append(Token("ident", m.group(), line, pos - line_start + 1))
        elif kind in ("sym", "arrow"):
            tokens.append(Token("sym", m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass
class Program:
    multigraph: d.Multigraph
    diagrams: dict  # name -> Term, in declaration order
    interfaces: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)  # diagram name -> declaration line

    def diagram(self, name):
        try:
            return self.diagrams[name]
        except KeyError:
            raise UnknownName(name, "diagram") from None


class _Parser:
    def __init__(self, text, source=None):
        self.source = source
        self.toks = tokenize(text, source)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return TcdSyntaxError(msg, tok.line, tok.col, self.source)

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.tok
        if t.text != text or t.kind == "eof":
            found = t.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.next()

    def ident(self, what="identifier"):
        t = self.tok
        if t.kind != "ident":
            raise self.error(f"expected {what}, found {t.text or 'end of input'!r}")
        return self.next().text

    def program(self):
        wires, comps, diagrams, lines = [], {}, {}, {}
        while self.tok.kind != "eof":
            t = self.tok
            if t.text == "wire" and t.kind == "ident":
                self.next()
                name = self.ident("wire name")
                self._check_free(name, t)
                if name in wires:
                    raise self.error(f"wire {name!r} declared twice", t)
                wires.append(name)
            elif t.text == "comp" and t.kind == "ident":
                self.next()
                name = self.ident("component name")
                self._check_free(name, t)
                if name in comps:
                    raise self.error(f"component {name!r} declared twice", t)
                self.expect(":")
                dom = self.word()
                self.expect("->")
                cod = self.word()
                comps[name] = (dom, cod, t)
            elif t.text == "diagram" and t.kind == "ident":
                self.next()
                name = self.ident("diagram name")
                if name in diagrams:
                    raise self.error(f"diagram {name!r} declared twice", t)
                self.expect("=")
                diagrams[name] = self.expr()
                lines[name] = t.line
            else:
                raise self.error(f"expected 'wire', 'comp' or 'diagram', found {t.text!r}")
        for name, (dom, cod, t) in comps.items():
            for w in dom + cod:
                if w not in wires:
                    raise TcdSyntaxError(
                        f"unknown wire type {w!r} in component {name!r}",
                        t.line, t.col, self.source,
                    ) from None
        mg = d.Multigraph(
            tuple(wires), tuple(d.Component(n, dom, cod) for n, (dom, cod, _) in comps.items())
        )
        return mg, diagrams, lines

    def _check_free(self, name, tok):
        if name in KEYWORDS or name in BUILTINS or name == "I":
            raise self.error(f"{name!r} is reserved", tok)

    def word(self):
        if self.tok.kind == "ident" and self.tok.text == "I":
            self.next()
            return ()
        names = [self.ident("wire name")]
        while self.tok.text == ",":
            self.next()
            names.append(self.ident("wire name"))
        return tuple(names)

    def expr(self):
        t = self.term()
        while self.tok.text == ";" and self.tok.kind == "sym":
            self.next()
            t = d.Compose(t, self.term())
        return t

    def term(self):
        t = self.factor()
        while self.tok.text == "*" and self.tok.kind == "sym":
            self.next()
            t = d.Tensor(t, self.factor())
        return t

    def factor(self):
        t = self.tok
        if t.kind == "sym" and t.text == "(":
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind != "ident":
            raise self.error(f"expected a diagram, found {t.text or 'end of input'!r}")
        if t.text in KEYWORDS or t.text == "I":
            raise self.error(f"expected a diagram, found keyword {t.text!r}")
        self.next()
        if t.text in BUILTINS:
            self.expect("(")
            if t.text == "id":
                node = d.Id(self.word())
            elif t.text in ("braid", "unbraid"):
                a = self.word()
                self.expect(";")
                b = self.word()
                node = d.Braid(a, b) if t.text == "braid" else d.BraidInv(a, b)
            else:
                node = _STRUCT[t.text](self.ident("wire name"))
            self.expect(")")
            return node
        return d.Gen(t.text)


def parse_term(text, mg=None):
    """Parse a single diagram expression (no declarations)."""
    p = _Parser(text)
    term = p.expr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    if mg is not None:
        d.typecheck(term, mg)
    return term


def parse_program(text, source=None) -> Program:
    """Parse and typecheck a program; every diagram gets its interface."""
    p = _Parser(text, source)
    mg, diagrams, lines = p.program()
    prog = Program(mg, diagrams, lines=lines)
    for name, term in diagrams.items():
        try:
            prog.interfaces[name] = d.typecheck(term, mg)
        except (UnknownName, InterfaceMismatch) as exc:
            exc.args = (f"{source + ':' if source else ''}{lines[name]}: diagram {name!r}: {exc}",)
            exc.diagram = name
            exc.line = lines[name]
            raise
    return prog


def load_program(path) -> Program:
    with open(path, encoding="utf-8") as fh:
        return parse_program(fh.read(), source=str(path))


# -- pretty printing ------------------------------------------------------------


def format_word(word):
    return ", ".join(word) if word else "I"


def format_term(term) -> str:
    """Concrete syntax for ``term``; parsing the result gives back the same AST."""
    if isinstance(term, d.Compose):
        right = format_term(term.second)
        if isinstance(term.second, d.Compose):
            right = f"({right})"
        return f"{format_term(term.first)} ; {right}"
    if isinstance(term, d.Tensor):
        left = format_term(term.left)
        if isinstance(term.left, d.Compose):
            left = f"({left})"
        right = format_term(term.right)
        if isinstance(term.right, (d.Compose, d.Tensor)):
            right = f"({right})"
        return f"{left} * {right}"
    if isinstance(term, d.Gen):
        return term.name
    if isinstance(term, d.Id):
        return f"id({format_word(term.word)})"
    if isinstance(term, d.Braid):
        return f"braid({format_word(term.a)}; {format_word(term.b)})"
    if isinstance(term, d.BraidInv):
        return f"unbraid({format_word(term.a)}; {format_word(term.b)})"
    for kw, cls in _STRUCT.items():
        if type(term) is cls:
            return f"{kw}({term.wire})"
    raise TypeError(f"not a diagram term: {term!r}")


def format_program(prog: Program) -> str:
    out = [f"wire {w}" for w in prog.multigraph.wires]
    for c in prog.multigraph.components:
        out.append(f"comp {c.name} : {format_word(c.dom)} -> {format_word(c.cod)}")
    for name, term in prog.diagrams.items():
        out.append(f"diagram {name} = {format_term(term)}")
    return "\n".join(out) + "\n"


# -- binding files ------------------------------------------------------------


@dataclass
class TrelBindings:
    """Group, optional per-wire data alphabets and a relation spec per component.

    A relation spec is ``(mode, rows)`` with mode ``"explicit"`` or
    ``"conj_closure"``; each row is a tuple of coordinates ``(symbol, element)``
    where ``symbol`` is ``None`` on wires without a data alphabet.
    """

    group: FiniteGroup
    data: dict = field(default_factory=dict)
    components: dict = field(default_factory=dict)

    def alphabet(self, wire):
        return self.data.get(wire, PLAIN)


PLAIN = ("*",)


@dataclass
class LinresBindings:
    components: dict = field(default_factory=dict)  # name -> (kind, Fraction)


LINRES_PARAMS = {"resistor": "ohms", "capacitor": "farads", "inductor": "henries"}


def _load_json(text, source):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise TcdSyntaxError(exc.msg, exc.lineno, exc.colno, source) from None


def parse_bindings(kind, text, program=None, source=None):
    """Parse a ``trel`` or ``linres`` binding file.

    When ``program`` is given, bound names and tuple widths are checked
    against its multigraph.
    """
    doc = _load_json(text, source)
    if not isinstance(doc, dict):
        raise TcdSyntaxError("binding file must be a JSON object", 1, 1, source)
    if kind == "trel":
        b = _trel_bindings(doc)
    elif kind == "linres":
        b = _linres_bindings(doc)
    else:
        raise TcdError(f"unknown binding kind {kind!r}")
    if program is not None:
        check_bindings(b, program.multigraph)
    return b


def load_bindings(kind, path, program=None):
    with open(path, encoding="utf-8") as fh:
        return parse_bindings(kind, fh.read(), program, source=str(path))


def _trel_bindings(doc):
    gspec = doc.get("group", {"builtin": "S3"})
    compact = bool(doc.get("compact_cycles", False))
    if "builtin" in gspec:
        group = make_group(gspec["builtin"])
    elif "perm_degree" in gspec:
        group = make_group(int(gspec["perm_degree"]), gspec.get("generators", []), compact=compact)
    elif "table" in gspec:
        group = make_group(gspec["table"])
    else:
        raise TcdSyntaxError("group must give 'builtin', 'perm_degree' or 'table'")
    data = {}
    for wire, symbols in (doc.get("data") or {}).items():
        syms = tuple(str(s) for s in symbols)
        if not syms or len(set(syms)) != len(syms):
            raise TcdSyntaxError(f"data alphabet of {wire!r} must be nonempty and distinct")
        data[wire] = syms
    comps = {}
    for name, spec in (doc.get("components") or {}).items():
        if not isinstance(spec, dict) or len(spec) != 1:
            raise TcdSyntaxError(f"component {name!r}: expected one of 'explicit', 'conj_closure'")
        (mode, rows), = spec.items()
        if mode not in ("explicit", "conj_closure"):
            raise TcdSyntaxError(f"component {name!r}: unknown relation spec {mode!r}")
        parsed = []
        for row in rows:
            if not isinstance(row, list):
                raise TcdSyntaxError(f"component {name!r}: tuples must be JSON lists")
            parsed.append(tuple(_coordinate(group, c, compact) for c in row))
        comps[name] = (mode, parsed)
    return TrelBindings(group, data, comps)


def _coordinate(group, c, compact):
    if isinstance(c, list):
        if len(c) != 2:
            raise TcdSyntaxError(f"decorated coordinate must be [symbol, element], got {c}")
        return (str(c[0]), group.element(str(c[1]), compact=compact))
    return (None, group.element(str(c), compact=compact))


def parse_rational(value):
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise TcdSyntaxError(f"not a rational number: {value!r}") from None


def _linres_bindings(doc):
    comps = {}
    for name, spec in (doc.get("components") or {}).items():
        kind = spec.get("kind")
        if kind not in LINRES_PARAMS:
            raise TcdSyntaxError(f"component {name!r}: unknown kind {kind!r}")
        key = LINRES_PARAMS[kind]
        if key not in spec:
            raise TcdSyntaxError(f"component {name!r}: missing {key!r}")
        value = parse_rational(spec[key])
        if value <= 0:
            raise BadParam(f"component {name!r}: {key} must be positive, got {value}")
        comps[name] = (kind, value)
    return LinresBindings(comps)


def check_bindings(b, mg: d.Multigraph):
    for name in b.components:
        mg.component(name)
    if isinstance(b, TrelBindings):
        for name, (_, rows) in b.components.items():
            c = mg.component(name)
            width = len(c.dom) + len(c.cod)
            for row in rows:
                if len(row) != width:
                    raise WidthMismatch(
                        f"component {name!r}: tuple of width {len(row)}, interface needs {width}"
                    )
    else:
        for name in b.components:
            c = mg.component(name)
            if len(c.dom) != 1 or len(c.cod) != 1:
                raise WidthMismatch(f"component {name!r}: two-terminal parts need one wire each side")
