"""Executable braided/Frobenius/tangle-algebra laws, checked in a relation backend."""

from __future__ import annotations

from dataclasses import dataclass

from . import diagram as d
from .diagram import Braid, BraidInv, Cap, Comul, Counit, Cup, Id, Mul, Unit, compose
from .trel import eval_trel

X = "X"


def _w(k):
    return (X,) * k


@dataclass(frozen=True)
class Law:
    name: str
    lhs: d.Term
    rhs: d.Term
    expect_equal: bool = True


def laws(max_width=2):
    """All laws as pairs of component-free terms over one wire type ``X``."""
    out = []
    one = Id(_w(1))
    rng = range(max_width + 1)
    for m in rng:
        for n in rng:
            for p in rng:
                A, B, C = _w(m), _w(n), _w(p)
                out.append(Law(
                    f"hexagon B1 ({m},{n},{p})",
                    Braid(A + B, C),
                    compose(Id(A) @ Braid(B, C), Braid(A, C) @ Id(B)),
                ))
                out.append(Law(
                    f"hexagon B2 ({m},{n},{p})",
                    Braid(A, B + C),
                    compose(Braid(A, B) @ Id(C), Id(B) @ Braid(A, C)),
                ))
    for m in rng:
        out.append(Law(f"tau_{{{m},0}} = id", Braid(_w(m), ()), Id(_w(m))))
        out.append(Law(f"tau_{{0,{m}}} = id", Braid((), _w(m)), Id(_w(m))))
    t = Braid(_w(1), _w(1))
    out.append(Law(
        "Yang-Baxter",
        compose(t @ one, one @ t, t @ one),
        compose(one @ t, t @ one, one @ t),
    ))
    out.append(Law("braid inverse", compose(t, BraidInv(_w(1), _w(1))), Id(_w(2))))
    mul, comul = Mul(X), Comul(X)
    out.append(Law("Frobenius left", compose(comul @ one, one @ mul), compose(mul, comul)))
    out.append(Law("Frobenius right", compose(one @ comul, mul @ one), compose(mul, comul)))
    out.append(Law("multiplication commutative", compose(t, mul), mul))
    out.append(Law("comultiplication cocommutative", compose(comul, t), comul))
    out.append(Law("multiplication associative",
                   compose(mul @ one, mul), compose(one @ mul, mul)))
    out.append(Law("unit law", compose(Unit(X) @ one, mul), one))
    out.append(Law("counit law", compose(comul, Counit(X) @ one), one))
    cup, cap = Cup(X), Cap(X)
    out.append(Law("snake left", compose(one @ cup, cap @ one), one))
    out.append(Law("snake right", compose(cup @ one, one @ cap), one))
    out.append(Law("cap absorbs twist", compose(t, cap), cap))
    out.append(Law("cup absorbs twist", compose(cup, t), cup))
    out.append(Law("cup from unit", cup, compose(Unit(X), comul)))
    # relations forget multiplicity, so comul ; mul is the identity here; the
    # diagram-order composite mul ; comul is not
    out.append(Law("non-separable", compose(mul, comul), Id(_w(2)), expect_equal=False))
    return out


@dataclass(frozen=True)
class LawResult:
    name: str
    passed: bool
    lhs_size: int
    rhs_size: int


def check_law(law: Law, group, data=None):
    mg = d.Multigraph((X,))
    kw = {"group": group}
    if data is not None:
        kw["data"] = {X: tuple(data)}
    lhs = eval_trel(law.lhs, mg, **kw)
    rhs = eval_trel(law.rhs, mg, **kw)
    ok = (lhs == rhs) == law.expect_equal
    return LawResult(law.name, ok, len(lhs), len(rhs))


def run_axioms(group, data=None, max_width=2):
    return [check_law(law, group, data) for law in laws(max_width)]
