"""Analogue circuits as homogeneous linear relations with exact rational coefficients.

Every wire carries a current ``i`` and a voltage ``v``.  Columns are ordered

    in-ports (i_in1, v_in1, i_in2, ...), out-ports (i_out1, v_out1, ...),
    derivative variables (q1', q2', ...), state variables (q1, q2, ...)

and canonical systems are in reduced row-echelon form under that order.
Current flows from the in side to the out side of a part, and a two-terminal
part relates its voltage drop ``v_in - v_out`` to its impedance term:
``v1 - v2 = r i`` for a resistor, ``v1 - v2 = q / c`` for a capacitor with
charge ``q`` and ``q' = i``, ``v1 - v2 = l p`` for an inductor with state
``s = i`` and ``p = s'``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import diagram as d
from .errors import BadParam, InterfaceMismatch, TcdError, UnboundComponent

ZERO = Fraction(0)
ONE = Fraction(1)


def rref(rows, ncols):
    """Reduced row-echelon form (pivots 1, zero rows dropped) and the pivot columns."""
    m = [list(r) for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((k for k in range(r, len(m)) if m[k][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        lead = m[r][c]
        if lead != 1:
            m[r] = [x / lead for x in m[r]]
        row = m[r]
        for k in range(len(m)):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                mk = m[k]
                m[k] = [a - f * b for a, b in zip(mk, row)]
        pivots.append(c)
        r += 1
    return [tuple(x) for x in m[:r]], pivots


def eliminate(rows, ncols, latent):
    """Project the solution space onto the non-latent columns.

    Latent columns are moved to the front, the matrix is row reduced and only
    rows without a latent pivot are kept.
    """
    latent = sorted(set(latent))
    keep = [c for c in range(ncols) if c not in set(latent)]
    order = latent + keep
    perm = [[row[c] for c in order] for row in rows]
    red, pivots = rref(perm, ncols)
    nl = len(latent)
    out = [row[nl:] for row, p in zip(red, pivots) if p >= nl]
    return out


@dataclass(frozen=True)
class LinearSystem:
    n_in: int
    n_out: int
    n_states: int
    rows: tuple  # canonical rows of Fractions

    @property
    def ncols(self):
        return 2 * self.n_in + 2 * self.n_out + 2 * self.n_states

    def variables(self):
        names = []
        for k in range(self.n_in):
            names += [f"i_in{k + 1}", f"v_in{k + 1}"]
        for k in range(self.n_out):
            names += [f"i_out{k + 1}", f"v_out{k + 1}"]
        names += [f"q{k + 1}'" for k in range(self.n_states)]
        names += [f"q{k + 1}" for k in range(self.n_states)]
        return names

    def col(self, name):
        return self.variables().index(name)

    @property
    def dimension(self):
        """Dimension of the solution space."""
        return self.ncols - len(self.rows)

    def __str__(self):
        return render_system(self)


def make_system(n_in, n_out, n_states, rows):
    ncols = 2 * (n_in + n_out + n_states)
    rows = [tuple(Fraction(x) for x in r) for r in rows]
    for r in rows:
        if len(r) != ncols:
            raise TcdError(f"row of length {len(r)}, expected {ncols}")
    red, _ = rref(rows, ncols)
    return LinearSystem(n_in, n_out, n_states, tuple(red))


def canonicalize(s: LinearSystem) -> LinearSystem:
    return make_system(s.n_in, s.n_out, s.n_states, s.rows)


def system_from_equations(n_in, n_out, n_states, equations, latent=()):
    """Build from ``{name: coeff}`` dicts; names in ``latent`` are eliminated.

    Handy for writing reference systems by hand.
    """
    proto = LinearSystem(n_in, n_out, n_states, ())
    names = proto.variables()
    latent = list(latent)
    cols = {n: k for k, n in enumerate(names + latent)}
    ncols = len(cols)
    rows = []
    for eq in equations:
        row = [ZERO] * ncols
        for name, c in eq.items():
            if name not in cols:
                raise TcdError(f"unknown variable {name!r}")
            row[cols[name]] += Fraction(c)
        rows.append(row)
    kept = eliminate(rows, ncols, range(len(names), ncols))
    # eliminate keeps non-latent columns in their original order
    return make_system(n_in, n_out, n_states, kept)


# -- generators -------------------------------------------------------------------


def _rows(n_in, n_out, n_states, eqs):
    """``eqs`` are dicts keyed by (block, index, quantity) with block in {in, out, d, s}."""
    out = []
    for eq in eqs:
        row = [ZERO] * (2 * (n_in + n_out + n_states))
        for (block, k, q), c in eq.items():
            if block == "in":
                j = 2 * k + (q == "v")
            elif block == "out":
                j = 2 * n_in + 2 * k + (q == "v")
            elif block == "d":
                j = 2 * (n_in + n_out) + k
            else:
                j = 2 * (n_in + n_out) + n_states + k
            row[j] += Fraction(c)
        out.append(row)
    return make_system(n_in, n_out, n_states, out)


def _i(side, k):
    return (side, k, "i")


def _v(side, k):
    return (side, k, "v")


def component_system(kind, param=None) -> LinearSystem:
    """System of a two-terminal part or of a wiring operator on one wire."""
    if kind in ("resistor", "capacitor", "inductor"):
        if param is None or Fraction(param) <= 0:
            raise BadParam(f"{kind} needs a positive parameter, got {param!r}")
        p = Fraction(param)
    i1, i2, v1, v2 = _i("in", 0), _i("out", 0), _v("in", 0), _v("out", 0)
    if kind == "resistor":
        return _rows(1, 1, 0, [{i1: 1, i2: -1}, {v1: 1, v2: -1, i1: -p}])
    if kind == "capacitor":
        q, dq = ("s", 0, ""), ("d", 0, "")
        return _rows(1, 1, 1, [{i1: 1, i2: -1}, {v1: 1, v2: -1, q: -1 / p}, {dq: 1, i1: -1}])
    if kind == "inductor":
        s, ds = ("s", 0, ""), ("d", 0, "")
        return _rows(1, 1, 1, [{i1: 1, i2: -1}, {v1: 1, v2: -1, ds: -p}, {s: 1, i1: -1}])
    if kind == "id":
        return _rows(1, 1, 0, [{i1: 1, i2: -1}, {v1: 1, v2: -1}])
    if kind == "comul":
        o1, o2 = _i("out", 0), _i("out", 1)
        return _rows(1, 2, 0, [
            {i1: 1, o1: -1, o2: -1},
            {v1: 1, _v("out", 0): -1},
            {v1: 1, _v("out", 1): -1},
        ])
    if kind == "mul":
        a, b = _i("in", 0), _i("in", 1)
        return _rows(2, 1, 0, [
            {a: 1, b: 1, i2: -1},
            {_v("in", 0): 1, v2: -1},
            {_v("in", 1): 1, v2: -1},
        ])
    if kind == "unit":
        return _rows(0, 1, 0, [{i2: 1}])
    if kind == "counit":
        return _rows(1, 0, 0, [{i1: 1}])
    if kind == "cup":
        return _rows(0, 2, 0, [
            {_i("out", 0): 1, _i("out", 1): 1},
            {_v("out", 0): 1, _v("out", 1): -1},
        ])
    if kind == "cap":
        return _rows(2, 0, 0, [
            {_i("in", 0): 1, _i("in", 1): 1},
            {_v("in", 0): 1, _v("in", 1): -1},
        ])
    raise TcdError(f"unknown part {kind!r}")


def identity_system(width):
    return _rows(width, width, 0, [
        eq for k in range(width)
        for eq in ({_i("in", k): 1, _i("out", k): -1}, {_v("in", k): 1, _v("out", k): -1})
    ])


def swap_system(m, n):
    """Port permutation A.B -> B.A with |A| = m, |B| = n."""
    w = m + n
    target = [n + k for k in range(m)] + list(range(n))  # in wire k goes to out wire target[k]
    eqs = []
    for k in range(w):
        t = target[k]
        eqs.append({_i("in", k): 1, _i("out", t): -1})
        eqs.append({_v("in", k): 1, _v("out", t): -1})
    return _rows(w, w, 0, eqs)


# -- composition --------------------------------------------------------------------


def _layout(s):
    """Column blocks of ``s``: (in, out, deriv, state) start offsets."""
    a = 0
    b = 2 * s.n_in
    c = b + 2 * s.n_out
    e = c + s.n_states
    return a, b, c, e


def compose_systems(a: LinearSystem, b: LinearSystem) -> LinearSystem:
    """``a`` then ``b``: identify a's out ports with b's in ports and eliminate them."""
    if a.n_out != b.n_in:
        raise InterfaceMismatch(("X",) * a.n_out, ("X",) * b.n_in)
    ni, no, k = a.n_in, b.n_out, a.n_states + b.n_states
    mid = 2 * a.n_out
    base = 2 * (ni + no + k)
    ncols = base + mid
    d0 = 2 * (ni + no)
    s0 = d0 + k
    rows = []
    _, ao, ad, asx = _layout(a)
    for r in a.rows:
        row = [ZERO] * ncols
        row[: 2 * ni] = r[: 2 * ni]
        row[base: base + mid] = r[ao: ao + mid]
        row[d0: d0 + a.n_states] = r[ad: ad + a.n_states]
        row[s0: s0 + a.n_states] = r[asx: asx + a.n_states]
        rows.append(row)
    _, bo, bd, bsx = _layout(b)
    for r in b.rows:
        row = [ZERO] * ncols
        row[base: base + mid] = r[:mid]
        row[2 * ni: 2 * ni + 2 * no] = r[bo: bo + 2 * no]
        row[d0 + a.n_states: d0 + k] = r[bd: bd + b.n_states]
        row[s0 + a.n_states: s0 + k] = r[bsx: bsx + b.n_states]
        rows.append(row)
    kept = eliminate(rows, ncols, range(base, ncols))
    return make_system(ni, no, k, kept)


def tensor_systems(a: LinearSystem, b: LinearSystem) -> LinearSystem:
    ni, no, k = a.n_in + b.n_in, a.n_out + b.n_out, a.n_states + b.n_states
    ncols = 2 * (ni + no + k)
    d0, s0 = 2 * (ni + no), 2 * (ni + no) + k
    rows = []
    for sys_, off_in, off_out, off_st in (
        (a, 0, 2 * ni, 0),
        (b, 2 * a.n_in, 2 * ni + 2 * a.n_out, a.n_states),
    ):
        ii, oo, dd, ss = _layout(sys_)
        for r in sys_.rows:
            row = [ZERO] * ncols
            row[off_in: off_in + 2 * sys_.n_in] = r[: 2 * sys_.n_in]
            row[off_out: off_out + 2 * sys_.n_out] = r[oo: oo + 2 * sys_.n_out]
            row[d0 + off_st: d0 + off_st + sys_.n_states] = r[dd: dd + sys_.n_states]
            row[s0 + off_st: s0 + off_st + sys_.n_states] = r[ss: ss + sys_.n_states]
            rows.append(row)
    return make_system(ni, no, k, rows)


def eval_linres(term, mg, bindings) -> LinearSystem:
    """Evaluate a circuit diagram; components come from a LinresBindings."""
    d.typecheck(term, mg)
    comps = bindings.components if bindings is not None else {}
    for name in d.generator_census(term):
        if name not in comps:
            raise UnboundComponent(name)
    return _eval(term, comps)


def _eval(t, comps):
    if isinstance(t, d.Compose):
        return compose_systems(_eval(t.first, comps), _eval(t.second, comps))
    if isinstance(t, d.Tensor):
        return tensor_systems(_eval(t.left, comps), _eval(t.right, comps))
    if isinstance(t, d.Gen):
        kind, value = comps[t.name]
        return component_system(kind, value)
    if isinstance(t, d.Id):
        return identity_system(len(t.word))
    if isinstance(t, (d.Braid, d.BraidInv)):
        # currents and voltages are abelian, so both crossings are the swap
        return swap_system(len(t.a), len(t.b))
    return component_system(type(t).__name__.lower())


# -- rendering --------------------------------------------------------------------


def _coef(c):
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def equation_text(row, names):
    parts = []
    for c, name in zip(row, names):
        if c == 0:
            continue
        mag = abs(c)
        term = name if mag == 1 else f"{_coef(mag)}*{name}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts) + " = 0"


def render_system(s: LinearSystem) -> str:
    names = s.variables()
    if not s.rows:
        return "(no equations)"
    return "\n".join(equation_text(r, names) for r in s.rows)


def system_to_json(s: LinearSystem) -> dict:
    names = s.variables()
    return {
        "n_in": s.n_in,
        "n_out": s.n_out,
        "n_states": s.n_states,
        "variables": names,
        "rows": [{n: _coef(c) for n, c in zip(names, r) if c != 0} for r in s.rows],
        "equations": [equation_text(r, names) for r in s.rows],
    }


def system_from_json(doc) -> LinearSystem:
    proto = LinearSystem(doc["n_in"], doc["n_out"], doc["n_states"], ())
    names = proto.variables()
    rows = []
    for r in doc["rows"]:
        rows.append([Fraction(r.get(n, "0")) for n in names])
    return make_system(proto.n_in, proto.n_out, proto.n_states, rows)


def drop_coefficient(s: LinearSystem):
    """For a two-terminal system equivalent to a resistor, the ``r`` in ``v1 - v2 = r i1``."""
    if (s.n_in, s.n_out, s.n_states) != (1, 1, 0):
        raise TcdError("not a two-terminal resistive system")
    for r in s.rows:
        # canonical row for v_in1 has pivot at column 1
        # v_in1 - r*i_out1 - v_out1 = 0, using i_in1 = i_out1
        if r[0] == 0 and r[1] == 1 and r[3] == -1:
            return -r[2]
    return None
