"""Logarithmic symbols on genus-0 curves, their exp relations and budgets.

Every log symbol combines a constant term with integrals of ``dg_k/g_k``
along a path on the curve from a base point Q to the symbol's point P,
where ``g_k`` is the unit part of ``f_k`` at P.  The path is a straight
segment, nudged sideways when it would graze a pole.  All points used
numerically must be finite; :func:`parsym.surface.normalize` moves
symbol-carrying lines at infinity to finite positions beforehand.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .curves import TateInstance, tate_symbol
from .iterated import Alphabet, Letter
from .paths import (
    DEFAULT_CLEARANCE,
    CoordCircle,
    LogForm,
    PathWord,
    log_integrals,
    straight_path,
)
from .parshin import det_from_orders, parshin_symbol, refined_symbol
from .rational import INF, FactoredFunction1D, P1Point, divisor_support, off_roots, order_at
from .surface import (
    SurfaceFunction,
    SurfaceInstance,
    SymbolLocalData,
    along_axis,
    intersection_points,
    local_data,
    restricted_unit_part,
    transverse_component,
)

TWO_PI_I = 2j * math.pi
Number = Union[Fraction, int, float, complex]


class NeedsNormalization(ValueError):
    pass


def log_rational(q: Fraction) -> complex:
    """Principal log of a nonzero rational, safe for huge numerators."""
    mag = math.log(abs(q.numerator)) - math.log(q.denominator)
    return complex(mag, math.pi if q < 0 else 0.0)


@dataclass
class LogSymbolValue:
    """A log symbol plus the data of its exp relation.

    ``exp_log`` is the logarithm of exp((2 pi i)**-d * value) * Q-factor,
    kept in log form so large exponents cannot overflow.
    """

    value: complex
    point: str
    Q: complex
    paths: list[dict] = field(default_factory=list)
    epsilon: float = 0.0
    exp_log: complex | None = None
    symbol: Fraction | None = None

    @property
    def exp_relation(self) -> complex | None:
        return None if self.exp_log is None else cmath.exp(self.exp_log)

    @property
    def exp_residual(self) -> float:
        """Relative distance between the exp relation and the exact symbol."""
        if self.exp_log is None or self.symbol is None:
            return 0.0
        w = self.exp_log - log_rational(self.symbol)
        w = complex(w.real, math.remainder(w.imag, 2 * math.pi))
        return abs(cmath.exp(w) - 1)


def _height_order():
    """Rationals ordered by height max(|p|, q), then size, positive first."""
    yield Fraction(0)
    h = 1
    while True:
        cands = {Fraction(p, q) for q in range(1, h + 1) for p in (h, -h) if math.gcd(h, q) == 1}
        cands |= {Fraction(p, h) for p in range(-h + 1, h) if math.gcd(abs(p), h) == 1}
        cands.discard(Fraction(0))
        for c in sorted(cands, key=lambda v: (abs(v), v < 0)):
            yield c
        h += 1


def default_base_point(forbidden: Sequence[Fraction]) -> Fraction:
    taken = set(forbidden)
    for c in _height_order():
        if c not in taken:
            return c
    raise AssertionError("unreachable")


def _form_1d(f: FactoredFunction1D, axis: int) -> LogForm:
    poles = [(complex(r), e) for r, e in f.factors]
    return LogForm.make(poles, ()) if axis == 0 else LogForm.make((), poles)


def _log_1d(f: FactoredFunction1D, z: complex) -> complex:
    """A logarithm of f(z); only its exponential matters."""
    out = log_rational(f.constant)
    for r, e in f.factors:
        out += e * cmath.log(z - complex(r))
    return out


def _route(
    q: complex,
    p: complex,
    axis: int,
    other: complex,
    avoid: list[tuple[int, complex]],
    detour: complex | None,
    clearance: float,
) -> PathWord:
    """Path on the line {w_other = other} from q to p, optionally looping once around ``detour``."""

    def at(z: complex) -> tuple[complex, complex]:
        return (z, other) if axis == 0 else (other, z)

    if q == p:
        return PathWord()
    main = straight_path(at(q), at(p), avoid, clearance)
    if detour is None:
        return main
    others = [abs(a - detour) for ax, a in avoid if ax == axis and a != detour] + [abs(q - detour), abs(p - detour)]
    rho = 0.25 * min(others)
    u = (q - detour) / abs(q - detour)
    touch = detour + rho * u
    leg = straight_path(at(q), at(touch), avoid, clearance)
    th = cmath.phase(u)
    loop = PathWord([CoordCircle(axis, detour, rho, 1, other, th)])
    return leg * loop * leg.inverse() * main


def _finite(p: P1Point, what: str) -> Fraction:
    if p.is_inf:
        raise NeedsNormalization(f"{what} is at infinity; normalize the instance first")
    return p.value


# ---------------------------------------------------------------- curves


def log_tate(
    inst: TateInstance,
    P: P1Point,
    Q: Number | None = None,
    detour: Number | None = None,
    clearance: float = DEFAULT_CLEARANCE,
) -> LogSymbolValue:
    a = _finite(P, "symbol point")
    roots = sorted({r for f in (inst.f1, inst.f2) for r, _ in f.factors})
    if Q is None:
        Q = default_base_point(roots + [a])
    m, n = order_at(inst.f1, P), order_at(inst.f2, P)
    g = [FactoredFunction1D(f.constant, tuple((r, e) for r, e in f.factors if r != a)) for f in (inst.f1, inst.f2)]
    avoid = [(0, complex(r)) for r in roots if r != a]
    q = complex(Q)
    path = _route(q, complex(a), 0, 0j, avoid, None if detour is None else complex(detour), clearance)
    I1, I2 = log_integrals([_form_1d(gk, 0) for gk in g], path, clearance)
    value = TWO_PI_I * (1j * math.pi * m * n + n * I1 - m * I2)
    qlog = n * _log_1d(g[0], q) - m * _log_1d(g[1], q)
    return LogSymbolValue(value, str(P), q, path.describe(), 0.0, value / TWO_PI_I + qlog, tate_symbol(inst, P))


def normalize_tate(inst: TateInstance) -> tuple[TateInstance, Fraction | None]:
    """Move a symbol at infinity to a finite point via t = 1/(x - c)."""
    if INF not in divisor_support([inst.f1, inst.f2]):
        return inst, None
    c = off_roots(r for f in (inst.f1, inst.f2) for r, _ in f.factors)
    return TateInstance(inst.f1.moebius(c), inst.f2.moebius(c)), c


# --------------------------------------------------------------- surfaces


@dataclass
class _Local:
    data: SymbolLocalData
    I: tuple[complex, complex, complex]
    logQ: tuple[complex, complex, complex]
    q: complex
    path: PathWord
    point: str


def _surface_local(
    inst: SurfaceInstance,
    point,
    Q: Number | None,
    detour: Number | None,
    clearance: float,
) -> _Local:
    C0 = inst.C0
    _finite(C0.position, "C0")
    ax = along_axis(C0)
    t = point[ax]
    a = _finite(t, "symbol point")
    d = local_data(inst, point, transverse_component(C0, t))
    roots = sorted({r for f in inst.functions for r, _ in f.part(ax).factors})
    if Q is None:
        Q = default_base_point(roots + [a])
    q = complex(Q)
    gs = [restricted_unit_part(f, C0, t) for f in inst.functions]
    avoid = [(ax, complex(r)) for r in roots if r != a]
    other = complex(C0.position.value)
    path = _route(q, complex(a), ax, other, avoid, None if detour is None else complex(detour), clearance)
    I = tuple(log_integrals([_form_1d(gk, ax) for gk in gs], path, clearance))
    gQ = tuple(_log_1d(gk, q) for gk in gs)
    label = f"({point[0]},{point[1]})"
    return _Local(d, I, gQ, q, path, label)  # type: ignore[arg-type]


def _value(loc: _Local, which: str) -> tuple[complex, complex]:
    """Log symbol value and the log of its Q-factor for the exp relation."""
    d = loc.data
    (m1, m2, m3), (n1, n2, n3) = d.m, d.n
    c = det_from_orders(d.m, d.n)
    I1, I2, I3 = loc.I
    G1, G2, G3 = loc.logQ
    tp2 = TWO_PI_I**2
    pi_i = 1j * math.pi
    if which == "parshin":
        v = tp2 * (pi_i * c.K + c.D1 * I1 + c.D2 * I2 + c.D3 * I3)
        qf = c.D1 * G1 + c.D2 * G2 + c.D3 * G3
    elif which == "refined":
        v = tp2 * (pi_i * (m2 * n1 * n3 - n2 * m1 * m3) + m2 * n3 * I1 - m2 * n1 * I3)
        qf = m2 * n3 * G1 - m2 * n1 * G3
    elif which == "new":
        e1, e3 = c.D1 + m2 * n3, c.D3 - m2 * n1
        v = 0.5 * TWO_PI_I**3 * ((m1 + n1) * c.D1 - (m3 + n3) * c.D3) + tp2 * (
            e1 * I1 + c.D2 * I2 + e3 * I3
        )
        qf = e1 * G1 + c.D2 * G2 + e3 * G3
    else:
        raise ValueError(f"unknown symbol kind {which!r}")
    return complex(v), complex(qf)


def _surface_symbol(inst, point, Q, detour, clearance, which) -> LogSymbolValue:
    loc = _surface_local(inst, point, Q, detour, clearance)
    v, qf = _value(loc, which)
    d = loc.data
    if which == "parshin":
        sym = parshin_symbol(d)
    elif which == "refined":
        sym = refined_symbol(d)
    else:
        sym = parshin_symbol(d) * refined_symbol(d)
    return LogSymbolValue(v, loc.point, loc.q, loc.path.describe(), 0.0, v / TWO_PI_I**2 + qf, sym)


def log_parshin(inst: SurfaceInstance, point, Q: Number | None = None, detour: Number | None = None, clearance: float = DEFAULT_CLEARANCE) -> LogSymbolValue:
    return _surface_symbol(inst, point, Q, detour, clearance, "parshin")


def log_refined(inst: SurfaceInstance, point, Q: Number | None = None, detour: Number | None = None, clearance: float = DEFAULT_CLEARANCE) -> LogSymbolValue:
    return _surface_symbol(inst, point, Q, detour, clearance, "refined")


def log_new_bracket(inst: SurfaceInstance, point, Q: Number | None = None, detour: Number | None = None, clearance: float = DEFAULT_CLEARANCE) -> LogSymbolValue:
    """Log of the new symbol; its exp relation reproduces parshin * refined."""
    return _surface_symbol(inst, point, Q, detour, clearance, "new")


LOG_SYMBOLS = {"parshin": log_parshin, "refined": log_refined, "new": log_new_bracket}


# ---------------------------------------------------------------- budgets


@dataclass
class ReciprocityBudget:
    M: int
    N: int = 0
    L: dict[str, int] = field(default_factory=dict)
    D: dict[str, tuple[int, int, int]] = field(default_factory=dict)
    n: dict[str, tuple[int, int, int]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "M": self.M,
            "N": self.N,
            "L": self.L,
            "D": {k: list(v) for k, v in self.D.items()},
            "n": {k: list(v) for k, v in self.n.items()},
        }


def reciprocity_budget(inst: TateInstance | SurfaceInstance, which: str) -> ReciprocityBudget:
    if which == "tate":
        if not isinstance(inst, TateInstance):
            raise TypeError("tate budget needs a TateInstance")
        M = 0
        for P in divisor_support([inst.f1, inst.f2]):
            M += order_at(inst.f1, P) * order_at(inst.f2, P)
        return ReciprocityBudget(M)
    if which not in ("refined", "new"):
        raise ValueError(f"no budget for {which!r}")
    if not isinstance(inst, SurfaceInstance):
        raise TypeError("surface budget needs a SurfaceInstance")
    comps = []
    for point, tr in intersection_points(inst):
        d = local_data(inst, point, tr)
        c = det_from_orders(d.m, d.n)
        comps.append((str(tr), d.n, c.D))
    # each transverse line meets C0 exactly once, so every L_j is 1
    L = {name: 1 for name, _, _ in comps}
    M = 0
    for j1 in range(len(comps)):
        for j2 in range(j1 + 1, len(comps)):
            n_j1, D_j2 = comps[j1][1], comps[j2][2]
            M += (n_j1[0] * D_j2[0] - n_j1[2] * D_j2[2]) * L[comps[j1][0]] * L[comps[j2][0]]
    twice = 0
    for name, n, D in comps:
        twice += (n[0] * D[0] - n[2] * D[2]) * L[name] * (L[name] - 1)
    M += twice // 2
    return ReciprocityBudget(M, 0, L, {k: D for k, _, D in comps}, {k: n for k, n, _ in comps})


@dataclass
class LatticeReport:
    kind: str
    rows: list[dict]
    total: complex
    scaled: complex
    M: int
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "points": self.rows,
            "sum": [self.total.real, self.total.imag],
            "scaled": [self.scaled.real, self.scaled.imag],
            "M": self.M,
            "N": 0,
            "lattice_residual": self.residual,
            "pass": self.passed,
        }


def _lattice_distance(z: complex) -> float:
    return abs(z - round(z.real))


def lattice_reciprocity_check(
    inst: TateInstance | SurfaceInstance,
    which: str,
    Q: Number | None = None,
    tol: float = 1e-6,
    clearance: float = DEFAULT_CLEARANCE,
) -> LatticeReport:
    """Sum a log symbol over all points and test membership in the lattice.

    The sum divided by (2 pi i)**d, minus the budget M (zero for the Parshin
    symbol), must lie within tol of an integer.
    """
    rows = []
    total = 0j
    if which == "tate":
        pts = divisor_support([inst.f1, inst.f2])
        roots = sorted({r for f in (inst.f1, inst.f2) for r, _ in f.factors})
        q = default_base_point(roots) if Q is None else Q
        vals = [log_tate(inst, P, q, clearance=clearance) for P in pts]
        d = 2
        M = reciprocity_budget(inst, "tate").M
    else:
        ax = along_axis(inst.C0)
        pts = [p for p, _ in intersection_points(inst)]
        roots = sorted({r for f in inst.functions for r, _ in f.part(ax).factors})
        q = default_base_point(roots) if Q is None else Q
        fn = LOG_SYMBOLS[which]
        vals = [fn(inst, p, q, clearance=clearance) for p in pts]
        d = 3
        M = 0 if which == "parshin" else reciprocity_budget(inst, which).M
    for v in vals:
        total += v.value
        rows.append(
            {
                "point": v.point,
                "log": [v.value.real, v.value.imag],
                "exp_residual": v.exp_residual,
            }
        )
    scaled = total / TWO_PI_I**d - M
    return LatticeReport(which, rows, total, scaled, M, _lattice_distance(scaled), tol)


# ------------------------------------------------------- torus alphabets


def factor_letters(inst: SurfaceInstance, point) -> tuple[Alphabet, int]:
    """One tagged letter per linear factor of each function.

    Factor index 0 is the line C0 itself, 1 the transverse line through the
    point and 2, 3, ... the remaining factors.  Returns the alphabet and
    the axis of the coordinate cutting out C0.
    """
    C0 = inst.C0
    ax = along_axis(C0)
    c0_root = _finite(C0.position, "C0")
    t_root = _finite(point[ax], "symbol point")
    extra: list[tuple[int, Fraction]] = []
    for f in inst.functions:
        for axis in (0, 1):
            for r, _ in f.part(axis).factors:
                key = (axis, r)
                if key in ((C0.axis, c0_root), (ax, t_root)) or key in extra:
                    continue
                extra.append(key)
    extra.sort()
    index = {(C0.axis, c0_root): 0, (ax, t_root): 1}
    for i, key in enumerate(extra):
        index[key] = i + 2
    letters = []
    for k, f in enumerate(inst.functions, start=1):
        for axis in (0, 1):
            for r, e in f.part(axis).factors:
                i = index[(axis, r)]
                poles = [(complex(r), e)]
                form = LogForm.make(poles, ()) if axis == 0 else LogForm.make((), poles)
                letters.append(Letter(f"A{k},{i}", form, (k, i)))
    letters.sort(key=lambda l: l.tag)
    return Alphabet(letters), C0.axis


def dlog_form(f: SurfaceFunction) -> LogForm:
    return LogForm.make(
        [(complex(r), e) for r, e in f.x.factors],
        [(complex(r), e) for r, e in f.y.factors],
    )


def other_poles(inst: SurfaceInstance, point) -> list[tuple[int, complex]]:
    """Poles of the df/f forms that do not pass through the point."""
    out = set()
    for f in inst.functions:
        for axis in (0, 1):
            for r, _ in f.part(axis).factors:
                if point[axis].is_inf or r != point[axis].value:
                    out.add((axis, complex(r)))
    return sorted(out, key=lambda p: (p[0], p[1].real, p[1].imag))
