"""Multiplicative Parshin and refined symbols with exact reciprocity checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .rational import P1Point, RatLike, as_rat, fmt_rat
from .surface import (
    SurfaceComponent,
    SurfaceFunction,
    SurfaceInstance,
    SymbolLocalData,
    hline,
    intersection_points,
    local_data,
)


@dataclass(frozen=True)
class DetConstants:
    D1: int
    D2: int
    D3: int
    K: int

    @property
    def D(self) -> tuple[int, int, int]:
        return (self.D1, self.D2, self.D3)


def det_from_orders(m: tuple[int, int, int], n: tuple[int, int, int]) -> DetConstants:
    m1, m2, m3 = m
    n1, n2, n3 = n
    D1 = m2 * n3 - m3 * n2
    D2 = m3 * n1 - m1 * n3
    D3 = m1 * n2 - m2 * n1
    K = n1 * n2 * m3 + n2 * n3 * m1 + n3 * n1 * m2 - m1 * m2 * n3 - m2 * m3 * n1 - m3 * m1 * n2
    return DetConstants(D1, D2, D3, K)


def det_constants(d: SymbolLocalData) -> DetConstants:
    return det_from_orders(d.m, d.n)


def _sign(e: int) -> int:
    return -1 if e % 2 else 1


def parshin_symbol(d: SymbolLocalData) -> Fraction:
    c = det_constants(d)
    g1, g2, g3 = d.g
    return _sign(c.K) * g1**c.D1 * g2**c.D2 * g3**c.D3


def refined_symbol(d: SymbolLocalData) -> Fraction:
    (m1, m2, m3), (n1, n2, n3) = d.m, d.n
    g1, _, g3 = d.g
    return _sign(n1 * n3 * m2 - m1 * m3 * n2) * (g1**n3 / g3**n1) ** m2


def _local_row(d: SymbolLocalData) -> dict:
    c = det_constants(d)
    return {
        "point": [str(d.point[0]), str(d.point[1])],
        "transverse": str(d.transverse),
        "m": list(d.m),
        "n": list(d.n),
        "g": [fmt_rat(x) for x in d.g],
        "D": list(c.D),
        "K": c.K,
        "parshin": fmt_rat(parshin_symbol(d)),
        "refined": fmt_rat(refined_symbol(d)),
    }


def _trivial(d: SymbolLocalData) -> bool:
    return not any(d.m) and not any(d.n)


@dataclass
class CyclicReport:
    parshin: Fraction
    refined: tuple[Fraction, Fraction, Fraction]

    @property
    def passed(self) -> bool:
        r = self.refined
        return self.parshin == r[0] * r[1] * r[2]


def cyclic_identity_check(inst: SurfaceInstance, point, transverse: SurfaceComponent) -> CyclicReport:
    d = local_data(inst, point, transverse)
    refined = tuple(refined_symbol(local_data(inst.cycled(k), point, transverse)) for k in range(3))
    return CyclicReport(parshin_symbol(d), refined)  # type: ignore[arg-type]


@dataclass
class ReciprocityReport:
    kind: str
    rows: list[dict] = field(default_factory=list)
    product: Fraction = Fraction(1)
    cyclic_ok: bool = True

    @property
    def passed(self) -> bool:
        return self.product == 1 and self.cyclic_ok

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "points": self.rows,
            "product": fmt_rat(self.product),
            "cyclic_ok": self.cyclic_ok,
            "pass": self.passed,
        }


def _verify(inst: SurfaceInstance, kind: str) -> ReciprocityReport:
    rep = ReciprocityReport(kind)
    symbol = parshin_symbol if kind == "parshin" else refined_symbol
    for point, trans in intersection_points(inst):
        d = local_data(inst, point, trans)
        if _trivial(d):
            continue
        rep.rows.append(_local_row(d))
        rep.product *= symbol(d)
        if not cyclic_identity_check(inst, point, trans).passed:
            rep.cyclic_ok = False
    return rep


def parshin_reciprocity_verify(inst: SurfaceInstance) -> ReciprocityReport:
    return _verify(inst, "parshin")


def refined_reciprocity_verify(inst: SurfaceInstance) -> ReciprocityReport:
    return _verify(inst, "refined")


Exponents = tuple[int, int, int, int]


def three_point_closed_form(
    a: RatLike, b: RatLike, c: RatLike, exponents: tuple[Exponents, Exponents, Exponents]
) -> tuple[Fraction, Fraction, Fraction]:
    """Closed-form refined symbols at (a,0), (b,0), (c,0).

    The n-th function is (x-a)^i (x-b)^j (x-c)^k y^l with i+j+k = 0, and C0
    is the line y = 0.  The value at a point picks the exponents of the
    factor vanishing there and the ratios of the other two roots.
    """
    a, b, c = as_rat(a), as_rat(b), as_rat(c)
    if len({a, b, c}) != 3:
        raise ValueError("a, b, c must be distinct")
    for e in exponents:
        if len(e) != 4:
            raise ValueError("each function needs four exponents (i, j, k, l)")
        if e[0] + e[1] + e[2] != 0:
            raise ValueError(f"exponents {e} violate i + j + k = 0")
    (i1, j1, k1, l1), (i2, j2, k2, l2), (i3, j3, k3, l3) = exponents

    def at(p, q, r, e1, e2, e3, f1, f3):
        # point p; (e1, e2, e3) are the exponents of (x-p); f1, f3 the exponents of (x-r) in f1, f3
        sign = _sign(e1 * e3 * l2 - l1 * l3 * e2)
        return sign * ((p - q) / (p - r)) ** (l2 * (e1 * f3 - f1 * e3))

    Pa = at(a, b, c, i1, i2, i3, k1, k3)
    Pb = at(b, c, a, j1, j2, j3, i1, i3)
    Pc = at(c, a, b, k1, k2, k3, j1, j3)
    return (Pa, Pb, Pc)


def three_point_instance(
    a: RatLike, b: RatLike, c: RatLike, exponents: tuple[Exponents, Exponents, Exponents]
) -> SurfaceInstance:
    fs = []
    for i, j, k, l in exponents:
        fs.append(SurfaceFunction.make(1, [(a, i), (b, j), (c, k)], [(0, l)]))
    return SurfaceInstance(fs[0], fs[1], fs[2], hline(0))


def three_point_refined(inst: SurfaceInstance, a: RatLike, b: RatLike, c: RatLike) -> tuple[Fraction, Fraction, Fraction]:
    """Refined symbols of a three-point instance at (a,0), (b,0), (c,0)."""
    out = []
    for t in (a, b, c):
        p = P1Point(as_rat(t))
        point = (p, hline(0).position)
        out.append(refined_symbol(local_data(inst, point, SurfaceComponent("vertical", p))))
    return (out[0], out[1], out[2])
