"""Rational functions on P1 x P1 whose divisors are axis-parallel lines.

A function is ``c * X(x) * Y(y)`` with ``X`` and ``Y`` monic factored
functions of one variable.  Its divisor components are the vertical lines
``x = a`` (``V_a``) and horizontal lines ``y = b`` (``H_b``), including the
two lines at infinity.  For a curve ``C0`` the coherent coordinate is
``y - b`` on ``H_b`` (``1/y`` on ``H_inf``) and symmetrically for vertical
curves; the transverse coordinate at a point of ``C0`` is the other axis
shifted to that point, or its reciprocal at infinity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .rational import (
    FactoredFunction1D,
    P1Point,
    RatLike,
    as_rat,
    divisor_support,
    moebius_point,
    off_roots,
    order_at,
    unit_part_at,
)

VERTICAL = "vertical"
HORIZONTAL = "horizontal"


@dataclass(frozen=True)
class SurfaceComponent:
    orientation: str
    position: P1Point

    def __post_init__(self) -> None:
        if self.orientation not in (VERTICAL, HORIZONTAL):
            raise ValueError(f"bad orientation {self.orientation!r}")

    @property
    def axis(self) -> int:
        """Index of the coordinate that is constant along the line."""
        return 0 if self.orientation == VERTICAL else 1

    def __str__(self) -> str:
        return ("V" if self.orientation == VERTICAL else "H") + f"[{self.position}]"


def vline(a: RatLike | None) -> SurfaceComponent:
    from .rational import pt

    return SurfaceComponent(VERTICAL, pt(a))


def hline(b: RatLike | None) -> SurfaceComponent:
    from .rational import pt

    return SurfaceComponent(HORIZONTAL, pt(b))


@dataclass(frozen=True)
class SurfaceFunction:
    constant: Fraction
    x: FactoredFunction1D
    y: FactoredFunction1D

    @classmethod
    def make(
        cls,
        constant: RatLike = 1,
        xfactors: Iterable[tuple[RatLike, int]] = (),
        yfactors: Iterable[tuple[RatLike, int]] = (),
    ) -> "SurfaceFunction":
        return cls(
            as_rat(constant),
            FactoredFunction1D.make(1, xfactors),
            FactoredFunction1D.make(1, yfactors),
        )

    def __post_init__(self) -> None:
        if self.constant == 0:
            raise ValueError("constant of a surface function must be nonzero")
        if self.x.constant != 1 or self.y.constant != 1:
            raise ValueError("axis parts must be monic")

    def part(self, axis: int) -> FactoredFunction1D:
        return self.x if axis == 0 else self.y

    def __mul__(self, other: "SurfaceFunction") -> "SurfaceFunction":
        return SurfaceFunction(self.constant * other.constant, self.x * other.x, self.y * other.y)

    def __pow__(self, k: int) -> "SurfaceFunction":
        return SurfaceFunction(self.constant**k, self.x**k, self.y**k)

    def __call__(self, x: RatLike, y: RatLike) -> Fraction:
        return self.constant * self.x(x) * self.y(y)


@dataclass(frozen=True)
class SurfaceInstance:
    f1: SurfaceFunction
    f2: SurfaceFunction
    f3: SurfaceFunction
    C0: SurfaceComponent

    @property
    def functions(self) -> tuple[SurfaceFunction, SurfaceFunction, SurfaceFunction]:
        return (self.f1, self.f2, self.f3)

    def cycled(self, k: int = 1) -> "SurfaceInstance":
        fs = self.functions
        k %= 3
        g = fs[k:] + fs[:k]
        return SurfaceInstance(g[0], g[1], g[2], self.C0)


Point2 = tuple[P1Point, P1Point]


@dataclass(frozen=True)
class SymbolLocalData:
    point: Point2
    transverse: SurfaceComponent
    m: tuple[int, int, int]
    n: tuple[int, int, int]
    g: tuple[Fraction, Fraction, Fraction]


def order_along(f: SurfaceFunction, C: SurfaceComponent) -> int:
    # a vertical line x=a is cut out by the x-part, a horizontal one by the y-part
    return order_at(f.part(C.axis), C.position)


def _point_on(C0: SurfaceComponent, t: P1Point) -> Point2:
    """The point of C0 whose coordinate along C0 is t."""
    if C0.orientation == HORIZONTAL:
        return (t, C0.position)
    return (C0.position, t)


def transverse_component(C0: SurfaceComponent, t: P1Point) -> SurfaceComponent:
    return SurfaceComponent(VERTICAL if C0.orientation == HORIZONTAL else HORIZONTAL, t)


def along_axis(C0: SurfaceComponent) -> int:
    """Index of the coordinate that varies along C0."""
    return 1 - C0.axis


def intersection_points(inst: SurfaceInstance) -> list[tuple[Point2, SurfaceComponent]]:
    ax = along_axis(inst.C0)
    parts = [f.part(ax) for f in inst.functions]
    return [
        (_point_on(inst.C0, t), transverse_component(inst.C0, t)) for t in divisor_support(parts)
    ]


def local_data(inst: SurfaceInstance, point: Point2, transverse: SurfaceComponent) -> SymbolLocalData:
    C0 = inst.C0
    if point[C0.axis] != C0.position:
        raise ValueError(f"point {tuple(map(str, point))} is not on {C0}")
    ax = along_axis(C0)
    if transverse != transverse_component(C0, point[ax]):
        raise ValueError(f"{transverse} does not pass through the point transversally")
    m, n, g = [], [], []
    for f in inst.functions:
        m.append(order_along(f, C0))
        n.append(order_along(f, transverse))
        g.append(
            f.constant
            * unit_part_at(f.part(C0.axis), C0.position)
            * unit_part_at(f.part(ax), point[ax])
        )
    return SymbolLocalData(point, transverse, tuple(m), tuple(n), tuple(g))


def validate_normal_crossings(inst: SurfaceInstance) -> str:
    # distinct axis-parallel lines meet at most once and transversally
    return "ok"


def restricted_unit_part(f: SurfaceFunction, C0: SurfaceComponent, t: P1Point) -> FactoredFunction1D:
    """The unit part of f at the point t of C0, as a function along C0.

    The returned function of the coordinate along C0 equals
    ``f / (x0**m * xj**n)`` restricted to C0, with ``xj`` the transverse
    coordinate through t.  At the point itself its value is the ``g`` of
    :func:`local_data`.
    """
    ax = along_axis(C0)
    c = f.constant * unit_part_at(f.part(C0.axis), C0.position)
    part = f.part(ax)
    if t.is_inf:
        return FactoredFunction1D(c, part.factors)
    return FactoredFunction1D(c, tuple((r, e) for r, e in part.factors if r != t.value))


def _moebius_axis(f: SurfaceFunction, axis: int, c: Fraction) -> SurfaceFunction:
    """Rewrite f in the coordinate s = 1/(w - c) on the given axis."""
    new = f.part(axis).moebius(c)
    const = f.constant * new.constant
    new = FactoredFunction1D(Fraction(1), new.factors)
    if axis == 0:
        return SurfaceFunction(const, new, f.y)
    return SurfaceFunction(const, f.x, new)


@dataclass(frozen=True)
class Normalized:
    """An instance rewritten so every point used numerically is finite.

    ``shift[axis]`` is the constant c of the substitution s = 1/(w - c) on
    that axis, or None when the axis was left alone.
    """

    inst: SurfaceInstance
    shift: tuple[Fraction | None, Fraction | None]

    def map_point(self, p: Point2) -> Point2:
        out = list(p)
        for axis, c in enumerate(self.shift):
            if c is not None:
                out[axis] = moebius_point(p[axis], c)
        return (out[0], out[1])


def normalize(inst: SurfaceInstance) -> Normalized:
    """Move lines at infinity that carry symbols to finite positions."""
    C0 = inst.C0
    ax = along_axis(C0)
    shift: list[Fraction | None] = [None, None]
    fs = list(inst.functions)
    pos = C0.position
    if any(p[ax].is_inf for p, _ in intersection_points(inst)):
        c = off_roots(r for f in fs for r, _ in f.part(ax).factors)
        fs = [_moebius_axis(f, ax, c) for f in fs]
        shift[ax] = c
    if pos.is_inf:
        c = off_roots(r for f in fs for r, _ in f.part(C0.axis).factors)
        fs = [_moebius_axis(f, C0.axis, c) for f in fs]
        shift[C0.axis] = c
        pos = P1Point(Fraction(0))
    new = SurfaceInstance(fs[0], fs[1], fs[2], SurfaceComponent(C0.orientation, pos))
    return Normalized(new, (shift[0], shift[1]))


def random_surface_function(rng: random.Random, pool: list[int], max_x: int = 4, max_y: int = 3, max_exp: int = 4) -> SurfaceFunction:
    def factors(k: int) -> list[tuple[int, int]]:
        roots = rng.sample(pool, k)
        return [(r, rng.choice([e for e in range(-max_exp, max_exp + 1) if e])) for r in sorted(roots)]

    c = Fraction(rng.choice([1, -1]) * rng.randint(1, 9), rng.randint(1, 9))
    return SurfaceFunction.make(c, factors(rng.randint(0, max_x)), factors(rng.randint(0, max_y)))


def random_surface_instance(seed: int, max_x: int = 4, max_y: int = 3, max_exp: int = 4) -> SurfaceInstance:
    """Seeded random instance; C0 is usually one of the divisor components."""
    rng = random.Random(f"surface:{seed}")
    pool = list(range(-5, 6))
    fs = [random_surface_function(rng, pool, max_x, max_y, max_exp) for _ in range(3)]
    comps = []
    for axis, orient in ((0, VERTICAL), (1, HORIZONTAL)):
        for p in divisor_support([f.part(axis) for f in fs]):
            comps.append(SurfaceComponent(orient, p))
    if comps and rng.random() < 0.85:
        C0 = rng.choice(comps)
    else:
        C0 = SurfaceComponent(rng.choice([VERTICAL, HORIZONTAL]), P1Point(Fraction(rng.choice(pool))))
    return SurfaceInstance(fs[0], fs[1], fs[2], C0)
