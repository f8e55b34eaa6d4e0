"""Tate symbols on the projective line and the Weil product check."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .rational import FactoredFunction1D, P1Point, divisor_support, fmt_rat, order_at, unit_part_at


@dataclass(frozen=True)
class TateInstance:
    f1: FactoredFunction1D
    f2: FactoredFunction1D


def tate_symbol(inst: TateInstance, P: P1Point) -> Fraction:
    n1 = order_at(inst.f1, P)
    n2 = order_at(inst.f2, P)
    g1 = unit_part_at(inst.f1, P)
    g2 = unit_part_at(inst.f2, P)
    sign = -1 if (n1 * n2) % 2 else 1
    return sign * g1**n2 / g2**n1


@dataclass
class WeilReport:
    rows: list[dict] = field(default_factory=list)
    product: Fraction = Fraction(1)

    @property
    def passed(self) -> bool:
        return self.product == 1

    def to_dict(self) -> dict:
        return {
            "points": self.rows,
            "product": fmt_rat(self.product),
            "pass": self.passed,
        }


def weil_verify(inst: TateInstance) -> WeilReport:
    rep = WeilReport()
    for P in divisor_support([inst.f1, inst.f2]):
        s = tate_symbol(inst, P)
        rep.rows.append(
            {
                "point": str(P),
                "n1": order_at(inst.f1, P),
                "n2": order_at(inst.f2, P),
                "symbol": fmt_rat(s),
            }
        )
        rep.product *= s
    return rep


def _random_rat(rng: random.Random, bound: int) -> Fraction:
    den = rng.choice([1, 1, 1, 2, 3, 4, 5])
    return Fraction(rng.randint(-bound * den, bound * den), den)


def random_function_1d(
    rng: random.Random, max_roots: int = 6, max_exp: int = 5, max_root: int = 20
) -> FactoredFunction1D:
    k = rng.randint(0, max_roots)
    roots: set[Fraction] = set()
    while len(roots) < k:
        roots.add(_random_rat(rng, max_root))
    factors = []
    for r in sorted(roots):
        e = 0
        while e == 0:
            e = rng.randint(-max_exp, max_exp)
        factors.append((r, e))
    c = Fraction(0)
    while c == 0:
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
    return FactoredFunction1D.make(c, factors)


def random_tate_instance(
    seed: int, max_roots: int = 6, max_exp: int = 5, max_root: int = 20
) -> TateInstance:
    """Deterministic random pair of functions for a given seed.

    Roots are drawn from a small pool with denominators up to 5, so distinct
    functions share roots often enough to exercise nontrivial symbols.
    """
    rng = random.Random(f"tate:{seed}")
    f1 = random_function_1d(rng, max_roots, max_exp, max_root)
    f2 = random_function_1d(rng, max_roots, max_exp, max_root)
    return TateInstance(f1, f2)
